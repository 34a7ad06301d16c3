//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid arguments or input,
//! 3 degenerate state or normalization, 4 numeric and closed-form curves
//! disagree beyond the scenario tolerance.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::grid::{DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use crate::io::{curve_csv_string, format_decimal, parse_amplitude_file};
use crate::scenarios::{CurveSpec, Mode, Scenario};
use crate::schmidt::{schmidt_analysis, DEFAULT_ENTANGLEMENT_TOL};
use crate::splitter::coincidence_probability_formula;
use crate::state::BETA_MIN;
use crate::symmetry::{classify_symmetry, DEFAULT_SYMMETRY_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Two-photon interference at a lossless beam splitter"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coincidence dip of a down-converted pair versus path difference.
    Dip {
        #[command(flatten)]
        curve: CurveArgs,
        /// Pump/photon bandwidth ratio; `inf` for independent photons.
        #[arg(long, default_value_t = f64::INFINITY)]
        beta: f64,
    },
    /// Photon 1 through an unbalanced Mach-Zehnder before the splitter.
    Mz {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = BETA_MIN)]
        beta: f64,
        /// Half arm-length difference in units of c/sigma.
        #[arg(long = "delta-l", default_value_t = 5.0, allow_negative_numbers = true)]
        delta_l: f64,
        /// Carrier phase of the arm difference, radians.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Independent photons with a wave plate phase on path-1 V.
    PolProduct {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Polarization-entangled pair HV + e^{i alpha} VH.
    PolEntangled {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = f64::INFINITY)]
        beta: f64,
    },
    /// Exchange symmetry, Schmidt number and predicted coincidence
    /// probability of an amplitude file.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SYMMETRY_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schmidt coefficients of an amplitude file.
    Schmidt {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENTANGLEMENT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Numeric,
    Analytic,
    Both,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Numeric => Mode::Numeric,
            ModeArg::Analytic => Mode::Analytic,
            ModeArg::Both => Mode::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Smallest path difference, units of c/sigma.
    #[arg(long = "dz-min", default_value_t = -8.0, allow_negative_numbers = true)]
    pub dz_min: f64,
    #[arg(long = "dz-max", default_value_t = 8.0, allow_negative_numbers = true)]
    pub dz_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Detuning grid points per photon.
    #[arg(long = "grid-n", default_value_t = DEFAULT_POINTS)]
    pub grid_n: usize,
    /// Detuning grid half-width, units of sigma.
    #[arg(long = "half-width", default_value_t = DEFAULT_HALF_WIDTH)]
    pub half_width: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CurveArgs {
    fn spec(&self) -> CurveSpec {
        CurveSpec {
            dz_min: self.dz_min,
            dz_max: self.dz_max,
            n_steps: self.steps,
            mode: self.mode.into(),
            half_width: self.half_width,
            grid_points: self.grid_n,
        }
    }
}

/// Runs the configured command and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 1,
        Error::InvalidArgument(_)
        | Error::UnsupportedParameter(_)
        | Error::IncompatibleGrids
        | Error::Parse { .. } => 2,
        Error::DegenerateState(_) | Error::DegenerateNormalization(_) => 3,
        Error::ToleranceExceeded { .. } => 4,
    }
}

pub fn execute(config: &RunConfig) -> Result<()> {
    match &config.command {
        Command::Dip { curve, beta } => run_curve(Scenario::HomDip { beta: *beta }, curve),
        Command::Mz {
            curve,
            beta,
            delta_l,
            alpha,
        } => run_curve(
            Scenario::Interferometer {
                beta: *beta,
                delta_l: *delta_l,
                alpha: *alpha,
            },
            curve,
        ),
        Command::PolProduct { curve, alpha } => {
            run_curve(Scenario::PolProduct { alpha: *alpha }, curve)
        }
        Command::PolEntangled { curve, alpha, beta } => run_curve(
            Scenario::PolEntangled {
                alpha: *alpha,
                beta: *beta,
            },
            curve,
        ),
        Command::Classify { input, tol, out } => {
            let report = classify_report(&std::fs::read_to_string(input)?, *tol)?;
            write_output(out.as_ref(), &report)
        }
        Command::Schmidt { input, tol, out } => {
            let report = schmidt_report(&std::fs::read_to_string(input)?, *tol)?;
            write_output(out.as_ref(), &report)
        }
    }
}

fn run_curve(scenario: Scenario, args: &CurveArgs) -> Result<()> {
    if let Scenario::Interferometer { beta, .. }
    | Scenario::HomDip { beta }
    | Scenario::PolEntangled { beta, .. } = scenario
    {
        if !(beta == f64::INFINITY || beta >= BETA_MIN) {
            return Err(Error::UnsupportedParameter(format!(
                "beta must be >= {BETA_MIN} or inf, got {beta}"
            )));
        }
    }
    let points = scenario.curve(&args.spec())?;
    write_output(args.out.as_ref(), &curve_csv_string(&points)?)?;
    let tol = scenario.tolerance();
    for p in &points {
        if let (Some(numeric), Some(analytic)) = (p.pc_numeric, p.pc_analytic) {
            if (numeric - analytic).abs() > tol {
                return Err(Error::ToleranceExceeded {
                    dz: p.dz,
                    numeric,
                    analytic,
                    tol,
                });
            }
        }
    }
    Ok(())
}

/// One-line summary: exchange symmetry, Schmidt number and the 50/50
/// coincidence probability.
pub fn classify_report(text: &str, tol: f64) -> Result<String> {
    let state = parse_amplitude_file(text)?;
    let symmetry = classify_symmetry(&state, tol);
    let schmidt = schmidt_analysis(&state, DEFAULT_ENTANGLEMENT_TOL)?;
    let pc = coincidence_probability_formula(&state);
    Ok(format!(
        "symmetry={symmetry}, K={:.6}, predicted P_c={:.6}\n",
        schmidt.schmidt_number, pc
    ))
}

/// Schmidt coefficients as CSV, preceded by a `#` summary line. Coefficients
/// below `1e-15` of the largest are omitted.
pub fn schmidt_report(text: &str, tol: f64) -> Result<String> {
    let state = parse_amplitude_file(text)?;
    let report = schmidt_analysis(&state, tol)?;
    let mut out = format!(
        "# K={:.6}, entangled={}\nindex,singular_value,weight\n",
        report.schmidt_number, report.entangled
    );
    let largest = report.singular_values.first().copied().unwrap_or(0.0);
    for (k, (s, p)) in report
        .singular_values
        .iter()
        .zip(report.weights())
        .enumerate()
    {
        if *s <= 1e-15 * largest {
            break;
        }
        out.push_str(&format!(
            "{k},{},{}\n",
            format_decimal(*s),
            format_decimal(p)
        ));
    }
    Ok(out)
}

fn write_output(path: Option<&PathBuf>, contents: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
