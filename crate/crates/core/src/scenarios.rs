//! The four standard two-photon interference experiments, each evaluated
//! numerically through the full splitter pipeline and by its closed form.
//!
//! Path lengths are in units of `c / sigma` and detunings in units of
//! `sigma`. A path difference `dz = z2 - z1` is applied as
//! `(z1, z2) = (-dz/2, +dz/2)`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use crate::splitter::{coincidence_probability, transform, BeamSplitterParams};
use crate::state::{
    apply_interferometer, apply_path_phase, build_spdc_spectrum, product_state, spdc_amplitude,
    PolarizationChannel, SinglePhotonWavepacket, TwoPhotonState,
};

/// Numeric/closed-form agreement required of the dip curve.
pub const HOM_DIP_TOL: f64 = 1e-3;
/// Interferometer agreement for bandwidth ratios resolved by the grid.
pub const INTERFEROMETER_TOL: f64 = 1e-3;
/// Interferometer agreement when `beta` stands in for perfect phase matching.
pub const INTERFEROMETER_DELTA_LIMIT_TOL: f64 = 2e-2;
/// Bandwidth ratios below this are treated as the perfect phase-matching stand-in.
pub const RESOLVED_BETA: f64 = 0.2;
pub const POL_PRODUCT_TOL: f64 = 1e-6;
pub const POL_ENTANGLED_TOL: f64 = 1e-3;

/// Below this the interferometer normalization is treated as vanishing.
const MIN_NORMALIZATION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Numeric,
    Analytic,
    Both,
}

impl Mode {
    fn numeric(self) -> bool {
        matches!(self, Mode::Numeric | Mode::Both)
    }

    fn analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }
}

/// Path-difference sweep and the grid used for the numeric path.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub dz_min: f64,
    pub dz_max: f64,
    pub n_steps: usize,
    pub mode: Mode,
    pub half_width: f64,
    pub grid_points: usize,
}

impl CurveSpec {
    pub fn new(dz_min: f64, dz_max: f64, n_steps: usize) -> Self {
        Self {
            dz_min,
            dz_max,
            n_steps,
            mode: Mode::Both,
            half_width: DEFAULT_HALF_WIDTH,
            grid_points: DEFAULT_POINTS,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dz_min.is_finite() && self.dz_max.is_finite() && self.dz_min < self.dz_max) {
            return Err(Error::InvalidArgument(format!(
                "need dz_min < dz_max, got [{}, {}]",
                self.dz_min, self.dz_max
            )));
        }
        if self.n_steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 steps, got {}",
                self.n_steps
            )));
        }
        Ok(())
    }

    /// Evenly spaced path differences; mirrored ranges give exactly mirrored values.
    pub fn dz_values(&self) -> Vec<f64> {
        let last = (self.n_steps - 1) as f64;
        (0..self.n_steps)
            .map(|k| {
                let t = k as f64;
                (self.dz_min * (last - t) + self.dz_max * t) / last
            })
            .collect()
    }

    pub fn grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::new(self.half_width, self.grid_points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub dz: f64,
    pub pc_numeric: Option<f64>,
    pub pc_analytic: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Down-converted pair with a path difference.
    HomDip { beta: f64 },
    /// Photon 1 through an unbalanced interferometer of half-difference
    /// `delta_l` and carrier phase `alpha`.
    Interferometer { beta: f64, delta_l: f64, alpha: f64 },
    /// Two independent photons polarized along (H + V), with a wave plate
    /// adding `alpha` to V in path 1.
    PolProduct { alpha: f64 },
    /// Polarization-entangled pair `HV + e^{i alpha} VH`.
    PolEntangled { alpha: f64, beta: f64 },
}

impl Scenario {
    /// Balanced-path state, before the path difference is applied.
    pub fn base_state(&self, grid: &FrequencyGrid) -> Result<TwoPhotonState> {
        match *self {
            Scenario::HomDip { beta } => build_spdc_spectrum(grid, beta),
            Scenario::Interferometer {
                beta,
                delta_l,
                alpha,
            } => apply_interferometer(&build_spdc_spectrum(grid, beta)?, delta_l, alpha),
            Scenario::PolProduct { alpha } => {
                let one = C64::new(1.0, 0.0);
                let wp1 = SinglePhotonWavepacket::gaussian(
                    grid,
                    0.0,
                    1.0,
                    0.0,
                    one,
                    C64::from_polar(1.0, alpha),
                )?;
                let wp2 = SinglePhotonWavepacket::gaussian(grid, 0.0, 1.0, 0.0, one, one)?;
                product_state(&wp1, &wp2)
            }
            Scenario::PolEntangled { alpha, beta } => {
                let q = spdc_amplitude(grid, beta)?;
                let phase = C64::from_polar(1.0, alpha);
                let vh =
                    crate::state::JointAmplitude::from_matrix_unchecked(grid, q.matrix() * phase);
                TwoPhotonState::new(
                    grid,
                    [(PolarizationChannel::HV, q), (PolarizationChannel::VH, vh)],
                )?
                .normalized()
            }
        }
    }

    /// State arriving at the splitter for path difference `dz`.
    pub fn input_state(&self, grid: &FrequencyGrid, dz: f64) -> Result<TwoPhotonState> {
        Ok(with_path_difference(&self.base_state(grid)?, dz))
    }

    pub fn closed_form(&self, dz: f64) -> Result<f64> {
        match *self {
            Scenario::HomDip { .. } => Ok(hom_dip_closed_form(dz)),
            Scenario::Interferometer {
                beta,
                delta_l,
                alpha,
            } => interferometer_closed_form(dz, delta_l, alpha, beta),
            Scenario::PolProduct { alpha } => Ok(pol_product_closed_form(dz, alpha)),
            Scenario::PolEntangled { alpha, .. } => Ok(pol_entangled_closed_form(dz, alpha)),
        }
    }

    /// Expected agreement between the numeric and closed-form curves.
    pub fn tolerance(&self) -> f64 {
        match *self {
            Scenario::HomDip { .. } => HOM_DIP_TOL,
            Scenario::Interferometer { beta, .. } if beta < RESOLVED_BETA => {
                INTERFEROMETER_DELTA_LIMIT_TOL
            }
            Scenario::Interferometer { .. } => INTERFEROMETER_TOL,
            Scenario::PolProduct { .. } => POL_PRODUCT_TOL,
            Scenario::PolEntangled { .. } => POL_ENTANGLED_TOL,
        }
    }

    /// Evaluates the sweep described by `spec`.
    pub fn curve(&self, spec: &CurveSpec) -> Result<Vec<CurvePoint>> {
        spec.validate()?;
        let grid = if spec.mode.numeric() {
            Some(spec.grid()?)
        } else {
            None
        };
        self.points(&spec.dz_values(), spec.mode, grid.as_ref())
    }

    /// Evaluates arbitrary path differences, in the given order. Points are
    /// independent and computed in parallel. `grid` is required whenever
    /// `mode` includes the numeric path.
    pub fn points(
        &self,
        dz: &[f64],
        mode: Mode,
        grid: Option<&FrequencyGrid>,
    ) -> Result<Vec<CurvePoint>> {
        let numeric = if mode.numeric() {
            let grid = grid.ok_or_else(|| {
                Error::InvalidArgument("numeric evaluation needs a frequency grid".into())
            })?;
            let base = self.base_state(grid)?;
            let splitter = BeamSplitterParams::balanced();
            let values: Vec<f64> = dz
                .par_iter()
                .map(|&d| {
                    coincidence_probability(&transform(&with_path_difference(&base, d), &splitter))
                })
                .collect();
            Some(values)
        } else {
            None
        };
        let analytic = if mode.analytic() {
            Some(
                dz.iter()
                    .map(|&d| self.closed_form(d))
                    .collect::<Result<Vec<f64>>>()?,
            )
        } else {
            None
        };
        Ok(dz
            .iter()
            .enumerate()
            .map(|(k, &d)| CurvePoint {
                dz: d,
                pc_numeric: numeric.as_ref().map(|v| v[k]),
                pc_analytic: analytic.as_ref().map(|v| v[k]),
            })
            .collect())
    }
}

fn with_path_difference(state: &TwoPhotonState, dz: f64) -> TwoPhotonState {
    apply_path_phase(state, -0.5 * dz, 0.5 * dz)
}

pub fn hom_dip_curve(spec: &CurveSpec, beta: f64) -> Result<Vec<CurvePoint>> {
    Scenario::HomDip { beta }.curve(spec)
}

pub fn interferometer_curve(
    spec: &CurveSpec,
    beta: f64,
    delta_l: f64,
    alpha: f64,
) -> Result<Vec<CurvePoint>> {
    Scenario::Interferometer {
        beta,
        delta_l,
        alpha,
    }
    .curve(spec)
}

pub fn pol_product_curve(spec: &CurveSpec, alpha: f64) -> Result<Vec<CurvePoint>> {
    Scenario::PolProduct { alpha }.curve(spec)
}

pub fn pol_entangled_curve(spec: &CurveSpec, alpha: f64, beta: f64) -> Result<Vec<CurvePoint>> {
    Scenario::PolEntangled { alpha, beta }.curve(spec)
}

/// `1/2 (1 - exp(-dz^2 / 2))`, independent of the pump profile.
pub fn hom_dip_closed_form(dz: f64) -> f64 {
    0.5 * (1.0 - (-0.5 * dz * dz).exp())
}

/// Coincidence probability behind the unbalanced interferometer with a
/// Gaussian pump of relative width `beta` (`0` and `f64::INFINITY` allowed).
///
/// With `L = delta_l`,
/// `P = 1/2 {1 - 1/(2B) [cos 2a e^{-(b^2/(2+b^2) L^2 + dz^2)/2}
///        + e^{-(L+dz)^2/2}/2 + e^{-(L-dz)^2/2}/2]}`
/// and `B = 1/2 [1 + cos 2a e^{-(1+b^2)/(2+b^2) L^2}]`.
pub fn interferometer_closed_form(dz: f64, delta_l: f64, alpha: f64, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::UnsupportedParameter(format!(
            "beta must be non-negative, got {beta}"
        )));
    }
    let (pump_ratio, norm_ratio) = if beta.is_infinite() {
        (1.0, 1.0)
    } else {
        let b2 = beta * beta;
        (b2 / (2.0 + b2), (1.0 + b2) / (2.0 + b2))
    };
    let l2 = delta_l * delta_l;
    let cos2a = (2.0 * alpha).cos();
    let normalization = 0.5 * (1.0 + cos2a * (-norm_ratio * l2).exp());
    if normalization < MIN_NORMALIZATION {
        return Err(Error::DegenerateNormalization(format!(
            "interferometer normalization {normalization:e} vanishes (delta_l = {delta_l}, alpha = {alpha})"
        )));
    }
    let bracket = cos2a * (-0.5 * (pump_ratio * l2 + dz * dz)).exp()
        + 0.5 * (-0.5 * (delta_l + dz).powi(2)).exp()
        + 0.5 * (-0.5 * (delta_l - dz).powi(2)).exp();
    Ok(0.5 * (1.0 - bracket / (2.0 * normalization)))
}

/// `1/2 [1 - (1 + cos a)/2 e^{-dz^2/2}]` for independent photons.
pub fn pol_product_closed_form(dz: f64, alpha: f64) -> f64 {
    0.5 * (1.0 - 0.5 * (1.0 + alpha.cos()) * (-0.5 * dz * dz).exp())
}

/// `1/2 (1 - cos a e^{-dz^2/2})` for the polarization-entangled pair.
pub fn pol_entangled_closed_form(dz: f64, alpha: f64) -> f64 {
    0.5 * (1.0 - alpha.cos() * (-0.5 * dz * dz).exp())
}

/// Carrier phase for which the balanced interferometer output is
/// exchange-antisymmetric in the phase-matched limit.
pub const ANTISYMMETRIC_ALPHA: f64 = FRAC_PI_2;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small() -> CurveSpec {
        CurveSpec {
            half_width: 6.0,
            grid_points: 129,
            ..CurveSpec::new(-3.0, 3.0, 7)
        }
    }

    #[test]
    fn dz_values_are_mirrored() {
        let spec = CurveSpec::new(-5.0, 5.0, 101);
        let v = spec.dz_values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[50], 0.0);
        assert_eq!(v[0], -5.0);
        assert_eq!(v[100], 5.0);
        for k in 0..101 {
            assert_eq!(v[k], -v[100 - k]);
        }
    }

    #[test]
    fn spec_validation() {
        assert!(CurveSpec::new(1.0, 1.0, 5).validate().is_err());
        assert!(CurveSpec::new(-1.0, 1.0, 1).validate().is_err());
        assert!(CurveSpec::new(-1.0, 1.0, 2).validate().is_ok());
    }

    #[test]
    fn dip_closed_form_values() {
        assert_eq!(hom_dip_closed_form(0.0), 0.0);
        assert!((hom_dip_closed_form(2.0) - 0.432_332_358_381_693_6).abs() < 1e-15);
        assert!((hom_dip_closed_form(5.0) - 0.5).abs() < 1e-3);
    }

    #[test]
    fn interferometer_closed_form_extremes() {
        // Perfect anti-coalescence and coalescence at balance in the phase-matched limit.
        let aci = interferometer_closed_form(0.0, 5.0, FRAC_PI_2, 0.0).unwrap();
        assert!((aci - 1.0).abs() < 1e-5);
        let ci = interferometer_closed_form(0.0, 5.0, 0.0, 0.0).unwrap();
        assert!(ci.abs() < 1e-5);
        // Independent photons: no interference at balance for long delays.
        let far = interferometer_closed_form(0.0, 5.0, FRAC_PI_2, f64::INFINITY).unwrap();
        assert!((far - 0.5).abs() < 1e-4);
        // Finite but huge beta approaches the infinite limit.
        let big = interferometer_closed_form(0.7, 1.0, 0.3, 1e6).unwrap();
        let inf = interferometer_closed_form(0.7, 1.0, 0.3, f64::INFINITY).unwrap();
        assert!((big - inf).abs() < 1e-9);
    }

    #[test]
    fn interferometer_closed_form_degenerate() {
        assert!(matches!(
            interferometer_closed_form(0.0, 0.0, FRAC_PI_2, 1.0),
            Err(Error::DegenerateNormalization(_))
        ));
        assert!(interferometer_closed_form(0.0, 1.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn pol_closed_forms() {
        assert_eq!(pol_product_closed_form(0.0, 0.0), 0.0);
        assert!((pol_product_closed_form(0.0, FRAC_PI_2) - 0.25).abs() < 1e-15);
        for dz in [-2.0, 0.0, 1.3] {
            assert!((pol_product_closed_form(dz, PI) - 0.5).abs() < 1e-15);
            assert!((pol_entangled_closed_form(dz, FRAC_PI_2) - 0.5).abs() < 1e-15);
        }
        assert_eq!(pol_entangled_closed_form(0.0, 0.0), 0.0);
        assert!((pol_entangled_closed_form(0.0, PI) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn analytic_mode_skips_numeric() {
        let pts = pol_product_curve(&small().with_mode(Mode::Analytic), 0.3).unwrap();
        assert!(pts
            .iter()
            .all(|p| p.pc_numeric.is_none() && p.pc_analytic.is_some()));
        let pts = pol_product_curve(&small().with_mode(Mode::Numeric), 0.3).unwrap();
        assert!(pts
            .iter()
            .all(|p| p.pc_numeric.is_some() && p.pc_analytic.is_none()));
    }

    #[test]
    fn pol_product_numeric_matches() {
        let pts = pol_product_curve(&small(), FRAC_PI_2).unwrap();
        for p in pts {
            assert!((p.pc_numeric.unwrap() - p.pc_analytic.unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn dip_numeric_matches() {
        let pts = hom_dip_curve(&small(), 0.5).unwrap();
        for p in &pts {
            assert!((p.pc_numeric.unwrap() - p.pc_analytic.unwrap()).abs() < HOM_DIP_TOL);
        }
        assert!(pts[3].pc_numeric.unwrap().abs() < 1e-12);
    }

    #[test]
    fn interferometer_symmetry_depends_on_phase_matching() {
        use crate::symmetry::exchange_decompose;
        let grid = FrequencyGrid::new(6.0, 257).unwrap();
        let anti_fraction = |beta: f64| {
            let s = Scenario::Interferometer {
                beta,
                delta_l: 5.0,
                alpha: ANTISYMMETRIC_ALPHA,
            }
            .input_state(&grid, 0.0)
            .unwrap();
            exchange_decompose(&s).1.norm_sqr() / s.norm_sqr()
        };
        // Near-delta pump: the spectrum is antisymmetric up to the width of g.
        assert!(anti_fraction(0.02) > 0.999);
        // Independent photons: no definite symmetry.
        let free = anti_fraction(f64::INFINITY);
        assert!((free - 0.5).abs() < 0.01, "{free}");
    }
}
