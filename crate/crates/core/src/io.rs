//! Text formats: amplitude files in, curve CSV out.
//!
//! Amplitude files list the non-zero entries of a state:
//!
//! ```text
//! grid: 6 257
//! HV 128 128 0.5 0
//! VH 128 128 -0.5 0
//! ```
//!
//! Indices are 0-based grid positions (row = port-1 photon). Blank lines and
//! lines starting with `#` are ignored.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::scenarios::CurvePoint;
use crate::state::{JointAmplitude, PolarizationChannel, TwoPhotonState};

pub const CSV_HEADER: &str = "dz,pc_numeric,pc_analytic";

const SIGNIFICANT_DIGITS: usize = 9;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses an amplitude file into a normalized state.
pub fn parse_amplitude_file(text: &str) -> Result<TwoPhotonState> {
    let mut grid: Option<FrequencyGrid> = None;
    let mut entries: BTreeMap<PolarizationChannel, DMatrix<C64>> = BTreeMap::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(g) = &grid else {
            let rest = line.strip_prefix("grid:").ok_or_else(|| {
                parse_err(line_no, "expected `grid: <half_width> <n_points>` header")
            })?;
            let fields: Vec<&str> = rest.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(parse_err(
                    line_no,
                    "grid header needs half-width and point count",
                ));
            }
            let half_width: f64 = fields[0]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad half-width `{}`", fields[0])))?;
            let n: usize = fields[1]
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad point count `{}`", fields[1])))?;
            grid = Some(
                FrequencyGrid::new(half_width, n).map_err(|e| parse_err(line_no, e.to_string()))?,
            );
            continue;
        };

        if line.starts_with("grid:") {
            return Err(parse_err(line_no, "duplicate grid header"));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(
                line_no,
                format!(
                    "expected `channel i j re im`, found {} fields",
                    fields.len()
                ),
            ));
        }
        let channel: PolarizationChannel = fields[0]
            .parse()
            .map_err(|e: String| parse_err(line_no, e))?;
        let index = |s: &str| -> Result<usize> {
            let i: usize = s
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad index `{s}`")))?;
            if i >= g.len() {
                return Err(parse_err(
                    line_no,
                    format!("index {i} out of range for {} grid points", g.len()),
                ));
            }
            Ok(i)
        };
        let (i, j) = (index(fields[1])?, index(fields[2])?);
        let number = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| parse_err(line_no, format!("bad number `{s}`")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, format!("non-finite amplitude `{s}`")));
            }
            Ok(v)
        };
        let value = C64::new(number(fields[3])?, number(fields[4])?);
        if !seen.insert((channel, i, j)) {
            return Err(parse_err(
                line_no,
                format!("duplicate entry ({channel}, {i}, {j})"),
            ));
        }
        let n = g.len();
        entries
            .entry(channel)
            .or_insert_with(|| DMatrix::zeros(n, n))[(i, j)] = value;
    }

    let grid = grid.ok_or_else(|| parse_err(last_line.max(1), "missing grid header"))?;
    if seen.is_empty() {
        return Err(parse_err(last_line.max(1), "no amplitude rows"));
    }
    let channels = entries
        .into_iter()
        .map(|(ch, m)| Ok((ch, JointAmplitude::new(grid.clone(), m)?)))
        .collect::<Result<Vec<_>>>()?;
    TwoPhotonState::new(&grid, channels)?.normalized()
}

/// Writes every non-zero entry with round-trippable number formatting.
pub fn emit_amplitude_file(state: &TwoPhotonState) -> String {
    let grid = state.grid();
    let mut out = format!("grid: {} {}\n", grid.half_width(), grid.len());
    let zero = C64::new(0.0, 0.0);
    for (ch, amp) in state.channels() {
        let m = amp.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let c = m[(i, j)];
                if c != zero {
                    out.push_str(&format!("{ch} {i} {j} {:e} {:e}\n", c.re, c.im));
                }
            }
        }
    }
    out
}

/// Plain decimal with 9 significant digits, trailing zeros removed.
///
/// Never uses exponent notation and never depends on locale.
pub fn format_decimal(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();

    let point = exponent + 1;
    let mut body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits)
    } else if point as usize >= digits.len() {
        format!("{}{}", digits, "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    if body.contains('.') {
        while body.ends_with('0') {
            body.pop();
        }
        if body.ends_with('.') {
            body.pop();
        }
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_decimal).unwrap_or_default()
}

/// Writes `dz,pc_numeric,pc_analytic` rows in ascending `dz`.
pub fn emit_curve_csv(points: &[CurvePoint], out: &mut impl Write) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("no curve points to write".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.dz.total_cmp(&b.dz));
    writeln!(out, "{CSV_HEADER}")?;
    for p in &sorted {
        writeln!(
            out,
            "{},{},{}",
            format_decimal(p.dz),
            optional(p.pc_numeric),
            optional(p.pc_analytic)
        )?;
    }
    Ok(())
}

pub fn curve_csv_string(points: &[CurvePoint]) -> Result<String> {
    let mut buf = Vec::new();
    emit_curve_csv(points, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(0.0), "0");
        assert_eq!(format_decimal(-0.0), "0");
        assert_eq!(format_decimal(0.5), "0.5");
        assert_eq!(format_decimal(-5.0), "-5");
        assert_eq!(format_decimal(1234567891234.0), "1234567890000");
        assert_eq!(format_decimal(0.4323323583816936), "0.432332358");
        assert_eq!(format_decimal(1.0 - 1e-12), "1");
        assert_eq!(format_decimal(1.25e-7), "0.000000125");
        assert_eq!(format_decimal(-0.1), "-0.1");
        assert_eq!(format_decimal(0.999999999), "0.999999999");
        assert_eq!(format_decimal(0.9999999996), "1");
    }

    fn pt(dz: f64, n: Option<f64>, a: Option<f64>) -> CurvePoint {
        CurvePoint {
            dz,
            pc_numeric: n,
            pc_analytic: a,
        }
    }

    #[test]
    fn csv_layout() {
        let pts = [pt(1.0, Some(0.25), Some(0.25)), pt(-1.0, Some(0.5), None)];
        let s = curve_csv_string(&pts).unwrap();
        assert_eq!(s, "dz,pc_numeric,pc_analytic\n-1,0.5,\n1,0.25,0.25\n");
        assert_eq!(s.lines().count(), 3);
        assert_eq!(curve_csv_string(&pts).unwrap(), s);
    }

    #[test]
    fn csv_analytic_only() {
        let pts = [pt(0.0, None, Some(0.0)), pt(0.5, None, Some(0.1))];
        let s = curve_csv_string(&pts).unwrap();
        for row in s.lines().skip(1) {
            let cols: Vec<&str> = row.split(',').collect();
            assert_eq!(cols[1], "");
        }
    }

    #[test]
    fn csv_rejects_empty() {
        assert!(curve_csv_string(&[]).is_err());
    }

    #[test]
    fn minimal_file() {
        let s = parse_amplitude_file("grid: 1 3\nHH 1 1 2 0\n").unwrap();
        assert_eq!(s.channels().count(), 1);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn duplicate_entry_names_line() {
        let text = "grid: 2 8\n# comment\nHH 3 4 1 0\n\nHH 3 4 0 1\n";
        match parse_amplitude_file(text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 5);
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("", 1),
            ("HH 0 0 1 0\n", 1),
            ("grid: 1\nHH 0 0 1 0\n", 1),
            ("grid: 0 5\nHH 0 0 1 0\n", 1),
            ("grid: 1 3\n", 1),
            ("grid: 1 3\nHH 0 3 1 0\n", 2),
            ("grid: 1 3\nXX 0 0 1 0\n", 2),
            ("grid: 1 3\nHH 0 0 1\n", 2),
            ("grid: 1 3\nHH 0 0 one 0\n", 2),
            ("grid: 1 3\nHH 0 0 inf 0\n", 2),
            ("grid: 1 3\ngrid: 1 3\n", 2),
        ];
        for (text, want) in cases {
            match parse_amplitude_file(text) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn zero_rows_are_degenerate() {
        assert!(matches!(
            parse_amplitude_file("grid: 1 3\nHH 0 0 0 0\n"),
            Err(Error::DegenerateState(_))
        ));
    }
}
