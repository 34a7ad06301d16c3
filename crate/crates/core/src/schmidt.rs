//! Schmidt analysis of the photon-1 / photon-2 bipartition.
//!
//! The state is flattened to `M[(p,i),(q,j)] = sqrt(w_i w_j) C_pq(v_i, v_j)`
//! so that its singular values are the Schmidt coefficients of the
//! discretized wavefunction. Polarization blocks that are empty on one side
//! are dropped; they only add zero singular values.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::{Polarization, PolarizationChannel, TwoPhotonState};

pub const DEFAULT_ENTANGLEMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    /// Non-increasing.
    pub singular_values: Vec<f64>,
    /// `K = 1 / sum p_i^2` with `p_i = s_i^2 / sum s_j^2`.
    pub schmidt_number: f64,
    pub entangled: bool,
}

impl SchmidtReport {
    /// Normalized Schmidt weights `p_i`.
    pub fn weights(&self) -> Vec<f64> {
        let total: f64 = self.singular_values.iter().map(|s| s * s).sum();
        self.singular_values.iter().map(|s| s * s / total).collect()
    }
}

/// The weighted composite matrix whose singular values are the Schmidt
/// coefficients.
pub fn schmidt_matrix(state: &TwoPhotonState) -> DMatrix<C64> {
    let grid = state.grid();
    let n = grid.len();
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let used = |side: fn(PolarizationChannel) -> Polarization, pol: Polarization| {
        state
            .channels()
            .any(|(ch, amp)| side(ch) == pol && !amp.is_zero())
    };
    let rows: Vec<Polarization> = Polarization::ALL
        .into_iter()
        .filter(|&p| used(PolarizationChannel::first, p))
        .collect();
    let cols: Vec<Polarization> = Polarization::ALL
        .into_iter()
        .filter(|&q| used(PolarizationChannel::second, q))
        .collect();

    let mut m = DMatrix::zeros(rows.len() * n, cols.len() * n);
    for (rb, &p) in rows.iter().enumerate() {
        for (cb, &q) in cols.iter().enumerate() {
            let Some(amp) = state.channel(PolarizationChannel::from_pair(p, q)) else {
                continue;
            };
            let c = amp.matrix();
            for j in 0..n {
                for i in 0..n {
                    m[(rb * n + i, cb * n + j)] = c[(i, j)] * (sqrt_w[i] * sqrt_w[j]);
                }
            }
        }
    }
    m
}

pub fn schmidt_analysis(state: &TwoPhotonState, tol: f64) -> Result<SchmidtReport> {
    let m = schmidt_matrix(state);
    if m.is_empty() || m.iter().all(|c| *c == C64::new(0.0, 0.0)) {
        return Err(Error::DegenerateState(
            "Schmidt analysis of a zero state".into(),
        ));
    }
    let mut singular_values: Vec<f64> = m.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = singular_values.iter().map(|s| s * s).sum();
    let purity: f64 = singular_values
        .iter()
        .map(|s| {
            let p = s * s / total;
            p * p
        })
        .sum();
    let schmidt_number = 1.0 / purity;
    Ok(SchmidtReport {
        singular_values,
        schmidt_number,
        entangled: schmidt_number > 1.0 + tol,
    })
}
