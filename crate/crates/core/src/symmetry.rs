//! Exchange-symmetry decomposition of two-photon spectra.

use num_complex::Complex64 as C64;

use crate::state::TwoPhotonState;

pub const DEFAULT_SYMMETRY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `C_pq(v1, v2) == C_qp(v2, v1)`; the splitter fully coalesces the pair.
    Symmetric,
    /// `C_pq(v1, v2) == -C_qp(v2, v1)`; the splitter is transparent.
    Antisymmetric,
    Mixed,
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "Symmetric",
            Symmetry::Antisymmetric => "Antisymmetric",
            Symmetry::Mixed => "Mixed",
        })
    }
}

/// Splits a state into its exchange-symmetric and antisymmetric parts,
/// `(C + XC)/2` and `(C - XC)/2`.
pub fn exchange_decompose(state: &TwoPhotonState) -> (TwoPhotonState, TwoPhotonState) {
    let swapped = state.exchanged();
    let half = C64::new(0.5, 0.0);
    let sym = state
        .clone()
        .map_channels_with(&swapped, |a, b| (a + b) * half);
    let anti = state
        .clone()
        .map_channels_with(&swapped, |a, b| (a - b) * half);
    (sym, anti)
}

/// Classifies by the relative weight of the symmetric and antisymmetric parts.
pub fn classify_symmetry(state: &TwoPhotonState, tol: f64) -> Symmetry {
    let (sym, anti) = exchange_decompose(state);
    let total = state.norm_sqr();
    if anti.norm_sqr() < tol * total {
        Symmetry::Symmetric
    } else if sym.norm_sqr() < tol * total {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Mixed
    }
}
