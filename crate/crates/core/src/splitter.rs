//! Lossless beam splitter acting on two-photon states.
//!
//! The output state is obtained by substituting each input creation operator
//! with its image under the splitter, `a_r† -> sum_k U[r][k] b_k†`, and
//! expanding the products. Contributions are folded into a canonical set of
//! sectors so that every output basis state is stored exactly once:
//!
//! * one photon per port: `Coinc12`, keyed by (port-1 pol, port-2 pol), row
//!   index = port-1 detuning;
//! * two photons in port k: `Both1`/`Both2`, keyed HH, VV or HV (the H photon
//!   on the row). Same-polarization sectors are stored as produced, without
//!   symmetrization; [`OutputState::sector_norm`] applies the bosonic norm.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::state::{
    JointAmplitude, Polarization, PolarizationChannel, SinglePhotonWavepacket, TwoPhotonState,
};

/// Mixing angle and the two free phases of a lossless splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterParams {
    theta: f64,
    phi_tau: f64,
    phi_rho: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi_tau: f64, phi_rho: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "splitter angle must lie in [0, pi/2], got {theta}"
            )));
        }
        for (name, phase) in [("phi_tau", phi_tau), ("phi_rho", phi_rho)] {
            if !(phase > -PI && phase <= PI) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in (-pi, pi], got {phase}"
                )));
            }
        }
        Ok(Self {
            theta,
            phi_tau,
            phi_rho,
        })
    }

    /// 50/50 splitter with zero phases.
    pub fn balanced() -> Self {
        Self {
            theta: FRAC_PI_4,
            phi_tau: 0.0,
            phi_rho: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi_tau(&self) -> f64 {
        self.phi_tau
    }

    pub fn phi_rho(&self) -> f64 {
        self.phi_rho
    }

    /// Total phase `phi_tau + phi_rho` of the same-port terms.
    pub fn phi(&self) -> f64 {
        self.phi_tau + self.phi_rho
    }
}

/// Mode transformation `b = S a` of the annihilation operators.
pub fn bs_matrix(params: &BeamSplitterParams) -> Matrix2<C64> {
    let (s, c) = params.theta.sin_cos();
    let e = |phase: f64| C64::from_polar(1.0, phase);
    Matrix2::new(
        e(params.phi_tau) * c,
        e(params.phi_rho) * s,
        -e(-params.phi_rho) * s,
        e(-params.phi_tau) * c,
    )
}

/// Coefficients `U` with `U a_r† U^-1 = sum_k U[(r, k)] b_k†`.
///
/// Conjugating `b = S a` gives `a_r† -> sum_k S[(k, r)] b_k†`, so `U` is the
/// transpose of [`bs_matrix`]: rows `(e^{i phi_tau} cos, -e^{-i phi_rho} sin)`
/// and `(e^{i phi_rho} sin, e^{-i phi_tau} cos)`.
pub fn creation_substitution(params: &BeamSplitterParams) -> Matrix2<C64> {
    let (s, c) = params.theta.sin_cos();
    let e = |phase: f64| C64::from_polar(1.0, phase);
    Matrix2::new(
        e(params.phi_tau) * c,
        -e(-params.phi_rho) * s,
        e(params.phi_rho) * s,
        e(-params.phi_tau) * c,
    )
}

/// Exit ports of (row-detuning photon, column-detuning photon).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PortPair {
    Both1,
    Both2,
    Coinc12,
    Coinc21,
}

impl PortPair {
    /// Zero-based (row port, column port).
    pub fn ports(self) -> (usize, usize) {
        match self {
            PortPair::Both1 => (0, 0),
            PortPair::Both2 => (1, 1),
            PortPair::Coinc12 => (0, 1),
            PortPair::Coinc21 => (1, 0),
        }
    }

    pub fn is_coincidence(self) -> bool {
        matches!(self, PortPair::Coinc12 | PortPair::Coinc21)
    }
}

pub type SectorKey = (PolarizationChannel, PortPair);

#[derive(Debug, Clone, PartialEq)]
pub struct OutputState {
    grid: FrequencyGrid,
    sectors: BTreeMap<SectorKey, JointAmplitude>,
    input_norm: f64,
}

impl OutputState {
    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    pub fn sector(&self, channel: PolarizationChannel, pair: PortPair) -> Option<&JointAmplitude> {
        self.sectors.get(&(channel, pair))
    }

    pub fn sectors(&self) -> impl Iterator<Item = (SectorKey, &JointAmplitude)> {
        self.sectors.iter().map(|(k, v)| (*k, v))
    }

    /// Norm of one sector. Two same-polarization photons in one port use the
    /// bosonic form `sum w_i w_j (|A_ij|^2 + A_ij conj(A_ji))`; every other
    /// sector is a plain quadrature norm.
    pub fn sector_norm(&self, channel: PolarizationChannel, pair: PortPair) -> f64 {
        match self.sector(channel, pair) {
            None => 0.0,
            Some(amp) if !pair.is_coincidence() && channel.is_same_polarization() => {
                bosonic_norm(&self.grid, amp.matrix())
            }
            Some(amp) => amp.norm_sqr(),
        }
    }

    /// Sum of all sector norms; equals the input norm for a lossless splitter.
    pub fn total_norm(&self) -> f64 {
        self.sectors
            .keys()
            .map(|&(ch, pair)| self.sector_norm(ch, pair))
            .sum()
    }

    /// Sector amplitude in a representation that is unique per physical
    /// state: same-port same-polarization sectors are symmetrized.
    pub fn canonical_sector(&self, channel: PolarizationChannel, pair: PortPair) -> DMatrix<C64> {
        let n = self.grid.len();
        match self.sector(channel, pair) {
            None => DMatrix::zeros(n, n),
            Some(amp) if !pair.is_coincidence() && channel.is_same_polarization() => {
                let m = amp.matrix();
                (m + m.transpose()) * C64::new(0.5, 0.0)
            }
            Some(amp) => amp.matrix().clone(),
        }
    }

    /// The one-photon-per-port part, read as a port-1/port-2 input state.
    pub fn coincidence_part(&self) -> TwoPhotonState {
        let channels: Vec<_> = self
            .sectors
            .iter()
            .filter(|((_, pair), _)| *pair == PortPair::Coinc12)
            .map(|((ch, _), amp)| (*ch, amp.clone()))
            .collect();
        TwoPhotonState::new(&self.grid, channels).expect("sectors share the output grid")
    }
}

fn bosonic_norm(grid: &FrequencyGrid, m: &DMatrix<C64>) -> f64 {
    let w = grid.weights();
    let n = m.nrows();
    let mut total = 0.0;
    for j in 0..n {
        for i in 0..n {
            let a = m[(i, j)];
            total += w[i] * w[j] * (a.norm_sqr() + (a * m[(j, i)].conj()).re);
        }
    }
    total
}

/// Free function form of [`OutputState::sector_norm`].
pub fn sector_norm(output: &OutputState, channel: PolarizationChannel, pair: PortPair) -> f64 {
    output.sector_norm(channel, pair)
}

struct Term<'a> {
    row_port: usize,
    col_port: usize,
    channel: PolarizationChannel,
    amp: &'a DMatrix<C64>,
}

fn scatter<'a>(
    grid: &FrequencyGrid,
    terms: impl Iterator<Item = Term<'a>>,
    u: &Matrix2<C64>,
) -> BTreeMap<SectorKey, JointAmplitude> {
    let n = grid.len();
    let mut acc: BTreeMap<SectorKey, DMatrix<C64>> = BTreeMap::new();
    let zero = C64::new(0.0, 0.0);
    for term in terms {
        let (x, y) = (term.channel.first(), term.channel.second());
        for k in 0..2 {
            for l in 0..2 {
                let coef = u[(term.row_port, k)] * u[(term.col_port, l)];
                if coef == zero {
                    continue;
                }
                let (key, transpose) = canonical_key(k, x, l, y);
                let dest = acc.entry(key).or_insert_with(|| DMatrix::zeros(n, n));
                accumulate(dest, term.amp, coef, transpose);
            }
        }
    }
    acc.into_iter()
        .map(|(key, m)| (key, JointAmplitude::from_matrix_unchecked(grid, m)))
        .collect()
}

/// Sector for `b_k,x†(row) b_l,y†(col)` and whether the frequency matrix must
/// be transposed to match the sector's row convention.
fn canonical_key(k: usize, x: Polarization, l: usize, y: Polarization) -> (SectorKey, bool) {
    use Polarization::{H, V};
    match (k, l) {
        (0, 1) => (
            (PolarizationChannel::from_pair(x, y), PortPair::Coinc12),
            false,
        ),
        (1, 0) => (
            (PolarizationChannel::from_pair(y, x), PortPair::Coinc12),
            true,
        ),
        _ => {
            let pair = if k == 0 {
                PortPair::Both1
            } else {
                PortPair::Both2
            };
            match (x, y) {
                (V, H) => ((PolarizationChannel::HV, pair), true),
                _ => ((PolarizationChannel::from_pair(x, y), pair), false),
            }
        }
    }
}

fn accumulate(dest: &mut DMatrix<C64>, src: &DMatrix<C64>, coef: C64, transpose: bool) {
    let n = src.nrows();
    for j in 0..n {
        for i in 0..n {
            let value = if transpose { src[(j, i)] } else { src[(i, j)] };
            dest[(i, j)] += coef * value;
        }
    }
}

/// Sends a two-photon input state through the splitter.
pub fn transform(state: &TwoPhotonState, params: &BeamSplitterParams) -> OutputState {
    transform_with(state, &creation_substitution(params))
}

/// Input state through an arbitrary creation-operator substitution `u`.
pub fn transform_with(state: &TwoPhotonState, u: &Matrix2<C64>) -> OutputState {
    let terms = state.channels().map(|(channel, amp)| Term {
        row_port: 0,
        col_port: 1,
        channel,
        amp: amp.matrix(),
    });
    OutputState {
        grid: state.grid().clone(),
        sectors: scatter(state.grid(), terms, u),
        input_norm: state.norm_sqr(),
    }
}

/// Sends an already split state through a second splitter, reusing the
/// output ports as input ports.
pub fn transform_output(output: &OutputState, params: &BeamSplitterParams) -> OutputState {
    let terms = output.sectors.iter().map(|(&(channel, pair), amp)| {
        let (row_port, col_port) = pair.ports();
        Term {
            row_port,
            col_port,
            channel,
            amp: amp.matrix(),
        }
    });
    OutputState {
        grid: output.grid.clone(),
        sectors: scatter(&output.grid, terms, &creation_substitution(params)),
        input_norm: output.total_norm(),
    }
}

/// Probability of one photon in each output port.
pub fn coincidence_probability(output: &OutputState) -> f64 {
    let coinc: f64 = output
        .sectors
        .keys()
        .filter(|(_, pair)| pair.is_coincidence())
        .map(|&(ch, pair)| output.sector_norm(ch, pair))
        .sum();
    coinc / output.input_norm
}

/// Closed-form coincidence probability of a 50/50 splitter,
///
/// `P = 1/2 {1 - 1/2 sum w w [2 C_HV C*_VH(swap) + sum_p C_pp C*_pp(swap) + c.c.]}`,
///
/// taken relative to the state norm. Only meaningful for `theta = pi/4`; the
/// splitter phases drop out.
pub fn coincidence_probability_formula(state: &TwoPhotonState) -> f64 {
    let grid = state.grid();
    let overlap = |a: PolarizationChannel, b: PolarizationChannel| -> C64 {
        match (state.channel(a), state.channel(b)) {
            (Some(a), Some(b)) => swapped_overlap(grid, a.matrix(), b.matrix()),
            _ => C64::new(0.0, 0.0),
        }
    };
    let term = overlap(PolarizationChannel::HV, PolarizationChannel::VH) * 2.0
        + overlap(PolarizationChannel::HH, PolarizationChannel::HH)
        + overlap(PolarizationChannel::VV, PolarizationChannel::VV);
    let interference = 0.5 * (term + term.conj()).re;
    0.5 * (1.0 - interference / state.norm_sqr())
}

/// `sum_ij w_i w_j A(i, j) conj(B(j, i))`.
fn swapped_overlap(grid: &FrequencyGrid, a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let w = grid.weights();
    let n = grid.len();
    let mut total = C64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            total += a[(i, j)] * b[(j, i)].conj() * (w[i] * w[j]);
        }
    }
    total
}

/// Coincidence probability of two independent photons at a 50/50 splitter,
/// `1/2 [1 - |<wp2|wp1>|^2]`, which never exceeds 1/2.
pub fn product_state_cp(wp1: &SinglePhotonWavepacket, wp2: &SinglePhotonWavepacket) -> Result<f64> {
    if wp1.grid() != wp2.grid() {
        return Err(Error::IncompatibleGrids);
    }
    let w = wp1.grid().weights();
    let mut overlap = C64::new(0.0, 0.0);
    for pol in Polarization::ALL {
        let (a, b) = (wp1.amplitude(pol), wp2.amplitude(pol));
        for i in 0..w.len() {
            overlap += a[i] * b[i].conj() * w[i];
        }
    }
    let n1 = wp1.norm_sqr();
    let n2 = wp2.norm_sqr();
    Ok(0.5 * (1.0 - overlap.norm_sqr() / (n1 * n2)))
}
