//! Two-photon wavepackets on a discrete detuning grid.
//!
//! A state is a sum over four polarization channels of
//! `C_pq(v1, v2) a1p†(v1) a2q†(v2) |0>`, where port 1 carries the row
//! detuning and port 2 the column detuning. Norms are trapezoid quadratures,
//! `sum_ij w_i w_j |C_ij|^2`.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;

/// Smallest pump/photon bandwidth ratio representable on a 2D grid.
///
/// The perfectly phase-matched limit `g -> delta` is approximated by this
/// value; pass `f64::INFINITY` for independent photons (`g == 1`).
pub const BETA_MIN: f64 = 0.02;

const ANNIHILATED: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::H, Polarization::V];
}

/// Polarization of (port-1 photon, port-2 photon).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolarizationChannel {
    HH,
    VV,
    HV,
    VH,
}

impl PolarizationChannel {
    pub const ALL: [PolarizationChannel; 4] = [
        PolarizationChannel::HH,
        PolarizationChannel::VV,
        PolarizationChannel::HV,
        PolarizationChannel::VH,
    ];

    pub fn from_pair(first: Polarization, second: Polarization) -> Self {
        use Polarization::*;
        match (first, second) {
            (H, H) => Self::HH,
            (V, V) => Self::VV,
            (H, V) => Self::HV,
            (V, H) => Self::VH,
        }
    }

    pub fn first(self) -> Polarization {
        match self {
            Self::HH | Self::HV => Polarization::H,
            Self::VV | Self::VH => Polarization::V,
        }
    }

    pub fn second(self) -> Polarization {
        match self {
            Self::HH | Self::VH => Polarization::H,
            Self::VV | Self::HV => Polarization::V,
        }
    }

    /// Channel seen after exchanging the two photons.
    pub fn swapped(self) -> Self {
        Self::from_pair(self.second(), self.first())
    }

    pub fn is_same_polarization(self) -> bool {
        self.first() == self.second()
    }
}

impl fmt::Display for PolarizationChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Self::HH => "HH",
            Self::VV => "VV",
            Self::HV => "HV",
            Self::VH => "VH",
        };
        f.write_str(tag)
    }
}

impl std::str::FromStr for PolarizationChannel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "HH" => Ok(Self::HH),
            "VV" => Ok(Self::VV),
            "HV" => Ok(Self::HV),
            "VH" => Ok(Self::VH),
            other => Err(format!("unknown polarization channel `{other}`")),
        }
    }
}

/// Joint spectral amplitude `C(v_i, v_j)` of one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitude {
    grid: FrequencyGrid,
    matrix: DMatrix<C64>,
}

impl JointAmplitude {
    pub fn new(grid: FrequencyGrid, matrix: DMatrix<C64>) -> Result<Self> {
        let n = grid.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::InvalidArgument(format!(
                "amplitude is {}x{} but the grid has {n} points",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidArgument(
                "amplitude has non-finite entries".into(),
            ));
        }
        Ok(Self { grid, matrix })
    }

    pub fn zeros(grid: &FrequencyGrid) -> Self {
        let n = grid.len();
        Self {
            grid: grid.clone(),
            matrix: DMatrix::zeros(n, n),
        }
    }

    /// Samples `f(v1, v2)` on the grid.
    pub fn from_fn(grid: &FrequencyGrid, mut f: impl FnMut(f64, f64) -> C64) -> Self {
        let v = grid.values();
        let n = grid.len();
        Self {
            grid: grid.clone(),
            matrix: DMatrix::from_fn(n, n, |i, j| f(v[i], v[j])),
        }
    }

    pub(crate) fn from_matrix_unchecked(grid: &FrequencyGrid, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), grid.len());
        Self {
            grid: grid.clone(),
            matrix,
        }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn norm_sqr(&self) -> f64 {
        weighted_norm_sqr(&self.grid, &self.matrix)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|c| *c == C64::new(0.0, 0.0))
    }
}

pub(crate) fn weighted_norm_sqr(grid: &FrequencyGrid, m: &DMatrix<C64>) -> f64 {
    let w = grid.weights();
    let mut total = 0.0;
    for j in 0..m.ncols() {
        let mut col = 0.0;
        for i in 0..m.nrows() {
            col += w[i] * m[(i, j)].norm_sqr();
        }
        total += w[j] * col;
    }
    total
}

/// Two photons entering the splitter through ports 1 and 2.
///
/// Absent channels are exactly zero. A state may be zero (for example the
/// antisymmetric part of a symmetric spectrum); operations that need a
/// normalizable state report [`Error::DegenerateState`].
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    grid: FrequencyGrid,
    channels: BTreeMap<PolarizationChannel, JointAmplitude>,
}

impl TwoPhotonState {
    pub fn new(
        grid: &FrequencyGrid,
        channels: impl IntoIterator<Item = (PolarizationChannel, JointAmplitude)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (ch, amp) in channels {
            if amp.grid() != grid {
                return Err(Error::IncompatibleGrids);
            }
            if map.insert(ch, amp).is_some() {
                return Err(Error::InvalidArgument(format!("channel {ch} given twice")));
            }
        }
        Ok(Self {
            grid: grid.clone(),
            channels: map,
        })
    }

    /// Single-channel state, normalized.
    pub fn single(channel: PolarizationChannel, amp: JointAmplitude) -> Result<Self> {
        let grid = amp.grid().clone();
        Self::new(&grid, [(channel, amp)])?.normalized()
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn channel(&self, ch: PolarizationChannel) -> Option<&JointAmplitude> {
        self.channels.get(&ch)
    }

    /// Channel amplitude, with absent channels materialized as zeros.
    pub fn channel_or_zero(&self, ch: PolarizationChannel) -> JointAmplitude {
        self.channels
            .get(&ch)
            .cloned()
            .unwrap_or_else(|| JointAmplitude::zeros(&self.grid))
    }

    /// Present channels in fixed (HH, VV, HV, VH) order.
    pub fn channels(&self) -> impl Iterator<Item = (PolarizationChannel, &JointAmplitude)> {
        self.channels.iter().map(|(ch, amp)| (*ch, amp))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.channels.values().map(JointAmplitude::norm_sqr).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.channels.values().all(JointAmplitude::is_zero)
    }

    /// Rescales to unit total norm.
    pub fn normalized(self) -> Result<Self> {
        let norm = self.norm_sqr();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::DegenerateState(format!(
                "state norm is {norm}, cannot normalize"
            )));
        }
        let scale = 1.0 / norm.sqrt();
        Ok(self.map_matrices(|_, m| m * C64::new(scale, 0.0)))
    }

    pub(crate) fn map_matrices(
        self,
        mut f: impl FnMut(PolarizationChannel, DMatrix<C64>) -> DMatrix<C64>,
    ) -> Self {
        let grid = self.grid;
        let channels = self
            .channels
            .into_iter()
            .map(|(ch, amp)| {
                let m = f(ch, amp.into_matrix());
                (ch, JointAmplitude::from_matrix_unchecked(&grid, m))
            })
            .collect();
        Self { grid, channels }
    }

    /// Channelwise combination with another state on the same grid; the
    /// result carries every channel present in either operand.
    pub(crate) fn map_channels_with(
        self,
        other: &Self,
        mut f: impl FnMut(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>,
    ) -> Self {
        let n = self.grid.len();
        let zero = DMatrix::zeros(n, n);
        let mut channels = BTreeMap::new();
        for ch in PolarizationChannel::ALL {
            let a = self.channels.get(&ch).map(JointAmplitude::matrix);
            let b = other.channels.get(&ch).map(JointAmplitude::matrix);
            if a.is_none() && b.is_none() {
                continue;
            }
            let m = f(a.unwrap_or(&zero), b.unwrap_or(&zero));
            channels.insert(ch, JointAmplitude::from_matrix_unchecked(&self.grid, m));
        }
        Self {
            grid: self.grid,
            channels,
        }
    }

    /// Photon exchange `(XC)_pq(v1, v2) = C_qp(v2, v1)`.
    pub fn exchanged(&self) -> Self {
        let mut channels = BTreeMap::new();
        for (ch, amp) in &self.channels {
            channels.insert(
                ch.swapped(),
                JointAmplitude::from_matrix_unchecked(&self.grid, amp.matrix().transpose()),
            );
        }
        Self {
            grid: self.grid.clone(),
            channels,
        }
    }

    /// Largest elementwise difference over all channels; absent counts as zero.
    pub fn max_abs_difference(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for ch in PolarizationChannel::ALL {
            let diff = match (self.channel(ch), other.channel(ch)) {
                (None, None) => 0.0,
                (Some(a), None) | (None, Some(a)) => max_abs(a.matrix()),
                (Some(a), Some(b)) => max_abs(&(a.matrix() - b.matrix())),
            };
            worst = worst.max(diff);
        }
        worst
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// One photon in a superposition of H and V spectral amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonWavepacket {
    grid: FrequencyGrid,
    h: DVector<C64>,
    v: DVector<C64>,
}

impl SinglePhotonWavepacket {
    /// Builds and normalizes a wavepacket from its H and V amplitudes.
    pub fn new(grid: &FrequencyGrid, h: DVector<C64>, v: DVector<C64>) -> Result<Self> {
        let n = grid.len();
        if h.len() != n || v.len() != n {
            return Err(Error::InvalidArgument(format!(
                "wavepacket amplitudes must have {n} entries"
            )));
        }
        if h.iter()
            .chain(v.iter())
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidArgument(
                "wavepacket has non-finite entries".into(),
            ));
        }
        let w = grid.weights();
        let norm: f64 = (0..n)
            .map(|i| w[i] * (h[i].norm_sqr() + v[i].norm_sqr()))
            .sum();
        if norm.is_nan() || norm <= 0.0 {
            return Err(Error::DegenerateState("wavepacket has zero norm".into()));
        }
        let scale = C64::new(1.0 / norm.sqrt(), 0.0);
        Ok(Self {
            grid: grid.clone(),
            h: h * scale,
            v: v * scale,
        })
    }

    /// Gaussian profile `exp(-(v - center)^2 / (2 width^2)) exp(i v z)` carried
    /// by the polarization vector `(h_amp, v_amp)`.
    pub fn gaussian(
        grid: &FrequencyGrid,
        center: f64,
        width: f64,
        path: f64,
        h_amp: C64,
        v_amp: C64,
    ) -> Result<Self> {
        if width.is_nan() || width <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "wavepacket width must be positive, got {width}"
            )));
        }
        let profile: Vec<C64> = grid
            .values()
            .iter()
            .map(|&nu| {
                let x = (nu - center) / width;
                C64::from_polar((-0.5 * x * x).exp(), nu * path)
            })
            .collect();
        let h = DVector::from_iterator(profile.len(), profile.iter().map(|f| f * h_amp));
        let v = DVector::from_iterator(profile.len(), profile.iter().map(|f| f * v_amp));
        Self::new(grid, h, v)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitude(&self, pol: Polarization) -> &DVector<C64> {
        match pol {
            Polarization::H => &self.h,
            Polarization::V => &self.v,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        let w = self.grid.weights();
        (0..self.grid.len())
            .map(|i| w[i] * (self.h[i].norm_sqr() + self.v[i].norm_sqr()))
            .sum()
    }
}

/// Spontaneous down-conversion spectrum `g(v1 + v2) f(v1) f(v2)` in the HH
/// channel with Gaussian `f` of unit width and Gaussian `g` of width `beta`.
///
/// `beta == f64::INFINITY` gives two independent photons, `g == 1`.
pub fn build_spdc_spectrum(grid: &FrequencyGrid, beta: f64) -> Result<TwoPhotonState> {
    let amp = spdc_amplitude(grid, beta)?;
    TwoPhotonState::single(PolarizationChannel::HH, amp)
}

/// Unnormalized `g f f` amplitude, exactly symmetric under `v1 <-> v2`.
pub(crate) fn spdc_amplitude(grid: &FrequencyGrid, beta: f64) -> Result<JointAmplitude> {
    let independent = beta == f64::INFINITY;
    if !independent && !(beta >= BETA_MIN && beta.is_finite()) {
        return Err(Error::UnsupportedParameter(format!(
            "beta must be >= {BETA_MIN} or infinite, got {beta}"
        )));
    }
    let f: Vec<f64> = grid
        .values()
        .iter()
        .map(|&v| (-0.5 * v * v).exp())
        .collect();
    let n = grid.len();
    let v = grid.values();
    let m = DMatrix::from_fn(n, n, |i, j| {
        // f_i * f_j first: the product commutes exactly, so C_ij == C_ji bit for bit.
        let ff = f[i] * f[j];
        let g = if independent {
            1.0
        } else {
            let s = v[i] + v[j];
            (-(s * s) / (2.0 * beta * beta)).exp()
        };
        C64::new(g * ff, 0.0)
    });
    Ok(JointAmplitude::from_matrix_unchecked(grid, m))
}

/// Free propagation of photon 1 over `z1` and photon 2 over `z2`.
///
/// Multiplies by `exp(i (v1 z1 + v2 z2))`; the carrier phase is a global
/// phase and is dropped.
pub fn apply_path_phase(state: &TwoPhotonState, z1: f64, z2: f64) -> TwoPhotonState {
    let v = state.grid().values();
    let p1: Vec<C64> = v.iter().map(|&nu| C64::from_polar(1.0, nu * z1)).collect();
    let p2: Vec<C64> = v.iter().map(|&nu| C64::from_polar(1.0, nu * z2)).collect();
    state.clone().map_matrices(|_, mut m| {
        let n = m.nrows();
        for j in 0..n {
            for i in 0..n {
                m[(i, j)] *= p1[i] * p2[j];
            }
        }
        m
    })
}

/// Unbalanced interferometer in path 1: multiplies by `cos(v1 delta_l + alpha)`
/// and renormalizes.
pub fn apply_interferometer(
    state: &TwoPhotonState,
    delta_l: f64,
    alpha: f64,
) -> Result<TwoPhotonState> {
    let factor: Vec<f64> = state
        .grid()
        .values()
        .iter()
        .map(|&nu| (nu * delta_l + alpha).cos())
        .collect();
    let filtered = state.clone().map_matrices(|_, mut m| {
        for (mut row, c) in m.row_iter_mut().zip(&factor) {
            row *= C64::new(*c, 0.0);
        }
        m
    });
    // cos(pi/2) is ~6e-17 in floating point, so compare against the input norm.
    if filtered.norm_sqr() <= ANNIHILATED * state.norm_sqr() {
        return Err(Error::DegenerateState(
            "interferometer annihilates the state".into(),
        ));
    }
    filtered.normalized()
}

/// Joint state of two independent photons, `C_pq(v1, v2) = C_1p(v1) C_2q(v2)`.
pub fn product_state(
    wp1: &SinglePhotonWavepacket,
    wp2: &SinglePhotonWavepacket,
) -> Result<TwoPhotonState> {
    if wp1.grid() != wp2.grid() {
        return Err(Error::IncompatibleGrids);
    }
    let grid = wp1.grid();
    let mut channels = Vec::new();
    for p in Polarization::ALL {
        for q in Polarization::ALL {
            let a = wp1.amplitude(p);
            let b = wp2.amplitude(q);
            if is_zero_vec(a) || is_zero_vec(b) {
                continue;
            }
            let m = a * b.transpose();
            channels.push((
                PolarizationChannel::from_pair(p, q),
                JointAmplitude::from_matrix_unchecked(grid, m),
            ));
        }
    }
    TwoPhotonState::new(grid, channels)?.normalized()
}

fn is_zero_vec(v: &DVector<C64>) -> bool {
    v.iter().all(|c| *c == C64::new(0.0, 0.0))
}
