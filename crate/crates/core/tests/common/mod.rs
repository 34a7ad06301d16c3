#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use biphoton::{
    exchange_decompose, make_grid, BeamSplitterParams, FrequencyGrid, JointAmplitude,
    PolarizationChannel, SinglePhotonWavepacket, TwoPhotonState, C64,
};
use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_grid(rng: &mut impl Rng) -> FrequencyGrid {
    let half_width = rng.gen_range(1.5..6.0);
    let n = rng.gen_range(6..=24);
    make_grid(half_width, n).unwrap()
}

fn gaussian_c64(rng: &mut impl Rng) -> C64 {
    // Box-Muller is enough here; only genericity matters.
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    C64::from_polar(r, 2.0 * PI * u2)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| gaussian_c64(rng))
}

/// Normalized state with iid complex entries in a random non-empty subset of
/// channels.
pub fn random_state(rng: &mut impl Rng, grid: &FrequencyGrid) -> TwoPhotonState {
    let mut channels = PolarizationChannel::ALL.to_vec();
    channels.shuffle(rng);
    let keep = rng.gen_range(1..=4);
    let amps: Vec<_> = channels[..keep]
        .iter()
        .map(|&ch| {
            (
                ch,
                JointAmplitude::new(grid.clone(), random_matrix(rng, grid.len())).unwrap(),
            )
        })
        .collect();
    TwoPhotonState::new(grid, amps)
        .unwrap()
        .normalized()
        .unwrap()
}

pub fn random_antisymmetric(rng: &mut impl Rng, grid: &FrequencyGrid) -> TwoPhotonState {
    loop {
        let (_, anti) = exchange_decompose(&random_state(rng, grid));
        if let Ok(s) = anti.normalized() {
            return s;
        }
    }
}

pub fn random_symmetric(rng: &mut impl Rng, grid: &FrequencyGrid) -> TwoPhotonState {
    loop {
        let (sym, _) = exchange_decompose(&random_state(rng, grid));
        if let Ok(s) = sym.normalized() {
            return s;
        }
    }
}

pub fn random_params(rng: &mut impl Rng) -> BeamSplitterParams {
    let theta = rng.gen_range(0.0..=FRAC_PI_2);
    let phase = |rng: &mut dyn rand::RngCore| PI - rng.gen_range(0.0..2.0 * PI);
    BeamSplitterParams::new(theta, phase(rng), phase(rng)).unwrap()
}

/// Gaussian single photon with random center, width, delay, chirp and
/// polarization.
pub fn random_wavepacket(rng: &mut impl Rng, grid: &FrequencyGrid) -> SinglePhotonWavepacket {
    let center = rng.gen_range(-1.0..1.0);
    let width = rng.gen_range(0.5..2.0);
    let delay = rng.gen_range(-3.0..3.0);
    let chirp = rng.gen_range(-0.5..0.5);
    let h = gaussian_c64(rng);
    let v = if rng.gen_bool(0.2) {
        C64::new(0.0, 0.0)
    } else {
        gaussian_c64(rng)
    };
    let profile: Vec<C64> = grid
        .values()
        .iter()
        .map(|&nu| {
            let x = (nu - center) / width;
            C64::from_polar((-0.5 * x * x).exp(), nu * delay + chirp * nu * nu)
        })
        .collect();
    let n = profile.len();
    SinglePhotonWavepacket::new(
        grid,
        nalgebra::DVector::from_iterator(n, profile.iter().map(|f| f * h)),
        nalgebra::DVector::from_iterator(n, profile.iter().map(|f| f * v)),
    )
    .unwrap()
}

/// Schmidt number from traces, `K = (tr G)^2 / tr(G^2)` with `G = M M^dagger`.
/// Needs no singular value decomposition.
pub fn schmidt_number_from_traces(state: &TwoPhotonState) -> f64 {
    let m = biphoton::schmidt::schmidt_matrix(state);
    let g = &m * m.adjoint();
    let tr: f64 = (0..g.nrows()).map(|i| g[(i, i)].re).sum();
    let tr2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    tr * tr / tr2
}

pub fn gaussian(x: f64) -> f64 {
    (-0.5 * x * x).exp()
}
