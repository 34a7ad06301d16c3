//! Two-photon wavepacket interference at a lossless beam splitter.
//!
//! Spectra are sampled on a uniform detuning grid ([`grid`]), combined into
//! four-channel polarization states ([`state`]), split ([`splitter`]) and
//! scored by their coincidence probability. [`symmetry`] and [`schmidt`]
//! connect the outcome to the exchange symmetry and entanglement of the
//! input; [`scenarios`] assembles the standard interference experiments.

pub mod cli;
pub mod error;
pub mod grid;
pub mod io;
pub mod scenarios;
pub mod schmidt;
pub mod splitter;
pub mod state;
pub mod symmetry;

pub use error::{Error, Result};
pub use grid::{make_grid, FrequencyGrid};
pub use schmidt::{schmidt_analysis, SchmidtReport};
pub use splitter::{
    bs_matrix, coincidence_probability, coincidence_probability_formula, creation_substitution,
    product_state_cp, sector_norm, transform, transform_output, BeamSplitterParams, OutputState,
    PortPair,
};
pub use state::{
    apply_interferometer, apply_path_phase, build_spdc_spectrum, product_state, JointAmplitude,
    Polarization, PolarizationChannel, SinglePhotonWavepacket, TwoPhotonState, BETA_MIN,
};
pub use symmetry::{classify_symmetry, exchange_decompose, Symmetry};

pub use num_complex::Complex64 as C64;
