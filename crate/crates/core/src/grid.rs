//! Uniform detuning grid shared by every spectral amplitude.
//!
//! Detunings are measured from the carrier in units of the single-photon
//! bandwidth, so a grid of half-width 6 covers the Gaussian profile down to
//! `exp(-18)`.

use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_HALF_WIDTH: f64 = 6.0;
pub const DEFAULT_POINTS: usize = 257;

/// Symmetric grid `[-W, W]` with trapezoid quadrature weights.
///
/// Cloning is cheap; every amplitude on the grid holds a handle to the same
/// point and weight tables.
#[derive(Debug, Clone)]
pub struct FrequencyGrid(Arc<GridData>);

#[derive(Debug, PartialEq)]
struct GridData {
    half_width: f64,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl PartialEq for FrequencyGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Builds the uniform grid of `n_points` detunings spanning `[-half_width, half_width]`.
pub fn make_grid(half_width: f64, n_points: usize) -> Result<FrequencyGrid> {
    FrequencyGrid::new(half_width, n_points)
}

impl FrequencyGrid {
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid half-width must be positive and finite, got {half_width}"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {n_points}"
            )));
        }
        let last = (n_points - 1) as f64;
        // Mirror the upper half onto the lower so that v[i] == -v[n-1-i] bit for bit.
        let mut values = vec![0.0; n_points];
        for i in 0..n_points {
            let j = n_points - 1 - i;
            if i <= j {
                let v = half_width * (2.0 * i as f64 - last) / last;
                values[i] = v;
                values[j] = -v;
            }
        }
        if n_points % 2 == 1 {
            values[n_points / 2] = 0.0;
        }
        let step = 2.0 * half_width / last;
        let mut weights = vec![step; n_points];
        weights[0] = 0.5 * step;
        weights[n_points - 1] = 0.5 * step;
        Ok(Self(Arc::new(GridData {
            half_width,
            values,
            weights,
        })))
    }

    pub fn default_grid() -> Self {
        Self::new(DEFAULT_HALF_WIDTH, DEFAULT_POINTS).expect("default grid is valid")
    }

    pub fn half_width(&self) -> f64 {
        self.0.half_width
    }

    pub fn len(&self) -> usize {
        self.0.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.0.weights
    }

    pub fn step(&self) -> f64 {
        2.0 * self.0.half_width / (self.len() - 1) as f64
    }

    /// Index of the mirrored detuning, `values[mirror(i)] == -values[i]`.
    pub fn mirror(&self, i: usize) -> usize {
        self.len() - 1 - i
    }
}
