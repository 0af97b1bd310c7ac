//! Numerical experiments built on the solvers: pullback solves, absorbing
//! radii, distance to a sampled deterministic attractor, smoothing ratios,
//! ergodic averages of the OU process and the conjugation convergence study.
//!
//! Every experiment is split into independent cells that run on the current
//! rayon pool. Results are collected in cell order, so reports do not depend
//! on the number of threads.

mod absorbing;
mod attractor;
mod convergence;
mod ergodic;
mod pullback;
mod smoothing;

pub use absorbing::{measure_absorbing, AbsorbingReport, AbsorbingRow, AbsorbingSpec, RadiusEstimate};
pub use attractor::{distance_to_set, sample_attractor_deterministic, AttractorSample};
pub use convergence::{conjugation_convergence, ConvergenceReport};
pub use ergodic::{ergodic_check, ErgodicReport, ErgodicRow};
pub use pullback::{pullback_noise, pullback_solve, pullback_trajectory, PullbackSpec, OU_BURN_IN};
pub use smoothing::{
    linear_smoothing_bound, measure_smoothing, Direction, ScaleSpread, SmoothingReport, SmoothingRow, SmoothingSpec,
    SCALE_STABLE_FACTOR,
};

use thiserror::Error;

use crate::dynamics::DynamicsError;
use crate::noise::NoiseError;
use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("attractor sample is empty")]
    EmptySample,
    #[error("invalid experiment parameters: {0}")]
    Invalid(String),
}

/// Number of whole steps of size `dt` in `t`, rejecting non-multiples.
pub(crate) fn steps_in(t: f64, dt: f64, what: &str) -> Result<usize, ExperimentError> {
    let ratio = t / dt;
    let n = ratio.round();
    if !(t >= 0.0) || (ratio - n).abs() > 1e-9 * n.max(1.0) {
        return Err(ExperimentError::Invalid(format!(
            "{what} = {t} is not a nonnegative multiple of dt = {dt}"
        )));
    }
    Ok(n as usize)
}

/// Median of finite values; `None` if there are none.
pub(crate) fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}
