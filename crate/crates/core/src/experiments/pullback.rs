use std::sync::Arc;

use rayon::prelude::*;

use super::{steps_in, ExperimentError};
use crate::dynamics::{integrate, Driver, SimConfig, State, Trajectory};
use crate::noise::{ou_from_wiener_with, refine_wiener, sample_wiener_anchored, OUPath, OuInit, OuUpdate};
use crate::spectral::SpectralField;

/// Length of the OU spin-up before the pullback window. The OU process
/// forgets its initial law at rate 1, so the bias at `-t` is below `e^{-10}`.
pub const OU_BURN_IN: f64 = 10.0;

/// A family of initial data pulled back along one noise realization.
#[derive(Clone, Debug)]
pub struct PullbackSpec {
    pub cfg: SimConfig,
    /// Pullback time `t`: solutions start at `-t` and are read at `0`.
    pub horizon: f64,
    pub seed: u64,
    pub initial: Vec<SpectralField>,
    /// Number of Brownian-bridge refinements of the `cfg.dt` noise grid.
    pub refine: u32,
}

/// OU path on `[-horizon, 0]` for the random equation.
///
/// Wiener increments are drawn backwards from `0` on `[-horizon - OU_BURN_IN, 0]`
/// at `base_dt`, refined `levels` times, and the OU process starts stationary
/// at the left end. Longer horizons therefore reuse every increment of shorter
/// ones, and refinements of the same seed describe the same Brownian path.
pub fn pullback_noise(horizon: f64, base_dt: f64, levels: u32, seed: u64) -> Result<OUPath, ExperimentError> {
    let window = steps_in(horizon, base_dt, "pullback horizon")?;
    let mut w = sample_wiener_anchored(0.0, horizon + OU_BURN_IN, base_dt, seed)?;
    for _ in 0..levels {
        w = refine_wiener(&w);
    }
    let fine_window = window << levels;
    let start = w.steps() - fine_window;
    let ou = ou_from_wiener_with(Arc::new(w), OuInit::Stationary, OuUpdate::ExactMarginal);
    Ok(ou.window_from(start))
}

/// Solves the random equation from `v0` at `-horizon` to `0`, with the noise
/// grid refined `levels` times below `cfg.dt`.
pub fn pullback_trajectory(
    v0: &SpectralField,
    cfg: &SimConfig,
    horizon: f64,
    seed: u64,
    levels: u32,
) -> Result<Trajectory, ExperimentError> {
    let ou = pullback_noise(horizon, cfg.dt, levels, seed)?;
    let fine = cfg.clone().with_dt(ou.dt())?;
    Ok(integrate(v0, Driver::Random(&ou), &fine)?)
}

/// Final states at time 0, one per member of the initial family.
pub fn pullback_solve(spec: &PullbackSpec) -> Result<Vec<State>, ExperimentError> {
    if !(spec.horizon >= 0.0) {
        return Err(ExperimentError::Invalid(format!("horizon must be nonnegative, got {}", spec.horizon)));
    }
    if spec.initial.is_empty() {
        return Err(ExperimentError::Invalid("initial family is empty".into()));
    }
    let ou = pullback_noise(spec.horizon, spec.cfg.dt, spec.refine, spec.seed)?;
    let fine = spec.cfg.clone().with_dt(ou.dt())?;
    spec.initial
        .par_iter()
        .map(|v0| Ok(integrate(v0, Driver::Random(&ou), &fine)?.final_state))
        .collect()
}
