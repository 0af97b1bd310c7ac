use super::{steps_in, ExperimentError};
use crate::dynamics::{Integrator, SimConfig, State};
use crate::spectral::{sobolev_norm_unchecked, SpectralField};

/// Finite sample of a deterministic long-time state set, used as a stand-in
/// for the global attractor of the unforced-noise equation.
#[derive(Clone, Debug, PartialEq)]
pub struct AttractorSample {
    pub states: Vec<SpectralField>,
    pub t_transient: f64,
    /// Steps between samples.
    pub stride: usize,
    pub norms_h1: Vec<f64>,
    pub norms_h2: Vec<f64>,
}

impl AttractorSample {
    /// Wraps explicit states, e.g. a known equilibrium.
    pub fn from_states(states: Vec<SpectralField>) -> Result<Self, ExperimentError> {
        if states.is_empty() {
            return Err(ExperimentError::EmptySample);
        }
        let norms_h1 = states.iter().map(|u| sobolev_norm_unchecked(u, 1.0)).collect();
        let norms_h2 = states.iter().map(|u| sobolev_norm_unchecked(u, 2.0)).collect();
        Ok(Self {
            states,
            t_transient: 0.0,
            stride: 1,
            norms_h1,
            norms_h2,
        })
    }

    pub fn count(&self) -> usize {
        self.states.len()
    }

    /// Largest H^2 distance between two sampled states.
    pub fn diameter_h2(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.states.iter().enumerate() {
            for b in &self.states[i + 1..] {
                let mut diff = a.clone();
                diff.add_scaled(-1.0, b);
                d = d.max(sobolev_norm_unchecked(&diff, 2.0));
            }
        }
        d
    }
}

/// Runs the deterministic equation from `v0` for `t_transient`, then records
/// `count` states `stride` steps apart.
pub fn sample_attractor_deterministic(
    cfg: &SimConfig,
    v0: &SpectralField,
    t_transient: f64,
    count: usize,
    stride: usize,
) -> Result<AttractorSample, ExperimentError> {
    if !(t_transient > 0.0) {
        return Err(ExperimentError::Invalid(format!("transient must be positive, got {t_transient}")));
    }
    if count == 0 || stride == 0 {
        return Err(ExperimentError::Invalid("count and stride must be at least 1".into()));
    }
    let transient = steps_in(t_transient, cfg.dt, "transient")?;
    let integrator = Integrator::new(cfg)?;
    let mut state = State::new(0.0, v0.clone());
    for _ in 0..transient {
        state = integrator.step_deterministic(&state)?;
    }
    let mut states = vec![state.v.clone()];
    while states.len() < count {
        for _ in 0..stride {
            state = integrator.step_deterministic(&state)?;
        }
        states.push(state.v.clone());
    }
    let mut sample = AttractorSample::from_states(states)?;
    sample.t_transient = t_transient;
    sample.stride = stride;
    Ok(sample)
}

/// `min_b ||v - b||_{H^s}` over the sample.
pub fn distance_to_set(v: &SpectralField, sample: &AttractorSample, s: u32) -> Result<f64, ExperimentError> {
    if sample.states.is_empty() {
        return Err(ExperimentError::EmptySample);
    }
    let mut best = f64::INFINITY;
    for b in &sample.states {
        let diff = v.difference(b)?;
        best = best.min(sobolev_norm_unchecked(&diff, s as f64));
    }
    Ok(best)
}
