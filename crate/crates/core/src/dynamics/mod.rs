//! Time integration of the deterministic, Ito stochastic and OU-conjugated
//! random Navier-Stokes systems.
//!
//! The viscous term is integrated exactly through per-mode exponentials;
//! advection, forcing and the `z`-terms are explicit. Pressure never
//! appears: every step ends with a Leray projection.

mod assumption;
mod config;
mod integrator;
mod taylor_green;

pub use assumption::{check_assumption, AssumptionReport};
pub use config::{check_in_h, Scheme, SimConfig};
pub use integrator::{
    conjugate, integrate, integrate_observed, step_deterministic, step_em_stochastic, step_random, Driver,
    Integrator, NormRow, NormSeries, State, Trajectory,
};
pub use taylor_green::taylor_green;

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite coefficient in the step leaving t = {t} (step {step}); solver aborted")]
    NonFinite {
        t: f64,
        step: u64,
        last_valid: Box<State>,
    },
    #[error("path time step {path} does not match solver dt {config}")]
    DtMismatch { path: f64, config: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("scheme mismatch: {0}")]
    SchemeMismatch(String),
}
