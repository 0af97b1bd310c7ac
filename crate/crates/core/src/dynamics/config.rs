use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::spectral::{relative_divergence, SpectralField, WaveGrid};

/// Time-stepping scheme.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Exponential Euler: exact viscous decay, first-order explicit forcing.
    Etd1,
    /// Exponential integrator with a two-step (Adams-Bashforth type)
    /// explicit part, bootstrapped by one `Etd1` step.
    #[default]
    Etd2,
    /// Semi-implicit Euler-Maruyama for the Ito equation in `u_h`.
    Em,
}

/// Parameters shared by every solver.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub nu: f64,
    pub grid: WaveGrid,
    pub dt: f64,
    /// Body force `f` in H.
    pub forcing: SpectralField,
    /// Spatial noise profile `h`, band-limited inside the dealiasing mask.
    pub noise: SpectralField,
    pub scheme: Scheme,
    pub seed: u64,
    /// Observer stride in steps.
    pub stride: usize,
    /// When false the advection term is dropped (linear test mode).
    pub nonlinear: bool,
}

/// Tolerances for field invariants.
const HERMITIAN_TOL: f64 = 1e-12;
const DIVERGENCE_TOL: f64 = 1e-12;

impl SimConfig {
    /// Unforced, noise-free configuration with default scheme and stride.
    pub fn new(grid: &WaveGrid, nu: f64, dt: f64) -> Result<Self, DynamicsError> {
        let cfg = Self {
            nu,
            grid: grid.clone(),
            dt,
            forcing: SpectralField::zeros(grid),
            noise: SpectralField::zeros(grid),
            scheme: Scheme::default(),
            seed: 0,
            stride: 10,
            nonlinear: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_forcing(mut self, f: SpectralField) -> Result<Self, DynamicsError> {
        self.forcing = f;
        self.validate()?;
        Ok(self)
    }

    pub fn with_noise(mut self, h: SpectralField) -> Result<Self, DynamicsError> {
        self.noise = h;
        self.validate()?;
        Ok(self)
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dt(mut self, dt: f64) -> Result<Self, DynamicsError> {
        self.dt = dt;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!(
                "viscosity must be positive, got {}",
                self.nu
            )));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(DynamicsError::InvalidConfig(format!(
                "time step must be positive, got {}",
                self.dt
            )));
        }
        if self.stride == 0 {
            return Err(DynamicsError::InvalidConfig("stride must be at least 1".into()));
        }
        check_in_h("forcing", &self.forcing, &self.grid)?;
        check_in_h("noise", &self.noise, &self.grid)?;
        if !self.noise.is_band_limited() {
            return Err(DynamicsError::InvalidConfig(
                "noise profile must be band-limited inside the dealiasing mask".into(),
            ));
        }
        Ok(())
    }

    pub fn has_noise(&self) -> bool {
        self.noise.max_abs() > 0.0
    }
}

/// Checks the invariants of H: real, zero mean, divergence-free, finite.
pub fn check_in_h(name: &str, u: &SpectralField, grid: &WaveGrid) -> Result<(), DynamicsError> {
    if u.grid() != grid {
        return Err(DynamicsError::InvalidConfig(format!("{name} lives on a different grid")));
    }
    if !u.is_finite() {
        return Err(DynamicsError::InvalidConfig(format!("{name} has non-finite coefficients")));
    }
    let scale = u.max_abs();
    if scale == 0.0 {
        return Ok(());
    }
    if u.hermitian_defect() > HERMITIAN_TOL * scale {
        return Err(DynamicsError::InvalidConfig(format!("{name} is not a real field")));
    }
    let mean = u.mode(0);
    if mean[0].norm().max(mean[1].norm()) > HERMITIAN_TOL * scale {
        return Err(DynamicsError::InvalidConfig(format!("{name} has nonzero mean")));
    }
    if relative_divergence(u) > DIVERGENCE_TOL {
        return Err(DynamicsError::InvalidConfig(format!("{name} is not divergence-free")));
    }
    Ok(())
}
