use serde::{Deserialize, Serialize};

use super::{DynamicsError, Scheme, SimConfig};
use crate::noise::{OUPath, WienerPath};
use crate::spectral::{
    apply_stokes_power, leray_project_in_place, nonlinear_unchecked, sobolev_norm_unchecked, SpectralField,
};

/// Solver state. `v` is the conjugated unknown for the random system and
/// `u_h` itself for the Ito system; `z` is the current OU value (zero when
/// no OU path drives the run).
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub v: SpectralField,
    pub z: f64,
    /// Explicit right-hand side of the previous step, for the two-step scheme.
    pub history: Option<SpectralField>,
    pub step: u64,
}

impl State {
    pub fn new(t: f64, v: SpectralField) -> Self {
        Self {
            t,
            v,
            z: 0.0,
            history: None,
            step: 0,
        }
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }
}

/// `phi_1(x) = (e^x - 1)/x` and `phi_2(x) = (e^x - 1 - x)/x^2`, with series
/// near zero.
fn phi_functions(x: f64) -> (f64, f64) {
    if x.abs() < 1e-2 {
        let mut phi1 = 0.0;
        let mut phi2 = 0.0;
        // sum x^k/(k+1)! and x^k/(k+2)!
        let mut term1 = 1.0;
        let mut term2 = 0.5;
        for k in 0..10 {
            phi1 += term1;
            phi2 += term2;
            term1 *= x / (k as f64 + 2.0);
            term2 *= x / (k as f64 + 3.0);
        }
        (phi1, phi2)
    } else {
        let em1 = x.exp_m1();
        (em1 / x, (em1 - x) / (x * x))
    }
}

/// Precomputed exponential-integrator weights for one configuration.
#[derive(Clone, Debug)]
pub struct Integrator {
    cfg: SimConfig,
    decay: Vec<f64>,
    phi1_dt: Vec<f64>,
    phi2_dt: Vec<f64>,
    /// `h - nu A h`: the z-proportional forcing of the random system.
    z_forcing: SpectralField,
}

impl Integrator {
    pub fn new(cfg: &SimConfig) -> Result<Self, DynamicsError> {
        cfg.validate()?;
        let grid = &cfg.grid;
        let mut decay = Vec::with_capacity(grid.len());
        let mut phi1_dt = Vec::with_capacity(grid.len());
        let mut phi2_dt = Vec::with_capacity(grid.len());
        for &k2 in grid.k_squared() {
            let x = -cfg.nu * k2 * cfg.dt;
            let (p1, p2) = phi_functions(x);
            decay.push(x.exp());
            phi1_dt.push(p1 * cfg.dt);
            phi2_dt.push(p2 * cfg.dt);
        }
        let mut z_forcing = cfg.noise.clone();
        z_forcing.add_scaled(-cfg.nu, &apply_stokes_power(&cfg.noise, 1.0));
        Ok(Self {
            cfg: cfg.clone(),
            decay,
            phi1_dt,
            phi2_dt,
            z_forcing,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// `f - B(w)` (or just `f` in linear mode).
    fn drift(&self, w: &SpectralField) -> SpectralField {
        let mut out = self.cfg.forcing.clone();
        if self.cfg.nonlinear {
            out.add_scaled(-1.0, &nonlinear_unchecked(w, w));
        }
        out
    }

    /// Exponential update of `v` with explicit term `rhs` (and `prev` for the
    /// two-step correction).
    fn advance(&self, v: &SpectralField, rhs: &SpectralField, prev: Option<&SpectralField>) -> SpectralField {
        let grid = &self.cfg.grid;
        let mut out = SpectralField::zeros(grid);
        for c in 0..2 {
            let vc = v.component(c);
            let rc = rhs.component(c);
            let oc = out.component_mut(c);
            for idx in 0..grid.len() {
                oc[idx] = vc[idx] * self.decay[idx] + rc[idx] * self.phi1_dt[idx];
            }
            if let Some(prev) = prev {
                let pc = prev.component(c);
                for idx in 0..grid.len() {
                    oc[idx] += (rc[idx] - pc[idx]) * self.phi2_dt[idx];
                }
            }
        }
        out
    }

    fn finish(&self, state: &State, mut v: SpectralField, z: f64, history: Option<SpectralField>) -> Result<State, DynamicsError> {
        leray_project_in_place(&mut v);
        if !v.is_finite() {
            return Err(DynamicsError::NonFinite {
                t: state.t,
                step: state.step,
                last_valid: Box::new(state.clone()),
            });
        }
        Ok(State {
            t: state.t + self.cfg.dt,
            v,
            z,
            history,
            step: state.step + 1,
        })
    }

    fn two_step(&self) -> bool {
        self.cfg.scheme == Scheme::Etd2
    }

    /// One step of `du/dt + nu A u + B(u) = f`.
    pub fn step_deterministic(&self, state: &State) -> Result<State, DynamicsError> {
        let rhs = self.drift(&state.v);
        let prev = if self.two_step() { state.history.as_ref() } else { None };
        let v = self.advance(&state.v, &rhs, prev);
        let history = self.two_step().then_some(rhs);
        self.finish(state, v, state.z, history)
    }

    /// One step of the conjugated random equation
    /// `dv/dt + nu A v + B(v + h z) = f - nu A h z + h z`, with `z` frozen at
    /// its left-endpoint value `z_n` inside the step.
    pub fn step_random(&self, state: &State, z_n: f64, z_next: f64) -> Result<State, DynamicsError> {
        let mut shifted = state.v.clone();
        shifted.add_scaled(z_n, &self.cfg.noise);
        let mut rhs = self.drift(&shifted);
        rhs.add_scaled(z_n, &self.z_forcing);
        let prev = if self.two_step() { state.history.as_ref() } else { None };
        let v = self.advance(&state.v, &rhs, prev);
        let history = self.two_step().then_some(rhs);
        self.finish(state, v, z_next, history)
    }

    /// One semi-implicit Euler-Maruyama step of the Ito equation
    /// `du + (nu A u + B(u)) dt = f dt + h dW`. The additive increment is
    /// applied after the exponential viscous update.
    pub fn step_em(&self, state: &State, dw: f64) -> Result<State, DynamicsError> {
        let rhs = self.drift(&state.v);
        let mut v = self.advance(&state.v, &rhs, None);
        v.add_scaled(dw, &self.cfg.noise);
        self.finish(state, v, state.z, None)
    }
}

pub fn step_deterministic(state: &State, cfg: &SimConfig) -> Result<State, DynamicsError> {
    Integrator::new(cfg)?.step_deterministic(state)
}

pub fn step_random(state: &State, z_n: f64, z_next: f64, cfg: &SimConfig) -> Result<State, DynamicsError> {
    Integrator::new(cfg)?.step_random(state, z_n, z_next)
}

pub fn step_em_stochastic(state: &State, dw: f64, cfg: &SimConfig) -> Result<State, DynamicsError> {
    Integrator::new(cfg)?.step_em(state, dw)
}

/// `u_h = v + h z`.
pub fn conjugate(v: &SpectralField, z: f64, h: &SpectralField) -> Result<SpectralField, DynamicsError> {
    if v.grid() != h.grid() {
        return Err(DynamicsError::GridMismatch);
    }
    let mut out = v.clone();
    out.add_scaled(z, h);
    Ok(out)
}

/// What drives a trajectory.
#[derive(Clone, Copy, Debug)]
pub enum Driver<'a> {
    /// Deterministic equation for `steps` steps starting at `t0`.
    Deterministic { t0: f64, steps: usize },
    /// Conjugated random equation along an OU path.
    Random(&'a OUPath),
    /// Ito equation along a Wiener path (Euler-Maruyama).
    Stochastic(&'a WienerPath),
}

/// One observer record.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub t: f64,
    pub norm_h: f64,
    pub norm_h1: f64,
    pub norm_h2: f64,
    /// OU value, absent for runs without an OU path.
    pub z: Option<f64>,
}

impl NormRow {
    pub fn of(state: &State, z: Option<f64>) -> Self {
        Self {
            t: state.t,
            norm_h: sobolev_norm_unchecked(&state.v, 0.0),
            norm_h1: sobolev_norm_unchecked(&state.v, 1.0),
            norm_h2: sobolev_norm_unchecked(&state.v, 2.0),
            z,
        }
    }
}

pub type NormSeries = Vec<NormRow>;

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub final_state: State,
    pub series: NormSeries,
}

fn check_dt(path_dt: f64, cfg: &SimConfig) -> Result<(), DynamicsError> {
    if (path_dt - cfg.dt).abs() > 1e-12 * cfg.dt {
        return Err(DynamicsError::DtMismatch {
            path: path_dt,
            config: cfg.dt,
        });
    }
    Ok(())
}

/// Runs a trajectory from `v0`, recording norms every `cfg.stride` steps, and
/// calling `on_step` after every step (and once for the initial state).
pub fn integrate_observed(
    v0: &SpectralField,
    driver: Driver<'_>,
    cfg: &SimConfig,
    mut on_step: impl FnMut(&State),
) -> Result<Trajectory, DynamicsError> {
    if v0.grid() != &cfg.grid {
        return Err(DynamicsError::GridMismatch);
    }
    let integrator = Integrator::new(cfg)?;
    let stride = cfg.stride;
    let mut series = NormSeries::new();
    let (mut state, steps, has_z) = match driver {
        Driver::Deterministic { t0, steps } => (State::new(t0, v0.clone()), steps, false),
        Driver::Random(ou) => {
            check_dt(ou.dt(), cfg)?;
            if cfg.scheme == Scheme::Em {
                return Err(DynamicsError::SchemeMismatch(
                    "the random equation needs an exponential scheme (etd1 or etd2)".into(),
                ));
            }
            (State::new(ou.t0(), v0.clone()).with_z(ou.values()[0]), ou.steps(), true)
        }
        Driver::Stochastic(w) => {
            check_dt(w.dt(), cfg)?;
            (State::new(w.t0(), v0.clone()), w.steps(), false)
        }
    };
    let z_of = |s: &State| has_z.then_some(s.z);
    series.push(NormRow::of(&state, z_of(&state)));
    on_step(&state);
    for n in 0..steps {
        state = match driver {
            Driver::Deterministic { .. } => integrator.step_deterministic(&state)?,
            Driver::Random(ou) => {
                let z = ou.values();
                let mut next = integrator.step_random(&state, z[n], z[n + 1])?;
                next.t = ou.time(n + 1);
                next
            }
            Driver::Stochastic(w) => {
                let mut next = integrator.step_em(&state, w.increments()[n])?;
                next.t = w.time(n + 1);
                next
            }
        };
        on_step(&state);
        if (n + 1) % stride == 0 {
            series.push(NormRow::of(&state, z_of(&state)));
        }
    }
    Ok(Trajectory {
        final_state: state,
        series,
    })
}

pub fn integrate(v0: &SpectralField, driver: Driver<'_>, cfg: &SimConfig) -> Result<Trajectory, DynamicsError> {
    integrate_observed(v0, driver, cfg, |_| {})
}
