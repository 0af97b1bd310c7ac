//! Reproducible Wiener paths and the scalar Ornstein-Uhlenbeck process
//! `dz + z dt = dW` that conjugates the additive-noise equation to a
//! pathwise random PDE.
//!
//! All randomness is drawn from ChaCha streams keyed by `(seed, stream id)`,
//! so a path is a pure function of its parameters.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

const WIENER_STREAM: u64 = 1;
const OU_INIT_STREAM: u64 = 2;
const REFINE_STREAM_BASE: u64 = 0x100;

/// Minimum number of steps for a time average to be reported.
pub const MIN_AVERAGE_STEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NoiseError {
    #[error("time step must be positive and finite, got {0}")]
    NonPositiveStep(f64),
    #[error("interval [{t0}, {t1}] is empty")]
    EmptyInterval { t0: f64, t1: f64 },
    #[error("interval length {length} is not an integer multiple of dt = {dt}")]
    NonIntegralSteps { length: f64, dt: f64 },
    #[error("moment order must be at least 1, got {0}")]
    MomentOrder(u32),
    #[error("path has {steps} steps, at least {min} are needed")]
    PathTooShort { steps: usize, min: usize },
}

/// Which end of the interval the increments are drawn from.
///
/// `End` paths draw the increment closest to `t1` first, so extending the
/// interval into the past leaves every existing increment unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    Start,
    End,
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniformly gridded two-sided Wiener increments on `[t0, t1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WienerPath {
    t0: f64,
    t1: f64,
    dt: f64,
    increments: Vec<f64>,
    seed: u64,
    level: u32,
    anchor: Anchor,
    quantum: f64,
}

/// Dyadic grid that generated increments live on. Keeping every increment an
/// integer multiple of a fixed power of two makes bridge splitting exact.
fn quantum_for(dt: f64) -> f64 {
    2f64.powi(dt.sqrt().log2().floor() as i32 - 46)
}

fn quantize(x: f64, q: f64) -> f64 {
    (x / q).round() * q
}

fn step_count(t0: f64, t1: f64, dt: f64) -> Result<usize, NoiseError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(NoiseError::NonPositiveStep(dt));
    }
    if !(t1 > t0) {
        return Err(NoiseError::EmptyInterval { t0, t1 });
    }
    let ratio = (t1 - t0) / dt;
    let steps = ratio.round();
    if (ratio - steps).abs() > 1e-9 {
        return Err(NoiseError::NonIntegralSteps {
            length: t1 - t0,
            dt,
        });
    }
    Ok(steps as usize)
}

/// Wiener increments `dW_n ~ N(0, dt)` on `[t0, t1]`, drawn forward in time.
pub fn sample_wiener(t0: f64, t1: f64, dt: f64, seed: u64) -> Result<WienerPath, NoiseError> {
    let steps = step_count(t0, t1, dt)?;
    let mut rng = stream_rng(seed, WIENER_STREAM);
    let sd = dt.sqrt();
    let q = quantum_for(dt);
    let increments = (0..steps)
        .map(|_| quantize(sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng), q))
        .collect::<Vec<f64>>();
    Ok(WienerPath {
        t0,
        t1,
        dt,
        increments,
        seed,
        level: 0,
        anchor: Anchor::Start,
        quantum: q,
    })
}

/// Wiener increments on `[t1 - duration, t1]` drawn backwards from `t1`.
///
/// Two paths with the same `(t1, dt, seed)` agree bit-exactly on their
/// common window, whatever their durations.
pub fn sample_wiener_anchored(t1: f64, duration: f64, dt: f64, seed: u64) -> Result<WienerPath, NoiseError> {
    let steps = step_count(t1 - duration, t1, dt)?;
    let mut rng = stream_rng(seed, WIENER_STREAM);
    let sd = dt.sqrt();
    let q = quantum_for(dt);
    let mut increments = vec![0.0; steps];
    for slot in increments.iter_mut().rev() {
        *slot = quantize(sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng), q);
    }
    Ok(WienerPath {
        t0: t1 - steps as f64 * dt,
        t1,
        dt,
        increments,
        seed,
        level: 0,
        anchor: Anchor::End,
        quantum: q,
    })
}

impl WienerPath {
    /// Builds a path from explicit increments (used for degenerate test paths
    /// and for replaying exported data).
    pub fn from_increments(t0: f64, dt: f64, increments: Vec<f64>, seed: u64) -> Result<Self, NoiseError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(NoiseError::NonPositiveStep(dt));
        }
        Ok(Self {
            t0,
            t1: t0 + increments.len() as f64 * dt,
            dt,
            increments,
            seed,
            level: 0,
            anchor: Anchor::Start,
            quantum: quantum_for(dt),
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.increments.len()
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of dyadic refinements applied to the generated path.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn anchor(&self) -> Anchor {
        self.anchor
    }

    /// Time of grid node `i`, computed from the anchored end.
    pub fn time(&self, i: usize) -> f64 {
        match self.anchor {
            Anchor::Start => self.t0 + i as f64 * self.dt,
            Anchor::End => self.t1 - (self.steps() - i) as f64 * self.dt,
        }
    }

    /// Index of the grid node closest to `t`.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let i = ((t - self.t0) / self.dt).round();
        if i < 0.0 || i > self.steps() as f64 || ((t - self.t0) / self.dt - i).abs() > 1e-6 {
            return None;
        }
        Some(i as usize)
    }
}

/// Splits `dw` into `(dw/2 + offset, dw/2 - offset)` on the grid of spacing
/// `q`, so the floating-point sum of the pair is exactly `dw`. Increments not on
/// the grid (hand-built paths) are split without that guarantee.
fn split_increment(dw: f64, offset: f64, q: f64) -> (f64, f64) {
    const LIMIT: f64 = 9007199254740992.0; // 2^53
    let kd = dw / q;
    let ka = ((0.5 * dw + offset) / q).round();
    let kb = kd - ka;
    if kd.fract() == 0.0 && kd.abs() < LIMIT && ka.abs() < LIMIT && kb.abs() < LIMIT {
        return (ka * q, kb * q);
    }
    let a = 0.5 * dw + offset;
    (a, dw - a)
}

/// Halves `dt` by sampling Brownian-bridge midpoints.
///
/// Each coarse increment splits into a pair whose sum is the coarse value
/// bit-exactly; midpoint noise `N(0, dt/4)` comes from a stream keyed by the
/// path seed and the new level, consumed from the anchored end.
pub fn refine_wiener(path: &WienerPath) -> WienerPath {
    let level = path.level + 1;
    let mut rng = stream_rng(path.seed, REFINE_STREAM_BASE + level as u64);
    let sd = (path.dt / 4.0).sqrt();
    let n = path.steps();
    let mut fine = vec![0.0; 2 * n];
    let mut fill = |i: usize, rng: &mut ChaCha8Rng| {
        let xi: f64 = StandardNormal.sample(rng);
        let (a, b) = split_increment(path.increments[i], sd * xi, path.quantum);
        fine[2 * i] = a;
        fine[2 * i + 1] = b;
    };
    match path.anchor {
        Anchor::Start => (0..n).for_each(|i| fill(i, &mut rng)),
        Anchor::End => (0..n).rev().for_each(|i| fill(i, &mut rng)),
    }
    WienerPath {
        t0: path.t0,
        t1: path.t1,
        dt: path.dt / 2.0,
        increments: fine,
        seed: path.seed,
        level,
        anchor: path.anchor,
        quantum: path.quantum,
    }
}

/// Initial condition of an OU path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuInit {
    /// Draw `z_0 ~ N(0, 1/2)` from the path seed's dedicated stream.
    Stationary,
    Zero,
    Given(f64),
}

/// Discrete OU update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OuUpdate {
    /// `z_{n+1} = e^{-dt} z_n + dW_n`: driven by exactly the increments the
    /// Euler-Maruyama solver sees. Stationary variance is `1/2 + O(dt)`.
    SharedIncrement,
    /// Same increments rescaled by `sqrt((1 - e^{-2dt}) / (2dt))`, which
    /// makes `N(0, 1/2)` exactly invariant.
    ExactMarginal,
}

/// OU samples on the grid of a Wiener path.
#[derive(Clone, Debug, PartialEq)]
pub struct OUPath {
    wiener: Arc<WienerPath>,
    offset: usize,
    z: Vec<f64>,
    init: OuInit,
    update: OuUpdate,
}

/// OU path with the shared-increment update.
pub fn ou_from_wiener(path: &WienerPath, init: OuInit) -> OUPath {
    ou_from_wiener_with(Arc::new(path.clone()), init, OuUpdate::SharedIncrement)
}

pub fn ou_from_wiener_with(path: Arc<WienerPath>, init: OuInit, update: OuUpdate) -> OUPath {
    let z0 = match init {
        OuInit::Stationary => {
            let mut rng = stream_rng(path.seed, OU_INIT_STREAM);
            let xi: f64 = StandardNormal.sample(&mut rng);
            xi * std::f64::consts::FRAC_1_SQRT_2
        }
        OuInit::Zero => 0.0,
        OuInit::Given(z) => z,
    };
    let decay = (-path.dt).exp();
    let gain = match update {
        OuUpdate::SharedIncrement => 1.0,
        OuUpdate::ExactMarginal => (-(-2.0 * path.dt).exp_m1() / (2.0 * path.dt)).sqrt(),
    };
    let mut z = Vec::with_capacity(path.steps() + 1);
    z.push(z0);
    let mut cur = z0;
    for &dw in &path.increments {
        cur = decay * cur + gain * dw;
        z.push(cur);
    }
    OUPath {
        wiener: path,
        offset: 0,
        z,
        init,
        update,
    }
}

impl OUPath {
    pub fn wiener(&self) -> &WienerPath {
        &self.wiener
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn steps(&self) -> usize {
        self.z.len() - 1
    }

    pub fn dt(&self) -> f64 {
        self.wiener.dt
    }

    pub fn t0(&self) -> f64 {
        self.wiener.time(self.offset)
    }

    pub fn t1(&self) -> f64 {
        self.wiener.time(self.offset + self.steps())
    }

    pub fn time(&self, i: usize) -> f64 {
        self.wiener.time(self.offset + i)
    }

    pub fn init(&self) -> OuInit {
        self.init
    }

    pub fn update(&self) -> OuUpdate {
        self.update
    }

    /// Wiener increment driving the step `i -> i + 1`.
    pub fn increment(&self, i: usize) -> f64 {
        self.wiener.increments[self.offset + i]
    }

    /// The same path restricted to grid nodes `start..`.
    pub fn window_from(&self, start: usize) -> OUPath {
        let start = start.min(self.steps());
        OUPath {
            wiener: Arc::clone(&self.wiener),
            offset: self.offset + start,
            z: self.z[start..].to_vec(),
            init: self.init,
            update: self.update,
        }
    }
}

/// `E|z|^m = Gamma((1+m)/2) / sqrt(pi)` for the stationary OU law `N(0, 1/2)`.
pub fn ou_stationary_moment(m: u32) -> Result<f64, NoiseError> {
    if m < 1 {
        return Err(NoiseError::MomentOrder(m));
    }
    Ok(libm::tgamma((1.0 + m as f64) / 2.0) / std::f64::consts::PI.sqrt())
}

/// Trapezoidal time average `(1/T) int_0^T |z|^m dt` along the path.
pub fn empirical_moment(ou: &OUPath, m: u32) -> Result<f64, NoiseError> {
    if m < 1 {
        return Err(NoiseError::MomentOrder(m));
    }
    let steps = ou.steps();
    if steps < MIN_AVERAGE_STEPS {
        return Err(NoiseError::PathTooShort {
            steps,
            min: MIN_AVERAGE_STEPS,
        });
    }
    let p = |z: f64| z.abs().powi(m as i32);
    let interior: f64 = ou.z[1..steps].iter().map(|&z| p(z)).sum();
    let total = interior + 0.5 * (p(ou.z[0]) + p(ou.z[steps]));
    Ok(total / steps as f64)
}
