use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distance_to_set, pullback_trajectory, AttractorSample, ExperimentError};
use crate::dynamics::SimConfig;
use crate::spectral::{random_divfree_field, sobolev_norm_unchecked, to_physical, EnergyProfile, Spectrum};

/// Refinements allowed below `cfg.dt` for large initial data.
const MAX_REFINE: u32 = 16;

const SHAPE_SEED: u64 = 0x2545_f491_4f6c_dd1d;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingSpec {
    /// H-norms of the initial data.
    pub radii: Vec<f64>,
    /// Pullback times.
    pub horizons: Vec<f64>,
    pub seeds: Vec<u64>,
    /// Shape of the initial data; every radius scales the same field.
    pub shape: Spectrum,
    /// Advective Courant number `dt max|v(0)| / dx` that sets the step for
    /// large data; `dt` is halved (with Brownian-bridge noise refinement)
    /// until it is met.
    pub courant: f64,
}

impl AbsorbingSpec {
    pub fn new(radii: Vec<f64>, horizons: Vec<f64>, seeds: Vec<u64>) -> Self {
        Self {
            radii,
            horizons,
            seeds,
            shape: Spectrum::LowestShell,
            courant: 0.25,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingRow {
    pub seed: u64,
    pub radius: f64,
    pub horizon: f64,
    pub dt: f64,
    pub norm_h: f64,
    pub norm_h1: f64,
    pub norm_h2: f64,
    /// H^2 distance to the attractor sample, when one is given.
    pub dist_h2: Option<f64>,
    pub error: Option<String>,
}

/// Sup over the initial family at one (seed, horizon).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub seed: u64,
    pub horizon: f64,
    pub radius_h: f64,
    pub radius_h1: f64,
    pub radius_h2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingReport {
    pub spec: AbsorbingSpec,
    pub rows: Vec<AbsorbingRow>,
    pub estimates: Vec<RadiusEstimate>,
    /// Smallest horizon from which the H radius estimate is non-increasing
    /// in the horizon for every seed.
    pub absorbing_time: Option<f64>,
}

impl AbsorbingReport {
    pub fn row(&self, seed: u64, radius: f64, horizon: f64) -> Option<&AbsorbingRow> {
        self.rows
            .iter()
            .find(|r| r.seed == seed && r.radius == radius && r.horizon == horizon)
    }
}

/// Pulls back the family `{r e : r in radii}` along each seed's noise and
/// records final norms at time 0 for every horizon.
pub fn measure_absorbing(
    cfg: &SimConfig,
    spec: &AbsorbingSpec,
    sample: Option<&AttractorSample>,
) -> Result<AbsorbingReport, ExperimentError> {
    if spec.radii.is_empty() || spec.horizons.is_empty() || spec.seeds.is_empty() {
        return Err(ExperimentError::Invalid("radii, horizons and seeds must be nonempty".into()));
    }
    if spec.radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(ExperimentError::Invalid("radii must be nonnegative".into()));
    }
    if !(spec.courant > 0.0) {
        return Err(ExperimentError::Invalid("Courant number must be positive".into()));
    }
    let mut cells = Vec::new();
    for &seed in &spec.seeds {
        for &radius in &spec.radii {
            for &horizon in &spec.horizons {
                cells.push((seed, radius, horizon));
            }
        }
    }
    let dx = cfg.grid.spacing();
    let rows = cells
        .par_iter()
        .map(|&(seed, radius, horizon)| {
            let profile = EnergyProfile {
                spectrum: spec.shape,
                norm: radius,
            };
            let v0 = random_divfree_field(&cfg.grid, &profile, seed ^ SHAPE_SEED);
            let speed = to_physical(&v0).max_speed();
            let mut levels = 0;
            while levels < MAX_REFINE && cfg.dt / f64::from(1u32 << levels) * speed / dx > spec.courant {
                levels += 1;
            }
            let dt = cfg.dt / f64::from(1u32 << levels);
            let failed = |e: String| AbsorbingRow {
                seed,
                radius,
                horizon,
                dt,
                norm_h: f64::NAN,
                norm_h1: f64::NAN,
                norm_h2: f64::NAN,
                dist_h2: None,
                error: Some(e),
            };
            let v = match pullback_trajectory(&v0, cfg, horizon, seed, levels) {
                Ok(tr) => tr.final_state.v,
                Err(ExperimentError::Invalid(msg)) => return Err(ExperimentError::Invalid(msg)),
                Err(e) => return Ok(failed(e.to_string())),
            };
            let dist_h2 = sample.map(|s| distance_to_set(&v, s, 2)).transpose()?;
            Ok(AbsorbingRow {
                seed,
                radius,
                horizon,
                dt,
                norm_h: sobolev_norm_unchecked(&v, 0.0),
                norm_h1: sobolev_norm_unchecked(&v, 1.0),
                norm_h2: sobolev_norm_unchecked(&v, 2.0),
                dist_h2,
                error: None,
            })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let mut horizons = spec.horizons.clone();
    horizons.sort_by(f64::total_cmp);
    horizons.dedup();
    let mut estimates = Vec::new();
    for &seed in &spec.seeds {
        for &horizon in &horizons {
            let sel: Vec<&AbsorbingRow> = rows.iter().filter(|r| r.seed == seed && r.horizon == horizon).collect();
            let sup = |f: fn(&AbsorbingRow) -> f64| sel.iter().map(|r| f(r)).fold(f64::NEG_INFINITY, f64::max);
            estimates.push(RadiusEstimate {
                seed,
                horizon,
                radius_h: sup(|r| r.norm_h),
                radius_h1: sup(|r| r.norm_h1),
                radius_h2: sup(|r| r.norm_h2),
            });
        }
    }
    let absorbing_time = horizons.iter().copied().find(|&t0| {
        spec.seeds.iter().all(|&seed| {
            let tail: Vec<f64> = estimates
                .iter()
                .filter(|e| e.seed == seed && e.horizon >= t0)
                .map(|e| e.radius_h)
                .collect();
            tail.iter().all(|r| r.is_finite()) && tail.windows(2).all(|w| w[1] <= w[0])
        })
    });
    Ok(AbsorbingReport {
        spec: spec.clone(),
        rows,
        estimates,
        absorbing_time,
    })
}
