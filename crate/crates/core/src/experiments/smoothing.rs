use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{median, steps_in, ExperimentError};
use crate::dynamics::{integrate_observed, Driver, SimConfig};
use crate::noise::{ou_from_wiener_with, sample_wiener, OUPath, OuInit, OuUpdate};
use crate::spectral::{random_divfree_field, sobolev_norm_unchecked, EnergyProfile, SpectralField, Spectrum};

/// Largest max/min ratio across perturbation sizes still called scale-stable.
pub const SCALE_STABLE_FACTOR: f64 = 3.0;

const DIRECTION_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

/// Shape of the perturbation `v_2(0) - v_1(0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Random divergence-free field, flat over all retained modes.
    RandomUnit,
    /// Random combination of the `|j| = 1` modes, the slowest to smooth.
    LowestShell,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::RandomUnit => "random-unit",
            Direction::LowestShell => "lowest-shell",
        }
    }

    /// Unit vector in H for a given seed.
    pub fn field(self, cfg: &SimConfig, seed: u64) -> SpectralField {
        let profile = match self {
            Direction::RandomUnit => EnergyProfile {
                spectrum: Spectrum::Band {
                    kmin: 1.0,
                    kmax: f64::INFINITY,
                    slope: 0.0,
                },
                norm: 1.0,
            },
            Direction::LowestShell => EnergyProfile::lowest_shell(1.0),
        };
        let salt = match self {
            Direction::RandomUnit => 1,
            Direction::LowestShell => 2,
        };
        random_divfree_field(&cfg.grid, &profile, seed ^ DIRECTION_SEED.wrapping_mul(salt))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingSpec {
    /// Law of the reference initial datum `v_1(0)`, drawn per seed.
    pub base: EnergyProfile,
    /// Perturbation sizes in H.
    pub deltas: Vec<f64>,
    /// Observation times, multiples of `dt`.
    pub times: Vec<f64>,
    pub directions: Vec<Direction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingRow {
    pub seed: u64,
    pub direction: Direction,
    /// `||v_1(0) - v_2(0)||_H` as realized.
    pub delta0: f64,
    pub t: f64,
    /// `||v_1(t) - v_2(t)||_{H^2}^2`.
    pub dist_h2_sq: f64,
    /// `dist_h2_sq / delta0^2`, zero for coinciding data.
    pub ratio: f64,
    pub error: Option<String>,
}

/// Spread of the ratio across perturbation sizes for one (seed, direction, T).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpread {
    pub seed: u64,
    pub direction: Direction,
    pub t: f64,
    /// `max ratio / min ratio` over positive perturbations.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub seeds: Vec<u64>,
    pub rows: Vec<SmoothingRow>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub spreads: Vec<ScaleSpread>,
    /// First observation time at which every spread is below
    /// [`SCALE_STABLE_FACTOR`].
    pub stable_time: Option<f64>,
}

/// `max_k |k|^4 exp(-2 nu |k|^2 T)` over the active modes: the squared
/// H-to-H^2 gain of the heat semigroup.
pub fn linear_smoothing_bound(cfg: &SimConfig, t: f64) -> f64 {
    let g = &cfg.grid;
    (0..g.len())
        .filter(|&i| g.is_active(i))
        .map(|i| {
            let k2 = g.k_squared()[i];
            k2 * k2 * (-2.0 * cfg.nu * k2 * t).exp()
        })
        .fold(0.0, f64::max)
}

fn capture(v0: &SpectralField, ou: &OUPath, cfg: &SimConfig, at: &[usize]) -> Result<Vec<SpectralField>, ExperimentError> {
    let mut out = Vec::with_capacity(at.len());
    integrate_observed(v0, Driver::Random(ou), cfg, |s| {
        if at.contains(&(s.step as usize)) {
            out.push(s.v.clone());
        }
    })?;
    Ok(out)
}

/// Runs pairs `v_1(0)`, `v_2(0) = v_1(0) + delta e` along the same noise path
/// (OU started stationary at 0) and records the H-to-H^2 Lipschitz ratio at
/// each observation time.
pub fn measure_smoothing(cfg: &SimConfig, spec: &SmoothingSpec, seeds: &[u64]) -> Result<SmoothingReport, ExperimentError> {
    if spec.deltas.iter().any(|d| !(*d >= 0.0)) {
        return Err(ExperimentError::Invalid("perturbation sizes must be nonnegative".into()));
    }
    if spec.times.is_empty() || spec.deltas.is_empty() || spec.directions.is_empty() {
        return Err(ExperimentError::Invalid("times, deltas and directions must be nonempty".into()));
    }
    let mut times = spec.times.clone();
    times.sort_by(f64::total_cmp);
    let steps = times
        .iter()
        .map(|&t| {
            if t > 0.0 {
                steps_in(t, cfg.dt, "observation time")
            } else {
                Err(ExperimentError::Invalid(format!("observation times must be positive, got {t}")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t_max = *times.last().unwrap();

    struct Base {
        ou: OUPath,
        v0: SpectralField,
        states: Result<Vec<SpectralField>, String>,
    }
    let bases = seeds
        .par_iter()
        .map(|&seed| {
            let w = Arc::new(sample_wiener(0.0, t_max, cfg.dt, seed)?);
            let ou = ou_from_wiener_with(w, OuInit::Stationary, OuUpdate::ExactMarginal);
            let v0 = random_divfree_field(&cfg.grid, &spec.base, seed);
            let states = capture(&v0, &ou, cfg, &steps).map_err(|e| e.to_string());
            Ok(Base { ou, v0, states })
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;

    let cells: Vec<(usize, Direction, f64)> = (0..seeds.len())
        .flat_map(|s| {
            spec.directions
                .iter()
                .flat_map(move |&d| spec.deltas.iter().map(move |&delta| (s, d, delta)))
        })
        .collect();
    let rows: Vec<Vec<SmoothingRow>> = cells
        .par_iter()
        .map(|&(s, direction, delta)| {
            let seed = seeds[s];
            let base = &bases[s];
            let mut v2 = base.v0.clone();
            v2.add_scaled(delta, &direction.field(cfg, seed));
            let delta0 = sobolev_norm_unchecked(&v2.difference(&base.v0).expect("same grid"), 0.0);
            let result = base
                .states
                .clone()
                .and_then(|b| capture(&v2, &base.ou, cfg, &steps).map(|p| (b, p)).map_err(|e| e.to_string()));
            times
                .iter()
                .enumerate()
                .map(|(i, &t)| match &result {
                    Ok((b, p)) => {
                        let d = sobolev_norm_unchecked(&p[i].difference(&b[i]).expect("same grid"), 2.0);
                        let dist_h2_sq = d * d;
                        SmoothingRow {
                            seed,
                            direction,
                            delta0,
                            t,
                            dist_h2_sq,
                            ratio: if delta0 > 0.0 { dist_h2_sq / (delta0 * delta0) } else { 0.0 },
                            error: None,
                        }
                    }
                    Err(e) => SmoothingRow {
                        seed,
                        direction,
                        delta0,
                        t,
                        dist_h2_sq: f64::NAN,
                        ratio: f64::NAN,
                        error: Some(e.clone()),
                    },
                })
                .collect()
        })
        .collect();
    let rows: Vec<SmoothingRow> = rows.into_iter().flatten().collect();

    let mut spreads = Vec::new();
    for &seed in seeds {
        for &direction in &spec.directions {
            for &t in &times {
                let ratios: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.seed == seed && r.direction == direction && r.t == t && r.delta0 > 0.0)
                    .map(|r| r.ratio)
                    .collect();
                if ratios.is_empty() {
                    continue;
                }
                let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
                let spread = if ratios.iter().all(|r| r.is_finite()) { hi / lo } else { f64::NAN };
                spreads.push(ScaleSpread {
                    seed,
                    direction,
                    t,
                    spread,
                });
            }
        }
    }
    let stable_time = times.iter().copied().find(|&t| {
        spreads
            .iter()
            .filter(|s| s.t == t)
            .all(|s| s.spread < SCALE_STABLE_FACTOR)
    });
    let finite = rows.iter().map(|r| r.ratio).filter(|r| r.is_finite());
    Ok(SmoothingReport {
        seeds: seeds.to_vec(),
        max_ratio: finite.clone().fold(f64::NEG_INFINITY, f64::max),
        median_ratio: median(finite).unwrap_or(f64::NAN),
        rows,
        spreads,
        stable_time,
    })
}
