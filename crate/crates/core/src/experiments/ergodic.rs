use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::noise::{empirical_moment, ou_from_wiener_with, ou_stationary_moment, sample_wiener, OuInit, OuUpdate};

/// Shortest horizon accepted for a time average.
const MIN_HORIZON: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicRow {
    pub seed: u64,
    pub m: u32,
    pub empirical: f64,
    pub exact: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErgodicReport {
    pub t_end: f64,
    pub dt: f64,
    pub rows: Vec<ErgodicRow>,
}

impl ErgodicReport {
    /// Largest relative error for moment `m` over all seeds.
    pub fn worst(&self, m: u32) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.m == m)
            .map(|r| r.rel_error)
            .reduce(f64::max)
    }
}

/// Time averages of `|z|^m` along stationary OU paths on `[0, t_end]`,
/// compared with the Gaussian moments of the invariant law.
///
/// Paths use the exact OU transition so the invariant law is `N(0, 1/2)` at
/// any `dt`.
pub fn ergodic_check(t_end: f64, dt: f64, seeds: &[u64], moments: &[u32]) -> Result<ErgodicReport, ExperimentError> {
    if !(t_end >= MIN_HORIZON) {
        return Err(ExperimentError::Invalid(format!(
            "time averages need T >= {MIN_HORIZON}, got {t_end}"
        )));
    }
    let exact = moments
        .iter()
        .map(|&m| ou_stationary_moment(m))
        .collect::<Result<Vec<_>, _>>()?;
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let w = Arc::new(sample_wiener(0.0, t_end, dt, seed)?);
            let ou = ou_from_wiener_with(w, OuInit::Stationary, OuUpdate::ExactMarginal);
            moments
                .iter()
                .zip(&exact)
                .map(|(&m, &e)| {
                    let empirical = empirical_moment(&ou, m)?;
                    Ok(ErgodicRow {
                        seed,
                        m,
                        empirical,
                        exact: e,
                        rel_error: (empirical - e).abs() / e,
                    })
                })
                .collect::<Result<Vec<_>, ExperimentError>>()
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(ErgodicReport {
        t_end,
        dt,
        rows: per_seed.into_iter().flatten().collect(),
    })
}
