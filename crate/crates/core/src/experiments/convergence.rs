use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{steps_in, ExperimentError};
use crate::dynamics::{conjugate, integrate, Driver, Scheme, SimConfig};
use crate::noise::{ou_from_wiener_with, refine_wiener, sample_wiener, OuInit, OuUpdate, WienerPath};
use crate::spectral::{sobolev_norm_unchecked, SpectralField};

/// Gap between the Ito solution and the conjugated random solution,
/// `||u_h(T) - (v(T) + h z(T))||`, on successively refined Brownian paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub t_end: f64,
    pub seed: u64,
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    /// `errors[l] / errors[l + 1]`.
    pub ratios: Vec<f64>,
    /// Least-squares slope of `log error` against `log dt`.
    pub order: f64,
}

/// Runs Euler-Maruyama on the Ito equation and exponential Euler on the
/// conjugated equation along the same Brownian path, for `levels` step sizes
/// `base_dt / 2^l`. Both sides start from the same `u_h(0) = v0 + h z(0)`
/// with `z(0)` stationary, and the OU values are built from the very
/// increments the Ito solver sees.
pub fn conjugation_convergence(
    cfg: &SimConfig,
    v0: &SpectralField,
    base_dt: f64,
    levels: usize,
    t_end: f64,
    seed: u64,
) -> Result<ConvergenceReport, ExperimentError> {
    if levels < 3 {
        return Err(ExperimentError::Invalid(format!("need at least 3 levels, got {levels}")));
    }
    if !(t_end > 0.0) {
        return Err(ExperimentError::Invalid(format!("final time must be positive, got {t_end}")));
    }
    steps_in(t_end, base_dt, "final time")?;
    let mut paths: Vec<WienerPath> = vec![sample_wiener(0.0, t_end, base_dt, seed)?];
    for l in 1..levels {
        let next = refine_wiener(&paths[l - 1]);
        paths.push(next);
    }
    let errors = paths
        .par_iter()
        .map(|w| {
            let em_cfg = cfg.clone().with_dt(w.dt())?.with_scheme(Scheme::Em);
            let rnd_cfg = em_cfg.clone().with_scheme(Scheme::Etd1);
            let ou = ou_from_wiener_with(Arc::new(w.clone()), OuInit::Stationary, OuUpdate::SharedIncrement);
            let z = ou.values();
            let u0 = conjugate(v0, z[0], &cfg.noise)?;
            let ito = integrate(&u0, Driver::Stochastic(w), &em_cfg)?.final_state;
            let rnd = integrate(v0, Driver::Random(&ou), &rnd_cfg)?.final_state;
            let back = conjugate(&rnd.v, z[z.len() - 1], &cfg.noise)?;
            let gap = ito.v.difference(&back)?;
            Ok(sobolev_norm_unchecked(&gap, 0.0))
        })
        .collect::<Result<Vec<f64>, ExperimentError>>()?;
    let dts: Vec<f64> = paths.iter().map(|w| w.dt()).collect();
    let ratios = errors.windows(2).map(|e| e[0] / e[1]).collect();
    Ok(ConvergenceReport {
        t_end,
        seed,
        order: fitted_order(&dts, &errors),
        dts,
        errors,
        ratios,
    })
}

/// Slope of the least-squares line through `(ln dt, ln err)`; NaN when any
/// error is zero.
fn fitted_order(dts: &[f64], errors: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
