use serde::{Deserialize, Serialize};

use crate::spectral::{grad_sup, SpectralField, WaveGrid, GRAD_OVERSAMPLE};

/// Admissibility of a noise profile: `||grad h||_inf < sqrt(pi) nu lambda_1`,
/// with the constants that the energy estimates derive from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// `||grad h||_inf` with the pointwise operator 2-norm.
    pub grad_linf: f64,
    /// Same sup with the max-abs-entry matrix norm, for comparison.
    pub grad_linf_entrywise: f64,
    /// `||grad h||_inf / sqrt(pi)`.
    pub lhs: f64,
    /// `nu * lambda_1`.
    pub rhs: f64,
    pub satisfied: bool,
    /// Solves `lhs = (1 - alpha) rhs`.
    pub alpha: Option<f64>,
    /// Solves `lhs (1 + beta) = rhs (1 - alpha/2)`; infinite when `h = 0`.
    pub beta: Option<f64>,
    /// `alpha nu lambda_1 / 4`.
    pub lambda: Option<f64>,
    /// `rhs - lhs`; negative when violated.
    pub margin: f64,
}

pub fn check_assumption(h: &SpectralField, nu: f64, grid: &WaveGrid) -> AssumptionReport {
    let sup = grad_sup(h, GRAD_OVERSAMPLE);
    report_from_gradient(sup.operator, sup.max_entry, nu, grid.lambda1())
}

pub(crate) fn report_from_gradient(grad: f64, entrywise: f64, nu: f64, lambda1: f64) -> AssumptionReport {
    let lhs = grad / std::f64::consts::PI.sqrt();
    let rhs = nu * lambda1;
    let satisfied = lhs < rhs;
    let (alpha, beta, lambda) = if satisfied {
        let alpha = 1.0 - lhs / rhs;
        let beta = if lhs > 0.0 {
            rhs * (1.0 - alpha / 2.0) / lhs - 1.0
        } else {
            f64::INFINITY
        };
        (Some(alpha), Some(beta), Some(alpha * nu * lambda1 / 4.0))
    } else {
        (None, None, None)
    };
    AssumptionReport {
        grad_linf: grad,
        grad_linf_entrywise: entrywise,
        lhs,
        rhs,
        satisfied,
        alpha,
        beta,
        lambda,
        margin: rhs - lhs,
    }
}
