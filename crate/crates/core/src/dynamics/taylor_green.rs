use std::f64::consts::PI;

use num_complex::Complex64;

use super::DynamicsError;
use crate::spectral::{SpectralField, WaveGrid};

/// Decaying Taylor-Green vortex on the `2 pi` torus,
/// `u = e^{-2 nu t} (cos x sin y, -sin x cos y)`, an exact unforced solution.
pub fn taylor_green(t: f64, nu: f64, grid: &WaveGrid) -> Result<SpectralField, DynamicsError> {
    if (grid.length() - 2.0 * PI).abs() > 1e-12 {
        return Err(DynamicsError::InvalidConfig(format!(
            "Taylor-Green needs L = 2 pi, got {}",
            grid.length()
        )));
    }
    let amp = (-2.0 * nu * t).exp();
    // cos x sin y = sum over (sx, sy) in {+-1}^2 of  sy / (4i) e^{i(sx x + sy y)}
    let mut u = SpectralField::zeros(grid);
    for sx in [-1i64, 1] {
        for sy in [-1i64, 1] {
            let idx = grid.index_of(sx, sy).expect("unit modes exist for N >= 4");
            let ux = Complex64::new(0.0, -0.25 * sy as f64) * amp;
            let uy = Complex64::new(0.0, 0.25 * sx as f64) * amp;
            u.set_mode(idx, [ux, uy]);
        }
    }
    Ok(u)
}
