//! Fourier representation of periodic divergence-free velocity fields.
//!
//! Wavenumbers are physical, `k_j = (2 pi / L) j`, so the Stokes operator
//! `A = -Delta` on H has spectrum starting at `lambda_1 = 4 pi^2 / L^2`.
//! Inner products and norms carry the physical measure over `[0, L]^2`.

mod field;
mod grid;
mod ops;

pub use field::{to_physical, to_spectral, PhysicalField, SpectralField};
pub use grid::{make_grid, WaveGrid};
pub use ops::{
    apply_stokes_power, divergence, grad_linf, grad_sup, leray_project, leray_project_in_place,
    nonlinear_term, random_divfree_field, relative_divergence, sobolev_norm, EnergyProfile,
    GradientSup, Spectrum, GRAD_OVERSAMPLE,
};

pub(crate) use ops::{nonlinear_unchecked, sobolev_norm_unchecked};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("resolution N must be even and at least 4, got {0}")]
    InvalidResolution(usize),
    #[error("domain length L must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("coefficient vector has length {found}, grid needs {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("Sobolev order must be non-negative, got {0}")]
    NegativeOrder(f64),
}
