use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::field::{forward_pair, inverse_pair};
use super::{SpectralError, SpectralField, WaveGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Helmholtz-Leray projection onto zero-mean divergence-free fields.
///
/// Per mode `u_j -> u_j - (k.u_j) k / |k|^2`. The zero mode and the Nyquist
/// lines (where `-j` is not representable) are cleared.
pub fn leray_project(u: &SpectralField) -> SpectralField {
    let mut out = u.clone();
    leray_project_in_place(&mut out);
    out
}

pub fn leray_project_in_place(u: &mut SpectralField) {
    let grid = u.grid().clone();
    let k_sq = grid.k_squared();
    for idx in 0..grid.len() {
        if !grid.is_active(idx) {
            u.set_mode(idx, [ZERO, ZERO]);
            continue;
        }
        let k = grid.wavevector(idx);
        let [a, b] = u.mode(idx);
        let dot = (a * k[0] + b * k[1]) / k_sq[idx];
        u.set_mode(idx, [a - dot * k[0], b - dot * k[1]]);
    }
}

/// Spectral coefficients of `div u`, i.e. `i k_j . u_j` per mode.
pub fn divergence(u: &SpectralField) -> Vec<Complex64> {
    let grid = u.grid();
    (0..grid.len())
        .map(|idx| {
            let k = grid.wavevector(idx);
            let [a, b] = u.mode(idx);
            I * (a * k[0] + b * k[1])
        })
        .collect()
}

/// Largest `|k.u_j| / (|k| |u_j|)` over nonzero modes; zero for a solenoidal field.
pub fn relative_divergence(u: &SpectralField) -> f64 {
    let grid = u.grid();
    let mut worst: f64 = 0.0;
    let scale = u.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    for idx in 0..grid.len() {
        let k = grid.wavevector(idx);
        let kn = grid.k_squared()[idx].sqrt();
        if kn == 0.0 {
            continue;
        }
        let [a, b] = u.mode(idx);
        worst = worst.max((a * k[0] + b * k[1]).norm() / (kn * scale));
    }
    worst
}

/// `||A^{s/2} u||`, the H^s norm with the physical L2 measure.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> Result<f64, SpectralError> {
    if !(s >= 0.0) {
        return Err(SpectralError::NegativeOrder(s));
    }
    Ok(sobolev_norm_unchecked(u, s))
}

pub(crate) fn sobolev_norm_unchecked(u: &SpectralField, s: f64) -> f64 {
    let grid = u.grid();
    let k_sq = grid.k_squared();
    let (x, y) = (u.component(0), u.component(1));
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        let w = if s == 0.0 { 1.0 } else { k_sq[idx].powf(s) };
        acc += w * (x[idx].norm_sqr() + y[idx].norm_sqr());
    }
    grid.length() * acc.sqrt()
}

/// `A^p u`: multiplies mode `j` by `|k_j|^{2p}`. For `p < 0` the zero mode is
/// mapped to zero.
pub fn apply_stokes_power(u: &SpectralField, p: f64) -> SpectralField {
    let grid = u.grid().clone();
    let k_sq = grid.k_squared();
    let mut out = u.clone();
    for idx in 0..grid.len() {
        let w = if p == 0.0 {
            1.0
        } else if k_sq[idx] == 0.0 {
            0.0
        } else {
            k_sq[idx].powf(p)
        };
        let [a, b] = out.mode(idx);
        out.set_mode(idx, [a * w, b * w]);
    }
    out
}

/// Dealiased pseudospectral `B(u, v) = P((u . grad) v)`.
///
/// Both arguments are truncated to the 2/3 mask before the product, so on
/// retained modes the result equals the exact Galerkin convolution.
pub fn nonlinear_term(u: &SpectralField, v: &SpectralField) -> Result<SpectralField, SpectralError> {
    u.check_grid(v)?;
    Ok(nonlinear_unchecked(u, v))
}

pub(crate) fn nonlinear_unchecked(u: &SpectralField, v: &SpectralField) -> SpectralField {
    let grid = u.grid();
    let len = grid.len();
    let n = grid.n();
    let kn = grid.wavenumbers();
    let mask = grid.dealias_mask();

    let masked = |f: &SpectralField, c: usize| -> Vec<Complex64> {
        f.component(c)
            .iter()
            .zip(mask)
            .map(|(z, &m)| if m { *z } else { ZERO })
            .collect()
    };
    let (u0, u1) = inverse_pair(grid, &masked(u, 0), &masked(u, 1));

    let mut products = [vec![0.0; len], vec![0.0; len]];
    for (c, prod) in products.iter_mut().enumerate() {
        let vc = v.component(c);
        let mut dx = vec![ZERO; len];
        let mut dy = vec![ZERO; len];
        for idx in 0..len {
            if mask[idx] {
                dx[idx] = I * kn[idx / n] * vc[idx];
                dy[idx] = I * kn[idx % n] * vc[idx];
            }
        }
        let (gx, gy) = inverse_pair(grid, &dx, &dy);
        for p in 0..len {
            prod[p] = u0[p] * gx[p] + u1[p] * gy[p];
        }
    }
    let (w0, w1) = forward_pair(grid, &products[0], &products[1]);
    let mut out = SpectralField::from_components(grid, w0, w1).expect("lengths match grid");
    out.truncate_to_mask();
    leray_project_in_place(&mut out);
    out
}

/// Pointwise norms of the velocity gradient, maximized over an oversampled lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientSup {
    /// Max over points of the spectral (operator 2-) norm of the Jacobian.
    pub operator: f64,
    /// Max over points of the largest absolute Jacobian entry.
    pub max_entry: f64,
    /// Points per dimension of the sampling lattice.
    pub samples: usize,
}

/// Oversampling factor used for sup-norm estimates.
pub const GRAD_OVERSAMPLE: usize = 4;

/// `||grad h||_{L^inf}` with the pointwise operator 2-norm, sampled on a
/// lattice `GRAD_OVERSAMPLE` times finer than the grid.
pub fn grad_linf(h: &SpectralField) -> f64 {
    grad_sup(h, GRAD_OVERSAMPLE).operator
}

/// Both gradient sup-norm variants on a lattice `factor` times finer than `h`'s grid.
pub fn grad_sup(h: &SpectralField, factor: usize) -> GradientSup {
    let grid = h.grid();
    let factor = factor.max(1);
    let fine = WaveGrid::new(grid.length(), grid.n() * factor).expect("refined grid is valid");
    let len = fine.len();
    let kn = grid.wavenumbers();
    let n = grid.n();
    // jac[c][m] = d_m h_c, zero-padded into the fine lattice
    let mut jac = vec![vec![ZERO; len]; 4];
    for idx in 0..grid.len() {
        if !grid.is_active(idx) {
            continue;
        }
        let (jx, jy) = grid.mode_pair(idx);
        let fidx = fine.index_of(jx, jy).expect("coarse modes exist on the fine lattice");
        let k = [kn[idx / n], kn[idx % n]];
        for c in 0..2 {
            let coef = h.component(c)[idx];
            jac[2 * c][fidx] = I * k[0] * coef;
            jac[2 * c + 1][fidx] = I * k[1] * coef;
        }
    }
    let (a, b) = inverse_pair(&fine, &jac[0], &jac[1]);
    let (c, d) = inverse_pair(&fine, &jac[2], &jac[3]);
    let mut operator: f64 = 0.0;
    let mut max_entry: f64 = 0.0;
    for p in 0..len {
        let (a, b, c, d) = (a[p], b[p], c[p], d[p]);
        let frob = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        let disc = (frob * frob - 4.0 * det * det).max(0.0).sqrt();
        operator = operator.max(((frob + disc) / 2.0).sqrt());
        max_entry = max_entry.max(a.abs()).max(b.abs()).max(c.abs()).max(d.abs());
    }
    GradientSup {
        operator,
        max_entry,
        samples: fine.n(),
    }
}

/// Shell amplitude law for random initial data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Spectrum {
    /// Amplitude `|j|^slope` on integer shells `kmin <= |j| <= kmax`.
    Band { kmin: f64, kmax: f64, slope: f64 },
    /// Energy only on the modes with `|j| = 1`.
    LowestShell,
}

/// Requested spectrum and total L2 norm of a random field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    pub spectrum: Spectrum,
    /// Target `||u||` (physical L2 norm).
    pub norm: f64,
}

impl EnergyProfile {
    pub fn band(kmax: f64, norm: f64) -> Self {
        Self {
            spectrum: Spectrum::Band {
                kmin: 1.0,
                kmax,
                slope: -1.0,
            },
            norm,
        }
    }

    pub fn lowest_shell(norm: f64) -> Self {
        Self {
            spectrum: Spectrum::LowestShell,
            norm,
        }
    }

    fn amplitude(&self, shell: f64) -> f64 {
        match self.spectrum {
            Spectrum::Band { kmin, kmax, slope } => {
                if shell >= kmin - 1e-12 && shell <= kmax + 1e-12 {
                    shell.powf(slope)
                } else {
                    0.0
                }
            }
            Spectrum::LowestShell => {
                if (shell - 1.0).abs() < 1e-12 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Seeded random divergence-free field inside the dealiasing mask, scaled to
/// the profile's norm. A profile with no admissible modes yields zero.
pub fn random_divfree_field(grid: &WaveGrid, profile: &EnergyProfile, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpectralField::zeros(grid);
    for idx in 0..grid.len() {
        let (jx, jy) = grid.mode_pair(idx);
        let upper = jx > 0 || (jx == 0 && jy > 0);
        if !upper || !grid.in_dealias(idx) || !grid.is_active(idx) {
            continue;
        }
        let shell = ((jx * jx + jy * jy) as f64).sqrt();
        let amp = profile.amplitude(shell);
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        if amp == 0.0 {
            continue;
        }
        let psi = Complex64::new(re, im) * amp;
        let k = grid.wavevector(idx);
        let kn = grid.k_squared()[idx].sqrt();
        out.set_hermitian(idx, [psi * (-k[1] / kn), psi * (k[0] / kn)]);
    }
    leray_project_in_place(&mut out);
    let norm = sobolev_norm_unchecked(&out, 0.0);
    if norm > 0.0 {
        out.scale(profile.norm / norm);
    }
    out
}
