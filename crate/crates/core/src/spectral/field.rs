use num_complex::Complex64;

use super::{SpectralError, WaveGrid};

/// Truncated Fourier coefficients of a real 2D velocity field on `[0, L]^2`.
///
/// `u(x) = sum_j u_hat[j] exp(i k_j . x)`, i.e. coefficients are the Fourier
/// series coefficients, not raw DFT sums. Component 0 is the x-velocity.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: WaveGrid,
    comps: [Vec<Complex64>; 2],
}

/// Real velocity samples on the collocation lattice `x_ab = (aL/N, bL/N)`,
/// flat index `a * N + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    grid: WaveGrid,
    comps: [Vec<f64>; 2],
}

impl SpectralField {
    pub fn zeros(grid: &WaveGrid) -> Self {
        let len = grid.len();
        Self {
            grid: grid.clone(),
            comps: [vec![Complex64::new(0.0, 0.0); len], vec![Complex64::new(0.0, 0.0); len]],
        }
    }

    pub fn from_components(
        grid: &WaveGrid,
        x: Vec<Complex64>,
        y: Vec<Complex64>,
    ) -> Result<Self, SpectralError> {
        if x.len() != grid.len() || y.len() != grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.len(),
                found: x.len().max(y.len()),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            comps: [x, y],
        })
    }

    pub fn grid(&self) -> &WaveGrid {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.comps[c]
    }

    /// Coefficient pair at a flat mode index.
    pub fn mode(&self, idx: usize) -> [Complex64; 2] {
        [self.comps[0][idx], self.comps[1][idx]]
    }

    pub fn set_mode(&mut self, idx: usize, value: [Complex64; 2]) {
        self.comps[0][idx] = value[0];
        self.comps[1][idx] = value[1];
    }

    /// Sets mode `j` and its conjugate partner `-j`, keeping the field real.
    pub fn set_hermitian(&mut self, idx: usize, value: [Complex64; 2]) {
        let p = self.grid.partner(idx);
        self.set_mode(idx, value);
        self.set_mode(p, [value[0].conj(), value[1].conj()]);
    }

    pub(crate) fn check_grid(&self, other: &SpectralField) -> Result<(), SpectralError> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        Ok(())
    }

    /// `self += a * other`.
    ///
    /// # Panics
    /// If the grids differ.
    pub fn add_scaled(&mut self, a: f64, other: &SpectralField) {
        assert!(self.grid == other.grid, "grid mismatch in add_scaled");
        for c in 0..2 {
            for (s, o) in self.comps[c].iter_mut().zip(&other.comps[c]) {
                *s += o * a;
            }
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in 0..2 {
            for s in self.comps[c].iter_mut() {
                *s *= a;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self - other`, checking grids.
    pub fn difference(&self, other: &SpectralField) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        Ok(out)
    }

    /// `self + other`, checking grids.
    pub fn sum(&self, other: &SpectralField) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        let mut out = self.clone();
        out.add_scaled(1.0, other);
        Ok(out)
    }

    /// Physical L2 inner product `int u . v dx` over the torus.
    pub fn inner(&self, other: &SpectralField) -> Result<f64, SpectralError> {
        self.check_grid(other)?;
        let area = self.grid.length() * self.grid.length();
        let mut acc = 0.0;
        for c in 0..2 {
            for (a, b) in self.comps[c].iter().zip(&other.comps[c]) {
                acc += a.re * b.re + a.im * b.im;
            }
        }
        Ok(area * acc)
    }

    pub fn is_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest deviation from Hermitian symmetry `u_{-j} = conj(u_j)`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 0..self.grid.len() {
            let p = self.grid.partner(idx);
            for c in 0..2 {
                worst = worst.max((self.comps[c][idx] - self.comps[c][p].conj()).norm());
            }
        }
        worst
    }

    /// True when every nonzero coefficient lies inside the dealiasing mask.
    pub fn is_band_limited(&self) -> bool {
        (0..self.grid.len()).all(|idx| {
            self.grid.in_dealias(idx) || (self.comps[0][idx].norm() == 0.0 && self.comps[1][idx].norm() == 0.0)
        })
    }

    /// Zeroes every mode outside the dealiasing mask.
    pub fn truncate_to_mask(&mut self) {
        for idx in 0..self.grid.len() {
            if !self.grid.in_dealias(idx) {
                self.comps[0][idx] = Complex64::new(0.0, 0.0);
                self.comps[1][idx] = Complex64::new(0.0, 0.0);
            }
        }
    }
}

impl PhysicalField {
    pub fn zeros(grid: &WaveGrid) -> Self {
        Self {
            grid: grid.clone(),
            comps: [vec![0.0; grid.len()], vec![0.0; grid.len()]],
        }
    }

    /// Samples a velocity function at the collocation points.
    pub fn from_fn(grid: &WaveGrid, f: impl Fn(f64, f64) -> [f64; 2]) -> Self {
        let n = grid.n();
        let dx = grid.spacing();
        let mut out = Self::zeros(grid);
        for a in 0..n {
            for b in 0..n {
                let v = f(a as f64 * dx, b as f64 * dx);
                out.comps[0][a * n + b] = v[0];
                out.comps[1][a * n + b] = v[1];
            }
        }
        out
    }

    pub fn from_components(grid: &WaveGrid, x: Vec<f64>, y: Vec<f64>) -> Result<Self, SpectralError> {
        if x.len() != grid.len() || y.len() != grid.len() {
            return Err(SpectralError::LengthMismatch {
                expected: grid.len(),
                found: x.len().max(y.len()),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            comps: [x, y],
        })
    }

    pub fn grid(&self) -> &WaveGrid {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }

    /// Midpoint-rule quadrature of `int |u|^2 dx`, exact for band-limited fields.
    pub fn l2_norm(&self) -> f64 {
        let cell = self.grid.spacing() * self.grid.spacing();
        let sum: f64 = self.comps.iter().flat_map(|c| c.iter()).map(|v| v * v).sum();
        (sum * cell).sqrt()
    }

    /// Largest pointwise speed `|u(x)|`.
    pub fn max_speed(&self) -> f64 {
        self.comps[0]
            .iter()
            .zip(&self.comps[1])
            .fold(0.0, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

/// Samples a spectral field on the collocation lattice.
pub fn to_physical(u: &SpectralField) -> PhysicalField {
    let grid = u.grid();
    let (x, y) = inverse_pair(grid, u.component(0), u.component(1));
    PhysicalField {
        grid: grid.clone(),
        comps: [x, y],
    }
}

/// Fourier coefficients of sampled velocity data.
pub fn to_spectral(p: &PhysicalField) -> SpectralField {
    let grid = p.grid();
    let (x, y) = forward_pair(grid, p.component(0), p.component(1));
    SpectralField {
        grid: grid.clone(),
        comps: [x, y],
    }
}

/// Inverse-transforms two Hermitian spectra with a single complex FFT by
/// packing them as `a + i b`.
pub(crate) fn inverse_pair(grid: &WaveGrid, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
    grid.fft2(&mut buf, true);
    (buf.iter().map(|z| z.re).collect(), buf.iter().map(|z| z.im).collect())
}

/// Forward-transforms two real signals with one complex FFT and separates
/// the spectra using Hermitian symmetry. Output is normalized by `1/N^2`.
pub(crate) fn forward_pair(grid: &WaveGrid, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
    grid.fft2(&mut buf, false);
    let norm = 1.0 / grid.len() as f64;
    let len = grid.len();
    let mut out_a = vec![Complex64::new(0.0, 0.0); len];
    let mut out_b = vec![Complex64::new(0.0, 0.0); len];
    for idx in 0..len {
        let c = buf[idx];
        let cp = buf[grid.partner(idx)].conj();
        out_a[idx] = (c + cp) * (0.5 * norm);
        // (c - cp) / (2i)
        let d = (c - cp) * (0.5 * norm);
        out_b[idx] = Complex64::new(d.im, -d.re);
    }
    (out_a, out_b)
}
