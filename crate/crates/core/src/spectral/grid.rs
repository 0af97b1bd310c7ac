use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::SpectralError;

/// Resolution, domain length and wavenumber lattice of an `N x N` periodic grid.
///
/// Storage follows FFT order: index `a` in `0..N` stands for the integer mode
/// `a` when `a <= N/2` and `a - N` otherwise, so the lattice covers
/// `{-N/2+1, ..., N/2}` in each direction. A flat mode index is `a * N + b`
/// with `a` the x-index and `b` the y-index.
///
/// Cloning is cheap; FFT plans are shared.
#[derive(Clone)]
pub struct WaveGrid {
    inner: Arc<GridInner>,
}

struct GridInner {
    n: usize,
    length: f64,
    /// Physical wavenumber `2*pi/L * j` for each 1D index.
    wavenumber: Vec<f64>,
    k_sq: Vec<f64>,
    dealias: Vec<bool>,
    /// Modes that carry a field in H: nonzero and off the Nyquist lines.
    active: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl WaveGrid {
    pub fn new(length: f64, n: usize) -> Result<Self, SpectralError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(SpectralError::InvalidLength(length));
        }
        if n < 4 || n % 2 != 0 {
            return Err(SpectralError::InvalidResolution(n));
        }
        let scale = 2.0 * PI / length;
        let ints: Vec<i64> = (0..n).map(|a| index_to_mode(a, n)).collect();
        let wavenumber: Vec<f64> = ints.iter().map(|&j| scale * j as f64).collect();
        let half = (n / 2) as i64;
        let mut k_sq = vec![0.0; n * n];
        let mut dealias = vec![false; n * n];
        let mut active = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                let idx = a * n + b;
                k_sq[idx] = wavenumber[a] * wavenumber[a] + wavenumber[b] * wavenumber[b];
                // 3|j| < N keeps every quadratic product alias-free on retained modes.
                let (ja, jb) = (ints[a].abs() as usize, ints[b].abs() as usize);
                dealias[idx] = 3 * ja < n && 3 * jb < n;
                active[idx] = (ja != 0 || jb != 0) && ints[a] != half && ints[b] != half;
            }
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Ok(Self {
            inner: Arc::new(GridInner {
                n,
                length,
                wavenumber,
                k_sq,
                dealias,
                active,
                forward,
                inverse,
            }),
        })
    }

    /// Modes per dimension.
    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Number of lattice modes, `N^2`.
    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn length(&self) -> f64 {
        self.inner.length
    }

    /// First eigenvalue of the Stokes operator, `4 pi^2 / L^2`.
    pub fn lambda1(&self) -> f64 {
        let s = 2.0 * PI / self.inner.length;
        s * s
    }

    /// Largest integer mode kept by the dealiasing mask.
    pub fn dealias_cutoff(&self) -> usize {
        (self.inner.n - 1) / 3
    }

    /// Integer mode for a 1D storage index.
    pub fn mode(&self, a: usize) -> i64 {
        index_to_mode(a, self.inner.n)
    }

    /// Integer mode pair `(jx, jy)` for a flat index.
    pub fn mode_pair(&self, idx: usize) -> (i64, i64) {
        let n = self.inner.n;
        (self.mode(idx / n), self.mode(idx % n))
    }

    /// Flat index of integer mode `(jx, jy)`, if it lies on the lattice.
    pub fn index_of(&self, jx: i64, jy: i64) -> Option<usize> {
        let n = self.inner.n;
        let a = mode_to_index(jx, n)?;
        let b = mode_to_index(jy, n)?;
        Some(a * n + b)
    }

    /// Flat index of the mode `-j`.
    pub fn partner(&self, idx: usize) -> usize {
        let n = self.inner.n;
        let (a, b) = (idx / n, idx % n);
        ((n - a) % n) * n + (n - b) % n
    }

    pub fn wavevector(&self, idx: usize) -> [f64; 2] {
        let n = self.inner.n;
        [self.inner.wavenumber[idx / n], self.inner.wavenumber[idx % n]]
    }

    /// 1D physical wavenumbers in storage order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.inner.wavenumber
    }

    /// `|k|^2` per flat index.
    pub fn k_squared(&self) -> &[f64] {
        &self.inner.k_sq
    }

    pub fn dealias_mask(&self) -> &[bool] {
        &self.inner.dealias
    }

    pub fn in_dealias(&self, idx: usize) -> bool {
        self.inner.dealias[idx]
    }

    /// True for modes that may carry energy in H (nonzero, not on a Nyquist line).
    pub fn is_active(&self, idx: usize) -> bool {
        self.inner.active[idx]
    }

    /// Collocation point spacing `L / N`.
    pub fn spacing(&self) -> f64 {
        self.inner.length / self.inner.n as f64
    }

    /// In-place unnormalized 2D transform. `inverse` selects `exp(+i k x)`.
    pub(crate) fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.inner.n;
        debug_assert_eq!(buf.len(), n * n);
        let plan = if inverse {
            &self.inner.inverse
        } else {
            &self.inner.forward
        };
        plan.process(buf);
        transpose(buf, n);
        plan.process(buf);
        transpose(buf, n);
    }
}

impl PartialEq for WaveGrid {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.n == other.inner.n && self.inner.length == other.inner.length)
    }
}

impl fmt::Debug for WaveGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveGrid")
            .field("n", &self.inner.n)
            .field("length", &self.inner.length)
            .finish()
    }
}

/// Convenience constructor mirroring [`WaveGrid::new`].
pub fn make_grid(length: f64, n: usize) -> Result<WaveGrid, SpectralError> {
    WaveGrid::new(length, n)
}

fn index_to_mode(a: usize, n: usize) -> i64 {
    if a <= n / 2 {
        a as i64
    } else {
        a as i64 - n as i64
    }
}

fn mode_to_index(j: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if j > half || j <= -half {
        return None;
    }
    Some(if j >= 0 { j as usize } else { (n as i64 + j) as usize })
}

fn transpose(buf: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            buf.swap(i * n + j, j * n + i);
        }
    }
}
