//! JSON run configuration.
//!
//! ```json
//! {
//!   "nu": 1.0, "L": 6.283185307179586, "N": 32, "dt": 0.01,
//!   "scheme": "etd2", "seed": 7, "stride": 10, "t_end": 20.0,
//!   "forcing": { "preset": "shear", "k": 4, "amplitude": 1.0 },
//!   "noise":   { "preset": "random", "kmax": 3.0, "seed": 77, "alpha": 0.5 },
//!   "initial": { "preset": "random", "kmax": 4.0, "seed": 5, "norm": 1.0 },
//!   "experiments": { "ergodic": { "t_end": 10000.0 } }
//! }
//! ```
//!
//! Only `nu`, `N` and `dt` are required (`L` defaults to `2 pi`). The
//! top-level `"preset": "taylor-green"` fills in `nu = 0.1`, `N = 16`,
//! `dt = 1e-3`, `t_end = 1`, zero forcing and noise, and the Taylor-Green
//! initial datum; explicit fields still override it.
//!
//! Fields (`forcing`, `noise`, `initial`) are tagged by `preset`:
//!
//! - `zero`
//! - `modes`: `{"modes": [{"j": [jx, jy], "u": [re, im], "v": [re, im]}]}`
//!   adds `c e^{i k.x}` plus its complex conjugate for each entry, `u` and
//!   `v` being the x and y components of `c`; the result is Leray-projected.
//! - `shear` (alias `kolmogorov`): `amplitude * (sin(k y), 0)`.
//! - `random`: seeded divergence-free field on shells `1 <= |j| <= kmax`,
//!   scaled either to H-norm `norm` or, for noise, so that the admissibility
//!   margin gives the requested `alpha`.
//! - `manufactured` (forcing only): `{"base": <field>}` sets
//!   `f = nu A u0 + B(u0, u0)` so that `u0 = base` is a steady state.
//! - `taylor-green` (initial only, `L = 2 pi`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IoError;
use crate::dynamics::{check_assumption, taylor_green, AssumptionReport, Scheme, SimConfig};
use crate::experiments::Direction;
use crate::spectral::{
    apply_stokes_power, grad_linf, leray_project_in_place, nonlinear_term, random_divfree_field, EnergyProfile,
    SpectralField, Spectrum, WaveGrid,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfigPreset {
    TaylorGreen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub j: [i64; 2],
    #[serde(default)]
    pub u: [f64; 2],
    #[serde(default)]
    pub v: [f64; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    #[default]
    Zero,
    Modes {
        modes: Vec<ModeSpec>,
    },
    #[serde(alias = "kolmogorov")]
    Shear {
        k: i64,
        amplitude: f64,
    },
    Random {
        kmax: f64,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        norm: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alpha: Option<f64>,
    },
    Manufactured {
        base: Box<FieldSpec>,
    },
    TaylorGreen,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PullbackConfig {
    pub horizons: Vec<f64>,
    /// H-norms of the initial family; each scales the configured initial
    /// datum (or a lowest-shell field when it is zero).
    pub radii: Vec<f64>,
    pub seeds: usize,
    pub refine: u32,
}

impl Default for PullbackConfig {
    fn default() -> Self {
        Self {
            horizons: vec![5.0, 10.0, 20.0, 40.0],
            radii: vec![1.0, 10.0, 100.0],
            seeds: 1,
            refine: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingConfig {
    pub base_norm: f64,
    pub base_kmax: f64,
    pub deltas: Vec<f64>,
    pub times: Vec<f64>,
    pub directions: Vec<Direction>,
    pub seeds: usize,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            base_norm: 1.0,
            base_kmax: 4.0,
            deltas: vec![1e-2, 1e-3, 1e-4],
            times: vec![0.5, 1.0, 2.0, 4.0],
            directions: vec![Direction::RandomUnit, Direction::LowestShell],
            seeds: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttractorConfig {
    pub transient: f64,
    pub count: usize,
    pub stride: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AbsorbingConfig {
    pub radii: Vec<f64>,
    pub horizons: Vec<f64>,
    pub seeds: usize,
    pub courant: f64,
    /// Deterministic run sampled as the comparison set. Ignored when the
    /// forcing is manufactured: the steady state is used instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attractor: Option<AttractorConfig>,
}

impl Default for AbsorbingConfig {
    fn default() -> Self {
        Self {
            radii: vec![1.0, 10.0, 100.0, 1000.0],
            horizons: vec![5.0, 10.0, 20.0, 40.0],
            seeds: 1,
            courant: 0.25,
            attractor: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErgodicConfig {
    pub t_end: f64,
    pub dt: f64,
    pub seeds: usize,
    pub moments: Vec<u32>,
}

impl Default for ErgodicConfig {
    fn default() -> Self {
        Self {
            t_end: 1e4,
            dt: 1e-2,
            seeds: 3,
            moments: vec![1, 2, 4, 6],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub base_dt: f64,
    pub levels: usize,
    pub t_end: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            base_dt: 1.0 / 128.0,
            levels: 4,
            t_end: 1.0,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentsConfig {
    pub pullback: PullbackConfig,
    pub smoothing: SmoothingConfig,
    pub absorbing: AbsorbingConfig,
    pub ergodic: ErgodicConfig,
    pub convergence: ConvergenceConfig,
}

fn default_stride() -> usize {
    10
}

fn default_t_end() -> f64 {
    1.0
}

fn yes() -> bool {
    true
}

/// The configuration file as written, with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<ConfigPreset>,
    #[serde(default)]
    pub nu: Option<f64>,
    #[serde(rename = "L", default)]
    pub length: Option<f64>,
    #[serde(rename = "N", default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub scheme: Scheme,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default)]
    pub forcing: FieldSpec,
    #[serde(default)]
    pub noise: FieldSpec,
    #[serde(default)]
    pub initial: FieldSpec,
    #[serde(default)]
    pub experiments: ExperimentsConfig,
}

/// A validated configuration with everything derived from it.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    /// The file with presets and defaults resolved; serializing it gives a
    /// config that loads back to the same run.
    pub file: ConfigFile,
    pub sim: SimConfig,
    pub t_end: f64,
    pub initial: SpectralField,
    /// Steady state of a manufactured forcing.
    pub equilibrium: Option<SpectralField>,
    /// Admissibility of the noise profile. A violation is reported, not
    /// rejected.
    pub assumption: AssumptionReport,
}

impl LoadedConfig {
    /// Pretty JSON of the resolved file.
    pub fn echo(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("config serializes")
    }

    pub fn experiments(&self) -> &ExperimentsConfig {
        &self.file.experiments
    }
}

/// `count` seeds derived from the master seed: `seed, seed + 1, ...`.
pub fn derive_seeds(master: u64, count: usize) -> Vec<u64> {
    (0..count as u64).map(|i| master.wrapping_add(i)).collect()
}

/// Parses, resolves and validates a JSON configuration.
pub fn load_config(text: &str) -> Result<LoadedConfig, IoError> {
    ConfigFile::parse(text)?.resolve()
}

impl ConfigFile {
    /// Schema check only; errors name the offending field path.
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            IoError::config(if field == "." { String::new() } else { field }, e.inner().to_string())
        })
    }

    /// Applies presets and defaults and builds the solver configuration.
    pub fn resolve(self) -> Result<LoadedConfig, IoError> {
        resolve(self)
    }
}

fn resolve(mut file: ConfigFile) -> Result<LoadedConfig, IoError> {
    if file.preset == Some(ConfigPreset::TaylorGreen) {
        file.nu.get_or_insert(0.1);
        file.n.get_or_insert(16);
        file.dt.get_or_insert(1e-3);
        file.length.get_or_insert(2.0 * PI);
        if file.initial == FieldSpec::Zero {
            file.initial = FieldSpec::TaylorGreen;
        }
        if file.forcing != FieldSpec::Zero || file.noise != FieldSpec::Zero {
            return Err(IoError::config(
                "preset",
                "the taylor-green preset is unforced and noise-free",
            ));
        }
    }
    file.length.get_or_insert(2.0 * PI);
    let nu = file.nu.ok_or_else(|| IoError::config("nu", "missing field"))?;
    let n = file.n.ok_or_else(|| IoError::config("N", "missing field"))?;
    let dt = file.dt.ok_or_else(|| IoError::config("dt", "missing field"))?;
    let length = file.length.unwrap();
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(IoError::config("nu", format!("viscosity must be positive, got {nu}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(IoError::config("dt", format!("time step must be positive, got {dt}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(IoError::config("L", format!("box length must be positive, got {length}")));
    }
    if n < 4 || n % 2 != 0 {
        return Err(IoError::config("N", format!("resolution must be even and at least 4, got {n}")));
    }
    if file.stride == 0 {
        return Err(IoError::config("stride", "must be at least 1"));
    }
    if !(file.t_end >= 0.0 && file.t_end.is_finite()) {
        return Err(IoError::config("t_end", "must be nonnegative"));
    }
    let grid = WaveGrid::new(length, n).map_err(|e| IoError::config("N", e.to_string()))?;

    let (forcing, equilibrium) = match &file.forcing {
        FieldSpec::Manufactured { base } => {
            let u0 = build_field(base, &grid, nu, "forcing.base")?;
            let mut f = apply_stokes_power(&u0, 1.0).scaled(nu);
            if file.nonlinear {
                let b = nonlinear_term(&u0, &u0).map_err(|e| IoError::config("forcing", e.to_string()))?;
                f.add_scaled(1.0, &b);
            }
            (f, Some(u0))
        }
        spec => (build_field(spec, &grid, nu, "forcing")?, None),
    };
    let noise = build_field(&file.noise, &grid, nu, "noise")?;
    let initial = build_field(&file.initial, &grid, nu, "initial")?;

    let mut sim = SimConfig::new(&grid, nu, dt).map_err(|e| IoError::config("", e.to_string()))?;
    sim.scheme = file.scheme;
    sim.seed = file.seed;
    sim.stride = file.stride;
    sim.nonlinear = file.nonlinear;
    let sim = sim
        .with_forcing(forcing)
        .map_err(|e| IoError::config("forcing", e.to_string()))?
        .with_noise(noise)
        .map_err(|e| IoError::config("noise", e.to_string()))?;
    let assumption = check_assumption(&sim.noise, nu, &grid);
    Ok(LoadedConfig {
        t_end: file.t_end,
        file,
        sim,
        initial,
        equilibrium,
        assumption,
    })
}

fn build_field(spec: &FieldSpec, grid: &WaveGrid, nu: f64, at: &str) -> Result<SpectralField, IoError> {
    let mut u = SpectralField::zeros(grid);
    match spec {
        FieldSpec::Zero => {}
        FieldSpec::Modes { modes } => {
            for (i, m) in modes.iter().enumerate() {
                let idx = grid
                    .index_of(m.j[0], m.j[1])
                    .filter(|&idx| grid.is_active(idx))
                    .ok_or_else(|| {
                        IoError::config(
                            format!("{at}.modes[{i}].j"),
                            format!("mode {:?} is not a resolved nonzero mode for N = {}", m.j, grid.n()),
                        )
                    })?;
                let c = [Complex64::new(m.u[0], m.u[1]), Complex64::new(m.v[0], m.v[1])];
                let p = grid.partner(idx);
                for comp in 0..2 {
                    u.component_mut(comp)[idx] += c[comp];
                    u.component_mut(comp)[p] += c[comp].conj();
                }
            }
            leray_project_in_place(&mut u);
        }
        FieldSpec::Shear { k, amplitude } => {
            let idx = grid
                .index_of(0, *k)
                .filter(|&idx| *k != 0 && grid.is_active(idx))
                .ok_or_else(|| IoError::config(format!("{at}.k"), format!("wavenumber {k} is not resolved")))?;
            // a sin(k y) = (a / 2i) e^{iky} + c.c.
            u.set_hermitian(idx, [Complex64::new(0.0, -0.5 * amplitude), Complex64::new(0.0, 0.0)]);
        }
        FieldSpec::Random { kmax, seed, norm, alpha } => {
            let profile = EnergyProfile {
                spectrum: Spectrum::Band {
                    kmin: 1.0,
                    kmax: *kmax,
                    slope: -1.0,
                },
                norm: 1.0,
            };
            u = random_divfree_field(grid, &profile, *seed);
            match (norm, alpha) {
                (Some(r), None) => u.scale(*r),
                (None, Some(a)) => {
                    if !(0.0..=1.0).contains(a) {
                        return Err(IoError::config(format!("{at}.alpha"), "alpha must lie in [0, 1]"));
                    }
                    let g = grad_linf(&u);
                    if g > 0.0 {
                        u.scale((1.0 - a) * PI.sqrt() * nu * grid.lambda1() / g);
                    }
                }
                _ => {
                    return Err(IoError::config(at, "random fields need exactly one of `norm` and `alpha`"));
                }
            }
        }
        FieldSpec::Manufactured { .. } => {
            return Err(IoError::config(at, "the manufactured preset applies to forcing only"));
        }
        FieldSpec::TaylorGreen => {
            u = taylor_green(0.0, nu, grid).map_err(|e| IoError::config(at, e.to_string()))?;
        }
    }
    Ok(u)
}
