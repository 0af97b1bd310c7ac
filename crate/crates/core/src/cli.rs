//! Command-line front end.
//!
//! Every subcommand reads a JSON config (see [`crate::io::load_config`]),
//! writes its artifacts into `--out`, and finishes with `manifest.json`.
//! Exit codes: `0` success, `1` invalid input, `2` the solver produced a
//! non-finite state (partial artifacts and a diagnostic are written).

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{
    check_in_h, conjugate, integrate_observed, taylor_green, DynamicsError, Driver, NormRow, Scheme,
    State,
};
use crate::experiments::{
    conjugation_convergence, ergodic_check, measure_absorbing, measure_smoothing, pullback_solve,
    sample_attractor_deterministic, AbsorbingSpec, AttractorSample, ExperimentError, PullbackSpec, SmoothingSpec,
};
use crate::io::{
    derive_seeds, emit_plot_script, write_checkpoint, write_csv, write_path_csv, write_series_csv, ConfigFile,
    IoError, LoadedConfig, PlotSpec, RunManifest,
};
use crate::noise::{ou_from_wiener_with, sample_wiener, OUPath, OuInit, OuUpdate};
use crate::spectral::{
    random_divfree_field, relative_divergence, sobolev_norm_unchecked, EnergyProfile, SpectralField, Spectrum,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_ABORT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "trns", version, about = "Stochastic 2D Navier-Stokes on the torus")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "trns-out")]
    pub out: PathBuf,
    /// Overrides the master seed of the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Only errors on standard error.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the config, the field invariants and the noise admissibility.
    Validate(Common),
    /// Integrate from the initial datum to `t_end`.
    Simulate(Common),
    /// Pull a family of initial data back along fixed noise.
    Pullback(Common),
    /// H-to-H^2 Lipschitz ratios of nearby trajectories.
    Smoothing(Common),
    /// Absorbing radii over initial radii and pullback horizons.
    Absorbing(Common),
    /// Time averages of |z|^m against the invariant-law moments.
    Ergodic(Common),
    /// Taylor-Green vortex against its closed form.
    TaylorGreen(Common),
    /// Conjugation gap between the Ito and random solvers under refinement.
    Convergence(Common),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Simulate(_) => "simulate",
            Command::Pullback(_) => "pullback",
            Command::Smoothing(_) => "smoothing",
            Command::Absorbing(_) => "absorbing",
            Command::Ergodic(_) => "ergodic",
            Command::TaylorGreen(_) => "taylor-green",
            Command::Convergence(_) => "convergence",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Simulate(c)
            | Command::Pullback(c)
            | Command::Smoothing(c)
            | Command::Absorbing(c)
            | Command::Ergodic(c)
            | Command::TaylorGreen(c)
            | Command::Convergence(c) => c,
        }
    }
}

/// Why a run stopped early.
#[derive(Debug)]
enum Failure {
    Invalid(String),
    Abort(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Dynamics(d @ DynamicsError::NonFinite { .. }) => Failure::Abort(d.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        Failure::from(ExperimentError::from(e))
    }
}

/// Output directory bookkeeping: records every file for the manifest.
struct Out {
    dir: PathBuf,
    files: Vec<String>,
    quiet: bool,
}

impl Out {
    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn log(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn plot(&mut self, csv: &str, x: &str, ys: &[&str], title: &str, log_y: bool) -> Result<(), IoError> {
        let stem = csv.trim_end_matches(".csv");
        let spec = PlotSpec {
            csv: csv.to_string(),
            x: x.to_string(),
            ys: ys.iter().map(|s| s.to_string()).collect(),
            title: title.to_string(),
            log_y,
            image: format!("{stem}.png"),
        };
        let path = self.path(&format!("plot_{stem}.py"));
        emit_plot_script(&spec, &path)
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    run_command(&cli.command)
}

pub fn run_command(command: &Command) -> i32 {
    let common = command.common();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.threads.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return EXIT_INVALID;
        }
    };
    pool.install(|| execute(command))
}

fn load(common: &Common, default_text: Option<&str>) -> Result<LoadedConfig, Failure> {
    let text = match (&common.config, default_text) {
        (Some(path), _) => fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?,
        (None, Some(text)) => text.to_string(),
        (None, None) => return Err(Failure::Invalid("--config is required for this subcommand".into())),
    };
    let mut file = ConfigFile::parse(&text)?;
    if let Some(seed) = common.seed {
        file.seed = seed;
    }
    Ok(file.resolve()?)
}

fn execute(command: &Command) -> i32 {
    let common = command.common();
    let started = Instant::now();
    let started_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let default_text = matches!(command, Command::TaylorGreen(_)).then_some(r#"{"preset": "taylor-green"}"#);
    let cfg = match load(common, default_text) {
        Ok(cfg) => cfg,
        Err(Failure::Invalid(msg)) | Err(Failure::Abort(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_INVALID;
        }
    };
    if !cfg.assumption.satisfied && !common.quiet {
        eprintln!(
            "warning: noise profile violates the admissibility bound (||grad h||/sqrt(pi) = {:.6} >= nu lambda_1 = {:.6})",
            cfg.assumption.lhs, cfg.assumption.rhs
        );
    }
    if let Err(e) = fs::create_dir_all(&common.out) {
        eprintln!("error: {}: {e}", common.out.display());
        return EXIT_INVALID;
    }
    let mut out = Out {
        dir: common.out.clone(),
        files: Vec::new(),
        quiet: common.quiet,
    };
    let mut seeds = Vec::new();
    let result = match command {
        Command::Validate(_) => validate(&cfg, &mut out),
        Command::Simulate(_) => simulate(&cfg, &mut out, &mut seeds),
        Command::Pullback(_) => pullback(&cfg, &mut out, &mut seeds),
        Command::Smoothing(_) => smoothing(&cfg, &mut out, &mut seeds),
        Command::Absorbing(_) => absorbing(&cfg, &mut out, &mut seeds),
        Command::Ergodic(_) => ergodic(&cfg, &mut out, &mut seeds),
        Command::TaylorGreen(_) => taylor_green_check(&cfg, &mut out),
        Command::Convergence(_) => convergence(&cfg, &mut out, &mut seeds),
    };
    let code = match &result {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Abort(msg)) => {
            eprintln!("abort: {msg}");
            EXIT_ABORT
        }
    };
    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: command.name().to_string(),
        config: serde_json::to_value(&cfg.file).expect("config serializes"),
        master_seed: cfg.file.seed,
        seeds,
        started_unix,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        exit_code: code,
        files: Vec::new(),
    };
    let files: Vec<String> = out.files.iter().filter(|f| out.dir.join(f).exists()).cloned().collect();
    if let Err(e) = manifest.finish(&out.dir, &files) {
        eprintln!("error: {e}");
        return if code == EXIT_OK { EXIT_INVALID } else { code };
    }
    code
}

fn f(x: f64) -> String {
    x.to_string()
}

fn validate(cfg: &LoadedConfig, out: &mut Out) -> Result<(), Failure> {
    let grid = &cfg.sim.grid;
    let mut problems = Vec::new();
    for (name, u) in [
        ("forcing", &cfg.sim.forcing),
        ("noise", &cfg.sim.noise),
        ("initial", &cfg.initial),
    ] {
        if let Err(e) = check_in_h(name, u, grid) {
            problems.push(e.to_string());
        }
        println!(
            "{name}: ||.||_H = {:.6e}, divergence = {:.3e}, hermitian defect = {:.3e}, band-limited = {}",
            sobolev_norm_unchecked(u, 0.0),
            relative_divergence(u),
            u.hermitian_defect(),
            u.is_band_limited()
        );
    }
    let a = &cfg.assumption;
    println!(
        "assumption: satisfied = {}, ||grad h||_inf = {:.6e}, lhs = {:.6e}, rhs = {:.6e}, alpha = {}, beta = {}, lambda = {}",
        a.satisfied,
        a.grad_linf,
        a.lhs,
        a.rhs,
        show(a.alpha),
        show(a.beta),
        show(a.lambda)
    );
    let path = out.path("assumption.json");
    fs::write(&path, serde_json::to_string_pretty(a).map_err(IoError::from)? + "\n")
        .map_err(|e| IoError::File { path, source: e })?;
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invalid(problems.join("; ")))
    }
}

fn show(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into())
}

fn steps_for(t: f64, dt: f64, what: &str) -> Result<usize, Failure> {
    let r = t / dt;
    if (r - r.round()).abs() > 1e-9 * r.max(1.0) || r < 0.0 {
        return Err(Failure::Invalid(format!("{what} = {t} is not a multiple of dt = {dt}")));
    }
    Ok(r.round() as usize)
}

fn simulate(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let sim = &cfg.sim;
    let steps = steps_for(cfg.t_end, sim.dt, "t_end")?;
    seeds.push(sim.seed);
    let mut rows = Vec::new();
    let stride = sim.stride as u64;
    let noise: Option<OUPath> = if sim.has_noise() && steps > 0 {
        let w = sample_wiener(0.0, cfg.t_end, sim.dt, sim.seed).map_err(ExperimentError::from)?;
        let update = if sim.scheme == Scheme::Em {
            OuUpdate::SharedIncrement
        } else {
            OuUpdate::ExactMarginal
        };
        Some(ou_from_wiener_with(w.into(), OuInit::Stationary, update))
    } else {
        None
    };
    let (v0, driver) = match &noise {
        None => (cfg.initial.clone(), Driver::Deterministic { t0: 0.0, steps }),
        Some(ou) if sim.scheme == Scheme::Em => (cfg.initial.clone(), Driver::Stochastic(ou.wiener())),
        // the random equation evolves v = u - h z
        Some(ou) => (
            conjugate(&cfg.initial, -ou.values()[0], &sim.noise)?,
            Driver::Random(ou),
        ),
    };
    let has_z = matches!(driver, Driver::Random(_));
    out.log(format!("simulate: {steps} steps of dt = {}", sim.dt));
    let result = integrate_observed(&v0, driver, sim, |s| {
        if s.step % stride == 0 {
            rows.push(NormRow::of(s, has_z.then_some(s.z)));
        }
    });
    write_series_csv(&rows, &out.path("series.csv"))?;
    out.plot("series.csv", "t", &["norm_H", "norm_H1", "norm_H2"], "Norms along the trajectory", true)?;
    if let Some(ou) = &noise {
        write_path_csv(ou, &out.path("path.csv"))?;
    }
    match result {
        Ok(tr) => {
            write_checkpoint(&tr.final_state, sim.nu, &out.path("final.ckpt"))?;
            println!(
                "t = {}: ||v||_H = {:.6e}, ||v||_H1 = {:.6e}, ||v||_H2 = {:.6e}",
                tr.final_state.t,
                sobolev_norm_unchecked(&tr.final_state.v, 0.0),
                sobolev_norm_unchecked(&tr.final_state.v, 1.0),
                sobolev_norm_unchecked(&tr.final_state.v, 2.0)
            );
            Ok(())
        }
        Err(DynamicsError::NonFinite { t, step, last_valid }) => {
            write_checkpoint(&last_valid, sim.nu, &out.path("abort.ckpt"))?;
            let msg = format!(
                "non-finite state in the step leaving t = {t} (step {step}); last finite state saved to abort.ckpt"
            );
            let path = out.path("abort.txt");
            fs::write(&path, format!("{msg}\n")).map_err(|e| IoError::File { path, source: e })?;
            Err(Failure::Abort(msg))
        }
        Err(e) => Err(e.into()),
    }
}

/// Unit vector in H along the configured initial datum, or a lowest-shell
/// field when the initial datum is zero.
fn unit_shape(cfg: &LoadedConfig) -> SpectralField {
    let norm = sobolev_norm_unchecked(&cfg.initial, 0.0);
    if norm > 0.0 {
        cfg.initial.scaled(1.0 / norm)
    } else {
        random_divfree_field(&cfg.sim.grid, &EnergyProfile::lowest_shell(1.0), cfg.sim.seed)
    }
}

fn pullback(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let pc = &cfg.experiments().pullback;
    *seeds = derive_seeds(cfg.sim.seed, pc.seeds);
    let shape = unit_shape(cfg);
    let initial: Vec<SpectralField> = pc.radii.iter().map(|&r| shape.scaled(r)).collect();
    let mut rows = Vec::new();
    for &seed in seeds.iter() {
        for &horizon in &pc.horizons {
            out.log(format!("pullback: seed {seed}, horizon {horizon}"));
            let spec = PullbackSpec {
                cfg: cfg.sim.clone(),
                horizon,
                seed,
                initial: initial.clone(),
                refine: pc.refine,
            };
            let finals: Vec<State> = pullback_solve(&spec)?;
            for (r, s) in pc.radii.iter().zip(&finals) {
                let spread = finals
                    .iter()
                    .map(|o| sobolev_norm_unchecked(&s.v.difference(&o.v).expect("same grid"), 0.0))
                    .fold(0.0, f64::max);
                rows.push(vec![
                    seed.to_string(),
                    f(horizon),
                    f(*r),
                    f(sobolev_norm_unchecked(&s.v, 0.0)),
                    f(sobolev_norm_unchecked(&s.v, 1.0)),
                    f(sobolev_norm_unchecked(&s.v, 2.0)),
                    f(spread),
                    f(s.z),
                ]);
            }
        }
    }
    write_csv(
        &out.path("pullback.csv"),
        &["seed", "horizon", "radius", "norm_H", "norm_H1", "norm_H2", "family_spread_H", "z"],
        rows,
    )?;
    out.plot("pullback.csv", "horizon", &["family_spread_H"], "Pullback family spread at time 0", true)?;
    Ok(())
}

fn smoothing(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let sc = &cfg.experiments().smoothing;
    *seeds = derive_seeds(cfg.sim.seed, sc.seeds);
    let spec = SmoothingSpec {
        base: EnergyProfile {
            spectrum: Spectrum::Band {
                kmin: 1.0,
                kmax: sc.base_kmax,
                slope: -1.0,
            },
            norm: sc.base_norm,
        },
        deltas: sc.deltas.clone(),
        times: sc.times.clone(),
        directions: sc.directions.clone(),
    };
    out.log(format!("smoothing: {} seeds", seeds.len()));
    let report = measure_smoothing(&cfg.sim, &spec, seeds)?;
    write_csv(
        &out.path("smoothing.csv"),
        &["seed", "direction", "delta0", "t", "dist_H2_sq", "ratio", "error"],
        report.rows.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.direction.name().to_string(),
                f(r.delta0),
                f(r.t),
                f(r.dist_h2_sq),
                f(r.ratio),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )?;
    write_csv(
        &out.path("smoothing_spread.csv"),
        &["seed", "direction", "t", "spread"],
        report
            .spreads
            .iter()
            .map(|s| vec![s.seed.to_string(), s.direction.name().to_string(), f(s.t), f(s.spread)]),
    )?;
    out.plot("smoothing.csv", "t", &["ratio"], "H to H^2 Lipschitz ratio", true)?;
    println!(
        "max ratio = {:.6e}, median ratio = {:.6e}, scale-stable from T = {}",
        report.max_ratio,
        report.median_ratio,
        show(report.stable_time)
    );
    Ok(())
}

fn absorbing(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let ac = &cfg.experiments().absorbing;
    *seeds = derive_seeds(cfg.sim.seed, ac.seeds);
    let sample = match (&cfg.equilibrium, &ac.attractor) {
        (Some(u0), _) => Some(AttractorSample::from_states(vec![u0.clone()])?),
        (None, Some(a)) => {
            out.log("absorbing: sampling the deterministic attractor");
            let mut det = cfg.sim.clone();
            det.noise = SpectralField::zeros(&det.grid);
            let v0 = random_divfree_field(&det.grid, &EnergyProfile::band(4.0, 1.0), cfg.sim.seed);
            Some(sample_attractor_deterministic(&det, &v0, a.transient, a.count, a.stride)?)
        }
        (None, None) => None,
    };
    let mut spec = AbsorbingSpec::new(ac.radii.clone(), ac.horizons.clone(), seeds.clone());
    spec.courant = ac.courant;
    out.log(format!(
        "absorbing: {} cells",
        spec.radii.len() * spec.horizons.len() * spec.seeds.len()
    ));
    let report = measure_absorbing(&cfg.sim, &spec, sample.as_ref())?;
    write_csv(
        &out.path("absorbing.csv"),
        &["seed", "radius", "horizon", "dt", "norm_H", "norm_H1", "norm_H2", "dist_H2", "error"],
        report.rows.iter().map(|r| {
            vec![
                r.seed.to_string(),
                f(r.radius),
                f(r.horizon),
                f(r.dt),
                f(r.norm_h),
                f(r.norm_h1),
                f(r.norm_h2),
                r.dist_h2.map(f).unwrap_or_default(),
                r.error.clone().unwrap_or_default(),
            ]
        }),
    )?;
    write_csv(
        &out.path("radii.csv"),
        &["seed", "horizon", "radius_H", "radius_H1", "radius_H2"],
        report.estimates.iter().map(|e| {
            vec![
                e.seed.to_string(),
                f(e.horizon),
                f(e.radius_h),
                f(e.radius_h1),
                f(e.radius_h2),
            ]
        }),
    )?;
    out.plot("radii.csv", "horizon", &["radius_H", "radius_H1", "radius_H2"], "Absorbing radii", true)?;
    println!("absorbing from horizon {}", show(report.absorbing_time));
    Ok(())
}

fn ergodic(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let ec = &cfg.experiments().ergodic;
    *seeds = derive_seeds(cfg.sim.seed, ec.seeds);
    let report = ergodic_check(ec.t_end, ec.dt, seeds, &ec.moments)?;
    write_csv(
        &out.path("ergodic.csv"),
        &["seed", "m", "empirical", "exact", "rel_error"],
        report.rows.iter().map(|r| {
            vec![
                r.seed.to_string(),
                r.m.to_string(),
                f(r.empirical),
                f(r.exact),
                f(r.rel_error),
            ]
        }),
    )?;
    out.plot("ergodic.csv", "m", &["empirical", "exact"], "Time averages of |z|^m", true)?;
    for &m in &ec.moments {
        println!("m = {m}: worst relative error {:.4e}", report.worst(m).unwrap_or(f64::NAN));
    }
    Ok(())
}

fn taylor_green_check(cfg: &LoadedConfig, out: &mut Out) -> Result<(), Failure> {
    let sim = &cfg.sim;
    let steps = steps_for(cfg.t_end, sim.dt, "t_end")?;
    let u0 = taylor_green(0.0, sim.nu, &sim.grid)?;
    let stride = sim.stride as u64;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut fit = Vec::new();
    let mut failure = None;
    integrate_observed(&u0, Driver::Deterministic { t0: 0.0, steps }, sim, |s| {
        if s.step % stride != 0 && s.step as usize != steps {
            return;
        }
        match taylor_green(s.t, sim.nu, &sim.grid) {
            Ok(exact) => {
                let norm = sobolev_norm_unchecked(&s.v, 0.0);
                let exact_norm = sobolev_norm_unchecked(&exact, 0.0);
                let err = sobolev_norm_unchecked(&s.v.difference(&exact).expect("same grid"), 0.0) / exact_norm;
                worst = worst.max(err);
                fit.push((s.t, norm.ln()));
                rows.push(vec![f(s.t), f(norm), f(exact_norm), f(err)]);
            }
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    write_csv(&out.path("taylor_green.csv"), &["t", "norm_H", "exact_norm_H", "rel_error"], rows)?;
    out.plot("taylor_green.csv", "t", &["rel_error"], "Taylor-Green relative error", true)?;
    let rate = -slope(&fit);
    println!("max relative error = {worst:.3e}");
    println!("fitted decay rate = {rate:.12} (2 nu = {})", 2.0 * sim.nu);
    Ok(())
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn convergence(cfg: &LoadedConfig, out: &mut Out, seeds: &mut Vec<u64>) -> Result<(), Failure> {
    let cc = &cfg.experiments().convergence;
    seeds.push(cfg.sim.seed);
    let report = conjugation_convergence(&cfg.sim, &cfg.initial, cc.base_dt, cc.levels, cc.t_end, cfg.sim.seed)?;
    write_csv(
        &out.path("convergence.csv"),
        &["level", "dt", "error", "ratio"],
        report.dts.iter().zip(&report.errors).enumerate().map(|(l, (dt, e))| {
            let ratio = if l == 0 { String::new() } else { f(report.ratios[l - 1]) };
            vec![l.to_string(), f(*dt), f(*e), ratio]
        }),
    )?;
    out.plot("convergence.csv", "dt", &["error"], "Conjugation gap against dt", true)?;
    println!("ratios = {:?}, fitted order = {:.4}", report.ratios, report.order);
    Ok(())
}

/// Used by the thin binary.
pub fn main_exit_code() -> i32 {
    run(std::env::args_os())
}
