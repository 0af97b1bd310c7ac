use std::f64::consts::PI;

use num_complex::Complex64;
use trns::dynamics::*;
use trns::noise::*;
use trns::spectral::*;

fn grid(n: usize) -> WaveGrid {
    WaveGrid::new(2.0 * PI, n).unwrap()
}

fn shear(g: &WaveGrid, amp: f64, j: i64) -> SpectralField {
    let mut u = SpectralField::zeros(g);
    let idx = g.index_of(0, j).unwrap();
    u.set_hermitian(idx, [Complex64::new(0.0, -0.5 * amp), Complex64::new(0.0, 0.0)]);
    u
}

fn norm(u: &SpectralField) -> f64 {
    sobolev_norm(u, 0.0).unwrap()
}

#[test]
fn shear_mode_decays_exactly() {
    let g = grid(16);
    let nu = 0.3;
    let cfg = SimConfig::new(&g, nu, 0.01).unwrap();
    let u0 = shear(&g, 1.5, 2);
    let traj = integrate(&u0, Driver::Deterministic { t0: 0.0, steps: 100 }, &cfg).unwrap();
    let expected = (-nu * 4.0 * 1.0).exp() * norm(&u0);
    assert!((norm(&traj.final_state.v) - expected).abs() <= 1e-10 * expected);
}

#[test]
fn taylor_green_matches_analytic_decay() {
    let g = grid(16);
    let nu = 0.1;
    let cfg = SimConfig::new(&g, nu, 1e-3).unwrap();
    let u0 = taylor_green(0.0, nu, &g).unwrap();
    let traj = integrate(&u0, Driver::Deterministic { t0: 0.0, steps: 1000 }, &cfg).unwrap();
    let exact = taylor_green(1.0, nu, &g).unwrap();
    let err = norm(&traj.final_state.v.difference(&exact).unwrap()) / norm(&exact);
    assert!(err < 1e-8, "relative error {err}");
    for row in &traj.series {
        let e = (-2.0 * nu * row.t).exp() * norm(&u0);
        assert!((row.norm_h - e).abs() <= 1e-8 * e);
    }
}

#[test]
fn taylor_green_initial_norm_by_quadrature() {
    let g = grid(16);
    let u = taylor_green(0.0, 0.1, &g).unwrap();
    let sampled = PhysicalField::from_fn(&g, |x, y| [x.cos() * y.sin(), -x.sin() * y.cos()]);
    assert!((norm(&u) - sampled.l2_norm()).abs() < 1e-12);
    assert!((norm(&u) - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
    assert!(divergence(&u).iter().all(|d| d.norm() == 0.0));
    assert!(nonlinear_term(&u, &u).unwrap().max_abs() < 1e-15);
    assert!(taylor_green(0.0, 0.1, &WaveGrid::new(1.0, 16).unwrap()).is_err());
}

#[test]
fn manufactured_equilibrium_is_steady() {
    let g = grid(16);
    let nu = 1.0;
    let u0 = random_divfree_field(&g, &EnergyProfile::band(3.0, 0.5), 11);
    let mut f = apply_stokes_power(&u0, 1.0).scaled(nu);
    f.add_scaled(1.0, &nonlinear_term(&u0, &u0).unwrap());
    let cfg = SimConfig::new(&g, nu, 1e-2).unwrap().with_forcing(f).unwrap();
    let traj = integrate(&u0, Driver::Deterministic { t0: 0.0, steps: 1000 }, &cfg).unwrap();
    assert!(norm(&traj.final_state.v.difference(&u0).unwrap()) < 1e-9);
}

fn noisy_config(g: &WaveGrid, scheme: Scheme) -> SimConfig {
    let h = random_divfree_field(g, &EnergyProfile::band(2.0, 0.3), 5);
    let f = random_divfree_field(g, &EnergyProfile::band(3.0, 1.0), 6);
    SimConfig::new(g, 0.2, 5e-3)
        .unwrap()
        .with_forcing(f)
        .unwrap()
        .with_noise(h)
        .unwrap()
        .with_scheme(scheme)
}

#[test]
fn random_step_with_zero_path_is_deterministic_step() {
    let g = grid(16);
    for scheme in [Scheme::Etd1, Scheme::Etd2] {
        let cfg = noisy_config(&g, scheme);
        let integ = Integrator::new(&cfg).unwrap();
        let mut a = State::new(0.0, random_divfree_field(&g, &EnergyProfile::band(4.0, 2.0), 1));
        let mut b = a.clone();
        for _ in 0..20 {
            a = integ.step_deterministic(&a).unwrap();
            b = integ.step_random(&b, 0.0, 0.0).unwrap();
            assert_eq!(a.v, b.v);
        }
    }
}

#[test]
fn zero_noise_ignores_the_ou_path() {
    let g = grid(16);
    let f = random_divfree_field(&g, &EnergyProfile::band(3.0, 1.0), 6);
    let cfg = SimConfig::new(&g, 0.2, 1e-2).unwrap().with_forcing(f).unwrap();
    let v0 = random_divfree_field(&g, &EnergyProfile::band(4.0, 1.0), 2);
    let p1 = ou_from_wiener(&sample_wiener(0.0, 1.0, 1e-2, 1).unwrap(), OuInit::Stationary);
    let p2 = ou_from_wiener(&sample_wiener(0.0, 1.0, 1e-2, 2).unwrap(), OuInit::Stationary);
    let a = integrate(&v0, Driver::Random(&p1), &cfg).unwrap();
    let b = integrate(&v0, Driver::Random(&p2), &cfg).unwrap();
    assert_eq!(a.final_state.v, b.final_state.v);
}

#[test]
fn linear_random_mode_matches_variation_of_constants() {
    let g = grid(8);
    let nu = 0.4;
    let idx = g.index_of(1, 1).unwrap();
    let k = g.wavevector(idx);
    let c = Complex64::new(0.2, -0.1);
    let mut h = SpectralField::zeros(&g);
    h.set_hermitian(idx, [c * (-k[1]), c * k[0]]);
    let mut cfg = SimConfig::new(&g, nu, 0.02).unwrap().with_noise(h.clone()).unwrap().with_scheme(Scheme::Etd1);
    cfg.nonlinear = false;
    let ou = ou_from_wiener(&sample_wiener(0.0, 2.0, 0.02, 3).unwrap(), OuInit::Given(0.7));
    let v0 = h.scaled(2.0);
    let traj = integrate(&v0, Driver::Random(&ou), &cfg).unwrap();

    // closed form for dv/dt = -a v + (1 - a) h z_n on each step, a = nu |k|^2
    let a = nu * g.k_squared()[idx];
    let mut amp = 2.0;
    for &z in &ou.values()[..ou.steps()] {
        let e = (-a * 0.02f64).exp();
        amp = e * amp + (1.0 - e) / a * (1.0 - a) * z;
    }
    let expected = h.scaled(amp);
    assert!(traj.final_state.v.difference(&expected).unwrap().max_abs() < 1e-13);
}

#[test]
fn two_step_local_error_is_second_order() {
    // one step of the linear random equation against the exact solution with z frozen
    let g = grid(8);
    let idx = g.index_of(1, 0).unwrap();
    let mut h = SpectralField::zeros(&g);
    h.set_hermitian(idx, [Complex64::new(0.0, 0.0), Complex64::new(0.0, -0.5)]);
    let a = 0.5;
    let mut errs = Vec::new();
    for dt in [0.04, 0.02, 0.01] {
        let mut cfg = SimConfig::new(&g, a, dt).unwrap().with_noise(h.clone()).unwrap();
        cfg.nonlinear = false;
        let integ = Integrator::new(&cfg).unwrap();
        // z(t) = 1 + t sampled at left endpoints; history from t = -dt
        let s0 = State::new(-dt, h.clone());
        let s1 = integ.step_random(&s0, 1.0 - dt, 1.0).unwrap();
        let s2 = integ.step_random(&s1, 1.0, 1.0 + dt).unwrap();
        // exact solution of v' = -a v + (1 - a) h z(t) from v(-dt) = h with z linear
        let m = 1.0 - a;
        let exact = |t: f64| {
            // particular solution p(t) = m (1 + t)/a - m/a^2, homogeneous matches v(-dt)=1
            let p = |t: f64| m * (1.0 + t) / a - m / (a * a);
            p(t) + (1.0 - p(-dt)) * (-a * (t + dt)).exp()
        };
        let got = s2.v.mode(idx)[1].im / -0.5;
        errs.push((got - exact(dt)).abs());
    }
    assert!(errs[0] / errs[1] > 3.0 && errs[1] / errs[2] > 3.0, "{errs:?}");
}

#[test]
fn em_without_noise_is_exponential_euler() {
    let g = grid(16);
    let f = random_divfree_field(&g, &EnergyProfile::band(3.0, 1.0), 6);
    let cfg = SimConfig::new(&g, 0.2, 1e-2).unwrap().with_forcing(f).unwrap().with_scheme(Scheme::Etd1);
    let integ = Integrator::new(&cfg).unwrap();
    let mut a = State::new(0.0, random_divfree_field(&g, &EnergyProfile::band(4.0, 1.0), 2));
    let mut b = a.clone();
    for dw in [0.3, -1.2, 0.01] {
        a = integ.step_deterministic(&a).unwrap();
        b = integ.step_em(&b, dw).unwrap();
        assert_eq!(a.v, b.v);
    }
}

#[test]
fn em_first_step_from_rest_adds_the_increment() {
    let g = grid(16);
    let cfg = noisy_config(&g, Scheme::Em);
    let mut cfg = cfg.clone().with_forcing(SpectralField::zeros(&g)).unwrap();
    cfg.dt = 1e-3;
    let s = step_em_stochastic(&State::new(0.0, SpectralField::zeros(&g)), 0.05, &cfg).unwrap();
    let expected = cfg.noise.scaled(0.05);
    assert!(s.v.difference(&expected).unwrap().max_abs() < 1e-15);
}

#[test]
fn em_single_mode_reaches_noise_floor() {
    let g = grid(8);
    let nu = 0.5;
    let idx = g.index_of(1, 0).unwrap();
    let mut h = SpectralField::zeros(&g);
    h.set_hermitian(idx, [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.0)]);
    let mut cfg = SimConfig::new(&g, nu, 1e-2).unwrap().with_noise(h.clone()).unwrap();
    cfg.nonlinear = false;
    cfg.stride = 1;
    let w = sample_wiener(0.0, 4000.0, 1e-2, 17).unwrap();
    let traj = integrate(&h.scaled(20.0), Driver::Stochastic(&w), &cfg).unwrap();
    let tail = &traj.series[traj.series.len() / 10..];
    let mean_sq: f64 = tail.iter().map(|r| r.norm_h * r.norm_h).sum::<f64>() / tail.len() as f64;
    let target = norm(&h).powi(2) / (2.0 * nu * g.k_squared()[idx]);
    assert!((mean_sq / target - 1.0).abs() < 0.1, "{mean_sq} vs {target}");
    // initial transient decays monotonically at first
    assert!(traj.series[100].norm_h < traj.series[0].norm_h);
}

#[test]
fn conjugate_is_linear() {
    let g = grid(8);
    let v = random_divfree_field(&g, &EnergyProfile::band(2.0, 1.0), 1);
    let h = random_divfree_field(&g, &EnergyProfile::band(2.0, 0.5), 2);
    assert_eq!(conjugate(&v, 0.0, &h).unwrap(), v);
    assert_eq!(conjugate(&SpectralField::zeros(&g), 1.0, &h).unwrap(), h);
    let d = conjugate(&v, -1.7, &h).unwrap().difference(&v).unwrap();
    assert!((norm(&d) - 1.7 * norm(&h)).abs() < 1e-14);
    assert!(conjugate(&v, 1.0, &SpectralField::zeros(&grid(16))).is_err());
}

#[test]
fn observer_contract() {
    let g = grid(8);
    let mut cfg = SimConfig::new(&g, 0.1, 1e-2).unwrap();
    let v0 = random_divfree_field(&g, &EnergyProfile::band(2.0, 1.0), 1);
    let t = integrate(&v0, Driver::Deterministic { t0: 0.0, steps: 0 }, &cfg).unwrap();
    assert_eq!(t.final_state.v, v0);
    assert_eq!(t.series.len(), 1);
    for (steps, stride) in [(25, 10), (30, 10), (7, 1), (7, 3)] {
        cfg.stride = stride;
        let t = integrate(&v0, Driver::Deterministic { t0: 0.0, steps }, &cfg).unwrap();
        assert_eq!(t.series.len(), steps / stride + 1);
    }
}

#[test]
fn path_dt_must_match() {
    let g = grid(8);
    let cfg = SimConfig::new(&g, 0.1, 1e-2).unwrap();
    let w = sample_wiener(0.0, 1.0, 2e-2, 1).unwrap();
    let v0 = SpectralField::zeros(&g);
    assert!(matches!(
        integrate(&v0, Driver::Stochastic(&w), &cfg),
        Err(DynamicsError::DtMismatch { .. })
    ));
    let ou = ou_from_wiener(&w, OuInit::Zero);
    assert!(integrate(&v0, Driver::Random(&ou), &cfg).is_err());
    let em = cfg.clone().with_scheme(Scheme::Em);
    let ou = ou_from_wiener(&sample_wiener(0.0, 1.0, 1e-2, 1).unwrap(), OuInit::Zero);
    assert!(matches!(
        integrate(&v0, Driver::Random(&ou), &em),
        Err(DynamicsError::SchemeMismatch(_))
    ));
}

#[test]
fn unforced_energy_is_monotone_and_poincare_bounded() {
    let g = grid(32);
    let nu = 0.05;
    let mut cfg = SimConfig::new(&g, nu, 2e-3).unwrap();
    cfg.stride = 1;
    let v0 = random_divfree_field(&g, &EnergyProfile::band(8.0, 3.0), 4);
    let traj = integrate(&v0, Driver::Deterministic { t0: 0.0, steps: 500 }, &cfg).unwrap();
    let n0 = traj.series[0].norm_h;
    for w in traj.series.windows(2) {
        assert!(w[1].norm_h <= w[0].norm_h + 1e-9);
    }
    for r in &traj.series {
        assert!(r.norm_h <= (-nu * g.lambda1() * r.t).exp() * n0 * (1.0 + 1e-6));
    }
}

#[test]
fn invariants_hold_along_noisy_run() {
    let g = grid(16);
    let cfg = noisy_config(&g, Scheme::Etd2);
    let ou = ou_from_wiener(&sample_wiener(0.0, 0.5, cfg.dt, 8).unwrap(), OuInit::Stationary);
    let v0 = random_divfree_field(&g, &EnergyProfile::band(4.0, 1.0), 2);
    let mut worst: f64 = 0.0;
    integrate_observed(&v0, Driver::Random(&ou), &cfg, |s| {
        worst = worst.max(relative_divergence(&s.v)).max(s.v.hermitian_defect());
        assert_eq!(s.v.mode(0), [Complex64::new(0.0, 0.0); 2]);
    })
    .unwrap();
    assert!(worst < 1e-12);
}

#[test]
fn blow_up_aborts_with_last_valid_state() {
    let g = grid(16);
    let f = random_divfree_field(&g, &EnergyProfile::band(4.0, 50.0), 3);
    let cfg = SimConfig::new(&g, 1e-3, 10.0).unwrap().with_forcing(f).unwrap();
    let v0 = random_divfree_field(&g, &EnergyProfile::band(4.0, 10.0), 4);
    match integrate(&v0, Driver::Deterministic { t0: 0.0, steps: 10_000 }, &cfg) {
        Err(DynamicsError::NonFinite { last_valid, step, .. }) => {
            assert!(last_valid.v.is_finite());
            assert_eq!(last_valid.step, step);
        }
        other => panic!("expected abort, got {:?}", other.map(|t| t.final_state.t)),
    }
}
