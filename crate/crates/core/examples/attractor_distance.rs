//! Manufactured steady state u0: pullback states of the noisy system sit in
//! an H^2 neighborhood of {u0} whose size tracks the noise amplitude.

use trns::dynamics::SimConfig;
use trns::experiments::{distance_to_set, pullback_solve, sample_attractor_deterministic, PullbackSpec};
use trns::spectral::*;

fn main() {
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 32).unwrap();
    let nu = 1.0;
    let u0 = random_divfree_field(&grid, &EnergyProfile::band(3.0, 0.5), 6);
    let mut f = apply_stokes_power(&u0, 1.0).scaled(nu);
    f.add_scaled(1.0, &nonlinear_term(&u0, &u0).unwrap());
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * nu * grid.lambda1() / grad_linf(&h));

    let base = SimConfig::new(&grid, nu, 0.01).unwrap().with_forcing(f).unwrap();
    let start = random_divfree_field(&grid, &EnergyProfile::band(4.0, 3.0), 1);
    let sample = sample_attractor_deterministic(&base, &start, 30.0, 4, 50).unwrap();
    println!("deterministic sample: {} states, H^2 diameter {:.3e}", sample.count(), sample.diameter_h2());

    for scale in [1.0, 0.5, 0.25] {
        let cfg = base.clone().with_noise(h.scaled(scale)).unwrap();
        let spec = PullbackSpec {
            cfg,
            horizon: 20.0,
            seed: 11,
            initial: vec![start.clone()],
            refine: 0,
        };
        let v = &pullback_solve(&spec).unwrap()[0].v;
        println!("noise x{scale:<4}: dist_H2(v(0), attractor) = {:.4e}", distance_to_set(v, &sample, 2).unwrap());
    }
}
