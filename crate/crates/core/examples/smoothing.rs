//! H-to-H^2 Lipschitz ratios ||dv(T)||_{H^2}^2 / delta^2 of nearby
//! trajectories driven by the same noise.

use trns::dynamics::SimConfig;
use trns::experiments::{linear_smoothing_bound, measure_smoothing, Direction, SmoothingSpec};
use trns::spectral::*;

fn main() {
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 32).unwrap();
    let f = to_spectral(&PhysicalField::from_fn(&grid, |_, y| [(4.0 * y).sin(), 0.0]));
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * grid.lambda1() / grad_linf(&h));
    let cfg = SimConfig::new(&grid, 1.0, 0.01).unwrap().with_forcing(f).unwrap().with_noise(h).unwrap();
    let spec = SmoothingSpec {
        base: EnergyProfile::band(4.0, 1.0),
        deltas: vec![1e-2, 1e-3, 1e-4],
        times: vec![0.5, 1.0, 2.0, 4.0],
        directions: vec![Direction::RandomUnit, Direction::LowestShell],
    };
    let r = measure_smoothing(&cfg, &spec, &[1, 2]).unwrap();
    for row in &r.rows {
        println!(
            "seed {} {:<12} delta {:.0e} T {:<4} ratio {:.4e} (heat bound {:.4e})",
            row.seed,
            row.direction.name(),
            row.delta0,
            row.t,
            row.ratio,
            linear_smoothing_bound(&cfg, row.t)
        );
    }
    println!("scale-stable from T = {:?}", r.stable_time);
}
