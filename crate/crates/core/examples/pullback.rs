//! Pullback family: initial data of very different sizes, started at -t and
//! run to 0 along one noise path, end up at the same point.

use trns::dynamics::SimConfig;
use trns::experiments::{pullback_solve, PullbackSpec};
use trns::spectral::*;

fn main() {
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 32).unwrap();
    let f = to_spectral(&PhysicalField::from_fn(&grid, |_, y| [(4.0 * y).sin(), 0.0]));
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * grid.lambda1() / grad_linf(&h));
    let cfg = SimConfig::new(&grid, 1.0, 0.01).unwrap().with_forcing(f).unwrap().with_noise(h).unwrap();
    let family: Vec<SpectralField> = [0.1, 1.0, 10.0]
        .iter()
        .map(|&r| random_divfree_field(&grid, &EnergyProfile::lowest_shell(r), 1))
        .collect();
    for horizon in [1.0, 2.0, 5.0, 10.0] {
        let spec = PullbackSpec {
            cfg: cfg.clone(),
            horizon,
            seed: 4,
            initial: family.clone(),
            refine: 0,
        };
        let states = pullback_solve(&spec).unwrap();
        let spread = states
            .iter()
            .map(|s| sobolev_norm(&s.v.difference(&states[0].v).unwrap(), 0.0).unwrap())
            .fold(0.0, f64::max);
        println!("horizon {horizon:>5}: ||v(0)||_H = {:.6}, family spread = {spread:.3e}", sobolev_norm(&states[0].v, 0.0).unwrap());
    }
}
