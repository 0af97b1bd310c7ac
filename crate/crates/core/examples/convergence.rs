//! Euler-Maruyama on the Ito equation against the conjugated random
//! equation on the same Brownian path, refined four times.

use trns::dynamics::SimConfig;
use trns::experiments::conjugation_convergence;
use trns::spectral::*;

fn main() {
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 16).unwrap();
    let f = to_spectral(&PhysicalField::from_fn(&grid, |_, y| [(4.0 * y).sin(), 0.0]));
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * grid.lambda1() / grad_linf(&h));
    let cfg = SimConfig::new(&grid, 1.0, 0.01).unwrap().with_forcing(f).unwrap().with_noise(h).unwrap();
    let v0 = random_divfree_field(&grid, &EnergyProfile::band(4.0, 1.0), 5);
    let r = conjugation_convergence(&cfg, &v0, 1.0 / 128.0, 4, 1.0, 1).unwrap();
    for (dt, e) in r.dts.iter().zip(&r.errors) {
        println!("dt = {dt:.3e}  gap = {e:.4e}");
    }
    println!("ratios {:?}, order {:.3}", r.ratios, r.order);
}
