//! Taylor-Green vortex against its closed form.

use trns::dynamics::{integrate, taylor_green, Driver, SimConfig};
use trns::spectral::{sobolev_norm, WaveGrid};

fn main() {
    let (nu, dt) = (0.1, 1e-3);
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 16).unwrap();
    let mut cfg = SimConfig::new(&grid, nu, dt).unwrap();
    cfg.stride = 100;
    let u0 = taylor_green(0.0, nu, &grid).unwrap();
    let tr = integrate(&u0, Driver::Deterministic { t0: 0.0, steps: 1000 }, &cfg).unwrap();
    println!("{:>6} {:>14} {:>14}", "t", "norm_H", "exact");
    for row in &tr.series {
        let exact = sobolev_norm(&taylor_green(row.t, nu, &grid).unwrap(), 0.0).unwrap();
        println!("{:>6.2} {:>14.10} {:>14.10}", row.t, row.norm_h, exact);
    }
    let exact = taylor_green(1.0, nu, &grid).unwrap();
    let err = sobolev_norm(&tr.final_state.v.difference(&exact).unwrap(), 0.0).unwrap()
        / sobolev_norm(&exact, 0.0).unwrap();
    println!("relative error at t = 1: {err:.3e}");
}
