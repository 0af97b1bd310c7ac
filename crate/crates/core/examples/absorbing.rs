//! Absorbing radii: data of H-norm 1 to 1000 pulled back over growing
//! horizons forget their size.

use trns::dynamics::SimConfig;
use trns::experiments::{measure_absorbing, AbsorbingSpec};
use trns::spectral::*;

fn main() {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, n).unwrap();
    let f = to_spectral(&PhysicalField::from_fn(&grid, |_, y| [(4.0 * y).sin(), 0.0]));
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * grid.lambda1() / grad_linf(&h));
    let cfg = SimConfig::new(&grid, 1.0, 0.01).unwrap().with_forcing(f).unwrap().with_noise(h).unwrap();
    let spec = AbsorbingSpec::new(vec![1.0, 10.0, 100.0, 1000.0], vec![2.0, 5.0, 10.0], vec![7]);
    let r = measure_absorbing(&cfg, &spec, None).unwrap();
    for row in &r.rows {
        println!(
            "r0 {:>6} horizon {:>4} dt {:.2e}: H {:.5e} H1 {:.5e} H2 {:.5e}",
            row.radius, row.horizon, row.dt, row.norm_h, row.norm_h1, row.norm_h2
        );
    }
    for e in &r.estimates {
        println!("horizon {:>4}: radius H {:.5e}, H1 {:.5e}, H2 {:.5e}", e.horizon, e.radius_h, e.radius_h1, e.radius_h2);
    }
    println!("absorbing from horizon {:?}", r.absorbing_time);
}
