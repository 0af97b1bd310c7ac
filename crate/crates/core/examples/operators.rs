//! Spectral operators on one random field: norms, projection, the advection
//! term and its cancellation identities.

use trns::spectral::*;

fn main() {
    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 32).unwrap();
    let u = random_divfree_field(&grid, &EnergyProfile::band(6.0, 1.0), 1);
    let v = random_divfree_field(&grid, &EnergyProfile::band(6.0, 1.0), 2);
    for s in [0.0, 1.0, 2.0] {
        println!("||u||_H^{s} = {:.6}", sobolev_norm(&u, s).unwrap());
    }
    let b = nonlinear_term(&u, &v).unwrap();
    println!("(B(u,v), v) = {:.3e}", b.inner(&v).unwrap());
    let buu = nonlinear_term(&u, &u).unwrap();
    println!("(B(u,u), Au) = {:.3e}", buu.inner(&apply_stokes_power(&u, 1.0)).unwrap());
    println!("relative divergence of B(u,v) = {:.3e}", relative_divergence(&b));
    println!("||grad u||_inf = {:.6}, max speed = {:.6}", grad_linf(&u), to_physical(&u).max_speed());
}
