//! Time averages of |z|^m along a stationary OU path against the moments of
//! its N(0, 1/2) invariant law.

use trns::experiments::ergodic_check;

fn main() {
    let t_end: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e4);
    let report = ergodic_check(t_end, 0.01, &[1, 2, 3], &[1, 2, 4, 6]).unwrap();
    println!("{:>5} {:>3} {:>12} {:>12} {:>10}", "seed", "m", "empirical", "exact", "rel_err");
    for r in &report.rows {
        println!("{:>5} {:>3} {:>12.6} {:>12.6} {:>10.2e}", r.seed, r.m, r.empirical, r.exact, r.rel_error);
    }
}
