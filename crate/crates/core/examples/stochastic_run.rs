//! One trajectory of the noisy system: the conjugated random equation along
//! an OU path, with the physical velocity recovered as v + h z.
//!
//! Writes `series.csv`, `path.csv` and a plot script into the directory
//! given as the first argument (default `example-out`).

use std::path::PathBuf;
use std::sync::Arc;

use trns::dynamics::{check_assumption, conjugate, integrate, Driver, SimConfig};
use trns::io::{emit_plot_script, write_path_csv, write_series_csv, PlotSpec};
use trns::noise::{ou_from_wiener_with, sample_wiener, OuInit, OuUpdate};
use trns::spectral::*;

fn main() {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "example-out".into()));
    std::fs::create_dir_all(&out).unwrap();

    let grid = WaveGrid::new(2.0 * std::f64::consts::PI, 32).unwrap();
    let nu = 1.0;
    let f = to_spectral(&PhysicalField::from_fn(&grid, |_, y| [(4.0 * y).sin(), 0.0]));
    let mut h = random_divfree_field(&grid, &EnergyProfile::band(3.0, 1.0), 77);
    h.scale(0.5 * std::f64::consts::PI.sqrt() * nu * grid.lambda1() / grad_linf(&h));
    let report = check_assumption(&h, nu, &grid);
    println!("alpha = {:?}, beta = {:?}, lambda = {:?}", report.alpha, report.beta, report.lambda);

    let cfg = SimConfig::new(&grid, nu, 0.01).unwrap().with_forcing(f).unwrap().with_noise(h.clone()).unwrap();
    let ou = ou_from_wiener_with(
        Arc::new(sample_wiener(0.0, 5.0, cfg.dt, 3).unwrap()),
        OuInit::Stationary,
        OuUpdate::ExactMarginal,
    );
    let v0 = random_divfree_field(&grid, &EnergyProfile::band(4.0, 2.0), 5);
    let tr = integrate(&v0, Driver::Random(&ou), &cfg).unwrap();
    let u = conjugate(&tr.final_state.v, tr.final_state.z, &h).unwrap();
    println!("||v(5)||_H = {:.6}, ||u(5)||_H = {:.6}", sobolev_norm(&tr.final_state.v, 0.0).unwrap(), sobolev_norm(&u, 0.0).unwrap());

    write_series_csv(&tr.series, &out.join("series.csv")).unwrap();
    write_path_csv(&ou, &out.join("path.csv")).unwrap();
    let spec = PlotSpec {
        csv: "series.csv".into(),
        x: "t".into(),
        ys: vec!["norm_H".into(), "norm_H1".into(), "norm_H2".into()],
        title: "norms of v".into(),
        log_y: true,
        image: "series.png".into(),
    };
    emit_plot_script(&spec, &out.join("plot_series.py")).unwrap();
    println!("wrote {}", out.display());
}
