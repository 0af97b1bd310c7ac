//! Loads a JSON config, reports the noise admissibility, runs a few steps
//! and round-trips the state through a checkpoint.

use trns::dynamics::{integrate, Driver};
use trns::io::{load_config, read_checkpoint, write_checkpoint};

const CONFIG: &str = r#"{
    "nu": 1.0, "N": 32, "dt": 0.01, "seed": 7,
    "forcing": {"preset": "shear", "k": 4, "amplitude": 1.0},
    "noise": {"preset": "random", "kmax": 3, "seed": 77, "alpha": 0.5},
    "initial": {"preset": "random", "kmax": 4, "seed": 5, "norm": 1.0}
}"#;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).unwrap(),
        None => CONFIG.to_string(),
    };
    let cfg = match load_config(&text) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    };
    println!("{}", cfg.echo());
    println!("{:#?}", cfg.assumption);

    let tr = integrate(&cfg.initial, Driver::Deterministic { t0: 0.0, steps: 50 }, &cfg.sim).unwrap();
    let dir = std::env::temp_dir().join("trns-example.ckpt");
    write_checkpoint(&tr.final_state, cfg.sim.nu, &dir).unwrap();
    let back = read_checkpoint(&dir).unwrap();
    println!("{:?}", back.header);
    println!("bit-exact round trip: {}", back.state.v == tr.final_state.v);
    std::fs::remove_file(dir).unwrap();
}
