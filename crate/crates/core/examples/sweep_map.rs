// Coarse (tau, C) map of the response amplitude, drawn as text, with the
// full table written as CSV when a path is given.
//
//     cargo run --release --example sweep_map [-- out.csv]

use delayed_duffing::cli::observables_csv;
use delayed_duffing::sweep::{run_sweep, SimSettings, SweepGrid};

const SHADES: &[u8] = b" .:-=+*#%@";

fn main() {
    let grid = SweepGrid {
        coupling: "0:4:0.25".parse().unwrap(),
        tau: "0.1:4.1:0.2".parse().unwrap(),
        settings: SimSettings::default(),
    };
    let records = run_sweep(&grid, 0).unwrap();
    let top = records.iter().filter_map(|r| r.a_x2c).fold(0.0, f64::max);

    println!("A_x2C, tau down, C across 0..4 (max {top:.3})");
    for row in records.chunks(grid.coupling.len()) {
        let line: String = row
            .iter()
            .map(|r| match r.a_x2c {
                Some(a) => SHADES[((a / top) * (SHADES.len() - 1) as f64).round() as usize] as char,
                None => 'x',
            })
            .collect();
        println!("{:>4.1} |{line}|", row[0].tau);
    }

    if let Some(path) = std::env::args().nth(1).filter(|a| a.ends_with(".csv")) {
        std::fs::write(&path, observables_csv(&records)).unwrap();
        println!("wrote {path}");
    }
}
