// Response amplitude versus coupling at tau = 1, and its peaks.
//
//     cargo run --release --example resonance_slice

use delayed_duffing::sweep::{find_peaks, run_slice, FixedParam, SimSettings};

fn main() {
    let rows = run_slice(
        FixedParam::Tau(1.0),
        "0.01:4:0.01".parse().unwrap(),
        &SimSettings::default(),
        0,
    )
    .unwrap();
    let c: Vec<f64> = rows.iter().map(|r| r.coupling).collect();
    let a: Vec<f64> = rows.iter().map(|r| r.a_x2c.unwrap_or(f64::NAN)).collect();

    for r in rows.iter().step_by(10) {
        let amp = r.a_x2c.unwrap_or(0.0);
        println!(
            "C {:>4.2}  A_x2C {amp:.4}  {}",
            r.coupling,
            "#".repeat((amp * 60.0) as usize)
        );
    }

    let peaks = find_peaks(&c, &a);
    let main = peaks.tallest().unwrap();
    println!(
        "\nmain peak: C = {:.2}, A_x2C = {:.4}",
        main.location, main.height
    );
    for p in peaks.with_min_prominence(0.05 * main.prominence).iter() {
        if p.location != main.location {
            println!(
                "side peak: C = {:.2}, A_x2C = {:.4}, prominence {:.4}",
                p.location, p.height, p.prominence
            );
        }
    }
}
