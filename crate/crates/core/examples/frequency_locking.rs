// Response frequency pulled onto the driver frequency as the coupling grows
// (tau = 2, where the driver is a single-well cycle).
//
//     cargo run --release --example frequency_locking

use delayed_duffing::sweep::{run_slice, FixedParam, SimSettings};

fn main() {
    let rows = run_slice(
        FixedParam::Tau(2.0),
        "0:4:0.1".parse().unwrap(),
        &SimSettings::default(),
        0,
    )
    .unwrap();
    println!("{:>5} {:>8} {:>8} {:>8}", "C", "omega1", "omega2", "|diff|");
    for r in &rows {
        let fmt = |w: Option<f64>| w.map(|w| format!("{w:.4}")).unwrap_or_else(|| "-".into());
        let diff = match (r.omega1, r.omega2) {
            (Some(a), Some(b)) => format!("{:.4}", (a - b).abs()),
            _ => "-".into(),
        };
        println!(
            "{:>5.1} {:>8} {:>8} {:>8}",
            r.coupling,
            fmt(r.omega1),
            fmt(r.omega2),
            diff
        );
    }
}
