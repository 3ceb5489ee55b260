// Delay scan of the uncoupled driver: amplitude, frequency and behaviour per
// tau, and the delays where the behaviour first changes.
//
//     cargo run --release --example driver_regions

use delayed_duffing::observables::{classify_region, Behavior};
use delayed_duffing::sweep::{run_slice, FixedParam, SimSettings};

fn main() {
    let rows = run_slice(
        FixedParam::Coupling(0.0),
        "0.1:4.2:0.05".parse().unwrap(),
        &SimSettings::default(),
        0,
    )
    .unwrap();

    let mut previous: Option<Behavior> = None;
    for r in &rows {
        let b = r.driver_behavior.unwrap();
        let mark = if previous.is_some_and(|p| p != b) {
            "  <-"
        } else {
            ""
        };
        println!(
            "tau {:>5.2}  region {:<3}  A_x1 {:>7.4}  omega1 {:>7}  {}{mark}",
            r.tau,
            classify_region(r.tau).to_string(),
            r.a_x1.unwrap(),
            r.omega1.map(|w| format!("{w:.4}")).unwrap_or_default(),
            b
        );
        previous = Some(b);
    }
}
