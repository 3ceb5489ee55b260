// How much of the driver's delay-induced motion reaches the response at
// strong coupling: C = 3 against C = 4 along a delay scan.
//
//     cargo run --release --example delay_transfer

use delayed_duffing::sweep::{delay_transfer_report, SimSettings};

fn main() {
    let settings = SimSettings::default();
    let tau = "0.1:4.2:0.1".parse().unwrap();
    let c3 = delay_transfer_report(3.0, tau, &settings, 0).unwrap();
    let c4 = delay_transfer_report(4.0, tau, &settings, 0).unwrap();
    let f = |v: Option<f64>| v.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into());

    println!(
        "{:>5} {:>3} | {:>7} {:>7} | {:>7} {:>9} {:>9} | {:>7} {:>9}",
        "tau", "reg", "A_x1", "<x1>", "A(C=3)", "dist(C=3)", "dist(C=0)", "A(C=4)", "dist(C=4)"
    );
    for (a, b) in c3.iter().zip(&c4) {
        let (r3, r4) = (&a.record, &b.record);
        println!(
            "{:>5.2} {:>3} | {:>7} {:>7} | {:>7} {:>9} {:>9} | {:>7} {:>9}",
            r3.tau,
            r3.region.to_string(),
            f(r3.a_x1),
            f(a.x1_extrema_mean),
            f(r3.a_x2c),
            f(r3.mean_dist),
            f(r3.mean_dist_c0),
            f(r4.a_x2c),
            f(r4.mean_dist),
        );
    }
}
