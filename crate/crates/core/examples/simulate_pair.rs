// Time series of the driver and the response at tau = 1 for a few couplings,
// with the mean distance between them over the last third of the run.
//
//     cargo run --release --example simulate_pair

use delayed_duffing::dde::SolverConfig;
use delayed_duffing::model::{simulate_pair, BoundaryData, OscillatorParams};
use delayed_duffing::observables::{amplitude, mean_distance, trailing, ASYMPTOTIC_FRACTION};

fn main() {
    let cfg = SolverConfig::default();
    let boundary = BoundaryData::default();
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "C", "x1 tail", "x2 tail", "A_x2C", "mean_dist"
    );
    for c in [0.0, 0.06, 1.0, 1.66, 3.0] {
        let p = OscillatorParams::default().with_tau(1.0).with_coupling(c);
        let traj = simulate_pair(&p, &boundary, &cfg).expect("bounded run");
        let x1 = traj.component(0);
        let x2 = traj.component(2);
        let centre = |s: &[f64]| {
            let t = trailing(s, ASYMPTOTIC_FRACTION);
            t.iter().sum::<f64>() / t.len() as f64
        };
        println!(
            "{c:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            centre(&x1),
            centre(&x2),
            amplitude(&x2, ASYMPTOTIC_FRACTION),
            mean_distance(&x1, &x2).unwrap()
        );
    }
}
