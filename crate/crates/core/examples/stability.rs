// Critical delays of the driver's wells, checked against simulated driver
// amplitudes just below and above the Hopf delay.
//
//     cargo run --release --example stability

use delayed_duffing::dde::SolverConfig;
use delayed_duffing::model::{DriverRun, OscillatorParams};
use delayed_duffing::observables::{amplitude, ASYMPTOTIC_FRACTION};
use delayed_duffing::stability::critical_points;

fn main() {
    let p = OscillatorParams::default();
    println!(
        "{:>9} {:>9} {:>9} {:>9} {:>6}",
        "x*", "omega", "tau_c", "tau_alt", "K"
    );
    for cp in critical_points(&p) {
        println!(
            "{:>9.5} {:>9.5} {:>9.5} {:>9.5} {:>6.2}",
            cp.x_star, cp.omega, cp.tau_c, cp.tau_alt, cp.stiffness
        );
    }

    let hopf = critical_points(&p)
        .into_iter()
        .map(|cp| cp.tau_c)
        .fold(0.0, f64::max);
    let cfg = SolverConfig::default();
    for tau in [hopf - 0.05, hopf + 0.05] {
        let run = DriverRun::compute(&p.with_tau(tau), [1.0, 1.0], &cfg).unwrap();
        println!(
            "driver amplitude at tau = {tau:.4}: {:.4}",
            amplitude(&run.x1(), ASYMPTOTIC_FRACTION)
        );
    }
}
