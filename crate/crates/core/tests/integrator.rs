use delayed_duffing::dde::{integrate, solve_observed, HistoryFunction, SolverConfig};
use delayed_duffing::model::{
    potential, simulate_pair, BoundaryData, CoupledSystem, DriverRun, DriverSystem, Oscillator,
    OscillatorParams,
};
use delayed_duffing::observables::{amplitude, ASYMPTOTIC_FRACTION};
use delayed_duffing::stability::critical_points;
use delayed_duffing::Error;

fn neg_delayed(_t: f64, _y: &[f64; 1], d: &[f64; 1]) -> [f64; 1] {
    [-d[0]]
}

fn linear_exact(t: f64) -> f64 {
    if t <= 1.0 {
        1.0 - t
    } else if t <= 2.0 {
        t * t / 2.0 - 2.0 * t + 1.5
    } else {
        let u = t - 1.0;
        -0.5 - (u.powi(3) / 6.0 - u * u + 1.5 * u - 2.0 / 3.0)
    }
}

#[test]
fn linear_dde_hand_solution() {
    let cfg = SolverConfig::new(0.01, 3.0, 1).unwrap();
    let traj = integrate(
        &neg_delayed,
        &HistoryFunction::Constant([1.0]),
        [1.0],
        1.0,
        &cfg,
    )
    .unwrap();
    assert!(traj.samples[100][0].abs() < 1e-8);
    assert!((traj.samples[200][0] + 0.5).abs() < 1e-8);
    let max_err = traj
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| (s[0] - linear_exact(traj.time(i))).abs())
        .fold(0.0, f64::max);
    assert!(max_err < 1e-6, "max error {max_err}");
}

fn zero_delay_rhs(y: [f64; 2], p: &OscillatorParams) -> [f64; 2] {
    [
        y[1],
        -p.mu * y[1] - (p.gamma + p.alpha) * y[0] + p.alpha * y[0].powi(3),
    ]
}

fn plain_rk4(y0: [f64; 2], h: f64, n: usize, p: &OscillatorParams) -> Vec<[f64; 2]> {
    let mut out = vec![y0];
    let mut y = y0;
    let add = |a: [f64; 2], k: [f64; 2], s: f64| [a[0] + s * k[0], a[1] + s * k[1]];
    for _ in 0..n {
        let k1 = zero_delay_rhs(y, p);
        let k2 = zero_delay_rhs(add(y, k1, h / 2.0), p);
        let k3 = zero_delay_rhs(add(y, k2, h / 2.0), p);
        let k4 = zero_delay_rhs(add(y, k3, h), p);
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        out.push(y);
    }
    out
}

#[test]
fn zero_delay_matches_plain_ode() {
    let p = OscillatorParams::default().with_tau(0.0);
    let cfg = SolverConfig::new(0.01, 50.0, 1).unwrap();
    let traj = integrate(
        &DriverSystem(p),
        &HistoryFunction::Constant([1.0, 1.0]),
        [1.0, 1.0],
        0.0,
        &cfg,
    )
    .unwrap();
    let oracle = plain_rk4([1.0, 1.0], 0.01, cfg.n_steps(), &p);
    for (a, b) in traj.samples.iter().zip(&oracle) {
        assert!((a[0] - b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10);
    }
}

#[test]
fn conservative_limit_energy() {
    let p = OscillatorParams {
        mu: 0.0,
        gamma: 0.0,
        coupling: 0.0,
        ..Default::default()
    };
    let cfg = SolverConfig::new(0.01, 500.0, 1).unwrap();
    let ic = [1.0, 1.0, 0.5, 0.5];
    let traj = integrate(
        &CoupledSystem(p),
        &HistoryFunction::Constant(ic),
        ic,
        p.tau,
        &cfg,
    )
    .unwrap();
    let e = |x: f64, v: f64| 0.5 * v * v + potential(x, &p, Oscillator::Response);
    let (e1, e2) = (e(1.0, 1.0), e(0.5, 0.5));
    for s in &traj.samples {
        assert!((e(s[0], s[1]) - e1).abs() < 1e-6);
        assert!((e(s[2], s[3]) - e2).abs() < 1e-6);
    }
}

#[test]
fn runs_are_deterministic() {
    let p = OscillatorParams::default()
        .with_tau(2.7)
        .with_coupling(1.66);
    let cfg = SolverConfig::new(0.01, 100.0, 1).unwrap();
    let a = simulate_pair(&p, &BoundaryData::default(), &cfg).unwrap();
    let b = simulate_pair(&p, &BoundaryData::default(), &cfg).unwrap();
    assert_eq!(a.samples, b.samples);
}

#[test]
fn dense_output_queries() {
    let cfg = SolverConfig::new(0.01, 3.0, 1).unwrap();
    let sol = solve_observed(
        &neg_delayed,
        &HistoryFunction::Constant([1.0]),
        [1.0],
        1.0,
        &cfg,
        |_| {},
    )
    .unwrap();
    for i in [0, 17, 150, 299] {
        let t = i as f64 * 0.01;
        assert_eq!(
            sol.dense.sample_delayed(t).unwrap(),
            sol.trajectory.samples[i]
        );
    }
    assert_eq!(sol.dense.sample_delayed(-0.5).unwrap(), [1.0]);
    let mid = sol.dense.sample_delayed(1.505).unwrap()[0];
    assert!((mid - linear_exact(1.505)).abs() < 1e-8);
    assert!(matches!(
        sol.dense.sample_delayed(3.5),
        Err(Error::Causality { .. })
    ));
}

#[test]
fn invalid_delays_and_divergence() {
    let cfg = SolverConfig::new(0.01, 10.0, 1).unwrap();
    let hist = HistoryFunction::Constant([1.0]);
    assert!(matches!(
        integrate(&neg_delayed, &hist, [1.0], -1.0, &cfg),
        Err(Error::NegativeDelay(_))
    ));
    assert!(matches!(
        integrate(&neg_delayed, &hist, [1.0], 0.005, &cfg),
        Err(Error::DelayBelowStep { .. })
    ));
    let blowup = |_t: f64, y: &[f64; 1], _d: &[f64; 1]| [y[0] * y[0]];
    match integrate(&blowup, &hist, [1.0], 0.0, &cfg) {
        Err(Error::Diverged { t }) => assert!(t > 0.9 && t < 1.1, "t = {t}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn critical_delay_brackets_oscillation_onset() {
    let p = OscillatorParams::default();
    let tau_c = critical_points(&p)
        .into_iter()
        .map(|cp| cp.tau_c)
        .find(|t| (1.5..1.6).contains(t))
        .expect("critical delay near 1.55");
    let cfg = SolverConfig::default();
    let amp = |tau: f64| {
        let run = DriverRun::compute(&p.with_tau(tau), [1.0, 1.0], &cfg).unwrap();
        amplitude(&run.x1(), ASYMPTOTIC_FRACTION)
    };
    assert!(amp(tau_c - 0.05) < 0.05);
    assert!(amp(tau_c + 0.05) > 0.05);
    assert!(amp(2.0) > 0.05);
}
