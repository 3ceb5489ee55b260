use delayed_duffing::dde::SolverConfig;
use delayed_duffing::model::{DriverRun, OscillatorParams};
use delayed_duffing::observables::{
    amplitude, classify_behavior, classify_region, dominant_frequency, extrema_diagram,
    mean_distance, Behavior, Region, ASYMPTOTIC_FRACTION,
};
use delayed_duffing::sweep::{run_slice, FixedParam, ParamRange, SimSettings};

const DRIVER_WELL: f64 = 1.224744871391589;

fn driver_x1(tau: f64, t_final: f64) -> Vec<f64> {
    let cfg = SolverConfig::new(0.01, t_final, 1).unwrap();
    DriverRun::compute(&OscillatorParams::default().with_tau(tau), [1.0, 1.0], &cfg)
        .unwrap()
        .x1()
}

#[test]
fn region_one_driver_settles() {
    let x1 = driver_x1(1.0, 500.0);
    assert!(amplitude(&x1, ASYMPTOTIC_FRACTION) < 0.05);
    assert_eq!(
        classify_behavior(&x1, [-DRIVER_WELL, DRIVER_WELL]),
        Behavior::FixedPoint
    );
}

#[test]
fn region_two_driver_is_a_single_well_cycle() {
    let x1 = driver_x1(2.0, 300.0);
    let omega = dominant_frequency(&x1, 0.01).unwrap().unwrap();
    assert!((omega - 1.5881).abs() < 0.01, "omega1 = {omega}");

    let ex = extrema_diagram(&x1, 0.01, 5, Some(omega)).unwrap();
    assert!(!ex.maxima.is_empty() && !ex.minima.is_empty());
    let spread = |v: &[f64]| {
        v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - v.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    assert!(spread(&ex.maxima) < 1e-3 && spread(&ex.minima) < 1e-3);
    let half_range = (ex.maxima[0] - ex.minima[0]) / 2.0;
    assert!((half_range - amplitude(&x1, ASYMPTOTIC_FRACTION)).abs() < 1e-3);
    assert_eq!(
        classify_behavior(&x1, [-DRIVER_WELL, DRIVER_WELL]),
        Behavior::SingleWellPeriodic
    );
}

#[test]
fn behaviour_labels_across_regions() {
    let wells = [-DRIVER_WELL, DRIVER_WELL];
    assert_eq!(
        classify_behavior(&driver_x1(2.7, 300.0), wells),
        Behavior::CrossWellAperiodic
    );
    assert_eq!(
        classify_behavior(&driver_x1(4.0, 300.0), wells),
        Behavior::CrossWellPeriodic
    );
    assert_eq!(classify_region(1.0), Region::I);
    assert_eq!(classify_region(2.0), Region::II);
    assert_eq!(classify_region(4.0), Region::IV);
}

#[test]
fn weak_coupling_mean_distance() {
    let settings = SimSettings {
        sim: SolverConfig::new(0.01, 500.0, 1).unwrap(),
        ..Default::default()
    };
    let rec = run_slice(FixedParam::Tau(1.0), ParamRange::single(0.06), &settings, 1).unwrap();
    let d = rec[0].mean_dist.unwrap();
    assert!((d - 2.13).abs() < 0.05, "mean_dist = {d}");
    assert!(d < rec[0].mean_dist_c0.unwrap());
}

#[test]
fn mean_distance_of_constants() {
    let a = vec![1.2247; 90];
    let b = vec![-1.0; 90];
    assert!((mean_distance(&a, &b).unwrap() - 2.2247).abs() < 1e-12);
    assert_eq!(mean_distance(&a, &a).unwrap(), 0.0);
}
