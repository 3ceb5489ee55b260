//! Parameter sweeps over the coupling constant and the delay.
//!
//! For each delay the driver is integrated once and reused for every
//! coupling in that row. Rows and couplings run on a rayon pool; each record
//! depends only on its own `(tau, C)`, so the output is identical for any
//! worker count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::dde::SolverConfig;
use crate::error::{Error, Result};
use crate::model::{fixed_points, BoundaryData, DriverRun, OscillatorParams, WellStructure};
use crate::observables::{
    amplitude, classify_behavior, classify_region, dominant_frequency, extrema_diagram,
    mean_distance, Behavior, Extrema, Region, ASYMPTOTIC_FRACTION,
};

/// Periods covered by the extrema diagram.
pub const EXTREMA_PERIODS: usize = 5;

/// Inclusive arithmetic range `min, min + step, ..., <= max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl ParamRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        let r = Self { min, max, step };
        r.validate()?;
        Ok(r)
    }

    pub fn single(v: f64) -> Self {
        Self {
            min: v,
            max: v,
            step: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.step.is_finite()) {
            return Err(Error::InvalidRange(format!("{self} has non-finite bounds")));
        }
        if self.step <= 0.0 {
            return Err(Error::InvalidRange(format!(
                "{self}: step must be positive"
            )));
        }
        if self.max < self.min {
            return Err(Error::InvalidRange(format!("{self}: max is below min")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.min + i as f64 * self.step)
            .collect()
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.step)
    }
}

impl FromStr for ParamRange {
    type Err = Error;

    /// `min:max:step`, or a single number.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidRange(format!("`{s}`: `{p}` is not a number")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [v] => Ok(Self::single(parse(v)?)),
            [a, b, c] => Self::new(parse(a)?, parse(b)?, parse(c)?),
            _ => Err(Error::InvalidRange(format!("`{s}`: expected min:max:step"))),
        }
    }
}

/// Physical constants, boundary data and solver settings shared by every
/// point of a sweep. `params.tau` and `params.coupling` are overridden per point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimSettings {
    pub params: OscillatorParams,
    pub boundary: BoundaryData,
    pub sim: SolverConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub coupling: ParamRange,
    pub tau: ParamRange,
    pub settings: SimSettings,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        self.coupling.validate()?;
        self.tau.validate()?;
        self.settings.sim.validate()?;
        let h = self.settings.sim.step_size;
        if self.tau.min < h {
            return Err(Error::InvalidRange(format!(
                "tau range {} starts below the step size {h}",
                self.tau
            )));
        }
        if self.coupling.min < 0.0 {
            return Err(Error::InvalidRange(format!(
                "coupling range {} has negative values",
                self.coupling
            )));
        }
        Ok(())
    }
}

/// Observables of one `(tau, C)` point. `None` fields were not measurable
/// (divergent run, or no spectral line).
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRecord {
    pub tau: f64,
    pub coupling: f64,
    pub a_x1: Option<f64>,
    pub a_x2c: Option<f64>,
    pub mean_dist: Option<f64>,
    /// Distance between the driver and the uncoupled response.
    pub mean_dist_c0: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub region: Region,
    /// Behaviour of the response.
    pub behavior: Option<Behavior>,
    pub driver_behavior: Option<Behavior>,
    pub x1_extrema: Option<Extrema>,
    pub x2_extrema: Option<Extrema>,
    pub failed: bool,
}

impl ObservableRecord {
    fn failed(tau: f64, coupling: f64) -> Self {
        Self {
            tau,
            coupling,
            a_x1: None,
            a_x2c: None,
            mean_dist: None,
            mean_dist_c0: None,
            omega1: None,
            omega2: None,
            region: classify_region(tau),
            behavior: None,
            driver_behavior: None,
            x1_extrema: None,
            x2_extrema: None,
            failed: true,
        }
    }
}

struct SeriesSummary {
    amplitude: f64,
    omega: Option<f64>,
    behavior: Behavior,
    extrema: Option<Extrema>,
}

fn summarize(x: &[f64], h_record: f64, well: f64) -> SeriesSummary {
    let behavior = classify_behavior(x, [-well, well]);
    // A converged series has no oscillation frequency.
    let omega = match behavior {
        Behavior::FixedPoint => None,
        _ => dominant_frequency(x, h_record).ok().flatten(),
    };
    SeriesSummary {
        amplitude: amplitude(x, ASYMPTOTIC_FRACTION),
        omega,
        behavior,
        // Slow lines can span more periods than the run holds.
        extrema: extrema_diagram(x, h_record, EXTREMA_PERIODS, omega)
            .or_else(|_| extrema_diagram(x, h_record, EXTREMA_PERIODS, None))
            .ok(),
    }
}

fn wells(p: &OscillatorParams) -> (f64, f64) {
    match fixed_points(p) {
        WellStructure::DoubleWell(fp) => (fp.driver, fp.response),
        WellStructure::NoDoubleWell { .. } => (1.0, 1.0),
    }
}

fn compute_row(tau: f64, couplings: &[f64], settings: &SimSettings) -> Vec<ObservableRecord> {
    let p = settings.params.with_tau(tau);
    let Ok(driver) = DriverRun::compute(&p, settings.boundary.history, &settings.sim) else {
        return couplings
            .iter()
            .map(|&c| ObservableRecord::failed(tau, c))
            .collect();
    };
    let h_record = driver.trajectory.h_record;
    let (driver_well, response_well) = wells(&p);
    let x1 = driver.x1();
    let d = summarize(&x1, h_record, driver_well);

    let response_x = |c: f64| {
        driver
            .drive_response(c, settings.boundary.response_ic)
            .map(|t| t.component(0))
    };
    let baseline = response_x(0.0).ok();
    let md_c0 = baseline.as_ref().and_then(|x2| mean_distance(&x1, x2).ok());

    couplings
        .par_iter()
        .map(|&c| {
            let x2 = if c == 0.0 {
                baseline.clone().ok_or(())
            } else {
                response_x(c).map_err(|_| ())
            };
            let mut rec = ObservableRecord {
                a_x1: Some(d.amplitude),
                omega1: d.omega,
                driver_behavior: Some(d.behavior),
                x1_extrema: d.extrema.clone(),
                mean_dist_c0: md_c0,
                ..ObservableRecord::failed(tau, c)
            };
            if let Ok(x2) = x2 {
                let r = summarize(&x2, h_record, response_well);
                rec.a_x2c = Some(r.amplitude);
                rec.omega2 = r.omega;
                rec.behavior = Some(r.behavior);
                rec.x2_extrema = r.extrema;
                rec.mean_dist = mean_distance(&x1, &x2).ok();
                rec.failed = false;
            }
            rec
        })
        .collect()
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// One record per grid point, ordered with `tau` outer and `C` inner.
/// `jobs = 0` uses rayon's default thread count.
pub fn run_sweep(grid: &SweepGrid, jobs: usize) -> Result<Vec<ObservableRecord>> {
    grid.validate()?;
    let taus = grid.tau.values();
    let couplings = grid.coupling.values();
    let rows: Vec<Vec<ObservableRecord>> = with_pool(jobs, || {
        taus.par_iter()
            .map(|&tau| compute_row(tau, &couplings, &grid.settings))
            .collect()
    });
    Ok(rows.into_iter().flatten().collect())
}

/// Which parameter a slice holds fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedParam {
    Tau(f64),
    Coupling(f64),
}

impl FromStr for FixedParam {
    type Err = Error;

    /// `tau=<v>` or `C=<v>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRange(format!("`{s}`: expected tau=<value> or C=<value>"));
        let (name, value) = s.split_once('=').ok_or_else(bad)?;
        let v: f64 = value.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "tau" => Ok(Self::Tau(v)),
            "C" | "c" | "coupling" => Ok(Self::Coupling(v)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FixedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tau(v) => write!(f, "tau={v}"),
            Self::Coupling(v) => write!(f, "C={v}"),
        }
    }
}

/// One-dimensional cut through the `(C, tau)` plane.
pub fn run_slice(
    fixed: FixedParam,
    varying: ParamRange,
    settings: &SimSettings,
    jobs: usize,
) -> Result<Vec<ObservableRecord>> {
    let (coupling, tau) = match fixed {
        FixedParam::Tau(t) => (varying, ParamRange::single(t)),
        FixedParam::Coupling(c) => (ParamRange::single(c), varying),
    };
    run_sweep(
        &SweepGrid {
            coupling,
            tau,
            settings: *settings,
        },
        jobs,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub location: f64,
    pub height: f64,
    pub prominence: f64,
}

/// Peaks ordered by location.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeakList(pub Vec<Peak>);

impl PeakList {
    pub fn iter(&self) -> std::slice::Iter<'_, Peak> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn most_prominent(&self) -> Option<&Peak> {
        self.0
            .iter()
            .max_by(|a, b| a.prominence.total_cmp(&b.prominence))
    }

    pub fn tallest(&self) -> Option<&Peak> {
        self.0.iter().max_by(|a, b| a.height.total_cmp(&b.height))
    }

    /// Peaks whose prominence is at least `min_prominence`.
    pub fn with_min_prominence(&self, min_prominence: f64) -> PeakList {
        PeakList(
            self.0
                .iter()
                .filter(|p| p.prominence >= min_prominence)
                .copied()
                .collect(),
        )
    }
}

/// Local maxima of `values` sampled at `locations`.
///
/// A maximum is higher than its left neighbour and not lower than its right
/// one. Its prominence is the height above the higher of the two lowest
/// points reached on each side before the signal rises above the peak again
/// (or the series ends).
pub fn find_peaks(locations: &[f64], values: &[f64]) -> PeakList {
    let n = values.len().min(locations.len());
    let mut peaks = Vec::new();
    if n < 3 {
        return PeakList(peaks);
    }
    for i in 1..n - 1 {
        let v = values[i];
        if !(v > values[i - 1] && v >= values[i + 1]) {
            continue;
        }
        let left_min = values[..i]
            .iter()
            .rev()
            .take_while(|&&u| u <= v)
            .fold(v, |m, &u| m.min(u));
        let right_min = values[i + 1..n]
            .iter()
            .take_while(|&&u| u <= v)
            .fold(v, |m, &u| m.min(u));
        let prominence = v - left_min.max(right_min);
        if prominence > 0.0 {
            peaks.push(Peak {
                location: locations[i],
                height: v,
                prominence,
            });
        }
    }
    PeakList(peaks)
}

/// Driver versus response comparison along a delay scan at fixed coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRow {
    pub record: ObservableRecord,
    /// Mean of the extrema of the driver's last periods.
    pub x1_extrema_mean: Option<f64>,
    pub x2_extrema_mean: Option<f64>,
}

pub fn delay_transfer_report(
    coupling: f64,
    tau: ParamRange,
    settings: &SimSettings,
    jobs: usize,
) -> Result<Vec<TransferRow>> {
    if coupling.is_nan() || coupling < 0.0 {
        return Err(Error::InvalidRange(format!(
            "coupling must be non-negative, got {coupling}"
        )));
    }
    let records = run_slice(FixedParam::Coupling(coupling), tau, settings, jobs)?;
    Ok(records
        .into_iter()
        .map(|record| TransferRow {
            x1_extrema_mean: record.x1_extrema.as_ref().and_then(Extrema::mean),
            x2_extrema_mean: record.x2_extrema.as_ref().and_then(Extrema::mean),
            record,
        })
        .collect())
}
