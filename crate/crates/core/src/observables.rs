//! Measured quantities of sampled trajectories: amplitude, extrema,
//! dominant frequency, synchronization distance and regime labels.
//!
//! All windowed quantities look at the trailing part of a series, where the
//! transient has died out. The asymptotic window is the last third.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Fraction of a run treated as asymptotic.
pub const ASYMPTOTIC_FRACTION: f64 = 1.0 / 3.0;
/// Tail amplitude below which a run counts as converged to a fixed point.
pub const FIXED_POINT_AMPLITUDE: f64 = 0.05;
/// Relative spread of successive maxima below which a cross-well orbit is periodic.
pub const PERIODICITY_TOLERANCE: f64 = 0.02;
/// A spectral line must exceed this multiple of the median magnitude.
pub const PEAK_SIGNIFICANCE: f64 = 10.0;
pub const MIN_SPECTRAL_SAMPLES: usize = 256;
/// Extrema window used when no oscillation period is known.
pub const APERIODIC_WINDOW: f64 = 50.0;

const ZERO_PAD_FACTOR: usize = 8;

/// Trailing `fraction` of `series` (at least one sample when non-empty).
pub fn trailing(series: &[f64], fraction: f64) -> &[f64] {
    let n = series.len();
    let len = ((n as f64 * fraction).ceil() as usize).clamp(n.min(1), n);
    &series[n - len..]
}

/// Half the peak-to-peak excursion over the trailing `window` fraction.
pub fn amplitude(series: &[f64], window: f64) -> f64 {
    let tail = trailing(series, window);
    if tail.is_empty() {
        return 0.0;
    }
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    (hi - lo) / 2.0
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extrema {
    pub maxima: Vec<f64>,
    pub minima: Vec<f64>,
}

impl Extrema {
    /// Mean over all maxima and minima together, the centre of the orbit.
    pub fn mean(&self) -> Option<f64> {
        let n = self.maxima.len() + self.minima.len();
        if n == 0 {
            return None;
        }
        Some((self.maxima.iter().sum::<f64>() + self.minima.iter().sum::<f64>()) / n as f64)
    }
}

fn local_extrema(s: &[f64]) -> Extrema {
    let mut out = Extrema::default();
    for w in s.windows(3) {
        if w[1] > w[0] && w[1] >= w[2] {
            out.maxima.push(w[1]);
        } else if w[1] < w[0] && w[1] <= w[2] {
            out.minima.push(w[1]);
        }
    }
    out
}

/// Local maxima and minima over the last `n_periods` periods of
/// `2 pi / omega_hint`, or over [`APERIODIC_WINDOW`] time units when there
/// is no period.
pub fn extrema_diagram(
    series: &[f64],
    h_record: f64,
    n_periods: usize,
    omega_hint: Option<f64>,
) -> Result<Extrema> {
    let span = match omega_hint {
        Some(w) if w > 0.0 => n_periods as f64 * 2.0 * PI / w,
        _ => APERIODIC_WINDOW,
    };
    let needed = (span / h_record).ceil() as usize + 1;
    if needed > series.len() {
        return Err(Error::SeriesTooShort {
            needed,
            got: series.len(),
        });
    }
    Ok(local_extrema(&series[series.len() - needed..]))
}

/// Angular frequency of the strongest spectral line in the trailing third.
///
/// `Ok(None)` means no line stands out of the background.
pub fn dominant_frequency(series: &[f64], h_record: f64) -> Result<Option<f64>> {
    if series.len() < MIN_SPECTRAL_SAMPLES {
        return Err(Error::SeriesTooShort {
            needed: MIN_SPECTRAL_SAMPLES,
            got: series.len(),
        });
    }
    let tail = trailing(series, ASYMPTOTIC_FRACTION);
    let n = tail.len();
    let mean = tail.iter().sum::<f64>() / n as f64;
    let spread = tail.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if spread <= 1e-12 * mean.abs().max(1.0) {
        return Ok(None);
    }
    // Zero padding only refines the bin grid the parabola is fitted on.
    let n_fft = (n * ZERO_PAD_FACTOR).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = tail
        .iter()
        .map(|&v| Complex::new(v - mean, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(n_fft)
        .collect();
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);

    let mags: Vec<f64> = buf[..n_fft / 2 + 1].iter().map(|c| c.norm()).collect();
    let (peak, &peak_mag) = mags
        .iter()
        .enumerate()
        .skip(1)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("spectrum has more than one bin");

    let mut sorted = mags[1..].to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    if peak_mag.is_nan() || peak_mag <= 0.0 || peak_mag < PEAK_SIGNIFICANCE * median {
        return Ok(None);
    }

    let mut bin = peak as f64;
    if peak + 1 < mags.len() {
        let (a, b, c) = (mags[peak - 1], mags[peak], mags[peak + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            bin += 0.5 * (a - c) / denom;
        }
    }
    let f = bin / (n_fft as f64 * h_record);
    // Less than one full cycle in the window is a trend, not an oscillation.
    if f * n as f64 * h_record < 1.0 {
        return Ok(None);
    }
    Ok(Some(2.0 * PI * f))
}

/// Mean of `|x1 - x2|` over the final third of the samples.
pub fn mean_distance(x1: &[f64], x2: &[f64]) -> Result<f64> {
    if x1.len() != x2.len() {
        return Err(Error::LengthMismatch(x1.len(), x2.len()));
    }
    let a = trailing(x1, ASYMPTOTIC_FRACTION);
    let b = trailing(x2, ASYMPTOTIC_FRACTION);
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum::<f64>() / a.len() as f64)
}

/// Delay regimes of the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    I,
    II,
    III,
    IV,
}

pub const REGION_BOUNDARIES: [f64; 3] = [1.53, 2.35, 3.05];

/// Region of a delay value. Ties go to the right-hand interval.
pub fn classify_region(tau: f64) -> Region {
    let [b1, b2, b3] = REGION_BOUNDARIES;
    if tau < b1 {
        Region::I
    } else if tau < b2 {
        Region::II
    } else if tau < b3 {
        Region::III
    } else {
        Region::IV
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::I => "I",
            Region::II => "II",
            Region::III => "III",
            Region::IV => "IV",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Behavior {
    FixedPoint,
    SingleWellPeriodic,
    CrossWellAperiodic,
    CrossWellPeriodic,
}

impl Behavior {
    pub fn as_str(&self) -> &'static str {
        match self {
            Behavior::FixedPoint => "fixed-point",
            Behavior::SingleWellPeriodic => "single-well-periodic",
            Behavior::CrossWellAperiodic => "cross-well-aperiodic",
            Behavior::CrossWellPeriodic => "cross-well-periodic",
        }
    }

    /// The behaviour the driver shows in each region.
    pub fn expected_in(region: Region) -> Self {
        match region {
            Region::I => Behavior::FixedPoint,
            Region::II => Behavior::SingleWellPeriodic,
            Region::III => Behavior::CrossWellAperiodic,
            Region::IV => Behavior::CrossWellPeriodic,
        }
    }
}

impl fmt::Display for Behavior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Behavior {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [
            Behavior::FixedPoint,
            Behavior::SingleWellPeriodic,
            Behavior::CrossWellAperiodic,
            Behavior::CrossWellPeriodic,
        ]
        .into_iter()
        .find(|b| b.as_str() == s)
        .ok_or_else(|| format!("unknown behavior `{s}`"))
    }
}

fn relative_spread(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    var.sqrt() / mean.abs()
}

/// Label the asymptotic regime of a position series. `wells` are the two
/// stable positions; the barrier between them is their midpoint.
pub fn classify_behavior(series: &[f64], wells: [f64; 2]) -> Behavior {
    let tail = trailing(series, ASYMPTOTIC_FRACTION);
    if amplitude(tail, 1.0) < FIXED_POINT_AMPLITUDE {
        return Behavior::FixedPoint;
    }
    let barrier = 0.5 * (wells[0] + wells[1]);
    let above = tail.iter().filter(|&&v| v > barrier).count();
    if above == 0 || above == tail.len() {
        return Behavior::SingleWellPeriodic;
    }
    let maxima = local_extrema(tail).maxima;
    if maxima.len() >= 2 && relative_spread(&maxima) < PERIODICITY_TOLERANCE {
        Behavior::CrossWellPeriodic
    } else {
        Behavior::CrossWellAperiodic
    }
}
