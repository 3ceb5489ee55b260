//! Critical delay of the driver's wells.
//!
//! Linearising the driver about a well `x*` gives
//!
//! ```text
//! lambda^2 + mu lambda + K + gamma exp(-lambda tau) = 0,   K = alpha (1 - 3 x*^2)
//! ```
//!
//! On the stability boundary `lambda = i omega`, and eliminating `tau`
//! leaves `(omega^2 - K)^2 + (mu omega)^2 = gamma^2`, a quadratic in
//! `omega^2`. Each root gives a critical delay through the real part,
//! `cos(omega tau) = (omega^2 - K) / gamma`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{fixed_points, OscillatorParams, WellStructure};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    /// Well position the linearisation is taken about.
    pub x_star: f64,
    pub omega: f64,
    /// Principal branch, `arccos(..) / omega`.
    pub tau_c: f64,
    /// The other branch, `(2 pi - arccos(..)) / omega`, which is the one
    /// satisfying the sine equation `mu omega = gamma sin(omega tau)` when
    /// `gamma < 0`.
    pub tau_alt: f64,
    pub stiffness: f64,
    /// `(omega^2 - K)^2 + (mu omega)^2 - gamma^2`.
    pub residual: f64,
}

pub fn linearized_stiffness(x_star: f64, p: &OscillatorParams) -> f64 {
    p.alpha * (1.0 - 3.0 * x_star * x_star)
}

/// Residual of the squared-and-added boundary condition.
pub fn boundary_residual(omega: f64, p: &OscillatorParams, stiffness: f64) -> f64 {
    let re = omega * omega - stiffness;
    let im = p.mu * omega;
    re * re + im * im - p.gamma * p.gamma
}

/// Positive roots `omega`, ascending. Empty when `gamma = 0` or when the
/// quadratic in `omega^2` has no positive root.
pub fn critical_frequencies(p: &OscillatorParams, stiffness: f64) -> Vec<f64> {
    if p.gamma == 0.0 {
        return Vec::new();
    }
    // s^2 + b s + c = 0 with s = omega^2
    let b = p.mu * p.mu - 2.0 * stiffness;
    let c = stiffness * stiffness - p.gamma * p.gamma;
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = if q == 0.0 {
        vec![-b / 2.0]
    } else {
        vec![q, c / q]
    };
    roots.retain(|s| *s > 0.0);
    let mut omegas: Vec<f64> = roots.into_iter().map(f64::sqrt).collect();
    omegas.sort_by(f64::total_cmp);
    omegas.dedup();
    omegas
}

fn arccos_argument(omega: f64, p: &OscillatorParams, stiffness: f64) -> Result<f64> {
    let arg = (omega * omega - stiffness) / p.gamma;
    if !arg.is_finite() || arg.abs() > 1.0 + 1e-12 {
        return Err(Error::NoCriticalDelay(arg));
    }
    Ok(arg.clamp(-1.0, 1.0))
}

/// Principal-branch critical delay `arccos((omega^2 - K) / gamma) / omega`.
pub fn critical_delay(omega: f64, p: &OscillatorParams, stiffness: f64) -> Result<f64> {
    Ok(arccos_argument(omega, p, stiffness)?.acos() / omega)
}

/// Every critical point of both driver wells.
pub fn critical_points(p: &OscillatorParams) -> Vec<CriticalPoint> {
    let WellStructure::DoubleWell(fp) = fixed_points(p) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for x_star in [fp.driver, -fp.driver] {
        let k = linearized_stiffness(x_star, p);
        for omega in critical_frequencies(p, k) {
            let Ok(arg) = arccos_argument(omega, p, k) else {
                continue;
            };
            let principal = arg.acos();
            out.push(CriticalPoint {
                x_star,
                omega,
                tau_c: principal / omega,
                tau_alt: (2.0 * PI - principal) / omega,
                stiffness: k,
                residual: boundary_residual(omega, p, k),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> OscillatorParams {
        OscillatorParams::default()
    }

    #[test]
    fn stiffness_examples() {
        let p = base();
        assert_eq!(linearized_stiffness(0.0, &p), -1.0);
        assert!((linearized_stiffness(1.5f64.sqrt(), &p) - 3.5).abs() < 1e-14);
        assert_eq!(
            linearized_stiffness(1.5f64.sqrt(), &p),
            linearized_stiffness(-(1.5f64.sqrt()), &p)
        );
    }

    #[test]
    fn undamped_closed_form() {
        let p = OscillatorParams { mu: 0.0, ..base() };
        let w = critical_frequencies(&p, 3.5);
        assert_eq!(w.len(), 2);
        assert!((w[0] - 3f64.sqrt()).abs() < 1e-15);
        assert!((w[1] - 2.0).abs() < 1e-15);
        let tau = critical_delay(2.0, &p, 3.5).unwrap();
        assert!((tau - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn default_parameters() {
        let p = base();
        let w = critical_frequencies(&p, 3.5);
        assert_eq!(w.len(), 2);
        assert!((w[0] - 1.7322).abs() < 1e-3);
        assert!((w[1] - 2.0004).abs() < 0.01);
        let tau = critical_delay(w[1], &p, 3.5).unwrap();
        assert!((tau - 1.5505).abs() < 0.005, "tau = {tau}");
    }

    #[test]
    fn roots_match_grid_scan() {
        let p = base();
        let k = 3.5;
        let mut scanned = Vec::new();
        let step = 1e-5;
        let mut prev = boundary_residual(step, &p, k);
        for i in 2..=500_000 {
            let w = i as f64 * step;
            let r = boundary_residual(w, &p, k);
            if prev.signum() != r.signum() {
                scanned.push(w - step / 2.0);
            }
            prev = r;
        }
        let roots = critical_frequencies(&p, k);
        assert_eq!(scanned.len(), roots.len());
        for (a, b) in scanned.iter().zip(&roots) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn no_roots_cases() {
        let p = OscillatorParams {
            gamma: 0.0,
            ..base()
        };
        assert!(critical_frequencies(&p, 3.5).is_empty());
        assert!(critical_points(&p).is_empty());
        // origin: K = -1 admits no positive omega^2
        assert!(critical_frequencies(&base(), -1.0).is_empty());
    }

    #[test]
    fn arccos_domain_is_enforced() {
        assert!(matches!(
            critical_delay(3.0, &base(), 3.5),
            Err(Error::NoCriticalDelay(_))
        ));
    }

    #[test]
    fn critical_points_residuals() {
        let pts = critical_points(&base());
        assert_eq!(pts.len(), 4);
        for cp in &pts {
            assert!(cp.residual.abs() < 1e-9);
            assert!(cp.omega > 0.0 && cp.tau_c > 0.0);
            assert!(cp.tau_alt > cp.tau_c);
        }
    }
}
