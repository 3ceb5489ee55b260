//! Fixed-step classical Runge-Kutta integration of systems with one constant
//! delay, using the method of steps.
//!
//! Every completed step is kept as a cubic Hermite segment (endpoint states
//! and derivatives), so the delayed state `y(t - tau)` can be evaluated at
//! the off-grid stage times the Runge-Kutta scheme needs. Queries before
//! `t = 0` are answered from the [`HistoryFunction`].
//!
//! The delay must be either zero (plain ODE) or at least one step long, so a
//! delayed query never lands inside the step currently being computed.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default integration step.
pub const DEFAULT_STEP: f64 = 0.01;
/// Default simulation horizon.
pub const DEFAULT_T_FINAL: f64 = 300.0;
/// Any state component beyond this magnitude aborts the run.
pub const DIVERGENCE_BOUND: f64 = 1e6;

const MAX_STEPS: f64 = (u32::MAX as f64) * 16.0;

/// Right-hand side of `y'(t) = f(t, y(t), y(t - tau))`.
pub trait DelaySystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N], delayed: &[f64; N]) -> [f64; N];
}

impl<F, const N: usize> DelaySystem<N> for F
where
    F: Fn(f64, &[f64; N], &[f64; N]) -> [f64; N],
{
    fn rhs(&self, t: f64, y: &[f64; N], delayed: &[f64; N]) -> [f64; N] {
        self(t, y, delayed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub step_size: f64,
    pub t_final: f64,
    /// Keep every `record_stride`-th step in the returned [`Trajectory`].
    pub record_stride: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_size: DEFAULT_STEP,
            t_final: DEFAULT_T_FINAL,
            record_stride: 1,
        }
    }
}

impl SolverConfig {
    pub fn new(step_size: f64, t_final: f64, record_stride: usize) -> Result<Self> {
        let cfg = Self {
            step_size,
            t_final,
            record_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "step size must be positive and finite, got {}",
                self.step_size
            )));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "final time must be positive and finite, got {}",
                self.t_final
            )));
        }
        let steps = (self.t_final / self.step_size).round();
        if !(1.0..=MAX_STEPS).contains(&steps) {
            return Err(Error::InvalidConfig(format!(
                "t_final / h = {} is not a usable step count",
                self.t_final / self.step_size
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig(
                "record stride must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Number of steps; the run ends at `n_steps() * step_size`.
    pub fn n_steps(&self) -> usize {
        (self.t_final / self.step_size).round() as usize
    }
}

/// State prescribed on `[-tau, 0]`.
#[derive(Clone)]
pub enum HistoryFunction<const N: usize> {
    Constant([f64; N]),
    Callable(Arc<dyn Fn(f64) -> [f64; N] + Send + Sync>),
}

impl<const N: usize> HistoryFunction<N> {
    pub fn callable(f: impl Fn(f64) -> [f64; N] + Send + Sync + 'static) -> Self {
        Self::Callable(Arc::new(f))
    }

    pub fn value_at(&self, t: f64) -> [f64; N] {
        match self {
            Self::Constant(v) => *v,
            Self::Callable(f) => f(t),
        }
    }
}

impl<const N: usize> fmt::Debug for HistoryFunction<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            Self::Callable(_) => f.write_str("Callable(..)"),
        }
    }
}

/// Dense-output record of one completed step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistorySegment<const N: usize> {
    pub t_left: f64,
    pub t_right: f64,
    pub y_left: [f64; N],
    pub y_right: [f64; N],
    pub f_left: [f64; N],
    pub f_right: [f64; N],
}

impl<const N: usize> HistorySegment<N> {
    /// Cubic Hermite interpolant; exact at both endpoints.
    pub fn eval(&self, t: f64) -> [f64; N] {
        let h = self.t_right - self.t_left;
        let s = (t - self.t_left) / h;
        if s == 0.0 {
            return self.y_left;
        }
        if s == 1.0 {
            return self.y_right;
        }
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        std::array::from_fn(|i| {
            h00 * self.y_left[i]
                + h10 * h * self.f_left[i]
                + h01 * self.y_right[i]
                + h11 * h * self.f_right[i]
        })
    }
}

/// Uniformly sampled solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub t0: f64,
    pub h_record: f64,
    pub samples: Vec<[f64; N]>,
}

impl<const N: usize> Trajectory<N> {
    pub fn dimension(&self) -> usize {
        N
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.h_record
    }

    pub fn component(&self, k: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[k]).collect()
    }

    pub fn last(&self) -> Option<&[f64; N]> {
        self.samples.last()
    }
}

/// Every completed step of a run, plus the history function for `t < 0`.
#[derive(Debug, Clone)]
pub struct DenseHistory<const N: usize> {
    h: f64,
    history: HistoryFunction<N>,
    ys: Vec<[f64; N]>,
    fs: Vec<[f64; N]>,
}

impl<const N: usize> DenseHistory<N> {
    fn new(h: f64, history: HistoryFunction<N>, y0: [f64; N], capacity: usize) -> Self {
        let mut ys = Vec::with_capacity(capacity + 1);
        ys.push(y0);
        Self {
            h,
            history,
            ys,
            fs: Vec::with_capacity(capacity + 1),
        }
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    /// Latest time for which the solution is known.
    pub fn current_time(&self) -> f64 {
        self.node_time(self.ys.len() - 1)
    }

    fn node_time(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Number of complete segments (both endpoint derivatives known).
    pub fn n_segments(&self) -> usize {
        self.fs.len().min(self.ys.len()).saturating_sub(1)
    }

    pub fn segment(&self, i: usize) -> Option<HistorySegment<N>> {
        if i >= self.n_segments() {
            return None;
        }
        Some(HistorySegment {
            t_left: self.node_time(i),
            t_right: self.node_time(i + 1),
            y_left: self.ys[i],
            y_right: self.ys[i + 1],
            f_left: self.fs[i],
            f_right: self.fs[i + 1],
        })
    }

    /// State at a grid node.
    pub fn node(&self, i: usize) -> Option<&[f64; N]> {
        self.ys.get(i)
    }

    /// Solution at `t_query`: the history function for negative times,
    /// otherwise the Hermite interpolant of the covering segment.
    pub fn sample_delayed(&self, t_query: f64) -> Result<[f64; N]> {
        if t_query < 0.0 {
            return Ok(self.history.value_at(t_query));
        }
        let t_current = self.current_time();
        let slack = 1e-12 * t_current.max(1.0);
        if t_query > t_current + slack {
            return Err(Error::Causality { t_query, t_current });
        }
        let last = self.ys.len() - 1;
        let idx = ((t_query / self.h).floor() as usize).min(last);
        if let Some(seg) = self.segment(idx) {
            return Ok(seg.eval(t_query));
        }
        // The segment starting here is still open; only its left node is known.
        if (t_query - self.node_time(idx)).abs() <= slack {
            return Ok(self.ys[idx]);
        }
        Err(Error::Causality { t_query, t_current })
    }
}

/// Stage states `Y1..Y4` of one classical Runge-Kutta step from `t` to `t + h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStages<const N: usize> {
    pub t: f64,
    pub h: f64,
    pub stages: [[f64; N]; 4],
}

/// Fractions of the step at which the four stages are evaluated.
pub const STAGE_OFFSETS: [f64; 4] = [0.0, 0.5, 0.5, 1.0];

/// One classical RK4 step. `k1` is the derivative at `(t, y)`, already known
/// to the caller; `eval(stage, t_stage, y_stage)` supplies the others.
pub(crate) fn rk4_step<const N: usize, F>(
    t: f64,
    y: &[f64; N],
    k1: &[f64; N],
    h: f64,
    mut eval: F,
) -> Result<([f64; N], [[f64; N]; 4])>
where
    F: FnMut(usize, f64, &[f64; N]) -> Result<[f64; N]>,
{
    let half = 0.5 * h;
    let y2: [f64; N] = std::array::from_fn(|i| y[i] + half * k1[i]);
    let k2 = eval(1, t + half, &y2)?;
    let y3: [f64; N] = std::array::from_fn(|i| y[i] + half * k2[i]);
    let k3 = eval(2, t + half, &y3)?;
    let y4: [f64; N] = std::array::from_fn(|i| y[i] + h * k3[i]);
    let k4 = eval(3, t + h, &y4)?;
    let next =
        std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
    Ok((next, [*y, y2, y3, y4]))
}

pub(crate) fn check_finite<const N: usize>(y: &[f64; N], t: f64) -> Result<()> {
    if y.iter()
        .all(|v| v.is_finite() && v.abs() <= DIVERGENCE_BOUND)
    {
        Ok(())
    } else {
        Err(Error::Diverged { t })
    }
}

/// Recorded trajectory together with the full dense history of the run.
#[derive(Debug, Clone)]
pub struct Solution<const N: usize> {
    pub trajectory: Trajectory<N>,
    pub dense: DenseHistory<N>,
}

/// Integrate on `[0, t_final]` and return the sampled trajectory.
pub fn integrate<S, const N: usize>(
    system: &S,
    history: &HistoryFunction<N>,
    ic: [f64; N],
    tau: f64,
    cfg: &SolverConfig,
) -> Result<Trajectory<N>>
where
    S: DelaySystem<N> + ?Sized,
{
    solve_observed(system, history, ic, tau, cfg, |_| {}).map(|s| s.trajectory)
}

/// Like [`integrate`], additionally handing every step's stage states to
/// `on_step` and returning the dense history.
pub fn solve_observed<S, const N: usize>(
    system: &S,
    history: &HistoryFunction<N>,
    ic: [f64; N],
    tau: f64,
    cfg: &SolverConfig,
    mut on_step: impl FnMut(&StepStages<N>),
) -> Result<Solution<N>>
where
    S: DelaySystem<N> + ?Sized,
{
    cfg.validate()?;
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::NegativeDelay(tau));
    }
    let h = cfg.step_size;
    if tau > 0.0 && tau < h {
        return Err(Error::DelayBelowStep { tau, h });
    }
    check_finite(&ic, 0.0)?;

    let n_steps = cfg.n_steps();
    let stride = cfg.record_stride;
    let mut dense = DenseHistory::new(h, history.clone(), ic, n_steps);
    let mut samples = Vec::with_capacity(n_steps / stride + 1);
    samples.push(ic);

    let delayed_at = |dense: &DenseHistory<N>, t: f64, y: &[f64; N]| -> Result<[f64; N]> {
        if tau == 0.0 {
            Ok(*y)
        } else {
            dense.sample_delayed(t - tau)
        }
    };

    let mut y = ic;
    let mut k1 = system.rhs(0.0, &y, &delayed_at(&dense, 0.0, &y)?);
    dense.fs.push(k1);
    for n in 0..n_steps {
        let t = n as f64 * h;
        let (next, stages) = rk4_step(t, &y, &k1, h, |_, ts, ys| {
            Ok(system.rhs(ts, ys, &delayed_at(&dense, ts, ys)?))
        })?;
        let t_next = (n + 1) as f64 * h;
        check_finite(&next, t_next)?;
        on_step(&StepStages { t, h, stages });

        y = next;
        dense.ys.push(y);
        // Derivative at the new node closes the segment [t, t + h] and is
        // the first stage of the next step.
        k1 = system.rhs(t_next, &y, &delayed_at(&dense, t_next, &y)?);
        dense.fs.push(k1);
        if (n + 1) % stride == 0 {
            samples.push(y);
        }
    }

    Ok(Solution {
        trajectory: Trajectory {
            t0: 0.0,
            h_record: h * stride as f64,
            samples,
        },
        dense,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_dde(_t: f64, _y: &[f64; 1], d: &[f64; 1]) -> [f64; 1] {
        [-d[0]]
    }

    fn cfg(h: f64, t_final: f64) -> SolverConfig {
        SolverConfig::new(h, t_final, 1).unwrap()
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(SolverConfig::new(0.0, 1.0, 1).is_err());
        assert!(SolverConfig::new(-0.1, 1.0, 1).is_err());
        assert!(SolverConfig::new(0.01, 0.0, 1).is_err());
        assert!(SolverConfig::new(0.01, f64::NAN, 1).is_err());
        assert!(SolverConfig::new(0.01, 1.0, 0).is_err());
        assert!(SolverConfig::new(1e-30, 1e10, 1).is_err());
        assert_eq!(SolverConfig::default().n_steps(), 30_000);
    }

    #[test]
    fn rejects_negative_and_sub_step_delay() {
        let hist = HistoryFunction::Constant([1.0]);
        let c = cfg(0.01, 1.0);
        assert_eq!(
            integrate(&linear_dde, &hist, [1.0], -1.0, &c),
            Err(Error::NegativeDelay(-1.0))
        );
        assert!(matches!(
            integrate(&linear_dde, &hist, [1.0], 0.005, &c),
            Err(Error::DelayBelowStep { .. })
        ));
        assert!(integrate(&linear_dde, &hist, [1.0], 0.01, &c).is_ok());
    }

    #[test]
    fn divergence_is_reported_with_time() {
        let blowup = |_t: f64, y: &[f64; 1], _d: &[f64; 1]| [y[0] * y[0]];
        let hist = HistoryFunction::Constant([1.0]);
        match integrate(&blowup, &hist, [1.0], 0.0, &cfg(0.01, 5.0)) {
            Err(Error::Diverged { t }) => assert!(t > 0.9 && t < 1.1, "t = {t}"),
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn linear_dde_matches_hand_method_of_steps() {
        let hist = HistoryFunction::Constant([1.0]);
        let traj = integrate(&linear_dde, &hist, [1.0], 1.0, &cfg(0.01, 3.0)).unwrap();
        // x = 1 - t on [0, 1]; x = t^2/2 - 2t + 3/2 on [1, 2].
        assert!(traj.samples[100][0].abs() < 1e-8);
        assert!((traj.samples[200][0] + 0.5).abs() < 1e-8);
    }

    #[test]
    fn hermite_segment_reproduces_cubics() {
        let p = |t: f64| 0.3 * t * t * t - 1.2 * t * t + 0.7 * t - 2.0;
        let dp = |t: f64| 0.9 * t * t - 2.4 * t + 0.7;
        let (a, b) = (1.3, 1.45);
        let seg = HistorySegment {
            t_left: a,
            t_right: b,
            y_left: [p(a)],
            y_right: [p(b)],
            f_left: [dp(a)],
            f_right: [dp(b)],
        };
        let mid = 0.5 * (a + b);
        assert!((seg.eval(mid)[0] - p(mid)).abs() < 1e-14);
        assert_eq!(seg.eval(a), [p(a)]);
        assert_eq!(seg.eval(b), [p(b)]);
    }

    #[test]
    fn sample_delayed_regions() {
        let hist = HistoryFunction::Constant([1.0]);
        let sol = solve_observed(&linear_dde, &hist, [1.0], 1.0, &cfg(0.01, 2.0), |_| {}).unwrap();
        assert_eq!(sol.dense.sample_delayed(-0.5).unwrap(), [1.0]);
        for i in [0usize, 1, 37, 100, 199, 200] {
            let t = i as f64 * 0.01;
            assert_eq!(
                sol.dense.sample_delayed(t).unwrap(),
                sol.trajectory.samples[i]
            );
        }
        assert!(matches!(
            sol.dense.sample_delayed(2.5),
            Err(Error::Causality { .. })
        ));
    }

    #[test]
    fn callable_history_is_used_before_zero() {
        // x' = x(t - 1) with history x = t + 1 gives x(1) = 1 + 1/2 on [0, 1].
        let sys = |_t: f64, _y: &[f64; 1], d: &[f64; 1]| [d[0]];
        let hist = HistoryFunction::callable(|t| [t + 1.0]);
        let traj = integrate(&sys, &hist, [1.0], 1.0, &cfg(0.01, 1.0)).unwrap();
        assert!((traj.samples[100][0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn record_stride_subsamples() {
        let hist = HistoryFunction::Constant([1.0]);
        let full = integrate(&linear_dde, &hist, [1.0], 1.0, &cfg(0.01, 3.0)).unwrap();
        let sub = integrate(
            &linear_dde,
            &hist,
            [1.0],
            1.0,
            &SolverConfig::new(0.01, 3.0, 10).unwrap(),
        )
        .unwrap();
        assert_eq!(sub.len(), 31);
        assert!((sub.h_record - 0.1).abs() < 1e-15);
        for (i, s) in sub.samples.iter().enumerate() {
            assert_eq!(*s, full.samples[10 * i]);
        }
    }
}
