//! Driver (time-delayed Duffing) and response (Duffing) vector fields.
//!
//! ```text
//! driver:   x1'' + mu x1' + gamma x1(t - tau) + alpha x1 (1 - x1^2) = 0
//! response: x2'' + mu x2' + alpha x2 (1 - x2^2) = C (x1 - x2)
//! ```
//!
//! The response is forced by the driver only; nothing flows back.

use crate::dde::{
    check_finite, rk4_step, solve_observed, DelaySystem, HistoryFunction, SolverConfig, Trajectory,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub mu: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub tau: f64,
    pub coupling: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        Self {
            mu: 0.01,
            alpha: -1.0,
            gamma: -0.5,
            tau: 1.0,
            coupling: 0.0,
        }
    }
}

impl OscillatorParams {
    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }

    pub fn with_coupling(self, coupling: f64) -> Self {
        Self { coupling, ..self }
    }
}

/// Full state of the coupled pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoupledState {
    pub x1: f64,
    pub v1: f64,
    pub x2: f64,
    pub v2: f64,
}

impl From<[f64; 4]> for CoupledState {
    fn from(s: [f64; 4]) -> Self {
        Self {
            x1: s[0],
            v1: s[1],
            x2: s[2],
            v2: s[3],
        }
    }
}

impl From<CoupledState> for [f64; 4] {
    fn from(s: CoupledState) -> Self {
        [s.x1, s.v1, s.x2, s.v2]
    }
}

/// History of the driver and initial condition of the response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    /// Constant driver history `(u0, v0)`, also its state at `t = 0`.
    pub history: [f64; 2],
    /// Response state `(x0, v0)` at `t = 0`.
    pub response_ic: [f64; 2],
}

impl Default for BoundaryData {
    fn default() -> Self {
        Self {
            history: [1.0, 1.0],
            response_ic: [0.5, 0.5],
        }
    }
}

pub fn driver_rhs(_t: f64, s: [f64; 2], x1_delayed: f64, p: &OscillatorParams) -> [f64; 2] {
    let [x1, v1] = s;
    [
        v1,
        -p.mu * v1 - p.gamma * x1_delayed - p.alpha * x1 * (1.0 - x1 * x1),
    ]
}

pub fn response_rhs(_t: f64, s: [f64; 2], x1: f64, p: &OscillatorParams) -> [f64; 2] {
    let [x2, v2] = s;
    [
        v2,
        -p.mu * v2 - p.alpha * x2 * (1.0 - x2 * x2) + p.coupling * (x1 - x2),
    ]
}

pub fn coupled_rhs(t: f64, s: &CoupledState, x1_delayed: f64, p: &OscillatorParams) -> [f64; 4] {
    let [dx1, dv1] = driver_rhs(t, [s.x1, s.v1], x1_delayed, p);
    let [dx2, dv2] = response_rhs(t, [s.x2, s.v2], s.x1, p);
    [dx1, dv1, dx2, dv2]
}

/// The delayed driver alone, state `(x1, v1)`.
#[derive(Debug, Clone, Copy)]
pub struct DriverSystem(pub OscillatorParams);

impl DelaySystem<2> for DriverSystem {
    fn rhs(&self, t: f64, y: &[f64; 2], delayed: &[f64; 2]) -> [f64; 2] {
        driver_rhs(t, *y, delayed[0], &self.0)
    }
}

/// Driver and response integrated together, state `(x1, v1, x2, v2)`.
#[derive(Debug, Clone, Copy)]
pub struct CoupledSystem(pub OscillatorParams);

impl DelaySystem<4> for CoupledSystem {
    fn rhs(&self, t: f64, y: &[f64; 4], delayed: &[f64; 4]) -> [f64; 4] {
        coupled_rhs(t, &CoupledState::from(*y), delayed[0], &self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oscillator {
    Driver,
    Response,
}

/// Stable wells of both oscillators; the origin is the shared saddle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoints {
    /// `+sqrt((alpha + gamma) / alpha)`; the wells are at `±driver`.
    pub driver: f64,
    /// `+1`; the wells are at `±response`.
    pub response: f64,
    pub origin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WellStructure {
    DoubleWell(FixedPoints),
    /// `(alpha + gamma) / alpha <= 0`: the driver has no real wells.
    NoDoubleWell {
        ratio: f64,
    },
}

pub fn fixed_points(p: &OscillatorParams) -> WellStructure {
    let ratio = (p.alpha + p.gamma) / p.alpha;
    if ratio.is_nan() || ratio <= 0.0 {
        return WellStructure::NoDoubleWell { ratio };
    }
    WellStructure::DoubleWell(FixedPoints {
        driver: ratio.sqrt(),
        response: 1.0,
        origin: 0.0,
    })
}

/// Potential whose negative gradient is the position-dependent force, with
/// the delayed term frozen at `x`. Normalised to `V(0) = 0`.
pub fn potential(x: f64, p: &OscillatorParams, which: Oscillator) -> f64 {
    let x2 = x * x;
    let base = p.alpha * x2 / 2.0 - p.alpha * x2 * x2 / 4.0;
    match which {
        Oscillator::Response => base,
        Oscillator::Driver => base + p.gamma * x2 / 2.0,
    }
}

/// Driver trajectory plus the driver position at every Runge-Kutta stage,
/// which is everything a response integration needs.
#[derive(Debug, Clone)]
pub struct DriverRun {
    pub params: OscillatorParams,
    pub cfg: SolverConfig,
    pub trajectory: Trajectory<2>,
    stage_x1: Vec<[f64; 4]>,
}

impl DriverRun {
    pub fn compute(p: &OscillatorParams, history: [f64; 2], cfg: &SolverConfig) -> Result<Self> {
        let mut stage_x1 = Vec::with_capacity(cfg.n_steps());
        let sol = solve_observed(
            &DriverSystem(*p),
            &HistoryFunction::Constant(history),
            history,
            p.tau,
            cfg,
            |st| stage_x1.push(std::array::from_fn(|k| st.stages[k][0])),
        )?;
        Ok(Self {
            params: *p,
            cfg: *cfg,
            trajectory: sol.trajectory,
            stage_x1,
        })
    }

    pub fn x1(&self) -> Vec<f64> {
        self.trajectory.component(0)
    }

    /// Integrate the response under this driver with coupling `c`.
    ///
    /// The result is bit-identical to the response half of a joint
    /// [`CoupledSystem`] integration, since each stage sees the same driver
    /// stage value.
    pub fn drive_response(&self, c: f64, ic: [f64; 2]) -> Result<Trajectory<2>> {
        let p = self.params.with_coupling(c);
        let h = self.cfg.step_size;
        let stride = self.cfg.record_stride;
        check_finite(&ic, 0.0)?;
        let mut samples = Vec::with_capacity(self.stage_x1.len() / stride + 1);
        samples.push(ic);
        let mut y = ic;
        for (n, x1s) in self.stage_x1.iter().enumerate() {
            let t = n as f64 * h;
            let k1 = response_rhs(t, y, x1s[0], &p);
            let (next, _) = rk4_step(t, &y, &k1, h, |stage, ts, ys| {
                Ok(response_rhs(ts, *ys, x1s[stage], &p))
            })?;
            let t_next = (n + 1) as f64 * h;
            check_finite(&next, t_next)?;
            y = next;
            if (n + 1) % stride == 0 {
                samples.push(y);
            }
        }
        Ok(Trajectory {
            t0: 0.0,
            h_record: h * stride as f64,
            samples,
        })
    }
}

/// Simulate the coupled pair; returns samples of `(x1, v1, x2, v2)`.
pub fn simulate_pair(
    p: &OscillatorParams,
    boundary: &BoundaryData,
    cfg: &SolverConfig,
) -> Result<Trajectory<4>> {
    let driver = DriverRun::compute(p, boundary.history, cfg)?;
    let response = driver.drive_response(p.coupling, boundary.response_ic)?;
    Ok(join_pair(&driver.trajectory, &response))
}

pub(crate) fn join_pair(driver: &Trajectory<2>, response: &Trajectory<2>) -> Trajectory<4> {
    Trajectory {
        t0: driver.t0,
        h_record: driver.h_record,
        samples: driver
            .samples
            .iter()
            .zip(&response.samples)
            .map(|(d, r)| [d[0], d[1], r[0], r[1]])
            .collect(),
    }
}
