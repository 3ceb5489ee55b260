//! Command-line front end.
//!
//! Every command writes a CSV table to `--out` (plus `<out>.manifest`) or,
//! without `--out`, to stdout. A manifest lists the resolved flags of the
//! run, so `replay <manifest>` regenerates the table byte for byte.
//!
//! Exit codes: 0 success, 2 bad usage, 3 numerical failure, 1 I/O failure.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::dde::{SolverConfig, DEFAULT_STEP, DEFAULT_T_FINAL};
use crate::model::{simulate_pair, BoundaryData, OscillatorParams};
use crate::stability::critical_points;
use crate::sweep::{
    delay_transfer_report, run_slice, run_sweep, FixedParam, ObservableRecord, ParamRange,
    SimSettings, SweepGrid,
};

pub const TOOL_NAME: &str = "delayed-duffing";

pub const TRAJECTORY_HEADER: &str = "t,x1,v1,x2,v2";
pub const STABILITY_HEADER: &str = "x_star,omega,tau_c,tau_alt,K,residual";
pub const OBSERVABLE_HEADER: &str =
    "tau,C,A_x1,A_x2C,mean_dist,mean_dist_c0,omega1,omega2,region,behavior,failed";
pub const EXTREMA_HEADER: &str = "tau,C,x1_extrema_mean,x2_extrema_mean";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: &'static str, message: String },

    #[error("numerical failure: {0}")]
    Numerical(#[from] crate::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },

    #[error("manifest {path}: {message}")]
    Manifest { path: String, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage { .. } | CliError::Manifest { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

fn usage(flag: &'static str, message: impl fmt::Display) -> CliError {
    CliError::Usage {
        flag,
        message: message.to_string(),
    }
}

/// Two comma-separated numbers, `u,v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair(pub [f64; 2]);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("`{s}`: expected two comma-separated numbers"))?;
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{p}` is not a number"))
        };
        Ok(Pair([num(a)?, num(b)?]))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0[0], self.0[1])
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL_NAME, version, about = "Delayed Duffing driver coupled to a Duffing response")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time series of both oscillators.
    Simulate(SimulateArgs),
    /// Critical delays of the driver's wells.
    Stability(StabilityArgs),
    /// Observables along one parameter with the other held fixed.
    Slice(SliceArgs),
    /// Observables over a (tau, C) grid.
    Sweep(SweepArgs),
    /// Driver versus response along a delay scan at fixed coupling.
    Transfer(TransferArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Damping.
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    pub mu: f64,
    /// Duffing stiffness.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Delayed feedback gain.
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    pub gamma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Integration step.
    #[arg(long, default_value_t = DEFAULT_STEP, allow_hyphen_values = true)]
    pub dt: f64,
    #[arg(long = "t-final", default_value_t = DEFAULT_T_FINAL, allow_hyphen_values = true)]
    pub t_final: f64,
    /// Driver state (x, v) on [-tau, 0].
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub history: Pair,
    /// Response initial state (x, v).
    #[arg(long, default_value = "0.5,0.5", allow_hyphen_values = true)]
    pub ic: Pair,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub tau: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub coupling: f64,
    /// Write every n-th step.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SliceArgs {
    /// `tau=<value>` or `C=<value>`.
    #[arg(long)]
    pub fix: FixedParam,
    /// Coupling range, when tau is fixed.
    #[arg(long = "c")]
    pub c: Option<ParamRange>,
    /// Delay range, when C is fixed.
    #[arg(long)]
    pub tau: Option<ParamRange>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "0.1:4.2:0.05")]
    pub tau: ParamRange,
    #[arg(long = "c", visible_alias = "coupling", default_value = "0:4:0.05")]
    pub c: ParamRange,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TransferArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub coupling: f64,
    #[arg(long, default_value = "0.1:4.2:0.05")]
    pub tau: ParamRange,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Also writes the extrema means to `<out stem>.extrema.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write here instead of the recorded output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flat `key=value` record of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    /// Resolved flags in command-line order, keyed by long flag name.
    pub flags: Vec<(String, String)>,
    pub out: PathBuf,
    pub duration_s: f64,
}

impl RunManifest {
    pub fn render(&self) -> String {
        let mut s = format!(
            "tool={TOOL_NAME}\nversion={}\ncommand={}\n",
            self.version, self.command
        );
        for (k, v) in &self.flags {
            s.push_str(&format!("{k}={v}\n"));
        }
        s.push_str(&format!("out={}\n", self.out.display()));
        s.push_str(&format!("duration_s={}\n", self.duration_s));
        s
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut version = None;
        let mut command = None;
        let mut out = None;
        let mut duration_s = 0.0;
        let mut flags = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line `{line}` is not key=value"))?;
            match k {
                "tool" if v != TOOL_NAME => return Err(format!("written by `{v}`")),
                "tool" => {}
                "version" => version = Some(v.to_string()),
                "command" => command = Some(v.to_string()),
                "out" => out = Some(PathBuf::from(v)),
                "duration_s" => duration_s = v.parse().map_err(|_| "bad duration_s".to_string())?,
                _ => flags.push((k.to_string(), v.to_string())),
            }
        }
        Ok(Self {
            version: version.ok_or("missing version")?,
            command: command.ok_or("missing command")?,
            flags,
            out: out.ok_or("missing out")?,
            duration_s,
        })
    }

    /// Argument vector that re-runs this manifest, writing to `out`.
    pub fn to_args(&self, out: &Path) -> Vec<OsString> {
        let mut args: Vec<OsString> = vec![TOOL_NAME.into(), self.command.clone().into()];
        for (k, v) in &self.flags {
            args.push(format!("--{k}").into());
            args.push(v.into());
        }
        args.push("--out".into());
        args.push(out.as_os_str().to_owned());
        args
    }
}

/// `%.9g`-style formatting: nine significant digits, trailing zeros dropped.
pub fn format_g9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        trim_zeros(format!("{:.*}", (8 - exp) as usize, v))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_g9).unwrap_or_default()
}

pub fn observables_csv(records: &[ObservableRecord]) -> String {
    let mut s = format!("{OBSERVABLE_HEADER}\n");
    for r in records {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            format_g9(r.tau),
            format_g9(r.coupling),
            opt(r.a_x1),
            opt(r.a_x2c),
            opt(r.mean_dist),
            opt(r.mean_dist_c0),
            opt(r.omega1),
            opt(r.omega2),
            r.region,
            r.behavior.map(|b| b.as_str()).unwrap_or_default(),
            u8::from(r.failed),
        ));
    }
    s
}

fn model_params(m: &ModelArgs, tau: f64, coupling: f64) -> Result<OscillatorParams, CliError> {
    for (flag, v) in [("--mu", m.mu), ("--alpha", m.alpha), ("--gamma", m.gamma)] {
        if !v.is_finite() {
            return Err(usage(flag, format!("must be finite, got {v}")));
        }
    }
    Ok(OscillatorParams {
        mu: m.mu,
        alpha: m.alpha,
        gamma: m.gamma,
        tau,
        coupling,
    })
}

fn solver_config(s: &SolverArgs, stride: usize) -> Result<SolverConfig, CliError> {
    if !(s.dt.is_finite() && s.dt > 0.0) {
        return Err(usage("--dt", format!("must be positive, got {}", s.dt)));
    }
    if !(s.t_final.is_finite() && s.t_final > 0.0) {
        return Err(usage(
            "--t-final",
            format!("must be positive, got {}", s.t_final),
        ));
    }
    if stride == 0 {
        return Err(usage("--stride", "must be at least 1"));
    }
    for (flag, p) in [("--history", s.history), ("--ic", s.ic)] {
        if !p.0.iter().all(|v| v.is_finite()) {
            return Err(usage(flag, format!("must be finite, got {p}")));
        }
    }
    SolverConfig::new(s.dt, s.t_final, stride).map_err(|e| usage("--t-final", e))
}

fn boundary(s: &SolverArgs) -> BoundaryData {
    BoundaryData {
        history: s.history.0,
        response_ic: s.ic.0,
    }
}

fn check_delay(tau: f64, dt: f64, allow_zero: bool) -> Result<(), CliError> {
    let ok = tau.is_finite() && (tau >= dt || (allow_zero && tau == 0.0));
    if ok {
        Ok(())
    } else if allow_zero {
        Err(usage(
            "--tau",
            format!("must be 0 or at least --dt = {dt}, got {tau}"),
        ))
    } else {
        Err(usage(
            "--tau",
            format!("must be at least --dt = {dt}, got {tau}"),
        ))
    }
}

fn check_coupling(flag: &'static str, c: f64) -> Result<(), CliError> {
    if c.is_finite() && c >= 0.0 {
        Ok(())
    } else {
        Err(usage(
            flag,
            format!("coupling must be non-negative, got {c}"),
        ))
    }
}

fn settings(m: &ModelArgs, s: &SolverArgs) -> Result<SimSettings, CliError> {
    Ok(SimSettings {
        params: model_params(m, 0.0, 0.0)?,
        boundary: boundary(s),
        sim: solver_config(s, 1)?,
    })
}

fn model_flags(m: &ModelArgs) -> Vec<(String, String)> {
    vec![
        ("mu".into(), m.mu.to_string()),
        ("alpha".into(), m.alpha.to_string()),
        ("gamma".into(), m.gamma.to_string()),
    ]
}

fn solver_flags(s: &SolverArgs) -> Vec<(String, String)> {
    vec![
        ("dt".into(), s.dt.to_string()),
        ("t-final".into(), s.t_final.to_string()),
        ("history".into(), s.history.to_string()),
        ("ic".into(), s.ic.to_string()),
    ]
}

fn jobs_flag(jobs: usize) -> (String, String) {
    ("jobs".into(), jobs.to_string())
}

/// Result of one command before it is written out.
struct Output {
    command: &'static str,
    flags: Vec<(String, String)>,
    table: String,
    /// Companion tables, written next to `--out` with this suffix.
    extra: Vec<(&'static str, String)>,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

/// `t.csv` becomes `t.<suffix>.csv`.
pub fn companion_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    out.with_file_name(name)
}

fn emit(output: Output, out: Option<&Path>, started: Instant) -> Result<(), CliError> {
    let Some(out) = out else {
        io::stdout()
            .lock()
            .write_all(output.table.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?;
        return Ok(());
    };
    let mut manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").into(),
        command: output.command.into(),
        flags: output.flags,
        out: out.to_path_buf(),
        duration_s: 0.0,
    };
    let mut files = vec![(out.to_path_buf(), output.table)];
    for (suffix, table) in output.extra {
        files.push((companion_path(out, suffix), table));
    }
    manifest.duration_s = started.elapsed().as_secs_f64();
    let text = manifest.render();
    for (path, table) in files {
        write_file(&path, &table)?;
        write_file(&manifest_path(&path), &text)?;
    }
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Output, CliError> {
    let cfg = solver_config(&a.solver, a.stride)?;
    check_delay(a.tau, cfg.step_size, true)?;
    check_coupling("--coupling", a.coupling)?;
    let p = model_params(&a.model, a.tau, a.coupling)?;
    let traj = simulate_pair(&p, &boundary(&a.solver), &cfg)?;

    let mut table = format!("{TRAJECTORY_HEADER}\n");
    for (i, s) in traj.samples.iter().enumerate() {
        table.push_str(&format_g9(traj.time(i)));
        for v in s {
            table.push(',');
            table.push_str(&format_g9(*v));
        }
        table.push('\n');
    }
    let mut flags = vec![
        ("tau".into(), a.tau.to_string()),
        ("coupling".into(), a.coupling.to_string()),
        ("stride".into(), a.stride.to_string()),
    ];
    flags.extend(model_flags(&a.model));
    flags.extend(solver_flags(&a.solver));
    Ok(Output {
        command: "simulate",
        flags,
        table,
        extra: Vec::new(),
    })
}

fn cmd_stability(a: &StabilityArgs) -> Result<Output, CliError> {
    let p = model_params(&a.model, 0.0, 0.0)?;
    let points = critical_points(&p);
    if points.is_empty() {
        eprintln!(
            "warning: no critical points for mu={}, alpha={}, gamma={}",
            p.mu, p.alpha, p.gamma
        );
    }
    let mut table = format!("{STABILITY_HEADER}\n");
    for cp in &points {
        table.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_g9(cp.x_star),
            format_g9(cp.omega),
            format_g9(cp.tau_c),
            format_g9(cp.tau_alt),
            format_g9(cp.stiffness),
            format_g9(cp.residual),
        ));
    }
    Ok(Output {
        command: "stability",
        flags: model_flags(&a.model),
        table,
        extra: Vec::new(),
    })
}

fn check_grid(tau: &ParamRange, c: &ParamRange, settings: &SimSettings) -> Result<(), CliError> {
    check_delay(tau.min, settings.sim.step_size, false)?;
    check_coupling("--c", c.min)
}

fn cmd_slice(a: &SliceArgs) -> Result<Output, CliError> {
    let st = settings(&a.model, &a.solver)?;
    let (varying, fixed_range) = match a.fix {
        FixedParam::Tau(t) => {
            if a.tau.is_some() {
                return Err(usage("--tau", "conflicts with --fix tau=..."));
            }
            let c =
                a.c.ok_or_else(|| usage("--c", "required with --fix tau=..."))?;
            check_grid(&ParamRange::single(t), &c, &st)?;
            (c, "c")
        }
        FixedParam::Coupling(c) => {
            if a.c.is_some() {
                return Err(usage("--c", "conflicts with --fix C=..."));
            }
            let tau = a
                .tau
                .ok_or_else(|| usage("--tau", "required with --fix C=..."))?;
            check_grid(&tau, &ParamRange::single(c), &st)?;
            (tau, "tau")
        }
    };
    let records = run_slice(a.fix, varying, &st, a.jobs).map_err(|e| usage("--fix", e))?;
    let mut flags = vec![
        ("fix".into(), a.fix.to_string()),
        (fixed_range.into(), varying.to_string()),
    ];
    flags.extend(model_flags(&a.model));
    flags.extend(solver_flags(&a.solver));
    flags.push(jobs_flag(a.jobs));
    Ok(Output {
        command: "slice",
        flags,
        table: observables_csv(&records),
        extra: Vec::new(),
    })
}

fn cmd_sweep(a: &SweepArgs) -> Result<Output, CliError> {
    let st = settings(&a.model, &a.solver)?;
    check_grid(&a.tau, &a.c, &st)?;
    let grid = SweepGrid {
        coupling: a.c,
        tau: a.tau,
        settings: st,
    };
    let records = run_sweep(&grid, a.jobs).map_err(|e| usage("--tau", e))?;
    let mut flags = vec![
        ("tau".into(), a.tau.to_string()),
        ("c".into(), a.c.to_string()),
    ];
    flags.extend(model_flags(&a.model));
    flags.extend(solver_flags(&a.solver));
    flags.push(jobs_flag(a.jobs));
    Ok(Output {
        command: "sweep",
        flags,
        table: observables_csv(&records),
        extra: Vec::new(),
    })
}

fn cmd_transfer(a: &TransferArgs) -> Result<Output, CliError> {
    let st = settings(&a.model, &a.solver)?;
    check_coupling("--coupling", a.coupling)?;
    check_grid(&a.tau, &ParamRange::single(a.coupling), &st)?;
    let rows =
        delay_transfer_report(a.coupling, a.tau, &st, a.jobs).map_err(|e| usage("--tau", e))?;
    let records: Vec<ObservableRecord> = rows.iter().map(|r| r.record.clone()).collect();
    let mut extrema = format!("{EXTREMA_HEADER}\n");
    for r in &rows {
        extrema.push_str(&format!(
            "{},{},{},{}\n",
            format_g9(r.record.tau),
            format_g9(r.record.coupling),
            opt(r.x1_extrema_mean),
            opt(r.x2_extrema_mean),
        ));
    }
    let mut flags = vec![
        ("coupling".into(), a.coupling.to_string()),
        ("tau".into(), a.tau.to_string()),
    ];
    flags.extend(model_flags(&a.model));
    flags.extend(solver_flags(&a.solver));
    flags.push(jobs_flag(a.jobs));
    Ok(Output {
        command: "transfer",
        flags,
        table: observables_csv(&records),
        extra: vec![("extrema", extrema)],
    })
}

fn cmd_replay(a: &ReplayArgs) -> Result<(), CliError> {
    let path = a.manifest.display().to_string();
    let text = fs::read_to_string(&a.manifest).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let bad = |message: String| CliError::Manifest {
        path: path.clone(),
        message,
    };
    let manifest = RunManifest::parse(&text).map_err(bad)?;
    let out = a.out.clone().unwrap_or_else(|| manifest.out.clone());
    let cli = Cli::try_parse_from(manifest.to_args(&out)).map_err(|e| bad(e.to_string()))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(bad("nested replay".into()));
    }
    execute(&cli.command)
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    let started = Instant::now();
    let (output, out) = match command {
        Command::Simulate(a) => (cmd_simulate(a)?, &a.out),
        Command::Stability(a) => (cmd_stability(a)?, &a.out),
        Command::Slice(a) => (cmd_slice(a)?, &a.out),
        Command::Sweep(a) => (cmd_sweep(a)?, &a.out),
        Command::Transfer(a) => (cmd_transfer(a)?, &a.out),
        Command::Replay(a) => return cmd_replay(a),
    };
    emit(output, out.as_deref(), started)
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_formatting() {
        assert_eq!(format_g9(0.0), "0");
        assert_eq!(format_g9(1.0), "1");
        assert_eq!(format_g9(0.15000000000000002), "0.15");
        assert_eq!(format_g9(1.224744871391589), "1.22474487");
        assert_eq!(format_g9(-1.224744871391589), "-1.22474487");
        assert_eq!(format_g9(123456789.4), "123456789");
        assert_eq!(format_g9(1234567894.0), "1.23456789e+09");
        assert_eq!(format_g9(0.0001234), "0.0001234");
        assert_eq!(format_g9(1.5e-7), "1.5e-07");
        assert_eq!(format_g9(9.9999999999), "10");
        assert_eq!(format_g9(300.0), "300");
    }

    #[test]
    fn pair_parsing() {
        assert_eq!("1,1".parse::<Pair>().unwrap(), Pair([1.0, 1.0]));
        assert_eq!("-0.5, 2".parse::<Pair>().unwrap(), Pair([-0.5, 2.0]));
        assert!("1".parse::<Pair>().is_err());
        assert!("1,x".parse::<Pair>().is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let m = RunManifest {
            version: "0.1.0".into(),
            command: "sweep".into(),
            flags: vec![
                ("tau".into(), "1:2:0.5".into()),
                ("mu".into(), "0.01".into()),
            ],
            out: PathBuf::from("/tmp/a.csv"),
            duration_s: 1.5,
        };
        let back = RunManifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
        let args: Vec<String> = back
            .to_args(Path::new("b.csv"))
            .into_iter()
            .map(|s| s.into_string().unwrap())
            .collect();
        assert_eq!(
            args,
            [TOOL_NAME, "sweep", "--tau", "1:2:0.5", "--mu", "0.01", "--out", "b.csv"]
        );
        assert!(RunManifest::parse("tool=other\n").is_err());
        assert!(RunManifest::parse("garbage").is_err());
    }

    #[test]
    fn companion_and_manifest_paths() {
        assert_eq!(
            companion_path(Path::new("d/t.csv"), "extrema"),
            Path::new("d/t.extrema.csv")
        );
        assert_eq!(
            companion_path(Path::new("t"), "extrema"),
            Path::new("t.extrema")
        );
        assert_eq!(
            manifest_path(Path::new("d/t.csv")),
            Path::new("d/t.csv.manifest")
        );
    }

    #[test]
    fn bad_usage_names_the_flag() {
        let parse = |args: &[&str]| Cli::try_parse_from(args).unwrap();
        let cli = parse(&[TOOL_NAME, "simulate", "--tau", "0.001"]);
        match execute(&cli.command) {
            Err(CliError::Usage { flag, .. }) => assert_eq!(flag, "--tau"),
            other => panic!("{other:?}"),
        }
        let cli = parse(&[TOOL_NAME, "slice", "--fix", "tau=1"]);
        let err = execute(&cli.command).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().starts_with("--c"));
        assert!(Cli::try_parse_from([TOOL_NAME, "sweep", "--tau", "1:2"]).is_err());
    }

    #[test]
    fn negative_values_parse() {
        let cli =
            Cli::try_parse_from([TOOL_NAME, "stability", "--alpha", "-2", "--gamma", "-0.25"])
                .unwrap();
        let Command::Stability(a) = cli.command else {
            panic!()
        };
        assert_eq!((a.model.alpha, a.model.gamma), (-2.0, -0.25));
    }
}
