//! Job configuration and runners behind the `casimir` binary.
//!
//! Commands operate on a substitution system (a named preset or a parsed
//! rule file) and write CSV or JSON-lines tables. Identical configurations
//! produce byte-identical output: work items are fanned out in parallel but
//! rows are assembled in a fixed order, and floats print in shortest
//! round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::energy::{
    self, energy_for_stack, stack_from_word, EnergyError, PlateMaterial, QuadraturePolicy,
};
use crate::greens::{greens_value, greens_via_transition, GreensError};
use crate::lattice::{self, presets, LatticeError, SubstitutionSystem};
use crate::optics::{Mode, Plate, SpectralPoint};
use crate::scattering::Stack;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("invariant suite failed: {failed} of {total} checks")]
    InvariantSuite { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::InvariantSuite { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::InvariantSuite { .. } => "invariant",
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Parse { .. } | LatticeError::MissingRule(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<EnergyError> for CliError {
    fn from(e: EnergyError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<GreensError> for CliError {
    fn from(e: GreensError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io error: {e}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Sequence,
    Energy,
    Sweep,
    Fit,
    GreensCheck,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SigmaSpec {
    None,
    Single(f64),
    /// Log-spaced grid lo..hi with n points.
    Grid {
        lo: f64,
        hi: f64,
        n: usize,
    },
}

impl SigmaSpec {
    /// Parse `X` or `lo:hi:n`.
    pub fn parse(text: &str) -> Result<SigmaSpec, CliError> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| -> Result<f64, CliError> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("invalid sigma value '{s}'")))
        };
        match parts.as_slice() {
            [single] => {
                let v = num(single)?;
                if v < 0.0 || v.is_nan() {
                    return Err(CliError::Config(format!(
                        "sigma must be nonnegative, got {v}"
                    )));
                }
                Ok(SigmaSpec::Single(v))
            }
            [lo, hi, n] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                let n: usize = n
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Config(format!("invalid grid size '{n}'")))?;
                if lo <= 0.0 || lo.is_nan() || hi <= lo || hi.is_nan() || n < 2 {
                    return Err(CliError::Config(
                        "sigma grid needs 0 < lo < hi and at least 2 points".into(),
                    ));
                }
                Ok(SigmaSpec::Grid { lo, hi, n })
            }
            _ => Err(CliError::Config(format!(
                "sigma spec '{text}' is neither a value nor lo:hi:npoints"
            ))),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match *self {
            SigmaSpec::None => Vec::new(),
            SigmaSpec::Single(v) => vec![v],
            SigmaSpec::Grid { lo, hi, n } => {
                let (llo, lhi) = (lo.ln(), hi.ln());
                (0..n)
                    .map(|i| {
                        // Keep the endpoints bit-exact; exp(ln x) drifts.
                        if i == 0 {
                            lo
                        } else if i == n - 1 {
                            hi
                        } else {
                            (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp()
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaterialSpec {
    Ideal,
    Finite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub command: CommandKind,
    pub sequence_name: String,
    pub system: Option<SubstitutionSystem>,
    /// Inclusive iteration range.
    pub iters: (u32, u32),
    pub sigma: SigmaSpec,
    pub material: MaterialSpec,
    pub spacing: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub emit_rules: Option<PathBuf>,
    /// Append the raw per-area energy column.
    pub raw: bool,
}

impl JobConfig {
    fn system(&self) -> Result<&SubstitutionSystem, CliError> {
        self.system
            .as_ref()
            .ok_or_else(|| CliError::Config("this command needs --preset or --rules".into()))
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.spacing <= 0.0 || self.spacing.is_nan() {
            return Err(CliError::Config(format!(
                "spacing must be positive, got {}",
                self.spacing
            )));
        }
        if self.iters.0 > self.iters.1 {
            return Err(CliError::Config(format!(
                "empty iteration range {}..{}",
                self.iters.0, self.iters.1
            )));
        }
        match (self.material, &self.sigma) {
            (MaterialSpec::Ideal, SigmaSpec::None) => {}
            (MaterialSpec::Ideal, _) => {
                return Err(CliError::Config(
                    "--sigma applies to finite material only".into(),
                ))
            }
            (MaterialSpec::Finite, SigmaSpec::None) => {
                return Err(CliError::Config(
                    "finite material needs --sigma (a value or lo:hi:npoints)".into(),
                ))
            }
            (MaterialSpec::Finite, _) => {}
        }
        if self.command == CommandKind::Energy {
            if let SigmaSpec::Grid { .. } = self.sigma {
                return Err(CliError::Config(
                    "energy takes a single --sigma; use sweep for grids".into(),
                ));
            }
        }
        if self.command == CommandKind::Fit {
            if let SigmaSpec::Grid { .. } = self.sigma {
                return Err(CliError::Config(
                    "fit takes a single --sigma; use sweep for grids".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct RunReport {
    pub rows: usize,
}

/// Resolve `--preset` / `--rules` into a system.
pub fn resolve_system(
    preset: Option<&str>,
    rules_path: Option<&PathBuf>,
) -> Result<(String, SubstitutionSystem), CliError> {
    match (preset, rules_path) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "--preset and --rules are mutually exclusive".into(),
        )),
        (Some(name), None) => {
            let sys = presets::by_name(name).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown preset '{name}'; available: {}",
                    presets::NAMES.join(", ")
                ))
            })?;
            Ok((normalize_name(name), sys))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let sys = lattice::parse_rules(&text)?;
            Ok(("custom".to_string(), sys))
        }
        (None, None) => Err(CliError::Config(
            "one of --preset or --rules is required".into(),
        )),
    }
}

fn normalize_name(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace([' ', '_'], "-")
}

// ---------------------------------------------------------------------------
// Rows

#[derive(Serialize)]
struct SequenceRow {
    sequence: String,
    #[serde(rename = "I")]
    iteration: u32,
    n_plates: u128,
    n_like: u128,
    n_unlike: u128,
    word: String,
}

#[derive(Serialize)]
struct EnergyRow {
    sequence: String,
    #[serde(rename = "I")]
    iteration: u32,
    n_plates: u128,
    n_like: u128,
    n_unlike: u128,
    sigma: Option<f64>,
    spacing: f64,
    scaled_energy: f64,
    abs_error: f64,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw_energy_per_area: Option<f64>,
}

#[derive(Serialize)]
struct FitRow {
    sequence: String,
    i_min: u32,
    i_max: u32,
    n_points: usize,
    prefactor: Option<f64>,
    rate: Option<f64>,
    residual: Option<f64>,
    last_ratio: Option<f64>,
}

#[derive(Serialize)]
struct CheckRow {
    check: String,
    passed: usize,
    failed: usize,
}

fn fmt_f64(v: f64) -> String {
    // Shortest round-trip formatting; stable across runs.
    format!("{v}")
}

fn fmt_opt(v: &Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

trait Row: Serialize {
    fn csv_header(raw: bool) -> String;
    fn csv_line(&self, raw: bool) -> String;
}

impl Row for SequenceRow {
    fn csv_header(_raw: bool) -> String {
        "sequence,I,n_plates,n_like,n_unlike,word".into()
    }

    fn csv_line(&self, _raw: bool) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.sequence, self.iteration, self.n_plates, self.n_like, self.n_unlike, self.word
        )
    }
}

impl Row for EnergyRow {
    fn csv_header(raw: bool) -> String {
        let mut h =
            "sequence,I,n_plates,n_like,n_unlike,sigma,spacing,scaled_energy,abs_error,method"
                .to_string();
        if raw {
            h.push_str(",raw_energy_per_area");
        }
        h
    }

    fn csv_line(&self, raw: bool) -> String {
        let mut line = format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.sequence,
            self.iteration,
            self.n_plates,
            self.n_like,
            self.n_unlike,
            fmt_opt(&self.sigma),
            fmt_f64(self.spacing),
            fmt_f64(self.scaled_energy),
            fmt_f64(self.abs_error),
            self.method,
        );
        if raw {
            line.push(',');
            line.push_str(&fmt_opt(&self.raw_energy_per_area));
        }
        line
    }
}

impl Row for FitRow {
    fn csv_header(_raw: bool) -> String {
        "sequence,i_min,i_max,n_points,prefactor,rate,residual,last_ratio".into()
    }

    fn csv_line(&self, _raw: bool) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.sequence,
            self.i_min,
            self.i_max,
            self.n_points,
            fmt_opt(&self.prefactor),
            fmt_opt(&self.rate),
            fmt_opt(&self.residual),
            fmt_opt(&self.last_ratio),
        )
    }
}

impl Row for CheckRow {
    fn csv_header(_raw: bool) -> String {
        "check,passed,failed".into()
    }

    fn csv_line(&self, _raw: bool) -> String {
        format!("{},{},{}", self.check, self.passed, self.failed)
    }
}

fn render<R: Row>(rows: &[R], format: OutputFormat, raw: bool) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Csv => {
            let _ = writeln!(out, "{}", R::csv_header(raw));
            for row in rows {
                let _ = writeln!(out, "{}", row.csv_line(raw));
            }
        }
        OutputFormat::Json => {
            for row in rows {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(row).expect("rows serialize")
                );
            }
        }
    }
    out
}

fn emit(config: &JobConfig, body: &str) -> Result<(), CliError> {
    match &config.out {
        Some(path) => fs::write(path, body)?,
        None => {
            let stdout = std::io::stdout();
            stdout.lock().write_all(body.as_bytes())?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Runners

/// Execute a job; on success the produced rows have been written to the
/// configured destination.
pub fn run(config: &JobConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    match config.command {
        CommandKind::Sequence => run_sequence(config),
        CommandKind::Energy => run_energy(config),
        CommandKind::Sweep => run_sweep(config),
        CommandKind::Fit => run_fit(config),
        CommandKind::GreensCheck => run_greens_check(config),
    }
}

fn run_sequence(config: &JobConfig) -> Result<RunReport, CliError> {
    let system = config.system()?;
    if let Some(path) = &config.emit_rules {
        fs::write(path, system.to_dsl())?;
    }
    let mut rows = Vec::new();
    for i in config.iters.0..=config.iters.1 {
        let word = lattice::iterate(system, i)?;
        let stats = lattice::stats(&word);
        rows.push(SequenceRow {
            sequence: config.sequence_name.clone(),
            iteration: i,
            n_plates: stats.n_plates,
            n_like: stats.n_like,
            n_unlike: stats.n_unlike,
            word: word.to_string(),
        });
    }
    emit(config, &render(&rows, config.format, config.raw))?;
    Ok(RunReport { rows: rows.len() })
}

fn energy_row(
    config: &JobConfig,
    system: &SubstitutionSystem,
    iteration: u32,
    sigma: Option<f64>,
) -> Result<EnergyRow, CliError> {
    let stats = lattice::stats_at(system, iteration)?;
    let result = match (config.material, sigma) {
        (MaterialSpec::Ideal, _) => energy::energy_ideal_at(system, iteration, config.spacing)?,
        (MaterialSpec::Finite, Some(sigma)) => {
            let word = lattice::iterate(system, iteration)?;
            let stack = stack_from_word(&word, PlateMaterial::Finite { sigma }, config.spacing)?;
            energy_for_stack(&stack, config.spacing, &QuadraturePolicy::default())?
        }
        (MaterialSpec::Finite, None) => {
            return Err(CliError::Config("finite material needs --sigma".into()))
        }
    };
    Ok(EnergyRow {
        sequence: config.sequence_name.clone(),
        iteration,
        n_plates: stats.n_plates,
        n_like: stats.n_like,
        n_unlike: stats.n_unlike,
        sigma,
        spacing: config.spacing,
        scaled_energy: result.value,
        abs_error: result.abs_error,
        method: result.method.to_string(),
        raw_energy_per_area: config.raw.then(|| result.per_area()),
    })
}

fn run_energy(config: &JobConfig) -> Result<RunReport, CliError> {
    let system = config.system()?;
    let sigma = match config.sigma {
        SigmaSpec::Single(v) => Some(v),
        _ => None,
    };
    let rows: Result<Vec<EnergyRow>, CliError> = (config.iters.0..=config.iters.1)
        .map(|i| energy_row(config, system, i, sigma))
        .collect();
    let rows = rows?;
    emit(config, &render(&rows, config.format, config.raw))?;
    Ok(RunReport { rows: rows.len() })
}

fn run_sweep(config: &JobConfig) -> Result<RunReport, CliError> {
    let system = config.system()?;
    let sigmas = config.sigma.values();
    let items: Vec<(u32, f64)> = (config.iters.0..=config.iters.1)
        .flat_map(|i| sigmas.iter().map(move |&s| (i, s)))
        .collect();
    // Fan out; indexed collection keeps the output order fixed.
    let rows: Result<Vec<EnergyRow>, CliError> = items
        .par_iter()
        .map(|&(i, sigma)| energy_row(config, system, i, Some(sigma)))
        .collect();
    let rows = rows?;
    emit(config, &render(&rows, config.format, config.raw))?;
    Ok(RunReport { rows: rows.len() })
}

fn run_fit(config: &JobConfig) -> Result<RunReport, CliError> {
    let system = config.system()?;
    let sigma = match config.sigma {
        SigmaSpec::Single(v) => Some(v),
        _ => None,
    };
    let points: Result<Vec<(u32, f64)>, CliError> = (config.iters.0..=config.iters.1)
        .map(|i| Ok((i, energy_row(config, system, i, sigma)?.scaled_energy)))
        .collect();
    let points = points?;
    let row = match energy::growth_fit(&points) {
        Ok(fit) => FitRow {
            sequence: config.sequence_name.clone(),
            i_min: fit.window.0,
            i_max: fit.window.1,
            n_points: points.len(),
            prefactor: Some(fit.prefactor),
            rate: Some(fit.rate),
            residual: Some(fit.residual),
            last_ratio: fit.ratios.last().copied(),
        },
        // A sign change refuses the fit; ratios are still meaningful.
        Err(EnergyError::MixedSignFit { ratios }) => FitRow {
            sequence: config.sequence_name.clone(),
            i_min: config.iters.0,
            i_max: config.iters.1,
            n_points: points.len(),
            prefactor: None,
            rate: None,
            residual: None,
            last_ratio: ratios.last().copied(),
        },
        Err(e) => return Err(e.into()),
    };
    let rows = vec![row];
    emit(config, &render(&rows, config.format, config.raw))?;
    Ok(RunReport { rows: 1 })
}

// ---------------------------------------------------------------------------
// Green's function invariant suite

/// Deterministic pseudo-random stream (splitmix64).
struct SampleStream(u64);

impl SampleStream {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

pub struct SuiteOutcome {
    pub passed: usize,
    pub failed: usize,
}

fn off_plate(stream: &mut SampleStream, stack: &Stack) -> f64 {
    let lo = stack.position(0) - 1.5;
    let hi = stack.position(stack.len() - 1) + 1.5;
    loop {
        let z = stream.range(lo, hi);
        if stack.positions().iter().all(|&p| (z - p).abs() > 1e-6) {
            return z;
        }
    }
}

fn suite_stacks() -> Vec<Stack> {
    vec![
        Stack::new(vec![Plate::general(1.3, 0.4).unwrap()], vec![0.2]).unwrap(),
        Stack::new(
            vec![
                Plate::general(1.3, 0.4).unwrap(),
                Plate::general(0.7, 2.1).unwrap(),
            ],
            vec![0.0, 0.9],
        )
        .unwrap(),
        Stack::new(
            vec![
                Plate::finite_dielectric(2.0).unwrap(),
                Plate::finite_permeable(1.1).unwrap(),
                Plate::general(0.5, 0.8).unwrap(),
            ],
            vec![-0.4, 0.6, 1.7],
        )
        .unwrap(),
    ]
}

fn check_reciprocity(samples: usize) -> SuiteOutcome {
    let mut stream = SampleStream(0x01);
    let mut outcome = SuiteOutcome {
        passed: 0,
        failed: 0,
    };
    for stack in suite_stacks() {
        for mode in Mode::BOTH {
            for _ in 0..samples {
                let pt = SpectralPoint::new(stream.range(0.1, 2.5), stream.range(0.1, 2.5))
                    .expect("valid point");
                let z = off_plate(&mut stream, &stack);
                let zp = off_plate(&mut stream, &stack);
                let a = greens_value(&stack, &pt, mode, z, zp).expect("off-plate");
                let b = greens_value(&stack, &pt, mode, zp, z).expect("off-plate");
                if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300) {
                    outcome.passed += 1;
                } else {
                    outcome.failed += 1;
                }
            }
        }
    }
    outcome
}

fn check_mode_swap(samples: usize) -> SuiteOutcome {
    let mut stream = SampleStream(0x02);
    let mut outcome = SuiteOutcome {
        passed: 0,
        failed: 0,
    };
    for stack in suite_stacks() {
        let dual = stack.dual();
        for _ in 0..samples {
            let pt = SpectralPoint::new(stream.range(0.1, 2.5), stream.range(0.1, 2.5))
                .expect("valid point");
            let z = off_plate(&mut stream, &stack);
            let zp = off_plate(&mut stream, &stack);
            let te = greens_value(&stack, &pt, Mode::Te, z, zp).expect("off-plate");
            let tm_dual = greens_value(&dual, &pt, Mode::Tm, z, zp).expect("off-plate");
            if (te - tm_dual).abs() <= 1e-12 * te.abs().max(1e-300) {
                outcome.passed += 1;
            } else {
                outcome.failed += 1;
            }
        }
    }
    outcome
}

/// Jump-condition residuals at each plate must shrink linearly with the
/// one-sided step.
fn check_boundary_jumps() -> SuiteOutcome {
    let mut outcome = SuiteOutcome {
        passed: 0,
        failed: 0,
    };
    let mut stream = SampleStream(0x03);
    for stack in suite_stacks() {
        for mode in Mode::BOTH {
            for plate_idx in 0..stack.len() {
                let pt = SpectralPoint::new(stream.range(0.3, 1.5), stream.range(0.3, 1.5))
                    .expect("valid point");
                let zp = off_plate(&mut stream, &stack);
                let ok = jump_residuals_shrink(&stack, &pt, mode, plate_idx, zp);
                if ok {
                    outcome.passed += 1;
                } else {
                    outcome.failed += 1;
                }
            }
        }
    }
    outcome
}

fn jump_residuals_shrink(
    stack: &Stack,
    pt: &SpectralPoint,
    mode: Mode,
    plate_idx: usize,
    zp: f64,
) -> bool {
    let a = stack.position(plate_idx);
    // Keep the stencil inside the neighbouring slabs and away from z'.
    if (zp - a).abs() < 0.05 {
        return jump_residuals_shrink(stack, pt, mode, plate_idx, zp + 0.11);
    }
    let (lambda_e, lambda_g) = match *stack.plate(plate_idx) {
        Plate::General { lambda_e, lambda_g } => (lambda_e, lambda_g),
        Plate::FiniteDielectric { sigma } => (sigma / pt.zeta(), 0.0),
        Plate::FinitePermeable { sigma } => (0.0, sigma / pt.zeta()),
        _ => return true, // ideal plates have no finite jump relation
    };
    // The value jump couples to the active coupling of the mode, the
    // derivative jump to the passive one.
    let (lam_value, lam_slope) = match mode {
        Mode::Tm => (lambda_e, lambda_g),
        Mode::Te => (lambda_g, lambda_e),
    };
    let residual = |h: f64| -> (f64, f64) {
        let g = |z: f64| greens_value(stack, pt, mode, z, zp).expect("off-plate");
        let (g1p, g2p) = (g(a + h), g(a + 2.0 * h));
        let (g1m, g2m) = (g(a - h), g(a - 2.0 * h));
        let d_plus = (g2p - g1p) / h;
        let d_minus = (g1m - g2m) / h;
        let value_jump = g1p - g1m - 0.5 * lam_value * (d_plus + d_minus);
        let slope_jump = d_plus - d_minus - 0.5 * pt.zeta() * pt.zeta() * lam_slope * (g1p + g1m);
        (value_jump.abs(), slope_jump.abs())
    };
    let h0 = 1e-3;
    let (v0, s0) = residual(h0);
    let (v1, s1) = residual(h0 / 2.0);
    let (v2, s2) = residual(h0 / 4.0);
    let shrinks = |r0: f64, r1: f64, r2: f64| {
        let floor = 1e-11;
        (r1 <= 0.75 * r0 + floor) && (r2 <= 0.75 * r1 + floor)
    };
    shrinks(v0, v1, v2) && shrinks(s0, s1, s2)
}

fn check_transition_identity(samples: usize) -> SuiteOutcome {
    let mut stream = SampleStream(0x04);
    let mut outcome = SuiteOutcome {
        passed: 0,
        failed: 0,
    };
    for n in 1..=3usize {
        for mode in Mode::BOTH {
            let plates: Vec<Plate> = (0..n)
                .map(|i| {
                    let sigma = 0.6 + 0.9 * i as f64;
                    match mode {
                        Mode::Tm => Plate::finite_permeable(sigma).unwrap(),
                        Mode::Te => Plate::finite_dielectric(sigma).unwrap(),
                    }
                })
                .collect();
            let positions: Vec<f64> = (0..n).map(|i| 0.8 * i as f64).collect();
            let stack = Stack::new(plates, positions).unwrap();
            for _ in 0..samples {
                let pt = SpectralPoint::new(stream.range(0.2, 2.0), stream.range(0.2, 2.0))
                    .expect("valid point");
                // Same-slab pair of points.
                let slab = (stream.unit() * (n + 1) as f64) as usize;
                let (lo, hi) = slab_bounds(&stack, slab);
                let z = stream.range(lo, hi);
                let zp = stream.range(lo, hi);
                let direct = greens_value(&stack, &pt, mode, z, zp).expect("off-plate");
                let via = greens_via_transition(&stack, &pt, mode, z, zp).expect("same slab");
                if (direct - via).abs() <= 1e-12 * direct.abs().max(1e-300) {
                    outcome.passed += 1;
                } else {
                    outcome.failed += 1;
                }
            }
        }
    }
    outcome
}

fn slab_bounds(stack: &Stack, slab: usize) -> (f64, f64) {
    let n = stack.len();
    let eps = 1e-4;
    if slab == 0 {
        (stack.position(0) - 1.4, stack.position(0) - eps)
    } else if slab >= n {
        (stack.position(n - 1) + eps, stack.position(n - 1) + 1.4)
    } else {
        (stack.position(slab - 1) + eps, stack.position(slab) - eps)
    }
}

fn check_free_limit(samples: usize) -> SuiteOutcome {
    let mut stream = SampleStream(0x05);
    let mut outcome = SuiteOutcome {
        passed: 0,
        failed: 0,
    };
    let stack = Stack::uniform(
        vec![
            Plate::finite_dielectric(0.0).unwrap(),
            Plate::finite_permeable(0.0).unwrap(),
        ],
        1.0,
    )
    .unwrap();
    for _ in 0..samples {
        let pt = SpectralPoint::new(stream.range(0.1, 2.0), stream.range(0.1, 2.0))
            .expect("valid point");
        let z = off_plate(&mut stream, &stack);
        let zp = off_plate(&mut stream, &stack);
        for mode in Mode::BOTH {
            let g = greens_value(&stack, &pt, mode, z, zp).expect("off-plate");
            let g0 = crate::greens::free_propagator(pt.kappa(), z, zp);
            if (g - g0).abs() <= 1e-13 * g0.abs() {
                outcome.passed += 1;
            } else {
                outcome.failed += 1;
            }
        }
    }
    outcome
}

/// The invariant suite behind `casimir greens-check`.
pub fn greens_invariant_suite() -> Vec<(String, SuiteOutcome)> {
    vec![
        ("reciprocity".to_string(), check_reciprocity(60)),
        ("te-tm-swap".to_string(), check_mode_swap(60)),
        ("boundary-jumps".to_string(), check_boundary_jumps()),
        (
            "transition-identity".to_string(),
            check_transition_identity(40),
        ),
        ("free-limit".to_string(), check_free_limit(40)),
    ]
}

fn run_greens_check(config: &JobConfig) -> Result<RunReport, CliError> {
    let results = greens_invariant_suite();
    let rows: Vec<CheckRow> = results
        .iter()
        .map(|(name, o)| CheckRow {
            check: name.clone(),
            passed: o.passed,
            failed: o.failed,
        })
        .collect();
    emit(config, &render(&rows, config.format, config.raw))?;
    let failed: usize = results.iter().map(|(_, o)| o.failed).sum();
    let total: usize = results.iter().map(|(_, o)| o.passed + o.failed).sum();
    if failed > 0 {
        return Err(CliError::InvariantSuite { failed, total });
    }
    Ok(RunReport { rows: rows.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_spec_parsing() {
        assert_eq!(SigmaSpec::parse("2.5").unwrap(), SigmaSpec::Single(2.5));
        let grid = SigmaSpec::parse("0.01:10000:60").unwrap();
        let values = grid.values();
        assert_eq!(values.len(), 60);
        assert!((values[0] - 0.01).abs() < 1e-12);
        assert!((values[59] - 10000.0).abs() < 1e-8);
        // Log spacing: constant ratio between neighbours.
        let ratio = values[1] / values[0];
        for w in values.windows(2) {
            assert!((w[1] / w[0] - ratio).abs() < 1e-9);
        }
        assert!(SigmaSpec::parse("1:2").is_err());
        assert!(SigmaSpec::parse("-1").is_err());
        assert!(SigmaSpec::parse("5:1:10").is_err());
    }

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Numerical("x".into()).exit_code(), 3);
        assert_eq!(
            CliError::InvariantSuite {
                failed: 1,
                total: 5
            }
            .exit_code(),
            4
        );
        assert_eq!(
            CliError::InvariantSuite {
                failed: 1,
                total: 5
            }
            .kind(),
            "invariant"
        );
    }

    #[test]
    fn preset_resolution_is_case_insensitive() {
        let (name, sys) = resolve_system(Some("Thue-Morse"), None).unwrap();
        assert_eq!(name, "thue-morse");
        assert_eq!(sys, presets::thue_morse());
        assert!(resolve_system(Some("golden"), None).is_err());
        assert!(resolve_system(None, None).is_err());
    }

    #[test]
    fn invariant_suite_is_clean() {
        for (name, outcome) in greens_invariant_suite() {
            assert_eq!(outcome.failed, 0, "check {name} failed");
            assert!(outcome.passed > 0);
        }
    }
}
