//! Command-line front end: `pressure`, `free-energy`, `entropy`, `sweep`
//! and `audit`.
//!
//! Exit codes: 0 success, 1 usage, 2 numerical failure, 3 audit failure.
//! `--config <file>` reads `key = value` lines that act as flags; flags on
//! the command line win.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::{ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::asymptotics::DEFAULT_VALIDITY_THRESHOLD;
use crate::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::lifshitz::{Tolerances, ZeroModePolicy, DEFAULT_QUAD_REL_TOL, DEFAULT_SUM_REL_TOL};
use crate::sweep::{config_to_args, evaluate_point, parse_config, parse_outputs, run_sweep, Axis, ModelArgs, Output, Spacing, SweepSpec, CSV_HEADER};
use crate::thermo::{self, AuditReport, DerivativeSpec, Variable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_AUDIT: i32 = 3;

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "CASIMIR_THREADS";

#[derive(Debug, Parser)]
#[command(name = "casimir", version, about = "Thermal Casimir pressure, free energy and entropy between parallel plates")]
pub struct Cli {
    /// Worker threads for sweeps and audits.
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    /// Flat `key = value` file of default flags.
    #[arg(long, global = true)]
    pub config: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure at one (gap, temperature) point.
    Pressure(PointArgs),
    /// Free energy per unit area at one point.
    FreeEnergy(PointArgs),
    /// Entropy per unit area at one point (T > 0).
    Entropy(EntropyArgs),
    /// One-dimensional sweep in gap or temperature, written as CSV.
    Sweep(SweepArgs),
    /// Thermodynamic consistency audits.
    Audit(AuditArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    FromModel,
    Im,
    Mim,
}

impl From<PolicyArg> for ZeroModePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::FromModel => ZeroModePolicy::FromModel,
            PolicyArg::Im => ZeroModePolicy::ForceIM,
            PolicyArg::Mim => ZeroModePolicy::ForceMIM,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelFlags {
    /// ideal, mim, plasma, drude, vacuum or table:<path>.
    #[arg(long, default_value = "drude")]
    pub model: String,
    /// Plasma frequency in eV (default: gold, 9.03 eV).
    #[arg(long)]
    pub wp_ev: Option<f64>,
    /// Dissipation in eV (default: gold, 0.0345 eV).
    #[arg(long)]
    pub nu_ev: Option<f64>,
    /// Plasma frequency in rad/s.
    #[arg(long)]
    pub wp_rad: Option<f64>,
    /// Dissipation in rad/s.
    #[arg(long)]
    pub nu_rad: Option<f64>,
    /// Temperature-dependent dissipation, CSV `T_K,nu_rad_s`.
    #[arg(long)]
    pub nu_table: Option<String>,
    /// Permittivity tables: ε = 1 far above the last row instead of an error.
    #[arg(long, action = ArgAction::SetTrue)]
    pub high_frequency_tail: bool,
    /// Zero-frequency mode treatment.
    #[arg(long, value_enum, default_value = "from-model")]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = DEFAULT_QUAD_REL_TOL)]
    pub quad_tol: f64,
    #[arg(long, default_value_t = DEFAULT_SUM_REL_TOL)]
    pub sum_tol: f64,
}

impl ModelFlags {
    pub fn model(&self) -> Result<DispersionModel> {
        ModelArgs {
            name: self.model.clone(),
            wp_ev: self.wp_ev,
            nu_ev: self.nu_ev,
            wp_rad: self.wp_rad,
            nu_rad: self.nu_rad,
            nu_table: self.nu_table.clone(),
            high_frequency_tail: self.high_frequency_tail,
        }
        .build()
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        Tolerances::new(self.quad_tol, self.sum_tol)
    }
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub model: ModelFlags,
    /// Gap width in meters.
    #[arg(long)]
    pub gap: f64,
    /// Temperature in kelvin.
    #[arg(long)]
    pub temp: f64,
}

#[derive(Debug, Clone, Args)]
pub struct DerivativeFlags {
    /// Relative finite-difference step.
    #[arg(long, default_value_t = 1e-3)]
    pub rel_step: f64,
    /// Richardson levels.
    #[arg(long, default_value_t = 2)]
    pub orders: usize,
}

impl DerivativeFlags {
    fn spec(&self) -> Result<DerivativeSpec> {
        DerivativeSpec::new(Variable::Temperature, self.rel_step, self.orders)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[command(flatten)]
    pub derivative: DerivativeFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Gap,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelFlags,
    #[command(flatten)]
    pub derivative: DerivativeFlags,
    #[arg(long, value_enum)]
    pub axis: AxisArg,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: SpacingArg,
    /// Fixed gap (m) for temperature sweeps.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Fixed temperature (K) for gap sweeps.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Comma-separated subset of pressure,free_energy,entropy,a4f.
    #[arg(long, default_value = "pressure")]
    pub outputs: String,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// Audits to run; see `--list`.
    pub names: Vec<String>,
    /// Run every audit.
    #[arg(long, action = ArgAction::SetTrue)]
    pub all: bool,
    /// Print the available audit names and exit.
    #[arg(long, action = ArgAction::SetTrue)]
    pub list: bool,
    #[command(flatten)]
    pub model: ModelFlags,
    /// Gap override (m) for single-gap audits.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Temperature override (K) for single-temperature audits.
    #[arg(long)]
    pub temp: Option<f64>,
    /// Machine-readable report file.
    #[arg(long)]
    pub report: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub report_format: ReportFormat,
}

/// Audit names accepted by `audit`.
pub const AUDITS: [&str; 7] = [
    "pf-consistency",
    "fig3",
    "classical",
    "mim-entropy",
    "drude-nernst",
    "closed-forms",
    "negative-entropy",
];

/// Settings shared by the audits.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub model: DispersionModel,
    pub tolerances: Tolerances,
    pub gap: Option<f64>,
    pub temperature: Option<f64>,
}

/// Runs one named audit.
pub fn run_audit(name: &str, cfg: &AuditConfig) -> Result<AuditReport> {
    let um = 1e-6;
    match name {
        "pf-consistency" => {
            let mut grid = Vec::new();
            for a in [0.5 * um, um, 5.0 * um] {
                for t in [100.0, 300.0, 900.0] {
                    grid.push((a, t));
                }
            }
            thermo::audit_pressure_free_energy(&cfg.model, &grid, cfg.tolerances)
        }
        "fig3" => {
            let gaps: Vec<f64> = (0..61).map(|i| um + i as f64 * 0.1 * um).collect();
            thermo::audit_fig3_shape(&cfg.model, cfg.temperature.unwrap_or(300.0), &gaps, cfg.tolerances)
        }
        "classical" => thermo::audit_classical_limit(&cfg.model, cfg.gap.unwrap_or(25.0 * um), cfg.temperature.unwrap_or(300.0), cfg.tolerances),
        "mim-entropy" => thermo::audit_mim_entropy_defect(cfg.gap.unwrap_or(um), &thermo::LOW_T_SERIES),
        "drude-nernst" => thermo::audit_drude_nernst(&cfg.model, cfg.gap.unwrap_or(um), &thermo::LOW_T_SERIES),
        "closed-forms" => {
            let mut points = Vec::new();
            for a in [0.5 * um, um, 2.0 * um] {
                for x in [0.02, 0.1, DEFAULT_VALIDITY_THRESHOLD * 0.9] {
                    points.push((a, x * crate::constants::HBAR_C / (2.0 * a * crate::constants::K_B)));
                }
            }
            thermo::audit_entropy_closed_forms(&points)
        }
        "negative-entropy" => {
            let temps: Vec<f64> = (0..16).map(|i| (1500f64.ln() * i as f64 / 15.0).exp()).collect();
            thermo::audit_negative_entropy_window(&cfg.model, cfg.gap.unwrap_or(um), &temps)
        }
        other => Err(Error::Invalid(format!("unknown audit `{other}`; known: {}", AUDITS.join(", ")))),
    }
}

/// Writes audit reports as CSV, one row per entry.
pub fn write_reports_csv<W: Write>(reports: &[AuditReport], w: &mut W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record([
        "audit",
        "check",
        "inputs",
        "computed",
        "reference",
        "discrepancy",
        "tolerance",
        "error_estimate",
        "status",
        "note",
    ])?;
    for r in reports {
        for e in &r.entries {
            let status = serde_json::to_value(e.status)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            wr.write_record([
                r.name.clone(),
                e.check.clone(),
                e.inputs.clone(),
                format!("{:.16e}", e.computed),
                format!("{:.16e}", e.reference),
                format!("{:.16e}", e.discrepancy),
                format!("{:.16e}", e.tolerance),
                format!("{:.16e}", e.error_estimate),
                status,
                e.note.clone(),
            ])?;
        }
    }
    wr.flush()?;
    Ok(())
}

fn status_word(e: &thermo::AuditEntry) -> &'static str {
    match e.status {
        thermo::CheckStatus::Pass => "PASS",
        thermo::CheckStatus::Fail => "FAIL",
        thermo::CheckStatus::NotApplicable => "N/A ",
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

/// Inserts config-file flags right after the subcommand token so that
/// command-line flags, which come later, override them.
fn expand_config(args: Vec<OsString>) -> std::result::Result<Vec<OsString>, String> {
    let mut path = None;
    for (i, a) in args.iter().enumerate() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = args.get(i + 1).map(|p| p.to_string_lossy().into_owned());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config `{path}`: {e}"))?;
    let extra = config_to_args(&parse_config(&text).map_err(|e| e.to_string())?);
    let names = ["pressure", "free-energy", "entropy", "sweep", "audit"];
    let pos = args
        .iter()
        .position(|a| names.contains(&a.to_string_lossy().as_ref()))
        .ok_or_else(|| "no subcommand given".to_string())?;
    let mut out: Vec<OsString> = args[..=pos].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend(args[pos + 1..].iter().cloned());
    Ok(out)
}

fn parse(args: Vec<OsString>) -> std::result::Result<Cli, clap::Error> {
    let cmd = Cli::command()
        .args_override_self(true)
        .mut_subcommands(|s| s.args_override_self(true).allow_negative_numbers(true));
    let matches = cmd.try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let cli = match parse(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_USAGE;
        }
    };
    pool.install(|| match dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    })
}

fn run_point(
    model: &ModelFlags,
    gap: f64,
    temp: f64,
    output: Output,
    derivative: &DerivativeSpec,
    out: &mut (dyn Write + Send),
    err: &mut (dyn Write + Send),
) -> Result<i32> {
    let m = model.model()?;
    let tol = model.tolerances()?;
    let outputs = [output].into_iter().collect();
    let record = evaluate_point(&m, gap, temp, model.policy.into(), &outputs, tol, derivative);
    writeln!(out, "{CSV_HEADER}")?;
    writeln!(out, "{}", record.to_csv_row())?;
    match &record.error {
        None => Ok(EXIT_OK),
        Some(msg) => {
            writeln!(err, "error: {msg}")?;
            Ok(if record.numerical_failure { EXIT_NUMERICAL } else { EXIT_USAGE })
        }
    }
}

fn dispatch(command: &Command, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let default_derivative = DerivativeSpec::default_for(Variable::Temperature);
    match command {
        Command::Pressure(p) => run_point(&p.model, p.gap, p.temp, Output::Pressure, &default_derivative, out, err),
        Command::FreeEnergy(p) => run_point(&p.model, p.gap, p.temp, Output::FreeEnergy, &default_derivative, out, err),
        Command::Entropy(e) => {
            let spec = e.derivative.spec()?;
            run_point(&e.point.model, e.point.gap, e.point.temp, Output::Entropy, &spec, out, err)
        }
        Command::Sweep(s) => {
            let (axis, fixed) = match s.axis {
                AxisArg::Gap => (Axis::Gap, s.temp.ok_or_else(|| Error::Invalid("gap sweeps need --temp".into()))?),
                AxisArg::Temperature => (Axis::Temperature, s.gap.ok_or_else(|| Error::Invalid("temperature sweeps need --gap".into()))?),
            };
            let spec = SweepSpec {
                axis,
                start: s.start,
                stop: s.stop,
                points: s.points,
                spacing: match s.spacing {
                    SpacingArg::Linear => Spacing::Linear,
                    SpacingArg::Log => Spacing::Log,
                },
                fixed,
                model: s.model.model()?,
                policy: s.model.policy.into(),
                outputs: parse_outputs(&s.outputs)?,
                tolerances: s.model.tolerances()?,
                derivative: s.derivative.spec()?,
            };
            let summary = match &s.out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    run_sweep(&spec, &mut w)?
                }
                None => run_sweep(&spec, out)?,
            };
            if summary.failures > 0 {
                writeln!(err, "error: {} of {} points failed; see the error column", summary.failures, summary.rows)?;
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
        Command::Audit(a) => {
            if a.list {
                for name in AUDITS {
                    writeln!(out, "{name}")?;
                }
                return Ok(EXIT_OK);
            }
            let names: Vec<String> = if a.all {
                AUDITS.iter().map(|s| s.to_string()).collect()
            } else {
                a.names.clone()
            };
            if names.is_empty() {
                writeln!(err, "error: no audits selected; name some or pass --all (known: {})", AUDITS.join(", "))?;
                return Ok(EXIT_USAGE);
            }
            if let Some(bad) = names.iter().find(|n| !AUDITS.contains(&n.as_str())) {
                writeln!(err, "error: unknown audit `{bad}`; known: {}", AUDITS.join(", "))?;
                return Ok(EXIT_USAGE);
            }
            let cfg = AuditConfig {
                model: a.model.model()?,
                tolerances: a.model.tolerances()?,
                gap: a.gap,
                temperature: a.temp,
            };
            let mut reports = Vec::new();
            for name in &names {
                let report = run_audit(name, &cfg)?;
                for e in &report.entries {
                    writeln!(
                        out,
                        "{} {}: {} [{}] computed={:e} reference={:e} tol={:e} {}",
                        status_word(e),
                        report.name,
                        e.check,
                        e.inputs,
                        e.computed,
                        e.reference,
                        e.tolerance,
                        e.note
                    )?;
                }
                reports.push(report);
            }
            if let Some(path) = &a.report {
                let mut w = BufWriter::new(File::create(path)?);
                match a.report_format {
                    ReportFormat::Json => {
                        serde_json::to_writer_pretty(&mut w, &reports).map_err(|e| Error::Invalid(e.to_string()))?;
                        writeln!(w)?;
                    }
                    ReportFormat::Csv => write_reports_csv(&reports, &mut w)?,
                }
                w.flush()?;
            }
            Ok(if reports.iter().all(AuditReport::passed) { EXIT_OK } else { EXIT_AUDIT })
        }
    }
}
