//! Point evaluations, 1-D sweeps in gap or temperature, and the CSV record
//! format shared by the CLI.
//!
//! Numbers are written with 17 significant digits in scientific notation,
//! and rows are emitted in grid order, so identical specs produce
//! byte-identical files regardless of thread count.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;

use crate::constants::ev_to_angular_frequency;
use crate::dispersion::{load_nu_schedule, load_permittivity_table, DispersionModel, DrudeParams, NuSchedule, GOLD_DISSIPATION_EV, GOLD_PLASMA_EV};
use crate::error::{Error, Result};
use crate::lifshitz::{self, Estimate, LifshitzQuery, Tolerances, ZeroModePolicy};
use crate::thermo::{entropy, DerivativeSpec, Variable};

pub const CSV_HEADER: &str = "a_m,T_K,pressure_Pa,pressure_err_Pa,free_energy_J_m2,free_energy_err_J_m2,entropy_J_K_m2,entropy_err_J_K_m2,a4f_Pa_m4,error";

pub const MAX_POINTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Output {
    Pressure,
    FreeEnergy,
    Entropy,
    A4f,
}

impl std::str::FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "pressure" => Ok(Output::Pressure),
            "free_energy" | "free-energy" => Ok(Output::FreeEnergy),
            "entropy" => Ok(Output::Entropy),
            "a4f" => Ok(Output::A4f),
            other => Err(Error::Invalid(format!("unknown output `{other}`"))),
        }
    }
}

/// Parses a comma-separated output list such as `pressure,a4f`.
pub fn parse_outputs(s: &str) -> Result<BTreeSet<Output>> {
    let set: BTreeSet<Output> = s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if set.is_empty() {
        return Err(Error::Invalid("no outputs selected".into()));
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Gap,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
    /// Value of the variable that is not swept (K or m).
    pub fixed: f64,
    pub model: DispersionModel,
    pub policy: ZeroModePolicy,
    pub outputs: BTreeSet<Output>,
    pub tolerances: Tolerances,
    pub derivative: DerivativeSpec,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Invalid(format!("sweep needs start < stop, got {} .. {}", self.start, self.stop)));
        }
        if self.spacing == Spacing::Log && !(self.start > 0.0) {
            return Err(Error::Invalid("log spacing needs start > 0".into()));
        }
        if self.points < 2 || self.points > MAX_POINTS {
            return Err(Error::Invalid(format!("points must lie in [2, {MAX_POINTS}], got {}", self.points)));
        }
        if self.outputs.is_empty() {
            return Err(Error::Invalid("no outputs selected".into()));
        }
        Ok(())
    }

    /// Grid values along the swept axis; both endpoints are exact.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let w = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.start + w * (self.stop - self.start),
                    Spacing::Log => (self.start.ln() + w * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }

    fn point(&self, x: f64) -> (f64, f64) {
        match self.axis {
            Axis::Gap => (x, self.fixed),
            Axis::Temperature => (self.fixed, x),
        }
    }
}

/// One evaluated (a, T) point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRecord {
    pub gap: f64,
    pub temperature: f64,
    pub pressure: Option<Estimate>,
    pub free_energy: Option<Estimate>,
    pub entropy: Option<Estimate>,
    pub a4f: Option<f64>,
    pub error: Option<String>,
    /// Set for failures of the numerical engine, as opposed to bad input.
    pub numerical_failure: bool,
}

fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

impl PointRecord {
    fn empty(gap: f64, temperature: f64) -> Self {
        Self {
            gap,
            temperature,
            pressure: None,
            free_energy: None,
            entropy: None,
            a4f: None,
            error: None,
            numerical_failure: false,
        }
    }

    pub fn to_csv_row(&self) -> String {
        let error = self.error.as_deref().unwrap_or("").replace([',', '\n', '\r'], ";");
        [
            fmt_num(self.gap),
            fmt_num(self.temperature),
            fmt_opt(self.pressure.map(|e| e.value)),
            fmt_opt(self.pressure.map(|e| e.error())),
            fmt_opt(self.free_energy.map(|e| e.value)),
            fmt_opt(self.free_energy.map(|e| e.error())),
            fmt_opt(self.entropy.map(|e| e.value)),
            fmt_opt(self.entropy.map(|e| e.error())),
            fmt_opt(self.a4f),
            error,
        ]
        .join(",")
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }
}

fn note_error(record: &mut PointRecord, e: &Error) {
    if let Error::Numerical { .. } = e {
        record.numerical_failure = true;
    }
    if record.error.is_none() {
        record.error = Some(e.to_string());
    }
}

/// Evaluates the requested quantities at one point. Failures land in the
/// record's error field; quantities that succeeded are kept.
pub fn evaluate_point(
    model: &DispersionModel,
    gap: f64,
    temperature: f64,
    policy: ZeroModePolicy,
    outputs: &BTreeSet<Output>,
    tolerances: Tolerances,
    derivative: &DerivativeSpec,
) -> PointRecord {
    let mut record = PointRecord::empty(gap, temperature);
    let query = match LifshitzQuery::new(gap, temperature, model.clone()) {
        Ok(q) => q.with_policy(policy).with_tolerances(tolerances),
        Err(e) => {
            note_error(&mut record, &e);
            return record;
        }
    };
    let zero_t = temperature == 0.0;
    let mut truncated = false;

    if outputs.contains(&Output::Pressure) || outputs.contains(&Output::A4f) {
        let r = if zero_t {
            lifshitz::pressure_t0(model, gap, tolerances.quad_rel_tol)
        } else {
            lifshitz::pressure(&query).map(|r| {
                truncated |= r.truncated;
                r.pressure.expect("pressure is filled")
            })
        };
        match r {
            Ok(p) => {
                if outputs.contains(&Output::Pressure) {
                    record.pressure = Some(p);
                }
                if outputs.contains(&Output::A4f) {
                    record.a4f = Some(gap.powi(4) * p.value);
                }
            }
            Err(e) => note_error(&mut record, &e),
        }
    }
    if outputs.contains(&Output::FreeEnergy) {
        let r = if zero_t {
            lifshitz::free_energy_t0(model, gap, tolerances.quad_rel_tol)
        } else {
            lifshitz::free_energy(&query).map(|r| {
                truncated |= r.truncated;
                r.free_energy.expect("free energy is filled")
            })
        };
        match r {
            Ok(f) => record.free_energy = Some(f),
            Err(e) => note_error(&mut record, &e),
        }
    }
    if outputs.contains(&Output::Entropy) {
        let spec = DerivativeSpec {
            variable: Variable::Temperature,
            ..*derivative
        };
        match entropy(&query, &spec) {
            Ok(s) => record.entropy = Some(s),
            Err(e) => note_error(&mut record, &e),
        }
    }
    if truncated {
        record.numerical_failure = true;
        record
            .error
            .get_or_insert_with(|| format!("Matsubara sum reached the {} term cap", lifshitz::MAX_TERMS));
    }
    record
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepSummary {
    pub rows: usize,
    pub failures: usize,
}

/// Evaluates every grid point (in parallel on the current rayon pool) and
/// writes the header plus one row per point in axis order.
pub fn run_sweep<W: Write + ?Sized>(spec: &SweepSpec, sink: &mut W) -> Result<SweepSummary> {
    spec.validate()?;
    let records: Vec<PointRecord> = spec
        .grid()
        .par_iter()
        .map(|&x| {
            let (gap, temperature) = spec.point(x);
            evaluate_point(&spec.model, gap, temperature, spec.policy, &spec.outputs, spec.tolerances, &spec.derivative)
        })
        .collect();
    writeln!(sink, "{CSV_HEADER}")?;
    let mut failures = 0;
    for r in &records {
        writeln!(sink, "{}", r.to_csv_row())?;
        failures += usize::from(r.failed());
    }
    sink.flush()?;
    Ok(SweepSummary { rows: records.len(), failures })
}

/// Parameters from which a [`DispersionModel`] is built, mirroring the CLI
/// flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelArgs {
    /// `ideal`, `mim`, `plasma`, `drude`, `vacuum` or `table:<path>`.
    pub name: String,
    pub wp_ev: Option<f64>,
    pub nu_ev: Option<f64>,
    pub wp_rad: Option<f64>,
    pub nu_rad: Option<f64>,
    /// CSV file in the `T_K,nu_rad_s` format.
    pub nu_table: Option<String>,
    pub high_frequency_tail: bool,
}

impl ModelArgs {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    fn plasma_frequency(&self) -> Result<Option<f64>> {
        match (self.wp_ev, self.wp_rad) {
            (Some(_), Some(_)) => Err(Error::Invalid("give the plasma frequency in eV or rad/s, not both".into())),
            (Some(ev), None) => Ok(Some(ev_to_angular_frequency(ev)?)),
            (None, rad) => Ok(rad),
        }
    }

    fn dissipation(&self) -> Result<Option<NuSchedule>> {
        let given = [self.nu_ev.is_some(), self.nu_rad.is_some(), self.nu_table.is_some()];
        if given.iter().filter(|g| **g).count() > 1 {
            return Err(Error::Invalid("give the dissipation once: --nu-ev, --nu-rad or --nu-table".into()));
        }
        if let Some(ev) = self.nu_ev {
            return Ok(Some(NuSchedule::constant(ev_to_angular_frequency(ev)?)?));
        }
        if let Some(rad) = self.nu_rad {
            return Ok(Some(NuSchedule::constant(rad)?));
        }
        if let Some(path) = &self.nu_table {
            return Ok(Some(load_nu_schedule(BufReader::new(File::open(path)?))?));
        }
        Ok(None)
    }

    /// Drude parameters, defaulting to gold for anything not given.
    fn drude(&self) -> Result<DrudeParams> {
        let wp = match self.plasma_frequency()? {
            Some(w) => w,
            None => ev_to_angular_frequency(GOLD_PLASMA_EV)?,
        };
        let nu = match self.dissipation()? {
            Some(n) => n,
            None => NuSchedule::constant(ev_to_angular_frequency(GOLD_DISSIPATION_EV)?)?,
        };
        DrudeParams::new(wp, nu)
    }

    pub fn build(&self) -> Result<DispersionModel> {
        let name = self.name.trim();
        if let Some(path) = name.strip_prefix("table:") {
            let mut table = load_permittivity_table(BufReader::new(File::open(Path::new(path))?))?.with_high_frequency_tail(self.high_frequency_tail);
            if self.plasma_frequency()?.is_some() || self.dissipation()?.is_some() {
                table = table.with_drude_tail(self.drude()?);
            }
            return Ok(DispersionModel::Tabulated(Arc::new(table)));
        }
        match name {
            "ideal" => Ok(DispersionModel::IdealMetal),
            "mim" => Ok(DispersionModel::ModifiedIdealMetal),
            "vacuum" => Ok(DispersionModel::Vacuum),
            "drude" => Ok(DispersionModel::Drude(self.drude()?)),
            "plasma" => {
                if self.dissipation()?.is_some() {
                    return Err(Error::Invalid("the plasma model has no dissipation parameter".into()));
                }
                let wp = match self.plasma_frequency()? {
                    Some(w) => w,
                    None => ev_to_angular_frequency(GOLD_PLASMA_EV)?,
                };
                DispersionModel::plasma(wp)
            }
            other => Err(Error::Invalid(format!(
                "unknown model `{other}` (expected ideal, mim, plasma, drude, vacuum or table:<path>)"
            ))),
        }
    }
}

/// Parses a flat `key = value` config file. `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Invalid(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(Error::Invalid(format!("config line {}: empty key", i + 1)));
        }
        entries.push((key.to_string(), value.trim().to_string()));
    }
    Ok(entries)
}

/// Turns config entries into long-flag arguments. `true` becomes a bare
/// flag and `false` drops the entry.
pub fn config_to_args(entries: &[(String, String)]) -> Vec<String> {
    let mut args = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => args.push(format!("--{k}")),
            "false" => {}
            _ => {
                args.push(format!("--{k}"));
                args.push(v.clone());
            }
        }
    }
    args
}
