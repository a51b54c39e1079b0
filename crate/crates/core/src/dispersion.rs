//! Dielectric response ε(iζ) on the imaginary frequency axis.
//!
//! Models: vacuum, ideal metal (IM), modified ideal metal (MIM), plasma,
//! Drude and tabulated data with a Drude low-frequency tail. "Infinite ε"
//! is an explicit variant, never a large float, because the zero-frequency
//! TE mode depends on the order in which ε → ∞ and ζ → 0 are taken.

use std::io::Read;
use std::sync::Arc;

use serde::Serialize;

use crate::constants::ev_to_angular_frequency;
use crate::error::{Error, Result};

/// Gold: ω_p = 9.03 eV, ν = 0.0345 eV.
pub const GOLD_PLASMA_EV: f64 = 9.03;
pub const GOLD_DISSIPATION_EV: f64 = 0.0345;

/// A non-negative quantity that may be infinite in the ideal-metal sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

/// Dissipation parameter ν, optionally temperature dependent.
#[derive(Debug, Clone, PartialEq)]
pub enum NuSchedule {
    Constant(f64),
    /// `(T [K], ν [rad/s])`, strictly increasing in T. Linear interpolation,
    /// constant beyond the endpoints.
    Table(Vec<(f64, f64)>),
}

impl NuSchedule {
    pub fn constant(nu: f64) -> Result<Self> {
        if !(nu >= 0.0) || !nu.is_finite() {
            return Err(Error::Domain(format!("dissipation must be finite and >= 0, got {nu}")));
        }
        Ok(NuSchedule::Constant(nu))
    }

    pub fn table(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Table {
                row: 0,
                reason: "empty dissipation table".into(),
            });
        }
        for (i, &(t, nu)) in rows.iter().enumerate() {
            if !t.is_finite() || !(nu >= 0.0) || !nu.is_finite() {
                return Err(Error::Table {
                    row: i + 1,
                    reason: format!("bad entry T={t}, nu={nu}"),
                });
            }
            if i > 0 && t <= rows[i - 1].0 {
                return Err(Error::Table {
                    row: i + 1,
                    reason: "temperatures must be strictly increasing".into(),
                });
            }
        }
        Ok(NuSchedule::Table(rows))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, NuSchedule::Constant(_))
    }

    /// ν at temperature `t`.
    pub fn at(&self, t: f64) -> f64 {
        match self {
            NuSchedule::Constant(nu) => *nu,
            NuSchedule::Table(rows) => {
                let first = rows[0];
                let last = rows[rows.len() - 1];
                if t <= first.0 {
                    return first.1;
                }
                if t >= last.0 {
                    return last.1;
                }
                let i = rows.partition_point(|r| r.0 <= t);
                let (t0, n0) = rows[i - 1];
                let (t1, n1) = rows[i];
                n0 + (n1 - n0) * (t - t0) / (t1 - t0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrudeParams {
    pub omega_p: f64,
    pub nu: NuSchedule,
}

impl DrudeParams {
    pub fn new(omega_p: f64, nu: NuSchedule) -> Result<Self> {
        if !(omega_p > 0.0) || !omega_p.is_finite() {
            return Err(Error::Domain(format!("plasma frequency must be > 0, got {omega_p}")));
        }
        Ok(Self { omega_p, nu })
    }

    pub fn from_ev(omega_p_ev: f64, nu_ev: f64) -> Result<Self> {
        Self::new(ev_to_angular_frequency(omega_p_ev)?, NuSchedule::constant(ev_to_angular_frequency(nu_ev)?)?)
    }

    pub fn gold() -> Self {
        Self::from_ev(GOLD_PLASMA_EV, GOLD_DISSIPATION_EV).expect("gold parameters are valid")
    }

    /// True when ν(T) = 0, i.e. the parameters describe the plasma model.
    pub fn is_plasma_limit(&self, t: f64) -> bool {
        self.nu.at(t) == 0.0
    }

    pub fn epsilon(&self, zeta: f64, t: f64) -> f64 {
        1.0 + self.omega_p * self.omega_p / (zeta * (zeta + self.nu.at(t)))
    }

    /// lim_{ζ→0} ζ²(ε − 1).
    pub fn te_zero_weight(&self, t: f64) -> f64 {
        if self.is_plasma_limit(t) {
            self.omega_p * self.omega_p
        } else {
            0.0
        }
    }
}

/// Tabulated ε(iζ) with interpolation linear in (ln ζ, ln(ε − 1)).
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    zeta: Vec<f64>,
    epsilon: Vec<f64>,
    /// Used below the first tabulated frequency.
    pub drude_tail: Option<DrudeParams>,
    /// When set, ε = 1 beyond ten times the last tabulated frequency.
    /// Otherwise such queries are an extrapolation error.
    pub high_frequency_tail: bool,
}

/// Ratio above the last tabulated frequency where slope continuation stops.
const HIGH_FREQUENCY_SWITCH: f64 = 10.0;

impl PermittivityTable {
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Table {
                row: 0,
                reason: "empty permittivity table".into(),
            });
        }
        for (i, &(z, e)) in rows.iter().enumerate() {
            let row = i + 1;
            if !(z > 0.0) || !z.is_finite() {
                return Err(Error::Table {
                    row,
                    reason: format!("zeta must be > 0, got {z}"),
                });
            }
            if !(e >= 1.0) || !e.is_finite() {
                return Err(Error::Table {
                    row,
                    reason: format!("epsilon must be >= 1, got {e}"),
                });
            }
            if i > 0 {
                let (zp, ep) = rows[i - 1];
                if z <= zp {
                    return Err(Error::Table {
                        row,
                        reason: "zeta must be strictly increasing".into(),
                    });
                }
                if e > ep {
                    return Err(Error::Table {
                        row,
                        reason: format!("epsilon increases with zeta ({ep} -> {e})"),
                    });
                }
            }
        }
        let (zeta, epsilon) = rows.into_iter().unzip();
        Ok(Self {
            zeta,
            epsilon,
            drude_tail: None,
            high_frequency_tail: false,
        })
    }

    pub fn with_drude_tail(mut self, tail: DrudeParams) -> Self {
        self.drude_tail = Some(tail);
        self
    }

    pub fn with_high_frequency_tail(mut self, enabled: bool) -> Self {
        self.high_frequency_tail = enabled;
        self
    }

    pub fn len(&self) -> usize {
        self.zeta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeta.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.zeta.iter().copied().zip(self.epsilon.iter().copied())
    }

    fn interpolate(&self, i: usize, zeta: f64) -> f64 {
        let (z0, z1) = (self.zeta[i], self.zeta[i + 1]);
        let (e0, e1) = (self.epsilon[i], self.epsilon[i + 1]);
        let w = (zeta / z0).ln() / (z1 / z0).ln();
        if e0 > 1.0 && e1 > 1.0 {
            let l0 = (e0 - 1.0).ln();
            let l1 = (e1 - 1.0).ln();
            1.0 + (l0 + w * (l1 - l0)).exp()
        } else {
            e0 + w * (e1 - e0)
        }
    }

    pub fn epsilon(&self, zeta: f64, t: f64) -> Result<f64> {
        let n = self.zeta.len();
        let first = self.zeta[0];
        let last = self.zeta[n - 1];
        if zeta < first {
            return match &self.drude_tail {
                Some(tail) => Ok(tail.epsilon(zeta, t)),
                None => Err(Error::Extrapolation(format!(
                    "zeta = {zeta:e} rad/s is below the table start {first:e} and no Drude tail is set"
                ))),
            };
        }
        if zeta <= last {
            let i = self.zeta.partition_point(|&z| z <= zeta);
            if i == n {
                return Ok(self.epsilon[n - 1]);
            }
            if self.zeta[i - 1] == zeta {
                return Ok(self.epsilon[i - 1]);
            }
            return Ok(self.interpolate(i - 1, zeta));
        }
        if zeta > HIGH_FREQUENCY_SWITCH * last {
            return if self.high_frequency_tail {
                Ok(1.0)
            } else {
                Err(Error::Extrapolation(format!(
                    "zeta = {zeta:e} rad/s is far above the table end {last:e} and the high-frequency tail is disabled"
                )))
            };
        }
        if n == 1 {
            return Ok(self.epsilon[0]);
        }
        Ok(self.interpolate(n - 2, zeta).max(1.0))
    }

    /// ε at the lowest frequency available, used for the static limit when
    /// no Drude tail is configured.
    fn static_epsilon(&self) -> f64 {
        self.epsilon[0]
    }
}

/// Reads the `zeta_rad_s,epsilon` CSV format. Lines starting with `#` are
/// comments.
pub fn load_permittivity_table<R: Read>(source: R) -> Result<PermittivityTable> {
    let rows = read_two_column_csv(source, ["zeta_rad_s", "epsilon"])?;
    PermittivityTable::new(rows)
}

/// Reads the `T_K,nu_rad_s` CSV format.
pub fn load_nu_schedule<R: Read>(source: R) -> Result<NuSchedule> {
    let rows = read_two_column_csv(source, ["T_K", "nu_rad_s"])?;
    NuSchedule::table(rows)
}

fn read_two_column_csv<R: Read>(source: R, header: [&str; 2]) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(source);
    let found = reader.headers()?.clone();
    if found.len() != 2 || found.get(0) != Some(header[0]) || found.get(1) != Some(header[1]) {
        return Err(Error::Table {
            row: 0,
            reason: format!(
                "expected header `{},{}`, found `{}`",
                header[0],
                header[1],
                found.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        if record.len() != 2 {
            return Err(Error::Table {
                row,
                reason: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Table {
                row,
                reason: format!("cannot parse `{s}`: {e}"),
            })
        };
        rows.push((parse(&record[0])?, parse(&record[1])?));
    }
    Ok(rows)
}

/// Material model for both plates.
#[derive(Debug, Clone, PartialEq)]
pub enum DispersionModel {
    /// ε = 1; no Casimir force at all.
    Vacuum,
    /// ε → ∞ before ζ → 0: A₀ = B₀ = 1.
    IdealMetal,
    /// ζ → 0 before ε → ∞: A₀ = 1, B₀ = 0.
    ModifiedIdealMetal,
    /// Drude with ν = 0.
    Plasma {
        omega_p: f64,
    },
    Drude(DrudeParams),
    Tabulated(Arc<PermittivityTable>),
}

impl DispersionModel {
    pub fn plasma(omega_p: f64) -> Result<Self> {
        DrudeParams::new(omega_p, NuSchedule::Constant(0.0))?;
        Ok(DispersionModel::Plasma { omega_p })
    }

    pub fn drude(params: DrudeParams) -> Self {
        DispersionModel::Drude(params)
    }

    pub fn gold() -> Self {
        DispersionModel::Drude(DrudeParams::gold())
    }

    pub fn name(&self) -> &'static str {
        match self {
            DispersionModel::Vacuum => "vacuum",
            DispersionModel::IdealMetal => "ideal",
            DispersionModel::ModifiedIdealMetal => "mim",
            DispersionModel::Plasma { .. } => "plasma",
            DispersionModel::Drude(_) => "drude",
            DispersionModel::Tabulated(_) => "table",
        }
    }

    /// Whether the response depends on temperature through ν(T).
    pub fn has_temperature_dependence(&self) -> bool {
        match self {
            DispersionModel::Drude(p) => !p.nu.is_constant(),
            DispersionModel::Tabulated(t) => t.drude_tail.as_ref().is_some_and(|p| !p.nu.is_constant()),
            _ => false,
        }
    }
}

/// ε(iζ) at temperature `t`.
pub fn permittivity(model: &DispersionModel, zeta: f64, t: f64) -> Result<Extended> {
    if !(zeta > 0.0) {
        return Err(Error::Domain(format!(
            "permittivity needs zeta > 0, got {zeta}; use the zero-mode limits at zeta = 0"
        )));
    }
    Ok(match model {
        DispersionModel::Vacuum => Extended::Finite(1.0),
        DispersionModel::IdealMetal | DispersionModel::ModifiedIdealMetal => Extended::Infinite,
        DispersionModel::Plasma { omega_p } => Extended::Finite(1.0 + (omega_p / zeta).powi(2)),
        DispersionModel::Drude(p) => Extended::Finite(p.epsilon(zeta, t)),
        DispersionModel::Tabulated(table) => Extended::Finite(table.epsilon(zeta, t)?),
    })
}

/// ω̄² = lim_{ζ→0} ζ²[ε(iζ) − 1]; zero means the zero-frequency TE mode
/// does not reflect, infinite means it reflects perfectly.
pub fn te_zero_mode_weight(model: &DispersionModel, t: f64) -> Extended {
    match model {
        DispersionModel::Vacuum | DispersionModel::ModifiedIdealMetal => Extended::Finite(0.0),
        DispersionModel::IdealMetal => Extended::Infinite,
        DispersionModel::Plasma { omega_p } => Extended::Finite(omega_p * omega_p),
        DispersionModel::Drude(p) => Extended::Finite(p.te_zero_weight(t)),
        DispersionModel::Tabulated(table) => Extended::Finite(table.drude_tail.as_ref().map_or(0.0, |p| p.te_zero_weight(t))),
    }
}

/// A₀ = ((ε₀ − 1)/(ε₀ + 1))² for a static permittivity ε₀.
pub fn tm_coefficient_from_static(eps0: Extended) -> f64 {
    match eps0 {
        Extended::Infinite => 1.0,
        Extended::Finite(e) => {
            let r = (e - 1.0) / (e + 1.0);
            r * r
        }
    }
}

/// Zero-frequency TM reflection A₀; 1 for every metal model.
pub fn tm_zero_mode_coefficient(model: &DispersionModel) -> f64 {
    match model {
        DispersionModel::Vacuum => 0.0,
        DispersionModel::IdealMetal | DispersionModel::ModifiedIdealMetal | DispersionModel::Plasma { .. } | DispersionModel::Drude(_) => 1.0,
        DispersionModel::Tabulated(table) => match table.drude_tail {
            Some(_) => 1.0,
            None => tm_coefficient_from_static(Extended::Finite(table.static_epsilon())),
        },
    }
}
