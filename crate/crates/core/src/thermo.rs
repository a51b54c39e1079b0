//! Entropy by Richardson-extrapolated differentiation of the free energy,
//! plus the audit checks tying the numerical engine to the thermodynamic
//! relations f = −∂F/∂a and S = −∂F/∂T.

use std::f64::consts::PI;

use serde::Serialize;

use crate::asymptotics::{classical_limit_pressure, im_entropy, im_free_energy, mim_entropy, mim_entropy_defect, mim_free_energy, ModePolicy};
use crate::constants::{K_B, ZETA3};
use crate::dispersion::{te_zero_mode_weight, DispersionModel, Extended};
use crate::error::{Error, Result};
use crate::lifshitz::{self, Estimate, LifshitzQuery, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variable {
    Gap,
    Temperature,
}

/// Central differences at steps h, h/2, …, h/2^orders, combined by
/// Richardson extrapolation in h².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeSpec {
    pub variable: Variable,
    pub relative_step: f64,
    pub orders: usize,
}

impl DerivativeSpec {
    pub fn new(variable: Variable, relative_step: f64, orders: usize) -> Result<Self> {
        if !(1e-6..=1e-2).contains(&relative_step) {
            return Err(Error::Domain(format!("relative_step must lie in [1e-6, 1e-2], got {relative_step}")));
        }
        if orders < 1 {
            return Err(Error::Domain("at least one Richardson level is required".into()));
        }
        Ok(Self {
            variable,
            relative_step,
            orders,
        })
    }

    pub fn default_for(variable: Variable) -> Self {
        Self {
            variable,
            relative_step: 1e-3,
            orders: 2,
        }
    }
}

/// Derivative of `f` at `x`. `f` returns a value with an absolute error
/// estimate; those errors are propagated through the difference quotients.
///
/// The reported error is the last Richardson correction plus the
/// propagated function error at the smallest step.
pub fn richardson_derivative<F>(f: F, x: f64, spec: &DerivativeSpec) -> Result<Estimate>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let h0 = spec.relative_step * x.abs();
    if h0 == 0.0 || x + h0 == x {
        return Err(Error::Domain(format!("step underflows the scale of x = {x}")));
    }
    let levels = spec.orders + 1;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    let mut noise = 0.0;
    for i in 0..levels {
        let h = h0 / f64::from(1u32 << i);
        let (fp, ep) = f(x + h)?;
        let (fm, em) = f(x - h)?;
        let mut row = vec![(fp - fm) / (2.0 * h)];
        noise = (ep + em) / (2.0 * h);
        for k in 1..=i {
            let factor = 4f64.powi(k as i32);
            let prev = &table[i - 1];
            let v = row[k - 1] + (row[k - 1] - prev[k - 1]) / (factor - 1.0);
            row.push(v);
        }
        table.push(row);
    }
    let last = &table[levels - 1];
    let best = last[levels - 1];
    let residual = (best - last[levels - 2]).abs();
    Ok(Estimate {
        value: best,
        quad_error: residual + noise,
        truncation_error: 0.0,
    })
}

fn free_energy_at(query: &LifshitzQuery, temperature: f64) -> Result<(f64, f64)> {
    let q = query.at_temperature(temperature)?;
    let f = lifshitz::free_energy(&q)?.free_energy.expect("free energy is filled");
    Ok((f.value, f.error()))
}

fn free_energy_at_gap(query: &LifshitzQuery, gap: f64) -> Result<(f64, f64)> {
    let q = query.at_gap(gap)?;
    let f = lifshitz::free_energy(&q)?.free_energy.expect("free energy is filled");
    Ok((f.value, f.error()))
}

/// S = −∂F/∂T (J/(K·m²)). With a temperature-dependent ν(T) the derivative
/// includes the variation of the dissipation.
pub fn entropy(query: &LifshitzQuery, spec: &DerivativeSpec) -> Result<Estimate> {
    let t = query.temperature;
    let h = spec.relative_step * t;
    if !(t > 0.0) || t - h <= 0.0 {
        return Err(Error::Domain(format!("entropy needs T - h > 0, got T = {t}, h = {h}")));
    }
    let d = richardson_derivative(|x| free_energy_at(query, x), t, spec)?;
    Ok(Estimate { value: -d.value, ..d })
}

/// −∂F/∂a by differentiation, for comparison with the direct sum.
pub fn pressure_from_free_energy(query: &LifshitzQuery, spec: &DerivativeSpec) -> Result<Estimate> {
    let d = richardson_derivative(|g| free_energy_at_gap(query, g), query.gap, spec)?;
    Ok(Estimate { value: -d.value, ..d })
}

/// Polynomial (Neville) extrapolation of samples `(x, y)` to x = 0.
/// Returns the value and the change contributed by the last point.
pub fn extrapolate_to_zero(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    if samples.len() < 2 {
        return Err(Error::Domain("extrapolation needs at least two samples".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mut p: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let n = p.len();
    let mut previous = p[n - 1];
    for k in 1..n {
        previous = p[n - 1];
        for i in (k..n).rev() {
            p[i] = (xs[i] * p[i - 1] - xs[i - k] * p[i]) / (xs[i] - xs[i - k]);
        }
    }
    Ok((p[n - 1], (p[n - 1] - previous).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub check: String,
    pub inputs: String,
    pub computed: f64,
    pub reference: f64,
    /// |computed − reference|, or relative where the check says so.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub error_estimate: f64,
    pub status: CheckStatus,
    pub note: String,
}

impl AuditEntry {
    fn compare(check: &str, inputs: String, computed: f64, reference: f64, tolerance: f64, error_estimate: f64) -> Self {
        let discrepancy = (computed - reference).abs();
        Self {
            check: check.into(),
            inputs,
            computed,
            reference,
            discrepancy,
            tolerance,
            error_estimate,
            status: if discrepancy <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail },
            note: String::new(),
        }
    }

    fn relative(check: &str, inputs: String, computed: f64, reference: f64, rel_tol: f64, error_estimate: f64) -> Self {
        let discrepancy = ((computed - reference) / reference).abs();
        Self {
            check: check.into(),
            inputs,
            computed,
            reference,
            discrepancy,
            tolerance: rel_tol,
            error_estimate,
            status: if discrepancy <= rel_tol { CheckStatus::Pass } else { CheckStatus::Fail },
            note: "relative".into(),
        }
    }

    fn flag(check: &str, inputs: String, ok: bool, note: String) -> Self {
        Self {
            check: check.into(),
            inputs,
            computed: f64::from(u8::from(ok)),
            reference: 1.0,
            discrepancy: f64::from(u8::from(!ok)),
            tolerance: 0.0,
            error_estimate: 0.0,
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            note,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = if self.note.is_empty() { note } else { format!("{}; {note}", self.note) };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    /// True when no entry failed. Not-applicable entries do not fail.
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditEntry> {
        self.entries.iter().filter(|e| e.status == CheckStatus::Fail)
    }
}

fn point_label(model: &DispersionModel, gap: f64, temperature: f64) -> String {
    format!("model={} a={gap:e} m T={temperature} K", model.name())
}

/// Checks −∂F/∂a = f on every grid point within max(1e-4 relative, the
/// summed error estimates).
pub fn audit_pressure_free_energy(model: &DispersionModel, grid: &[(f64, f64)], tolerances: Tolerances) -> Result<AuditReport> {
    let mut report = AuditReport::new("pressure-free-energy");
    let spec = DerivativeSpec::default_for(Variable::Gap);
    for &(gap, temperature) in grid {
        let query = LifshitzQuery::new(gap, temperature, model.clone())?.with_tolerances(tolerances);
        let direct = lifshitz::pressure(&query)?.pressure.expect("pressure is filled");
        let derived = pressure_from_free_energy(&query, &spec)?;
        let tol = (1e-4 * direct.value.abs()).max(direct.error() + derived.error());
        report.entries.push(AuditEntry::compare(
            "-dF/da = f",
            point_label(model, gap, temperature),
            derived.value,
            direct.value,
            tol,
            direct.error() + derived.error(),
        ));
    }
    Ok(report)
}

/// Whether the model removes the zero-frequency TE mode.
fn drops_te_zero_mode(model: &DispersionModel, temperature: f64) -> bool {
    te_zero_mode_weight(model, temperature) == Extended::Finite(0.0)
}

/// Shape of g(a) = a⁴|f(a)| at fixed temperature over a gap grid covering
/// [1, 7] μm.
///
/// With the TE zero mode removed (Drude, MIM) g must dip: decreasing on
/// [1, 3] μm, increasing on [4.5, 7] μm, minimum inside (2.5, 4.5) μm, and
/// within 5% of the classical line a·k_BTζ(3)/(8π) for a > 4 μm. With a
/// reflecting TE zero mode (ideal metal) no dip is expected and the audit
/// checks that g increases monotonically instead.
pub fn audit_fig3_shape(model: &DispersionModel, temperature: f64, gaps: &[f64], tolerances: Tolerances) -> Result<AuditReport> {
    if gaps.len() < 30 {
        return Err(Error::Domain(format!("gap grid needs at least 30 points, got {}", gaps.len())));
    }
    if gaps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("gap grid must be strictly increasing".into()));
    }
    if gaps[0] > 1e-6 * (1.0 + 1e-9) || gaps[gaps.len() - 1] < 7e-6 * (1.0 - 1e-9) {
        return Err(Error::Domain("gap grid must cover [1, 7] um".into()));
    }
    let g = a4f_curve(model, temperature, gaps, tolerances)?;
    Ok(fig3_report(model, temperature, gaps, &g))
}

/// a⁴|f(a)| on a grid, evaluated in parallel and returned in grid order.
pub fn a4f_curve(model: &DispersionModel, temperature: f64, gaps: &[f64], tolerances: Tolerances) -> Result<Vec<f64>> {
    use rayon::prelude::*;
    gaps.par_iter()
        .map(|&a| {
            let q = LifshitzQuery::new(a, temperature, model.clone())?.with_tolerances(tolerances);
            let p = lifshitz::pressure(&q)?.pressure.expect("pressure is filled");
            Ok(a.powi(4) * p.value.abs())
        })
        .collect()
}

/// Builds the shape report from precomputed a⁴|f| values.
pub fn fig3_report(model: &DispersionModel, temperature: f64, gaps: &[f64], g: &[f64]) -> AuditReport {
    let mut report = AuditReport::new("fig3-shape");
    let label = format!("model={} T={temperature} K points={}", model.name(), gaps.len());
    let um = 1e-6;
    let monotone = |lo: f64, hi: f64, decreasing: bool| {
        let pts: Vec<(f64, f64)> = gaps
            .iter()
            .zip(g)
            .filter(|(a, _)| **a >= lo - 1e-12 && **a <= hi + 1e-12)
            .map(|(a, v)| (*a, *v))
            .collect();
        let bad: Vec<f64> = pts
            .windows(2)
            .filter(|w| if decreasing { w[1].1 >= w[0].1 } else { w[1].1 <= w[0].1 })
            .map(|w| w[1].0)
            .collect();
        (pts.len() >= 2 && bad.is_empty(), bad)
    };
    let (imin, _) = g
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let a_min = gaps[imin];

    if drops_te_zero_mode(model, temperature) {
        let (ok, bad) = monotone(um, 3.0 * um, true);
        report
            .entries
            .push(AuditEntry::flag("decreasing on [1, 3] um", label.clone(), ok, format!("violations at {bad:?}")));
        let (ok, bad) = monotone(4.5 * um, 7.0 * um, false);
        report.entries.push(AuditEntry::flag(
            "increasing on [4.5, 7] um",
            label.clone(),
            ok,
            format!("violations at {bad:?}"),
        ));
        let inside = a_min > 2.5 * um && a_min < 4.5 * um;
        let mut e = AuditEntry::flag("minimum in (2.5, 4.5) um", label.clone(), inside, String::new());
        e.computed = a_min;
        e.reference = 3.5 * um;
        e.discrepancy = (a_min - 3.5 * um).abs();
        e.tolerance = 1.0 * um;
        report.entries.push(e);

        let slope = K_B * temperature * ZETA3 / (8.0 * PI);
        let worst = gaps
            .iter()
            .zip(g)
            .filter(|(a, _)| **a > 4.0 * um)
            .map(|(a, v)| (*a, (v / (slope * a) - 1.0).abs()))
            .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mut e = AuditEntry::flag(
            "within 5% of classical line for a > 4 um",
            label,
            worst.1 <= 0.05,
            format!("worst at a = {:e} m", worst.0),
        );
        e.computed = worst.1;
        e.reference = 0.0;
        e.discrepancy = worst.1;
        e.tolerance = 0.05;
        report.entries.push(e);
    } else {
        let (ok, bad) = monotone(gaps[0], gaps[gaps.len() - 1], false);
        report.entries.push(
            AuditEntry::flag("monotone increasing (no dip)", label, ok, format!("violations at {bad:?}"))
                .with_note("expected-different: the zero-frequency TE mode reflects, so no dip"),
        );
    }
    report
}

/// High-temperature check: the full sum equals its m = 0 term to 1e-3, and
/// that term matches the closed classical limit.
pub fn audit_classical_limit(model: &DispersionModel, gap: f64, temperature: f64, tolerances: Tolerances) -> Result<AuditReport> {
    let mut report = AuditReport::new("classical-limit");
    let query = LifshitzQuery::new(gap, temperature, model.clone())?.with_tolerances(tolerances);
    let label = point_label(model, gap, temperature);
    let param = query.classical_parameter();
    if param < 5.0 {
        report.entries.push(AuditEntry {
            check: "classical regime".into(),
            inputs: label,
            computed: param,
            reference: 5.0,
            discrepancy: 0.0,
            tolerance: 0.0,
            error_estimate: 0.0,
            status: CheckStatus::NotApplicable,
            note: format!("2 pi k_B T a/(hbar c) = {param:.3} < 5"),
        });
        return Ok(report);
    }
    let full = lifshitz::pressure(&query)?.pressure.expect("pressure is filled");
    let zero = lifshitz::term_pressure(model, gap, temperature, 0, query.zero_mode_policy, tolerances.quad_rel_tol)?;
    report.entries.push(AuditEntry::relative(
        "sum / m=0 term",
        label.clone(),
        full.value,
        zero.value,
        1e-3,
        full.error() + zero.error(),
    ));
    let policy = match te_zero_mode_weight(model, temperature) {
        Extended::Infinite => Some(ModePolicy::IM),
        Extended::Finite(0.0) => Some(ModePolicy::MIM),
        Extended::Finite(_) => None,
    };
    match policy {
        Some(p) => {
            let closed = classical_limit_pressure(gap, temperature, p);
            let tol = (10.0 * tolerances.quad_rel_tol).max(zero.error() / closed.abs());
            report
                .entries
                .push(AuditEntry::relative("m=0 term vs closed form", label, zero.value, closed, tol, zero.error()).with_note(format!("{p:?}")));
        }
        None => report.entries.push(AuditEntry {
            check: "m=0 term vs closed form".into(),
            inputs: label,
            computed: zero.value,
            reference: f64::NAN,
            discrepancy: 0.0,
            tolerance: 0.0,
            error_estimate: zero.error(),
            status: CheckStatus::NotApplicable,
            note: "partial TE zero-mode reflection has no closed form here".into(),
        }),
    }
    Ok(report)
}

/// Entropy samples S(T) with their error estimates, evaluated in parallel.
pub fn entropy_series(query: &LifshitzQuery, temperatures: &[f64], spec: &DerivativeSpec) -> Result<Vec<Estimate>> {
    use rayon::prelude::*;
    temperatures.par_iter().map(|&t| entropy(&query.at_temperature(t)?, spec)).collect()
}

/// Temperatures used for the low-temperature entropy studies.
pub const LOW_T_SERIES: [f64; 4] = [20.0, 10.0, 5.0, 2.0];

/// Tolerances for the low-temperature entropy audits, where F is
/// differentiated at small relative changes.
pub fn tight_tolerances() -> Tolerances {
    Tolerances {
        quad_rel_tol: 1e-11,
        sum_rel_tol: 1e-12,
    }
}

/// Step for the low-temperature entropy derivatives.
pub fn low_t_derivative() -> DerivativeSpec {
    DerivativeSpec {
        variable: Variable::Temperature,
        relative_step: 1e-2,
        orders: 2,
    }
}

/// Extrapolated S(T → 0) for the MIM model vs −k_Bζ(3)/(16πa²).
pub fn audit_mim_entropy_defect(gap: f64, temperatures: &[f64]) -> Result<AuditReport> {
    let mut report = AuditReport::new("mim-entropy-defect");
    let query = LifshitzQuery::new(gap, temperatures[0], DispersionModel::ModifiedIdealMetal)?.with_tolerances(tight_tolerances());
    let s = entropy_series(&query, temperatures, &low_t_derivative())?;
    let samples: Vec<(f64, f64)> = temperatures.iter().zip(&s).map(|(t, e)| (*t, e.value)).collect();
    let (s0, change) = extrapolate_to_zero(&samples)?;
    let defect = mim_entropy_defect(gap);
    report.entries.push(
        AuditEntry::relative(
            "S(T->0) = -k_B zeta(3)/(16 pi a^2)",
            format!("model=mim a={gap:e} m T={temperatures:?} K"),
            s0,
            defect,
            1e-3,
            change,
        )
        .with_note("polynomial extrapolation in T"),
    );
    Ok(report)
}

/// Low-temperature entropy of a dissipative model: |S| must shrink as T
/// decreases, and the extrapolated S(0) must lie below 1% of the MIM defect.
pub fn audit_drude_nernst(model: &DispersionModel, gap: f64, temperatures: &[f64]) -> Result<AuditReport> {
    let mut report = AuditReport::new("drude-nernst");
    let query = LifshitzQuery::new(gap, temperatures[0], model.clone())?.with_tolerances(tight_tolerances());
    let s = entropy_series(&query, temperatures, &low_t_derivative())?;
    let label = format!("model={} a={gap:e} m T={temperatures:?} K", model.name());
    let defect = mim_entropy_defect(gap).abs();
    let ratios: Vec<f64> = s.iter().map(|e| e.value.abs() / defect).collect();
    let monotone = s.windows(2).all(|w| w[1].value.abs() < w[0].value.abs());
    report.entries.push(AuditEntry::flag(
        "|S| decreases as T decreases",
        label.clone(),
        monotone,
        format!("|S|/|S_MIM(0)| = {ratios:?}"),
    ));
    let samples: Vec<(f64, f64)> = temperatures.iter().zip(&s).map(|(t, e)| (*t, e.value)).collect();
    let (s0, change) = extrapolate_to_zero(&samples)?;
    let mut e = AuditEntry::compare("|S(T->0)| < 1% of |S_MIM(0)|", label, s0.abs(), 0.0, 0.01 * defect, change);
    e.note = format!("extrapolated S(0)/|S_MIM(0)| = {:.4}", s0 / defect);
    report.entries.push(e);
    Ok(report)
}

/// Differentiates the closed-form free energies in T and compares with the
/// closed-form entropies at 1e-6 relative.
pub fn audit_entropy_closed_forms(points: &[(f64, f64)]) -> Result<AuditReport> {
    let mut report = AuditReport::new("entropy-closed-forms");
    let spec = DerivativeSpec::default_for(Variable::Temperature);
    for &(gap, t) in points {
        let label = format!("a={gap:e} m T={t} K");
        let s = richardson_derivative(|x| Ok((im_free_energy(gap, x), 0.0)), t, &spec)?;
        report
            .entries
            .push(AuditEntry::relative("IM: -dF/dT", label.clone(), -s.value, im_entropy(gap, t), 1e-6, s.error()));
        let s = richardson_derivative(|x| Ok((mim_free_energy(gap, x), 0.0)), t, &spec)?;
        report
            .entries
            .push(AuditEntry::relative("MIM: -dF/dT", label, -s.value, mim_entropy(gap, t), 1e-6, s.error()));
    }
    Ok(report)
}

/// Existence of a temperature interval with negative entropy on a grid.
pub fn audit_negative_entropy_window(model: &DispersionModel, gap: f64, temperatures: &[f64]) -> Result<AuditReport> {
    let mut report = AuditReport::new("negative-entropy-window");
    let query = LifshitzQuery::new(gap, temperatures[0], model.clone())?;
    let s = entropy_series(&query, temperatures, &DerivativeSpec::default_for(Variable::Temperature))?;
    let negative: Vec<f64> = temperatures.iter().zip(&s).filter(|(_, e)| e.value < 0.0).map(|(t, _)| *t).collect();
    let positive = s.iter().any(|e| e.value > 0.0);
    report.entries.push(AuditEntry::flag(
        "S < 0 on part of the grid and changes sign",
        format!(
            "model={} a={gap:e} m T in [{}, {}] K",
            model.name(),
            temperatures[0],
            temperatures[temperatures.len() - 1]
        ),
        !negative.is_empty() && positive,
        format!("negative at T = {negative:?}"),
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_spec_validation() {
        assert!(DerivativeSpec::new(Variable::Gap, 1e-7, 2).is_err());
        assert!(DerivativeSpec::new(Variable::Gap, 1e-1, 2).is_err());
        assert!(DerivativeSpec::new(Variable::Gap, 1e-3, 0).is_err());
        assert!(DerivativeSpec::new(Variable::Gap, 1e-3, 3).is_ok());
    }

    #[test]
    fn richardson_on_smooth_function() {
        let spec = DerivativeSpec::default_for(Variable::Temperature);
        let d = richardson_derivative(|x: f64| Ok((x.sin() * x.exp(), 0.0)), 1.3, &spec).unwrap();
        let exact = 1.3f64.exp() * (1.3f64.sin() + 1.3f64.cos());
        assert!((d.value - exact).abs() < 1e-11 * exact.abs());
    }

    #[test]
    fn richardson_residual_shrinks_with_step() {
        // halving the step cuts the residual by at least 4x
        let f = |x: f64| Ok(((2.0 * x).cos() / (1.0 + x * x), 0.0));
        let mut last = f64::INFINITY;
        for step in [8e-3, 4e-3, 2e-3] {
            let spec = DerivativeSpec::new(Variable::Gap, step, 1).unwrap();
            let r = richardson_derivative(f, 0.7, &spec).unwrap().quad_error;
            assert!(r * 4.0 <= last, "{r} vs {last}");
            last = r;
        }
    }

    #[test]
    fn entropy_rejects_t_near_zero() {
        let q = LifshitzQuery::new(1e-6, 0.0, DispersionModel::IdealMetal).unwrap();
        assert!(matches!(
            entropy(&q, &DerivativeSpec::default_for(Variable::Temperature)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn neville_extrapolation() {
        let s: Vec<(f64, f64)> = [4.0, 2.0, 1.0].iter().map(|&x| (x, 3.0 - 2.0 * x + 0.5 * x * x)).collect();
        let (v, _) = extrapolate_to_zero(&s).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!(extrapolate_to_zero(&s[..1]).is_err());
    }

    #[test]
    fn fig3_precondition() {
        let err = audit_fig3_shape(&DispersionModel::gold(), 300.0, &[3e-6], Tolerances::default());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn classical_not_applicable_at_small_gap() {
        let r = audit_classical_limit(&DispersionModel::gold(), 1e-7, 300.0, Tolerances::default()).unwrap();
        assert_eq!(r.entries[0].status, CheckStatus::NotApplicable);
        assert!(r.passed());
    }

    #[test]
    fn vacuum_consistency_is_trivial() {
        let r = audit_pressure_free_energy(&DispersionModel::Vacuum, &[(1e-6, 300.0)], Tolerances::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].computed, 0.0);
    }

    #[test]
    fn closed_form_entropy_audit_passes() {
        let r = audit_entropy_closed_forms(&[(1e-6, 10.0), (5e-7, 50.0)]).unwrap();
        assert!(r.passed(), "{:#?}", r.entries);
    }

    #[test]
    fn failing_entry_carries_discrepancy_and_tolerance() {
        let e = AuditEntry::relative("x", String::new(), 1.1, 1.0, 1e-3, 0.0);
        assert_eq!(e.status, CheckStatus::Fail);
        assert!(e.discrepancy > e.tolerance);
    }
}
