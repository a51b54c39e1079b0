//! Matsubara-summed Lifshitz pressure and free energy for two identical
//! half-spaces separated by a vacuum gap.
//!
//! Every Matsubara term is integrated in the dimensionless variable
//! t = 2qa, with t ≥ κ_m = 2ζ_m a/c (equivalently p = t/κ_m ≥ 1). With
//! y = e^{−t} the per-term integrands are
//!
//! ```text
//! pressure:     t² [A y/(1 − A y) + B y/(1 − B y)]      × −k_B T/(8π a³)
//! free energy:  t  [ln(1 − A y)   + ln(1 − B y)]        × +k_B T/(8π a²)
//! ```
//!
//! and the m = 0 term carries half weight. Zero-frequency reflection is set
//! by [`ZeroModePolicy`], never by evaluating ε at ζ = 0.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{C, HBAR, HBAR_C, K_B};
use crate::dispersion::{permittivity, te_zero_mode_weight, tm_zero_mode_coefficient, DispersionModel, Extended};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadConfig};

/// Integration window above κ_m; e^{-45} ≈ 2.9·10⁻²⁰ relative to the
/// integrand at the lower limit.
const T_WINDOW: f64 = 45.0;

/// Hard cap on the number of Matsubara terms.
pub const MAX_TERMS: usize = 1_000_000;

pub const DEFAULT_QUAD_REL_TOL: f64 = 1e-9;
pub const DEFAULT_SUM_REL_TOL: f64 = 1e-8;

/// How the m = 0 reflection coefficients are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ZeroModePolicy {
    /// A₀ and B₀ follow from the dispersion model's ζ → 0 limits.
    #[default]
    FromModel,
    /// A₀ = B₀ = 1.
    ForceIM,
    /// A₀ = 1, B₀ = 0.
    ForceMIM,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub quad_rel_tol: f64,
    pub sum_rel_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_rel_tol: DEFAULT_QUAD_REL_TOL,
            sum_rel_tol: DEFAULT_SUM_REL_TOL,
        }
    }
}

impl Tolerances {
    pub fn new(quad_rel_tol: f64, sum_rel_tol: f64) -> Result<Self> {
        for (name, v) in [("quad_rel_tol", quad_rel_tol), ("sum_rel_tol", sum_rel_tol)] {
            if !(v > 0.0 && v <= 1e-3) {
                return Err(Error::Domain(format!("{name} must lie in (0, 1e-3], got {v}")));
            }
        }
        Ok(Self { quad_rel_tol, sum_rel_tol })
    }
}

/// Full input of one finite-temperature evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LifshitzQuery {
    pub gap: f64,
    pub temperature: f64,
    pub model: DispersionModel,
    pub zero_mode_policy: ZeroModePolicy,
    pub tolerances: Tolerances,
}

impl LifshitzQuery {
    pub fn new(gap: f64, temperature: f64, model: DispersionModel) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::Domain(format!("gap must be > 0, got {gap}")));
        }
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::Domain(format!("temperature must be >= 0, got {temperature}")));
        }
        Ok(Self {
            gap,
            temperature,
            model,
            zero_mode_policy: ZeroModePolicy::FromModel,
            tolerances: Tolerances::default(),
        })
    }

    pub fn with_policy(mut self, policy: ZeroModePolicy) -> Self {
        self.zero_mode_policy = policy;
        self
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    /// Same query at another temperature.
    pub fn at_temperature(&self, temperature: f64) -> Result<Self> {
        let mut q = Self::new(self.gap, temperature, self.model.clone())?;
        q.zero_mode_policy = self.zero_mode_policy;
        q.tolerances = self.tolerances;
        Ok(q)
    }

    /// Same query at another gap.
    pub fn at_gap(&self, gap: f64) -> Result<Self> {
        let mut q = Self::new(gap, self.temperature, self.model.clone())?;
        q.zero_mode_policy = self.zero_mode_policy;
        q.tolerances = self.tolerances;
        Ok(q)
    }

    /// 2π k_B T a/(ħc); the sum is dominated by m = 0 once this exceeds ~5.
    pub fn classical_parameter(&self) -> f64 {
        2.0 * PI * K_B * self.temperature * self.gap / HBAR_C
    }
}

/// ε, p and s = √(ε − 1 + p²) at one Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionInput {
    pub epsilon: Extended,
    pub p: f64,
}

impl ReflectionInput {
    pub fn new(epsilon: Extended, p: f64) -> Result<Self> {
        if let Extended::Finite(e) = epsilon {
            if !(e >= 1.0) {
                return Err(Error::Domain(format!("epsilon must be >= 1, got {e}")));
            }
        }
        if !(p >= 1.0) {
            return Err(Error::Domain(format!("p must be >= 1, got {p}")));
        }
        Ok(Self { epsilon, p })
    }

    /// `None` for infinite ε.
    pub fn s(&self) -> Option<f64> {
        self.epsilon.finite().map(|e| (e - 1.0 + self.p * self.p).sqrt())
    }
}

/// (A, B): squared TM and TE reflection coefficients.
pub fn reflection_coefficients(r: &ReflectionInput) -> (f64, f64) {
    match r.epsilon {
        Extended::Infinite => (1.0, 1.0),
        Extended::Finite(e) => reflection_finite(e, r.p),
    }
}

#[inline]
fn reflection_finite(eps: f64, p: f64) -> (f64, f64) {
    let d = eps - 1.0;
    if d == 0.0 {
        return (0.0, 0.0);
    }
    let s = (d + p * p).sqrt();
    // numerators rewritten to avoid cancellation for ε close to 1
    let ep = eps * p;
    let tm = d * ((eps + 1.0) * p * p - 1.0) / ((ep + s) * (ep + s));
    let te = d / ((s + p) * (s + p));
    (tm * tm, te * te)
}

/// ζ_m = 2π m k_B T/ħ.
pub fn matsubara_frequency(m: usize, temperature: f64) -> f64 {
    2.0 * PI * m as f64 * K_B * temperature / HBAR
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Weight {
    Half,
    Full,
}

/// One weighted Matsubara contribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatsubaraTerm {
    pub m: usize,
    pub zeta_m: f64,
    pub pressure_contribution: f64,
    pub free_energy_contribution: f64,
    pub weight: Weight,
}

/// A value with its quadrature and truncation error estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub quad_error: f64,
    pub truncation_error: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            quad_error: 0.0,
            truncation_error: 0.0,
        }
    }

    pub fn error(&self) -> f64 {
        self.quad_error + self.truncation_error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ThermoResult {
    pub pressure: Option<Estimate>,
    pub free_energy: Option<Estimate>,
    pub entropy: Option<Estimate>,
    pub terms_used: usize,
    /// Set when the Matsubara cap was reached before the tail bound met
    /// the requested tolerance.
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Pressure,
    FreeEnergy,
}

/// Integrated value of a single term before the k_B T prefactor.
#[derive(Debug, Clone, Copy)]
struct RawTerm {
    value: f64,
    error: f64,
}

/// A y/(1 − A y) with y = e^{−t}, written as A/(e^t − A).
#[inline]
fn occupation(a: f64, t: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a / (t.exp_m1() + (1.0 - a))
    }
}

/// ln(1 − A e^{−t}).
#[inline]
fn log_factor(a: f64, t: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let ay = a * (-t).exp();
    if ay < 0.5 {
        (-ay).ln_1p()
    } else {
        (t.exp_m1() + (1.0 - a)).ln() - t
    }
}

#[inline]
fn kernel(q: Quantity, a: f64, b: f64, t: f64) -> f64 {
    match q {
        Quantity::Pressure => t * t * (occupation(a, t) + occupation(b, t)),
        Quantity::FreeEnergy => t * (log_factor(a, t) + log_factor(b, t)),
    }
}

/// Analytic bound on ∫_{hi}^∞ of the kernel with A = B = 1.
fn window_tail_bound(q: Quantity, hi: f64) -> f64 {
    let e = (-hi).exp() / -(-hi).exp_m1();
    match q {
        Quantity::Pressure => 2.0 * e * (hi * hi + 2.0 * hi + 2.0),
        Quantity::FreeEnergy => 2.0 * e * (hi + 1.0),
    }
}

fn zero_mode_coefficients(model: &DispersionModel, policy: ZeroModePolicy, temperature: f64) -> (f64, Extended) {
    match policy {
        ZeroModePolicy::ForceIM => (1.0, Extended::Infinite),
        ZeroModePolicy::ForceMIM => (1.0, Extended::Finite(0.0)),
        ZeroModePolicy::FromModel => (tm_zero_mode_coefficient(model), te_zero_mode_weight(model, temperature)),
    }
}

/// B₀ at t = 2qa for ω̄² encoded as w = 2aω̄/c.
#[inline]
fn te_zero_coefficient(w: f64, t: f64) -> f64 {
    let r = w * w / ((t * t + w * w).sqrt() + t).powi(2);
    r * r
}

fn integrate_kernel<F: Fn(f64) -> f64>(f: F, lo: f64, q: Quantity, rel_tol: f64) -> Result<RawTerm> {
    let hi = lo + T_WINDOW;
    let r = integrate(f, lo, hi, QuadConfig::relative(rel_tol))?;
    Ok(RawTerm {
        value: r.value,
        error: r.abs_error + window_tail_bound(q, hi),
    })
}

fn raw_zero_term(model: &DispersionModel, gap: f64, temperature: f64, policy: ZeroModePolicy, q: Quantity, rel_tol: f64) -> Result<RawTerm> {
    let (a0, te) = zero_mode_coefficients(model, policy, temperature);
    match te {
        Extended::Infinite => integrate_kernel(|t| kernel(q, a0, 1.0, t), 0.0, q, rel_tol),
        Extended::Finite(0.0) => {
            if a0 == 0.0 {
                return Ok(RawTerm { value: 0.0, error: 0.0 });
            }
            integrate_kernel(|t| kernel(q, a0, 0.0, t), 0.0, q, rel_tol)
        }
        Extended::Finite(w2) => {
            let w = 2.0 * gap * w2.sqrt() / C;
            integrate_kernel(|t| kernel(q, a0, te_zero_coefficient(w, t), t), 0.0, q, rel_tol)
        }
    }
}

/// Integral ∫_κ^∞ kernel dt for a term with ζ > 0.
fn raw_positive_term(model: &DispersionModel, zeta: f64, kappa: f64, temperature: f64, q: Quantity, rel_tol: f64) -> Result<RawTerm> {
    match permittivity(model, zeta, temperature)? {
        Extended::Infinite => integrate_kernel(|t| kernel(q, 1.0, 1.0, t), kappa, q, rel_tol),
        Extended::Finite(1.0) => Ok(RawTerm { value: 0.0, error: 0.0 }),
        Extended::Finite(e) => integrate_kernel(
            |t| {
                let (a, b) = reflection_finite(e, t / kappa);
                kernel(q, a, b, t)
            },
            kappa,
            q,
            rel_tol,
        ),
    }
}

fn prefactor(q: Quantity, gap: f64, temperature: f64) -> f64 {
    match q {
        Quantity::Pressure => -K_B * temperature / (8.0 * PI * gap.powi(3)),
        Quantity::FreeEnergy => K_B * temperature / (8.0 * PI * gap * gap),
    }
}

fn weighted_term(model: &DispersionModel, gap: f64, temperature: f64, m: usize, policy: ZeroModePolicy, q: Quantity, rel_tol: f64) -> Result<Estimate> {
    let raw = if m == 0 {
        let r = raw_zero_term(model, gap, temperature, policy, q, rel_tol)?;
        RawTerm {
            value: 0.5 * r.value,
            error: 0.5 * r.error,
        }
    } else {
        let zeta = matsubara_frequency(m, temperature);
        let kappa = 2.0 * zeta * gap / C;
        raw_positive_term(model, zeta, kappa, temperature, q, rel_tol)?
    };
    let pre = prefactor(q, gap, temperature);
    Ok(Estimate {
        value: pre * raw.value,
        quad_error: pre.abs() * raw.error,
        truncation_error: 0.0,
    })
}

/// Weighted contribution of index `m` to the pressure (Pa).
pub fn term_pressure(model: &DispersionModel, gap: f64, temperature: f64, m: usize, policy: ZeroModePolicy, quad_rel_tol: f64) -> Result<Estimate> {
    weighted_term(model, gap, temperature, m, policy, Quantity::Pressure, quad_rel_tol)
}

/// Weighted contribution of index `m` to the free energy per area (J/m²).
pub fn term_free_energy(model: &DispersionModel, gap: f64, temperature: f64, m: usize, policy: ZeroModePolicy, quad_rel_tol: f64) -> Result<Estimate> {
    weighted_term(model, gap, temperature, m, policy, Quantity::FreeEnergy, quad_rel_tol)
}

/// Both contributions of index `m` for a query.
pub fn matsubara_term(query: &LifshitzQuery, m: usize) -> Result<MatsubaraTerm> {
    let tol = query.tolerances.quad_rel_tol;
    let p = term_pressure(&query.model, query.gap, query.temperature, m, query.zero_mode_policy, tol)?;
    let f = term_free_energy(&query.model, query.gap, query.temperature, m, query.zero_mode_policy, tol)?;
    Ok(MatsubaraTerm {
        m,
        zeta_m: matsubara_frequency(m, query.temperature),
        pressure_contribution: p.value,
        free_energy_contribution: f.value,
        weight: if m == 0 { Weight::Half } else { Weight::Full },
    })
}

/// Bound on Σ_{j ≥ first} |raw term j| with A, B ≤ 1, from the integral
/// test applied to the per-term bound G(κ) (decreasing in κ).
fn matsubara_tail_bound(q: Quantity, first: usize, kappa1: f64) -> f64 {
    let k = first as f64 * kappa1;
    let g = 2.0 * (-k).exp() / -(-k).exp_m1();
    match q {
        Quantity::Pressure => g * ((k * k + 2.0 * k + 2.0) + (k * k + 4.0 * k + 6.0) / kappa1),
        Quantity::FreeEnergy => g * ((k + 1.0) + (k + 2.0) / kappa1),
    }
}

/// Matsubara sum for one quantity.
///
/// Terms are evaluated in parallel chunks but accumulated strictly in
/// ascending m, and the stopping rule is checked after every term, so the
/// result does not depend on chunking or thread count.
fn matsubara_sum(query: &LifshitzQuery, q: Quantity) -> Result<(Estimate, usize, bool)> {
    if !(query.temperature > 0.0) {
        return Err(Error::Domain("Matsubara sum needs T > 0; use the T = 0 path".into()));
    }
    if query.model == DispersionModel::Vacuum {
        return Ok((Estimate::exact(0.0), 1, false));
    }
    let tol = query.tolerances;
    let kappa1 = 2.0 * matsubara_frequency(1, query.temperature) * query.gap / C;
    let pre = prefactor(q, query.gap, query.temperature).abs();

    let mut sum = 0.0;
    let mut quad_error = 0.0;
    let mut next = 0usize;
    let mut chunk = 8usize;
    loop {
        let end = (next + chunk).min(MAX_TERMS);
        let terms: Vec<Result<Estimate>> = (next..end)
            .into_par_iter()
            .map(|m| weighted_term(&query.model, query.gap, query.temperature, m, query.zero_mode_policy, q, tol.quad_rel_tol))
            .collect();
        for (m, term) in (next..end).zip(terms) {
            let term = term?;
            sum += term.value;
            quad_error += term.quad_error;
            if m == 0 {
                continue;
            }
            let tail = pre * matsubara_tail_bound(q, m + 1, kappa1);
            if tail <= tol.sum_rel_tol * sum.abs() || tail == 0.0 {
                return Ok((
                    Estimate {
                        value: sum,
                        quad_error,
                        truncation_error: tail,
                    },
                    m + 1,
                    false,
                ));
            }
        }
        if end == MAX_TERMS {
            let tail = pre * matsubara_tail_bound(q, MAX_TERMS, kappa1);
            return Ok((
                Estimate {
                    value: sum,
                    quad_error,
                    truncation_error: tail,
                },
                MAX_TERMS,
                true,
            ));
        }
        next = end;
        chunk = (chunk * 2).min(1024);
    }
}

/// Casimir pressure at T > 0 (Pa; negative means attraction).
pub fn pressure(query: &LifshitzQuery) -> Result<ThermoResult> {
    let (est, terms_used, truncated) = matsubara_sum(query, Quantity::Pressure)?;
    Ok(ThermoResult {
        pressure: Some(est),
        terms_used,
        truncated,
        ..Default::default()
    })
}

/// Free energy per unit area at T > 0 (J/m²).
pub fn free_energy(query: &LifshitzQuery) -> Result<ThermoResult> {
    let (est, terms_used, truncated) = matsubara_sum(query, Quantity::FreeEnergy)?;
    Ok(ThermoResult {
        free_energy: Some(est),
        terms_used,
        truncated,
        ..Default::default()
    })
}

/// Pressure and free energy together. T = 0 is routed to the continuum
/// frequency integral.
pub fn evaluate(query: &LifshitzQuery) -> Result<ThermoResult> {
    if query.temperature == 0.0 {
        let p = zero_temperature(&query.model, query.gap, query.tolerances.quad_rel_tol, Quantity::Pressure)?;
        let f = zero_temperature(&query.model, query.gap, query.tolerances.quad_rel_tol, Quantity::FreeEnergy)?;
        return Ok(ThermoResult {
            pressure: Some(p),
            free_energy: Some(f),
            ..Default::default()
        });
    }
    let p = pressure(query)?;
    let f = free_energy(query)?;
    Ok(ThermoResult {
        pressure: p.pressure,
        free_energy: f.free_energy,
        entropy: None,
        terms_used: p.terms_used.max(f.terms_used),
        truncated: p.truncated || f.truncated,
    })
}

/// T = 0: k_B T Σ′_m → (ħ/2π) ∫ dζ, with ζ = (c/2a)·u/(1 − u).
fn zero_temperature(model: &DispersionModel, gap: f64, quad_rel_tol: f64, q: Quantity) -> Result<Estimate> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::Domain(format!("gap must be > 0, got {gap}")));
    }
    if *model == DispersionModel::Vacuum {
        return Ok(Estimate::exact(0.0));
    }
    let inner_tol = quad_rel_tol * 0.1;
    // the inner integral can fail; remember the first failure
    let failure = std::sync::Mutex::new(None::<Error>);
    let outer = |u: f64| {
        let kappa = u / (1.0 - u);
        let zeta = C * kappa / (2.0 * gap);
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        match raw_positive_term(model, zeta, kappa, 0.0, q, inner_tol) {
            Ok(r) => r.value * jac,
            Err(e) => {
                failure.lock().unwrap().get_or_insert(e);
                0.0
            }
        }
    };
    let r = integrate(outer, 0.0, 1.0, QuadConfig::relative(quad_rel_tol))?;
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let pre = match q {
        Quantity::Pressure => -HBAR * C / (32.0 * PI * PI * gap.powi(4)),
        Quantity::FreeEnergy => HBAR * C / (32.0 * PI * PI * gap.powi(3)),
    };
    Ok(Estimate {
        value: pre * r.value,
        // inner relative error propagates linearly into the outer integral
        quad_error: pre.abs() * (r.abs_error + inner_tol * r.value.abs()),
        truncation_error: 0.0,
    })
}

/// Pressure at T = 0 (Pa).
pub fn pressure_t0(model: &DispersionModel, gap: f64, quad_rel_tol: f64) -> Result<Estimate> {
    zero_temperature(model, gap, quad_rel_tol, Quantity::Pressure)
}

/// Free energy per area at T = 0 (J/m²).
pub fn free_energy_t0(model: &DispersionModel, gap: f64, quad_rel_tol: f64) -> Result<Estimate> {
    zero_temperature(model, gap, quad_rel_tol, Quantity::FreeEnergy)
}
