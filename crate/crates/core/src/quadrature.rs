//! Adaptive Gauss–Kronrod (7/15) integration on finite intervals.
//!
//! The 15-point Kronrod rule never evaluates the integrand at an interval
//! endpoint, so integrable endpoint singularities are tolerated.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl QuadConfig {
    pub fn relative(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // largest error first; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// One application of the 15-point Kronrod rule with its embedded Gauss
/// estimate. Returns `(value, error)`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut res_g = f_center * WG[3];
    let mut res_k = f_center * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for (j, wg) in WG.iter().take(3).enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_k - res_g) * half;
    let ah = half.abs();
    (res_k * half, rescale_error(err, res_abs * ah, res_asc * ah))
}

/// Adaptive bisection of `[lo, hi]` until the summed error estimate drops
/// below `max(abs_tol, rel_tol·|I|)`.
///
/// The interval with the largest error is always split first, so for a
/// fixed integrand the sequence of evaluations is deterministic.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: QuadConfig) -> Result<QuadResult> {
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = gauss_kronrod_15(&f, lo, hi);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { lo, hi, value, error });
    let mut total = value;
    let mut total_err = error;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Numerical {
                message: format!("quadrature on [{lo:e}, {hi:e}] did not reach tolerance {target:e}"),
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // interval can no longer be split in floating point
            heap.push(worst);
            return Err(Error::Numerical {
                message: "quadrature interval collapsed below machine resolution".into(),
                estimate: total_err,
            });
        }
        let (v1, e1) = gauss_kronrod_15(&f, worst.lo, mid);
        let (v2, e2) = gauss_kronrod_15(&f, mid, worst.hi);
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
    }

    // re-add in a fixed order to strip accumulated cancellation from the
    // running updates
    let mut segments = heap.into_vec();
    segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value = segments.iter().map(|s| s.value).sum();
    let abs_error = segments.iter().map(|s| s.error).sum();
    Ok(QuadResult { value, abs_error, evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, QuadConfig::relative(1e-12)).unwrap();
        assert!((r.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn exponential_decay() {
        let r = integrate(|x| (-x).exp(), 0.0, 50.0, QuadConfig::relative(1e-12)).unwrap();
        assert!((r.value - (1.0 - (-50.0f64).exp())).abs() < 1e-12);
        assert!(r.abs_error < 1e-11);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2 without touching x = 0
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, QuadConfig::relative(1e-9)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn bose_integral() {
        // ∫₀^∞ t²/(eᵗ−1) dt = 2ζ(3)
        let r = integrate(|t| t * t / t.exp_m1(), 0.0, 60.0, QuadConfig::relative(1e-12)).unwrap();
        assert!((r.value - 2.0 * crate::constants::ZETA3).abs() < 1e-11);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let cfg = QuadConfig {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_intervals: 3,
        };
        match integrate(|x| (1.0 / x).sin(), 1e-3, 1.0, cfg) {
            Err(Error::Numerical { estimate, .. }) => assert!(estimate > 0.0),
            other => panic!("expected numerical error, got {other:?}"),
        }
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|x| x, 1.0, 1.0, QuadConfig::relative(1e-9)).unwrap();
        assert_eq!(r.value, 0.0);
    }
}
