use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Outcome of a definite integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Tolerances and subdivision budget for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of intervals kept by the adaptive Gauss–Kronrod scheme.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Same budget with both tolerances scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        QuadOptions {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..self
        }
    }

    fn accepts(&self, value: f64, err: f64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) || self.max_intervals == 0 {
            return Err(Error::domain("quadrature", "tolerances must be positive"));
        }
        Ok(())
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(roundoff);
    }
    Segment { lo, hi, value, err }
}

/// Adaptive Gauss–Kronrod (10/21) integration of `f` over `[lo, hi]`.
///
/// Accepts when the summed error estimate is below `max(abs_tol, rel_tol·|value|)`.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, &[lo, hi], &QuadOptions::new(abs_tol, rel_tol))
}

/// Adaptive Gauss–Kronrod integration over `[points[0], points[last]]`, with
/// the interior entries of `points` used as initial breakpoints.
///
/// Breakpoints must be non-decreasing; zero-width pieces are dropped.
pub fn integrate_adaptive_with<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    opts.validate()?;
    if points.len() < 2 || points.iter().any(|p| !p.is_finite()) {
        return Err(Error::domain("integrate_adaptive", "need at least two finite limits"));
    }
    if points.windows(2).any(|w| w[1] < w[0]) || points[points.len() - 1] <= points[0] {
        return Err(Error::domain("integrate_adaptive", "limits must satisfy lo < hi"));
    }

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            heap.push(kronrod21(&mut f, w[0], w[1]));
            evaluations += 21;
        }
    }
    // Segments too narrow to split further are parked here.
    let mut settled: Vec<Segment> = Vec::new();

    loop {
        let (value, err) = heap
            .iter()
            .chain(settled.iter())
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err));
        if !value.is_finite() || !err.is_finite() {
            return Err(Error::NonConvergence {
                value,
                abs_error: err,
                evaluations,
            });
        }
        if opts.accepts(value, err) {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: err,
                evaluations,
            });
        }
        let worst = match heap.pop() {
            Some(s) if heap.len() + settled.len() + 1 < opts.max_intervals => s,
            _ => {
                return Err(Error::NonConvergence {
                    value,
                    abs_error: err,
                    evaluations,
                })
            }
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi || (worst.hi - worst.lo) < 1e-13 * worst.lo.abs().max(worst.hi.abs()) {
            settled.push(worst);
            if heap.is_empty() {
                return Err(Error::NonConvergence {
                    value,
                    abs_error: err,
                    evaluations,
                });
            }
            continue;
        }
        heap.push(kronrod21(&mut f, worst.lo, mid));
        heap.push(kronrod21(&mut f, mid, worst.hi));
        evaluations += 42;
    }
}

/// Integrates `f` over `[lo, ∞)` by mapping `t = lo + u/(1-u)` onto `(0, 1)`.
///
/// `breakpoints` are given in the original variable and must lie in `(lo, ∞)`.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    breakpoints: &[f64],
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    let mut pts = Vec::with_capacity(breakpoints.len() + 2);
    pts.push(0.0);
    let mut mapped: Vec<f64> = breakpoints
        .iter()
        .filter(|&&t| t > lo && t.is_finite())
        .map(|&t| {
            let s = t - lo;
            s / (1.0 + s)
        })
        .filter(|&u| u > 0.0 && u < 1.0)
        .collect();
    mapped.sort_by(f64::total_cmp);
    pts.extend(mapped);
    pts.push(1.0);
    integrate_adaptive_with(
        |u| {
            if u >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u;
            let v = f(lo + u / w);
            if v == 0.0 {
                0.0
            } else {
                v / (w * w)
            }
        },
        &pts,
        opts,
    )
}

/// Double-exponential (tanh-sinh) quadrature over `[lo, hi]`.
///
/// Nodes cluster doubly-exponentially at both ends, so integrable endpoint
/// singularities such as `x^{-1/2}` are handled without subdivision. The step
/// is halved until successive estimates agree to the tolerance.
pub fn integrate_tanh_sinh<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadratureResult> {
    opts.validate()?;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain("integrate_tanh_sinh", "limits must satisfy lo < hi"));
    }
    const T_MAX: f64 = 4.0;
    const MAX_LEVEL: u32 = 12;
    let half = 0.5 * (hi - lo);
    let centre = half * std::f64::consts::FRAC_PI_2 * f(0.5 * (lo + hi));
    let mut evaluations = 1;

    // Contribution of nodes at t = ±k·h for a given set of k.
    let mut node_pair = |t: f64, evaluations: &mut usize| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        // distance from the nearer endpoint, computed without cancellation
        let delta = (hi - lo) / (1.0 + (2.0 * u).exp());
        let w = half * std::f64::consts::FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if delta <= 0.0 || w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        let mut s = 0.0;
        for x in [lo + delta, hi - delta] {
            if x > lo && x < hi {
                s += f(x);
                *evaluations += 1;
            }
        }
        w * s
    };

    let mut h = 1.0;
    let mut sum = centre;
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        sum += node_pair(k as f64 * h, &mut evaluations);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 1..=MAX_LEVEL {
        h *= 0.5;
        // new nodes are the odd multiples of the halved step
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            sum += node_pair(k as f64 * h, &mut evaluations);
            k += 2;
        }
        let next = sum * h;
        let err = (next - estimate).abs();
        estimate = next;
        if !estimate.is_finite() {
            break;
        }
        if opts.accepts(estimate, err) {
            return Ok(QuadratureResult {
                value: estimate,
                abs_error_estimate: err,
                evaluations,
            });
        }
    }
    Err(Error::NonConvergence {
        value: estimate,
        abs_error: f64::NAN,
        evaluations,
    })
}
