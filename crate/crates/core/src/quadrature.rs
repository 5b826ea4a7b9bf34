//! Per-configuration probabilities by iterated numerical quadrature.
//!
//! Each configuration's probability is the integral of the side-length
//! density over its limit region, times the angle-tuple probability. The
//! integrals run innermost-out, one axis per variable: finite intervals use
//! adaptive Gauss–Kronrod, semi-infinite ones the exp-sinh
//! double-exponential rule scaled by the variable's exponential rate. This
//! route never looks at the closed forms, so it serves as an independent
//! oracle for them.

use crate::cases::{all_cases, case_table, CaseSpec};
use crate::error::{Error, Result};
use crate::exec::{run_indexed, ExecMode};
use crate::weights::{lambda_of, lambda_total, Weights};

/// Target absolute accuracy for one configuration.
pub const DEFAULT_ABS_TOL: f64 = 1e-10;

/// Per-axis relative tolerance; tighter than the per-case target so nesting
/// noise stays below it.
const AXIS_REL_TOL: f64 = 1e-13;
const AXIS_ABS_FLOOR: f64 = 1e-16;
const MAX_PANELS: usize = 4000;

#[derive(Clone, Debug)]
pub struct CaseIntegral {
    pub label: String,
    pub n: usize,
    pub probability: f64,
    pub est_error: f64,
}

/// Density with per-side λ values and per-variable rates hoisted out of the
/// evaluation loop. The math is identical to `CaseSpec::density_value`.
struct Compiled<'c> {
    case: &'c CaseSpec,
    lam_sides: Vec<f64>,
    rates: Vec<f64>,
    prefactor: f64,
}

impl<'c> Compiled<'c> {
    fn new(case: &'c CaseSpec, w: &Weights) -> Self {
        let lam_sides: Vec<f64> =
            case.side_angles().iter().map(|a| lambda_of(a.canonical(), w)).collect();
        let rates = (1..=case.dim()).map(|i| case.effective_rate(i, w)).collect();
        let prefactor =
            (2.0 / lambda_total(w)) * (crate::angle::SQRT3 / 2.0).powi(case.n as i32 - 1);
        Compiled { case, lam_sides, rates, prefactor }
    }

    fn density(&self, z: &[f64]) -> f64 {
        let sides = self.case.fill_sides(z);
        let mut exponent = 0.0;
        for (len, lam) in sides.iter().zip(&self.lam_sides) {
            exponent += len * lam;
        }
        self.prefactor * (-0.5 * exponent).exp()
    }
}

/// Fixed-capacity prefix of integration variables.
#[derive(Clone, Copy)]
struct Prefix {
    z: [f64; 4],
    len: usize,
}

impl Prefix {
    fn empty() -> Self {
        Prefix { z: [0.0; 4], len: 0 }
    }

    fn push(mut self, v: f64) -> Self {
        self.z[self.len] = v;
        self.len += 1;
        self
    }

    fn slice(&self) -> &[f64] {
        &self.z[..self.len]
    }
}

fn integrate_axes(c: &Compiled, prefix: Prefix) -> (f64, f64) {
    let i = prefix.len;
    debug_assert!(i < c.case.dim());
    let lo = c.case.lower[i].eval(prefix.slice());
    let hi = c.case.upper[i].eval(prefix.slice());
    let rate = c.rates[i];
    let inner = |z: f64| {
        let p = prefix.push(z);
        if p.len == c.case.dim() {
            c.density(p.slice())
        } else {
            integrate_axes(c, p).0
        }
    };
    if hi.is_finite() {
        adaptive_gk(&inner, lo, hi)
    } else {
        semi_infinite_gk(&inner, lo, rate)
    }
}

/// Integrate over (lo, ∞) with the exp-sinh double-exponential rule:
/// z = lo + s·exp((π/2)·sinh t) and the trapezoid rule in t, halving the
/// step until two levels agree. Integrated-out inner variables leave sums
/// of exponentials with rates the substitution cannot know in advance; the
/// double-exponential node clustering is insensitive to that mix, where a
/// single-rate log substitution stalls on fractional-power layers.
fn semi_infinite_gk<F: Fn(f64) -> f64>(f: &F, lo: f64, rate: f64) -> (f64, f64) {
    const T_MAX: f64 = 4.0;
    let scale = 1.0 / rate;
    let eval = |t: f64| {
        let e = (std::f64::consts::FRAC_PI_2 * t.sinh()).exp();
        let v = f(lo + scale * e) * scale * std::f64::consts::FRAC_PI_2 * t.cosh() * e;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let mut h = 0.5;
    let mut n = (T_MAX / h) as i64;
    let mut sum: f64 = (-n..=n).map(|k| eval(k as f64 * h)).sum::<f64>() * h;
    let mut err = f64::INFINITY;
    for _ in 0..6 {
        let prev = sum;
        h *= 0.5;
        n *= 2;
        let odd: f64 = (-n..=n).filter(|k| k % 2 != 0).map(|k| eval(k as f64 * h)).sum();
        sum = prev * 0.5 + h * odd;
        let delta = (sum - prev).abs();
        // the error contracts roughly quadratically per level, so the level
        // delta overstates the finer level's error; accept once the
        // extrapolated error clears the target and report that extrapolation
        err = if sum != 0.0 { (delta / sum.abs()).powi(2) * sum.abs() } else { delta };
        if delta <= AXIS_REL_TOL.sqrt() * sum.abs() + AXIS_ABS_FLOOR {
            break;
        }
    }
    (sum, err.max(AXIS_ABS_FLOOR))
}

/// Integrate the density over one configuration region, times the angle mass.
pub fn integrate_case(case: &CaseSpec, w: &Weights) -> Result<CaseIntegral> {
    integrate_case_with(case, w, DEFAULT_ABS_TOL)
}

pub fn integrate_case_with(case: &CaseSpec, w: &Weights, abs_tol: f64) -> Result<CaseIntegral> {
    let compiled = Compiled::new(case, w);
    let (raw, outer_err) = integrate_axes(&compiled, Prefix::empty());
    let mass = case.angle_mass(w);
    let probability = raw * mass;
    // outer-axis error plus a margin for the tighter inner tolerances
    let est_error =
        outer_err * mass + probability.abs() * AXIS_REL_TOL * 10.0 * case.dim() as f64;
    if !est_error.is_finite() || est_error > abs_tol {
        return Err(Error::QuadratureAccuracy {
            label: case.label.to_string(),
            requested: abs_tol,
            achieved: est_error,
            estimate: probability,
        });
    }
    Ok(CaseIntegral { label: case.label.to_string(), n: case.n, probability, est_error })
}

/// All twenty per-configuration probabilities.
pub fn integrate_all(w: &Weights, mode: ExecMode) -> Result<Vec<CaseIntegral>> {
    let cases = all_cases();
    run_indexed(cases.len(), mode, |k| integrate_case(&cases[k], w))
        .into_iter()
        .collect()
}

/// The vertex-number distribution as per-n sums of the case integrals; the
/// independent oracle for the closed forms and the Monte Carlo estimator.
pub fn pmf_by_quadrature(w: &Weights) -> Result<[f64; 4]> {
    pmf_by_quadrature_with(w, ExecMode::Parallel)
}

pub fn pmf_by_quadrature_with(w: &Weights, mode: ExecMode) -> Result<[f64; 4]> {
    let mut pmf = [0.0; 4];
    for ci in integrate_all(w, mode)? {
        pmf[ci.n - 3] += ci.probability;
    }
    Ok(pmf)
}

/// Sum of the case integrals for one vertex number.
pub fn n_probability_by_quadrature(n: usize, w: &Weights) -> Result<f64> {
    let mut sum = 0.0;
    for case in case_table(n)? {
        sum += integrate_case(&case, w)?.probability;
    }
    Ok(sum)
}

// 15-point Kronrod extension of 7-point Gauss, nodes on [0, 1] side.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7–15 panel: returns the Kronrod value and the
/// rescaled error estimate in the QUADPACK style, which avoids the gross
/// overestimate a raw |K − G| gives on smooth integrands.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv = [0.0f64; 15];
    fv[7] = fc;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let (f_lo, f_hi) = (f(center - x), f(center + x));
        fv[j] = f_lo;
        fv[14 - j] = f_hi;
        kronrod += (f_lo + f_hi) * WGK[j];
        if j % 2 == 1 {
            gauss += (f_lo + f_hi) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }
    resasc *= half.abs();
    let raw = (kronrod - gauss).abs() * half.abs();
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        let scale = (200.0 * raw / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    (kronrod * half, err)
}

/// Globally adaptive GK: bisect the worst panel until the error bound meets
/// the relative/absolute targets or the panel budget runs out. Returns the
/// value and the final error bound.
fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    if a >= b {
        return (0.0, 0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut panels: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)];
    loop {
        let value: f64 = panels.iter().map(|p| p.2).sum();
        let error: f64 = panels.iter().map(|p| p.3).sum();
        if error <= AXIS_REL_TOL * value.abs() + AXIS_ABS_FLOOR || panels.len() >= MAX_PANELS {
            return (value, error);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (pa + pb);
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        panels.push((pa, mid, v1, e1));
        panels.push((mid, pb, v2, e2));
    }
}
