//! Closed-form evaluation of the vertex-number distribution and its
//! refinements, in exact rational arithmetic.
//!
//! The probabilities share the denominator
//! β = (1−p)(1−q)(p+q)(p+q−p²−q²−pq); the four numerators, the
//! parallelogram/trapezoid split of n = 4, the variance formula and the
//! extremum scan all live here. Two independent routes cross-check these
//! expressions elsewhere: per-case quadrature of the side-length density and
//! Monte Carlo over realizations.

use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{run_indexed, ExecMode};
use crate::weights::{rat_i64, Rat, Weights};

/// The four probabilities P(N = n), n ∈ {3,4,5,6}, plus the common
/// denominator β.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPmf {
    pub p3: Rat,
    pub p4: Rat,
    pub p5: Rat,
    pub p6: Rat,
    pub beta: Rat,
}

impl ExactPmf {
    pub fn component(&self, n: usize) -> &Rat {
        match n {
            3 => &self.p3,
            4 => &self.p4,
            5 => &self.p5,
            6 => &self.p6,
            _ => panic!("vertex number {n} outside 3..=6"),
        }
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.p3.to_f64().unwrap(),
            self.p4.to_f64().unwrap(),
            self.p5.to_f64().unwrap(),
            self.p6.to_f64().unwrap(),
        ]
    }

    pub fn sum(&self) -> Rat {
        &self.p3 + &self.p4 + &self.p5 + &self.p6
    }

    /// Σ n·pₙ; equals 4 for every admissible weight pair.
    pub fn mean(&self) -> Rat {
        rat_i64(3) * &self.p3 + rat_i64(4) * &self.p4 + rat_i64(5) * &self.p5 + rat_i64(6) * &self.p6
    }
}

fn pqr(w: &Weights) -> (Rat, Rat, Rat) {
    (w.p_exact().clone(), w.q_exact().clone(), w.r_exact())
}

/// β = (1−p)(1−q)(p+q)(p+q−p²−q²−pq), the common denominator. Strictly
/// positive on the open simplex.
pub fn beta(w: &Weights) -> Rat {
    let (p, q, _) = pqr(w);
    let one = Rat::one();
    let lam = crate::weights::lambda_scalar_exact(w);
    (&one - &p) * (&one - &q) * (&p + &q) * lam
}

fn numerator_3(p: &Rat, q: &Rat, r: &Rat) -> Rat {
    let one = Rat::one();
    rat_i64(2) * p * q * (&one - p) * (&one - q) * (p + q) * r
}

fn numerator_4(p: &Rat, q: &Rat) -> Rat {
    let p2 = p * p;
    let q2 = q * q;
    let pq = p * q;
    rat_i64(6) * &p2 * &q2 * (p + q) * (p + q)
        + rat_i64(2) * &pq * (rat_i64(12) * &pq + Rat::one())
        - rat_i64(22) * &p2 * &q2 * (p + q)
        - &p2
            * (rat_i64(5) * &p2 * q - rat_i64(12) * &pq + rat_i64(2) * p + rat_i64(9) * q
                - &p2
                - Rat::one())
        - &q2
            * (rat_i64(5) * p * &q2 - rat_i64(12) * &pq + rat_i64(2) * q + rat_i64(9) * p
                - &q2
                - Rat::one())
}

fn numerator_5(p: &Rat, q: &Rat, r: &Rat) -> Rat {
    let p2 = p * p;
    let q2 = q * q;
    rat_i64(6) * &p2 * &q2 * (p + q) * r - rat_i64(2) * p * q * r * (&p2 + &q2)
        + rat_i64(2) * p * q * (p + q) * r
        - rat_i64(8) * &p2 * &q2 * r
}

fn numerator_6(p: &Rat, q: &Rat, r: &Rat) -> Rat {
    rat_i64(2) * p * p * q * q * r * r
}

/// The full distribution of the vertex number.
pub fn pmf(w: &Weights) -> ExactPmf {
    let (p, q, r) = pqr(w);
    let b = beta(w);
    ExactPmf {
        p3: numerator_3(&p, &q, &r) / &b,
        p4: numerator_4(&p, &q) / &b,
        p5: numerator_5(&p, &q, &r) / &b,
        p6: numerator_6(&p, &q, &r) / &b,
        beta: b,
    }
}

/// Probability of one of the two triangle configurations:
/// pq(1−p−q) / (p+q−p²−q²−pq). Twice this value is P(N = 3).
pub fn triangle_case_probability(w: &Weights) -> Rat {
    let (p, q, r) = pqr(w);
    p * q * r / crate::weights::lambda_scalar_exact(w)
}

/// Probability of the trapezoid configuration whose second side is bounded
/// below by the first: p²q(1−p−q) / ((1−p)(p+q−p²−q²−pq)).
pub fn trapezoid_case4_probability(w: &Weights) -> Rat {
    let (p, q, r) = pqr(w);
    let one = Rat::one();
    p.clone() * &p * q * r / ((&one - &p) * crate::weights::lambda_scalar_exact(w))
}

/// Probability of the pentagon configuration with third side in
/// (z₁, z₁+z₂): 3pq²(1−p−q)² / ((3−3q)(p+q)(p+q−p²−q²−pq)).
pub fn pentagon_case5_probability(w: &Weights) -> Rat {
    let (p, q, r) = pqr(w);
    let lam = crate::weights::lambda_scalar_exact(w);
    rat_i64(3) * &p * &q * &q * &r * &r
        / ((rat_i64(3) - rat_i64(3) * &q) * (&p + &q) * lam)
}

/// Split of P(N = 4) into parallelogram and trapezoid mass.
///
/// Both values are sums of the per-configuration integrals of the
/// side-length density; the identity para + trap = P(N = 4) is a test, not
/// an assumption, and the quadrature oracle confirms each summand.
pub fn para_trap_split(w: &Weights) -> (Rat, Rat) {
    let (p, q, r) = pqr(w);
    let lam = crate::weights::lambda_scalar_exact(w);
    let qr = &q + &r; // = 1 − p
    let pr = &p + &r; // = 1 − q
    let pq = &p + &q;

    let para = (&p * &p * &q * &q / (&qr * &pr)
        + &p * &p * &r * &r / (&pq * &qr)
        + &q * &q * &r * &r / (&pq * &pr))
        / &lam;
    let trap = (rat_i64(2) * &p * &p * &q * &r / &qr
        + rat_i64(2) * &p * &q * &q * &r / &pr
        + rat_i64(2) * &p * &q * &r * &r / &pq)
        / &lam;
    (para, trap)
}

/// Mean and variance of the vertex number: the mean is Σ n·pₙ (identically
/// 4), the variance is 4pq(1−p−q)/((1−p)(1−q)(p+q)).
pub fn mean_variance(w: &Weights) -> (Rat, Rat) {
    let mean = pmf(w).mean();
    let (p, q, r) = pqr(w);
    let one = Rat::one();
    let variance = rat_i64(4) * &p * &q * &r / ((&one - &p) * (&one - &q) * (&p + &q));
    (mean, variance)
}

/// Sign-flipped n = 5 probability. Negative on the whole open simplex, so
/// this variant cannot be a probability; the acceptance suite evaluates it
/// to pin the sign convention of the closed forms.
pub fn pentagon_probability_sign_variant(w: &Weights) -> Rat {
    let (p, q, r) = pqr(w);
    -numerator_5(&p, &q, &r) / beta(w)
}

/// Sign-flipped n = 6 probability; see [`pentagon_probability_sign_variant`].
pub fn hexagon_probability_sign_variant(w: &Weights) -> Rat {
    let (p, q, r) = pqr(w);
    -numerator_6(&p, &q, &r) / beta(w)
}

/// One row of a simplex scan.
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub p: f64,
    pub q: f64,
    pub p3: f64,
    pub p4: f64,
    pub p5: f64,
    pub p6: f64,
    pub para: f64,
    pub trap: f64,
}

/// Evaluate the distribution on the grid { (i·step, j·step) } strictly inside
/// the simplex, in row-major order.
pub fn scan_simplex(step: &Rat, mode: ExecMode) -> Result<Vec<ScanRow>> {
    let points = simplex_grid(step)?;
    let rows = run_indexed(points.len(), mode, |k| {
        let (p, q) = &points[k];
        let w = Weights::from_rationals(p.clone(), q.clone(), true).expect("grid point is valid");
        let pmf = pmf(&w);
        let (para, trap) = para_trap_split(&w);
        ScanRow {
            p: p.to_f64().unwrap(),
            q: q.to_f64().unwrap(),
            p3: pmf.p3.to_f64().unwrap(),
            p4: pmf.p4.to_f64().unwrap(),
            p5: pmf.p5.to_f64().unwrap(),
            p6: pmf.p6.to_f64().unwrap(),
            para: para.to_f64().unwrap(),
            trap: trap.to_f64().unwrap(),
        }
    });
    Ok(rows)
}

/// Grid points (i·step, j·step), i,j ≥ 1, strictly inside the simplex.
pub fn simplex_grid(step: &Rat) -> Result<Vec<(Rat, Rat)>> {
    if !step.is_positive() || step > &Rat::new(1.into(), 4.into()) {
        return Err(Error::InvalidConfig(format!(
            "grid step must lie in (0, 1/4], got {step}"
        )));
    }
    let one = Rat::one();
    let mut points = Vec::new();
    let mut p = step.clone();
    while p < one {
        let mut q = step.clone();
        while &p + &q < one {
            points.push((p.clone(), q.clone()));
            q += step;
        }
        p += step;
    }
    Ok(points)
}

/// Result of the extremum scan over the simplex grid.
#[derive(Clone, Debug)]
pub struct ExtremaReport {
    pub step: Rat,
    /// Location of the extremum of each component (max for 3, 5, 6; min for 4).
    pub argext: [(Rat, Rat); 4],
    /// Extremal values in component order.
    pub values: [Rat; 4],
    /// Whether each extremum was strict against every other grid point.
    pub strict: [bool; 4],
}

impl ExtremaReport {
    pub fn all_at(&self, p: &Rat, q: &Rat) -> bool {
        self.argext.iter().all(|(a, b)| a == p && b == q)
    }
}

/// Scan the simplex grid and locate the extrema of the four components:
/// maxima of p₃, p₅, p₆ and the minimum of p₄, with strictness flags.
pub fn verify_extrema(step: &Rat) -> Result<ExtremaReport> {
    if step > &Rat::new(1.into(), 10.into()) {
        return Err(Error::InvalidConfig(format!(
            "extremum scan needs step ≤ 1/10, got {step}"
        )));
    }
    let points = simplex_grid(step)?;
    if points.is_empty() {
        return Err(Error::InvalidConfig("grid step leaves no interior points".into()));
    }
    let values = run_indexed(points.len(), ExecMode::Parallel, |k| {
        let (p, q) = &points[k];
        let w = Weights::from_rationals(p.clone(), q.clone(), true).unwrap();
        let f = pmf(&w);
        [f.p3, f.p4, f.p5, f.p6]
    });

    let mut argext: Vec<(Rat, Rat)> = vec![points[0].clone(); 4];
    let mut best: Vec<Rat> = values[0].to_vec();
    let mut strict = [true; 4];
    for (k, vals) in values.iter().enumerate().skip(1) {
        for c in 0..4 {
            // p4 is minimized, the others maximized
            let better = if c == 1 { vals[c] < best[c] } else { vals[c] > best[c] };
            if better {
                best[c] = vals[c].clone();
                argext[c] = points[k].clone();
                strict[c] = true;
            } else if vals[c] == best[c] {
                strict[c] = false;
            }
        }
    }
    Ok(ExtremaReport {
        step: step.clone(),
        argext: [
            argext[0].clone(),
            argext[1].clone(),
            argext[2].clone(),
            argext[3].clone(),
        ],
        values: [best[0].clone(), best[1].clone(), best[2].clone(), best[3].clone()],
        strict,
    })
}

/// Nearest f64 of a rational.
pub fn rat_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap()
}

/// Render a rational as "num/den" (or "num" for integers).
pub fn rat_string(x: &Rat) -> String {
    if x.denom() == &num_bigint::BigInt::one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(pn: i64, pd: i64, qn: i64, qd: i64) -> Weights {
        Weights::from_fractions(pn, pd, qn, qd).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    #[test]
    fn headline_values_at_the_symmetric_point() {
        let w = w(1, 3, 1, 3);
        assert_eq!(beta(&w), rat(8, 81));
        let f = pmf(&w);
        assert_eq!(f.p3, rat(2, 9));
        assert_eq!(f.p4, rat(7, 12));
        assert_eq!(f.p5, rat(1, 6));
        assert_eq!(f.p6, rat(1, 36));
        assert_eq!(f.sum(), Rat::one());
        assert_eq!(f.mean(), rat(4, 1));
    }

    #[test]
    fn beta_is_symmetric_and_factorizes() {
        for (a, b) in [((1i64, 5i64), (2i64, 5i64)), ((1, 7), (3, 7)), ((2, 9), (1, 3))] {
            let w1 = w(a.0, a.1, b.0, b.1);
            let w2 = w(b.0, b.1, a.0, a.1);
            assert_eq!(beta(&w1), beta(&w2));
            // β = (p+q)(q+r)(r+p)(pq+qr+rp)
            let (p, q) = (w1.p_exact().clone(), w1.q_exact().clone());
            let r = w1.r_exact();
            let fact = (&p + &q) * (&q + &r) * (&r + &p) * (&p * &q + &q * &r + &r * &p);
            assert_eq!(beta(&w1), fact);
        }
    }

    #[test]
    fn normalization_and_mean_on_rational_points() {
        for (pn, pd, qn, qd) in [(1, 4, 1, 4), (1, 5, 2, 5), (1, 7, 3, 7)] {
            let f = pmf(&w(pn, pd, qn, qd));
            assert_eq!(f.sum(), Rat::one(), "Σ pmf at {pn}/{pd},{qn}/{qd}");
            assert_eq!(f.mean(), rat(4, 1));
        }
    }

    #[test]
    fn known_point_one_fifth_two_fifths() {
        let f = pmf(&w(1, 5, 2, 5));
        assert_eq!(f.p3, rat(1, 5));
        assert_eq!(f.p4, rat(28, 45));
        assert_eq!(f.p5, rat(7, 45));
        assert_eq!(f.p6, rat(1, 45));
    }

    #[test]
    fn symmetric_function_forms_match_verbatim_rows() {
        // p3 = 2pqr/(pq+qr+rp), p6 = 2p²q²r²/β
        for (pn, pd, qn, qd) in [(1, 6, 2, 6), (2, 7, 3, 7), (1, 9, 5, 9), (3, 11, 4, 11)] {
            let wt = w(pn, pd, qn, qd);
            let f = pmf(&wt);
            let (p, q) = (wt.p_exact().clone(), wt.q_exact().clone());
            let r = wt.r_exact();
            let lam = crate::weights::lambda_scalar_exact(&wt);
            assert_eq!(f.p3, rat_i64(2) * &p * &q * &r / lam);
            assert_eq!(f.p6, rat_i64(2) * &p * &p * &q * &q * &r * &r / beta(&wt));
        }
    }

    #[test]
    fn pmf_invariant_under_weight_permutations() {
        let base = w(1, 5, 2, 5);
        let f0 = pmf(&base);
        // the distinct (p,q) pairs among permutations of (1/5, 2/5, 2/5)
        let perms = [
            (rat(2, 5), rat(1, 5)),
            (rat(2, 5), rat(2, 5)),
        ];
        for (p, q) in perms {
            let wt = Weights::from_rationals(p, q, true).unwrap();
            let f = pmf(&wt);
            assert_eq!(f.p3, f0.p3);
            assert_eq!(f.p4, f0.p4);
            assert_eq!(f.p5, f0.p5);
            assert_eq!(f.p6, f0.p6);
        }
    }

    #[test]
    fn per_case_probabilities() {
        let w13 = w(1, 3, 1, 3);
        assert_eq!(triangle_case_probability(&w13), rat(1, 9));
        assert_eq!(trapezoid_case4_probability(&w13), rat(1, 18));
        assert_eq!(pentagon_case5_probability(&w13), rat(1, 36));

        // 2·triangle case = P(N=3); each case tends to 0 with its weight factor
        for (pn, pd, qn, qd) in [(1, 4, 1, 4), (2, 7, 3, 7), (1, 10, 4, 10)] {
            let wt = w(pn, pd, qn, qd);
            assert_eq!(rat_i64(2) * triangle_case_probability(&wt), pmf(&wt).p3);
            assert!(trapezoid_case4_probability(&wt) < pmf(&wt).p4);
            assert!(pentagon_case5_probability(&wt) <= pmf(&wt).p5);
        }
    }

    #[test]
    fn split_matches_p4_and_headline_values() {
        let w13 = w(1, 3, 1, 3);
        let (para, trap) = para_trap_split(&w13);
        assert_eq!(para, rat(1, 4));
        assert_eq!(trap, rat(1, 3));
        for (pn, pd, qn, qd) in [(1, 5, 2, 5), (1, 4, 1, 4), (3, 8, 1, 8), (1, 12, 7, 12)] {
            let wt = w(pn, pd, qn, qd);
            let (para, trap) = para_trap_split(&wt);
            assert_eq!(&para + &trap, pmf(&wt).p4, "split at {pn}/{pd},{qn}/{qd}");
            assert!(para.is_positive() && trap.is_positive());
        }
    }

    #[test]
    fn variance_formula_and_cross_check() {
        let (mean, var) = mean_variance(&w(1, 3, 1, 3));
        assert_eq!(mean, rat(4, 1));
        assert_eq!(var, rat(1, 2));
        let (mean, var) = mean_variance(&w(1, 5, 2, 5));
        assert_eq!(mean, rat(4, 1));
        assert_eq!(var, rat(4, 9));
        // Σ n² pₙ − 16 equals the closed form
        for (pn, pd, qn, qd) in [(1, 5, 2, 5), (1, 4, 2, 4), (2, 11, 5, 11)] {
            let wt = w(pn, pd, qn, qd);
            let f = pmf(&wt);
            let second = rat_i64(9) * &f.p3 + rat_i64(16) * &f.p4 + rat_i64(25) * &f.p5
                + rat_i64(36) * &f.p6;
            let (_, var) = mean_variance(&wt);
            assert_eq!(second - rat_i64(16), var);
        }
    }

    #[test]
    fn probabilities_in_unit_interval_with_degenerate_limits() {
        for (pn, pd, qn, qd) in [(1, 3, 1, 3), (1, 100, 49, 100), (1, 1000, 499, 1000)] {
            let f = pmf(&w(pn, pd, qn, qd));
            for n in 3..=6 {
                let v = f.component(n);
                assert!(v.is_positive() && v < &Rat::one());
            }
        }
        // p → 0 along q = 1/2: p4 → 1, the others → 0
        let f = pmf(&Weights::new(1e-6, 0.5).unwrap());
        assert!(f.p4.to_f64().unwrap() > 0.999);
        assert!(f.p3.to_f64().unwrap() < 1e-3);
        assert!(f.p5.to_f64().unwrap() < 1e-3);
        assert!(f.p6.to_f64().unwrap() < 1e-6);
    }

    #[test]
    fn sign_variants_are_negative() {
        for (pn, pd, qn, qd) in [(1, 3, 1, 3), (1, 5, 2, 5), (3, 10, 3, 10)] {
            let wt = w(pn, pd, qn, qd);
            let f = pmf(&wt);
            assert_eq!(pentagon_probability_sign_variant(&wt), -f.p5.clone());
            assert_eq!(hexagon_probability_sign_variant(&wt), -f.p6.clone());
            assert!(pentagon_probability_sign_variant(&wt).is_negative());
            assert!(hexagon_probability_sign_variant(&wt).is_negative());
        }
    }

    #[test]
    fn extrema_scan_at_coarse_step() {
        let report = verify_extrema(&rat(1, 30)).unwrap();
        let third = rat(10, 30);
        assert!(report.all_at(&third, &third));
        assert_eq!(report.values[0], rat(2, 9));
        assert_eq!(report.values[1], rat(7, 12));
        assert_eq!(report.values[2], rat(1, 6));
        assert_eq!(report.values[3], rat(1, 36));
        assert!(report.strict.iter().all(|&s| s));
    }

    #[test]
    fn simplex_grid_counts() {
        // step 1/4: points (i/4, j/4) with i,j ≥ 1, i+j ≤ 3 → 3 points
        let pts = simplex_grid(&rat(1, 4)).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(simplex_grid(&rat(1, 3)).is_err());
        let pts = simplex_grid(&rat(1, 21)).unwrap();
        assert_eq!(pts.len(), 190); // Σ_{i=1}^{19} (20 − i)
    }

    #[test]
    fn rat_strings() {
        assert_eq!(rat_string(&rat(7, 12)), "7/12");
        assert_eq!(rat_string(&rat(4, 1)), "4");
    }
}
