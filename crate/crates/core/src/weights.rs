//! Direction weights (p, q, 1−p−q) and the intensity functionals λ(φ), λ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::angle::{CanonicalAngle, SQRT3};
use crate::error::{Error, Result};

pub type Rat = BigRational;

pub(crate) fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The weight pair (p, q) of the directional distribution, with
/// r = 1 − p − q carried implicitly.
///
/// Both an f64 view and an exact rational view are kept. Fraction input
/// ("1/3") stays exact; decimal input is converted to its exact binary
/// rational, so downstream rational arithmetic is always exact in the inputs.
#[derive(Clone, Debug)]
pub struct Weights {
    p: f64,
    q: f64,
    p_exact: Rat,
    q_exact: Rat,
    exact_input: bool,
}

impl PartialEq for Weights {
    fn eq(&self, other: &Self) -> bool {
        self.p_exact == other.p_exact && self.q_exact == other.q_exact
    }
}

impl Weights {
    /// Build from floating-point weights.
    pub fn new(p: f64, q: f64) -> Result<Self> {
        let p_exact = Rat::from_float(p)
            .ok_or_else(|| invalid(p, q, "p is not finite"))?;
        let q_exact = Rat::from_float(q)
            .ok_or_else(|| invalid(p, q, "q is not finite"))?;
        Self::from_rationals(p_exact, q_exact, false)
    }

    /// Build from exact fractions p = pn/pd, q = qn/qd.
    pub fn from_fractions(pn: i64, pd: i64, qn: i64, qd: i64) -> Result<Self> {
        if pd == 0 || qd == 0 {
            return Err(invalid(f64::NAN, f64::NAN, "zero denominator"));
        }
        let p = Rat::new(BigInt::from(pn), BigInt::from(pd));
        let q = Rat::new(BigInt::from(qn), BigInt::from(qd));
        Self::from_rationals(p, q, true)
    }

    pub fn from_rationals(p_exact: Rat, q_exact: Rat, exact_input: bool) -> Result<Self> {
        let one = Rat::one();
        let ok = p_exact.is_positive()
            && q_exact.is_positive()
            && p_exact < one
            && q_exact < one
            && (&p_exact + &q_exact) < one;
        if !ok {
            return Err(Error::InvalidWeights {
                p: display_rat(&p_exact),
                q: display_rat(&q_exact),
                reason: "need 0 < p < 1, 0 < q < 1 and p + q < 1".into(),
            });
        }
        let p = p_exact.to_f64().unwrap();
        let q = q_exact.to_f64().unwrap();
        Ok(Weights { p, q, p_exact, q_exact, exact_input })
    }

    /// Parse weight strings that are either fractions ("1/3") or decimals ("0.25").
    pub fn parse(p: &str, q: &str) -> Result<Self> {
        let p_rat = parse_weight(p)?;
        let q_rat = parse_weight(q)?;
        let exact = p.contains('/') && q.contains('/');
        Self::from_rationals(p_rat, q_rat, exact)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r(&self) -> f64 {
        1.0 - self.p - self.q
    }

    pub fn p_exact(&self) -> &Rat {
        &self.p_exact
    }

    pub fn q_exact(&self) -> &Rat {
        &self.q_exact
    }

    pub fn r_exact(&self) -> Rat {
        Rat::one() - &self.p_exact - &self.q_exact
    }

    /// True when both weights were given as fractions, so reports may render
    /// exact num/den strings.
    pub fn exact_input(&self) -> bool {
        self.exact_input
    }

    /// Weight of a direction: p, q or 1−p−q.
    pub fn of(&self, angle: CanonicalAngle) -> f64 {
        match angle {
            CanonicalAngle::Deg0 => self.p,
            CanonicalAngle::Deg60 => self.q,
            CanonicalAngle::Deg120 => self.r(),
        }
    }

    pub fn of_exact(&self, angle: CanonicalAngle) -> Rat {
        match angle {
            CanonicalAngle::Deg0 => self.p_exact.clone(),
            CanonicalAngle::Deg60 => self.q_exact.clone(),
            CanonicalAngle::Deg120 => self.r_exact(),
        }
    }
}

fn invalid(p: f64, q: f64, reason: &str) -> Error {
    Error::InvalidWeights { p: p.to_string(), q: q.to_string(), reason: reason.into() }
}

/// Small fractions verbatim, everything else (e.g. binary rationals from
/// float input) as a decimal.
fn display_rat(x: &Rat) -> String {
    if x.denom() <= &BigInt::from(1_000_000) {
        x.to_string()
    } else {
        format!("{}", x.to_f64().unwrap())
    }
}

fn parse_weight(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad fraction numerator in {s:?}")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad fraction denominator in {s:?}")))?;
        if d == 0 {
            return Err(Error::InvalidConfig(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(BigInt::from(n), BigInt::from(d)))
    } else {
        let v: f64 = s
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse weight {s:?}")))?;
        Rat::from_float(v).ok_or_else(|| Error::InvalidConfig(format!("weight {s:?} not finite")))
    }
}

/// Serialized form used inside realization JSON.
#[derive(Serialize, Deserialize)]
pub(crate) struct WeightsJson {
    pub p: f64,
    pub q: f64,
}

impl From<&Weights> for WeightsJson {
    fn from(w: &Weights) -> Self {
        WeightsJson { p: w.p(), q: w.q() }
    }
}

/// λ(φ) = p|sin φ| + q|sin(π/3 − φ)| + (1 − p − q)|sin(2π/3 − φ)|.
pub fn lambda_of(phi: CanonicalAngle, w: &Weights) -> f64 {
    let phi = phi.radians();
    let third = std::f64::consts::FRAC_PI_3;
    w.p() * phi.sin().abs()
        + w.q() * (third - phi).sin().abs()
        + w.r() * (2.0 * third - phi).sin().abs()
}

/// λ = √3 (p + q − p² − q² − pq), the total intensity functional.
pub fn lambda_total(w: &Weights) -> f64 {
    let (p, q) = (w.p(), w.q());
    SQRT3 * (p + q - p * p - q * q - p * q)
}

/// Exact value of λ/√3 = p + q − p² − q² − pq = pq + qr + rp.
pub fn lambda_scalar_exact(w: &Weights) -> Rat {
    let p = w.p_exact();
    let q = w.q_exact();
    p + q - p * p - q * q - p * q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: f64, q: f64) -> Weights {
        Weights::new(p, q).unwrap()
    }

    #[test]
    fn construction_rejects_bad_weights() {
        assert!(Weights::new(0.0, 0.5).is_err());
        assert!(Weights::new(0.5, 0.0).is_err());
        assert!(Weights::new(0.5, 0.6).is_err());
        assert!(Weights::new(1.0, 0.0).is_err());
        assert!(Weights::new(-0.1, 0.5).is_err());
        assert!(Weights::new(0.5, 0.5).is_err());
        assert!(Weights::new(0.3, 0.3).is_ok());
    }

    #[test]
    fn fraction_path_is_exact() {
        let w = Weights::from_fractions(1, 3, 1, 3).unwrap();
        assert_eq!(w.p_exact(), &Rat::new(BigInt::from(1), BigInt::from(3)));
        assert!(w.exact_input());
        let r = w.r_exact();
        assert_eq!(r, Rat::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn parse_accepts_fractions_and_decimals() {
        let w1 = Weights::parse("1/3", "1/3").unwrap();
        assert!(w1.exact_input());
        let w2 = Weights::parse("0.2", "0.5").unwrap();
        assert!(!w2.exact_input());
        assert_eq!(w2.p(), 0.2);
        assert!(Weights::parse("0.5", "0.6").is_err());
        assert!(Weights::parse("x", "0.1").is_err());
    }

    // λ(φ) expands to (√3/2)(1−p), (√3/2)(1−q), (√3/2)(p+q) on the three
    // directions; the implementation evaluates the defining sum instead.
    #[test]
    fn lambda_matches_expanded_forms() {
        for (p, q) in [(1.0 / 3.0, 1.0 / 3.0), (0.2, 0.5), (0.7, 0.1), (0.05, 0.9)] {
            let w = w(p, q);
            let half = SQRT3 / 2.0;
            let cases = [
                (CanonicalAngle::Deg0, half * (1.0 - p)),
                (CanonicalAngle::Deg60, half * (1.0 - q)),
                (CanonicalAngle::Deg120, half * (p + q)),
            ];
            for (phi, expect) in cases {
                assert!((lambda_of(phi, &w) - expect).abs() < 1e-12, "λ({phi:?}) at ({p},{q})");
                assert!(lambda_of(phi, &w) > 0.0);
            }
        }
    }

    #[test]
    fn lambda_values_sum_to_sqrt3() {
        for (p, q) in [(1.0 / 3.0, 1.0 / 3.0), (0.2, 0.5), (0.01, 0.01), (0.45, 0.45)] {
            let w = w(p, q);
            let sum: f64 = CanonicalAngle::ALL.iter().map(|&a| lambda_of(a, &w)).sum();
            assert!((sum - SQRT3).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_total_examples() {
        let w13 = w(1.0 / 3.0, 1.0 / 3.0);
        assert!((lambda_total(&w13) - SQRT3 / 3.0).abs() < 1e-12);
        let w25 = w(0.2, 0.5);
        assert!((lambda_total(&w25) - SQRT3 * 0.31).abs() < 1e-12);
    }

    // p + q − p² − q² − pq = pq + qr + rp with r = 1 − p − q.
    #[test]
    fn lambda_scalar_polynomial_identity() {
        let w = Weights::from_fractions(1, 5, 2, 5).unwrap();
        let (p, q) = (w.p_exact().clone(), w.q_exact().clone());
        let r = w.r_exact();
        let sym = &p * &q + &q * &r + &r * &p;
        assert_eq!(lambda_scalar_exact(&w), sym);
    }
}
