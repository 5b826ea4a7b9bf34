//! The twenty side-chain configurations of the typical cell and their
//! integration regions.
//!
//! A cell with n vertices is parametrized by the angle tuple
//! (φ₀, …, φ_{n−1}) and the first n−2 side lengths; the last two sides are
//! linear combinations of the others forced by closure. Each admissible
//! angle tuple carries per-variable integration limits; some lower limits
//! are strictly positive because short sides would force the chain to cut
//! the first side before reaching the horizontal. One pentagon and the
//! hexagon tuple split into two sub-regions where the binding limit changes
//! form; the sub-regions partition the parent region.
//!
//! Conditioned on a configuration, the side lengths (z₁, …, z_{n−2}) have
//! density (2/λ)(√3/2)^{n−1} exp(−½ Σᵢ zᵢ λ(φᵢ)) on the region, with the
//! angle weights looked up through the sign convention φ ↦ π − |φ| for
//! φ < 0.

use crate::angle::{sin_deg, SignedAngle, SQRT3};
use crate::error::{Error, Result};
use crate::weights::{lambda_of, lambda_total, Weights};

/// One integration limit for a side length: constant + Σ coeffᵢ·zᵢ over the
/// earlier variables, or +∞.
#[derive(Clone, Debug)]
pub struct LimitExpr {
    pub constant: f64,
    pub coeffs: Vec<i8>,
    pub infinite: bool,
}

impl LimitExpr {
    pub fn zero() -> Self {
        LimitExpr { constant: 0.0, coeffs: Vec::new(), infinite: false }
    }

    pub fn unbounded() -> Self {
        LimitExpr { constant: 0.0, coeffs: Vec::new(), infinite: true }
    }

    pub fn combo(coeffs: &[i8]) -> Self {
        LimitExpr { constant: 0.0, coeffs: coeffs.to_vec(), infinite: false }
    }

    /// Evaluate at a prefix (z₁, …, z_{i−1}); +∞ for unbounded limits.
    pub fn eval(&self, prefix: &[f64]) -> f64 {
        if self.infinite {
            return f64::INFINITY;
        }
        let mut v = self.constant;
        for (c, z) in self.coeffs.iter().zip(prefix) {
            v += *c as f64 * z;
        }
        v
    }
}

/// Quadrilateral subtype.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadKind {
    Para,
    Trap,
}

/// One configuration row: angle tuple, per-variable limits, closing
/// coefficients for the last two sides, and bookkeeping for subtype and
/// sub-region splits.
#[derive(Clone, Debug)]
pub struct CaseSpec {
    pub n: usize,
    pub label: &'static str,
    /// (φ₀, …, φ_{n−1}); the closing side direction φₙ = φ₀ − π is implied.
    pub angles: Vec<SignedAngle>,
    /// Lower/upper limits for z₁ … z_{n−2}.
    pub lower: Vec<LimitExpr>,
    pub upper: Vec<LimitExpr>,
    /// Coefficients of z_{n−1} and zₙ over (z₁, …, z_{n−2}).
    pub closing: [Vec<i8>; 2],
    pub quad_kind: Option<QuadKind>,
    /// For sub-region rows: (parent label, 1-based index of the variable
    /// whose limits the split rewrites).
    pub split: Option<(&'static str, usize)>,
}

impl CaseSpec {
    /// Number of free variables, n − 2.
    pub fn dim(&self) -> usize {
        self.n - 2
    }

    /// Side directions φ₁, …, φₙ with φₙ = φ₀ − π.
    pub fn side_angles(&self) -> Vec<SignedAngle> {
        let mut out: Vec<SignedAngle> = self.angles[1..].to_vec();
        out.push(self.angles[0].back_direction());
        out
    }

    /// All n side lengths from the free variables.
    pub fn fill_sides(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len(), self.dim());
        let mut sides = z.to_vec();
        for coeffs in &self.closing {
            let s: f64 = coeffs.iter().zip(z).map(|(c, z)| *c as f64 * z).sum();
            sides.push(s);
        }
        sides
    }

    /// Whether a point satisfies every limit constraint.
    pub fn in_region(&self, z: &[f64]) -> bool {
        if z.len() != self.dim() {
            return false;
        }
        for i in 0..z.len() {
            let lo = self.lower[i].eval(&z[..i]);
            let hi = self.upper[i].eval(&z[..i]);
            if !(z[i] > lo && z[i] < hi) {
                return false;
            }
        }
        true
    }

    /// Product of direction weights over the angle tuple.
    pub fn angle_mass(&self, w: &Weights) -> f64 {
        self.angles.iter().map(|a| w.of(a.canonical())).product()
    }

    /// Exponential rate of zᵢ (1-based) in the joint density after the last
    /// two sides are substituted: ½(λ(φᵢ) + aᵢ λ(φ_{n−1}) + bᵢ λ(φₙ)).
    pub fn effective_rate(&self, i: usize, w: &Weights) -> f64 {
        let side_angles = self.side_angles();
        let lam = |k: usize| lambda_of(side_angles[k].canonical(), w);
        let a = self.closing[0][i - 1] as f64;
        let b = self.closing[1][i - 1] as f64;
        0.5 * (lam(i - 1) + a * lam(self.n - 2) + b * lam(self.n - 1))
    }

    /// The polygon obtained by walking the side chain from the origin.
    pub fn chain_polygon(&self, z: &[f64]) -> crate::geometry::Polygon {
        let sides = self.fill_sides(z);
        let angles = self.side_angles();
        crate::geometry::Polygon::from_side_chain(
            crate::geometry::Point::new(0.0, 0.0),
            sides.iter().zip(&angles).map(|(&l, a)| (l, a.radians())).collect(),
        )
    }

    /// The joint density of (z₁, …, z_{n−2}) at the case's angle tuple,
    /// with respect to Lebesgue measure times the n-fold angle law. Zero
    /// outside the limit region. The angle-tuple probability is not
    /// included.
    pub fn density_value(&self, z: &[f64], w: &Weights) -> f64 {
        if !self.in_region(z) {
            return 0.0;
        }
        let sides = self.fill_sides(z);
        let side_angles = self.side_angles();
        let mut exponent = 0.0;
        for (len, ang) in sides.iter().zip(&side_angles) {
            exponent += len * lambda_of(ang.canonical(), w);
        }
        let prefactor = (2.0 / lambda_total(w)) * (SQRT3 / 2.0).powi(self.n as i32 - 1);
        prefactor * (-0.5 * exponent).exp()
    }
}

/// Upper limit of zᵢ from the general formula:
/// −csc(φᵢ−φ₀) Σ_{j<i} zⱼ sin(φⱼ−φ₀) when φᵢ < φ₀, else +∞.
pub fn upper_limit(case: &CaseSpec, i: usize, z_prefix: &[f64]) -> f64 {
    assert!((1..=case.dim()).contains(&i), "variable index {i} out of range");
    assert_eq!(z_prefix.len(), i - 1);
    let phi0 = case.angles[0];
    let phi_i = case.angles[i];
    if phi_i >= phi0 {
        return f64::INFINITY;
    }
    let csc = 1.0 / sin_deg((phi_i.degrees() - phi0.degrees()) as i32);
    let mut sum = 0.0;
    for (j, z) in z_prefix.iter().enumerate() {
        sum += z * sin_deg((case.angles[j + 1].degrees() - phi0.degrees()) as i32);
    }
    -csc * sum
}

fn ang(degrees: &[i16]) -> Vec<SignedAngle> {
    degrees.iter().map(|&d| SignedAngle::from_degrees(d)).collect()
}

#[allow(clippy::too_many_arguments)]
fn row(
    n: usize,
    label: &'static str,
    degrees: &[i16],
    lower: &[Option<&[i8]>],
    upper: &[Option<&[i8]>],
    closing_a: &[i8],
    closing_b: &[i8],
    quad_kind: Option<QuadKind>,
    split: Option<(&'static str, usize)>,
) -> CaseSpec {
    let limit = |slot: &Option<&[i8]>, is_upper: bool| match slot {
        None => {
            if is_upper {
                LimitExpr::unbounded()
            } else {
                LimitExpr::zero()
            }
        }
        Some(c) => LimitExpr::combo(c),
    };
    CaseSpec {
        n,
        label,
        angles: ang(degrees),
        lower: lower.iter().map(|s| limit(s, false)).collect(),
        upper: upper.iter().map(|s| limit(s, true)).collect(),
        closing: [closing_a.to_vec(), closing_b.to_vec()],
        quad_kind,
        split,
    }
}

/// The configuration rows for a given vertex number: 2 triangles,
/// 9 quadrilaterals, 7 pentagon rows (one case split in two) and 2 hexagon
/// rows (one case split in two).
pub fn case_table(n: usize) -> Result<Vec<CaseSpec>> {
    match n {
        3 => Ok(vec![
            // Closure forces z₂ = z₃ = z₁: the triangle is regular.
            row(3, "tri-1", &[0, 60, -60], &[None], &[None], &[1], &[1], None, None),
            row(3, "tri-2", &[60, 120, 0], &[None], &[None], &[1], &[1], None, None),
        ]),
        4 => Ok(vec![
            row(4, "quad-1", &[0, 60, 0, -120], &[None, None], &[None, None], &[1, 0], &[0, 1], Some(QuadKind::Para), None),
            row(4, "quad-2", &[0, 60, 0, -60], &[None, None], &[None, None], &[1, 0], &[1, 1], Some(QuadKind::Trap), None),
            row(4, "quad-3", &[0, 60, -60, -120], &[None, None], &[None, Some(&[1])], &[1, -1], &[0, 1], Some(QuadKind::Trap), None),
            // z₂ must be at least z₁, otherwise the third line cuts the
            // first side before reaching the horizontal.
            row(4, "quad-4", &[0, 120, 0, -120], &[None, Some(&[1])], &[None, None], &[1, 0], &[-1, 1], Some(QuadKind::Trap), None),
            row(4, "quad-5", &[0, 120, 0, -60], &[None, None], &[None, None], &[1, 0], &[0, 1], Some(QuadKind::Para), None),
            row(4, "quad-6", &[0, 120, 60, -60], &[None, None], &[None, None], &[1, 1], &[0, 1], Some(QuadKind::Trap), None),
            row(4, "quad-7", &[60, 120, 60, 0], &[None, None], &[None, None], &[1, 0], &[1, 1], Some(QuadKind::Trap), None),
            row(4, "quad-8", &[60, 120, 60, -60], &[None, None], &[None, None], &[1, 0], &[0, 1], Some(QuadKind::Para), None),
            row(4, "quad-9", &[60, 120, 0, -60], &[None, None], &[None, Some(&[1])], &[1, -1], &[0, 1], Some(QuadKind::Trap), None),
        ]),
        5 => Ok(vec![
            row(5, "pent-1", &[0, 60, 0, -60, -120], &[None, None, None], &[None, None, Some(&[1])], &[1, 0, -1], &[0, 1, 1], None, None),
            // pent-2 splits on the relation of z₂ to z₁: the vertically
            // stretched branch (z₂ > z₁) keeps lower limit 0 on z₃; the
            // horizontally stretched branch needs z₃ > z₁ − z₂.
            row(5, "pent-2.1", &[0, 120, 0, -60, -120], &[None, Some(&[1]), None], &[None, None, Some(&[1])], &[1, 0, -1], &[-1, 1, 1], None, Some(("pent-2", 2))),
            row(5, "pent-2.2", &[0, 120, 0, -60, -120], &[None, None, Some(&[1, -1])], &[None, Some(&[1]), Some(&[1])], &[1, 0, -1], &[-1, 1, 1], None, Some(("pent-2", 2))),
            row(5, "pent-3", &[0, 120, 60, 0, -60], &[None, None, None], &[None, None, None], &[1, 1, 0], &[0, 1, 1], None, None),
            row(5, "pent-4", &[0, 120, 60, 0, -120], &[None, None, Some(&[1])], &[None, None, None], &[1, 1, 0], &[-1, 0, 1], None, None),
            row(5, "pent-5", &[0, 120, 60, -60, -120], &[None, None, Some(&[1])], &[None, None, Some(&[1, 1])], &[1, 1, -1], &[-1, 0, 1], None, None),
            row(5, "pent-6", &[60, 120, 60, 0, -60], &[None, None, None], &[None, None, Some(&[1])], &[1, 0, -1], &[0, 1, 1], None, None),
        ]),
        6 => Ok(vec![
            // The single hexagon angle tuple splits on z₃ against z₁; the
            // fifth line must clear the first side, which binds z₄ from
            // below only while z₃ < z₁.
            row(6, "hex-1.1", &[0, 120, 60, 0, -60, -120], &[None, None, None, Some(&[1, 0, -1])], &[None, None, Some(&[1]), Some(&[1, 1])], &[1, 1, 0, -1], &[-1, 0, 1, 1], None, Some(("hex-1", 3))),
            row(6, "hex-1.2", &[0, 120, 60, 0, -60, -120], &[None, None, Some(&[1]), None], &[None, None, None, Some(&[1, 1])], &[1, 1, 0, -1], &[-1, 0, 1, 1], None, Some(("hex-1", 3))),
        ]),
        _ => Err(Error::InvalidConfig(format!("vertex number {n} outside 3..=6"))),
    }
}

/// All twenty rows in vertex-number order.
pub fn all_cases() -> Vec<CaseSpec> {
    (3..=6).flat_map(|n| case_table(n).unwrap()).collect()
}
