//! The three line directions and the signed side angles built from them.
//!
//! Every line in the process points along one of three equally spread
//! directions 0, π/3 and 2π/3. Side chains of cells additionally use the
//! negative counterparts −π/3, −2π/3 and −π; a negative angle φ is
//! identified with π − |φ| when looking up direction weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// √3 to full f64 precision.
pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// One of the three admissible line directions, measured against the
/// positive x-axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalAngle {
    /// 0
    Deg0,
    /// π/3
    Deg60,
    /// 2π/3
    Deg120,
}

impl CanonicalAngle {
    pub const ALL: [CanonicalAngle; 3] =
        [CanonicalAngle::Deg0, CanonicalAngle::Deg60, CanonicalAngle::Deg120];

    pub fn index(self) -> usize {
        match self {
            CanonicalAngle::Deg0 => 0,
            CanonicalAngle::Deg60 => 1,
            CanonicalAngle::Deg120 => 2,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }

    pub fn radians(self) -> f64 {
        self.index() as f64 * std::f64::consts::FRAC_PI_3
    }

    /// Unit direction vector (cos θ, sin θ), with exact half/√3-half entries.
    pub fn direction(self) -> (f64, f64) {
        match self {
            CanonicalAngle::Deg0 => (1.0, 0.0),
            CanonicalAngle::Deg60 => (0.5, SQRT3 / 2.0),
            CanonicalAngle::Deg120 => (-0.5, SQRT3 / 2.0),
        }
    }

    /// Unit normal, the direction rotated by +π/2.
    pub fn normal(self) -> (f64, f64) {
        let (dx, dy) = self.direction();
        (-dy, dx)
    }
}

/// A signed multiple of 60° in {−180°, −120°, −60°, 0°, 60°, 120°}, the
/// angle alphabet of the side chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedAngle(i16);

impl SignedAngle {
    pub const fn from_degrees(deg: i16) -> Self {
        assert!(matches!(deg, -180 | -120 | -60 | 0 | 60 | 120));
        SignedAngle(deg)
    }

    pub fn degrees(self) -> i16 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0 as f64 * std::f64::consts::PI / 180.0
    }

    pub fn sin(self) -> f64 {
        sin_deg(self.0 as i32)
    }

    pub fn cos(self) -> f64 {
        cos_deg(self.0 as i32)
    }

    /// The angle of the closing side of a chain that starts at angle `self`:
    /// φ − π.
    pub fn back_direction(self) -> SignedAngle {
        assert!(self.0 >= 0, "back direction is only taken of φ₀ ∈ {{0, 60, 120}}");
        SignedAngle(self.0 - 180)
    }

    /// Weight-lookup representative: negative angles map to π − |φ|.
    pub fn canonical(self) -> CanonicalAngle {
        let deg = if self.0 < 0 { 180 + self.0 } else { self.0 };
        match deg {
            0 => CanonicalAngle::Deg0,
            60 => CanonicalAngle::Deg60,
            120 => CanonicalAngle::Deg120,
            _ => unreachable!("signed angle {} has no canonical image", self.0),
        }
    }
}

/// Exact sine for multiples of 60°.
pub(crate) fn sin_deg(deg: i32) -> f64 {
    match deg.rem_euclid(360) {
        0 | 180 => 0.0,
        60 | 120 => SQRT3 / 2.0,
        240 | 300 => -SQRT3 / 2.0,
        d => unreachable!("{d}° is not a multiple of 60° in range"),
    }
}

/// Exact cosine for multiples of 60°.
pub(crate) fn cos_deg(deg: i32) -> f64 {
    match deg.rem_euclid(360) {
        0 => 1.0,
        60 | 300 => 0.5,
        120 | 240 => -0.5,
        180 => -1.0,
        d => unreachable!("{d}° is not a multiple of 60° in range"),
    }
}

/// Map a signed angle in radians onto its direction representative.
///
/// Nonnegative members of {0, π/3, 2π/3} map to themselves; the negative
/// values −π/3, −2π/3 and −π map to π − |φ|. Anything else is rejected.
pub fn normalize_angle(phi: f64) -> Result<CanonicalAngle> {
    const TOL: f64 = 1e-9;
    let step = std::f64::consts::FRAC_PI_3;
    for k in [-3i32, -2, -1, 0, 1, 2] {
        if (phi - k as f64 * step).abs() < TOL {
            let canon = if k < 0 { 3 + k } else { k };
            return Ok(CanonicalAngle::from_index(canon as usize).unwrap());
        }
    }
    Err(Error::InadmissibleAngle(phi))
}
