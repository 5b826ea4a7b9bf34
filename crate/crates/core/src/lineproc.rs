//! Sampling the stationary line process restricted to a square window.
//!
//! Each direction family k carries an independent homogeneous Poisson process
//! of perpendicular offsets with rate w_k (intensity fixed to 1; the vertex
//! number of the typical cell does not depend on it). Offsets are drawn on
//! [−R√2, R√2], which covers the circumscribed disk of the square for every
//! family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::angle::CanonicalAngle;
use crate::error::{Error, Result};
use crate::geometry::DirectedLine;
use crate::weights::{Weights, WeightsJson};

/// Offsets of two lines in one family closer than this are resampled.
pub const OFFSET_TOL: f64 = 1e-12;

/// The observation window [−R, R]² with an inner box [−Rf, Rf]².
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Window {
    pub half_width: f64,
    pub inner_fraction: f64,
}

impl Window {
    pub const DEFAULT_HALF_WIDTH: f64 = 60.0;
    pub const DEFAULT_INNER_FRACTION: f64 = 0.25;

    pub fn new(half_width: f64) -> Result<Self> {
        Self::with_inner_fraction(half_width, Self::DEFAULT_INNER_FRACTION)
    }

    pub fn with_inner_fraction(half_width: f64, inner_fraction: f64) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "window half-width must be positive, got {half_width}"
            )));
        }
        if !inner_fraction.is_finite() || inner_fraction <= 0.0 || inner_fraction >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "inner fraction must lie in (0,1), got {inner_fraction}"
            )));
        }
        Ok(Window { half_width, inner_fraction })
    }

    /// Half-width of the offset sampling interval: R√2, the circumradius of
    /// the square. Every line with |offset| ≤ R√2 meets the closed disk of
    /// that radius, and every line meeting the square is covered.
    pub fn offset_bound(&self) -> f64 {
        self.half_width * std::f64::consts::SQRT_2
    }

    pub fn inner_half_width(&self) -> f64 {
        self.half_width * self.inner_fraction
    }

    pub fn inner_area(&self) -> f64 {
        let h = self.inner_half_width();
        4.0 * h * h
    }

    pub fn contains_inner(&self, x: f64, y: f64) -> bool {
        let h = self.inner_half_width();
        x.abs() <= h && y.abs() <= h
    }
}

impl Default for Window {
    fn default() -> Self {
        Window {
            half_width: Self::DEFAULT_HALF_WIDTH,
            inner_fraction: Self::DEFAULT_INNER_FRACTION,
        }
    }
}

/// One sampled realization of the line process on a window.
#[derive(Clone, Debug)]
pub struct LineRealization {
    pub weights: Weights,
    pub window: Window,
    pub seed: u64,
    pub lines: Vec<DirectedLine>,
}

impl LineRealization {
    pub fn family_count(&self, family: CanonicalAngle) -> usize {
        self.lines.iter().filter(|l| l.family == family).count()
    }

    pub fn to_json(&self) -> String {
        let json = RealizationJson {
            schema_version: crate::SCHEMA_VERSION,
            seed: self.seed,
            r: self.window.half_width,
            weights: WeightsJson::from(&self.weights),
            lines: self
                .lines
                .iter()
                .map(|l| LineJson { family: l.family.index() as u8, offset: l.offset })
                .collect(),
        };
        serde_json::to_string_pretty(&json).expect("realization serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: RealizationJson = serde_json::from_str(text)?;
        let weights = Weights::new(json.weights.p, json.weights.q)?;
        let window = Window::new(json.r)?;
        let lines = json
            .lines
            .iter()
            .enumerate()
            .map(|(id, l)| {
                let family = CanonicalAngle::from_index(l.family as usize).ok_or_else(|| {
                    Error::InvalidConfig(format!("line family index {} out of range", l.family))
                })?;
                Ok(DirectedLine::new(family, l.offset, id as u32))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LineRealization { weights, window, seed: json.seed, lines })
    }
}

#[derive(Serialize, Deserialize)]
struct RealizationJson {
    schema_version: u32,
    seed: u64,
    #[serde(rename = "R")]
    r: f64,
    weights: WeightsJson,
    lines: Vec<LineJson>,
}

#[derive(Serialize, Deserialize)]
struct LineJson {
    family: u8,
    offset: f64,
}

/// Draw a realization. Deterministic in (weights, window, seed); each family
/// consumes an independent RNG substream, so perturbing one weight does not
/// reshuffle the other families at fixed seed.
pub fn sample_lines(w: &Weights, window: &Window, seed: u64) -> LineRealization {
    let bound = window.offset_bound();
    let mut lines = Vec::new();
    let mut id = 0u32;
    for family in CanonicalAngle::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(family.index() as u64);
        let mean = w.of(family) * 2.0 * bound;
        let count = if mean > 0.0 {
            Poisson::new(mean).expect("positive mean").sample(&mut rng) as u64
        } else {
            0
        };
        let mut offsets: Vec<f64> = Vec::with_capacity(count as usize);
        for _ in 0..count {
            loop {
                let off = rng.random_range(-bound..bound);
                if offsets.iter().all(|&o| (o - off).abs() >= OFFSET_TOL) {
                    offsets.push(off);
                    break;
                }
            }
        }
        for off in offsets {
            lines.push(DirectedLine::new(family, off, id));
            id += 1;
        }
    }
    LineRealization { weights: w.clone(), window: *window, seed, lines }
}

/// Order-of-magnitude estimate of the number of cells whose lex-min vertex
/// falls in the inner box: pairwise intersection intensity times area.
pub fn expected_cells_in_box(w: &Weights, window: &Window) -> f64 {
    let mut intensity = 0.0;
    for k in 0..3 {
        for l in (k + 1)..3 {
            let a = CanonicalAngle::from_index(k).unwrap();
            let b = CanonicalAngle::from_index(l).unwrap();
            intensity += w.of(a) * w.of(b) * (a.radians() - b.radians()).sin().abs();
        }
    }
    intensity * window.inner_area()
}
