//! Direct sampling of typical cells: pick a configuration with probability
//! proportional to its integral, then draw the free side lengths from the
//! exponential density restricted to the configuration region.
//!
//! Configurations whose region is the full product (0,∞)^{n−2} are sampled
//! by inverse CDF, one exponential per variable. Regions with cross-variable
//! constraints are sampled by rejection from the unconstrained exponential
//! product; accepted points follow the restricted density exactly. A pure
//! chain of truncated exponentials would not, because an early draw also
//! tilts the mass available to the later ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cases::{all_cases, CaseSpec};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::geometry::{closing_residual, Polygon};
use crate::quadrature::integrate_all;
use crate::weights::Weights;

const MAX_REJECTIONS: u64 = 1_000_000;
const CLOSURE_TOL: f64 = 1e-9;

/// One sampled typical cell.
#[derive(Clone, Debug, Serialize)]
pub struct CellSample {
    pub label: String,
    /// All n side lengths.
    pub z: Vec<f64>,
    pub polygon: Polygon,
    pub density_weight: f64,
}

/// Sampler with the per-configuration mixture frozen for one weight pair.
pub struct TypicalCellSampler {
    weights: Weights,
    cases: Vec<CaseSpec>,
    cumulative: Vec<f64>,
}

impl TypicalCellSampler {
    pub fn new(weights: &Weights) -> Result<Self> {
        let cases = all_cases();
        let integrals = integrate_all(weights, ExecMode::Parallel)?;
        let total: f64 = integrals.iter().map(|c| c.probability).sum();
        let mut acc = 0.0;
        let cumulative = integrals
            .iter()
            .map(|c| {
                acc += c.probability / total;
                acc
            })
            .collect();
        Ok(TypicalCellSampler { weights: weights.clone(), cases, cumulative })
    }

    /// Mixture probability of each configuration.
    pub fn case_probabilities(&self) -> Vec<(&'static str, f64)> {
        let mut prev = 0.0;
        self.cases
            .iter()
            .zip(&self.cumulative)
            .map(|(c, &cum)| {
                let p = cum - prev;
                prev = cum;
                (c.label, p)
            })
            .collect()
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Result<CellSample> {
        let u: f64 = rng.random();
        let idx = self.cumulative.iter().position(|&c| u <= c).unwrap_or(self.cases.len() - 1);
        self.sample_case(idx, rng)
    }

    pub fn sample_case(&self, idx: usize, rng: &mut ChaCha8Rng) -> Result<CellSample> {
        let case = &self.cases[idx];
        let m = case.dim();
        let rates: Vec<f64> = (1..=m).map(|i| case.effective_rate(i, &self.weights)).collect();

        let z = if region_is_product(case) {
            (0..m).map(|i| exp_draw(rng, rates[i])).collect::<Vec<f64>>()
        } else {
            let mut attempts = 0u64;
            loop {
                attempts += 1;
                if attempts > MAX_REJECTIONS {
                    return Err(Error::SamplerStall {
                        label: case.label.to_string(),
                        attempts: MAX_REJECTIONS,
                    });
                }
                let draw: Vec<f64> = (0..m).map(|i| exp_draw(rng, rates[i])).collect();
                if case.in_region(&draw) {
                    break draw;
                }
            }
        };

        let polygon = case.chain_polygon(&z);
        let residual = closing_residual(&polygon);
        if residual > CLOSURE_TOL || !polygon.is_convex() || !polygon.is_simple() {
            return Err(Error::Degenerate(format!(
                "case {} produced an invalid polygon (closure residual {residual:e})",
                case.label
            )));
        }
        Ok(CellSample {
            label: case.label.to_string(),
            z: case.fill_sides(&z),
            polygon,
            density_weight: case.density_value(&z, &self.weights),
        })
    }
}

impl TypicalCellSampler {
    /// Draw `count` cells from a fresh deterministic stream.
    pub fn sample_many(&self, seed: u64, count: usize) -> Result<Vec<CellSample>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(0x7CE1);
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

/// Draw one typical cell; convenience wrapper that builds the mixture and
/// uses a fresh deterministic stream.
pub fn sample_typical_cell(w: &Weights, seed: u64) -> Result<CellSample> {
    let sampler = TypicalCellSampler::new(w)?;
    Ok(sampler.sample_many(seed, 1)?.remove(0))
}

/// True when every limit is (0, ∞), so the density factorizes over the
/// variables and sequential inverse-CDF draws are exact.
fn region_is_product(case: &CaseSpec) -> bool {
    case.lower.iter().all(|l| !l.infinite && l.constant == 0.0 && l.coeffs.iter().all(|&c| c == 0))
        && case.upper.iter().all(|u| u.infinite)
}

/// Inverse-CDF draw from Exp(rate).
fn exp_draw(rng: &mut ChaCha8Rng, rate: f64) -> f64 {
    let u: f64 = rng.random();
    -(1.0 - u).ln() / rate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::SQRT3;

    fn w13() -> Weights {
        Weights::from_fractions(1, 3, 1, 3).unwrap()
    }

    #[test]
    fn product_regions_identified() {
        let product: Vec<&str> = all_cases()
            .iter()
            .filter(|c| region_is_product(c))
            .map(|c| c.label)
            .collect();
        assert_eq!(
            product,
            ["tri-1", "tri-2", "quad-1", "quad-2", "quad-5", "quad-6", "quad-7", "quad-8", "pent-3"]
        );
    }

    #[test]
    fn triangle_samples_are_regular() {
        let sampler = TypicalCellSampler::new(&w13()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = sampler.sample_case(0, &mut rng).unwrap(); // tri-1
        assert_eq!(s.z.len(), 3);
        assert!((s.z[0] - s.z[1]).abs() < 1e-12);
        assert!((s.z[0] - s.z[2]).abs() < 1e-12);
        let angles = s.polygon.side_angles();
        assert!((angles[0] - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn samples_close_and_validate() {
        let sampler = TypicalCellSampler::new(&Weights::new(0.2, 0.45).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..2000 {
            let s = sampler.sample(&mut rng).unwrap();
            assert!(closing_residual(&s.polygon) < 1e-9);
            assert!(s.density_weight > 0.0);
            assert!((3..=6).contains(&s.z.len()));
        }
    }

    // Multinomial check: observed configuration frequencies over 1e5 draws
    // against the mixture probabilities, within 3σ per configuration.
    #[test]
    fn case_frequencies_match_integrals() {
        let w = Weights::from_fractions(1, 3, 1, 3).unwrap();
        let sampler = TypicalCellSampler::new(&w).unwrap();
        let probs = sampler.case_probabilities();
        let draws = 100_000usize;
        let mut counts = std::collections::HashMap::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0xFE11);
        for _ in 0..draws {
            let s = sampler.sample(&mut rng).unwrap();
            *counts.entry(s.label).or_insert(0usize) += 1;
        }
        for (label, p) in probs {
            let got = *counts.get(label).unwrap_or(&0) as f64;
            let expect = p * draws as f64;
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (got - expect).abs() <= 3.0 * sigma,
                "{label}: {got} vs {expect} ± {sigma:.1}"
            );
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = sample_typical_cell(&w13(), 99).unwrap();
        let b = sample_typical_cell(&w13(), 99).unwrap();
        assert_eq!(a.label, b.label);
        assert_eq!(a.z, b.z);
    }

    // Conditional mean of z₁ in the quad-4 region: with a = √3/2·p and
    // b = √3/2·(1−p) the density restricted to z₂ > z₁ has
    // E[z₁] = 1/(a+b) = 2/√3 independent of p.
    #[test]
    fn coupled_case_first_side_has_correct_mean() {
        let w = Weights::new(0.3, 0.5).unwrap();
        let sampler = TypicalCellSampler::new(&w).unwrap();
        let idx = all_cases().iter().position(|c| c.label == "quad-4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let n = 40_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let s = sampler.sample_case(idx, &mut rng).unwrap();
            sum += s.z[0];
        }
        let mean = sum / n as f64;
        let expect = 2.0 / SQRT3;
        // standard error of the mean is ~ expect/√n
        assert!(
            (mean - expect).abs() < 4.0 * expect / (n as f64).sqrt(),
            "mean {mean} vs {expect}"
        );
    }
}
