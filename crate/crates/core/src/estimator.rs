//! Monte Carlo estimation of the vertex-number distribution of the typical
//! cell: count interior faces whose lex-min vertex falls in the inner box,
//! over independent realizations.

use serde::{Deserialize, Serialize};

use crate::arrangement;
use crate::error::{Error, Result};
use crate::exec::{run_indexed, ExecMode};
use crate::lineproc::{expected_cells_in_box, sample_lines, Window};
use crate::weights::Weights;

/// Normal quantile for two-sided 99% coverage.
pub const Z99: f64 = 2.575_829_303_548_901;

/// Fixed default seed so runs are reproducible out of the box.
pub const DEFAULT_SEED: u64 = 0x5EED_CE11;

const MAX_DEGENERACY_RETRIES: u32 = 64;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub weights: Weights,
    pub window: Window,
    pub replicates: u32,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(weights: Weights, window: Window, replicates: u32, seed: u64) -> Self {
        SimConfig { weights, window, replicates, seed }
    }

    /// Replicates sized so the expected number of usable cells reaches
    /// `min_cells`, with a 10% margin.
    pub fn for_min_cells(weights: Weights, window: Window, min_cells: u64, seed: u64) -> Result<Self> {
        let per = expected_cells_in_box(&weights, &window);
        if per < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "window too small: {per:.3} expected cells in the inner box; enlarge the window"
            )));
        }
        let replicates = ((min_cells as f64 / per) * 1.1).ceil() as u32;
        Ok(SimConfig { weights, window, replicates: replicates.max(1), seed })
    }
}

/// Estimated distribution of the vertex number over n ∈ {3,4,5,6}.
///
/// Cells inside one replicate share lines and are positively correlated, so
/// the standard errors are cluster-robust: the ratio-estimator variance over
/// replicates, not the iid binomial formula. The Wilson intervals use the
/// matching effective sample size.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PmfReport {
    pub counts: [u64; 4],
    pub total: u64,
    /// Cells with lex-min in the inner box that touch the window boundary;
    /// excluded from the totals but reported as the edge-effect bound.
    pub discarded_boundary_cells: u64,
    pub estimates: [f64; 4],
    pub std_errors: [f64; 4],
    pub ci99: [(f64, f64); 4],
    /// Effective iid sample size per component implied by the cluster
    /// variance; at most modestly above `total` on unlucky draws, usually
    /// well below it.
    pub effective_samples: [f64; 4],
    pub replicates: u32,
    pub seed: u64,
    pub replicate_seeds: Vec<u64>,
    pub wall_time_ms: u64,
}

impl PmfReport {
    pub fn estimate(&self, n: usize) -> f64 {
        self.estimates[n - 3]
    }

    /// Fraction of in-box cells lost to the window boundary.
    pub fn boundary_discard_ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.discarded_boundary_cells as f64 / self.total as f64
        }
    }
}

/// Plug-in mean and variance of the reported distribution.
pub fn empirical_mean_variance(report: &PmfReport) -> (f64, f64) {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (k, &p) in report.estimates.iter().enumerate() {
        let n = (k + 3) as f64;
        mean += n * p;
        second += n * n * p;
    }
    (mean, second - mean * mean)
}

/// splitmix64 hash used to derive independent replicate seeds.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct ReplicateOutcome {
    counts: [u64; 4],
    discarded: u64,
    seed: u64,
}

fn run_replicate(cfg: &SimConfig, index: u64) -> Result<ReplicateOutcome> {
    let mut seed = derive_seed(cfg.seed, index);
    for _ in 0..MAX_DEGENERACY_RETRIES {
        let realization = sample_lines(&cfg.weights, &cfg.window, seed);
        match arrangement::build(&realization) {
            Ok(arr) => {
                let mut counts = [0u64; 4];
                let mut discarded = 0u64;
                for face in arr.faces() {
                    if !cfg.window.contains_inner(face.lex_min.x, face.lex_min.y) {
                        continue;
                    }
                    if face.touches_boundary {
                        discarded += 1;
                        continue;
                    }
                    let n = face.vertex_count();
                    if !(3..=6).contains(&n) {
                        return Err(Error::SupportViolation(n));
                    }
                    counts[n - 3] += 1;
                }
                return Ok(ReplicateOutcome { counts, discarded, seed });
            }
            // probability-zero configuration under float noise: resample
            Err(Error::Degenerate(_)) => {
                seed = derive_seed(seed, 0xD5A2);
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::Degenerate(format!(
        "replicate {index} still degenerate after {MAX_DEGENERACY_RETRIES} resamples"
    )))
}

/// Run the estimator with an explicit execution mode.
pub fn estimate_pmf_with(cfg: &SimConfig, mode: ExecMode) -> Result<PmfReport> {
    if cfg.replicates < 1 {
        return Err(Error::InvalidConfig("need at least one replicate".into()));
    }
    let per_box = expected_cells_in_box(&cfg.weights, &cfg.window);
    if per_box * (cfg.replicates as f64) < 1.0 {
        return Err(Error::InvalidConfig(format!(
            "window too small: {per_box:.3} expected cells in the inner box per replicate; \
             enlarge the window or add replicates"
        )));
    }

    let start = std::time::Instant::now();
    let outcomes = run_indexed(cfg.replicates as usize, mode, |i| run_replicate(cfg, i as u64));

    let mut counts = [0u64; 4];
    let mut discarded = 0u64;
    let mut replicate_seeds = Vec::with_capacity(cfg.replicates as usize);
    let mut per_replicate: Vec<([u64; 4], u64)> = Vec::with_capacity(cfg.replicates as usize);
    for outcome in outcomes {
        let o = outcome?;
        for (acc, c) in counts.iter_mut().zip(&o.counts) {
            *acc += c;
        }
        discarded += o.discarded;
        replicate_seeds.push(o.seed);
        per_replicate.push((o.counts, o.counts.iter().sum()));
    }

    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptySample(
            "no interior cell had its lex-min vertex in the inner box; \
             enlarge the window or add replicates"
                .into(),
        ));
    }

    let mut estimates = [0.0; 4];
    let mut std_errors = [0.0; 4];
    let mut ci99 = [(0.0, 0.0); 4];
    let mut effective_samples = [0.0; 4];
    let r = per_replicate.len() as f64;
    for k in 0..4 {
        let p_hat = counts[k] as f64 / total as f64;
        estimates[k] = p_hat;
        // ratio-estimator variance with replicates as clusters
        let mut ssq = 0.0;
        for (c, t) in &per_replicate {
            let resid = c[k] as f64 - p_hat * *t as f64;
            ssq += resid * resid;
        }
        let var = if r > 1.0 { ssq * r / (r - 1.0) / (total as f64).powi(2) } else { ssq };
        let se = var.sqrt();
        std_errors[k] = se;
        let n_eff = if se > 0.0 { (p_hat * (1.0 - p_hat) / var).max(1.0) } else { total as f64 };
        effective_samples[k] = n_eff;
        ci99[k] = wilson_interval_f(p_hat, n_eff, Z99);
    }

    Ok(PmfReport {
        counts,
        total,
        discarded_boundary_cells: discarded,
        estimates,
        std_errors,
        ci99,
        effective_samples,
        replicates: cfg.replicates,
        seed: cfg.seed,
        replicate_seeds,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn estimate_pmf(cfg: &SimConfig) -> Result<PmfReport> {
    estimate_pmf_with(cfg, ExecMode::Parallel)
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    wilson_interval_f(successes as f64 / trials as f64, trials as f64, z)
}

/// Wilson interval for a proportion with a (possibly fractional) effective
/// number of trials.
pub fn wilson_interval_f(p: f64, n: f64, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Half-width of the Wilson interval.
pub fn wilson_half_width(successes: u64, trials: u64, z: f64) -> f64 {
    let (lo, hi) = wilson_interval(successes, trials, z);
    (hi - lo) / 2.0
}
