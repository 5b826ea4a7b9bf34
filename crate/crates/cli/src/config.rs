//! Flag sets and the optional JSON config file.
//!
//! Precedence: command-line flags > config file > defaults. The config file
//! mirrors the flag names in snake_case; any subset of fields may appear.

use serde::Deserialize;
use tricell::{Error, Result, Weights, Window, DEFAULT_SEED};

#[derive(clap::Args, Clone)]
pub struct CommonOpts {
    /// Weight of direction 0: fraction "1/3" or decimal "0.25"
    #[arg(long)]
    pub p: Option<String>,
    /// Weight of direction π/3
    #[arg(long)]
    pub q: Option<String>,
    /// RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<String>,
    /// Output format (json unless stated otherwise)
    #[arg(long)]
    pub format: Option<String>,
    /// JSON config file mirroring the flags
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(clap::Args, Clone)]
pub struct SimulateOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Window half-width R; the window is [−R, R]²
    #[arg(long = "window-R")]
    pub window_r: Option<f64>,
    /// Inner observation box fraction in (0, 1)
    #[arg(long = "inner-frac")]
    pub inner_frac: Option<f64>,
    /// Number of independent realizations (overrides --min-cells sizing)
    #[arg(long)]
    pub replicates: Option<u32>,
    /// Size replicates so this many usable cells are expected
    #[arg(long = "min-cells")]
    pub min_cells: Option<u64>,
}

#[derive(clap::Args, Clone)]
pub struct ScanOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Grid step as a fraction, e.g. "1/30"
    #[arg(long)]
    pub step: Option<String>,
    /// Component for the SVG heatmap: p3|p4|p5|p6|para|trap
    #[arg(long)]
    pub component: Option<String>,
}

#[derive(clap::Args, Clone)]
pub struct RenderOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    #[arg(long = "window-R")]
    pub window_r: Option<f64>,
}

#[derive(clap::Args, Clone)]
pub struct SampleCellOpts {
    #[command(flatten)]
    pub common: CommonOpts,
    /// Number of cells to draw
    #[arg(long)]
    pub count: Option<u32>,
}

/// Config-file mirror of the flags; all fields optional.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<String>,
    pub q: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub window_r: Option<f64>,
    pub inner_frac: Option<f64>,
    pub replicates: Option<u32>,
    pub min_cells: Option<u64>,
    pub step: Option<String>,
    pub component: Option<String>,
    pub count: Option<u32>,
}

/// Effective options after merging flags, config file and defaults.
pub struct Effective {
    pub weights: Weights,
    pub seed: u64,
    pub out: Option<String>,
    pub format: Option<String>,
    pub file: FileConfig,
}

impl CommonOpts {
    pub fn resolve(&self) -> Result<Effective> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str::<FileConfig>(&text)?
            }
            None => FileConfig::default(),
        };
        let p = self.p.clone().or_else(|| file.p.clone()).ok_or_else(missing_weights)?;
        let q = self.q.clone().or_else(|| file.q.clone()).ok_or_else(missing_weights)?;
        let weights = Weights::parse(&p, &q)?;
        Ok(Effective {
            weights,
            seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: self.out.clone().or_else(|| file.out.clone()),
            format: self.format.clone().or_else(|| file.format.clone()),
            file,
        })
    }

    /// Like `resolve`, for commands that do not take weights.
    pub fn resolve_weightless(&self) -> Result<WeightlessEffective> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                serde_json::from_str::<FileConfig>(&text)?
            }
            None => FileConfig::default(),
        };
        Ok(WeightlessEffective {
            out: self.out.clone().or_else(|| file.out.clone()),
            format: self.format.clone().or_else(|| file.format.clone()),
            file,
        })
    }
}

/// Merged options for commands that do not take weights.
pub struct WeightlessEffective {
    pub out: Option<String>,
    pub format: Option<String>,
    pub file: FileConfig,
}

fn missing_weights() -> Error {
    Error::InvalidConfig("weights required: pass --p and --q (or set them in --config)".into())
}

impl SimulateOpts {
    pub fn window(&self, file: &FileConfig) -> Result<Window> {
        let r = self.window_r.or(file.window_r).unwrap_or(Window::DEFAULT_HALF_WIDTH);
        let f = self.inner_frac.or(file.inner_frac).unwrap_or(Window::DEFAULT_INNER_FRACTION);
        Window::with_inner_fraction(r, f)
    }
}
