//! Vertex-number statistics of the typical cell in a planar line
//! tessellation whose directions are concentrated on three equally spread
//! angles with weights (p, q, 1−p−q).
//!
//! Three independent routes to the same distribution live here and are
//! cross-checked against each other:
//!
//! - closed forms in exact rational arithmetic ([`analytic`]),
//! - per-configuration quadrature of the side-length density ([`quadrature`]
//!   over the tables in [`cases`]),
//! - Monte Carlo over simulated realizations ([`lineproc`], [`arrangement`],
//!   [`estimator`]).
//!
//! [`cell_sampler`] draws typical cells directly from the conditional
//! side-length density, and [`svg`] renders tessellations, cells and simplex
//! heatmaps.

pub mod analytic;
pub mod angle;
pub mod arrangement;
pub mod cases;
pub mod cell_sampler;
pub mod error;
pub mod estimator;
pub mod exec;
pub mod geometry;
pub mod lineproc;
pub mod quadrature;
pub mod svg;
pub mod weights;

/// Version tag carried by all JSON outputs.
pub const SCHEMA_VERSION: u32 = 1;

pub use analytic::{beta, mean_variance, para_trap_split, pmf, verify_extrema, ExactPmf};
pub use angle::{normalize_angle, CanonicalAngle, SignedAngle, SQRT3};
pub use arrangement::{build, Arrangement, Face};
pub use cases::{case_table, upper_limit, CaseSpec, LimitExpr, QuadKind};
pub use cell_sampler::{sample_typical_cell, CellSample, TypicalCellSampler};
pub use error::{Error, Result};
pub use estimator::{
    empirical_mean_variance, estimate_pmf, estimate_pmf_with, PmfReport, SimConfig, DEFAULT_SEED,
};
pub use exec::ExecMode;
pub use geometry::{closing_residual, intersect, lex_min_vertex, DirectedLine, Point, Polygon};
pub use lineproc::{expected_cells_in_box, sample_lines, LineRealization, Window};
pub use quadrature::{integrate_all, integrate_case, pmf_by_quadrature, CaseIntegral};
pub use weights::{lambda_of, lambda_total, Rat, Weights};
