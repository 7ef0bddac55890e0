//! Trajectory-matrix embedding and generalized diagonal averaging.
//!
//! A series `x[s..=N-1+s]` (type-0 when `s = 0`, type-1 when `s = 1`) is
//! embedded into the `d x m` matrix with entries `x[i*tau + j + s]`,
//! `m = N - (d - 1) tau`. Any additive component of that matrix is pulled
//! back to a series by averaging, for each `n`, the cells that solve
//! `tau * row + col = n + s * tau`. This is correct for every delay and both
//! conventions, unlike the classical anti-diagonal rule which is kept as
//! [`embedding::legacy_dap`] for comparison.

pub mod decomposition;
pub mod diophantine;
pub mod embedding;
pub mod error;
pub mod series;

pub use decomposition::{
    decompose_series, decompose_series_with, group_components, svd_elementary, Backend,
    Decomposition, Grouping, Method, Reconstruction, SvdBackend,
};
pub use diophantine::{
    bounds_type0, bounds_type1, count_solutions, solve_constrained, unit_delay_cardinality,
    x_bounds, Rectangle, SolutionSet,
};
pub use embedding::{
    embed, legacy_dap, occurrence_oracle, pull_back, pull_back_all, q_bounds, QBounds,
};
pub use error::{Error, Result};
pub use series::{
    validate_config, ComponentMatrix, EmbeddingConfig, IndexConvention, TimeSeries,
    TrajectoryMatrix,
};
