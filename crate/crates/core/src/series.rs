//! Shared domain types: index conventions, time series, embedding
//! configurations and the matrices produced from them.
//!
//! All public APIs speak *logical* indices: a type-`s` series of length `N`
//! is addressed by `n` in `[s, N - 1 + s]`, and a trajectory matrix entry by
//! `(i, j)` in `[s, d - 1 + s] x [s, m - 1 + s]`. Storage is always 0-based.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Index convention of a series: type-0 (`x[0..N-1]`) or type-1 (`x[1..N]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexConvention {
    ZeroBased,
    OneBased,
}

impl IndexConvention {
    pub fn from_flag(s: i64) -> Result<Self> {
        match s {
            0 => Ok(IndexConvention::ZeroBased),
            1 => Ok(IndexConvention::OneBased),
            other => Err(Error::InvalidConvention(other)),
        }
    }

    /// The flag `s`.
    pub fn flag(self) -> i64 {
        match self {
            IndexConvention::ZeroBased => 0,
            IndexConvention::OneBased => 1,
        }
    }
}

impl fmt::Display for IndexConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type-{}", self.flag())
    }
}

/// A real-valued series tagged with its index convention.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    convention: IndexConvention,
}

impl TimeSeries {
    /// Rejects empty input and any NaN/Inf sample.
    pub fn new(values: Vec<f64>, convention: IndexConvention) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        let s = convention.flag();
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                index: pos as i64 + s,
            });
        }
        Ok(TimeSeries { values, convention })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn convention(&self) -> IndexConvention {
        self.convention
    }

    /// Samples in storage order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn first_index(&self) -> i64 {
        self.convention.flag()
    }

    pub fn last_index(&self) -> i64 {
        self.values.len() as i64 - 1 + self.convention.flag()
    }

    /// Logical index `n` to storage position `n - s`.
    pub fn to_physical(&self, n: i64) -> Option<usize> {
        if n < self.first_index() || n > self.last_index() {
            return None;
        }
        Some((n - self.convention.flag()) as usize)
    }

    /// Storage position to logical index.
    pub fn to_logical(&self, pos: usize) -> Option<i64> {
        (pos < self.values.len()).then(|| pos as i64 + self.convention.flag())
    }

    /// Sample `x[n]` by logical index.
    pub fn get(&self, n: i64) -> Option<f64> {
        self.to_physical(n).map(|p| self.values[p])
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let s = self.convention.flag();
        self.values
            .iter()
            .enumerate()
            .map(move |(p, &v)| (p as i64 + s, v))
    }
}

/// Validated `(N, d, tau, s)` together with the derived column count
/// `m = N - (d - 1) tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EmbeddingConfig {
    len: usize,
    d: usize,
    tau: usize,
    m: usize,
    convention: IndexConvention,
}

/// Checks raw `(N, d, tau, s)` and computes `m`.
///
/// Besides `m >= 1`, a multi-row embedding needs `m >= tau`: otherwise the
/// samples between the end of one row and the start of the next appear in
/// no cell and cannot be pulled back.
pub fn validate_config(len: i64, d: i64, tau: i64, s: i64) -> Result<EmbeddingConfig> {
    let convention = IndexConvention::from_flag(s)?;
    if d < 1 {
        return Err(Error::InvalidDimension(d));
    }
    if tau < 1 {
        return Err(Error::InvalidDelay(tau));
    }
    let m = (d - 1)
        .checked_mul(tau)
        .and_then(|span| len.checked_sub(span))
        .unwrap_or(i64::MIN);
    if m < 1 {
        return Err(Error::SeriesTooShort { len, d, tau, m });
    }
    if d > 1 && m < tau {
        return Err(Error::IncompleteEmbedding { m, tau });
    }
    Ok(EmbeddingConfig {
        len: len as usize,
        d: d as usize,
        tau: tau as usize,
        m: m as usize,
        convention,
    })
}

impl EmbeddingConfig {
    pub fn new(len: usize, d: usize, tau: usize, convention: IndexConvention) -> Result<Self> {
        validate_config(len as i64, d as i64, tau as i64, convention.flag())
    }

    /// Series length `N`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; a valid configuration has `N >= 1`.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Embedding dimension (row count).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Column count.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn convention(&self) -> IndexConvention {
        self.convention
    }

    pub fn s(&self) -> i64 {
        self.convention.flag()
    }

    /// Logical index range `[s, N - 1 + s]` of the series.
    pub fn index_range(&self) -> (i64, i64) {
        let s = self.s();
        (s, self.len as i64 - 1 + s)
    }

    pub(crate) fn check_index(&self, n: i64) -> Result<()> {
        let (lo, hi) = self.index_range();
        if n < lo || n > hi {
            return Err(Error::IndexOutOfRange { index: n, lo, hi });
        }
        Ok(())
    }

    /// Logical series index stored at physical cell `(row, col)`.
    pub fn sample_index(&self, row: usize, col: usize) -> i64 {
        (row * self.tau + col) as i64 + self.s()
    }
}

impl fmt::Display for EmbeddingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} d={} m={} tau={} s={}",
            self.len,
            self.d,
            self.m,
            self.tau,
            self.s()
        )
    }
}

fn check_shape(data: &DMatrix<f64>, config: &EmbeddingConfig) -> Result<()> {
    if data.nrows() != config.d() || data.ncols() != config.m() {
        return Err(Error::ShapeMismatch {
            expected_rows: config.d(),
            expected_cols: config.m(),
            rows: data.nrows(),
            cols: data.ncols(),
        });
    }
    Ok(())
}

fn logical_entry(data: &DMatrix<f64>, s: i64, i: i64, j: i64) -> Option<f64> {
    let (r, c) = (i - s, j - s);
    if r < 0 || c < 0 || r as usize >= data.nrows() || c as usize >= data.ncols() {
        return None;
    }
    Some(data[(r as usize, c as usize)])
}

/// The `d x m` trajectory matrix of a series.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMatrix {
    data: DMatrix<f64>,
    config: EmbeddingConfig,
}

impl TrajectoryMatrix {
    pub fn new(data: DMatrix<f64>, config: EmbeddingConfig) -> Result<Self> {
        check_shape(&data, &config)?;
        Ok(TrajectoryMatrix { data, config })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.config
    }

    /// Entry `M^i_j` by logical (convention-native) indices.
    pub fn get(&self, i: i64, j: i64) -> Option<f64> {
        logical_entry(&self.data, self.config.s(), i, j)
    }

    /// Views the whole matrix as a single component with label 1.
    pub fn into_component(self) -> ComponentMatrix {
        ComponentMatrix {
            data: self.data,
            config: self.config,
            label: 1,
        }
    }
}

/// One additive term `Z_k` of a trajectory matrix decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMatrix {
    data: DMatrix<f64>,
    config: EmbeddingConfig,
    label: usize,
}

impl ComponentMatrix {
    pub fn new(data: DMatrix<f64>, config: EmbeddingConfig, label: usize) -> Result<Self> {
        check_shape(&data, &config)?;
        Ok(ComponentMatrix {
            data,
            config,
            label,
        })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.config
    }

    pub fn label(&self) -> usize {
        self.label
    }

    pub fn get(&self, i: i64, j: i64) -> Option<f64> {
        logical_entry(&self.data, self.config.s(), i, j)
    }

    pub fn with_label(mut self, label: usize) -> Self {
        self.label = label;
        self
    }
}

impl From<TrajectoryMatrix> for ComponentMatrix {
    fn from(m: TrajectoryMatrix) -> Self {
        m.into_component()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_for_short_worked_example() {
        let cfg = validate_config(27, 7, 3, 0).unwrap();
        assert_eq!(cfg.m(), 9);
        assert_eq!(cfg.index_range(), (0, 26));
    }

    #[test]
    fn unit_dimension_keeps_full_length() {
        let cfg = validate_config(5, 1, 1, 1).unwrap();
        assert_eq!(cfg.m(), 5);
        assert_eq!(cfg.index_range(), (1, 5));
    }

    #[test]
    fn config_rejections() {
        assert_eq!(
            validate_config(10, 4, 4, 0),
            Err(Error::SeriesTooShort {
                len: 10,
                d: 4,
                tau: 4,
                m: -2
            })
        );
        assert_eq!(
            validate_config(10, 0, 1, 0),
            Err(Error::InvalidDimension(0))
        );
        assert_eq!(validate_config(10, 2, 0, 0), Err(Error::InvalidDelay(0)));
        assert_eq!(
            validate_config(10, 2, 1, 2),
            Err(Error::InvalidConvention(2))
        );
        // Rows [x0] and [x3]: x[1], x[2] are never embedded.
        assert_eq!(
            validate_config(4, 2, 3, 0),
            Err(Error::IncompleteEmbedding { m: 1, tau: 3 })
        );
        assert!(validate_config(4, 1, 3, 0).is_ok());
        assert!(matches!(
            validate_config(i64::MAX, i64::MAX, i64::MAX, 0),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn series_rejects_bad_samples() {
        assert_eq!(
            TimeSeries::new(vec![], IndexConvention::ZeroBased),
            Err(Error::EmptySeries)
        );
        assert_eq!(
            TimeSeries::new(vec![1.0, f64::NAN], IndexConvention::OneBased),
            Err(Error::NonFiniteSample { index: 2 })
        );
        assert!(TimeSeries::new(vec![f64::INFINITY], IndexConvention::ZeroBased).is_err());
    }

    #[test]
    fn logical_indexing() {
        let x = TimeSeries::new(vec![10.0, 20.0, 30.0], IndexConvention::OneBased).unwrap();
        assert_eq!(x.get(0), None);
        assert_eq!(x.get(1), Some(10.0));
        assert_eq!(x.get(3), Some(30.0));
        assert_eq!(x.get(4), None);
        for p in 0..x.len() {
            assert_eq!(x.to_physical(x.to_logical(p).unwrap()), Some(p));
        }
    }

    #[test]
    fn component_shape_is_checked() {
        let cfg = validate_config(6, 2, 2, 0).unwrap();
        assert_eq!(cfg.m(), 4);
        let err = ComponentMatrix::new(DMatrix::zeros(4, 2), cfg, 1).unwrap_err();
        assert_eq!(err.kind(), "ShapeMismatch");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn column_count_identity(len in 1i64..500, d in 1i64..20, tau in 1i64..10, s in 0i64..2) {
                match validate_config(len, d, tau, s) {
                    Ok(cfg) => prop_assert_eq!(cfg.m() as i64 + (d - 1) * tau, len),
                    Err(e) => {
                        let expected = matches!(
                            e,
                            Error::SeriesTooShort { .. } | Error::IncompleteEmbedding { .. }
                        );
                        prop_assert!(expected);
                    }
                }
            }

            #[test]
            fn index_maps_are_inverse(len in 1usize..200, s in 0i64..2) {
                let conv = IndexConvention::from_flag(s).unwrap();
                let x = TimeSeries::new(vec![0.0; len], conv).unwrap();
                for n in x.first_index()..=x.last_index() {
                    prop_assert_eq!(x.to_logical(x.to_physical(n).unwrap()), Some(n));
                }
                prop_assert_eq!(x.to_physical(x.first_index() - 1), None);
                prop_assert_eq!(x.to_physical(x.last_index() + 1), None);
            }
        }
    }
}
