//! Embedding a series into its trajectory matrix and pulling components of
//! that matrix back to series.
//!
//! Sample `x[n]` of a type-`s` series sits at every cell `(q, n + s*tau - q*tau)`
//! with `q` in `[q_min, q_max]`; pulling back averages exactly those cells.
//! The classical anti-diagonal rule is kept as [`legacy_dap`] for comparison.
//! It ignores `tau` and is only correct for `s = 1, tau = 1`.

use std::collections::BTreeSet;

use nalgebra::DMatrix;

use crate::diophantine::{ceil_div, floor_div};
use crate::error::{Error, Result};
use crate::series::{ComponentMatrix, EmbeddingConfig, TimeSeries, TrajectoryMatrix};

/// Range of row indices `q` (in the matrix's native convention) whose cells
/// hold sample `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QBounds {
    pub n: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl QBounds {
    /// Size of the averaging window.
    pub fn len(&self) -> usize {
        (self.q_max - self.q_min + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.q_max < self.q_min
    }

    /// Logical `(row, col)` cells, ascending in row.
    pub fn cells(&self, config: &EmbeddingConfig) -> impl Iterator<Item = (i64, i64)> {
        let shift = self.n + config.s() * config.tau() as i64;
        let tau = config.tau() as i64;
        (self.q_min..=self.q_max).map(move |q| (q, shift - q * tau))
    }
}

pub fn embed(series: &TimeSeries, d: usize, tau: usize) -> Result<TrajectoryMatrix> {
    let config = EmbeddingConfig::new(series.len(), d, tau, series.convention())?;
    let x = series.values();
    let data = DMatrix::from_fn(config.d(), config.m(), |i, j| x[i * tau + j]);
    TrajectoryMatrix::new(data, config)
}

pub fn q_bounds(n: i64, config: &EmbeddingConfig) -> Result<QBounds> {
    config.check_index(n)?;
    let s = config.s();
    let tau = config.tau() as i64;
    let d = config.d() as i64;
    let m = config.m() as i64;
    let q_min = s.max(ceil_div(n - m + s * tau + (1 - s), tau));
    let q_max = (d + s - 1).min(floor_div(n + (tau - 1) * s, tau));
    Ok(QBounds { n, q_min, q_max })
}

/// Mean of the cells of `data` listed by `bounds`. A single-cell window
/// returns that cell unchanged.
fn window_mean(data: &DMatrix<f64>, config: &EmbeddingConfig, bounds: &QBounds) -> f64 {
    let s = config.s();
    let mut cells = bounds
        .cells(config)
        .map(|(q, col)| data[((q - s) as usize, (col - s) as usize)]);
    if bounds.len() == 1 {
        return cells.next().unwrap_or(0.0);
    }
    let sum: f64 = cells.sum();
    sum / bounds.len() as f64
}

/// Reconstructs the series component carried by `component`.
pub fn pull_back(component: &ComponentMatrix) -> Result<TimeSeries> {
    let config = component.config();
    let data = component.data();
    if data.nrows() != config.d() || data.ncols() != config.m() {
        return Err(Error::ShapeMismatch {
            expected_rows: config.d(),
            expected_cols: config.m(),
            rows: data.nrows(),
            cols: data.ncols(),
        });
    }
    let (lo, hi) = config.index_range();
    let values = (lo..=hi)
        .map(|n| q_bounds(n, config).map(|b| window_mean(data, config, &b)))
        .collect::<Result<Vec<_>>>()?;
    TimeSeries::new(values, config.convention())
}

/// Pulls back every component; all must share one configuration.
pub fn pull_back_all(components: &[ComponentMatrix]) -> Result<Vec<TimeSeries>> {
    let first = components.first().ok_or(Error::EmptyInput)?;
    if components.iter().any(|c| c.config() != first.config()) {
        return Err(Error::ConfigMismatch);
    }
    components.iter().map(pull_back).collect()
}

/// Classical SSA/SGMD anti-diagonal averaging.
///
/// The component is read through `Z~`, which is `Z` when `m < d` and `Z^T`
/// otherwise, so `Z~` is always `m* x d*`. The sum index `p` runs along the
/// short side (columns of `Z~`) and `n - p + 1` along the long side. Output
/// has length `N`; the rule covers only the first `d + m - 1` positions, so
/// when `tau > 1` the remaining tail is zero.
///
/// Outside `s = 1, tau = 1` this is knowingly wrong and requires `force`.
pub fn legacy_dap(component: &ComponentMatrix, force: bool) -> Result<TimeSeries> {
    let config = component.config();
    let (s, tau) = (config.s(), config.tau() as i64);
    if (s != 1 || tau != 1) && !force {
        return Err(Error::LegacyModeUnsafe { s, tau });
    }
    let z = component.data();
    let (d, m) = (config.d(), config.m());
    let transposed = m >= d;
    let d_star = d.min(m);
    let m_star = d.max(m);
    let span = d_star + m_star - 1;

    // 1-based access into Z~ at (row, col).
    let tilde = |row: usize, col: usize| {
        if transposed {
            z[(col - 1, row - 1)]
        } else {
            z[(row - 1, col - 1)]
        }
    };
    let average = |n: usize, p_lo: usize, p_hi: usize, count: usize| {
        let sum: f64 = (p_lo..=p_hi).map(|p| tilde(n - p + 1, p)).sum();
        sum / count as f64
    };

    let mut values = vec![0.0; config.len()];
    for (pos, out) in values.iter_mut().enumerate().take(span) {
        let n = pos + 1;
        *out = if n < d_star {
            average(n, 1, n, n)
        } else if n <= m_star {
            average(n, 1, d_star, d_star)
        } else {
            average(n, n - m_star + 1, span - m_star + 1, span - n + 1)
        };
    }
    TimeSeries::new(values, config.convention())
}

/// Exhaustive scan of all `d x m` cells for those holding sample `n`.
/// Returned cells use logical (convention-native) indices.
pub fn occurrence_oracle(n: i64, config: &EmbeddingConfig) -> Result<BTreeSet<(i64, i64)>> {
    config.check_index(n)?;
    let s = config.s();
    let mut cells = BTreeSet::new();
    for row in 0..config.d() {
        for col in 0..config.m() {
            if config.sample_index(row, col) == n {
                cells.insert((row as i64 + s, col as i64 + s));
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{validate_config, IndexConvention};

    fn ramp(len: usize, conv: IndexConvention) -> TimeSeries {
        let s = conv.flag() as f64;
        TimeSeries::new((0..len).map(|p| p as f64 + s).collect(), conv).unwrap()
    }

    #[test]
    fn type0_layout() {
        // Values equal their logical index, so entries read as sample indices.
        let m = embed(&ramp(27, IndexConvention::ZeroBased), 7, 3).unwrap();
        assert_eq!(m.data().shape(), (7, 9));
        assert_eq!(m.get(0, 0), Some(0.0));
        assert_eq!(m.get(2, 3), Some(9.0));
        assert_eq!(m.get(3, 5), Some(14.0));
        assert_eq!(m.get(4, 2), Some(14.0));
        assert_eq!(m.get(6, 8), Some(26.0));
        assert_eq!(m.get(7, 0), None);
    }

    #[test]
    fn type1_layout() {
        let m = embed(&ramp(27, IndexConvention::OneBased), 7, 3).unwrap();
        assert_eq!(m.get(1, 1), Some(1.0));
        assert_eq!(m.get(2, 6), Some(9.0));
        assert_eq!(m.get(7, 9), Some(27.0));
        assert_eq!(m.get(0, 0), None);
    }

    #[test]
    fn single_row_embedding() {
        let x = TimeSeries::new(vec![3.0, -1.0, 2.5, 8.0], IndexConvention::ZeroBased).unwrap();
        let m = embed(&x, 1, 5).unwrap();
        assert_eq!(m.data().shape(), (1, 4));
        assert_eq!(
            m.data().row(0).iter().copied().collect::<Vec<_>>(),
            x.values()
        );
    }

    #[test]
    fn embed_rejects_short_series() {
        let x = ramp(10, IndexConvention::ZeroBased);
        assert!(matches!(embed(&x, 4, 4), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn q_bounds_examples() {
        let c0 = validate_config(27, 7, 3, 0).unwrap();
        let c1 = validate_config(27, 7, 3, 1).unwrap();
        assert_eq!(
            q_bounds(9, &c0).unwrap(),
            QBounds {
                n: 9,
                q_min: 1,
                q_max: 3
            }
        );
        assert_eq!(
            q_bounds(1, &c1).unwrap(),
            QBounds {
                n: 1,
                q_min: 1,
                q_max: 1
            }
        );
        assert_eq!(q_bounds(26, &c0).unwrap().q_min, 6);
        assert!(matches!(
            q_bounds(27, &c0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            q_bounds(0, &c1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn oracle_examples() {
        let c0 = validate_config(27, 7, 3, 0).unwrap();
        let expect: BTreeSet<_> = [(1, 6), (2, 3), (3, 0)].into_iter().collect();
        assert_eq!(occurrence_oracle(9, &c0).unwrap(), expect);
        assert_eq!(
            occurrence_oracle(0, &c0).unwrap(),
            [(0, 0)].into_iter().collect()
        );
        assert!(matches!(
            occurrence_oracle(32, &c0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn pull_back_averages_three_cells() {
        let c0 = validate_config(27, 7, 3, 0).unwrap();
        let data = DMatrix::from_fn(7, 9, |i, j| (i * 100 + j) as f64 * 0.37 - 5.0);
        let z = ComponentMatrix::new(data, c0, 1).unwrap();
        let x = pull_back(&z).unwrap();
        let expect = (z.get(1, 6).unwrap() + z.get(2, 3).unwrap() + z.get(3, 0).unwrap()) / 3.0;
        assert_eq!(x.get(9), Some(expect));

        let c1 = validate_config(27, 7, 3, 1).unwrap();
        let z = ComponentMatrix::new(z.data().clone(), c1, 1).unwrap();
        let x = pull_back(&z).unwrap();
        let expect = (z.get(1, 9).unwrap() + z.get(2, 6).unwrap() + z.get(3, 3).unwrap()) / 3.0;
        assert_eq!(x.get(9), Some(expect));
        assert_eq!(x.convention(), IndexConvention::OneBased);
    }

    #[test]
    fn endpoints_are_exact_copies() {
        let c = validate_config(20, 4, 3, 1).unwrap();
        let data = DMatrix::from_fn(c.d(), c.m(), |i, j| {
            0.1 * (i as f64) + 1.0 / (j as f64 + 3.0)
        });
        let z = ComponentMatrix::new(data.clone(), c, 1).unwrap();
        let x = pull_back(&z).unwrap();
        assert_eq!(x.values()[0], data[(0, 0)]);
        assert_eq!(x.values()[19], data[(c.d() - 1, c.m() - 1)]);
    }

    #[test]
    fn batch_pull_back() {
        let x = ramp(12, IndexConvention::ZeroBased);
        let m = embed(&x, 3, 2).unwrap();
        let out = pull_back_all(&[m.clone().into_component()]).unwrap();
        assert_eq!(out, vec![x]);
        assert_eq!(pull_back_all(&[]), Err(Error::EmptyInput));

        let other = embed(&ramp(13, IndexConvention::ZeroBased), 3, 2).unwrap();
        assert_eq!(
            pull_back_all(&[m.into_component(), other.into_component()]),
            Err(Error::ConfigMismatch)
        );
    }

    #[test]
    fn legacy_requires_force_outside_unit_delay() {
        let x = ramp(27, IndexConvention::OneBased);
        let z = embed(&x, 7, 3).unwrap().into_component();
        assert_eq!(
            legacy_dap(&z, false),
            Err(Error::LegacyModeUnsafe { s: 1, tau: 3 })
        );
        let forced = legacy_dap(&z, true).unwrap();
        assert_eq!(forced.len(), 27);
        assert_ne!(forced.values(), x.values());

        let x0 = ramp(10, IndexConvention::ZeroBased);
        let z0 = embed(&x0, 3, 1).unwrap().into_component();
        assert_eq!(
            legacy_dap(&z0, false),
            Err(Error::LegacyModeUnsafe { s: 0, tau: 1 })
        );
    }

    #[test]
    fn legacy_square_matches_transpose() {
        let c = validate_config(9, 5, 1, 1).unwrap();
        assert_eq!(c.m(), 5);
        let data = DMatrix::from_fn(5, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 4.5);
        let z = ComponentMatrix::new(data.clone(), c, 1).unwrap();
        let zt = ComponentMatrix::new(data.transpose(), c, 1).unwrap();
        let a = legacy_dap(&z, false).unwrap();
        let b = legacy_dap(&zt, false).unwrap();
        for (u, v) in a.values().iter().zip(b.values()) {
            assert!((u - v).abs() <= 1e-12);
        }
    }
}
