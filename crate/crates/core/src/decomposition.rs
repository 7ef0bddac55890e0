//! Splitting a trajectory matrix into additive components and turning them
//! back into series.
//!
//! Reconstruction only relies on the backend contract: the components must
//! sum to the trajectory matrix. SVD is the only backend shipped; the
//! symplectic slot is reserved in [`Method`] but has no implementation.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};

use crate::embedding::{embed, legacy_dap, pull_back};
use crate::error::{Error, Result};
use crate::series::{ComponentMatrix, EmbeddingConfig, TimeSeries, TrajectoryMatrix};

/// Relative singular value cutoff, as a fraction of the largest one.
pub const SVD_REL_TOL: f64 = 1e-12;
/// Absolute singular value cutoff.
pub const SVD_ABS_TOL: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Svd,
    Symplectic,
    /// Components produced by regrouping another decomposition.
    Grouped,
}

impl Method {
    pub fn id(self) -> &'static str {
        match self {
            Method::Svd => "svd",
            Method::Symplectic => "symplectic",
            Method::Grouped => "grouped",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "svd" => Ok(Method::Svd),
            "symplectic" => Ok(Method::Symplectic),
            other => Err(Error::UnsupportedBackend(other.to_string())),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Singular triplets retained by the SVD backend, in component order.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    pub singular_values: Vec<f64>,
    pub left: Vec<DVector<f64>>,
    pub right: Vec<DVector<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub components: Vec<ComponentMatrix>,
    pub config: EmbeddingConfig,
    pub method: Method,
    pub factors: Option<SvdFactors>,
}

impl Decomposition {
    pub fn rank(&self) -> usize {
        self.components.len()
    }

    /// Sum of all components.
    pub fn total(&self) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.config.d(), self.config.m());
        for c in &self.components {
            acc += c.data();
        }
        acc
    }

    /// Squared Frobenius norm of each component relative to the total of
    /// those norms.
    pub fn energy_fractions(&self) -> Vec<f64> {
        let energies: Vec<f64> = self
            .components
            .iter()
            .map(|c| c.data().norm_squared())
            .collect();
        let total: f64 = energies.iter().sum();
        if total == 0.0 {
            return vec![0.0; energies.len()];
        }
        energies.into_iter().map(|e| e / total).collect()
    }
}

/// A source of additive components for a trajectory matrix.
pub trait Backend {
    fn method(&self) -> Method;
    fn decompose(&self, matrix: &TrajectoryMatrix) -> Result<Decomposition>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SvdBackend;

impl Backend for SvdBackend {
    fn method(&self) -> Method {
        Method::Svd
    }

    fn decompose(&self, matrix: &TrajectoryMatrix) -> Result<Decomposition> {
        svd_elementary(matrix)
    }
}

/// Resolves a backend identifier.
pub fn backend(method: Method) -> Result<Box<dyn Backend + Send + Sync>> {
    match method {
        Method::Svd => Ok(Box::new(SvdBackend)),
        other => Err(Error::UnsupportedBackend(other.id().to_string())),
    }
}

/// Thin SVD `A = U diag(sigma) V^T` computed with faer.
fn thin_svd(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>, DMatrix<f64>)> {
    let (rows, cols) = a.shape();
    let mat = faer::Mat::<f64>::from_fn(rows, cols, |i, j| a[(i, j)]);
    let svd = mat
        .thin_svd()
        .map_err(|e| Error::NumericalFailure(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let k = rows.min(cols);
    let u = DMatrix::from_fn(rows, k, |i, j| u[(i, j)]);
    let v = DMatrix::from_fn(cols, k, |i, j| v[(i, j)]);
    let sigma = (0..k).map(|j| s[j]).collect();
    Ok((u, sigma, v))
}

/// Rank-one elementary components `sigma_k u_k v_k^T`, largest first.
///
/// Singular values below `max(SVD_REL_TOL * sigma_1, SVD_ABS_TOL)` are
/// dropped. An all-zero matrix yields one zero component so the result is
/// never empty. Each `u_k` is signed so its largest-magnitude entry is
/// non-negative.
pub fn svd_elementary(matrix: &TrajectoryMatrix) -> Result<Decomposition> {
    let config = *matrix.config();
    let data = matrix.data();
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure(
            "matrix has non-finite entries".into(),
        ));
    }
    let (u, sigma, v) = thin_svd(data)?;

    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));

    let sigma_max = order.first().map(|&k| sigma[k]).unwrap_or(0.0);
    let cutoff = (SVD_REL_TOL * sigma_max).max(SVD_ABS_TOL);

    let mut factors = SvdFactors {
        singular_values: Vec::new(),
        left: Vec::new(),
        right: Vec::new(),
    };
    let mut components = Vec::new();
    for &k in order.iter().filter(|&&k| sigma[k] >= cutoff) {
        let mut uk = u.column(k).into_owned();
        let mut vk = v.column(k).into_owned();
        let pivot = uk.iter().copied().fold(
            0.0_f64,
            |best, x| if x.abs() > best.abs() { x } else { best },
        );
        if pivot < 0.0 {
            uk.neg_mut();
            vk.neg_mut();
        }
        let z = &uk * vk.transpose() * sigma[k];
        components.push(ComponentMatrix::new(z, config, components.len() + 1)?);
        factors.singular_values.push(sigma[k]);
        factors.left.push(uk);
        factors.right.push(vk);
    }
    if components.is_empty() {
        components.push(ComponentMatrix::new(data.clone(), config, 1)?);
    }
    Ok(Decomposition {
        components,
        config,
        method: Method::Svd,
        factors: Some(factors),
    })
}

/// Disjoint sets of 1-based component labels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Grouping {
    groups: Vec<BTreeSet<usize>>,
}

impl Grouping {
    pub fn new(groups: Vec<BTreeSet<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for g in &groups {
            for &label in g {
                if !seen.insert(label) {
                    return Err(Error::OverlappingGroups(label));
                }
            }
        }
        Ok(Grouping { groups })
    }

    /// One group per component: `{1}, {2}, ..., {r}`.
    pub fn singletons(r: usize) -> Self {
        Grouping {
            groups: (1..=r).map(|k| BTreeSet::from([k])).collect(),
        }
    }

    pub fn groups(&self) -> &[BTreeSet<usize>] {
        &self.groups
    }

    /// Parses `"1,2;3;4-6"`: groups separated by `;`, labels by `,`,
    /// inclusive ranges with `-`.
    pub fn parse(spec: &str) -> std::result::Result<Self, String> {
        let mut groups = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let mut set = BTreeSet::new();
            for item in part.split(',').map(str::trim) {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| format!("bad component label `{t}`"))
                };
                match item.split_once('-') {
                    Some((a, b)) => {
                        let (a, b) = (parse(a)?, parse(b)?);
                        if a > b {
                            return Err(format!("empty range `{item}`"));
                        }
                        set.extend(a..=b);
                    }
                    None => {
                        set.insert(parse(item)?);
                    }
                }
            }
            groups.push(set);
        }
        Grouping::new(groups).map_err(|e| e.to_string())
    }
}

/// Sums the components of each group. Components not named by any group
/// are collected into a trailing residual component.
pub fn group_components(dec: &Decomposition, grouping: &Grouping) -> Result<Decomposition> {
    let r = dec.rank();
    for g in grouping.groups() {
        if let Some(&bad) = g.iter().find(|&&k| k == 0 || k > r) {
            return Err(Error::IndexOutOfRange {
                index: bad as i64,
                lo: 1,
                hi: r as i64,
            });
        }
    }
    let (d, m) = (dec.config.d(), dec.config.m());
    let sum_of = |labels: &mut dyn Iterator<Item = usize>| {
        let mut acc = DMatrix::zeros(d, m);
        for k in labels {
            acc += dec.components[k - 1].data();
        }
        acc
    };

    let mut components = Vec::new();
    for g in grouping.groups() {
        let data = sum_of(&mut g.iter().copied());
        components.push(ComponentMatrix::new(
            data,
            dec.config,
            components.len() + 1,
        )?);
    }
    let assigned: BTreeSet<usize> = grouping.groups().iter().flatten().copied().collect();
    if assigned.len() < r {
        let data = sum_of(&mut (1..=r).filter(|k| !assigned.contains(k)));
        components.push(ComponentMatrix::new(
            data,
            dec.config,
            components.len() + 1,
        )?);
    }
    if components.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Decomposition {
        components,
        config: dec.config,
        method: Method::Grouped,
        factors: None,
    })
}

/// How component matrices are turned back into series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reconstruction {
    #[default]
    PullBack,
    /// Anti-diagonal averaging; `force` allows it outside `s = 1, tau = 1`.
    Legacy { force: bool },
}

impl Reconstruction {
    pub fn apply(self, component: &ComponentMatrix) -> Result<TimeSeries> {
        match self {
            Reconstruction::PullBack => pull_back(component),
            Reconstruction::Legacy { force } => legacy_dap(component, force),
        }
    }
}

/// Result of [`decompose_series_with`]: the component series plus the
/// decomposition they came from.
#[derive(Debug, Clone)]
pub struct SeriesDecomposition {
    pub series: Vec<TimeSeries>,
    pub decomposition: Decomposition,
}

/// Embed, decompose with SVD, optionally group, and pull back.
pub fn decompose_series(
    series: &TimeSeries,
    d: usize,
    tau: usize,
    grouping: Option<&Grouping>,
) -> Result<Vec<TimeSeries>> {
    decompose_series_with(
        series,
        d,
        tau,
        grouping,
        &SvdBackend,
        Reconstruction::PullBack,
    )
    .map(|out| out.series)
}

pub fn decompose_series_with(
    series: &TimeSeries,
    d: usize,
    tau: usize,
    grouping: Option<&Grouping>,
    backend: &dyn Backend,
    reconstruction: Reconstruction,
) -> Result<SeriesDecomposition> {
    let matrix = embed(series, d, tau)?;
    if let Reconstruction::Legacy { force: false } = reconstruction {
        let cfg = matrix.config();
        if cfg.s() != 1 || cfg.tau() != 1 {
            return Err(Error::LegacyModeUnsafe {
                s: cfg.s(),
                tau: cfg.tau() as i64,
            });
        }
    }
    let mut decomposition = backend.decompose(&matrix)?;
    if let Some(g) = grouping {
        decomposition = group_components(&decomposition, g)?;
    }
    let series = decomposition
        .components
        .iter()
        .map(|c| reconstruction.apply(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesDecomposition {
        series,
        decomposition,
    })
}
