//! Python bindings. Series and matrices cross the boundary as plain lists.

use gdap_core as core;
use gdap_core::{IndexConvention, Rectangle};
use nalgebra::DMatrix;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(
    gdap,
    GdapError,
    PyValueError,
    "Invalid input or failed computation."
);

fn to_py(e: core::Error) -> PyErr {
    GdapError::new_err(format!("{}: {e}", e.kind()))
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for core::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn convention(s: i64) -> PyResult<IndexConvention> {
    IndexConvention::from_flag(s).or_py()
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn matrix_from_rows(rows: &[Vec<f64>]) -> PyResult<DMatrix<f64>> {
    let d = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if d == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(GdapError::new_err(
            "matrix must be a non-empty list of equal-length rows",
        ));
    }
    Ok(DMatrix::from_fn(d, m, |i, j| rows[i][j]))
}

fn rectangle(rect: (i64, i64, i64, i64)) -> PyResult<Rectangle> {
    Rectangle::new(rect.0, rect.1, rect.2, rect.3).or_py()
}

/// Shape, delay and index convention of an embedding.
#[pyclass(
    name = "EmbeddingConfig",
    module = "gdap",
    frozen,
    skip_from_py_object,
    eq
)]
#[derive(Clone, Copy, PartialEq)]
struct PyEmbeddingConfig(core::EmbeddingConfig);

#[pymethods]
impl PyEmbeddingConfig {
    #[new]
    #[pyo3(signature = (n, d, tau = 1, s = 0))]
    fn new(n: i64, d: i64, tau: i64, s: i64) -> PyResult<Self> {
        core::validate_config(n, d, tau, s).map(Self).or_py()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    #[getter]
    fn tau(&self) -> usize {
        self.0.tau()
    }

    #[getter]
    fn s(&self) -> i64 {
        self.0.s()
    }

    /// First and last logical sample index.
    fn index_range(&self) -> (i64, i64) {
        self.0.index_range()
    }

    /// Logical sample index stored at logical cell (row, col).
    fn sample_index(&self, row: i64, col: i64) -> PyResult<i64> {
        let s = self.0.s();
        let (r, c) = (row - s, col - s);
        if r < 0 || c < 0 || r as usize >= self.0.d() || c as usize >= self.0.m() {
            return Err(GdapError::new_err(format!(
                "cell ({row}, {col}) is outside the matrix"
            )));
        }
        Ok(self.0.sample_index(r as usize, c as usize))
    }

    fn __repr__(&self) -> String {
        format!(
            "EmbeddingConfig(n={}, d={}, tau={}, s={}, m={})",
            self.0.len(),
            self.0.d(),
            self.0.tau(),
            self.0.s(),
            self.0.m()
        )
    }
}

/// A finite series with its index convention.
#[pyclass(name = "TimeSeries", module = "gdap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTimeSeries(core::TimeSeries);

#[pymethods]
impl PyTimeSeries {
    #[new]
    #[pyo3(signature = (values, s = 0))]
    fn new(values: Vec<f64>, s: i64) -> PyResult<Self> {
        core::TimeSeries::new(values, convention(s)?)
            .map(Self)
            .or_py()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn s(&self) -> i64 {
        self.0.convention().flag()
    }

    #[getter]
    fn first_index(&self) -> i64 {
        self.0.first_index()
    }

    #[getter]
    fn last_index(&self) -> i64 {
        self.0.last_index()
    }

    /// Sample at logical index `n`.
    fn get(&self, n: i64) -> PyResult<f64> {
        self.0.get(n).ok_or_else(|| {
            to_py(core::Error::IndexOutOfRange {
                index: n,
                lo: self.0.first_index(),
                hi: self.0.last_index(),
            })
        })
    }

    fn embed(&self, d: usize, tau: usize) -> PyResult<PyTrajectoryMatrix> {
        core::embed(&self.0, d, tau).map(PyTrajectoryMatrix).or_py()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "TimeSeries(len={}, s={})",
            self.0.len(),
            self.0.convention().flag()
        )
    }
}

/// A d x m trajectory matrix.
#[pyclass(
    name = "TrajectoryMatrix",
    module = "gdap",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyTrajectoryMatrix(core::TrajectoryMatrix);

#[pymethods]
impl PyTrajectoryMatrix {
    #[getter]
    fn rows(&self) -> Vec<Vec<f64>> {
        rows_of(self.0.data())
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        self.0.data().shape()
    }

    #[getter]
    fn config(&self) -> PyEmbeddingConfig {
        PyEmbeddingConfig(*self.0.config())
    }

    /// Entry at logical cell (i, j).
    fn get(&self, i: i64, j: i64) -> PyResult<f64> {
        self.0
            .get(i, j)
            .ok_or_else(|| GdapError::new_err(format!("cell ({i}, {j}) is outside the matrix")))
    }

    fn pull_back(&self) -> PyResult<Vec<f64>> {
        core::pull_back(&self.0.clone().into_component())
            .map(|x| x.into_values())
            .or_py()
    }

    fn __repr__(&self) -> String {
        let (d, m) = self.0.data().shape();
        format!(
            "TrajectoryMatrix({d}x{m}, tau={}, s={})",
            self.0.config().tau(),
            self.0.config().s()
        )
    }
}

fn component(rows: Vec<Vec<f64>>, tau: i64, s: i64) -> PyResult<core::ComponentMatrix> {
    let data = matrix_from_rows(&rows)?;
    let (d, m) = data.shape();
    if tau < 1 {
        return Err(to_py(core::Error::InvalidDelay(tau)));
    }
    let len = m as i64 + (d as i64 - 1) * tau;
    let cfg = core::validate_config(len, d as i64, tau, s).or_py()?;
    core::ComponentMatrix::new(data, cfg, 1).or_py()
}

/// Validate (N, d, tau, s) and return the embedding configuration.
#[pyfunction]
#[pyo3(signature = (n, d, tau = 1, s = 0))]
fn validate_config(n: i64, d: i64, tau: i64, s: i64) -> PyResult<PyEmbeddingConfig> {
    PyEmbeddingConfig::new(n, d, tau, s)
}

/// Embed a series into its trajectory matrix.
#[pyfunction]
#[pyo3(signature = (values, d, tau = 1, s = 0))]
fn embed(values: Vec<f64>, d: usize, tau: usize, s: i64) -> PyResult<PyTrajectoryMatrix> {
    let x = core::TimeSeries::new(values, convention(s)?).or_py()?;
    core::embed(&x, d, tau).map(PyTrajectoryMatrix).or_py()
}

/// Row window (q_min, q_max) of the cells holding sample `n`.
#[pyfunction]
fn q_bounds(n: i64, config: &PyEmbeddingConfig) -> PyResult<(i64, i64)> {
    core::q_bounds(n, &config.0)
        .map(|q| (q.q_min, q.q_max))
        .or_py()
}

/// Average each sample's cells of a d x m matrix given as rows.
#[pyfunction]
#[pyo3(signature = (rows, tau = 1, s = 0))]
fn pull_back(rows: Vec<Vec<f64>>, tau: i64, s: i64) -> PyResult<Vec<f64>> {
    core::pull_back(&component(rows, tau, s)?)
        .map(|x| x.into_values())
        .or_py()
}

/// Classical anti-diagonal averaging; refuses s != 1 or tau != 1 unless forced.
#[pyfunction]
#[pyo3(signature = (rows, tau = 1, s = 1, force = false))]
fn legacy_dap(rows: Vec<Vec<f64>>, tau: i64, s: i64, force: bool) -> PyResult<Vec<f64>> {
    core::legacy_dap(&component(rows, tau, s)?, force)
        .map(|x| x.into_values())
        .or_py()
}

/// Solutions of tau*x + y = n + s*tau with (x, y) inside (a1, a2, b1, b2).
#[pyfunction]
fn solve_constrained(
    n: i64,
    tau: i64,
    s: i64,
    rect: (i64, i64, i64, i64),
) -> PyResult<Vec<(i64, i64)>> {
    check_tau(tau)?;
    Ok(core::solve_constrained(n, tau, convention(s)?, &rectangle(rect)?).points)
}

#[pyfunction]
fn count_solutions(n: i64, tau: i64, s: i64, rect: (i64, i64, i64, i64)) -> PyResult<i64> {
    check_tau(tau)?;
    Ok(core::count_solutions(
        n,
        tau,
        convention(s)?,
        &rectangle(rect)?,
    ))
}

/// (x_min, x_max); the range is empty when x_min > x_max.
#[pyfunction]
fn x_bounds(n: i64, tau: i64, s: i64, rect: (i64, i64, i64, i64)) -> PyResult<(i64, i64)> {
    check_tau(tau)?;
    Ok(core::x_bounds(n, tau, convention(s)?, &rectangle(rect)?))
}

fn check_tau(tau: i64) -> PyResult<()> {
    if tau < 1 {
        return Err(to_py(core::Error::InvalidDelay(tau)));
    }
    Ok(())
}

/// Number of cells holding sample n for tau = 1, s = 1.
#[pyfunction]
fn unit_delay_cardinality(n: i64, d: i64, m: i64) -> PyResult<i64> {
    core::unit_delay_cardinality(n, d, m).or_py()
}

/// Cells holding sample n, found by scanning the whole matrix.
#[pyfunction]
fn occurrence_oracle(n: i64, config: &PyEmbeddingConfig) -> PyResult<Vec<(i64, i64)>> {
    core::occurrence_oracle(n, &config.0)
        .map(|set| set.into_iter().collect())
        .or_py()
}

/// SVD decomposition pulled back to component series.
///
/// `groups` is a list of lists of 1-based component labels; unnamed
/// components are summed into a trailing residual group.
#[pyfunction]
#[pyo3(signature = (values, d, tau = 1, s = 0, groups = None, legacy = false, force = false))]
fn decompose_series(
    values: Vec<f64>,
    d: usize,
    tau: usize,
    s: i64,
    groups: Option<Vec<Vec<usize>>>,
    legacy: bool,
    force: bool,
) -> PyResult<Vec<Vec<f64>>> {
    let x = core::TimeSeries::new(values, convention(s)?).or_py()?;
    let grouping = groups
        .map(|g| core::Grouping::new(g.into_iter().map(|v| v.into_iter().collect()).collect()))
        .transpose()
        .or_py()?;
    let mode = if legacy {
        core::Reconstruction::Legacy { force }
    } else {
        core::Reconstruction::PullBack
    };
    core::decompose_series_with(&x, d, tau, grouping.as_ref(), &core::SvdBackend, mode)
        .map(|out| out.series.into_iter().map(|t| t.into_values()).collect())
        .or_py()
}

#[pymodule]
fn gdap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("GdapError", m.py().get_type::<GdapError>())?;
    m.add_class::<PyEmbeddingConfig>()?;
    m.add_class::<PyTimeSeries>()?;
    m.add_class::<PyTrajectoryMatrix>()?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(q_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(pull_back, m)?)?;
    m.add_function(wrap_pyfunction!(legacy_dap, m)?)?;
    m.add_function(wrap_pyfunction!(solve_constrained, m)?)?;
    m.add_function(wrap_pyfunction!(count_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(x_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(unit_delay_cardinality, m)?)?;
    m.add_function(wrap_pyfunction!(occurrence_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_series, m)?)?;
    Ok(())
}
