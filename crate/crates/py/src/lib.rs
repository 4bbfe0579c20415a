use std::time::Duration;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use alpha_core::bounds;
use alpha_core::canon;
use alpha_core::construct::ConstructionId;
use alpha_core::lattice::{self, PointSet3 as CorePoints};
use alpha_core::solve::{self, Engine, Solve, SolveOptions};
use alpha_core::{BinaryMatrix, Error};

fn err(e: Error) -> PyErr {
    match e {
        Error::Contract(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn secs(budget: Option<f64>) -> PyResult<Option<Duration>> {
    budget
        .map(|b| Duration::try_from_secs_f64(b).map_err(|e| PyValueError::new_err(e.to_string())))
        .transpose()
}

/// A 0/1 matrix.
#[pyclass(name = "Matrix", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct Matrix {
    inner: BinaryMatrix,
}

#[pymethods]
impl Matrix {
    /// Rows given as strings of `0` and `1`.
    #[new]
    fn new(rows: Vec<String>) -> PyResult<Self> {
        let refs: Vec<&str> = rows.iter().map(String::as_str).collect();
        BinaryMatrix::from_row_strs(&refs).map(|inner| Matrix { inner }).map_err(err)
    }

    /// Parses the matrix-text format (header line, then rows).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        text.parse().map(|inner| Matrix { inner }).map_err(err)
    }

    #[getter]
    fn n_rows(&self) -> usize {
        self.inner.n_rows()
    }

    #[getter]
    fn n_cols(&self) -> usize {
        self.inner.n_cols()
    }

    fn ones_count(&self) -> usize {
        self.inner.ones_count()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<bool> {
        if i >= self.inner.n_rows() || j >= self.inner.n_cols() {
            return Err(PyValueError::new_err("index out of range"));
        }
        Ok(self.inner.get(i, j))
    }

    fn rows(&self) -> Vec<String> {
        self.inner.body_text().lines().map(str::to_string).collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn transpose(&self) -> Matrix {
        Matrix {
            inner: self.inner.transpose(),
        }
    }

    /// Rows and columns of an all-zero `k x k` minor, or `None`.
    fn find_zero_minor(&self, k: usize) -> PyResult<Option<(Vec<usize>, Vec<usize>)>> {
        let w = alpha_core::find_zero_minor(&self.inner, k).map_err(err)?;
        Ok(w.map(|w| (w.rows.to_vec(), w.cols.to_vec())))
    }

    /// `(text, sha256)` of the canonical form under row and column permutations.
    #[pyo3(signature = (with_transpose=false))]
    fn canonical_form(&self, with_transpose: bool) -> PyResult<(String, String)> {
        let f = canon::canonical_form(&self.inner, with_transpose).map_err(err)?;
        Ok((f.text(), f.digest()))
    }

    #[pyo3(signature = (other, with_transpose=false))]
    fn is_equivalent(&self, other: &Matrix, with_transpose: bool) -> PyResult<bool> {
        canon::are_equivalent(&self.inner, &other.inner, with_transpose).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.rows())
    }
}

/// Outcome of an exact solve; `exact` is false when the budget ran out.
#[pyclass(name = "AlphaResult", frozen, get_all)]
struct AlphaResult {
    k: usize,
    n: usize,
    exact: bool,
    value: Option<usize>,
    lower: usize,
    upper: usize,
    certificate: Option<Matrix>,
    nodes_expanded: u64,
    runtime_ms: u64,
}

#[pymethods]
impl AlphaResult {
    fn __repr__(&self) -> String {
        match self.value {
            Some(v) => format!("AlphaResult(k={}, n={}, value={v})", self.k, self.n),
            None => format!("AlphaResult(k={}, n={}, bounds=[{}, {}])", self.k, self.n, self.lower, self.upper),
        }
    }
}

#[pyfunction]
#[pyo3(signature = (k, n, budget=300.0, threads=None, engine="row-orderly"))]
fn solve_alpha(py: Python<'_>, k: usize, n: usize, budget: Option<f64>, threads: Option<usize>, engine: &str) -> PyResult<AlphaResult> {
    let engine = match engine {
        "row-orderly" => Engine::RowOrderly,
        "witness" => Engine::WitnessBranching,
        other => return Err(PyValueError::new_err(format!("unknown engine {other:?}"))),
    };
    let opts = SolveOptions {
        budget: secs(budget)?,
        threads,
        engine,
    };
    let s = py.detach(|| solve::solve_alpha_with(k, n, &opts)).map_err(err)?;
    let stats = s.stats().clone();
    Ok(match s {
        Solve::Exact(r) => AlphaResult {
            k,
            n,
            exact: true,
            value: Some(r.value),
            lower: r.value,
            upper: r.value,
            certificate: Some(Matrix { inner: r.certificate }),
            nodes_expanded: stats.nodes_expanded,
            runtime_ms: stats.runtime_ms,
        },
        Solve::Bounds(b) => AlphaResult {
            k,
            n,
            exact: false,
            value: None,
            lower: b.lower,
            upper: b.upper,
            certificate: None,
            nodes_expanded: stats.nodes_expanded,
            runtime_ms: stats.runtime_ms,
        },
    })
}

/// Canonical texts of every optimal class, and whether the search finished.
#[pyfunction]
#[pyo3(signature = (k, n, value, budget=None))]
fn enumerate_optima(py: Python<'_>, k: usize, n: usize, value: usize, budget: Option<f64>) -> PyResult<(Vec<String>, bool)> {
    let budget = secs(budget)?;
    let e = py.detach(|| solve::enumerate_optima(k, n, value, budget)).map_err(err)?;
    Ok((e.classes.iter().map(|c| c.text()).collect(), e.complete))
}

#[pyfunction]
fn table_cells() -> Vec<(usize, usize, usize)> {
    solve::table_cells()
}

/// Builds and verifies a matrix from a named family.
#[pyfunction]
#[pyo3(signature = (family, k, n=None, a=None))]
fn construct(family: &str, k: usize, n: Option<usize>, a: Option<usize>) -> PyResult<Matrix> {
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| PyValueError::new_err(format!("{family} needs {name}")));
    let id = match family {
        "diagonal" => ConstructionId::DiagonalIdentity { n: need(n, "n")?, k },
        "even_middle" => ConstructionId::EvenMiddle { k },
        "band_4k5" => ConstructionId::Band4k5 { k },
        "seven_halves" => ConstructionId::SevenHalves { k },
        "ten_thirds" => ConstructionId::TenThirds { k },
        "general" => ConstructionId::General { k, a: need(a, "a")? },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    id.build().map(|b| Matrix { inner: b.matrix }).map_err(err)
}

/// `(best_upper, best_family, [(family, value, applicable)])`.
#[pyfunction]
fn upper_bound_report(k: u64) -> PyResult<(u64, String, Vec<(String, u64, bool)>)> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be positive"));
    }
    let r = bounds::upper_bound_report(k);
    let fams = r
        .families
        .iter()
        .map(|f| (f.family.name().to_string(), f.value, f.applicable))
        .collect();
    Ok((r.best_upper, r.best_family.name().to_string(), fams))
}

#[pyfunction]
fn crossover_scan(k_max: u64) -> Vec<(u64, String, String)> {
    bounds::crossover_scan(k_max)
        .into_iter()
        .map(|c| (c.k, c.old_family.name().to_string(), c.new_family.name().to_string()))
        .collect()
}

#[pyfunction]
fn cs_bound_2d(n: u32) -> f64 {
    bounds::cs_bound_2d(n)
}

#[pyfunction]
fn cs_bound_3d(n: u32) -> f64 {
    bounds::cs_bound_3d(n)
}

/// Marked points in the `N x N x N` grid.
#[pyclass(name = "PointSet3", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PointSet3 {
    inner: CorePoints,
}

#[pymethods]
impl PointSet3 {
    #[new]
    #[pyo3(signature = (n, points=Vec::new()))]
    fn new(n: usize, points: Vec<(usize, usize, usize)>) -> PyResult<Self> {
        CorePoints::from_points(n, points.into_iter().map(|(x, y, z)| [x, y, z]))
            .map(|inner| PointSet3 { inner })
            .map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn points(&self) -> Vec<(usize, usize, usize)> {
        self.inner.points().into_iter().map(|[x, y, z]| (x, y, z)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// `((x1, x2), (y1, y2), (z1, z2))` of the least unhit box, or `None`.
    #[allow(clippy::type_complexity)]
    fn find_unhit_box(&self) -> Option<((usize, usize), (usize, usize), (usize, usize))> {
        lattice::find_unhit_box(&self.inner).map(|b| (b.x, b.y, b.z))
    }

    /// Sorted point codes of the orbit's least member.
    fn canonical_form(&self) -> PyResult<Vec<u8>> {
        lattice::canonical_form_3d(&self.inner).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("PointSet3({}, {:?})", self.inner.n(), self.points())
    }
}

/// `(value, certificate)`; raises `RuntimeError` if the budget runs out.
#[pyfunction]
#[pyo3(signature = (n, budget=300.0))]
fn solve_min_marks_3d(py: Python<'_>, n: usize, budget: Option<f64>) -> PyResult<(usize, PointSet3)> {
    let budget = secs(budget)?;
    let s = py
        .detach(|| lattice::solve_min_marks_3d_with(n, budget, lattice::Engine3::Layered))
        .map_err(err)?;
    match s.exact() {
        Some(r) => Ok((r.value, PointSet3 { inner: r.certificate.clone() })),
        None => Err(PyRuntimeError::new_err("budget exhausted")),
    }
}

#[pyfunction]
fn solve_min_marks_2d(n: usize) -> PyResult<usize> {
    lattice::solve_min_marks_2d(n).map_err(err)
}

#[pyfunction]
fn layer_count_lower_bound(n: usize) -> PyResult<usize> {
    lattice::layer_count_lower_bound(n).map_err(err)
}

#[pymodule]
fn alphak(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matrix>()?;
    m.add_class::<AlphaResult>()?;
    m.add_class::<PointSet3>()?;
    m.add_function(wrap_pyfunction!(solve_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_optima, m)?)?;
    m.add_function(wrap_pyfunction!(table_cells, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound_report, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_scan, m)?)?;
    m.add_function(wrap_pyfunction!(cs_bound_2d, m)?)?;
    m.add_function(wrap_pyfunction!(cs_bound_3d, m)?)?;
    m.add_function(wrap_pyfunction!(solve_min_marks_3d, m)?)?;
    m.add_function(wrap_pyfunction!(solve_min_marks_2d, m)?)?;
    m.add_function(wrap_pyfunction!(layer_count_lower_bound, m)?)?;
    Ok(())
}
