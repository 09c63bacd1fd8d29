//! Python bindings for the `naimark` crate.
//!
//! Matrices cross the boundary as lists of rows (`list[list[float]]`);
//! matroid bases are 1-indexed, as in the CLI's serialized form.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use naimark::extensions::{MapKind, Property, Sampler};
use naimark::frames::{self, Frame, ProjectionMember, PsdMember, Scalability};
use naimark::{extensions, matroids, Field, Matrix, DEFAULT_TOL};

fn err(e: naimark::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(err)
}

fn to_rows(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

/// A matroid given by its bases.
#[pyclass(name = "Matroid", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatroid {
    inner: matroids::Matroid,
}

#[pymethods]
impl PyMatroid {
    /// Build from a ground-set size and 1-indexed bases; raises if the bases
    /// violate the basis axioms.
    #[new]
    fn new(ground_size: usize, bases: Vec<Vec<usize>>) -> PyResult<Self> {
        let inner = matroids::Matroid::try_from(matroids::SerializedMatroid { ground_size, bases })
            .map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn bases(&self) -> Vec<Vec<usize>> {
        self.inner.to_serialized().bases
    }

    /// The Gale dual.
    fn dual(&self) -> Self {
        Self {
            inner: matroids::gale_dual(&self.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Matroid(ground_size={}, bases={:?})",
            self.inner.ground_size(),
            self.bases()
        )
    }
}

/// Optimal frame bounds `(a, b)` of a `d x n` synthesis matrix.
#[pyfunction]
#[pyo3(signature = (frame, tol=DEFAULT_TOL))]
fn frame_bounds(frame: Vec<Vec<f64>>, tol: f64) -> PyResult<(f64, f64)> {
    let b = frames::frame_bounds(&to_matrix(frame)?, tol).map_err(err)?;
    Ok((b.lower, b.upper))
}

#[pyfunction]
#[pyo3(signature = (frame, tol=DEFAULT_TOL))]
fn is_parseval(frame: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    Ok(frames::is_parseval(&to_matrix(frame)?, tol))
}

/// Naimark complement of a Parseval frame (rows completed to an orthogonal matrix).
#[pyfunction]
#[pyo3(signature = (frame, tol=DEFAULT_TOL))]
fn naimark_complement(frame: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<Vec<f64>>> {
    let f = Frame::new(to_matrix(frame)?, tol).map_err(err)?;
    let g = frames::naimark_complement_parseval(&f, tol).map_err(err)?;
    Ok(to_rows(g.synthesis()))
}

/// `I - P` for an orthogonal projection `P`.
#[pyfunction]
fn naimark_gram(projection: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
    let p = ProjectionMember::new(to_matrix(projection)?).map_err(err)?;
    Ok(to_rows(frames::naimark_gram(&p).matrix()))
}

#[pyfunction]
#[pyo3(signature = (a, tol=DEFAULT_TOL))]
fn spectral_shift(a: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<Vec<f64>>> {
    let a = PsdMember::new(to_matrix(a)?, tol).map_err(err)?;
    Ok(to_rows(extensions::spectral_shift(&a, tol).map_err(err)?.matrix()))
}

#[pyfunction]
#[pyo3(signature = (a, tol=DEFAULT_TOL))]
fn kernel_extension(a: Vec<Vec<f64>>, tol: f64) -> PyResult<Vec<Vec<f64>>> {
    let a = PsdMember::new(to_matrix(a)?, tol).map_err(err)?;
    Ok(to_rows(extensions::kernel_extension(&a).map_err(err)?.matrix()))
}

/// Positive scalars making the frame Parseval, or `None` if there are none.
#[pyfunction]
#[pyo3(signature = (frame, tol=DEFAULT_TOL))]
fn scalability_solve(frame: Vec<Vec<f64>>, tol: f64) -> PyResult<Option<Vec<f64>>> {
    let f = Frame::new(to_matrix(frame)?, tol).map_err(err)?;
    Ok(match frames::scalability_solve(&f).map_err(err)? {
        Scalability::Scalable(s) => Some(s.scalars),
        Scalability::Infeasible => None,
    })
}

/// Scale to Parseval, complement, un-scale. Returns `(frame, scalars)`.
#[pyfunction]
#[pyo3(signature = (frame, tol=DEFAULT_TOL))]
fn scalable_extension(frame: Vec<Vec<f64>>, tol: f64) -> PyResult<(Vec<Vec<f64>>, Vec<f64>)> {
    let f = Frame::new(to_matrix(frame)?, tol).map_err(err)?;
    let ext = frames::scalable_extension(&f, tol).map_err(err)?;
    Ok((to_rows(ext.frame.synthesis()), ext.scalars))
}

#[pyfunction]
#[pyo3(signature = (matrix, tol=DEFAULT_TOL))]
fn matroid_from_columns(matrix: Vec<Vec<f64>>, tol: f64) -> PyResult<PyMatroid> {
    let inner = matroids::matroid_from_columns(&to_matrix(matrix)?, tol).map_err(err)?;
    Ok(PyMatroid { inner })
}

#[pyfunction]
#[pyo3(signature = (a, b, tol=DEFAULT_TOL))]
fn is_gale_pair(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    matroids::is_gale_pair(&to_matrix(a)?, &to_matrix(b)?, tol).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (a, tol=DEFAULT_TOL))]
fn verify_prop1(a: Vec<Vec<f64>>, tol: f64) -> PyResult<bool> {
    let a = PsdMember::new(to_matrix(a)?, tol).map_err(err)?;
    matroids::verify_prop1(&a, tol).map_err(err)
}

/// `(lhs, rhs, holds)` of the Davis-Kahan bound for two same-rank PSD matrices.
#[pyfunction]
#[pyo3(signature = (a, b, tol=DEFAULT_TOL))]
fn davis_kahan_check(a: Vec<Vec<f64>>, b: Vec<Vec<f64>>, tol: f64) -> PyResult<(f64, f64, bool)> {
    let a = PsdMember::new(to_matrix(a)?, tol).map_err(err)?;
    let b = PsdMember::new(to_matrix(b)?, tol).map_err(err)?;
    let dk = extensions::davis_kahan_check(&a, &b).map_err(err)?;
    Ok((dk.lhs, dk.rhs, dk.holds))
}

#[pyfunction]
#[pyo3(signature = (d, n, field="real"))]
fn stratum_dimension(d: usize, n: usize, field: &str) -> PyResult<usize> {
    let field = match field {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(PyValueError::new_err(format!("unknown field {other:?}"))),
    };
    extensions::stratum_dimension(d, n, field).map_err(err)
}

/// Run a property check and return the report as a dict.
#[pyfunction]
#[pyo3(signature = (map, property, n, trials=100, seed=0, sampler="stratified"))]
fn check_property<'py>(
    py: Python<'py>,
    map: &str,
    property: &str,
    n: usize,
    trials: usize,
    seed: u64,
    sampler: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let map: MapKind = map.parse().map_err(err)?;
    let property: Property = property.parse().map_err(err)?;
    let sampler: Sampler = sampler.parse().map_err(err)?;
    let cfg = naimark::CheckConfig::new(map, property, n, trials, seed).with_sampler(sampler);
    let report = naimark::check_property(&cfg).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("map", report.map.name())?;
    out.set_item("property", report.property.name())?;
    out.set_item("n", report.n)?;
    out.set_item("trials", report.trials)?;
    out.set_item("failures", report.failures)?;
    out.set_item("predicted_failures", report.predicted_failures)?;
    out.set_item("mismatches", report.mismatches)?;
    out.set_item("worst_residual", report.worst_residual)?;
    out.set_item("matches_prediction", report.matches_prediction())?;
    match &report.witness {
        Some(w) => out.set_item("witness", (w.trial, to_rows(&w.input), to_rows(&w.output)))?,
        None => out.set_item("witness", py.None())?,
    }
    Ok(out)
}

#[pymodule]
fn naimark_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatroid>()?;
    m.add_function(wrap_pyfunction!(frame_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(is_parseval, m)?)?;
    m.add_function(wrap_pyfunction!(naimark_complement, m)?)?;
    m.add_function(wrap_pyfunction!(naimark_gram, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_shift, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_extension, m)?)?;
    m.add_function(wrap_pyfunction!(scalability_solve, m)?)?;
    m.add_function(wrap_pyfunction!(scalable_extension, m)?)?;
    m.add_function(wrap_pyfunction!(matroid_from_columns, m)?)?;
    m.add_function(wrap_pyfunction!(is_gale_pair, m)?)?;
    m.add_function(wrap_pyfunction!(verify_prop1, m)?)?;
    m.add_function(wrap_pyfunction!(davis_kahan_check, m)?)?;
    m.add_function(wrap_pyfunction!(stratum_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(check_property, m)?)?;
    Ok(())
}
