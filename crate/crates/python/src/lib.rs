//! Python module `assocfold_py`.
//!
//! Exact values cross the boundary as decimal approximations (floats) or as
//! the JSON documents produced by the exporters; exact computation stays on
//! the Rust side.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use assocfold::affine::{propagate_forms, ParamSet};
use assocfold::arquiver::knit;
use assocfold::error::Error;
use assocfold::exactfield::{make_field, parse_rational, rationals};
use assocfold::export::{off_string, polytope_json, section_json, to_json_string};
use assocfold::folding::{load_folding, validate_folding, FoldSpec};
use assocfold::polytope::{polytope_from_forms, SimplePolytope};
use assocfold::report::Report;
use assocfold::rootsystem::{build_quiver, CartanType, Orientation};
use assocfold::section::{run_fold, FoldRun};
use assocfold::ExactScalar;

create_exception!(assocfold_py, VerificationError, PyException);

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        1 => VerificationError::new_err(e.to_string()),
        2 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_type(label: &str) -> PyResult<CartanType> {
    label.parse().map_err(py_err)
}

fn base(c: &str) -> PyResult<ExactScalar> {
    let v = ExactScalar::from_rational(&rationals(), parse_rational(c).map_err(py_err)?);
    if !v.is_positive() {
        return Err(PyValueError::new_err(format!("c must be positive, got {c}")));
    }
    Ok(v)
}

type Rows = Vec<(String, bool, String)>;

fn rows(r: &Report) -> Rows {
    r.checks.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone())).collect()
}

fn vertex_rows(p: &SimplePolytope) -> Vec<(Vec<(usize, usize)>, Vec<f64>)> {
    p.vertices
        .iter()
        .map(|v| {
            let cluster = v.cluster.iter().map(|id| (id.k as usize, id.row + 1)).collect();
            (cluster, v.coords.iter().map(|x| x.to_f64()).collect())
        })
        .collect()
}

/// Generalized associahedron of a simply-laced type.
#[pyclass(name = "Polytope", module = "assocfold_py", frozen)]
struct PyPolytope {
    label: String,
    params: ParamSet,
    inner: SimplePolytope,
}

#[pymethods]
impl PyPolytope {
    #[new]
    #[pyo3(signature = (type_label, c = "1"))]
    fn new(type_label: &str, c: &str) -> PyResult<Self> {
        let ty = parse_type(type_label)?;
        if !ty.is_simply_laced() {
            return Err(PyValueError::new_err(format!("{ty} is not simply-laced; use Folding")));
        }
        let q = build_quiver(ty, Orientation::Bipartite).map_err(py_err)?;
        let mq = knit(&q).map_err(py_err)?;
        let params = ParamSet::uniform(&mq, &base(c)?).map_err(py_err)?;
        let forms = propagate_forms(&mq, &params).map_err(py_err)?;
        let inner = polytope_from_forms(&forms, &rationals()).map_err(py_err)?;
        Ok(PyPolytope {
            label: ty.to_string(),
            params,
            inner,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn f_vector(&self) -> Vec<usize> {
        self.inner.f_vector()
    }

    /// `(cluster, coords)` pairs; clusters as 1-based `(k, i)`.
    fn vertices(&self) -> Vec<(Vec<(usize, usize)>, Vec<f64>)> {
        vertex_rows(&self.inner)
    }

    fn to_json(&self) -> PyResult<String> {
        to_json_string(&polytope_json(&self.inner, &self.label, Some(&self.params))).map_err(py_err)
    }

    fn to_off(&self) -> String {
        off_string(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Polytope({}, f_vector={:?})", self.label, self.inner.f_vector())
    }
}

/// An unfolding onto a non-simply-laced type.
#[pyclass(name = "Folding", module = "assocfold_py", frozen)]
struct PyFolding {
    inner: FoldSpec,
}

#[pymethods]
impl PyFolding {
    #[new]
    #[pyo3(signature = (target, source = None))]
    fn new(target: &str, source: Option<&str>) -> PyResult<Self> {
        let source = source.map(parse_type).transpose()?;
        let inner = load_folding(parse_type(target)?, source).map_err(py_err)?;
        Ok(PyFolding { inner })
    }

    #[getter]
    fn source(&self) -> String {
        self.inner.source_type().to_string()
    }

    #[getter]
    fn target(&self) -> String {
        self.inner.target_type().to_string()
    }

    /// 1-based source vertices of each block.
    #[getter]
    fn blocks(&self) -> Vec<Vec<usize>> {
        self.inner.blocks.iter().map(|b| b.iter().map(|j| j + 1).collect()).collect()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights.iter().map(|w| w.to_f64()).collect()
    }

    /// `(name, passed, detail)` for each folding check.
    fn validate(&self) -> PyResult<Rows> {
        validate_folding(&self.inner).map(|r| rows(&r)).map_err(py_err)
    }

    /// `lambda'_{[i]} = sum_{P(j) = [i]} w_j lambda_j` on an integer vector.
    fn project(&self, lambda: Vec<i64>) -> PyResult<Vec<f64>> {
        if lambda.len() != self.inner.source_rank() {
            return Err(PyValueError::new_err(format!("expected {} entries", self.inner.source_rank())));
        }
        Ok(self.inner.project_ints(&lambda).iter().map(|x| x.to_f64()).collect())
    }

    #[pyo3(signature = (c = "1"))]
    fn section(&self, c: &str) -> PyResult<PySection> {
        let run = run_fold(&self.inner, &base(c)?).map_err(py_err)?;
        Ok(PySection { run })
    }

    fn __repr__(&self) -> String {
        format!("Folding({} -> {})", self.source(), self.target())
    }
}

/// Section of the ambient associahedron by the folding plane.
#[pyclass(name = "Section", module = "assocfold_py", frozen)]
struct PySection {
    run: FoldRun,
}

#[pymethods]
impl PySection {
    #[getter]
    fn f_vector(&self) -> Vec<usize> {
        self.run.section.polytope.f_vector()
    }

    #[getter]
    fn ambient_f_vector(&self) -> Vec<usize> {
        self.run.ambient.f_vector()
    }

    fn vertices(&self) -> Vec<(Vec<(usize, usize)>, Vec<f64>)> {
        vertex_rows(&self.run.section.polytope)
    }

    /// Runs the fan and intersection checks; `(passed, rows)`.
    #[pyo3(signature = (samples = 1000, seed = 20240601))]
    fn verify(&self, py: Python<'_>, samples: usize, seed: u64) -> PyResult<(bool, Rows)> {
        let r = py.detach(|| self.run.verify(samples, seed)).map_err(py_err)?;
        Ok((r.passed(), rows(&r)))
    }

    fn to_json(&self) -> PyResult<String> {
        to_json_string(&section_json(&self.run)).map_err(py_err)
    }

    fn to_off(&self) -> String {
        off_string(&self.run.section.polytope)
    }
}

#[pyfunction]
fn catalan(type_label: &str) -> PyResult<u64> {
    Ok(parse_type(type_label)?.catalan_count())
}

#[pyfunction]
fn coxeter_number(type_label: &str) -> PyResult<u64> {
    Ok(parse_type(type_label)?.coxeter_data().h)
}

/// Integer coefficients of the minimal polynomial of `2cos(pi/m)`, constant term first.
#[pyfunction]
fn min_poly(m: u32) -> PyResult<Vec<String>> {
    let f = make_field(m).map_err(py_err)?;
    Ok(f.minimal_polynomial().iter().map(|c| c.to_string()).collect())
}

#[pyfunction]
fn mesh_equations(type_label: &str) -> PyResult<Vec<String>> {
    let q = build_quiver(parse_type(type_label)?, Orientation::Bipartite).map_err(py_err)?;
    Ok(knit(&q).map_err(py_err)?.equations())
}

#[pymodule]
fn assocfold_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyFolding>()?;
    m.add_class::<PySection>()?;
    m.add_function(wrap_pyfunction!(catalan, m)?)?;
    m.add_function(wrap_pyfunction!(coxeter_number, m)?)?;
    m.add_function(wrap_pyfunction!(min_poly, m)?)?;
    m.add_function(wrap_pyfunction!(mesh_equations, m)?)?;
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    Ok(())
}
