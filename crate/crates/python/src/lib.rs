//! Python module `uecsm`. Matrices are lists of rows of complex numbers.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use uecsm_core::constructors::{construct_lsat, default_diagonal, generate_wat_not_sat, Signature};
use uecsm_core::nilpotent4::{classify, NilpotentParams};
use uecsm_core::oracle::{self, OracleConfig, OracleStatus};
use uecsm_core::report::{self, AnalysisOptions, Tolerances};
use uecsm_core::tracetests::{self, DEFAULT_TOL};
use uecsm_core::{CMatrix, C64};

create_exception!(uecsm, UecsmError, PyException, "Raised for invalid input or inapplicable criteria.");

fn err(e: uecsm_core::Error) -> PyErr {
    UecsmError::new_err(e.to_string())
}

pub fn to_matrix(rows: Vec<Vec<C64>>) -> uecsm_core::Result<CMatrix> {
    CMatrix::from_rows(&rows)
}

fn matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    to_matrix(rows).map_err(err)
}

/// Converts any serializable value to plain Python objects through JSON.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| UecsmError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Outcome of one criterion.
#[pyclass(frozen, get_all)]
pub struct Verdict {
    criterion: String,
    passed: bool,
    residuals: Vec<(String, f64)>,
    tol: f64,
}

#[pymethods]
impl Verdict {
    fn __bool__(&self) -> bool {
        self.passed
    }

    fn __repr__(&self) -> String {
        format!("Verdict({:?}, passed={}, tol={:e})", self.criterion, self.passed, self.tol)
    }
}

impl From<uecsm_core::Verdict> for Verdict {
    fn from(v: uecsm_core::Verdict) -> Self {
        Self {
            criterion: v.criterion,
            passed: v.pass,
            residuals: v.residuals.into_iter().map(|r| (r.name, r.value)).collect(),
            tol: v.tol,
        }
    }
}

/// Result of the symmetrizer search.
#[pyclass(frozen, get_all)]
pub struct OracleResult {
    witness: bool,
    unitary: Option<Vec<Vec<C64>>>,
    residual: f64,
    iterations: usize,
    restarts_used: usize,
}

#[pymethods]
impl OracleResult {
    fn __repr__(&self) -> String {
        format!("OracleResult(witness={}, residual={:e}, restarts_used={})", self.witness, self.residual, self.restarts_used)
    }
}

/// Runs every applicable criterion and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (matrix, tol = DEFAULT_TOL, oracle = false, seed = 0, label = None))]
fn analyze<'py>(
    py: Python<'py>,
    matrix: Vec<Vec<C64>>,
    tol: f64,
    oracle: bool,
    seed: u64,
    label: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let t = self::matrix(matrix)?;
    let options = AnalysisOptions {
        tolerances: Tolerances::uniform(tol),
        oracle: oracle.then(|| OracleConfig { seed, ..OracleConfig::default() }),
    };
    let r = py.detach(|| report::analyze(&t, label, &options)).map_err(err)?;
    let out = to_py(py, &r)?;
    out.set_item("exit_code", report::exit_code(&r))?;
    Ok(out)
}

/// Complete trace criterion for n = 3 and n = 4.
#[pyfunction]
#[pyo3(signature = (matrix, tol = DEFAULT_TOL))]
fn uecsm_verdict(matrix: Vec<Vec<C64>>, tol: f64) -> PyResult<Verdict> {
    tracetests::uecsm_verdict(&self::matrix(matrix)?, tol).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (matrix, tol = DEFAULT_TOL))]
fn transpose_equivalence(matrix: Vec<Vec<C64>>, tol: f64) -> PyResult<Verdict> {
    tracetests::transpose_equivalence(&self::matrix(matrix)?, tol).map(Into::into).map_err(err)
}

/// The seven commutator traces of a 4x4 matrix scaled to unit norm.
#[pyfunction]
fn psi7(matrix: Vec<Vec<C64>>) -> PyResult<Vec<C64>> {
    tracetests::psi7(&self::matrix(matrix)?).map(|s| s.values).map_err(err)
}

/// Classifies the strictly upper-triangular 4x4 matrix with entries a..f.
#[pyfunction]
#[pyo3(signature = (params, tol = DEFAULT_TOL))]
fn classify_nilpotent<'py>(py: Python<'py>, params: [C64; 6], tol: f64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &classify(&NilpotentParams::from_slice(&params), tol))
}

/// Builds `Q D Q^-1` with Q in SU(k, m). Returns a dict with `matrix`,
/// `q`, `kind` and `all_real`.
#[pyfunction]
#[pyo3(signature = (k, m, diagonal = None, seed = 0))]
fn construct<'py>(py: Python<'py>, k: usize, m: usize, diagonal: Option<Vec<C64>>, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let sig = Signature::from_cones(k, m).map_err(err)?;
    let d = diagonal.unwrap_or_else(default_diagonal);
    let (kind, built) = if k.min(m) >= 2 {
        ("wat_not_sat", generate_wat_not_sat(seed, sig, &d))
    } else {
        ("uecsm", construct_lsat(seed, sig, &d))
    };
    let built = built.map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("matrix", built.t.rows())?;
    out.set_item("q", built.q.rows())?;
    out.set_item("kind", kind)?;
    out.set_item("all_real", built.all_real())?;
    Ok(out)
}

/// Searches for a unitary U with U T U* symmetric.
#[pyfunction]
#[pyo3(signature = (matrix, restarts = oracle::DEFAULT_RESTARTS, max_iters = oracle::DEFAULT_MAX_ITERS, witness_tol = oracle::DEFAULT_WITNESS_TOL, seed = oracle::DEFAULT_SEED))]
fn find_symmetrizer(
    py: Python<'_>,
    matrix: Vec<Vec<C64>>,
    restarts: usize,
    max_iters: usize,
    witness_tol: f64,
    seed: u64,
) -> PyResult<OracleResult> {
    let t = self::matrix(matrix)?;
    let config = OracleConfig { restarts, max_iters, witness_tol, seed };
    let r = py.detach(|| oracle::find_symmetrizer_with(&t, &config)).map_err(err)?;
    Ok(OracleResult {
        witness: r.status == OracleStatus::Witness,
        unitary: r.u.map(|u| u.rows()),
        residual: r.residual,
        iterations: r.iterations,
        restarts_used: r.restarts_used,
    })
}

#[pyfunction]
#[pyo3(signature = (matrix, unitary, tol = oracle::DEFAULT_WITNESS_TOL))]
fn verify_witness(matrix: Vec<Vec<C64>>, unitary: Vec<Vec<C64>>, tol: f64) -> PyResult<Verdict> {
    Ok(oracle::verify_witness(&self::matrix(matrix)?, &self::matrix(unitary)?, tol).into())
}

#[pymodule]
fn uecsm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("UecsmError", m.py().get_type::<UecsmError>())?;
    m.add("DEFAULT_TOL", DEFAULT_TOL)?;
    m.add_class::<Verdict>()?;
    m.add_class::<OracleResult>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(uecsm_verdict, m)?)?;
    m.add_function(wrap_pyfunction!(transpose_equivalence, m)?)?;
    m.add_function(wrap_pyfunction!(psi7, m)?)?;
    m.add_function(wrap_pyfunction!(classify_nilpotent, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(find_symmetrizer, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    Ok(())
}
