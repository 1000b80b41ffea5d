//! Python bindings: `cayley_ramanujan.Group`, `cayley_ramanujan.Subset` and the report functions.
//! Reports are returned as plain dicts with the same fields as the CLI's JSON output.

use std::sync::Arc;

use cayley_ramanujan::analytics;
use cayley_ramanujan::bounds::{compute_l_hat, verify_l_hat};
use cayley_ramanujan::cayley::{
    make_interval_subset, make_normal_subset, parse_subset_spec, CayleySubset, NormalSubsetSpec,
};
use cayley_ramanujan::classifier::{self, QuadraticFamily};
use cayley_ramanujan::error::Error;
use cayley_ramanujan::group::{parse_group_spec, GroupTable};
use cayley_ramanujan::oracle::oracle_spectrum;
use cayley_ramanujan::spectra::{closed_form_spectrum, verdict};
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::NotSymmetric(_)
        | Error::ContainsIdentity
        | Error::NotGenerating
        | Error::NotNormal
        | Error::UnsupportedFamily(_) => PyValueError::new_err(e.to_string()),
        Error::Guard { .. } => PyOverflowError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A group `D_2p` or `F_{p,q}`.
#[pyclass(name = "Group", module = "cayley_ramanujan", frozen)]
struct PyGroup {
    inner: Arc<GroupTable>,
}

#[pymethods]
impl PyGroup {
    #[staticmethod]
    fn dihedral(p: u64) -> PyResult<Self> {
        Ok(PyGroup {
            inner: Arc::new(GroupTable::dihedral(p).map_err(to_py_err)?),
        })
    }

    #[staticmethod]
    fn fpq(p: u64, q: u64) -> PyResult<Self> {
        Ok(PyGroup {
            inner: Arc::new(GroupTable::fpq(p, q).map_err(to_py_err)?),
        })
    }

    /// `"d2p:11"` or `"fpq:7,3"`.
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        Ok(PyGroup {
            inner: Arc::new(parse_group_spec(spec).map_err(to_py_err)?),
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn kernel_size(&self) -> u64 {
        self.inner.kernel_size()
    }

    #[getter]
    fn complement_size(&self) -> u64 {
        self.inner.complement_size()
    }

    #[getter]
    fn ratio(&self) -> u64 {
        self.inner.ratio()
    }

    #[getter]
    fn spec(&self) -> String {
        self.inner.spec_string()
    }

    /// Index of `x^a y^b`.
    fn element(&self, a: u64, b: u64) -> usize {
        self.inner.element(a, b)
    }

    fn mul(&self, g: usize, h: usize) -> PyResult<usize> {
        let n = self.inner.order();
        if g >= n || h >= n {
            return Err(PyValueError::new_err(format!("elements must be below {n}")));
        }
        Ok(self.inner.mul(g, h))
    }

    /// Members of each conjugacy class.
    fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        self.inner
            .conjugacy_classes()
            .iter()
            .map(|c| c.members.clone())
            .collect()
    }

    /// Covalency lattice, `l0` and `l_hat`.
    #[pyo3(signature = (exhaustive = false))]
    fn bounds<'py>(&self, py: Python<'py>, exhaustive: bool) -> PyResult<Bound<'py, PyAny>> {
        let g = self.inner.clone();
        let report = py
            .detach(move || {
                if exhaustive {
                    verify_l_hat(&g)
                } else {
                    compute_l_hat(&g)
                }
            })
            .map_err(to_py_err)?;
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.inner.spec_string())
    }
}

/// A Cayley subset: symmetric, without the identity, generating.
#[pyclass(name = "Subset", module = "cayley_ramanujan", frozen)]
struct PySubset {
    inner: CayleySubset,
}

#[pymethods]
impl PySubset {
    /// `"normal:X=..;Y=.."`, `"interval:l1=..,l2=.."` or `"mask:<hex>"`.
    #[staticmethod]
    fn parse(group: &PyGroup, spec: &str) -> PyResult<Self> {
        Ok(PySubset {
            inner: parse_subset_spec(group.inner.clone(), spec).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn interval(group: &PyGroup, l1: u64, l2: u64) -> PyResult<Self> {
        Ok(PySubset {
            inner: make_interval_subset(group.inner.clone(), l1, l2).map_err(to_py_err)?,
        })
    }

    /// `S_{X,Y}` from kernel exponents `x^v` and complement exponents `y^b`.
    #[staticmethod]
    fn normal(group: &PyGroup, x: Vec<u64>, y: Vec<u64>) -> PyResult<Self> {
        let spec = NormalSubsetSpec::from_exponents(&group.inner, &x, &y).map_err(to_py_err)?;
        Ok(PySubset {
            inner: make_normal_subset(group.inner.clone(), &spec).map_err(to_py_err)?,
        })
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn covalency(&self) -> u64 {
        self.inner.covalency()
    }

    #[getter]
    fn mask(&self) -> String {
        self.inner.to_hex()
    }

    fn elements(&self) -> Vec<usize> {
        self.inner.mask().iter().collect()
    }

    /// `(eigenvalue, multiplicity)` pairs from the closed-form formulas, descending.
    fn spectrum(&self) -> PyResult<Vec<(f64, usize)>> {
        Ok(closed_form_spectrum(&self.inner)
            .map_err(to_py_err)?
            .entries)
    }

    /// All eigenvalues of the adjacency matrix from the dense eigensolver, descending.
    fn oracle_spectrum(&self, py: Python<'_>) -> PyResult<Vec<f64>> {
        let s = self.inner.clone();
        Ok(py
            .detach(move || oracle_spectrum(&s))
            .map_err(to_py_err)?
            .sorted_values())
    }

    /// `mu`, `bound`, `status` and `margin`.
    fn verdict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let v = verdict(&closed_form_spectrum(&self.inner).map_err(to_py_err)?);
        to_py(py, &v)
    }

    fn adjacency(&self) -> Vec<Vec<f64>> {
        cayley_ramanujan::cayley::adjacency_matrix(&self.inner)
            .rows()
            .map(<[f64]>::to_vec)
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Subset({}, mask:{})",
            self.inner.group().spec_string(),
            self.inner.to_hex()
        )
    }
}

fn family(r: u64, c: i64) -> PyResult<QuadraticFamily> {
    QuadraticFamily::new(r, c).map_err(to_py_err)
}

#[pyfunction]
fn classify_prime(py: Python<'_>, p: u64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &classifier::classify_prime(p).map_err(to_py_err)?)
}

#[pyfunction]
fn scan(py: Python<'_>, start: u64, stop: u64) -> PyResult<Bound<'_, PyAny>> {
    let rows = py
        .detach(|| classifier::scan(start, stop))
        .map_err(to_py_err)?;
    to_py(py, &rows)
}

#[pyfunction]
fn extremal_mu(py: Python<'_>, p: u64, l: u64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &classifier::extremal_mu(p, l).map_err(to_py_err)?)
}

#[pyfunction]
fn tilde_l(py: Python<'_>, p: u64) -> PyResult<Bound<'_, PyAny>> {
    let report = py
        .detach(|| classifier::tilde_l_exhaustive(p))
        .map_err(to_py_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (p, l, n_samples, seed = 0x5eed))]
fn sample_extremality(
    py: Python<'_>,
    p: u64,
    l: u64,
    n_samples: u64,
    seed: u64,
) -> PyResult<Bound<'_, PyAny>> {
    let report = py
        .detach(|| classifier::sample_extremality(p, l, n_samples, seed))
        .map_err(to_py_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (r, c, cutoff = analytics::DEFAULT_HL_CUTOFF))]
fn hl_constant(py: Python<'_>, r: u64, c: i64, cutoff: u64) -> PyResult<Bound<'_, PyAny>> {
    let f = family(r, c)?;
    let est = py
        .detach(|| analytics::hl_constant(&f, cutoff))
        .map_err(to_py_err)?;
    to_py(py, &est)
}

#[pyfunction]
fn residue_avoidance(py: Python<'_>, a: u64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &analytics::residue_avoidance(a).map_err(to_py_err)?)
}

/// Primes of the family `(r, c)` with `k >= k_min`, up to `bound`.
#[pyfunction]
fn family_primes(r: u64, c: i64, bound: u64) -> PyResult<Vec<u64>> {
    Ok(analytics::family_primes(&family(r, c)?, bound))
}

#[pyfunction]
fn sieve_primes(py: Python<'_>, limit: u64) -> PyResult<Vec<u64>> {
    py.detach(|| analytics::sieve_primes(limit))
        .map_err(to_py_err)
}

#[pyfunction]
fn legendre(n: i64, p: u64) -> PyResult<i8> {
    if p < 3 || !cayley_ramanujan::arith::is_prime(p) {
        return Err(PyValueError::new_err(format!(
            "p must be an odd prime, got {p}"
        )));
    }
    Ok(analytics::legendre(n, p))
}

#[pymodule]
#[pyo3(name = "cayley_ramanujan")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PySubset>()?;
    m.add_function(wrap_pyfunction!(classify_prime, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_mu, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_l, m)?)?;
    m.add_function(wrap_pyfunction!(sample_extremality, m)?)?;
    m.add_function(wrap_pyfunction!(hl_constant, m)?)?;
    m.add_function(wrap_pyfunction!(residue_avoidance, m)?)?;
    m.add_function(wrap_pyfunction!(family_primes, m)?)?;
    m.add_function(wrap_pyfunction!(sieve_primes, m)?)?;
    m.add_function(wrap_pyfunction!(legendre, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
