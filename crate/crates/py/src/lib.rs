//! Python bindings. Integers cross the boundary as Python `int`s of any
//! size; reports come back as plain dicts.

use std::str::FromStr;

use binomod::periods::mu_exhaustive;
use binomod::{
    admissible, class_sum_oracle, class_sum_profile, conjecture_sweep, verify_identity, ClassSumQuery,
    CongruenceReport, CyclicPoly, Error, IdentityId, IdentityParams, Modulus, PeriodReport, SweepReport,
};
use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    binomod,
    PreconditionError,
    PyValueError,
    "Inputs violate the hypotheses of the requested computation."
);
create_exception!(
    binomod,
    InternalError,
    PyRuntimeError,
    "Two independent computations disagreed."
);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(msg) => PyValueError::new_err(msg),
        Error::Precondition(p) => PreconditionError::new_err(p.to_string()),
        Error::Internal(msg) => InternalError::new_err(msg),
    }
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for binomod::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn modulus(q: BigUint, exponent: u32) -> PyResult<Modulus> {
    Modulus::new(q, exponent).or_py()
}

fn period_dict<'py>(py: Python<'py>, rep: &PeriodReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("q", &rep.q)?;
    d.set_item("m", rep.m)?;
    d.set_item("a", &rep.a)?;
    d.set_item("nu", &rep.nu)?;
    d.set_item("mu", &rep.mu)?;
    d.set_item("admissibility", rep.admissibility.map(|c| c.as_str()))?;
    d.set_item("divisors_checked", &rep.divisors_checked)?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, rep: &CongruenceReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("identity", rep.identity.as_str())?;
    d.set_item("params", &rep.params)?;
    d.set_item("lhs", &rep.lhs)?;
    d.set_item("rhs", &rep.rhs)?;
    d.set_item("modulus", &rep.modulus)?;
    d.set_item("holds", rep.holds)?;
    Ok(d)
}

fn sweep_dict<'py>(py: Python<'py>, rep: &SweepReport) -> PyResult<Bound<'py, PyDict>> {
    let entries = rep
        .entries
        .iter()
        .map(|e| {
            let d = PyDict::new(py);
            d.set_item("a", &e.a)?;
            d.set_item("a_mod_q", &e.a_mod_q)?;
            d.set_item("admissibility", e.admissibility.as_str())?;
            d.set_item("mu", &e.mu)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("m", rep.m)?;
    d.set_item("q", &rep.q)?;
    d.set_item("nu", &rep.nu)?;
    d.set_item("hypothesis_met", rep.hypothesis_met)?;
    d.set_item("max_mu", &rep.max_mu)?;
    d.set_item("attaining", &rep.attaining)?;
    d.set_item("verdict", rep.verdict.as_str())?;
    d.set_item("residue_discrepancies", &rep.residue_discrepancies)?;
    d.set_item("entries", entries)?;
    Ok(d)
}

/// nu_m(q), the lcm of p^(alpha-1) (p^ord_m(p) - 1) over q = prod p^alpha.
#[pyfunction]
fn nu(m: usize, q: BigUint) -> PyResult<BigUint> {
    binomod::nu(m, &q).or_py()
}

/// Minimal period of (1 + a x)^n modulo (q, x^m - 1).
#[pyfunction]
#[pyo3(signature = (m, a, q, exhaustive = false))]
fn mu<'py>(py: Python<'py>, m: usize, a: BigInt, q: BigUint, exhaustive: bool) -> PyResult<Bound<'py, PyDict>> {
    let mut rep = py.detach(|| binomod::mu(m, &a, &q)).or_py()?;
    if exhaustive {
        let bound = u64::try_from(&rep.nu).map_err(|_| PyValueError::new_err("nu too large for a full scan"))?;
        let scanned = py.detach(|| mu_exhaustive(m, &a, &q, bound)).or_py()?;
        rep.mu = scanned.map(BigUint::from);
        rep.divisors_checked.clear();
    }
    period_dict(py, &rep)
}

#[pyfunction]
fn admissibility(a: BigInt, m: usize, q: BigUint) -> PyResult<&'static str> {
    Ok(admissible(&a, m, &q).or_py()?.as_str())
}

/// [n r]_m(a) modulo q^N.
#[pyfunction]
#[pyo3(signature = (n, r, m, a, q, N = 1, oracle = false))]
#[allow(non_snake_case)]
fn class_sum(n: BigUint, r: BigInt, m: usize, a: BigInt, q: BigUint, N: u32, oracle: bool) -> PyResult<BigUint> {
    let query = ClassSumQuery::new(n, r, m, a, &modulus(q, N)?);
    if oracle {
        class_sum_oracle(&query).or_py()
    } else {
        binomod::class_sum(&query).or_py()
    }
}

/// All m class sums [n r]_m(a), r = 0..m, modulo q^N.
#[pyfunction(name = "class_sum_profile")]
#[pyo3(signature = (n, m, a, q, N = 1))]
#[allow(non_snake_case)]
fn profile(n: BigUint, m: usize, a: BigInt, q: BigUint, N: u32) -> PyResult<Vec<BigUint>> {
    class_sum_profile(&n, m, &a, &modulus(q, N)?).or_py()
}

/// Checks one congruence identity. Keyword names match the CLI flags
/// (q, m, a, l, r, n, k, T, p, alpha). Returns a report dict, or a pair of
/// them for `cor13_split`.
#[pyfunction]
#[pyo3(signature = (identity, **params))]
fn verify<'py>(py: Python<'py>, identity: &str, params: Option<&Bound<'py, PyDict>>) -> PyResult<Bound<'py, PyAny>> {
    let id = IdentityId::from_str(identity).or_py()?;
    let mut ps = IdentityParams::default();
    if let Some(params) = params {
        for (key, value) in params.iter() {
            let key: String = key.extract()?;
            match key.as_str() {
                "q" => ps.q = Some(value.extract()?),
                "m" => ps.m = Some(value.extract()?),
                "a" => ps.a = Some(value.extract()?),
                "l" => ps.l = Some(value.extract()?),
                "r" => ps.r = Some(value.extract()?),
                "n" => ps.n = Some(value.extract()?),
                "k" => ps.k = Some(value.extract()?),
                "T" => ps.t = Some(value.extract()?),
                "p" => ps.p = Some(value.extract()?),
                "alpha" => ps.alpha = Some(value.extract()?),
                other => return Err(PyTypeError::new_err(format!("unexpected parameter '{other}'"))),
            }
        }
    }
    let reports = py.detach(|| verify_identity(id, &ps)).or_py()?;
    let dicts = reports
        .iter()
        .map(|r| report_dict(py, r))
        .collect::<PyResult<Vec<_>>>()?;
    match <[_; 1]>::try_from(dicts) {
        Ok([one]) => Ok(one.into_any()),
        Err(many) => Ok(pyo3::types::PyTuple::new(py, many)?.into_any()),
    }
}

/// Max of mu_m(a, q) over admissible a, compared with nu_m(q).
#[pyfunction]
#[pyo3(signature = (m, q, jobs = None))]
fn sweep<'py>(py: Python<'py>, m: usize, q: BigUint, jobs: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
    let rep = py.detach(|| conjecture_sweep(m, &q, jobs)).or_py()?;
    sweep_dict(py, &rep)
}

/// An element of (Z/q^N)[x]/(x^m - 1).
#[pyclass(name = "CyclicPoly", module = "binomod", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCyclicPoly(CyclicPoly);

#[pymethods]
impl PyCyclicPoly {
    #[new]
    #[pyo3(signature = (coeffs, q, N = 1))]
    #[allow(non_snake_case)]
    fn new(coeffs: Vec<BigInt>, q: BigUint, N: u32) -> PyResult<Self> {
        Ok(Self(CyclicPoly::new(&modulus(q, N)?, &coeffs).or_py()?))
    }

    #[staticmethod]
    #[pyo3(signature = (a, m, q, N = 1))]
    #[allow(non_snake_case)]
    fn one_plus_ax(a: BigInt, m: usize, q: BigUint, N: u32) -> PyResult<Self> {
        Ok(Self(CyclicPoly::one_plus_ax(&a, m, &modulus(q, N)?).or_py()?))
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.degree_bound()
    }

    #[getter]
    fn modulus(&self) -> BigUint {
        self.0.modulus().value().clone()
    }

    fn coeffs(&self) -> Vec<BigUint> {
        self.0.coeffs()
    }

    fn eval_at_one(&self) -> BigUint {
        self.0.eval_at_one()
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn pow(&self, py: Python<'_>, e: BigUint) -> Self {
        Self(py.detach(|| self.0.pow(&e)))
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(Self(self.0.mul(&other.0).or_py()?))
    }

    fn __pow__(&self, py: Python<'_>, e: BigUint, modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        if modulo.is_some() {
            return Err(PyTypeError::new_err("three-argument pow is not supported"));
        }
        Ok(self.pow(py, e))
    }

    fn __repr__(&self) -> String {
        let cs: Vec<String> = self.0.coeffs().iter().map(|c| c.to_string()).collect();
        format!("CyclicPoly([{}], modulus={})", cs.join(", "), self.0.modulus().value())
    }
}

#[pymodule]
#[pyo3(name = "binomod")]
pub fn binomod_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add("InternalError", py.get_type::<InternalError>())?;
    m.add(
        "IDENTITIES",
        IdentityId::ALL.iter().map(|id| id.as_str()).collect::<Vec<_>>(),
    )?;
    m.add_class::<PyCyclicPoly>()?;
    m.add_function(wrap_pyfunction!(nu, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(admissibility, m)?)?;
    m.add_function(wrap_pyfunction!(class_sum, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
