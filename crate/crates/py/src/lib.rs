//! Python bindings for `lcverify`.
//!
//! Numbers cross the boundary as Python objects: anything whose `str()` is an
//! integer or `num/den` (ints, `fractions.Fraction`, strings) is exact, other
//! numbers are floats. Exact results come back as `fractions.Fraction`.
//! Reports are returned as plain dicts with the same keys as the CLI's JSON.

use lcverify::dof::{self, AffinePiece};
use lcverify::entropy::{self, RenyiOrder};
use lcverify::families::{self, ExtremalParams};
use lcverify::ineq::{self, EpiConstant, SweepSpec};
use lcverify::io::{pmf_from_json, pmf_to_json};
use lcverify::pmf::{make_pmf, random_log_concave, random_monotone_log_concave, AnyPmf};
use lcverify::poly::identities::{self, Lemma41, QuarticPart};
use lcverify::scalar::{parse_scalar, Mode, Weight};
use lcverify::{Potential, Rational, Scalar, VerifyReport, DEFAULT_TOL};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: lcverify::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar_arg(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    let text = obj.str()?.to_string();
    parse_scalar(&text).map_err(err)
}

fn order_arg(obj: &Bound<'_, PyAny>) -> PyResult<RenyiOrder> {
    obj.str()?.to_string().parse().map_err(err)
}

fn scalar_to_py<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    match s {
        Scalar::Exact(q) => py
            .import("fractions")?
            .getattr("Fraction")?
            .call1((q.to_string(),)),
        Scalar::Float(f) => Ok(f.into_pyobject(py)?.into_any()),
    }
}

fn report_to_py<'py>(py: Python<'py>, r: &VerifyReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("check", &r.check)?;
    let params = PyDict::new(py);
    for (k, v) in &r.params {
        params.set_item(k, scalar_to_py(py, v)?)?;
    }
    d.set_item("params", params)?;
    d.set_item("lhs", scalar_to_py(py, &r.lhs)?)?;
    d.set_item("rhs", scalar_to_py(py, &r.rhs)?)?;
    d.set_item("slack", scalar_to_py(py, &r.slack)?)?;
    d.set_item("pass", r.pass)?;
    d.set_item("tol", r.tol)?;
    d.set_item("mode", r.mode.to_string())?;
    let details = PyDict::new(py);
    for (k, v) in &r.details {
        details.set_item(k, scalar_to_py(py, v)?)?;
    }
    d.set_item("details", details)?;
    d.set_item("note", r.note.clone())?;
    Ok(d)
}

fn reports_to_py<'py>(py: Python<'py>, rs: &[VerifyReport]) -> PyResult<Bound<'py, PyList>> {
    let items = rs
        .iter()
        .map(|r| report_to_py(py, r))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

/// A probability mass function on a finite integer interval.
#[pyclass(name = "Pmf", module = "lcverify_py", skip_from_py_object)]
#[derive(Clone)]
pub struct PyPmf {
    inner: AnyPmf,
}

#[pymethods]
impl PyPmf {
    /// `Pmf(weights, offset=0, exact=False)`; weights are normalised.
    #[new]
    #[pyo3(signature = (weights, offset = 0, exact = false))]
    fn new(weights: Vec<Bound<'_, PyAny>>, offset: i64, exact: bool) -> PyResult<Self> {
        let raw = weights
            .iter()
            .map(scalar_arg)
            .collect::<PyResult<Vec<_>>>()?;
        let mode = if exact { Mode::Exact } else { Mode::Float };
        Ok(Self {
            inner: make_pmf(offset, &raw, mode).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: pmf_from_json(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        pmf_to_json(&self.inner).to_string()
    }

    #[getter]
    fn offset(&self) -> i64 {
        self.inner.offset()
    }

    #[getter]
    fn exact(&self) -> bool {
        self.inner.mode() == Mode::Exact
    }

    fn weights<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner
            .weights()
            .iter()
            .map(|w| scalar_to_py(py, w))
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.weights().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Pmf(offset={}, len={}, mode={})",
            self.inner.offset(),
            self.inner.weights().len(),
            self.inner.mode()
        )
    }

    fn is_log_concave(&self) -> bool {
        self.inner.is_log_concave()
    }

    fn mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        scalar_to_py(py, &self.inner.moments().mean)
    }

    fn variance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        scalar_to_py(py, &self.inner.moments().variance)
    }

    /// Largest probability, `M = max_z p(z)`.
    fn m_functional<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        scalar_to_py(py, &self.inner.m_functional())
    }

    fn concentration<'py>(&self, py: Python<'py>, lam: usize) -> PyResult<Bound<'py, PyAny>> {
        scalar_to_py(py, &self.inner.concentration(lam))
    }

    fn renyi_entropy(&self, alpha: &Bound<'_, PyAny>) -> PyResult<f64> {
        Ok(entropy::renyi_entropy(
            &self.inner.to_float(),
            order_arg(alpha)?,
        ))
    }

    fn entropy_power(&self, alpha: &Bound<'_, PyAny>) -> PyResult<f64> {
        Ok(entropy::entropy_power(
            &self.inner.to_float(),
            order_arg(alpha)?,
        ))
    }

    fn convolve(&self, other: &PyPmf) -> PyResult<PyPmf> {
        Ok(PyPmf {
            inner: self.inner.convolve(&other.inner).map_err(err)?,
        })
    }

    fn translate(&self, k: i64) -> PyPmf {
        let inner = match &self.inner {
            AnyPmf::Exact(p) => AnyPmf::Exact(p.translate(k)),
            AnyPmf::Float(p) => AnyPmf::Float(p.translate(k)),
        };
        PyPmf { inner }
    }

    fn degree_of_freedom(&self) -> PyResult<usize> {
        match &self.inner {
            AnyPmf::Exact(p) => dof::pmf_degree_of_freedom(p),
            AnyPmf::Float(p) => dof::pmf_degree_of_freedom(p),
        }
        .map_err(err)
    }
}

fn extremal_pmf(p1: Scalar, p2: Scalar, n: u32, k: u32) -> PyResult<AnyPmf> {
    Ok(match (p1, p2) {
        (Scalar::Exact(a), Scalar::Exact(b)) => AnyPmf::Exact(families::two_sided_geometric(
            &ExtremalParams::new(a, b, n, k).map_err(err)?,
        )),
        (a, b) => AnyPmf::Float(families::two_sided_geometric(
            &ExtremalParams::new(a.to_f64(), b.to_f64(), n, k).map_err(err)?,
        )),
    })
}

#[pyfunction]
#[pyo3(signature = (theta, tail_tol = 1e-12))]
fn geometric(theta: f64, tail_tol: f64) -> PyResult<PyPmf> {
    Ok(PyPmf {
        inner: AnyPmf::Float(families::geometric_truncated(theta, tail_tol).map_err(err)?),
    })
}

/// Two-sided geometric law with ratios `1/p2` to the left and `1/p1` to the right.
#[pyfunction]
#[pyo3(name = "two_sided_geometric")]
fn two_sided(p1: &Bound<'_, PyAny>, p2: &Bound<'_, PyAny>, big_n: u32, k: u32) -> PyResult<PyPmf> {
    Ok(PyPmf {
        inner: extremal_pmf(scalar_arg(p1)?, scalar_arg(p2)?, big_n, k)?,
    })
}

#[pyfunction]
fn binomial(n: u32, p: &Bound<'_, PyAny>) -> PyResult<PyPmf> {
    let inner = match scalar_arg(p)? {
        Scalar::Exact(p) => AnyPmf::Exact(families::binomial(n, p).map_err(err)?),
        Scalar::Float(p) => AnyPmf::Float(families::binomial(n, p).map_err(err)?),
    };
    Ok(PyPmf { inner })
}

#[pyfunction]
#[pyo3(signature = (seed, max_support = 60, monotone = false))]
fn random_pmf(seed: u64, max_support: usize, monotone: bool) -> PyPmf {
    let p = if monotone {
        random_monotone_log_concave(seed, max_support)
    } else {
        random_log_concave(seed, max_support)
    };
    PyPmf {
        inner: AnyPmf::Float(p),
    }
}

type CoverRow<'py> = (Bound<'py, PyAny>, Bound<'py, PyAny>, i64, i64);

fn cover_rows<W: Weight>(v: &Potential<W>) -> PyResult<Vec<(Scalar, Scalar, i64, i64)>> {
    let pieces: Vec<AffinePiece<W>> = dof::minimal_affine_cover(v).map_err(err)?;
    Ok(pieces
        .into_iter()
        .map(|p| {
            (
                p.slope.to_scalar(),
                p.intercept.to_scalar(),
                *p.cover.start(),
                *p.cover.end(),
            )
        })
        .collect())
}

enum AnyPot {
    Exact(Potential<Rational>),
    Float(Potential<f64>),
}

fn potential(values: &[Bound<'_, PyAny>], a: i64) -> PyResult<AnyPot> {
    let vals = values
        .iter()
        .map(scalar_arg)
        .collect::<PyResult<Vec<_>>>()?;
    if let Some(exact) = vals
        .iter()
        .map(|v| v.as_exact().cloned())
        .collect::<Option<Vec<Rational>>>()
    {
        Ok(AnyPot::Exact(Potential::new(a, exact).map_err(err)?))
    } else {
        Ok(AnyPot::Float(
            Potential::new(a, vals.iter().map(Scalar::to_f64).collect()).map_err(err)?,
        ))
    }
}

/// Degree of freedom of the convex potential `V(a), V(a+1), ...`.
#[pyfunction]
#[pyo3(signature = (values, a = 0))]
fn degree_of_freedom(values: Vec<Bound<'_, PyAny>>, a: i64) -> PyResult<usize> {
    match potential(&values, a)? {
        AnyPot::Exact(v) => dof::degree_of_freedom(&v),
        AnyPot::Float(v) => dof::degree_of_freedom(&v),
    }
    .map_err(err)
}

/// Minimal affine cover as `(slope, intercept, first, last)` tuples.
#[pyfunction]
#[pyo3(signature = (values, a = 0))]
fn minimal_affine_cover<'py>(
    py: Python<'py>,
    values: Vec<Bound<'py, PyAny>>,
    a: i64,
) -> PyResult<Vec<CoverRow<'py>>> {
    let rows = match potential(&values, a)? {
        AnyPot::Exact(v) => cover_rows(&v)?,
        AnyPot::Float(v) => cover_rows(&v)?,
    };
    rows.into_iter()
        .map(|(s, c, lo, hi)| Ok((scalar_to_py(py, &s)?, scalar_to_py(py, &c)?, lo, hi)))
        .collect()
}

#[pyfunction]
#[pyo3(signature = (pmf, tol = DEFAULT_TOL))]
fn verify_min_entropy<'py>(py: Python<'py>, pmf: &PyPmf, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = match &pmf.inner {
        AnyPmf::Exact(p) => ineq::verify_min_entropy(p, tol),
        AnyPmf::Float(p) => ineq::verify_min_entropy(p, tol),
    };
    report_to_py(py, &r.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (pmfs, alpha, improved = false, tol = DEFAULT_TOL))]
fn verify_epi<'py>(
    py: Python<'py>,
    pmfs: Vec<PyRef<'py, PyPmf>>,
    alpha: &Bound<'py, PyAny>,
    improved: bool,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ps: Vec<_> = pmfs.iter().map(|p| p.inner.to_float()).collect();
    let constant = if improved {
        EpiConstant::Improved
    } else {
        EpiConstant::Standard
    };
    report_to_py(
        py,
        &ineq::verify_epi(&ps, order_arg(alpha)?, constant, tol).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (pmf, alpha, tol = DEFAULT_TOL))]
fn verify_alpha_bounds<'py>(
    py: Python<'py>,
    pmf: &PyPmf,
    alpha: &Bound<'py, PyAny>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = ineq::verify_alpha_bounds(&pmf.inner.to_float(), order_arg(alpha)?, tol);
    report_to_py(py, &r.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (pmf, lam, tol = DEFAULT_TOL))]
fn verify_concentration_bound<'py>(
    py: Python<'py>,
    pmf: &PyPmf,
    lam: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = ineq::verify_concentration_bound(&pmf.inner.to_float(), lam, tol);
    report_to_py(py, &r.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (p1, p2, big_n, k, tol = DEFAULT_TOL))]
fn verify_e4<'py>(
    py: Python<'py>,
    p1: &Bound<'py, PyAny>,
    p2: &Bound<'py, PyAny>,
    big_n: u32,
    k: u32,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = match (scalar_arg(p1)?, scalar_arg(p2)?) {
        (Scalar::Exact(a), Scalar::Exact(b)) => {
            ineq::verify_e4(&ExtremalParams::new(a, b, big_n, k).map_err(err)?, tol)
        }
        (a, b) => ineq::verify_e4(
            &ExtremalParams::new(a.to_f64(), b.to_f64(), big_n, k).map_err(err)?,
            tol,
        ),
    };
    report_to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (big_n, k, x, y, tol = DEFAULT_TOL))]
fn verify_e5<'py>(
    py: Python<'py>,
    big_n: u32,
    k: u32,
    x: &Bound<'py, PyAny>,
    y: &Bound<'py, PyAny>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = match (scalar_arg(x)?, scalar_arg(y)?) {
        (Scalar::Exact(x), Scalar::Exact(y)) => ineq::verify_e5(big_n, k, &x, &y, tol),
        (x, y) => ineq::verify_e5(big_n, k, &x.to_f64(), &y.to_f64(), tol),
    };
    report_to_py(py, &r.map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (pmf, tol = 1e-6))]
fn verify_case1_domination<'py>(
    py: Python<'py>,
    pmf: &PyPmf,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = match &pmf.inner {
        AnyPmf::Exact(p) => ineq::verify_case1_domination(p, tol),
        AnyPmf::Float(p) => ineq::verify_case1_domination(p, tol),
    };
    report_to_py(py, &r.map_err(err)?)
}

/// Minimum-slack search; `spec` is the JSON sweep specification.
#[pyfunction]
fn search_min_slack<'py>(py: Python<'py>, spec: &str) -> PyResult<Bound<'py, PyList>> {
    let spec = SweepSpec::from_json(spec).map_err(err)?;
    let outcome = py.detach(|| ineq::search_min_slack(&spec)).map_err(err)?;
    reports_to_py(py, &outcome.reports())
}

#[pyfunction]
fn lemma41_check<'py>(py: Python<'py>, label: &str, m: usize) -> PyResult<Bound<'py, PyDict>> {
    let label: Lemma41 = label.parse().map_err(err)?;
    report_to_py(py, &identities::lemma41_check(label, m).map_err(err)?)
}

#[pyfunction]
fn coeff_check_i<'py>(py: Python<'py>, big_n: usize) -> PyResult<Bound<'py, PyDict>> {
    report_to_py(py, &identities::coeff_check_i(big_n).map_err(err)?)
}

#[pyfunction]
fn d_n_check<'py>(py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyDict>> {
    report_to_py(py, &identities::d_n_check(k).map_err(err)?)
}

#[pyfunction]
fn ineq_part_check<'py>(
    py: Python<'py>,
    which: &str,
    big_n: u32,
    k: u32,
    x: &Bound<'py, PyAny>,
    y: &Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let which: QuarticPart = which.parse().map_err(err)?;
    let (Scalar::Exact(x), Scalar::Exact(y)) = (scalar_arg(x)?, scalar_arg(y)?) else {
        return Err(PyValueError::new_err(
            "x and y must be exact (int, Fraction or 'num/den')",
        ));
    };
    report_to_py(
        py,
        &identities::ineq_part_check(which, big_n, k, &x, &y).map_err(err)?,
    )
}

#[pymodule]
pub fn lcverify_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPmf>()?;
    m.add_function(wrap_pyfunction!(geometric, m)?)?;
    m.add_function(wrap_pyfunction!(two_sided, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(random_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(degree_of_freedom, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_affine_cover, m)?)?;
    m.add_function(wrap_pyfunction!(verify_min_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(verify_epi, m)?)?;
    m.add_function(wrap_pyfunction!(verify_alpha_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(verify_concentration_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_e4, m)?)?;
    m.add_function(wrap_pyfunction!(verify_e5, m)?)?;
    m.add_function(wrap_pyfunction!(verify_case1_domination, m)?)?;
    m.add_function(wrap_pyfunction!(search_min_slack, m)?)?;
    m.add_function(wrap_pyfunction!(lemma41_check, m)?)?;
    m.add_function(wrap_pyfunction!(coeff_check_i, m)?)?;
    m.add_function(wrap_pyfunction!(d_n_check, m)?)?;
    m.add_function(wrap_pyfunction!(ineq_part_check, m)?)?;
    Ok(())
}
