//! Python module `polyreduct`. Reports come back as plain dicts and lists
//! with the same layout as the CLI's JSON payloads.

use polyreduct_core::classifier::{self, twist_candidates};
use polyreduct_core::decomposition::er_classify;
use polyreduct_core::expansion::{self, Family, Generators};
use polyreduct_core::unary::{definable_functions, interdefinable_unary, iterate, reflection};
use polyreduct_core::{parse_poly, render, MPoly, Rat, UPoly, Var};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => match n.as_u64() {
                Some(u) => u.into_pyobject(py)?.into_any(),
                None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
            },
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    json_to_py(py, &serde_json::to_value(v).map_err(err)?)
}

/// Exact polynomial with rational coefficients.
#[pyclass(name = "Poly", module = "polyreduct", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyPoly {
    inner: MPoly,
}

#[derive(FromPyObject)]
enum PolyArg {
    Poly(PyPoly),
    Text(String),
}

impl PolyArg {
    fn into_mpoly(self) -> PyResult<MPoly> {
        match self {
            PolyArg::Poly(p) => Ok(p.inner),
            PolyArg::Text(s) => parse_poly(&s).map_err(err),
        }
    }
}

fn collection(items: Vec<PolyArg>) -> PyResult<Vec<MPoly>> {
    items.into_iter().map(PolyArg::into_mpoly).collect()
}

fn unary_of(p: PolyArg) -> PyResult<UPoly> {
    let m = p.into_mpoly()?;
    UPoly::from_unary_mpoly(&m, &Var::new("x")).map_err(|_| err(format!("not unary: {}", render(&m))))
}

fn parse_rats(values: Vec<String>) -> PyResult<Vec<Rat>> {
    values.iter().map(|s| s.parse::<Rat>().map_err(|_| err(format!("not a rational number: {s}")))).collect()
}

#[pymethods]
impl PyPoly {
    #[new]
    fn new(text: &str) -> PyResult<PyPoly> {
        parse_poly(text).map(|inner| PyPoly { inner }).map_err(err)
    }

    fn __str__(&self) -> String {
        render(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", render(&self.inner))
    }

    fn __add__(&self, other: PolyArg) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: &self.inner + &other.into_mpoly()? })
    }

    fn __sub__(&self, other: PolyArg) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: &self.inner - &other.into_mpoly()? })
    }

    fn __mul__(&self, other: PolyArg) -> PyResult<PyPoly> {
        Ok(PyPoly { inner: &self.inner * &other.into_mpoly()? })
    }

    fn __pow__(&self, k: u32, _modulo: Option<u32>) -> PyPoly {
        PyPoly { inner: self.inner.pow(k) }
    }

    /// Variables in alphabetical order.
    fn variables(&self) -> Vec<String> {
        self.inner.support_vars().iter().map(|v| v.to_string()).collect()
    }

    fn total_degree(&self) -> u32 {
        self.inner.total_degree()
    }

    /// Value at a point given as `{name: "p/q"}`.
    fn eval(&self, point: std::collections::BTreeMap<String, String>) -> PyResult<String> {
        let pt = point
            .into_iter()
            .map(|(k, v)| Ok((Var::new(&k), v.parse::<Rat>().map_err(|_| err(format!("not a rational number: {v}")))?)))
            .collect::<PyResult<_>>()?;
        self.inner.eval(&pt).map(|r| r.to_string()).ok_or_else(|| err("point misses a variable"))
    }
}

/// Classification of a collection into the four reduct cases.
#[pyfunction]
fn classify<'py>(py: Python<'py>, polys: Vec<PolyArg>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &classifier::classify(&collection(polys)?).map_err(err)?)
}

#[pyfunction]
fn interdefinable<'py>(py: Python<'py>, a: Vec<PolyArg>, b: Vec<PolyArg>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &classifier::interdefinable(&collection(a)?, &collection(b)?).map_err(err)?)
}

/// Twist centers and certificates, or `None` when the polynomial is not a twisted monomial.
#[pyfunction]
fn twist_centers<'py>(py: Python<'py>, poly: PolyArg) -> PyResult<Bound<'py, PyAny>> {
    let p = poly.into_mpoly()?;
    match twist_candidates(&p).map_err(err)? {
        None => Ok(py.None().into_bound(py)),
        Some(a) => {
            let dict = PyDict::new(py);
            dict.set_item("centers", to_py(py, &a.centers)?)?;
            dict.set_item("certificates", to_py(py, &a.certificates)?)?;
            Ok(dict.into_any())
        }
    }
}

/// Additive, multiplicative or neither, with certificates.
#[pyfunction]
fn decompose<'py>(py: Python<'py>, poly: PolyArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &er_classify(&poly.into_mpoly()?).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (poly, bound = 5))]
fn definable_unary<'py>(py: Python<'py>, poly: PolyArg, bound: u32) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &definable_functions(&unary_of(poly)?, bound))
}

#[pyfunction]
fn interdefinable_unary_maps<'py>(py: Python<'py>, p: PolyArg, q: PolyArg) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &interdefinable_unary(&unary_of(p)?, &unary_of(q)?))
}

#[pyfunction]
#[pyo3(name = "iterate")]
fn iterate_unary(poly: PolyArg, n: i64) -> PyResult<String> {
    Ok(iterate(&unary_of(poly)?, n).map_err(err)?.to_string())
}

#[pyfunction]
#[pyo3(name = "reflection")]
fn reflection_unary(poly: PolyArg) -> PyResult<String> {
    Ok(reflection(&unary_of(poly)?).map_err(err)?.to_string())
}

/// `|P(A, B)|` for rational sets given as strings or ints.
#[pyfunction]
fn image_size(poly: PolyArg, a: Vec<String>, b: Vec<String>) -> PyResult<u64> {
    expansion::image_size(&poly.into_mpoly()?, &parse_rats(a)?, &parse_rats(b)?).map_err(err)
}

/// Growth series over `family` in {"ap", "gp", "witness"}.
#[pyfunction]
#[pyo3(signature = (poly, family, sizes, start = "1".to_string(), step = None, generators = None, degree_cap = 2))]
#[allow(clippy::too_many_arguments)]
fn expansion_series<'py>(
    py: Python<'py>,
    poly: PolyArg,
    family: &str,
    sizes: Vec<u64>,
    start: String,
    step: Option<String>,
    generators: Option<Vec<String>>,
    degree_cap: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let p = poly.into_mpoly()?;
    let rat = |s: &str| s.parse::<Rat>().map_err(|_| err(format!("not a rational number: {s}")));
    let family = match family {
        "ap" => Family::Ap { start: rat(&start)?, step: rat(step.as_deref().unwrap_or("1"))? },
        "gp" => Family::Gp { start: rat(&start)?, ratio: rat(step.as_deref().unwrap_or("2"))? },
        "witness" => {
            let names = generators.unwrap_or_else(|| vec!["x1".into()]);
            let ints: Option<Vec<i64>> = names.iter().map(|g| g.parse().ok()).collect();
            let generators = match ints {
                Some(v) => Generators::Integer(v),
                None => Generators::Formal(names.iter().map(|g| Var::new(g)).collect()),
            };
            Family::Witness { generators, degree_cap }
        }
        other => return Err(err(format!("unknown family {other}"))),
    };
    to_py(py, &expansion::expansion_series(&p, &family, &sizes).map_err(err)?)
}

#[pymodule]
fn polyreduct(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoly>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(interdefinable, m)?)?;
    m.add_function(wrap_pyfunction!(twist_centers, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(definable_unary, m)?)?;
    m.add_function(wrap_pyfunction!(interdefinable_unary_maps, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_unary, m)?)?;
    m.add_function(wrap_pyfunction!(reflection_unary, m)?)?;
    m.add_function(wrap_pyfunction!(image_size, m)?)?;
    m.add_function(wrap_pyfunction!(expansion_series, m)?)?;
    Ok(())
}
