//! Python bindings. Reports come back as plain dicts (the same documents the
//! CLI prints with `--format json`); series and systems are wrapped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use wwords::algebra::{euler_factorize, product_expand, ProductSpec, TruncatedSeries, Var};
use wwords::discovery::search_relations;
use wwords::enumerate::{enumerate_series, list_partitions};
use wwords::recurrence::{builtin_equations, check_equation, dp_series};
use wwords::systems::{build_preset, dilate_system, ColouredSystem, DilationSpec, PresetParams, SystemFile};
use wwords::verify::{identity_case, sampled_statistic_check, verify_identity, Engine};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, x: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(x).map_err(err)?;
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

/// A power series in q truncated after `q^qmax`, with polynomial
/// coefficients in the colour variables.
#[pyclass(name = "Series", module = "wwords_py")]
#[derive(Clone)]
pub struct PySeries {
    inner: TruncatedSeries,
}

#[pymethods]
impl PySeries {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(err)?;
        Ok(PySeries { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(err)
    }

    #[getter]
    fn qmax(&self) -> usize {
        self.inner.qmax()
    }

    #[getter]
    fn degmax(&self) -> Option<u32> {
        self.inner.degmax()
    }

    /// Coefficient of `q^n` as a dict from monomial text (`"a*b^2"`, `"1"`) to integer.
    fn coefficient(&self, n: usize) -> PyResult<BTreeMap<String, BigInt>> {
        if n > self.inner.qmax() {
            return Err(PyKeyError::new_err(format!("q^{n} is beyond the truncation q^{}", self.inner.qmax())));
        }
        Ok(self
            .inner
            .coeff(n)
            .terms()
            .iter()
            .map(|(m, c)| (m.to_string(), c.clone()))
            .collect())
    }

    /// Coefficients with every colour variable set to 1.
    fn counts(&self) -> Vec<BigInt> {
        self.inner.counts()
    }

    fn erase_all(&self) -> Self {
        PySeries {
            inner: self.inner.erase_all(),
        }
    }

    fn truncate(&self, qmax: usize) -> PyResult<Self> {
        Ok(PySeries {
            inner: self.inner.truncate(qmax).map_err(err)?,
        })
    }

    fn inverse(&self) -> PyResult<Self> {
        Ok(PySeries {
            inner: self.inner.inverse().map_err(err)?,
        })
    }

    /// Euler factors as dicts `{coeff, n, exponent}` with
    /// `f = prod (1 - coeff q^n)^(-exponent)`.
    fn euler_factors(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &euler_factorize(&self.inner).map_err(err)?)
    }

    /// `(n, monomial, lhs, rhs)` of the first differing coefficient, if any.
    fn first_difference(&self, other: &PySeries) -> Option<(usize, String, String, String)> {
        self.inner
            .first_difference(&other.inner)
            .map(|m| (m.n, m.monomial.to_string(), m.lhs.to_string(), m.rhs.to_string()))
    }

    fn __add__(&self, other: &PySeries) -> Self {
        PySeries {
            inner: self.inner.add(&other.inner),
        }
    }

    fn __sub__(&self, other: &PySeries) -> Self {
        PySeries {
            inner: self.inner.sub(&other.inner),
        }
    }

    fn __mul__(&self, other: &PySeries) -> Self {
        PySeries {
            inner: self.inner.mul(&other.inner),
        }
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner.agrees_with(&other.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series(qmax={}, {})", self.inner.qmax(), self.inner)
    }
}

/// A coloured partition system: colours, order and difference conditions.
#[pyclass(name = "System", module = "wwords_py")]
#[derive(Clone)]
pub struct PySystem {
    inner: ColouredSystem,
}

#[pymethods]
impl PySystem {
    #[staticmethod]
    #[pyo3(signature = (name, r=None))]
    fn preset(name: &str, r: Option<u32>) -> PyResult<Self> {
        let mut params = PresetParams::default();
        params.r = r;
        Ok(PySystem {
            inner: build_preset(name, &params).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = SystemFile::from_json(text).map_err(err)?;
        Ok(PySystem {
            inner: file.build().map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        SystemFile::from_system(&self.inner).to_json()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn colours(&self) -> Vec<String> {
        self.inner.colours().iter().map(|c| c.label.clone()).collect()
    }

    /// Generating function by direct enumeration.
    #[pyo3(signature = (qmax, degmax=None))]
    fn enumerate(&self, py: Python<'_>, qmax: usize, degmax: Option<u32>) -> PyResult<PySeries> {
        let inner = py.allow_threads(|| enumerate_series(&self.inner, qmax, degmax)).map_err(err)?;
        Ok(PySeries { inner })
    }

    /// Generating function through the recurrences.
    #[pyo3(signature = (qmax, degmax=None))]
    fn recurrence(&self, py: Python<'_>, qmax: usize, degmax: Option<u32>) -> PyResult<PySeries> {
        let inner = py.allow_threads(|| dp_series(&self.inner, qmax, degmax)).map_err(err)?;
        Ok(PySeries { inner })
    }

    /// Partitions of `n`, each a list of part labels such as `"3_ab"`.
    fn partitions(&self, n: usize) -> PyResult<Vec<Vec<String>>> {
        let parts = list_partitions(&self.inner, n, None).map_err(err)?;
        Ok(parts
            .iter()
            .map(|p| p.iter().map(|x| self.inner.part_label(x)).collect())
            .collect())
    }

    /// Sizes `k` of colour `x` become `modulus * k + offset(x)`, the offset
    /// summing `offsets[v]` over the variables of the colour's weight.
    #[pyo3(signature = (modulus, offsets=BTreeMap::new()))]
    fn dilate(&self, modulus: u32, offsets: BTreeMap<String, i64>) -> PyResult<Self> {
        let mut spec = DilationSpec::new(modulus);
        for (name, shift) in offsets {
            spec = spec.shift(Var::new(&name).map_err(err)?, shift);
        }
        Ok(PySystem {
            inner: dilate_system(&self.inner, &spec).map_err(err)?,
        })
    }

    /// Colour relations that make the generating function a product.
    #[pyo3(signature = (primaries, max_exponent=2, qmax=18))]
    fn discover(&self, py: Python<'_>, primaries: Vec<String>, max_exponent: u32, qmax: usize) -> PyResult<PyObject> {
        let prim: Vec<Var> = primaries.iter().map(|p| Var::new(p)).collect::<Result<_, _>>().map_err(err)?;
        let found = py
            .allow_threads(|| search_relations(&self.inner, &prim, qmax, max_exponent))
            .map_err(err)?;
        to_py(py, &found)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("System({:?})", self.inner.name())
    }
}

/// Expands a product given as JSON (a list of factor objects).
#[pyfunction]
#[pyo3(signature = (product_json, qmax, degmax=None))]
fn expand_product(product_json: &str, qmax: usize, degmax: Option<u32>) -> PyResult<PySeries> {
    let spec: ProductSpec = serde_json::from_str(product_json).map_err(err)?;
    Ok(PySeries {
        inner: product_expand(&spec, qmax, degmax).map_err(err)?,
    })
}

#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    wwords::systems::preset_names().to_vec()
}

#[pyfunction]
fn identity_names() -> Vec<&'static str> {
    wwords::verify::identity_names()
}

#[pyfunction]
fn equation_names() -> Vec<String> {
    builtin_equations().into_iter().map(|e| e.name).collect()
}

/// Verifies a registered identity; the report is a dict with `equal`,
/// `first_mismatch` and the engines used. Times are left out.
#[pyfunction]
#[pyo3(signature = (identity, qmax=None, degmax=None, engines=None))]
fn verify(
    py: Python<'_>,
    identity: &str,
    qmax: Option<usize>,
    degmax: Option<u32>,
    engines: Option<&str>,
) -> PyResult<PyObject> {
    let case = identity_case(identity).map_err(err)?;
    let engines = match engines {
        Some(list) => Engine::parse_list(list).map_err(err)?,
        None => case.applicable_engines(),
    };
    let (qmax, degmax) = (qmax.unwrap_or(case.qmax), degmax.or(case.degmax));
    let mut report = py
        .allow_threads(|| verify_identity(&case, qmax, degmax, &engines))
        .map_err(err)?;
    report.ms = 0;
    to_py(py, &report)
}

/// Checks a built-in q-difference equation on the system it names.
#[pyfunction]
#[pyo3(signature = (name, qmax=20, kmax=None))]
fn check_builtin_equation(py: Python<'_>, name: &str, qmax: usize, kmax: Option<i64>) -> PyResult<PyObject> {
    let spec = builtin_equations()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| PyKeyError::new_err(format!("unknown equation {name:?}")))?;
    let sys = build_preset(&spec.system, &PresetParams::default()).map_err(err)?;
    to_py(py, &check_equation(&spec, &sys, kmax, qmax).map_err(err)?)
}

/// Seeded sample check of the statistics stated in words.
#[pyfunction]
#[pyo3(signature = (identity, samples=200, seed=0, max_n=40))]
fn sample_statistics(py: Python<'_>, identity: &str, samples: usize, seed: u64, max_n: usize) -> PyResult<PyObject> {
    to_py(py, &sampled_statistic_check(identity, samples, seed, max_n).map_err(err)?)
}

#[pymodule]
pub fn wwords_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(expand_product, m)?)?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(identity_names, m)?)?;
    m.add_function(wrap_pyfunction!(equation_names, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(check_builtin_equation, m)?)?;
    m.add_function(wrap_pyfunction!(sample_statistics, m)?)?;
    Ok(())
}
