//! Python bindings: `import digraphe_py`.

// pyo3's generated wrappers convert PyErr into itself.
#![allow(clippy::useless_conversion)]

use std::path::PathBuf;

use digraphe::{Direction, HtmlOptions, MappingTable, Mode};
use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use serde::Serialize;

create_exception!(digraphe_py, DigrapheError, PyValueError, "Raised for table, input and contract errors.");

fn err(e: digraphe::Error) -> PyErr {
    match e {
        digraphe::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => DigrapheError::new_err(other.to_string()),
    }
}

/// Turns any report into plain Python dicts and lists.
fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let json = serde_json::to_string(value).map_err(|e| DigrapheError::new_err(e.to_string()))?;
    Ok(py.import_bound("json")?.call_method1("loads", (json,))?.unbind())
}

fn direction(name: &str) -> PyResult<Direction> {
    name.parse().map_err(|_| PyValueError::new_err(format!("unknown direction {name:?}")))
}

fn mode(name: &str) -> PyResult<Mode> {
    name.parse().map_err(|_| PyValueError::new_err(format!("unknown mode {name:?}")))
}

/// A grapheme mapping table.
#[pyclass(name = "Table", module = "digraphe_py")]
#[derive(Clone)]
struct PyTable {
    inner: MappingTable,
}

#[pymethods]
impl PyTable {
    /// Parses table text.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: digraphe::parse_table(text.as_bytes()).map_err(err)?,
        })
    }

    /// Reads a table file.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let raw = std::fs::read(&path).map_err(|e| PyIOError::new_err(format!("{}: {e}", path.display())))?;
        Ok(Self {
            inner: digraphe::parse_table(&raw).map_err(err)?,
        })
    }

    /// The shipped Wolof table.
    #[staticmethod]
    fn wolof() -> Self {
        Self {
            inner: digraphe::tables::wolof(),
        }
    }

    #[getter]
    fn language(&self) -> &str {
        &self.inner.language
    }

    #[getter]
    fn version(&self) -> &str {
        &self.inner.version
    }

    /// `(source, target, context, priority)` tuples in file order.
    #[getter]
    fn rules(&self) -> Vec<(String, String, String, u8)> {
        self.inner
            .rules
            .iter()
            .map(|r| (r.source.clone(), r.target.clone(), r.context.to_string(), r.priority))
            .collect()
    }

    fn validate(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &digraphe::validate_table(&self.inner))
    }

    fn invert(&self) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.invert().map_err(err)?,
        })
    }

    fn serialize(&self) -> String {
        digraphe::serialize_table(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.rules.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Table(language={:?}, rules={})", self.inner.language, self.inner.rules.len())
    }
}

/// A compiled table for one direction.
#[pyclass(name = "Transliterator", module = "digraphe_py")]
struct PyTransliterator {
    inner: digraphe::Transliterator,
}

#[pymethods]
impl PyTransliterator {
    #[new]
    fn new(table: &PyTable, direction_name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: digraphe::Transliterator::new(&table.inner, direction(direction_name)?).map_err(err)?,
        })
    }

    #[getter]
    fn direction(&self) -> String {
        self.inner.direction().to_string()
    }

    /// Returns `(output, report)`.
    #[pyo3(signature = (text, mode_name = "lenient"))]
    fn transliterate(&self, py: Python<'_>, text: &str, mode_name: &str) -> PyResult<(String, PyObject)> {
        let (out, report) = self.inner.transliterate(text, mode(mode_name)?).map_err(err)?;
        Ok((out, to_py(py, &report)?))
    }

    /// Converts the text nodes of an HTML document given as bytes. Returns
    /// `(output bytes, report)`.
    #[pyo3(signature = (document, mode_name = "lenient", skip_elements = None, set_dir = false))]
    fn transliterate_html(
        &self,
        py: Python<'_>,
        document: &[u8],
        mode_name: &str,
        skip_elements: Option<Vec<String>>,
        set_dir: bool,
    ) -> PyResult<(PyObject, PyObject)> {
        let mut opts = HtmlOptions::default().with_dir_attribute(set_dir);
        if let Some(names) = skip_elements {
            opts = opts.with_skip_elements(names);
        }
        let (out, report) = digraphe::transliterate_html(document, &self.inner, mode(mode_name)?, &opts).map_err(err)?;
        Ok((PyBytes::new_bound(py, &out).into_any().unbind(), to_py(py, &report)?))
    }
}

/// One-shot conversion. Returns `(output, report)`.
#[pyfunction]
#[pyo3(signature = (text, table, direction_name, mode_name = "lenient"))]
fn transliterate(
    py: Python<'_>,
    text: &str,
    table: &PyTable,
    direction_name: &str,
    mode_name: &str,
) -> PyResult<(String, PyObject)> {
    let (out, report) =
        digraphe::transliterate(text, &table.inner, direction(direction_name)?, mode(mode_name)?).map_err(err)?;
    Ok((out, to_py(py, &report)?))
}

/// Same as `Transliterator(table, direction).transliterate_html(...)`.
#[pyfunction]
#[pyo3(signature = (document, table, direction_name, mode_name = "lenient", skip_elements = None, set_dir = false))]
fn transliterate_html(
    py: Python<'_>,
    document: &[u8],
    table: &PyTable,
    direction_name: &str,
    mode_name: &str,
    skip_elements: Option<Vec<String>>,
    set_dir: bool,
) -> PyResult<(PyObject, PyObject)> {
    PyTransliterator::new(table, direction_name)?.transliterate_html(py, document, mode_name, skip_elements, set_dir)
}

#[pyfunction]
#[pyo3(signature = (table, max_length = 4))]
fn check_round_trip(py: Python<'_>, table: &PyTable, max_length: usize) -> PyResult<PyObject> {
    let inner = table.inner.clone();
    let report = py.allow_threads(move || digraphe::check_round_trip(&inner, max_length)).map_err(err)?;
    to_py(py, &report)
}

#[pyfunction]
fn sardinas_patterson(code: Vec<String>) -> PyResult<bool> {
    digraphe::sardinas_patterson(&code).map_err(err)
}

#[pymodule]
fn digraphe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTable>()?;
    m.add_class::<PyTransliterator>()?;
    m.add_function(wrap_pyfunction!(transliterate, m)?)?;
    m.add_function(wrap_pyfunction!(transliterate_html, m)?)?;
    m.add_function(wrap_pyfunction!(check_round_trip, m)?)?;
    m.add_function(wrap_pyfunction!(sardinas_patterson, m)?)?;
    m.add("DigrapheError", m.py().get_type_bound::<DigrapheError>())?;
    Ok(())
}
