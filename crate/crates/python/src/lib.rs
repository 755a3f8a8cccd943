//! Python bindings: counts from either engine, series, analysis pipelines,
//! the verification suite and the relocation moves.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use sawbox::analysis::{
    run_pipeline, Pipeline, PipelineOptions, Precision, Series, DEFAULT_DIGITS,
};
use sawbox::io::{ingest, read_series_file, write_series_file, SeriesFile};
use sawbox::lattice::{LatticeBox, Point, SpanVariant, Walk, WalkClass};
use sawbox::moves::{extend_spanning_walk, push_to_sides};
use sawbox::oracle::{oracle_count, oracle_count_polygons, oracle_spanning_counts};
use sawbox::transfer::{RectTable, SweepKind};
use sawbox::verify::{self, Level};
use sawbox::BigCount;

type Vertices = Vec<(i32, i32)>;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py_int<'py>(py: Python<'py>, v: &BigCount) -> PyResult<Bound<'py, PyAny>> {
    py.import("builtins")?
        .getattr("int")?
        .call1((v.to_string(),))
}

fn from_py_int(v: &Bound<'_, PyAny>) -> PyResult<BigCount> {
    let text = v.str()?.to_string();
    text.parse::<BigCount>()
        .map_err(|_| err(format!("not an integer: {text}")))
}

fn walk_class(tag: &str, variant: SpanVariant) -> PyResult<WalkClass> {
    Ok(match tag {
        "anywhere" => WalkClass::Anywhere,
        "exact-bbox" => WalkClass::ExactBBox,
        "opposite-corners" => WalkClass::OppositeCorners,
        "opposite-sides" => WalkClass::OppositeSides,
        "span" => WalkClass::SpanSquare(variant),
        _ => return Err(err(format!("unknown walk class {tag}"))),
    })
}

fn span_variant(tag: &str) -> PyResult<SpanVariant> {
    match tag {
        "one-direction" => Ok(SpanVariant::AtLeastOneDirection),
        "exact" => Ok(SpanVariant::ExactSquare),
        _ => Err(err(format!("unknown span variant {tag}"))),
    }
}

fn walk(vertices: Vertices) -> PyResult<Walk> {
    Walk::new(
        vertices
            .into_iter()
            .map(|(x, y)| Point::new(x, y))
            .collect(),
    )
    .map_err(err)
}

fn vertices(w: &Walk) -> Vertices {
    w.vertices().iter().map(|p| (p.x, p.y)).collect()
}

/// Number of walks of `class` in the `side x side` box.
///
/// Classes: anywhere, exact-bbox, cycles, opposite-corners, opposite-sides,
/// span, span-hat. The transfer-matrix engine handles the first three.
#[pyfunction]
#[pyo3(signature = (class_, side, engine = "tm", span = "one-direction"))]
fn count<'py>(
    py: Python<'py>,
    class_: &str,
    side: u32,
    engine: &str,
    span: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let variant = span_variant(span)?;
    let table = |kind| RectTable::compute(side, kind).map_err(err);
    let v = py.detach(|| -> PyResult<BigCount> {
        match (engine, class_) {
            ("tm", "cycles") => table(SweepKind::Polygons)?.assemble(side).map_err(err),
            ("tm", "exact-bbox") => Ok(table(SweepKind::Walks)?.exact[&(side, side)].clone()),
            ("tm", "anywhere") => table(SweepKind::Walks)?.assemble(side).map_err(err),
            ("tm", other) => Err(err(format!(
                "class {other} is only available from the oracle engine"
            ))),
            ("oracle", "cycles") => oracle_count_polygons(LatticeBox::square(side)).map_err(err),
            ("oracle", "span-hat") => Ok(oracle_spanning_counts(side, variant).map_err(err)?.m_hat),
            ("oracle", c) => {
                oracle_count(walk_class(c, variant)?, LatticeBox::square(side)).map_err(err)
            }
            (e, _) => Err(err(format!("unknown engine {e}"))),
        }
    })?;
    to_py_int(py, &v)
}

/// `{(h, l): N(h, l)}` for every rectangle with `h, l <= max_side`.
#[pyfunction]
#[pyo3(signature = (max_side, kind = "walks"))]
fn rect_table<'py>(py: Python<'py>, max_side: u32, kind: &str) -> PyResult<Bound<'py, PyDict>> {
    let kind = match kind {
        "walks" => SweepKind::Walks,
        "polygons" => SweepKind::Polygons,
        _ => return Err(err(format!("unknown sweep kind {kind}"))),
    };
    let t = py
        .detach(|| RectTable::compute(max_side, kind))
        .map_err(err)?;
    let out = PyDict::new(py);
    for (&(h, l), v) in &t.n {
        if h <= max_side && l <= max_side {
            out.set_item((h, l), to_py_int(py, v)?)?;
        }
    }
    Ok(out)
}

/// A coefficient series indexed by `L`.
#[pyclass(name = "Series", module = "sawbox_py", skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: Series,
}

#[pymethods]
impl PySeries {
    /// Exact series with terms indexed from `first`.
    #[new]
    #[pyo3(signature = (name, values, first = 1))]
    fn new(name: &str, values: &Bound<'_, PyList>, first: u32) -> PyResult<Self> {
        let mut s = Series::new(name);
        for (i, v) in values.iter().enumerate() {
            s.push_exact(first + i as u32, from_py_int(&v)?)
                .map_err(err)?;
        }
        Ok(PySeries { inner: s })
    }

    /// Reads a series file, b-file or transcribed table.
    #[staticmethod]
    #[pyo3(signature = (path, index_shift = 0))]
    fn load(path: PathBuf, index_shift: i64) -> PyResult<Self> {
        Ok(PySeries {
            inner: ingest(&path, None, index_shift).map_err(err)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PySeries {
            inner: read_series_file(text).map_err(err)?.series,
        })
    }

    fn to_text(&self) -> String {
        write_series_file(&SeriesFile::new(self.inner.clone()))
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// `(index, value, provenance)` with values as decimal strings.
    fn terms(&self) -> Vec<(u32, String, &'static str)> {
        self.inner
            .terms()
            .iter()
            .map(|t| (t.index, t.value.to_string(), t.provenance.tag()))
            .collect()
    }

    fn exact_part(&self) -> Self {
        PySeries {
            inner: self.inner.exact_part(),
        }
    }

    fn exact_count(&self) -> usize {
        self.inner.exact_count()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Series({:?}, {} terms)", self.inner.name, self.inner.len())
    }
}

/// Runs a named pipeline and returns `(summary, report)`: headline numbers
/// as decimal strings and the full JSON report text.
#[pyfunction]
#[pyo3(signature = (series, pipeline, second = None, precision = DEFAULT_DIGITS, g = None, lambda_ = None))]
fn analyze(
    py: Python<'_>,
    series: &PySeries,
    pipeline: &str,
    second: Option<&PySeries>,
    precision: u32,
    g: Option<&str>,
    lambda_: Option<&str>,
) -> PyResult<(Vec<(String, String)>, String)> {
    let p =
        Pipeline::from_tag(pipeline).ok_or_else(|| err(format!("unknown pipeline {pipeline}")))?;
    let prec = Precision::digits(precision);
    let mut opts = PipelineOptions::new(prec);
    opts.g = g.map(|v| prec.parse(v)).transpose().map_err(err)?;
    if let Some(l) = lambda_ {
        opts.lambda = prec.parse(l).map_err(err)?;
    }
    let out = py
        .detach(|| run_pipeline(p, &series.inner, second.map(|s| &s.inner), &opts))
        .map_err(err)?;
    let digits = prec.decimal_digits();
    let summary = out
        .summary
        .iter()
        .map(|(n, v)| (n.clone(), sawbox::analysis::format_float(v, digits)))
        .collect();
    Ok((
        summary,
        serde_json::to_string_pretty(&out.to_json(digits)).map_err(err)?,
    ))
}

/// Runs the verification suite; `(name, passed, detail)` per claim.
#[pyfunction]
#[pyo3(signature = (level = "quick"))]
fn verify_claims(py: Python<'_>, level: &str) -> PyResult<Vec<(String, bool, String)>> {
    let level = Level::from_tag(level).ok_or_else(|| err(format!("unknown level {level}")))?;
    let claims = py.detach(|| verify::run(level)).map_err(err)?;
    Ok(claims
        .into_iter()
        .map(|c| (c.name, c.passed, c.detail))
        .collect())
}

/// Relocates both endpoints of a walk in the `side` box onto the left and
/// right sides; returns the new vertices and the move names applied.
#[pyfunction]
fn push_walk(vertices_in: Vertices, side: u32) -> PyResult<(Vertices, Vec<String>)> {
    let (w, trace) = push_to_sides(&walk(vertices_in)?, side).map_err(err)?;
    let names = trace
        .steps
        .iter()
        .map(|s| format!("{:?}", s.kind))
        .collect();
    Ok((vertices(&w), names))
}

/// Image of a spanning walk of the `side` box under the extension map.
#[pyfunction]
fn extend_walk(vertices_in: Vertices, side: u32) -> PyResult<Vertices> {
    Ok(vertices(
        &extend_spanning_walk(&walk(vertices_in)?, side).map_err(err)?,
    ))
}

#[pymodule]
fn sawbox_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(rect_table, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify_claims, m)?)?;
    m.add_function(wrap_pyfunction!(push_walk, m)?)?;
    m.add_function(wrap_pyfunction!(extend_walk, m)?)?;
    Ok(())
}
