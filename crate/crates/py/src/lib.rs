//! Python bindings. Structured results cross the boundary as JSON text in
//! the same schemas the command line emits.

#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use skein::presentation::table::{check_table_row, table};
use skein::presentation::{build_catalog, Engine, RelationCatalog};
use skein::{parse_expression, Evaluator, GenPolynomial};

fn parse(src: &str, n: usize) -> PyResult<GenPolynomial> {
    parse_expression(src, n).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn runtime<E: std::fmt::Display>(e: E) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Evaluates an expression; returns the element as JSON.
#[pyfunction]
#[pyo3(signature = (expression, n = 4))]
fn evaluate(expression: &str, n: usize) -> PyResult<String> {
    let p = parse(expression, n)?;
    Evaluator::new(n).evaluate(&p).map(|e| to_json(&e)).map_err(runtime)
}

/// Evaluates an expression; returns the element in text form.
#[pyfunction]
#[pyo3(signature = (expression, n = 4))]
fn evaluate_text(expression: &str, n: usize) -> PyResult<String> {
    let p = parse(expression, n)?;
    Evaluator::new(n).evaluate(&p).map(|e| e.to_string()).map_err(runtime)
}

/// Whether two expressions have the same value.
#[pyfunction]
#[pyo3(signature = (a, b, n = 4))]
fn equals(a: &str, b: &str, n: usize) -> PyResult<bool> {
    let (a, b) = (parse(a, n)?, parse(b, n)?);
    Evaluator::new(n).equals(&a, &b).map(|(eq, _)| eq).map_err(runtime)
}

/// Normal form of an expression as JSON.
#[pyfunction]
#[pyo3(signature = (expression, checked = false))]
fn normal_form(expression: &str, checked: bool) -> PyResult<String> {
    let p = parse(expression, 4)?;
    let engine = Engine::new().map_err(runtime)?;
    engine.normal_form_poly(&p, checked).map(|nf| to_json(&nf)).map_err(runtime)
}

/// Verifies catalog relations (all, or the named ones); JSON reports.
#[pyfunction]
#[pyo3(signature = (names = None))]
fn verify(names: Option<Vec<String>>) -> PyResult<String> {
    let cat = build_catalog();
    let relations = match names {
        None => cat.relations.clone(),
        Some(ns) => ns
            .iter()
            .map(|n| cat.get(n).cloned().ok_or_else(|| PyValueError::new_err(format!("no relation named {:?}", n))))
            .collect::<PyResult<_>>()?,
    };
    RelationCatalog { relations }.verify_all(&Evaluator::new(4)).map(|r| to_json(&r)).map_err(runtime)
}

/// Checks one table row (`"R1"`, ...); JSON report.
#[pyfunction]
#[pyo3(signature = (row, seed = 2024))]
fn table_row(row: &str, seed: u64) -> PyResult<String> {
    let rows = table();
    let r = rows.iter().find(|r| r.id == row).ok_or_else(|| PyValueError::new_err(format!("no table row {:?}", row)))?;
    check_table_row(&Evaluator::new(4), r, seed).map(|rep| to_json(&rep)).map_err(runtime)
}

/// The relation catalog, one JSON record per line.
#[pyfunction]
fn catalog() -> String {
    build_catalog().to_jsonl()
}

#[pymodule]
fn pyskein(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_text, m)?)?;
    m.add_function(wrap_pyfunction!(equals, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(table_row, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    Ok(())
}
