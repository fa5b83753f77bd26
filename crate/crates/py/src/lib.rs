//! Python bindings: thin JSON-string wrappers over the core solvers so the
//! exact results survive the language boundary unchanged.

use attractor_core::amodel::{elliptic_a_potential, quintic_a_potential, GWTable};
use attractor_core::constellation::tau_set as core_tau_set;
use attractor_core::json;
use attractor_core::mass::minimize_mass as core_minimize_mass;
use attractor_core::mat3::Exact;
use attractor_core::period::{charge_from_period, clear_denominators};
use attractor_core::torus::{
    invariants, residual, solve_complex_general, solve_complex_symmetric, solve_kahler,
};
use attractor_core::verify::{run_suite, SUITES};
use attractor_core::Error as CoreError;
use num_complex::Complex;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

fn core_err(e: CoreError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse(text: &str) -> PyResult<Value> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("invalid JSON: {e}")))
}

fn emit(v: &Value) -> String {
    serde_json::to_string(&json::sort_keys(v)).unwrap()
}

/// Solve the torus attractor equations for a JSON charge.
/// `mode` is "complex" or "kahler", `branch` "symmetric" or "general".
#[pyfunction]
#[pyo3(signature = (charge, mode = "complex", branch = "symmetric"))]
fn solve_torus(charge: &str, mode: &str, branch: &str) -> PyResult<String> {
    let value = parse(charge)?;
    let (complex_charge, kahler_charge) = match mode {
        "complex" => (json::charge_from_value(&value).map_err(core_err)?, None),
        "kahler" => {
            let k = json::kahler_charge_from_value(&value).map_err(core_err)?;
            (k.as_complex_charge(), Some(k))
        }
        other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    };
    let solutions = match (kahler_charge.as_ref(), branch) {
        (Some(k), "symmetric") => vec![solve_kahler::<Exact>(k).map_err(core_err)?.0],
        (None, "symmetric") => {
            vec![solve_complex_symmetric::<Exact>(&complex_charge).map_err(core_err)?.0]
        }
        (None, "general") => solve_complex_general::<Exact>(&complex_charge)
            .map_err(core_err)?
            .to_vec(),
        (Some(_), "general") => {
            return Err(PyValueError::new_err(
                "the Kahler solve only has the symmetric branch",
            ))
        }
        (_, other) => return Err(PyValueError::new_err(format!("unknown branch {other:?}"))),
    };
    let residuals: Vec<Value> = solutions
        .iter()
        .map(|s| {
            let r = residual::<Exact>(&complex_charge, &s.c, &s.a);
            Value::Array(r.iter().map(json::rat_to_value).collect())
        })
        .collect();
    Ok(emit(&json!({
        "solutions": solutions.iter().map(json::exact_solution_to_value).collect::<Vec<_>>(),
        "residuals": residuals,
        "invariants": json::invariants_to_value(&invariants::<Exact>(&complex_charge)),
    })))
}

/// Reconstruct the charge of a Picard-rank-9 period and re-solve.
#[pyfunction]
fn invert_picard9(period: &str) -> PyResult<String> {
    let p = json::period_from_value(&parse(period)?).map_err(core_err)?;
    let rational = charge_from_period(&p);
    let (multiplier, integral) = clear_denominators(&rational);
    let (sol, inv) = solve_complex_symmetric::<Exact>(&rational).map_err(core_err)?;
    Ok(emit(&json!({
        "charge": json::charge_to_value(&rational),
        "integral_charge": json::charge_to_value(&integral),
        "multiplier": multiplier.to_string(),
        "solution": json::exact_solution_to_value(&sol),
        "invariants": json::invariants_to_value(&inv),
        "period_reproduced": sol.a == p.period_matrix(),
    })))
}

/// Solve the E x S attractor over a Gram lattice for a pair of vectors
/// ("u1"/"u2" in complex mode, Mukai vectors "v1"/"v2" in Kahler mode).
#[pyfunction]
#[pyo3(signature = (lattice, vectors, mode = "complex"))]
fn solve_exs(lattice: &str, vectors: &str, mode: &str) -> PyResult<String> {
    let l = json::lattice_from_value(&parse(lattice)?).map_err(core_err)?;
    let v = parse(vectors)?;
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| PyValueError::new_err(format!("vectors object is missing {k:?}")))
    };
    match mode {
        "complex" => {
            let u1 = json::int_vector_from_value(field("u1")?).map_err(core_err)?;
            let u2 = json::int_vector_from_value(field("u2")?).map_err(core_err)?;
            let sol = attractor_core::exs::solve_complex_exs(&l, &u1, &u2).map_err(core_err)?;
            Ok(emit(&json!({
                "attractor": json::complex_exs_to_value(&sol),
                "hermitian_pairing": json::quad_to_value(&sol.hermitian_pairing()),
                "self_pairing": json::quad_to_value(&sol.self_pairing()),
            })))
        }
        "kahler" => {
            let v1 = json::mukai_from_value(field("v1")?).map_err(core_err)?;
            let v2 = json::mukai_from_value(field("v2")?).map_err(core_err)?;
            let sol = attractor_core::exs::solve_kahler_exs(&l, &v1, &v2).map_err(core_err)?;
            Ok(emit(&json!({
                "attractor": json::kahler_exs_to_value(&sol),
                "omega_s_square": json::quad_to_value(&sol.omega_s_square(&l).map_err(core_err)?),
                "im_omega_s_square":
                    json::rat_to_value(&sol.im_omega_s_square(&l).map_err(core_err)?),
            })))
        }
        other => Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
    }
}

/// Numerically minimize the mass of a JSON charge over the Siegel domain.
#[pyfunction]
#[pyo3(signature = (charge, starts = 20, max_iter = 600, seed = 0))]
fn minimize_mass(charge: &str, starts: usize, max_iter: usize, seed: u64) -> PyResult<String> {
    let ch = json::charge_from_value(&parse(charge)?).map_err(core_err)?;
    let res = core_minimize_mass(&ch, starts, max_iter, seed).map_err(core_err)?;
    Ok(emit(&json!({ "minimum": json::minimize_result_to_value(&res) })))
}

/// A-model potential of the elliptic curve at tau = re + i im.
#[pyfunction]
fn elliptic_potential(re: f64, im: f64) -> PyResult<f64> {
    elliptic_a_potential(Complex::new(re, im)).map_err(core_err)
}

/// A-model potential of the quintic at tau = re + i im, optionally with a
/// Gromov-Witten table in "d,N_d" CSV form.
#[pyfunction]
#[pyo3(signature = (re, im, gw_csv = None))]
fn quintic_potential(re: f64, im: f64, gw_csv: Option<&str>) -> PyResult<f64> {
    let table = match gw_csv {
        Some(text) => GWTable::from_csv(text).map_err(core_err)?,
        None => GWTable::empty(),
    };
    quintic_a_potential(Complex::new(re, im), &table).map_err(core_err)
}

/// CM points tau_{u1,u2} of a Gram lattice up to a height bound, as a JSON
/// list of {"re", "im", "u1", "u2", "D"}.
#[pyfunction]
#[pyo3(signature = (lattice, height, primitive = false))]
fn tau_set(lattice: &str, height: i64, primitive: bool) -> PyResult<String> {
    let l = json::lattice_from_value(&parse(lattice)?).map_err(core_err)?;
    let points = core_tau_set(&l, height, primitive).map_err(core_err)?;
    let list: Vec<Value> = points
        .iter()
        .map(|p| {
            let t = p.tau.to_c64();
            json!({ "re": t.re, "im": t.im, "u1": p.u1, "u2": p.u2, "D": p.d })
        })
        .collect();
    Ok(emit(&Value::Array(list)))
}

/// Run a named verification suite; returns the outcome as JSON.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0))]
fn verify(suite: &str, seed: u64) -> PyResult<String> {
    let outcome = run_suite(suite, seed).map_err(|_| {
        PyValueError::new_err(format!("unknown suite {suite:?}; expected one of {SUITES:?}"))
    })?;
    Ok(emit(&json::suite_outcome_to_value(&outcome)))
}

#[pymodule]
fn attractor_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve_torus, m)?)?;
    m.add_function(wrap_pyfunction!(invert_picard9, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exs, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_mass, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_potential, m)?)?;
    m.add_function(wrap_pyfunction!(quintic_potential, m)?)?;
    m.add_function(wrap_pyfunction!(tau_set, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
