//! JSON codecs for the file formats used by the command line tool and the
//! Python bindings. Rationals travel as "p/q" strings (plain integers are
//! accepted), quadratic numbers as {"a", "b", "D"}, and matrices as
//! row-major nested arrays.

use crate::error::{Error, Result};
use crate::exs::{ComplexExsAttractor, KahlerExsAttractor, MukaiVector, RigidityOutcome};
use crate::lattice::GramLattice;
use crate::mass::{MinimizeResult, QuadricResult};
use crate::mat3::Mat3;
use crate::period::Picard9Period;
use crate::scalar::{QuadNumber, Rat, Scalar, C64};
use crate::torus::{
    AttractorInvariants, AttractorSolution, Branch, KahlerTorusCharge, MirrorCover, TorusCharge,
};
use crate::verify::SuiteOutcome;
use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Map, Value};
use std::str::FromStr;

fn bad(what: &str, v: &Value) -> Error {
    Error::Invalid(format!("expected {what}, found {v}"))
}

pub fn rat_to_value(r: &Rat) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn rat_from_value(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => {
            Rat::from_str(s.trim()).map_err(|_| bad("a rational \"p/q\"", v))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rat::from_int(i))
            } else {
                Err(bad("an integer (write non-integers as \"p/q\")", v))
            }
        }
        _ => Err(bad("a rational \"p/q\"", v)),
    }
}

pub fn quad_to_value(q: &QuadNumber) -> Value {
    json!({
        "a": rat_to_value(q.re()),
        "b": rat_to_value(q.im_coeff()),
        "D": q.field_d(),
    })
}

pub fn quad_from_value(v: &Value) -> Result<QuadNumber> {
    let o = v.as_object().ok_or_else(|| bad("a quadratic number object", v))?;
    let field = |k: &str| o.get(k).ok_or_else(|| bad(&format!("key \"{k}\""), v));
    let a = rat_from_value(field("a")?)?;
    let b = rat_from_value(field("b")?)?;
    let d = field("D")?
        .as_u64()
        .ok_or_else(|| bad("a nonnegative integer \"D\"", v))?;
    Ok(QuadNumber::new(a, b, d))
}

pub fn c64_to_value(z: &C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn rat_mat_to_value(m: &Mat3<Rat>) -> Value {
    Value::Array(
        m.e.iter()
            .map(|row| Value::Array(row.iter().map(rat_to_value).collect()))
            .collect(),
    )
}

pub fn rat_mat_from_value(v: &Value) -> Result<Mat3<Rat>> {
    let rows = v.as_array().ok_or_else(|| bad("a 3x3 matrix", v))?;
    if rows.len() != 3 {
        return Err(bad("a 3x3 matrix", v));
    }
    let mut m = Mat3::<Rat>::zero();
    for (i, row) in rows.iter().enumerate() {
        let cols = row.as_array().ok_or_else(|| bad("a 3x3 matrix row", row))?;
        if cols.len() != 3 {
            return Err(bad("a 3x3 matrix row", row));
        }
        for (j, c) in cols.iter().enumerate() {
            m.e[i][j] = rat_from_value(c)?;
        }
    }
    Ok(m)
}

pub fn quad_mat_to_value(m: &Mat3<QuadNumber>) -> Value {
    Value::Array(
        m.e.iter()
            .map(|row| Value::Array(row.iter().map(quad_to_value).collect()))
            .collect(),
    )
}

pub fn c64_mat_to_value(m: &Mat3<C64>) -> Value {
    Value::Array(
        m.e.iter()
            .map(|row| Value::Array(row.iter().map(c64_to_value).collect()))
            .collect(),
    )
}

pub fn charge_to_value(ch: &TorusCharge<Rat>) -> Value {
    json!({
        "p0": rat_to_value(&ch.p0),
        "P": rat_mat_to_value(&ch.p),
        "Q": rat_mat_to_value(&ch.q),
        "q0": rat_to_value(&ch.q0),
    })
}

pub fn charge_from_value(v: &Value) -> Result<TorusCharge<Rat>> {
    let o = v.as_object().ok_or_else(|| bad("a charge object", v))?;
    let field = |k: &str| o.get(k).ok_or_else(|| bad(&format!("key \"{k}\""), v));
    Ok(TorusCharge {
        p0: rat_from_value(field("p0")?)?,
        p: rat_mat_from_value(field("P")?)?,
        q: rat_mat_from_value(field("Q")?)?,
        q0: rat_from_value(field("q0")?)?,
    })
}

pub fn kahler_charge_to_value(k: &KahlerTorusCharge<Rat>) -> Value {
    json!({
        "v0": rat_to_value(&k.v0),
        "V": rat_mat_to_value(&k.v),
        "U": rat_mat_to_value(&k.u),
        "u0": rat_to_value(&k.u0),
    })
}

pub fn kahler_charge_from_value(v: &Value) -> Result<KahlerTorusCharge<Rat>> {
    let o = v.as_object().ok_or_else(|| bad("a Kahler charge object", v))?;
    let field = |k: &str| o.get(k).ok_or_else(|| bad(&format!("key \"{k}\""), v));
    Ok(KahlerTorusCharge {
        v0: rat_from_value(field("v0")?)?,
        v: rat_mat_from_value(field("V")?)?,
        u: rat_mat_from_value(field("U")?)?,
        u0: rat_from_value(field("u0")?)?,
    })
}

pub fn period_to_value(p: &Picard9Period) -> Value {
    json!({
        "R": rat_mat_to_value(p.r()),
        "D": p.d(),
        "N": rat_mat_to_value(p.n()),
    })
}

pub fn period_from_value(v: &Value) -> Result<Picard9Period> {
    let o = v.as_object().ok_or_else(|| bad("a period object", v))?;
    let field = |k: &str| o.get(k).ok_or_else(|| bad(&format!("key \"{k}\""), v));
    let r = rat_mat_from_value(field("R")?)?;
    let dv = field("D")?;
    let d = dv
        .as_u64()
        .or_else(|| dv.as_str().and_then(|s| s.parse().ok()))
        .ok_or_else(|| bad("a positive integer \"D\"", v))?;
    let n = rat_mat_from_value(field("N")?)?;
    Picard9Period::new(r, d, n)
}

pub fn lattice_to_value(l: &GramLattice) -> Value {
    json!({ "gram": l.gram, "even": l.even })
}

pub fn lattice_from_value(v: &Value) -> Result<GramLattice> {
    let o = v.as_object().ok_or_else(|| bad("a lattice object", v))?;
    let gram_v = o.get("gram").ok_or_else(|| bad("key \"gram\"", v))?;
    let rows = gram_v.as_array().ok_or_else(|| bad("a gram matrix", gram_v))?;
    let mut gram = Vec::with_capacity(rows.len());
    for row in rows {
        let cols = row.as_array().ok_or_else(|| bad("a gram matrix row", row))?;
        let mut out = Vec::with_capacity(cols.len());
        for c in cols {
            out.push(c.as_i64().ok_or_else(|| bad("an integer gram entry", c))?);
        }
        gram.push(out);
    }
    let even = o.get("even").and_then(Value::as_bool).unwrap_or(false);
    GramLattice::new(gram, even)
}

pub fn int_vector_from_value(v: &Value) -> Result<Vec<i64>> {
    let a = v.as_array().ok_or_else(|| bad("an integer vector", v))?;
    a.iter()
        .map(|c| c.as_i64().ok_or_else(|| bad("an integer entry", c)))
        .collect()
}

pub fn mukai_from_value(v: &Value) -> Result<MukaiVector> {
    let o = v.as_object().ok_or_else(|| bad("a Mukai vector object", v))?;
    let field = |k: &str| o.get(k).ok_or_else(|| bad(&format!("key \"{k}\""), v));
    let r = field("r")?.as_i64().ok_or_else(|| bad("an integer \"r\"", v))?;
    let d = int_vector_from_value(field("d")?)?;
    let s = field("s")?.as_i64().ok_or_else(|| bad("an integer \"s\"", v))?;
    Ok(MukaiVector::new(r, d, s))
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::PlusGeneral => "plus-general",
        Branch::MinusGeneral => "minus-general",
        Branch::SymmetricSiegel => "symmetric-siegel",
    }
}

pub fn exact_solution_to_value(s: &AttractorSolution<QuadNumber>) -> Value {
    json!({
        "C": quad_to_value(&s.c),
        "A": quad_mat_to_value(&s.a),
        "branch": branch_name(s.branch),
    })
}

pub fn float_solution_to_value(s: &AttractorSolution<C64>) -> Value {
    json!({
        "C": c64_to_value(&s.c),
        "A": c64_mat_to_value(&s.a),
        "branch": branch_name(s.branch),
    })
}

pub fn invariants_to_value(inv: &AttractorInvariants<Rat>) -> Value {
    json!({
        "R": rat_mat_to_value(&inv.r),
        "M": rat_to_value(&inv.m),
        "D": rat_to_value(&inv.d),
    })
}

pub fn mirror_cover_to_value(mc: &MirrorCover) -> Value {
    json!({
        "D": rat_to_value(&mc.d),
        "scale": rat_mat_to_value(&mc.scale),
        "omega_prime": quad_mat_to_value(&mc.omega_prime),
    })
}

pub fn minimize_result_to_value(r: &MinimizeResult) -> Value {
    json!({
        "chart": r.chart.0.to_vec(),
        "T": c64_mat_to_value(&r.t),
        "mass": r.mass,
        "best_start": r.best_start,
        "starts": r.starts,
        "iterations": r.iterations,
    })
}

pub fn quadric_result_to_value(r: &QuadricResult) -> Value {
    json!({
        "omega": r.omega.iter().map(c64_to_value).collect::<Vec<_>>(),
        "distance": r.distance,
        "residual": r.residual,
    })
}

pub fn complex_exs_to_value(a: &ComplexExsAttractor) -> Value {
    json!({
        "tau": quad_to_value(&a.tau),
        "i_omega": a.i_omega.iter().map(quad_to_value).collect::<Vec<_>>(),
        "disc": a.disc,
        "pair_gram": a.pair_gram,
    })
}

pub fn kahler_exs_to_value(a: &KahlerExsAttractor) -> Value {
    json!({
        "omega_E": quad_to_value(&a.omega_e),
        "delta": a.delta().iter().map(quad_to_value).collect::<Vec<_>>(),
        "C": quad_to_value(&a.c),
        "disc": a.disc,
    })
}

fn bigint_to_value(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn rigidity_to_value(r: &RigidityOutcome) -> Value {
    match r {
        RigidityOutcome::Rigid { gen_re, gen_im, m, n } => json!({
            "rigid": true,
            "gen_re": gen_re.iter().map(rat_to_value).collect::<Vec<_>>(),
            "gen_im": gen_im.iter().map(rat_to_value).collect::<Vec<_>>(),
            "m": bigint_to_value(m),
            "n": bigint_to_value(n),
        }),
        RigidityOutcome::NotRigid { reason } => json!({
            "rigid": false,
            "reason": reason,
        }),
    }
}

pub fn suite_outcome_to_value(s: &SuiteOutcome) -> Value {
    json!({
        "suite": s.name,
        "cases": s.cases,
        "failures": s.failures,
        "passed": s.passed(),
    })
}

/// Parse a complex number written as "a+bi" / "a-bi" / "a" / "bi".
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Invalid(format!("cannot parse complex number {s:?}"));
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // split off the imaginary coefficient at the last interior sign
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| {
                (c == '+' || c == '-') && !matches!(&body[k - 1..k], "e" | "E")
            })
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re: f64 = body[..k].parse().map_err(|_| err())?;
                let im: f64 = match &body[k..] {
                    "+" => 1.0,
                    "-" => -1.0,
                    rest => rest.parse().map_err(|_| err())?,
                };
                Ok(C64::new(re, im))
            }
            None => {
                let im: f64 = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    rest => rest.parse().map_err(|_| err())?,
                };
                Ok(C64::new(0.0, im))
            }
        }
    } else {
        Ok(C64::new(t.parse().map_err(|_| err())?, 0.0))
    }
}

/// Stable, sorted-key serialization of a report value.
pub fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(o) => {
            let mut m = Map::new();
            let mut keys: Vec<_> = o.keys().collect();
            keys.sort();
            for k in keys {
                m.insert(k.clone(), sort_keys(&o[k]));
            }
            Value::Object(m)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn rational_roundtrip_and_plain_numbers() {
        let r = rat(-7, 3);
        assert_eq!(rat_from_value(&rat_to_value(&r)).unwrap(), r);
        assert_eq!(rat_from_value(&json!(5)).unwrap(), rat_int(5));
        assert_eq!(rat_from_value(&json!("4")).unwrap(), rat_int(4));
        assert!(rat_from_value(&json!(0.5)).is_err());
    }

    #[test]
    fn charge_roundtrip() {
        let ch = TorusCharge::from_i64(
            2,
            [[1, 0, -3], [4, 5, 0], [0, 2, 1]],
            [[0, 1, 1], [-2, 0, 3], [1, 1, -1]],
            -5,
        );
        assert_eq!(charge_from_value(&charge_to_value(&ch)).unwrap(), ch);
    }

    #[test]
    fn quad_roundtrip() {
        let q = QuadNumber::new(rat(1, 2), rat(-3, 4), 5);
        assert_eq!(quad_from_value(&quad_to_value(&q)).unwrap(), q);
    }

    #[test]
    fn period_roundtrip() {
        let p = Picard9Period::from_i64(
            [[2, 1, 0], [1, 2, 0], [0, 0, 3]],
            5,
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        )
        .unwrap();
        let v = period_to_value(&p);
        assert_eq!(period_from_value(&v).unwrap(), p);
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("-0.5-i").unwrap(), C64::new(-0.5, -1.0));
        assert_eq!(parse_complex("3").unwrap(), C64::new(3.0, 0.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("2.5e-1+1e2i").unwrap(), C64::new(0.25, 100.0));
        assert!(parse_complex("nope").is_err());
    }

    #[test]
    fn sorted_keys_are_stable() {
        let v = json!({"b": 1, "a": {"d": 2, "c": 3}});
        let s = serde_json::to_string(&sort_keys(&v)).unwrap();
        assert_eq!(s, r#"{"a":{"c":3,"d":2},"b":1}"#);
    }
}
