//! JSON fan files, divisor and point arguments.
//!
//! A fan file looks like
//! `{"rays": [[1,0,0], ...], "max_cones": [[0,1,2], ...], "names": ["D0", ...]}`
//! where integers may be JSON numbers or decimal strings (for values beyond
//! 64 bits) and `names` is optional.

use serde_json::{json, Value};

use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::{make_fan, Fan};
use crate::lattice::LatticePoint;
use crate::scalar::{fmt_q, parse_q, LatticeInt, Q};

fn parse_int<Z: LatticeInt>(v: &Value) -> Result<Z> {
    let s = match v {
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        _ => return Err(Error::Parse(format!("expected an integer, got {v}"))),
    };
    s.parse::<Z>()
        .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn parse_index(v: &Value) -> Result<usize> {
    match v {
        Value::Number(n) => n.as_u64().map(|i| i as usize),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
    .ok_or_else(|| Error::Parse(format!("expected a ray index, got {v}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be an array")))
}

pub fn fan_from_value<Z: LatticeInt>(v: &Value) -> Result<Fan<Z>> {
    let rays = array(
        v.get("rays")
            .ok_or_else(|| Error::Parse("missing \"rays\"".into()))?,
        "rays",
    )?
    .iter()
    .map(|r| {
        let c = array(r, "ray")?;
        if c.len() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                got: c.len(),
            });
        }
        Ok(LatticePoint::new(
            parse_int(&c[0])?,
            parse_int(&c[1])?,
            parse_int(&c[2])?,
        ))
    })
    .collect::<Result<Vec<_>>>()?;
    let cones = array(
        v.get("max_cones")
            .ok_or_else(|| Error::Parse("missing \"max_cones\"".into()))?,
        "max_cones",
    )?
    .iter()
    .map(|c| {
        array(c, "cone")?
            .iter()
            .map(parse_index)
            .collect::<Result<Vec<_>>>()
    })
    .collect::<Result<Vec<_>>>()?;
    let names = match v.get("names") {
        None | Some(Value::Null) => None,
        Some(n) => Some(
            array(n, "names")?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("names must be strings".into()))
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    make_fan(rays, cones, names)
}

pub fn fan_from_json<Z: LatticeInt>(text: &str) -> Result<Fan<Z>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    fan_from_value(&v)
}

fn int_json<Z: LatticeInt>(z: &Z) -> Value {
    let s = z.to_string();
    match s.parse::<i64>() {
        Ok(i) => json!(i),
        Err(_) => Value::String(s),
    }
}

pub fn fan_to_json<Z: LatticeInt>(f: &Fan<Z>) -> Value {
    let rays: Vec<Value> = f
        .rays()
        .iter()
        .map(|r| Value::Array(r.0.iter().map(int_json).collect()))
        .collect();
    let cones: Vec<Value> = f.cones().iter().map(|c| json!(c.rays)).collect();
    let mut out = json!({"rays": rays, "max_cones": cones});
    if f.names().iter().any(Option::is_some) {
        out["names"] = json!((0..f.num_rays()).map(|i| f.ray_name(i)).collect::<Vec<_>>());
    }
    out
}

/// Rationals go out as strings: `"p/q"`, or `"p"` when integral.
pub fn q_json<Z: LatticeInt>(q: &Q<Z>) -> Value {
    Value::String(fmt_q(q))
}

fn parse_q_value<Z: LatticeInt>(v: &Value) -> Result<Q<Z>> {
    match v {
        Value::String(s) => parse_q(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}"))),
        _ => parse_int(v).map(Q::from_integer),
    }
}

/// Parses a divisor given either as a JSON array of integers / `"p/q"`
/// strings or as a comma-separated list.
pub fn parse_divisor<Z: LatticeInt>(s: &str, num_rays: usize) -> Result<TorusDivisor<Z>> {
    let s = s.trim();
    let coeffs = if s.starts_with('[') {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        array(&v, "divisor")?
            .iter()
            .map(parse_q_value)
            .collect::<Result<Vec<_>>>()?
    } else {
        s.split(',')
            .map(|t| parse_q(t).ok_or_else(|| Error::Parse(format!("bad rational {t:?}"))))
            .collect::<Result<Vec<_>>>()?
    };
    if coeffs.len() != num_rays {
        return Err(Error::DimensionMismatch {
            expected: num_rays,
            got: coeffs.len(),
        });
    }
    Ok(TorusDivisor::new(coeffs))
}

/// Parses `x,y,z`.
pub fn parse_point<Z: LatticeInt>(s: &str) -> Result<LatticePoint<Z>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: parts.len(),
        });
    }
    let mut c = parts.iter().map(|p| {
        p.parse::<Z>()
            .map_err(|_| Error::Parse(format!("bad integer {p:?}")))
    });
    Ok(LatticePoint::new(
        c.next().unwrap()?,
        c.next().unwrap()?,
        c.next().unwrap()?,
    ))
}
