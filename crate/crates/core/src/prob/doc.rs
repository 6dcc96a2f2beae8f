//! JSON parameter documents.
//!
//! Rationals are strings such as `"3/4"`; plain JSON integers are accepted
//! too, floats are not.
//!
//! ```json
//! {"p": ["0", "1/2", "1/2"], "tau": ["1/3", "1/5"],
//!  "tau0": {"points": ["1/2"], "weights": ["1"]}}
//! {"x": ["1/2", "1/4", "1/8", "1/8"]}
//! {"mix": [{"w": "1/2", "fn": {"family": "zx", "x": [...]}}, ...]}
//! ```

use std::str::FromStr;

use num_traits::Zero;
use serde_json::Value;

use super::{DiscreteMeasure, ProbFnSpec, PtParams, SimplexVector};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Wx,
    Vpt,
    Vptn,
    Zx,
    Mixture,
    Signed,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "wx" => Family::Wx,
            "vpt" => Family::Vpt,
            "vptn" => Family::Vptn,
            "zx" => Family::Zx,
            "mixture" | "mix" => Family::Mixture,
            "signed" => Family::Signed,
            other => {
                return Err(Error::MalformedSpec(format!("unknown family {other:?}")));
            }
        })
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedSpec(msg.into())
}

fn rational(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        _ => Err(malformed(format!(
            "{what}: expected a rational string like \"1/3\", found {v}"
        ))),
    }
}

fn rational_list(v: &Value, what: &str) -> Result<Vec<Rational>> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{what}: expected an array")))?
        .iter()
        .map(|x| rational(x, what))
        .collect()
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key)
        .ok_or_else(|| malformed(format!("missing field {key:?}")))
}

pub fn parse_simplex_doc(doc: &Value) -> Result<SimplexVector> {
    SimplexVector::new(rational_list(field(doc, "x")?, "x")?)
}

pub fn parse_measure_doc(doc: &Value) -> Result<DiscreteMeasure> {
    DiscreteMeasure::new(
        rational_list(field(doc, "points")?, "points")?,
        rational_list(field(doc, "weights")?, "weights")?,
    )
}

/// `tau0` may be omitted when `p_0 = 0`; it then defaults to a point mass
/// at zero, which no evaluation ever reads.
pub fn parse_params_doc(doc: &Value) -> Result<PtParams> {
    let p = rational_list(field(doc, "p")?, "p")?;
    let tau = match doc.get("tau") {
        Some(v) => rational_list(v, "tau")?,
        None => Vec::new(),
    };
    let tau0 = match doc.get("tau0") {
        Some(v) => parse_measure_doc(v)?,
        None if p.first().is_some_and(|p0| p0.is_zero()) => {
            DiscreteMeasure::point_mass(Rational::zero())?
        }
        None => return Err(malformed("tau0 is required when p_0 > 0")),
    };
    PtParams::new(p, tau, tau0)
}

/// Parses a function document. The family comes from `hint`, else from a
/// `"family"` field, else from the shape (`mix`, `signed`, `x`, `p`).
pub fn parse_fn_doc(doc: &Value, hint: Option<Family>) -> Result<ProbFnSpec> {
    let family = match (hint, doc.get("family")) {
        (Some(f), _) => f,
        (None, Some(Value::String(s))) => s.parse()?,
        (None, Some(v)) => return Err(malformed(format!("bad family tag {v}"))),
        (None, None) if doc.get("mix").is_some() => Family::Mixture,
        (None, None) if doc.get("signed").is_some() => Family::Signed,
        (None, None) if doc.get("p").is_some() => Family::Vpt,
        (None, None) => {
            return Err(malformed(
                "cannot tell the family; add a \"family\" field",
            ))
        }
    };
    match family {
        Family::Wx => Ok(ProbFnSpec::Wx(parse_simplex_doc(doc)?)),
        Family::Zx => Ok(ProbFnSpec::Zx(parse_simplex_doc(doc)?)),
        Family::Vpt => Ok(ProbFnSpec::Vpt(parse_params_doc(doc)?)),
        Family::Vptn => {
            let params = parse_params_doc(doc)?;
            let n = match doc.get("n") {
                Some(v) => v
                    .as_u64()
                    .ok_or_else(|| malformed("n must be a non-negative integer"))?
                    as usize,
                None => params.colors(),
            };
            Ok(ProbFnSpec::Vptn(params, n))
        }
        Family::Mixture | Family::Signed => {
            let (key, wkey) = if family == Family::Mixture {
                ("mix", "w")
            } else {
                ("signed", "c")
            };
            let parts = field(doc, key)?
                .as_array()
                .ok_or_else(|| malformed(format!("{key} must be an array")))?
                .iter()
                .map(|item| {
                    let w = rational(field(item, wkey)?, wkey)?;
                    let sub = parse_fn_doc(field(item, "fn")?, None)?;
                    Ok((w, sub))
                })
                .collect::<Result<Vec<_>>>()?;
            if family == Family::Mixture {
                if parts.is_empty() {
                    return Err(malformed("empty mixture"));
                }
                if parts.iter().any(|(w, _)| w < &Rational::zero()) {
                    return Err(malformed("negative mixture weight"));
                }
                Ok(ProbFnSpec::Mixture(parts))
            } else {
                ProbFnSpec::signed(parts)
            }
        }
    }
}
