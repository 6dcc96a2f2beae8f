//! Evaluable probability functions on state descriptions.
//!
//! Families:
//! - `w_x`, the product function of a point `x` of the atom simplex;
//! - `v^{p,τ}`, the colour-sum building blocks;
//! - `v^{p,τ}_n`, the finitary form written as a combination of `w_x`'s;
//! - `z_x`, the average of `w_{σx}` over spectrum-preserving `σ`;
//! - finite mixtures and signed combinations of the above.
//!
//! All values are exact rationals.

mod compiled;
mod doc;
mod eval;

pub use compiled::Evaluator;
pub use doc::{parse_fn_doc, parse_measure_doc, parse_params_doc, parse_simplex_doc, Family};
pub use eval::{
    e_of_p_vector, eval_qf, jpt_eval, mixture_eval, moment, restricted_eval, sentence_models,
    vpt_eval, vptn_eval, vptn_factor, wx_eval, zx_eval,
};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::perms::AtomPermutation;
use crate::rational::{format_rational, in_unit_interval, list_to_json, Rational};

/// A point of the atom simplex `D_{2^q}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplexVector {
    q: usize,
    x: Vec<Rational>,
}

impl SimplexVector {
    pub fn new(x: Vec<Rational>) -> Result<Self> {
        let len = x.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidSimplex(format!(
                "length {len} is not 2^q for any q >= 1"
            )));
        }
        if let Some(neg) = x.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidSimplex(format!(
                "negative entry {}",
                format_rational(neg)
            )));
        }
        let total: Rational = x.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidSimplex(format!(
                "entries sum to {}",
                format_rational(&total)
            )));
        }
        Ok(SimplexVector {
            q: len.trailing_zeros() as usize,
            x,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self) -> &[Rational] {
        &self.x
    }

    /// Entry for atom `index` (1-based).
    pub fn get(&self, index: usize) -> &Rational {
        &self.x[index - 1]
    }

    /// `(σ·x)_i = x_{σ⁻¹(i)}`.
    pub fn permuted(&self, sigma: &AtomPermutation) -> SimplexVector {
        let mut y = vec![Rational::zero(); self.x.len()];
        for (i, xi) in self.x.iter().enumerate() {
            y[sigma.apply(i + 1) - 1] = xi.clone();
        }
        SimplexVector { q: self.q, x: y }
    }

    /// `(1/|G|) Σ_{σ ∈ G} w_{σx}` as an explicit mixture.
    pub fn symmetrized(&self, group: &[AtomPermutation]) -> Result<ProbFnSpec> {
        if group.is_empty() {
            return Err(Error::MalformedSpec("empty permutation group".into()));
        }
        if let Some(bad) = group.iter().find(|g| g.q() != self.q) {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: bad.q(),
            });
        }
        let w = Rational::new(1.into(), group.len().into());
        Ok(ProbFnSpec::Mixture(
            group
                .iter()
                .map(|g| (w.clone(), ProbFnSpec::Wx(self.permuted(g))))
                .collect(),
        ))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "x": list_to_json(&self.x) })
    }
}

/// A finitely supported probability measure on `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscreteMeasure {
    points: Vec<Rational>,
    weights: Vec<Rational>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Rational>, weights: Vec<Rational>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} points with {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !in_unit_interval(p)) {
            return Err(Error::InvalidMeasure(format!(
                "point {} outside [0,1]",
                format_rational(p)
            )));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidMeasure(format!(
                    "repeated point {}",
                    format_rational(p)
                )));
            }
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {}",
                format_rational(&total)
            )));
        }
        Ok(DiscreteMeasure { points, weights })
    }

    pub fn point_mass(point: Rational) -> Result<Self> {
        DiscreteMeasure::new(vec![point], vec![Rational::one()])
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "points": list_to_json(&self.points),
            "weights": list_to_json(&self.weights),
        })
    }
}

/// The parameter pack `⟨p̄, τ̄⟩`: `p_0..p_N`, `τ_1..τ_N` and the measure `τ_0`.
///
/// Construction sorts the coloured pairs `(p_i, τ_i)`, `i ≥ 1`, into
/// descending `p` order (ties by ascending `τ`). Every evaluation is
/// invariant under jointly permuting these pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PtParams {
    p: Vec<Rational>,
    tau: Vec<Rational>,
    tau0: DiscreteMeasure,
}

impl PtParams {
    pub fn new(p: Vec<Rational>, tau: Vec<Rational>, tau0: DiscreteMeasure) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParams("p must contain at least p_0".into()));
        }
        if tau.len() + 1 != p.len() {
            return Err(Error::InvalidParams(format!(
                "{} weights p_0..p_N need {} tau values, got {}",
                p.len(),
                p.len() - 1,
                tau.len()
            )));
        }
        if let Some(neg) = p.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidParams(format!(
                "negative weight {}",
                format_rational(neg)
            )));
        }
        let total: Rational = p.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParams(format!(
                "p sums to {}",
                format_rational(&total)
            )));
        }
        if let Some(t) = tau.iter().find(|t| !in_unit_interval(t)) {
            return Err(Error::InvalidParams(format!(
                "tau value {} outside [0,1]",
                format_rational(t)
            )));
        }
        let mut pairs: Vec<(Rational, Rational)> =
            p[1..].iter().cloned().zip(tau.iter().cloned()).collect();
        pairs.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut p_sorted = vec![p[0].clone()];
        let mut tau_sorted = Vec::with_capacity(tau.len());
        for (pi, ti) in pairs {
            p_sorted.push(pi);
            tau_sorted.push(ti);
        }
        Ok(PtParams {
            p: p_sorted,
            tau: tau_sorted,
            tau0,
        })
    }

    /// Number `N` of non-zero colours.
    pub fn colors(&self) -> usize {
        self.tau.len()
    }

    /// `p_0..p_N`.
    pub fn p(&self) -> &[Rational] {
        &self.p
    }

    /// `τ_1..τ_N`.
    pub fn tau(&self) -> &[Rational] {
        &self.tau
    }

    pub fn tau0(&self) -> &DiscreteMeasure {
        &self.tau0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": list_to_json(&self.p),
            "tau": list_to_json(&self.tau),
            "tau0": self.tau0.to_json(),
        })
    }
}

/// A tagged description of an evaluable probability function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProbFnSpec {
    Wx(SimplexVector),
    Vpt(PtParams),
    /// `v^{p,τ}_n` with the given `n`.
    Vptn(PtParams, usize),
    Zx(SimplexVector),
    /// Convex combination. Weights are expected to be non-negative and sum
    /// to one; a bad total is reported by the axiom checker rather than
    /// rejected here.
    Mixture(Vec<(Rational, ProbFnSpec)>),
    /// Affine combination, coefficients summing to one.
    Signed(Vec<(Rational, ProbFnSpec)>),
}

impl ProbFnSpec {
    /// A mixture whose weights are checked to be non-negative and sum to one.
    pub fn mixture(parts: Vec<(Rational, ProbFnSpec)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::MalformedSpec("empty mixture".into()));
        }
        if parts.iter().any(|(w, _)| w.is_negative()) {
            return Err(Error::MalformedSpec("negative mixture weight".into()));
        }
        let total: Rational = parts.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::MalformedSpec(format!(
                "mixture weights sum to {}",
                format_rational(&total)
            )));
        }
        Ok(ProbFnSpec::Mixture(parts))
    }

    pub fn signed(parts: Vec<(Rational, ProbFnSpec)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::MalformedSpec("empty signed combination".into()));
        }
        let total: Rational = parts.iter().map(|(w, _)| w).sum();
        if !total.is_one() {
            return Err(Error::MalformedSpec(format!(
                "signed coefficients sum to {}",
                format_rational(&total)
            )));
        }
        Ok(ProbFnSpec::Signed(parts))
    }

    /// Structural checks made before every evaluation.
    pub fn validate(&self) -> Result<()> {
        match self {
            ProbFnSpec::Mixture(parts) => {
                if parts.is_empty() {
                    return Err(Error::MalformedSpec("empty mixture".into()));
                }
                if parts.iter().any(|(w, _)| w.is_negative()) {
                    return Err(Error::MalformedSpec("negative mixture weight".into()));
                }
                parts.iter().try_for_each(|(_, s)| s.validate())
            }
            ProbFnSpec::Signed(parts) => {
                if parts.is_empty() {
                    return Err(Error::MalformedSpec("empty signed combination".into()));
                }
                parts.iter().try_for_each(|(_, s)| s.validate())
            }
            _ => Ok(()),
        }
    }

    /// True when the parameters do not depend on the language: one member
    /// per `L_q`.
    pub fn is_language_family(&self) -> bool {
        match self {
            ProbFnSpec::Vpt(_) | ProbFnSpec::Vptn(..) => true,
            ProbFnSpec::Wx(_) | ProbFnSpec::Zx(_) => false,
            ProbFnSpec::Mixture(parts) | ProbFnSpec::Signed(parts) => {
                parts.iter().all(|(_, s)| s.is_language_family())
            }
        }
    }

    /// The language fixed by the parameters, if any (`w_x` and `z_x` only).
    pub fn fixed_q(&self) -> Option<usize> {
        match self {
            ProbFnSpec::Wx(x) | ProbFnSpec::Zx(x) => Some(x.q()),
            ProbFnSpec::Vpt(_) | ProbFnSpec::Vptn(..) => None,
            ProbFnSpec::Mixture(parts) | ProbFnSpec::Signed(parts) => {
                parts.iter().find_map(|(_, s)| s.fixed_q())
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ProbFnSpec::Wx(_) => "wx",
            ProbFnSpec::Vpt(_) => "vpt",
            ProbFnSpec::Vptn(..) => "vptn",
            ProbFnSpec::Zx(_) => "zx",
            ProbFnSpec::Mixture(_) => "mixture",
            ProbFnSpec::Signed(_) => "signed",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        fn with_family(mut v: serde_json::Value, family: &str) -> serde_json::Value {
            v["family"] = json!(family);
            v
        }
        match self {
            ProbFnSpec::Wx(x) => with_family(x.to_json(), "wx"),
            ProbFnSpec::Zx(x) => with_family(x.to_json(), "zx"),
            ProbFnSpec::Vpt(p) => with_family(p.to_json(), "vpt"),
            ProbFnSpec::Vptn(p, n) => {
                let mut v = with_family(p.to_json(), "vptn");
                v["n"] = json!(n);
                v
            }
            ProbFnSpec::Mixture(parts) => json!({
                "mix": parts
                    .iter()
                    .map(|(w, s)| json!({ "w": format_rational(w), "fn": s.to_json() }))
                    .collect::<Vec<_>>()
            }),
            ProbFnSpec::Signed(parts) => json!({
                "signed": parts
                    .iter()
                    .map(|(c, s)| json!({ "c": format_rational(c), "fn": s.to_json() }))
                    .collect::<Vec<_>>()
            }),
        }
    }
}
