//! Bounded verification of the rational principles.
//!
//! Every checker walks its search space in a fixed order and reports the
//! first violation it meets:
//! - lengths ascending, state descriptions lexicographically by atom index;
//! - group elements lexicographically by their image;
//! - for SPx, each description is compared with the least member of its
//!   spectrum cell;
//! - for WIP, constant sets by size and then lexicographically, and sign
//!   patterns starting from all-positive.
//!
//! Witness values are recomputed through the plain evaluators before a
//! failure is reported.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lang::{atom_count, negated_in, QfSentence, StateDescription};
use crate::limits::Limits;
use crate::perms::{apply, px_group, AtomPermutation, ConstPermutation, Permutation};
use crate::prob::{eval_qf, mixture_eval, restricted_eval, Evaluator, ProbFnSpec};
use crate::rational::{format_rational, Rational};
use crate::spectra::{pspectrum, spec_perm_group, PSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Principle {
    Axioms,
    Ex,
    Px,
    Ax,
    SPx,
    Wip,
    UliConsistency,
}

impl Principle {
    pub fn name(self) -> &'static str {
        match self {
            Principle::Axioms => "Axioms",
            Principle::Ex => "Ex",
            Principle::Px => "Px",
            Principle::Ax => "Ax",
            Principle::SPx => "SPx",
            Principle::Wip => "WIP",
            Principle::UliConsistency => "ULiConsistency",
        }
    }
}

impl fmt::Display for Principle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Principle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "axioms" => Principle::Axioms,
            "ex" => Principle::Ex,
            "px" => Principle::Px,
            "ax" => Principle::Ax,
            "spx" => Principle::SPx,
            "wip" => Principle::Wip,
            "uli" | "uliconsistency" | "uli-consistency" => Principle::UliConsistency,
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown principle {other:?}"),
                })
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `w(theta) ≠ w(phi)` where the two should agree.
    Pair {
        theta: StateDescription,
        phi: StateDescription,
        theta_value: Rational,
        phi_value: Rational,
        permutation: Option<String>,
    },
    /// `w(theta ∧ phi) ≠ w(theta) · w(phi)`.
    Sentences {
        theta: QfSentence,
        phi: QfSentence,
        joint: Rational,
        product: Rational,
    },
    Negative {
        sd: StateDescription,
        value: Rational,
    },
    Normalization {
        length: usize,
        total: Rational,
    },
    Marginal {
        sd: StateDescription,
        value: Rational,
        extensions: Rational,
    },
    Restriction {
        sd: StateDescription,
        direct: Rational,
        restricted: Rational,
    },
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        let r = format_rational;
        match self {
            Witness::Pair {
                theta,
                phi,
                theta_value,
                phi_value,
                permutation,
            } => {
                let mut v = json!({
                    "theta": theta.to_string(),
                    "phi": phi.to_string(),
                    "theta_value": r(theta_value),
                    "phi_value": r(phi_value),
                });
                if let Some(p) = permutation {
                    v["permutation"] = json!(p);
                }
                v
            }
            Witness::Sentences {
                theta,
                phi,
                joint,
                product,
            } => json!({
                "theta": theta.to_string(),
                "phi": phi.to_string(),
                "joint": r(joint),
                "product": r(product),
            }),
            Witness::Negative { sd, value } => json!({"sd": sd.to_string(), "value": r(value)}),
            Witness::Normalization { length, total } => {
                json!({"length": length, "total": r(total)})
            }
            Witness::Marginal {
                sd,
                value,
                extensions,
            } => json!({
                "sd": sd.to_string(),
                "value": r(value),
                "extensions": r(extensions),
            }),
            Witness::Restriction {
                sd,
                direct,
                restricted,
            } => json!({
                "sd": sd.to_string(),
                "direct": r(direct),
                "restricted": r(restricted),
            }),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational;
        match self {
            Witness::Pair {
                theta,
                phi,
                theta_value,
                phi_value,
                permutation,
            } => {
                write!(f, "w({theta}) = {} but w({phi}) = {}", r(theta_value), r(phi_value))?;
                if let Some(p) = permutation {
                    write!(f, " under {p}")?;
                }
                Ok(())
            }
            Witness::Sentences {
                theta,
                phi,
                joint,
                product,
            } => write!(
                f,
                "w(({theta}) & ({phi})) = {} but w({theta})·w({phi}) = {}",
                r(joint),
                r(product)
            ),
            Witness::Negative { sd, value } => write!(f, "w({sd}) = {} < 0", r(value)),
            Witness::Normalization { length, total } => {
                write!(f, "values at length {length} sum to {}", r(total))
            }
            Witness::Marginal {
                sd,
                value,
                extensions,
            } => write!(
                f,
                "w({sd}) = {} but its one-constant extensions sum to {}",
                r(value),
                r(extensions)
            ),
            Witness::Restriction {
                sd,
                direct,
                restricted,
            } => write!(
                f,
                "w({sd}) = {} directly but {} by restriction",
                r(direct),
                r(restricted)
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub q: usize,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_large: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicates_per_side: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constants_per_side: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipleReport {
    pub principle: Principle,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub bounds: Bounds,
}

impl PrincipleReport {
    fn pass(principle: Principle, bounds: Bounds) -> Self {
        PrincipleReport {
            principle,
            verdict: Verdict::Pass,
            witness: None,
            bounds,
        }
    }

    fn fail(principle: Principle, bounds: Bounds, witness: Witness) -> Self {
        PrincipleReport {
            principle,
            verdict: Verdict::Fail,
            witness: Some(witness),
            bounds,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "principle": self.principle.name(),
            "verdict": self.verdict.name(),
            "witness": self.witness.as_ref().map(Witness::to_json),
            "bounds": serde_json::to_value(&self.bounds).expect("bounds serialize"),
        })
    }
}

impl fmt::Display for PrincipleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.principle, self.verdict.name())?;
        if let Some(w) = &self.witness {
            write!(f, " ({w})")?;
        }
        Ok(())
    }
}

/// Values of a function on every state description of lengths `0..=n`, stored as
/// integer numerators over one common denominator per length.
#[derive(Debug, Clone)]
pub struct ValueTable {
    q: usize,
    levels: Vec<(BigInt, Vec<BigInt>)>,
}

impl ValueTable {
    pub fn build(spec: &ProbFnSpec, q: usize, n: usize, limits: &Limits) -> Result<Self> {
        let evaluator = Evaluator::new(spec, q, limits)?;
        let mut levels = Vec::with_capacity(n + 1);
        for len in 0..=n {
            let values = StateDescription::enumerate(q, len, limits)?
                .map(|sd| evaluator.eval(&sd))
                .collect::<Result<Vec<Rational>>>()?;
            let denom = values
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let numer = values
                .iter()
                .map(|v| v.numer() * (&denom / v.denom()))
                .collect();
            levels.push((denom, numer));
        }
        Ok(ValueTable { q, levels })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn value(&self, sd: &StateDescription) -> Rational {
        let (d, num) = &self.levels[sd.len()];
        Rational::new(num[sd.code()].clone(), d.clone())
    }

    fn numer(&self, len: usize, code: usize) -> &BigInt {
        &self.levels[len].1[code]
    }

    fn denom(&self, len: usize) -> &BigInt {
        &self.levels[len].0
    }

    /// Sum over the product set `choices[0] × … × choices[m−1]` of
    /// descriptions of length `m`, as a numerator over `denom(m)`.
    fn product_set_numer(&self, choices: &[Vec<usize>]) -> BigInt {
        let k = atom_count(self.q);
        let m = choices.len();
        let mut sum = BigInt::zero();
        if choices.iter().any(Vec::is_empty) {
            return sum;
        }
        let mut idx = vec![0usize; m];
        loop {
            let code = idx
                .iter()
                .zip(choices)
                .fold(0usize, |acc, (&i, c)| acc * k + (c[i] - 1));
            sum += self.numer(m, code);
            let mut j = m;
            loop {
                if j == 0 {
                    return sum;
                }
                j -= 1;
                if idx[j] + 1 < choices[j].len() {
                    idx[j] += 1;
                    break;
                }
                idx[j] = 0;
            }
        }
    }
}

fn confirm_pair(
    spec: &ProbFnSpec,
    theta: StateDescription,
    phi: StateDescription,
    permutation: Option<String>,
    limits: &Limits,
) -> Result<Witness> {
    let theta_value = mixture_eval(spec, &theta, limits)?;
    let phi_value = mixture_eval(spec, &phi, limits)?;
    if theta_value == phi_value {
        return Err(Error::Verification(format!(
            "witness {theta} / {phi} does not re-evaluate to an inequality"
        )));
    }
    Ok(Witness::Pair {
        theta,
        phi,
        theta_value,
        phi_value,
        permutation,
    })
}

/// Non-negativity, total mass one at every length, and
/// `w(sd) = Σ_α w(sd ∧ α(a_{m+1}))` between consecutive lengths.
pub fn check_axioms(spec: &ProbFnSpec, q: usize, n: usize, limits: &Limits) -> Result<PrincipleReport> {
    let table = ValueTable::build(spec, q, n, limits)?;
    let bounds = Bounds {
        q,
        n,
        ..Bounds::default()
    };
    let k = atom_count(q);
    for len in 0..=n {
        for sd in StateDescription::enumerate(q, len, limits)? {
            if table.numer(len, sd.code()).is_negative() {
                let value = mixture_eval(spec, &sd, limits)?;
                return Ok(PrincipleReport::fail(
                    Principle::Axioms,
                    bounds,
                    Witness::Negative { sd, value },
                ));
            }
        }
        let total: BigInt = table.levels[len].1.iter().sum();
        if &total != table.denom(len) {
            let total = Rational::new(total, table.denom(len).clone());
            return Ok(PrincipleReport::fail(
                Principle::Axioms,
                bounds,
                Witness::Normalization { length: len, total },
            ));
        }
        if len == 0 {
            continue;
        }
        for sd in StateDescription::enumerate(q, len - 1, limits)? {
            let base = sd.code() * k;
            let ext: BigInt = (0..k).map(|h| table.numer(len, base + h)).sum();
            // value(sd) = ext / denom(len)
            if table.numer(len - 1, sd.code()) * table.denom(len) != &ext * table.denom(len - 1) {
                let value = mixture_eval(spec, &sd, limits)?;
                let extensions = (1..=k)
                    .map(|h| mixture_eval(spec, &sd.extended(h), limits))
                    .sum::<Result<Rational>>()?;
                return Ok(PrincipleReport::fail(
                    Principle::Axioms,
                    bounds,
                    Witness::Marginal {
                        sd,
                        value,
                        extensions,
                    },
                ));
            }
        }
    }
    Ok(PrincipleReport::pass(Principle::Axioms, bounds))
}

/// The atom permutations tried for Ax: the whole symmetric group for
/// `q ≤ 2`; for larger `q` the spectrum-preserving group (when it is small
/// enough to list) followed by every atom transposition, in that order.
pub fn ax_permutations(q: usize, limits: &Limits) -> Result<Vec<AtomPermutation>> {
    let k = atom_count(q);
    if q <= 2 {
        return Permutation::all(k)
            .map(|p| AtomPermutation::new(q, p))
            .collect();
    }
    let mut out = if q <= limits.group_q_max.min(3) {
        spec_perm_group(q, limits)?
    } else {
        Vec::new()
    };
    for a in 1..=k {
        for b in a + 1..=k {
            let t = AtomPermutation::new(q, Permutation::transposition(k, a, b)?)?;
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Invariance under constant permutations (Ex), predicate permutations (Px),
/// atom permutations (Ax), or equality on spectrum cells (SPx).
pub fn check_invariance(
    spec: &ProbFnSpec,
    principle: Principle,
    q: usize,
    n: usize,
    limits: &Limits,
) -> Result<PrincipleReport> {
    let table = ValueTable::build(spec, q, n, limits)?;
    check_invariance_on(spec, &table, principle, n, limits)
}

/// As [`check_invariance`], reusing a value table that covers length `n`.
pub fn check_invariance_on(
    spec: &ProbFnSpec,
    table: &ValueTable,
    principle: Principle,
    n: usize,
    limits: &Limits,
) -> Result<PrincipleReport> {
    let q = table.q();
    if n > table.max_len() {
        return Err(Error::Bounds(format!(
            "value table only covers lengths up to {}",
            table.max_len()
        )));
    }
    let mut bounds = Bounds {
        q,
        n,
        ..Bounds::default()
    };
    match principle {
        Principle::Ex => {
            for len in 0..=n {
                let perms: Vec<ConstPermutation> = Permutation::all(len).map(ConstPermutation).collect();
                limits.check_count(
                    perms.len() as u64 * atom_count(q).pow(len as u32) as u64,
                    "constant permutation checks",
                )?;
                bounds.group_size = Some(perms.len());
                for sd in StateDescription::enumerate(q, len, limits)? {
                    let v = table.numer(len, sd.code());
                    for cp in &perms {
                        let image = apply(&sd, None, Some(cp))?;
                        if table.numer(len, image.code()) != v {
                            let w = confirm_pair(spec, sd, image, Some(cp.0.to_string()), limits)?;
                            return Ok(PrincipleReport::fail(principle, bounds, w));
                        }
                    }
                }
            }
            Ok(PrincipleReport::pass(principle, bounds))
        }
        Principle::Px | Principle::Ax => {
            let group = if principle == Principle::Px {
                let mut g = px_group(q);
                g.sort_by(|a, b| a.perm().image().cmp(b.perm().image()));
                g
            } else {
                ax_permutations(q, limits)?
            };
            bounds.group_size = Some(group.len());
            for len in 0..=n {
                for sd in StateDescription::enumerate(q, len, limits)? {
                    let v = table.numer(len, sd.code());
                    for ap in &group {
                        let image = apply(&sd, Some(ap), None)?;
                        if table.numer(len, image.code()) != v {
                            let w = confirm_pair(spec, sd, image, Some(ap.to_string()), limits)?;
                            return Ok(PrincipleReport::fail(principle, bounds, w));
                        }
                    }
                }
            }
            Ok(PrincipleReport::pass(principle, bounds))
        }
        Principle::SPx => {
            for len in 0..=n {
                let mut leaders: std::collections::HashMap<PSpectrum, StateDescription> =
                    std::collections::HashMap::new();
                for sd in StateDescription::enumerate(q, len, limits)? {
                    let spectrum = pspectrum(&sd);
                    match leaders.get(&spectrum) {
                        None => {
                            leaders.insert(spectrum, sd);
                        }
                        Some(leader) => {
                            if table.numer(len, leader.code()) != table.numer(len, sd.code()) {
                                let w = confirm_pair(spec, leader.clone(), sd, None, limits)?;
                                return Ok(PrincipleReport::fail(principle, bounds, w));
                            }
                        }
                    }
                }
            }
            Ok(PrincipleReport::pass(principle, bounds))
        }
        other => Err(Error::Bounds(format!("{other} is not an invariance principle"))),
    }
}

/// SPx restricted to one given pair of descriptions with equal spectra.
pub fn check_spx_pair(
    spec: &ProbFnSpec,
    theta: &StateDescription,
    phi: &StateDescription,
    limits: &Limits,
) -> Result<PrincipleReport> {
    if theta.q() != phi.q() || theta.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            found: phi.len(),
        });
    }
    if pspectrum(theta) != pspectrum(phi) {
        return Err(Error::Bounds(format!(
            "{theta} and {phi} have different spectra"
        )));
    }
    let bounds = Bounds {
        q: theta.q(),
        n: theta.len(),
        ..Bounds::default()
    };
    let a = mixture_eval(spec, theta, limits)?;
    let b = mixture_eval(spec, phi, limits)?;
    if a == b {
        return Ok(PrincipleReport::pass(Principle::SPx, bounds));
    }
    Ok(PrincipleReport::fail(
        Principle::SPx,
        bounds,
        Witness::Pair {
            theta: theta.clone(),
            phi: phi.clone(),
            theta_value: a,
            phi_value: b,
            permutation: None,
        },
    ))
}

/// Size limits for the WIP search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WipBounds {
    pub predicates_per_side: usize,
    pub constants_per_side: usize,
    /// Constants are drawn from `a_1..a_pool`.
    pub constant_pool: usize,
}

impl Default for WipBounds {
    fn default() -> Self {
        WipBounds {
            predicates_per_side: 2,
            constants_per_side: 2,
            constant_pool: 4,
        }
    }
}

fn subsets_by_size(pool: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(pool) {
        let mut cur: Vec<usize> = (1..=size).collect();
        loop {
            out.push(cur.clone());
            let Some(i) = (0..size).rev().find(|&i| cur[i] < pool - (size - 1 - i)) else {
                break;
            };
            cur[i] += 1;
            for j in i + 1..size {
                cur[j] = cur[j - 1] + 1;
            }
        }
    }
    out
}

/// Full literal conjunctions over `preds × consts`; sign pattern bit set
/// means negated, so the all-positive pattern comes first.
fn literal_conjunctions(preds: &[usize], consts: &[usize]) -> Vec<Vec<(usize, usize, bool)>> {
    let cells: Vec<(usize, usize)> = consts
        .iter()
        .flat_map(|&c| preds.iter().map(move |&p| (p, c)))
        .collect();
    (0u64..1 << cells.len())
        .map(|mask| {
            cells
                .iter()
                .enumerate()
                .map(|(i, &(p, c))| (p, c, mask >> (cells.len() - 1 - i) & 1 == 0))
                .collect()
        })
        .collect()
}

/// Weak irrelevance: with the predicates split into a lower and an upper
/// half (each capped at `predicates_per_side`), every full literal
/// conjunction `θ` over the lower half and constants `C`, and `φ` over the
/// upper half and disjoint constants `C'`, satisfies
/// `w(θ ∧ φ) = w(θ) · w(φ)`.
pub fn check_wip(
    spec: &ProbFnSpec,
    q: usize,
    wb: &WipBounds,
    limits: &Limits,
) -> Result<PrincipleReport> {
    if q < 2 {
        return Err(Error::Bounds("WIP needs at least two predicates".into()));
    }
    let half = q / 2;
    let lower: Vec<usize> = (1..=half).take(wb.predicates_per_side).collect();
    let upper: Vec<usize> = (half + 1..=q).take(wb.predicates_per_side).collect();
    let bounds = Bounds {
        q,
        n: wb.constant_pool,
        predicates_per_side: Some(wb.predicates_per_side),
        constants_per_side: Some(wb.constants_per_side),
        ..Bounds::default()
    };
    let table = ValueTable::build(spec, q, wb.constant_pool, limits)?;
    let k = atom_count(q);
    let subsets = subsets_by_size(wb.constant_pool, wb.constants_per_side);
    // Atoms allowed for each constant a_1..a_m by a literal list.
    let choices = |lits: &[(usize, usize, bool)], m: usize| -> Vec<Vec<usize>> {
        (1..=m)
            .map(|c| {
                (1..=k)
                    .filter(|&h| {
                        lits.iter()
                            .all(|&(p, cc, pos)| cc != c || pos != negated_in(q, h, p))
                    })
                    .collect()
            })
            .collect()
    };
    let value = |lits: &[(usize, usize, bool)]| -> Rational {
        let m = lits.iter().map(|l| l.1).max().unwrap_or(0);
        Rational::new(
            table.product_set_numer(&choices(lits, m)),
            table.denom(m).clone(),
        )
    };
    for c1 in &subsets {
        for c2 in &subsets {
            if c1.iter().any(|c| c2.contains(c)) {
                continue;
            }
            let thetas = literal_conjunctions(&lower, c1);
            let phis = literal_conjunctions(&upper, c2);
            let phi_values: Vec<Rational> = phis.iter().map(|l| value(l)).collect();
            for theta in &thetas {
                let tv = value(theta);
                for (phi, pv) in phis.iter().zip(&phi_values) {
                    let joint_lits: Vec<_> = theta.iter().chain(phi).copied().collect();
                    let joint = value(&joint_lits);
                    if joint != &tv * pv {
                        let ts = QfSentence::conjunction(theta);
                        let ps = QfSentence::conjunction(phi);
                        let joint = eval_qf(spec, &ts.clone().and(ps.clone()), q, limits)?;
                        let product =
                            eval_qf(spec, &ts, q, limits)? * eval_qf(spec, &ps, q, limits)?;
                        if joint == product {
                            return Err(Error::Verification(format!(
                                "WIP witness {ts} / {ps} does not re-evaluate"
                            )));
                        }
                        return Ok(PrincipleReport::fail(
                            Principle::Wip,
                            bounds,
                            Witness::Sentences {
                                theta: ts,
                                phi: ps,
                                joint,
                                product,
                            },
                        ));
                    }
                }
            }
        }
    }
    Ok(PrincipleReport::pass(Principle::Wip, bounds))
}

/// Restriction from `L_{q_large}` agrees with direct evaluation on `L_{q_small}`.
pub fn check_uli_consistency(
    spec: &ProbFnSpec,
    q_small: usize,
    q_large: usize,
    n: usize,
    limits: &Limits,
) -> Result<PrincipleReport> {
    if !spec.is_language_family() {
        return Err(Error::UnsupportedFamily(format!(
            "{} parameters are tied to a single language",
            spec.family()
        )));
    }
    if q_large < q_small {
        return Err(Error::Bounds(format!(
            "q_large = {q_large} is smaller than q_small = {q_small}"
        )));
    }
    let bounds = Bounds {
        q: q_small,
        n,
        q_large: Some(q_large),
        ..Bounds::default()
    };
    let small = ValueTable::build(spec, q_small, n, limits)?;
    let large = ValueTable::build(spec, q_large, n, limits)?;
    let shift = q_large - q_small;
    let fan = 1usize << shift;
    for len in 0..=n {
        for sd in StateDescription::enumerate(q_small, len, limits)? {
            let choices: Vec<Vec<usize>> = sd
                .atoms()
                .iter()
                .map(|&h| (0..fan).map(|t| ((h - 1) << shift) + t + 1).collect())
                .collect();
            let restricted = Rational::new(large.product_set_numer(&choices), large.denom(len).clone());
            if restricted != small.value(&sd) {
                let direct = mixture_eval(spec, &sd, limits)?;
                let restricted = restricted_eval(spec, q_large, &sd, limits)?;
                if direct == restricted {
                    return Err(Error::Verification(format!(
                        "ULi witness {sd} does not re-evaluate"
                    )));
                }
                return Ok(PrincipleReport::fail(
                    Principle::UliConsistency,
                    bounds,
                    Witness::Restriction {
                        sd,
                        direct,
                        restricted,
                    },
                ));
            }
        }
    }
    Ok(PrincipleReport::pass(Principle::UliConsistency, bounds))
}

/// Runs every applicable checker: axioms, Ex, Px, Ax, SPx at `(q, n)`; WIP
/// when `q ≥ 2`; ULi consistency from `L_{q+1}` for language families.
pub fn classify(
    spec: &ProbFnSpec,
    q: usize,
    n: usize,
    limits: &Limits,
) -> Result<Vec<PrincipleReport>> {
    let table = ValueTable::build(spec, q, n, limits)?;
    let mut reports = vec![check_axioms(spec, q, n, limits)?];
    for p in [Principle::Ex, Principle::Px, Principle::Ax, Principle::SPx] {
        reports.push(check_invariance_on(spec, &table, p, n, limits)?);
    }
    if q >= 2 {
        reports.push(check_wip(spec, q, &WipBounds::default(), limits)?);
    }
    if spec.is_language_family() {
        reports.push(check_uli_consistency(spec, q, q + 1, n, limits)?);
    }
    Ok(reports)
}
