use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{DiscreteMeasure, ProbFnSpec, PtParams, SimplexVector};
use crate::error::{Error, Result};
use crate::lang::{atom_count, gamma_of, QfSentence, StateDescription};
use crate::limits::Limits;
use crate::rational::{format_rational, pow, Rational};
use crate::spectra::spec_perm_group;

/// `Σ_k w_k · t_k^a · (1 − t_k)^b`.
pub fn moment(m: &DiscreteMeasure, a: usize, b: usize) -> Rational {
    let one = Rational::one();
    m.points()
        .iter()
        .zip(m.weights())
        .map(|(t, w)| w * pow(t, a) * pow(&(&one - t), b))
        .sum()
}

fn check_dims(q: usize, sd: &StateDescription) -> Result<()> {
    if q != sd.q() {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: sd.q(),
        });
    }
    Ok(())
}

/// `∏_i x_{h_i}`.
pub fn wx_eval(x: &SimplexVector, sd: &StateDescription) -> Result<Rational> {
    check_dims(x.q(), sd)?;
    Ok(product_value(x.entries(), sd))
}

pub(crate) fn product_value(x: &[Rational], sd: &StateDescription) -> Rational {
    let mut acc = Rational::one();
    for &h in sd.atoms() {
        let v = &x[h - 1];
        if v.is_zero() {
            return Rational::zero();
        }
        acc *= v;
    }
    acc
}

/// Per-colour atom factors: `table[c][g]` is `b_{h,c}` for any atom `h` with
/// `γ(h) = g`.
fn b_table(params: &PtParams, q: usize) -> Vec<Vec<Rational>> {
    let one = Rational::one();
    let mut table = Vec::with_capacity(params.colors() + 1);
    table.push((0..=q).map(|g| moment(params.tau0(), g, q - g)).collect());
    for t in params.tau() {
        let u = &one - t;
        table.push((0..=q).map(|g| pow(t, g) * pow(&u, q - g)).collect());
    }
    table
}

/// The summand of `v^{p,τ}` for one colour sequence.
pub fn jpt_eval(params: &PtParams, sd: &StateDescription, colors: &[usize]) -> Result<Rational> {
    if colors.len() != sd.len() {
        return Err(Error::DimensionMismatch {
            expected: sd.len(),
            found: colors.len(),
        });
    }
    if let Some(&c) = colors.iter().find(|&&c| c > params.colors()) {
        return Err(Error::Bounds(format!(
            "colour {c} out of range 0..={}",
            params.colors()
        )));
    }
    let table = b_table(params, sd.q());
    let mut first_atom: Vec<Option<usize>> = vec![None; params.colors() + 1];
    let mut acc = Rational::one();
    for (&h, &c) in sd.atoms().iter().zip(colors) {
        let p = &params.p()[c];
        match (c, first_atom[c]) {
            (0, _) | (_, None) => {
                acc *= p * &table[c][gamma_of(h)];
                first_atom[c] = Some(h);
            }
            (_, Some(prev)) if prev == h => acc *= p,
            _ => return Ok(Rational::zero()),
        }
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// `v^{p,τ}` on a state description.
///
/// The value only depends on how many constants carry each atom. Each
/// non-zero colour either stays unused or claims a non-empty set of
/// constants sharing one atom; whatever is left takes colour 0. A dynamic
/// programme over the colours tracks the unclaimed counts per atom.
pub fn vpt_eval(params: &PtParams, sd: &StateDescription) -> Rational {
    let q = sd.q();
    let table = b_table(params, q);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &h in sd.atoms() {
        *counts.entry(h).or_default() += 1;
    }
    let groups: Vec<(usize, usize)> = counts.into_iter().collect();
    let mut states: HashMap<Vec<usize>, Rational> = HashMap::new();
    states.insert(groups.iter().map(|&(_, m)| m).collect(), Rational::one());
    for c in 1..=params.colors() {
        let p = &params.p()[c];
        if p.is_zero() {
            continue;
        }
        let mut next: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (state, val) in &states {
            *next.entry(state.clone()).or_insert_with(Rational::zero) += val;
            for (g, &(h, _)) in groups.iter().enumerate() {
                let r = state[g];
                let b = &table[c][gamma_of(h)];
                if r == 0 || b.is_zero() {
                    continue;
                }
                let mut pow_p = Rational::one();
                for s in 1..=r {
                    pow_p *= p;
                    let mut st = state.clone();
                    st[g] -= s;
                    let term = val * binomial(r, s) * &pow_p * b;
                    *next.entry(st).or_insert_with(Rational::zero) += term;
                }
            }
        }
        states = next;
    }
    let fresh: Vec<Rational> = groups
        .iter()
        .map(|&(h, _)| &params.p()[0] * &table[0][gamma_of(h)])
        .collect();
    states
        .iter()
        .map(|(state, val)| {
            state
                .iter()
                .zip(&fresh)
                .fold(val.clone(), |acc, (&r, f)| acc * pow(f, r))
        })
        .sum()
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// `e(p̄)` for a colour function `e` given by its values (1-based atoms).
///
/// `p` holds `p_1..p_n`; the residual mass `1 − Σ p_i` is spread by the
/// `τ_0` moments.
pub fn e_of_p_vector(
    q: usize,
    e: &[usize],
    p: &[Rational],
    tau0: &DiscreteMeasure,
) -> Result<Vec<Rational>> {
    if e.len() != p.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: p.len(),
        });
    }
    let total: Rational = p.iter().sum();
    let residual = Rational::one() - total;
    if residual < Rational::zero() {
        return Err(Error::InvalidParams(format!(
            "weights sum to {} > 1",
            format_rational(&(Rational::one() - &residual))
        )));
    }
    let mut x: Vec<Rational> = if residual.is_zero() {
        vec![Rational::zero(); atom_count(q)]
    } else {
        let per_level: Vec<Rational> = (0..=q).map(|g| moment(tau0, g, q - g)).collect();
        (1..=atom_count(q))
            .map(|s| &per_level[gamma_of(s)] * &residual)
            .collect()
    };
    for (&s, pi) in e.iter().zip(p) {
        x[s - 1] += pi;
    }
    Ok(x)
}

/// `∏_r τ_r^{γ(e(r))} (1 − τ_r)^{q − γ(e(r))}`.
pub fn vptn_factor(q: usize, e: &[usize], tau: &[Rational]) -> Rational {
    let one = Rational::one();
    let mut acc = Rational::one();
    for (&s, t) in e.iter().zip(tau) {
        let g = gamma_of(s);
        acc *= pow(t, g) * pow(&(&one - t), q - g);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// `p_1..p_n` and `τ_1..τ_n`, padded with zeros when fewer colours exist.
pub(crate) fn vptn_inputs(params: &PtParams, n: usize) -> (Vec<Rational>, Vec<Rational>) {
    let mut p: Vec<Rational> = params.p()[1..].iter().take(n).cloned().collect();
    let mut tau: Vec<Rational> = params.tau().iter().take(n).cloned().collect();
    p.resize(n, Rational::zero());
    tau.resize(n, Rational::zero());
    (p, tau)
}

/// Calls `f(e, factor)` for every colour function `e: {1..n} → atoms` with a
/// non-zero factor, in lexicographic order of `e`.
pub(crate) fn for_each_vptn_term(
    params: &PtParams,
    n: usize,
    q: usize,
    limits: &Limits,
    mut f: impl FnMut(&[usize], Rational) -> Result<()>,
) -> Result<()> {
    let k = atom_count(q);
    limits.check_power(k as u64, n, "colour functions")?;
    let (_, tau) = vptn_inputs(params, n);
    let mut e = vec![1usize; n];
    loop {
        let factor = vptn_factor(q, &e, &tau);
        if !factor.is_zero() {
            f(&e, factor)?;
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if e[i] < k {
                e[i] += 1;
                break;
            }
            e[i] = 1;
        }
    }
}

/// The finitary `v^{p,τ}_n`, as a combination of product functions.
pub fn vptn_eval(
    params: &PtParams,
    n: usize,
    sd: &StateDescription,
    limits: &Limits,
) -> Result<Rational> {
    let q = sd.q();
    let (p, _) = vptn_inputs(params, n);
    let mut sum = Rational::zero();
    for_each_vptn_term(params, n, q, limits, |e, factor| {
        let x = e_of_p_vector(q, e, &p, params.tau0())?;
        sum += factor * product_value(&x, sd);
        Ok(())
    })?;
    Ok(sum)
}

/// `z_x`: the average of `w_{σx}` over the spectrum-preserving group.
pub fn zx_eval(x: &SimplexVector, sd: &StateDescription, limits: &Limits) -> Result<Rational> {
    check_dims(x.q(), sd)?;
    let group = spec_perm_group(x.q(), limits)?;
    let mut sum = Rational::zero();
    for sigma in &group {
        sum += product_value(x.permuted(sigma).entries(), sd);
    }
    Ok(sum / Rational::from_integer(group.len().into()))
}

/// Evaluates any function on a state description.
pub fn mixture_eval(spec: &ProbFnSpec, sd: &StateDescription, limits: &Limits) -> Result<Rational> {
    spec.validate()?;
    eval_unchecked(spec, sd, limits)
}

fn eval_unchecked(spec: &ProbFnSpec, sd: &StateDescription, limits: &Limits) -> Result<Rational> {
    match spec {
        ProbFnSpec::Wx(x) => wx_eval(x, sd),
        ProbFnSpec::Zx(x) => zx_eval(x, sd, limits),
        ProbFnSpec::Vpt(params) => Ok(vpt_eval(params, sd)),
        ProbFnSpec::Vptn(params, n) => vptn_eval(params, *n, sd, limits),
        ProbFnSpec::Mixture(parts) | ProbFnSpec::Signed(parts) => {
            let mut sum = Rational::zero();
            for (w, sub) in parts {
                if !w.is_zero() {
                    sum += w * eval_unchecked(sub, sd, limits)?;
                }
            }
            Ok(sum)
        }
    }
}

/// All state descriptions of `L_q` on `a_1..a_m` that model `s`, where `m`
/// is the largest constant mentioned. Enumerates assignments to the
/// literals that occur in `s` and expands each satisfying one.
pub fn sentence_models(s: &QfSentence, q: usize, limits: &Limits) -> Result<Vec<StateDescription>> {
    limits.check_q(q)?;
    if s.max_predicate() > q {
        return Err(Error::Bounds(format!(
            "sentence mentions P{} but the language has {q} predicates",
            s.max_predicate()
        )));
    }
    let m = s.max_constant();
    let vars = s.literal_variables();
    limits.check_power(2, vars.len(), "literal assignments")?;
    let k = atom_count(q);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << vars.len()) {
        let value = |pred: usize, c: usize| {
            let i = vars.iter().position(|&v| v == (pred, c)).expect("known literal");
            mask >> i & 1 == 1
        };
        if !s.eval_with(&value) {
            continue;
        }
        // Atoms compatible with the fixed literals, per constant.
        let choices: Vec<Vec<usize>> = (1..=m)
            .map(|c| {
                (1..=k)
                    .filter(|&h| {
                        vars.iter().enumerate().all(|(i, &(pred, cc))| {
                            cc != c
                                || (mask >> i & 1 == 1)
                                    != crate::lang::negated_in(q, h, pred)
                        })
                    })
                    .collect()
            })
            .collect();
        let count = choices
            .iter()
            .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
        match count {
            Some(c) if c as u128 + out.len() as u128 <= limits.max_enum as u128 => {}
            _ => {
                return Err(Error::Guard(format!(
                    "sentence expansion exceeds {} state descriptions",
                    limits.max_enum
                )))
            }
        }
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; m];
        loop {
            let atoms = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
            out.push(StateDescription::from_parts_unchecked(q, atoms));
            let mut j = m;
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                if idx[j] + 1 < choices[j].len() {
                    idx[j] += 1;
                    break;
                }
                idx[j] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Probability of a quantifier-free sentence: the sum over its models.
pub fn eval_qf(spec: &ProbFnSpec, s: &QfSentence, q: usize, limits: &Limits) -> Result<Rational> {
    spec.validate()?;
    let mut sum = Rational::zero();
    for sd in sentence_models(s, q, limits)? {
        sum += eval_unchecked(spec, &sd, limits)?;
    }
    Ok(sum)
}

/// Value of `sd ∈ L_{q_target}` computed from the family member on the
/// larger language `L_{q_large}`, by summing over all extensions.
pub fn restricted_eval(
    spec: &ProbFnSpec,
    q_large: usize,
    sd: &StateDescription,
    limits: &Limits,
) -> Result<Rational> {
    if !spec.is_language_family() {
        return Err(Error::UnsupportedFamily(format!(
            "{} parameters are tied to a single language",
            spec.family()
        )));
    }
    spec.validate()?;
    limits.check_q(q_large)?;
    let q = sd.q();
    if q_large < q {
        return Err(Error::Bounds(format!(
            "cannot restrict from L_{q_large} to the larger L_{q}"
        )));
    }
    let shift = q_large - q;
    let fan = 1usize << shift;
    limits.check_power(fan as u64, sd.len(), "extensions")?;
    let n = sd.len();
    let mut t = vec![0usize; n];
    let mut sum = Rational::zero();
    loop {
        let atoms = sd
            .atoms()
            .iter()
            .zip(&t)
            .map(|(&h, &ti)| ((h - 1) << shift) + ti + 1)
            .collect();
        let ext = StateDescription::from_parts_unchecked(q_large, atoms);
        sum += eval_unchecked(spec, &ext, limits)?;
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(sum);
            }
            i -= 1;
            if t[i] + 1 < fan {
                t[i] += 1;
                break;
            }
            t[i] = 0;
        }
    }
}
