//! Writing `z_x` (and discrete mixtures of them) as `(1+λ)w₁ − λw₂` with
//! `w₁`, `w₂` convex mixtures of finitary building blocks `v^{p,τ}_n`.
//!
//! With `n = 2^q` and `p = x`, a building block expands as
//! `v^{p,τ}_n = Σ_e a(τ, γ∘e) · w_{e(p)}`, where the factor only sees the
//! negation-count profile `γ∘e ∈ {0..q}^n`. Grouping by profile gives a
//! square system in the profiles. Choosing one `τ` per profile so that its
//! matrix is regular isolates
//! `G(p) = Σ_{e : γ∘e = γ} w_{e(p)}`, the sum over level-preserving `e`.
//! `G` is in turn a positive combination of `z` at merged copies of `p`,
//! and a triangular solve over per-level set partitions recovers `z_x`
//! itself as `Σ_κ d_κ G(x^κ)`.
//!
//! The orbit classes of colour functions and their matrix are also provided.
//! That matrix only depends on a column's profile, so it has at most
//! `(q+1)^n` independent columns and is singular whenever there are more
//! classes than profiles (e.g. 136 classes against 81 profiles for `q = 2`).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{Error, Result};
use crate::lang::{atom_count, gamma_of, StateDescription};
use crate::limits::Limits;
use crate::linalg::RatMatrix;
use crate::prob::{
    e_of_p_vector, vptn_factor, DiscreteMeasure, Evaluator, ProbFnSpec, PtParams, SimplexVector,
};
use crate::rational::{format_rational, list_to_json, pow, Rational};
use crate::spectra::{gamma_levels, spec_perm_group};

/// A map `e: {1..n} → {1..2^q}`, stored as its values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorFunction {
    q: usize,
    values: Vec<usize>,
}

impl ColorFunction {
    pub fn new(q: usize, values: Vec<usize>) -> Result<Self> {
        let k = atom_count(q);
        if let Some(bad) = values.iter().find(|&&v| v == 0 || v > k) {
            return Err(Error::Bounds(format!("colour value {bad} outside 1..={k}")));
        }
        Ok(ColorFunction { q, values })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `γ∘e`.
    pub fn profile(&self) -> Vec<usize> {
        self.values.iter().map(|&v| gamma_of(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    pub representative: ColorFunction,
    pub size: usize,
}

/// Orbits of all colour functions under post-composition with the
/// spectrum-preserving group, in order of their lexicographically least
/// members (which are the representatives).
pub fn enumerate_classes(q: usize, n: usize, limits: &Limits) -> Result<Vec<OrbitClass>> {
    check_decompose_q(q, limits)?;
    let k = atom_count(q);
    let total = limits.check_power(k as u64, n, "colour functions")? as usize;
    let group = spec_perm_group(q, limits)?;
    let mut seen = vec![false; total];
    let mut classes = Vec::new();
    let mut values = vec![1usize; n];
    for code in 0..total {
        decode(code, k, &mut values);
        if seen[code] {
            continue;
        }
        let mut size = 0;
        for sigma in &group {
            let image: Vec<usize> = values.iter().map(|&v| sigma.apply(v)).collect();
            let c = encode(&image, k);
            if !seen[c] {
                seen[c] = true;
                size += 1;
            }
        }
        classes.push(OrbitClass {
            representative: ColorFunction {
                q,
                values: values.clone(),
            },
            size,
        });
    }
    Ok(classes)
}

fn decode(mut code: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % k + 1;
        code /= k;
    }
}

fn encode(values: &[usize], k: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * k + (v - 1))
}

fn check_decompose_q(q: usize, limits: &Limits) -> Result<()> {
    limits.check_q(q)?;
    if q > limits.decompose_q_max {
        return Err(Error::Guard(format!(
            "decomposition is limited to q <= {} (q = {q} requested)",
            limits.decompose_q_max
        )));
    }
    Ok(())
}

/// `e(p̄)` as a simplex vector.
pub fn e_of_p(e: &ColorFunction, p: &[Rational], tau0: &DiscreteMeasure) -> Result<SimplexVector> {
    SimplexVector::new(e_of_p_vector(e.q, &e.values, p, tau0)?)
}

/// `a(τ, π) = ∏_r τ_r^{π_r} (1 − τ_r)^{q − π_r}` for a profile `π`.
pub fn profile_factor(q: usize, profile: &[usize], tau: &[Rational]) -> Rational {
    let one = Rational::one();
    profile
        .iter()
        .zip(tau)
        .map(|(&g, t)| pow(t, g) * pow(&(&one - t), q - g))
        .product()
}

/// The class matrix: row `e` uses `taus[e]`, column `f` is evaluated at the
/// representative of class `f`.
pub fn build_matrix(classes: &[OrbitClass], taus: &[Vec<Rational>]) -> Result<RatMatrix> {
    if taus.len() != classes.len() {
        return Err(Error::DimensionMismatch {
            expected: classes.len(),
            found: taus.len(),
        });
    }
    let Some(first) = classes.first() else {
        return Ok(RatMatrix::zeros(0, 0));
    };
    let (q, n) = (first.representative.q, first.representative.n());
    for t in taus {
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.len(),
            });
        }
        if t.iter().any(|v| v.is_negative() || *v > Rational::one()) {
            return Err(Error::InvalidParams("tau entries must lie in [0,1]".into()));
        }
    }
    let rows = taus
        .iter()
        .map(|t| {
            classes
                .iter()
                .map(|f| vptn_factor(q, &f.representative.values, t))
                .collect()
        })
        .collect();
    RatMatrix::from_rows(rows)
}

/// How hard [`choose_regular_taus`] tries before giving up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Escalation exponents `g = 1..=max_exponent` are tried first.
    pub max_exponent: u32,
    /// Then this many seeded random tables.
    pub random_attempts: usize,
    /// Random entries are `k/d` with `2 <= d <= max_denominator`.
    pub max_denominator: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_exponent: 3,
            random_attempts: 4,
            max_denominator: 16,
        }
    }
}

/// `s^g / (s^g + (q − s)^g)`: distinct for distinct `s`, and equal to the
/// endpoints `0` and `1` at `s = 0` and `s = q`.
fn escalation_tau(q: usize, s: usize, g: u32) -> Rational {
    let a = BigInt::from(s).pow(g);
    let b = BigInt::from(q - s).pow(g);
    Rational::new(a.clone(), a + b)
}

fn escalation_row(q: usize, profile: &[usize], g: u32) -> Vec<Rational> {
    profile.iter().map(|&s| escalation_tau(q, s, g)).collect()
}

fn random_row(rng: &mut ChaCha8Rng, n: usize, max_den: u64) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let d = rng.gen_range(2..=max_den.max(2));
            let k = rng.gen_range(1..d);
            Rational::new(k.into(), d.into())
        })
        .collect()
}

/// Searches for one `τ` vector per row profile making the matrix `rows ×
/// columns` regular: the deterministic escalation tables first, then seeded
/// random rationals strictly inside `(0,1)`.
fn search<F>(
    row_profiles: &[Vec<usize>],
    q: usize,
    n: usize,
    seed: u64,
    budget: &SearchBudget,
    build: F,
) -> Result<(Vec<Vec<Rational>>, Rational)>
where
    F: Fn(&[Vec<Rational>]) -> Result<RatMatrix>,
{
    if row_profiles.is_empty() {
        return Err(Error::RegularitySearch {
            tried: "nothing (no rows)".into(),
        });
    }
    for g in 1..=budget.max_exponent {
        let taus: Vec<_> = row_profiles
            .iter()
            .map(|p| escalation_row(q, p, g))
            .collect();
        let det = build(&taus)?.determinant()?;
        if !det.is_zero() {
            return Ok((taus, det));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget.random_attempts {
        let taus: Vec<_> = row_profiles
            .iter()
            .map(|_| random_row(&mut rng, n, budget.max_denominator))
            .collect();
        let det = build(&taus)?.determinant()?;
        if !det.is_zero() {
            return Ok((taus, det));
        }
    }
    Err(Error::RegularitySearch {
        tried: format!(
            "escalation exponents 1..={} and {} random tables from seed {seed}",
            budget.max_exponent, budget.random_attempts
        ),
    })
}

/// A `τ` vector per class with a regular class matrix, and its determinant.
pub fn choose_regular_taus(
    classes: &[OrbitClass],
    q: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<(Vec<Vec<Rational>>, Rational)> {
    let n = classes.first().map_or(0, |c| c.representative.n());
    let profiles: Vec<Vec<usize>> = classes.iter().map(|c| c.representative.profile()).collect();
    search(&profiles, q, n, seed, budget, |taus| build_matrix(classes, taus))
}

/// All profiles `{0..q}^n` in lexicographic order.
pub fn profiles(q: usize, n: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let total = limits.check_power(q as u64 + 1, n, "profiles")? as usize;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; n];
    for code in 0..total {
        let mut c = code;
        for slot in cur.iter_mut().rev() {
            *slot = c % (q + 1);
            c /= q + 1;
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// The profile matrix, row `i` using `taus[i]`.
pub fn build_profile_matrix(
    q: usize,
    profiles: &[Vec<usize>],
    taus: &[Vec<Rational>],
) -> Result<RatMatrix> {
    if taus.len() != profiles.len() {
        return Err(Error::DimensionMismatch {
            expected: profiles.len(),
            found: taus.len(),
        });
    }
    RatMatrix::from_rows(
        taus.iter()
            .map(|t| profiles.iter().map(|p| profile_factor(q, p, t)).collect())
            .collect(),
    )
}

/// One coarsening `x ↦ x^κ`: each block of `κ` (a set partition inside each
/// negation level) is summed onto its least atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelPartition {
    /// `leader[s − 1]` is the least atom of the block containing atom `s`.
    leader: Vec<usize>,
}

impl LevelPartition {
    pub fn leaders(&self) -> &[usize] {
        &self.leader
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); x.len()];
        for (i, xi) in x.iter().enumerate() {
            y[self.leader[i] - 1] += xi;
        }
        y
    }

    fn blocks_in(&self, level: &[usize]) -> usize {
        level.iter().filter(|&&s| self.leader[s - 1] == s).count()
    }

    /// Every block of `self` lies inside a block of `other`.
    fn refines(&self, other: &LevelPartition) -> bool {
        (0..self.leader.len()).all(|i| {
            other.leader[i] == other.leader[self.leader[i] - 1]
        })
    }
}

/// Set partitions of each level, combined; the finest partition comes first.
fn level_partitions(q: usize) -> Vec<LevelPartition> {
    let k = atom_count(q);
    let mut out = vec![LevelPartition {
        leader: (1..=k).collect(),
    }];
    for level in gamma_levels(q) {
        let per_level = set_partitions(&level);
        let level = &level;
        out = out
            .into_iter()
            .flat_map(|base| {
                per_level.iter().map(move |assign| {
                    let mut leader = base.leader.clone();
                    for (&s, &l) in level.iter().zip(assign) {
                        leader[s - 1] = l;
                    }
                    LevelPartition { leader }
                })
            })
            .collect();
    }
    out
}

/// Partitions of `items` (ascending) as leader assignments; the all-singleton
/// partition is first.
fn set_partitions(items: &[usize]) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        cur.push(items[i]);
        rec(items, i + 1, cur, out);
        cur.pop();
        let mut leaders: Vec<usize> = cur.clone();
        leaders.sort_unstable();
        leaders.dedup();
        for l in leaders {
            cur.push(l);
            rec(items, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, &mut Vec::new(), &mut out);
    out
}

fn falling(n: usize, k: usize) -> BigInt {
    (n - k + 1..=n).fold(BigInt::one(), |acc, v| acc * BigInt::from(v))
}

/// Coefficients `d_κ` with `z_x = Σ_κ d_κ · G(x^κ)` for every `x`.
fn partition_coefficients(q: usize) -> Result<Vec<(LevelPartition, Rational)>> {
    let parts = level_partitions(q);
    let levels = gamma_levels(q);
    let m = parts.len();
    // G(x^κ) = Σ_{μ ⊒ κ} N(κ, μ) · z_{x^μ}
    let mut nmat = RatMatrix::zeros(m, m);
    for (i, kappa) in parts.iter().enumerate() {
        for (j, mu) in parts.iter().enumerate() {
            if !kappa.refines(mu) {
                continue;
            }
            let mut count = BigInt::one();
            for level in &levels {
                let size = level.len();
                let b = kappa.blocks_in(level);
                let k = mu.blocks_in(level);
                count *= falling(size, k) * BigInt::from(size).pow((size - b) as u32);
            }
            nmat.set(i, j, Rational::from_integer(count));
        }
    }
    let mut unit = vec![Rational::zero(); m];
    unit[0] = Rational::one();
    let d = nmat.transpose().solve_vec(&unit)?;
    Ok(parts.into_iter().zip(d).filter(|(_, c)| !c.is_zero()).collect())
}

/// A regular profile system for one `q`: the `τ` table, its determinant, and
/// the combined coefficients of every building block in the decomposition.
#[derive(Debug, Clone)]
pub struct TauTable {
    q: usize,
    n: usize,
    seed: u64,
    profiles: Vec<Vec<usize>>,
    taus: Vec<Vec<Rational>>,
    det: Rational,
    /// `(κ, row index f, coefficient)`; the block is `v^{x^κ, τ_f}_n`.
    terms: Vec<(LevelPartition, usize, Rational)>,
    lambda: Rational,
}

impl TauTable {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn profiles(&self) -> &[Vec<usize>] {
        &self.profiles
    }

    pub fn taus(&self) -> &[Vec<Rational>] {
        &self.taus
    }

    pub fn determinant(&self) -> &Rational {
        &self.det
    }

    /// `−Σ` of the negative coefficients. Depends on the table only.
    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Rational> {
        self.terms.iter().map(|(_, _, c)| c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "q": self.q,
            "n": self.n,
            "seed": self.seed,
            "det_A": format_rational(&self.det),
            "lambda": format_rational(&self.lambda),
            "rows": self.profiles.iter().zip(&self.taus).map(|(p, t)| json!({
                "profile": p,
                "tau": list_to_json(t),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Builds the regular profile system for `q` (with `n = 2^q`).
pub fn choose_regular_profile_taus(
    q: usize,
    seed: u64,
    budget: &SearchBudget,
    limits: &Limits,
) -> Result<TauTable> {
    check_decompose_q(q, limits)?;
    let n = atom_count(q);
    let profiles = profiles(q, n, limits)?;
    let (taus, det) = search(&profiles, q, n, seed, budget, |taus| {
        build_profile_matrix(q, &profiles, taus)
    })?;
    let matrix = build_profile_matrix(q, &profiles, &taus)?;
    let target: Vec<usize> = (1..=n).map(gamma_of).collect();
    let target_idx = profiles
        .iter()
        .position(|p| *p == target)
        .expect("identity profile is enumerated");
    let mut unit = vec![Rational::zero(); profiles.len()];
    unit[target_idx] = Rational::one();
    // Row `target` of A⁻¹.
    let row = matrix.transpose().solve_vec(&unit)?;
    let mut terms = Vec::new();
    for (kappa, d) in partition_coefficients(q)? {
        for (f, c) in row.iter().enumerate() {
            if !c.is_zero() {
                terms.push((kappa.clone(), f, &d * c));
            }
        }
    }
    let lambda = -terms
        .iter()
        .map(|(_, _, c)| c)
        .filter(|c| c.is_negative())
        .sum::<Rational>();
    Ok(TauTable {
        q,
        n,
        seed,
        profiles,
        taus,
        det,
        terms,
        lambda,
    })
}

/// One checked state description of the reconstruction identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateLine {
    pub sd: StateDescription,
    pub target: Rational,
    pub reconstructed: Rational,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub lambda: Rational,
    pub w1: ProbFnSpec,
    pub w2: ProbFnSpec,
    pub table: TauTable,
    pub verified_length: usize,
    /// Some `x` has repeated values inside a negation level, so several
    /// building blocks coincide. The identity still holds.
    pub degenerate: bool,
    pub certificate: Vec<CertificateLine>,
}

impl DecompositionResult {
    pub fn det_a(&self) -> &Rational {
        self.table.determinant()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "lambda": format_rational(&self.lambda),
            "det_A": format_rational(self.det_a()),
            "tau_table": self.table.to_json(),
            "w1": self.w1.to_json(),
            "w2": self.w2.to_json(),
            "verified_length": self.verified_length,
            "degenerate_p": self.degenerate,
        })
    }

    pub fn certificate_json(&self) -> serde_json::Value {
        json!(self
            .certificate
            .iter()
            .map(|l| json!({
                "sd": l.sd.to_string(),
                "z": format_rational(&l.target),
                "reconstructed": format_rational(&l.reconstructed),
            }))
            .collect::<Vec<_>>())
    }
}

fn is_degenerate(q: usize, x: &SimplexVector) -> bool {
    gamma_levels(q).iter().any(|level| {
        level.iter().enumerate().any(|(i, &a)| {
            level[..i].iter().any(|&b| x.get(a) == x.get(b))
        })
    })
}

/// Decomposes `z_x` after building the profile table for `x`'s language.
pub fn decompose_z(
    x: &SimplexVector,
    seed: u64,
    verify_length: usize,
    limits: &Limits,
) -> Result<DecompositionResult> {
    let table = choose_regular_profile_taus(x.q(), seed, &SearchBudget::default(), limits)?;
    decompose_z_with(x, &table, verify_length, limits)
}

pub fn decompose_z_with(
    x: &SimplexVector,
    table: &TauTable,
    verify_length: usize,
    limits: &Limits,
) -> Result<DecompositionResult> {
    decompose_mixture_with(&[(Rational::one(), x.clone())], table, verify_length, limits)
}

/// Decomposes `Σ_k μ_k z_{x_k}` after building the profile table.
pub fn decompose_mixture(
    mix: &[(Rational, SimplexVector)],
    seed: u64,
    verify_length: usize,
    limits: &Limits,
) -> Result<DecompositionResult> {
    let q = mix
        .first()
        .ok_or_else(|| Error::MalformedSpec("empty mixture".into()))?
        .1
        .q();
    let table = choose_regular_profile_taus(q, seed, &SearchBudget::default(), limits)?;
    decompose_mixture_with(mix, &table, verify_length, limits)
}

/// Decomposes `Σ_k μ_k z_{x_k}` with a fixed table, so `λ` is the table's.
pub fn decompose_mixture_with(
    mix: &[(Rational, SimplexVector)],
    table: &TauTable,
    verify_length: usize,
    limits: &Limits,
) -> Result<DecompositionResult> {
    if mix.is_empty() {
        return Err(Error::MalformedSpec("empty mixture".into()));
    }
    if mix.iter().any(|(w, _)| w.is_negative()) {
        return Err(Error::MalformedSpec("negative mixture weight".into()));
    }
    let total: Rational = mix.iter().map(|(w, _)| w).sum();
    if !total.is_one() {
        return Err(Error::MalformedSpec(format!(
            "mixture weights sum to {}",
            format_rational(&total)
        )));
    }
    let q = table.q;
    if let Some((_, bad)) = mix.iter().find(|(_, x)| x.q() != q) {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: bad.q(),
        });
    }
    let tau0 = DiscreteMeasure::point_mass(Rational::zero())?;
    let lambda = table.lambda.clone();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (mu, x) in mix {
        if mu.is_zero() {
            continue;
        }
        for (kappa, f, c) in &table.terms {
            let mut p = vec![Rational::zero()];
            p.extend(kappa.apply(x.entries()));
            let params = PtParams::new(p, table.taus[*f].clone(), tau0.clone())?;
            let block = ProbFnSpec::Vptn(params, table.n);
            if c.is_positive() {
                pos.push((mu * c / (Rational::one() + &lambda), block));
            } else {
                neg.push((-(mu * c) / &lambda, block));
            }
        }
    }
    let w1 = ProbFnSpec::Mixture(pos);
    let w2 = if lambda.is_zero() {
        w1.clone()
    } else {
        ProbFnSpec::Mixture(neg)
    };
    let target = ProbFnSpec::Mixture(
        mix.iter()
            .map(|(mu, x)| (mu.clone(), ProbFnSpec::Zx(x.clone())))
            .collect(),
    );
    let certificate = verify(&target, &w1, &w2, &lambda, q, verify_length, limits)?;
    Ok(DecompositionResult {
        lambda,
        w1,
        w2,
        table: table.clone(),
        verified_length: verify_length,
        degenerate: mix.iter().any(|(_, x)| is_degenerate(q, x)),
        certificate,
    })
}

fn verify(
    target: &ProbFnSpec,
    w1: &ProbFnSpec,
    w2: &ProbFnSpec,
    lambda: &Rational,
    q: usize,
    max_len: usize,
    limits: &Limits,
) -> Result<Vec<CertificateLine>> {
    let lhs = Evaluator::new(target, q, limits)?;
    let e1 = Evaluator::new(w1, q, limits)?;
    let e2 = Evaluator::new(w2, q, limits)?;
    let one_plus = Rational::one() + lambda;
    let mut lines = Vec::new();
    for n in 0..=max_len {
        for sd in StateDescription::enumerate(q, n, limits)? {
            let t = lhs.eval(&sd)?;
            let r = &one_plus * e1.eval(&sd)? - lambda * e2.eval(&sd)?;
            if t != r {
                return Err(Error::Verification(format!(
                    "z = {} but (1+λ)w1 − λw2 = {} on {sd}",
                    format_rational(&t),
                    format_rational(&r)
                )));
            }
            lines.push(CertificateLine {
                sd,
                target: t,
                reconstructed: r,
            });
        }
    }
    Ok(lines)
}

/// `Σ_f a(τ, f) · S_f · z_{f(p)}` over the classes, which equals
/// `v^{p,τ}_n(sd)` for every `p`.
pub fn grouped_vptn_eval(
    classes: &[OrbitClass],
    p: &[Rational],
    tau: &[Rational],
    sd: &StateDescription,
    limits: &Limits,
) -> Result<Rational> {
    let mut cache: HashMap<Vec<Rational>, Rational> = HashMap::new();
    let mut sum = Rational::zero();
    let tau0 = DiscreteMeasure::point_mass(Rational::zero())?;
    for class in classes {
        let a = vptn_factor(class.representative.q, &class.representative.values, tau);
        if a.is_zero() {
            continue;
        }
        let x = e_of_p(&class.representative, p, &tau0)?;
        let z = match cache.get(x.entries()) {
            Some(v) => v.clone(),
            None => {
                let v = crate::prob::zx_eval(&x, sd, limits)?;
                cache.insert(x.entries().to_vec(), v.clone());
                v
            }
        };
        sum += a * Rational::from_integer(class.size.into()) * z;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn class_counts() {
        let limits = Limits::default();
        let c = enumerate_classes(1, 2, &limits).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|k| k.size == 1));
        let c = enumerate_classes(2, 1, &limits).unwrap();
        let reps: Vec<_> = c.iter().map(|k| (k.representative.values[0], k.size)).collect();
        assert_eq!(reps, vec![(1, 1), (2, 2), (4, 1)]);
    }

    #[test]
    fn endpoint_rows_give_identity() {
        let limits = Limits::default();
        let classes = enumerate_classes(1, 2, &limits).unwrap();
        let taus = vec![
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
            vec![int(1), int(1)],
        ];
        let m = build_matrix(&classes, &taus).unwrap();
        assert_eq!(m, RatMatrix::identity(4));
        let dup = vec![vec![rat(1, 3), rat(1, 2)]; 4];
        assert!(build_matrix(&classes, &dup).unwrap().determinant().unwrap().is_zero());
    }

    #[test]
    fn set_partition_counts() {
        assert_eq!(set_partitions(&[2, 3]).len(), 2);
        assert_eq!(set_partitions(&[2, 3, 5]).len(), 5);
        assert_eq!(set_partitions(&[1, 2, 3, 4]).len(), 15);
        assert_eq!(level_partitions(3).len(), 25);
    }

    #[test]
    fn partition_coefficients_for_two_predicates() {
        let d = partition_coefficients(2).unwrap();
        let values: Vec<_> = d.iter().map(|(_, c)| c.clone()).collect();
        assert_eq!(values, vec![rat(1, 2), rat(-1, 4)]);
    }

    #[test]
    fn single_predicate_needs_no_negative_part() {
        let limits = Limits::default();
        let table =
            choose_regular_profile_taus(1, 0, &SearchBudget::default(), &limits).unwrap();
        assert!(table.lambda().is_zero());
        assert_eq!(table.taus()[1], vec![int(0), int(1)]);
    }

    #[test]
    fn class_sizes_for_two_predicates() {
        let limits = Limits::default();
        let classes = enumerate_classes(2, 4, &limits).unwrap();
        assert_eq!(classes.len(), 136);
        assert_eq!(classes.iter().filter(|c| c.size == 1).count(), 16);
        assert_eq!(classes.iter().map(|c| c.size).sum::<usize>(), 256);
    }

    #[test]
    fn two_predicate_reconstruction() {
        let limits = Limits::default();
        let x = SimplexVector::new(vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        let result = decompose_z(&x, 7, 3, &limits).unwrap();
        assert!(!result.lambda.is_negative());
        assert_eq!(result.certificate.len(), 1 + 4 + 16 + 64);
    }
}
