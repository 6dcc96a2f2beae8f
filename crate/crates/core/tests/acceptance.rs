//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! All comparisons are exact rational equalities; the only tolerances are
//! the wall-clock budgets below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use spx_core::decompose::{
    choose_regular_profile_taus, choose_regular_taus, decompose_mixture_with, decompose_z,
    enumerate_classes, SearchBudget,
};
use spx_core::lang::parse_sd;
use spx_core::perms::px_group;
use spx_core::principles::{
    ax_permutations, check_axioms, check_invariance, check_spx_pair, check_uli_consistency,
    check_wip, Principle, PrincipleReport, Witness, WipBounds,
};
use spx_core::prob::{
    mixture_eval, vpt_eval, vptn_eval, zx_eval, DiscreteMeasure, ProbFnSpec, PtParams,
    SimplexVector,
};
use spx_core::rational::{format_rational, int, rat};
use spx_core::spectra::{pspectrum, spectrum_class_ratio};
use spx_core::{Limits, Rational, StateDescription};

/// Exact comparisons throughout.
const TOLERANCE: i64 = 0;
const BUDGET_EXAMPLE: Duration = Duration::from_secs(10);
const BUDGET_VPT_SUITE: Duration = Duration::from_secs(60);
const BUDGET_DECOMPOSITION: Duration = Duration::from_secs(600);
const SEED: u64 = 1;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn exact_eq(a: &Rational, b: &Rational) -> bool {
    (a - b).abs() <= Rational::from_integer(TOLERANCE.into())
}

fn passes(r: &PrincipleReport) -> Outcome {
    if r.passed() {
        Ok(String::new())
    } else {
        Err(r.to_string())
    }
}

fn lim() -> Limits {
    Limits::default()
}

fn measure(points: &[(i64, i64)], weights: &[(i64, i64)]) -> DiscreteMeasure {
    DiscreteMeasure::new(
        points.iter().map(|&(a, b)| rat(a, b)).collect(),
        weights.iter().map(|&(a, b)| rat(a, b)).collect(),
    )
    .unwrap()
}

fn params(p: &[(i64, i64)], tau: &[(i64, i64)], tau0: DiscreteMeasure) -> PtParams {
    PtParams::new(
        p.iter().map(|&(a, b)| rat(a, b)).collect(),
        tau.iter().map(|&(a, b)| rat(a, b)).collect(),
        tau0,
    )
    .unwrap()
}

fn simplex(x: &[i64]) -> SimplexVector {
    let total: i64 = x.iter().sum();
    SimplexVector::new(x.iter().map(|&k| rat(k, total)).collect()).unwrap()
}

/// `(q, params)` fixtures with at most three colours and at most two points
/// in `τ0`.
fn vpt_fixtures() -> Vec<(usize, PtParams)> {
    vec![
        (
            2,
            params(&[(1, 4), (1, 2), (1, 4)], &[(1, 3), (3, 4)], measure(&[(0, 1), (1, 2)], &[(1, 2), (1, 2)])),
        ),
        (
            3,
            params(
                &[(1, 6), (1, 3), (1, 4), (1, 4)],
                &[(1, 5), (1, 2), (2, 3)],
                measure(&[(1, 3)], &[(1, 1)]),
            ),
        ),
        (3, params(&[(0, 1), (1, 2), (1, 2)], &[(0, 1), (1, 1)], measure(&[(0, 1)], &[(1, 1)]))),
        (2, params(&[(1, 1)], &[], measure(&[(1, 4), (3, 4)], &[(1, 3), (2, 3)]))),
    ]
}

// Criterion 1 ---------------------------------------------------------------

/// Sign string of atom `i` of `L_3`: bit `k` from the top of `i − 1` set
/// means `P_{k+1}` is negated.
fn signs3(i: usize) -> [bool; 3] {
    let b = i - 1;
    [b & 4 != 0, b & 2 != 0, b & 1 != 0]
}

fn index3(s: [bool; 3]) -> usize {
    1 + (s[0] as usize) * 4 + (s[1] as usize) * 2 + s[2] as usize
}

/// `6 · 19^5 · w(sd)` for `w = (1/6) Σ_σ w_{σ b}`, by permuting the sign
/// strings by hand over the six orderings of three predicates.
fn example_oracle(b_numer: &[u64; 8], atoms: &[usize]) -> u64 {
    const ORDERS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    ORDERS
        .iter()
        .map(|ord| {
            atoms
                .iter()
                .map(|&h| {
                    let s = signs3(h);
                    b_numer[index3([s[ord[0]], s[ord[1]], s[ord[2]]]) - 1]
                })
                .product::<u64>()
        })
        .sum()
}

fn criterion_1() -> Outcome {
    let limits = lim();
    let numer = [1u64, 2, 4, 5, 2, 3, 1, 1];
    let b = SimplexVector::new(numer.iter().map(|&k| rat(k as i64, 19)).collect()).unwrap();
    let w = b.symmetrized(&px_group(3)).map_err(|e| e.to_string())?;
    let theta = StateDescription::new(3, vec![2, 5, 7, 7, 4]).unwrap();
    let phi = StateDescription::new(3, vec![3, 5, 6, 6, 7]).unwrap();

    ensure!(pspectrum(&theta) == pspectrum(&phi), "spectra differ");
    ensure!(
        pspectrum(&theta).to_string() == "<{},{1,1},{2,1},{}>",
        "unexpected spectrum {}",
        pspectrum(&theta)
    );

    let scale = int(6) * int(19).pow(5);
    let oracle_t = example_oracle(&numer, theta.atoms());
    let oracle_p = example_oracle(&numer, phi.atoms());
    ensure!(oracle_t != oracle_p, "oracle values coincide");
    let wt = mixture_eval(&w, &theta, &limits).map_err(|e| e.to_string())?;
    let wp = mixture_eval(&w, &phi, &limits).map_err(|e| e.to_string())?;
    ensure!(
        exact_eq(&wt, &(int(oracle_t as i64) / &scale)),
        "w(Θ) = {} disagrees with the oracle {oracle_t}/(6·19^5)",
        format_rational(&wt)
    );
    ensure!(
        exact_eq(&wp, &(int(oracle_p as i64) / &scale)),
        "w(Φ) = {} disagrees with the oracle {oracle_p}/(6·19^5)",
        format_rational(&wp)
    );
    ensure!(wt != wp, "w(Θ) = w(Φ)");

    passes(&check_invariance(&w, Principle::Px, 3, 5, &limits).map_err(|e| e.to_string())?)?;
    let global = check_invariance(&w, Principle::SPx, 3, 5, &limits).map_err(|e| e.to_string())?;
    ensure!(!global.passed(), "SPx unexpectedly holds at n = 5");
    let pair = check_spx_pair(&w, &theta, &phi, &limits).map_err(|e| e.to_string())?;
    match &pair.witness {
        Some(Witness::Pair {
            theta: t,
            phi: p,
            theta_value,
            phi_value,
            ..
        }) => {
            ensure!(t == &theta && p == &phi, "pair witness is ({t}, {p})");
            ensure!(theta_value == &wt && phi_value == &wp, "pair witness values differ");
        }
        other => return Err(format!("expected a pair witness, got {other:?}")),
    }
    let note = if (oracle_t, oracle_p) == (1094, 1224) {
        "agree with the quoted 1094/1224".to_string()
    } else {
        format!("differ from the quoted 1094/1224 (oracle {oracle_t}/{oracle_p})")
    };
    Ok(format!(
        "w(Θ) = {oracle_t}/(6·19^5), w(Φ) = {oracle_p}/(6·19^5), {note}; first global SPx witness: {}",
        global
            .witness
            .as_ref()
            .map(ToString::to_string)
            .unwrap_or_default()
    ))
}

// Criterion 2 ---------------------------------------------------------------

fn criterion_2() -> Outcome {
    let limits = lim();
    let fixtures = vpt_fixtures();
    for (q, p) in &fixtures {
        let spec = ProbFnSpec::Vpt(p.clone());
        for n in 1..=3 {
            passes(&check_axioms(&spec, *q, n, &limits).map_err(|e| e.to_string())?)
                .map_err(|e| format!("q={q}: {e}"))?;
            for pr in [Principle::Ex, Principle::SPx] {
                passes(&check_invariance(&spec, pr, *q, n, &limits).map_err(|e| e.to_string())?)
                    .map_err(|e| format!("q={q}: {e}"))?;
            }
        }
    }
    Ok(format!("{} fixtures, axioms/Ex/SPx at n ≤ 3", fixtures.len()))
}

// Criterion 3 ---------------------------------------------------------------

fn criterion_3() -> Outcome {
    let limits = lim();
    let mut checked = 0;
    for (_, p) in vpt_fixtures() {
        let spec = ProbFnSpec::Vpt(p);
        for q in 1..=2 {
            let r = check_uli_consistency(&spec, q, q + 1, 3, &limits).map_err(|e| e.to_string())?;
            passes(&r)?;
            checked += 1;
        }
    }
    Ok(format!("{checked} restrictions L_(q+1) → L_q, q ∈ {{1,2}}, lengths ≤ 3"))
}

// Criterion 4 ---------------------------------------------------------------

fn criterion_4() -> Outcome {
    let limits = lim();
    let wb = WipBounds {
        predicates_per_side: 2,
        constants_per_side: 2,
        constant_pool: 4,
    };
    let fixtures = [
        params(&[(1, 1)], &[], measure(&[(1, 2)], &[(1, 1)])),
        params(
            &[(1, 4), (1, 2), (1, 4)],
            &[(1, 3), (3, 4)],
            measure(&[(0, 1), (1, 2)], &[(1, 2), (1, 2)]),
        ),
    ];
    for p in &fixtures {
        passes(&check_wip(&ProbFnSpec::Vpt(p.clone()), 4, &wb, &limits).map_err(|e| e.to_string())?)?;
    }
    let zx = ProbFnSpec::Zx(SimplexVector::new(vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap());
    let r = check_wip(&zx, 2, &wb, &limits).map_err(|e| e.to_string())?;
    match &r.witness {
        Some(Witness::Sentences { joint, product, .. }) => {
            ensure!(
                exact_eq(joint, &rat(15, 32)) && exact_eq(product, &rat(121, 256)),
                "ZX witness {} vs {}",
                format_rational(joint),
                format_rational(product)
            );
        }
        other => return Err(format!("expected a ZX WIP witness, got {other:?}")),
    }
    Ok(format!("{} VPT fixtures at q = 4; ZX fails with 15/32 vs 121/256", fixtures.len()))
}

// Criterion 5 ---------------------------------------------------------------

fn criterion_5() -> Outcome {
    let limits = lim();
    let fixtures = [
        params(&[(0, 1), (1, 3), (2, 3)], &[(1, 5), (3, 4)], measure(&[(0, 1)], &[(1, 1)])),
        params(&[(1, 4), (1, 2), (1, 4)], &[(1, 3), (3, 4)], measure(&[(0, 1), (1, 2)], &[(1, 2), (1, 2)])),
        params(&[(1, 2), (1, 2), (0, 1)], &[(2, 3), (1, 2)], measure(&[(1, 3), (1, 1)], &[(3, 4), (1, 4)])),
    ];
    let mut count = 0;
    for p in &fixtures {
        for n in [2, 3] {
            for len in 0..=3 {
                for sd in StateDescription::enumerate(2, len, &limits).map_err(|e| e.to_string())? {
                    let a = vptn_eval(p, n, &sd, &limits).map_err(|e| e.to_string())?;
                    let b = vpt_eval(p, &sd);
                    ensure!(exact_eq(&a, &b), "{sd}: v_{n} = {} but v = {}", format_rational(&a), format_rational(&b));
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} comparisons"))
}

// Criterion 6 ---------------------------------------------------------------

fn criterion_6() -> Outcome {
    let limits = lim();
    let mut fixtures: Vec<(usize, ProbFnSpec)> = vpt_fixtures()
        .into_iter()
        .map(|(q, p)| (q, ProbFnSpec::Vpt(p)))
        .collect();
    fixtures.push((2, ProbFnSpec::Zx(simplex(&[1, 2, 3, 4]))));
    fixtures.push((2, ProbFnSpec::Wx(simplex(&[1, 2, 3, 4]))));
    fixtures.push((2, ProbFnSpec::Wx(simplex(&[1, 1, 1, 1]))));
    fixtures.push((3, simplex(&[1, 2, 4, 5, 2, 3, 1, 1]).symmetrized(&px_group(3)).unwrap()));
    fixtures.push((3, ProbFnSpec::Zx(simplex(&[3, 1, 1, 2, 1, 2, 2, 5]))));
    let (mut spx_pass, mut total) = (0, 0);
    for (q, spec) in &fixtures {
        let spx = check_invariance(spec, Principle::SPx, *q, 3, &limits).map_err(|e| e.to_string())?;
        total += 1;
        if spx.passed() {
            spx_pass += 1;
            passes(&check_invariance(spec, Principle::Px, *q, 3, &limits).map_err(|e| e.to_string())?)
                .map_err(|e| format!("SPx holds but {e}"))?;
        }
    }
    let all = ax_permutations(2, &limits).map_err(|e| e.to_string())?;
    ensure!(all.len() == 24, "expected 24 atom permutations, got {}", all.len());
    let xs = [[1, 2, 3, 4], [5, 1, 1, 1], [2, 7, 1, 3]];
    for x in xs {
        let spec = simplex(&x).symmetrized(&all).map_err(|e| e.to_string())?;
        passes(&check_invariance(&spec, Principle::SPx, 2, 4, &limits).map_err(|e| e.to_string())?)
            .map_err(|e| format!("Ax-closure of {x:?}: {e}"))?;
    }
    Ok(format!(
        "{spx_pass} of {total} fixtures pass SPx and all of those pass Px; {} Ax-closures pass SPx at n ≤ 4",
        xs.len()
    ))
}

// Criterion 7 ---------------------------------------------------------------

fn criterion_7_classes() -> Outcome {
    let classes = enumerate_classes(2, 4, &lim()).map_err(|e| e.to_string())?;
    let singles = classes.iter().filter(|c| c.size == 1).count();
    ensure!(classes.len() == 136, "{} classes", classes.len());
    ensure!(singles == 16, "{singles} classes of size 1");
    Ok("136 classes, 16 of size 1".into())
}

fn criterion_7_class_matrix() -> Outcome {
    let classes = enumerate_classes(2, 4, &lim()).map_err(|e| e.to_string())?;
    let (_, det) = choose_regular_taus(&classes, 2, SEED, &SearchBudget::default())
        .map_err(|e| format!("136 × 136 class matrix: {e}"))?;
    ensure!(!det.is_zero(), "determinant is zero");
    Ok(format!("det = {}", format_rational(&det)))
}

fn criterion_7_decomposition() -> Outcome {
    let limits = lim();
    let table = choose_regular_profile_taus(2, SEED, &SearchBudget::default(), &limits)
        .map_err(|e| e.to_string())?;
    ensure!(!table.determinant().is_zero(), "profile matrix is singular");
    let xs: [[i64; 4]; 6] = [
        [1, 2, 3, 4],
        [7, 1, 5, 3],
        [2, 9, 4, 1],
        [5, 3, 1, 8],
        [11, 2, 6, 13],
        [3, 5, 2, 7],
    ];
    let mut lambda: Option<Rational> = None;
    for x in xs {
        let x = simplex(&x);
        let d = decompose_mixture_with(&[(Rational::one(), x.clone())], &table, 3, &limits)
            .map_err(|e| e.to_string())?;
        ensure!(!d.lambda.is_negative(), "λ < 0");
        if let Some(l) = &lambda {
            ensure!(l == &d.lambda, "λ varies across x");
        }
        lambda = Some(d.lambda.clone());
        let one_plus = Rational::one() + &d.lambda;
        for len in 0..=3 {
            for sd in StateDescription::enumerate(2, len, &limits).map_err(|e| e.to_string())? {
                let z = zx_eval(&x, &sd, &limits).map_err(|e| e.to_string())?;
                let w1 = mixture_eval(&d.w1, &sd, &limits).map_err(|e| e.to_string())?;
                let w2 = mixture_eval(&d.w2, &sd, &limits).map_err(|e| e.to_string())?;
                ensure!(
                    exact_eq(&z, &(&one_plus * w1 - &d.lambda * w2)),
                    "identity fails at {sd}"
                );
            }
        }
        for w in [&d.w1, &d.w2] {
            passes(&check_axioms(w, 2, 3, &limits).map_err(|e| e.to_string())?)?;
            passes(&check_invariance(w, Principle::SPx, 2, 3, &limits).map_err(|e| e.to_string())?)?;
        }
    }
    let x1 = SimplexVector::new(vec![rat(2, 5), rat(3, 5)]).unwrap();
    let d1 = decompose_z(&x1, SEED, 3, &limits).map_err(|e| e.to_string())?;
    ensure!(d1.lambda.is_zero(), "q = 1 gives λ = {}", format_rational(&d1.lambda));
    Ok(format!(
        "{} generic x, λ = {} under one table, identity on lengths ≤ 3; q = 1 gives λ = 0",
        xs.len(),
        format_rational(&lambda.unwrap_or_default())
    ))
}

// Criterion 8 ---------------------------------------------------------------

fn criterion_8() -> Outcome {
    let limits = lim();
    let mut sums = 0;
    for q in 1..=2 {
        for big_n in 1..=3 {
            for upsilon in StateDescription::enumerate(q, big_n, &limits).map_err(|e| e.to_string())? {
                for n in 0..=big_n {
                    let mut total = Rational::zero();
                    for theta in StateDescription::enumerate(q, n, &limits).map_err(|e| e.to_string())? {
                        let r = spectrum_class_ratio(&upsilon, &theta, &limits).map_err(|e| e.to_string())?;
                        ensure!(
                            !r.is_negative() && r <= Rational::one(),
                            "ratio {} outside [0,1]",
                            format_rational(&r)
                        );
                        total += r;
                    }
                    ensure!(
                        exact_eq(&total, &Rational::one()),
                        "Σ ratio = {} for Υ = {upsilon}, n = {n}",
                        format_rational(&total)
                    );
                    sums += 1;
                }
            }
        }
    }
    let upsilon = parse_sd("q=1: + -").unwrap();
    let half = spectrum_class_ratio(&upsilon, &parse_sd("q=1: +").unwrap(), &limits).unwrap();
    ensure!(half == rat(1, 2), "ratio of + in {{+ -}} is {}", format_rational(&half));
    Ok(format!("{sums} prefix sums equal 1"))
}

fn run(label: &str, budget: Option<Duration>, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| Err("panicked".to_string()));
    let elapsed = start.elapsed();
    let outcome = match (outcome, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
        (o, _) => o,
    };
    let ok = outcome.is_ok();
    let detail = match outcome {
        Ok(s) | Err(s) => s,
    };
    println!(
        "{} criterion {label} [{elapsed:.2?}] {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() -> ExitCode {
    let results = [
        run("1 example", Some(BUDGET_EXAMPLE), criterion_1),
        run("2 vpt properties", Some(BUDGET_VPT_SUITE), criterion_2),
        run("3 uli consistency", None, criterion_3),
        run("4 wip", None, criterion_4),
        run("5 tail zero", None, criterion_5),
        run("6 implication lattice", None, criterion_6),
        run("7a class enumeration", None, criterion_7_classes),
        run("7b class matrix regularity", None, criterion_7_class_matrix),
        run("7c decomposition", Some(BUDGET_DECOMPOSITION), criterion_7_decomposition),
        run("8 orbit ratios", None, criterion_8),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
