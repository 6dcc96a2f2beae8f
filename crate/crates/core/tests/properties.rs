use num_traits::{One, Zero};
use proptest::prelude::*;

use spx_core::lang::{format_sd, models, parse_sd, parse_sentence};
use spx_core::perms::{apply, AtomPermutation, ConstPermutation, Permutation};
use spx_core::principles::check_axioms;
use spx_core::prob::{
    eval_qf, mixture_eval, vpt_eval, wx_eval, zx_eval, DiscreteMeasure, Evaluator, ProbFnSpec,
    PtParams, SimplexVector,
};
use spx_core::rational::rat;
use spx_core::spectra::{pspectrum, spec_perm_group};
use spx_core::{Limits, QfSentence, Rational, StateDescription};

fn simplex_from(weights: &[u32]) -> SimplexVector {
    let total: u32 = weights.iter().sum();
    SimplexVector::new(weights.iter().map(|&w| rat(w as i64, total as i64)).collect()).unwrap()
}

fn sd_strategy(q: usize, max_len: usize) -> impl Strategy<Value = StateDescription> {
    let k = 1usize << q;
    prop::collection::vec(1..=k, 0..=max_len).prop_map(move |atoms| StateDescription::new(q, atoms).unwrap())
}

/// Parameters with up to three colours and a one- or two-point `τ0`.
fn params_strategy() -> impl Strategy<Value = PtParams> {
    (
        prop::collection::vec(0u32..6, 1..=4),
        prop::collection::vec((1i64..8, 8i64..9), 3),
        prop::bool::ANY,
        1i64..7,
    )
        .prop_filter("some weight", |(w, ..)| w.iter().any(|&x| x > 0))
        .prop_map(|(w, taus, two_points, t)| {
            let total: u32 = w.iter().sum();
            let p: Vec<Rational> = w.iter().map(|&x| rat(x as i64, total as i64)).collect();
            let colors = p.len() - 1;
            let tau = taus[..colors].iter().map(|&(a, b)| rat(a, b)).collect();
            let tau0 = if two_points {
                DiscreteMeasure::new(vec![rat(t, 7), Rational::one()], vec![rat(1, 3), rat(2, 3)]).unwrap()
            } else {
                DiscreteMeasure::point_mass(rat(t, 7)).unwrap()
            };
            PtParams::new(p, tau, tau0).unwrap()
        })
}

fn sentence_strategy(q: usize, consts: usize) -> impl Strategy<Value = QfSentence> {
    let leaf = (1..=q, 1..=consts, prop::bool::ANY).prop_map(|(p, c, s)| QfSentence::lit(p, c, s));
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            inner.prop_map(QfSentence::negate),
        ]
    })
}

fn const_perm(n: usize, seed: &[usize]) -> ConstPermutation {
    let mut image: Vec<usize> = (1..=n).collect();
    for (i, &s) in seed.iter().enumerate().take(n) {
        image.swap(i, i + s % (n - i));
    }
    ConstPermutation(Permutation::new(image).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sd_text_round_trips(q in 1usize..=4, seed in prop::collection::vec(0usize..16, 0..6)) {
        let k = 1usize << q;
        let sd = StateDescription::new(q, seed.iter().map(|s| s % k + 1).collect()).unwrap();
        prop_assert_eq!(parse_sd(&format_sd(&sd)).unwrap(), sd);
    }

    #[test]
    fn sentence_text_round_trips(s in sentence_strategy(3, 3)) {
        prop_assert_eq!(parse_sentence(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn sentence_value_is_sum_over_models(params in params_strategy(), s in sentence_strategy(2, 3)) {
        let limits = Limits::default();
        let spec = ProbFnSpec::Vpt(params.clone());
        let m = s.max_constant();
        let mut brute = Rational::zero();
        for sd in StateDescription::enumerate(2, m, &limits).unwrap() {
            if models(&sd, &s).unwrap() {
                brute += vpt_eval(&params, &sd);
            }
        }
        prop_assert_eq!(eval_qf(&spec, &s, 2, &limits).unwrap(), brute);
    }

    #[test]
    fn vpt_is_a_probability_function(params in params_strategy(), q in 1usize..=2) {
        let limits = Limits::default();
        let r = check_axioms(&ProbFnSpec::Vpt(params), q, 3, &limits).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn vpt_is_exchangeable(params in params_strategy(), sd in sd_strategy(2, 4), seed in prop::collection::vec(0usize..8, 4)) {
        let cp = const_perm(sd.len(), &seed);
        let moved = apply(&sd, None, Some(&cp)).unwrap();
        prop_assert_eq!(vpt_eval(&params, &sd), vpt_eval(&params, &moved));
    }

    #[test]
    fn vpt_is_constant_on_spectrum_cells(params in params_strategy(), sd in sd_strategy(2, 4), g in 0usize..36, seed in prop::collection::vec(0usize..8, 4)) {
        let group = spec_perm_group(2, &Limits::default()).unwrap();
        let ap = &group[g % group.len()];
        let cp = const_perm(sd.len(), &seed);
        let moved = apply(&sd, Some(ap), Some(&cp)).unwrap();
        prop_assert_eq!(pspectrum(&sd), pspectrum(&moved));
        prop_assert_eq!(vpt_eval(&params, &sd), vpt_eval(&params, &moved));
    }

    #[test]
    fn colour_order_is_irrelevant(params in params_strategy(), sd in sd_strategy(2, 3), rot in 0usize..3) {
        let c = params.colors();
        let mut pairs: Vec<(Rational, Rational)> = params.p()[1..]
            .iter()
            .cloned()
            .zip(params.tau().iter().cloned())
            .collect();
        if c > 0 {
            pairs.rotate_left(rot % c);
        }
        let mut p = vec![params.p()[0].clone()];
        p.extend(pairs.iter().map(|(a, _)| a.clone()));
        let tau = pairs.into_iter().map(|(_, t)| t).collect();
        let shuffled = PtParams::new(p, tau, params.tau0().clone()).unwrap();
        prop_assert_eq!(vpt_eval(&params, &sd), vpt_eval(&shuffled, &sd));
    }

    #[test]
    fn zx_averages_over_the_group(w in prop::collection::vec(1u32..9, 4), sd in sd_strategy(2, 4)) {
        let x = simplex_from(&w);
        let limits = Limits::default();
        let group = spec_perm_group(2, &limits).unwrap();
        let sum: Rational = group
            .iter()
            .map(|g| wx_eval(&x.permuted(g), &sd).unwrap())
            .sum();
        let avg = sum / Rational::from_integer(group.len().into());
        prop_assert_eq!(zx_eval(&x, &sd, &limits).unwrap(), avg);
    }

    #[test]
    fn compiled_evaluator_matches_direct(params in params_strategy(), w in prop::collection::vec(1u32..9, 4), sd in sd_strategy(2, 3)) {
        let limits = Limits::default();
        let spec = ProbFnSpec::mixture(vec![
            (rat(1, 3), ProbFnSpec::Zx(simplex_from(&w))),
            (rat(1, 3), ProbFnSpec::Vptn(params.clone(), 3)),
            (rat(1, 3), ProbFnSpec::Vpt(params)),
        ])
        .unwrap();
        let ev = Evaluator::new(&spec, 2, &limits).unwrap();
        prop_assert_eq!(ev.eval(&sd).unwrap(), mixture_eval(&spec, &sd, &limits).unwrap());
    }
}

#[test]
fn identity_permutation_changes_nothing() {
    let sd = parse_sd("q=2: +- -- ++").unwrap();
    let id = AtomPermutation::identity(2);
    assert_eq!(apply(&sd, Some(&id), None).unwrap(), sd);
}

#[test]
fn empty_description_has_value_one() {
    let params = PtParams::new(vec![Rational::one()], vec![], DiscreteMeasure::point_mass(rat(1, 2)).unwrap()).unwrap();
    assert!(vpt_eval(&params, &StateDescription::top(3)).is_one());
}
