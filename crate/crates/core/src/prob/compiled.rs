use std::collections::HashMap;

use num_traits::{One, Zero};

use super::eval::{e_of_p_vector, for_each_vptn_term, product_value, vpt_eval, vptn_inputs};
use super::{ProbFnSpec, PtParams};
use crate::error::{Error, Result};
use crate::lang::StateDescription;
use crate::limits::Limits;
use crate::rational::Rational;
use crate::spectra::spec_perm_group;

/// A function flattened for repeated evaluation on one language.
///
/// Every `w_x`, `z_x`, `v^{p,τ}_n` and mixture of them is a finite linear
/// combination `Σ c_y · w_y`; those terms are merged once up front. `v^{p,τ}`
/// parts keep their recursive evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    q: usize,
    products: Vec<(Rational, Vec<Rational>)>,
    direct: Vec<(Rational, PtParams)>,
}

impl Evaluator {
    pub fn new(spec: &ProbFnSpec, q: usize, limits: &Limits) -> Result<Self> {
        spec.validate()?;
        limits.check_q(q)?;
        let mut merged: HashMap<Vec<Rational>, Rational> = HashMap::new();
        let mut order: Vec<Vec<Rational>> = Vec::new();
        let mut direct = Vec::new();
        compile(
            spec,
            &Rational::one(),
            q,
            limits,
            &mut merged,
            &mut order,
            &mut direct,
        )?;
        let products = order
            .into_iter()
            .filter_map(|x| {
                let c = merged.remove(&x).expect("recorded vector");
                (!c.is_zero()).then_some((c, x))
            })
            .collect();
        Ok(Evaluator {
            q,
            products,
            direct,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of merged product terms.
    pub fn product_terms(&self) -> usize {
        self.products.len()
    }

    pub fn eval(&self, sd: &StateDescription) -> Result<Rational> {
        if sd.q() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: sd.q(),
            });
        }
        let mut sum = Rational::zero();
        for (c, x) in &self.products {
            let v = product_value(x, sd);
            if !v.is_zero() {
                sum += c * v;
            }
        }
        for (c, params) in &self.direct {
            sum += c * vpt_eval(params, sd);
        }
        Ok(sum)
    }
}

fn compile(
    spec: &ProbFnSpec,
    weight: &Rational,
    q: usize,
    limits: &Limits,
    merged: &mut HashMap<Vec<Rational>, Rational>,
    order: &mut Vec<Vec<Rational>>,
    direct: &mut Vec<(Rational, PtParams)>,
) -> Result<()> {
    let mut push = |c: Rational, x: Vec<Rational>| match merged.get_mut(&x) {
        Some(acc) => *acc += c,
        None => {
            order.push(x.clone());
            merged.insert(x, c);
        }
    };
    match spec {
        ProbFnSpec::Wx(x) => {
            same_q(x.q(), q)?;
            push(weight.clone(), x.entries().to_vec());
        }
        ProbFnSpec::Zx(x) => {
            same_q(x.q(), q)?;
            let group = spec_perm_group(q, limits)?;
            let c = weight / Rational::from_integer(group.len().into());
            for sigma in &group {
                push(c.clone(), x.permuted(sigma).entries().to_vec());
            }
        }
        ProbFnSpec::Vptn(params, n) => {
            let (p, _) = vptn_inputs(params, *n);
            for_each_vptn_term(params, *n, q, limits, |e, factor| {
                push(weight * factor, e_of_p_vector(q, e, &p, params.tau0())?);
                Ok(())
            })?;
        }
        ProbFnSpec::Vpt(params) => direct.push((weight.clone(), params.clone())),
        ProbFnSpec::Mixture(parts) | ProbFnSpec::Signed(parts) => {
            for (w, sub) in parts {
                if !w.is_zero() {
                    compile(sub, &(weight * w), q, limits, merged, order, direct)?;
                }
            }
        }
    }
    Ok(())
}

fn same_q(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{mixture_eval, DiscreteMeasure, SimplexVector};
    use crate::rational::{int, rat};

    #[test]
    fn agrees_with_direct_evaluation() {
        let limits = Limits::default();
        let x = SimplexVector::new(vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 8)]).unwrap();
        let params = PtParams::new(
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            vec![rat(1, 3), rat(3, 4)],
            DiscreteMeasure::new(vec![int(0), rat(1, 2)], vec![rat(1, 3), rat(2, 3)]).unwrap(),
        )
        .unwrap();
        let spec = ProbFnSpec::mixture(vec![
            (rat(1, 4), ProbFnSpec::Zx(x.clone())),
            (rat(1, 4), ProbFnSpec::Wx(x)),
            (rat(1, 4), ProbFnSpec::Vpt(params.clone())),
            (rat(1, 4), ProbFnSpec::Vptn(params, 2)),
        ])
        .unwrap();
        let ev = Evaluator::new(&spec, 2, &limits).unwrap();
        for n in 0..=3 {
            for sd in StateDescription::enumerate(2, n, &limits).unwrap() {
                assert_eq!(ev.eval(&sd).unwrap(), mixture_eval(&spec, &sd, &limits).unwrap());
            }
        }
    }
}
