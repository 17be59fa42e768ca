//! `Q_λ` from the raising-operator series, the Hall–Littlewood specialisation,
//! and the coefficient-level comparison with the Lassalle–Schlosser sum.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::coeff::{c_coeff, c_coeff_resolved, c_ledger};
use crate::context::{deformed_t_power, EvalContext};
use crate::error::{Error, Result};
use crate::lassalle::ls_coeff_resolved;
use crate::ratfunc::RatFunc;
use crate::scalar::{pow, Field, Rational};
use crate::symfunc::{hl_q_row, Basis, GFamily, SymF};
use crate::theta::{fibre, pairs, theta_box, theta_support, OperatorPolynomial, ThetaMatrix};

/// Coefficient of `R^σ` in `prod_{i<j} (1 - R_{ij}) · sum_θ c(θ) R^θ`.
pub fn rhs_coeff<F: Field>(sigma: &ThetaMatrix, c: &mut dyn FnMut(&ThetaMatrix) -> Result<F>) -> Result<F> {
    let n = sigma.n();
    let active: Vec<(usize, usize)> = pairs(n)
        .into_iter()
        .filter(|&(i, j)| sigma.get(i, j) > 0)
        .collect();
    let mut total = F::zero();
    for mask in 0u32..(1 << active.len()) {
        let mut th = sigma.clone();
        for (b, &(i, j)) in active.iter().enumerate() {
            if mask & (1 << b) != 0 {
                th.set(i, j, th.get(i, j) - 1);
            }
        }
        let v = c(&th)?;
        total = if mask.count_ones() % 2 == 0 { total + v } else { total - v };
    }
    Ok(total)
}

/// Memoised `c_n` in a fixed context.
struct CCache<'a, F> {
    ctx: &'a EvalContext<F>,
    eval: fn(&ThetaMatrix, &EvalContext<F>) -> Result<F>,
    memo: HashMap<ThetaMatrix, F>,
}

impl<'a, F: Field> CCache<'a, F> {
    fn get(&mut self, th: &ThetaMatrix) -> Result<F> {
        if let Some(v) = self.memo.get(th) {
            return Ok(v.clone());
        }
        let v = (self.eval)(th, self.ctx)?;
        self.memo.insert(th.clone(), v.clone());
        Ok(v)
    }
}

fn operator_with<F: Field>(
    lambda: &[u32],
    ctx: &EvalContext<F>,
    eval: fn(&ThetaMatrix, &EvalContext<F>) -> Result<F>,
) -> Result<OperatorPolynomial<F>> {
    let mut cache = CCache {
        ctx,
        eval,
        memo: HashMap::new(),
    };
    let mut op = OperatorPolynomial::new(lambda.len());
    for sigma in theta_support(lambda) {
        let v = rhs_coeff(&sigma, &mut |th| cache.get(th))?;
        op.add_term(sigma, v);
    }
    Ok(op)
}

/// Raising-operator coefficients over the support of λ, any field.
pub fn raising_operator<F: Field>(lambda: &[u32], ctx: &EvalContext<F>) -> Result<OperatorPolynomial<F>> {
    operator_with(lambda, ctx, c_coeff)
}

/// `Q_λ` from the raising-operator series; `ctx` is tied to the zero-padded λ.
pub fn raising_q<F: Field>(lambda: &[u32], ctx: &EvalContext<F>) -> Result<SymF<F>> {
    let op = raising_operator(lambda, ctx)?;
    let g = GFamily::new(lambda.iter().sum::<u32>() as usize, ctx.q(), ctx.t())?;
    op.apply(lambda, &g)
}

/// Rational coefficients, deforming s on an uncancelled pole.
pub fn raising_operator_resolved(lambda: &[u32], ctx: &EvalContext<Rational>) -> Result<OperatorPolynomial<Rational>> {
    operator_with(lambda, ctx, c_coeff_resolved)
}

/// Rational version that deforms s on an uncancelled pole.
pub fn raising_q_resolved(lambda: &[u32], ctx: &EvalContext<Rational>) -> Result<SymF<Rational>> {
    let op = raising_operator_resolved(lambda, ctx)?;
    let g = GFamily::new(lambda.iter().sum::<u32>() as usize, ctx.q(), ctx.t())?;
    op.apply(lambda, &g)
}

/// `Q_λ` at `t = q^k`, taking each `c_n` as the limit of `t = q^k z`, `z -> 1`.
///
/// Falls back to the Q(z) computation when a single coefficient has a pole
/// that only cancels in the sum.
pub fn raising_q_t_power(lambda: &[u32], q: &Rational, k: u32) -> Result<SymF<Rational>> {
    let mut memo: HashMap<ThetaMatrix, Rational> = HashMap::new();
    let mut c = |th: &ThetaMatrix| -> Result<Rational> {
        if let Some(v) = memo.get(th) {
            return Ok(v.clone());
        }
        let v = c_ledger(th).limit_t_power(lambda, q, k, &format!("c_n at {th}"))?;
        memo.insert(th.clone(), v.clone());
        Ok(v)
    };
    let mut op = OperatorPolynomial::new(lambda.len());
    for sigma in theta_support(lambda) {
        match rhs_coeff(&sigma, &mut c) {
            Ok(v) => op.add_term(sigma, v),
            Err(Error::UncancelledPole(_)) => {
                let ctx = deformed_t_power(Some(lambda), &[], q, k)?;
                return limit_symf(&raising_q(lambda, &ctx)?, &Rational::from_integer(1.into()));
            }
            Err(e) => return Err(e),
        }
    }
    let t = pow(q, i64::from(k), "q^k")?;
    let g = GFamily::new(lambda.iter().sum::<u32>() as usize, q, &t)?;
    op.apply(lambda, &g)
}

/// Coefficientwise limit of a symmetric function over Q(z).
pub fn limit_symf(f: &SymF<RatFunc>, point: &Rational) -> Result<SymF<Rational>> {
    f.map_coeffs(|c| c.limit_at(point))
}

/// `w(m)`: coefficient of `R^m` in `(1 - R)/(1 - tR)`.
fn hl_weight<F: Field>(m: u32, t: &F) -> F {
    if m == 0 {
        F::one()
    } else {
        t.powi(i64::from(m) - 1).expect("nonnegative") * (t.clone() - F::one())
    }
}

/// `prod_{i<j} (1 - R_{ij})/(1 - t R_{ij}) q_λ` with Hall–Littlewood `q_k`.
pub fn hl_expansion<F: Field>(lambda: &[u32], t: &F) -> Result<SymF<F>> {
    let max = lambda.iter().sum::<u32>() as i64;
    let rows = (0..=max).map(|k| hl_q_row(k, t)).collect::<Result<Vec<_>>>()?;
    let mut out = SymF::zero(Basis::PowerSum);
    for sigma in theta_support(lambda) {
        let mut w = F::one();
        for (i, j) in pairs(lambda.len()) {
            w = w * hl_weight(sigma.get(i, j), t);
        }
        let mut term = SymF::one(Basis::PowerSum);
        for (l, z) in lambda.iter().zip(sigma.zeta()) {
            let k = i64::from(*l) + z;
            if k > 0 {
                term = term.multiply(&rows[k as usize])?;
            }
        }
        out = out.add(&term.scale(&w))?;
    }
    Ok(out)
}

/// A mismatch between the two coefficient families.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonWitness {
    pub shift: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of comparing Lassalle–Schlosser and raising-operator coefficients.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub lambda: Vec<u32>,
    pub bound: u32,
    /// Shift vectors whose whole fibre lies inside the box.
    pub groups_compared: usize,
    pub group_mismatches: usize,
    /// Per-θ comparison with `R_{ij}` treated as independent symbols.
    pub formal_compared: usize,
    pub formal_mismatches: usize,
    pub holds: bool,
    pub witness: Option<ComparisonWitness>,
}

/// Compares the two coefficient families for θ with entries `≤ bound`.
///
/// Raising operators act through the shift ζ(θ) only, so the families are
/// compared after summing over each fibre `{θ : ζ(θ) = v}`; only fibres lying
/// entirely inside the box are used. The per-θ count is reported alongside.
pub fn compare_operator_coeffs(lambda: &[u32], bound: u32, q: &Rational, t: &Rational) -> Result<ComparisonReport> {
    let n = lambda.len();
    let ctx = EvalContext::lambda_tied(lambda, q.clone(), t.clone())?;
    let mut cache = CCache {
        ctx: &ctx,
        eval: c_coeff_resolved,
        memo: HashMap::new(),
    };
    let mut lhs: BTreeMap<ThetaMatrix, Rational> = BTreeMap::new();
    let mut rhs: BTreeMap<ThetaMatrix, Rational> = BTreeMap::new();
    let boxed = theta_box(n, bound);
    let mut formal_mismatches = 0;
    for th in &boxed {
        let l = ls_coeff_resolved(lambda, th, q, t)?;
        let r = rhs_coeff(th, &mut |x| cache.get(x))?;
        if l != r {
            formal_mismatches += 1;
        }
        lhs.insert(th.clone(), l);
        rhs.insert(th.clone(), r);
    }
    let mut shifts: Vec<Vec<i64>> = boxed.iter().map(ThetaMatrix::zeta).collect();
    shifts.sort();
    shifts.dedup();
    let mut groups_compared = 0;
    let mut group_mismatches = 0;
    let mut witness = None;
    for shift in shifts {
        let members = fibre(&shift);
        if members.iter().any(|th| th.entries().iter().any(|&e| e > bound)) {
            continue;
        }
        groups_compared += 1;
        let l: Rational = members.iter().map(|th| lhs[th].clone()).sum();
        let r: Rational = members.iter().map(|th| rhs[th].clone()).sum();
        if l != r {
            group_mismatches += 1;
            if witness.is_none() {
                witness = Some(ComparisonWitness {
                    shift: shift.clone(),
                    lhs: l.render(),
                    rhs: r.render(),
                });
            }
        }
    }
    Ok(ComparisonReport {
        n,
        lambda: lambda.to_vec(),
        bound,
        groups_compared,
        group_mismatches,
        formal_compared: boxed.len(),
        formal_mismatches,
        holds: group_mismatches == 0,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{deformed_q_zero, generic_points};
    use crate::oracle::macdonald_q;
    use crate::partition::Partition;
    use crate::scalar::rat;
    use crate::symfunc::{g_row, GFamily};
    use num_traits::{One, Zero};

    #[test]
    fn one_row_is_g() {
        let (q, t) = (rat(2, 3), rat(5, 7));
        let ctx = EvalContext::lambda_tied(&[4], q.clone(), t.clone()).unwrap();
        assert_eq!(raising_q(&[4], &ctx).unwrap(), g_row(4, &q, &t).unwrap());
    }

    #[test]
    fn two_boxes_closed_form() {
        for (q, t) in generic_points(3, 2) {
            let ctx = EvalContext::lambda_tied(&[1, 1], q.clone(), t.clone()).unwrap();
            let one = Rational::one();
            let g = GFamily::new(2, &q, &t).unwrap();
            // s_1/s_2 = t for λ = (1,1), so c_1 - c_0 = (t-1)(1+q)/(1-qt).
            let c = (t.clone() - one.clone()) * (one.clone() + q.clone()) / (one - t.clone() * q.clone());
            let expect = g.product(&[1, 1]).add(&g.row(2).scale(&c)).unwrap();
            let got = raising_q(&[1, 1], &ctx).unwrap();
            assert_eq!(got, expect);
            let oracle = macdonald_q(&Partition::new(vec![1, 1]).unwrap(), &q, &t).unwrap();
            assert_eq!(got, oracle);
        }
    }

    #[test]
    fn small_shapes_match_oracle() {
        for (q, t) in generic_points(2, 9) {
            for lam in [vec![2u32, 1], vec![2, 1, 0], vec![1, 1, 1], vec![3, 1, 1], vec![2, 2, 0]] {
                let ctx = EvalContext::lambda_tied(&lam, q.clone(), t.clone()).unwrap();
                let oracle = macdonald_q(&Partition::new(lam.clone()).unwrap(), &q, &t).unwrap();
                assert_eq!(raising_q(&lam, &ctx).unwrap(), oracle, "{lam:?}");
            }
        }
    }

    #[test]
    fn rhs_of_zero_is_one() {
        let ctx = EvalContext::free(rat(2, 3), rat(5, 7), vec![rat(11, 13), rat(17, 19)]);
        let mut c = |th: &ThetaMatrix| c_coeff(th, &ctx);
        assert_eq!(rhs_coeff(&ThetaMatrix::zero(2), &mut c).unwrap(), Rational::one());
    }

    #[test]
    fn hall_littlewood_limit() {
        let t = rat(5, 7);
        let zero = Rational::zero();
        for lam in [vec![1u32, 1, 0], vec![2, 1, 0], vec![1, 1, 1]] {
            let p = Partition::new(lam.clone()).unwrap();
            let oracle = macdonald_q(&p, &zero, &t).unwrap();
            assert_eq!(hl_expansion(&lam, &t).unwrap(), oracle, "{lam:?}");
            let ctx = deformed_q_zero(&lam, &t).unwrap();
            let deformed = raising_q(&lam, &ctx).unwrap();
            assert_eq!(limit_symf(&deformed, &zero).unwrap(), oracle, "{lam:?}");
        }
    }

    #[test]
    fn comparison_two_variables() {
        let (q, t) = (rat(2, 3), rat(5, 7));
        for lam in [[0u32, 0], [2, 1]] {
            let rep = compare_operator_coeffs(&lam, 4, &q, &t).unwrap();
            assert!(rep.holds, "{rep:?}");
            assert_eq!(rep.formal_mismatches, 0);
            assert!(rep.groups_compared > 0);
        }
    }

    #[test]
    fn comparison_three_variables_grouped() {
        let (q, t) = (rat(2, 3), rat(5, 7));
        let rep = compare_operator_coeffs(&[2, 1, 0], 2, &q, &t).unwrap();
        assert!(rep.holds, "{rep:?}");
    }

    #[test]
    fn t_power_limit_matches_deformation_field() {
        let q = rat(2, 3);
        for lam in [vec![1u32, 1], vec![2, 1, 0], vec![2, 1, 1], vec![1, 1, 1], vec![3, 1, 0]] {
            for k in 1..=3 {
                let ctx = deformed_t_power(Some(&lam), &[], &q, k).unwrap();
                let slow = limit_symf(&raising_q(&lam, &ctx).unwrap(), &Rational::one()).unwrap();
                assert_eq!(raising_q_t_power(&lam, &q, k).unwrap(), slow, "{lam:?} k = {k}");
            }
        }
    }

    #[test]
    fn t_equals_q_is_schur() {
        let q = rat(3, 5);
        for lam in [vec![2u32, 1, 1, 1], vec![1, 1, 1, 1, 1], vec![3, 2]] {
            let want = crate::symfunc::jacobi_trudi_schur(&Partition::new(lam.clone()).unwrap(), &q).unwrap();
            assert_eq!(raising_q_t_power(&lam, &q, 1).unwrap(), want, "{lam:?}");
        }
    }
}
