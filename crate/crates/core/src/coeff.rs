//! The coefficients `c_n(θ; s; q, t)` of the raising-operator series.

use crate::context::EvalContext;
use crate::error::Result;
use crate::ledger::{Ledger, MonomialKey};
use crate::scalar::{div, pow, q_pochhammer, Field, Rational};
use crate::theta::ThetaMatrix;

/// The product expression for `c_n(θ)` as a factor ledger.
pub fn c_ledger(theta: &ThetaMatrix) -> Ledger {
    let n = theta.n();
    let th = |i: usize, j: usize| i64::from(theta.get(i, j));
    let mut l = Ledger::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let m = theta.get(i, j);
            if m == 0 {
                continue;
            }
            let a: i64 = (j + 1..n).map(|x| th(i, x) - th(j, x)).sum();
            l.monomial(0, i64::from(m));
            l.ratio(&MonomialKey::new(1, -1, n), &MonomialKey::new(1, 0, n), m);
            l.ratio(
                &MonomialKey::with_ratio(a + 1, -1, n, i, j),
                &MonomialKey::with_ratio(a + 1, 0, n, i, j),
                m,
            );
        }
    }
    for k in 2..n {
        for ell in 0..k {
            let m = theta.get(ell, k);
            if m == 0 {
                continue;
            }
            for mm in ell + 1..k {
                let b: i64 = (k + 1..n).map(|x| th(ell, x) - th(mm, x)).sum();
                l.ratio(
                    &MonomialKey::with_ratio(b + 1, -1, n, ell, mm),
                    &MonomialKey::with_ratio(b + 1, 0, n, ell, mm),
                    m,
                );
                let shift = b - th(mm, k);
                l.ratio(
                    &MonomialKey::with_ratio(shift, 1, n, ell, mm),
                    &MonomialKey::with_ratio(shift, 0, n, ell, mm),
                    m,
                );
            }
        }
    }
    l
}

/// `c_n(θ)` in the context's field. An uncancelled pole is returned as an
/// error so callers can retry in the deformation field.
pub fn c_coeff<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<F> {
    c_ledger(theta).evaluate(ctx, &format!("c_n at {theta}"))
}

/// `c_n(θ)` at a rational point, deforming the s-parameters on a pole.
pub fn c_coeff_resolved(theta: &ThetaMatrix, ctx: &EvalContext<Rational>) -> Result<Rational> {
    c_ledger(theta).evaluate_resolved(ctx, &format!("c_n at {theta}"))
}

fn poch_ratio<F: Field>(num: &F, den: &F, q: &F, k: u32) -> Result<F> {
    let k = k as usize;
    div(&q_pochhammer(num, q, k), &q_pochhammer(den, q, k), "q-Pochhammer ratio")
}

/// `t^θ (q/t;q)_θ / (q;q)_θ`.
fn common_factor<F: Field>(m: u32, q: &F, t: &F) -> Result<F> {
    let q_over_t = div(q, t, "q/t")?;
    Ok(pow(t, i64::from(m), "t^θ")? * poch_ratio(&q_over_t, q, q, m)?)
}

/// Two-variable coefficient written out directly.
pub fn c2_verbatim<F: Field>(m: u32, ctx: &EvalContext<F>) -> Result<F> {
    let (q, t) = (ctx.q(), ctx.t());
    let r = ctx.s_ratio(0, 1)?;
    let qt = div(q, t, "q/t")?;
    Ok(common_factor(m, q, t)? * poch_ratio(&(qt * r.clone()), &(q.clone() * r), q, m)?)
}

/// Three-variable coefficient written out directly.
pub fn c3_verbatim<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<F> {
    let (q, t) = (ctx.q(), ctx.t());
    let (a, b, c) = (theta.get(0, 1), theta.get(0, 2), theta.get(1, 2));
    let r12 = ctx.s_ratio(0, 1)?;
    let r13 = ctx.s_ratio(0, 2)?;
    let r23 = ctx.s_ratio(1, 2)?;
    let qt = div(q, t, "q/t")?;
    let shift = pow(q, i64::from(b) - i64::from(c), "q^{θ13-θ23}")?;
    let shift_neg = pow(q, -i64::from(c), "q^{-θ23}")?;
    let mut v = common_factor(a, q, t)?
        * poch_ratio(
            &(shift.clone() * qt.clone() * r12.clone()),
            &(shift * q.clone() * r12.clone()),
            q,
            a,
        )?;
    v = v * common_factor(b, q, t)? * poch_ratio(&(qt.clone() * r13.clone()), &(q.clone() * r13), q, b)?;
    v = v * common_factor(c, q, t)? * poch_ratio(&(qt.clone() * r23.clone()), &(q.clone() * r23), q, c)?;
    v = v * poch_ratio(&(qt * r12.clone()), &(q.clone() * r12.clone()), q, b)?;
    v = v * poch_ratio(
        &(shift_neg.clone() * t.clone() * r12.clone()),
        &(shift_neg * r12),
        q,
        b,
    )?;
    Ok(v)
}

/// `c_θ - c_{θ-1}` for n = 2, from the general coefficient.
pub fn jj_difference<F: Field>(m: u32, ctx: &EvalContext<F>) -> Result<F> {
    let cur = c_coeff(&ThetaMatrix::from_entries(2, vec![m])?, ctx)?;
    if m == 0 {
        return Ok(cur);
    }
    let prev = c_coeff(&ThetaMatrix::from_entries(2, vec![m - 1])?, ctx)?;
    Ok(cur - prev)
}

/// The closed form
/// `t^θ (t^{-1};q)_θ/(q;q)_θ · (t^{-1}r;q)_θ/(q r;q)_θ · (1 - q^{2θ} t^{-1} r)/(1 - t^{-1} r)`
/// with `r = s_1/s_2`.
pub fn jj_closed_form<F: Field>(m: u32, ctx: &EvalContext<F>) -> Result<F> {
    let (q, t) = (ctx.q(), ctx.t());
    let r = ctx.s_ratio(0, 1)?;
    let tinv = div(&F::one(), t, "1/t")?;
    let tr = tinv.clone() * r.clone();
    let k = m as usize;
    let mut v = pow(t, i64::from(m), "t^θ")?
        * div(&q_pochhammer(&tinv, q, k), &q_pochhammer(q, q, k), "(q;q)_θ")?
        * div(
            &q_pochhammer(&tr, q, k),
            &q_pochhammer(&(q.clone() * r), q, k),
            "(q s1/s2;q)_θ",
        )?;
    let q2m = pow(q, 2 * i64::from(m), "q^{2θ}")?;
    v = v * div(
        &(F::one() - q2m * tr.clone()),
        &(F::one() - tr),
        "1 - t^{-1} s1/s2",
    )?;
    Ok(v)
}

/// Ratio `c_θ / c_{θ-1}` from the first-order recurrence, n = 2.
pub fn c2_recurrence_ratio<F: Field>(m: u32, ctx: &EvalContext<F>) -> Result<F> {
    let (q, t) = (ctx.q(), ctx.t());
    let r = ctx.s_ratio(0, 1)?;
    let qm = pow(q, i64::from(m), "q^θ")?;
    let qmt = div(&qm, t, "q^θ/t")?;
    let num = (F::one() - qmt.clone()) * (F::one() - qmt * r.clone());
    let den = (F::one() - qm.clone()) * (F::one() - qm * r);
    Ok(t.clone() * div(&num, &den, "recurrence denominator")?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{deformed_t_power, free_s_values, generic_points, EvalContext};
    use crate::ratfunc::rf_limit_at_one;
    use crate::scalar::rat;
    use crate::theta::theta_box;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn free(n: usize, seed: u64) -> EvalContext<Rational> {
        let (q, t) = generic_points(1, seed).remove(0);
        EvalContext::free(q, t, free_s_values(n, seed))
    }

    #[test]
    fn zero_theta_is_one() {
        for n in 1..=4 {
            let ctx = free(n, 3);
            assert_eq!(c_coeff(&ThetaMatrix::zero(n), &ctx).unwrap(), Rational::one());
        }
    }

    #[test]
    fn two_variable_first_coefficient() {
        let ctx = free(2, 1);
        let (q, t) = (ctx.q().clone(), ctx.t().clone());
        let r = ctx.s_ratio(0, 1).unwrap();
        let one = Rational::one();
        let expect = t.clone() * (one.clone() - q.clone() / t.clone()) * (one.clone() - q.clone() / t * r.clone())
            / ((one.clone() - q.clone()) * (one - q * r));
        let th = ThetaMatrix::from_entries(2, vec![1]).unwrap();
        assert_eq!(c_coeff(&th, &ctx).unwrap(), expect);
    }

    #[test]
    fn general_product_matches_small_cases() {
        for seed in 0..3 {
            let ctx = free(2, seed);
            for m in 0..=6 {
                let th = ThetaMatrix::from_entries(2, vec![m]).unwrap();
                assert_eq!(c_coeff(&th, &ctx).unwrap(), c2_verbatim(m, &ctx).unwrap());
            }
            let ctx = free(3, seed);
            for th in theta_box(3, 3) {
                assert_eq!(c_coeff(&th, &ctx).unwrap(), c3_verbatim(&th, &ctx).unwrap(), "{th}");
            }
        }
    }

    #[test]
    fn vanishes_at_t_equals_q() {
        let q = rat(2, 3);
        let ctx = EvalContext::free(q.clone(), q, free_s_values(3, 0));
        for th in theta_box(3, 2) {
            let v = c_coeff(&th, &ctx).unwrap();
            assert_eq!(v.is_zero(), !th.is_zero(), "{th}");
        }
    }

    #[test]
    fn vanishes_at_t_power_of_q() {
        let q = rat(2, 3);
        let s = free_s_values(3, 0);
        for k in 2..=4u32 {
            let ctx = deformed_t_power(None, &s, &q, k).unwrap();
            for th in theta_box(3, k) {
                let v = rf_limit_at_one(&c_coeff(&th, &ctx).unwrap()).unwrap();
                if th.entries().iter().any(|&e| e >= k) {
                    assert!(v.is_zero(), "k = {k}, {th}");
                }
            }
        }
    }

    #[test]
    fn two_routes_for_differences() {
        for seed in 0..3 {
            let ctx = free(2, seed);
            assert_eq!(jj_difference(0, &ctx).unwrap(), Rational::one());
            assert_eq!(jj_closed_form(0, &ctx).unwrap(), Rational::one());
            for m in 1..=6 {
                assert_eq!(jj_difference(m, &ctx).unwrap(), jj_closed_form(m, &ctx).unwrap());
            }
            for m in 1..=5 {
                let cur = c_coeff(&ThetaMatrix::from_entries(2, vec![m]).unwrap(), &ctx).unwrap();
                let prev = c_coeff(&ThetaMatrix::from_entries(2, vec![m - 1]).unwrap(), &ctx).unwrap();
                assert_eq!(cur, c2_recurrence_ratio(m, &ctx).unwrap() * prev);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn c3_route_agreement(entries in proptest::collection::vec(0u32..5, 3), seed in 0u64..50) {
            let ctx = free(3, seed);
            let th = ThetaMatrix::from_entries(3, entries).unwrap();
            prop_assert_eq!(c_coeff(&th, &ctx).unwrap(), c3_verbatim(&th, &ctx).unwrap());
        }
    }
}
