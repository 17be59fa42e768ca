//! The modified Macdonald difference operator on ratio series, the series f
//! built from `c_n`, and the three-variable hypergeometric form.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeff::c_coeff;
use crate::context::EvalContext;
use crate::error::{Error, Result};
use crate::scalar::{div, pow, q_pochhammer, Field};
use crate::series::{ratio_exponents, RatioSeries};
use crate::theta::theta_up_to_degree;

/// Which of (q, t) feeds the operator's prefactors as its first parameter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamOrder {
    #[default]
    QT,
    TQ,
}

impl FromStr for ParamOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qt" => Ok(Self::QT),
            "tq" => Ok(Self::TQ),
            other => Err(Error::InvalidArgument(format!("parameter order {other:?}"))),
        }
    }
}

impl fmt::Display for ParamOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::QT => "qt",
            Self::TQ => "tq",
        })
    }
}

/// `sum_θ c_n(θ) prod (x_j/x_i)^{θ_{i,j}}` up to degree `order`.
pub fn theta_series<F: Field>(ctx: &EvalContext<F>, order: usize) -> Result<RatioSeries<F>> {
    let n = ctx.n();
    let mut s = RatioSeries::zero(n, order);
    for th in theta_up_to_degree(n, order) {
        s.add_term(th.ratio_exponents(), c_coeff(&th, ctx)?);
    }
    Ok(s)
}

/// `f = prod_{k<l} (1 - x_l/x_k) · sum_θ c_n(θ) x^θ`, truncated.
pub fn series_f<F: Field>(ctx: &EvalContext<F>, order: usize) -> Result<RatioSeries<F>> {
    Ok(RatioSeries::vandermonde_ratio(ctx.n(), order).mul(&theta_series(ctx, order)?))
}

/// `T_{q^{-1}, x_i}`: `x_i -> x_i / q` on every monomial.
fn shift_down<F: Field>(f: &RatioSeries<F>, i: usize, q: &F) -> Result<RatioSeries<F>> {
    let mut out = RatioSeries::zero(f.n(), f.order());
    for (e, c) in f.terms() {
        let before = if i == 0 { 0 } else { i64::from(e[i - 1]) };
        let after = e.get(i).copied().map_or(0, i64::from);
        out.add_term(e.clone(), c.clone() * pow(q, after - before, "q^{-1} shift")?);
    }
    Ok(out)
}

/// `D^1 F = sum_i s_i prod_{j<i} θ^-(x_i/x_j) prod_{k>i} θ^+(x_k/x_i) T_{q^{-1},x_i} F`.
pub fn apply_d1<F: Field>(f: &RatioSeries<F>, ctx: &EvalContext<F>, order: usize, param_order: ParamOrder) -> Result<RatioSeries<F>> {
    let n = ctx.n();
    let (big_q, big_t) = match param_order {
        ParamOrder::QT => (ctx.q().clone(), ctx.t().clone()),
        ParamOrder::TQ => (ctx.t().clone(), ctx.q().clone()),
    };
    let one_minus_t = F::one() - big_t.clone();
    let one_minus_tinv = F::one() - div(&F::one(), &big_t, "1/t")?;
    let input = f.truncate(order);
    let mut out = RatioSeries::zero(n, order);
    for i in 0..n {
        let mut pre = RatioSeries::one(n, order);
        for j in 0..i {
            let g = RatioSeries::ratio_geometric(n, order, j, i, |m| {
                Ok(one_minus_t.clone() * pow(&big_q, -i64::from(m), "Q^{-m}")?)
            })?;
            pre = pre.mul(&g);
        }
        for k in i + 1..n {
            let g = RatioSeries::ratio_geometric(n, order, i, k, |m| {
                Ok(one_minus_tinv.clone() * pow(&big_q, i64::from(m), "Q^m")?)
            })?;
            pre = pre.mul(&g);
        }
        let term = pre.mul(&shift_down(&input, i, ctx.q())?);
        out = out.add(&term.scale(&ctx.s()[i]));
    }
    Ok(out)
}

/// `D^1 f - (sum_i s_i) f` up to degree `order`.
pub fn eigen_residual<F: Field>(ctx: &EvalContext<F>, order: usize, param_order: ParamOrder) -> Result<RatioSeries<F>> {
    let f = series_f(ctx, order)?;
    let eig = ctx.s().iter().cloned().fold(F::zero(), |a, b| a + b);
    Ok(apply_d1(&f, ctx, order, param_order)?.sub(&f.scale(&eig)))
}

/// Coefficients `(a;q)_m (b;q)_m / ((q;q)_m (c;q)_m)` for `m = 0..=order`.
pub fn phi21_truncated<F: Field>(a: &F, b: &F, c: &F, q: &F, order: usize) -> Result<Vec<F>> {
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order {
        let den = q_pochhammer(q, q, m) * q_pochhammer(c, q, m);
        let num = q_pochhammer(a, q, m) * q_pochhammer(b, q, m);
        out.push(div(&num, &den, &format!("2phi1 term {m}"))?);
    }
    Ok(out)
}

/// The k-sum with the three 2phi1 factors, without `prod (1 - x_j/x_i)`.
pub fn g3_core<F: Field>(ctx: &EvalContext<F>, order: usize) -> Result<RatioSeries<F>> {
    if ctx.n() != 3 {
        return Err(Error::InvalidContext("the hypergeometric form needs n = 3".into()));
    }
    let (q, t) = (ctx.q(), ctx.t());
    let q_over_t = div(q, t, "q/t")?;
    let r12 = ctx.s_ratio(0, 1)?;
    let r13 = ctx.s_ratio(0, 2)?;
    let r23 = ctx.s_ratio(1, 2)?;
    let mut out = RatioSeries::zero(3, order);
    let mut k = 0usize;
    while 2 * k <= order {
        let num = q_pochhammer(&q_over_t, q, k).powi(2).expect("square")
            * q_pochhammer(t, q, k).powi(2).expect("square");
        let den = q_pochhammer(q, q, k)
            * q_pochhammer(&(q.clone() * r12.clone()), q, k)
            * q_pochhammer(&(q.clone() * r23.clone()), q, k)
            * q_pochhammer(&(q.clone() * r13.clone()), q, k);
        let lead = div(&num, &den, "k-sum denominator")?
            * pow(&(q.clone() * r13.clone()), k as i64, "(q s1/s3)^k")?;
        let mut term = RatioSeries::zero(3, order);
        term.add_term(ratio_exponents(3, 0, 2, k as u32), lead);
        let qk1 = pow(q, k as i64 + 1, "q^{k+1}")?;
        for (i, j, r) in [(0, 1, &r12), (0, 2, &r13), (1, 2, &r23)] {
            let a = div(&qk1, t, "q^{k+1}/t")?;
            let b = q_over_t.clone() * r.clone();
            let c = qk1.clone() * r.clone();
            let coeffs = phi21_truncated(&a, &b, &c, q, order)?;
            let factor = RatioSeries::ratio_geometric(3, order, i, j, |m| {
                Ok(coeffs[m as usize].clone() * pow(t, i64::from(m), "t^m")?)
            })?;
            term = term.mul(&factor);
        }
        out = out.add(&term);
        k += 1;
    }
    Ok(out)
}

/// The conjectured hypergeometric form of f for n = 3.
pub fn series_g3<F: Field>(ctx: &EvalContext<F>, order: usize) -> Result<RatioSeries<F>> {
    Ok(RatioSeries::vandermonde_ratio(3, order).mul(&g3_core(ctx, order)?))
}

/// Coefficientwise comparison of two series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesComparison {
    pub order: usize,
    pub mismatches: usize,
    pub holds: bool,
    pub witness: Option<SeriesWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesWitness {
    pub exponents: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

pub fn compare_series<F: Field>(lhs: &RatioSeries<F>, rhs: &RatioSeries<F>) -> SeriesComparison {
    let order = lhs.order().min(rhs.order());
    let diff = lhs.truncate(order).sub(&rhs.truncate(order));
    let witness = diff.terms().keys().next().map(|e| SeriesWitness {
        exponents: e.clone(),
        lhs: lhs.coeff(e).render(),
        rhs: rhs.coeff(e).render(),
    });
    SeriesComparison {
        order,
        mismatches: diff.terms().len(),
        holds: diff.is_zero(),
        witness,
    }
}

/// `sum_θ c_3(θ) x^θ` against the k-sum with 2phi1 factors, as printed.
pub fn identity_n3<F: Field>(ctx: &EvalContext<F>, order: usize) -> Result<SeriesComparison> {
    Ok(compare_series(&theta_series(ctx, order)?, &g3_core(ctx, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::jj_difference;
    use crate::context::{deformed_q_zero, deformed_t_power, free_s_values, generic_points};
    use crate::ratfunc::{rf_limit_at_one, RatFunc};
    use crate::scalar::{rat, Rational};
    use num_traits::{One, Zero};

    fn free(n: usize, seed: u64) -> EvalContext<Rational> {
        let (q, t) = generic_points(1, seed).remove(0);
        EvalContext::free(q, t, free_s_values(n, seed))
    }

    #[test]
    fn param_order_parsing() {
        assert_eq!("qt".parse::<ParamOrder>().unwrap(), ParamOrder::QT);
        assert_eq!("TQ".parse::<ParamOrder>().unwrap(), ParamOrder::TQ);
        assert!("qq".parse::<ParamOrder>().is_err());
        assert_eq!(ParamOrder::default().to_string(), "qt");
    }

    #[test]
    fn f_constant_term_and_two_variables() {
        let ctx = free(2, 0);
        let f = series_f(&ctx, 5).unwrap();
        assert_eq!(f.coeff(&[0]), Rational::one());
        for m in 1..=5 {
            assert_eq!(f.coeff(&[m]), jj_difference(m, &ctx).unwrap());
        }
    }

    #[test]
    fn f_at_t_equals_q() {
        let q = rat(2, 3);
        let ctx = EvalContext::free(q.clone(), q, free_s_values(3, 1));
        assert_eq!(series_f(&ctx, 4).unwrap(), RatioSeries::vandermonde_ratio(3, 4));
    }

    #[test]
    fn d1_on_constants() {
        let ctx = free(3, 2);
        let out = apply_d1(&RatioSeries::one(3, 3), &ctx, 3, ParamOrder::QT).unwrap();
        let sum: Rational = ctx.s().iter().cloned().sum();
        assert_eq!(out.coeff(&[0, 0]), sum);
        let ctx = free(1, 2);
        let out = apply_d1(&RatioSeries::one(1, 3), &ctx, 3, ParamOrder::QT).unwrap();
        let mut expect = RatioSeries::zero(1, 3);
        expect.add_term(vec![], ctx.s()[0].clone());
        assert_eq!(out, expect);
    }

    #[test]
    fn d1_is_degree_causal() {
        let ctx = free(3, 3);
        let f = series_f(&ctx, 4).unwrap();
        let mut g = f.clone();
        g.add_term(vec![2, 2], rat(7, 1));
        g.add_term(vec![0, 4], rat(-3, 2));
        let a = apply_d1(&f, &ctx, 4, ParamOrder::QT).unwrap().truncate(3);
        let b = apply_d1(&g, &ctx, 4, ParamOrder::QT).unwrap().truncate(3);
        assert_eq!(a, b);
    }

    #[test]
    fn eigenfunction_two_variables() {
        for seed in 0..3 {
            let ctx = free(2, seed);
            assert!(eigen_residual(&ctx, 5, ParamOrder::QT).unwrap().is_zero());
            assert!(!eigen_residual(&ctx, 5, ParamOrder::TQ).unwrap().is_zero());
        }
    }

    #[test]
    fn eigenfunction_three_variables() {
        let ctx = free(3, 4);
        assert!(eigen_residual(&ctx, 3, ParamOrder::QT).unwrap().is_zero());
    }

    #[test]
    fn truncation_closure() {
        let ctx = free(3, 5);
        assert_eq!(series_f(&ctx, 5).unwrap().truncate(3), series_f(&ctx, 3).unwrap());
        assert_eq!(g3_core(&ctx, 5).unwrap().truncate(3), g3_core(&ctx, 3).unwrap());
        let f5 = series_f(&ctx, 5).unwrap();
        let wide = apply_d1(&f5, &ctx, 5, ParamOrder::QT).unwrap().truncate(3);
        let narrow = apply_d1(&f5.truncate(3), &ctx, 3, ParamOrder::QT).unwrap();
        assert_eq!(wide, narrow);
    }

    #[test]
    fn phi21_examples() {
        let q = rat(2, 3);
        let c = phi21_truncated(&Rational::one(), &rat(3, 5), &rat(7, 11), &q, 4).unwrap();
        assert_eq!(c[0], Rational::one());
        assert!(c[1..].iter().all(Zero::is_zero));
        let bad = phi21_truncated(&rat(1, 2), &rat(1, 3), &(Rational::one() / q.clone()), &q, 3);
        assert!(matches!(bad, Err(Error::ZeroDenominator(msg)) if msg.contains("term 2")));
    }

    #[test]
    fn phi21_q_zero_limit() {
        // a = q/t, b = q t^{-1} r, c = q r with q = z -> 0, times t^m.
        let t = rat(5, 7);
        let r = rat(11, 13);
        let z = RatFunc::z();
        let tz = RatFunc::constant(t.clone());
        let rz = RatFunc::constant(r);
        let a = z.clone() * tz.checked_inv().unwrap();
        let b = a.clone() * rz.clone();
        let c = z.clone() * rz;
        let coeffs = phi21_truncated(&a, &b, &c, &z, 4).unwrap();
        for (m, cm) in coeffs.iter().enumerate() {
            let lim = cm.limit_at(&Rational::zero()).unwrap();
            assert_eq!(lim * t.powi(m as i64).unwrap(), t.powi(m as i64).unwrap());
        }
    }

    #[test]
    fn g3_specialisations() {
        let q = rat(2, 3);
        let ctx = EvalContext::free(q.clone(), q, free_s_values(3, 0));
        assert_eq!(series_g3(&ctx, 4).unwrap(), RatioSeries::vandermonde_ratio(3, 4));
        assert_eq!(series_g3(&free(3, 0), 4).unwrap().coeff(&[0, 0]), Rational::one());

        let t = rat(5, 7);
        let ctx = deformed_q_zero(&[2, 1, 0], &t).unwrap();
        let g = series_g3(&ctx, 4).unwrap().map_coeffs(|c| c.limit_at(&Rational::zero())).unwrap();
        let mut expect = RatioSeries::vandermonde_ratio(3, 4);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            expect = expect.mul(
                &RatioSeries::ratio_geometric(3, 4, i, j, |m| Ok(t.powi(i64::from(m)).unwrap())).unwrap(),
            );
        }
        assert_eq!(g, expect);
    }

    #[test]
    fn identity_three_variables() {
        assert!(identity_n3(&free(3, 0), 0).unwrap().holds);
        assert!(identity_n3(&free(3, 0), 4).unwrap().holds);
        let q = rat(2, 3);
        let ctx = EvalContext::free(q.clone(), q, free_s_values(3, 0));
        assert!(identity_n3(&ctx, 4).unwrap().holds);
    }

    #[test]
    fn deformed_eigen_t_q_squared() {
        let q = rat(2, 3);
        let ctx = deformed_t_power(None, &free_s_values(3, 0), &q, 2).unwrap();
        let res = eigen_residual(&ctx, 3, ParamOrder::QT).unwrap();
        let lim = res.map_coeffs(rf_limit_at_one).unwrap();
        assert!(lim.is_zero());
    }
}
