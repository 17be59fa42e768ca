//! Three-variable bookkeeping relating `c_3` to the Lassalle–Schlosser
//! coefficient function.
//!
//! Moving the mass of `R_13` onto `R_12 R_23` with weight α turns the
//! raising-operator coefficients into `c̃(θ)`; the check is that `c̃` factors
//! as `C_{θ12}(·) C_{θ13,θ23}(·, ·)`, and that the normalised form
//! `c̃(θ)/c(θ)` equals `(1 - a12)(1 - a13 - a23 + a13,23)`.

use serde::Serialize;

use crate::coeff::c_coeff;
use crate::context::EvalContext;
use crate::error::{Error, Result};
use crate::lassalle::ls_c;
use crate::scalar::{div, pow, Field};
use crate::theta::ThetaMatrix;

fn c3<F: Field>(a: i64, b: i64, c: i64, ctx: &EvalContext<F>) -> Result<F> {
    if a < 0 || b < 0 || c < 0 {
        return Ok(F::zero());
    }
    let th = ThetaMatrix::from_entries(3, vec![a as u32, b as u32, c as u32])?;
    c_coeff(&th, ctx)
}

/// `(1 - x)/(1 - y)`.
fn frac<F: Field>(x: F, y: F, what: &str) -> Result<F> {
    div(&(F::one() - x), &(F::one() - y), what)
}

/// The transfer weight α(a, b, c).
pub fn alpha<F: Field>(a: i64, b: i64, c: i64, ctx: &EvalContext<F>) -> Result<F> {
    let (q, t) = (ctx.q(), ctx.t());
    let r12 = ctx.s_ratio(0, 1)?;
    let tinv = div(&F::one(), t, "1/t")?;
    let qa = pow(q, a, "q^a")?;
    let qd = pow(q, b - c, "q^{b-c}")?;
    let q_hi = pow(q, 2 * a + b - c + 1, "q power")?;
    let q_mid = pow(q, a + b - c + 1, "q power")?;
    Ok(frac(tinv.clone(), qa * tinv.clone(), "α")?
        * frac(qd.clone() * t.clone() * r12.clone(), qd * r12.clone(), "α")?
        * frac(q_hi * tinv * r12.clone(), q_mid * r12, "α")?)
}

/// `c̃(θ)` from the transfer rule.
pub fn c_tilde<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<F> {
    let (a, b, c) = entries(theta)?;
    let mut v = c3(a, b, c, ctx)? - c3(a - 1, b, c, ctx)? - c3(a, b, c - 1, ctx)?
        + c3(a - 2, b, c - 1, ctx)?
        + c3(a, b - 1, c - 1, ctx)?
        - c3(a - 1, b - 1, c - 1, ctx)?;
    let left = c3(a - 1, b, c - 1, ctx)?;
    if !left.is_zero() {
        v = v + alpha(a - 1, b, c - 1, ctx)? * left;
    }
    let right = c3(a, b - 1, c, ctx)?;
    if !right.is_zero() {
        v = v - alpha(a, b - 1, c, ctx)? * right;
    }
    Ok(v)
}

fn entries(theta: &ThetaMatrix) -> Result<(i64, i64, i64)> {
    if theta.n() != 3 {
        return Err(Error::InvalidArgument(format!("θ must be 3x3, got n = {}", theta.n())));
    }
    Ok((
        i64::from(theta.get(0, 1)),
        i64::from(theta.get(0, 2)),
        i64::from(theta.get(1, 2)),
    ))
}

/// `C_{θ12}(q^{θ13-θ23} t^{-1} s1/s2) · C_{θ13,θ23}(t^{-1} s1/s3, t^{-1} s2/s3)`.
pub fn ls_product<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<F> {
    let (a, b, c) = entries(theta)?;
    let (q, t) = (ctx.q(), ctx.t());
    let tinv = div(&F::one(), t, "1/t")?;
    let u12 = pow(q, b - c, "q^{θ13-θ23}")? * tinv.clone() * ctx.s_ratio(0, 1)?;
    let u13 = tinv.clone() * ctx.s_ratio(0, 2)?;
    let u23 = tinv * ctx.s_ratio(1, 2)?;
    Ok(ls_c(&[a as u32], &[u12], q, t)? * ls_c(&[b as u32, c as u32], &[u13, u23], q, t)?)
}

/// `a12, a13, a23, a13,23`.
#[derive(Clone, Debug, PartialEq)]
pub struct AFactors<F> {
    pub a12: F,
    pub a13: F,
    pub a23: F,
    pub a13_23: F,
}

impl<F: Field> AFactors<F> {
    /// `(1 - a12)(1 - a13 - a23 + a13,23)`.
    pub fn product(&self) -> F {
        (F::one() - self.a12.clone())
            * (F::one() - self.a13.clone() - self.a23.clone() + self.a13_23.clone())
    }
}

struct Pieces<F> {
    tinv: F,
    r12: F,
    r13: F,
    r23: F,
    qa: F,
    qb: F,
    qc: F,
    qd: F,
    qad: F,
    qc_neg: F,
}

fn pieces<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<Pieces<F>> {
    let (a, b, c) = entries(theta)?;
    let q = ctx.q();
    Ok(Pieces {
        tinv: div(&F::one(), ctx.t(), "1/t")?,
        r12: ctx.s_ratio(0, 1)?,
        r13: ctx.s_ratio(0, 2)?,
        r23: ctx.s_ratio(1, 2)?,
        qa: pow(q, a, "q^θ12")?,
        qb: pow(q, b, "q^θ13")?,
        qc: pow(q, c, "q^θ23")?,
        qd: pow(q, b - c, "q^{θ13-θ23}")?,
        qad: pow(q, a + b - c, "q power")?,
        qc_neg: pow(q, -c, "q^{-θ23}")?,
    })
}

/// `a12` and `a13,23`, shared by both variants.
fn common<F: Field>(p: &Pieces<F>, t: &F) -> Result<(F, F)> {
    let ti = &p.tinv;
    let a12 = ti.clone()
        * frac(p.qa.clone(), p.qa.clone() * ti.clone(), "a12")?
        * frac(p.qad.clone() * p.r12.clone(), p.qad.clone() * ti.clone() * p.r12.clone(), "a12")?;
    let a13_23 = ti.clone()
        * ti.clone()
        * frac(p.qb.clone(), p.qb.clone() * ti.clone(), "a13,23")?
        * frac(p.qb.clone() * p.r12.clone(), p.qb.clone() * ti.clone() * p.r12.clone(), "a13,23")?
        * frac(p.qb.clone() * p.r13.clone(), p.qb.clone() * ti.clone() * p.r13.clone(), "a13,23")?
        * frac(p.qc.clone(), p.qc.clone() * ti.clone(), "a13,23")?
        * frac(p.qc_neg.clone() * p.r12.clone(), p.qc_neg.clone() * t.clone() * p.r12.clone(), "a13,23")?
        * frac(p.qc.clone() * p.r23.clone(), p.qc.clone() * ti.clone() * p.r23.clone(), "a13,23")?;
    Ok((a12, a13_23))
}

/// The a-factors that make each β-relation hold.
///
/// Compared with [`a_factors_as_printed`], `a13` carries the extra factors
/// `(1 - q^{θ13} s1/s3)/(1 - q^{θ13} t^{-1} s1/s3)` and
/// `(1 - q^{θ13} s1/s2)/(1 - q^{θ13} t^{-1} s1/s2)`, and `a23` carries
/// `(1 - q^{θ23} s2/s3)/(1 - q^{θ23} t^{-1} s2/s3)` and
/// `(1 - q^{-θ23} s1/s2)/(1 - q^{-θ23} t s1/s2)`.
pub fn a_factors<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<AFactors<F>> {
    let p = pieces(theta, ctx)?;
    let t = ctx.t();
    let ti = &p.tinv;
    let (a12, a13_23) = common(&p, t)?;
    let base = a_factors_as_printed(theta, ctx)?;
    let a13 = base.a13
        * frac(p.qb.clone() * p.r13.clone(), p.qb.clone() * ti.clone() * p.r13.clone(), "a13")?
        * frac(p.qb.clone() * p.r12.clone(), p.qb.clone() * ti.clone() * p.r12.clone(), "a13")?;
    let a23 = base.a23
        * frac(p.qc.clone() * p.r23.clone(), p.qc.clone() * ti.clone() * p.r23.clone(), "a23")?
        * frac(p.qc_neg.clone() * p.r12.clone(), p.qc_neg.clone() * t.clone() * p.r12.clone(), "a23")?;
    Ok(AFactors { a12, a13, a23, a13_23 })
}

/// The a-factors in their short published form.
pub fn a_factors_as_printed<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<AFactors<F>> {
    let p = pieces(theta, ctx)?;
    let t = ctx.t();
    let ti = &p.tinv;
    let (a12, a13_23) = common(&p, t)?;
    let a13 = ti.clone()
        * frac(p.qd.clone() * ti.clone() * p.r12.clone(), p.qd.clone() * p.r12.clone(), "a13")?
        * frac(p.qb.clone(), p.qb.clone() * ti.clone(), "a13")?;
    let a23 = ti.clone()
        * frac(p.qd.clone() * t.clone() * p.r12.clone(), p.qd.clone() * p.r12.clone(), "a23")?
        * frac(p.qc.clone(), p.qc.clone() * ti.clone(), "a23")?;
    Ok(AFactors { a12, a13, a23, a13_23 })
}

/// `c̃(θ)/c(θ)` expanded in the ratios `β(i,j,k) = c(θ - (i,j,k))/c(θ)`.
pub fn beta_combination<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<F> {
    let (a, b, c) = entries(theta)?;
    let base = c3(a, b, c, ctx)?;
    let beta = |i: i64, j: i64, k: i64| -> Result<F> { div(&c3(a - i, b - j, c - k, ctx)?, &base, "c(θ)") };
    let mut v = F::one() - beta(1, 0, 0)? - beta(0, 0, 1)? + beta(2, 0, 1)? + beta(0, 1, 1)? - beta(1, 1, 1)?;
    let b101 = beta(1, 0, 1)?;
    if !b101.is_zero() {
        v = v + alpha(a - 1, b, c - 1, ctx)? * b101;
    }
    let b010 = beta(0, 1, 0)?;
    if !b010.is_zero() {
        v = v - alpha(a, b - 1, c, ctx)? * b010;
    }
    Ok(v)
}

/// Per-θ outcome of both routes.
#[derive(Clone, Debug, Serialize)]
pub struct N3Result {
    pub theta: ThetaMatrix,
    /// `c̃(θ) = C · C`.
    pub tilde_ok: bool,
    /// β-combination equals the a-factor product.
    pub beta_ok: bool,
    /// Same with the short a-factors; informational.
    pub beta_as_printed_ok: bool,
    pub tilde: String,
    pub ls_product: String,
}

impl N3Result {
    pub fn holds(&self) -> bool {
        self.tilde_ok && self.beta_ok
    }
}

pub fn n3_tilde_check<F: Field>(theta: &ThetaMatrix, ctx: &EvalContext<F>) -> Result<N3Result> {
    if ctx.n() != 3 {
        return Err(Error::InvalidContext("the check needs n = 3".into()));
    }
    let tilde = c_tilde(theta, ctx)?;
    let prod = ls_product(theta, ctx)?;
    let beta = beta_combination(theta, ctx)?;
    Ok(N3Result {
        theta: theta.clone(),
        tilde_ok: tilde == prod,
        beta_ok: beta == a_factors(theta, ctx)?.product(),
        beta_as_printed_ok: beta == a_factors_as_printed(theta, ctx)?.product(),
        tilde: tilde.render(),
        ls_product: prod.render(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::{free_s_values, generic_points};
    use crate::scalar::Rational;
    use crate::theta::theta_box;
    use num_traits::One;

    fn ctx(seed: u64) -> EvalContext<Rational> {
        let (q, t) = generic_points(1, seed).remove(0);
        EvalContext::free(q, t, free_s_values(3, seed))
    }

    #[test]
    fn zero_theta() {
        let c = ctx(0);
        let z = ThetaMatrix::zero(3);
        assert_eq!(c_tilde(&z, &c).unwrap(), Rational::one());
        assert_eq!(ls_product(&z, &c).unwrap(), Rational::one());
        assert!(n3_tilde_check(&z, &c).unwrap().holds());
    }

    #[test]
    fn all_small_theta() {
        for seed in 0..2 {
            let c = ctx(seed);
            for th in theta_box(3, 2) {
                let r = n3_tilde_check(&th, &c).unwrap();
                assert!(r.holds(), "{th}: {r:?}");
            }
        }
    }

    #[test]
    fn individual_relations() {
        let c = ctx(4);
        for th in theta_box(3, 2) {
            let (a, b, cc) = entries(&th).unwrap();
            let base = c3(a, b, cc, &c).unwrap();
            let beta = |i, j, k| c3(a - i, b - j, cc - k, &c).unwrap() / base.clone();
            let f = a_factors(&th, &c).unwrap();
            assert_eq!(beta(1, 0, 0), f.a12);
            assert_eq!(beta(0, 1, 1), f.a13_23);
            assert_eq!(beta(1, 1, 1), f.a12.clone() * f.a13_23.clone());
            let x = if b > 0 { alpha(a, b - 1, cc, &c).unwrap() * beta(0, 1, 0) } else { Rational::from_integer(0.into()) };
            assert_eq!(x, (Rational::one() - f.a12.clone()) * f.a13.clone(), "{th}");
        }
    }

    #[test]
    fn short_form_misses_cases() {
        let c = ctx(1);
        let th = ThetaMatrix::from_entries(3, vec![0, 1, 0]).unwrap();
        assert!(!n3_tilde_check(&th, &c).unwrap().beta_as_printed_ok);
    }
}
