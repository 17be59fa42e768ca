//! The Lassalle–Schlosser expansion of `Q_λ` and its coefficient function.
//!
//! `C_θ(u)` is a product of q-Pochhammer ratios times a determinant factor.
//! The determinant factor is evaluated by its subset expansion, with one
//! extra variable `u_{k+1} = 1/t` in the last product; the determinant itself
//! is kept as an independent route for tests.

use crate::error::{Error, Result};
use crate::linalg;
use crate::ratfunc::{rf_limit_at_one, RatFunc};
use crate::scalar::{div, pow, q_pochhammer, Field, Rational};
use crate::symfunc::{GFamily, SymF};
use crate::theta::{theta_support, OperatorPolynomial, ThetaMatrix};

fn poch_ratio<F: Field>(num: &F, den: &F, q: &F, k: u32, what: &str) -> Result<F> {
    let k = k as usize;
    div(&q_pochhammer(num, q, k), &q_pochhammer(den, q, k), what)
}

fn v_values<F: Field>(block: &[u32], u: &[F], q: &F) -> Result<Vec<F>> {
    block
        .iter()
        .zip(u)
        .map(|(&th, ui)| Ok(pow(q, i64::from(th), "q^θ")? * ui.clone()))
        .collect()
}

/// The q-Pochhammer part of `C_θ(u)`.
pub fn ls_prefactor<F: Field>(block: &[u32], u: &[F], q: &F, t: &F) -> Result<F> {
    let k = block.len();
    let v = v_values(block, u, q)?;
    let q_over_t = div(q, t, "q/t")?;
    let mut acc = F::one();
    for a in 0..k {
        let th = block[a];
        if th == 0 {
            continue;
        }
        acc = acc
            * pow(t, i64::from(th), "t^θ")?
            * poch_ratio(&q_over_t, q, q, th, "(q;q)_θ")?
            * poch_ratio(
                &(q.clone() * u[a].clone()),
                &(q.clone() * t.clone() * u[a].clone()),
                q,
                th,
                "(q t u;q)_θ",
            )?;
        for b in a + 1..k {
            let ua_ub = div(&u[a], &u[b], "u_i/u_j")?;
            let ua_vb = div(&u[a], &v[b], "u_i/v_j")?;
            acc = acc
                * poch_ratio(
                    &(q_over_t.clone() * ua_ub.clone()),
                    &(q.clone() * ua_ub),
                    q,
                    th,
                    "(q u_i/u_j;q)_θ",
                )?
                * poch_ratio(&(t.clone() * ua_vb.clone()), &ua_vb, q, th, "(u_i/v_j;q)_θ")?;
        }
    }
    Ok(acc)
}

/// Determinant factor by the subset expansion.
pub fn ls_det_subset<F: Field>(block: &[u32], u: &[F], q: &F, t: &F) -> Result<F> {
    let k = block.len();
    let v = v_values(block, u, q)?;
    let tinv = div(&F::one(), t, "1/t")?;
    let v_t: Vec<F> = v.iter().map(|x| x.clone() * tinv.clone()).collect();
    let mut us: Vec<F> = u.to_vec();
    us.push(tinv.clone());
    let mut total = F::zero();
    for mask in 0u32..(1 << k) {
        let size = mask.count_ones() as i64;
        let mut term = pow(&tinv, size * (size + 1) / 2, "t power")?;
        if size % 2 == 1 {
            term = -term;
        }
        for kk in (0..k).filter(|&x| mask & (1 << x) != 0) {
            for j in (0..k).filter(|&x| mask & (1 << x) == 0) {
                term = term
                    * div(
                        &(v[j].clone() - v_t[kk].clone()),
                        &(v[j].clone() - v[kk].clone()),
                        "v_j - v_k",
                    )?;
            }
            for ui in &us {
                term = term
                    * div(
                        &(ui.clone() - v[kk].clone()),
                        &(ui.clone() - v_t[kk].clone()),
                        "u_i - v_k/t",
                    )?;
            }
        }
        total = total + term;
    }
    Ok(total)
}

/// Determinant factor as `det[...] / Δ(v)`; `None` when `Δ(v) = 0`.
pub fn ls_det_matrix<F: Field>(block: &[u32], u: &[F], q: &F, t: &F) -> Result<Option<F>> {
    let k = block.len();
    let v = v_values(block, u, q)?;
    let mut delta = F::one();
    for i in 0..k {
        for j in i + 1..k {
            delta = delta * (v[i].clone() - v[j].clone());
        }
    }
    if delta.is_zero() {
        return Ok(None);
    }
    let mut m = vec![vec![F::zero(); k]; k];
    for i in 0..k {
        let mut prod = div(
            &(F::one() - t.clone() * v[i].clone()),
            &(F::one() - v[i].clone()),
            "1 - v_i",
        )?;
        for uk in u {
            prod = prod
                * div(
                    &(uk.clone() - v[i].clone()),
                    &(t.clone() * uk.clone() - v[i].clone()),
                    "t u_k - v_i",
                )?;
        }
        for j in 0..k {
            let corr = pow(t, j as i64, "t^{j-1}")? * prod.clone();
            m[i][j] = pow(&v[i], (k - 1 - j) as i64, "v_i power")? * (F::one() - corr);
        }
    }
    Ok(Some(div(&linalg::determinant(&m), &delta, "Δ(v)")?))
}

/// `C_θ(u)`; fails with `ZeroDenominator` at non-generic u.
pub fn ls_c<F: Field>(block: &[u32], u: &[F], q: &F, t: &F) -> Result<F> {
    if block.iter().all(|&b| b == 0) {
        return Ok(F::one());
    }
    Ok(ls_prefactor(block, u, q, t)? * ls_det_subset(block, u, q, t)?)
}

/// `C_θ(u)` at rational arguments. If a denominator vanishes, `u_i` is
/// replaced by `u_i z^i` and the limit `z -> 1` is taken.
pub fn ls_c_resolved(block: &[u32], u: &[Rational], q: &Rational, t: &Rational) -> Result<Rational> {
    match ls_c(block, u, q, t) {
        Err(Error::ZeroDenominator(_)) => {
            let z = RatFunc::z();
            let ud: Vec<RatFunc> = u
                .iter()
                .enumerate()
                .map(|(i, x)| RatFunc::constant(x.clone()) * z.powi(i as i64 + 1).expect("z"))
                .collect();
            let qz = RatFunc::constant(q.clone());
            let tz = RatFunc::constant(t.clone());
            let value = ls_c(block, &ud, &qz, &tz)?;
            rf_limit_at_one(&value).map_err(|_| Error::UncancelledPole(format!("C_{block:?}")))
        }
        other => other,
    }
}

/// `u_i = q^{λ_i - λ_c + ξ} t^{c-1-i}` for `i < c`, for column `c` (0-based).
pub fn ls_u_values<F: Field>(lambda: &[u32], theta: &ThetaMatrix, c: usize, q: &F, t: &F) -> Result<Vec<F>> {
    (0..c)
        .map(|i| {
            let e = i64::from(lambda[i]) - i64::from(lambda[c]) + theta.xi(i, c);
            Ok(pow(q, e, "q power in u")? * pow(t, (c - 1 - i) as i64, "t power in u")?)
        })
        .collect()
}

/// Coefficient of `g_{λ+ζ(θ)}` in the expansion, generic field.
pub fn ls_coeff<F: Field>(lambda: &[u32], theta: &ThetaMatrix, q: &F, t: &F) -> Result<F> {
    let mut acc = F::one();
    for c in 1..lambda.len() {
        let u = ls_u_values(lambda, theta, c, q, t)?;
        acc = acc * ls_c(&theta.column(c), &u, q, t)?;
    }
    Ok(acc)
}

/// Coefficient of `g_{λ+ζ(θ)}` at rational (q, t), resolving 0/0 columns.
pub fn ls_coeff_resolved(lambda: &[u32], theta: &ThetaMatrix, q: &Rational, t: &Rational) -> Result<Rational> {
    let mut acc = Rational::from_integer(1.into());
    for c in 1..lambda.len() {
        let u = ls_u_values(lambda, theta, c, q, t)?;
        acc *= ls_c_resolved(&theta.column(c), &u, q, t)?;
    }
    Ok(acc)
}

/// All nonzero LS coefficients over the support of λ (zero-padded).
pub fn ls_operator(lambda: &[u32], q: &Rational, t: &Rational) -> Result<OperatorPolynomial<Rational>> {
    let mut op = OperatorPolynomial::new(lambda.len());
    for th in theta_support(lambda) {
        let c = ls_coeff_resolved(lambda, &th, q, t)?;
        op.add_term(th, c);
    }
    Ok(op)
}

/// `Q_λ` from the Lassalle–Schlosser sum, in the power-sum basis.
pub fn ls_q(lambda: &[u32], q: &Rational, t: &Rational) -> Result<SymF<Rational>> {
    let op = ls_operator(lambda, q, t)?;
    let g = GFamily::new(lambda.iter().sum::<u32>() as usize, q, t)?;
    op.apply(lambda, &g)
}
