//! Reusable checks, each producing a [`CheckReport`].

use serde_json::{json, Value};

use crate::context::{deformed_q_zero, deformed_t_power, make_context, EvalContext, Genericity};
use crate::difference::{apply_d1, eigen_residual, g3_core, identity_n3, series_f, ParamOrder};
use crate::error::Result;
use crate::lassalle::ls_q;
use crate::n3::n3_tilde_check;
use crate::oracle::{b_coefficient, macdonald_q, MacdonaldBasis};
use crate::partition::{partitions_of, Partition};
use crate::raising::{compare_operator_coeffs, hl_expansion, limit_symf, raising_q, raising_q_resolved, raising_q_t_power};
use crate::ratfunc::rf_limit_at_one;
use crate::report::{CheckReport, Tier};
use crate::scalar::{Field, Rational};
use crate::symfunc::{g_row, jacobi_trudi_schur, scalar_product, SymF};
use crate::theta::{theta_box, OperatorPolynomial};

fn lam_str(l: &[u32]) -> String {
    l.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn point(q: &Rational, t: &Rational) -> Value {
    json!({ "q": q.render(), "t": t.render() })
}

fn wrap(id: String, anchor: &str, params: Value, body: impl FnOnce() -> Result<CheckReport>) -> CheckReport {
    body().unwrap_or_else(|e| CheckReport::error(id, anchor, params, &e))
}

/// First partition index where two symmetric functions differ.
fn diff_witness<F: Field>(a: &SymF<F>, b: &SymF<F>) -> Value {
    let keys = a.terms().keys().chain(b.terms().keys());
    for k in keys {
        if a.coeff(k) != b.coeff(k) {
            return json!({ "p": k.to_string(), "lhs": a.coeff(k).render(), "rhs": b.coeff(k).render() });
        }
    }
    Value::Null
}

/// `[{index, coeff}]` of `sum c g_{λ+ζ}`, grouped by the shifted index.
pub fn g_expansion_json<F: Field>(op: &OperatorPolynomial<F>, lambda: &[u32]) -> Value {
    let items: Vec<Value> = op
        .by_shift()
        .into_iter()
        .map(|(shift, c)| {
            let idx: Vec<i64> = lambda.iter().zip(&shift).map(|(&l, &z)| i64::from(l) + z).collect();
            json!({ "index": idx, "coeff": c.render() })
        })
        .collect();
    Value::Array(items)
}

/// Unitriangularity, orthogonality and `b_λ` for every partition of `d`,
/// plus `Q_(d) = g_d`.
pub fn check_oracle(d: usize, q: &Rational, t: &Rational) -> CheckReport {
    let id = format!("oracle.d{d}.q{}.t{}", q.render(), t.render());
    let params = json!({ "degree": d, "point": point(q, t) });
    wrap(id.clone(), "Gram–Schmidt oracle", params.clone(), || {
        let basis = MacdonaldBasis::new(d, q, t)?;
        let mut witness = Value::Null;
        for (i, lam) in basis.partitions().iter().enumerate() {
            let p = basis.p(lam).expect("listed");
            let tri = p.coeff(lam) == Rational::from_integer(1.into())
                && p.terms().keys().all(|mu| mu.dominated_by(lam));
            if !tri {
                witness = json!({ "unitriangular": lam.to_string() });
                break;
            }
            for mu in &basis.partitions()[..i] {
                let sp = scalar_product(p, basis.p(mu).expect("listed"), q, t)?;
                if !num_traits::Zero::is_zero(&sp) {
                    witness = json!({ "orthogonal": [lam.to_string(), mu.to_string()] });
                }
            }
            let b = b_coefficient(p, q, t)?;
            if b * scalar_product(p, p, q, t)? != Rational::from_integer(1.into()) {
                witness = json!({ "b": lam.to_string() });
            }
        }
        if d > 0 && witness.is_null() {
            let row = Partition::new(vec![d as u32])?;
            if macdonald_q(&row, q, t)? != g_row(d as i64, q, t)? {
                witness = json!({ "one_row": d });
            }
        }
        Ok(CheckReport::new(id, "Gram–Schmidt oracle", Tier::Hard, witness.is_null(), false, params, witness))
    })
}

/// Raising-operator series against the oracle at one point.
pub fn check_raise(lambda: &[u32], q: &Rational, t: &Rational) -> CheckReport {
    let id = format!("raise.{}.q{}.t{}", lam_str(lambda), q.render(), t.render());
    let params = json!({ "lambda": lambda, "point": point(q, t) });
    wrap(id.clone(), "raising-operator formula", params.clone(), || {
        let ctx = make_context(lambda.len(), Some(lambda), q.clone(), t.clone(), 0, Genericity::Checked)?;
        let got = raising_q_resolved(lambda, &ctx)?;
        let want = macdonald_q(&Partition::new(lambda.to_vec())?, q, t)?;
        Ok(CheckReport::new(id, "raising-operator formula", Tier::Hard, got == want, false, params, diff_witness(&got, &want)))
    })
}

/// Lassalle–Schlosser sum against the oracle at one point.
pub fn check_ls(lambda: &[u32], q: &Rational, t: &Rational) -> CheckReport {
    let id = format!("ls.{}.q{}.t{}", lam_str(lambda), q.render(), t.render());
    let params = json!({ "lambda": lambda, "point": point(q, t) });
    wrap(id.clone(), "Lassalle–Schlosser sum", params.clone(), || {
        make_context(lambda.len(), Some(lambda), q.clone(), t.clone(), 0, Genericity::Checked)?;
        let got = ls_q(lambda, q, t)?;
        let want = macdonald_q(&Partition::new(lambda.to_vec())?, q, t)?;
        Ok(CheckReport::new(id, "Lassalle–Schlosser sum", Tier::Hard, got == want, false, params, diff_witness(&got, &want)))
    })
}

/// Eigen-equation residual with free s. Hard for n ≤ 2.
pub fn check_eigen(n: usize, order: usize, q: &Rational, t: &Rational, seed: u64, param_order: ParamOrder, strict: bool) -> CheckReport {
    let id = format!("eigen.n{n}.N{order}.{param_order}.q{}.t{}.seed{seed}", q.render(), t.render());
    let tier = if n <= 2 { Tier::Hard } else { Tier::Conjecture };
    let params = json!({ "n": n, "N": order, "seed": seed, "param_order": param_order, "point": point(q, t) });
    wrap(id.clone(), "eigenfunction of D1", params.clone(), || {
        let ctx = make_context(n, None, q.clone(), t.clone(), seed, Genericity::Checked)?;
        let res = eigen_residual(&ctx, order, param_order)?;
        let witness = if res.is_zero() { Value::Null } else { json!({ "residual": res }) };
        let mut params = params;
        params["s"] = json!(ctx.s().iter().map(Field::render).collect::<Vec<_>>());
        Ok(CheckReport::new(id, "eigenfunction of D1", tier, res.is_zero(), strict, params, witness))
    })
}

/// Eigen-equation residual at `t = q^k`, through the deformation `t = q^k z`.
pub fn check_eigen_t_power(n: usize, k: u32, order: usize, q: &Rational, seed: u64) -> CheckReport {
    let id = format!("eigen.tpow.n{n}.k{k}.N{order}.q{}.seed{seed}", q.render());
    let params = json!({ "n": n, "k": k, "N": order, "q": q.render(), "seed": seed });
    wrap(id.clone(), "eigenfunction of D1 at t = q^k", params.clone(), || {
        let s = crate::context::free_s_values(n, seed);
        let ctx = deformed_t_power(None, &s, q, k)?;
        let res = eigen_residual(&ctx, order, ParamOrder::QT)?.map_coeffs(rf_limit_at_one)?;
        let witness = if res.is_zero() { Value::Null } else { json!({ "residual": res }) };
        Ok(CheckReport::new(id, "eigenfunction of D1 at t = q^k", Tier::Hard, res.is_zero(), false, params, witness))
    })
}

/// `c_n(θ) = 0` at `t = q^k` whenever some entry is at least k.
pub fn check_t_power_vanishing(n: usize, k: u32, q: &Rational, seed: u64) -> CheckReport {
    let id = format!("cvanish.n{n}.k{k}.q{}", q.render());
    let params = json!({ "n": n, "k": k, "q": q.render(), "seed": seed, "bound": k + 1 });
    wrap(id.clone(), "c_n at t = q^k", params.clone(), || {
        let s = crate::context::free_s_values(n, seed);
        let ctx = deformed_t_power(None, &s, q, k)?;
        let mut witness = Value::Null;
        for th in theta_box(n, k + 1) {
            if th.entries().iter().any(|&e| e >= k) {
                let v = rf_limit_at_one(&crate::coeff::c_coeff(&th, &ctx)?)?;
                if !num_traits::Zero::is_zero(&v) {
                    witness = json!({ "theta": th, "value": v.render() });
                    break;
                }
            }
        }
        Ok(CheckReport::new(id, "c_n at t = q^k", Tier::Hard, witness.is_null(), false, params, witness))
    })
}

/// Coefficient comparison between the two expansions.
pub fn check_compare(lambda: &[u32], bound: u32, q: &Rational, t: &Rational, tier: Tier, strict: bool) -> CheckReport {
    let id = format!("compare.{}.b{bound}.q{}.t{}", lam_str(lambda), q.render(), t.render());
    let params = json!({ "lambda": lambda, "bound": bound, "point": point(q, t) });
    wrap(id.clone(), "coefficient comparison", params.clone(), || {
        let rep = compare_operator_coeffs(lambda, bound, q, t)?;
        let holds = rep.holds;
        Ok(CheckReport::new(id, "coefficient comparison", tier, holds, strict, params, serde_json::to_value(&rep).expect("serialisable")))
    })
}

/// The three-variable hypergeometric identity at free s.
pub fn check_identity_n3(order: usize, q: &Rational, t: &Rational, seed: u64, strict: bool) -> CheckReport {
    let id = format!("identity_n3.N{order}.q{}.t{}.seed{seed}", q.render(), t.render());
    let params = json!({ "N": order, "seed": seed, "point": point(q, t) });
    wrap(id.clone(), "hypergeometric form, n = 3", params.clone(), || {
        let ctx = make_context(3, None, q.clone(), t.clone(), seed, Genericity::Checked)?;
        let cmp = identity_n3(&ctx, order)?;
        let holds = cmp.holds;
        Ok(CheckReport::new(id, "hypergeometric form, n = 3", Tier::Conjecture, holds, strict, params, serde_json::to_value(&cmp).expect("serialisable")))
    })
}

/// Transfer identity and β-relation for every θ with entries `≤ bound`.
pub fn check_n3_tilde(bound: u32, q: &Rational, t: &Rational, seed: u64) -> CheckReport {
    let id = format!("n3_tilde.b{bound}.q{}.t{}.seed{seed}", q.render(), t.render());
    let params = json!({ "bound": bound, "seed": seed, "point": point(q, t) });
    wrap(id.clone(), "three-variable transfer identity", params.clone(), || {
        let ctx = make_context(3, None, q.clone(), t.clone(), seed, Genericity::Checked)?;
        let mut witness = Value::Null;
        let mut short_form_failures = 0;
        for th in theta_box(3, bound) {
            let r = n3_tilde_check(&th, &ctx)?;
            if !r.beta_as_printed_ok {
                short_form_failures += 1;
            }
            if !r.holds() && witness.is_null() {
                witness = serde_json::to_value(&r).expect("serialisable");
            }
        }
        let holds = witness.is_null();
        let mut params = params;
        params["short_form_beta_failures"] = json!(short_form_failures);
        Ok(CheckReport::new(id, "three-variable transfer identity", Tier::Hard, holds, false, params, witness))
    })
}

/// Raising series at `t = q` (limit of `t = q z`) against Jacobi–Trudi.
pub fn check_schur(lambda: &[u32], q: &Rational) -> CheckReport {
    let id = format!("schur.{}.q{}", lam_str(lambda), q.render());
    let params = json!({ "lambda": lambda, "q": q.render() });
    wrap(id.clone(), "Schur specialisation t = q", params.clone(), || {
        let got = raising_q_t_power(lambda, q, 1)?;
        let want = jacobi_trudi_schur(&Partition::new(lambda.to_vec())?, q)?;
        Ok(CheckReport::new(id, "Schur specialisation t = q", Tier::Hard, got == want, false, params, diff_witness(&got, &want)))
    })
}

/// Raising series and the `(1-R)/(1-tR)` expansion at `q = 0` against the oracle.
pub fn check_hall_littlewood(lambda: &[u32], t: &Rational) -> CheckReport {
    let id = format!("hl.{}.t{}", lam_str(lambda), t.render());
    let params = json!({ "lambda": lambda, "t": t.render() });
    wrap(id.clone(), "Hall–Littlewood specialisation q = 0", params.clone(), || {
        let zero = Rational::from_integer(0.into());
        let want = macdonald_q(&Partition::new(lambda.to_vec())?, &zero, t)?;
        let ctx = deformed_q_zero(lambda, t)?;
        let raised = limit_symf(&raising_q(lambda, &ctx)?, &zero)?;
        let hl = hl_expansion(lambda, t)?;
        let witness = if raised != want {
            json!({ "route": "raising", "diff": diff_witness(&raised, &want) })
        } else if hl != want {
            json!({ "route": "hall_littlewood", "diff": diff_witness(&hl, &want) })
        } else {
            Value::Null
        };
        Ok(CheckReport::new(id, "Hall–Littlewood specialisation q = 0", Tier::Hard, witness.is_null(), false, params, witness))
    })
}

/// Coefficients up to `order` do not depend on a wider truncation.
pub fn check_truncation(n: usize, order: usize, q: &Rational, t: &Rational, seed: u64) -> CheckReport {
    let id = format!("truncation.n{n}.N{order}.q{}.t{}.seed{seed}", q.render(), t.render());
    let params = json!({ "n": n, "N": order, "seed": seed, "point": point(q, t) });
    wrap(id.clone(), "truncation closure", params.clone(), || {
        let ctx: EvalContext<Rational> = make_context(n, None, q.clone(), t.clone(), seed, Genericity::Checked)?;
        let wide = order + 2;
        let f_wide = series_f(&ctx, wide)?;
        let f = series_f(&ctx, order)?;
        let mut failures = Vec::new();
        if f_wide.truncate(order) != f {
            failures.push("series_f");
        }
        if apply_d1(&f_wide, &ctx, wide, ParamOrder::QT)?.truncate(order) != apply_d1(&f, &ctx, order, ParamOrder::QT)? {
            failures.push("apply_d1");
        }
        if n == 3 && g3_core(&ctx, wide)?.truncate(order) != g3_core(&ctx, order)? {
            failures.push("series_g3");
        }
        let witness = if failures.is_empty() { Value::Null } else { json!({ "operations": failures }) };
        Ok(CheckReport::new(id, "truncation closure", Tier::Hard, failures.is_empty(), false, params, witness))
    })
}

/// Zero-padded partitions of weight `1..=max_weight` with at most `n` parts.
pub fn padded_shapes(max_weight: usize, n: usize) -> Vec<Vec<u32>> {
    (1..=max_weight)
        .flat_map(|d| crate::partition::padded_partitions(d, n))
        .collect()
}

/// All partitions of weight `1..=max_weight` (unpadded).
pub fn shapes(max_weight: usize) -> Vec<Partition> {
    (1..=max_weight).flat_map(partitions_of).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::default_points;
    use crate::report::Status;
    use crate::scalar::rat;

    #[test]
    fn representative_checks_pass() {
        let (q, t) = default_points().remove(0);
        assert_eq!(check_oracle(3, &q, &t).status, Status::Pass);
        assert_eq!(check_raise(&[2, 1, 0], &q, &t).status, Status::Pass);
        assert_eq!(check_ls(&[2, 1, 0], &q, &t).status, Status::Pass);
        assert_eq!(check_eigen(2, 4, &q, &t, 1, ParamOrder::QT, false).status, Status::Pass);
        assert_eq!(check_schur(&[2, 1], &rat(2, 3)).status, Status::Pass);
        assert_eq!(check_hall_littlewood(&[2, 1, 0], &rat(5, 7)).status, Status::Pass);
        assert_eq!(check_truncation(3, 2, &q, &t, 0).status, Status::Pass);
        assert_eq!(check_t_power_vanishing(3, 2, &rat(2, 3), 0).status, Status::Pass);
    }

    #[test]
    fn wrong_order_fails_hard_check() {
        let (q, t) = default_points().remove(0);
        let r = check_eigen(2, 3, &q, &t, 1, ParamOrder::TQ, false);
        assert_eq!(r.status, Status::Fail);
        assert!(!r.witness.is_null());
    }

    #[test]
    fn errors_become_failures() {
        let r = check_raise(&[1, 1], &rat(1, 1), &rat(5, 7));
        assert_eq!(r.status, Status::Fail);
        assert!(r.witness["error"].is_string());
    }

    #[test]
    fn shape_lists() {
        assert_eq!(padded_shapes(2, 2), vec![vec![1, 0], vec![1, 1], vec![2, 0]]);
        assert_eq!(shapes(3).len(), 1 + 2 + 3);
    }
}
