//! Acceptance run: one line per criterion, nonzero exit if a hard check fails.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsym_core::coeff::{c2_recurrence_ratio, c2_verbatim, c3_verbatim, c_coeff, jj_closed_form, jj_difference};
use qsym_core::context::{default_points, generic_points};
use qsym_core::difference::ParamOrder;
use qsym_core::lassalle::{ls_det_matrix, ls_det_subset};
use qsym_core::partition::{padded_partitions, partitions_of};
use qsym_core::report::{CheckReport, Status, Tier};
use qsym_core::scalar::rat;
use qsym_core::suite::*;
use qsym_core::symfunc::g_row;
use qsym_core::theta::{theta_box, ThetaMatrix};
use qsym_core::{make_context, EvalContext, Genericity, Rational};

struct Outcome {
    checks: Vec<CheckReport>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn push(&mut self, c: CheckReport) {
        self.checks.push(c);
    }

    fn hard(&mut self, id: String, holds: bool, witness: serde_json::Value) {
        self.push(CheckReport::new(id, "", Tier::Hard, holds, false, serde_json::Value::Null, witness));
    }

    fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }
}

fn criterion(no: u32, title: &str, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut out = Outcome::new();
    body(&mut out);
    let (pass, fail, rep) = (out.count(Status::Pass), out.count(Status::Fail), out.count(Status::Reported));
    let verdict = if fail > 0 { "FAIL" } else { "PASS" };
    let note = if rep > 0 { format!(", {rep} reported") } else { String::new() };
    println!(
        "criterion {no}: {verdict}  {title}  [{pass} passed, {fail} failed{note}; {:.1}s]",
        start.elapsed().as_secs_f64()
    );
    for c in out.checks.iter().filter(|c| c.status != Status::Pass) {
        println!("    {:?} {} {}", c.status, c.check_id, c.witness);
    }
    fail == 0
}

fn free(n: usize, seed: u64) -> EvalContext<Rational> {
    let (q, t) = generic_points(1, seed).remove(0);
    make_context(n, None, q, t, seed, Genericity::Checked).unwrap()
}

/// Zero-padded λ with |λ| ≤ 6 and n ≤ 3, plus the fixed n = 4 sample.
fn formula_shapes() -> Vec<Vec<u32>> {
    let mut v = Vec::new();
    for n in 1..=3 {
        for d in 1..=6 {
            v.extend(padded_partitions(d, n));
        }
    }
    v.extend([vec![1, 1, 1, 1], vec![2, 1, 1, 0], vec![2, 2, 1, 1]]);
    v
}

fn main() {
    let points = default_points();
    let mut ok = true;

    ok &= criterion(1, "oracle unitriangular and orthogonal, |λ| ≤ 6; Q_(k) = g_k", |out| {
        for (q, t) in &points {
            for d in 1..=6 {
                out.push(check_oracle(d, q, t));
            }
        }
        // Independent route for one-row Q: h_k in power sums with the (q,t) weights,
        // i.e. sum over μ ⊢ k of z_μ^{-1} prod (1 - t^{μ_i})/(1 - q^{μ_i}) p_μ.
        let (q, t) = &points[0];
        for k in 1..=6usize {
            let g = g_row::<Rational>(k as i64, q, t).unwrap();
            let mut holds = true;
            for mu in partitions_of(k) {
                let mut c = Rational::one() / Rational::from_integer(mu.z_factor());
                for &m in mu.parts() {
                    let m = m as i32;
                    c *= (Rational::one() - t.pow(m)) / (Rational::one() - q.pow(m));
                }
                holds &= g.coeff(&mu) == c;
            }
            out.hard(format!("g_row.{k}"), holds, serde_json::Value::Null);
        }
    });

    ok &= criterion(2, "raising-operator series equals the oracle", |out| {
        for l in formula_shapes() {
            for (q, t) in &points {
                out.push(check_raise(&l, q, t));
            }
        }
    });

    ok &= criterion(3, "Lassalle–Schlosser sum equals the oracle; coefficient comparison", |out| {
        for l in formula_shapes() {
            for (q, t) in &points {
                out.push(check_ls(&l, q, t));
            }
        }
        for (q, t) in &points {
            for l in [vec![0, 0], vec![2, 1], vec![3, 1], vec![4, 2]] {
                out.push(check_compare(&l, 4, q, t, Tier::Hard, false));
            }
            for l in [vec![0, 0, 0], vec![2, 1, 0], vec![3, 2, 1]] {
                out.push(check_compare(&l, 3, q, t, Tier::Hard, false));
            }
        }
        let (q, t) = &points[0];
        for l in [vec![2, 1, 1, 0], vec![2, 2, 1, 1]] {
            out.push(check_compare(&l, 2, q, t, Tier::Conjecture, false));
        }
    });

    ok &= criterion(4, "eigen-equation residual vanishes", |out| {
        for (i, (q, t)) in points.iter().enumerate() {
            let seed = i as u64 + 1;
            out.push(check_eigen(2, 5, q, t, seed, ParamOrder::QT, false));
            out.push(check_eigen(3, 3, q, t, seed, ParamOrder::QT, false));
            out.push(check_eigen(4, 3, q, t, seed, ParamOrder::QT, false));
        }
    });

    ok &= criterion(5, "specialisations t = q, q = 0, t = q^k", |out| {
        for (q, t) in &points {
            for d in 1..=5 {
                for l in partitions_of(d) {
                    out.push(check_schur(l.parts(), q));
                }
                for l in padded_partitions(d, 3) {
                    out.push(check_hall_littlewood(&l, t));
                }
            }
        }
        let q = rat(2, 3);
        for k in 2..=4 {
            out.push(check_t_power_vanishing(3, k, &q, 0));
            out.push(check_eigen_t_power(3, k, 3, &q, 0));
        }
        out.push(check_eigen_t_power(4, 2, 2, &q, 0));
    });

    ok &= criterion(6, "three-variable transfer identity; determinant form", |out| {
        for (i, (q, t)) in points.iter().enumerate() {
            out.push(check_n3_tilde(3, q, t, i as u64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let primes = [11i64, 13, 17, 19, 23, 29, 31, 37, 41, 43];
        for k in 2..=3usize {
            let mut done = 0;
            while done < 5 {
                let (q, t) = generic_points(1, rng.gen()).remove(0);
                let u: Vec<Rational> = (0..k).map(|_| rat(primes[rng.gen_range(0..5)], primes[rng.gen_range(5..10)])).collect();
                let block: Vec<u32> = (0..k).map(|_| rng.gen_range(0..4)).collect();
                let Some(det) = ls_det_matrix(&block, &u, &q, &t).unwrap() else { continue };
                let sub = ls_det_subset(&block, &u, &q, &t).unwrap();
                out.hard(format!("det.k{k}.{done}"), det == sub, serde_json::json!({ "block": block }));
                done += 1;
            }
        }
    });

    ok &= criterion(7, "n = 3 hypergeometric form to degree 4", |out| {
        for (i, (q, t)) in points.iter().enumerate() {
            out.push(check_identity_n3(4, q, t, i as u64, false));
        }
    });

    ok &= criterion(8, "two-route coefficient checks", |out| {
        for seed in 0..3 {
            let ctx = free(2, seed);
            for m in 0..=5 {
                let th = ThetaMatrix::from_entries(2, vec![m]).unwrap();
                out.hard(format!("c2.{m}.s{seed}"), c_coeff(&th, &ctx).unwrap() == c2_verbatim(m, &ctx).unwrap(), serde_json::Value::Null);
                out.hard(format!("jj.{m}.s{seed}"), jj_difference(m, &ctx).unwrap() == jj_closed_form(m, &ctx).unwrap(), serde_json::Value::Null);
                if m > 0 {
                    let prev = c_coeff(&ThetaMatrix::from_entries(2, vec![m - 1]).unwrap(), &ctx).unwrap();
                    let cur = c_coeff(&th, &ctx).unwrap();
                    let holds = !prev.is_zero() && cur == c2_recurrence_ratio(m, &ctx).unwrap() * prev;
                    out.hard(format!("recurrence.{m}.s{seed}"), holds, serde_json::Value::Null);
                }
            }
            let ctx = free(3, seed);
            for th in theta_box(3, 3) {
                out.hard(format!("c3.{th}.s{seed}"), c_coeff(&th, &ctx).unwrap() == c3_verbatim(&th, &ctx).unwrap(), serde_json::Value::Null);
            }
        }
    });

    if !ok {
        eprintln!("acceptance: at least one hard check failed");
        std::process::exit(1);
    }
}
