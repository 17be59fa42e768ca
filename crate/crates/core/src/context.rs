//! Evaluation contexts: concrete values of q, t and s_1..s_n.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratfunc::RatFunc;
use crate::scalar::{div, pow, Field, Rational};

/// How the spectral parameters s_i are chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SMode {
    /// `s_i = t^{n-i} q^{λ_i}` for a zero-padded λ of length n.
    LambdaTied(Vec<u32>),
    /// Independent generic values.
    FreeS,
}

/// Whether `make_context` enforces the genericity guard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Genericity {
    #[default]
    Checked,
    /// Specialisation suites (t = q^k, q = 0) opt out explicitly.
    Override,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalContext<F> {
    n: usize,
    q: F,
    t: F,
    s: Vec<F>,
    mode: SMode,
}

impl<F: Field> EvalContext<F> {
    /// λ-tied context without any genericity check. `lambda` must have length n.
    pub fn lambda_tied(lambda: &[u32], q: F, t: F) -> Result<Self> {
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{lambda:?}")));
        }
        let n = lambda.len();
        let s = (0..n)
            .map(|i| {
                let tp = pow(&t, (n - 1 - i) as i64, "s_i")?;
                let qp = pow(&q, i64::from(lambda[i]), "s_i")?;
                Ok(tp * qp)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            q,
            t,
            s,
            mode: SMode::LambdaTied(lambda.to_vec()),
        })
    }

    pub fn free(q: F, t: F, s: Vec<F>) -> Self {
        Self {
            n: s.len(),
            q,
            t,
            s,
            mode: SMode::FreeS,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn t(&self) -> &F {
        &self.t
    }

    pub fn s(&self) -> &[F] {
        &self.s
    }

    pub fn mode(&self) -> &SMode {
        &self.mode
    }

    pub fn lambda(&self) -> Option<&[u32]> {
        match &self.mode {
            SMode::LambdaTied(l) => Some(l),
            SMode::FreeS => None,
        }
    }

    /// `s_i / s_j` (0-based). In λ-tied mode this is `t^{j-i} q^{λ_i - λ_j}`,
    /// which stays finite at `q = 0` when `λ_i ≥ λ_j`.
    pub fn s_ratio(&self, i: usize, j: usize) -> Result<F> {
        match &self.mode {
            SMode::LambdaTied(l) => {
                let tp = pow(&self.t, j as i64 - i as i64, "s_i/s_j")?;
                let qp = pow(&self.q, i64::from(l[i]) - i64::from(l[j]), "s_i/s_j")?;
                Ok(tp * qp)
            }
            SMode::FreeS => div(&self.s[i], &self.s[j], "s_i/s_j"),
        }
    }

    /// Lifts every value through `f`, keeping the mode.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> EvalContext<G> {
        EvalContext {
            n: self.n,
            q: f(&self.q),
            t: f(&self.t),
            s: self.s.iter().map(&f).collect(),
            mode: self.mode.clone(),
        }
    }
}

/// Builds a checked numeric context.
///
/// With `lambda` present the context is λ-tied with `n = lambda.len()`;
/// otherwise `n` free values are drawn from `seed`, each a ratio of primes not
/// used by q, t or the other s_j, so they are multiplicatively independent.
pub fn make_context(
    n: usize,
    lambda: Option<&[u32]>,
    q: Rational,
    t: Rational,
    seed: u64,
    genericity: Genericity,
) -> Result<EvalContext<Rational>> {
    if n == 0 {
        return Err(Error::InvalidContext("n must be positive".into()));
    }
    if q.is_one() {
        return Err(Error::InvalidContext("q = 1 makes (q;q)_k vanish".into()));
    }
    if genericity == Genericity::Checked {
        check_generic(&q, &t)?;
    } else if t.is_zero() {
        return Err(Error::InvalidContext("t = 0".into()));
    }
    match lambda {
        Some(l) => {
            if l.len() != n {
                return Err(Error::InvalidPartition(format!(
                    "{l:?} must have exactly n = {n} entries"
                )));
            }
            EvalContext::lambda_tied(l, q, t)
        }
        None => Ok(EvalContext::free(q, t, free_s_values(n, seed))),
    }
}

/// Rejects (q, t) with `q^a t^b = 1` for some `|a|, |b| ≤ 20`, `(a, b) ≠ 0`.
pub fn check_generic(q: &Rational, t: &Rational) -> Result<()> {
    if q.is_zero() || t.is_zero() {
        return Err(Error::InvalidContext("q and t must be nonzero".into()));
    }
    let one = Rational::one();
    let q_pows: Vec<Rational> = (-20..=20).map(|a| q.powi(a).expect("nonzero")).collect();
    for b in -20i64..=20 {
        let tb = t.powi(b).expect("nonzero");
        for (ai, qa) in q_pows.iter().enumerate() {
            let a = ai as i64 - 20;
            if (a, b) != (0, 0) && qa * &tb == one {
                return Err(Error::InvalidContext(format!(
                    "q^{a} t^{b} = 1 for q = {q}, t = {t}"
                )));
            }
        }
    }
    Ok(())
}

const S_PRIMES: [i64; 21] = [
    11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic free spectral parameters for `seed`.
pub fn free_s_values(n: usize, seed: u64) -> Vec<Rational> {
    assert!(2 * n <= S_PRIMES.len(), "too many free parameters");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = S_PRIMES.to_vec();
    primes.shuffle(&mut rng);
    (0..n)
        .map(|i| Rational::new(primes[2 * i].into(), primes[2 * i + 1].into()))
        .collect()
}

/// `count` distinct generic (q, t): q built from the primes 2 and 3, t from 5
/// and 7, so q and t are multiplicatively independent.
pub fn generic_points(count: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut qs: Vec<Rational> = Vec::new();
    let mut ts: Vec<Rational> = Vec::new();
    for a in 1..=3i32 {
        for b in 1..=3i32 {
            qs.push(prime_ratio(2, a, 3, b));
            qs.push(prime_ratio(3, b, 2, a));
            ts.push(prime_ratio(5, a, 7, b));
            ts.push(prime_ratio(7, b, 5, a));
        }
    }
    qs.shuffle(&mut rng);
    ts.shuffle(&mut rng);
    qs.into_iter().zip(ts).take(count).collect()
}

fn prime_ratio(p: i64, a: i32, r: i64, b: i32) -> Rational {
    Rational::new(num_bigint::BigInt::from(p).pow(a as u32), num_bigint::BigInt::from(r).pow(b as u32))
}

/// Points used when no seed is given.
pub fn default_points() -> Vec<(Rational, Rational)> {
    generic_points(3, 0)
}

/// λ-tied context over Q(z) with `t = q^k z`; the limit `z -> 1` gives `t = q^k`.
pub fn deformed_t_power(lambda: Option<&[u32]>, s: &[Rational], q: &Rational, k: u32) -> Result<EvalContext<RatFunc>> {
    let qf = RatFunc::constant(q.clone());
    let t = RatFunc::constant(q.powi(i64::from(k)).expect("q nonzero")) * RatFunc::z();
    match lambda {
        Some(l) => EvalContext::lambda_tied(l, qf, t),
        None => Ok(EvalContext::free(
            qf,
            t,
            s.iter().cloned().map(RatFunc::constant).collect(),
        )),
    }
}

/// λ-tied context over Q(z) with `q = z`; the limit `z -> 0` gives `q = 0`.
pub fn deformed_q_zero(lambda: &[u32], t: &Rational) -> Result<EvalContext<RatFunc>> {
    EvalContext::lambda_tied(lambda, RatFunc::z(), RatFunc::constant(t.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn lambda_tied_substitution() {
        let (q, t) = (rat(2, 3), rat(5, 7));
        let ctx = make_context(2, Some(&[2, 1]), q.clone(), t.clone(), 0, Genericity::Checked).unwrap();
        assert_eq!(ctx.s(), &[t.clone() * q.clone() * q.clone(), q.clone()]);
        let ctx = make_context(3, Some(&[0, 0, 0]), q, t.clone(), 0, Genericity::Checked).unwrap();
        assert_eq!(ctx.s(), &[t.clone() * t.clone(), t, Rational::one()]);
    }

    #[test]
    fn free_s_is_reproducible() {
        let a = make_context(2, None, rat(2, 3), rat(5, 7), 7, Genericity::Checked).unwrap();
        let b = make_context(2, None, rat(2, 3), rat(5, 7), 7, Genericity::Checked).unwrap();
        assert_eq!(a.s(), b.s());
        assert_eq!(a.s().len(), 2);
        assert_ne!(a.s()[0], a.s()[1]);
    }

    #[test]
    fn rejections() {
        let t = rat(5, 7);
        assert!(make_context(2, None, Rational::one(), t.clone(), 0, Genericity::Checked).is_err());
        assert!(make_context(2, None, Rational::one(), t.clone(), 0, Genericity::Override).is_err());
        assert!(make_context(2, None, rat(-1, 1), t.clone(), 0, Genericity::Checked).is_err());
        assert!(make_context(2, None, rat(4, 1), rat(2, 1), 0, Genericity::Checked).is_err());
        assert!(make_context(2, None, rat(2, 3), rat(4, 9), 0, Genericity::Checked).is_err());
        assert!(make_context(2, None, Rational::zero(), t.clone(), 0, Genericity::Checked).is_err());
        assert!(make_context(2, None, Rational::zero(), t, 0, Genericity::Override).is_ok());
        assert!(make_context(2, Some(&[1]), rat(2, 3), rat(5, 7), 0, Genericity::Checked).is_err());
    }

    #[test]
    fn generic_points_pass_the_guard() {
        for seed in 0..5 {
            let pts = generic_points(3, seed);
            assert_eq!(pts.len(), 3);
            for (q, t) in &pts {
                check_generic(q, t).unwrap();
            }
            assert_eq!(pts, generic_points(3, seed));
        }
    }

    #[test]
    fn ratio_at_q_zero() {
        let ctx = EvalContext::lambda_tied(&[2, 1, 0], Rational::zero(), rat(5, 7)).unwrap();
        assert_eq!(ctx.s_ratio(1, 2).unwrap(), Rational::zero());
        assert_eq!(ctx.s_ratio(2, 2).unwrap(), Rational::one());
        assert!(ctx.s_ratio(2, 1).is_err());
    }
}
