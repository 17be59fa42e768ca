//! Factor ledgers: products of atoms `(1 - q^a t^b prod_i s_i^{e_i})`.
//!
//! Coefficients built from q-Pochhammer symbols are collected as signed
//! multisets of atoms keyed by their exact exponents. Identical numerator and
//! denominator atoms cancel before anything is evaluated, so structural 0/0
//! disappears; a denominator that still vanishes is reported as
//! [`Error::UncancelledPole`].

use std::collections::BTreeMap;

use crate::context::{EvalContext, SMode};
use crate::error::{Error, Result};
use crate::ratfunc::{rf_limit_at_one, RatFunc};
use crate::scalar::{pow, Field, Rational};

/// Exponent key of a monomial `q^a t^b prod_i s_i^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialKey {
    pub q: i64,
    pub t: i64,
    pub s: Vec<i64>,
}

impl MonomialKey {
    pub fn new(q: i64, t: i64, n: usize) -> Self {
        Self { q, t, s: vec![0; n] }
    }

    /// `q^q t^t s_i / s_j`.
    pub fn with_ratio(q: i64, t: i64, n: usize, i: usize, j: usize) -> Self {
        let mut k = Self::new(q, t, n);
        k.s[i] += 1;
        k.s[j] -= 1;
        k
    }

    pub fn shift_q(&self, by: i64) -> Self {
        let mut k = self.clone();
        k.q += by;
        k
    }

    fn fold_lambda(&self, lambda: &[u32]) -> Self {
        let n = lambda.len();
        let mut k = Self::new(self.q, self.t, self.s.len());
        for (i, &e) in self.s.iter().enumerate() {
            k.q += e * i64::from(lambda[i]);
            k.t += e * (n - 1 - i) as i64;
        }
        k
    }

    /// Value of the monomial; `deform` multiplies `s_i` by `z^{i+1}` first.
    fn eval<F: Field>(&self, ctx: &EvalContext<F>, deform: Option<&F>) -> Result<F> {
        let mut v = pow(ctx.q(), self.q, "monomial q-power")? * pow(ctx.t(), self.t, "monomial t-power")?;
        for (i, &e) in self.s.iter().enumerate() {
            if e != 0 {
                v = v * pow(&ctx.s()[i], e, "monomial s-power")?;
                if let Some(z) = deform {
                    v = v * pow(z, e * (i as i64 + 1), "deformation")?;
                }
            }
        }
        Ok(v)
    }
}

/// `prefactor * prod num / prod den` over atoms `1 - monomial`.
#[derive(Clone, Debug, Default)]
pub struct Ledger {
    n: usize,
    prefactor: Option<MonomialKey>,
    num: BTreeMap<MonomialKey, u32>,
    den: BTreeMap<MonomialKey, u32>,
}

impl Ledger {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            ..Self::default()
        }
    }

    /// Multiplies by the monomial `q^a t^b`.
    pub fn monomial(&mut self, q: i64, t: i64) {
        let p = self.prefactor.get_or_insert_with(|| MonomialKey::new(0, 0, self.n));
        p.q += q;
        p.t += t;
    }

    /// Multiplies by `(x; q)_k` (`numerator`) or divides by it.
    pub fn pochhammer(&mut self, base: &MonomialKey, k: u32, numerator: bool) {
        let side = if numerator { &mut self.num } else { &mut self.den };
        for m in 0..k {
            *side.entry(base.shift_q(i64::from(m))).or_default() += 1;
        }
    }

    /// Multiplies by `(num; q)_k / (den; q)_k`.
    pub fn ratio(&mut self, num: &MonomialKey, den: &MonomialKey, k: u32) {
        self.pochhammer(num, k, true);
        self.pochhammer(den, k, false);
    }

    /// Cancels equal atoms, after rewriting s in terms of q, t when λ-tied.
    fn normalized(&self, mode: &SMode) -> Ledger {
        let fold = |k: &MonomialKey| match mode {
            SMode::LambdaTied(l) => k.fold_lambda(l),
            SMode::FreeS => k.clone(),
        };
        let mut num: BTreeMap<MonomialKey, u32> = BTreeMap::new();
        let mut den: BTreeMap<MonomialKey, u32> = BTreeMap::new();
        for (k, &m) in &self.num {
            *num.entry(fold(k)).or_default() += m;
        }
        for (k, &m) in &self.den {
            *den.entry(fold(k)).or_default() += m;
        }
        for (k, d) in den.iter_mut() {
            if let Some(nm) = num.get_mut(k) {
                let c = (*nm).min(*d);
                *nm -= c;
                *d -= c;
            }
        }
        num.retain(|_, m| *m > 0);
        den.retain(|_, m| *m > 0);
        Ledger {
            n: self.n,
            prefactor: self.prefactor.as_ref().map(fold),
            num,
            den,
        }
    }

    /// Number of uncancelled atoms (numerator, denominator).
    pub fn atom_counts(&self, mode: &SMode) -> (usize, usize) {
        let l = self.normalized(mode);
        (
            l.num.values().map(|&m| m as usize).sum(),
            l.den.values().map(|&m| m as usize).sum(),
        )
    }

    pub fn evaluate<F: Field>(&self, ctx: &EvalContext<F>, what: &str) -> Result<F> {
        self.normalized(ctx.mode()).evaluate_raw(ctx, None, what)
    }

    fn evaluate_raw<F: Field>(&self, ctx: &EvalContext<F>, deform: Option<&F>, what: &str) -> Result<F> {
        let mut den = F::one();
        for (k, &m) in &self.den {
            let atom = F::one() - k.eval(ctx, deform)?;
            if atom.is_zero() {
                return Err(Error::UncancelledPole(what.to_string()));
            }
            for _ in 0..m {
                den = den * atom.clone();
            }
        }
        let mut num = match &self.prefactor {
            Some(p) => p.eval(ctx, deform)?,
            None => F::one(),
        };
        for (k, &m) in &self.num {
            let atom = F::one() - k.eval(ctx, deform)?;
            if atom.is_zero() {
                return Ok(F::zero());
            }
            for _ in 0..m {
                num = num * atom.clone();
            }
        }
        Ok(num * den.checked_inv().expect("nonzero atoms"))
    }

    /// Evaluates with `s_i -> s_i z^i` in Q(z) and returns the limit `z -> 1`.
    ///
    /// Only the cancellation of literally equal atoms is skipped here: in
    /// λ-tied mode the ledger is evaluated in free form with the tied values.
    pub fn evaluate_deformed(&self, ctx: &EvalContext<Rational>, what: &str) -> Result<Rational> {
        let lifted = ctx.map(|x| RatFunc::constant(x.clone()));
        let free = EvalContext::free(lifted.q().clone(), lifted.t().clone(), lifted.s().to_vec());
        let z = RatFunc::z();
        let value = self.normalized(&SMode::FreeS).evaluate_raw(&free, Some(&z), what)?;
        rf_limit_at_one(&value).map_err(|_| Error::UncancelledPole(format!("{what} (after deformation)")))
    }

    /// Limit `z -> 1` of the λ-tied value at `t = q^k z`, read off atom by atom.
    ///
    /// An atom `1 - c z^b` with `c = 1`, `b != 0` is `b (1 - z)` to first
    /// order. Net positive order in `1 - z` gives 0, net negative order is an
    /// uncancelled pole.
    pub fn limit_t_power(&self, lambda: &[u32], q: &Rational, k: u32, what: &str) -> Result<Rational> {
        let l = self.normalized(&SMode::LambdaTied(lambda.to_vec()));
        let k = i64::from(k);
        let one = Rational::from_integer(1.into());
        let mut order = 0i64;
        let mut value = match &l.prefactor {
            Some(p) => pow(q, p.q + k * p.t, "monomial q-power")?,
            None => one.clone(),
        };
        for (side, atoms) in [(1i64, &l.num), (-1, &l.den)] {
            for (key, &m) in atoms {
                let c = pow(q, key.q + k * key.t, "monomial q-power")?;
                let factor = if c == one {
                    if key.t == 0 {
                        if side > 0 {
                            return Ok(Rational::from_integer(0.into()));
                        }
                        return Err(Error::UncancelledPole(what.to_string()));
                    }
                    order += side * i64::from(m);
                    Rational::from_integer(key.t.into())
                } else {
                    one.clone() - c
                };
                let factor = pow(&factor, side * i64::from(m), "atom")?;
                value *= factor;
            }
        }
        match order {
            0 => Ok(value),
            o if o > 0 => Ok(Rational::from_integer(0.into())),
            _ => Err(Error::UncancelledPole(format!("{what} at t = q^{k}"))),
        }
    }

    /// Numeric evaluation with the deformation fallback on an uncancelled pole.
    pub fn evaluate_resolved(&self, ctx: &EvalContext<Rational>, what: &str) -> Result<Rational> {
        match self.evaluate(ctx, what) {
            Err(Error::UncancelledPole(_)) => self.evaluate_deformed(ctx, what),
            other => other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_pochhammer, rat};

    #[test]
    fn structural_cancellation_beats_zero_denominator() {
        // (t^{-1} s_1/s_2 ; q)_1 / (q^{-1} s_1/s_2 ; q)_1 at s_1/s_2 = t q^0:
        // the numerator is 1 - 1 and the denominator is 1 - t/q, so 0.
        let ctx = EvalContext::lambda_tied(&[0, 0], rat(2, 3), rat(5, 7)).unwrap();
        let mut l = Ledger::new(2);
        l.ratio(
            &MonomialKey::with_ratio(0, -1, 2, 0, 1),
            &MonomialKey::with_ratio(-1, 0, 2, 0, 1),
            1,
        );
        assert_eq!(l.evaluate(&ctx, "test").unwrap(), Rational::from_integer(0.into()));

        // Same atom on both sides cancels even though it is zero at this point.
        let mut l = Ledger::new(2);
        let zero_atom = MonomialKey::with_ratio(0, -1, 2, 0, 1);
        l.ratio(&zero_atom, &zero_atom, 1);
        assert_eq!(l.evaluate(&ctx, "test").unwrap(), Rational::from_integer(1.into()));

        let mut l = Ledger::new(2);
        l.pochhammer(&zero_atom, 1, false);
        assert!(matches!(l.evaluate(&ctx, "test"), Err(Error::UncancelledPole(_))));
    }

    #[test]
    fn matches_direct_pochhammers() {
        let (q, t) = (rat(2, 3), rat(5, 7));
        let s = vec![rat(11, 13), rat(17, 19)];
        let ctx = EvalContext::free(q.clone(), t.clone(), s.clone());
        let mut l = Ledger::new(2);
        l.monomial(0, 3);
        l.ratio(&MonomialKey::new(1, -1, 2), &MonomialKey::new(1, 0, 2), 3);
        let direct = t.powi(3).unwrap() * q_pochhammer(&(q.clone() / t.clone()), &q, 3)
            / q_pochhammer(&q, &q, 3);
        assert_eq!(l.evaluate(&ctx, "test").unwrap(), direct);
    }

    #[test]
    fn deformation_resolves_balanced_zero() {
        // (1 - s_1/s_2 t^{-1})^2 / (1 - s_1/s_2 t^{-1}) with the ratio equal to t,
        // written with distinct keys so cancellation cannot see it.
        let q = rat(2, 3);
        let t = rat(5, 7);
        let ctx = EvalContext::free(q, t.clone(), vec![t.clone(), Rational::from_integer(1.into())]);
        let mut l = Ledger::new(2);
        l.pochhammer(&MonomialKey::with_ratio(0, -1, 2, 0, 1), 1, true);
        let mut other = MonomialKey::new(0, -1, 2);
        other.s[0] = 1;
        l.pochhammer(&other, 1, false);
        // numerator key has s_2^{-1}, denominator does not; s_2 = 1 so both vanish.
        assert!(matches!(l.evaluate(&ctx, "test"), Err(Error::UncancelledPole(_))));
        // (1 - z/z^2) / (1 - z) -> limit of -(1/z)... = (z - 1)/(z (1 - z)) -> -1
        assert_eq!(l.evaluate_resolved(&ctx, "test").unwrap(), rat(-1, 1));
    }
}
