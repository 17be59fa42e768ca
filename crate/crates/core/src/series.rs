//! Truncated power series in the ratios `y_k = x_{k+1}/x_k`.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::Result;
use crate::scalar::Field;

/// Exponents of `(x_j/x_i)^m`, `i < j`, on `y_0, ..., y_{n-2}`.
pub fn ratio_exponents(n: usize, i: usize, j: usize, m: u32) -> Vec<u32> {
    let mut e = vec![0u32; n.saturating_sub(1)];
    for slot in &mut e[i..j] {
        *slot += m;
    }
    e
}

/// Series in `n - 1` ratio variables, kept up to total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSeries<F> {
    n: usize,
    order: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

fn total(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

impl<F: Field> RatioSeries<F> {
    pub fn zero(n: usize, order: usize) -> Self {
        Self {
            n,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, order: usize) -> Self {
        let mut s = Self::zero(n, order);
        s.add_term(vec![0; n.saturating_sub(1)], F::one());
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Adds `c y^e`; terms above the truncation order are dropped.
    pub fn add_term(&mut self, e: Vec<u32>, c: F) {
        debug_assert_eq!(e.len(), self.n.saturating_sub(1));
        if c.is_zero() || total(&e) > self.order {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        out.terms.retain(|e, _| total(e) <= out.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.n, self.order);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n, self.order.min(other.order));
        for (ea, ca) in &self.terms {
            let da = total(ea);
            for (eb, cb) in &other.terms {
                if da + total(eb) > out.order {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Drops terms above `order` (which must not exceed the current order).
    pub fn truncate(&self, order: usize) -> Self {
        let mut out = self.clone();
        out.order = order.min(self.order);
        out.terms.retain(|e, _| total(e) <= out.order);
        out
    }

    /// `sum_m coeff(m) (x_j/x_i)^m` up to the truncation order, with `coeff(0) = 1`.
    pub fn ratio_geometric(n: usize, order: usize, i: usize, j: usize, mut coeff: impl FnMut(u32) -> Result<F>) -> Result<Self> {
        let mut s = Self::one(n, order);
        let mut m = 1u32;
        while m as usize * (j - i) <= order {
            s.add_term(ratio_exponents(n, i, j, m), coeff(m)?);
            m += 1;
        }
        Ok(s)
    }

    /// `prod_{i<j} (1 - x_j/x_i)`.
    pub fn vandermonde_ratio(n: usize, order: usize) -> Self {
        let mut acc = Self::one(n, order);
        for i in 0..n {
            for j in i + 1..n {
                let mut f = Self::one(n, order);
                f.add_term(ratio_exponents(n, i, j, 1), -F::one());
                acc = acc.mul(&f);
            }
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, mut f: impl FnMut(&F) -> Result<G>) -> Result<RatioSeries<G>> {
        let mut out = RatioSeries::zero(self.n, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }
}

impl<F: Field> Serialize for RatioSeries<F> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponents: &'a [u32],
            coeff: String,
        }
        let terms: Vec<Term<'_>> = self
            .terms
            .iter()
            .map(|(e, c)| Term {
                exponents: e,
                coeff: c.render(),
            })
            .collect();
        let mut st = serializer.serialize_struct("RatioSeries", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("N", &self.order)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    #[test]
    fn embedding() {
        assert_eq!(ratio_exponents(4, 0, 2, 3), vec![3, 3, 0]);
        assert_eq!(ratio_exponents(4, 1, 3, 1), vec![0, 1, 1]);
    }

    #[test]
    fn geometric_inverse() {
        // (1 - y) * sum y^m = 1 up to the order.
        let g = RatioSeries::<Rational>::ratio_geometric(2, 5, 0, 1, |_| Ok(rat(1, 1))).unwrap();
        let v = RatioSeries::<Rational>::vandermonde_ratio(2, 5);
        assert_eq!(g.mul(&v), RatioSeries::one(2, 5));
    }

    #[test]
    fn vandermonde_three() {
        let v = RatioSeries::<Rational>::vandermonde_ratio(3, 4);
        // (1 - y0)(1 - y0 y1)(1 - y1)
        assert_eq!(v.coeff(&[1, 1]), rat(0, 1));
        assert_eq!(v.coeff(&[2, 1]), rat(1, 1));
        assert_eq!(v.coeff(&[1, 2]), rat(1, 1));
        assert_eq!(v.coeff(&[2, 2]), rat(-1, 1));
        assert_eq!(v.coeff(&[1, 0]), rat(-1, 1));
    }

    #[test]
    fn json_shape() {
        let mut s = RatioSeries::<Rational>::zero(3, 2);
        s.add_term(vec![1, 0], rat(2, 3));
        let j = serde_json::to_value(&s).unwrap();
        assert_eq!(j, serde_json::json!({"n": 3, "N": 2, "terms": [{"exponents": [1, 0], "coeff": "2/3"}]}));
    }

    fn series(order: usize) -> impl Strategy<Value = RatioSeries<Rational>> {
        proptest::collection::vec(((0u32..4, 0u32..4), -5i64..5), 0..8).prop_map(move |ts| {
            let mut s = RatioSeries::zero(3, order);
            for ((a, b), c) in ts {
                s.add_term(vec![a, b], rat(c, 1));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn truncation_commutes_with_products(a in series(6), b in series(6)) {
            let lhs = a.mul(&b).truncate(3);
            let rhs = a.truncate(3).mul(&b.truncate(3));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
