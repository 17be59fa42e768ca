//! Strictly upper-triangular matrices θ indexing raising-operator monomials.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::symfunc::{Basis, GFamily, SymF};

/// Nonnegative θ_{i,j} for `0 ≤ i < j < n`, stored row by row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<u32>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The pairs `(i, j)`, `i < j < n`, in storage order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

impl ThetaMatrix {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n.saturating_sub(1) / 2],
        }
    }

    /// Entries in the order of [`pairs`].
    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidArgument(format!(
                "θ for n = {n} needs {} entries, got {}",
                n * n.saturating_sub(1) / 2,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[pair_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        let k = pair_index(self.n, i, j);
        self.entries[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `ζ_k = sum_{j>k} θ_{k,j} - sum_{j<k} θ_{j,k}`: the shift applied to λ.
    pub fn zeta(&self) -> Vec<i64> {
        let mut z = vec![0i64; self.n];
        for (i, j) in pairs(self.n) {
            let v = i64::from(self.get(i, j));
            z[i] += v;
            z[j] -= v;
        }
        z
    }

    /// `ξ` for row `i` against column `c` (both 0-based, `i < c`):
    /// `sum_{j>c} (θ_{i,j} - θ_{c,j})`.
    pub fn xi(&self, i: usize, c: usize) -> i64 {
        (c + 1..self.n)
            .map(|j| i64::from(self.get(i, j)) - i64::from(self.get(c, j)))
            .sum()
    }

    /// Total degree in the ratios `x_{k+1}/x_k`: `sum θ_{i,j} (j - i)`.
    pub fn ratio_degree(&self) -> usize {
        pairs(self.n)
            .into_iter()
            .map(|(i, j)| self.get(i, j) as usize * (j - i))
            .sum()
    }

    /// Exponents on `y_k = x_{k+1}/x_k` of `prod (x_j/x_i)^{θ_{i,j}}`.
    pub fn ratio_exponents(&self) -> Vec<u32> {
        let mut e = vec![0u32; self.n.saturating_sub(1)];
        for (i, j) in pairs(self.n) {
            for slot in &mut e[i..j] {
                *slot += self.get(i, j);
            }
        }
        e
    }

    /// `θ - χ`, or `None` if an entry would go negative.
    pub fn checked_sub(&self, other: &ThetaMatrix) -> Option<ThetaMatrix> {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { n: self.n, entries })
    }

    /// Column `c` above the diagonal: `θ_{0,c}, ..., θ_{c-1,c}`.
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..c).map(|i| self.get(i, c)).collect()
    }
}

impl fmt::Display for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = pairs(self.n)
            .into_iter()
            .map(|(i, j)| format!("{}{}:{}", i + 1, j + 1, self.get(i, j)))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for ThetaMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ThetaMatrix", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("entries", &self.entries)?;
        st.end()
    }
}

/// Enumerates θ column by column from the right. `col_sums(c, rowsum)` gives
/// the admissible range of the column sum of column `c`, where `rowsum` is
/// `sum_{j>c} θ_{c,j}` (already fixed); `accept` filters complete matrices.
fn enumerate_columns(
    n: usize,
    col_sums: &dyn Fn(usize, i64) -> (i64, i64),
    accept: &dyn Fn(&ThetaMatrix) -> bool,
) -> Vec<ThetaMatrix> {
    fn fill(
        c: usize,
        theta: &mut ThetaMatrix,
        col_sums: &dyn Fn(usize, i64) -> (i64, i64),
        accept: &dyn Fn(&ThetaMatrix) -> bool,
        out: &mut Vec<ThetaMatrix>,
    ) {
        if c == 0 {
            if accept(theta) {
                out.push(theta.clone());
            }
            return;
        }
        let n = theta.n();
        let rowsum: i64 = (c + 1..n).map(|j| i64::from(theta.get(c, j))).sum();
        let (lo, hi) = col_sums(c, rowsum);
        for total in lo.max(0)..=hi {
            compositions(total as u32, c, &mut |col| {
                for (i, &v) in col.iter().enumerate() {
                    theta.set(i, c, v);
                }
                fill(c - 1, theta, col_sums, accept, out);
            });
        }
        for i in 0..c {
            theta.set(i, c, 0);
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    fill(n - 1, &mut ThetaMatrix::zero(n), col_sums, accept, &mut out);
    out.sort();
    out
}

/// Calls `f` on every composition of `total` into `parts` nonnegative parts.
fn compositions(total: u32, parts: usize, f: &mut dyn FnMut(&[u32])) {
    fn rec(rem: u32, idx: usize, cur: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if idx + 1 == cur.len() {
            cur[idx] = rem;
            f(cur);
            return;
        }
        for v in 0..=rem {
            cur[idx] = v;
            rec(rem - v, idx + 1, cur, f);
        }
    }
    if parts == 0 {
        if total == 0 {
            f(&[]);
        }
        return;
    }
    rec(total, 0, &mut vec![0; parts], f);
}

/// All θ with `λ_k + ζ_k(θ) ≥ 0` for every k (λ zero-padded to n).
pub fn theta_support(lambda: &[u32]) -> Vec<ThetaMatrix> {
    let n = lambda.len();
    enumerate_columns(
        n,
        &|c, rowsum| (0, i64::from(lambda[c]) + rowsum),
        &|_| true,
    )
}

/// All θ with every entry `≤ bound`.
pub fn theta_box(n: usize, bound: u32) -> Vec<ThetaMatrix> {
    let m = n * n.saturating_sub(1) / 2;
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    loop {
        out.push(ThetaMatrix::from_entries(n, cur.clone()).expect("length"));
        let mut k = 0;
        loop {
            if k == m {
                out.sort();
                return out;
            }
            if cur[k] < bound {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
            k += 1;
        }
    }
}

/// All θ whose ratio degree is at most `max_degree`.
pub fn theta_up_to_degree(n: usize, max_degree: usize) -> Vec<ThetaMatrix> {
    fn rec(idx: usize, ps: &[(usize, usize)], deg: usize, max: usize, cur: &mut ThetaMatrix, out: &mut Vec<ThetaMatrix>) {
        if idx == ps.len() {
            out.push(cur.clone());
            return;
        }
        let (i, j) = ps[idx];
        let w = j - i;
        let mut m = 0;
        while deg + m * w <= max {
            cur.set(i, j, m as u32);
            rec(idx + 1, ps, deg + m * w, max, cur, out);
            m += 1;
        }
        cur.set(i, j, 0);
    }
    let ps = pairs(n);
    let mut out = Vec::new();
    rec(0, &ps, 0, max_degree, &mut ThetaMatrix::zero(n), &mut out);
    out.sort();
    out
}

/// All θ with `ζ(θ) = shift`. Finite: every entry is bounded by a cut sum.
pub fn fibre(shift: &[i64]) -> Vec<ThetaMatrix> {
    let n = shift.len();
    if shift.iter().sum::<i64>() != 0 {
        return Vec::new();
    }
    enumerate_columns(
        n,
        &|c, rowsum| {
            let s = rowsum - shift[c];
            (s, s)
        },
        &|th| th.zeta()[0] == shift[0],
    )
}

/// A finite formal sum `sum_θ a_θ prod R_{ij}^{θ_{i,j}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorPolynomial<F> {
    n: usize,
    terms: BTreeMap<ThetaMatrix, F>,
}

impl<F: Field> OperatorPolynomial<F> {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ThetaMatrix, F> {
        &self.terms
    }

    pub fn coeff(&self, theta: &ThetaMatrix) -> F {
        self.terms.get(theta).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, theta: ThetaMatrix, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(theta.clone()).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&theta);
        }
    }

    /// Sums coefficients over θ with the same shift vector ζ(θ): the action
    /// on `g_λ` only sees `R^θ` through ζ(θ).
    pub fn by_shift(&self) -> BTreeMap<Vec<i64>, F> {
        let mut out: BTreeMap<Vec<i64>, F> = BTreeMap::new();
        for (th, c) in &self.terms {
            let slot = out.entry(th.zeta()).or_insert_with(F::zero);
            *slot = slot.clone() + c.clone();
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `sum_θ a_θ g_{λ + ζ(θ)}` in the power-sum basis.
    pub fn apply(&self, lambda: &[u32], g: &GFamily<F>) -> Result<SymF<F>> {
        let mut out = SymF::zero(Basis::PowerSum);
        for (shift, c) in self.by_shift() {
            let idx: Vec<i64> = lambda
                .iter()
                .zip(&shift)
                .map(|(&l, &z)| i64::from(l) + z)
                .collect();
            out = out.add(&g.product(&idx).scale(&c))?;
        }
        Ok(out)
    }
}
