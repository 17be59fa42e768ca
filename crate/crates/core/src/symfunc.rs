//! Symmetric functions in the power-sum and monomial bases.
//!
//! Power sums are the working basis: products concatenate indices and the
//! (q,t) scalar product is diagonal. Monomial coordinates are only needed by
//! the Gram–Schmidt oracle and for final comparisons.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::partition::{partitions_of, Partition};
use crate::scalar::{div, Field, Rational};

pub const DEFAULT_MAX_DEGREE: usize = 8;

/// Degree cap for basis transitions, overridable through `QSYM_MAX_DEGREE`.
pub fn max_degree() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("QSYM_MAX_DEGREE")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_DEGREE)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    PowerSum,
    Monomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(usize),
    Mixed,
}

/// A symmetric function as a sparse map from partitions to coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct SymF<F> {
    basis: Basis,
    terms: BTreeMap<Partition, F>,
}

impl<F: Field> SymF<F> {
    pub fn zero(basis: Basis) -> Self {
        Self {
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 1 (`p_∅ = m_∅`).
    pub fn one(basis: Basis) -> Self {
        Self::term(basis, Partition::empty(), F::one())
    }

    pub fn term(basis: Basis, index: Partition, coeff: F) -> Self {
        let mut f = Self::zero(basis);
        f.add_term(index, coeff);
        f
    }

    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Partition, F)>) -> Self {
        let mut f = Self::zero(basis);
        for (p, c) in terms {
            f.add_term(p, c);
        }
        f
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn terms(&self) -> &BTreeMap<Partition, F> {
        &self.terms
    }

    pub fn coeff(&self, index: &Partition) -> F {
        self.terms.get(index).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Degree {
        let mut weights = self.terms.keys().map(Partition::weight);
        match weights.next() {
            None => Degree::Zero,
            Some(d) if weights.all(|w| w == d) => Degree::Homogeneous(d),
            Some(_) => Degree::Mixed,
        }
    }

    pub fn add_term(&mut self, index: Partition, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&index) {
            Some(c) => {
                let sum = c.clone() + coeff;
                if sum.is_zero() {
                    self.terms.remove(&index);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(index, coeff);
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis);
        }
        Self {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(p, x)| (p.clone(), x.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_basis(other)?;
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-F::one()))
    }

    /// Product in the power-sum basis: `p_λ p_μ = p_{λ ∪ μ}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.basis != Basis::PowerSum || other.basis != Basis::PowerSum {
            return Err(Error::BasisMismatch("multiplication needs power-sum operands"));
        }
        let mut out = Self::zero(Basis::PowerSum);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.union(b), x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    /// Re-expresses the function in `target`, degree by degree.
    pub fn convert(&self, target: Basis) -> Result<Self> {
        if self.basis == target {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target);
        let mut by_degree: BTreeMap<usize, Vec<(&Partition, &F)>> = BTreeMap::new();
        for (p, c) in &self.terms {
            by_degree.entry(p.weight()).or_default().push((p, c));
        }
        for (d, terms) in by_degree {
            let table = transition(d)?;
            let matrix = match target {
                Basis::Monomial => &table.p_to_m,
                Basis::PowerSum => &table.m_to_p,
            };
            for (p, c) in terms {
                let row = &matrix[table.index[p]];
                for (j, entry) in row.iter().enumerate() {
                    if !entry.is_zero() {
                        out.add_term(table.parts[j].clone(), c.clone() * F::from_rational(entry));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<G: Field>(&self, mut f: impl FnMut(&F) -> Result<G>) -> Result<SymF<G>> {
        let mut out = SymF::zero(self.basis);
        for (p, c) in &self.terms {
            out.add_term(p.clone(), f(c)?);
        }
        Ok(out)
    }

    fn check_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch("operands are in different bases"));
        }
        Ok(())
    }
}

impl<F: Field> Serialize for SymF<F> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            partition: String,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .terms
            .iter()
            .map(|(p, c)| Term {
                partition: p.to_string(),
                coeff: c.render(),
            })
            .collect();
        let mut st = serializer.serialize_struct("SymF", 2)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Per-degree change of basis between power sums and monomials.
#[derive(Debug)]
pub struct Transition {
    pub parts: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    /// Row λ holds the monomial coordinates of `p_λ`.
    pub p_to_m: Vec<Vec<Rational>>,
    /// Row μ holds the power-sum coordinates of `m_μ`.
    pub m_to_p: Vec<Vec<Rational>>,
}

/// Shared transition table for degree `d`, built on first use.
pub fn transition(d: usize) -> Result<Arc<Transition>> {
    let max = max_degree();
    if d > max {
        return Err(Error::DegreeTooLarge { degree: d, max });
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Transition>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("transition cache").get(&d) {
        return Ok(Arc::clone(t));
    }
    let built = Arc::new(build_transition(d));
    let mut guard = cache.lock().expect("transition cache");
    Ok(Arc::clone(guard.entry(d).or_insert(built)))
}

fn build_transition(d: usize) -> Transition {
    let parts = partitions_of(d);
    let index: HashMap<Partition, usize> =
        parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let p_to_m: Vec<Vec<Rational>> = parts
        .iter()
        .map(|lam| {
            parts
                .iter()
                .map(|mu| Rational::from_integer(BigInt::from(monomial_coefficient(lam, mu))))
                .collect()
        })
        .collect();
    let m_to_p = linalg::inverse(&p_to_m).expect("power sums form a basis over Q");
    Transition {
        parts,
        index,
        p_to_m,
        m_to_p,
    }
}

/// Coefficient of `x^μ` in `p_λ` over `ℓ(μ)` variables: the number of ways to
/// distribute the parts of λ into bins with sums exactly μ.
fn monomial_coefficient(lam: &Partition, mu: &Partition) -> u64 {
    fn rec(parts: &[u32], bins: &mut [u32]) -> u64 {
        let Some((&first, rest)) = parts.split_first() else {
            return u64::from(bins.iter().all(|&b| b == 0));
        };
        let mut total = 0;
        for i in 0..bins.len() {
            if bins[i] >= first {
                bins[i] -= first;
                total += rec(rest, bins);
                bins[i] += first;
            }
        }
        total
    }
    let mut bins = mu.parts().to_vec();
    rec(lam.parts(), &mut bins)
}

/// The (q,t) scalar product, diagonal on power sums.
pub fn scalar_product<F: Field>(f: &SymF<F>, g: &SymF<F>, q: &F, t: &F) -> Result<F> {
    let f = f.convert(Basis::PowerSum)?;
    let g = g.convert(Basis::PowerSum)?;
    let mut acc = F::zero();
    for (lam, a) in f.terms() {
        if let Some(b) = g.terms().get(lam) {
            acc = acc + a.clone() * b.clone() * power_sum_norm(lam, q, t)?;
        }
    }
    Ok(acc)
}

/// `<p_λ, p_λ> = z_λ prod_j (1 - q^{λ_j}) / (1 - t^{λ_j})`.
pub fn power_sum_norm<F: Field>(lam: &Partition, q: &F, t: &F) -> Result<F> {
    let mut acc = F::from_rational(&Rational::from_integer(lam.z_factor()));
    for &part in lam.parts() {
        let e = i64::from(part);
        let num = F::one() - pow_nonneg(q, e);
        let den = F::one() - pow_nonneg(t, e);
        acc = acc * div(&num, &den, "scalar product (1 - t^r)")?;
    }
    Ok(acc)
}

fn pow_nonneg<F: Field>(x: &F, e: i64) -> F {
    x.powi(e).expect("nonnegative exponent")
}

/// One-row function `g_k` from `sum_k g_k y^k = exp(sum_r (1/r) (1-t^r)/(1-q^r) p_r y^r)`.
pub fn g_row<F: Field>(k: i64, q: &F, t: &F) -> Result<SymF<F>> {
    if k < 0 {
        return Ok(SymF::zero(Basis::PowerSum));
    }
    let k = k as usize;
    if k == 0 {
        return Ok(SymF::one(Basis::PowerSum));
    }
    let mut out = SymF::zero(Basis::PowerSum);
    for mu in partitions_of(k) {
        let mut c = F::from_rational(&Rational::new(1.into(), mu.z_factor()));
        for &part in mu.parts() {
            let e = i64::from(part);
            let num = F::one() - pow_nonneg(t, e);
            let den = F::one() - pow_nonneg(q, e);
            c = c * div(&num, &den, "g_k (1 - q^r)")?;
        }
        out.add_term(mu, c);
    }
    Ok(out)
}

/// Rows `g_0..=g_max` at fixed (q,t), for repeated products.
#[derive(Clone, Debug)]
pub struct GFamily<F> {
    rows: Vec<SymF<F>>,
}

impl<F: Field> GFamily<F> {
    pub fn new(max: usize, q: &F, t: &F) -> Result<Self> {
        let rows = (0..=max as i64)
            .map(|k| g_row(k, q, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn row(&self, k: i64) -> SymF<F> {
        if k < 0 {
            return SymF::zero(Basis::PowerSum);
        }
        self.rows
            .get(k as usize)
            .cloned()
            .unwrap_or_else(|| panic!("g_{k} outside the precomputed family"))
    }

    /// `g_a = g_{a_1} ... g_{a_n}`; zero if any index is negative.
    pub fn product(&self, a: &[i64]) -> SymF<F> {
        if a.iter().any(|&k| k < 0) {
            return SymF::zero(Basis::PowerSum);
        }
        let mut acc = SymF::one(Basis::PowerSum);
        for &k in a {
            if k > 0 {
                acc = acc.multiply(&self.rows[k as usize]).expect("power-sum operands");
            }
        }
        acc
    }
}

/// `g_a` for an integer vector `a`.
pub fn g_vector<F: Field>(a: &[i64], q: &F, t: &F) -> Result<SymF<F>> {
    let max = a.iter().copied().max().unwrap_or(0).max(0) as usize;
    Ok(GFamily::new(max, q, t)?.product(a))
}

/// Schur function via Jacobi–Trudi, `det(h_{λ_i - i + j})` with `h_k = g_k(q, q)`.
pub fn jacobi_trudi_schur<F: Field>(lam: &Partition, q: &F) -> Result<SymF<F>> {
    let n = lam.len();
    if n == 0 {
        return Ok(SymF::one(Basis::PowerSum));
    }
    let parts = lam.parts();
    let max = parts[0] as usize + n;
    let h = GFamily::new(max, q, q)?;
    let mut out = SymF::zero(Basis::PowerSum);
    for (perm, sign) in permutations(n) {
        let idx: Vec<i64> = (0..n)
            .map(|i| i64::from(parts[i]) - i as i64 + perm[i] as i64)
            .collect();
        let term = h.product(&idx);
        let signed = if sign { term } else { term.scale(&-F::one()) };
        out = out.add(&signed)?;
    }
    Ok(out)
}

/// Hall–Littlewood `q_k(x; t) = g_k(x; 0, t)`.
pub fn hl_q_row<F: Field>(k: i64, t: &F) -> Result<SymF<F>> {
    g_row(k, &F::zero(), t)
}

/// All permutations of `0..n` with their parity (`true` = even).
fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            (p, inversions % 2 == 0)
        })
        .collect()
}

/// Monomial-basis expansion evaluated on explicit variables, for oracle tests.
pub fn evaluate_monomial<F: Field>(f: &SymF<F>, xs: &[F]) -> Result<F> {
    let m = f.convert(Basis::Monomial)?;
    let mut acc = F::zero();
    for (mu, c) in m.terms() {
        acc = acc + c.clone() * monomial_symmetric_value(mu, xs);
    }
    Ok(acc)
}

/// `m_μ(x_1..x_m)`: sum over distinct rearrangements of μ.
fn monomial_symmetric_value<F: Field>(mu: &Partition, xs: &[F]) -> F {
    let mut padded = mu.parts().to_vec();
    if padded.len() > xs.len() {
        return F::zero();
    }
    padded.resize(xs.len(), 0);
    let mut distinct = padded.clone();
    distinct.sort_unstable();
    let mut acc = F::zero();
    loop {
        let mut term = F::one();
        for (x, &e) in xs.iter().zip(&distinct) {
            term = term * pow_nonneg(x, i64::from(e));
        }
        acc = acc + term;
        if !next_permutation(&mut distinct) {
            break;
        }
    }
    acc
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
