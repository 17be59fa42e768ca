//! Macdonald polynomials by Gram–Schmidt in the monomial basis.
//!
//! For each degree the partitions are processed in ascending lexicographic
//! order, which extends dominance. `P_λ` is `m_λ` plus a combination of the
//! lex-earlier monomials chosen so that it is orthogonal to all of them. The
//! dominance-triangularity of the result is then a checked property rather
//! than an assumption.

use crate::error::{Error, Result};
use crate::linalg;
use crate::partition::Partition;
use crate::scalar::{div, Field};
use crate::symfunc::{power_sum_norm, scalar_product, transition, Basis, SymF};

/// All `P_μ` of one degree at a fixed `(q, t)`.
#[derive(Clone, Debug)]
pub struct MacdonaldBasis<F> {
    degree: usize,
    parts: Vec<Partition>,
    polys: Vec<SymF<F>>,
}

/// Gram matrix `<m_μ, m_ν>` over the partitions of `d`, in lex order.
fn monomial_gram<F: Field>(d: usize, q: &F, t: &F) -> Result<(Vec<Partition>, Vec<Vec<F>>)> {
    let tr = transition(d)?;
    let norms = tr
        .parts
        .iter()
        .map(|p| power_sum_norm(p, q, t))
        .collect::<Result<Vec<F>>>()?;
    let lift: Vec<Vec<F>> = tr
        .m_to_p
        .iter()
        .map(|row| row.iter().map(F::from_rational).collect())
        .collect();
    let k = tr.parts.len();
    let mut gram = vec![vec![F::zero(); k]; k];
    for a in 0..k {
        for b in a..k {
            let mut acc = F::zero();
            for r in 0..k {
                if !lift[a][r].is_zero() && !lift[b][r].is_zero() {
                    acc = acc + lift[a][r].clone() * lift[b][r].clone() * norms[r].clone();
                }
            }
            gram[a][b] = acc.clone();
            gram[b][a] = acc;
        }
    }
    Ok((tr.parts.clone(), gram))
}

/// Coefficients of `P` for the partition at `idx`, given the Gram matrix.
fn solve_row<F: Field>(parts: &[Partition], gram: &[Vec<F>], idx: usize) -> Result<SymF<F>> {
    let lower: Vec<Vec<F>> = (0..idx).map(|r| gram[r][..idx].to_vec()).collect();
    let rhs: Vec<F> = (0..idx).map(|r| -gram[r][idx].clone()).collect();
    let coeffs = linalg::solve(&lower, &rhs)
        .ok_or_else(|| Error::SingularGram(format!("below {}", parts[idx])))?;
    let mut p = SymF::term(Basis::Monomial, parts[idx].clone(), F::one());
    for (mu, c) in parts.iter().zip(coeffs) {
        p.add_term(mu.clone(), c);
    }
    Ok(p)
}

impl<F: Field> MacdonaldBasis<F> {
    pub fn new(degree: usize, q: &F, t: &F) -> Result<Self> {
        let (parts, gram) = monomial_gram(degree, q, t)?;
        let polys = (0..parts.len())
            .map(|i| solve_row(&parts, &gram, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            degree,
            parts,
            polys,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.parts
    }

    pub fn p(&self, lam: &Partition) -> Option<&SymF<F>> {
        self.parts.iter().position(|p| p == lam).map(|i| &self.polys[i])
    }
}

/// `P_λ` in the monomial basis.
pub fn macdonald_p<F: Field>(lam: &Partition, q: &F, t: &F) -> Result<SymF<F>> {
    let (parts, gram) = monomial_gram(lam.weight(), q, t)?;
    let idx = parts
        .iter()
        .position(|p| p == lam)
        .expect("every partition of d is listed");
    solve_row(&parts, &gram, idx)
}

/// `b_λ = <P_λ, P_λ>^{-1}`.
pub fn b_coefficient<F: Field>(p: &SymF<F>, q: &F, t: &F) -> Result<F> {
    let norm = scalar_product(p, p, q, t)?;
    div(&F::one(), &norm, "<P_λ, P_λ>")
}

/// `Q_λ = b_λ P_λ`, in the power-sum basis.
pub fn macdonald_q<F: Field>(lam: &Partition, q: &F, t: &F) -> Result<SymF<F>> {
    let p = macdonald_p(lam, q, t)?;
    let b = b_coefficient(&p, q, t)?;
    p.scale(&b).convert(Basis::PowerSum)
}
