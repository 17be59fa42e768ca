//! Integer partitions and the dominance order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A partition with trailing zeros stripped.
///
/// The derived `Ord` is lexicographic on the parts, which for partitions of
/// equal weight is a linear extension of the dominance order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Validates that `parts` is weakly decreasing; trailing zeros are dropped.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Self(parts))
    }

    /// Sorts an arbitrary composition into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self(parts)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parts padded with zeros to exactly `n` entries.
    pub fn padded(&self, n: usize) -> Result<Vec<u32>> {
        if self.len() > n {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {n} nonzero parts"
            )));
        }
        let mut v = self.0.clone();
        v.resize(n, 0);
        Ok(v)
    }

    /// `m_i(λ)` for `i = 1..=λ_1`, indexed from zero.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.0.first().copied().unwrap_or(0) as usize];
        for &p in &self.0 {
            m[p as usize - 1] += 1;
        }
        m
    }

    /// `z_λ = prod_i i^{m_i} m_i!`.
    pub fn z_factor(&self) -> BigInt {
        let mut z = BigInt::one();
        for (i, &m) in self.multiplicities().iter().enumerate() {
            for k in 1..=m {
                z *= BigInt::from(i as u64 + 1) * BigInt::from(k);
            }
        }
        z
    }

    /// `self ≤ other` in dominance order (both of equal weight).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..self.len().max(other.len()) {
            a += u64::from(self.0.get(i).copied().unwrap_or(0));
            b += u64::from(other.0.get(i).copied().unwrap_or(0));
            if a > b {
                return false;
            }
        }
        true
    }

    /// Concatenate and re-sort (the index of `p_λ p_μ`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Partition::from_unsorted(v)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses `"2,1,0"` into its raw parts, keeping zeros.
pub fn parse_parts(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidPartition(s.to_string()))
        })
        .collect()
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

/// All partitions of `d`, ascending in lexicographic order.
pub fn partitions_of(d: usize) -> Vec<Partition> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d as u32, d as u32, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Partitions of weight `d` with at most `n` parts, zero-padded to length `n`.
pub fn padded_partitions(d: usize, n: usize) -> Vec<Vec<u32>> {
    partitions_of(d)
        .into_iter()
        .filter(|p| p.len() <= n)
        .map(|p| p.padded(n).expect("length checked"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|d| partitions_of(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn parse_and_display() {
        let p: Partition = "2,1,0".parse().unwrap();
        assert_eq!(p.parts(), &[2, 1]);
        assert_eq!(p.to_string(), "2,1");
        assert_eq!(parse_parts("2,1,0").unwrap(), vec![2, 1, 0]);
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }

    #[test]
    fn z_factors() {
        let p = Partition::new(vec![1, 1]).unwrap();
        assert_eq!(p.z_factor(), BigInt::from(2));
        let p = Partition::new(vec![3, 2, 2, 1]).unwrap();
        // 1 * 2^2 * 2! * 3
        assert_eq!(p.z_factor(), BigInt::from(24));
    }

    #[test]
    fn first_incomparable_pair() {
        let a = Partition::new(vec![4, 1, 1]).unwrap();
        let b = Partition::new(vec![3, 3]).unwrap();
        assert!(!a.dominated_by(&b));
        assert!(!b.dominated_by(&a));
        assert!(b < a);
    }

    #[test]
    fn dominance_is_a_partial_order_extended_by_lex() {
        for d in 0..=8 {
            let ps = partitions_of(d);
            for a in &ps {
                assert!(a.dominated_by(a));
                for b in &ps {
                    if a != b && a.dominated_by(b) {
                        assert!(!b.dominated_by(a), "antisymmetry {a} {b}");
                        assert!(a < b, "lex extends dominance {a} {b}");
                    }
                    for c in &ps {
                        if a.dominated_by(b) && b.dominated_by(c) {
                            assert!(a.dominated_by(c));
                        }
                    }
                }
            }
        }
    }
}
