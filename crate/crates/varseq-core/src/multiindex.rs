//! Symmetric multi-indices over the base coordinates.
//!
//! A multi-index is stored as a sorted list of base-coordinate positions;
//! permutations of the entries denote the same index, mirroring the symmetry
//! of mixed partial derivatives.

use std::fmt;

use crate::context::binomial;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(mut entries: Vec<usize>) -> Self {
        entries.sort_unstable();
        MultiIndex(entries)
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    /// The index with one extra entry `i`, re-sorted.
    pub fn push(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|&e| e <= i);
        v.insert(pos, i);
        MultiIndex(v)
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        MultiIndex(v)
    }

    /// Removes one occurrence of `i`; `None` when absent.
    pub fn remove_one(&self, i: usize) -> Option<Self> {
        let pos = self.0.iter().position(|&e| e == i)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    pub fn max_entry(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Occurrence counts per base coordinate.
    pub fn counts(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0usize; n];
        for &e in &self.0 {
            c[e] += 1;
        }
        c
    }

    /// Whether `self` contains `other` as a sub-multiset.
    pub fn contains(&self, other: &Self, n: usize) -> bool {
        let a = self.counts(n);
        let b = other.counts(n);
        a.iter().zip(b.iter()).all(|(x, y)| x >= y)
    }

    /// Multiset difference `self − other`; `None` when not contained.
    pub fn difference(&self, other: &Self, n: usize) -> Option<Self> {
        if !self.contains(other, n) {
            return None;
        }
        let b = other.counts(n);
        let mut used = vec![0usize; n];
        let mut v = Vec::with_capacity(self.len() - other.len());
        for &e in &self.0 {
            if used[e] < b[e] {
                used[e] += 1;
            } else {
                v.push(e);
            }
        }
        Some(MultiIndex(v))
    }

    /// All sorted multi-indices of length `len` over `n` coordinates.
    pub fn enumerate(n: usize, len: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(binomial(n + len - 1, len).max(1));
        let mut cur = Vec::with_capacity(len);
        fn rec(n: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == len {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, len, i, cur, out);
                cur.pop();
            }
        }
        rec(n, len, 0, &mut cur, &mut out);
        out
    }

    /// All sorted multi-indices of length 0..=max_len.
    pub fn enumerate_up_to(n: usize, max_len: usize) -> Vec<MultiIndex> {
        (0..=max_len)
            .flat_map(|l| MultiIndex::enumerate(n, l))
            .collect()
    }
}

/// Per-symbol multiset binomial: Π_i C(count_i(whole), count_i(part)).
///
/// This is the weight with which a sorted representative `part` sits inside
/// the Leibniz expansion of an iterated total derivative along `whole`.
pub fn multiset_binomial(whole: &MultiIndex, part: &MultiIndex, n: usize) -> usize {
    let a = whole.counts(n);
    let b = part.counts(n);
    a.iter().zip(b.iter()).map(|(&x, &y)| binomial(x, y)).product()
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", e + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sorting() {
        assert_eq!(MultiIndex::new(vec![1, 0]), MultiIndex::new(vec![0, 1]));
        assert_eq!(MultiIndex::new(vec![2, 0, 2]).entries(), &[0, 2, 2]);
    }

    #[test]
    fn concat_lengths_add() {
        let a = MultiIndex::new(vec![0, 1]);
        let b = MultiIndex::new(vec![0]);
        assert_eq!(a.concat(&b).entries(), &[0, 0, 1]);
        assert_eq!(a.concat(&b).len(), a.len() + b.len());
    }

    #[test]
    fn enumeration_counts() {
        // combinations with repetition: C(n+len-1, len)
        assert_eq!(MultiIndex::enumerate(2, 2).len(), 3);
        assert_eq!(MultiIndex::enumerate(3, 2).len(), 6);
        assert_eq!(MultiIndex::enumerate(2, 0).len(), 1);
    }

    #[test]
    fn multiset_difference() {
        let a = MultiIndex::new(vec![0, 0, 1]);
        let b = MultiIndex::new(vec![0, 1]);
        assert_eq!(a.difference(&b, 2).unwrap().entries(), &[0]);
        assert!(b.difference(&a, 2).is_none());
    }

    #[test]
    fn multiset_binomial_weights() {
        let n = 2;
        // C((1,1,2); (1)) = C(2,1)*C(1,0) = 2
        let whole = MultiIndex::new(vec![0, 0, 1]);
        let part = MultiIndex::new(vec![0]);
        assert_eq!(multiset_binomial(&whole, &part, n), 2);
        // C((1,2); (1)) = 1
        let whole = MultiIndex::new(vec![0, 1]);
        assert_eq!(multiset_binomial(&whole, &part, n), 1);
    }
}
