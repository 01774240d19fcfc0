//! Multi-indices `m ∈ Z_{≥0}^n` and the degree-then-lex total order.
//!
//! `r < m` iff `|r| < |m|`, or `|r| = |m|` and `r_l < m_l` at the first
//! coordinate where they differ. Every index has finitely many
//! predecessors, so the order is isomorphic to `Z_{≥0}` and enumeration in
//! this order fixes the basis ordering of every truncated matrix.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

use crate::error::{check_dim, Error, Result};
use crate::rational::{binomial, factorial};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn new(entries: impl IntoIterator<Item = u32>) -> Self {
        MultiIndex(entries.into_iter().collect())
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The unit vector `e_axis` (axes are 0-based).
    pub fn unit(n: usize, axis: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[axis] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// `|m| = m_1 + ... + m_n`
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` when some coordinate would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(MultiIndex)
    }

    pub fn add_unit(&self, axis: usize, times: u32) -> MultiIndex {
        let mut m = self.clone();
        m.0[axis] += times;
        m
    }

    pub fn sub_unit(&self, axis: usize) -> Option<MultiIndex> {
        let mut m = self.clone();
        m.0[axis] = m.0[axis].checked_sub(1)?;
        Some(m)
    }

    /// Coordinatewise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `m! = m_1! ... m_n!`
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e))
    }

    /// The immediate predecessor in the total order.
    pub fn predecessor(&self) -> Result<MultiIndex> {
        let n = self.dim();
        if self.is_zero() {
            return Err(Error::NoPredecessor);
        }
        // Rightmost non-final coordinate that can be decremented; moving the
        // unit (plus the tail mass) just to its right gives the lex-previous
        // composition of the same degree.
        match (0..n.saturating_sub(1)).rev().find(|&l| self.0[l] > 0) {
            Some(l) => {
                let tail: u32 = self.0[l + 1..].iter().sum();
                let mut m = self.clone();
                m.0[l] -= 1;
                m.0[l + 1] = tail + 1;
                for e in &mut m.0[l + 2..] {
                    *e = 0;
                }
                Ok(m)
            }
            // m = (0,...,0,d): the smallest index of degree d, preceded by
            // the largest index of degree d - 1.
            None => {
                let mut m = Self::zero(n);
                m.0[0] = self.degree() - 1;
                Ok(m)
            }
        }
    }

    /// The immediate successor in the total order.
    pub fn successor(&self) -> MultiIndex {
        let n = self.dim();
        // Leftmost move: find the rightmost l < n-1 with mass to its right,
        // bump m_l and collapse the tail onto the last coordinate.
        let mut suffix = 0u32;
        for l in (0..n).rev() {
            if l + 1 < n && suffix > 0 {
                let mut m = self.clone();
                m.0[l] += 1;
                for e in &mut m.0[l + 1..] {
                    *e = 0;
                }
                m.0[n - 1] = suffix - 1;
                return m;
            }
            suffix += self.0[l];
        }
        // Largest of its degree; the next is (0,...,0,d+1).
        let mut m = Self::zero(n);
        m.0[n - 1] = self.degree() + 1;
        m
    }

    /// Number of indices strictly smaller than `self`.
    pub fn rank(&self) -> BigInt {
        let n = self.dim() as u32;
        let d = self.degree();
        // indices of degree < d
        let mut count = if d == 0 { BigInt::from(0) } else { binomial(d - 1 + n, n) };
        let mut remaining = d;
        for l in 0..self.dim() {
            let slots_after = n - l as u32 - 1;
            for v in 0..self.0[l] {
                let rest = remaining - v;
                count += compositions(rest, slots_after);
            }
            remaining -= self.0[l];
        }
        count
    }

    /// All indices of exactly degree `d`, ascending.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = SmallVec::from_elem(0u32, n);
        fill_lex(&mut cur, 0, d, &mut out);
        out
    }

    /// All indices with `|m| ≤ max_degree`, ascending in the total order.
    pub fn enumerate(n: usize, max_degree: u32) -> Vec<MultiIndex> {
        (0..=max_degree).flat_map(|d| Self::of_degree(n, d)).collect()
    }

    /// Unbounded ascending iterator starting at zero.
    pub fn ascending(n: usize) -> impl Iterator<Item = MultiIndex> {
        std::iter::successors(Some(Self::zero(n)), |m| Some(m.successor()))
    }
}

fn compositions(total: u32, slots: u32) -> BigInt {
    if slots == 0 {
        return BigInt::from((total == 0) as u8);
    }
    binomial(total + slots - 1, slots - 1)
}

fn fill_lex(cur: &mut SmallVec<[u32; 4]>, pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    let n = cur.len();
    if pos + 1 == n {
        cur[pos] = left;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in 0..=left {
        cur[pos] = v;
        fill_lex(cur, pos + 1, left - v, out);
    }
    cur[pos] = 0;
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de> serde::Deserialize<'de> for MultiIndex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(MultiIndex::new)
    }
}

/// Compares two indices in the total order, rejecting mismatched lengths.
pub fn mi_cmp(m: &MultiIndex, r: &MultiIndex) -> Result<Ordering> {
    check_dim(m.dim(), r.dim())?;
    Ok(m.cmp(r))
}

pub fn mi_predecessor(m: &MultiIndex) -> Result<MultiIndex> {
    m.predecessor()
}

/// `binom(m, r) = Π binom(m_i, r_i)`; zero when some `r_i > m_i`.
pub fn binom_multi(m: &MultiIndex, r: &MultiIndex) -> Result<BigInt> {
    check_dim(m.dim(), r.dim())?;
    Ok(m.0
        .iter()
        .zip(&r.0)
        .fold(BigInt::one(), |acc, (&a, &b)| acc * binomial(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    #[test]
    fn order_examples() {
        assert_eq!(mi_cmp(&mi(&[1, 2]), &mi(&[2, 1])).unwrap(), Ordering::Less);
        assert_eq!(mi_cmp(&mi(&[0, 3]), &mi(&[3, 0])).unwrap(), Ordering::Less);
        assert_eq!(mi_cmp(&mi(&[2, 0]), &mi(&[0, 1])).unwrap(), Ordering::Greater);
        assert!(matches!(
            mi_cmp(&mi(&[1]), &mi(&[1, 0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(mi_predecessor(&mi(&[2, 0])).unwrap(), mi(&[1, 1]));
        assert_eq!(mi_predecessor(&mi(&[0, 2])).unwrap(), mi(&[1, 0]));
        assert_eq!(mi_predecessor(&mi(&[1])).unwrap(), mi(&[0]));
        assert_eq!(mi_predecessor(&mi(&[0, 0])), Err(Error::NoPredecessor));
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_multi(&mi(&[2, 1]), &mi(&[1, 0])).unwrap(), BigInt::from(2));
        assert_eq!(binom_multi(&mi(&[2, 1]), &mi(&[2, 1])).unwrap(), BigInt::from(1));
        assert_eq!(binom_multi(&mi(&[1, 1]), &mi(&[2, 0])).unwrap(), BigInt::from(0));
    }

    /// Brute force: all indices in a box, sorted by the textbook definition.
    fn sorted_box(n: usize, bound: u32) -> Vec<MultiIndex> {
        let mut all = vec![MultiIndex::zero(n)];
        for axis in 0..n {
            all = all
                .into_iter()
                .flat_map(|m| (0..=bound).map(move |v| {
                    let mut m = m.clone();
                    m.0[axis] = v;
                    m
                }))
                .collect();
        }
        let lt = |r: &MultiIndex, m: &MultiIndex| -> bool {
            if r.degree() != m.degree() {
                return r.degree() < m.degree();
            }
            match r.0.iter().zip(&m.0).find(|(a, b)| a != b) {
                Some((a, b)) => a < b,
                None => false,
            }
        };
        all.retain(|m| m.degree() <= bound);
        all.sort_by(|r, m| {
            if lt(r, m) {
                Ordering::Less
            } else if lt(m, r) {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        });
        all
    }

    #[test]
    fn enumeration_matches_definition() {
        for n in 1..=3 {
            let brute = sorted_box(n, 6);
            assert_eq!(MultiIndex::enumerate(n, 6), brute);
            let asc: Vec<_> = MultiIndex::ascending(n).take(brute.len()).collect();
            assert_eq!(asc, brute);
        }
    }

    #[test]
    fn predecessor_is_immediate_exhaustive() {
        for n in 1..=3 {
            let all = MultiIndex::enumerate(n, 6);
            for w in all.windows(2) {
                assert_eq!(w[1].predecessor().unwrap(), w[0]);
                assert_eq!(w[0].successor(), w[1]);
            }
            for (pos, m) in all.iter().enumerate() {
                assert_eq!(m.rank(), BigInt::from(pos));
            }
        }
    }

    fn arb_index(n: usize) -> impl Strategy<Value = MultiIndex> {
        proptest::collection::vec(0u32..5, n).prop_map(MultiIndex::new)
    }

    proptest! {
        #[test]
        fn total_order_laws(a in arb_index(3), b in arb_index(3), c in arb_index(3)) {
            // trichotomy and antisymmetry
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn rank_counts_smaller_indices(a in arb_index(2)) {
            let smaller = MultiIndex::enumerate(2, a.degree())
                .into_iter()
                .filter(|r| r < &a)
                .count();
            prop_assert_eq!(a.rank(), BigInt::from(smaller));
        }
    }
}
