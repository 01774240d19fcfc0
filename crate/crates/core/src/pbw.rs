//! PBW normal forms in `U(L)` for a Lie algebra given by a totally ordered
//! basis with computable brackets, and the algebra `D_n ⊗ U(L_n)`.
//!
//! A word `... y x ...` with `y > x` is rewritten to `... x y ... + ... [y,x] ...`
//! until every monomial is weakly increasing. Brackets shorten the word and
//! swaps remove an inversion, so rewriting terminates; the PBW theorem
//! makes the result independent of which descent is rewritten first.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Result};
use crate::rational::{int, Rational};
use crate::weyl::{mul_monomials, WeylElement, WeylMonomial};
use crate::witt::{VectorField, WittElement};

/// An ordered Lie-algebra basis with a bracket.
pub trait LieBasis: Ord + Clone + fmt::Debug {
    fn lie_bracket(&self, other: &Self) -> Vec<(Self, Rational)>;
}

impl LieBasis for VectorField {
    fn lie_bracket(&self, other: &Self) -> Vec<(Self, Rational)> {
        self.bracket(other)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PbwElement<G> {
    terms: BTreeMap<Vec<G>, Rational>,
}

impl<G: LieBasis> PbwElement<G> {
    pub fn zero() -> Self {
        PbwElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new(), Rational::one())
    }

    /// A single monomial; the caller guarantees it is ordered.
    pub fn monomial(word: Vec<G>, c: Rational) -> Self {
        debug_assert!(is_ordered(&word));
        let mut e = Self::zero();
        e.add_term(word, c);
        e
    }

    pub fn generator(g: G) -> Self {
        Self::monomial(vec![g], Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<G>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &[G]) -> Rational {
        self.terms.get(word).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, word: Vec<G>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElement<G>, c: &Rational) {
        for (w, v) in &other.terms {
            self.add_term(w.clone(), v * c);
        }
    }

    pub fn add(&self, other: &PbwElement<G>) -> PbwElement<G> {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &PbwElement<G>) -> PbwElement<G> {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, c: &Rational) -> PbwElement<G> {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Filtration degree: the longest monomial.
    pub fn filtration_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// The part of exactly the given filtration degree.
    pub fn top_part(&self, degree: usize) -> PbwElement<G> {
        PbwElement {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|w| is_ordered(w))
    }
}

pub fn is_ordered<G: Ord>(word: &[G]) -> bool {
    word.windows(2).all(|p| p[0] <= p[1])
}

/// Which descent is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    LeftmostFirst,
    RightmostFirst,
}

/// Rewriting engine with a memo table confined to its own lifetime.
pub struct Normalizer<G: LieBasis> {
    strategy: RewriteStrategy,
    memo: BTreeMap<Vec<G>, PbwElement<G>>,
}

impl<G: LieBasis> Normalizer<G> {
    pub fn new(strategy: RewriteStrategy) -> Self {
        Normalizer {
            strategy,
            memo: BTreeMap::new(),
        }
    }

    pub fn normalize(&mut self, word: &[G]) -> PbwElement<G> {
        if let Some(hit) = self.memo.get(word) {
            return hit.clone();
        }
        let descents = (0..word.len().saturating_sub(1)).filter(|&p| word[p] > word[p + 1]);
        let pos = match self.strategy {
            RewriteStrategy::LeftmostFirst => descents.min(),
            RewriteStrategy::RightmostFirst => descents.max(),
        };
        let result = match pos {
            None => PbwElement::monomial(word.to_vec(), Rational::one()),
            Some(p) => {
                let mut swapped = word.to_vec();
                swapped.swap(p, p + 1);
                let mut out = self.normalize(&swapped);
                for (g, c) in word[p].lie_bracket(&word[p + 1]) {
                    let mut shorter = Vec::with_capacity(word.len() - 1);
                    shorter.extend_from_slice(&word[..p]);
                    shorter.push(g);
                    shorter.extend_from_slice(&word[p + 2..]);
                    let nf = self.normalize(&shorter);
                    out.add_scaled(&nf, &c);
                }
                out
            }
        };
        self.memo.insert(word.to_vec(), result.clone());
        result
    }

    pub fn mul(&mut self, u: &PbwElement<G>, v: &PbwElement<G>) -> PbwElement<G> {
        let mut out = PbwElement::zero();
        for (a, ca) in &u.terms {
            for (b, cb) in &v.terms {
                let mut word = a.clone();
                word.extend_from_slice(b);
                let nf = self.normalize(&word);
                out.add_scaled(&nf, &(ca * cb));
            }
        }
        out
    }
}

pub fn pbw_normalize<G: LieBasis>(word: &[G]) -> PbwElement<G> {
    Normalizer::new(RewriteStrategy::LeftmostFirst).normalize(word)
}

pub fn pbw_normalize_with<G: LieBasis>(word: &[G], strategy: RewriteStrategy) -> PbwElement<G> {
    Normalizer::new(strategy).normalize(word)
}

pub fn pbw_mul<G: LieBasis>(u: &PbwElement<G>, v: &PbwElement<G>) -> PbwElement<G> {
    Normalizer::new(RewriteStrategy::LeftmostFirst).mul(u, v)
}

/// Embeds a Lie algebra element as a degree-one PBW element.
pub fn pbw_from_witt(x: &WittElement) -> PbwElement<VectorField> {
    let mut out = PbwElement::zero();
    for (vf, c) in x.terms() {
        out.add_term(vec![vf.clone()], c.clone());
    }
    out
}

impl<G: LieBasis + fmt::Display> fmt::Display for PbwElement<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms.iter().map(|(w, c)| {
            let word = w.iter().map(|g| format!("({g})")).collect::<String>();
            crate::parse::format_term(c, &word)
        });
        f.write_str(&crate::parse::join_terms(parts))
    }
}

impl<G: LieBasis + fmt::Display> fmt::Debug for PbwElement<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pbw({self})")
    }
}

/// Key of a pure tensor `t^m ∂^r ⊗ (ordered word in L_n)`.
pub type DnUlnKey = (WeylMonomial, Vec<VectorField>);

/// An element of `D_n ⊗ U(L_n)` with both factors in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct DnUlnElement {
    n: usize,
    terms: BTreeMap<DnUlnKey, Rational>,
}

impl DnUlnElement {
    pub fn zero(n: usize) -> Self {
        DnUlnElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::tensor(&WeylElement::one(n), &PbwElement::one())
    }

    /// `d ⊗ u`
    pub fn tensor(d: &WeylElement, u: &PbwElement<VectorField>) -> Self {
        debug_assert!(u.is_normal());
        let mut out = DnUlnElement::zero(d.dim());
        for (k, c) in d.terms() {
            for (w, v) in u.terms() {
                out.add_term((k.clone(), w.clone()), c * v);
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DnUlnKey, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: DnUlnKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &DnUlnElement, c: &Rational) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add(&self, other: &DnUlnElement) -> DnUlnElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &DnUlnElement) -> DnUlnElement {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, c: &Rational) -> DnUlnElement {
        let mut out = DnUlnElement::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &DnUlnElement) -> Result<DnUlnElement> {
        let mut normalizer = Normalizer::new(RewriteStrategy::LeftmostFirst);
        self.mul_with(other, &mut normalizer)
    }

    /// `(d ⊗ u)(d' ⊗ u') = dd' ⊗ uu'`, reusing a caller-owned normalizer.
    pub fn mul_with(
        &self,
        other: &DnUlnElement,
        normalizer: &mut Normalizer<VectorField>,
    ) -> Result<DnUlnElement> {
        check_dim(self.n, other.n)?;
        let mut out = DnUlnElement::zero(self.n);
        for ((dx, ux), cx) in &self.terms {
            for ((dy, uy), cy) in &other.terms {
                let mut word = ux.clone();
                word.extend_from_slice(uy);
                let right = normalizer.normalize(&word);
                let c = cx * cy;
                for (dk, dc) in mul_monomials(dx, dy) {
                    let cd = &c * dc;
                    for (w, wc) in right.terms() {
                        out.add_term((dk.clone(), w.clone()), &cd * wc);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &DnUlnElement, normalizer: &mut Normalizer<VectorField>) -> Result<DnUlnElement> {
        Ok(self.mul_with(other, normalizer)?.sub(&other.mul_with(self, normalizer)?))
    }

    /// Largest `|m| + |r|` of the left (Weyl) factor over all terms.
    pub fn left_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|((m, r), _)| m.degree() + r.degree())
            .max()
    }
}

pub fn dnuln_mul(a: &DnUlnElement, b: &DnUlnElement) -> Result<DnUlnElement> {
    a.mul(b)
}

impl fmt::Display for DnUlnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.terms.iter().map(|(((m, r), w), c)| {
            let left = WeylElement::monomial(m.clone(), r.clone(), Rational::one()).to_string();
            let right = if w.is_empty() {
                "1".to_string()
            } else {
                w.iter().map(|g| format!("({g})")).collect::<String>()
            };
            crate::parse::format_term(c, &format!("{left}⊗{right}"))
        });
        f.write_str(&crate::parse::join_terms(parts))
    }
}

impl fmt::Debug for DnUlnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnUln[{}]({self})", self.n)
    }
}
