//! The Weyl algebra `D_n` in normal order (all `t` to the left of all `∂`),
//! the twist `σ_a: t_i ↦ t_i, ∂_i ↦ ∂_i + a_i`, and the twisted module
//! `A_n^a`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::parse::{format_monomial, format_term, join_terms, parse_terms};
use crate::poly::Poly;
use crate::rational::{self, binomial, falling_factorial, from_bigint, int, Rational};

/// A normal-ordered monomial `t^m ∂^r`, stored as `(m, r)`.
pub type WeylMonomial = (MultiIndex, MultiIndex);

#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylMonomial, Rational>,
}

/// `∂^r · t^m` rewritten in normal order:
/// `Σ_s Π_i binom(r_i, s_i) m_i^(s_i) · t^{m−s} ∂^{r−s}` (falling factorials).
pub fn reorder(r: &MultiIndex, m: &MultiIndex) -> Vec<(WeylMonomial, Rational)> {
    let n = r.dim();
    let mut out = vec![((MultiIndex::zero(n), MultiIndex::zero(n)), Rational::one())];
    for axis in 0..n {
        let (ri, mi) = (r.get(axis), m.get(axis));
        let mut next = Vec::with_capacity(out.len() * (ri.min(mi) as usize + 1));
        for ((tm, dr), c) in &out {
            for s in 0..=ri.min(mi) {
                let coeff = binomial(ri, s) * falling_factorial(mi, s);
                next.push((
                    (tm.add_unit(axis, mi - s), dr.add_unit(axis, ri - s)),
                    c * from_bigint(coeff),
                ));
            }
        }
        out = next;
    }
    out
}

/// Product of two normal-ordered monomials.
pub fn mul_monomials(x: &WeylMonomial, y: &WeylMonomial) -> Vec<(WeylMonomial, Rational)> {
    let ((a, b), (c, d)) = (x, y);
    reorder(b, c)
        .into_iter()
        .map(|((tm, dr), coeff)| ((a.add(&tm), dr.add(d)), coeff))
        .collect()
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(MultiIndex::zero(n), MultiIndex::zero(n), Rational::one())
    }

    pub fn monomial(t: MultiIndex, d: MultiIndex, c: Rational) -> Self {
        let mut x = WeylElement::zero(t.dim());
        x.add_term((t, d), c);
        x
    }

    pub fn t(n: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, axis), MultiIndex::zero(n), Rational::one())
    }

    pub fn d(n: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::zero(n), MultiIndex::unit(n, axis), Rational::one())
    }

    pub fn from_poly(f: &Poly) -> Self {
        let n = f.dim();
        let mut x = WeylElement::zero(n);
        for (m, c) in f.terms() {
            x.add_term((m.clone(), MultiIndex::zero(n)), c.clone());
        }
        x
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (WeylMonomial, Rational)>) -> Self {
        let mut x = WeylElement::zero(n);
        for (k, c) in terms {
            x.add_term(k, c);
        }
        x
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Ok(Self::from_terms(
            n,
            parse_terms("operator", n, text)?
                .into_iter()
                .map(|t| ((t.t, t.d), t.coeff)),
        ))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, key: WeylMonomial, c: Rational) {
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

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        WeylElement::from_terms(self.n, self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        check_dim(self.n, other.n)?;
        let mut out = WeylElement::zero(self.n);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let c = cx * cy;
                for (k, v) in mul_monomials(x, y) {
                    out.add_term(k, v * &c);
                }
            }
        }
        Ok(out)
    }

    /// `XY − YX`
    pub fn commutator(&self, other: &WeylElement) -> Result<WeylElement> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    /// Largest `|m| + |r|` over the terms (the Bernstein degree).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, r)| m.degree() + r.degree()).max()
    }

    /// The natural action of `D_n` on `A_n`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        check_dim(self.n, f.dim())?;
        let mut out = Poly::zero(self.n);
        for ((m, r), c) in &self.terms {
            for (s, fc) in f.terms() {
                if !r.divides(s) {
                    continue;
                }
                let coeff = (0..self.n).fold(c * fc, |acc, i| {
                    acc * from_bigint(falling_factorial(s.get(i), r.get(i)))
                });
                out.add_term(s.checked_sub(r).unwrap().add(m), coeff);
            }
        }
        Ok(out)
    }
}

pub fn weyl_mul(x: &WeylElement, y: &WeylElement) -> Result<WeylElement> {
    x.mul(y)
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_terms(self.terms.iter().rev().map(|((m, r), c)| {
            let mono = [format_monomial('t', m), format_monomial('d', r)]
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect::<Vec<_>>()
                .join("*");
            format_term(c, &mono)
        }));
        f.write_str(&s)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weyl[{}]({self})", self.n)
    }
}

/// The type `a ∈ Q^n` of a Whittaker module (`∂_i` acts on Whittaker
/// vectors by `a_i`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WhittakerType {
    a: Vec<Rational>,
    nonsingular: bool,
}

impl WhittakerType {
    pub fn new(a: Vec<Rational>) -> Self {
        let nonsingular = a.iter().all(|x| !x.is_zero());
        WhittakerType { a, nonsingular }
    }

    pub fn from_i64(a: &[i64]) -> Self {
        Self::new(a.iter().map(|&v| int(v)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rational::zero(); n])
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::new(rational::parse_list("a", text)?))
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn get(&self, axis: usize) -> &Rational {
        &self.a[axis]
    }

    pub fn values(&self) -> &[Rational] {
        &self.a
    }

    pub fn is_nonsingular(&self) -> bool {
        self.nonsingular
    }

    pub fn negate(&self) -> WhittakerType {
        Self::new(self.a.iter().map(|x| -x).collect())
    }

    /// Errors unless every `a_i ≠ 0`.
    pub fn require_nonsingular(&self) -> Result<()> {
        if self.nonsingular {
            Ok(())
        } else {
            Err(Error::SingularType(self.to_string()))
        }
    }
}

impl fmt::Display for WhittakerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.a.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// `σ_a(t^m ∂^r) = t^m Π_i (∂_i + a_i)^{r_i}`, already in normal order.
pub fn sigma_twist(a: &WhittakerType, x: &WeylElement) -> Result<WeylElement> {
    check_dim(x.n, a.dim())?;
    let n = x.n;
    let mut out = WeylElement::zero(n);
    for ((m, r), c) in &x.terms {
        // expand Π_i Σ_{s_i} binom(r_i, s_i) a_i^{r_i − s_i} ∂_i^{s_i}
        let mut parts = vec![(MultiIndex::zero(n), c.clone())];
        for axis in 0..n {
            let ri = r.get(axis);
            let mut next = Vec::new();
            for (s, v) in &parts {
                for si in 0..=ri {
                    let coeff = from_bigint(binomial(ri, si)) * rational::pow(a.get(axis), ri - si);
                    if !coeff.is_zero() {
                        next.push((s.add_unit(axis, si), v * coeff));
                    }
                }
            }
            parts = next;
        }
        for (s, v) in parts {
            out.add_term((m.clone(), s), v);
        }
    }
    Ok(out)
}

/// The action of `D_n` on `A_n^a`: `X · f = σ_a(X) f`.
pub fn act_twisted(a: &WhittakerType, x: &WeylElement, f: &Poly) -> Result<Poly> {
    check_dim(x.n, f.dim())?;
    sigma_twist(a, x)?.apply(f)
}

/// Witness that the `D_n`-submodule of `A_n^a` generated by `f ≠ 0`
/// contains `1`: the operators `∂_i − a_i` applied in order send `f` to
/// `scalar · 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionWitness {
    /// Axis of each `∂_i − a_i` step, in application order.
    pub axes: Vec<usize>,
    pub steps: Vec<WeylElement>,
    pub scalar: Rational,
}

pub fn reduce_to_constant(a: &WhittakerType, f: &Poly) -> Result<ReductionWitness> {
    check_dim(a.dim(), f.dim())?;
    if f.is_zero() {
        return Err(Error::ZeroInput("reduce_to_constant"));
    }
    let n = f.dim();
    let mut current = f.clone();
    let mut axes = Vec::new();
    let mut steps = Vec::new();
    while current.degree() != Some(0) {
        // lowest-numbered axis with the largest t_i-degree
        let (axis, _) = (0..n)
            .map(|i| (i, current.degree_in(i).unwrap_or(0)))
            .fold((0, 0), |best, cand| if cand.1 > best.1 { cand } else { best });
        let step = WeylElement::d(n, axis).sub(&WeylElement::one(n).scale(a.get(axis)));
        current = act_twisted(a, &step, &current)?;
        axes.push(axis);
        steps.push(step);
    }
    Ok(ReductionWitness {
        axes,
        steps,
        scalar: current.constant_term(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn w(n: usize, s: &str) -> WeylElement {
        WeylElement::parse(n, s).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(weyl_mul(&w(1, "d1"), &w(1, "t1")).unwrap(), w(1, "t1*d1 + 1"));
        let lhs = weyl_mul(&w(1, "d1"), &w(1, "t1^2")).unwrap();
        assert_eq!(lhs, w(1, "t1^2*d1 + 2*t1"));
        let composite = |f: &Poly| w(1, "d1").apply(&w(1, "t1^2").apply(f).unwrap()).unwrap();
        for k in 0..=4 {
            let f = Poly::monomial(MultiIndex::new([k]), int(1));
            assert_eq!(lhs.apply(&f).unwrap(), composite(&f));
        }
        let sq = weyl_mul(&w(1, "t1*d1"), &w(1, "t1*d1")).unwrap();
        assert_eq!(sq, w(1, "t1^2*d1^2 + t1*d1"));
        let h = w(1, "t1*d1");
        for k in 0..=4 {
            let f = Poly::monomial(MultiIndex::new([k]), int(1));
            assert_eq!(sq.apply(&f).unwrap(), h.apply(&h.apply(&f).unwrap()).unwrap());
        }
        assert!(weyl_mul(&w(1, "d1"), &w(2, "t1")).is_err());
    }

    /// Repeated single swaps `∂_i t_i → t_i ∂_i + 1` as an oracle for the
    /// closed reordering rule.
    fn reorder_by_swaps(word: Vec<(bool, usize)>, n: usize) -> WeylElement {
        // word letters: (is_derivative, axis)
        let pos = word
            .windows(2)
            .position(|p| p[0].0 && !p[1].0);
        match pos {
            None => {
                let mut t = MultiIndex::zero(n);
                let mut d = MultiIndex::zero(n);
                for (is_d, axis) in word {
                    if is_d {
                        d = d.add_unit(axis, 1);
                    } else {
                        t = t.add_unit(axis, 1);
                    }
                }
                WeylElement::monomial(t, d, int(1))
            }
            Some(p) => {
                let mut swapped = word.clone();
                swapped.swap(p, p + 1);
                let mut out = reorder_by_swaps(swapped, n);
                if word[p].1 == word[p + 1].1 {
                    let mut dropped = word.clone();
                    dropped.drain(p..p + 2);
                    out = out.add(&reorder_by_swaps(dropped, n));
                }
                out
            }
        }
    }

    #[test]
    fn closed_reordering_matches_swaps() {
        for n in 1..=2 {
            for r in MultiIndex::enumerate(n, 3) {
                for m in MultiIndex::enumerate(n, 3) {
                    let mut word = Vec::new();
                    for axis in 0..n {
                        word.extend(std::iter::repeat_n((true, axis), r.get(axis) as usize));
                    }
                    for axis in 0..n {
                        word.extend(std::iter::repeat_n((false, axis), m.get(axis) as usize));
                    }
                    let closed = WeylElement::from_terms(n, reorder(&r, &m));
                    assert_eq!(closed, reorder_by_swaps(word, n), "r={r:?} m={m:?}");
                }
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let a = WhittakerType::new(vec![frac(1, 2), int(-3)]);
        for axis in 0..2 {
            let expected = w(2, &format!("d{}", axis + 1)).add(&WeylElement::one(2).scale(a.get(axis)));
            assert_eq!(sigma_twist(&a, &WeylElement::d(2, axis)).unwrap(), expected);
            assert_eq!(sigma_twist(&a, &WeylElement::t(2, axis)).unwrap(), WeylElement::t(2, axis));
        }
        assert_eq!(sigma_twist(&a, &w(2, "t1*d1")).unwrap(), w(2, "t1*d1 + 1/2*t1"));
    }

    #[test]
    fn twisted_action_examples() {
        let a = WhittakerType::new(vec![int(2), frac(1, 3)]);
        // (∂_i − a_i)·t^m = m_i t^{m−e_i}
        for m in MultiIndex::enumerate(2, 4) {
            for axis in 0..2 {
                let op = WeylElement::d(2, axis).sub(&WeylElement::one(2).scale(a.get(axis)));
                let got = act_twisted(&a, &op, &Poly::monomial(m.clone(), int(1))).unwrap();
                let expected = match m.sub_unit(axis) {
                    Some(lower) => Poly::monomial(lower, int(m.get(axis) as i64)),
                    None => Poly::zero(2),
                };
                assert_eq!(got, expected);
            }
        }
        let a1 = WhittakerType::from_i64(&[5]);
        assert_eq!(act_twisted(&a1, &w(1, "d1"), &Poly::one(1)).unwrap(), Poly::constant(1, int(5)));
        assert_eq!(
            act_twisted(&a1, &w(1, "t1*d1"), &Poly::var(1, 0)).unwrap(),
            Poly::parse(1, "t1 + 5*t1^2").unwrap()
        );
        // a = 0 is the natural action
        let zero = WhittakerType::zero(1);
        let f = Poly::parse(1, "t1^3 + t1").unwrap();
        assert_eq!(act_twisted(&zero, &w(1, "d1"), &f).unwrap(), f.partial(0).unwrap());
    }

    #[test]
    fn reduction_examples() {
        let a = WhittakerType::from_i64(&[1]);
        let r = reduce_to_constant(&a, &Poly::parse(1, "t1^2").unwrap()).unwrap();
        assert_eq!(r.axes, vec![0, 0]);
        assert_eq!(r.scalar, int(2));
        let r = reduce_to_constant(&a, &Poly::one(1)).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.scalar, int(1));
        let a2 = WhittakerType::from_i64(&[1, 1]);
        let r = reduce_to_constant(&a2, &Poly::parse(2, "t1*t2 + t2").unwrap()).unwrap();
        assert_eq!(r.steps.len(), 2);
        assert!(!r.scalar.is_zero());
        assert_eq!(
            reduce_to_constant(&a, &Poly::zero(1)),
            Err(Error::ZeroInput("reduce_to_constant"))
        );
    }

    fn arb_weyl(n: usize, deg: u32) -> impl Strategy<Value = WeylElement> {
        let monos = MultiIndex::enumerate(n, deg);
        let k = monos.len();
        proptest::collection::vec((0..k, 0..k, -3i64..4), 0..4).prop_map(move |ts| {
            WeylElement::from_terms(
                n,
                ts.into_iter()
                    .map(|(i, j, c)| ((monos[i].clone(), monos[j].clone()), int(c))),
            )
        })
    }

    fn arb_type(n: usize) -> impl Strategy<Value = WhittakerType> {
        proptest::collection::vec((-3i64..4, 1i64..3), n)
            .prop_map(|v| WhittakerType::new(v.into_iter().map(|(p, q)| frac(p, q)).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mul_is_associative(x in arb_weyl(2, 2), y in arb_weyl(2, 2), z in arb_weyl(2, 2)) {
            prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
        }

        #[test]
        fn mul_matches_composition(x in arb_weyl(2, 2), y in arb_weyl(2, 2)) {
            let xy = x.mul(&y).unwrap();
            for m in MultiIndex::enumerate(2, 4) {
                let f = Poly::monomial(m, int(1));
                prop_assert_eq!(xy.apply(&f).unwrap(), x.apply(&y.apply(&f).unwrap()).unwrap());
            }
        }

        #[test]
        fn sigma_is_an_invertible_homomorphism(a in arb_type(2), x in arb_weyl(2, 2), y in arb_weyl(2, 2)) {
            let lhs = sigma_twist(&a, &x.mul(&y).unwrap()).unwrap();
            let rhs = sigma_twist(&a, &x).unwrap().mul(&sigma_twist(&a, &y).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            let back = sigma_twist(&a.negate(), &sigma_twist(&a, &x).unwrap()).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn twisted_action_is_a_module(a in arb_type(2), x in arb_weyl(2, 2), y in arb_weyl(2, 2), f in crate::poly::tests::arb_poly(2, 3)) {
            let lhs = act_twisted(&a, &x.mul(&y).unwrap(), &f).unwrap();
            let rhs = act_twisted(&a, &x, &act_twisted(&a, &y, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_reaches_nonzero_constant(a in arb_type(3), f in crate::poly::tests::arb_poly(3, 4)) {
            prop_assume!(!f.is_zero());
            let r = reduce_to_constant(&a, &f).unwrap();
            prop_assert!(!r.scalar.is_zero());
            let mut g = f.clone();
            for s in &r.steps {
                g = act_twisted(&a, s, &g).unwrap();
            }
            prop_assert_eq!(g, Poly::constant(3, r.scalar.clone()));
        }
    }

    #[test]
    fn associativity_small_exhaustive() {
        // all monomial triples with |m|+|r| ≤ 2, n = 2
        let monos = MultiIndex::enumerate(2, 1);
        let mut elems = Vec::new();
        for m in &monos {
            for r in &monos {
                elems.push(WeylElement::monomial(m.clone(), r.clone(), int(1)));
            }
        }
        for x in &elems {
            for y in &elems {
                for z in &elems {
                    assert_eq!(
                        x.mul(y).unwrap().mul(z).unwrap(),
                        x.mul(&y.mul(z).unwrap()).unwrap()
                    );
                }
            }
        }
    }
}
