//! Tensor modules `T(A_n^a, V) = A_n^a ⊗ V` with the `(A_n, W_n)`-action
//! `t^m∂_k(p⊗v) = (t^m(∂_k + a_k)p)⊗v + Σ_i m_i t^{m−e_i}p ⊗ E_ik v`.

mod decompose;
mod omega;

pub use decompose::{HBasisCoefficients, KmEntry};
pub use omega::{is_zero_matrix, AnnihilationReport, OmegaParams, OmegaStep, OmegaWitness};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::glmod::GlModule;
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::rational::{int, Rational};
use crate::weyl::WhittakerType;
use crate::witt::{basis_fields, VectorField, WittElement};

/// `Σ t^r ⊗ v_r`, stored without zero vectors.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    n: usize,
    dim: usize,
    terms: BTreeMap<MultiIndex, Vec<Rational>>,
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl TensorElement {
    pub fn zero(n: usize, dim: usize) -> Self {
        TensorElement {
            n,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `t^r ⊗ v_j`
    pub fn basis(r: MultiIndex, j: usize, dim: usize) -> Self {
        let mut v = vec![Rational::zero(); dim];
        v[j] = Rational::one();
        Self::pure(r, v)
    }

    /// `t^r ⊗ v`
    pub fn pure(r: MultiIndex, v: Vec<Rational>) -> Self {
        let mut out = TensorElement::zero(r.dim(), v.len());
        out.add_term(r, &v, &Rational::one());
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending order of the exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Vec<Rational>)> {
        self.terms.iter()
    }

    pub fn get(&self, r: &MultiIndex) -> Option<&Vec<Rational>> {
        self.terms.get(r)
    }

    /// Largest total degree `|r|` in the support.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Adds `c · t^r ⊗ v`.
    pub fn add_term(&mut self, r: MultiIndex, v: &[Rational], c: &Rational) {
        debug_assert_eq!(v.len(), self.dim);
        if c.is_zero() || is_zero_vec(v) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(r) {
            Entry::Vacant(e) => {
                e.insert(v.iter().map(|x| x * c).collect());
            }
            Entry::Occupied(mut e) => {
                for (o, x) in e.get_mut().iter_mut().zip(v) {
                    *o += x * c;
                }
                if is_zero_vec(e.get()) {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TensorElement, c: &Rational) {
        debug_assert_eq!((self.n, self.dim), (other.n, other.dim));
        for (r, v) in &other.terms {
            self.add_term(r.clone(), v, c);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &Rational::one());
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }

    pub fn scale(&self, c: &Rational) -> TensorElement {
        let mut out = TensorElement::zero(self.n, self.dim);
        out.add_scaled(self, c);
        out
    }

    /// The vector `v` if this element is `1 ⊗ v` (or zero).
    pub fn as_constant(&self) -> Option<Vec<Rational>> {
        match self.terms.len() {
            0 => Some(vec![Rational::zero(); self.dim]),
            1 => self.terms.get(&MultiIndex::zero(self.n)).cloned(),
            _ => None,
        }
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(r, v)| {
                let p = Poly::monomial(r.clone(), Rational::one());
                let v: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("{p}⊗({})", v.join(","))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor({self})")
    }
}

impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            exponent: &'a MultiIndex,
            vector: Vec<String>,
        }
        s.collect_seq(self.terms.iter().map(|(r, v)| Term {
            exponent: r,
            vector: v.iter().map(ToString::to_string).collect(),
        }))
    }
}

/// The monomial basis `{t^r ⊗ v_j : |r| ≤ D}`, ordered by `r` in the total
/// order and then by `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationBasis {
    n: usize,
    dim: usize,
    degree: u32,
    monomials: Vec<MultiIndex>,
    index: BTreeMap<MultiIndex, usize>,
}

impl TruncationBasis {
    pub fn new(n: usize, dim: usize, degree: u32) -> Self {
        let monomials = MultiIndex::enumerate(n, degree);
        let index = monomials.iter().enumerate().map(|(p, m)| (m.clone(), p)).collect();
        TruncationBasis {
            n,
            dim,
            degree,
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len() * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn position(&self, r: &MultiIndex, j: usize) -> Option<usize> {
        self.index.get(r).map(|p| p * self.dim + j)
    }

    /// The basis element at a position.
    pub fn element(&self, pos: usize) -> TensorElement {
        TensorElement::basis(self.monomials[pos / self.dim].clone(), pos % self.dim, self.dim)
    }

    /// Coordinates; errors if the support leaves the truncation.
    pub fn coordinates(&self, w: &TensorElement) -> Result<Vec<Rational>> {
        check_dim(self.n, w.n)?;
        check_dim(self.dim, w.dim)?;
        let mut out = vec![Rational::zero(); self.len()];
        for (r, v) in w.terms() {
            let p = self.index.get(r).ok_or(Error::TruncationTooSmall {
                need: r.degree(),
                have: self.degree,
            })?;
            for (j, x) in v.iter().enumerate() {
                out[p * self.dim + j] = x.clone();
            }
        }
        Ok(out)
    }

    pub fn element_of(&self, coords: &[Rational]) -> TensorElement {
        let mut out = TensorElement::zero(self.n, self.dim);
        for (pos, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out.add_scaled(&self.element(pos), c);
            }
        }
        out
    }

    /// Matrix whose columns are the coordinates of the given elements.
    pub fn matrix_of(&self, columns: &[TensorElement]) -> Result<Matrix> {
        let cols = columns
            .iter()
            .map(|w| self.coordinates(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.len(), &cols))
    }
}

/// Which gl-correction term the vector-field action uses.  Only
/// `Standard` is the module structure; the others exist so that the
/// representation checks can be shown to detect (or not) a change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correction {
    Standard,
    /// Drops `Σ m_i t^{m−e_i}p ⊗ E_ik v`; this is `A_n^a ⊗ V` with `V` trivial.
    Dropped,
    /// Uses `E_ki` in place of `E_ik`.
    Transposed,
}

/// `T(A_n^a, V)` for a fixed type `a` and `gl_n`-module `V`.
pub struct TensorModule {
    a: WhittakerType,
    v: Arc<GlModule>,
    correction: Correction,
    km: RwLock<BTreeMap<MultiIndex, Rational>>,
    h_cache: RwLock<BTreeMap<MultiIndex, Arc<Vec<TensorElement>>>>,
}

impl fmt::Debug for TensorModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T(A^({}), {:?})", self.a, self.v)
    }
}

impl TensorModule {
    pub fn new(a: WhittakerType, v: GlModule) -> Result<Self> {
        Self::with_correction(a, Arc::new(v), Correction::Standard)
    }

    pub fn with_correction(a: WhittakerType, v: Arc<GlModule>, correction: Correction) -> Result<Self> {
        check_dim(v.n(), a.dim())?;
        Ok(TensorModule {
            a,
            v,
            correction,
            km: RwLock::new(BTreeMap::new()),
            h_cache: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.a.dim()
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn whittaker_type(&self) -> &WhittakerType {
        &self.a
    }

    pub fn gl_module(&self) -> &GlModule {
        &self.v
    }

    pub fn truncation(&self, degree: u32) -> TruncationBasis {
        TruncationBasis::new(self.n(), self.dim(), degree)
    }

    /// `1 ⊗ v_j`
    pub fn whittaker_generator(&self, j: usize) -> TensorElement {
        TensorElement::basis(MultiIndex::zero(self.n()), j, self.dim())
    }

    fn check(&self, w: &TensorElement) -> Result<()> {
        check_dim(self.n(), w.n)?;
        check_dim(self.dim(), w.dim)
    }

    /// Action of one basis field `t^m ∂_k`.
    pub fn field_act(&self, vf: &VectorField, w: &TensorElement) -> Result<TensorElement> {
        self.check(w)?;
        check_dim(self.n(), vf.dim())?;
        let n = self.n();
        let (m, k) = (&vf.exponent, vf.axis);
        let ak = self.a.get(k);
        let mut out = TensorElement::zero(n, self.dim());
        for (r, v) in &w.terms {
            let mr = m.add(r);
            if r.get(k) > 0 {
                out.add_term(mr.sub_unit(k).unwrap(), v, &int(r.get(k) as i64));
            }
            if !ak.is_zero() {
                out.add_term(mr.clone(), v, ak);
            }
            if self.correction == Correction::Dropped {
                continue;
            }
            for i in 0..n {
                let mi = m.get(i);
                if mi == 0 {
                    continue;
                }
                let e = match self.correction {
                    Correction::Transposed => self.v.e(k, i),
                    _ => self.v.e(i, k),
                };
                let ev = e.mul_vec(v)?;
                out.add_term(mr.sub_unit(i).unwrap(), &ev, &int(mi as i64));
            }
        }
        Ok(out)
    }

    /// The `W_n`-action.
    pub fn w_act(&self, x: &WittElement, w: &TensorElement) -> Result<TensorElement> {
        check_dim(self.n(), x.dim())?;
        let mut out = TensorElement::zero(self.n(), self.dim());
        for (vf, c) in x.terms() {
            out.add_scaled(&self.field_act(vf, w)?, c);
        }
        Ok(out)
    }

    /// The `A_n`-action `f · (p⊗v) = fp ⊗ v`.
    pub fn a_act(&self, f: &Poly, w: &TensorElement) -> Result<TensorElement> {
        self.check(w)?;
        check_dim(self.n(), f.dim())?;
        let mut out = TensorElement::zero(self.n(), self.dim());
        for (s, c) in f.terms() {
            for (r, v) in &w.terms {
                out.add_term(s.add(r), v, c);
            }
        }
        Ok(out)
    }

    /// `∂_i − a_i`, realized through the module action of `∂_i`.
    pub fn lowering(&self, axis: usize, w: &TensorElement) -> Result<TensorElement> {
        if axis >= self.n() {
            return Err(Error::AxisOutOfRange { axis, n: self.n() });
        }
        let d = self.field_act(&VectorField::partial(self.n(), axis), w)?;
        Ok(d.sub(&w.scale(self.a.get(axis))))
    }

    /// `∂_m = Π_i (∂_i − a_i)^{m_i}`.
    pub fn partial_op(&self, m: &MultiIndex, w: &TensorElement) -> Result<TensorElement> {
        check_dim(self.n(), m.dim())?;
        self.check(w)?;
        // closed form of the composite: t^r ↦ r!/(r−m)! t^{r−m}
        let mut out = TensorElement::zero(self.n(), self.dim());
        for (r, v) in &w.terms {
            if let Some(rest) = r.checked_sub(m) {
                let c: Rational = (0..self.n())
                    .map(|i| crate::rational::from_bigint(crate::rational::falling_factorial(r.get(i), m.get(i))))
                    .product();
                out.add_term(rest, v, &c);
            }
        }
        Ok(out)
    }

    /// `h^m w` with `h_i = t_i ∂_i`.
    pub fn h_power(&self, m: &MultiIndex, w: &TensorElement) -> Result<TensorElement> {
        check_dim(self.n(), m.dim())?;
        let mut cur = w.clone();
        for i in 0..self.n() {
            let h = VectorField::cartan(self.n(), i);
            for _ in 0..m.get(i) {
                cur = self.field_act(&h, &cur)?;
            }
        }
        Ok(cur)
    }

    /// `h^m (1 ⊗ v_j)` for all `j`, cached.
    pub fn h_basis(&self, m: &MultiIndex) -> Result<Arc<Vec<TensorElement>>> {
        check_dim(self.n(), m.dim())?;
        if let Some(hit) = self.h_cache.read().expect("cache lock").get(m) {
            return Ok(hit.clone());
        }
        let value = match (0..self.n()).find(|&i| m.get(i) > 0) {
            None => (0..self.dim()).map(|j| self.whittaker_generator(j)).collect(),
            Some(i) => {
                let prev = self.h_basis(&m.sub_unit(i).unwrap())?;
                let h = VectorField::cartan(self.n(), i);
                prev.iter().map(|w| self.field_act(&h, w)).collect::<Result<Vec<_>>>()?
            }
        };
        let value = Arc::new(value);
        self.h_cache
            .write()
            .expect("cache lock")
            .insert(m.clone(), value.clone());
        Ok(value)
    }
}

/// A pseudo-random element of degree `≤ degree` with small integer
/// coefficients and at most `terms` monomials.
pub fn random_element<R: Rng>(rng: &mut R, n: usize, dim: usize, degree: u32, terms: usize) -> TensorElement {
    let monomials = MultiIndex::enumerate(n, degree);
    let mut out = TensorElement::zero(n, dim);
    for _ in 0..terms {
        let r = monomials[rng.random_range(0..monomials.len())].clone();
        let v: Vec<Rational> = (0..dim).map(|_| int(rng.random_range(-3..=3))).collect();
        out.add_term(r, &v, &Rational::one());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationFailure {
    pub law: String,
    pub left: String,
    pub right: String,
    pub element: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentationReport {
    pub degree: u32,
    pub bracket_checks: usize,
    pub compatibility_checks: usize,
    pub associativity_checks: usize,
    pub passed: bool,
    pub failure: Option<RepresentationFailure>,
}

impl TensorModule {
    /// Checks on every `t^r ⊗ v_j` with `|r| ≤ D` and all basis fields and
    /// monomials of degree `≤ D`:
    /// `[X,Y]w = X(Yw) − Y(Xw)`, `X(fw) − f(Xw) = X(f)w`, `f(gw) = (fg)w`.
    pub fn verify_representation(&self, degree: u32) -> RepresentationReport {
        let n = self.n();
        let fields = basis_fields(n, degree);
        let monomials = MultiIndex::enumerate(n, degree);
        let trunc = self.truncation(degree);
        let elements: Vec<TensorElement> = (0..trunc.len()).map(|p| trunc.element(p)).collect();

        enum Check<'a> {
            Bracket(&'a VectorField, &'a VectorField),
            Compat(&'a VectorField, &'a MultiIndex),
            Assoc(&'a MultiIndex, &'a MultiIndex),
        }
        let mut checks = Vec::new();
        for (i, x) in fields.iter().enumerate() {
            for y in &fields[i + 1..] {
                checks.push(Check::Bracket(x, y));
            }
        }
        let bracket_checks = checks.len();
        for x in &fields {
            for s in &monomials {
                checks.push(Check::Compat(x, s));
            }
        }
        let compatibility_checks = checks.len() - bracket_checks;
        for (i, f) in monomials.iter().enumerate() {
            for g in &monomials[i..] {
                checks.push(Check::Assoc(f, g));
            }
        }
        let associativity_checks = checks.len() - bracket_checks - compatibility_checks;

        let run = |check: &Check| -> Option<RepresentationFailure> {
            for w in &elements {
                let (law, left, right, lhs, rhs) = match check {
                    Check::Bracket(x, y) => {
                        let xy = WittElement::from_terms(n, x.bracket(y)).expect("same dimension");
                        let lhs = self.w_act(&xy, w).expect("same dimension");
                        let a = self.field_act(x, &self.field_act(y, w).unwrap()).unwrap();
                        let b = self.field_act(y, &self.field_act(x, w).unwrap()).unwrap();
                        ("bracket", x.to_string(), y.to_string(), lhs, a.sub(&b))
                    }
                    Check::Compat(x, s) => {
                        let f = Poly::monomial((*s).clone(), int(1));
                        let xf = WittElement::basis((*x).clone()).apply(&f).unwrap();
                        let lhs = self
                            .field_act(x, &self.a_act(&f, w).unwrap())
                            .unwrap()
                            .sub(&self.a_act(&f, &self.field_act(x, w).unwrap()).unwrap());
                        let rhs = self.a_act(&xf, w).unwrap();
                        ("compatibility", x.to_string(), f.to_string(), lhs, rhs)
                    }
                    Check::Assoc(s, r) => {
                        let f = Poly::monomial((*s).clone(), int(1));
                        let g = Poly::monomial((*r).clone(), int(1));
                        let lhs = self.a_act(&f, &self.a_act(&g, w).unwrap()).unwrap();
                        let rhs = self.a_act(&(&f * &g), w).unwrap();
                        ("associativity", f.to_string(), g.to_string(), lhs, rhs)
                    }
                };
                if lhs != rhs {
                    return Some(RepresentationFailure {
                        law: law.to_string(),
                        left,
                        right,
                        element: w.to_string(),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
            None
        };
        let failure = checks.par_iter().find_map_first(run);
        RepresentationReport {
            degree,
            bracket_checks,
            compatibility_checks,
            associativity_checks,
            passed: failure.is_none(),
            failure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn module(a: &[i64], v: GlModule) -> TensorModule {
        TensorModule::new(WhittakerType::from_i64(a), v).unwrap()
    }

    fn vf(n: usize, text: &str) -> VectorField {
        let x = WittElement::parse(n, text).unwrap();
        let vf = x.terms().next().unwrap().0.clone();
        vf
    }

    fn one(n: usize, v: &[i64]) -> TensorElement {
        TensorElement::pure(MultiIndex::zero(n), v.iter().map(|&x| int(x)).collect())
    }

    fn pure(r: &[u32], v: &[i64]) -> TensorElement {
        TensorElement::pure(MultiIndex::new(r.iter().copied()), v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn action_examples() {
        let m = module(&[3, 5], GlModule::natural(2));
        let w = one(2, &[1, 2]);
        assert_eq!(m.field_act(&vf(2, "d1"), &w).unwrap(), w.scale(&int(3)));
        // h_1(1⊗v) = a_1 t1⊗v + 1⊗E_11 v
        let expected = pure(&[1, 0], &[3, 6]).add(&one(2, &[1, 0]));
        assert_eq!(m.field_act(&vf(2, "t1*d1"), &w).unwrap(), expected);
        // t1²∂1(1⊗v) = a_1 t1²⊗v + 2 t1⊗E_11 v
        let expected = pure(&[2, 0], &[3, 6]).add(&pure(&[1, 0], &[2, 0]));
        assert_eq!(m.field_act(&vf(2, "t1^2*d1"), &w).unwrap(), expected);

        let f = Poly::parse(2, "t1*t2 + 1/2").unwrap();
        let g = Poly::parse(2, "t2^2 - t1").unwrap();
        let w = pure(&[1, 1], &[1, -1]);
        assert_eq!(m.a_act(&Poly::one(2), &w).unwrap(), w);
        assert_eq!(
            m.a_act(&(&f * &g), &w).unwrap(),
            m.a_act(&f, &m.a_act(&g, &w).unwrap()).unwrap()
        );
        assert_eq!(
            m.a_act(&Poly::monomial(MultiIndex::new([2, 0]), int(1)), &w).unwrap(),
            pure(&[3, 1], &[1, -1])
        );
    }

    #[test]
    fn lowering_matches_closed_form() {
        let m = TensorModule::new(WhittakerType::new(vec![frac(1, 2), int(-2)]), GlModule::natural(2)).unwrap();
        let w = pure(&[1, 0], &[1, 0]);
        assert_eq!(m.lowering(0, &w).unwrap(), one(2, &[1, 0]));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        use rand::SeedableRng;
        for _ in 0..20 {
            let w = random_element(&mut rng, 2, 2, 4, 5);
            for s in MultiIndex::enumerate(2, 3) {
                let mut composed = w.clone();
                for i in 0..2 {
                    for _ in 0..s.get(i) {
                        composed = m.lowering(i, &composed).unwrap();
                    }
                }
                assert_eq!(m.partial_op(&s, &w).unwrap(), composed);
            }
        }
        // ∂_m(t^m⊗v) = m!(1⊗v)
        let r = MultiIndex::new([2, 3]);
        let got = m.partial_op(&r, &TensorElement::pure(r.clone(), vec![int(1), int(1)])).unwrap();
        assert_eq!(got, one(2, &[12, 12]));
        let big = MultiIndex::new([0, 3]);
        assert!(m.partial_op(&big, &pure(&[2, 0], &[1, 1])).unwrap().is_zero());
    }

    #[test]
    fn representation_law_holds() {
        let m = module(&[1, 2], GlModule::natural(2));
        let report = m.verify_representation(3);
        assert!(report.passed, "{report:?}");
        let m = module(&[1], GlModule::trivial(1));
        assert!(m.verify_representation(4).passed);
    }

    #[test]
    fn representation_mutations() {
        let a = WhittakerType::from_i64(&[1, 2]);
        let v = Arc::new(GlModule::natural(2));
        let transposed = TensorModule::with_correction(a.clone(), v.clone(), Correction::Transposed).unwrap();
        let report = transposed.verify_representation(2);
        assert!(!report.passed);
        assert_eq!(report.failure.unwrap().law, "bracket");
        // dropping the correction leaves the valid module A_n^a ⊗ (trivial V)
        let dropped = TensorModule::with_correction(a, v, Correction::Dropped).unwrap();
        assert!(dropped.verify_representation(2).passed);
    }

    #[test]
    fn truncation_coordinates_roundtrip() {
        let basis = TruncationBasis::new(2, 3, 2);
        assert_eq!(basis.len(), 18);
        let w = pure(&[1, 1], &[1, 0, -2]).add(&pure(&[0, 0], &[0, 5, 0]));
        let c = basis.coordinates(&w).unwrap();
        assert_eq!(basis.element_of(&c), w);
        let err = basis.coordinates(&pure(&[3, 0], &[1, 0, 0])).unwrap_err();
        assert_eq!(err, Error::TruncationTooSmall { need: 3, have: 2 });
    }
}
