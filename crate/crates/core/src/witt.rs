//! The Witt algebra `W_n = Der(A_n) = ⊕ A_n ∂_i`, its distinguished
//! subalgebras, the embedding into `D_n`, and the jet projection
//! `L_n → L_n / m²Δ_n ≅ gl_n`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::parse::{format_monomial, format_term, join_terms, parse_terms};
use crate::poly::Poly;
use crate::rational::{int, Rational};
use crate::weyl::WeylElement;

/// The basis vector field `t^m ∂_axis`.
///
/// The derived order (exponent in the total order, then axis) is the
/// generator order used for PBW monomials: brackets strictly lower
/// `|m| + |r|`, which bounds the rewriting.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VectorField {
    pub exponent: MultiIndex,
    pub axis: usize,
}

impl VectorField {
    pub fn new(exponent: MultiIndex, axis: usize) -> Self {
        debug_assert!(axis < exponent.dim());
        VectorField { exponent, axis }
    }

    pub fn dim(&self) -> usize {
        self.exponent.dim()
    }

    /// `∂_axis`
    pub fn partial(n: usize, axis: usize) -> Self {
        VectorField::new(MultiIndex::zero(n), axis)
    }

    /// `h_axis = t_axis ∂_axis`
    pub fn cartan(n: usize, axis: usize) -> Self {
        VectorField::new(MultiIndex::unit(n, axis), axis)
    }

    /// The `h_n`-weight of `t^m ∂_i`, namely `m − e_i` (may be −1 at `i`).
    pub fn shift(&self) -> Vec<i64> {
        let mut s: Vec<i64> = self.exponent.entries().iter().map(|&e| e as i64).collect();
        s[self.axis] -= 1;
        s
    }

    /// `[t^m ∂_i, t^r ∂_j] = r_i t^{m+r−e_i} ∂_j − m_j t^{m+r−e_j} ∂_i`
    pub fn bracket(&self, other: &VectorField) -> Vec<(VectorField, Rational)> {
        let (m, i) = (&self.exponent, self.axis);
        let (r, j) = (&other.exponent, other.axis);
        let sum = m.add(r);
        let mut out: Vec<(VectorField, Rational)> = Vec::with_capacity(2);
        let mut push = |vf: VectorField, c: Rational| {
            if c.is_zero() {
                return;
            }
            if let Some(slot) = out.iter_mut().find(|(k, _)| *k == vf) {
                slot.1 += c;
            } else {
                out.push((vf, c));
            }
        };
        if r.get(i) > 0 {
            push(VectorField::new(sum.sub_unit(i).unwrap(), j), int(r.get(i) as i64));
        }
        if m.get(j) > 0 {
            push(VectorField::new(sum.sub_unit(j).unwrap(), i), int(-(m.get(j) as i64)));
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    fn label(&self) -> String {
        let t = format_monomial('t', &self.exponent);
        let d = format!("d{}", self.axis + 1);
        if t.is_empty() {
            d
        } else {
            format!("{t}*{d}")
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `Σ c · t^m ∂_i`
#[derive(Clone, PartialEq, Eq)]
pub struct WittElement {
    n: usize,
    terms: BTreeMap<VectorField, Rational>,
}

impl WittElement {
    pub fn zero(n: usize) -> Self {
        WittElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(vf: VectorField) -> Self {
        let mut x = WittElement::zero(vf.dim());
        x.add_term(vf, Rational::one());
        x
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (VectorField, Rational)>) -> Result<Self> {
        let mut x = WittElement::zero(n);
        for (vf, c) in terms {
            check_dim(n, vf.dim())?;
            x.add_term(vf, c);
        }
        Ok(x)
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut x = WittElement::zero(n);
        for t in parse_terms("vector field", n, text)? {
            if t.d.degree() != 1 {
                return Err(Error::parse(
                    "vector field",
                    format!("each term needs exactly one d<i> in {text:?}"),
                ));
            }
            let axis = (0..n).find(|&i| t.d.get(i) == 1).unwrap();
            x.add_term(VectorField::new(t.t, axis), t.coeff);
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VectorField, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, vf: &VectorField) -> Rational {
        self.terms.get(vf).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, vf: VectorField, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(vf) {
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

    pub fn add(&self, other: &WittElement) -> WittElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> WittElement {
        let mut out = WittElement::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &WittElement) -> WittElement {
        self.add(&other.scale(&int(-1)))
    }

    pub fn bracket(&self, other: &WittElement) -> Result<WittElement> {
        check_dim(self.n, other.n)?;
        let mut out = WittElement::zero(self.n);
        for (x, cx) in &self.terms {
            for (y, cy) in &other.terms {
                let c = cx * cy;
                for (vf, v) in x.bracket(y) {
                    out.add_term(vf, v * &c);
                }
            }
        }
        Ok(out)
    }

    /// In `Δ_n = span{∂_i}`.
    pub fn in_delta(&self) -> bool {
        self.terms.keys().all(|vf| vf.exponent.is_zero())
    }

    /// In the Cartan subalgebra `h_n = span{t_i ∂_i}`.
    pub fn in_cartan(&self) -> bool {
        self.terms
            .keys()
            .all(|vf| vf.exponent == MultiIndex::unit(self.n, vf.axis))
    }

    /// In the jet algebra `L_n = mΔ_n`.
    pub fn in_jet(&self) -> bool {
        self.terms.keys().all(|vf| vf.exponent.degree() >= 1)
    }

    /// In `m²Δ_n`.
    pub fn in_jet_square(&self) -> bool {
        self.terms.keys().all(|vf| vf.exponent.degree() >= 2)
    }

    pub fn require_jet(&self) -> Result<()> {
        match self.terms.keys().find(|vf| vf.exponent.degree() == 0) {
            Some(vf) => Err(Error::NotInJetAlgebra(vf.to_string())),
            None => Ok(()),
        }
    }

    /// The common `h_n`-weight of all terms, if there is one.
    pub fn homogeneous_shift(&self) -> Option<Vec<i64>> {
        let mut shifts = self.terms.keys().map(VectorField::shift);
        let first = shifts.next()?;
        shifts.all(|s| s == first).then_some(first)
    }

    /// The derivation action on `A_n`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        check_dim(self.n, f.dim())?;
        let mut out = Poly::zero(self.n);
        for (vf, c) in &self.terms {
            let d = f.partial(vf.axis)?;
            out = &out + &d.shift(&vf.exponent, c);
        }
        Ok(out)
    }
}

pub fn witt_bracket(x: &WittElement, y: &WittElement) -> Result<WittElement> {
    x.bracket(y)
}

/// `Σ c t^m ∂_i` as a differential operator.
pub fn as_weyl(x: &WittElement) -> WeylElement {
    WeylElement::from_terms(
        x.n,
        x.terms.iter().map(|(vf, c)| {
            (
                (vf.exponent.clone(), MultiIndex::unit(x.n, vf.axis)),
                c.clone(),
            )
        }),
    )
}

/// An element of `gl_n` in the basis `e_ij` (entry `(i, j)`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GlMatrix(pub Matrix);

impl GlMatrix {
    pub fn zero(n: usize) -> Self {
        GlMatrix(Matrix::zeros(n, n))
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.set(i, j, Rational::one());
        GlMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        self.0.get(i, j)
    }

    pub fn commutator(&self, other: &GlMatrix) -> GlMatrix {
        GlMatrix(self.0.commutator(&other.0).expect("square of equal size"))
    }
}

/// `t_i ∂_j ↦ e_ij`, killing `m²Δ_n`; rejects inputs outside `L_n`.
pub fn jet_project(x: &WittElement) -> Result<GlMatrix> {
    x.require_jet()?;
    let n = x.n;
    let mut g = GlMatrix::zero(n);
    for (vf, c) in &x.terms {
        if vf.exponent.degree() == 1 {
            let i = (0..n).find(|&k| vf.exponent.get(k) == 1).unwrap();
            g.0.add_to(i, vf.axis, c);
        }
    }
    Ok(g)
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_terms(
            self.terms
                .iter()
                .rev()
                .map(|(vf, c)| format_term(c, &vf.label())),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Witt[{}]({self})", self.n)
    }
}

/// All basis fields `t^m ∂_i` with `|m| ≤ max_degree`, in generator order.
pub fn basis_fields(n: usize, max_degree: u32) -> Vec<VectorField> {
    MultiIndex::enumerate(n, max_degree)
        .into_iter()
        .flat_map(|m| (0..n).map(move |i| VectorField::new(m.clone(), i)))
        .collect()
}

/// Basis fields of `L_n` (`1 ≤ |m| ≤ max_degree`).
pub fn jet_basis_fields(n: usize, max_degree: u32) -> Vec<VectorField> {
    basis_fields(n, max_degree)
        .into_iter()
        .filter(|vf| vf.exponent.degree() >= 1)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, s: &str) -> WittElement {
        WittElement::parse(n, s).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(witt_bracket(&x(2, "t1*d2"), &x(2, "t2*d1")).unwrap(), x(2, "t1*d1 - t2*d2"));
        assert_eq!(witt_bracket(&x(1, "d1"), &x(1, "t1*d1")).unwrap(), x(1, "d1"));
        let got = witt_bracket(&x(1, "t1*d1"), &x(1, "t1^2*d1")).unwrap();
        assert_eq!(got, x(1, "t1^2*d1"));
        let oracle = as_weyl(&x(1, "t1*d1")).commutator(&as_weyl(&x(1, "t1^2*d1"))).unwrap();
        assert_eq!(as_weyl(&got), oracle);
    }

    #[test]
    fn as_weyl_examples() {
        assert_eq!(as_weyl(&x(2, "t1*d2")), WeylElement::parse(2, "t1*d2").unwrap());
        assert_eq!(as_weyl(&x(2, "t1*d1")), WeylElement::parse(2, "t1*d1").unwrap());
    }

    #[test]
    fn bracket_matches_weyl_commutator() {
        for n in 1..=3 {
            let fields = basis_fields(n, 4);
            for a in &fields {
                for b in &fields {
                    let xa = WittElement::basis(a.clone());
                    let xb = WittElement::basis(b.clone());
                    let lhs = as_weyl(&xa.bracket(&xb).unwrap());
                    let rhs = as_weyl(&xa).commutator(&as_weyl(&xb)).unwrap();
                    assert_eq!(lhs, rhs, "[{a}, {b}]");
                }
            }
        }
    }

    #[test]
    fn jacobi_on_basis_triples() {
        for n in 1..=2 {
            let fields: Vec<WittElement> = basis_fields(n, 3).into_iter().map(WittElement::basis).collect();
            for a in &fields {
                for b in &fields {
                    for c in &fields {
                        let j = a.bracket(&b.bracket(c).unwrap()).unwrap()
                            .add(&b.bracket(&c.bracket(a).unwrap()).unwrap())
                            .add(&c.bracket(&a.bracket(b).unwrap()).unwrap());
                        assert!(j.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn jet_projection_examples() {
        let g = jet_project(&x(2, "t1*d2 + t1^2*d1")).unwrap();
        assert_eq!(g, GlMatrix::unit(2, 0, 1));
        let g = jet_project(&x(2, "t1*d1 + t2*d2")).unwrap();
        assert_eq!(g.0, Matrix::identity(2));
        assert_eq!(jet_project(&x(3, "t1^2*t2*d3")).unwrap(), GlMatrix::zero(3));
        assert!(matches!(jet_project(&x(1, "d1 + t1*d1")), Err(Error::NotInJetAlgebra(_))));
    }

    #[test]
    fn jet_subalgebras_and_projection_homomorphism() {
        for n in 1..=3 {
            let fields = jet_basis_fields(n, 3);
            for a in &fields {
                for b in &fields {
                    let (xa, xb) = (WittElement::basis(a.clone()), WittElement::basis(b.clone()));
                    let br = xa.bracket(&xb).unwrap();
                    assert!(br.in_jet());
                    if xb.in_jet_square() {
                        assert!(br.in_jet_square(), "m²Δ_n is an ideal of L_n");
                    }
                    let lhs = jet_project(&br).unwrap();
                    let rhs = jet_project(&xa).unwrap().commutator(&jet_project(&xb).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn derivation_action_is_a_representation() {
        let n = 2;
        let fields: Vec<WittElement> = basis_fields(n, 2).into_iter().map(WittElement::basis).collect();
        let polys: Vec<Poly> = MultiIndex::enumerate(n, 3)
            .into_iter()
            .map(|m| Poly::monomial(m, int(1)))
            .collect();
        for a in &fields {
            for b in &fields {
                let br = a.bracket(b).unwrap();
                for f in &polys {
                    let lhs = br.apply(f).unwrap();
                    let rhs = &a.apply(&b.apply(f).unwrap()).unwrap() - &b.apply(&a.apply(f).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn membership_predicates() {
        assert!(x(2, "d1 - 3*d2").in_delta());
        assert!(x(2, "t1*d1 + 2*t2*d2").in_cartan());
        assert!(!x(2, "t1*d2").in_cartan());
        assert!(x(2, "t1*d2").in_jet() && !x(2, "t1*d2").in_jet_square());
        assert!(x(2, "t1*t2*d2").in_jet_square());
        assert_eq!(VectorField::partial(2, 1).shift(), vec![0, -1]);
        assert_eq!(x(2, "t1^2*d1 + t1*t2*d2").homogeneous_shift(), Some(vec![1, 0]));
        assert_eq!(x(2, "d1 + d2").homogeneous_shift(), None);
    }
}
