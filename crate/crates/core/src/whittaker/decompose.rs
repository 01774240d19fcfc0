//! Whittaker vectors, the degree of an element, the scalars `k_m`, and the
//! decomposition in the free `U(h_n)`-basis `{h^m (1⊗v_j)}`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{TensorElement, TensorModule, TruncationBasis};
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::{kernel_basis, Matrix, Subspace};
use crate::poly::Poly;
use crate::rational::{int, Rational};

/// Coefficients `c_{m,j}` of `Σ c_{m,j} h^m (1⊗v_j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HBasisCoefficients {
    terms: BTreeMap<(MultiIndex, usize), Rational>,
}

impl HBasisCoefficients {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, m: MultiIndex, j: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((m.clone(), j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(m, j));
        }
    }

    pub fn get(&self, m: &MultiIndex, j: usize) -> Rational {
        self.terms.get(&(m.clone(), j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Serialize for HBasisCoefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            h_exponent: &'a MultiIndex,
            basis_index: usize,
            coeff: String,
        }
        s.collect_seq(self.terms.iter().map(|((m, j), c)| Term {
            h_exponent: m,
            basis_index: *j,
            coeff: c.to_string(),
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KmEntry {
    pub m: MultiIndex,
    pub value: String,
}

impl TensorModule {
    /// The maximal `m` in the total order with `∂_m w ≠ 0`.
    pub fn degree_of(&self, w: &TensorElement) -> Result<MultiIndex> {
        self.a.require_nonsingular()?;
        self.check(w)?;
        let top = w.degree().ok_or(Error::ZeroInput("degree_of"))?;
        let candidates = MultiIndex::enumerate(self.n(), top);
        for s in candidates.iter().rev() {
            if !self.partial_op(s, w)?.is_zero() {
                return Ok(s.clone());
            }
        }
        unreachable!("∂_0 w = w is nonzero")
    }

    /// `k_m` with `∂_m h^m u = k_m u` for every Whittaker vector `u`;
    /// computed on `1⊗v_j` for every `j`, checked to agree, and cached.
    pub fn k_m(&self, m: &MultiIndex) -> Result<Rational> {
        if let Some(hit) = self.km.read().expect("cache lock").get(m) {
            return Ok(hit.clone());
        }
        let hs = self.h_basis(m)?;
        let mut value: Option<Rational> = None;
        for (j, h) in hs.iter().enumerate() {
            let u = self.partial_op(m, h)?;
            let c = u.as_constant().map(|v| v[j].clone());
            let expected = self.whittaker_generator(j).scale(c.as_ref().unwrap_or(&Rational::zero()));
            match c {
                Some(c) if !c.is_zero() && u == expected && value.as_ref().is_none_or(|v| *v == c) => {
                    value = Some(c)
                }
                _ => return Err(Error::VanishingNormalizer(m.to_string())),
            }
        }
        let value = value.expect("dim V > 0");
        self.km.write().expect("cache lock").insert(m.clone(), value.clone());
        Ok(value)
    }

    /// The `k_m` for all `|m| ≤ degree`, in ascending order of `m`.
    pub fn km_table(&self, degree: u32) -> Result<Vec<KmEntry>> {
        MultiIndex::enumerate(self.n(), degree)
            .into_iter()
            .map(|m| {
                let value = self.k_m(&m)?.to_string();
                Ok(KmEntry { m, value })
            })
            .collect()
    }

    /// Repeats `w ← w − (1/k_m) h^m ∂_m w` with `m = degree_of(w)`.
    pub fn whittaker_decompose(&self, w: &TensorElement) -> Result<HBasisCoefficients> {
        self.a.require_nonsingular()?;
        self.check(w)?;
        let mut rest = w.clone();
        let mut out = HBasisCoefficients::new();
        while !rest.is_zero() {
            let m = self.degree_of(&rest)?;
            let u = self
                .partial_op(&m, &rest)?
                .as_constant()
                .expect("∂_m w is a Whittaker vector at the degree of w");
            let k = self.k_m(&m)?;
            let hs = self.h_basis(&m)?;
            for (j, c) in u.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let c = c / &k;
                rest.add_scaled(&hs[j], &-&c);
                out.add_term(m.clone(), j, c);
            }
        }
        Ok(out)
    }

    /// `Σ c_{m,j} h^m (1⊗v_j)`
    pub fn reassemble(&self, coeffs: &HBasisCoefficients) -> Result<TensorElement> {
        let mut out = TensorElement::zero(self.n(), self.dim());
        for ((m, j), c) in coeffs.terms() {
            out.add_scaled(&self.h_basis(m)?[*j], c);
        }
        Ok(out)
    }

    /// Columns are `h^m (1⊗v_j)` for `|m| ≤ D` in truncation-basis order;
    /// rows are the monomial basis `t^r⊗v_j`, `|r| ≤ D`.
    pub fn free_basis_matrix(&self, degree: u32) -> Result<Matrix> {
        self.a.require_nonsingular()?;
        self.free_basis_matrix_unchecked(degree)
    }

    /// As [`Self::free_basis_matrix`] without the nonsingularity check.
    pub fn free_basis_matrix_unchecked(&self, degree: u32) -> Result<Matrix> {
        let basis = self.truncation(degree);
        let mut columns = Vec::with_capacity(basis.len());
        for m in basis.monomials() {
            columns.extend(self.h_basis(m)?.iter().cloned());
        }
        basis.matrix_of(&columns)
    }

    /// Common kernel of the `∂_i − a_i` on the degree-`≤ D` truncation,
    /// computed one operator at a time on sparse vectors.
    pub fn whittaker_vectors(&self, degree: u32) -> Result<Subspace> {
        let basis = self.truncation(degree);
        let mut current: Vec<TensorElement> = (0..basis.len()).map(|p| basis.element(p)).collect();
        for axis in 0..self.n() {
            let images = current
                .iter()
                .map(|w| self.lowering(axis, w))
                .collect::<Result<Vec<_>>>()?;
            let matrix = compressed_matrix(&basis, &images)?;
            let kernel = kernel_basis(&matrix);
            current = kernel
                .basis()
                .iter()
                .map(|c| {
                    let mut w = TensorElement::zero(self.n(), self.dim());
                    for (x, e) in c.iter().zip(&current) {
                        if !x.is_zero() {
                            w.add_scaled(e, x);
                        }
                    }
                    w
                })
                .collect();
        }
        let vectors = current
            .iter()
            .map(|w| basis.coordinates(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::from_spanning(basis.len(), vectors))
    }

    /// Whether `{t^s u : |s| ≤ D, u ∈ Wh}` spans the degree-`≤ D` truncation.
    pub fn whittaker_span_covers(&self, degree: u32) -> Result<bool> {
        let basis = self.truncation(degree);
        let wh = self.whittaker_vectors(0)?;
        let small = self.truncation(0);
        let mut vectors = Vec::new();
        for u in wh.basis() {
            let u = small.element_of(u);
            for s in basis.monomials() {
                let image = self.a_act(&Poly::monomial(s.clone(), int(1)), &u)?;
                vectors.push(basis.coordinates(&image)?);
            }
        }
        Ok(Subspace::from_spanning(basis.len(), vectors).dim() == basis.len())
    }
}

/// Dense matrix of the given columns restricted to rows that occur.
fn compressed_matrix(basis: &TruncationBasis, columns: &[TensorElement]) -> Result<Matrix> {
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut entries = Vec::new();
    for (col, w) in columns.iter().enumerate() {
        for (r, v) in w.terms() {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let pos = basis.position(r, j).ok_or(Error::TruncationTooSmall {
                    need: r.degree(),
                    have: basis.degree(),
                })?;
                let next = rows.len();
                let row = *rows.entry(pos).or_insert(next);
                entries.push((row, col, x.clone()));
            }
        }
    }
    let mut m = Matrix::zeros(rows.len(), columns.len());
    for (r, c, x) in entries {
        m.set(r, c, x);
    }
    Ok(m)
}

#[cfg(test)]
pub(crate) fn unit_coefficients(m: MultiIndex, j: usize) -> HBasisCoefficients {
    use num_traits::One;
    let mut c = HBasisCoefficients::new();
    c.add_term(m, j, Rational::one());
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmod::GlModule;
    use crate::rational::{frac, from_bigint, pow};
    use crate::weyl::WhittakerType;
    use crate::whittaker::random_element;
    use rand::SeedableRng;

    fn module(a: &[i64], v: GlModule) -> TensorModule {
        TensorModule::new(WhittakerType::from_i64(a), v).unwrap()
    }

    #[test]
    fn degree_examples() {
        let m = module(&[2], GlModule::trivial(1));
        let one = m.whittaker_generator(0);
        assert_eq!(m.degree_of(&one).unwrap(), MultiIndex::zero(1));
        let t2 = TensorElement::basis(MultiIndex::new([2]), 0, 1);
        assert_eq!(m.degree_of(&t2).unwrap(), MultiIndex::new([2]));

        let m = module(&[2, 3], GlModule::natural(2));
        let h1 = m.h_power(&MultiIndex::new([1, 0]), &m.whittaker_generator(0)).unwrap();
        assert_eq!(m.degree_of(&h1).unwrap(), MultiIndex::new([1, 0]));
        assert!(m.degree_of(&TensorElement::zero(2, 2)).is_err());
        let singular = module(&[0, 1], GlModule::natural(2));
        assert!(matches!(singular.degree_of(&h1), Err(Error::SingularType(_))));
    }

    #[test]
    fn degree_is_support_maximum() {
        let m = module(&[1, -1, 2], GlModule::natural(3));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let w = random_element(&mut rng, 3, 3, 4, 4);
            if w.is_zero() {
                continue;
            }
            let top = w.terms().next_back().unwrap().0.clone();
            assert_eq!(m.degree_of(&w).unwrap(), top);
        }
    }

    #[test]
    fn km_examples_and_laws() {
        let m = TensorModule::new(WhittakerType::new(vec![frac(1, 2), int(3)]), GlModule::natural(2)).unwrap();
        assert_eq!(m.k_m(&MultiIndex::new([1, 0])).unwrap(), frac(1, 2));
        assert_eq!(m.k_m(&MultiIndex::new([0, 1])).unwrap(), int(3));
        for mi in MultiIndex::enumerate(2, 4) {
            let k = m.k_m(&mi).unwrap();
            assert!(!k.is_zero());
            // ∂_s h^m(1⊗v) = 0 for s > m
            let hs = m.h_basis(&mi).unwrap();
            for s in MultiIndex::enumerate(2, mi.degree() + 1).into_iter().filter(|s| *s > mi) {
                for h in hs.iter() {
                    assert!(m.partial_op(&s, h).unwrap().is_zero(), "{s} {mi}");
                }
            }
            // the computed table happens to be m!·a^m here
            let closed: Rational = from_bigint(mi.factorial())
                * pow(&frac(1, 2), mi.get(0))
                * pow(&int(3), mi.get(1));
            assert_eq!(k, closed);
        }
    }

    #[test]
    fn decompose_examples() {
        let a = int(5);
        let m = module(&[5], GlModule::natural(1));
        let one = m.whittaker_generator(0);
        assert_eq!(m.whittaker_decompose(&one).unwrap(), unit_coefficients(MultiIndex::zero(1), 0));
        // t⊗v = (1/a) h(1⊗v) − (1/a)(1⊗E_11 v)
        let t = TensorElement::basis(MultiIndex::new([1]), 0, 1);
        let c = m.whittaker_decompose(&t).unwrap();
        assert_eq!(c.get(&MultiIndex::new([1]), 0), a.recip());
        assert_eq!(c.get(&MultiIndex::new([0]), 0), -a.recip());
        assert_eq!(c.len(), 2);
        assert_eq!(m.reassemble(&c).unwrap(), t);
    }

    #[test]
    fn decompose_roundtrip_random() {
        let m = TensorModule::new(WhittakerType::new(vec![int(1), frac(-2, 3)]), GlModule::natural(2)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let w = random_element(&mut rng, 2, 2, 4, 6);
            let c = m.whittaker_decompose(&w).unwrap();
            assert_eq!(m.reassemble(&c).unwrap(), w);
        }
        let singular = module(&[1, 0], GlModule::natural(2));
        assert!(matches!(
            singular.whittaker_decompose(&m.whittaker_generator(0)),
            Err(Error::SingularType(_))
        ));
    }

    #[test]
    fn free_basis_matrix_examples() {
        let m = module(&[3, 1], GlModule::natural(2));
        assert_eq!(m.free_basis_matrix(0).unwrap(), Matrix::identity(2));
        let m1 = module(&[4], GlModule::trivial(1));
        assert_eq!(m1.free_basis_matrix(1).unwrap(), Matrix::from_i64(&[&[1, 0], &[0, 4]]));
        let b = m.free_basis_matrix(3).unwrap();
        assert_eq!(b.rank(), b.rows());
        let singular = module(&[3, 0], GlModule::natural(2));
        assert!(singular.free_basis_matrix(2).is_err());
        let s = singular.free_basis_matrix_unchecked(2).unwrap();
        assert!(s.rank() < s.rows());
    }

    #[test]
    fn whittaker_vectors_are_one_tensor_v() {
        for (a, n) in [(vec![1, 2], 2), (vec![0, 0], 2), (vec![1, 0, 2], 3)] {
            for k in 0..=n {
                let m = module(&a, GlModule::exterior(n, k).unwrap());
                let wh = m.whittaker_vectors(3).unwrap();
                assert_eq!(wh.dim(), m.dim());
                let basis = m.truncation(3);
                for j in 0..m.dim() {
                    assert!(wh.contains(&basis.coordinates(&m.whittaker_generator(j)).unwrap()));
                }
                let bigger = m.whittaker_vectors(4).unwrap();
                assert_eq!(bigger.dim(), wh.dim());
            }
        }
        let m = module(&[1], GlModule::trivial(1));
        assert_eq!(m.whittaker_vectors(5).unwrap().dim(), 1);
        assert!(m.whittaker_span_covers(4).unwrap());
    }
}
