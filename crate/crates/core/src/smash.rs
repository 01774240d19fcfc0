//! The map `φ: A_n # U(W_n) → D_n ⊗ U(L_n)` on generators, and its
//! verification against the defining relations of the smash product.

use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::pbw::{DnUlnElement, DnUlnKey, Normalizer, PbwElement, RewriteStrategy};
use crate::poly::Poly;
use crate::rational::{from_bigint, int, Rational};
use crate::weyl::WeylElement;
use crate::witt::{basis_fields, VectorField, WittElement};

use std::collections::BTreeMap;

/// A generator of the smash product: `t^m` or `t^m ∂_k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SmashGenerator {
    Poly(MultiIndex),
    Field(VectorField),
}

impl fmt::Display for SmashGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmashGenerator::Poly(m) => write!(f, "{}", Poly::monomial(m.clone(), Rational::one())),
            SmashGenerator::Field(vf) => write!(f, "{vf}"),
        }
    }
}

impl fmt::Debug for SmashGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The coefficient used for the `t^{m−r} ⊗ t^r ∂_k` terms of `φ`.
pub type PhiCoefficient = fn(&MultiIndex, &MultiIndex) -> Rational;

fn binomial_coefficient(m: &MultiIndex, r: &MultiIndex) -> Rational {
    from_bigint(crate::index::binom_multi(m, r).expect("same dimension"))
}

fn weyl_t(m: &MultiIndex) -> WeylElement {
    WeylElement::monomial(m.clone(), MultiIndex::zero(m.dim()), Rational::one())
}

fn sub_indices(m: &MultiIndex) -> Vec<MultiIndex> {
    MultiIndex::enumerate(m.dim(), m.degree())
        .into_iter()
        .filter(|r| r.divides(m))
        .collect()
}

fn phi_generator_with(g: &SmashGenerator, coeff: PhiCoefficient) -> DnUlnElement {
    match g {
        SmashGenerator::Poly(m) => DnUlnElement::tensor(&weyl_t(m), &PbwElement::one()),
        SmashGenerator::Field(vf) => {
            let n = vf.dim();
            let m = &vf.exponent;
            let lead = WeylElement::monomial(m.clone(), MultiIndex::unit(n, vf.axis), Rational::one());
            let mut out = DnUlnElement::tensor(&lead, &PbwElement::one());
            for r in sub_indices(m).into_iter().filter(|r| !r.is_zero()) {
                let rest = m.checked_sub(&r).unwrap();
                let right = PbwElement::generator(VectorField::new(r.clone(), vf.axis));
                let term = DnUlnElement::tensor(&weyl_t(&rest), &right);
                out.add_scaled(&term, &coeff(m, &r));
            }
            out
        }
    }
}

/// `t^m ↦ t^m⊗1`, `t^m∂_k ↦ t^m∂_k⊗1 + Σ_{0≠r≤m} C(m,r) t^{m−r}⊗t^r∂_k`.
pub fn phi_generator(g: &SmashGenerator) -> DnUlnElement {
    phi_generator_with(g, binomial_coefficient)
}

fn phi_witt_with(x: &WittElement, coeff: PhiCoefficient) -> DnUlnElement {
    let mut out = DnUlnElement::zero(x.dim());
    for (vf, c) in x.terms() {
        out.add_scaled(&phi_generator_with(&SmashGenerator::Field(vf.clone()), coeff), c);
    }
    out
}

/// `φ` on a linear combination of vector fields.
pub fn phi_witt(x: &WittElement) -> DnUlnElement {
    phi_witt_with(x, binomial_coefficient)
}

/// `φ` on a polynomial: `f ↦ f⊗1`.
pub fn phi_poly(f: &Poly) -> DnUlnElement {
    DnUlnElement::tensor(&WeylElement::from_poly(f), &PbwElement::one())
}

/// Which defining relation of the smash product a check exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationFamily {
    PolyProduct,
    SmashRelation,
    LieRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiCounterexample {
    pub family: RelationFamily,
    pub left: String,
    pub right: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub n: usize,
    pub degree: u32,
    pub coverage: String,
    pub poly_checks: usize,
    pub smash_checks: usize,
    pub lie_checks: usize,
    pub passed: bool,
    pub counterexample: Option<PhiCounterexample>,
}

#[derive(Clone)]
enum Check {
    Poly(MultiIndex, MultiIndex),
    Smash(VectorField, MultiIndex),
    Lie(VectorField, VectorField),
}

fn run_check(check: &Check, coeff: PhiCoefficient) -> Option<PhiCounterexample> {
    let mut normalizer = Normalizer::new(RewriteStrategy::LeftmostFirst);
    let field = |vf: &VectorField| phi_generator_with(&SmashGenerator::Field(vf.clone()), coeff);
    let (family, left, right, lhs, rhs) = match check {
        Check::Poly(m, r) => {
            let lhs = phi_poly(&Poly::monomial(m.clone(), int(1)))
                .mul_with(&phi_poly(&Poly::monomial(r.clone(), int(1))), &mut normalizer)
                .expect("same dimension");
            let rhs = phi_poly(&Poly::monomial(m.add(r), int(1)));
            (
                RelationFamily::PolyProduct,
                SmashGenerator::Poly(m.clone()),
                SmashGenerator::Poly(r.clone()),
                lhs,
                rhs,
            )
        }
        Check::Smash(x, r) => {
            let f = Poly::monomial(r.clone(), int(1));
            let lhs = field(x).commutator(&phi_poly(&f), &mut normalizer).expect("same dimension");
            let image = WittElement::basis(x.clone()).apply(&f).expect("same dimension");
            let rhs = phi_poly(&image);
            (
                RelationFamily::SmashRelation,
                SmashGenerator::Field(x.clone()),
                SmashGenerator::Poly(r.clone()),
                lhs,
                rhs,
            )
        }
        Check::Lie(x, y) => {
            let lhs = field(x).commutator(&field(y), &mut normalizer).expect("same dimension");
            let bracket = WittElement::from_terms(x.dim(), x.bracket(y)).expect("same dimension");
            let rhs = phi_witt_with(&bracket, coeff);
            (
                RelationFamily::LieRelation,
                SmashGenerator::Field(x.clone()),
                SmashGenerator::Field(y.clone()),
                lhs,
                rhs,
            )
        }
    };
    (lhs != rhs).then(|| PhiCounterexample {
        family,
        left: left.to_string(),
        right: right.to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// Checks the three relation families for all generators with
/// `max(|m|, |r|) ≤ degree`.
pub fn verify_phi_homomorphism(n: usize, degree: u32) -> PhiReport {
    verify_phi_homomorphism_with(n, degree, binomial_coefficient)
}

/// As [`verify_phi_homomorphism`] with a substitute coefficient rule.
pub fn verify_phi_homomorphism_with(n: usize, degree: u32, coeff: PhiCoefficient) -> PhiReport {
    let monomials = MultiIndex::enumerate(n, degree);
    let fields = basis_fields(n, degree);
    let mut checks = Vec::new();
    for (i, m) in monomials.iter().enumerate() {
        for r in &monomials[i..] {
            checks.push(Check::Poly(m.clone(), r.clone()));
        }
    }
    let poly_checks = checks.len();
    for x in &fields {
        for r in &monomials {
            checks.push(Check::Smash(x.clone(), r.clone()));
        }
    }
    let smash_checks = checks.len() - poly_checks;
    for (i, x) in fields.iter().enumerate() {
        for y in &fields[i + 1..] {
            checks.push(Check::Lie(x.clone(), y.clone()));
        }
    }
    let lie_checks = checks.len() - poly_checks - smash_checks;
    let counterexample = checks.par_iter().find_map_first(|c| run_check(c, coeff));
    PhiReport {
        n,
        degree,
        coverage: format!("all generator pairs with max(|m|,|r|) <= {degree}"),
        poly_checks,
        smash_checks,
        lie_checks,
        passed: counterexample.is_none(),
        counterexample,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationRank {
    pub n: usize,
    pub degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub full_rank: bool,
}

/// Matrix of `φ` on `{t^r : |r| ≤ D} ∪ {t^r·t^m∂_k : |r|+|m| ≤ D}`, with
/// rows indexed by the target monomials that occur.
pub fn phi_truncation_matrix(n: usize, degree: u32) -> Matrix {
    let monomials = MultiIndex::enumerate(n, degree);
    let mut images = Vec::new();
    for r in &monomials {
        images.push(phi_poly(&Poly::monomial(r.clone(), int(1))));
    }
    for r in &monomials {
        for vf in basis_fields(n, degree - r.degree()) {
            let left = phi_poly(&Poly::monomial(r.clone(), int(1)));
            let image = left.mul(&phi_generator(&SmashGenerator::Field(vf))).expect("same dimension");
            images.push(image);
        }
    }
    let mut rows: BTreeMap<DnUlnKey, usize> = BTreeMap::new();
    for image in &images {
        for (k, _) in image.terms() {
            let next = rows.len();
            rows.entry(k.clone()).or_insert(next);
        }
    }
    let mut matrix = Matrix::zeros(rows.len(), images.len());
    for (j, image) in images.iter().enumerate() {
        for (k, c) in image.terms() {
            matrix.set(rows[k], j, c.clone());
        }
    }
    matrix
}

pub fn phi_truncation_rank(n: usize, degree: u32) -> TruncationRank {
    let matrix = phi_truncation_matrix(n, degree);
    let rank = matrix.rank();
    TruncationRank {
        n,
        degree,
        rows: matrix.rows(),
        cols: matrix.cols(),
        rank,
        full_rank: rank == matrix.cols(),
    }
}
