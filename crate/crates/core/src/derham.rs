//! The complex `0 → T(A_n^a, Λ^0) → T(A_n^a, Λ^1) → ... → T(A_n^a, Λ^n) → 0`
//! with `π_{k−1}(p⊗v) = Σ_j (∂_j + a_j)p ⊗ e_j∧v`, its exactness at finite
//! truncation, and evidence that the images are simple.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::glmod::{exterior_basis, wedge_with, GlModule};
use crate::index::MultiIndex;
use crate::linalg::{Matrix, SpanBuilder, Subspace};
use crate::rational::{binomial, int, Rational};
use crate::weyl::WhittakerType;
use crate::whittaker::{TensorElement, TensorModule, TruncationBasis};
use crate::witt::basis_fields;

/// The matrix of `π_{k−1}` on degree-`≤ D` truncations (rows index the
/// codomain `T(A_n^a, Λ^k)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexStage {
    /// `k`: the map goes from `Λ^{k−1}` to `Λ^k`.
    pub k: usize,
    pub degree: u32,
    pub matrix: Matrix,
}

impl ComplexStage {
    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }
}

fn check_stage(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::StageOutOfRange { n, k })
    } else {
        Ok(())
    }
}

/// `π_{k−1}` applied to an element of `T(A_n^a, Λ^{k−1})`.
pub fn apply_pi(a: &WhittakerType, k: usize, w: &TensorElement) -> Result<TensorElement> {
    let n = a.dim();
    check_stage(n, k)?;
    check_dim(n, w.n())?;
    let source = exterior_basis(n, k - 1);
    let target = exterior_basis(n, k);
    check_dim(source.len(), w.dim())?;
    let target_index: BTreeMap<&[usize], usize> =
        target.iter().enumerate().map(|(p, s)| (s.as_slice(), p)).collect();
    let mut out = TensorElement::zero(n, target.len());
    for (r, v) in w.terms() {
        for (q, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let Some((sign, s)) = wedge_with(j, &source[q]) else {
                    continue;
                };
                let mut e = vec![Rational::zero(); target.len()];
                e[target_index[s.as_slice()]] = int(sign) * x;
                if r.get(j) > 0 {
                    out.add_term(r.sub_unit(j).unwrap(), &e, &int(r.get(j) as i64));
                }
                if !a.get(j).is_zero() {
                    out.add_term(r.clone(), &e, a.get(j));
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of `π_{k−1}` on the degree-`≤ D` truncations.
pub fn pi_map(a: &WhittakerType, k: usize, degree: u32) -> Result<ComplexStage> {
    let n = a.dim();
    check_stage(n, k)?;
    let domain = TruncationBasis::new(n, exterior_basis(n, k - 1).len(), degree);
    let codomain = TruncationBasis::new(n, exterior_basis(n, k).len(), degree);
    let images = (0..domain.len())
        .map(|p| apply_pi(a, k, &domain.element(p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexStage {
        k,
        degree,
        matrix: codomain.matrix_of(&images)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    /// Exterior degree of the term `T(A_n^a, Λ^k)`.
    pub k: usize,
    pub dim: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub defect: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    pub n: usize,
    pub a: String,
    pub degree: u32,
    pub nonsingular: bool,
    pub d2_zero: bool,
    pub exact: bool,
    pub euler_characteristic: i64,
    pub stages: Vec<StageReport>,
}

/// Ranks every `π_k` on the truncation and compares `ker π_k` with `im π_{k−1}`.
pub fn verify_complex(a: &WhittakerType, degree: u32) -> Result<ComplexReport> {
    let n = a.dim();
    let maps = (1..=n)
        .into_par_iter()
        .map(|k| pi_map(a, k, degree))
        .collect::<Result<Vec<_>>>()?;
    let ranks: Vec<usize> = maps.par_iter().map(|s| s.matrix.rank()).collect();
    let mut d2_zero = true;
    for pair in maps.windows(2) {
        d2_zero &= pair[1].matrix.mul(&pair[0].matrix)?.is_zero();
    }
    let monomials: usize = binomial(degree + n as u32, n as u32).try_into().expect("small");
    let mut stages = Vec::with_capacity(n + 1);
    let mut euler = 0i64;
    for k in 0..=n {
        let dim = monomials * exterior_basis(n, k).len();
        let rank_out = if k < n { ranks[k] } else { 0 };
        let image_dim = if k > 0 { ranks[k - 1] } else { 0 };
        let kernel_dim = dim - rank_out;
        euler += if k % 2 == 0 { dim as i64 } else { -(dim as i64) };
        stages.push(StageReport {
            k,
            dim,
            kernel_dim,
            image_dim,
            defect: kernel_dim - image_dim,
        });
    }
    Ok(ComplexReport {
        n,
        a: a.to_string(),
        degree,
        nonsingular: a.is_nonsingular(),
        d2_zero,
        exact: stages.iter().all(|s| s.defect == 0),
        euler_characteristic: euler,
        stages,
    })
}

/// [`verify_complex`] at `a = 0`; the per-stage defects are the truncated
/// polynomial de Rham cohomology.
pub fn singular_defect(n: usize, degree: u32) -> Result<ComplexReport> {
    verify_complex(&WhittakerType::zero(n), degree)
}

/// First `(X, w)` with `π_{k−1}(X·w) ≠ X·π_{k−1}(w)`, over basis fields with
/// `|m| ≤ D − 1` and the degree-`≤ D` basis.
pub fn check_pi_equivariance(a: &WhittakerType, k: usize, degree: u32) -> Result<Option<(String, String)>> {
    let n = a.dim();
    check_stage(n, k)?;
    let source = TensorModule::new(a.clone(), GlModule::exterior(n, k - 1)?)?;
    let target = TensorModule::new(a.clone(), GlModule::exterior(n, k)?)?;
    let basis = source.truncation(degree);
    let fields = basis_fields(n, degree.saturating_sub(1));
    let found = fields.par_iter().find_map_first(|x| {
        (0..basis.len()).find_map(|p| {
            let w = basis.element(p);
            let lhs = apply_pi(a, k, &source.field_act(x, &w).unwrap()).unwrap();
            let rhs = target.field_act(x, &apply_pi(a, k, &w).unwrap()).unwrap();
            (lhs != rhs).then(|| (x.to_string(), w.to_string()))
        })
    });
    Ok(found)
}

/// `Im π_{k−1} ⊂ T(A_n^a, Λ^k)` at truncation degree `D`.
#[derive(Debug)]
pub struct ImageSubmodule {
    k: usize,
    degree: u32,
    module: TensorModule,
    basis: TruncationBasis,
    image: Subspace,
}

pub fn image_submodule(a: &WhittakerType, k: usize, degree: u32) -> Result<ImageSubmodule> {
    a.require_nonsingular()?;
    let stage = pi_map(a, k, degree)?;
    let module = TensorModule::new(a.clone(), GlModule::exterior(a.dim(), k)?)?;
    let basis = module.truncation(degree);
    Ok(ImageSubmodule {
        k,
        degree,
        image: Subspace::column_space(&stage.matrix),
        module,
        basis,
    })
}

impl ImageSubmodule {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn module(&self) -> &TensorModule {
        &self.module
    }

    pub fn basis(&self) -> &TruncationBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.image.dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.image
    }

    /// Membership at the stored truncation; elements of higher degree are
    /// reported as not contained.
    pub fn contains(&self, w: &TensorElement) -> bool {
        match self.basis.coordinates(w) {
            Ok(c) => self.image.contains(&c),
            Err(_) => false,
        }
    }

    /// The `W_n`-action of the ambient module (not clipped).
    pub fn act(&self, x: &crate::witt::WittElement, w: &TensorElement) -> Result<TensorElement> {
        self.module.w_act(x, w)
    }

    /// Members of the image that are Whittaker vectors, i.e. `im ∩ (1⊗Λ^k)`.
    pub fn whittaker_subspace(&self) -> Subspace {
        let constants = Subspace::from_spanning(
            self.basis.len(),
            (0..self.module.dim())
                .map(|j| self.basis.coordinates(&self.module.whittaker_generator(j)).unwrap())
                .collect(),
        );
        self.image.intersect(&constants)
    }

    /// A pseudo-random nonzero member with small integer coefficients.
    pub fn random_member<R: Rng>(&self, rng: &mut R) -> TensorElement {
        loop {
            let mut coords = vec![Rational::zero(); self.basis.len()];
            for b in self.image.basis() {
                let c = int(rng.random_range(-3..=3));
                for (x, y) in coords.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            let w = self.basis.element_of(&coords);
            if !w.is_zero() {
                return w;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanCheck {
    /// Dimension of the generated span when the check concluded.
    pub span_dim: usize,
    pub target_dim: usize,
    pub covered: bool,
}

/// Whether the span of `w`, `u·w` and `u·u'·w` over basis fields with
/// `|m| ≤ max_field_degree` contains every target element.  Generators
/// are added in a fixed order and the check stops once the targets are
/// covered.
pub fn generated_span_covers(
    module: &TensorModule,
    w: &TensorElement,
    max_field_degree: u32,
    targets: &[TensorElement],
) -> Result<SpanCheck> {
    let fields = basis_fields(module.n(), max_field_degree);
    // t^m∂_k raises degree by at most |m| (the a_k t^m term)
    let top = [w.degree().unwrap_or(0) + 2 * max_field_degree]
        .into_iter()
        .chain(targets.iter().filter_map(TensorElement::degree))
        .max()
        .unwrap_or(0);
    let basis = module.truncation(top);
    let target_coords = targets
        .iter()
        .map(|e| basis.coordinates(e))
        .collect::<Result<Vec<_>>>()?;
    let target_dim = Subspace::from_spanning(basis.len(), target_coords.clone()).dim();
    let mut span = SpanBuilder::new(basis.len());
    let covered = |span: &SpanBuilder| target_coords.iter().all(|t| span.contains(t));

    span.insert(&basis.coordinates(w)?);
    let singles = fields
        .par_iter()
        .map(|u| module.field_act(u, w))
        .collect::<Result<Vec<_>>>()?;
    for s in &singles {
        span.insert(&basis.coordinates(s)?);
    }
    let mut done = covered(&span);
    for u in &fields {
        if done {
            break;
        }
        let batch = singles
            .par_iter()
            .map(|s| module.field_act(u, s).and_then(|e| basis.coordinates(&e)))
            .collect::<Result<Vec<_>>>()?;
        let mut grew = false;
        for v in &batch {
            grew |= span.insert(v);
        }
        if grew {
            done = covered(&span);
        }
    }
    Ok(SpanCheck {
        span_dim: span.dim(),
        target_dim,
        covered: done,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicityTrial {
    pub trial: usize,
    pub element: String,
    #[serde(flatten)]
    pub check: SpanCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicityReport {
    pub n: usize,
    pub k: usize,
    pub degree: u32,
    pub seed: u64,
    pub target_degree: u32,
    pub trials: Vec<CyclicityTrial>,
    pub passed_trials: usize,
    pub passed: bool,
}

/// For seeded random members `w` of the image, checks that `w`, `u·w` and
/// `u·u'·w` (basis fields with `|m| ≤ D`) span the image at degree `≤ D − 2`.
pub fn cyclicity_probe(sub: &ImageSubmodule, trials: usize, seed: u64) -> Result<CyclicityReport> {
    let module = &sub.module;
    module.whittaker_type().require_nonsingular()?;
    let target_degree = sub.degree.saturating_sub(2);
    let small = pi_map(module.whittaker_type(), sub.k, target_degree)?;
    let small_basis = module.truncation(target_degree);
    let targets: Vec<TensorElement> = Subspace::column_space(&small.matrix)
        .basis()
        .iter()
        .map(|c| small_basis.element_of(c))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members: Vec<TensorElement> = (0..trials).map(|_| sub.random_member(&mut rng)).collect();
    let results = members
        .iter()
        .enumerate()
        .map(|(trial, w)| {
            Ok(CyclicityTrial {
                trial,
                element: w.to_string(),
                check: generated_span_covers(module, w, sub.degree, &targets)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed_trials = results.iter().filter(|t| t.check.covered).count();
    Ok(CyclicityReport {
        n: module.n(),
        k: sub.k,
        degree: sub.degree,
        seed,
        target_degree,
        passed: passed_trials == trials,
        passed_trials,
        trials: results,
    })
}

/// The constant `1⊗v` as an element of `T(A_n^a, Λ^k)`.
pub fn constant_form(n: usize, k: usize, v: Vec<Rational>) -> TensorElement {
    debug_assert_eq!(v.len(), exterior_basis(n, k).len());
    TensorElement::pure(MultiIndex::zero(n), v)
}
