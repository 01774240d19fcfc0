//! The operators `ω = Σ_i (−1)^i C(m,i) t^{α+(m−i)e_j}∂_l · t^{β+ie_j}∂_p`
//! and the search for an `m` that annihilates a truncation.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{TensorElement, TensorModule};
use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::rational::{from_bigint, int, Rational};
use crate::witt::VectorField;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaParams {
    pub alpha: MultiIndex,
    pub beta: MultiIndex,
    pub m: u32,
    /// Axes, 0-based.
    pub j: usize,
    pub l: usize,
    pub p: usize,
}

impl OmegaParams {
    /// `(coefficient, X_i, Y_i)` with the operator `Σ c X_i Y_i`.
    pub fn terms(&self) -> Vec<(Rational, VectorField, VectorField)> {
        (0..=self.m)
            .map(|i| {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                let c = int(sign) * from_bigint(crate::rational::binomial(self.m, i));
                let x = VectorField::new(self.alpha.add_unit(self.j, self.m - i), self.l);
                let y = VectorField::new(self.beta.add_unit(self.j, i), self.p);
                (c, x, y)
            })
            .collect()
    }

    /// Upper bound on the degree gained by applying the operator.
    pub fn degree_gain(&self) -> u32 {
        self.alpha.degree() + self.beta.degree() + self.m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaWitness {
    pub params: OmegaParams,
    pub element: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaStep {
    pub m: u32,
    pub operators_checked: usize,
    pub vanishes: bool,
    pub witness: Option<OmegaWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnnihilationReport {
    pub degree: u32,
    pub m_max: u32,
    pub minimal_m: Option<u32>,
    /// Every checked `m` at or above `minimal_m` vanishes, including `minimal_m + 1`.
    pub monotone: bool,
    pub steps: Vec<OmegaStep>,
}

impl TensorModule {
    pub fn omega_apply(&self, params: &OmegaParams, w: &TensorElement) -> Result<TensorElement> {
        check_dim(self.n(), params.alpha.dim())?;
        check_dim(self.n(), params.beta.dim())?;
        for axis in [params.j, params.l, params.p] {
            if axis >= self.n() {
                return Err(Error::AxisOutOfRange { axis, n: self.n() });
            }
        }
        let mut out = TensorElement::zero(self.n(), self.dim());
        for (c, x, y) in params.terms() {
            let yw = self.field_act(&y, w)?;
            out.add_scaled(&self.field_act(&x, &yw)?, &c);
        }
        Ok(out)
    }

    /// Matrix from the degree-`≤ D` truncation into the degree-`≤ D′`
    /// truncation, `D′ = D + |α| + |β| + m`, so nothing is clipped.
    pub fn omega_matrix(&self, params: &OmegaParams, degree: u32) -> Result<Matrix> {
        let domain = self.truncation(degree);
        let codomain = self.truncation(degree + params.degree_gain());
        let images = (0..domain.len())
            .map(|pos| self.omega_apply(params, &domain.element(pos)))
            .collect::<Result<Vec<_>>>()?;
        codomain.matrix_of(&images)
    }

    /// All `ω` with `|α|, |β| ≤ D` and all axes, for a fixed `m`.
    pub fn omega_grid(&self, degree: u32, m: u32) -> Vec<OmegaParams> {
        let n = self.n();
        let exps = MultiIndex::enumerate(n, degree);
        let mut out = Vec::new();
        for alpha in &exps {
            for beta in &exps {
                for j in 0..n {
                    for l in 0..n {
                        for p in 0..n {
                            out.push(OmegaParams {
                                alpha: alpha.clone(),
                                beta: beta.clone(),
                                m,
                                j,
                                l,
                                p,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// Whether every operator of [`Self::omega_grid`] kills the truncation;
    /// the first failure in grid order otherwise.
    pub fn omega_step(&self, degree: u32, m: u32) -> OmegaStep {
        let grid = self.omega_grid(degree, m);
        let domain = self.truncation(degree);
        let elements: Vec<TensorElement> = (0..domain.len()).map(|p| domain.element(p)).collect();
        let witness = grid.par_iter().find_map_first(|params| {
            elements.iter().find_map(|w| {
                let image = self.omega_apply(params, w).expect("grid is in range");
                (!image.is_zero()).then(|| OmegaWitness {
                    params: params.clone(),
                    element: w.to_string(),
                    image: image.to_string(),
                })
            })
        });
        OmegaStep {
            m,
            operators_checked: grid.len(),
            vanishes: witness.is_none(),
            witness,
        }
    }

    pub fn find_annihilating_m(&self, degree: u32, m_max: u32) -> AnnihilationReport {
        let mut steps = Vec::new();
        let mut minimal_m = None;
        for m in 0..=m_max {
            let step = self.omega_step(degree, m);
            if step.vanishes && minimal_m.is_none() {
                minimal_m = Some(m);
            }
            steps.push(step);
        }
        if let Some(m0) = minimal_m {
            if m0 == m_max {
                steps.push(self.omega_step(degree, m0 + 1));
            }
        }
        let monotone = match minimal_m {
            Some(m0) => steps.iter().filter(|s| s.m >= m0).all(|s| s.vanishes),
            None => true,
        };
        AnnihilationReport {
            degree,
            m_max,
            minimal_m,
            monotone,
            steps,
        }
    }
}

/// Whether a matrix is identically zero; convenience for reports.
pub fn is_zero_matrix(m: &Matrix) -> bool {
    (0..m.rows()).all(|i| m.row(i).iter().all(Zero::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmod::GlModule;
    use crate::weyl::WhittakerType;

    fn params(n: usize, m: u32) -> OmegaParams {
        OmegaParams {
            alpha: MultiIndex::zero(n),
            beta: MultiIndex::zero(n),
            m,
            j: 0,
            l: 0,
            p: 0,
        }
    }

    #[test]
    fn omega_examples() {
        let module = TensorModule::new(WhittakerType::from_i64(&[1]), GlModule::trivial(1)).unwrap();
        let single = params(1, 0);
        assert_eq!(single.terms().len(), 1);
        let m0 = module.omega_matrix(&single, 4).unwrap();
        assert!(!is_zero_matrix(&m0));
        assert_eq!(m0.cols(), 5);
        assert_eq!(m0.rows(), 5);
        let m3 = module.omega_matrix(&params(1, 3), 4).unwrap();
        assert!(is_zero_matrix(&m3));
        assert_eq!(m3.rows(), 8);
    }

    #[test]
    fn annihilation_search() {
        let module = TensorModule::new(WhittakerType::from_i64(&[1]), GlModule::trivial(1)).unwrap();
        let report = module.find_annihilating_m(3, 4);
        let m0 = report.minimal_m.expect("found");
        assert!(m0 <= 4);
        assert!(report.monotone);
        assert!(report.steps[..m0 as usize].iter().all(|s| s.witness.is_some()));

        let module = TensorModule::new(WhittakerType::from_i64(&[1, 1]), GlModule::natural(2)).unwrap();
        let report = module.find_annihilating_m(2, 6);
        assert!(report.minimal_m.is_some_and(|m| m <= 6));
        assert!(report.monotone);
    }
}
