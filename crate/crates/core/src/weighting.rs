//! The weighting functor on Whittaker tensor modules: weight components
//! `M^r = M / I_r M` with `I_r = ⟨h_i − r_i⟩ ⊂ U(h_n)`, and the induced
//! action `t^s∂_i : M^r → M^{r + s − e_i}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::linalg::{Matrix, Subspace};
use crate::rational::{self, int, Rational};
use crate::whittaker::{HBasisCoefficients, OmegaParams, TensorModule};
use crate::witt::{basis_fields, VectorField};

/// A finite set of weights `r ∈ Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightGrid {
    weights: Vec<Vec<Rational>>,
}

impl WeightGrid {
    /// `{lo..=hi}^n`
    pub fn integer_box(n: usize, lo: i64, hi: i64) -> Self {
        let mut weights = vec![Vec::new()];
        for _ in 0..n {
            weights = weights
                .into_iter()
                .flat_map(|w: Vec<Rational>| {
                    (lo..=hi).map(move |x| {
                        let mut w = w.clone();
                        w.push(int(x));
                        w
                    })
                })
                .collect();
        }
        WeightGrid { weights }
    }

    pub fn from_weights(weights: Vec<Vec<Rational>>) -> Self {
        WeightGrid { weights }
    }

    /// `lo:hi` for an integer box, or `;`-separated weights such as
    /// `1/2,0;1,-1`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((lo, hi)) = text.split_once(':') {
            let bad = || Error::parse("grid", format!("expected lo:hi with integers, got {text:?}"));
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            return Ok(Self::integer_box(n, lo, hi));
        }
        let weights = text
            .split(';')
            .map(|w| {
                let w = rational::parse_list("grid", w)?;
                if w.len() != n {
                    return Err(Error::parse("grid", format!("weight {w:?} does not have {n} entries")));
                }
                Ok(w)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightGrid { weights })
    }

    pub fn weights(&self) -> &[Vec<Rational>] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl FromStr for WeightGrid {
    type Err = Error;

    /// One-dimensional grids; use [`WeightGrid::parse`] for other `n`.
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(1, s)
    }
}

fn format_weight(r: &[Rational]) -> String {
    let parts: Vec<String> = r.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn shifted(r: &[Rational], shift: &[i64]) -> Vec<Rational> {
    r.iter().zip(shift).map(|(x, s)| x + int(*s)).collect()
}

/// `r^m = Π r_i^{m_i}`
fn evaluate(m: &MultiIndex, r: &[Rational]) -> Rational {
    (0..r.len()).map(|i| rational::pow(&r[i], m.get(i))).product()
}

/// The weight modules of one Whittaker tensor module, with the
/// decompositions of `X·(1⊗v_j)` cached per basis field.
pub struct Weighting {
    module: Arc<TensorModule>,
    degree: u32,
    cache: std::sync::RwLock<BTreeMap<VectorField, Arc<Vec<HBasisCoefficients>>>>,
}

impl fmt::Debug for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weighting({:?}, D={})", self.module, self.degree)
    }
}

impl Weighting {
    pub fn new(module: Arc<TensorModule>, degree: u32) -> Result<Self> {
        module.whittaker_type().require_nonsingular()?;
        Ok(Weighting {
            module,
            degree,
            cache: Default::default(),
        })
    }

    pub fn module(&self) -> &TensorModule {
        &self.module
    }

    fn decomposition(&self, x: &VectorField) -> Result<Arc<Vec<HBasisCoefficients>>> {
        if let Some(hit) = self.cache.read().expect("cache lock").get(x) {
            return Ok(hit.clone());
        }
        let need = x.exponent.degree();
        if need > self.degree {
            return Err(Error::TruncationTooSmall { need, have: self.degree });
        }
        let m = &self.module;
        let value = (0..m.dim())
            .map(|j| m.whittaker_decompose(&m.field_act(x, &m.whittaker_generator(j))?))
            .collect::<Result<Vec<_>>>()?;
        let value = Arc::new(value);
        self.cache.write().expect("cache lock").insert(x.clone(), value.clone());
        Ok(value)
    }

    /// Matrix of `x : M^r → M^{r + shift(x)}` in the bases `{[1⊗v_j]}`.
    pub fn weight_action(&self, x: &VectorField, r: &[Rational]) -> Result<Matrix> {
        check_dim(self.module.n(), r.len())?;
        let target = shifted(r, &x.shift());
        let dim = self.module.dim();
        let mut out = Matrix::zeros(dim, dim);
        for (j, coeffs) in self.decomposition(x)?.iter().enumerate() {
            for ((m, jj), c) in coeffs.terms() {
                out.add_to(*jj, j, &(c * evaluate(m, &target)));
            }
        }
        Ok(out)
    }

    /// Matrix of `Σ c X Y` on `M^r`, each product taken through the
    /// intermediate weight.
    pub fn weight_action_of_products(
        &self,
        terms: &[(Rational, VectorField, VectorField)],
        r: &[Rational],
    ) -> Result<Matrix> {
        let dim = self.module.dim();
        let mut out = Matrix::zeros(dim, dim);
        for (c, x, y) in terms {
            let my = self.weight_action(y, r)?;
            let mx = self.weight_action(x, &shifted(r, &y.shift()))?;
            out = out.add(&mx.mul(&my)?.scale(c))?;
        }
        Ok(out)
    }

    /// `dim M_{≤D} / (Σ_q (h_q − r_q) M_{≤D−1})`, computed by rank.
    pub fn component_dim(&self, r: &[Rational]) -> Result<usize> {
        Ok(self.module.truncation(self.degree).len() - self.ideal_part(r)?.dim())
    }

    /// `Σ_q (h_q − r_q) M_{≤D−1}` as a subspace of `M_{≤D}`.
    pub fn ideal_part(&self, r: &[Rational]) -> Result<Subspace> {
        let m = &self.module;
        check_dim(m.n(), r.len())?;
        let big = m.truncation(self.degree);
        if self.degree == 0 {
            return Ok(Subspace::zero(big.len()));
        }
        let small = m.truncation(self.degree - 1);
        let mut columns = Vec::new();
        for (q, rq) in r.iter().enumerate() {
            let h = VectorField::cartan(m.n(), q);
            for p in 0..small.len() {
                let w = small.element(p);
                let image = m.field_act(&h, &w)?.sub(&w.scale(rq));
                columns.push(big.coordinates(&image)?);
            }
        }
        Ok(Subspace::from_spanning(big.len(), columns))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightFailure {
    pub x: String,
    pub y: String,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRepresentationReport {
    pub grid_size: usize,
    pub field_degree: u32,
    pub eigenvalue_law: bool,
    pub bracket_checks: usize,
    pub passed: bool,
    pub failure: Option<WeightFailure>,
}

/// `h_i` acts on `M^r` by `r_i`, and
/// `[X,Y]|_r = X|_{r+shift(Y)} Y|_r − Y|_{r+shift(X)} X|_r`
/// for basis fields with `|m| ≤ field_degree` and grid weights `r`.
/// Brackets reach degree `2·field_degree − 1`, which the truncation must cover.
pub fn verify_weight_representation(
    w: &Weighting,
    grid: &WeightGrid,
    field_degree: u32,
) -> Result<WeightRepresentationReport> {
    let need = (2 * field_degree).saturating_sub(1);
    if need > w.degree {
        return Err(Error::TruncationTooSmall { need, have: w.degree });
    }
    let n = w.module.n();
    let dim = w.module.dim();
    let mut eigenvalue_law = true;
    for r in grid.weights() {
        for i in 0..n {
            let got = w.weight_action(&VectorField::cartan(n, i), r)?;
            eigenvalue_law &= got == Matrix::identity(dim).scale(&r[i]);
        }
    }
    let fields = basis_fields(n, field_degree);
    fields.par_iter().try_for_each(|x| w.decomposition(x).map(|_| ()))?;
    let mut pairs = Vec::new();
    for (i, x) in fields.iter().enumerate() {
        for y in &fields[i + 1..] {
            for r in grid.weights() {
                pairs.push((x, y, r));
            }
        }
    }
    let failure = pairs
        .par_iter()
        .map(|(x, y, r)| -> Result<Option<WeightFailure>> {
            let bracket = x.bracket(y);
            let mut lhs = Matrix::zeros(dim, dim);
            for (z, c) in &bracket {
                lhs = lhs.add(&w.weight_action(z, r)?.scale(c))?;
            }
            let terms = [
                (Rational::one(), (*x).clone(), (*y).clone()),
                (int(-1), (*y).clone(), (*x).clone()),
            ];
            let rhs = w.weight_action_of_products(&terms, r)?;
            Ok((lhs != rhs).then(|| WeightFailure {
                x: x.to_string(),
                y: y.to_string(),
                weight: format_weight(r),
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    Ok(WeightRepresentationReport {
        grid_size: grid.len(),
        field_degree,
        eigenvalue_law,
        bracket_checks: pairs.len(),
        passed: eigenvalue_law && failure.is_none(),
        failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDim {
    pub weight: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionDim {
    /// The grid is `{−radius..=radius}^n`.
    pub radius: i64,
    pub grid_size: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformBoundReport {
    pub degree: u32,
    pub dim_v: usize,
    pub components: Vec<ComponentDim>,
    pub uniform: bool,
    /// `dim ∩_r I_r M` at the truncation for growing integer boxes.
    pub intersection_decay: Vec<IntersectionDim>,
    pub decays_to_zero: bool,
}

/// Dimensions of every `M^r` on the grid, and the decay of `∩_r I_r M`
/// over the boxes of radius `0..=max_radius`.
pub fn uniform_bound_check(w: &Weighting, grid: &WeightGrid, max_radius: i64) -> Result<UniformBoundReport> {
    let dim_v = w.module.dim();
    let components = grid
        .weights()
        .par_iter()
        .map(|r| {
            Ok(ComponentDim {
                weight: format_weight(r),
                dim: w.component_dim(r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = w.module.n();
    let mut intersection_decay = Vec::new();
    for radius in 0..=max_radius {
        let boxed = WeightGrid::integer_box(n, -radius, radius);
        let parts = boxed
            .weights()
            .par_iter()
            .map(|r| w.ideal_part(r))
            .collect::<Result<Vec<_>>>()?;
        let mut acc = parts[0].clone();
        for p in &parts[1..] {
            acc = acc.intersect(p);
        }
        intersection_decay.push(IntersectionDim {
            radius,
            grid_size: boxed.len(),
            dim: acc.dim(),
        });
    }
    let uniform = components.iter().all(|c| c.dim == dim_v);
    let decays_to_zero = intersection_decay.last().is_some_and(|d| d.dim == 0)
        && intersection_decay.windows(2).all(|p| p[1].dim <= p[0].dim);
    Ok(UniformBoundReport {
        degree: w.degree,
        dim_v,
        components,
        uniform,
        intersection_decay,
        decays_to_zero,
    })
}

/// Whether the given `ω` act by zero on every grid component.
pub fn omega_vanishes_on_weights(w: &Weighting, params: &[OmegaParams], grid: &WeightGrid) -> Result<bool> {
    let results = params
        .par_iter()
        .map(|p| {
            let terms = p.terms();
            for r in grid.weights() {
                if !w.weight_action_of_products(&terms, r)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(results.into_iter().all(|b| b))
}

/// Truncation degree needed to decompose `X·(1⊗v)` for every `X` of an `ω`.
pub fn omega_degree(params: &OmegaParams) -> u32 {
    params
        .terms()
        .iter()
        .flat_map(|(_, x, y)| [x.exponent.degree(), y.exponent.degree()])
        .max()
        .unwrap_or(0)
}

/// `r ↦ Rational` helper for tests and reports.
pub fn weight(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::glmod::GlModule;
    use crate::rational::frac;
    use crate::weyl::WhittakerType;

    fn weighting(a: &[i64], v: GlModule, degree: u32) -> Weighting {
        let m = TensorModule::new(WhittakerType::from_i64(a), v).unwrap();
        Weighting::new(Arc::new(m), degree).unwrap()
    }

    #[test]
    fn action_examples() {
        let w = weighting(&[2, 3], GlModule::natural(2), 3);
        let r = vec![frac(1, 2), int(-1)];
        // ∂_i(1⊗v) = a_i(1⊗v)
        let d1 = w.weight_action(&VectorField::partial(2, 0), &r).unwrap();
        assert_eq!(d1, Matrix::identity(2).scale(&int(2)));
        let h2 = w.weight_action(&VectorField::cartan(2, 1), &r).unwrap();
        assert_eq!(h2, Matrix::identity(2).scale(&int(-1)));

        // n = 1, trivial V: t²∂(1⊗1) = a t²⊗1 = (1/a) h²(1⊗1) − (1/a) h(1⊗1)
        let w = weighting(&[3], GlModule::trivial(1), 3);
        let x = VectorField::new(MultiIndex::new([2]), 0);
        let r = weight(&[4]);
        let got = w.weight_action(&x, &r).unwrap();
        let s = int(5);
        assert_eq!(got, Matrix::from_rows(vec![vec![(&s * &s - &s) / int(3)]]));
        let big = VectorField::new(MultiIndex::new([4]), 0);
        assert!(matches!(w.weight_action(&big, &r), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn representation_on_grids() {
        let w = weighting(&[1], GlModule::trivial(1), 3);
        let err = verify_weight_representation(&w, &WeightGrid::integer_box(1, -2, 2), 3).unwrap_err();
        assert_eq!(err, Error::TruncationTooSmall { need: 5, have: 3 });
        let w = weighting(&[1], GlModule::trivial(1), 5);
        let report = verify_weight_representation(&w, &WeightGrid::integer_box(1, -2, 2), 3).unwrap();
        assert!(report.passed, "{report:?}");
        let w = weighting(&[1, 2], GlModule::natural(2), 3);
        let grid = WeightGrid::parse(2, "-1:1").unwrap();
        assert_eq!(grid.len(), 9);
        let report = verify_weight_representation(&w, &grid, 2).unwrap();
        assert!(report.passed, "{report:?}");
        let rational = WeightGrid::parse(2, "1/2,0;-1/3,2").unwrap();
        assert!(verify_weight_representation(&w, &rational, 2).unwrap().passed);
    }

    #[test]
    fn component_dims_and_decay() {
        let w = weighting(&[1, 1], GlModule::natural(2), 3);
        let report = uniform_bound_check(&w, &WeightGrid::integer_box(2, -2, 2), 2).unwrap();
        assert!(report.uniform);
        assert!(report.components.iter().all(|c| c.dim == 2));

        let w = weighting(&[2], GlModule::trivial(1), 4);
        let report = uniform_bound_check(&w, &WeightGrid::integer_box(1, -1, 1), 3).unwrap();
        // polynomials of degree ≤ 4 vanishing on 2ρ+1 points
        let dims: Vec<usize> = report.intersection_decay.iter().map(|d| d.dim).collect();
        assert_eq!(dims, vec![4, 2, 0, 0]);
        assert!(report.decays_to_zero);
    }

    #[test]
    fn grid_parse_errors() {
        assert!(WeightGrid::parse(2, "2:1").is_err());
        assert!(WeightGrid::parse(2, "1,2,3").is_err());
        assert!(WeightGrid::parse(1, "1//2").is_err());
        assert_eq!("-2:2".parse::<WeightGrid>().unwrap().len(), 5);
    }

    #[test]
    fn omega_vanishes_after_weighting() {
        let module = Arc::new(TensorModule::new(WhittakerType::from_i64(&[1]), GlModule::trivial(1)).unwrap());
        let report = module.find_annihilating_m(2, 6);
        let m = report.minimal_m.unwrap();
        let params = module.omega_grid(2, m);
        let degree = params.iter().map(omega_degree).max().unwrap();
        let w = Weighting::new(module.clone(), degree).unwrap();
        assert!(omega_vanishes_on_weights(&w, &params, &WeightGrid::integer_box(1, -2, 2)).unwrap());
        if m > 0 {
            let before = module.omega_grid(2, m - 1);
            let degree = before.iter().map(omega_degree).max().unwrap();
            let w = Weighting::new(module, degree).unwrap();
            let grid = WeightGrid::integer_box(1, -3, 3);
            assert!(!omega_vanishes_on_weights(&w, &before, &grid).unwrap());
        }
    }
}
