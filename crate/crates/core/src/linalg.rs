//! Dense exact linear algebra over the rationals.
//!
//! Pivoting is deterministic (leftmost column, topmost nonzero row) so that
//! reduced forms, kernels and every report derived from them are stable
//! across runs and platforms. Elimination skips zero entries, which keeps
//! the very sparse operator matrices of the truncation bases cheap.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{check_dim, Result};
use crate::rational::{int, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i * m.cols + j] = v.clone();
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Rational) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.rows)?;
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            data: self.data.iter().map(|a| a * c).collect(),
            ..*self
        }
    }

    /// `self · other − other · self`
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form.
pub fn rref(a: &Matrix) -> Rref {
    let mut m = a.clone();
    let rank = rref_in_place(&mut m.data, m.rows, m.cols);
    let pivots = (0..rank)
        .map(|i| {
            (0..m.cols)
                .find(|&j| !m.get(i, j).is_zero())
                .expect("pivot row is nonzero")
        })
        .collect();
    Rref {
        matrix: m,
        rank,
        pivots,
    }
}

fn rref_in_place(data: &mut [Rational], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = data[r * cols + c].recip();
        let support: Vec<usize> = (c..cols).filter(|&j| !data[r * cols + j].is_zero()).collect();
        for &j in &support {
            data[r * cols + j] *= &inv;
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &support {
                let delta = &factor * &data[r * cols + j];
                data[i * cols + j] -= delta;
            }
        }
        r += 1;
    }
    r
}

/// Basis of the null space `{x : A x = 0}`; `dim = cols − rank`.
pub fn kernel_basis(a: &Matrix) -> Subspace {
    let Rref {
        matrix, rank, pivots, ..
    } = rref(a);
    let n = a.cols;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors: Vec<Vec<Rational>> = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate().take(rank) {
                v[p] = -matrix.get(i, f).clone();
            }
            v
        })
        .collect();
    Subspace::from_spanning(n, vectors)
}

/// A particular solution of `A x = b`, or `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    check_dim(a.rows, b.len())?;
    let cols = a.cols + 1;
    let mut data = Vec::with_capacity(a.rows * cols);
    for (i, bi) in b.iter().enumerate() {
        data.extend_from_slice(a.row(i));
        data.push(bi.clone());
    }
    let rank = rref_in_place(&mut data, a.rows, cols);
    let mut x = vec![Rational::zero(); a.cols];
    for i in 0..rank {
        let row = &data[i * cols..(i + 1) * cols];
        let pivot = row.iter().position(|v| !v.is_zero()).expect("nonzero pivot row");
        if pivot == a.cols {
            return Ok(None);
        }
        x[pivot] = row[a.cols].clone();
    }
    Ok(Some(x))
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &Matrix) -> Result<Option<Matrix>> {
    check_dim(a.rows, a.cols)?;
    let n = a.rows;
    let cols = 2 * n;
    let mut data = Vec::with_capacity(n * cols);
    for i in 0..n {
        data.extend_from_slice(a.row(i));
        data.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
    }
    let rank = rref_in_place(&mut data, n, cols);
    if rank < n || (0..n).any(|i| data[i * cols + i].is_zero()) {
        return Ok(None);
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, data[i * cols + n + j].clone());
        }
    }
    Ok(Some(inv))
}

/// A linear subspace of `Q^ambient`, stored as the nonzero rows of a
/// reduced row echelon form (so the representation is canonical).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_spanning(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![Rational::zero(); ambient];
                    v[i] = Rational::one();
                    v
                })
                .collect(),
        )
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let rows = vectors.len();
        let mut data = Vec::with_capacity(rows * ambient);
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length");
            data.extend(v);
        }
        let rank = rref_in_place(&mut data, rows, ambient);
        let basis = data
            .chunks(ambient.max(1))
            .take(rank)
            .map(<[Rational]>::to_vec)
            .collect();
        Subspace { ambient, basis }
    }

    /// Column space of a matrix.
    pub fn column_space(a: &Matrix) -> Self {
        Self::from_spanning(a.rows, (0..a.cols).map(|j| a.column(j)).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce against the echelon rows.
        let mut w = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, rj) in w.iter_mut().zip(row) {
                if !rj.is_zero() {
                    *wj -= &f * rj;
                }
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::from_spanning(self.ambient, vectors)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient);
        }
        // Solve Σ x_i u_i − Σ y_j w_j = 0 and map the x-part back.
        let k = self.dim();
        let mut columns: Vec<Vec<Rational>> = self.basis.clone();
        columns.extend(other.basis.iter().map(|w| w.iter().map(|x| -x).collect()));
        let a = Matrix::from_columns(self.ambient, &columns);
        let ker = kernel_basis(&a);
        let vectors = ker
            .basis
            .iter()
            .map(|coeffs| {
                let mut v = vec![Rational::zero(); self.ambient];
                for (c, u) in coeffs[..k].iter().zip(&self.basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi += c * ui;
                    }
                }
                v
            })
            .collect();
        Self::from_spanning(self.ambient, vectors)
    }
}

/// Incrementally grown span, kept in row echelon form with unit pivots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanBuilder {
    ambient: usize,
    rows: BTreeMap<usize, Vec<Rational>>,
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> Self {
        SpanBuilder {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut w = v.to_vec();
        for (&p, row) in &self.rows {
            if w[p].is_zero() {
                continue;
            }
            let f = w[p].clone();
            for (wj, rj) in w[p..].iter_mut().zip(&row[p..]) {
                if !rj.is_zero() {
                    *wj -= &f * rj;
                }
            }
        }
        w
    }

    /// Adds `v`; returns whether the span grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in &mut w[p..] {
            *x *= &inv;
        }
        self.rows.insert(p, w);
        true
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_spanning(self.ambient, self.rows.values().cloned().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    #[test]
    fn rref_examples() {
        let r = rref(&Matrix::from_i64(&[&[2, 4], &[1, 2]]));
        assert_eq!((r.rank, r.pivots.clone()), (1, vec![0]));
        assert_eq!(r.matrix, Matrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(rref(&Matrix::identity(3)).rank, 3);
        assert_eq!(rref(&Matrix::zeros(2, 5)).rank, 0);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[int(1), int(-1)]));
        assert_eq!(kernel_basis(&Matrix::identity(4)).dim(), 0);
        assert_eq!(kernel_basis(&Matrix::zeros(2, 3)).dim(), 3);
    }

    #[test]
    fn solve_examples() {
        assert_eq!(
            solve(&Matrix::from_i64(&[&[2]]), &[int(3)]).unwrap(),
            Some(vec![frac(3, 2)])
        );
        assert_eq!(solve(&Matrix::from_i64(&[&[1], &[0]]), &[int(0), int(1)]).unwrap(), None);
        let b = vec![int(4), int(-1), frac(2, 3)];
        assert_eq!(solve(&Matrix::identity(3), &b).unwrap(), Some(b));
        assert!(solve(&Matrix::identity(3), &[int(1)]).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        assert_eq!(inverse(&Matrix::from_i64(&[&[1, 2], &[2, 4]])).unwrap(), None);
    }

    #[test]
    fn subspace_intersection_and_sum() {
        let xy = Subspace::from_spanning(3, vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]]);
        let yz = Subspace::from_spanning(3, vec![vec![int(0), int(1), int(1)], vec![int(0), int(0), int(1)]]);
        let meet = xy.intersect(&yz);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&[int(0), int(5), int(0)]));
        assert_eq!(xy.sum(&yz).dim(), 3);
        assert!(Subspace::full(3).contains_subspace(&xy));
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                Matrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| int(x)).collect()).collect())
            })
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(a in arb_matrix()) {
            let k = kernel_basis(&a);
            for v in k.basis() {
                prop_assert!(a.mul_vec(v).unwrap().iter().all(Zero::is_zero));
            }
            prop_assert_eq!(a.rank() + k.dim(), a.cols());
        }

        #[test]
        fn rref_is_idempotent(a in arb_matrix()) {
            let once = rref(&a);
            let twice = rref(&once.matrix);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn solve_is_consistent(a in arb_matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
            let x0: Vec<Rational> = seed.iter().take(a.cols()).map(|&v| int(v)).chain(std::iter::repeat(int(0))).take(a.cols()).collect();
            let b = a.mul_vec(&x0).unwrap();
            let x = solve(&a, &b).unwrap().expect("b is in the column space");
            prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
        }
    }

    #[test]
    fn span_builder_matches_subspace() {
        let vs: Vec<Vec<Rational>> = [[1, 2, 3, 0], [2, 4, 6, 0], [0, 1, 1, 1], [1, 3, 4, 1], [0, 0, 0, 5]]
            .iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect();
        let mut b = SpanBuilder::new(4);
        let grew: Vec<bool> = vs.iter().map(|v| b.insert(v)).collect();
        assert_eq!(grew, vec![true, false, true, false, true]);
        assert_eq!(b.to_subspace(), Subspace::from_spanning(4, vs.clone()));
        assert!(b.contains(&vs[3]));
        assert!(!b.contains(&[int(1), int(0), int(0), int(0)]));
    }
}
