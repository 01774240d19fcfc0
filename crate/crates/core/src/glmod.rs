//! Finite-dimensional `gl_n`-modules given by explicit matrices for the
//! `e_ij`, and their `L_n`-action through the jet projection.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::rational::{self, binomial, int, Rational};
use crate::witt::{jet_project, WittElement};

#[derive(Clone, PartialEq, Eq)]
pub struct GlModule {
    n: usize,
    dim: usize,
    /// `e[i * n + j]` is the matrix of `e_ij`.
    e: Vec<Matrix>,
    labels: Vec<String>,
}

/// A quadruple `(i, j, k, l)` at which `[E_ij, E_kl]` is wrong (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelationWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl GlModule {
    /// The one-dimensional module on which every `e_ij` acts by zero.
    pub fn trivial(n: usize) -> Self {
        Self::exterior(n, 0).expect("k = 0 is in range")
    }

    pub fn natural(n: usize) -> Self {
        Self::exterior(n, 1).expect("k = 1 is in range")
    }

    /// `Λ^k` of the natural module, basis `e_S` for `k`-subsets in lex order.
    pub fn exterior(n: usize, k: usize) -> Result<Self> {
        if n == 0 || k > n {
            return Err(Error::ExteriorOutOfRange { n, k });
        }
        let subsets = subsets(n, k);
        let index: BTreeMap<&[usize], usize> =
            subsets.iter().enumerate().map(|(p, s)| (s.as_slice(), p)).collect();
        let dim = subsets.len();
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut m = Matrix::zeros(dim, dim);
                for (col, s) in subsets.iter().enumerate() {
                    let Some(pos) = s.iter().position(|&x| x == j) else {
                        continue;
                    };
                    if i != j && s.contains(&i) {
                        continue;
                    }
                    let mut word = s.clone();
                    word[pos] = i;
                    let sign = sort_sign(&mut word);
                    m.set(index[word.as_slice()], col, int(sign));
                }
                e.push(m);
            }
        }
        let labels = subsets
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "1".to_string()
                } else {
                    s.iter().map(|x| format!("e{}", x + 1)).collect::<Vec<_>>().join("^")
                }
            })
            .collect();
        Ok(GlModule { n, dim, e, labels })
    }

    /// A module from user matrices; unspecified `e_ij` act by zero.
    pub fn custom(n: usize, dim: usize, matrices: BTreeMap<(usize, usize), Matrix>) -> Result<Self> {
        if n == 0 || dim == 0 {
            return Err(Error::InvalidModule("dimensions must be positive".into()));
        }
        let mut e = vec![Matrix::zeros(dim, dim); n * n];
        for ((i, j), m) in matrices {
            if i >= n || j >= n {
                return Err(Error::InvalidModule(format!("index ({},{}) outside 1..{n}", i + 1, j + 1)));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "E({},{}) is {}x{}, expected {dim}x{dim}",
                    i + 1,
                    j + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            e[i * n + j] = m;
        }
        let module = GlModule {
            n,
            dim,
            e,
            labels: (1..=dim).map(|p| format!("v{p}")).collect(),
        };
        if let Some(w) = module.check_gl_relations() {
            return Err(Error::InvalidModule(format!(
                "[E({},{}), E({},{})] violates the gl_n relations",
                w.i + 1,
                w.j + 1,
                w.k + 1,
                w.l + 1
            )));
        }
        Ok(module)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The matrix of `e_ij` (0-based).
    pub fn e(&self, i: usize, j: usize) -> &Matrix {
        &self.e[i * self.n + j]
    }

    /// Replaces the matrix of `e_ij` without checking; for mutation tests.
    pub fn with_matrix_unchecked(&self, i: usize, j: usize, m: Matrix) -> GlModule {
        let mut out = self.clone();
        out.e[i * self.n + j] = m;
        out
    }

    /// `[E_ij, E_kl] = δ_jk E_il − δ_li E_kj`; the first failing quadruple.
    pub fn check_gl_relations(&self) -> Option<RelationWitness> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs = self.e(i, j).commutator(self.e(k, l)).expect("square");
                        let mut rhs = Matrix::zeros(self.dim, self.dim);
                        if j == k {
                            rhs = rhs.add(self.e(i, l)).expect("square");
                        }
                        if l == i {
                            rhs = rhs.sub(self.e(k, j)).expect("square");
                        }
                        if lhs != rhs {
                            return Some(RelationWitness { i, j, k, l });
                        }
                    }
                }
            }
        }
        None
    }

    /// `Σ g_ij E_ij v`
    pub fn gl_act(&self, g: &Matrix, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.n, g.rows())?;
        check_dim(self.dim, v.len())?;
        let mut out = vec![Rational::zero(); self.dim];
        for i in 0..self.n {
            for j in 0..self.n {
                let c = g.get(i, j);
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(self.e(i, j).mul_vec(v)?) {
                    *o += c * x;
                }
            }
        }
        Ok(out)
    }

    /// `L_n` acts through `jet_project`; `m²Δ_n` acts by zero.
    pub fn ln_act(&self, x: &WittElement, v: &[Rational]) -> Result<Vec<Rational>> {
        check_dim(self.n, x.dim())?;
        let g = jet_project(x)?;
        self.gl_act(&g.0, v)
    }
}

pub fn make_exterior(n: usize, k: usize) -> Result<GlModule> {
    GlModule::exterior(n, k)
}

pub fn check_gl_relations(v: &GlModule) -> Option<RelationWitness> {
    v.check_gl_relations()
}

pub fn ln_act(v: &GlModule, x: &WittElement, vector: &[Rational]) -> Result<Vec<Rational>> {
    v.ln_act(x, vector)
}

impl fmt::Debug for GlModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlModule(n={}, dim={}, basis={:?})", self.n, self.dim, self.labels)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts distinct entries and returns the sign of the permutation.
fn sort_sign(word: &mut [usize]) -> i64 {
    let mut sign = 1;
    for a in 0..word.len() {
        for b in 0..word.len() - 1 - a {
            if word[b] > word[b + 1] {
                word.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    sign
}

/// Lex-ordered `k`-subsets of `{0..n-1}`; the basis order of `Λ^k`.
pub fn exterior_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    subsets(n, k)
}

/// `e_j ∧ e_S` in `Λ^{k+1}`: `None` if `j ∈ S`, else (sign, sorted subset).
pub fn wedge_with(j: usize, s: &[usize]) -> Option<(i64, Vec<usize>)> {
    if s.contains(&j) {
        return None;
    }
    let mut word = Vec::with_capacity(s.len() + 1);
    word.push(j);
    word.extend_from_slice(s);
    let sign = sort_sign(&mut word);
    Some((sign, word))
}

/// Matrix entries accepted in module descriptions: integers or "p/q".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn value(&self, field: &str) -> Result<Rational> {
        match self {
            Entry::Int(v) => Ok(int(*v)),
            Entry::Text(s) => rational::parse(field, s),
        }
    }
}

/// Serializable description of a `gl_n`-module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModuleSpec {
    Trivial,
    Natural,
    Exterior {
        k: usize,
    },
    Custom {
        dim: usize,
        #[serde(rename = "E")]
        e: BTreeMap<String, Vec<Vec<Entry>>>,
    },
}

impl ModuleSpec {
    pub fn build(&self, n: usize) -> Result<GlModule> {
        match self {
            ModuleSpec::Trivial => Ok(GlModule::trivial(n)),
            ModuleSpec::Natural => Ok(GlModule::natural(n)),
            ModuleSpec::Exterior { k } => GlModule::exterior(n, *k),
            ModuleSpec::Custom { dim, e } => {
                let mut matrices = BTreeMap::new();
                for (key, rows) in e {
                    let field = format!("module.E[{key}]");
                    let (i, j) = parse_pair(&field, key)?;
                    let rows = rows
                        .iter()
                        .map(|r| r.iter().map(|x| x.value(&field)).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    if rows.iter().any(|r| r.len() != rows.first().map_or(0, Vec::len)) {
                        return Err(Error::parse(&field, "ragged matrix"));
                    }
                    matrices.insert((i, j), Matrix::from_rows(rows));
                }
                GlModule::custom(n, *dim, matrices)
            }
        }
    }

    /// Expected dimension for the built-in families.
    pub fn expected_dim(&self, n: usize) -> Option<usize> {
        match self {
            ModuleSpec::Trivial => Some(1),
            ModuleSpec::Natural => Some(n),
            ModuleSpec::Exterior { k } => (*k <= n).then(|| {
                binomial(n as u32, *k as u32).try_into().expect("small binomial")
            }),
            ModuleSpec::Custom { dim, .. } => Some(*dim),
        }
    }
}

fn parse_pair(field: &str, key: &str) -> Result<(usize, usize)> {
    let bad = || Error::parse(field, format!("expected \"i,j\" with 1-based indices, got {key:?}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

impl FromStr for ModuleSpec {
    type Err = Error;

    /// `trivial`, `natural`, `exterior:k`, or a JSON object.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::parse("module", e.to_string()));
        }
        match s {
            "trivial" => Ok(ModuleSpec::Trivial),
            "natural" => Ok(ModuleSpec::Natural),
            _ => {
                let k = s
                    .strip_prefix("exterior:")
                    .and_then(|k| k.trim().parse().ok())
                    .ok_or_else(|| {
                        Error::parse("module", format!("expected trivial, natural or exterior:k, got {s:?}"))
                    })?;
                Ok(ModuleSpec::Exterior { k })
            }
        }
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleSpec::Trivial => write!(f, "trivial"),
            ModuleSpec::Natural => write!(f, "natural"),
            ModuleSpec::Exterior { k } => write!(f, "exterior:{k}"),
            ModuleSpec::Custom { dim, .. } => write!(f, "custom(dim={dim})"),
        }
    }
}

/// The standard basis vector `v_index` of a `dim`-dimensional space.
pub fn unit_vector(dim: usize, index: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); dim];
    v[index] = Rational::one();
    v
}
