//! The polynomial algebra `A_n = Q[t_1, ..., t_n]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{check_dim, Error, Result};
use crate::index::MultiIndex;
use crate::parse::{format_monomial, format_term, join_terms, parse_terms};
use crate::rational::{int, Rational};

/// Sparse polynomial; terms iterate in ascending total order of exponents.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(MultiIndex::zero(n), c)
    }

    pub fn monomial(m: MultiIndex, c: Rational) -> Self {
        let mut p = Poly::zero(m.dim());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The variable `t_{axis+1}`.
    pub fn var(n: usize, axis: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, axis), Rational::one())
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (MultiIndex, Rational)>) -> Result<Self> {
        let mut p = Poly::zero(n);
        for (m, c) in terms {
            check_dim(n, m.dim())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut p = Poly::zero(n);
        for term in parse_terms("polynomial", n, text)? {
            if !term.d.is_zero() {
                return Err(Error::parse("polynomial", format!("derivative in {text:?}")));
            }
            p.add_term(term.t, term.coeff);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Degree in the single variable `t_{axis+1}`.
    pub fn degree_in(&self, axis: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.get(axis)).max()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c t^m`.
    pub fn shift(&self, m: &MultiIndex, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(k, v)| (k.add(m), v * c)).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        check_dim(self.n, other.n)?;
        let mut out = Poly::zero(self.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(a.add(b), ca * cb);
            }
        }
        Ok(out)
    }

    /// Formal partial derivative in `t_{axis+1}`.
    pub fn partial(&self, axis: usize) -> Result<Poly> {
        if axis >= self.n {
            return Err(Error::AxisOutOfRange { axis, n: self.n });
        }
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            if let Some(lower) = m.sub_unit(axis) {
                out.add_term(lower, c * int(m.get(axis) as i64));
            }
        }
        Ok(out)
    }

    /// Largest `k` with `f ∈ m^k`: the minimal total degree of a term.
    pub fn ideal_order(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(MultiIndex::degree)
            .min()
            .ok_or(Error::ZeroInput("ideal_order"))
    }

    /// Value at the origin, `f(0)`.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&MultiIndex::zero(self.n))
    }
}

pub fn poly_mul(f: &Poly, g: &Poly) -> Result<Poly> {
    f.checked_mul(g)
}

pub fn partial(axis: usize, f: &Poly) -> Result<Poly> {
    f.partial(axis)
}

pub fn ideal_order(f: &Poly) -> Result<u32> {
    f.ideal_order()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&int(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_terms(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| format_term(c, &format_monomial('t', m))),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({self})", self.n)
    }
}

#[derive(serde::Serialize)]
struct JsonTerm<'a> {
    exponent: &'a MultiIndex,
    coeff: String,
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| JsonTerm {
            exponent: m,
            coeff: c.to_string(),
        }))
    }
}
