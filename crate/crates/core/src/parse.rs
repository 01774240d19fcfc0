//! Text forms for polynomials and differential operators.
//!
//! A sum of terms such as `3/2*t1^2*t2 - t3` or `t1^2*d1 + 3*d2`. Each term
//! is a product of an optional rational coefficient, variables `t<i>` and
//! derivatives `d<i>`, each with an optional `^e`. Indices are 1-based in
//! text and 0-based in the API.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::rational::{self, Rational};

/// One parsed term: coefficient, `t`-exponent, `∂`-exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTerm {
    pub coeff: Rational,
    pub t: MultiIndex,
    pub d: MultiIndex,
}

pub fn parse_terms(field: &str, n: usize, text: &str) -> Result<Vec<RawTerm>> {
    let err = |msg: String| Error::parse(field, msg);
    let src = text.trim();
    if src.is_empty() {
        return Err(err("empty expression".into()));
    }
    // Split into signed term strings.
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut current = String::new();
    let mut negative = false;
    let mut expect_term = true;
    for ch in src.chars() {
        match ch {
            '+' | '-' if expect_term && current.trim().is_empty() => {
                if ch == '-' {
                    negative = !negative;
                }
            }
            '+' | '-' => {
                pieces.push((negative, std::mem::take(&mut current)));
                negative = ch == '-';
                expect_term = true;
            }
            c if c.is_whitespace() => current.push(c),
            c => {
                current.push(c);
                expect_term = false;
            }
        }
    }
    if current.trim().is_empty() {
        return Err(err(format!("dangling operator in {src:?}")));
    }
    pieces.push((negative, current));

    pieces
        .into_iter()
        .map(|(neg, body)| {
            let mut term = parse_term(field, n, body.trim())?;
            if neg {
                term.coeff = -term.coeff;
            }
            Ok(term)
        })
        .collect()
}

fn parse_term(field: &str, n: usize, body: &str) -> Result<RawTerm> {
    let err = |msg: String| Error::parse(field, msg);
    let mut coeff = Rational::one();
    let mut t = MultiIndex::zero(n);
    let mut d = MultiIndex::zero(n);
    for factor in body.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(err(format!("empty factor in {body:?}")));
        }
        let first = factor.chars().next().unwrap();
        if first == 't' || first == 'd' {
            let (var, exp) = match factor[1..].split_once('^') {
                Some((v, e)) => (v, e.trim()),
                None => (&factor[1..], "1"),
            };
            let idx: usize = var
                .trim()
                .parse()
                .map_err(|_| err(format!("bad variable index in {factor:?}")))?;
            if idx == 0 || idx > n {
                return Err(err(format!("variable {factor:?} out of range for n = {n}")));
            }
            let e: u32 = exp
                .parse()
                .map_err(|_| err(format!("bad exponent in {factor:?}")))?;
            if first == 't' {
                t = t.add_unit(idx - 1, e);
            } else {
                d = d.add_unit(idx - 1, e);
            }
        } else {
            coeff *= rational::parse(field, factor)?;
        }
    }
    Ok(RawTerm { coeff, t, d })
}

/// Formats `c * rest` with the usual sign and unit conventions; returns the
/// sign separately so callers can join terms with ` + ` / ` - `.
pub(crate) fn format_term(coeff: &Rational, monomial: &str) -> (bool, String) {
    let negative = coeff < &Rational::zero();
    let abs = if negative { -coeff.clone() } else { coeff.clone() };
    let body = if monomial.is_empty() {
        abs.to_string()
    } else if abs.is_one() {
        monomial.to_string()
    } else {
        format!("{abs}*{monomial}")
    };
    (negative, body)
}

pub(crate) fn join_terms(terms: impl IntoIterator<Item = (bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `t1^2*t3` style rendering of a monomial with the given variable letter.
pub(crate) fn format_monomial(letter: char, m: &MultiIndex) -> String {
    m.entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("{letter}{}", i + 1)
            } else {
                format!("{letter}{}^{e}", i + 1)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parses_mixed_terms() {
        let terms = parse_terms("x", 3, "3/2*t1^2*t2 - t3 + t1^2*d1 - 2*t2*d1").unwrap();
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0].coeff, frac(3, 2));
        assert_eq!(terms[0].t, MultiIndex::new([2, 1, 0]));
        assert_eq!(terms[1].coeff, int(-1));
        assert_eq!(terms[2].d, MultiIndex::new([1, 0, 0]));
        assert_eq!(terms[3].coeff, int(-2));
    }

    #[test]
    fn leading_sign_and_constants() {
        let terms = parse_terms("x", 1, "-1 + 3*d1").unwrap();
        assert_eq!(terms[0].coeff, int(-1));
        assert!(terms[0].t.is_zero());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_terms("x", 2, "t3").is_err());
        assert!(parse_terms("x", 2, "t1 +").is_err());
        assert!(parse_terms("x", 2, "1//2*t1").is_err());
        assert!(parse_terms("x", 2, "t1**t2").is_err());
        assert!(parse_terms("x", 2, "").is_err());
    }
}
