//! Exact quadratic surds q·√n over the rationals, enough to reproduce the
//! parameter catalogue symbolically and to decide integrality exactly.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// q·√n with n ≥ 1 squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    pub coeff: Rational,
    pub radicand: i64,
}

fn squarefree_split(mut m: i64) -> (i64, i64) {
    // m = s²·n, n squarefree
    let mut s = 1;
    let mut n = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= p;
        }
        if e % 2 == 1 {
            n *= p;
        }
        p += 1;
    }
    (s, n * m)
}

impl Surd {
    pub fn rational(q: Rational) -> Self {
        Self { coeff: q, radicand: 1 }
    }

    /// √r for r ≥ 0; `None` for negative r.
    pub fn sqrt_of(r: Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Self::rational(Rational::zero()));
        }
        // √(p/q) = √(pq)/q
        let (p, q) = (*r.numer(), *r.denom());
        let (s, n) = squarefree_split(p * q);
        Some(Self {
            coeff: Rational::new(s, q),
            radicand: n,
        })
    }

    pub fn neg(self) -> Self {
        Self {
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }

    pub fn scale(self, k: Rational) -> Self {
        Self {
            coeff: self.coeff * k,
            radicand: self.radicand,
        }
    }

    pub fn to_f64(self) -> f64 {
        ratio_to_f64(self.coeff) * (self.radicand as f64).sqrt()
    }
}

pub fn ratio_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 1 || self.coeff.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        let (p, q) = (*self.coeff.numer(), *self.coeff.denom());
        if p < 0 {
            write!(f, "-")?;
        }
        match p.abs() {
            1 => write!(f, "sqrt({})", self.radicand)?,
            a => write!(f, "{a}*sqrt({})", self.radicand)?,
        }
        if q != 1 {
            write!(f, "/{q}")?;
        }
        Ok(())
    }
}

/// A finite sum Σ qₖ√nₖ with distinct squarefree radicands.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QuadNum {
    terms: Vec<Surd>,
}

impl QuadNum {
    pub fn from_surd(s: Surd) -> Self {
        let mut q = Self::default();
        q.add_term(s);
        q
    }

    fn add_term(&mut self, s: Surd) {
        if s.coeff.is_zero() {
            return;
        }
        if let Some(t) = self.terms.iter_mut().find(|t| t.radicand == s.radicand) {
            t.coeff += s.coeff;
        } else {
            self.terms.push(s);
        }
        self.terms.retain(|t| !t.coeff.is_zero());
        self.terms.sort_by_key(|t| t.radicand);
    }

    pub fn sub(a: Surd, b: Surd) -> Self {
        let mut q = Self::from_surd(a);
        q.add_term(b.neg());
        q
    }

    /// Square roots of distinct squarefree integers are linearly independent
    /// over ℚ, so the sum is an integer iff only a rational integer part remains.
    pub fn integer_value(&self) -> Option<i64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.radicand == 1 && t.coeff.is_integer() => Some(t.coeff.to_integer()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|t| t.to_f64()).sum()
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.to_string();
            if i > 0 && !s.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses `p/q`, an integer, or a plain decimal such as `0.5` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("`{text}` is not a rational number"));
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 15 {
        return Err(bad());
    }
    let digits: i64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let r = Rational::new(digits, 10i64.pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn sqrt_simplifies() {
        assert_eq!(Surd::sqrt_of(r(25, 16)).unwrap(), Surd::rational(r(5, 4)));
        let s = Surd::sqrt_of(r(2, 3)).unwrap();
        assert_eq!((s.coeff, s.radicand), (r(1, 3), 6));
        assert_eq!(s.to_string(), "sqrt(6)/3");
        assert_eq!(Surd::sqrt_of(r(13, 16)).unwrap().to_string(), "sqrt(13)/4");
        assert_eq!(Surd::sqrt_of(r(24, 1)).unwrap().to_string(), "2*sqrt(6)");
        assert!(Surd::sqrt_of(r(-1, 2)).is_none());
    }

    #[test]
    fn integrality() {
        let a = Surd::rational(r(1, 4));
        let b = Surd::rational(r(5, 4));
        assert_eq!(QuadNum::sub(a, b).integer_value(), Some(-1));
        let c = Surd::sqrt_of(r(6, 1)).unwrap();
        assert_eq!(QuadNum::sub(c, c).integer_value(), Some(0));
        assert_eq!(QuadNum::sub(c, c.neg()).to_string(), "2*sqrt(6)");
        assert_eq!(QuadNum::sub(Surd::rational(r(0, 1)), c).integer_value(), None);
        assert_eq!(QuadNum::sub(a, a.neg()).integer_value(), None);
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("2/3").unwrap(), r(2, 3));
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), r(-5, 4));
        assert_eq!(parse_rational("2").unwrap(), r(2, 1));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
