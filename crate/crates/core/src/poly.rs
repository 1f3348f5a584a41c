//! Multivariate integer polynomials and the equation parser.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial; `exps[i]` is the power of `x(i+1)`.
pub type Exponents = Vec<u32>;

/// A polynomial in `x1..xp` with arbitrary-precision integer coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: impl Into<BigInt>, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    /// The variable `x_index` (1-based).
    pub fn var(index: usize, nvars: usize) -> Self {
        assert!(index >= 1 && index <= nvars, "x{index} outside 1..={nvars}");
        let mut exps = vec![0; nvars];
        exps[index - 1] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, BigInt::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; like terms
    /// are combined.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Exponents, BigInt)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Highest power of `x_index` (1-based) that occurs.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e.get(index - 1).copied().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Same polynomial viewed in `nvars >= self.nvars` variables.
    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars, "cannot drop variables");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.resize(nvars, 0);
                (e, c.clone())
            })
            .collect();
        Self { nvars, terms }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let n = self.nvars.max(other.nvars);
        (self.with_nvars(n), other.with_nvars(n))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::constant(1, self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert!(point.len() >= self.nvars, "point has too few coordinates");
        self.terms
            .iter()
            .map(|(exps, c)| {
                exps.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * x.pow(e))
            })
            .sum()
    }

    pub fn eval_i64(&self, point: &[i64]) -> BigInt {
        let point: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        self.eval(&point)
    }

    /// Replaces `x_i` by `images[i-1]`; all images must share one variable
    /// count, which becomes the result's.
    pub fn substitute(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let nvars = images.iter().map(Polynomial::nvars).max().unwrap_or(0);
        let images: Vec<Polynomial> = images.iter().map(|p| p.with_nvars(nvars)).collect();
        let mut out = Self::zero(nvars);
        for (exps, c) in &self.terms {
            let mut term = Self::constant(c.clone(), nvars);
            for (img, &e) in images.iter().zip(exps) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Fixes `x_index` to `value`, dropping that variable (the remaining
    /// variables are renumbered down).
    pub fn specialize(&self, index: usize, value: &BigInt) -> Self {
        let mut out = Self::zero(self.nvars - 1);
        for (exps, c) in &self.terms {
            let mut rest = exps.clone();
            let e = rest.remove(index - 1);
            out.add_term(rest, c * value.pow(e));
        }
        out
    }

    /// Splits into the parts with positive and with negated negative
    /// coefficients, so `self = pos - neg` and both have non-negative
    /// coefficients.
    pub fn split_signs(&self) -> (Self, Self) {
        let mut pos = Self::zero(self.nvars);
        let mut neg = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if c.is_positive() {
                pos.terms.insert(e.clone(), c.clone());
            } else {
                neg.terms.insert(e.clone(), -c);
            }
        }
        (pos, neg)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    // Multiplying monomials adds their exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (a, b) = self.aligned(rhs);
        let mut out = Polynomial::zero(a.nvars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Terms in decreasing total degree, then decreasing lexicographic
    /// exponent order, e.g. `x1^2*x2 - 3*x2 + 7`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (exps, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            match (idx, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let factors: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| match e {
                    1 => format!("x{}", i + 1),
                    _ => format!("x{}^{}", i + 1, e),
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let simple = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push((start, tok));
            i += 1;
        } else if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if b == b'x' {
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &text[start + 1..i];
            let index: usize = digits.parse().map_err(|_| Error::PolynomialSyntax {
                position: start,
                message: "expected a variable index after `x`".into(),
            })?;
            if index == 0 {
                return Err(Error::PolynomialSyntax {
                    position: start,
                    message: "variable indices start at 1".into(),
                });
            }
            out.push((start, Tok::Var(index)));
        } else {
            return Err(Error::PolynomialSyntax {
                position: start,
                message: format!("unexpected character `{}`", text[start..].chars().next().unwrap()),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    nvars: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::PolynomialSyntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(Tok::Num(n)) => {
                    let e = u32::try_from(n.clone())
                        .or_else(|_| self.error("exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.error("exponent must be a non-negative integer literal"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, self.nvars))
            }
            Some(Tok::Var(i)) => {
                self.pos += 1;
                Ok(Polynomial::var(i, self.nvars))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.error("expected a number, variable or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses `lhs` or `lhs = rhs` into the expanded polynomial `lhs - rhs`.
/// The variable count is the highest index mentioned.
pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let toks = lex(text)?;
    let nvars = toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::Var(i) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
        nvars,
    };
    let lhs = parser.expr()?;
    let poly = if parser.peek() == Some(&Tok::Eq) {
        parser.pos += 1;
        let rhs = parser.expr()?;
        &lhs - &rhs
    } else {
        lhs
    };
    if parser.pos != parser.toks.len() {
        return parser.error("unexpected trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn terms(p: &Polynomial) -> Vec<(Vec<u32>, i64)> {
        p.terms()
            .iter()
            .map(|(e, c)| (e.clone(), i64::try_from(c).unwrap()))
            .collect()
    }

    #[test]
    fn parses_equation_with_rhs() {
        let p = parse_polynomial("x1*x1 - x1 = 0").unwrap();
        assert_eq!(p.nvars(), 1);
        assert_eq!(terms(&p), vec![(vec![1], -1), (vec![2], 1)]);
    }

    #[test]
    fn expands_binomial() {
        let p = parse_polynomial("(x1+1)^2").unwrap();
        assert_eq!(terms(&p), vec![(vec![0], 1), (vec![1], 2), (vec![2], 1)]);
    }

    #[test]
    fn mixed_monomials() {
        let p = parse_polynomial("x1^2*x2 - 3*x2 + 7").unwrap();
        assert_eq!(p.nvars(), 2);
        assert_eq!(
            terms(&p),
            vec![(vec![0, 0], 7), (vec![0, 1], -3), (vec![2, 1], 1)]
        );
        assert_eq!(p.to_string(), "x1^2*x2 - 3*x2 + 7");
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = parse_polynomial("x1 + x2 - x1").unwrap();
        assert_eq!(terms(&p), vec![(vec![0, 1], 1)]);
        assert!(parse_polynomial("(x1 - x1)^3").unwrap().is_zero());
    }

    #[test]
    fn unary_minus_and_precedence() {
        let p = parse_polynomial("-x1^2 + -(2*x1 - 3)").unwrap();
        assert_eq!(p.eval_i64(&[4]), BigInt::from(-16 - 8 + 3));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_polynomial("x1 + * 2") {
            Err(Error::PolynomialSyntax { position, .. }) => assert_eq!(position, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_polynomial("x1^x2"),
            Err(Error::PolynomialSyntax { position: 3, .. })
        ));
        assert!(parse_polynomial("x1^-1").is_err());
        assert!(parse_polynomial("(x1 + 1").is_err());
        assert!(parse_polynomial("x0 + 1").is_err());
        assert!(parse_polynomial("x1 $ 2").is_err());
        assert!(parse_polynomial("x1 = x2 = x3").is_err());
    }

    #[test]
    fn substitution_shifts() {
        let p = parse_polynomial("x1 - 3").unwrap();
        let shifted = p.substitute(&[parse_polynomial("x1 - 1").unwrap()]);
        assert_eq!(shifted, parse_polynomial("x1 - 4").unwrap());
    }

    #[test]
    fn specialize_drops_variable() {
        let w = parse_polynomial("x1 - x2^2").unwrap();
        let at9 = w.specialize(1, &BigInt::from(9));
        assert_eq!(at9, parse_polynomial("9 - x1^2").unwrap());
    }

    #[test]
    fn split_signs_recombines() {
        let p = parse_polynomial("2*x1^2 - 3*x1*x2 + 5 - x2").unwrap();
        let (pos, neg) = p.split_signs();
        assert_eq!(&pos - &neg, p);
        assert!(pos.terms().values().chain(neg.terms().values()).all(|c| c.is_positive()));
    }
}
