//! Exact scalar fields on a coordinate chart.
//!
//! An [`Expr`] is a quotient of two term sums over the basis
//! `x^m * exp(a·x)` (natural powers, rational linear exponents) with rational
//! coefficients. The class is closed under the field operations and under
//! partial differentiation, and zero-testing is exact: a canonical fraction is
//! zero iff its numerator has no terms.
//!
//! Canonical form: common monomial factors are cancelled, an exact quotient is
//! taken when the denominator divides the numerator, and the denominator is
//! scaled so that its leading term in the graded division order has
//! coefficient one and no exponential factor. Cancellation beyond that is
//! best effort.

mod parse;
mod poly;
mod print;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use parse::parse;
pub use poly::{Key, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },
    #[error("exponent at position {pos} is not an integer")]
    NonIntegerExponent { pos: usize },
    #[error("exp argument at position {pos} is not a rational linear combination of coordinates")]
    NonLinearExp { pos: usize },
    #[error("invalid coordinate name `{0}`")]
    InvalidSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coordinate `{0}` has no value at the evaluation point")]
    Unassigned(String),
    #[error("denominator vanishes at the evaluation point")]
    ZeroDenominator,
}

/// Coordinate symbol. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, ExprError> {
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
            && name != "exp";
        if valid {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(ExprError::InvalidSymbol(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Builds a symbol list from names; fails on invalid or repeated names.
pub fn symbols(names: &[&str]) -> Result<Vec<Symbol>, ExprError> {
    let mut seen = BTreeSet::new();
    names
        .iter()
        .map(|n| {
            let s = Symbol::new(n)?;
            if !seen.insert(s.clone()) {
                return Err(ExprError::InvalidSymbol(n.to_string()));
            }
            Ok(s)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Expr::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Expr::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(q: BigRational) -> Self {
        Expr {
            num: Poly::constant(q),
            den: Poly::one(),
        }
    }

    pub fn symbol(s: &Symbol) -> Self {
        Expr {
            num: Poly::symbol(s),
            den: Poly::one(),
        }
    }

    /// `exp(Σ a_s · s)`.
    pub fn exp_linear(form: &[(Symbol, BigRational)]) -> Self {
        let mut key = Key::one();
        for (s, a) in form {
            let e = key.exp.entry(s.clone()).or_insert_with(BigRational::zero);
            *e += a;
            if e.is_zero() {
                key.exp.remove(s);
            }
        }
        Expr {
            num: Poly::term(key, BigRational::one()),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        Expr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn fraction(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// Exact equality as field elements.
    pub fn equivalent(&self, other: &Expr) -> bool {
        (self - other).is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    pub fn is_constant(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.num.symbols().chain(self.den.symbols()).cloned().collect()
    }

    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(normalize(self.num.mul(&rhs.den), self.den.mul(&rhs.num)))
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        Expr::one().checked_div(self)
    }

    pub fn pow(&self, n: i32) -> Result<Expr, ExprError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Expr::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &BigRational) -> Expr {
        if q.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.mul_term(&Key::one(), q),
            den: self.den.clone(),
        }
    }

    pub fn differentiate(&self, v: &Symbol) -> Expr {
        if self.den.is_one() {
            return Expr::from_poly(self.num.derivative(v));
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return normalize(dn, self.den.clone());
        }
        normalize(
            dn.mul(&self.den).sub(&self.num.mul(&dd)),
            self.den.mul(&self.den),
        )
    }

    pub fn evaluate(&self, point: &BTreeMap<Symbol, f64>) -> Result<f64, ExprError> {
        let d = eval_poly(&self.den, point)?;
        if d == 0.0 {
            return Err(ExprError::ZeroDenominator);
        }
        Ok(eval_poly(&self.num, point)? / d)
    }

    /// Convenience wrapper keyed by coordinate name.
    pub fn evaluate_named(&self, point: &[(&str, f64)]) -> Result<f64, ExprError> {
        let map = point
            .iter()
            .map(|(n, v)| Ok((Symbol::new(n)?, *v)))
            .collect::<Result<BTreeMap<_, _>, ExprError>>()?;
        self.evaluate(&map)
    }
}

fn eval_poly(p: &Poly, point: &BTreeMap<Symbol, f64>) -> Result<f64, ExprError> {
    let lookup = |s: &Symbol| {
        point
            .get(s)
            .copied()
            .ok_or_else(|| ExprError::Unassigned(s.name().to_string()))
    };
    let mut total = 0.0;
    for (k, c) in p.terms() {
        let mut v = c.to_f64().unwrap_or(f64::NAN);
        for (s, pw) in &k.mono {
            v *= lookup(s)?.powi(*pw as i32);
        }
        let mut arg = 0.0;
        for (s, a) in &k.exp {
            arg += a.to_f64().unwrap_or(f64::NAN) * lookup(s)?;
        }
        if !k.exp.is_empty() {
            v *= arg.exp();
        }
        total += v;
    }
    Ok(total)
}

fn normalize(mut num: Poly, mut den: Poly) -> Expr {
    debug_assert!(!den.is_zero());
    if num.is_zero() {
        return Expr::zero();
    }
    let mut content = den.monomial_content();
    if !content.is_empty() {
        let num_content = num.monomial_content();
        content.retain(|s, p| match num_content.get(s) {
            Some(q) => {
                *p = (*p).min(*q);
                true
            }
            None => false,
        });
        if !content.is_empty() {
            let key = Key {
                exp: BTreeMap::new(),
                mono: content,
            };
            num = divide_by_key(&num, &key);
            den = divide_by_key(&den, &key);
        }
    }
    if den.len() > 1 {
        if let Some(q) = num.exact_div(&den) {
            return Expr {
                num: q,
                den: Poly::one(),
            };
        }
    }
    let (lk, lc) = den.division_leading().expect("nonzero denominator");
    let shift = Key {
        exp: lk.exp.iter().map(|(s, a)| (s.clone(), -a.clone())).collect(),
        mono: BTreeMap::new(),
    };
    let inv = lc.recip();
    Expr {
        num: num.mul_term(&shift, &inv),
        den: den.mul_term(&shift, &inv),
    }
}

fn divide_by_key(p: &Poly, key: &Key) -> Poly {
    let mut out = Poly::zero();
    for (k, c) in p.terms() {
        out.add_term(k.div(key).expect("content divides every term"), c.clone());
    }
    out
}

fn add_fractions(a: &Expr, b: &Expr, negate_b: bool) -> Expr {
    let bnum = if negate_b { b.num.neg() } else { b.num.clone() };
    if a.den == b.den {
        return normalize(a.num.add(&bnum), a.den.clone());
    }
    if let Some(q) = a.den.exact_div(&b.den) {
        return normalize(a.num.add(&bnum.mul(&q)), a.den.clone());
    }
    if let Some(q) = b.den.exact_div(&a.den) {
        return normalize(a.num.mul(&q).add(&bnum), b.den.clone());
    }
    normalize(
        a.num.mul(&b.den).add(&bnum.mul(&a.den)),
        a.den.mul(&b.den),
    )
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        add_fractions(self, rhs, false)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        if rhs.is_zero() {
            return self.clone();
        }
        add_fractions(self, rhs, true)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.mul(&rhs.num));
        }
        normalize(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, e| &acc + &e)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::from_int(n)
    }
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::rational(q)
    }
}
