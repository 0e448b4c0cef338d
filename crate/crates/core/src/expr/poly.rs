//! Term sums over the polynomial-exponential basis.
//!
//! A basis element is `x^m * exp(a·x)`: a monomial with natural powers times a
//! single exponential of a rational linear form. Distinct basis elements are
//! linearly independent over the rationals, so a sum is zero exactly when it
//! has no terms.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Symbol;

/// Basis key: exp-atom first, then monomial. The derived `Ord` is the fixed
/// order used for canonical normalization and printing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Key {
    pub exp: BTreeMap<Symbol, BigRational>,
    pub mono: BTreeMap<Symbol, u32>,
}

impl Key {
    pub fn one() -> Self {
        Key::default()
    }

    pub fn is_one(&self) -> bool {
        self.exp.is_empty() && self.mono.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.mono.values().sum()
    }

    pub fn mul(&self, other: &Key) -> Key {
        let mut out = self.clone();
        for (s, p) in &other.mono {
            *out.mono.entry(s.clone()).or_insert(0) += p;
        }
        for (s, a) in &other.exp {
            let e = out.exp.entry(s.clone()).or_insert_with(BigRational::zero);
            *e += a;
            if e.is_zero() {
                out.exp.remove(s);
            }
        }
        out
    }

    /// `self / other`, provided the monomial part divides.
    pub fn div(&self, other: &Key) -> Option<Key> {
        let mut out = self.clone();
        for (s, p) in &other.mono {
            let have = out.mono.get(s).copied().unwrap_or(0);
            if have < *p {
                return None;
            }
            if have == *p {
                out.mono.remove(s);
            } else {
                out.mono.insert(s.clone(), have - p);
            }
        }
        for (s, a) in &other.exp {
            let e = out.exp.entry(s.clone()).or_insert_with(BigRational::zero);
            *e -= a;
            if e.is_zero() {
                out.exp.remove(s);
            }
        }
        Some(out)
    }

    /// Multiplicatively compatible total order: graded lex on the monomial,
    /// then lex on the exponent vector (missing entries read as zero).
    pub fn division_cmp(&self, other: &Key) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| dense_cmp(&self.mono, &other.mono, &0))
            .then_with(|| dense_cmp(&self.exp, &other.exp, &BigRational::zero()))
    }
}

fn dense_cmp<V: Ord>(a: &BTreeMap<Symbol, V>, b: &BTreeMap<Symbol, V>, zero: &V) -> Ordering {
    let mut ia = a.iter().peekable();
    let mut ib = b.iter().peekable();
    loop {
        let ord = match (ia.peek(), ib.peek()) {
            (None, None) => return Ordering::Equal,
            (Some((sa, va)), Some((sb, vb))) => match sa.cmp(sb) {
                Ordering::Equal => {
                    let o = va.cmp(vb);
                    ia.next();
                    ib.next();
                    o
                }
                Ordering::Less => {
                    let o = (*va).cmp(zero);
                    ia.next();
                    o
                }
                Ordering::Greater => {
                    let o = zero.cmp(vb);
                    ib.next();
                    o
                }
            },
            (Some((_, va)), None) => {
                let o = (*va).cmp(zero);
                ia.next();
                o
            }
            (None, Some((_, vb))) => {
                let o = zero.cmp(vb);
                ib.next();
                o
            }
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Key, BigRational>,
}

const DIVISION_STEP_LIMIT: usize = 256;

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Poly::term(Key::one(), c)
    }

    pub fn term(key: Key, coef: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(key, coef);
        p
    }

    pub fn symbol(s: &Symbol) -> Self {
        let mut key = Key::one();
        key.mono.insert(s.clone(), 1);
        Poly::term(key, BigRational::one())
    }

    pub fn terms(&self) -> &BTreeMap<Key, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(k, c)| k.is_one() && c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next()?;
                k.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, key: Key, coef: BigRational) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(c) => {
                *c += coef;
                if c.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, coef);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.mul(kb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, key: &Key, coef: &BigRational) -> Poly {
        if coef.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(key), c * coef))
                .collect(),
        }
    }

    pub fn derivative(&self, v: &Symbol) -> Poly {
        let mut out = Poly::zero();
        for (k, c) in &self.terms {
            if let Some(&p) = k.mono.get(v) {
                let mut nk = k.clone();
                if p == 1 {
                    nk.mono.remove(v);
                } else {
                    nk.mono.insert(v.clone(), p - 1);
                }
                out.add_term(nk, c * BigRational::from_integer(p.into()));
            }
            if let Some(a) = k.exp.get(v) {
                out.add_term(k.clone(), c * a);
            }
        }
        out
    }

    /// Largest term under the canonical key order.
    pub fn leading(&self) -> Option<(&Key, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn division_leading(&self) -> Option<(&Key, &BigRational)> {
        self.terms.iter().max_by(|a, b| a.0.division_cmp(b.0))
    }

    /// Monomial part dividing every term (exp-atoms are units, ignored).
    pub fn monomial_content(&self) -> BTreeMap<Symbol, u32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return BTreeMap::new();
        };
        let mut content = first.mono.clone();
        for k in it {
            content.retain(|s, p| match k.mono.get(s) {
                Some(q) => {
                    *p = (*p).min(*q);
                    true
                }
                None => false,
            });
            if content.is_empty() {
                break;
            }
        }
        content
    }

    /// Exact quotient `self / divisor` if one exists and is found within the
    /// step limit; `None` otherwise.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (dk, dc) = divisor.division_leading()?;
        let (dk, dc) = (dk.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        for _ in 0..DIVISION_STEP_LIMIT {
            let Some((rk, rc)) = rem.division_leading() else {
                return Some(quot);
            };
            let qk = rk.div(&dk)?;
            let qc = rc / &dc;
            rem = rem.sub(&divisor.mul_term(&qk, &qc));
            quot.add_term(qk, qc);
        }
        None
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.terms
            .keys()
            .flat_map(|k| k.mono.keys().chain(k.exp.keys()))
    }

    pub fn first_coefficient_negative(&self) -> bool {
        self.terms
            .iter()
            .next_back()
            .is_some_and(|(_, c)| c.is_negative())
    }
}
