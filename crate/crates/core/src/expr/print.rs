use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Key, Poly};

fn write_rational(out: &mut String, q: &BigRational) {
    if q.is_integer() {
        write!(out, "{}", q.numer()).unwrap();
    } else {
        write!(out, "{}/{}", q.numer(), q.denom()).unwrap();
    }
}

fn write_linear(out: &mut String, key: &Key) {
    for (i, (s, a)) in key.exp.iter().enumerate() {
        let mag = a.abs();
        if i == 0 {
            if a.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if a.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            write_rational(out, &mag);
            out.push('*');
        }
        out.push_str(s.name());
    }
}

/// Factors of a key without the coefficient, e.g. `x^2*y*exp(-z)`.
fn key_factors(key: &Key) -> Vec<String> {
    let mut factors: Vec<String> = key
        .mono
        .iter()
        .map(|(s, p)| {
            if *p == 1 {
                s.name().to_string()
            } else {
                format!("{}^{}", s.name(), p)
            }
        })
        .collect();
    if !key.exp.is_empty() {
        let mut arg = String::new();
        write_linear(&mut arg, key);
        factors.push(format!("exp({arg})"));
    }
    factors
}

/// Term text with its sign folded in front.
fn term_text(key: &Key, coef: &BigRational) -> String {
    let factors = key_factors(key);
    let mut out = String::new();
    if factors.is_empty() {
        write_rational(&mut out, coef);
        return out;
    }
    if coef.is_negative() {
        out.push('-');
    }
    let mag = coef.abs();
    if !mag.is_one() {
        write_rational(&mut out, &mag);
        out.push('*');
    }
    out.push_str(&factors.join("*"));
    out
}

pub(super) fn poly_text(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (k, c)) in p.terms().iter().rev().enumerate() {
        let t = term_text(k, c);
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    out
}

fn is_bare_factor(p: &Poly) -> bool {
    match p.leading() {
        Some((k, c)) if p.len() == 1 && c.is_one() => k.exp.is_empty() && k.mono.len() == 1,
        _ => false,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_text(self.numerator());
        if self.denominator().is_one() {
            return f.write_str(&num);
        }
        if self.numerator().len() > 1 {
            write!(f, "({num})")?;
        } else {
            f.write_str(&num)?;
        }
        let den = poly_text(self.denominator());
        if is_bare_factor(self.denominator()) {
            write!(f, "/{den}")
        } else {
            write!(f, "/({den})")
        }
    }
}
