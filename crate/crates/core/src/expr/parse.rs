//! Recursive-descent parser for the expression surface grammar:
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" exponent)?
//! exponent:= ["-"] INT | "(" ["-"] INT ")"
//! atom    := INT | IDENT | "exp" "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Rationals are
//! written as quotients of integers (`3/4`). The argument of `exp` must be a
//! rational linear combination of coordinates with no constant term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Expr, ExprError, Symbol};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal,
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            _ if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && chars[i] == '.' {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push((Tok::Decimal, start));
                    continue;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse::<BigInt>().expect("digit run");
                out.push((Tok::Int(n), start));
                continue;
            }
            _ if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' | '\u{2212}' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '^' => out.push((Tok::Caret, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            _ => {
                return Err(ExprError::Syntax {
                    pos: start,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    coords: &'a [Symbol],
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ExprError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        let n = self.exponent().map_err(|e| match e {
            ExprError::Syntax { .. } => ExprError::NonIntegerExponent { pos },
            other => other,
        })?;
        base.pow(n)
    }

    fn exponent(&mut self) -> Result<i32, ExprError> {
        let pos = self.pos();
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let n = match self.bump() {
            (Tok::Int(n), _) => n,
            _ => return Err(ExprError::NonIntegerExponent { pos }),
        };
        if paren && *self.peek() != Tok::RParen {
            return Err(ExprError::NonIntegerExponent { pos });
        }
        if paren {
            self.bump();
        }
        let n = if negative { -n } else { n };
        i32::try_from(n).map_err(|_| ExprError::NonIntegerExponent { pos })
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::rational(BigRational::from_integer(n))),
            Tok::Decimal => Err(ExprError::Syntax {
                pos,
                message: "decimal literals are not supported; write p/q".into(),
            }),
            Tok::Ident(name) if name == "exp" => {
                self.expect(Tok::LParen, "`(` after exp")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                exp_of_linear(&arg).ok_or(ExprError::NonLinearExp { pos })
            }
            Tok::Ident(name) => self
                .coords
                .iter()
                .find(|s| s.name() == name)
                .map(Expr::symbol)
                .ok_or(ExprError::UnknownSymbol { name, pos }),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::End => Err(ExprError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            }),
            other => Err(ExprError::Syntax {
                pos,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }
}

fn exp_of_linear(arg: &Expr) -> Option<Expr> {
    if !arg.denominator().is_one() {
        return None;
    }
    let mut form = Vec::new();
    for (k, c) in arg.numerator().terms() {
        if !k.exp.is_empty() || k.degree() != 1 {
            return None;
        }
        let (s, _) = k.mono.iter().next()?;
        form.push((s.clone(), c.clone()));
    }
    debug_assert!(form.iter().all(|(_, c)| !c.is_zero()));
    Some(Expr::exp_linear(&form))
}

/// Parses `text` with the given coordinate symbols in scope.
pub fn parse(text: &str, coords: &[Symbol]) -> Result<Expr, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        coords,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}
