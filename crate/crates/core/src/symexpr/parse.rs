//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := base ('^' exponent)?
//! base   := number | symbol | '(' expr ')' | func '(' expr ')'
//! func   := exp | sin | cos | sinh | cosh | sqrt
//! exponent := ['-'] integer | ['-'] decimal | '(' ['-'] integer ['/' integer] ')'
//! ```
//!
//! Exponents must be integers or half-integers. Reserved symbols are
//! `t`, `u`, `u1`, `m`, `c`, `k`; other identifiers must be declared.

use num_traits::One;

use super::rational::{half, is_half_integer, parse_rational, Rational};
use super::{Expr, Func, Param, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown symbol `{name}` at offset {offset}")]
    UnknownSymbol { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownSymbol { offset, .. } => *offset,
        }
    }
}

/// Parse with only the reserved symbols.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, &[])
}

/// Parse allowing the extra symbol names in `declared`.
pub fn parse_with(text: &str, declared: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        declared,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    declared: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, ch: u8) -> bool {
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: u8) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", ch as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let negate_first = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        terms.push(if negate_first { negate(first) } else { first });
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                let t = self.term()?;
                terms.push(negate(t));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::add_raw(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.factor()?);
            } else if self.eat(b'/') {
                let f = self.factor()?;
                factors.push(Expr::pow_raw(f, -Rational::one()));
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::mul_raw(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.eat(b'^') {
            let r = self.exponent()?;
            Ok(Expr::pow_raw(base, r))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let r = if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.number_literal()?;
            let r = if self.eat(b'/') {
                let d = self.number_literal()?;
                if d == Rational::from_integer(0.into()) {
                    return Err(self.error("zero denominator in exponent"));
                }
                n / d
            } else {
                n
            };
            self.expect(b')')?;
            if neg {
                -r
            } else {
                r
            }
        } else {
            let neg = self.eat(b'-');
            let n = self.number_literal()?;
            if neg {
                -n
            } else {
                n
            }
        };
        if !is_half_integer(&r) {
            self.pos = start;
            return Err(self.error("exponent must be an integer or half-integer"));
        }
        Ok(r)
    }

    fn number_literal(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        parse_rational(text).ok_or(ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(ch) if ch.is_ascii_digit() || ch == b'.' => Ok(Expr::num(self.number_literal()?)),
            Some(ch) if ch.is_ascii_alphabetic() || ch == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let func = match name {
                    "exp" => Some(Some(Func::Exp)),
                    "sin" => Some(Some(Func::Sin)),
                    "cos" => Some(Some(Func::Cos)),
                    "sinh" => Some(Some(Func::Sinh)),
                    "cosh" => Some(Some(Func::Cosh)),
                    "sqrt" => Some(None),
                    _ => None,
                };
                if let Some(func) = func {
                    self.expect(b'(')?;
                    let arg = self.expr()?;
                    self.expect(b')')?;
                    return Ok(match func {
                        Some(f) => Expr::call_raw(f, arg),
                        None => Expr::pow_raw(arg, half()),
                    });
                }
                let sym = match name {
                    "t" => Symbol::T,
                    "u" => Symbol::U,
                    "u1" => Symbol::U1,
                    "m" => Symbol::Param(Param::M),
                    "c" => Symbol::Param(Param::C),
                    "k" => Symbol::Param(Param::K),
                    other if self.declared.contains(&other) => Symbol::user(other),
                    other => {
                        return Err(ParseError::UnknownSymbol {
                            offset: start,
                            name: other.to_string(),
                        })
                    }
                };
                Ok(Expr::sym(sym))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

fn negate(e: Expr) -> Expr {
    Expr::mul_raw(vec![Expr::int(-1), e])
}
