//! Printing in the parser's grammar. Canonical trees print to strings that
//! parse back to the same canonical tree.

use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::rational::Rational;
use super::{Expr, Node};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

fn render(e: &Expr) -> String {
    match e.node() {
        Node::Add(terms) => {
            let mut out = String::new();
            for (i, term) in terms.iter().enumerate() {
                let (negative, body) = split_sign(term);
                match (i, negative) {
                    (0, true) => out.push('-'),
                    (0, false) => {}
                    (_, true) => out.push_str(" - "),
                    (_, false) => out.push_str(" + "),
                }
                out.push_str(&body);
            }
            out
        }
        _ => {
            let (negative, body) = split_sign(e);
            if negative {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

/// Renders a non-sum term as (is_negative, magnitude text).
fn split_sign(e: &Expr) -> (bool, String) {
    match e.node() {
        Node::Num(q) => (q.is_negative(), rational(&q.abs())),
        Node::Mul(factors) => {
            let mut coef = Rational::one();
            let mut numer: Vec<String> = Vec::new();
            let mut denom: Vec<String> = Vec::new();
            for factor in factors {
                match factor.node() {
                    Node::Num(q) => coef *= q,
                    Node::Pow(base, r) if r.is_negative() => {
                        denom.push(power(base, &-r));
                    }
                    _ => numer.push(as_factor(factor)),
                }
            }
            let negative = coef.is_negative();
            let coef = coef.abs();
            let mut out = String::new();
            let has_coef = !coef.is_one() || numer.is_empty();
            if has_coef {
                if coef.is_integer() || numer.is_empty() && denom.is_empty() {
                    out.push_str(&rational(&coef));
                } else {
                    out.push('(');
                    out.push_str(&rational(&coef));
                    out.push(')');
                }
            }
            for (i, n) in numer.iter().enumerate() {
                if i > 0 || has_coef {
                    out.push('*');
                }
                out.push_str(n);
            }
            for d in &denom {
                let _ = write!(out, "/{d}");
            }
            (negative, out)
        }
        Node::Add(_) => (false, format!("({})", render(e))),
        _ => (false, as_factor(e)),
    }
}

fn rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text for `e` used as a factor of a product.
fn as_factor(e: &Expr) -> String {
    match e.node() {
        Node::Num(q) if q.is_integer() && !q.is_negative() => rational(q),
        Node::Num(q) => format!("({})", rational(q)),
        Node::Sym(s) => s.name(),
        Node::Add(_) | Node::Mul(_) => format!("({})", render(e)),
        Node::Pow(base, r) => power(base, r),
        Node::Call(f, arg) => format!("{}({})", f.name(), render(arg)),
    }
}

fn power(base: &Expr, r: &Rational) -> String {
    let half = Rational::new(1.into(), 2.into());
    if *r == half {
        return format!("sqrt({})", render(base));
    }
    if r.is_one() {
        return as_factor(base);
    }
    let base_text = match base.node() {
        Node::Sym(_) | Node::Call(..) => as_factor(base),
        Node::Num(q) if q.is_integer() && !q.is_negative() => rational(q),
        _ => format!("({})", render(base)),
    };
    if r.is_integer() {
        format!("{base_text}^{}", r.numer())
    } else {
        format!("{base_text}^({})", rational(r))
    }
}
