//! Antiderivatives in `t` for sums of `K * t^n * exp(a t + b) * trig(w t + d)`
//! with `K`, `a`, `w` free of `t`.

use num_traits::{Signed, ToPrimitive};

use super::poly::{Atom, Monomial, Poly};
use super::{Expr, Func, Symbol};

/// One canonical term split as `k * t^n * f` where `f` carries all other
/// `t`-dependence and satisfies a closed integration rule.
struct Split {
    k: Expr,
    n: u32,
    exp_rate: Option<Expr>,
    exp_atom: Option<Expr>,
    trig: Option<(Func, Poly, Expr)>,
}

fn linear_rate(arg: &Poly) -> Option<Expr> {
    let rate = arg.diff(&Symbol::T);
    (!rate.contains_symbol(&Symbol::T)).then(|| rate.to_expr())
}

fn split(mono: &Monomial, coef: &super::Rational) -> Option<Split> {
    let mut rest: Monomial = Vec::new();
    let mut n = 0u32;
    let mut exp_rate = None;
    let mut exp_atom = None;
    let mut trig = None;
    for (atom, e) in mono {
        match atom {
            Atom::Sym(Symbol::T) => {
                if !e.is_integer() || e.is_negative() {
                    return None;
                }
                n = e.to_integer().to_u32()?;
            }
            Atom::Exp(arg) => {
                exp_rate = Some(linear_rate(arg)?);
                exp_atom = Some(Expr::call_raw(Func::Exp, arg.to_expr()));
            }
            Atom::Fun(f @ (Func::Sin | Func::Cos), arg) if e == &super::Rational::from_integer(1.into()) => {
                trig = Some((*f, arg.clone(), linear_rate(arg)?));
            }
            other if other.contains_symbol(&Symbol::T) => return None,
            other => rest.push((other.clone(), e.clone())),
        }
    }
    Some(Split {
        k: Poly::from_term(rest, coef.clone()).to_expr(),
        n,
        exp_rate,
        exp_atom,
        trig,
    })
}

/// `∫ t^n * E * T dt` where `E = exp(a t + b)` (or 1) and `T` a circular
/// function of `w t + d` (or 1). Integration by parts on the power of `t`.
fn integrate_family(n: u32, s: &Split) -> Expr {
    let a = s.exp_rate.clone().unwrap_or_else(Expr::zero);
    let e = s.exp_atom.clone().unwrap_or_else(Expr::one);
    let g = match &s.trig {
        None => {
            if a.is_literal_zero() {
                // ∫ t^n dt
                return Expr::t()
                    .powi(n as i64 + 1)
                    .mul(&Expr::frac(1, n as i64 + 1));
            }
            e.div(&a)
        }
        Some((f, arg, w)) => {
            let argx = arg.to_expr();
            let sin = Expr::call_raw(Func::Sin, argx.clone());
            let cos = Expr::call_raw(Func::Cos, argx);
            let denom = a.powi(2).add(&w.powi(2));
            let num = match f {
                Func::Sin => a.mul(&sin).sub(&w.mul(&cos)),
                _ => a.mul(&cos).add(&w.mul(&sin)),
            };
            e.mul(&num).div(&denom)
        }
    };
    if n == 0 {
        return g;
    }
    // ∫ t^n F = t^n G - n ∫ t^(n-1) G
    let first = Expr::t().powi(n as i64).mul(&g);
    let rest = Expr::t()
        .powi(n as i64 - 1)
        .mul(&g)
        .integrate_t()
        .expect("family closed under integration");
    first.sub(&rest.scale(&super::Rational::from_integer(n.into())))
}

impl Expr {
    /// An antiderivative in `t`, or `None` if some term lies outside the
    /// supported exponential-polynomial-trigonometric class. Hyperbolic
    /// functions are rewritten as exponentials first.
    pub fn integrate_t(&self) -> Option<Expr> {
        let poly = self.hyperbolic_to_exp().to_poly();
        let mut parts = Vec::new();
        for (mono, coef) in poly.terms() {
            let s = split(mono, coef)?;
            if matches!(&s.trig, Some((_, _, w)) if w.is_literal_zero()) {
                return None;
            }
            parts.push(s.k.mul(&integrate_family(s.n, &s)));
        }
        Some(Expr::sum(parts))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_identically_zero, parse, Var};

    fn check(s: &str) {
        let e = parse(s).unwrap();
        let f = e.integrate_t().unwrap_or_else(|| panic!("no antiderivative for {s}"));
        assert!(is_identically_zero(&f.diff(Var::T).sub(&e)), "{s} -> {f}");
    }

    #[test]
    fn integrates_exponential_polynomials() {
        check("3*t^2 + u*t");
        check("exp(2*t)");
        check("t^2*exp(-t/3)*u");
        check("exp(c*t/m)*k");
        check("sinh(t)*exp(3*t)");
        check("sin(sqrt(3)*t)");
        check("t*exp(-t/2)*cos(sqrt(3)*t/2)");
        check("t^2*sin(2*t)");
    }

    #[test]
    fn rejects_unsupported_terms() {
        assert!(parse("exp(t^2)").unwrap().integrate_t().is_none());
        assert!(parse("1/t").unwrap().integrate_t().is_none());
    }
}
