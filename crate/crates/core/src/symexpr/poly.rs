//! Canonical sum-of-monomials representation behind [`Expr::canonical`].
//!
//! A [`Poly`] maps monomials to nonzero rational coefficients. A monomial is
//! a sorted list of `(atom, exponent)` pairs with distinct atoms. Invariants:
//!
//! * exponents lie in `Z/2` and are never zero;
//! * at most one `Exp` atom, at most one circular and one hyperbolic
//!   function atom per monomial, each with exponent 1;
//! * function arguments are canonical, nonzero, and for `sin`/`cos`/`sinh`/
//!   `cosh` their last (greatest) term has a positive coefficient;
//! * a `Power` atom carries a base that could not be distributed. Its
//!   exponent is `1/2` or negative, and the base has unit positive content.
//!
//! [`Expr::canonical`]: super::Expr::canonical

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{content, half, is_half_integer, sqrt_parts, Rational};
use super::{Expr, Func, Param, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Atom {
    Sym(Symbol),
    Power(Poly),
    Exp(Poly),
    Fun(Func, Poly),
}

pub(crate) type Monomial = Vec<(Atom, Rational)>;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

fn is_circular(f: Func) -> bool {
    matches!(f, Func::Sin | Func::Cos)
}

impl Atom {
    pub(crate) fn contains_symbol(&self, s: &Symbol) -> bool {
        match self {
            Atom::Sym(x) => x == s,
            Atom::Power(p) | Atom::Exp(p) | Atom::Fun(_, p) => p.contains_symbol(s),
        }
    }

    fn to_expr(&self, e: &Rational) -> Expr {
        let base = match self {
            Atom::Sym(s) => Expr::sym(s.clone()),
            Atom::Power(p) => p.to_expr(),
            Atom::Exp(p) => Expr::call_raw(Func::Exp, p.to_expr()),
            Atom::Fun(f, p) => Expr::call_raw(*f, p.to_expr()),
        };
        if e.is_one() {
            base
        } else {
            Expr::pow_raw(base, e.clone())
        }
    }
}

impl Poly {
    pub(crate) fn zero() -> Poly {
        Poly::default()
    }

    pub(crate) fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub(crate) fn constant(q: Rational) -> Poly {
        Poly::from_term(Vec::new(), q)
    }

    pub(crate) fn symbol(s: Symbol) -> Poly {
        Poly::from_term(vec![(Atom::Sym(s), Rational::one())], Rational::one())
    }

    pub(crate) fn from_term(mono: Monomial, coef: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(mono, coef);
        }
        Poly { terms }
    }

    fn from_atom(atom: Atom, e: Rational) -> Poly {
        if e.is_zero() {
            return Poly::one();
        }
        Poly::from_term(vec![(atom, e)], Rational::one())
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, q) = self.terms.iter().next().expect("one term");
                m.is_empty().then(|| q.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn contains_symbol(&self, s: &Symbol) -> bool {
        self.terms
            .keys()
            .any(|m| m.iter().any(|(a, _)| a.contains_symbol(s)))
    }

    fn insert(&mut self, mono: Monomial, coef: Rational) {
        use std::collections::btree_map::Entry;
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coef;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(coef);
            }
        }
    }

    pub(crate) fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.insert(m.clone(), q.clone());
        }
        out
    }

    pub(crate) fn neg(&self) -> Poly {
        self.scale(&-Rational::one())
    }

    pub(crate) fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub(crate) fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * q))
                .collect(),
        }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                let prod = mul_mono(ma, mb);
                let q = qa * qb;
                for (m, c) in prod.terms {
                    out.insert(m, c * &q);
                }
            }
        }
        out
    }

    fn pow_int(&self, n: u64) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `base^r` for `r` in `Z/2`.
    pub(crate) fn pow(base: Poly, r: &Rational) -> Poly {
        if r.is_integer() && !r.is_negative() {
            return base.pow_int(r.to_integer().to_u64().expect("small exponent"));
        }
        if base.is_zero() {
            return if r.is_positive() {
                Poly::zero()
            } else {
                Poly::from_atom(Atom::Power(base), r.clone())
            };
        }
        if let Some((mono, q)) = base.single_term() {
            if let Some(p) = distribute_pow(mono, q, r) {
                return p;
            }
        }
        // Normalize the content of the base before wrapping it.
        let mut g = content(base.terms.values());
        if r.is_integer() {
            let lead = base.terms.values().next_back().expect("nonzero");
            if lead.is_negative() {
                g = -g;
            }
        }
        let normalized = base.scale(&g.recip());
        rational_pow(&g, r).mul(&opaque_pow(normalized, r))
    }

    /// `f(arg)` with zero-argument and parity normalization.
    pub(crate) fn call(f: Func, arg: Poly) -> Poly {
        if arg.is_zero() {
            return match f {
                Func::Sin | Func::Sinh => Poly::zero(),
                Func::Exp | Func::Cos | Func::Cosh => Poly::one(),
            };
        }
        if f == Func::Exp {
            return Poly::from_atom(Atom::Exp(arg), Rational::one());
        }
        let lead = arg.terms.values().next_back().expect("nonzero");
        if lead.is_negative() {
            let sign = match f {
                Func::Sin | Func::Sinh => -Rational::one(),
                _ => Rational::one(),
            };
            Poly::from_atom(Atom::Fun(f, arg.neg()), Rational::one()).scale(&sign)
        } else {
            Poly::from_atom(Atom::Fun(f, arg), Rational::one())
        }
    }

    pub(crate) fn diff(&self, s: &Symbol) -> Poly {
        let mut out = Poly::zero();
        for (mono, coef) in &self.terms {
            for i in 0..mono.len() {
                let (atom, e) = &mono[i];
                let d = diff_atom(atom, e, s);
                if d.is_zero() {
                    continue;
                }
                let rest: Monomial = mono
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| x.clone())
                    .collect();
                let piece = Poly::from_term(rest, coef.clone()).mul(&d);
                out = out.add(&piece);
            }
        }
        out
    }

    pub(crate) fn to_expr(&self) -> Expr {
        if self.terms.is_empty() {
            return Expr::zero();
        }
        let mut terms: Vec<Expr> = self
            .terms
            .iter()
            .map(|(mono, coef)| {
                let mut factors: Vec<Expr> = Vec::with_capacity(mono.len() + 1);
                if !coef.is_one() || mono.is_empty() {
                    factors.push(Expr::num(coef.clone()));
                }
                factors.extend(mono.iter().map(|(a, e)| a.to_expr(e)));
                if factors.len() == 1 {
                    factors.pop().expect("one factor")
                } else {
                    Expr::mul_raw(factors)
                }
            })
            .collect();
        if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::add_raw(terms)
        }
    }
}

/// Exact `q^r` for rational `q` and `r` in `Z/2`; negative bases under a
/// half power stay symbolic.
fn rational_pow(q: &Rational, r: &Rational) -> Poly {
    debug_assert!(is_half_integer(r));
    let n = r.floor().to_integer();
    let frac = r - Rational::from_integer(n.clone());
    let n = n.to_i64().expect("small exponent");
    let int_part = if n >= 0 {
        num_traits::pow(q.clone(), n as usize)
    } else {
        num_traits::pow(q.recip(), (-n) as usize)
    };
    let mut out = Poly::constant(int_part);
    if !frac.is_zero() {
        if q.is_positive() {
            let (outside, inside) = sqrt_parts(q);
            out = out.scale(&outside);
            if inside != BigInt::one() {
                out = out.mul(&Poly::from_atom(
                    Atom::Power(Poly::constant(Rational::from_integer(inside))),
                    half(),
                ));
            }
        } else {
            out = out.mul(&Poly::from_atom(Atom::Power(Poly::constant(q.clone())), half()));
        }
    }
    out
}

fn opaque_pow(base: Poly, r: &Rational) -> Poly {
    if r.is_positive() {
        let n = r.floor();
        let frac = r - &n;
        let expanded = base.pow_int(n.to_integer().to_u64().expect("small exponent"));
        if frac.is_zero() {
            expanded
        } else {
            expanded.mul(&Poly::from_atom(Atom::Power(base), frac))
        }
    } else {
        Poly::from_atom(Atom::Power(base), r.clone())
    }
}

/// Tries `(q * mono)^r` factor by factor.
fn distribute_pow(mono: &Monomial, q: &Rational, r: &Rational) -> Option<Poly> {
    let integral = r.is_integer();
    if !integral && q.is_negative() {
        return None;
    }
    let mut out = rational_pow(q, r);
    for (atom, e) in mono {
        let er = e * r;
        if !is_half_integer(&er) {
            return None;
        }
        let factor = match atom {
            Atom::Sym(s) => {
                let positive = matches!(s, Symbol::Param(Param::M | Param::K | Param::C));
                if !integral && !positive {
                    return None;
                }
                Poly::from_atom(atom.clone(), er)
            }
            Atom::Exp(arg) => Poly::call(Func::Exp, arg.scale(&er)),
            Atom::Power(b) => Poly::pow(b.clone(), &er),
            Atom::Fun(..) => {
                if !integral {
                    return None;
                }
                let single = Poly::from_atom(atom.clone(), Rational::one());
                if er.is_negative() {
                    Poly::from_atom(Atom::Power(single), er)
                } else {
                    single.pow_int(er.to_integer().to_u64()?)
                }
            }
        };
        out = out.mul(&factor);
    }
    Some(out)
}

fn product_to_sum(f: Func, a: &Poly, g: Func, b: &Poly) -> Poly {
    let sum = a.add(b);
    let diff = a.sub(b);
    let h = half();
    let (plus, minus) = (Rational::one(), -Rational::one());
    let combo = |f1: Func, x: &Poly, s1: &Rational, f2: Func, y: &Poly, s2: &Rational| {
        Poly::call(f1, x.clone())
            .scale(s1)
            .add(&Poly::call(f2, y.clone()).scale(s2))
            .scale(&h)
    };
    match (f, g) {
        (Func::Sin, Func::Sin) => combo(Func::Cos, &diff, &plus, Func::Cos, &sum, &minus),
        (Func::Cos, Func::Cos) => combo(Func::Cos, &diff, &plus, Func::Cos, &sum, &plus),
        (Func::Sin, Func::Cos) => combo(Func::Sin, &sum, &plus, Func::Sin, &diff, &plus),
        (Func::Cos, Func::Sin) => combo(Func::Sin, &sum, &plus, Func::Sin, &diff, &minus),
        (Func::Sinh, Func::Sinh) => combo(Func::Cosh, &sum, &plus, Func::Cosh, &diff, &minus),
        (Func::Cosh, Func::Cosh) => combo(Func::Cosh, &sum, &plus, Func::Cosh, &diff, &plus),
        (Func::Sinh, Func::Cosh) => combo(Func::Sinh, &sum, &plus, Func::Sinh, &diff, &plus),
        (Func::Cosh, Func::Sinh) => combo(Func::Sinh, &sum, &plus, Func::Sinh, &diff, &minus),
        _ => unreachable!("product_to_sum on mixed families"),
    }
}

fn mul_mono(a: &Monomial, b: &Monomial) -> Poly {
    let mut general: Vec<(Atom, Rational)> = Vec::new();
    let mut exp_arg: Option<Poly> = None;
    let mut circ: Vec<(Func, Poly)> = Vec::new();
    let mut hyp: Vec<(Func, Poly)> = Vec::new();
    for (atom, e) in a.iter().chain(b.iter()) {
        match atom {
            Atom::Exp(arg) => {
                debug_assert!(e.is_one());
                exp_arg = Some(match exp_arg {
                    Some(prev) => prev.add(arg),
                    None => arg.clone(),
                });
            }
            Atom::Fun(f, arg) if is_circular(*f) => circ.push((*f, arg.clone())),
            Atom::Fun(f, arg) => hyp.push((*f, arg.clone())),
            _ => general.push((atom.clone(), e.clone())),
        }
    }
    general.sort_by(|x, y| x.0.cmp(&y.0));
    let mut plain: Monomial = Vec::with_capacity(general.len() + 3);
    let mut extra: Vec<Poly> = Vec::new();
    let mut iter = general.into_iter().peekable();
    while let Some((atom, mut e)) = iter.next() {
        while iter.peek().map(|(a2, _)| a2 == &atom).unwrap_or(false) {
            e += iter.next().expect("peeked").1;
        }
        if e.is_zero() {
            continue;
        }
        match &atom {
            Atom::Power(base) if e.is_positive() => {
                let n = e.floor();
                let frac = &e - &n;
                if !n.is_zero() {
                    extra.push(base.pow_int(n.to_integer().to_u64().expect("small exponent")));
                }
                if !frac.is_zero() {
                    plain.push((atom, frac));
                }
            }
            _ => plain.push((atom, e)),
        }
    }
    if let Some(arg) = exp_arg {
        if !arg.is_zero() {
            plain.push((Atom::Exp(arg), Rational::one()));
        }
    }
    for family in [circ, hyp] {
        match family.len() {
            0 => {}
            1 => {
                let (f, arg) = family.into_iter().next().expect("one");
                plain.push((Atom::Fun(f, arg), Rational::one()));
            }
            _ => {
                let mut it = family.into_iter();
                let (f, x) = it.next().expect("two");
                let (g, y) = it.next().expect("two");
                extra.push(product_to_sum(f, &x, g, &y));
            }
        }
    }
    plain.sort_by(|x, y| x.0.cmp(&y.0));
    let mut out = Poly::from_term(plain, Rational::one());
    for p in extra {
        out = out.mul(&p);
    }
    out
}

fn diff_atom(atom: &Atom, e: &Rational, s: &Symbol) -> Poly {
    match atom {
        Atom::Sym(x) => {
            let inner = if x == s {
                Poly::one()
            } else if let (Symbol::Unknown(f, n), Symbol::T) = (x, s) {
                Poly::symbol(Symbol::Unknown(*f, n + 1))
            } else {
                return Poly::zero();
            };
            Poly::from_atom(atom.clone(), e - Rational::one())
                .scale(e)
                .mul(&inner)
        }
        Atom::Exp(arg) => {
            let d = arg.diff(s);
            if d.is_zero() {
                return Poly::zero();
            }
            Poly::from_atom(atom.clone(), Rational::one()).mul(&d)
        }
        Atom::Fun(f, arg) => {
            let d = arg.diff(s);
            if d.is_zero() {
                return Poly::zero();
            }
            let outer = match f {
                Func::Sin => Poly::call(Func::Cos, arg.clone()),
                Func::Cos => Poly::call(Func::Sin, arg.clone()).neg(),
                Func::Sinh => Poly::call(Func::Cosh, arg.clone()),
                Func::Cosh => Poly::call(Func::Sinh, arg.clone()),
                Func::Exp => unreachable!("exp is stored as Atom::Exp"),
            };
            outer.mul(&d)
        }
        Atom::Power(base) => {
            let d = base.diff(s);
            if d.is_zero() {
                return Poly::zero();
            }
            Poly::pow(base.clone(), &(e - Rational::one()))
                .scale(e)
                .mul(&d)
        }
    }
}

