//! Expression kernel.
//!
//! [`Expr`] is an immutable tree over the variables `t`, `u`, `u1` (the
//! velocity `u'`), the oscillator parameters `m`, `c`, `k`, declared user
//! symbols and exact rational constants. Every algebraic operation returns a
//! canonical tree: a flat, sorted sum of terms, each a rational coefficient
//! times a monomial with at most one exponential and at most one circular and
//! one hyperbolic factor. Products of trigonometric factors are rewritten as
//! sums, so identities such as `sin(t)^2 + cos(t)^2 - 1` collapse to a
//! literal zero. Whatever the canonical form cannot decide is left to the
//! randomized zero test in [`zero`].

mod eval;
mod integrate;
mod parse;
mod poly;
mod print;
mod rational;
pub mod zero;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed};

pub use eval::{Assignment, EvalError};
pub use parse::{parse, parse_with, ParseError};
pub use rational::{parse_rational, Rational};
pub use zero::{is_identically_zero, is_zero, is_zero_with, ZeroTest, ZeroTestError};

pub(crate) use poly::{Atom, Monomial, Poly};

/// Oscillator parameter symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    C,
    K,
    M,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::C => "c",
            Param::K => "k",
            Param::M => "m",
        }
    }
}

/// Unknown coefficient functions of `t` used by the Noether ansatz
/// `xi = alpha`, `eta = beta*u + gamma`, `B = delta*u^2 + epsilon*u + zeta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Epsilon,
    Zeta,
}

impl Unknown {
    pub fn name(self) -> &'static str {
        match self {
            Unknown::Alpha => "alpha",
            Unknown::Beta => "beta",
            Unknown::Gamma => "gamma",
            Unknown::Delta => "delta",
            Unknown::Epsilon => "epsilon",
            Unknown::Zeta => "zeta",
        }
    }

    pub const ALL: [Unknown; 6] = [
        Unknown::Alpha,
        Unknown::Beta,
        Unknown::Gamma,
        Unknown::Delta,
        Unknown::Epsilon,
        Unknown::Zeta,
    ];
}

/// A leaf symbol. The declaration order is the canonical factor order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Param(Param),
    User(Arc<str>),
    T,
    U,
    U1,
    /// Formal second derivative `u''`; only appears in intermediate results
    /// of the variational layer.
    U2,
    /// `d^n f / dt^n` for an ansatz function `f`.
    Unknown(Unknown, u8),
}

impl Symbol {
    pub fn user(name: &str) -> Symbol {
        Symbol::User(Arc::from(name))
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Symbol::T | Symbol::U | Symbol::U1 | Symbol::U2)
    }

    pub fn name(&self) -> String {
        match self {
            Symbol::Param(p) => p.name().to_string(),
            Symbol::User(s) => s.to_string(),
            Symbol::T => "t".into(),
            Symbol::U => "u".into(),
            Symbol::U1 => "u1".into(),
            Symbol::U2 => "u2".into(),
            Symbol::Unknown(f, 0) => f.name().into(),
            Symbol::Unknown(f, n) => format!("{}_{}", f.name(), n),
        }
    }
}

/// Variables with respect to which expressions are differentiated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    U,
    U1,
    U2,
}

impl Var {
    pub fn symbol(self) -> Symbol {
        match self {
            Var::T => Symbol::T,
            Var::U => Symbol::U,
            Var::U1 => Symbol::U1,
            Var::U2 => Symbol::U2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(Rational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    /// Integer or half-integer power; `sqrt(x)` is `Pow(x, 1/2)`.
    Pow(Expr, Rational),
    Call(Func, Expr),
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn num(q: Rational) -> Expr {
        Expr::from_node(Node::Num(q))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(Rational::from_integer(n.into()))
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::num(Rational::new(n.into(), d.into()))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn sym(s: Symbol) -> Expr {
        Expr::from_node(Node::Sym(s))
    }

    pub fn t() -> Expr {
        Expr::sym(Symbol::T)
    }

    pub fn u() -> Expr {
        Expr::sym(Symbol::U)
    }

    pub fn u1() -> Expr {
        Expr::sym(Symbol::U1)
    }

    pub fn u2() -> Expr {
        Expr::sym(Symbol::U2)
    }

    pub fn param(p: Param) -> Expr {
        Expr::sym(Symbol::Param(p))
    }

    pub fn unknown(f: Unknown, order: u8) -> Expr {
        Expr::sym(Symbol::Unknown(f, order))
    }

    /// Raw sum node; no simplification.
    pub fn add_raw(terms: Vec<Expr>) -> Expr {
        Expr::from_node(Node::Add(terms))
    }

    /// Raw product node; no simplification.
    pub fn mul_raw(factors: Vec<Expr>) -> Expr {
        Expr::from_node(Node::Mul(factors))
    }

    pub fn pow_raw(base: Expr, exponent: Rational) -> Expr {
        Expr::from_node(Node::Pow(base, exponent))
    }

    pub fn call_raw(f: Func, arg: Expr) -> Expr {
        Expr::from_node(Node::Call(f, arg))
    }

    pub fn add(&self, other: &Expr) -> Expr {
        Expr::add_raw(vec![self.clone(), other.clone()]).canonical()
    }

    pub fn sub(&self, other: &Expr) -> Expr {
        Expr::add_raw(vec![self.clone(), other.neg_raw()]).canonical()
    }

    pub fn mul(&self, other: &Expr) -> Expr {
        Expr::mul_raw(vec![self.clone(), other.clone()]).canonical()
    }

    /// `self / other`. Single-term divisors are inverted exactly; anything
    /// else becomes an opaque reciprocal.
    pub fn div(&self, other: &Expr) -> Expr {
        Expr::mul_raw(vec![self.clone(), Expr::pow_raw(other.clone(), -Rational::one())])
            .canonical()
    }

    pub fn neg(&self) -> Expr {
        self.neg_raw().canonical()
    }

    fn neg_raw(&self) -> Expr {
        Expr::mul_raw(vec![Expr::int(-1), self.clone()])
    }

    pub fn scale(&self, q: &Rational) -> Expr {
        Expr::mul_raw(vec![Expr::num(q.clone()), self.clone()]).canonical()
    }

    pub fn pow(&self, exponent: Rational) -> Expr {
        Expr::pow_raw(self.clone(), exponent).canonical()
    }

    pub fn powi(&self, n: i64) -> Expr {
        self.pow(Rational::from_integer(n.into()))
    }

    pub fn sqrt(&self) -> Expr {
        self.pow(Rational::new(1.into(), 2.into()))
    }

    pub fn exp(&self) -> Expr {
        Expr::call_raw(Func::Exp, self.clone()).canonical()
    }

    pub fn apply(&self, f: Func) -> Expr {
        Expr::call_raw(f, self.clone()).canonical()
    }

    /// Sum of many expressions, canonicalized once.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        Expr::add_raw(items.into_iter().collect()).canonical()
    }

    /// Product of many expressions, canonicalized once.
    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        Expr::mul_raw(items.into_iter().collect()).canonical()
    }

    pub(crate) fn to_poly(&self) -> Poly {
        match self.node() {
            Node::Num(q) => Poly::constant(q.clone()),
            Node::Sym(s) => Poly::symbol(s.clone()),
            Node::Add(terms) => {
                let mut acc = Poly::zero();
                for term in terms {
                    acc = acc.add(&term.to_poly());
                }
                acc
            }
            Node::Mul(factors) => {
                let mut acc = Poly::one();
                for factor in factors {
                    if acc.is_zero() {
                        break;
                    }
                    acc = acc.mul(&factor.to_poly());
                }
                acc
            }
            Node::Pow(base, r) => Poly::pow(base.to_poly(), r),
            Node::Call(f, arg) => Poly::call(*f, arg.to_poly()),
        }
    }

    pub(crate) fn from_poly(p: &Poly) -> Expr {
        p.to_expr()
    }

    /// Canonical form. Idempotent.
    pub fn canonical(&self) -> Expr {
        Expr::from_poly(&self.to_poly())
    }

    /// True when the canonical form is literally `0`.
    pub fn is_literal_zero(&self) -> bool {
        self.to_poly().is_zero()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.to_poly().as_constant()
    }

    /// Exact partial derivative, canonicalized. Ansatz unknowns are
    /// functions of `t`, parameters and user symbols are constants.
    pub fn diff(&self, v: Var) -> Expr {
        Expr::from_poly(&self.to_poly().diff(&v.symbol()))
    }

    /// Simultaneous substitution followed by canonicalization.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Expr>) -> Expr {
        self.substitute_raw(&|s| bindings.get(s).cloned()).canonical()
    }

    /// Substitute a single symbol.
    pub fn subs(&self, s: &Symbol, value: &Expr) -> Expr {
        self.substitute_raw(&|x| (x == s).then(|| value.clone()))
            .canonical()
    }

    /// Replace every derivative `f^(n)` of an ansatz unknown by
    /// `d^n/dt^n replacement`.
    pub fn substitute_unknown(&self, f: Unknown, replacement: &Expr) -> Expr {
        let mut derivatives: Vec<Expr> = vec![replacement.canonical()];
        let mut cache = |n: u8| -> Expr {
            while derivatives.len() <= n as usize {
                let next = derivatives.last().expect("nonempty").diff(Var::T);
                derivatives.push(next);
            }
            derivatives[n as usize].clone()
        };
        let mut needed: Vec<u8> = self
            .symbols()
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Unknown(g, n) if g == f => Some(n),
                _ => None,
            })
            .collect();
        needed.sort_unstable();
        let table: BTreeMap<Symbol, Expr> = needed
            .into_iter()
            .map(|n| (Symbol::Unknown(f, n), cache(n)))
            .collect();
        self.substitute(&table)
    }

    fn substitute_raw(&self, lookup: &dyn Fn(&Symbol) -> Option<Expr>) -> Expr {
        match self.node() {
            Node::Num(_) => self.clone(),
            Node::Sym(s) => lookup(s).unwrap_or_else(|| self.clone()),
            Node::Add(terms) => {
                Expr::add_raw(terms.iter().map(|e| e.substitute_raw(lookup)).collect())
            }
            Node::Mul(factors) => {
                Expr::mul_raw(factors.iter().map(|e| e.substitute_raw(lookup)).collect())
            }
            Node::Pow(base, r) => Expr::pow_raw(base.substitute_raw(lookup), r.clone()),
            Node::Call(f, arg) => Expr::call_raw(*f, arg.substitute_raw(lookup)),
        }
    }

    /// Every symbol occurring anywhere in the tree.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut std::collections::BTreeSet<Symbol>) {
        match self.node() {
            Node::Num(_) => {}
            Node::Sym(s) => {
                out.insert(s.clone());
            }
            Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| x.collect_symbols(out)),
            Node::Pow(b, _) => b.collect_symbols(out),
            Node::Call(_, a) => a.collect_symbols(out),
        }
    }

    pub fn depends_on(&self, s: &Symbol) -> bool {
        self.symbols().contains(s)
    }

    /// Terms of the canonical sum (a single term for non-sums).
    pub fn terms(&self) -> Vec<Expr> {
        let canon = self.canonical();
        match canon.node() {
            Node::Add(ts) => ts.clone(),
            _ if canon.is_literal_zero() => Vec::new(),
            _ => vec![canon],
        }
    }

    /// Coefficients of the polynomial dependence on `vars`: maps each
    /// exponent vector to its coefficient. Returns `None` when some variable
    /// occurs non-polynomially (inside a function, a radical, or with a
    /// negative or fractional exponent).
    pub fn polynomial_coefficients(&self, vars: &[Symbol]) -> Option<BTreeMap<Vec<u32>, Expr>> {
        let poly = self.to_poly();
        let mut grouped: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (mono, coef) in poly.terms() {
            let mut exps = vec![0u32; vars.len()];
            let mut rest: Monomial = Vec::new();
            for (atom, e) in mono {
                match atom {
                    Atom::Sym(s) if vars.contains(s) => {
                        if !e.is_integer() || e.is_negative() {
                            return None;
                        }
                        let idx = vars.iter().position(|v| v == s).expect("present");
                        exps[idx] = e.to_integer().try_into().ok()?;
                    }
                    other => {
                        if vars.iter().any(|v| other.contains_symbol(v)) {
                            return None;
                        }
                        rest.push((other.clone(), e.clone()));
                    }
                }
            }
            let entry = grouped.entry(exps).or_insert_with(Poly::zero);
            *entry = entry.add(&Poly::from_term(rest, coef.clone()));
        }
        Some(
            grouped
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| (k, p.to_expr()))
                .collect(),
        )
    }

    /// Rewrite `sinh`/`cosh` as exponentials.
    pub fn hyperbolic_to_exp(&self) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(xs) => Expr::add_raw(xs.iter().map(|x| x.hyperbolic_to_exp()).collect()),
            Node::Mul(xs) => Expr::mul_raw(xs.iter().map(|x| x.hyperbolic_to_exp()).collect()),
            Node::Pow(b, r) => Expr::pow_raw(b.hyperbolic_to_exp(), r.clone()),
            Node::Call(f, a) => {
                let a = a.hyperbolic_to_exp();
                let sign = match f {
                    Func::Sinh => -1,
                    Func::Cosh => 1,
                    _ => return Expr::call_raw(*f, a),
                };
                Expr::mul_raw(vec![
                    Expr::frac(1, 2),
                    Expr::add_raw(vec![
                        Expr::call_raw(Func::Exp, a.clone()),
                        Expr::mul_raw(vec![
                            Expr::int(sign),
                            Expr::call_raw(Func::Exp, Expr::mul_raw(vec![Expr::int(-1), a])),
                        ]),
                    ]),
                ])
            }
        }
        .canonical()
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(q: Rational) -> Expr {
        Expr::num(q)
    }
}

impl FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse(s)
    }
}

/// Physical parameters of the oscillator `m u'' + c u' + k u = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub m: Rational,
    pub c: Rational,
    pub k: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(Rational),
    #[error("damping coefficient must be non-negative, got {0}")]
    NegativeDamping(Rational),
    #[error("spring constant must be positive, got {0}")]
    NonPositiveSpring(Rational),
    #[error("invalid rational {0:?}")]
    BadRational(String),
}

impl Params {
    pub fn new(m: Rational, c: Rational, k: Rational) -> Result<Params, ParamsError> {
        if !m.is_positive() {
            return Err(ParamsError::NonPositiveMass(m));
        }
        if c.is_negative() {
            return Err(ParamsError::NegativeDamping(c));
        }
        if !k.is_positive() {
            return Err(ParamsError::NonPositiveSpring(k));
        }
        Ok(Params { m, c, k })
    }

    /// Integer triple convenience constructor; panics on invalid input.
    pub fn ints(m: i64, c: i64, k: i64) -> Params {
        Params::new(
            BigRational::from_integer(m.into()),
            BigRational::from_integer(c.into()),
            BigRational::from_integer(k.into()),
        )
        .expect("valid parameter triple")
    }

    pub fn parse(m: &str, c: &str, k: &str) -> Result<Params, ParamsError> {
        let p = |s: &str| parse_rational(s).ok_or_else(|| ParamsError::BadRational(s.to_string()));
        Params::new(p(m)?, p(c)?, p(k)?)
    }

    pub fn bindings(&self) -> BTreeMap<Symbol, Expr> {
        [
            (Symbol::Param(Param::M), Expr::num(self.m.clone())),
            (Symbol::Param(Param::C), Expr::num(self.c.clone())),
            (Symbol::Param(Param::K), Expr::num(self.k.clone())),
        ]
        .into_iter()
        .collect()
    }

    /// Substitute these parameter values into `e`.
    pub fn apply(&self, e: &Expr) -> Expr {
        e.substitute(&self.bindings())
    }

    /// `c^2 - 4 k m`.
    pub fn discriminant(&self) -> Rational {
        &self.c * &self.c - Rational::from_integer(4.into()) * &self.k * &self.m
    }

    pub fn as_f64(&self) -> (f64, f64, f64) {
        (
            rational::to_f64(&self.m),
            rational::to_f64(&self.c),
            rational::to_f64(&self.k),
        )
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m, c, k) = ({}, {}, {})", self.m, self.c, self.k)
    }
}
