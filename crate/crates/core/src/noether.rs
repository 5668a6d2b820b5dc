//! Noether point symmetries of quadratic Lagrangians.
//!
//! The determining system comes from the residual
//! `Z^[1](L) + D(xi) L - D(B)` with the ansatz `xi = alpha(t)`,
//! `eta = beta(t) u + gamma(t)`, `B = delta(t) u^2 + epsilon(t) u + zeta(t)`.
//! Collecting the monomials `u1^2, u u1, u1, u^2, u, 1` gives six ODEs. The
//! first three are algebraic in `beta`, `delta`, `epsilon`; eliminating them
//! leaves a linear ODE for `alpha`, one for `gamma`, and `zeta' = 0`. When
//! those ODEs have constant coefficients they are solved by characteristic
//! roots.

use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::symexpr::{is_identically_zero, Expr, Params, Rational, Symbol, Unknown};
use crate::variational::{
    invert_total_derivative, prolong, total_derivative, Lagrangian, VariationalError, VectorField,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NoetherError {
    #[error("Lagrangian outside the supported class: residual contains {0}")]
    AnsatzMismatch(String),
    #[error("determining system not solvable by characteristic roots: {0}")]
    Unsupported(String),
    #[error("cannot decide the damping regime: {0}")]
    Regime(String),
    #[error("solver produced a generator failing the Noether condition: {0}")]
    Internal(String),
    #[error(transparent)]
    Variational(#[from] VariationalError),
}

/// `B(t, u)` in the Noether condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaugeFunction {
    #[serde(serialize_with = "ser_expr")]
    pub b: Expr,
}

fn ser_expr<S: serde::Serializer>(e: &Expr, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

impl GaugeFunction {
    pub fn new(b: Expr) -> GaugeFunction {
        GaugeFunction { b: b.canonical() }
    }

    pub fn zero() -> GaugeFunction {
        GaugeFunction { b: Expr::zero() }
    }
}

impl fmt::Display for GaugeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.b.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherSymmetry {
    pub field: VectorField,
    pub gauge: GaugeFunction,
}

impl NoetherSymmetry {
    pub fn combine(a: &Expr, x: &NoetherSymmetry, b: &Expr, y: &NoetherSymmetry) -> NoetherSymmetry {
        NoetherSymmetry {
            field: x.field.scale(a).add(&y.field.scale(b)),
            gauge: GaugeFunction::new(x.gauge.b.mul(a).add(&y.gauge.b.mul(b))),
        }
    }
}

/// Template for `(xi, eta, B)` in terms of the unknown functions of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ansatz {
    pub xi: Expr,
    pub eta: Expr,
    pub gauge: Expr,
}

impl Default for Ansatz {
    fn default() -> Self {
        let f = |x| Expr::unknown(x, 0);
        let u = Expr::u();
        Ansatz {
            xi: f(Unknown::Alpha),
            eta: f(Unknown::Beta).mul(&u).add(&f(Unknown::Gamma)),
            gauge: Expr::sum([
                f(Unknown::Delta).mul(&u.powi(2)),
                f(Unknown::Epsilon).mul(&u),
                f(Unknown::Zeta),
            ]),
        }
    }
}

/// Exponents `(u, u1)` of the collected monomials, in output order.
pub const MONOMIALS: [(u32, u32); 6] = [(0, 2), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)];

fn monomial_name(m: (u32, u32)) -> String {
    let part = |v: &str, e: u32| match e {
        0 => None,
        1 => Some(v.to_string()),
        _ => Some(format!("{v}^{e}")),
    };
    let parts: Vec<String> = [part("u", m.0), part("u1", m.1)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// The coefficient of one monomial in the expanded residual; an ODE in the
/// ansatz unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientEquation {
    pub monomial: (u32, u32),
    pub expr: Expr,
}

impl CoefficientEquation {
    pub fn label(&self) -> String {
        monomial_name(self.monomial)
    }
}

impl fmt::Display for CoefficientEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = 0", self.label(), self.expr)
    }
}

/// `Z^[1](L) + D(xi) L - D(B)`.
pub fn noether_residual(z: &VectorField, b: &Expr, l: &Lagrangian) -> Expr {
    let pr = prolong(z);
    Expr::sum([
        pr.apply(l.expr()),
        total_derivative(&z.xi, None).mul(l.expr()),
        total_derivative(b, None).neg(),
    ])
}

/// True iff the Noether residual vanishes identically.
pub fn check_noether(z: &VectorField, b: &GaugeFunction, l: &Lagrangian) -> bool {
    is_identically_zero(&noether_residual(z, &b.b, l))
}

pub fn determining_equations(
    l: &Lagrangian,
    ansatz: &Ansatz,
) -> Result<Vec<CoefficientEquation>, NoetherError> {
    let z = VectorField::new(ansatz.xi.clone(), ansatz.eta.clone())?;
    let r = noether_residual(&z, &ansatz.gauge, l);
    let coeffs = r
        .polynomial_coefficients(&[Symbol::U, Symbol::U1])
        .ok_or_else(|| NoetherError::AnsatzMismatch("non-polynomial dependence on u, u1".into()))?;
    for (k, v) in &coeffs {
        let m = (k[0], k[1]);
        if !MONOMIALS.contains(&m) && !v.is_literal_zero() {
            return Err(NoetherError::AnsatzMismatch(monomial_name(m)));
        }
    }
    Ok(MONOMIALS
        .iter()
        .map(|&m| CoefficientEquation {
            monomial: m,
            expr: coeffs
                .get(&vec![m.0, m.1])
                .cloned()
                .unwrap_or_else(Expr::zero),
        })
        .collect())
}

fn unknown_orders(e: &Expr, f: Unknown) -> Vec<u8> {
    e.symbols()
        .into_iter()
        .filter_map(|s| match s {
            Symbol::Unknown(g, n) if g == f => Some(n),
            _ => None,
        })
        .collect()
}

/// Solve `eq = 0` for the underived unknown `f`.
fn solve_algebraic(eq: &Expr, f: Unknown) -> Result<Expr, NoetherError> {
    if unknown_orders(eq, f) != vec![0] {
        return Err(NoetherError::Unsupported(format!(
            "{} does not enter algebraically in {eq}",
            f.name()
        )));
    }
    let c = eq
        .polynomial_coefficients(&[Symbol::Unknown(f, 0)])
        .filter(|c| c.keys().all(|k| k[0] <= 1))
        .ok_or_else(|| NoetherError::Unsupported(format!("{eq} is not linear in {}", f.name())))?;
    let lead = c
        .get(&vec![1])
        .ok_or_else(|| NoetherError::Unsupported(format!("{} absent", f.name())))?;
    let rest = c.get(&vec![0]).cloned().unwrap_or_else(Expr::zero);
    Ok(rest.neg().div(lead))
}

/// Normalized constant coefficients `a_0 .. a_n` (with `a_n = 1`) of a
/// linear homogeneous ODE in `f`.
fn ode_coefficients(eq: &Expr, f: Unknown) -> Result<Vec<Rational>, NoetherError> {
    let others: Vec<Symbol> = eq
        .symbols()
        .into_iter()
        .filter(|s| matches!(s, Symbol::Unknown(g, _) if *g != f))
        .collect();
    if !others.is_empty() {
        return Err(NoetherError::Unsupported(format!("{eq} couples several unknowns")));
    }
    let order = unknown_orders(eq, f).into_iter().max().unwrap_or(0);
    let vars: Vec<Symbol> = (0..=order).map(|n| Symbol::Unknown(f, n)).collect();
    let coeffs = eq
        .polynomial_coefficients(&vars)
        .ok_or_else(|| NoetherError::Unsupported(format!("{eq} is not polynomial")))?;
    let mut raw = vec![Expr::zero(); order as usize + 1];
    for (k, v) in coeffs {
        let ones: Vec<usize> = k.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i).collect();
        if ones.len() != 1 || k[ones[0]] != 1 {
            return Err(NoetherError::Unsupported(format!("{eq} is not linear homogeneous")));
        }
        raw[ones[0]] = v;
    }
    let lead = raw[order as usize].clone();
    if lead.is_literal_zero() {
        return Ok(Vec::new());
    }
    raw.iter()
        .map(|c| {
            c.div(&lead).as_rational().ok_or_else(|| {
                NoetherError::Unsupported(format!("non-constant coefficient ratio {c} / {lead}"))
            })
        })
        .collect()
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, NoetherError> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    let mut steps = 0u64;
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
        steps += 1;
        if steps > 10_000_000 {
            return Err(NoetherError::Unsupported("coefficients too large to factor".into()));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn eval_poly(c: &[Rational], r: &Rational) -> Rational {
    c.iter().rev().fold(Rational::zero(), |acc, a| acc * r + a)
}

/// Synthetic division by `(x - r)`; coefficients lowest degree first.
fn deflate(c: &[Rational], r: &Rational) -> Vec<Rational> {
    let n = c.len() - 1;
    let mut q = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for i in (0..n).rev() {
        carry = &c[i + 1] + carry * r;
        q[i] = carry.clone();
    }
    q
}

fn rational_root(c: &[Rational]) -> Result<Option<Rational>, NoetherError> {
    if c[0].is_zero() {
        return Ok(Some(Rational::zero()));
    }
    let lcm = c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| (q * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut cands: Vec<Rational> = Vec::new();
    for p in divisors(&ints[0])? {
        for q in divisors(ints.last().expect("nonempty"))? {
            let r = Rational::new(p.clone(), q);
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    Ok(cands.into_iter().find(|r| eval_poly(c, r).is_zero()))
}

/// Roots of a characteristic polynomial.
#[derive(Clone, Debug, PartialEq)]
enum Roots {
    Rational(Rational, usize),
    /// `p ± s`, `s > 0` irrational or not.
    RealPair(Rational, Expr),
    /// `p ± i w`.
    ComplexPair(Rational, Expr),
}

fn push_rational(out: &mut Vec<Roots>, r: Rational, mult: usize) {
    for x in out.iter_mut() {
        if let Roots::Rational(q, n) = x {
            if *q == r {
                *n += mult;
                return;
            }
        }
    }
    out.push(Roots::Rational(r, mult));
}

fn characteristic_roots(coeffs: &[Rational]) -> Result<Vec<Roots>, NoetherError> {
    let mut c = coeffs.to_vec();
    let mut out = Vec::new();
    while c.len() > 3 {
        let r = rational_root(&c)?.ok_or_else(|| {
            NoetherError::Unsupported("characteristic polynomial without rational root".into())
        })?;
        c = deflate(&c, &r);
        push_rational(&mut out, r, 1);
    }
    match c.len() {
        0 | 1 => {}
        2 => push_rational(&mut out, -&c[0] / &c[1], 1),
        _ => {
            let (a, b, c0) = (&c[2], &c[1], &c[0]);
            let disc = b * b - Rational::from_integer(4.into()) * a * c0;
            let two_a = Rational::from_integer(2.into()) * a;
            let p = -b / &two_a;
            let half_width = |d: Rational| Expr::num(d).sqrt().scale(&(Rational::one() / two_a.abs()));
            if disc.is_zero() {
                push_rational(&mut out, p, 2);
            } else if disc.is_positive() {
                out.push(Roots::RealPair(p, half_width(disc)));
            } else {
                out.push(Roots::ComplexPair(p, half_width(-disc)));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Alpha,
    Gamma,
}

fn exp_rate(p: &Expr) -> Expr {
    p.mul(&Expr::t()).exp()
}

fn basis(roots: &[Roots], role: Role) -> Vec<Expr> {
    let mut out = Vec::new();
    for r in roots {
        match r {
            Roots::Rational(q, n) => {
                let e = exp_rate(&Expr::num(q.clone()));
                let mut fact = 1i64;
                for j in 0..*n {
                    if j > 0 {
                        fact *= j as i64;
                    }
                    out.push(Expr::t().powi(j as i64).mul(&e).mul(&Expr::frac(1, fact)));
                }
            }
            Roots::RealPair(p, s) => {
                let p = Expr::num(p.clone());
                let st = s.mul(&Expr::t());
                match role {
                    Role::Alpha => {
                        let e = exp_rate(&p);
                        out.push(e.mul(&st.apply(crate::symexpr::Func::Sinh)));
                        out.push(e.mul(&st.apply(crate::symexpr::Func::Cosh)));
                    }
                    Role::Gamma => {
                        out.push(exp_rate(&p.sub(s)));
                        out.push(exp_rate(&p.add(s)));
                    }
                }
            }
            Roots::ComplexPair(p, w) => {
                let e = exp_rate(&Expr::num(p.clone()));
                let wt = w.mul(&Expr::t());
                let sin = e.mul(&wt.apply(crate::symexpr::Func::Sin));
                let cos = e.mul(&wt.apply(crate::symexpr::Func::Cos));
                match role {
                    Role::Alpha => out.extend([sin, cos]),
                    Role::Gamma => out.extend([cos, sin]),
                }
            }
        }
    }
    out
}

/// Eliminated form of the determining system.
struct Reduced {
    beta: Expr,
    delta: Expr,
    epsilon: Expr,
    alpha_ode: Vec<Rational>,
    gamma_ode: Vec<Rational>,
}

fn reduce(l: &Lagrangian) -> Result<Reduced, NoetherError> {
    let mut eqs: Vec<Expr> = determining_equations(l, &Ansatz::default())?
        .into_iter()
        .map(|e| e.expr)
        .collect();
    let mut solved = Vec::new();
    for (idx, f) in [(0, Unknown::Beta), (1, Unknown::Delta), (2, Unknown::Epsilon)] {
        let sol = solve_algebraic(&eqs[idx], f)?;
        for e in eqs.iter_mut() {
            *e = e.substitute_unknown(f, &sol);
        }
        for s in solved.iter_mut() {
            let (_, x): &mut (Unknown, Expr) = s;
            *x = x.substitute_unknown(f, &sol);
        }
        solved.push((f, sol));
    }
    // zeta only enters the constant monomial; a constant zeta is absorbed by
    // the normalization B(0, 0) = 0.
    let zeta_eq = &eqs[5];
    if zeta_eq.symbols().iter().any(|s| matches!(s, Symbol::Unknown(g, _) if *g != Unknown::Zeta)) {
        return Err(NoetherError::Unsupported(format!("constant monomial couples unknowns: {zeta_eq}")));
    }
    let take = |f: Unknown| solved.iter().find(|(g, _)| *g == f).map(|(_, e)| e.clone()).expect("solved");
    Ok(Reduced {
        beta: take(Unknown::Beta),
        delta: take(Unknown::Delta),
        epsilon: take(Unknown::Epsilon),
        alpha_ode: ode_coefficients(&eqs[3], Unknown::Alpha)?,
        gamma_ode: ode_coefficients(&eqs[4], Unknown::Gamma)?,
    })
}

fn build(r: &Reduced, alpha: &Expr, gamma: &Expr) -> NoetherSymmetry {
    let inst = |e: &Expr| {
        e.substitute_unknown(Unknown::Alpha, alpha)
            .substitute_unknown(Unknown::Gamma, gamma)
            .substitute_unknown(Unknown::Zeta, &Expr::zero())
    };
    let u = Expr::u();
    let eta = inst(&r.beta).mul(&u).add(gamma);
    let b = inst(&r.delta).mul(&u.powi(2)).add(&inst(&r.epsilon).mul(&u));
    NoetherSymmetry {
        field: VectorField::new(alpha.clone(), eta).expect("ansatz fields are velocity free"),
        gauge: GaugeFunction::new(b),
    }
}

/// Time-like generators (from `alpha`) and pure `d/du` generators (from
/// `gamma`), each in characteristic-root order.
pub fn solve_symmetries(l: &Lagrangian) -> Result<(Vec<NoetherSymmetry>, Vec<NoetherSymmetry>), NoetherError> {
    let r = reduce(l)?;
    let alphas = basis(&characteristic_roots(&r.alpha_ode)?, Role::Alpha);
    let gammas = basis(&characteristic_roots(&r.gamma_ode)?, Role::Gamma);
    let zero = Expr::zero();
    let timelike: Vec<_> = alphas.iter().map(|a| build(&r, a, &zero)).collect();
    let shifts: Vec<_> = gammas.iter().map(|g| build(&r, &zero, g)).collect();
    for s in timelike.iter().chain(&shifts) {
        if !check_noether(&s.field, &s.gauge, l) {
            return Err(NoetherError::Internal(s.field.to_string()));
        }
    }
    Ok((timelike, shifts))
}

/// The five Noether symmetries of the damped oscillator Lagrangian `l`
/// at `params`. Over- and under-damped: the three time-like generators
/// first; critical: the two shifts first.
pub fn solve_dho(l: &Lagrangian, params: &Params) -> Result<Vec<NoetherSymmetry>, NoetherError> {
    let bound = l.with_params(params);
    if bound.expr().symbols().iter().any(|s| matches!(s, Symbol::Param(_) | Symbol::User(_))) {
        return Err(NoetherError::Regime(format!("free symbols remain in {bound}")));
    }
    let (timelike, shifts) = solve_symmetries(&bound)?;
    let mut out = Vec::with_capacity(5);
    if params.discriminant().is_zero() {
        out.extend(shifts);
        out.extend(timelike);
    } else {
        out.extend(timelike);
        out.extend(shifts);
    }
    Ok(out)
}

/// Finds `B(t, u)` with `D(B) = Z^[1](L) + D(xi) L` and `B(0, 0) = 0`, or
/// `None` when no such `B` exists (or lies outside the integrable class).
pub fn solve_gauge(z: &VectorField, l: &Lagrangian) -> Option<GaugeFunction> {
    let r = noether_residual(z, &Expr::zero(), l);
    let b = invert_total_derivative(&r)?;
    is_identically_zero(&noether_residual(z, &b, l)).then(|| GaugeFunction::new(b))
}

/// Deterministic sample points in `(t, u)` for rank computations.
fn sample_points() -> Vec<(f64, f64)> {
    (0..12)
        .map(|i| {
            let x = i as f64;
            (-1.1 + 0.19 * x, 0.7 - 0.23 * x + 0.05 * x * x)
        })
        .collect()
}

/// Numerical rank of a set of vector fields, from their components at
/// sampled `(t, u)` points.
pub fn field_rank(fields: &[VectorField]) -> usize {
    if fields.is_empty() {
        return 0;
    }
    let pts = sample_points();
    let mut rows = Vec::with_capacity(fields.len() * pts.len() * 2);
    for f in fields {
        for &(t, u) in &pts {
            let (x, e) = f.eval(t, u).unwrap_or((f64::NAN, f64::NAN));
            rows.push(x);
            rows.push(e);
        }
    }
    let m = DMatrix::from_row_slice(fields.len(), pts.len() * 2, &rows);
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|s| **s > 1e-9 * top.max(1e-300)).count()
}

/// Whether two families of fields span the same space.
pub fn spans_equal(a: &[VectorField], b: &[VectorField]) -> bool {
    let ra = field_rank(a);
    let rb = field_rank(b);
    let both: Vec<VectorField> = a.iter().chain(b).cloned().collect();
    ra == rb && field_rank(&both) == ra
}

/// Whether `f` lies in the span of `basis`.
pub fn in_span(basis: &[VectorField], f: &VectorField) -> bool {
    let mut all = basis.to_vec();
    all.push(f.clone());
    field_rank(&all) == field_rank(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn bateman() -> Lagrangian {
        Lagrangian::new(p("(1/2)*exp(c*t/m)*(m*u1^2 - k*u^2)"))
    }

    fn new_form() -> Lagrangian {
        Lagrangian::new(p(
            "exp(c*t/m)/(4*m^2)*(2*m^2*u1^2 + 2*c*m*u*u1 + (c^2 - 2*k*m)*u^2)",
        ))
    }

    fn fields(s: &[NoetherSymmetry]) -> Vec<VectorField> {
        s.iter().map(|x| x.field.clone()).collect()
    }

    fn vf(xi: &str, eta: &str) -> VectorField {
        VectorField::parse(xi, eta).unwrap()
    }

    #[test]
    fn bateman_determining_equations() {
        let eqs = determining_equations(&bateman(), &Ansatz::default()).unwrap();
        assert_eq!(eqs.len(), 6);
        let labels: Vec<String> = eqs.iter().map(|e| e.label()).collect();
        assert_eq!(labels, ["u1^2", "u*u1", "u1", "u^2", "u", "1"]);
        // u1^2: m e^{ct/m} (beta - alpha'/2 + c alpha/(2m))
        let expected = Expr::sum([
            Expr::unknown(Unknown::Beta, 0).mul(&p("m*exp(c*t/m)")),
            Expr::unknown(Unknown::Alpha, 1).mul(&p("-m*exp(c*t/m)/2")),
            Expr::unknown(Unknown::Alpha, 0).mul(&p("c*exp(c*t/m)/2")),
        ]);
        assert_eq!(eqs[0].expr, expected);
        assert_eq!(eqs[5].expr, Expr::unknown(Unknown::Zeta, 1).neg());
    }

    #[test]
    fn cubic_velocity_is_out_of_class() {
        let l = Lagrangian::new(p("u1^3 + u^2"));
        assert!(matches!(
            determining_equations(&l, &Ansatz::default()),
            Err(NoetherError::AnsatzMismatch(_))
        ));
    }

    #[test]
    fn free_particle_has_five_symmetries() {
        let (a, g) = solve_symmetries(&Lagrangian::new(p("u1^2/2"))).unwrap();
        let all: Vec<_> = a.iter().chain(&g).map(|s| s.field.clone()).collect();
        assert_eq!(all.len(), 5);
        assert_eq!(field_rank(&all), 5);
    }

    #[test]
    fn critical_basis_matches_closed_form() {
        let syms = solve_dho(&bateman(), &Params::ints(1, 2, 1)).unwrap();
        let expected = [
            vf("0", "exp(-t)"),
            vf("0", "t*exp(-t)"),
            vf("1", "-u"),
            vf("t", "-(1/2)*(2*t - 1)*u"),
            vf("t^2/2", "-(1/2)*(t^2 - t)*u"),
        ];
        assert_eq!(fields(&syms), expected);
    }

    #[test]
    fn undamped_first_generator_is_time_translation() {
        let syms = solve_dho(&bateman(), &Params::ints(1, 0, 1)).unwrap();
        assert_eq!(syms[0].field, vf("1", "0"));
        assert_eq!(syms[0].gauge, GaugeFunction::zero());
    }

    #[test]
    fn every_regime_gives_five_independent_noether_symmetries() {
        for params in [Params::ints(1, 3, 2), Params::ints(1, 1, 1), Params::ints(1, 2, 1), Params::ints(2, 3, 5)] {
            for l in [bateman(), new_form()] {
                let syms = solve_dho(&l, &params).unwrap();
                assert_eq!(syms.len(), 5);
                assert_eq!(field_rank(&fields(&syms)), 5, "{params}");
                let bound = l.with_params(&params);
                for s in &syms {
                    assert!(check_noether(&s.field, &s.gauge, &bound), "{params}: {}", s.field);
                    assert_eq!(
                        s.gauge.b.subs(&Symbol::T, &Expr::zero()).subs(&Symbol::U, &Expr::zero()),
                        Expr::zero()
                    );
                }
            }
        }
    }

    #[test]
    fn symmetries_form_a_linear_space() {
        let params = Params::ints(1, 3, 2);
        let l = bateman().with_params(&params);
        let syms = solve_dho(&bateman(), &params).unwrap();
        let (a, b) = (Expr::frac(2, 3), Expr::int(-5));
        for i in 0..5 {
            let j = (i + 2) % 5;
            let s = NoetherSymmetry::combine(&a, &syms[i], &b, &syms[j]);
            assert!(check_noether(&s.field, &s.gauge, &l));
        }
    }

    #[test]
    fn bateman_and_new_lagrangian_share_symmetries() {
        for params in [Params::ints(1, 3, 2), Params::ints(1, 1, 1), Params::ints(1, 2, 1)] {
            let a = solve_dho(&bateman(), &params).unwrap();
            let b = solve_dho(&new_form(), &params).unwrap();
            assert!(spans_equal(&fields(&a), &fields(&b)));
        }
    }

    #[test]
    fn undamped_case_spans_the_harmonic_oscillator_algebra() {
        let syms = solve_dho(&bateman(), &Params::ints(1, 0, 1)).unwrap();
        let classical = [
            vf("1", "0"),
            vf("sin(2*t)", "cos(2*t)*u"),
            vf("cos(2*t)", "-sin(2*t)*u"),
            vf("0", "sin(t)"),
            vf("0", "cos(t)"),
        ];
        assert!(spans_equal(&fields(&syms), &classical));
    }

    #[test]
    fn check_noether_examples() {
        let undamped = Lagrangian::new(p("u1^2/2 - u^2/2"));
        assert!(check_noether(&vf("1", "0"), &GaugeFunction::zero(), &undamped));
        assert!(!check_noether(&vf("0", "u"), &GaugeFunction::zero(), &bateman()));
    }

    #[test]
    fn gauge_recovery() {
        let undamped = Lagrangian::new(p("u1^2/2 - u^2/2"));
        assert_eq!(solve_gauge(&vf("1", "0"), &undamped), Some(GaugeFunction::zero()));
        assert_eq!(solve_gauge(&vf("0", "u"), &bateman()), None);
        let l = bateman().with_params(&Params::ints(1, 3, 2));
        let g = solve_gauge(&vf("0", "exp(-2*t)"), &l).unwrap();
        assert_eq!(g.b, p("-2*u*exp(t)").canonical());
        let syms = solve_dho(&bateman(), &Params::ints(1, 3, 2)).unwrap();
        for s in &syms {
            assert_eq!(solve_gauge(&s.field, &l).as_ref(), Some(&s.gauge));
        }
    }

    #[test]
    fn gauge_with_time_remainder() {
        // L = u1^2/2 + t u, Z = t d/du: Z^[1](L) = t^2 + u1.
        let l = Lagrangian::new(p("u1^2/2 + t*u"));
        let g = solve_gauge(&vf("0", "t"), &l).unwrap();
        assert_eq!(g.b, p("u + t^3/3").canonical());
    }

    #[test]
    fn characteristic_root_cases() {
        let q = |n: i64| Rational::from_integer(n.into());
        // r^3 - r = r (r - 1)(r + 1): rational root 0 deflated first, then a real pair
        let roots = characteristic_roots(&[q(0), q(-1), q(0), q(1)]).unwrap();
        assert_eq!(roots[0], Roots::Rational(q(0), 1));
        assert!(matches!(roots[1], Roots::RealPair(..)));
        // (r + 1)^2
        assert_eq!(characteristic_roots(&[q(1), q(2), q(1)]).unwrap(), vec![Roots::Rational(q(-1), 2)]);
        // r^3 - 2: no rational root
        assert!(characteristic_roots(&[q(-2), q(0), q(0), q(1)]).is_err());
    }
}
