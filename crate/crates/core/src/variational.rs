//! Total derivatives, the Euler–Lagrange operator and first prolongations
//! of point vector fields.

use std::collections::BTreeMap;
use std::fmt;

use crate::symexpr::{Assignment, EvalError, Expr, Params, Symbol, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VariationalError {
    #[error("degenerate Lagrangian: d^2L/du1^2 vanishes identically")]
    Degenerate,
    #[error("Euler-Lagrange expression is not linear in u'': {0}")]
    NonLinear(String),
    #[error("vector field component depends on u1: {0}")]
    VelocityDependent(String),
}

/// A first-order Lagrangian `L(t, u, u1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lagrangian {
    expr: Expr,
}

impl Lagrangian {
    pub fn new(expr: Expr) -> Lagrangian {
        Lagrangian {
            expr: expr.canonical(),
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn with_params(&self, params: &Params) -> Lagrangian {
        Lagrangian::new(params.apply(&self.expr))
    }

    pub fn scaled(&self, factor: &Expr) -> Lagrangian {
        Lagrangian::new(self.expr.mul(factor))
    }

    /// `dL/du1`.
    pub fn momentum(&self) -> Expr {
        self.expr.diff(Var::U1)
    }
}

impl fmt::Display for Lagrangian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.expr.fmt(f)
    }
}

/// `u'' = w(t, u, u1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquationOfMotion {
    pub w: Expr,
}

impl EquationOfMotion {
    pub fn new(w: Expr) -> EquationOfMotion {
        EquationOfMotion { w: w.canonical() }
    }

    /// `u'' = -(c/m) u1 - (k/m) u` with symbolic parameters.
    pub fn damped_oscillator() -> EquationOfMotion {
        EquationOfMotion::new(
            crate::symexpr::parse("-(c/m)*u1 - (k/m)*u").expect("static expression"),
        )
    }

    pub fn with_params(&self, params: &Params) -> EquationOfMotion {
        EquationOfMotion::new(params.apply(&self.w))
    }

    pub fn accel(&self, t: f64, u: f64, u1: f64) -> Result<f64, EvalError> {
        let env: Assignment = [(Symbol::T, t), (Symbol::U, u), (Symbol::U1, u1)]
            .into_iter()
            .collect();
        self.w.eval(&env)
    }
}

/// `xi(t,u) d/dt + eta(t,u) d/du`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    pub xi: Expr,
    pub eta: Expr,
}

impl VectorField {
    pub fn new(xi: Expr, eta: Expr) -> Result<VectorField, VariationalError> {
        for c in [&xi, &eta] {
            if c.canonical().depends_on(&Symbol::U1) {
                return Err(VariationalError::VelocityDependent(c.to_string()));
            }
        }
        Ok(VectorField {
            xi: xi.canonical(),
            eta: eta.canonical(),
        })
    }

    pub fn parse(xi: &str, eta: &str) -> Result<VectorField, Box<dyn std::error::Error>> {
        Ok(VectorField::new(
            crate::symexpr::parse(xi)?,
            crate::symexpr::parse(eta)?,
        )?)
    }

    pub fn zero() -> VectorField {
        VectorField {
            xi: Expr::zero(),
            eta: Expr::zero(),
        }
    }

    pub fn is_literal_zero(&self) -> bool {
        self.xi.is_literal_zero() && self.eta.is_literal_zero()
    }

    /// `Z(f) = xi f_t + eta f_u`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::sum([self.xi.mul(&f.diff(Var::T)), self.eta.mul(&f.diff(Var::U))])
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: self.xi.add(&other.xi),
            eta: self.eta.add(&other.eta),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: self.xi.sub(&other.xi),
            eta: self.eta.sub(&other.eta),
        }
    }

    pub fn scale(&self, factor: &Expr) -> VectorField {
        VectorField {
            xi: self.xi.mul(factor),
            eta: self.eta.mul(factor),
        }
    }

    pub fn with_params(&self, params: &Params) -> VectorField {
        VectorField {
            xi: params.apply(&self.xi),
            eta: params.apply(&self.eta),
        }
    }

    pub fn eval(&self, t: f64, u: f64) -> Result<(f64, f64), EvalError> {
        let env: Assignment = [(Symbol::T, t), (Symbol::U, u)].into_iter().collect();
        Ok((self.xi.eval(&env)?, self.eta.eval(&env)?))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*D_t + ({})*D_u", self.xi, self.eta)
    }
}

/// A vector field together with its first-prolongation coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub eta1: Expr,
}

impl ProlongedField {
    /// `Z^[1](f) = xi f_t + eta f_u + eta1 f_u1`.
    pub fn apply(&self, f: &Expr) -> Expr {
        Expr::sum([
            self.base.xi.mul(&f.diff(Var::T)),
            self.base.eta.mul(&f.diff(Var::U)),
            self.eta1.mul(&f.diff(Var::U1)),
        ])
    }
}

/// `D e = e_t + u1 e_u + u'' e_u1`. Without an equation of motion `u''`
/// stays as the formal symbol `u2`; with one it is replaced by `w`.
pub fn total_derivative(e: &Expr, eom: Option<&EquationOfMotion>) -> Expr {
    let accel = match eom {
        Some(eom) => eom.w.clone(),
        None => Expr::u2(),
    };
    Expr::sum([
        e.diff(Var::T),
        Expr::u1().mul(&e.diff(Var::U)),
        accel.mul(&e.diff(Var::U1)),
    ])
}

/// `D(dL/du1) - dL/du`, still containing the formal `u2`.
pub fn euler_lagrange_expression(l: &Lagrangian) -> Expr {
    total_derivative(&l.momentum(), None).sub(&l.expr.diff(Var::U))
}

/// Solves the Euler–Lagrange equation for `u''`.
pub fn euler_lagrange(l: &Lagrangian) -> Result<EquationOfMotion, VariationalError> {
    let el = euler_lagrange_expression(l);
    let coeffs = el
        .polynomial_coefficients(&[Symbol::U2])
        .ok_or_else(|| VariationalError::NonLinear(el.to_string()))?;
    if coeffs.keys().any(|k| k[0] > 1) {
        return Err(VariationalError::NonLinear(el.to_string()));
    }
    let lead = coeffs
        .get(&vec![1])
        .cloned()
        .ok_or(VariationalError::Degenerate)?;
    if crate::symexpr::is_identically_zero(&lead) {
        return Err(VariationalError::Degenerate);
    }
    let rest = coeffs.get(&vec![0]).cloned().unwrap_or_else(Expr::zero);
    Ok(EquationOfMotion::new(rest.neg().div(&lead)))
}

/// First prolongation coefficient
/// `eta1 = eta_t + eta_u u1 - xi_t u1 - xi_u u1^2`.
pub fn prolong(z: &VectorField) -> ProlongedField {
    let u1 = Expr::u1();
    let eta1 = Expr::sum([
        z.eta.diff(Var::T),
        z.eta.diff(Var::U).mul(&u1),
        z.xi.diff(Var::T).mul(&u1).neg(),
        z.xi.diff(Var::U).mul(&u1.powi(2)).neg(),
    ]);
    ProlongedField {
        base: z.clone(),
        eta1,
    }
}

fn integrate_u(e: &Expr) -> Option<Expr> {
    let c = e.polynomial_coefficients(&[Symbol::U])?;
    Some(Expr::sum(c.into_iter().map(|(k, v)| {
        let n = k[0] as i64 + 1;
        v.mul(&Expr::u().powi(n)).mul(&Expr::frac(1, n))
    })))
}

/// `F(t, u)` with `D(F) = r` and `F(0, 0) = 0`. Requires `r` affine in `u1`
/// with a coefficient polynomial in `u`, and a `t`-remainder in the class
/// handled by [`Expr::integrate_t`].
pub fn invert_total_derivative(r: &Expr) -> Option<Expr> {
    let c = r.polynomial_coefficients(&[Symbol::U1])?;
    if c.keys().any(|k| k[0] > 1) {
        return None;
    }
    let a = c.get(&vec![0]).cloned().unwrap_or_else(Expr::zero);
    let f_u = c.get(&vec![1]).cloned().unwrap_or_else(Expr::zero);
    let f0 = integrate_u(&f_u)?;
    let rem = a.sub(&f0.diff(Var::T));
    if !crate::symexpr::is_identically_zero(&rem.diff(Var::U)) {
        return None;
    }
    let rem = rem.subs(&Symbol::U, &Expr::zero());
    let f = f0.add(&rem.integrate_t()?);
    let at_origin = f.subs(&Symbol::T, &Expr::zero()).subs(&Symbol::U, &Expr::zero());
    let f = f.sub(&at_origin);
    crate::symexpr::is_identically_zero(&total_derivative(&f, None).sub(r)).then_some(f)
}

/// Replace the formal `u2` by `w`.
pub fn on_shell(e: &Expr, eom: &EquationOfMotion) -> Expr {
    let table: BTreeMap<Symbol, Expr> = [(Symbol::U2, eom.w.clone())].into_iter().collect();
    e.substitute(&table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{is_identically_zero, parse, Rational};

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

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&Expr::u(), None), Expr::u1());
        let eom = EquationOfMotion::damped_oscillator();
        assert_eq!(
            total_derivative(&Expr::u1(), Some(&eom)),
            p("-(c/m)*u1 - (k/m)*u").canonical()
        );
        let i1 = p("-exp(c*t/m)*(m*u1^2 + c*u*u1 + k*u^2)");
        assert!(total_derivative(&i1, Some(&eom)).is_literal_zero());
    }

    #[test]
    fn free_particle_has_zero_acceleration() {
        let eom = euler_lagrange(&Lagrangian::new(p("u1^2/2"))).unwrap();
        assert_eq!(eom.w, Expr::zero());
    }

    #[test]
    fn bateman_and_new_lagrangian_give_the_damped_oscillator() {
        let expected = EquationOfMotion::damped_oscillator();
        assert_eq!(euler_lagrange(&bateman()).unwrap(), expected);
        assert_eq!(euler_lagrange(&new_form()).unwrap(), expected);
    }

    #[test]
    fn degenerate_lagrangian_is_rejected() {
        let l = Lagrangian::new(p("u*u1 - u^2"));
        assert_eq!(euler_lagrange(&l), Err(VariationalError::Degenerate));
    }

    #[test]
    fn euler_lagrange_is_scale_invariant() {
        for q in [Rational::new(3.into(), 7.into()), Rational::from_integer((-2).into())] {
            let scaled = Lagrangian::new(bateman().expr().scale(&q));
            assert_eq!(euler_lagrange(&scaled).unwrap(), euler_lagrange(&bateman()).unwrap());
        }
    }

    #[test]
    fn prolongation_examples() {
        assert_eq!(prolong(&VectorField::parse("1", "0").unwrap()).eta1, Expr::zero());
        assert_eq!(prolong(&VectorField::parse("0", "u").unwrap()).eta1, Expr::u1());
    }

    #[test]
    fn prolongation_of_x2_matches_hand_expansion() {
        // X2 at (m,c,k) = (1,1,1): xi = sin(sqrt(3) t),
        // eta = (sqrt(3)/2 cos(sqrt(3) t) - 1/2 sin(sqrt(3) t)) u.
        let z = VectorField::parse(
            "sin(sqrt(3)*t)",
            "(sqrt(3)/2*cos(sqrt(3)*t) - 1/2*sin(sqrt(3)*t))*u",
        )
        .unwrap();
        // eta_t = (-3/2 sin - sqrt(3)/2 cos) u; eta_u = sqrt(3)/2 cos - 1/2 sin;
        // xi_t = sqrt(3) cos; xi_u = 0.
        let hand = p("(-3/2*sin(sqrt(3)*t) - sqrt(3)/2*cos(sqrt(3)*t))*u \
                      + (sqrt(3)/2*cos(sqrt(3)*t) - 1/2*sin(sqrt(3)*t))*u1 \
                      - sqrt(3)*cos(sqrt(3)*t)*u1");
        assert_eq!(prolong(&z).eta1, hand.canonical());
    }

    #[test]
    fn prolongation_is_linear() {
        let z1 = VectorField::parse("t^2", "u*exp(t)").unwrap();
        let z2 = VectorField::parse("sin(t)*u", "u^2").unwrap();
        let a = Expr::frac(3, 2);
        let b = Expr::int(-5);
        let combo = z1.scale(&a).add(&z2.scale(&b));
        let lhs = prolong(&combo).eta1;
        let rhs = Expr::sum([prolong(&z1).eta1.mul(&a), prolong(&z2).eta1.mul(&b)]);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn on_shell_substitution_commutes_with_total_derivative() {
        let eom = EquationOfMotion::damped_oscillator();
        for e in [
            p("exp(c*t/m)*u1^2"),
            p("sin(t)*u*u1 + t^2*u1"),
            p("cosh(t)*(u1 + u)^2"),
        ] {
            let formal = on_shell(&total_derivative(&e, None), &eom);
            let direct = total_derivative(&e, Some(&eom));
            assert!(is_identically_zero(&formal.sub(&direct)));
        }
    }

    #[test]
    fn velocity_dependent_fields_are_rejected() {
        assert!(VectorField::new(Expr::u1(), Expr::zero()).is_err());
    }
}
