//! First integrals from Noether symmetries, fixed-step RK4 trajectories,
//! conservation drift and closed-form solutions from pairs of affine
//! integrals.

use std::fmt::{self, Write as _};

use crate::dho::Regime;
use crate::noether::{check_noether, NoetherSymmetry};
use crate::symexpr::{is_identically_zero, Assignment, EvalError, Expr, Params, Symbol, Var};
use crate::variational::{total_derivative, EquationOfMotion, Lagrangian};

/// Largest number of RK4 steps accepted by the integrators.
pub const MAX_STEPS: usize = 10_000_000;

/// Additive floor in the drift denominator.
pub const EPS_ABS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConservationError {
    #[error("not a Noether symmetry of the Lagrangian: {0}")]
    NotASymmetry(String),
    #[error("step count {0} exceeds the maximum of {MAX_STEPS}")]
    TooManySteps(f64),
    #[error("invalid integration interval or step: {0}")]
    BadInterval(String),
    #[error("integral is not affine in (u, u1): {0}")]
    NonAffine(String),
    #[error("the two integrals do not determine u (singular system)")]
    Singular,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A function of `(t, u, u1)` constant along solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstIntegral {
    pub label: String,
    pub expr: Expr,
}

impl FirstIntegral {
    pub fn new(label: impl Into<String>, expr: Expr) -> FirstIntegral {
        FirstIntegral {
            label: label.into(),
            expr: expr.canonical(),
        }
    }

    pub fn with_params(&self, params: &Params) -> FirstIntegral {
        FirstIntegral {
            label: self.label.clone(),
            expr: params.apply(&self.expr),
        }
    }

    pub fn eval(&self, t: f64, u: f64, u1: f64) -> Result<f64, EvalError> {
        self.expr.eval(&state(t, u, u1))
    }
}

impl fmt::Display for FirstIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.expr)
    }
}

fn state(t: f64, u: f64, u1: f64) -> Assignment {
    [(Symbol::T, t), (Symbol::U, u), (Symbol::U1, u1)]
        .into_iter()
        .collect()
}

/// `xi L + (eta - u1 xi) dL/du1 - B`.
pub fn first_integral(
    label: impl Into<String>,
    ns: &NoetherSymmetry,
    l: &Lagrangian,
) -> Result<FirstIntegral, ConservationError> {
    if !check_noether(&ns.field, &ns.gauge, l) {
        return Err(ConservationError::NotASymmetry(ns.field.to_string()));
    }
    let z = &ns.field;
    let expr = Expr::sum([
        z.xi.mul(l.expr()),
        z.eta.sub(&Expr::u1().mul(&z.xi)).mul(&l.momentum()),
        ns.gauge.b.neg(),
    ]);
    Ok(FirstIntegral::new(label, expr))
}

/// True iff `D(I)` vanishes on shell.
pub fn verify_symbolic(i: &FirstIntegral, eom: &EquationOfMotion) -> bool {
    is_identically_zero(&total_derivative(&i.expr, Some(eom)))
}

/// `lambda` with `a - lambda * b` constant, for integrals without free
/// parameters. `lambda` is recognized as a rational multiple of a radical
/// occurring in either integral, then confirmed exactly.
pub fn proportionality(a: &FirstIntegral, b: &FirstIntegral) -> Option<Expr> {
    let mut rads = std::collections::BTreeSet::new();
    crate::liealgebra::radicands(&a.expr, &mut rads);
    crate::liealgebra::radicands(&b.expr, &mut rads);
    let mut radicals = vec![num_bigint::BigInt::from(1)];
    radicals.extend(rads.into_iter().filter(|d| *d != num_bigint::BigInt::from(1)));
    let pts = [(0.3, 0.7, -0.4), (-0.45, 1.1, 0.9), (0.8, -0.6, 0.25)];
    let mut guess = None;
    'outer: for v in [Var::U1, Var::U, Var::T] {
        let (da, db) = (a.expr.diff(v), b.expr.diff(v));
        for &(t, u, w) in &pts {
            let env = state(t, u, w);
            let (Ok(x), Ok(y)) = (da.eval(&env), db.eval(&env)) else { continue };
            if y.abs() > 1e-8 {
                guess = Some(x / y);
                break 'outer;
            }
        }
    }
    let lambda = crate::liealgebra::recognize_radical(guess?, &radicals)?;
    if lambda.is_literal_zero() {
        return None;
    }
    let d = a.expr.sub(&lambda.mul(&b.expr));
    [Var::T, Var::U, Var::U1]
        .into_iter()
        .all(|v| is_identically_zero(&d.diff(v)))
        .then_some(lambda)
}

/// Uniformly spaced samples `(t_i, u_i, u1_i)` of a numerical solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: Option<Params>,
    pub h: f64,
    pub initial: (f64, f64, f64),
    pub samples: Vec<[f64; 3]>,
}

impl Trajectory {
    pub fn last(&self) -> [f64; 3] {
        *self.samples.last().expect("trajectory has at least one sample")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,u,u1\n");
        for [t, u, v] in &self.samples {
            writeln!(out, "{t:.16e},{u:.16e},{v:.16e}").expect("write to string");
        }
        out
    }
}

/// Number of steps and the uniform step that lands exactly on `t_end`.
fn grid(t0: f64, t_end: f64, h: f64) -> Result<(usize, f64), ConservationError> {
    if !(h.is_finite() && h > 0.0 && t0.is_finite() && t_end.is_finite() && t_end > t0) {
        return Err(ConservationError::BadInterval(format!(
            "t0 = {t0}, t_end = {t_end}, h = {h}"
        )));
    }
    let raw = (t_end - t0) / h;
    if raw > MAX_STEPS as f64 {
        return Err(ConservationError::TooManySteps(raw));
    }
    let n = ((raw - 1e-9).ceil() as usize).max(1);
    Ok((n, (t_end - t0) / n as f64))
}

fn rk4<F>(f: F, ic: (f64, f64, f64), n: usize, h: f64) -> Result<Vec<[f64; 3]>, ConservationError>
where
    F: Fn(f64, f64, f64) -> Result<f64, ConservationError>,
{
    let (t0, mut u, mut v) = ic;
    let mut out = Vec::with_capacity(n + 1);
    out.push([t0, u, v]);
    for i in 0..n {
        let t = t0 + i as f64 * h;
        let k1u = v;
        let k1v = f(t, u, v)?;
        let k2u = v + 0.5 * h * k1v;
        let k2v = f(t + 0.5 * h, u + 0.5 * h * k1u, k2u)?;
        let k3u = v + 0.5 * h * k2v;
        let k3v = f(t + 0.5 * h, u + 0.5 * h * k2u, k3u)?;
        let k4u = v + h * k3v;
        let k4v = f(t + h, u + h * k3u, k4u)?;
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        out.push([t0 + (i + 1) as f64 * h, u, v]);
    }
    Ok(out)
}

/// Classical RK4 for `(u, u1)' = (u1, -(c/m) u1 - (k/m) u)`. The step is
/// shrunk to `(t_end - t0) / n` with `n = ceil((t_end - t0) / h)` so the last
/// sample sits exactly at `t_end`.
pub fn integrate_rk4(
    params: &Params,
    ic: (f64, f64, f64),
    t_end: f64,
    h: f64,
) -> Result<Trajectory, ConservationError> {
    let (n, h) = grid(ic.0, t_end, h)?;
    let (m, c, k) = params.as_f64();
    let (a, b) = (c / m, k / m);
    let samples = rk4(|_, u, v| Ok(-a * v - b * u), ic, n, h)?;
    Ok(Trajectory {
        params: Some(params.clone()),
        h,
        initial: ic,
        samples,
    })
}

/// RK4 for a general `u'' = w(t, u, u1)` with numeric coefficients.
pub fn integrate_rk4_eom(
    eom: &EquationOfMotion,
    ic: (f64, f64, f64),
    t_end: f64,
    h: f64,
) -> Result<Trajectory, ConservationError> {
    let (n, h) = grid(ic.0, t_end, h)?;
    let samples = rk4(|t, u, v| Ok(eom.accel(t, u, v)?), ic, n, h)?;
    Ok(Trajectory {
        params: None,
        h,
        initial: ic,
        samples,
    })
}

/// Drift of an integral along a trajectory.
///
/// `relative` divides the largest deviation from the initial value by
/// `scale + EPS_ABS`, where `scale` is the largest sum of absolute values of
/// the integral's canonical terms over the samples. `relative_to_initial`
/// uses `|I(t0)| + EPS_ABS` instead, which blows up for integrals whose
/// value at `t0` happens to vanish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Drift {
    pub absolute: f64,
    pub scale: f64,
    pub relative: f64,
    pub relative_to_initial: f64,
}

pub fn conservation_drift(i: &FirstIntegral, traj: &Trajectory) -> Result<Drift, ConservationError> {
    let expr = match &traj.params {
        Some(p) => p.apply(&i.expr),
        None => i.expr.canonical(),
    };
    let terms = expr.terms();
    let mut first = None;
    let mut absolute: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for [t, u, v] in &traj.samples {
        let env = state(*t, *u, *v);
        let mut value = 0.0;
        let mut size = 0.0;
        for term in &terms {
            let x = term.eval(&env)?;
            value += x;
            size += x.abs();
        }
        scale = scale.max(size);
        let i0 = *first.get_or_insert(value);
        absolute = absolute.max((value - i0).abs());
    }
    let i0: f64 = first.unwrap_or(0.0);
    Ok(Drift {
        absolute,
        scale,
        relative: absolute / (scale + EPS_ABS),
        relative_to_initial: absolute / (i0.abs() + EPS_ABS),
    })
}

/// `u(t)` in terms of the values `K_a`, `K_b` of two integrals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormSolution {
    pub u_of_t: Expr,
    pub constants: [Symbol; 2],
    pub regime: Option<Regime>,
}

impl ClosedFormSolution {
    /// `m u'' + c u' + k u` with `u = u_of_t`.
    pub fn residual(&self) -> Expr {
        let u = &self.u_of_t;
        let d1 = u.diff(Var::T);
        let d2 = d1.diff(Var::T);
        use crate::symexpr::Param;
        Expr::sum([
            Expr::param(Param::M).mul(&d2),
            Expr::param(Param::C).mul(&d1),
            Expr::param(Param::K).mul(u),
        ])
    }

    pub fn with_params(&self, params: &Params) -> ClosedFormSolution {
        ClosedFormSolution {
            u_of_t: params.apply(&self.u_of_t),
            ..self.clone()
        }
    }

    pub fn eval(&self, t: f64, ka: f64, kb: f64) -> Result<f64, EvalError> {
        let env: Assignment = [
            (Symbol::T, t),
            (self.constants[0].clone(), ka),
            (self.constants[1].clone(), kb),
        ]
        .into_iter()
        .collect();
        self.u_of_t.eval(&env)
    }
}

impl fmt::Display for ClosedFormSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u(t) = {}", self.u_of_t)
    }
}

/// `(a_u, a_u1, a_0)` with `I = a_u u + a_u1 u1 + a_0`.
fn affine_parts(i: &FirstIntegral) -> Result<[Expr; 3], ConservationError> {
    let c = i
        .expr
        .polynomial_coefficients(&[Symbol::U, Symbol::U1])
        .filter(|c| c.keys().all(|k| k[0] + k[1] <= 1))
        .ok_or_else(|| ConservationError::NonAffine(i.to_string()))?;
    let get = |k: [u32; 2]| c.get(k.as_slice()).cloned().unwrap_or_else(Expr::zero);
    Ok([get([1, 0]), get([0, 1]), get([0, 0])])
}

/// Solves `I_a = K_a`, `I_b = K_b` for `u(t)`. The constants are the user
/// symbols named after the integrals' labels.
pub fn reconstruct_solution(
    ia: &FirstIntegral,
    ib: &FirstIntegral,
    regime: Option<Regime>,
) -> Result<ClosedFormSolution, ConservationError> {
    let [a1, a2, a0] = affine_parts(ia)?;
    let [b1, b2, b0] = affine_parts(ib)?;
    let det = a1.mul(&b2).sub(&a2.mul(&b1));
    if is_identically_zero(&det) {
        return Err(ConservationError::Singular);
    }
    let ka = Symbol::user(&ia.label);
    let kb = Symbol::user(&ib.label);
    let ra = Expr::sym(ka.clone()).sub(&a0);
    let rb = Expr::sym(kb.clone()).sub(&b0);
    let u = ra.mul(&b2).sub(&rb.mul(&a2)).div(&det);
    Ok(ClosedFormSolution {
        u_of_t: u,
        constants: [ka, kb],
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noether::{solve_dho, GaugeFunction};
    use crate::symexpr::{is_zero, parse};
    use crate::variational::{euler_lagrange, euler_lagrange_expression, VectorField};

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    fn bateman() -> Lagrangian {
        Lagrangian::new(p("(1/2)*exp(c*t/m)*(m*u1^2 - k*u^2)"))
    }

    #[test]
    fn proportional_integrals_are_recognized() {
        let a = FirstIntegral::new("a", p("-exp(3*t)*(u1^2 + 3*u*u1 + 2*u^2)"));
        let b = FirstIntegral::new("b", p("sqrt(3)*exp(3*t)*(u1^2 + 3*u*u1 + 2*u^2) + 7"));
        assert_eq!(proportionality(&a, &b), Some(p("-1/sqrt(3)").canonical()));
        let c = FirstIntegral::new("c", p("exp(3*t)*u1^2"));
        assert_eq!(proportionality(&a, &c), None);
    }

    #[test]
    fn time_translation_gives_energy() {
        let l = Lagrangian::new(p("u1^2/2 - u^2/2"));
        let ns = NoetherSymmetry {
            field: VectorField::parse("1", "0").unwrap(),
            gauge: GaugeFunction::zero(),
        };
        let i = first_integral("E", &ns, &l).unwrap();
        assert_eq!(i.expr, p("-(1/2)*(u1^2 + u^2)").canonical());
    }

    #[test]
    fn non_symmetry_is_rejected() {
        let ns = NoetherSymmetry {
            field: VectorField::parse("0", "u").unwrap(),
            gauge: GaugeFunction::zero(),
        };
        assert!(matches!(
            first_integral("I", &ns, &bateman()),
            Err(ConservationError::NotASymmetry(_))
        ));
    }

    #[test]
    fn noether_integrals_are_conserved() {
        let eom = EquationOfMotion::damped_oscillator();
        for params in [Params::ints(1, 3, 2), Params::ints(1, 1, 1), Params::ints(1, 2, 1)] {
            let l = bateman().with_params(&params);
            for (n, s) in solve_dho(&bateman(), &params).unwrap().iter().enumerate() {
                let i = first_integral(format!("I{}", n + 1), s, &l).unwrap();
                assert!(verify_symbolic(&i, &eom.with_params(&params)), "{i}");
            }
        }
        assert!(!verify_symbolic(&FirstIntegral::new("u", Expr::u()), &eom));
    }

    #[test]
    fn undamped_cosine_returns_after_one_period() {
        let tr = integrate_rk4(&Params::ints(1, 0, 1), (0.0, 1.0, 0.0), std::f64::consts::TAU, 1e-3).unwrap();
        let [t, u, _] = tr.last();
        assert_eq!(t, std::f64::consts::TAU);
        assert!((u - 1.0).abs() < 1e-9);
    }

    #[test]
    fn critical_trajectory_matches_closed_form() {
        let tr = integrate_rk4(&Params::ints(1, 2, 1), (0.0, 1.0, 0.0), 5.0, 1e-3).unwrap();
        let [_, u, _] = tr.last();
        assert!((u - 6.0 * (-5.0f64).exp()).abs() < 1e-8);
        assert_eq!(tr.samples.len(), 5001);
    }

    #[test]
    fn step_limit_and_bad_intervals() {
        let params = Params::ints(1, 1, 1);
        assert!(matches!(
            integrate_rk4(&params, (0.0, 1.0, 0.0), 1e9, 1e-3),
            Err(ConservationError::TooManySteps(_))
        ));
        assert!(integrate_rk4(&params, (0.0, 1.0, 0.0), -1.0, 1e-3).is_err());
        assert!(integrate_rk4(&params, (0.0, 1.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn drift_of_single_sample_is_zero() {
        let tr = Trajectory {
            params: None,
            h: 1e-3,
            initial: (0.0, 1.0, 0.0),
            samples: vec![[0.0, 1.0, 0.0]],
        };
        let d = conservation_drift(&FirstIntegral::new("t", Expr::t()), &tr).unwrap();
        assert_eq!(d.relative, 0.0);
    }

    #[test]
    fn overdamped_energy_like_integral_has_small_drift() {
        let i1 = FirstIntegral::new("I1", p("-exp(c*t/m)*(m*u1^2 + c*u*u1 + k*u^2)"));
        let tr = integrate_rk4(&Params::ints(1, 3, 2), (0.0, 1.0, 0.0), 10.0, 1e-3).unwrap();
        let d = conservation_drift(&i1, &tr).unwrap();
        assert!(d.relative < 1e-8, "{d:?}");
        let non = FirstIntegral::new("u", Expr::u());
        assert!(conservation_drift(&non, &tr).unwrap().relative > 0.1);
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let tr = integrate_rk4(&Params::ints(1, 1, 1), (0.0, 1.0, 0.0), 0.002, 1e-3).unwrap();
        let csv = tr.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("t,u,u1"));
        let row: Vec<f64> = lines.nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(row, tr.samples[1].to_vec());
    }

    #[test]
    fn euler_lagrange_residual_along_trajectories() {
        for (l, ic) in [
            (bateman().with_params(&Params::ints(1, 1, 1)), (0.0, 1.0, 0.0)),
            (Lagrangian::new(p("u1^2/2 - u^4/4 + t*u")), (0.0, 0.5, 1.0)),
            (Lagrangian::new(p("exp(t/3)*(u1^2 + u*u1 - 2*u^2)")), (0.0, -1.0, 1.0)),
        ] {
            let eom = euler_lagrange(&l).unwrap();
            let el = euler_lagrange_expression(&l);
            let tr = integrate_rk4_eom(&eom, ic, 3.0, 1e-2).unwrap();
            for [t, u, v] in tr.samples.iter().step_by(7) {
                let a = eom.accel(*t, *u, *v).unwrap();
                let env: Assignment = [(Symbol::T, *t), (Symbol::U, *u), (Symbol::U1, *v), (Symbol::U2, a)]
                    .into_iter()
                    .collect();
                assert!(el.eval(&env).unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn critical_reconstruction() {
        let i1 = FirstIntegral::new("I1", p("exp(t)*(u1 + u)"));
        let i2 = FirstIntegral::new("I2", p("exp(t)*((t - 1)*u + t*u1)"));
        let sol = reconstruct_solution(&i1, &i2, Some(Regime::Critical)).unwrap();
        let expected = crate::symexpr::parse_with("exp(-t)*(I1*t - I2)", &["I1", "I2"]).unwrap();
        assert_eq!(sol.u_of_t, expected.canonical());
        assert!(is_zero(&sol.residual(), &Params::ints(1, 2, 1)));
        let quad = FirstIntegral::new("I3", p("exp(2*t)*(u^2/2 + u*u1 + u1^2/2)"));
        assert!(matches!(
            reconstruct_solution(&quad, &i1, None),
            Err(ConservationError::NonAffine(_))
        ));
        assert_eq!(reconstruct_solution(&i1, &i1, None), Err(ConservationError::Singular));
    }
}
