//! Damping regimes of `m u'' + c u' + k u = 0`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::symexpr::{is_identically_zero, parse, Expr, Params, Rational, Symbol, Var};
use crate::variational::{invert_total_derivative, Lagrangian};

pub mod audit;
pub mod catalog;

pub use audit::{audit_catalog, AuditItem, AuditReport, AuditStatus};
pub use catalog::{catalog, CatalogGenerator, CatalogIntegral, RegimeCatalog, SolutionTemplate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Regime {
    Over,
    Under,
    Critical,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Over => "Over",
            Regime::Under => "Under",
            Regime::Critical => "Critical",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A regime together with the exact discriminant `c^2 - 4km`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DampingRegime {
    pub regime: Regime,
    pub discriminant: Rational,
}

impl fmt::Display for DampingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.regime {
            Regime::Over => ">",
            Regime::Under => "<",
            Regime::Critical => "=",
        };
        write!(f, "{} (c^2 - 4km {rel} 0)", self.regime)
    }
}

pub fn classify(params: &Params) -> DampingRegime {
    let d = params.discriminant();
    let regime = if d.is_zero() {
        Regime::Critical
    } else if d.is_positive() {
        Regime::Over
    } else {
        Regime::Under
    };
    DampingRegime {
        regime,
        discriminant: d,
    }
}

/// `(1/2) e^{ct/m} (m u1^2 - k u^2)`.
pub fn bateman_lagrangian() -> Lagrangian {
    Lagrangian::new(parse("1/2*exp(c*t/m)*(m*u1^2 - k*u^2)").expect("static"))
}

/// `e^{ct/m} / (4 m^2) (2 m^2 u1^2 + 2 c m u u1 + (c^2 - 2 k m) u^2)`.
pub fn new_lagrangian() -> Lagrangian {
    Lagrangian::new(
        parse("exp(c*t/m)/(4*m^2)*(2*m^2*u1^2 + 2*c*m*u*u1 + (c^2 - 2*k*m)*u^2)").expect("static"),
    )
}

/// Writes `l1 = lambda * l2 + D(F)` with constant `lambda` and `F(t, u)`,
/// normalized so `F(0, 0) = 0`. `None` if no such pair exists.
pub fn gauge_decompose(l1: &Lagrangian, l2: &Lagrangian) -> Option<(Expr, Expr)> {
    let lead = |l: &Lagrangian| l.expr().diff(Var::U1).diff(Var::U1);
    let a = lead(l1);
    let b = lead(l2);
    if is_identically_zero(&b) {
        return None;
    }
    let lambda = a.div(&b).canonical();
    for v in [Var::T, Var::U, Var::U1] {
        if !is_identically_zero(&lambda.diff(v)) {
            return None;
        }
    }
    let lambda = simplify_constant(&lambda);
    let rest = l1.expr().sub(&lambda.mul(l2.expr()));
    let f = invert_total_derivative(&rest)?;
    Some((lambda, f))
}

/// A ratio like `e^{ct/m} / e^{ct/m}` already known to be constant is
/// collapsed by evaluating at the origin.
fn simplify_constant(e: &Expr) -> Expr {
    let zero = Expr::zero();
    e.subs(&Symbol::T, &zero)
        .subs(&Symbol::U, &zero)
        .subs(&Symbol::U1, &zero)
        .canonical()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variational::euler_lagrange;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Params::ints(1, 2, 1)).regime, Regime::Critical);
        assert_eq!(classify(&Params::ints(1, 3, 2)).regime, Regime::Over);
        assert_eq!(classify(&Params::ints(1, 1, 1)).regime, Regime::Under);
        assert_eq!(classify(&Params::ints(1, 0, 1)).regime, Regime::Under);
        let d = classify(&Params::ints(1, 2, 1));
        assert_eq!(d.to_string(), "Critical (c^2 - 4km = 0)");
    }

    #[test]
    fn classification_is_scale_invariant() {
        for (m, c, k) in [(1, 3, 2), (1, 2, 1), (2, 1, 3)] {
            for s in [2, 7] {
                assert_eq!(
                    classify(&Params::ints(m, c, k)).regime,
                    classify(&Params::ints(s * m, s * c, s * k)).regime
                );
            }
        }
    }

    #[test]
    fn both_lagrangians_give_the_oscillator() {
        let p = Params::ints(2, 3, 5);
        for l in [bateman_lagrangian(), new_lagrangian()] {
            let eom = euler_lagrange(&l.with_params(&p)).unwrap();
            let w = parse("-3/2*u1 - 5/2*u").unwrap();
            assert!(is_identically_zero(&eom.w.sub(&w)));
        }
    }

    #[test]
    fn new_lagrangian_is_gauge_equivalent_to_bateman() {
        let (lambda, f) = gauge_decompose(&new_lagrangian(), &bateman_lagrangian()).unwrap();
        assert!(is_identically_zero(&lambda.sub(&parse("1/m").unwrap())));
        let expect = parse("c/(4*m)*u^2*exp(c*t/m)").unwrap();
        assert!(is_identically_zero(&f.sub(&expect)));
    }
}
