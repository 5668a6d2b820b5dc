use std::collections::BTreeMap;

use super::rational::to_f64;
use super::{Expr, Func, Node, Symbol};

/// Numeric values for the free symbols of an expression.
pub type Assignment = BTreeMap<Symbol, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("symbol `{0}` is not bound")]
    Unbound(String),
    #[error("domain error evaluating `{0}`")]
    Domain(String),
}

impl Expr {
    /// Floating-point value under `env`. Non-finite intermediate results
    /// (square roots of negatives, division by zero) are domain errors.
    pub fn eval(&self, env: &Assignment) -> Result<f64, EvalError> {
        let v = match self.node() {
            Node::Num(q) => to_f64(q),
            Node::Sym(s) => *env.get(s).ok_or_else(|| EvalError::Unbound(s.name()))?,
            Node::Add(xs) => {
                let mut acc = 0.0;
                for x in xs {
                    acc += x.eval(env)?;
                }
                acc
            }
            Node::Mul(xs) => {
                let mut acc = 1.0;
                for x in xs {
                    acc *= x.eval(env)?;
                }
                acc
            }
            Node::Pow(b, r) => {
                let base = b.eval(env)?;
                if r.is_integer() {
                    base.powi(r.to_integer().try_into().unwrap_or(i32::MAX))
                } else {
                    base.powf(to_f64(r))
                }
            }
            Node::Call(f, a) => {
                let x = a.eval(env)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::Domain(self.to_string()))
        }
    }
}
