//! Zero testing: literal canonical zero first, then the same test after
//! rewriting hyperbolic functions as exponentials, then evaluation at random
//! points.
//!
//! The numeric stage has one-sided error: a `false` answer is always correct
//! (some sample is far from zero), a `true` answer means every sample was
//! below `eps * (1 + scale)`, where `scale` is the sum of the magnitudes of
//! the canonical terms at that sample.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{Assignment, Expr, Params, Symbol};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZeroTestError {
    #[error("expression contains ansatz unknowns and cannot be sampled")]
    Unknowns,
    #[error("no admissible sample point found after {0} draws")]
    RetriesExhausted(usize),
}

/// Configuration for the randomized zero test.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTest {
    pub points: usize,
    pub eps: f64,
    pub seed: u64,
    pub max_draws: usize,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            points: 12,
            eps: 1e-9,
            seed: 0x05ee_dd40_u64,
            max_draws: 240,
        }
    }
}

/// Draw from `[-2, -0.1] ∪ [0.1, 2]`.
fn draw_signed(rng: &mut StdRng) -> f64 {
    let x = rng.gen_range(0.1..2.0);
    if rng.gen_bool(0.5) {
        x
    } else {
        -x
    }
}

impl ZeroTest {
    pub fn with_eps(eps: f64) -> ZeroTest {
        ZeroTest {
            eps,
            ..ZeroTest::default()
        }
    }

    /// Decides `e == 0` after binding `params`. Unbound oscillator
    /// parameters are sampled from `[0.1, 2]`.
    pub fn check(&self, e: &Expr, params: Option<&Params>) -> Result<bool, ZeroTestError> {
        let e = match params {
            Some(p) => p.apply(e),
            None => e.canonical(),
        };
        if e.is_literal_zero() {
            return Ok(true);
        }
        let rewritten = e.hyperbolic_to_exp();
        if rewritten.is_literal_zero() {
            return Ok(true);
        }
        let symbols = e.symbols();
        if symbols.iter().any(|s| matches!(s, Symbol::Unknown(..))) {
            return Err(ZeroTestError::Unknowns);
        }
        let terms = e.terms();
        let mut rng = StdRng::seed_from_u64(self.seed);
        let mut accepted = 0;
        let mut draws = 0;
        while accepted < self.points {
            if draws >= self.max_draws {
                return Err(ZeroTestError::RetriesExhausted(draws));
            }
            draws += 1;
            let env: Assignment = symbols
                .iter()
                .map(|s| {
                    let v = match s {
                        Symbol::Param(_) => rng.gen_range(0.1..2.0),
                        _ => draw_signed(&mut rng),
                    };
                    (s.clone(), v)
                })
                .collect();
            let mut value = 0.0;
            let mut scale = 0.0;
            let mut ok = true;
            for term in &terms {
                match term.eval(&env) {
                    Ok(v) => {
                        value += v;
                        scale += v.abs();
                    }
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            accepted += 1;
            if value.abs() >= self.eps * (1.0 + scale) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `is_zero(e, params)` with the default configuration. Unresolvable
/// cases (no admissible sample point, unknown functions present) report
/// `false`.
pub fn is_zero(e: &Expr, params: &Params) -> bool {
    ZeroTest::default().check(e, Some(params)).unwrap_or(false)
}

/// Zero test over all free symbols, parameters included.
pub fn is_zero_with(e: &Expr, test: &ZeroTest) -> bool {
    test.check(e, None).unwrap_or(false)
}

/// Zero test over all free symbols with default settings.
pub fn is_identically_zero(e: &Expr) -> bool {
    is_zero_with(e, &ZeroTest::default())
}
