use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

/// Parses `p`, `-p`, `p/q` exactly. Decimals are accepted and converted
/// exactly (`0.25` is `1/4`).
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() || !body.chars().all(|ch| ch.is_ascii_digit() || ch == '.') {
        return None;
    }
    let q = match body.split_once('.') {
        Some((int, frac)) => {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return None;
            }
            let digits = format!("{int}{frac}");
            let n: BigInt = digits.parse().ok()?;
            let d = num_traits::pow(BigInt::from(10), frac.len());
            Rational::new(n, d)
        }
        None => Rational::from_integer(body.parse().ok()?),
    };
    Some(if neg { -q } else { q })
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
    })
}

pub fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

pub fn is_half_integer(q: &Rational) -> bool {
    q.denom() == &BigInt::from(1) || q.denom() == &BigInt::from(2)
}

/// Splits a positive integer into `s^2 * d` with `d` squarefree.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let root = n.sqrt();
    if &root * &root == *n {
        return (root, BigInt::one());
    }
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let pp = &p * &p;
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            square *= &p;
        }
        p += 1;
        // Large prime factors are left inside the radical.
        if p > BigInt::from(100_000) {
            break;
        }
    }
    (square, rest)
}

/// `sqrt(q)` for positive `q` as `(r, d)` with `sqrt(q) = r * sqrt(d)`,
/// `r` rational and `d` a squarefree positive integer.
pub fn sqrt_parts(q: &Rational) -> (Rational, BigInt) {
    debug_assert!(q.is_positive());
    // sqrt(a/b) = sqrt(a*b)/b
    let ab = q.numer() * q.denom();
    let (s, d) = square_part(&ab);
    (Rational::new(s, q.denom().clone()), d)
}

/// Positive content: gcd of numerators over lcm of denominators.
pub fn content<'a, I: IntoIterator<Item = &'a Rational>>(coefs: I) -> Rational {
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for q in coefs {
        g = g.gcd(q.numer());
        l = l.lcm(q.denom());
    }
    if g.is_zero() {
        return Rational::one();
    }
    Rational::new(g.abs(), l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/2"), Some(q(3, 2)));
        assert_eq!(parse_rational("-4"), Some(q(-4, 1)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn sqrt_extracts_squares() {
        assert_eq!(sqrt_parts(&q(12, 1)), (q(2, 1), BigInt::from(3)));
        assert_eq!(sqrt_parts(&q(1, 4)), (q(1, 2), BigInt::from(1)));
        // sqrt(3/4) = sqrt(3)/2
        assert_eq!(sqrt_parts(&q(3, 4)), (q(1, 2), BigInt::from(3)));
        // sqrt(1/2) = sqrt(2)/2
        assert_eq!(sqrt_parts(&q(1, 2)), (q(1, 2), BigInt::from(2)));
    }

    #[test]
    fn content_of_mixed_coefficients() {
        assert_eq!(content([&q(2, 3), &q(4, 9)]), q(2, 9));
        assert_eq!(content([&q(-6, 1), &q(9, 1)]), q(3, 1));
    }
}
