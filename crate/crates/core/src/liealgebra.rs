//! Lie brackets of point vector fields and structure constants over a
//! finite basis.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::noether::field_rank;
use crate::symexpr::{is_identically_zero, Expr, Node, Params, Rational};
use crate::variational::VectorField;

/// Sample points used to propose expansion coefficients.
pub const N_FIT: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("basis is linearly dependent (rank {rank} < {len})")]
    Dependent { rank: usize, len: usize },
    #[error("[X{i}, X{j}] is not in the span of the basis")]
    NotClosed { i: usize, j: usize },
}

/// `[Z1, Z2] = (Z1(xi2) - Z2(xi1)) d/dt + (Z1(eta2) - Z2(eta1)) d/du`.
pub fn bracket(z1: &VectorField, z2: &VectorField) -> VectorField {
    VectorField {
        xi: z1.apply(&z2.xi).sub(&z2.apply(&z1.xi)),
        eta: z1.apply(&z2.eta).sub(&z2.apply(&z1.eta)),
    }
}

pub fn is_zero_field(z: &VectorField) -> bool {
    is_identically_zero(&z.xi) && is_identically_zero(&z.eta)
}

/// Structure constants: `[X_i, X_j] = sum_k coeffs[i][j][k] X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTable {
    pub names: Vec<String>,
    pub basis: Vec<VectorField>,
    pub coeffs: Vec<Vec<Vec<Expr>>>,
}

#[derive(Serialize)]
struct EntryJson {
    i: usize,
    j: usize,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct TableJson {
    basis: Vec<String>,
    entries: Vec<EntryJson>,
}

impl CommutatorTable {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `sum_k coeffs[i][j][k] X_k`.
    pub fn expansion(&self, i: usize, j: usize) -> VectorField {
        self.combination(&self.coeffs[i][j])
    }

    pub fn combination(&self, c: &[Expr]) -> VectorField {
        self.basis
            .iter()
            .zip(c)
            .fold(VectorField::zero(), |acc, (x, a)| acc.add(&x.scale(a)))
    }

    /// Human readable `[Xi, Xj]` entry, e.g. `-(1/2)*X4 + X5`.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        format_combination(&self.names, &self.coeffs[i][j])
    }

    /// 1-based indices, all ordered pairs with `i != j`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j {
                    entries.push(EntryJson {
                        i: i + 1,
                        j: j + 1,
                        coeffs: self.coeffs[i][j].iter().map(|e| e.to_string()).collect(),
                    });
                }
            }
        }
        serde_json::to_value(TableJson {
            basis: self.names.clone(),
            entries,
        })
        .expect("table serializes")
    }
}

/// `a X1 + b X2 + ...` with zero terms dropped; `0` for the empty sum.
pub fn format_combination(names: &[String], c: &[Expr]) -> String {
    let mut out = String::new();
    for (name, a) in names.iter().zip(c) {
        if a.is_literal_zero() {
            continue;
        }
        let neg = a.neg();
        let (sign, mag) = if is_negative_literal(a) { ("-", neg) } else { ("+", a.clone()) };
        let term = if mag == Expr::one() {
            name.clone()
        } else {
            format!("({mag})*{name}")
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn is_negative_literal(e: &Expr) -> bool {
    match e.node() {
        Node::Num(q) => q.is_negative(),
        Node::Mul(fs) => matches!(fs.first().map(|f| f.node()), Some(Node::Num(q)) if q.is_negative()),
        _ => false,
    }
}

fn sample_points() -> Vec<(f64, f64)> {
    (0..N_FIT)
        .map(|i| {
            let x = i as f64;
            (-0.9 + 0.27 * x, 1.3 - 0.31 * x + 0.04 * x * x)
        })
        .collect()
}

fn components(z: &VectorField, pts: &[(f64, f64)]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * pts.len());
    for &(t, u) in pts {
        let (a, b) = z.eval(t, u).unwrap_or((f64::NAN, f64::NAN));
        out.push(a);
        out.push(b);
    }
    out
}

/// Integer radicands `d` of every `sqrt(d)` occurring in `e`.
pub fn radicands(e: &Expr, out: &mut BTreeSet<BigInt>) {
    match e.node() {
        Node::Num(_) | Node::Sym(_) => {}
        Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| radicands(x, out)),
        Node::Pow(b, r) => {
            if let (Node::Num(q), true) = (b.node(), r.denom() == &BigInt::from(2)) {
                if q.is_integer() && q.is_positive() {
                    out.insert(q.to_integer());
                }
            }
            radicands(b, out);
        }
        Node::Call(_, a) => radicands(a, out),
    }
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// if within `tol` of `x`.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= tol {
            return Some(Rational::new(h1.into(), k1.into()));
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    ((x - h1 as f64 / k1 as f64).abs() <= tol && k1 != 0).then(|| Rational::new(h1.into(), k1.into()))
}

/// Recognize `x` as `q * sqrt(d)` for `d` in `radicals` (with `d = 1` first).
pub fn recognize_radical(x: f64, radicals: &[BigInt]) -> Option<Expr> {
    let tol = 1e-9 * (1.0 + x.abs());
    if x.abs() <= tol {
        return Some(Expr::zero());
    }
    for d in radicals {
        let root = d.to_f64()?.sqrt();
        if let Some(q) = recognize_rational(x / root, 10_000, tol / root) {
            let rad = if d.is_one() {
                Expr::one()
            } else {
                Expr::num(Rational::from_integer(d.clone())).sqrt()
            };
            return Some(Expr::num(q).mul(&rad));
        }
    }
    None
}

/// Expands every bracket in the basis: numeric least squares at [`N_FIT`]
/// points proposes coefficients, which are recognized as rational multiples
/// of radicals occurring in the basis and then confirmed exactly.
pub fn structure_constants(
    names: &[String],
    basis: &[VectorField],
    params: &Params,
) -> Result<CommutatorTable, LieError> {
    let basis: Vec<VectorField> = basis.iter().map(|z| z.with_params(params)).collect();
    let n = basis.len();
    let rank = field_rank(&basis);
    if rank < n {
        return Err(LieError::Dependent { rank, len: n });
    }
    let mut rads = BTreeSet::new();
    for z in &basis {
        radicands(&z.xi, &mut rads);
        radicands(&z.eta, &mut rads);
    }
    let mut radicals = vec![BigInt::one()];
    radicals.extend(rads.into_iter().filter(|d| !d.is_one()));

    let pts = sample_points();
    let cols: Vec<Vec<f64>> = basis.iter().map(|z| components(z, &pts)).collect();
    let a = DMatrix::from_fn(2 * pts.len(), n, |r, c| cols[c][r]);
    let svd = a.svd(true, true);

    let mut coeffs = vec![vec![vec![Expr::zero(); n]; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let br = bracket(&basis[i], &basis[j]);
            let rhs = DVector::from_vec(components(&br, &pts));
            let sol = svd.solve(&rhs, 1e-12).map_err(|_| LieError::NotClosed { i: i + 1, j: j + 1 })?;
            let exact: Option<Vec<Expr>> = sol.iter().map(|x| recognize_radical(*x, &radicals)).collect();
            let exact = exact.ok_or(LieError::NotClosed { i: i + 1, j: j + 1 })?;
            let approx = basis
                .iter()
                .zip(&exact)
                .fold(VectorField::zero(), |acc, (x, c)| acc.add(&x.scale(c)));
            if !is_zero_field(&br.sub(&approx)) {
                return Err(LieError::NotClosed { i: i + 1, j: j + 1 });
            }
            coeffs[j][i] = exact.iter().map(|e| e.neg()).collect();
            coeffs[i][j] = exact;
        }
    }
    Ok(CommutatorTable {
        names: names.to_vec(),
        basis,
        coeffs,
    })
}

/// Jacobi identity on every triple, from the raw brackets and from the
/// structure constants; true only if both hold.
pub fn jacobi_check(table: &CommutatorTable) -> bool {
    jacobi_raw(&table.basis) && jacobi_constants(&table.coeffs)
}

pub fn jacobi_raw(basis: &[VectorField]) -> bool {
    let n = basis.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (x, y, z) = (&basis[i], &basis[j], &basis[k]);
                let s = bracket(x, &bracket(y, z))
                    .add(&bracket(y, &bracket(z, x)))
                    .add(&bracket(z, &bracket(x, y)));
                if !is_zero_field(&s) {
                    return false;
                }
            }
        }
    }
    true
}

/// `sum_l (c_jk^l c_il^m + c_ki^l c_jl^m + c_ij^l c_kl^m) = 0` for all `m`.
pub fn jacobi_constants(c: &[Vec<Vec<Expr>>]) -> bool {
    let n = c.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    let s = Expr::sum((0..n).flat_map(|l| {
                        [
                            c[j][k][l].mul(&c[i][l][m]),
                            c[k][i][l].mul(&c[j][l][m]),
                            c[i][j][l].mul(&c[k][l][m]),
                        ]
                    }));
                    if !s.is_literal_zero() && !is_identically_zero(&s) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// `coeffs[i][j] == -coeffs[j][i]` and zero diagonal.
pub fn is_antisymmetric(c: &[Vec<Vec<Expr>>]) -> bool {
    let n = c.len();
    (0..n).all(|i| {
        c[i][i].iter().all(|e| e.is_literal_zero())
            && (0..n).all(|j| c[i][j].iter().zip(&c[j][i]).all(|(a, b)| a.add(b).is_literal_zero()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noether::solve_dho;
    use crate::symexpr::parse;
    use crate::variational::Lagrangian;
    use proptest::prelude::*;

    fn vf(xi: &str, eta: &str) -> VectorField {
        VectorField::parse(xi, eta).unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("X{i}")).collect()
    }

    fn bateman() -> Lagrangian {
        Lagrangian::new(parse("(1/2)*exp(c*t/m)*(m*u1^2 - k*u^2)").unwrap())
    }

    fn solved(params: &Params) -> Vec<VectorField> {
        solve_dho(&bateman(), params).unwrap().into_iter().map(|s| s.field).collect()
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let z = vf("sin(t)*u", "exp(t)*u^2");
        assert!(bracket(&z, &z).is_literal_zero());
    }

    #[test]
    fn recognizes_rationals() {
        assert_eq!(recognize_rational(0.5, 100, 1e-12), Some(Rational::new(1.into(), 2.into())));
        assert_eq!(recognize_rational(-1.5, 100, 1e-12), Some(Rational::new((-3).into(), 2.into())));
        assert_eq!(recognize_rational(std::f64::consts::PI, 100, 1e-9), None);
        let r3 = recognize_radical(-3f64.sqrt() / 2.0, &[BigInt::one(), BigInt::from(3)]).unwrap();
        assert_eq!(r3, parse("-sqrt(3)/2").unwrap().canonical());
    }

    #[test]
    fn critical_table_entries() {
        let params = Params::ints(1, 2, 1);
        let t = structure_constants(&names(5), &solved(&params), &params).unwrap();
        assert_eq!(t.entry_string(0, 3), "(1/2)*X1");
        assert_eq!(t.entry_string(2, 3), "X3");
        assert_eq!(t.entry_string(3, 4), "X5");
        assert_eq!(t.entry_string(1, 2), "-X1");
        assert!(is_antisymmetric(&t.coeffs));
        assert!(jacobi_check(&t));
    }

    #[test]
    fn overdamped_translations_commute() {
        let params = Params::ints(1, 3, 2);
        let b = solved(&params);
        assert!(is_zero_field(&bracket(&b[3], &b[4])));
        let t = structure_constants(&names(5), &b, &params).unwrap();
        assert!(jacobi_check(&t));
    }

    #[test]
    fn underdamped_table_has_radical_entries() {
        let params = Params::ints(1, 1, 1);
        let t = structure_constants(&names(5), &solved(&params), &params).unwrap();
        assert!(t.coeffs[0][1].iter().any(|c| c.to_string().contains("sqrt(3)")));
        assert_eq!(t.entry_string(3, 4), "0");
        assert!(jacobi_check(&t));
    }

    #[test]
    fn corrupted_table_fails_jacobi() {
        let params = Params::ints(1, 2, 1);
        let mut t = structure_constants(&names(5), &solved(&params), &params).unwrap();
        assert!(jacobi_check(&t));
        // [X3, X4] = X3 becomes -X3 on one side only.
        t.coeffs[2][3][2] = t.coeffs[2][3][2].neg();
        assert!(!jacobi_check(&t));
    }

    #[test]
    fn single_element_basis() {
        let params = Params::ints(1, 1, 1);
        let t = structure_constants(&names(1), &[vf("1", "0")], &params).unwrap();
        assert!(jacobi_check(&t));
    }

    #[test]
    fn dependent_and_non_closed_bases() {
        let params = Params::ints(1, 1, 1);
        let dep = [vf("1", "u"), vf("2", "2*u")];
        assert!(matches!(
            structure_constants(&names(2), &dep, &params),
            Err(LieError::Dependent { .. })
        ));
        // [d/dt, t^2 d/du] = 2 t d/du, outside the span.
        let open = [vf("1", "0"), vf("0", "t^2")];
        assert_eq!(
            structure_constants(&names(2), &open, &params),
            Err(LieError::NotClosed { i: 1, j: 2 })
        );
    }

    #[test]
    fn json_export_layout() {
        let params = Params::ints(1, 2, 1);
        let t = structure_constants(&names(5), &solved(&params), &params).unwrap();
        let v = t.to_json_value();
        assert_eq!(v["basis"][0], "X1");
        assert_eq!(v["entries"].as_array().unwrap().len(), 20);
        assert_eq!(v["entries"][0]["i"], 1);
        assert_eq!(v["entries"][0]["coeffs"].as_array().unwrap().len(), 5);
    }

    fn field() -> impl Strategy<Value = VectorField> {
        let comp = prop_oneof![
            Just("0"), Just("1"), Just("t"), Just("u"), Just("t*u"), Just("exp(t)"),
            Just("sin(t)*u"), Just("u^2"), Just("cosh(2*t)"), Just("t^2*u")
        ];
        (comp.clone(), comp).prop_map(|(a, b)| vf(a, b))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn bracket_is_bilinear(x in field(), y in field(), z in field(), a in -3i64..=3, b in 1i64..=4) {
            let (ea, eb) = (Expr::int(a), Expr::frac(1, b));
            let lhs = bracket(&x.scale(&ea).add(&y.scale(&eb)), &z);
            let rhs = bracket(&x, &z).scale(&ea).add(&bracket(&y, &z).scale(&eb));
            prop_assert!(is_zero_field(&lhs.sub(&rhs)));
        }

        #[test]
        fn bracket_is_antisymmetric_and_satisfies_jacobi(x in field(), y in field(), z in field()) {
            prop_assert!(is_zero_field(&bracket(&x, &y).add(&bracket(&y, &x))));
            prop_assert!(jacobi_raw(&[x, y, z]));
        }
    }
}
