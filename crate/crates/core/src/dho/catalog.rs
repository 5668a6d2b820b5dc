//! Published generator, integral, solution and commutator forms for each
//! damping regime, stored as parser strings in `m`, `c`, `k` and
//! instantiated at concrete parameters.

use crate::conservation::{ClosedFormSolution, FirstIntegral};
use crate::noether::{solve_gauge, GaugeFunction};
use crate::symexpr::{parse, parse_with, Expr, Params, Symbol};
use crate::variational::{Lagrangian, VectorField};

use super::{bateman_lagrangian, classify, DampingRegime, Regime};

/// One generator: the printed real form, and a corrected form where the
/// printed one fails the Noether condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogGenerator {
    pub name: String,
    pub printed: VectorField,
    pub corrected: Option<VectorField>,
    pub note: Option<String>,
    /// Gauge of the effective field, `None` if it is not a Noether symmetry.
    pub gauge: Option<GaugeFunction>,
}

impl CatalogGenerator {
    pub fn effective(&self) -> &VectorField {
        self.corrected.as_ref().unwrap_or(&self.printed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogIntegral {
    pub integral: FirstIntegral,
    /// Generator (by name) that the integral belongs to.
    pub generator: String,
    pub note: Option<String>,
}

/// A published closed-form solution and, if it is defective, the corrected
/// template the audit uses instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionTemplate {
    pub printed: ClosedFormSolution,
    pub corrected: Option<ClosedFormSolution>,
    /// Labels of the two integrals the solution is built from.
    pub from: [String; 2],
    pub note: Option<String>,
}

impl SolutionTemplate {
    pub fn effective(&self) -> &ClosedFormSolution {
        self.corrected.as_ref().unwrap_or(&self.printed)
    }
}

/// Claimed structure constants: `claimed[i][j]` lists `(coefficient, k)`
/// pairs with `[X_i, X_j] = sum coefficient * X_k`.
pub type ClaimedTable = Vec<Vec<Vec<Expr>>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeCatalog {
    pub regime: DampingRegime,
    pub params: Params,
    pub lagrangian: Lagrangian,
    pub generators: Vec<CatalogGenerator>,
    /// Complex generators kept for display only.
    pub display_only: Vec<(String, String)>,
    pub integrals: Vec<CatalogIntegral>,
    pub solution: SolutionTemplate,
    pub table_name: String,
    pub claimed_table: ClaimedTable,
    pub metadata: Vec<String>,
}

fn ex(s: &str) -> Expr {
    parse(s).unwrap_or_else(|e| panic!("catalog expression {s}: {e}"))
}

fn field(params: &Params, xi: &str, eta: &str) -> VectorField {
    VectorField::new(params.apply(&ex(xi)), params.apply(&ex(eta))).expect("velocity free")
}

fn solution(params: &Params, text: &str, consts: [&str; 2], regime: Regime) -> ClosedFormSolution {
    let e = parse_with(text, &consts).unwrap_or_else(|e| panic!("catalog solution {text}: {e}"));
    ClosedFormSolution {
        u_of_t: params.apply(&e),
        constants: [Symbol::user(consts[0]), Symbol::user(consts[1])],
        regime: Some(regime),
    }
}

/// `cells[i][j]` as `(coefficient, 1-based index)` lists.
fn table(params: &Params, cells: &[[&[(&str, usize)]; 5]; 5]) -> ClaimedTable {
    cells
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| {
                    let mut v = vec![Expr::zero(); 5];
                    for (coef, k) in cell.iter() {
                        v[k - 1] = params.apply(&ex(coef));
                    }
                    v
                })
                .collect()
        })
        .collect()
}

const OVER_S: &str = "sqrt(c^2 - 4*k*m)";

fn over(params: &Params) -> (Vec<CatalogGenerator>, Vec<CatalogIntegral>, SolutionTemplate, ClaimedTable) {
    let d = OVER_S;
    let sh = format!("sinh({d}*t/m)");
    let ch = format!("cosh({d}*t/m)");
    let gens = vec![
        ("X1", field(params, "1", "-c*u/(2*m)"), None, None),
        (
            "X2",
            field(params, &sh, &format!("u*{d}/(2*m)*{ch} - c*u/(2*m)*{sh}")),
            None,
            Some("printed with an overall imaginary-unit factor; the real generator is used"),
        ),
        (
            "X3",
            field(params, &ch, &format!("-(u*{d}/(2*m)*{sh} + c*u/(2*m)*{ch})")),
            Some(field(params, &ch, &format!("u*{d}/(2*m)*{sh} - c*u/(2*m)*{ch}"))),
            Some("printed sinh term in the d/du component has the wrong sign"),
        ),
        ("X4", field(params, "0", &format!("exp((-c - {d})*t/(2*m))")), None, None),
        ("X5", field(params, "0", &format!("exp((-c + {d})*t/(2*m))")), None, None),
    ];
    let quad = "(2*m^2*u1^2 + 2*m*(c*u*u1 - k*u^2) + c^2*u^2)";
    let coef = format!("(c^2*{d} - (c^2 - 4*k*m)^(3/2))");
    let ints = vec![
        ("I1", "X1", "-exp(c*t/m)*(m*u1^2 + c*u*u1 + k*u^2)".to_string(), None),
        (
            "I2",
            "X2",
            format!("1/(16*k*m^2)*(-4*k*m*exp(c*t/m)*{quad}*{sh} + exp(c*t/m)*(c*u^2 + 2*m*u*u1)*{coef}*{ch})"),
            Some("printed coefficient c^2*sqrt(c^2-4km) - (c^2-4km)^(3/2) equals 4km*sqrt(c^2-4km)"),
        ),
        (
            "I3",
            "X3",
            format!("1/(16*k*m^2)*(-4*k*m*exp(c*t/m)*{quad}*{ch} + exp(c*t/m)*(c*u^2 + 2*m*u*u1)*{coef}*{sh})"),
            Some("printed coefficient c^2*sqrt(c^2-4km) - (c^2-4km)^(3/2) equals 4km*sqrt(c^2-4km)"),
        ),
        (
            "I4",
            "X4",
            format!("exp(c*t/m)*exp(-(c + {d})*t/(2*m))*m*u1 + (1/2)*(c + {d})*u*exp((c - {d})*t/(2*m))"),
            None,
        ),
        (
            "I5",
            "X5",
            format!("exp(c*t/m)*exp((-c + {d})*t/(2*m))*m*u1 + (1/2)*(c - {d})*u*exp((c + {d})*t/(2*m))"),
            None,
        ),
    ];
    let sol = SolutionTemplate {
        printed: solution(
            params,
            &format!("2*m/(c^2 - 4*k*m)*(I4*exp((-c + {d})/(2*m)) - I5*exp((-c - {d})/(2*m)))"),
            ["I4", "I5"],
            Regime::Over,
        ),
        corrected: Some(solution(
            params,
            &format!("1/{d}*(I4*exp((-c + {d})*t/(2*m)) - I5*exp((-c - {d})*t/(2*m)))"),
            ["I4", "I5"],
            Regime::Over,
        )),
        from: ["I4".into(), "I5".into()],
        note: Some(
            "printed exponents lack the factor t and the prefactor 2m/(c^2-4km) should be 1/sqrt(c^2-4km)"
                .into(),
        ),
    };
    let s = format!("{d}/m");
    let h = format!("{d}/(2*m)");
    let (s, h) = (s.as_str(), h.as_str());
    let ns = format!("-{s}");
    let nh = format!("-{h}");
    let (ns, nh) = (ns.as_str(), nh.as_str());
    let cells: [[&[(&str, usize)]; 5]; 5] = [
        [&[], &[(s, 3)], &[(s, 2)], &[(nh, 4)], &[(h, 5)]],
        [&[(ns, 3)], &[], &[(ns, 1)], &[(nh, 5)], &[(nh, 4)]],
        [&[(ns, 2)], &[(s, 1)], &[], &[(nh, 5)], &[(h, 4)]],
        [&[(h, 4)], &[(h, 5)], &[(h, 5)], &[], &[]],
        [&[(nh, 5)], &[(h, 4)], &[(nh, 4)], &[], &[]],
    ];
    (
        build_generators(gens),
        build_integrals(params, ints),
        sol,
        table(params, &cells),
    )
}

const UNDER_S: &str = "sqrt(4*k*m - c^2)";

fn under(params: &Params) -> (Vec<CatalogGenerator>, Vec<CatalogIntegral>, SolutionTemplate, ClaimedTable) {
    let d = UNDER_S;
    let sn = format!("sin({d}*t/m)");
    let cs = format!("cos({d}*t/m)");
    let sn2 = format!("sin({d}*t/(2*m))");
    let cs2 = format!("cos({d}*t/(2*m))");
    let gens = vec![
        ("X1", field(params, "1", "-c*u/(2*m)"), None, None),
        ("X2", field(params, &sn, &format!("u*{d}/(2*m)*{cs} - c*u/(2*m)*{sn}")), None, None),
        ("X3", field(params, &cs, &format!("-(u*{d}/(2*m)*{sn} + c*u/(2*m)*{cs})")), None, None),
        ("G4", field(params, "0", &format!("exp(-c*t/(2*m))*{cs2}")), None, None),
        ("G5", field(params, "0", &format!("exp(-c*t/(2*m))*{sn2}")), None, None),
    ];
    let quad = "(2*m^2*u1^2 + 2*m*u*(c*u1 - k*u) + c^2*u^2)";
    let ints = vec![
        ("I1", "X1", "-exp(c*t/m)*(m*u1^2 + c*u*u1 + k*u^2)".to_string(), None),
        (
            "I2",
            "X2",
            format!("-exp(c*t/m)/(4*m)*{quad}*{sn} + exp(c*t/m)/(4*m)*u*{d}*(c*u + 2*m*u1)*{cs}"),
            None,
        ),
        (
            "I3",
            "X3",
            format!("-exp(c*t/m)/(4*m)*{quad}*{cs} - exp(c*t/m)/(4*m)*u*{d}*(c*u + 2*m*u1)*{sn}"),
            None,
        ),
        (
            "I4",
            "G4",
            format!("exp(c*t/(2*m))*((m*u1 + c*u/2)*{cs2} + (1/2)*u*{d}*{sn2})"),
            None,
        ),
        (
            "I5",
            "G5",
            format!("exp(c*t/(2*m))*((m*u1 + c*u/2)*{sn2} - (1/2)*u*{d}*{cs2})"),
            None,
        ),
    ];
    let sol = SolutionTemplate {
        printed: solution(
            params,
            &format!("1/{d}*exp(-c*t/(2*m))*(C1*{sn2} - C2*{cs2})"),
            ["C1", "C2"],
            Regime::Under,
        ),
        corrected: None,
        from: ["I4".into(), "I5".into()],
        note: None,
    };
    let s = format!("{d}/m");
    let h = format!("{d}/(2*m)");
    let (s, h) = (s.as_str(), h.as_str());
    let ns = format!("-{s}");
    let nh = format!("-{h}");
    let (ns, nh) = (ns.as_str(), nh.as_str());
    let cells: [[&[(&str, usize)]; 5]; 5] = [
        [&[], &[(s, 3)], &[(ns, 2)], &[(nh, 5)], &[(h, 4)]],
        [&[(ns, 3)], &[], &[(ns, 1)], &[(nh, 4)], &[(h, 5)]],
        [&[(s, 2)], &[(s, 1)], &[], &[(h, 5)], &[(h, 4)]],
        [&[(h, 5)], &[(h, 4)], &[(nh, 5)], &[], &[]],
        [&[(nh, 4)], &[(nh, 5)], &[(nh, 4)], &[], &[]],
    ];
    (
        build_generators(gens),
        build_integrals(params, ints),
        sol,
        table(params, &cells),
    )
}

fn critical(params: &Params) -> (Vec<CatalogGenerator>, Vec<CatalogIntegral>, SolutionTemplate, ClaimedTable) {
    let r = "sqrt(k/m)";
    let gens = vec![
        ("X1", field(params, "0", &format!("exp(-{r}*t)")), None, None),
        ("X2", field(params, "0", &format!("t*exp(-{r}*t)")), None, None),
        ("X3", field(params, "1", &format!("-{r}*u")), None, None),
        ("X4", field(params, "t", &format!("-(1/2)*(2*t*{r} - 1)*u")), None, None),
        ("X5", field(params, "t^2/2", &format!("-(1/2)*(t^2*{r} - t)*u")), None, None),
    ];
    let e = format!("exp({r}*t)");
    let ints = vec![
        ("I1", "X1", format!("{e}*({r}*u + u1)"), None),
        ("I2", "X2", format!("{e}*({r}*t*u + t*u1 - u)"), None),
        ("I3", "X3", format!("{e}^2*(k*u^2/(2*m) + {r}*u*u1 + u1^2/2)"), None),
        (
            "I4",
            "X4",
            format!("{e}^2*(t/2*({r}*u + u1)^2 - ({r}*t*u - u/2 + t*u1)*({r}*u + u1))"),
            None,
        ),
        (
            "I5",
            "X5",
            format!(
                "u^2/4*exp(2*t*{r}) + t/(4*m)*(2*m*u*(t*u1 - u)*{r} + t*m*u1^2 + t*k*u^2 - 2*m*u*u1)*{e}^2"
            ),
            None,
        ),
    ];
    let sol = SolutionTemplate {
        printed: solution(params, &format!("exp(-{r}*t)*(I1*t - I2)"), ["I1", "I2"], Regime::Critical),
        corrected: None,
        from: ["I1".into(), "I2".into()],
        note: None,
    };
    let cells: [[&[(&str, usize)]; 5]; 5] = [
        [&[], &[], &[], &[("1/2", 1)], &[("1/2", 2)]],
        [&[], &[], &[("-1", 1)], &[("-1/2", 2)], &[]],
        [&[], &[("1", 1)], &[], &[("1", 3)], &[("1", 4)]],
        [&[("-1/2", 1)], &[("1/2", 2)], &[("-1", 3)], &[], &[("1", 5)]],
        [&[("-1/2", 2)], &[], &[("-1", 4)], &[("-1", 5)], &[]],
    ];
    (
        build_generators(gens),
        build_integrals(params, ints),
        sol,
        table(params, &cells),
    )
}

type GenRow = (&'static str, VectorField, Option<VectorField>, Option<&'static str>);

fn build_generators(rows: Vec<GenRow>) -> Vec<CatalogGenerator> {
    rows.into_iter()
        .map(|(name, printed, corrected, note)| CatalogGenerator {
            name: name.into(),
            printed,
            corrected,
            note: note.map(str::to_string),
            gauge: None,
        })
        .collect()
}

fn build_integrals(
    params: &Params,
    rows: Vec<(&str, &str, String, Option<&str>)>,
) -> Vec<CatalogIntegral> {
    rows.into_iter()
        .map(|(label, gen, text, note)| CatalogIntegral {
            integral: FirstIntegral::new(label, params.apply(&ex(&text))),
            generator: gen.into(),
            note: note.map(str::to_string),
        })
        .collect()
}

/// The published catalog for the regime of `params`, with gauges of the
/// effective generators recovered from the Bateman Lagrangian.
pub fn catalog(params: &Params) -> RegimeCatalog {
    let regime = classify(params);
    let (mut generators, integrals, solution, claimed) = match regime.regime {
        Regime::Over => over(params),
        Regime::Under => under(params),
        Regime::Critical => critical(params),
    };
    let lagrangian = bateman_lagrangian().with_params(params);
    for g in generators.iter_mut() {
        g.gauge = solve_gauge(g.effective(), &lagrangian);
    }
    let display_only = match regime.regime {
        Regime::Under => vec![
            (
                "X4".to_string(),
                format!("exp(-c*t/(2*m))*(cos({UNDER_S}*t/(2*m)) - i*sin({UNDER_S}*t/(2*m)))*D_u"),
            ),
            (
                "X5".to_string(),
                format!("exp(-c*t/(2*m))*(cos({UNDER_S}*t/(2*m)) + i*sin({UNDER_S}*t/(2*m)))*D_u"),
            ),
        ],
        _ => Vec::new(),
    };
    let (table_name, metadata) = match regime.regime {
        Regime::Over => ("Table I", vec![]),
        Regime::Under => (
            "Table II",
            vec!["translations stored as the real pair G4, G5; complex X4, X5 are display-only".into()],
        ),
        Regime::Critical => (
            "Table III",
            vec!["novelty claim for X5 relative to earlier literature is not verifiable here".into()],
        ),
    };
    RegimeCatalog {
        regime,
        params: params.clone(),
        lagrangian,
        generators,
        display_only,
        integrals,
        solution,
        table_name: table_name.into(),
        claimed_table: claimed,
        metadata,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::is_zero;

    #[test]
    fn underdamped_x2_at_unit_parameters() {
        let cat = catalog(&Params::ints(1, 1, 1));
        assert_eq!(
            cat.generators[1].printed,
            VectorField::parse("sin(sqrt(3)*t)", "u*sqrt(3)/2*cos(sqrt(3)*t) - u/2*sin(sqrt(3)*t)").unwrap()
        );
    }

    #[test]
    fn critical_i3_at_standard_parameters() {
        let cat = catalog(&Params::ints(1, 2, 1));
        assert_eq!(
            cat.integrals[2].integral.expr,
            parse("exp(2*t)*(u^2/2 + u*u1 + u1^2/2)").unwrap().canonical()
        );
    }

    #[test]
    fn overdamped_translation_integrals_are_single_exponentials() {
        let cat = catalog(&Params::ints(1, 3, 2));
        assert_eq!(cat.integrals[3].integral.expr, parse("exp(t)*(u1 + 2*u)").unwrap().canonical());
        assert_eq!(cat.integrals[4].integral.expr, parse("exp(2*t)*(u1 + u)").unwrap().canonical());
    }

    #[test]
    fn printed_overdamped_x3_has_no_gauge_but_corrected_one_does() {
        let params = Params::ints(1, 3, 2);
        let cat = catalog(&params);
        let l = bateman_lagrangian().with_params(&params);
        assert!(solve_gauge(&cat.generators[2].printed, &l).is_none());
        assert!(cat.generators.iter().all(|g| g.gauge.is_some()));
    }

    #[test]
    fn overdamped_printed_solution_is_not_a_function_of_time() {
        let params = Params::ints(1, 3, 2);
        let cat = catalog(&params);
        assert!(!cat.solution.printed.u_of_t.depends_on(&Symbol::T));
        assert!(is_zero(&cat.solution.effective().residual(), &params));
    }
}
