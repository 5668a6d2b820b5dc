//! Consistency audit of a regime catalog against the solver, the exact zero
//! test and numerical trajectories.

use std::fmt;

use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

use crate::conservation::{
    conservation_drift, first_integral, integrate_rk4, proportionality, reconstruct_solution,
    ClosedFormSolution, FirstIntegral,
};
use crate::liealgebra::{
    bracket, format_combination, is_antisymmetric, is_zero_field, jacobi_check, radicands,
    recognize_radical, structure_constants, CommutatorTable,
};
use crate::noether::{solve_dho, solve_gauge, spans_equal, NoetherSymmetry};
use crate::symexpr::{is_zero_with, parse, Expr, Params, Symbol, ZeroTest};
use crate::variational::{total_derivative, EquationOfMotion, VectorField};

use super::catalog::RegimeCatalog;
use super::{new_lagrangian, Regime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Info,
    Discrepancy,
    Failure,
}

impl AuditStatus {
    fn name(self) -> &'static str {
        match self {
            AuditStatus::Pass => "pass",
            AuditStatus::Info => "info",
            AuditStatus::Discrepancy => "discrepancy",
            AuditStatus::Failure => "failure",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub item: String,
    pub status: AuditStatus,
    pub note: String,
}

/// Numeric settings for the trajectory checks.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditSettings {
    pub h: f64,
    pub t_end: f64,
    pub initial_conditions: Vec<(f64, f64, f64)>,
    pub tol_drift: f64,
    pub tol_solution: f64,
    pub zero: ZeroTest,
}

impl Default for AuditSettings {
    fn default() -> Self {
        AuditSettings {
            h: 1e-3,
            t_end: 10.0,
            initial_conditions: vec![(0.0, 1.0, 0.0), (0.0, 0.0, 1.0), (0.0, 1.0, -1.0)],
            tol_drift: 1e-8,
            tol_solution: 1e-7,
            zero: ZeroTest::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub regime: Regime,
    pub items: Vec<AuditItem>,
    /// Solved structure constants, when the catalog basis closes.
    pub table: Option<CommutatorTable>,
}

impl AuditReport {
    pub fn count(&self, status: AuditStatus) -> usize {
        self.items.iter().filter(|i| i.status == status).count()
    }

    pub fn worst(&self) -> AuditStatus {
        self.items.iter().map(|i| i.status).max().unwrap_or(AuditStatus::Pass)
    }

    pub fn items_with(&self, status: AuditStatus) -> impl Iterator<Item = &AuditItem> {
        self.items.iter().filter(move |i| i.status == status)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit: {} damping", self.regime)?;
        for i in &self.items {
            writeln!(f, "[{:<11}] {}: {}", i.status.name(), i.item, i.note)?;
        }
        write!(
            f,
            "summary: {} pass, {} info, {} discrepancy, {} failure",
            self.count(AuditStatus::Pass),
            self.count(AuditStatus::Info),
            self.count(AuditStatus::Discrepancy),
            self.count(AuditStatus::Failure)
        )
    }
}

struct Audit<'a> {
    cat: &'a RegimeCatalog,
    settings: &'a AuditSettings,
    eom: EquationOfMotion,
    items: Vec<AuditItem>,
}

impl Audit<'_> {
    fn push(&mut self, item: impl Into<String>, status: AuditStatus, note: impl Into<String>) {
        self.items.push(AuditItem {
            item: item.into(),
            status,
            note: note.into(),
        });
    }

    fn zero(&self, e: &Expr) -> bool {
        is_zero_with(e, &self.settings.zero)
    }

    fn generators(&mut self) {
        let l = &self.cat.lagrangian;
        let alt = new_lagrangian().with_params(&self.cat.params);
        for g in &self.cat.generators {
            let item = format!("generator {}", g.name);
            let printed_ok = solve_gauge(&g.printed, l).is_some();
            match (&g.corrected, printed_ok) {
                (None, true) => {
                    let note = format!("Noether symmetry with gauge B = {}", g.gauge.as_ref().expect("gauge"));
                    self.push(&item, AuditStatus::Pass, note);
                }
                (None, false) => self.push(&item, AuditStatus::Failure, "printed form fails the Noether condition"),
                (Some(c), _) => {
                    let fixed = solve_gauge(c, l);
                    let status = if fixed.is_some() { AuditStatus::Discrepancy } else { AuditStatus::Failure };
                    let verdict = if printed_ok { "printed form passes" } else { "printed form fails the Noether condition" };
                    let note = format!(
                        "{verdict}; {}; corrected {} {}",
                        g.note.as_deref().unwrap_or("corrected form stored"),
                        c,
                        match &fixed {
                            Some(b) => format!("passes with B = {b}"),
                            None => "also fails".into(),
                        }
                    );
                    self.push(&item, status, note);
                }
            }
            if g.corrected.is_none() {
                if let Some(n) = &g.note {
                    self.push(format!("{item} form"), AuditStatus::Info, n.clone());
                }
            }
            match solve_gauge(g.effective(), &alt) {
                Some(b) => self.push(
                    format!("{item} under the alternative Lagrangian"),
                    AuditStatus::Pass,
                    format!("Noether symmetry with gauge B = {b}"),
                ),
                None => self.push(
                    format!("{item} under the alternative Lagrangian"),
                    AuditStatus::Failure,
                    "not a Noether symmetry",
                ),
            }
        }
        for (name, text) in &self.cat.display_only {
            self.push(
                format!("generator {name}"),
                AuditStatus::Info,
                format!("complex form {text} kept for display; its real and imaginary parts are the stored pair"),
            );
        }
    }

    fn solver(&mut self) -> Option<Vec<NoetherSymmetry>> {
        let solved = match solve_dho(&self.cat.lagrangian, &self.cat.params) {
            Ok(s) => s,
            Err(e) => {
                self.push("solver", AuditStatus::Failure, e.to_string());
                return None;
            }
        };
        let fields: Vec<VectorField> = solved.iter().map(|s| s.field.clone()).collect();
        let cat: Vec<VectorField> = self.cat.generators.iter().map(|g| g.effective().clone()).collect();
        if spans_equal(&fields, &cat) && fields.len() == 5 {
            self.push("solver span", AuditStatus::Pass, "solver span equals catalog span (dimension 5)");
        } else {
            self.push("solver span", AuditStatus::Failure, "solver span differs from catalog span");
        }
        for (k, (g, z)) in self.cat.generators.iter().zip(&fields).enumerate() {
            let item = format!("generator {} vs solver", g.name);
            if is_zero_field(&g.effective().sub(z)) {
                self.push(item, AuditStatus::Pass, format!("identical to solved generator {}", k + 1));
            } else {
                self.push(item, AuditStatus::Info, format!("differs from solved generator {} = {z}", k + 1));
            }
        }
        Some(solved)
    }

    fn integrals(&mut self) {
        let params = &self.cat.params;
        let trajectories: Vec<_> = self
            .settings
            .initial_conditions
            .iter()
            .map(|ic| integrate_rk4(params, *ic, self.settings.t_end, self.settings.h))
            .collect();
        for ci in &self.cat.integrals {
            let i = &ci.integral;
            let item = format!("integral {}", i.label);
            let exact = self.zero(&total_derivative(&i.expr, Some(&self.eom)));
            if exact {
                self.push(format!("{item} symbolic"), AuditStatus::Pass, "total derivative vanishes on shell");
            } else {
                self.push(format!("{item} symbolic"), AuditStatus::Discrepancy, "total derivative does not vanish on shell");
            }
            for (ic, traj) in self.settings.initial_conditions.iter().zip(&trajectories) {
                let label = format!("{item} drift from (t0,u0,v0) = ({}, {}, {})", ic.0, ic.1, ic.2);
                let res = traj.as_ref().map_err(|e| e.to_string()).and_then(|tr| {
                    conservation_drift(i, tr).map_err(|e| e.to_string())
                });
                match res {
                    Ok(d) if d.relative < self.settings.tol_drift => self.push(
                        label,
                        AuditStatus::Pass,
                        format!("relative drift {:.3e} (absolute {:.3e})", d.relative, d.absolute),
                    ),
                    Ok(d) => self.push(
                        label,
                        AuditStatus::Discrepancy,
                        format!("relative drift {:.3e} exceeds {:.1e}", d.relative, self.settings.tol_drift),
                    ),
                    Err(e) => self.push(label, AuditStatus::Failure, e),
                }
            }
            if let Some(n) = &ci.note {
                let coef = parse("c^2*sqrt(c^2 - 4*k*m) - (c^2 - 4*k*m)^(3/2) - 4*k*m*sqrt(c^2 - 4*k*m)")
                    .expect("static");
                let status = if self.zero(&params.apply(&coef)) { AuditStatus::Info } else { AuditStatus::Discrepancy };
                self.push(format!("{item} coefficient"), status, n.clone());
            }
            let Some(g) = self.cat.generators.iter().find(|g| g.name == ci.generator) else { continue };
            let Some(gauge) = &g.gauge else { continue };
            let ns = NoetherSymmetry {
                field: g.effective().clone(),
                gauge: gauge.clone(),
            };
            match first_integral(&i.label, &ns, &self.cat.lagrangian) {
                Ok(noether) => match proportionality(i, &noether) {
                    Some(lambda) => self.push(
                        format!("{item} vs Noether integral of {}", g.name),
                        AuditStatus::Pass,
                        format!("{} = ({lambda}) * [{}] + const", i.label, noether.expr),
                    ),
                    None => self.push(
                        format!("{item} vs Noether integral of {}", g.name),
                        AuditStatus::Info,
                        format!("not a constant multiple of the Noether integral {}", noether.expr),
                    ),
                },
                Err(e) => self.push(format!("{item} vs Noether integral of {}", g.name), AuditStatus::Failure, e.to_string()),
            }
        }
    }

    fn brackets(&mut self) -> Option<CommutatorTable> {
        let names: Vec<String> = self.cat.generators.iter().map(|g| g.name.clone()).collect();
        let basis: Vec<VectorField> = self.cat.generators.iter().map(|g| g.effective().clone()).collect();
        let table = match structure_constants(&names, &basis, &self.cat.params) {
            Ok(t) => t,
            Err(e) => {
                self.push("structure constants", AuditStatus::Failure, e.to_string());
                return None;
            }
        };
        self.push("structure constants", AuditStatus::Pass, "catalog basis closes under the bracket");
        let ok = jacobi_check(&table) && is_antisymmetric(&table.coeffs);
        self.push(
            "Jacobi identity",
            if ok { AuditStatus::Pass } else { AuditStatus::Failure },
            if ok { "holds on all triples" } else { "violated" },
        );
        if self.cat.regime.regime == Regime::Under {
            let z = bracket(&basis[3], &basis[4]);
            let ok = is_zero_field(&z);
            self.push(
                "[G4,G5]",
                if ok { AuditStatus::Pass } else { AuditStatus::Discrepancy },
                if ok { "translations commute".to_string() } else { format!("bracket is {z}") },
            );
        }
        let mut mismatches = 0;
        for i in 0..names.len() {
            for j in 0..names.len() {
                if i == j {
                    continue;
                }
                let claimed = &self.cat.claimed_table[i][j];
                let computed = &table.coeffs[i][j];
                let same = claimed.iter().zip(computed).all(|(a, b)| self.zero(&a.sub(b)));
                let item = format!("{} [{},{}]", self.cat.table_name, names[i], names[j]);
                let claimed_s = format_combination(&names, claimed);
                let computed_s = table.entry_string(i, j);
                if same {
                    self.push(item, AuditStatus::Pass, format!("claimed {claimed_s} reproduced"));
                } else {
                    mismatches += 1;
                    self.push(
                        item,
                        AuditStatus::Discrepancy,
                        format!("(i, j) = ({}, {}); claimed {claimed_s}; computed {computed_s}", i + 1, j + 1),
                    );
                }
            }
        }
        self.push(
            format!("{} summary", self.cat.table_name),
            if mismatches == 0 { AuditStatus::Pass } else { AuditStatus::Discrepancy },
            format!("{mismatches} of 20 entries differ from the computed brackets"),
        );
        Some(table)
    }

    fn solution(&mut self) {
        let tpl = &self.cat.solution;
        let find = |label: &str| self.cat.integrals.iter().find(|c| c.integral.label == label).map(|c| &c.integral);
        let (Some(ia), Some(ib)) = (find(&tpl.from[0]), find(&tpl.from[1])) else {
            self.push("solution", AuditStatus::Failure, "source integrals missing from the catalog");
            return;
        };
        let rec = match reconstruct_solution(ia, ib, Some(self.cat.regime.regime)) {
            Ok(r) => r,
            Err(e) => {
                self.push("solution reconstruction", AuditStatus::Failure, e.to_string());
                return;
            }
        };
        let res_ok = self.zero(&self.cat.params.apply(&rec.residual()));
        self.push(
            "solution reconstruction",
            if res_ok { AuditStatus::Pass } else { AuditStatus::Failure },
            format!("from {} and {}: {rec}", ia.label, ib.label),
        );
        self.template(&rec, &tpl.printed, "printed", tpl.corrected.is_none());
        if let Some(c) = &tpl.corrected {
            self.push(
                "solution template printed form",
                AuditStatus::Discrepancy,
                tpl.note.clone().unwrap_or_default(),
            );
            self.template(&rec, c, "corrected", true);
        }
        for ic in &self.settings.initial_conditions {
            let item = format!("solution vs RK4 from (t0,u0,v0) = ({}, {}, {})", ic.0, ic.1, ic.2);
            match self.compare_rk4(&rec, ia, ib, *ic) {
                Ok(d) if d < self.settings.tol_solution => {
                    self.push(item, AuditStatus::Pass, format!("max |du| = {d:.3e}"))
                }
                Ok(d) => self.push(item, AuditStatus::Failure, format!("max |du| = {d:.3e}")),
                Err(e) => self.push(item, AuditStatus::Failure, e),
            }
        }
    }

    /// Compares a template against the reconstruction by solving for its
    /// constants as combinations of the reconstruction's.
    fn template(&mut self, rec: &ClosedFormSolution, tpl: &ClosedFormSolution, which: &str, report: bool) {
        let item = format!("solution template {which}");
        if !tpl.u_of_t.depends_on(&Symbol::T) {
            if report {
                self.push(item, AuditStatus::Discrepancy, "template does not depend on t");
            }
            return;
        }
        match constant_map(rec, tpl) {
            Some(map) => {
                let note = format!(
                    "{} = {}, {} = {}",
                    tpl.constants[0].name(),
                    map[0],
                    tpl.constants[1].name(),
                    map[1]
                );
                self.push(item, AuditStatus::Pass, format!("matches the reconstruction with {note}"));
            }
            None => self.push(item, AuditStatus::Discrepancy, "no constant map onto the reconstruction"),
        }
    }

    fn compare_rk4(
        &self,
        rec: &ClosedFormSolution,
        ia: &FirstIntegral,
        ib: &FirstIntegral,
        ic: (f64, f64, f64),
    ) -> Result<f64, String> {
        let traj = integrate_rk4(&self.cat.params, ic, self.settings.t_end, self.settings.h).map_err(|e| e.to_string())?;
        let ka = ia.eval(ic.0, ic.1, ic.2).map_err(|e| e.to_string())?;
        let kb = ib.eval(ic.0, ic.1, ic.2).map_err(|e| e.to_string())?;
        let mut worst: f64 = 0.0;
        for [t, u, _] in &traj.samples {
            let v = rec.eval(*t, ka, kb).map_err(|e| e.to_string())?;
            worst = worst.max((v - u).abs());
        }
        Ok(worst)
    }
}

/// Expresses the template constants through the reconstruction constants:
/// returns `[C_a, C_b]` as linear combinations with exact coefficients.
/// Coefficients are fitted numerically, recognized as radicals and then the
/// substituted template is checked against the reconstruction exactly.
pub fn constant_map(rec: &ClosedFormSolution, tpl: &ClosedFormSolution) -> Option<[Expr; 2]> {
    let (ts, tr) = (0.37, 0.81);
    let basis = |s: &ClosedFormSolution, t: f64, a: f64, b: f64| s.eval(t, a, b).ok();
    // template columns
    let p = Matrix2::new(
        basis(tpl, ts, 1.0, 0.0)?,
        basis(tpl, ts, 0.0, 1.0)?,
        basis(tpl, tr, 1.0, 0.0)?,
        basis(tpl, tr, 0.0, 1.0)?,
    );
    let inv = p.try_inverse()?;
    let mut rads = std::collections::BTreeSet::new();
    radicands(&rec.u_of_t, &mut rads);
    radicands(&tpl.u_of_t, &mut rads);
    let mut radicals = vec![num_bigint::BigInt::from(1)];
    radicals.extend(rads.into_iter().filter(|d| *d != num_bigint::BigInt::from(1)));
    let mut coef = [[Expr::zero(), Expr::zero()], [Expr::zero(), Expr::zero()]];
    for (col, (a, b)) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
        let rhs = Vector2::new(basis(rec, ts, a, b)?, basis(rec, tr, a, b)?);
        let sol = inv * rhs;
        for row in 0..2 {
            coef[row][col] = recognize_radical(sol[row], &radicals)?;
        }
    }
    let ka = Expr::sym(rec.constants[0].clone());
    let kb = Expr::sym(rec.constants[1].clone());
    let map = [
        coef[0][0].mul(&ka).add(&coef[0][1].mul(&kb)).canonical(),
        coef[1][0].mul(&ka).add(&coef[1][1].mul(&kb)).canonical(),
    ];
    let substituted = tpl
        .u_of_t
        .subs(&tpl.constants[0], &map[0])
        .subs(&tpl.constants[1], &map[1]);
    is_zero_with(&substituted.sub(&rec.u_of_t), &ZeroTest::default()).then_some(map)
}

/// Runs every check on the catalog. Failures are report content.
pub fn audit_catalog(cat: &RegimeCatalog, settings: &AuditSettings) -> AuditReport {
    let params: &Params = &cat.params;
    let mut a = Audit {
        cat,
        settings,
        eom: EquationOfMotion::damped_oscillator().with_params(params),
        items: Vec::new(),
    };
    a.generators();
    a.solver();
    a.integrals();
    let table = a.brackets();
    a.solution();
    for m in &cat.metadata {
        a.push("metadata", AuditStatus::Info, m.clone());
    }
    AuditReport {
        regime: cat.regime.regime,
        items: a.items,
        table,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dho::catalog;

    fn run(m: i64, c: i64, k: i64) -> AuditReport {
        audit_catalog(&catalog(&Params::ints(m, c, k)), &AuditSettings::default())
    }

    fn status(r: &AuditReport, item: &str) -> AuditStatus {
        r.items.iter().find(|i| i.item == item).unwrap_or_else(|| panic!("{item}")).status
    }

    #[test]
    fn critical_audit_is_clean() {
        let r = run(1, 2, 1);
        assert_eq!(r.count(AuditStatus::Failure), 0, "{r}");
        assert_eq!(r.count(AuditStatus::Discrepancy), 0, "{r}");
        assert_eq!(status(&r, "solver span"), AuditStatus::Pass);
    }

    #[test]
    fn underdamped_translations_commute() {
        let r = run(1, 1, 1);
        assert_eq!(status(&r, "[G4,G5]"), AuditStatus::Pass);
        assert_eq!(r.count(AuditStatus::Failure), 0, "{r}");
        let tpl = r.items.iter().find(|i| i.item == "solution template printed").unwrap();
        assert!(tpl.note.contains("C1 = 2*I4"), "{}", tpl.note);
    }

    #[test]
    fn overdamped_audit_flags_the_printed_defects() {
        let r = run(1, 3, 2);
        assert_eq!(r.count(AuditStatus::Failure), 0, "{r}");
        assert_eq!(status(&r, "generator X3"), AuditStatus::Discrepancy);
        assert_eq!(status(&r, "solution template printed form"), AuditStatus::Discrepancy);
        assert_eq!(status(&r, "solution template corrected"), AuditStatus::Pass);
        assert_eq!(status(&r, "Table I summary"), AuditStatus::Pass);
    }
}
