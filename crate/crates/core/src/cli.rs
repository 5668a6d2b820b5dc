//! Command-line front end. Every subcommand is a thin adapter over the
//! library; `run` returns the process exit code.

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::conservation::{
    conservation_drift, first_integral, integrate_rk4, integrate_rk4_eom, reconstruct_solution, verify_symbolic,
    FirstIntegral, Trajectory,
};
use crate::dho::audit::{audit_catalog, AuditReport, AuditSettings, AuditStatus};
use crate::dho::{bateman_lagrangian, catalog, classify, new_lagrangian, RegimeCatalog};
use crate::liealgebra::{jacobi_check, structure_constants, CommutatorTable};
use crate::noether::{check_noether, solve_dho, solve_symmetries, NoetherSymmetry};
use crate::symexpr::{is_zero_with, parse, Params, ZeroTest};
use crate::variational::{euler_lagrange, EquationOfMotion, Lagrangian};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISCREPANCY: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dho", version, about = "Noether symmetries and first integrals of the damped oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Mass, an exact rational such as 3 or 1/2.
    #[arg(short = 'm', global = true, default_value = "1", allow_hyphen_values = true)]
    m: String,
    /// Damping coefficient.
    #[arg(short = 'c', global = true, default_value = "2", allow_hyphen_values = true)]
    c: String,
    /// Spring constant.
    #[arg(short = 'k', global = true, default_value = "1", allow_hyphen_values = true)]
    k: String,
    /// bateman, new, or expr:<expression in t, u, u1, m, c, k>.
    #[arg(long, global = true, default_value = "bateman")]
    lagrangian: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// RK4 step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    h: f64,
    #[arg(long = "t-end", global = true, default_value_t = 10.0)]
    t_end: f64,
    /// Initial condition t0,u0,v0; repeatable.
    #[arg(long = "ic", global = true, allow_hyphen_values = true)]
    ic: Vec<String>,
    /// Tolerance of the randomized zero test.
    #[arg(long = "tol-zero", global = true, default_value_t = 1e-9)]
    tol_zero: f64,
    /// Bound on relative drift of first integrals.
    #[arg(long = "tol-drift", global = true, default_value_t = 1e-8)]
    tol_drift: f64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Damping regime from the sign of c^2 - 4km.
    Classify,
    /// Solve the determining equations for the Noether generators.
    Symmetries,
    /// First integrals of the solved generators.
    Integrals,
    /// Commutator table of the solved generators.
    Brackets,
    /// Closed-form solution rebuilt from two affine catalog integrals.
    Solve,
    /// Check the derivation symbolically and along RK4 trajectories.
    Verify,
    /// Audit the published catalog for the regime.
    Audit,
    /// RK4 trajectory from the first --ic as CSV.
    ExportTrajectory,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LagrangianChoice {
    Bateman,
    New,
    Custom(String),
}

impl LagrangianChoice {
    fn name(&self) -> String {
        match self {
            LagrangianChoice::Bateman => "bateman".into(),
            LagrangianChoice::New => "new".into(),
            LagrangianChoice::Custom(s) => format!("expr:{s}"),
        }
    }
}

/// Parsed and validated settings for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub params: Params,
    pub lagrangian_choice: LagrangianChoice,
    /// Lagrangian with the parameters substituted.
    pub lagrangian: Lagrangian,
    pub json: bool,
    pub h: f64,
    pub t_end: f64,
    pub initial_conditions: Vec<(f64, f64, f64)>,
    pub zero: ZeroTest,
    pub tol_drift: f64,
}

impl RunConfig {
    fn is_oscillator(&self) -> bool {
        !matches!(self.lagrangian_choice, LagrangianChoice::Custom(_))
    }

    fn audit_settings(&self) -> AuditSettings {
        AuditSettings {
            h: self.h,
            t_end: self.t_end,
            initial_conditions: self.initial_conditions.clone(),
            tol_drift: self.tol_drift,
            zero: self.zero.clone(),
            ..AuditSettings::default()
        }
    }

    fn params_json(&self) -> Value {
        json!({
            "m": self.params.m.to_string(),
            "c": self.params.c.to_string(),
            "k": self.params.k.to_string(),
        })
    }
}

fn parse_ic(s: &str) -> Result<(f64, f64, f64), String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad --ic {s:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c] if v.iter().all(|x| x.is_finite()) => Ok((*a, *b, *c)),
        _ => Err(format!("--ic expects three finite numbers t0,u0,v0, got {s:?}")),
    }
}

fn config(cli: &Cli) -> Result<RunConfig, String> {
    let params = Params::parse(&cli.m, &cli.c, &cli.k).map_err(|e| e.to_string())?;
    let choice = match cli.lagrangian.as_str() {
        "bateman" => LagrangianChoice::Bateman,
        "new" => LagrangianChoice::New,
        s => match s.strip_prefix("expr:") {
            Some(e) => LagrangianChoice::Custom(e.to_string()),
            None => return Err(format!("unknown --lagrangian {s:?}; expected bateman, new or expr:...")),
        },
    };
    let generic = match &choice {
        LagrangianChoice::Bateman => bateman_lagrangian(),
        LagrangianChoice::New => new_lagrangian(),
        LagrangianChoice::Custom(e) => Lagrangian::new(parse(e).map_err(|e| format!("--lagrangian: {e}"))?),
    };
    let lagrangian = generic.with_params(&params);
    if matches!(choice, LagrangianChoice::Custom(_)) {
        euler_lagrange(&lagrangian).map_err(|e| format!("--lagrangian: {e}"))?;
    }
    for (name, v) in [("--h", cli.h), ("--tol-zero", cli.tol_zero), ("--tol-drift", cli.tol_drift)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(format!("{name} must be positive, got {v}"));
        }
    }
    if !cli.t_end.is_finite() {
        return Err("--t-end must be finite".into());
    }
    let initial_conditions = if cli.ic.is_empty() {
        AuditSettings::default().initial_conditions
    } else {
        cli.ic.iter().map(|s| parse_ic(s)).collect::<Result<_, _>>()?
    };
    Ok(RunConfig {
        params,
        lagrangian_choice: choice,
        lagrangian,
        json: cli.format == Format::Json,
        h: cli.h,
        t_end: cli.t_end,
        initial_conditions,
        zero: ZeroTest {
            eps: cli.tol_zero,
            ..ZeroTest::default()
        },
        tol_drift: cli.tol_drift,
    })
}

/// Output of one subcommand before rendering.
struct Outcome {
    code: i32,
    text: String,
    json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Outcome {
        Outcome { code: EXIT_OK, text, json }
    }
}

fn failure(msg: impl Into<String>) -> Outcome {
    let msg = msg.into();
    Outcome {
        code: EXIT_INTERNAL,
        json: json!({ "error": msg }),
        text: format!("error: {msg}"),
    }
}

/// Runs the CLI on `argv` (program name first), writing the report to
/// `out` and usage errors to `err`.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let cfg = match config(&cli) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if cli.command == Command::ExportTrajectory && !cfg.json {
        return match trajectory(&cfg) {
            Ok(tr) => {
                let _ = write!(out, "{}", tr.to_csv());
                EXIT_OK
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_INTERNAL
            }
        };
    }
    let outcome = match cli.command {
        Command::Classify => cmd_classify(&cfg),
        Command::Symmetries => cmd_symmetries(&cfg),
        Command::Integrals => cmd_integrals(&cfg),
        Command::Brackets => cmd_brackets(&cfg),
        Command::Solve => cmd_solve(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Audit => cmd_audit(&cfg),
        Command::ExportTrajectory => cmd_export_json(&cfg),
    };
    let _ = if cfg.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&outcome.json).expect("json"))
    } else {
        writeln!(out, "{}", outcome.text)
    };
    outcome.code
}

fn cmd_classify(cfg: &RunConfig) -> Outcome {
    let d = classify(&cfg.params);
    Outcome::ok(
        d.to_string(),
        json!({
            "regime": d.regime.name(),
            "discriminant": d.discriminant.to_string(),
            "params": cfg.params_json(),
        }),
    )
}

/// Solved generators, in regime order for the oscillator Lagrangians.
fn solved(cfg: &RunConfig) -> Result<Vec<NoetherSymmetry>, String> {
    if cfg.is_oscillator() {
        solve_dho(&cfg.lagrangian, &cfg.params).map_err(|e| e.to_string())
    } else {
        let (a, b) = solve_symmetries(&cfg.lagrangian).map_err(|e| e.to_string())?;
        Ok(a.into_iter().chain(b).collect())
    }
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("X{i}")).collect()
}

fn header(cfg: &RunConfig) -> String {
    let mut s = format!("L = {}", cfg.lagrangian);
    if cfg.is_oscillator() {
        s = format!("{}, {}\n{s}", cfg.params, classify(&cfg.params));
    }
    s
}

fn cmd_symmetries(cfg: &RunConfig) -> Outcome {
    let syms = match solved(cfg) {
        Ok(s) => s,
        Err(e) => return failure(e),
    };
    let mut text = header(cfg);
    let mut gens = Vec::new();
    for (name, s) in names(syms.len()).iter().zip(&syms) {
        text.push_str(&format!("\n{name} = {}\n    B = {}", s.field, s.gauge));
        gens.push(json!({
            "name": name,
            "xi": s.field.xi.to_string(),
            "eta": s.field.eta.to_string(),
            "gauge": s.gauge.b.to_string(),
        }));
    }
    Outcome::ok(
        text,
        json!({
            "lagrangian": cfg.lagrangian_choice.name(),
            "params": cfg.params_json(),
            "generators": gens,
        }),
    )
}

fn integrals(cfg: &RunConfig, syms: &[NoetherSymmetry]) -> Result<Vec<FirstIntegral>, String> {
    syms.iter()
        .enumerate()
        .map(|(i, s)| first_integral(format!("I{}", i + 1), s, &cfg.lagrangian).map_err(|e| e.to_string()))
        .collect()
}

fn eom(cfg: &RunConfig) -> Result<EquationOfMotion, String> {
    euler_lagrange(&cfg.lagrangian).map_err(|e| e.to_string())
}

fn cmd_integrals(cfg: &RunConfig) -> Outcome {
    let (syms, eq) = match solved(cfg).and_then(|s| Ok((s, eom(cfg)?))) {
        Ok(x) => x,
        Err(e) => return failure(e),
    };
    let ints = match integrals(cfg, &syms) {
        Ok(i) => i,
        Err(e) => return failure(e),
    };
    let mut text = header(cfg);
    let mut list = Vec::new();
    let mut code = EXIT_OK;
    for i in &ints {
        let ok = verify_symbolic(i, &eq);
        if !ok {
            code = EXIT_INTERNAL;
        }
        text.push_str(&format!("\n{i}{}", if ok { "" } else { "    [NOT CONSERVED]" }));
        list.push(json!({ "label": i.label, "expr": i.expr.to_string(), "conserved": ok }));
    }
    Outcome {
        code,
        text,
        json: json!({
            "lagrangian": cfg.lagrangian_choice.name(),
            "params": cfg.params_json(),
            "integrals": list,
        }),
    }
}

fn table_text(t: &CommutatorTable) -> String {
    let mut s = String::new();
    for i in 0..t.len() {
        for j in (i + 1)..t.len() {
            s.push_str(&format!("\n[{},{}] = {}", t.names[i], t.names[j], t.entry_string(i, j)));
        }
    }
    s
}

fn cmd_brackets(cfg: &RunConfig) -> Outcome {
    let syms = match solved(cfg) {
        Ok(s) => s,
        Err(e) => return failure(e),
    };
    let basis: Vec<_> = syms.iter().map(|s| s.field.clone()).collect();
    let table = match structure_constants(&names(basis.len()), &basis, &cfg.params) {
        Ok(t) => t,
        Err(e) => return failure(e.to_string()),
    };
    let jacobi = jacobi_check(&table);
    let mut text = header(cfg);
    for (n, z) in table.names.iter().zip(&table.basis) {
        text.push_str(&format!("\n{n} = {z}"));
    }
    text.push_str(&table_text(&table));
    text.push_str(&format!("\nJacobi identity: {}", if jacobi { "holds" } else { "FAILS" }));
    Outcome {
        code: if jacobi { EXIT_OK } else { EXIT_INTERNAL },
        text,
        json: json!({
            "params": cfg.params_json(),
            "table": table.to_json_value(),
            "jacobi": jacobi,
        }),
    }
}

fn oscillator_only(cfg: &RunConfig, what: &str) -> Option<Outcome> {
    (!cfg.is_oscillator()).then(|| Outcome {
        code: EXIT_USAGE,
        text: format!("error: {what} needs the bateman or new Lagrangian"),
        json: json!({ "error": format!("{what} needs the bateman or new Lagrangian") }),
    })
}

fn cmd_solve(cfg: &RunConfig) -> Outcome {
    if let Some(o) = oscillator_only(cfg, "solve") {
        return o;
    }
    let cat = catalog(&cfg.params);
    let pick = |l: &str| cat.integrals.iter().find(|c| c.integral.label == l).map(|c| &c.integral);
    let (Some(ia), Some(ib)) = (pick(&cat.solution.from[0]), pick(&cat.solution.from[1])) else {
        return failure("catalog lacks the source integrals");
    };
    let sol = match reconstruct_solution(ia, ib, Some(cat.regime.regime)) {
        Ok(s) => s,
        Err(e) => return failure(e.to_string()),
    };
    let residual_ok = is_zero_with(&cfg.params.apply(&sol.residual()), &cfg.zero);
    let mut text = format!("{}, {}\n{ia}\n{ib}\n{sol}", cfg.params, cat.regime);
    let mut checks = Vec::new();
    let mut code = if residual_ok { EXIT_OK } else { EXIT_INTERNAL };
    for ic in &cfg.initial_conditions {
        let r = integrate_rk4(&cfg.params, *ic, cfg.t_end, cfg.h).map_err(|e| e.to_string()).and_then(|tr| {
            let ka = ia.eval(ic.0, ic.1, ic.2).map_err(|e| e.to_string())?;
            let kb = ib.eval(ic.0, ic.1, ic.2).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for [t, u, _] in &tr.samples {
                worst = worst.max((sol.eval(*t, ka, kb).map_err(|e| e.to_string())? - u).abs());
            }
            Ok(worst)
        });
        match r {
            Ok(d) => {
                text.push_str(&format!("\nmax |u - u_rk4| from ({}, {}, {}): {d:.3e}", ic.0, ic.1, ic.2));
                checks.push(json!({ "ic": [ic.0, ic.1, ic.2], "max_abs_du": d }));
            }
            Err(e) => {
                code = EXIT_INTERNAL;
                text.push_str(&format!("\nfrom ({}, {}, {}): {e}", ic.0, ic.1, ic.2));
                checks.push(json!({ "ic": [ic.0, ic.1, ic.2], "error": e }));
            }
        }
    }
    Outcome {
        code,
        text,
        json: json!({
            "regime": cat.regime.regime.name(),
            "params": cfg.params_json(),
            "from": [ia.label, ib.label],
            "solution": sol.u_of_t.to_string(),
            "residual_zero": residual_ok,
            "rk4": checks,
        }),
    }
}

fn cmd_verify(cfg: &RunConfig) -> Outcome {
    let mut items: Vec<(String, bool, String)> = Vec::new();
    let eq = match eom(cfg) {
        Ok(e) => e,
        Err(e) => return failure(e),
    };
    if cfg.is_oscillator() {
        let w = cfg.params.apply(&EquationOfMotion::damped_oscillator().w);
        let ok = is_zero_with(&eq.w.sub(&w), &cfg.zero);
        items.push(("Euler-Lagrange equation".into(), ok, format!("u'' = {}", eq.w)));
    }
    let syms = match solved(cfg) {
        Ok(s) => s,
        Err(e) => return failure(e),
    };
    items.push(("generator count".into(), syms.len() == 5, format!("{} generators", syms.len())));
    for (n, s) in names(syms.len()).iter().zip(&syms) {
        let ok = check_noether(&s.field, &s.gauge, &cfg.lagrangian);
        items.push((format!("Noether condition {n}"), ok, s.field.to_string()));
    }
    let ints = match integrals(cfg, &syms) {
        Ok(i) => i,
        Err(e) => return failure(e),
    };
    let trajs: Vec<Result<Trajectory, String>> = cfg
        .initial_conditions
        .iter()
        .map(|ic| {
            if cfg.is_oscillator() {
                integrate_rk4(&cfg.params, *ic, cfg.t_end, cfg.h)
            } else {
                integrate_rk4_eom(&eq, *ic, cfg.t_end, cfg.h)
            }
            .map_err(|e| e.to_string())
        })
        .collect();
    for i in &ints {
        items.push((format!("{} symbolic", i.label), verify_symbolic(i, &eq), i.expr.to_string()));
        for (ic, tr) in cfg.initial_conditions.iter().zip(&trajs) {
            let item = format!("{} drift from ({}, {}, {})", i.label, ic.0, ic.1, ic.2);
            match tr.as_ref().map_err(|e| e.clone()).and_then(|t| conservation_drift(i, t).map_err(|e| e.to_string())) {
                Ok(d) => items.push((item, d.relative < cfg.tol_drift, format!("{:.3e}", d.relative))),
                Err(e) => items.push((item, false, e)),
            }
        }
    }
    let all = items.iter().all(|(_, ok, _)| *ok);
    let mut text = header(cfg);
    for (item, ok, note) in &items {
        text.push_str(&format!("\n[{}] {item}: {note}", if *ok { "pass" } else { "FAIL" }));
    }
    Outcome {
        code: if all { EXIT_OK } else { EXIT_INTERNAL },
        text,
        json: json!({
            "lagrangian": cfg.lagrangian_choice.name(),
            "params": cfg.params_json(),
            "passed": all,
            "checks": items
                .iter()
                .map(|(item, ok, note)| json!({ "item": item, "pass": ok, "note": note }))
                .collect::<Vec<_>>(),
        }),
    }
}

/// Catalog export with the audit attached.
pub fn catalog_json(cat: &RegimeCatalog, report: &AuditReport) -> Value {
    json!({
        "regime": cat.regime.regime.name(),
        "params": {
            "m": cat.params.m.to_string(),
            "c": cat.params.c.to_string(),
            "k": cat.params.k.to_string(),
        },
        "generators": cat.generators.iter().map(|g| json!({
            "name": g.name,
            "xi": g.effective().xi.to_string(),
            "eta": g.effective().eta.to_string(),
            "gauge": g.gauge.as_ref().map(|b| b.b.to_string()),
        })).collect::<Vec<_>>(),
        "integrals": cat.integrals.iter().map(|i| i.integral.to_string()).collect::<Vec<_>>(),
        "solution": cat.solution.effective().to_string(),
        "table": report.table.as_ref().map(|t| t.to_json_value()),
        "audit": report.items,
    })
}

fn cmd_audit(cfg: &RunConfig) -> Outcome {
    if let Some(o) = oscillator_only(cfg, "audit") {
        return o;
    }
    let cat = catalog(&cfg.params);
    let report = audit_catalog(&cat, &cfg.audit_settings());
    let code = match report.worst() {
        AuditStatus::Failure => EXIT_INTERNAL,
        AuditStatus::Discrepancy => EXIT_DISCREPANCY,
        _ => EXIT_OK,
    };
    let mut text = format!("{}, {}\n", cfg.params, cat.regime);
    if let Some(t) = &report.table {
        text.push_str("computed brackets:");
        text.push_str(&table_text(t));
        text.push('\n');
    }
    let mismatches: Vec<_> = report
        .items
        .iter()
        .filter(|i| i.status == AuditStatus::Discrepancy && i.item.starts_with(&cat.table_name))
        .collect();
    text.push_str(&format!("{} mismatches: {}\n", cat.table_name, mismatches.len()));
    text.push_str(&report.to_string());
    Outcome {
        code,
        text,
        json: catalog_json(&cat, &report),
    }
}

fn trajectory(cfg: &RunConfig) -> Result<Trajectory, String> {
    let ic = cfg.initial_conditions[0];
    if cfg.is_oscillator() {
        integrate_rk4(&cfg.params, ic, cfg.t_end, cfg.h)
    } else {
        integrate_rk4_eom(&eom(cfg)?, ic, cfg.t_end, cfg.h)
    }
    .map_err(|e| e.to_string())
}

fn cmd_export_json(cfg: &RunConfig) -> Outcome {
    match trajectory(cfg) {
        Ok(tr) => Outcome::ok(
            String::new(),
            json!({
                "h": tr.h,
                "initial": [tr.initial.0, tr.initial.1, tr.initial.2],
                "samples": tr.samples,
            }),
        ),
        Err(e) => failure(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("dho").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_critical() {
        let (code, out, _) = call(&["classify", "-m", "1", "-c", "2", "-k", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "Critical (c^2 - 4km = 0)");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(call(&["classify", "-m", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--ic", "1,2"]).0, EXIT_USAGE);
        assert_eq!(call(&["symmetries", "--lagrangian", "expr:u*u1"]).0, EXIT_USAGE);
        assert_eq!(call(&["classify", "--tol-drift", "-1"]).0, EXIT_USAGE);
    }

    #[test]
    fn rational_parameters_are_exact() {
        let (_, out, _) = call(&["classify", "-m", "1/4", "-c", "1", "-k", "1", "--format", "json"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["regime"], "Critical");
    }

    #[test]
    fn custom_lagrangian_symmetries() {
        let (code, out, _) = call(&["symmetries", "--lagrangian", "expr:u1^2/2 - u^2/2", "--format", "json"]);
        assert_eq!(code, 0, "{out}");
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["generators"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn export_trajectory_csv() {
        let (code, out, _) = call(&["export-trajectory", "--ic", "0,1,0", "--t-end", "1", "--h", "0.25"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines[0], "t,u,u1");
        assert_eq!(lines.len(), 6);
    }
}
