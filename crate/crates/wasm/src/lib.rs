//! Browser bindings. Every export takes parameters as rational strings and
//! returns a JSON document.

use dho_noether::conservation::{conservation_drift, integrate_rk4};
use dho_noether::dho::audit::{audit_catalog, AuditSettings, AuditStatus};
use dho_noether::dho::{bateman_lagrangian, catalog, classify, new_lagrangian};
use dho_noether::noether::solve_dho;
use dho_noether::symexpr::Params;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Longest trajectory returned to the page, in samples.
const MAX_POINTS: usize = 2000;

fn params(m: &str, c: &str, k: &str) -> Result<Params, String> {
    Params::parse(m, c, k).map_err(|e| e.to_string())
}

/// Regime and solved generators with gauges.
pub fn symmetries_json(m: &str, c: &str, k: &str, lagrangian: &str) -> Result<Value, String> {
    let p = params(m, c, k)?;
    let l = match lagrangian {
        "new" => new_lagrangian(),
        _ => bateman_lagrangian(),
    };
    let d = classify(&p);
    let gens = solve_dho(&l, &p).map_err(|e| e.to_string())?;
    Ok(json!({
        "regime": d.to_string(),
        "lagrangian": l.with_params(&p).to_string(),
        "generators": gens.iter().enumerate().map(|(i, s)| json!({
            "name": format!("X{}", i + 1),
            "xi": s.field.xi.to_string(),
            "eta": s.field.eta.to_string(),
            "gauge": s.gauge.b.to_string(),
        })).collect::<Vec<_>>(),
    }))
}

/// RK4 trajectory plus the relative deviation of each catalog integral
/// from its initial value, sample by sample.
pub fn trajectory_json(m: &str, c: &str, k: &str, u0: f64, v0: f64, t_end: f64, h: f64) -> Result<Value, String> {
    let p = params(m, c, k)?;
    let tr = integrate_rk4(&p, (0.0, u0, v0), t_end, h).map_err(|e| e.to_string())?;
    let stride = tr.samples.len().div_ceil(MAX_POINTS).max(1);
    let picked: Vec<[f64; 3]> = tr.samples.iter().step_by(stride).copied().collect();
    let cat = catalog(&p);
    let mut integrals = Vec::new();
    for ci in &cat.integrals {
        let i = ci.integral.with_params(&p);
        let d = conservation_drift(&i, &tr).map_err(|e| e.to_string())?;
        let i0 = i.eval(0.0, u0, v0).map_err(|e| e.to_string())?;
        let series: Vec<f64> = picked
            .iter()
            .map(|[t, u, v]| i.eval(*t, *u, *v).map(|x| (x - i0).abs() / (d.scale + 1e-12)).unwrap_or(f64::NAN))
            .collect();
        integrals.push(json!({
            "label": i.label,
            "expr": i.expr.to_string(),
            "relative_drift": d.relative,
            "series": series,
        }));
    }
    Ok(json!({
        "regime": cat.regime.to_string(),
        "h": tr.h,
        "t": picked.iter().map(|s| s[0]).collect::<Vec<_>>(),
        "u": picked.iter().map(|s| s[1]).collect::<Vec<_>>(),
        "integrals": integrals,
    }))
}

/// Counts per status, every non-passing item, and the computed table.
pub fn audit_json(m: &str, c: &str, k: &str) -> Result<Value, String> {
    let p = params(m, c, k)?;
    let cat = catalog(&p);
    let report = audit_catalog(&cat, &AuditSettings::default());
    let count = |s| report.count(s);
    Ok(json!({
        "regime": cat.regime.to_string(),
        "table_name": cat.table_name,
        "pass": count(AuditStatus::Pass),
        "info": count(AuditStatus::Info),
        "discrepancy": count(AuditStatus::Discrepancy),
        "failure": count(AuditStatus::Failure),
        "notable": report.items.iter().filter(|i| i.status != AuditStatus::Pass).collect::<Vec<_>>(),
        "table": report.table.as_ref().map(|t| {
            (0..t.len()).flat_map(|i| ((i + 1)..t.len()).map(move |j| (i, j)))
                .map(|(i, j)| format!("[{},{}] = {}", t.names[i], t.names[j], t.entry_string(i, j)))
                .collect::<Vec<_>>()
        }),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn symmetries(m: &str, c: &str, k: &str, lagrangian: &str) -> Result<String, JsValue> {
    to_js(symmetries_json(m, c, k, lagrangian))
}

#[wasm_bindgen]
pub fn trajectory(m: &str, c: &str, k: &str, u0: f64, v0: f64, t_end: f64, h: f64) -> Result<String, JsValue> {
    to_js(trajectory_json(m, c, k, u0, v0, t_end, h))
}

#[wasm_bindgen]
pub fn audit(m: &str, c: &str, k: &str) -> Result<String, JsValue> {
    to_js(audit_json(m, c, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetries_lists_five_generators() {
        let v = symmetries_json("1", "2", "1", "bateman").unwrap();
        assert_eq!(v["generators"].as_array().unwrap().len(), 5);
        assert!(v["regime"].as_str().unwrap().starts_with("Critical"));
    }

    #[test]
    fn trajectory_is_downsampled_and_conserving() {
        let v = trajectory_json("1", "1", "1", 1.0, 0.0, 10.0, 1e-3).unwrap();
        assert!(v["t"].as_array().unwrap().len() <= MAX_POINTS + 1);
        for i in v["integrals"].as_array().unwrap() {
            assert!(i["relative_drift"].as_f64().unwrap() < 1e-8);
        }
    }

    #[test]
    fn audit_summary_counts() {
        let v = audit_json("1", "3", "2").unwrap();
        assert_eq!(v["discrepancy"], 2);
        assert_eq!(v["failure"], 0);
    }

    #[test]
    fn bad_parameters_are_errors() {
        assert!(symmetries_json("0", "1", "1", "bateman").is_err());
    }
}
