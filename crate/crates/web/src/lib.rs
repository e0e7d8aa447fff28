//! Browser bindings: marking and classification of a typed partition, the
//! step-by-step (p,t) map, and the companion coefficient table.
//!
//! Every export returns a JSON string so the page stays plain JavaScript.

use ggbij::bijection::phi_pt;
use ggbij::qseries::companion_bivariate;
use ggbij::{Analysis, MarkedPartition, Partition};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse(parts: &str) -> Result<Partition, String> {
    let values = parts
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|e| format!("bad part {s:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Partition::from_unsorted(values).map_err(|e| e.to_string())
}

fn grid(mp: &MarkedPartition) -> Value {
    json!({ "text": mp.render_grid(), "rows": mp.to_json()["rows"], "overline": mp.to_json()["overline"] })
}

/// Marking grid, starting types and every family membership with
/// `p + t <= max_m`.
pub fn analyse(parts: &str, k: usize, r: usize, max_m: i64) -> Result<Value, String> {
    let mp = MarkedPartition::mark(&parse(parts)?);
    let an = Analysis::new(mp, k, r).map_err(|e| e.to_string())?;
    let types: Vec<String> =
        an.profile().map(|p| p.types().iter().map(|t| t.to_string()).collect()).unwrap_or_default();
    let mut found = Vec::new();
    for m in 0..=max_m {
        for p in 0..=m as usize {
            let t = m - p as i64;
            let labels = [an.classify_lt(p, t), an.classify_sim(p, t), an.classify_eq(p, t)];
            for l in labels {
                if let Some(l) = l.map_err(|e| e.to_string())? {
                    found.push(json!({ "family": l.family, "p": l.p, "t": l.t, "j": l.j, "index": l.index }));
                }
            }
        }
    }
    Ok(json!({
        "grid": grid(&an.mp),
        "weight": an.mp.weight(),
        "member": an.in_c,
        "types": types,
        "memberships": found,
    }))
}

/// The dilation and insertion steps taking a strict member at `(p, t)` to
/// its image.
pub fn trace(parts: &str, k: usize, r: usize, p: usize, t: i64) -> Result<Value, String> {
    let mp = MarkedPartition::mark(&parse(parts)?);
    let an = Analysis::new(mp, k, r).map_err(|e| e.to_string())?;
    let out = phi_pt(&an, p, t).map_err(|e| e.to_string())?;
    let steps: Vec<Value> =
        out.trace.steps.iter().map(|s| json!({ "label": s.label, "grid": grid(&s.grid) })).collect();
    Ok(json!({ "start": grid(&an.mp), "steps": steps, "result": out.result.partition(), "receipts": out.receipts }))
}

/// Coefficients of `x^l q^n` for `n <= qmax`, one row per `n`.
pub fn companion(qmax: usize) -> Result<Value, String> {
    let bi = companion_bivariate(qmax).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> =
        (0..=qmax).map(|n| (0..=bi.degree(n)).map(|l| bi.coeff(n, l).to_string()).collect()).collect();
    Ok(json!(rows))
}

fn out(v: Result<Value, String>) -> Result<String, JsValue> {
    v.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = analyse)]
pub fn analyse_js(parts: &str, k: usize, r: usize, max_m: i32) -> Result<String, JsValue> {
    out(analyse(parts, k, r, max_m as i64))
}

#[wasm_bindgen(js_name = trace)]
pub fn trace_js(parts: &str, k: usize, r: usize, p: usize, t: i32) -> Result<String, JsValue> {
    out(trace(parts, k, r, p, t as i64))
}

#[wasm_bindgen(js_name = companion)]
pub fn companion_js(qmax: usize) -> Result<String, JsValue> {
    out(companion(qmax.min(60)))
}
