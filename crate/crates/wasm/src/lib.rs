//! Browser bindings. Every export takes plain numbers and returns a JSON
//! string; the logic lives in ordinary functions so it also runs natively.

use bikraw::angular::{ninej, NineJArgs};
use bikraw::chain::{kernel_closed, stationary_distribution, verify_spectrum, ChainParams};
use bikraw::poly::{grid, poly_p, tuvw_from_p, PParams};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Kernel, stationary law and spectrum arbitration for float parameters.
pub fn chain_summary(n: u32, alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<String, String> {
    let p = ChainParams::new(n, alpha1, alpha2, beta1, beta2).map_err(|e| e.to_string())?;
    let k = kernel_closed(&p);
    let report = verify_spectrum(&p).map_err(|e| e.to_string())?;
    Ok(json!({
        "states": k.space.states,
        "kernel": k.entries,
        "stationary": stationary_distribution(&p),
        "eigenvalues": report.numeric,
        "verdict": report.verdict(),
    })
    .to_string())
}

/// `P_{m,n}(x, y)` over the triangle for the weight given by `p`, as rows
/// indexed by `y` with `null` outside `x + y <= N`.
pub fn poly_heatmap(p: [f64; 4], big_n: u32, m: u32, n: u32) -> Result<String, String> {
    if m + n > big_n {
        return Err(format!("degree m + n = {} exceeds N = {big_n}", m + n));
    }
    let pp = PParams::new(p).map_err(|e| e.to_string())?;
    pp.check_nondegenerate().map_err(|e| e.to_string())?;
    let q = tuvw_from_p(&pp);
    let mut rows = vec![vec![None; big_n as usize + 1]; big_n as usize + 1];
    for (x, y) in grid(big_n) {
        rows[y as usize][x as usize] = Some(poly_p(m, n, x, y, big_n, &q).map_err(|e| e.to_string())?);
    }
    Ok(json!({ "n": big_n, "m": m, "mm": n, "tuvw": [q.t, q.u, q.v, q.w], "rows": rows }).to_string())
}

/// Exact 9-j symbol from nine `2j` values.
pub fn ninej_symbol(two_j: &[u32]) -> Result<String, String> {
    let arr: [u32; 9] = two_j.try_into().map_err(|_| format!("expected nine 2j values, got {}", two_j.len()))?;
    let args = NineJArgs::from_two_j(arr);
    let v = ninej(&args);
    Ok(json!({
        "coefficient": v.coefficient().to_string(),
        "radicand": v.radicand().to_string(),
        "value": v.to_f64(),
        "triads_ok": args.all_triads_ok(),
    })
    .to_string())
}

#[wasm_bindgen(js_name = chainSummary)]
pub fn chain_summary_js(n: u32, alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<String, JsValue> {
    chain_summary(n, alpha1, alpha2, beta1, beta2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = polyHeatmap)]
pub fn poly_heatmap_js(p1: f64, p2: f64, p3: f64, p4: f64, big_n: u32, m: u32, n: u32) -> Result<String, JsValue> {
    poly_heatmap([p1, p2, p3, p4], big_n, m, n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = ninejSymbol)]
pub fn ninej_symbol_js(two_j: &[u32]) -> Result<String, JsValue> {
    ninej_symbol(two_j).map_err(|e| JsValue::from_str(&e))
}
