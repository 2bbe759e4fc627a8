//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Each export wraps a plain function returning `Result<String, String>`,
//! so the logic is tested natively.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::json;
use twisted_core::expr::parse_pp;
use twisted_core::{
    invert_xtilde, reduce_mod_ideal_power, specialize, taylor_expand, AlgebraCarrier,
    AlgebraElement, PPElement, QBinomTable, TwistSpec,
};
use wasm_bindgen::prelude::*;

const MAX_ORDER: usize = 40;

fn carrier(q: &str, h: &str) -> Result<AlgebraCarrier, String> {
    let rational = |s: &str, name: &str| {
        BigRational::from_str(s.trim()).map_err(|_| format!("{name}: expected p/r, got {s:?}"))
    };
    let q0 = match q.trim() {
        "" | "generic" => None,
        s => Some(rational(s, "q")?),
    };
    let h = if h.trim().is_empty() { BigRational::from_integer(0.into()) } else { rational(h, "h")? };
    let twist = TwistSpec::with_parameters(q0, h).map_err(|e| e.to_string())?;
    Ok(AlgebraCarrier::plain(twist))
}

fn bounded(n: usize) -> Result<usize, String> {
    if n > MAX_ORDER {
        Err(format!("order {n} exceeds the demo limit {MAX_ORDER}"))
    } else {
        Ok(n)
    }
}

/// Rows 0..=n of the q-binomial triangle as a JSON array of string arrays.
pub fn qbinom_rows(n: usize, q: &str) -> Result<String, String> {
    let n = bounded(n)?;
    let mode = carrier(q, "0")?.mode().clone();
    let table = QBinomTable::new(n as u32);
    let rows: Result<Vec<Vec<String>>, String> = (0..=n as u32)
        .map(|r| {
            table
                .row(r)
                .iter()
                .map(|c| match mode.specialized_value() {
                    Some(q0) => specialize(c, q0).map(|v| v.to_string()).map_err(|e| e.to_string()),
                    None => Ok(c.to_string()),
                })
                .collect()
        })
        .collect();
    Ok(json!(rows?).to_string())
}

/// Taylor coefficients of `expr` on the xi basis, as `{"order","coeffs"}`.
pub fn taylor(expr: &str, q: &str, h: &str, n: usize) -> Result<String, String> {
    let carrier = carrier(q, h)?;
    let e = parse_pp(expr, &carrier).map_err(|e| e.to_string())?;
    Ok(taylor_expand(&e, bounded(n)?).to_json())
}

/// Inverse of xt modulo the order-n ideal in the localization at x.
pub fn invert_xt(q: &str, n: usize) -> Result<String, String> {
    let loc = carrier(q, "0")?
        .make_localization(&[AlgebraElement::x()])
        .map_err(|e| e.to_string())?;
    let n = bounded(n)?;
    let w = invert_xtilde(&loc, n).map_err(|e| e.to_string())?;
    let check = reduce_mod_ideal_power(&(&PPElement::xtilde(&loc) * &w.inverse), n).is_one();
    Ok(json!({
        "order": n,
        "witness": w.witness_string(),
        "inverse": w.inverse.to_string(),
        "check": check,
    })
    .to_string())
}

#[wasm_bindgen(js_name = qbinomRows)]
pub fn qbinom_rows_js(n: usize, q: &str) -> Result<String, JsError> {
    qbinom_rows(n, q).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = taylor)]
pub fn taylor_js(expr: &str, q: &str, h: &str, n: usize) -> Result<String, JsError> {
    taylor(expr, q, h, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = invertXt)]
pub fn invert_xt_js(q: &str, n: usize) -> Result<String, JsError> {
    invert_xt(q, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_generic_and_specialized() {
        let v: serde_json::Value = serde_json::from_str(&qbinom_rows(4, "generic").unwrap()).unwrap();
        assert_eq!(v[4][2], "1 + q + 2*q^2 + q^3 + q^4");
        let v: serde_json::Value = serde_json::from_str(&qbinom_rows(4, "1").unwrap()).unwrap();
        assert_eq!(v[4], json!(["1", "4", "6", "4", "1"]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(qbinom_rows(MAX_ORDER + 1, "").is_err());
        assert!(taylor("x +", "", "", 2).unwrap_err().contains("position 4"));
        assert!(invert_xt("0", 1).is_err());
    }
}
