use serde_json::Value;
use twisted_wasm::{invert_xt, taylor};

#[test]
fn taylor_matches_cli_shape() {
    let v: Value = serde_json::from_str(&taylor("xt^2", "generic", "0", 2).unwrap()).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["coeffs"], serde_json::json!(["x^2", "(1+q)*x", "1"]));
}

#[test]
fn shift_twist_gives_finite_differences() {
    let v: Value = serde_json::from_str(&taylor("xt^3", "1", "1", 3).unwrap()).unwrap();
    assert_eq!(v["coeffs"][3], "1");
}

#[test]
fn invert_xt_witness() {
    let v: Value = serde_json::from_str(&invert_xt("generic", 1).unwrap()).unwrap();
    assert_eq!(v["witness"], "((1+q)*x - xt) * (q*x^2)^-1");
    assert_eq!(v["check"], true);
    let v: Value = serde_json::from_str(&invert_xt("2", 5).unwrap()).unwrap();
    assert_eq!(v["check"], true);
}
