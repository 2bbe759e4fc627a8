use std::process::Command;

use serde_json::Value;

fn twisted(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twisted"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = twisted(args);
    (code, serde_json::from_str(&out).expect("JSON output"))
}

#[test]
fn qbinom_schema() {
    let (code, v) = json(&["qbinom", "4", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["n"], 4);
    assert_eq!(v["k"], 2);
    assert_eq!(v["value"], "1 + q + 2*q^2 + q^3 + q^4");
    let (_, v) = json(&["qbinom", "4", "2", "--q", "1", "--json"]);
    assert_eq!(v["value"], "6");
    let (_, v) = json(&["qbinom", "3", "-1", "--json"]);
    assert_eq!(v["value"], "0");
}

#[test]
fn taylor_schema() {
    let (code, v) = json(&["taylor", "xt^2", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 2);
    assert_eq!(v["coeffs"], serde_json::json!(["x^2", "(1+q)*x", "1"]));
}

#[test]
fn text_taylor_lists_coefficients() {
    let (code, out, _) = twisted(&["taylor", "xt^3", "--order", "3", "--q", "1", "--h", "1"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("c0 = "));
}

#[test]
fn xi_pow_and_twisted_pow() {
    let (code, v) = json(&["xi-pow", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "xt^2 - (1+q)*x*xt + q*x^2");
    let (code, v) = json(&["twisted-pow", "x", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "q^3*x^3");
}

#[test]
fn invert_xt_schema() {
    let (code, v) = json(&["invert-xt", "1", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], 1);
    assert_eq!(v["witness"], "((1+q)*x - xt) * (q*x^2)^-1");
    assert_eq!(v["check"], true);
    assert!(v["inverse"].is_string());
}

#[test]
fn verify_reports() {
    let (code, v) = json(&["verify-quotient", "x^2", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["case"], "quotient");
    assert!(v["checks"].as_object().unwrap().values().all(|b| b == true));
    let (code, v) = json(&["verify-localization", "2", "--samples", "5", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["case"], "localization");
    assert_eq!(v["seed"], 7);
    assert!(v["witness"].is_string());
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let (code, _, err) = twisted(&["taylor", "x +", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("position 4"), "{err}");
    assert_eq!(twisted(&["verify-quotient", "x-1", "2"]).0, 2);
    assert_eq!(twisted(&["taylor", "xt"]).0, 2);
    assert_eq!(twisted(&["qbinom", "4", "2", "--q", "0"]).0, 2);
    assert_eq!(twisted(&["xi-pow", "1", "--q", "abc"]).0, 2);
    assert_eq!(twisted(&["nonsense"]).0, 2);
    assert_eq!(twisted(&["xi-pow", "1", "--localize", "--quotient", "x^2"]).0, 2);
    let (code, _, err) = twisted(&["verify-localization", "1", "--h", "1"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn printed_output_reparses_to_itself() {
    for expr in ["xt^3 - 2*x*xt + 1/2", "(x + q*xt)^2", "q^-1*x^2 - xt"] {
        let (_, v) = json(&["taylor", expr, "0", "--json"]);
        let c0 = v["coeffs"][0].as_str().unwrap().to_owned();
        let (_, again) = json(&["taylor", &c0, "0", "--json"]);
        assert_eq!(again["coeffs"][0], c0.as_str());
    }
}

#[test]
fn quotient_carrier_reduces() {
    let (code, v) = json(&["twisted-pow", "x", "2", "--quotient", "x^2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "0");
}

#[test]
fn identities_small() {
    let (code, out, _) = twisted(&["identities", "--max", "6"]);
    assert_eq!(code, 0);
    assert!(out.ends_with(" checks, 0 failures\n"), "{out}");
}
