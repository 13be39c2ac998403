use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn matpoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matpoly"))
        .args(args)
        .env_remove("MATPOLY_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

fn ok(args: &[&str]) -> Value {
    let out = matpoly(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    json(&out)
}

fn fails(args: &[&str], code: i32, kind: &str) -> Value {
    let out = matpoly(args);
    assert_eq!(out.status.code(), Some(code), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], kind, "{v}");
    assert!(v["error"]["message"].is_string());
    v
}

fn temp_file(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("matpoly-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn snf_of_diagonal_example() {
    let v = ok(&["snf", &fixture("diag_snf.json")]);
    assert_eq!(v["invariants"], serde_json::json!(["z^3 - z^2", "z"]));
    assert_eq!(v["invariant_coeffs"][1], serde_json::json!(["0", "1"]));
    assert_eq!(v["D"][0][0]["text"], "z^3 - z^2");
}

#[test]
fn snf_of_scalar_power() {
    let doc = r#"{"m":3,"n":2,"variable":"z","field":"rational",
        "coeffs":[[["0","0","0"],["0","0","0"],["0","0","0"]],[["0","0","0"],["0","0","0"],["0","0","0"]]]}"#;
    let v = ok(&["snf", &temp_file("z2.json", doc)]);
    assert_eq!(v["invariants"], serde_json::json!(["z^2", "z^2", "z^2"]));
}

#[test]
fn classify_nilpotent_example() {
    let v = ok(&["classify", &fixture("nilpotent.json")]);
    assert_eq!(v["type"], serde_json::json!([1, -1]));
    assert_eq!(v["dimension"], 2);
    assert_eq!(v["invariants"], serde_json::json!(["z^2", "1"]));
}

#[test]
fn closure_of_nilpotent_leaf_contains_zero_leaf() {
    let v = ok(&["closure", &fixture("nilpotent.json"), "--other", &fixture("zero.json")]);
    assert_eq!(v["contains"], true);
    assert_eq!(v["contained_in"], false);
}

#[test]
fn malformed_json_is_a_parse_error() {
    let v = fails(&["snf", &temp_file("bad.json", "{\"m\": 2,")], 2, "parse");
    assert!(v["error"]["location"].as_str().unwrap().starts_with("line"));
}

#[test]
fn input_errors_exit_two() {
    fails(&["snf", "/nonexistent/doc.json"], 2, "io");
    fails(&["snf", &fixture("generic_complex.json")], 2, "field");
    fails(&["snf", &temp_file("short.json", r#"{"m":2,"n":1,"variable":"z","field":"rational"}"#)], 2, "schema");
    let bad_entry = r#"{"m":1,"n":1,"variable":"z","field":"rational","coeffs":[[["x"]]]}"#;
    let v = fails(&["classify", &temp_file("entry.json", bad_entry)], 2, "schema");
    assert_eq!(v["error"]["location"], "$.coeffs[0][0][0]");
    fails(&["bracket", &fixture("nilpotent.json"), "--indices", "1,1,2;1,1,1"], 2, "index_out_of_range");
    fails(&["verify", "--suite", "everything"], 2, "usage");
    fails(&["frobnicate"], 2, "usage");
}

#[test]
fn non_generic_spectrum_is_a_domain_error() {
    let zero = r#"{"m":2,"n":1,"variable":"z","field":"complex","coeffs":[[[[0,0],[0,0]],[[0,0],[0,0]]]]}"#;
    fails(&["factor", &temp_file("zero.json", zero)], 1, "non_generic_spectrum");
}

#[test]
fn factor_reconstructs_within_tolerance() {
    let v = ok(&["factor", &fixture("generic_complex.json")]);
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    assert!(v["residuals"]["product"].as_f64().unwrap() <= 1e-10);
    assert!(v["residuals"]["spectral"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn swap_with_equal_values_returns_the_factors() {
    let f = ok(&["factor", &fixture("generic_complex.json")]);
    let path = temp_file("factors.json", &f.to_string());
    let v = ok(&["swap", &path, "--lambda", "[1.5, -2]", "--mu", "[1.5, -2]"]);
    assert_eq!(v["factors"], f["factors"]);
    assert_eq!(v["residuals"]["product"], 0.0);
}

#[test]
fn swap_preserves_the_product() {
    let v = ok(&["swap", &fixture("generic_complex.json")]);
    assert!(v["residuals"]["product"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn orbit_returns_to_its_start() {
    let f = ok(&["factor", &fixture("generic_complex.json")]);
    let b = &f["partition"];
    let swapped = serde_json::json!([[b[1][0], b[0][1]], [b[0][0], b[1][1]]]);
    let seq = serde_json::json!([swapped, b]).to_string();
    let v = ok(&["orbit", &fixture("generic_complex.json"), "--sequence", &seq]);
    assert_eq!(v["charts"][0]["steps"].as_array().unwrap().len(), 1);
    let back = &v["charts"][1]["factors"];
    for (x, y) in flatten(back).iter().zip(flatten(&f["factors"])) {
        assert!((x - y).abs() <= 1e-8, "{x} vs {y}");
    }
    assert!(v["residuals"]["max_product"].as_f64().unwrap() <= 1e-9);
}

fn flatten(v: &Value) -> Vec<f64> {
    match v {
        Value::Array(a) => a.iter().flat_map(flatten).collect(),
        Value::Number(x) => vec![x.as_f64().unwrap()],
        _ => Vec::new(),
    }
}

#[test]
fn bracket_table_is_antisymmetric() {
    let v = ok(&["bracket", &fixture("generic_rational.json")]);
    let table = v["table"].as_array().unwrap();
    assert_eq!(table.len(), 8);
    for (i, row) in table.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            let y = table[j][i].as_str().unwrap();
            let neg = if y == "0" { "0".to_string() } else if let Some(s) = y.strip_prefix('-') { s.to_string() } else { format!("-{y}") };
            assert_eq!(x.as_str().unwrap(), neg);
        }
    }
    let c = ok(&["bracket", &fixture("generic_complex.json")]);
    assert!(c["residuals"]["casimir"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn flow_conserves_the_determinant() {
    let h = r#"[[[0.1,0.2],[0.3,-0.1]],[[0,0.1],[0.2,0]]]"#;
    let v = ok(&["flow", &fixture("generic_complex.json"), "--hamiltonian", h, "--time", "1", "--step", "0.1", "--estimate-order"]);
    assert_eq!(v["steps"], 10);
    assert!(v["residuals"]["max_drift"].as_f64().unwrap() <= 1e-6);
    assert!(v["residuals"]["convergence_order"].as_f64().unwrap() >= 3.5);
    assert_eq!(v["endpoint"]["field"], "complex");
}

#[test]
fn drinfeld_exact_and_numeric_agree_on_k() {
    let exact = ok(&["drinfeld", &fixture("generic_rational.json")]);
    let numeric = ok(&["drinfeld", &fixture("generic_complex.json")]);
    assert_eq!(exact["components"][0]["k"], 2);
    assert_eq!(numeric["components"][0]["k"], 2);
    assert!(numeric["residuals"]["pole"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_all_passes_on_fixtures() {
    for f in ["diag_snf.json", "generic_rational.json", "generic_complex.json", "nilpotent.json"] {
        let v = ok(&["verify", "--suite", "all", &fixture(f)]);
        assert_eq!(v["all_passed"], true, "{f}: {v}");
        assert_eq!(v["suites"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn seeded_output_is_byte_identical() {
    let a = matpoly(&["verify", "--suite", "factor", "--cases", "6", "--seed", "42"]);
    let b = matpoly(&["verify", "--suite", "factor", "--cases", "6", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_matpoly"))
        .args(["verify", "--suite", "factor", "--cases", "6"])
        .env("MATPOLY_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
    assert_eq!(json(&a)["seed"], 42);
    let f1 = matpoly(&["factor", &fixture("generic_complex.json")]);
    let f2 = matpoly(&["factor", &fixture("generic_complex.json")]);
    assert_eq!(f1.stdout, f2.stdout);
}
