mod common;

use cyczeta::cli::{run, Outcome};

fn cmd(args: &[&str]) -> Outcome {
    let mut v = vec!["cyczeta".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    run(v)
}

fn path(name: &str) -> String {
    common::data_path(name).to_string_lossy().into_owned()
}

fn temp_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("cyczeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_example_reports_equal() {
    let out = cmd(&["verify", &path("example_A")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.ends_with("INVARIANT: equal\n"));
}

#[test]
fn verify_two_documents() {
    let before = path("double_point_surface_2");
    let blown = cmd(&["blowup", &before]);
    assert_eq!(blown.code, 0);
    let after = temp_file("after.json", &blown.stdout);
    let out = cmd(&["verify", &before, &after]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("INVARIANT: equal"));
}

#[test]
fn verify_detects_a_wrong_discrepancy() {
    let blown = cmd(&["blowup", &path("double_point_surface_2")]).stdout;
    let corrupted = blown.replacen("\"nu\": 3", "\"nu\": 4", 1);
    assert_ne!(corrupted, blown);
    let after = temp_file("corrupted.json", &corrupted);
    let out = cmd(&["verify", &path("double_point_surface_2"), &after]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("INVARIANT: NOT equal"));
    assert!(out.stdout.contains("witness:"));
}

#[test]
fn random_campaign() {
    let out = cmd(&["verify", "--random", "12", "--seed", "5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("random campaign: seed 5, 12 cases, 12 passed"));
}

#[test]
fn zeta_of_single_component() {
    let f = temp_file(
        "one.json",
        r#"{"ambient_dim": 1, "components": [{"id": "E1", "m": 1, "nu": 0}], "strata": [{"components": ["E1"], "cover": "W1"}]}"#,
    );
    let out = cmd(&["zeta", &f]);
    assert_eq!(out.stdout, "W1 * A(0,1)/(1-A(0,1))\n");
    assert_eq!(cmd(&["micc", &f]).stdout, "W1\n");
    assert_eq!(cmd(&["limit", &f]).stdout, "-W1\n");
    let naive = cmd(&["naive", &f]);
    assert_eq!(naive.code, 1);
    assert!(naive.stderr.contains("no geom class"));
}

#[test]
fn cusp_outputs() {
    let f = path("cusp");
    assert_eq!(cmd(&["topzeta", &f]).stdout, "(4*s + 5) / ((s + 1)*(6*s + 5))\n");
    let poles = cmd(&["poles", &f]).stdout;
    assert!(poles.contains("s = -1\n") && poles.contains("s = -5/6\n"));
    assert_eq!(cmd(&["twisted", "--order", "1", &f]).code, 0);
    assert_eq!(cmd(&["validate", &f]).stdout, "valid\n");
}

#[test]
fn selection_flag_overrides_document() {
    let f = path("cusp");
    let all = cmd(&["--selection", "C,E1,E2,E3", "zeta", &f]).stdout;
    let some = cmd(&["zeta", &f]).stdout;
    assert_ne!(all, some);
    assert!(all.contains("WC * A(1,1)/(1-A(1,1))"));
    let bad = cmd(&["zeta", "--selection", "Q", &f]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("dangling component id"));
}

#[test]
fn output_flag_writes_file() {
    let target = std::env::temp_dir().join(format!("cyczeta-out-{}.txt", std::process::id()));
    let t = target.to_string_lossy().into_owned();
    let out = cmd(&["micc", &path("cusp"), "--output", &t]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), cmd(&["micc", &path("cusp")]).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(cmd(&["zeta", "missing.json"]).code, 2);
    assert_eq!(cmd(&["frobnicate"]).code, 2);
    assert_eq!(cmd(&["--help"]).code, 0);
    let zero_m = temp_file(
        "m0.json",
        r#"{"ambient_dim": 1, "components": [{"id": "E1", "m": 0, "nu": 0}], "strata": []}"#,
    );
    let out = cmd(&["zeta", &zero_m]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("finite-type: m must be ≥ 1"));
    let out = cmd(&["validate", &zero_m]);
    assert_eq!(out.code, 2);
    let bad_expr = temp_file(
        "expr.json",
        r#"{"ambient_dim": 1, "components": [{"id": "E1", "m": 1, "nu": 0}], "strata": [{"components": ["E1"], "cover": "mu(2"}]}"#,
    );
    let out = cmd(&["zeta", &bad_expr]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("strata[0].cover: column 5"), "{}", out.stderr);
    let higher = temp_file(
        "pole.json",
        r#"{"ambient_dim": 2, "components": [{"id": "a", "m": 1, "nu": 1}, {"id": "b", "m": 2, "nu": 2}],
            "strata": [{"components": ["a", "b"], "cover": "1", "geom": "1"}]}"#,
    );
    let out = cmd(&["stringy", &higher]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("higher-order pole at T = uv"));
    let out = cmd(&["twisted", "--order", "0", &path("cusp")]);
    assert_eq!(out.code, 1);
    assert_eq!(cmd(&["verify", &path("cusp")]).code, 2);
}

#[test]
fn invalid_blowup_is_reported() {
    let f = temp_file(
        "badblow.json",
        r#"{"ambient_dim": 2, "components": [{"id": "E1", "m": 1, "nu": 0}],
            "strata": [{"components": ["E1"], "cover": "1"}],
            "blowups": [{"center_in": ["E1"], "codim": 0, "new_id": "X"}]}"#,
    );
    let out = cmd(&["validate", &f]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("ambient codimension < 2"));
    assert_eq!(cmd(&["blowup", &f]).code, 2);
}
