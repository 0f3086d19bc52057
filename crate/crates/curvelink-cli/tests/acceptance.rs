//! CLI acceptance: byte-determinism of `verify` and `graph --dot` across
//! repeated runs on every bundled fixture, plus schema round-trips and exit
//! codes.

use curvelink_cli::{run, InputDocument};

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

const FIXTURES: &[&str] = &[
    "paper5.json",
    "trefoil.json",
    "transversal.json",
    "stacked.json",
];

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["curvelink".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = String::new();
    let mut err = String::new();
    let code = run(&argv, &mut out, &mut err);
    (code, out, err)
}

#[test]
fn criterion_7_determinism() {
    for fixture in FIXTURES {
        let path = fixture_path(fixture);
        let mut verify_outputs = Vec::new();
        let mut dot_outputs = Vec::new();
        for _ in 0..3 {
            let (code, out, err) = run_cli(&["verify", &path]);
            assert_eq!(code, 0, "verify {} failed: {}", fixture, err);
            verify_outputs.push(out);
            let (code, out, err) = run_cli(&["graph", "--dot", &path]);
            assert_eq!(code, 0, "graph {} failed: {}", fixture, err);
            dot_outputs.push(out);
        }
        assert!(
            verify_outputs.windows(2).all(|w| w[0] == w[1]),
            "verify output differs across runs on {}",
            fixture
        );
        assert!(
            dot_outputs.windows(2).all(|w| w[0] == w[1]),
            "dot output differs across runs on {}",
            fixture
        );
    }
    println!(
        "criterion 7 (byte-identical verify and dot on {} fixtures): PASS",
        FIXTURES.len()
    );
}

#[test]
fn fixtures_round_trip() {
    for fixture in FIXTURES {
        let text = std::fs::read_to_string(fixture_path(fixture)).unwrap();
        let doc = InputDocument::parse(&text).unwrap();
        let emitted = doc.canonical_json();
        let doc2 = InputDocument::parse(&emitted).unwrap();
        assert_eq!(doc, doc2, "round trip failed on {}", fixture);
    }
}

#[test]
fn verify_reports_agreement() {
    let (code, out, _) = run_cli(&["verify", &fixture_path("paper5.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("3 pipelines agree"), "output: {}", out);
    assert!(
        out.contains("good order: [4, 1, 2, 3, 5]"),
        "output: {}",
        out
    );
}

#[test]
fn poincare_series_truncation() {
    let (code, out, _) = run_cli(&[
        "poincare",
        &fixture_path("trefoil.json"),
        "--expanded",
        "--truncate",
        "8",
    ]);
    assert_eq!(code, 0);
    assert!(
        out.contains("series: [1, 0, 1, 1, 1, 1, 1, 1, 1]"),
        "output: {}",
        out
    );
}

#[test]
fn invalid_inputs_exit_one() {
    // corrupted tree condition: smooth triple with contacts (0,1),(0,2),(0,3)
    let dir = std::env::temp_dir().join("curvelink-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{
  "branches": [ {"char": [1]}, {"char": [1]}, {"char": [1]} ],
  "pairs": { "mode": "intersection", "data": [[1,2,1],[1,3,2],[2,3,3]] }
}"#,
    )
    .unwrap();
    let (code, _, err) = run_cli(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("error:"), "stderr: {}", err);

    let missing = dir.join("missing.json");
    let (code, _, _) = run_cli(&["semigroup", missing.to_str().unwrap()]);
    assert_eq!(code, 1);

    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    let (code, _, _) = run_cli(&["contact", garbage.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn truncation_env_override() {
    let dir = std::env::temp_dir().join("curvelink-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("cusp_no_truncate.json");
    std::fs::write(&file, r#"{ "branches": [ {"char": [2, 3]} ] }"#).unwrap();
    std::env::set_var("CURVELINK_TRUNCATE", "5");
    let (code, out, _) = run_cli(&["poincare", file.to_str().unwrap(), "--expanded"]);
    std::env::remove_var("CURVELINK_TRUNCATE");
    assert_eq!(code, 0);
    assert!(
        out.contains("series: [1, 0, 1, 1, 1, 1]"),
        "output: {}",
        out
    );
}

#[test]
fn semigroup_output_shape() {
    let (code, out, _) = run_cli(&["semigroup", &fixture_path("paper5.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("branch 1: chars [3, 14] gens [3, 14]"));
    assert!(out.contains("conductor 26 symmetric true"));
    assert!(out.contains("(semigroup N)"));
}
