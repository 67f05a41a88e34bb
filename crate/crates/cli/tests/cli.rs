use std::path::PathBuf;
use std::process::{Command, Output};

use normlap::generators;
use normlap::spectral::Verdict;
use normlap::{Digraph, Tolerances};
use normlap_cli::document::{self, AnalysisDocument};
use serde_json::Value;

fn normlap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normlap"))
        .args(args)
        .output()
        .expect("run normlap")
}

fn write_input(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn analyze_file(name: &str, text: &str, extra: &[&str]) -> Output {
    let path = write_input(name, text);
    let mut args = vec!["analyze", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    normlap(&args)
}

#[test]
fn analyze_directed_triangle_is_tight() {
    let out = analyze_file("c3.txt", "3 3\n0 1\n1 2\n2 0\n", &["--brute-force"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!((doc["rhs"].as_f64().unwrap() - 0.25).abs() <= 1e-9);
    assert!((doc["brute_force"]["lhs"].as_f64().unwrap() - 0.25).abs() <= 1e-9);
    assert_eq!(doc["verdict"], "holds");
    assert_eq!(doc["selection"]["alpha"].as_f64().unwrap(), -2.0);
    assert_eq!(doc["spectrum"].as_array().unwrap().len(), 3);
    assert!(doc["reason"].is_null());
}

#[test]
fn analyze_path_is_not_applicable() {
    let out = analyze_file("path.txt", "3 2\n0 1\n1 2\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["reason"], "Laplacian not normal (not eulerian)");
    assert!(doc["spectrum"].is_null());
    assert!(doc["selection"].is_null());
    assert_eq!(doc["normality"]["laplacian"], false);
}

#[test]
fn analyze_disconnected_reports_spectrum_and_reason() {
    let out = analyze_file(
        "digons.txt",
        "4 4\n0 1\n1 0\n2 3\n3 2\n",
        &["--brute-force"],
    );
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["reason"], "digraph is not connected");
    assert!(doc["spectrum"].is_array());
    assert!(doc["rhs"].is_null());
}

#[test]
fn analyze_bidirected_triangle_has_no_separation() {
    let out = analyze_file(
        "k3.txt",
        "3 6\n0 1\n1 0\n1 2\n2 1\n0 2\n2 0\n",
        &["--brute-force"],
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(doc["rhs"].as_f64().unwrap().abs() <= 1e-12);
    assert_eq!(doc["brute_force"]["separations"], 0);
    assert!(doc["brute_force"]["witness"].is_null());
}

#[test]
fn analyze_text_output() {
    let out = analyze_file(
        "c3-text.txt",
        "# triangle\n3 3\n0 1\n1 2\n2 0\n",
        &["--brute-force", "--text"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict holds"));
    assert!(text.contains("alpha -2 (uniform-real-part)"));
}

#[test]
fn analyze_accepts_tolerance() {
    let out = analyze_file("c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n", &["--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["tolerances"]["tol"].as_f64(), Some(1e-12));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let out = analyze_file("bad.txt", "3 2\n0 1\n1 x\n", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let out = analyze_file("loop.txt", "2 1\n# comment\n1 1\n", &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(normlap(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(normlap(&["census", "--order", "7"]).status.code(), Some(3));
    assert_eq!(
        normlap(&["analyze", "/nonexistent/file"]).status.code(),
        Some(3)
    );
    assert_eq!(normlap(&["verify"]).status.code(), Some(3));
    assert_eq!(normlap(&["verify", "--order", "6"]).status.code(), Some(3));
    assert_eq!(
        normlap(&["generate", "tournament", "--n", "4", "--set", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(normlap(&["--help"]).status.code(), Some(0));
}

fn census_values(doc: &Value) -> Vec<Option<u64>> {
    [
        "digraphs",
        "eulerian",
        "regular",
        "normal_laplacian",
        "normal_adjacency",
        "normal",
        "connected_eulerian",
        "undirected",
    ]
    .iter()
    .map(|k| doc["row"][k].as_u64())
    .collect()
}

#[test]
fn census_order_4_matches_table() {
    let out = normlap(&["census", "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let expected = [218, 17, 5, 14, 14, 14, 12, 10].map(Some);
    assert_eq!(census_values(&doc), expected);
    for c in doc["comparison"].as_array().unwrap() {
        assert_eq!(c["matches"], true, "{c}");
    }
}

#[test]
fn census_order_5_matches_table() {
    let out = normlap(&["census", "--order", "5", "--shards", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = [9608, 107, 10, 43, 45, 43, 90, 31].map(Some);
    assert_eq!(census_values(&json(&out)), expected);
}

#[test]
fn census_order_6_short_mode_skips_unrestricted_count() {
    let out = normlap(&["census", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert!(doc["row"]["digraphs"].is_null());
    assert_eq!(doc["long"], false);
    let digraphs = doc["comparison"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["row"] == "digraphs")
        .unwrap();
    assert!(digraphs["matches"].is_null());
    assert_eq!(doc["row"]["eulerian"], 2269);
    assert_eq!(doc["row"]["connected_eulerian"], 2162);
}

#[test]
fn census_order_2_is_informational() {
    let out = normlap(&["census", "--order", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["row"]["digraphs"], 3);
    assert!(doc["comparison"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["published"].is_null()));
}

fn generated(args: &[&str]) -> Digraph {
    let out = normlap(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    Digraph::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn generate_tournament() {
    let g = generated(&["generate", "tournament", "--n", "5", "--set", "1,2"]);
    assert_eq!((g.n(), g.arc_count()), (5, 10));
    assert!(g.is_tournament());
}

#[test]
fn generate_cayley_c3_is_directed_triangle() {
    let g = generated(&["generate", "cayley", "--orders", "3", "--conn", "1"]);
    assert_eq!(g, generators::directed_cycle(3).unwrap());
    let g = generated(&[
        "generate", "cayley", "--orders", "2,2", "--conn", "1,0", "--conn", "0,1",
    ]);
    assert_eq!((g.n(), g.arc_count()), (4, 8));
    assert!(g.is_undirected());
}

#[test]
fn generate_random_is_deterministic() {
    let args = [
        "generate", "random", "--n", "4", "--cycles", "2", "--seed", "7",
    ];
    let a = normlap(&args);
    let b = normlap(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# random eulerian"));
    assert!(text.contains("ChaCha8"));
    assert!(Digraph::parse(&text).unwrap().is_balanced());
    let c = normlap(&["generate", "cayley", "--orders", "6", "--seed", "3"]);
    assert_eq!(
        c.stdout,
        normlap(&["generate", "cayley", "--orders", "6", "--seed", "3"]).stdout
    );
}

#[test]
fn generate_cycle_and_complete() {
    assert_eq!(generated(&["generate", "cycle", "--n", "6"]).arc_count(), 6);
    assert_eq!(
        generated(&["generate", "complete", "--n", "4"]).arc_count(),
        12
    );
}

#[test]
fn verify_order_4_holds() {
    let out = normlap(&["verify", "--order", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["digraphs"], 218);
    assert!(doc["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_tournaments_hold() {
    let out = normlap(&["verify", "--family", "tournaments", "--max-n", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["digraphs"], 2 + 4 + 8 + 16 + 32);
}

#[test]
fn verify_cayley_holds() {
    let out = normlap(&["verify", "--family", "cayley", "--max-n", "7"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn injected_fault_is_caught_with_witness() {
    let out = normlap(&["verify", "--order", "3", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let failures = doc["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(failures.iter().all(|f| f["check"] == "bound"));
    assert!(failures.iter().any(|f| f["witness"]["y"].is_array()));
}

#[test]
fn analysis_document_round_trips() {
    let tol = Tolerances::default();
    let inputs = [
        generators::rotational_tournament(7, &[1, 2, 4]).unwrap(),
        generators::directed_cycle(5).unwrap(),
        Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap(),
        Digraph::from_arcs(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap(),
    ];
    for g in &inputs {
        let doc = document::analyze(g, &tol, true).unwrap();
        let text = serde_json::to_string(&doc).unwrap();
        let back: AnalysisDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(doc.is_applicable(), doc.selection.is_some());
        if doc.is_applicable() {
            assert_eq!(doc.verdict, Some(Verdict::Holds));
        }
    }
}

#[test]
fn cli_output_round_trips() {
    let out = analyze_file(
        "t7.txt",
        &generators::rotational_tournament(7, &[1, 2, 4])
            .unwrap()
            .to_text(),
        &["--brute-force"],
    );
    let doc: AnalysisDocument = serde_json::from_slice(&out.stdout).unwrap();
    let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
    assert_eq!(again.as_bytes(), out.stdout.as_slice());
}
