use std::io::Write;
use std::process::Command;

use hopfq_core::pell::{solve_all, PellProblem};
use hopfq_core::report::ReportDocument;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopfq")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("bad JSON {text:?}: {e}"))
}

fn lines(text: &str) -> Vec<Value> {
    text.lines().map(json).collect()
}

fn decisions(doc: &Value) -> Vec<String> {
    doc["body"]["structures"].as_array().unwrap().iter().map(|s| s["decision"].as_str().unwrap().to_string()).collect()
}

fn pairs(v: &Value) -> Vec<(i64, i64)> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_str().unwrap().parse().unwrap(), p[1].as_str().unwrap().parse().unwrap()))
        .collect()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hopfq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(contents.as_bytes()).unwrap();
    path
}

#[test]
fn cyclic_examples() {
    let (code, out) = run(&["cyclic", "-a", "1", "-b", "9", "-c", "5"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["body"]["kind"], "field");
    let s = &doc["body"]["structures"][0];
    assert_eq!(s["decision"], "free");
    assert_eq!(s["generator"], serde_json::json!(["1", "1", "-17", "10"]));
    assert_eq!(s["index"], "16");

    let (code, out) = run(&["cyclic", "-a", "1", "-b", "3", "-c", "1"]);
    assert_eq!(code, 0);
    assert_eq!(decisions(&json(&out)), ["not_free"]);

    let (code, out) = run(&["cyclic", "-a", "1", "-b", "3", "-c", "3"]);
    assert_eq!(code, 2);
    let doc = json(&out);
    assert_eq!(doc["body"]["kind"], "error");
    assert_eq!(doc["body"]["error"], "NotSquarefree");
}

#[test]
fn biquadratic_examples() {
    let (code, out) = run(&["biquadratic", "-m", "5", "-n", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(decisions(&json(&out)), ["not_free"; 3]);

    let (code, out) = run(&["biquadratic", "-m", "-3", "-n", "-7"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    let by_subfield: Vec<(String, String)> = doc["body"]["structures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["subfield"].as_str().unwrap().into(), s["decision"].as_str().unwrap().into()))
        .collect();
    assert_eq!(
        by_subfield,
        [("sqrt(-3)".into(), "free".into()), ("sqrt(-7)".into(), "free".into()), ("sqrt(21)".into(), "not_free".into())]
    );

    let (code, out) = run(&["biquadratic", "-m", "4", "-n", "3"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["body"]["error"], "NotSquarefree");
}

#[test]
fn verify_oracle_agrees_on_small_fields() {
    let (code, out) = run(&["--verify-oracle", "--oracle-bound", "10", "biquadratic", "-m", "-3", "-n", "-7"]);
    assert_eq!(code, 0);
    for s in json(&out)["body"]["structures"].as_array().unwrap() {
        assert_eq!(s["oracle"]["agrees"], true, "{s}");
        assert_eq!(s["oracle"]["bound"], 10);
    }
}

#[test]
fn pell_examples() {
    let (code, out) = run(&["pell", "-D", "106", "-N", "9"]);
    assert_eq!(code, 0);
    let sols = pairs(&json(&out)["body"]["solutions"]);
    assert!(sols.contains(&(3, 0)) && sols.contains(&(103, 10)), "{sols:?}");

    let (_, out) = run(&["pell", "-D", "13", "-N", "3"]);
    assert!(pairs(&json(&out)["body"]["solutions"]).contains(&(4, 1)));

    let (code, out) = run(&["pell", "-D", "10", "-N", "3"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["body"]["class"], "empty");
    assert!(pairs(&doc["body"]["solutions"]).is_empty());

    let (code, out) = run(&["pell", "-D", "106", "-N", "9", "-b", "9", "-c", "5"]);
    assert_eq!(code, 0);
    let div = &json(&out)["body"]["divisibility"];
    let (x, y): (i64, i64) = (div["solution"][0].as_str().unwrap().parse().unwrap(), div["solution"][1].as_str().unwrap().parse().unwrap());
    assert_eq!(x * x - 106 * y * y, 9);
    assert_eq!((x - 5 * y).rem_euclid(9), 0);

    assert_eq!(run(&["pell", "-D", "0", "-N", "9"]).0, 2);
    assert_eq!(run(&["pell", "-D", "5", "-N", "0"]).0, 2);
}

#[test]
fn form_cycle_examples() {
    let (code, out) = run(&["form-cycle", "15", "14", "-15"]);
    assert_eq!(code, 0);
    let doc = json(&out);
    assert_eq!(doc["body"]["cycle"].as_array().unwrap().len(), 8);
    assert_eq!(doc["body"]["represents_one"], false);

    // principal form of discriminant 8
    let (code, out) = run(&["form-cycle", "1", "2", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["body"]["represents_one"], true);

    let (code, out) = run(&["form-cycle", "1", "0", "4"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["body"]["kind"], "error");
}

#[test]
fn gram_file_reports_index_and_generator_test() {
    let fixture = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures/power_basis_gram.txt");
    let (code, out) = run(&["gram-file", "--gram", fixture, "--beta", "1,1,1,0"]);
    assert_eq!(code, 0);
    let body = &json(&out)["body"];
    assert_eq!(body["index"], "16");
    assert_eq!(body["generator_determinant"], "-176");
    assert_eq!(body["is_generator"], false);

    assert_eq!(run(&["gram-file", "--gram", fixture, "--beta", "1,1,1"]).0, 2);
    assert_eq!(run(&["gram-file", "--gram", "/nonexistent/gram.txt"]).0, 2);
}

#[test]
fn corpus_keeps_order_and_reports_bad_lines() {
    let path = temp_file(
        "mixed.txt",
        "# comment\ncyclic 1 9 5\n\ncyclic 1 3 1\ncyclic 1 3 3\nbiquadratic -3 -7\nnonsense 1 2\ncyclic 3 2 1\n",
    );
    for extra in [&[][..], &["--parallel", "4"][..]] {
        let mut args = vec!["corpus", path.to_str().unwrap()];
        args.extend_from_slice(extra);
        let (code, out) = run(&args);
        assert_eq!(code, 2);
        let docs = lines(&out);
        let at: Vec<u64> = docs.iter().map(|d| d["line"].as_u64().unwrap()).collect();
        assert_eq!(at, [2, 4, 5, 6, 7, 8]);
        assert_eq!(docs[0]["command"], "cyclic");
        assert_eq!(decisions(&docs[0]), ["free"]);
        assert_eq!(decisions(&docs[1]), ["not_free"]);
        assert_eq!(docs[2]["body"]["error"], "NotSquarefree");
        assert_eq!(docs[3]["command"], "biquadratic");
        assert_eq!(docs[4]["body"]["error"], "parse");
        assert_eq!(decisions(&docs[5]), ["free"]);
    }
}

#[test]
fn corpus_three_cyclic_lines_and_empty_file() {
    let path = temp_file("three.txt", "cyclic 1 9 5\ncyclic 1 3 1\ncyclic 3 2 1\n");
    let (code, out) = run(&["corpus", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(lines(&out).len(), 3);

    let empty = temp_file("empty.txt", "");
    let (code, out) = run(&["corpus", empty.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());

    assert_eq!(run(&["corpus", "/nonexistent/corpus.txt"]).0, 2);
}

#[test]
fn documents_roundtrip_through_the_library_types() {
    for args in [
        &["cyclic", "-a", "1", "-b", "9", "-c", "5"][..],
        &["biquadratic", "-m", "-3", "-n", "-7"],
        &["pell", "-D", "106", "-N", "9", "-b", "9", "-c", "5"],
        &["form-cycle", "15", "14", "-15"],
        &["cyclic", "-a", "1", "-b", "3", "-c", "3"],
    ] {
        let (_, out) = run(args);
        let doc: ReportDocument = serde_json::from_str(&out).unwrap();
        let again = serde_json::to_value(&doc).unwrap();
        assert_eq!(again, json(&out), "{args:?}");
        let (_, pretty) = run(&[&["--pretty"][..], args].concat());
        assert_eq!(serde_json::from_str::<ReportDocument>(&pretty).unwrap(), doc);
    }
}

/// Whether `x^2 + a y^2 = s n0` has an integer solution for some sign `s`.
fn equation_solvable(a: i64, n0: i64) -> bool {
    [n0, -n0].into_iter().any(|n| {
        if a > 0 {
            // definite: |y| <= sqrt(n / a), |x| <= sqrt(n)
            n > 0 && (0..=n).any(|y| a * y * y <= n && (0..=n).any(|x| x * x + a * y * y == n))
        } else {
            !solve_all(&PellProblem::new(-a, n).unwrap()).is_empty()
        }
    })
}

#[test]
fn corpus_reproduces_the_biquadratic_summary_table() {
    // ten fields per row: m, n = 1 mod 4 / m = 1, n != 1 mod 4 / m = 3, n = 2 mod 4
    let rows: [&[(i64, i64)]; 3] = [
        &[(-3, -7), (5, 13), (-3, 5), (-7, 5), (5, -11), (13, -3), (-15, -7), (17, -3), (21, -7), (-11, -19)],
        &[(5, -2), (5, 3), (-3, 2), (-3, -1), (13, 7), (5, -6), (-7, 6), (17, -1), (21, 3), (-11, 10)],
        &[(3, 2), (-1, 2), (-1, 6), (3, -2), (7, 10), (-5, 6), (-1, -2), (11, -6), (15, 10), (-5, -10)],
    ];
    let text: String = rows.iter().flat_map(|r| r.iter()).map(|(m, n)| format!("biquadratic {m} {n}\n")).collect();
    let path = temp_file("table.txt", &text);
    let (code, out) = run(&["corpus", path.to_str().unwrap(), "--parallel", "3"]);
    assert_eq!(code, 0, "{out}");
    let docs = lines(&out);
    assert_eq!(docs.len(), 30);
    for (i, doc) in docs.iter().enumerate() {
        let row = i / 10;
        let body = &doc["body"];
        assert_eq!(body["family_class"], ["third", "second", "first"][row], "{body}");
        let p = |k: &str| -> i64 { body["params"][k].as_str().unwrap().parse().unwrap() };
        let (m, n, k, d) = (p("canonical_m"), p("canonical_n"), p("canonical_k"), p("d"));
        for s in body["structures"].as_array().unwrap() {
            let slot = s["canonical_slot"].as_u64().unwrap();
            let free = s["decision"] == "free";
            let expected = match (row, slot) {
                (1, 1 | 2) => false,
                (2, 0) => equation_solvable(m, 4 * d),
                (_, 0) => equation_solvable(m, 2 * d),
                (_, 1) => equation_solvable(n, 2 * d),
                _ => equation_solvable(k, (2 * n / d).abs()),
            };
            assert_eq!(free, expected, "row {row} field ({m},{n},{k}) slot {slot}");
        }
    }
}
