use std::fs;
use std::process::Command;

use hadamard_permanent::verify::VerifyReport;
use hadamard_permanent::Valuation;
use hperm::{campaign_exit_code, run, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};

fn hperm(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hperm").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn reports(stdout: &str) -> Vec<VerifyReport> {
    stdout
        .lines()
        .map(|l| VerifyReport::from_json_line(l).unwrap())
        .collect()
}

#[test]
fn gen_writes_the_matrix_format() {
    let (code, out, _) = hperm(&["gen", "--n", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "2\n1 1\n1 -1\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h3.txt");
    let (code, out, _) = hperm(&["gen", "--n", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("8\n1 1 1 1 1 1 1 1\n"));

    let (code, _, err) = hperm(&["gen", "--n", "13"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("exceeds"), "{err}");
}

#[test]
fn gen_then_per_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h2.txt");
    let p = path.to_str().unwrap();
    assert_eq!(hperm(&["gen", "--n", "2", "--out", p]).0, EXIT_OK);
    for engine in ["naive", "laplace", "ryser", "glynn", "sum-expansion"] {
        let (code, out, err) = hperm(&["per", "--file", p, "--engine", engine]);
        assert_eq!(code, EXIT_OK, "{engine}: {err}");
        assert_eq!(out, "8\n");
    }
}

#[test]
fn per_sylvester_examples() {
    assert_eq!(
        hperm(&["per", "--sylvester", "2", "--engine", "naive"]).1,
        "8\n"
    );
    assert_eq!(hperm(&["per", "--sylvester", "1"]).1, "0\n");
    assert_eq!(hperm(&["per", "--sylvester", "0"]).1, "1\n");
}

#[test]
fn per_output_is_identical_across_engines_and_threads() {
    let expected = "384\n";
    for engine in [
        "naive",
        "laplace",
        "ryser",
        "glynn",
        "sum-expansion",
        "sylvester-fast",
        "auto",
    ] {
        for threads in ["1", "3", "auto"] {
            let (code, out, err) = hperm(&[
                "per",
                "--sylvester",
                "3",
                "--engine",
                engine,
                "--threads",
                threads,
            ]);
            assert_eq!(code, EXIT_OK, "{engine}/{threads}: {err}");
            assert_eq!(out, expected, "{engine}/{threads}");
        }
    }
}

#[test]
fn per_empty_matrix_file_prints_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    fs::write(&path, "0\n").unwrap();
    let (code, out, _) = hperm(&["per", "--file", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "1\n");
}

#[test]
fn per_file_accepts_general_integers_but_sign_engines_do_not() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("five.txt");
    fs::write(&path, "1\n5\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(hperm(&["per", "--file", p]).1, "5\n");
    let (code, _, err) = hperm(&["per", "--file", p, "--engine", "sum-expansion"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn malformed_matrix_reports_line_and_token() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.txt");
    fs::write(&short, "2\n1 1\n1\n").unwrap();
    let (code, _, err) = hperm(&["per", "--file", short.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 3") && err.contains("row 2"), "{err}");

    let token = dir.path().join("token.txt");
    fs::write(&token, "2\n1 x\n1 1\n").unwrap();
    let (code, _, err) = hperm(&["per", "--file", token.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("line 2") && err.contains("\"x\""), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &[],
        &["frobnicate"],
        &["per"],
        &["per", "--sylvester", "2", "--file", "x"],
        &["per", "--sylvester", "2", "--engine", "gauss"],
        &["per", "--sylvester", "2", "--threads", "0"],
        &["per", "--file", "/definitely/not/here.txt"],
        &["per", "--sylvester", "6", "--engine", "naive"],
        &["per", "--sylvester", "1", "--engine", "sylvester-fast"],
        &["verify", "--n-min", "3", "--n-max", "2"],
        &["verify", "--n-min", "2", "--n-max", "5"],
        &["verify", "--n-min", "2", "--n-max", "6", "--deep"],
        &[
            "verify", "--n-min", "4", "--n-max", "4", "--engine", "naive",
        ],
        &["bench", "--n-min", "2", "--n-max", "1"],
    ];
    for args in cases {
        let (code, _, err) = hperm(args);
        assert_eq!(code, EXIT_ERROR, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    assert_eq!(hperm(&["--help"]).0, EXIT_OK);
}

#[test]
fn verify_two_to_four() {
    let (code, out, _) = hperm(&["verify", "--n-min", "2", "--n-max", "4"]);
    assert_eq!(code, EXIT_OK);
    let reports = reports(&out);
    let theorem: Vec<_> = reports
        .iter()
        .filter(|r| r.check == "theorem")
        .map(|r| r.nu2.unwrap())
        .collect();
    assert_eq!(
        theorem,
        vec![
            Valuation::Finite(3),
            Valuation::Finite(7),
            Valuation::Finite(15)
        ]
    );
    assert!(reports.iter().all(|r| r.pass));
}

#[test]
fn verify_lines_have_the_report_schema() {
    let (_, out, _) = hperm(&["verify", "--n-min", "0", "--n-max", "2", "--deep"]);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        for key in obj.keys() {
            assert!(
                [
                    "check",
                    "n",
                    "size",
                    "value",
                    "nu2",
                    "expected",
                    "pass",
                    "engine",
                    "elapsed_ms",
                    "status"
                ]
                .contains(&key.as_str()),
                "{key}"
            );
        }
        for key in ["check", "n", "size", "pass", "engine", "elapsed_ms"] {
            assert!(obj.contains_key(key), "{line}");
        }
        if let Some(value) = obj.get("value") {
            assert!(value
                .as_str()
                .unwrap()
                .parse::<num_bigint::BigInt>()
                .is_ok());
        }
        if let Some(nu2) = obj.get("nu2") {
            assert!(nu2.is_u64() || nu2 == "inf", "{line}");
        }
    }
}

#[test]
fn verify_small_orders_are_not_failures() {
    let (code, out, _) = hperm(&["verify", "--n-min", "0", "--n-max", "1", "--deep"]);
    assert_eq!(code, EXIT_OK);
    let reports = reports(&out);
    let n1 = reports
        .iter()
        .find(|r| r.check == "theorem" && r.n == 1)
        .unwrap();
    assert_eq!(n1.value.as_ref().unwrap().to_string(), "0");
    assert_eq!(n1.nu2, Some(Valuation::Infinity));
    assert!(!n1.pass && !n1.is_failure());
}

#[test]
fn verify_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.jsonl");
    let (code, out, _) = hperm(&[
        "verify",
        "--n-min",
        "2",
        "--n-max",
        "3",
        "--deep",
        "--threads",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(reports(&text).iter().all(|r| r.pass));
}

#[test]
fn verify_with_each_engine() {
    for engine in [
        "naive",
        "laplace",
        "ryser",
        "glynn",
        "sum-expansion",
        "sylvester-fast",
    ] {
        let (code, out, err) =
            hperm(&["verify", "--n-min", "2", "--n-max", "3", "--engine", engine]);
        assert_eq!(code, EXIT_OK, "{engine}: {err}");
        let theorems: Vec<_> = reports(&out)
            .into_iter()
            .filter(|r| r.check == "theorem")
            .collect();
        assert_eq!(theorems.len(), 2);
        assert!(theorems.iter().all(|r| r.engine == engine && r.pass));
    }
}

#[test]
fn campaign_exit_code_contract() {
    let line = |pass: bool, status: &str| {
        VerifyReport::from_json_line(&format!(
            r#"{{"check":"theorem","n":2,"size":4,"value":"8","nu2":3,"expected":3,"pass":{pass},"engine":"ryser","elapsed_ms":0{status}}}"#
        ))
        .unwrap()
    };
    let pass = line(true, "");
    let fail = line(false, "");
    let not_applicable = line(false, r#","status":"not_applicable""#);
    let expected_fail = line(false, r#","status":"expected_fail""#);

    assert_eq!(campaign_exit_code(&[]), EXIT_OK);
    assert_eq!(campaign_exit_code(std::slice::from_ref(&pass)), EXIT_OK);
    assert_eq!(
        campaign_exit_code(&[pass.clone(), not_applicable.clone(), expected_fail.clone()]),
        EXIT_OK
    );
    assert_eq!(campaign_exit_code(&[pass, fail.clone()]), EXIT_CHECK_FAILED);
    assert_eq!(
        campaign_exit_code(&[not_applicable, expected_fail, fail]),
        EXIT_CHECK_FAILED
    );
}

#[test]
fn bench_emits_one_line_per_engine() {
    let (code, out, err) = hperm(&[
        "bench",
        "--n-min",
        "2",
        "--n-max",
        "3",
        "--engines",
        "ryser,glynn,naive",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    for line in &lines {
        assert_eq!(line["runs_ms"].as_array().unwrap().len(), 3);
        assert!(line["median_ms"].as_f64().unwrap() >= 0.0);
    }
    assert_eq!(lines[3]["value"], "384");
    assert_eq!(lines[3]["bench"], "ryser");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hperm");
    let ok = Command::new(bin)
        .args(["per", "--sylvester", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(ok.stdout, b"8\n");

    let usage = Command::new(bin).args(["per"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
