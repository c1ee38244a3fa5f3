use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nlrpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlrpb"))
        .args(args)
        .env_remove("NLRPB_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn checks(report: &Value) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for s in report["sections"].as_array().unwrap() {
        if s["kind"] == "report" {
            for c in s["value"]["checks"].as_array().unwrap() {
                out.push((
                    c["name"].as_str().unwrap().to_string(),
                    c["pass"].as_bool().unwrap(),
                ));
            }
        }
    }
    out
}

fn section<'a>(report: &'a Value, title: &str) -> &'a Value {
    report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["title"] == title)
        .unwrap_or_else(|| panic!("no section {title}"))
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn matrix(v: &Value) -> (usize, Vec<f64>) {
    let data = v["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    (v["rows"].as_u64().unwrap() as usize, data)
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn equal_parameters_are_rejected_with_code_2() {
    let out = nlrpb(&["model", "two-param", "--beta", "1", "--delta", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta equals delta"));
}

#[test]
fn missing_parameters_and_bad_arguments_are_code_2() {
    assert_eq!(code(&nlrpb(&["model", "two-param", "--beta", "1"])), 2);
    assert_eq!(code(&nlrpb(&["model", "chebyshev", "--n", "1"])), 2);
    assert_eq!(
        code(&nlrpb(&[
            "model",
            "two-param",
            "--beta",
            "1",
            "--delta",
            "2"
        ])),
        2
    );
    assert_eq!(code(&nlrpb(&["paper-tables", "n9"])), 2);
    assert_eq!(code(&nlrpb(&["paper-tables", "n2", "--tol", "-1"])), 2);
}

#[test]
fn two_param_model_report() {
    let out = nlrpb(&["model", "two-param", "--beta", "2", "--delta", "-1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let eps: Vec<f64> = serde_json::from_value(section(&r, "spectrum")["value"].clone()).unwrap();
    assert!(close(&eps, &[0.0, 4.5], 1e-12));
    assert!(
        section(&r, "metric")["value"]["metric_condition_number"]
            .as_f64()
            .unwrap()
            >= 1.0
    );
    assert!(checks(&r).iter().all(|(_, pass)| *pass));
    assert_eq!(section(&r, "output")["kind"], "document");
}

#[test]
fn chebyshev_five_report_and_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    let out = nlrpb(&[
        "model",
        "chebyshev",
        "--n",
        "5",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let eps: Vec<f64> =
        serde_json::from_value(section(&report(&out), "spectrum")["value"].clone()).unwrap();
    assert!(close(
        &eps,
        &[0.0, 0.726542529, 1.902113032, 3.077683536, 3.804226065],
        1e-8
    ));
    let doc = read(&path);
    for key in ["model", "system", "ladders", "matrix", "metrics"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["model"]["family"], "chebyshev");
    assert_eq!(doc["system"]["n"], 5);
}

#[test]
fn verify_generated_and_paper_normalized_systems() {
    let dir = tempfile::tempdir().unwrap();
    for (n, norm) in [("8", "uniform"), ("3", "paper"), ("2", "paper")] {
        let path = dir.path().join(format!("{n}-{norm}.json"));
        let p = path.to_str().unwrap();
        assert_eq!(
            code(&nlrpb(&[
                "model",
                "chebyshev",
                "--n",
                n,
                "--normalization",
                norm,
                "-o",
                p
            ])),
            0
        );
        let out = nlrpb(&["verify", p]);
        assert_eq!(code(&out), 0, "N={n} {norm}");
        let r = report(&out);
        assert_eq!(r["pass"], true);
        for s in r["sections"].as_array().unwrap() {
            let checks = s["value"]["checks"].as_array().unwrap();
            for c in checks {
                assert!(c["residual"].as_f64().unwrap() < 1e-9, "{c}");
                assert!(c["tolerance"].is_number() && c["pass"].is_boolean());
            }
            let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
            assert!(names.windows(2).all(|w| w[0] < w[1]), "{names:?}");
        }
        let names: Vec<String> = checks(&r).into_iter().map(|(n, _)| n).collect();
        assert!(
            names.iter().any(|n| n.starts_with("p5"))
                && names.iter().any(|n| n.starts_with("commutator"))
        );
    }
}

#[test]
fn corrupted_levels_fail_the_ladder_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        code(&nlrpb(&["model", "chebyshev", "--n", "4", "-o", p])),
        0
    );
    let mut doc = read(&path);
    let e1 = doc["system"]["eps"][1].as_f64().unwrap();
    doc["system"]["eps"][1] = Value::from(e1 + 0.1);
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let out = nlrpb(&["verify", p]);
    assert_eq!(code(&out), 1);
    let failed: Vec<String> = checks(&report(&out))
        .into_iter()
        .filter(|c| !c.1)
        .map(|c| c.0)
        .collect();
    assert!(failed.iter().any(|n| n.starts_with("p3.")), "{failed:?}");
}

#[test]
fn invalid_system_is_a_failed_check_not_a_crash() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let basis = [[1.0, 0.0], [0.0, 1.0]];
    let sys = serde_json::json!({"n": 2, "eps": [0.0, 0.0], "phi": basis, "eta": basis});
    std::fs::write(&path, sys.to_string()).unwrap();
    let out = nlrpb(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        checks(&report(&out)),
        vec![("system.valid".to_string(), false)]
    );
}

#[test]
fn io_and_parse_errors_are_code_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&nlrpb(&[
            "verify",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        3
    );
    let path = dir.path().join("junk.json");
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(code(&nlrpb(&["verify", path.to_str().unwrap()])), 3);
    std::fs::write(&path, r#"{"unrelated": 1}"#).unwrap();
    assert_eq!(code(&nlrpb(&["verify", path.to_str().unwrap()])), 3);
    std::fs::write(
        &path,
        r#"{"h_matrix": {"rows": 2, "cols": 2, "data": [1.0]}, "theta": 1}"#,
    )
    .unwrap();
    assert_eq!(
        code(&nlrpb(&["convert", "crypto2nlrpb", path.to_str().unwrap()])),
        3
    );
}

#[test]
fn n2_system_converts_to_its_metric() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("p2.json");
    let pair = dir.path().join("pair.json");
    assert_eq!(
        code(&nlrpb(&[
            "model",
            "chebyshev",
            "--n",
            "2",
            "--normalization",
            "paper",
            "-o",
            sys.to_str().unwrap()
        ])),
        0
    );
    let out = nlrpb(&[
        "convert",
        "nlrpb2crypto",
        sys.to_str().unwrap(),
        "-o",
        pair.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let r2 = 2f64.sqrt();
    let (n, theta) = matrix(&read(&pair)["theta"]);
    assert_eq!(n, 2);
    assert!(
        close(&theta, &[0.75, -r2 / 4.0, -r2 / 4.0, 1.5], 1e-12),
        "{theta:?}"
    );
    let (_, h) = matrix(&read(&pair)["h_matrix"]);
    assert!(close(&h, &[r2, 2.0, 1.0, r2], 1e-12), "{h:?}");

    let out = nlrpb(&["verify", pair.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
}

#[test]
fn hermitian_input_with_identity_metric_is_self_dual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h3.json");
    let out_path = dir.path().join("sys.json");
    let (r2, r3) = (2f64.sqrt(), 3f64.sqrt());
    let pair = serde_json::json!({
        "h_matrix": {"rows": 3, "cols": 3, "data": [r3, r2, 0.0, r2, r3, 1.0, 0.0, 1.0, r3]},
        "theta": {"rows": 3, "cols": 3, "data": [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]},
    });
    std::fs::write(&path, pair.to_string()).unwrap();
    let out = nlrpb(&[
        "convert",
        "crypto2nlrpb",
        path.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc = read(&out_path);
    let phi: Vec<Vec<f64>> = serde_json::from_value(doc["system"]["phi"].clone()).unwrap();
    let eta: Vec<Vec<f64>> = serde_json::from_value(doc["system"]["eta"].clone()).unwrap();
    for (p, e) in phi.iter().zip(&eta) {
        assert!(close(p, e, 1e-12));
        assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
    assert_eq!(code(&nlrpb(&["verify", out_path.to_str().unwrap()])), 0);
}

#[test]
fn n4_roundtrip_through_both_directions() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("c4.json");
    let pair = dir.path().join("pair.json");
    let back = dir.path().join("back.json");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    assert_eq!(
        code(&nlrpb(&["model", "chebyshev", "--n", "4", "-o", &s(&sys)])),
        0
    );
    let out = nlrpb(&["convert", "nlrpb2crypto", &s(&sys), "-o", &s(&pair)]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    for (name, pass) in checks(&r) {
        assert!(pass, "{name}");
    }
    let roundtrip = section(&r, "roundtrip");
    for c in roundtrip["value"]["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() < 1e-9);
    }
    assert_eq!(
        code(&nlrpb(&[
            "convert",
            "crypto2nlrpb",
            &s(&pair),
            "-o",
            &s(&back)
        ])),
        0
    );
    assert_eq!(code(&nlrpb(&["verify", &s(&back)])), 0);
}

#[test]
fn identity_metric_for_the_chebyshev_matrix_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    let r2 = 2f64.sqrt();
    let pair = serde_json::json!({
        "h_matrix": {"rows": 2, "cols": 2, "data": [r2, 2.0, 1.0, r2]},
        "theta": {"rows": 2, "cols": 2, "data": [1.0, 0.0, 0.0, 1.0]},
    });
    std::fs::write(&path, pair.to_string()).unwrap();
    let out = nlrpb(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert_eq!(
        code(&nlrpb(&["convert", "crypto2nlrpb", path.to_str().unwrap()])),
        1
    );
}

#[test]
fn paper_tables_pass_in_every_format() {
    for which in ["n2", "n3", "n4", "n5", "two-param"] {
        let out = nlrpb(&["paper-tables", which]);
        assert_eq!(code(&out), 0, "{which}");
        let r = report(&out);
        for row in r["sections"][0]["value"].as_array().unwrap() {
            assert!(row["deviation"].as_f64().unwrap() < 1e-8, "{which}: {row}");
        }
        let md = nlrpb(&["paper-tables", which, "--format", "md"]);
        assert_eq!(code(&md), 0);
        assert!(String::from_utf8_lossy(&md.stdout).contains("| quantity | paper | computed |"));
        let csv = nlrpb(&["paper-tables", which, "--format", "csv"]);
        let text = String::from_utf8(csv.stdout).unwrap();
        assert!(text.starts_with("section,name,residual,tolerance,pass,paper,computed"));
        assert_eq!(
            text.lines().count(),
            r["sections"][0]["value"].as_array().unwrap().len() + 1
        );
    }
}

#[test]
fn paper_table_contents() {
    let md = String::from_utf8(nlrpb(&["paper-tables", "n2", "--format", "md"]).stdout).unwrap();
    let r17 = 17f64.sqrt();
    assert!(md.contains(&format!("{:.12}", (9.0 - r17) / 8.0)));
    assert!(md.contains(&format!("{:.12}", (9.0 + r17) / 8.0)));

    let r = report(&nlrpb(&["paper-tables", "n3"]));
    let rows = r["sections"][0]["value"].as_array().unwrap();
    let diag: Vec<f64> = ["S_eta[0,0]", "S_eta[1,1]", "S_eta[2,2]"]
        .iter()
        .map(|q| {
            rows.iter().find(|x| x["quantity"] == *q).unwrap()["computed"]
                .as_f64()
                .unwrap()
        })
        .collect();
    assert!(close(&diag, &[3.0, 6.0, 6.0], 1e-12));
    assert!(rows
        .iter()
        .all(|x| x["deviation"].as_f64().unwrap() < 1e-12));

    let r = report(&nlrpb(&["paper-tables", "n4"]));
    let alpha: Vec<f64> = r["sections"][0]["value"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["quantity"].as_str().unwrap().starts_with("alpha"))
        .map(|x| x["paper"].as_f64().unwrap())
        .collect();
    let r2 = 2f64.sqrt();
    assert!(close(&alpha, &[0.0, 2.0 - r2, r2, 2.0], 0.0));
}

#[test]
fn environment_tolerance_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_nlrpb"))
        .args(["model", "chebyshev", "--n", "3"])
        .env("NLRPB_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["metadata"]["tolerances"]["axioms"], 1e-7);
    for s in r["sections"].as_array().unwrap() {
        if s["kind"] == "report" {
            assert!(s["value"]["checks"]
                .as_array()
                .unwrap()
                .iter()
                .all(|c| c["tolerance"] == 1e-7));
        }
    }
    assert!(r["metadata"]["timestamp"].as_str().unwrap().ends_with('Z'));
}
