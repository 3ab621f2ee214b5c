use std::process::{Command, Output};

use fmstab::chern::ChernVector;
use fmstab::flow::{MoebiusResult, PolarizationSolution};
use fmstab::sl2cf::GeneratorWord;
use fmstab::stability::SlopeValue;
use fmstab::suites::SuiteReport;
use fmstab::symrep::RepMatrix;
use serde_json::Value;

fn fmstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = fmstab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_kind(args: &[&str]) -> (i32, String) {
    let out = fmstab(args);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    (
        out.status.code().unwrap(),
        doc["error"]["kind"].as_str().unwrap().to_string(),
    )
}

#[test]
fn rep_of_poincare_is_signed_anti_diagonal() {
    let doc = json(&["rep", "--k", "3", "--matrix", "0,-1,1,0"]);
    let rho: RepMatrix = serde_json::from_value(doc).unwrap();
    let expected = [
        ["0", "0", "0", "1"],
        ["0", "0", "-1", "0"],
        ["0", "1", "0", "0"],
        ["-1", "0", "0", "0"],
    ];
    let text = serde_json::to_value(&rho).unwrap();
    assert_eq!(text["rows"], serde_json::to_value(expected).unwrap());
}

#[test]
fn rep_entry() {
    let doc = json(&["rep", "--k", "2", "--matrix", "2,-3,1,-1", "--entry", "2,2"]);
    // xw + yz
    assert_eq!(doc["value"], serde_json::json!({ "r": "-5", "s": "0" }));
}

#[test]
fn solve_classical_point() {
    let doc = json(&["solve", "--alpha-coeff", "1/2", "--beta", "1/2"]);
    assert_eq!(doc["quadruple"]["b"], "1/2");
    assert_eq!(doc["quadruple"]["m_coeff"], "1/2");
    assert_eq!(doc["quadruple"]["b_prime"], "-1/2");
    assert_eq!(doc["quadruple"]["m_prime_coeff"], "1/2");
    let solution: PolarizationSolution = serde_json::from_value(doc).unwrap();
    assert_eq!(
        fmstab::sl2cf::signed_isometry(&solution.word),
        solution.quadruple.matrix()
    );
}

#[test]
fn verify_summary() {
    let doc = json(&[
        "verify", "--suite", "prop43", "--cases", "500", "--seed", "7",
    ]);
    let report: SuiteReport = serde_json::from_value(doc).unwrap();
    assert_eq!((report.passed, report.failed), (500, 0));
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["verify", "--suite", "all", "--cases", "30", "--seed", "99"];
    let first = fmstab(&args);
    let second = fmstab(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["factorize", "--matrix", "7,-2,-3,1"][..],
        &[
            "moebius",
            "--matrix",
            "2,-3,1,-1",
            "--b",
            "1/3",
            "--m-coeff",
            "2/5",
        ],
        &["semihom", "--p", "1/6", "--q", "1/2"],
    ] {
        assert_eq!(fmstab(args).stdout, fmstab(args).stdout);
    }
}

#[test]
fn outputs_round_trip() {
    let doc = json(&["factorize", "--matrix", "7,-2,-3,1"]);
    let word: GeneratorWord = serde_json::from_value(doc["word"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&word).unwrap(), doc["word"]);

    let doc = json(&["transform", "--vector", "2,3,5,7", "--matrix", "0,-1,1,0"]);
    let v: ChernVector = serde_json::from_value(doc.clone()).unwrap();
    assert_eq!(serde_json::to_value(&v).unwrap(), doc);
    assert_eq!(doc["a"], serde_json::json!(["7", "-5", "3", "-2"]));

    let doc = json(&[
        "slope",
        "--vector",
        "1,0,0,0",
        "--b",
        "1/2",
        "--m-coeff",
        "1/2",
    ]);
    let s: SlopeValue = serde_json::from_value(doc.clone()).unwrap();
    assert_eq!(serde_json::to_value(&s).unwrap(), doc);

    let doc = json(&[
        "moebius",
        "--matrix",
        "0,-1,1,0",
        "--b",
        "1/2",
        "--m-coeff",
        "1/2",
    ]);
    let m: MoebiusResult = serde_json::from_value(doc.clone()).unwrap();
    assert_eq!(serde_json::to_value(&m).unwrap(), doc);
}

#[test]
fn antidiag_transform() {
    let doc = json(&[
        "transform",
        "--vector",
        "0,0,0,1",
        "--twist",
        "-2/3",
        "--matrix",
        "2,-3,1,-1",
        "--antidiag",
    ]);
    assert_eq!(doc["a"], serde_json::json!(["27", "0", "0", "0"]));
    assert_eq!(doc["twist"], "-1/3");
}

#[test]
fn charge_identities() {
    let doc = json(&[
        "charge", "--vector", "0,1,1,0", "--twist", "0", "--lambda", "1", "--matrix", "0,-1,1,0",
    ]);
    assert_eq!(doc["holds"], true);
    assert_eq!(doc["identity"]["closed_form"]["s"], "0");
}

#[test]
fn bg_modes() {
    let doc = json(&[
        "bg",
        "--mode",
        "strong",
        "--vector",
        "0,0,0,1",
        "--b",
        "1/2",
        "--m-coeff",
        "1/2",
    ]);
    assert_eq!(doc["verdict"], "fails");
    let doc = json(&[
        "bg",
        "--mode",
        "transfer",
        "--transfer",
        "0,1,0",
        "--lambda",
        "1",
        "--matrix",
        "0,-1,1,0",
    ]);
    assert_eq!(doc["verdict"], "concluded");
}

#[test]
fn real_factor_point() {
    let doc = json(&["moebius", "--matrix", "0,-1,1,0", "--lambda", "1"]);
    assert_eq!(doc["point"]["v"]["re"]["r"], "-1/2");
    assert_eq!(doc["closed_forms"]["matches_single_lambda"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(
        error_kind(&["rep", "--k", "3", "--matrix", "0.5,-1,1,0"]),
        (2, "parse".into())
    );
    assert_eq!(error_kind(&["nonsense"]), (2, "parse".into()));
    assert_eq!(
        error_kind(&["verify", "--suite", "unknown"]),
        (2, "parse".into())
    );
    assert_eq!(error_kind(&["cf", "--word", "1,0"]), (3, "domain".into()));
    assert_eq!(
        error_kind(&["factorize", "--matrix", "1,1,1,1"]),
        (3, "domain".into())
    );
    assert_eq!(
        error_kind(&["semihom", "--p", "1", "--q", "0"]),
        (3, "domain".into())
    );
    assert_eq!(
        error_kind(&[
            "transform",
            "--vector",
            "1,0,0,0",
            "--twist",
            "1/2",
            "--matrix",
            "0,-1,1,0"
        ]),
        (4, "precondition".into())
    );
    assert_eq!(
        error_kind(&["rep", "--k", "0", "--matrix", "1,0,0,1"]),
        (4, "precondition".into())
    );
}
