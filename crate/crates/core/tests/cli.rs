mod common;

use std::process::{Command, Output};

use common::*;
use heightkit::parse::parse_expression;
use heightkit::report::analyze_text;
use proptest::prelude::*;
use serde_json::Value;

fn heightkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heightkit")).args(args).output().unwrap()
}

fn analyze_json(expr: &str) -> Value {
    let out = heightkit(&["analyze", expr, "--trace", "--json", "-"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const CORPUS: &[&str] = &[
    "x1^2 + 2*x2",
    "(x2 - x1^2)^2 + x1^5",
    "x1^2*x2^2",
    "(x2^2 - x1^5)*(x2^2 - 2*x1^5)",
    "x^3 - 3*x*y^2",
    "x2^2 - x1^3",
    "x1^(3/2) + x2^2",
    "-(x1 - x2)^3 + 1/2*x1^4",
    "x1^(7/3)*x2 + x2^3",
    "(x2 - x1^(1/2))^3 + x1^4",
    "2/3*x1^2 - 4/9*x2^2",
    "((x1))^(4/2) + x2^2",
    "x1^0 + x2^0 - 2",
    "-x1^2 - -x2^2",
    "(x1 + x2)^6 - (x1 - x2)^6",
];

#[test]
fn corpus_round_trips() {
    for s in CORPUS {
        let p = parse_expression(s).unwrap();
        assert_eq!(parse_expression(&p.to_string()).unwrap(), p, "{s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn printed_polynomials_parse_back(p in puiseux_poly()) {
        prop_assert_eq!(parse_expression(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn textual_linear_pre_shear_keeps_height(i in 0usize..6, c in nonzero_rational()) {
        let inputs = [
            "(x2 - x1^2)^2 + x1^5",
            "x1^2*x2^2",
            "(x2^2 - x1^5)*(x2^2 - 2*x1^5)",
            "x2^2 - x1^3",
            "(x2 - x1^2)^2*(x2 + x1^3) + x1^9",
            "x2^3 + x1^2*x2 + x1^7",
        ];
        let text = inputs[i];
        let sheared = text.replace("x2", &format!("(x2 + ({c})*x1)"));
        let h = analyze_text(text).unwrap().adapted.height;
        prop_assert_eq!(analyze_text(&sheared).unwrap().adapted.height, h, "{}", sheared);
    }
}

#[test]
fn analyze_examples() {
    let r = analyze_json("(x2 - x1^2)^2 + x1^5");
    assert_eq!(r["indices"]["h"], "10/7");
    assert_eq!(r["adapt"]["sigma"], "x1^2");
    assert_eq!(r["newton"]["distance"], "4/3");
    assert_eq!(r["adapt"]["case"], "a");
    assert_eq!(r["adapt"]["trace"].as_array().unwrap().len(), 1);

    let r = analyze_json("x1^2*x2^2");
    assert_eq!(r["indices"]["h"], "2");
    assert_eq!(r["adapt"]["case"], "b");
    assert_eq!(r["jet"]["psi"], "0");

    let r = analyze_json("(x2^2 - x1^5)*(x2^2 - 2*x1^5)");
    assert_eq!(r["indices"]["h"], "20/7");
    assert_eq!(r["principal_part"]["exceptional"]["lambda_sum"], "3");
    assert_eq!(r["indices"]["beta"], "7/20");
    assert_eq!(r["indices"]["gamma"], "7/20");
}

#[test]
fn exit_codes() {
    assert_eq!(heightkit(&["analyze", "x2^2 + x1^4"]).status.code(), Some(0));
    let out = heightkit(&["analyze", "x3 + 1", "--json", "-"]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["error"]["code"], "unknown_variable");
    assert_eq!(v["error"]["offset"], 0);
    assert_eq!(heightkit(&["analyze", "x1 x2"]).status.code(), Some(1));
    assert_eq!(heightkit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(heightkit(&["verify-smallparam", "--kind", "84"]).status.code(), Some(1));
    assert_eq!(heightkit(&["--help"]).status.code(), Some(0));
    assert_eq!(heightkit(&["analyze", "x1 + x2^2"]).status.code(), Some(2));
    assert_eq!(heightkit(&["analyze", "0"]).status.code(), Some(2));
    assert_eq!(heightkit(&["analyze", "--shift", "3 + x1^2 + x2^2"]).status.code(), Some(0));
    // a deliberately wrong expected height fails the numeric check
    let out = heightkit(&["verify-decay", "x1^2 + x2^2", "--lmax", "2^7", "--expect-h", "3"]);
    assert_eq!(out.status.code(), Some(3));
}
