use std::process::Command;

use binomod_cli::{csv_to_json, run};
use serde_json::Value;

fn call(args: &str) -> (Value, i32) {
    let argv = std::iter::once("binomod").chain(args.split_whitespace());
    let (out, code) = run(argv);
    (
        serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args}: {e}\n{out}")),
        code,
    )
}

fn result_field(args: &str, field: &str) -> String {
    let (v, code) = call(args);
    assert_eq!(code, 0, "{args}: {v}");
    assert_eq!(v["status"], "ok");
    v["result"][field]
        .as_str()
        .unwrap_or_else(|| panic!("{args}: no {field} in {v}"))
        .to_string()
}

fn status_of(args: &str) -> (String, i32) {
    let (v, code) = call(args);
    (v["status"].as_str().unwrap().to_string(), code)
}

#[test]
fn envelope_has_exactly_the_five_fields() {
    let (v, _) = call("nu --m 7 --q 9");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["tool_version", "command", "params", "result", "status"]);
    assert_eq!(v["params"]["m"], "7");
    assert_eq!(v["command"], "nu");
}

#[test]
fn nu_examples() {
    assert_eq!(result_field("nu --m 7 --q 9", "nu"), "2184");
    assert_eq!(result_field("nu --m 1 --q 9", "nu"), "6");
    assert_eq!(status_of("nu --m 6 --q 12"), ("precondition_failed".into(), 2));
}

#[test]
fn sum_examples() {
    assert_eq!(result_field("sum --n 8 --r 0 --m 4 --a 1 --q 5 --N 2", "value"), "22");
    assert_eq!(result_field("sum --n 0 --r 0 --m 3 --a 7 --q 11 --N 1", "value"), "1");
    assert_eq!(
        result_field("sum --n 5 --r 1 --m 3 --a 1 --q 1000003 --N 1", "value"),
        "10"
    );
    assert_eq!(
        result_field("sum --n 5 --r 1 --m 3 --a 1 --q 1000003 --N 1 --oracle", "value"),
        "10"
    );
    assert_eq!(
        result_field("sum --n 5 --r 1 --m 3 --a 1 --q 1000003 --oracle", "route"),
        "oracle"
    );
}

#[test]
fn mu_examples() {
    assert_eq!(result_field("mu --m 7 --a 3 --q 9", "mu"), "3");
    assert_eq!(result_field("mu --m 7 --a -3 --q 9", "mu"), "3");
    assert_eq!(result_field("mu --m 7 --a 0 --q 9", "mu"), "1");
    assert_eq!(result_field("mu --m 7 --a -1 --q 9 --exhaustive", "mu"), "1092");
    assert_eq!(status_of("mu --m 7 --a 5 --q 9"), ("precondition_failed".into(), 2));
}

#[test]
fn verify_examples() {
    let (v, code) = call("verify dimitrov --p 5 --r 0 --k 2");
    assert_eq!(code, 0);
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["lhs"][0], "22");
    assert_eq!(v["result"]["rhs"][0], "22");
    assert_eq!(v["result"]["modulus"], "25");

    let (v, _) = call("verify glaisher --p 5 --n 3 --r 2");
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["modulus"], "5");

    let (v, _) = call("verify theorem12 --q 9 --m 7 --a 3 --l 0 --r 0 --n 1 --T 2184");
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["modulus"], "9");

    let (v, _) = call("verify cor13_split --q 9 --m 7 --a 3 --l 2 --r 1");
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(v["result"]["reports"].as_array().unwrap().len(), 2);

    // sum of (-2)^j for j < 7 is 43, coprime to 9, so this instance applies
    let (v, _) = call("verify cor13_split --q 9 --m 7 --a 2 --l 2 --r 1");
    assert_eq!(v["result"]["holds"], true);
    assert_eq!(status_of("verify cor13_split --q 13 --m 3 --a 4 --l 1 --r 0").1, 2);
    assert_eq!(status_of("verify no_such_identity --q 9").1, 2);
    assert_eq!(
        status_of("verify theorem12 --q 9 --m 7 --a 3 --l 0 --r 0 --n 1 --T 100").1,
        2
    );
}

#[test]
fn every_identity_is_reachable() {
    let cases = [
        "verify theorem11 --q 9 --m 7 --l 1 --r 2 --n 2",
        "verify theorem12 --q 5 --m 3 --a 2 --l 1 --r 2 --n 2",
        "verify cor13_general --q 7 --m 4 --a 2 --l 1 --r 1 --n 2 --k 3",
        "verify cor13_even --q 7 --m 4 --l 1 --r 1 --n 2 --k 3",
        "verify cor13_period --q 7 --m 4 --l 1 --r 1",
        "verify cor14 --q 7 --m 4 --l 1 --r 1 --k 2",
        "verify hermite --p 7 --n 5",
        "verify carlitz --p 3 --alpha 2 --n 4",
        "verify carlitz_lift --p 5 --alpha 2 --n 3 --r 1",
        "verify remark11_period --q 9 --m 7 --a 3 --n 4 --r 2",
        "verify lemma21 --q 9 --m 7 --a 3",
        "verify remark21 --q 341 --m 5 --a 3",
        "verify qnormal --p 7 --m 3 --a 2 --r 1 --n 24",
    ];
    for args in cases {
        let (v, code) = call(args);
        assert_eq!(code, 0, "{args}: {v}");
        assert_eq!(v["result"]["holds"], true, "{args}: {v}");
    }
}

#[test]
fn sweep_examples() {
    let (v, _) = call("sweep --m 6 --q 11");
    assert_eq!(v["result"]["max_mu"], "120");
    assert_eq!(v["result"]["verdict"], "matches_nu");

    let (v, _) = call("sweep --m 7 --q 9");
    assert_eq!(v["result"]["max_mu"], "1092");
    assert_eq!(v["result"]["verdict"], "hypothesis_not_met");

    let (v, _) = call("sweep --m 7 --q 5 --jobs 2");
    assert_eq!(v["result"]["max_mu"], "15624");
    let attaining: Vec<&str> = v["result"]["attaining"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(attaining, ["3"]);
    assert_eq!(v["params"]["jobs"], "2");
}

#[test]
fn sweep_output_does_not_depend_on_job_count() {
    let one = run(["binomod", "sweep", "--m", "5", "--q", "11", "--jobs", "1"]).0;
    let four = run(["binomod", "sweep", "--m", "5", "--q", "11", "--jobs", "4"]).0;
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        v["params"].as_object_mut().unwrap().remove("jobs");
        v
    };
    assert_eq!(strip(&one), strip(&four));
}

#[test]
fn selftest_passes() {
    let (v, code) = call("selftest");
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["result"]["passed"], true);
}

#[test]
fn output_is_deterministic() {
    for args in [
        "sweep --m 6 --q 11",
        "verify dimitrov --p 5 --r 0 --k 2",
        "mu --m 7 --a 5 --q 9",
    ] {
        let argv = || std::iter::once("binomod").chain(args.split_whitespace());
        assert_eq!(run(argv()), run(argv()), "{args}");
    }
}

#[test]
fn csv_round_trips_to_the_json_payload() {
    let commands = [
        "nu --m 7 --q 9",
        "nu --m 6 --q 12",
        "sum --n 8 --r 0 --m 4 --a 1 --q 5 --N 2",
        "mu --m 7 --a -1 --q 9",
        "mu --m 7 --a 0 --q 9",
        "verify dimitrov --p 5 --r 0 --k 2",
        "verify cor13_split --q 9 --m 7 --a 3 --l 2 --r 1",
        "verify remark21 --q 341 --m 5 --a 3",
        "sweep --m 6 --q 11",
        "sweep --m 1 --q 8",
        "selftest",
    ];
    for args in commands {
        let argv = |fmt: &str| {
            let mut v: Vec<String> = std::iter::once("binomod")
                .chain(args.split_whitespace())
                .map(String::from)
                .collect();
            v.extend(["--format".to_string(), fmt.to_string()]);
            v
        };
        let (json_text, code_json) = run(argv("json"));
        let (csv_text, code_csv) = run(argv("csv"));
        assert_eq!(code_json, code_csv);
        let from_json: Value = serde_json::from_str(&json_text).unwrap();
        let from_csv = csv_to_json(&csv_text).unwrap();
        assert_eq!(from_json, from_csv, "{args}");
    }
}

#[test]
fn bad_input_is_a_precondition_failure() {
    assert_eq!(status_of("nu --m 7 --q nine"), ("precondition_failed".into(), 2));
    assert_eq!(status_of("nu --m 7"), ("precondition_failed".into(), 2));
    assert_eq!(
        status_of("sum --n -1 --r 0 --m 3 --a 1 --q 5"),
        ("precondition_failed".into(), 2)
    );
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_binomod");
    let out = Command::new(bin)
        .args(["nu", "--m", "7", "--q", "9", "--format", "plain"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("nu: 2184"));

    let out = Command::new(bin)
        .args(["mu", "--m", "7", "--a", "5", "--q", "9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "precondition_failed");
}
