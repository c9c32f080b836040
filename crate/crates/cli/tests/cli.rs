use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgbkr")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn report(args: &[&str]) -> (i32, Value) {
    let (code, text) = run(args);
    (code, serde_json::from_str(&text).unwrap_or(Value::Null))
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

fn all_pass(v: &Value) -> bool {
    v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass")
}

#[test]
fn relations_exit_codes() {
    let (code, v) = report(&words("verify-relations --variant degenerate --d 3 --max-deg 3"));
    assert_eq!(code, 0);
    assert!(all_pass(&v));
    assert_eq!(run(&words("verify-relations --variant q --d 2 --q 1")).0, 2);
    assert_eq!(run(&words("verify-relations --variant q --d 2 --q 0")).0, 2);
    assert_eq!(run(&words("verify-relations --variant q --d 2 --q 2 --max-deg 2")).0, 0);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&words("verify-bkr --variant q --a 1,2 --Q 1 --I 1,2 --trunc 3")).0, 2);
    assert_eq!(run(&words("verify-bkr --variant degenerate --a 0,1 --Q 0 --I 0,1")).0, 2);
    assert_eq!(run(&words("verify-bkr --variant degenerate --a 0,5 --Q 0 --I 0,1 --trunc 2")).0, 2);
    assert_eq!(run(&words("dims --variant affine --d 1")).0, 2);
    assert_eq!(run(&words("dims --variant degenerate --d 2 --a 0")).0, 2);
    assert_eq!(run(&words("frobnicate")).0, 2);
}

#[test]
fn bkr_examples() {
    let (code, v) = report(&words("verify-bkr --variant degenerate --a 0,1 --Q 0 --I 0,1 --trunc 3"));
    assert_eq!(code, 0);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    for group in ["sd_invariance", "intertwine", "relation", "dg_compatibility", "triangular"] {
        assert!(ids.iter().any(|id| id.contains(group)), "{group} missing");
    }
    let (code, _) = report(&words("verify-bkr --variant q --q 2 --a 1,2 --Q 1 --I 1,2 --trunc 3"));
    assert_eq!(code, 0);
}

#[test]
fn homology_examples() {
    let (code, v) = report(&words("homology --variant degenerate --d 1 --Q 0,0 --route filtration --Dmax 8"));
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["h0"], 2);
    let (code, v) = report(&words("homology --variant q --q 2 --d 1 --Q 2 --a 2 --route tower --Nmax 4"));
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["h0"], 1);
    let (code, v) = report(&words("homology --variant degenerate --d 2 --Q 0 --route filtration --Dmax 8"));
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["h0"], 2);
    let (code, v) = report(&words("homology --variant degenerate --a 0,1 --Q 0,1 --route tower --side klr --Nmax 3"));
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["h0"], 6);
}

#[test]
fn filtration_route_rejects_q_variant() {
    let (code, v) = report(&words("homology --variant q --q 2 --d 1 --Q 2 --route filtration"));
    assert_eq!(code, 3);
    assert_eq!(v["checks"][0]["status"], "error");
}

#[test]
fn dims_summary() {
    let (code, v) = report(&words("dims --variant degenerate --a 0,1 --Q 0,1"));
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["hecke_block_dim"], 6);
    assert_eq!(v["summary"]["klr_dim"], 6);
    assert_eq!(v["summary"]["hecke_dim"], 8);
}

#[test]
fn differential_suites() {
    let (code, v) = report(&words("verify-differential --variant degenerate --d 2 --Q 0,1 --I 0,1 --max-deg 2"));
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().len() > 2);
    let (code, _) = report(&words("verify-differential --variant q --q 2 --d 2 --Q 1 --I 1,2 --max-deg 2 --random-p 2"));
    assert_eq!(code, 0);
}

#[test]
fn report_is_deterministic() {
    let args = words("verify-bkr --variant degenerate --a 0,1 --Q 0 --I 0,1 --trunc 2 --seed 7");
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(a["canonical_hash"], b["canonical_hash"]);
    let strip = |v: &Value| {
        let mut v = v.clone();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("ms");
        }
        v
    };
    assert_eq!(strip(&a), strip(&b));
    let ids: Vec<String> = a["checks"].as_array().unwrap().iter().map(|c| c["check_id"].as_str().unwrap().to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for key in ["tool_version", "params", "checks", "canonical_hash"] {
        assert!(a.get(key).is_some(), "{key}");
    }
    assert_ne!(a["canonical_hash"], report(&words("verify-bkr --variant degenerate --a 0,1 --Q 1 --I 0,1 --trunc 2")).1["canonical_hash"]);
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("dgbkr-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, text) = run(&["dims", "--variant", "degenerate", "--d", "1", "--Q", "0", "--out", p]);
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written.trim_end(), text.trim_end());
}
