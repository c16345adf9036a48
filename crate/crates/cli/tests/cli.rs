use std::process::Command;

use skein_cli::{run, EXIT_INTERNAL, EXIT_IRREDUCIBLE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

fn skein(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_skein")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn call(args: &[&str]) -> skein_cli::Output {
    run(std::iter::once("skein").chain(args.iter().copied()))
}

#[test]
fn eval_prints_the_four_term_commutator_expansion() {
    let (code, out, _) = skein(&["eval", "t12*t23"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("(q) [1,2,3,-2]"));
    assert!(out.contains("(q^-1) [1,3]"));
}

#[test]
fn eval_json_matches_schema() {
    let (code, out, _) = skein(&["eval", "t1*t2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"terms":[{"mc":[[1],[2]],"coeff":[[0,1]]}]}"#);
}

#[test]
fn eval_honours_puncture_count() {
    let o = call(&["eval", "t15", "--n", "5"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(call(&["eval", "t15"]).code, EXIT_USAGE);
}

#[test]
fn parse_errors_are_distinct_and_exit_one() {
    let msgs: Vec<String> = ["t21", "t5", "t", "t1^x", "t1 +"]
        .iter()
        .map(|src| {
            let o = call(&["eval", src]);
            assert_eq!(o.code, EXIT_USAGE, "{}", src);
            o.stderr.lines().next().unwrap().to_string()
        })
        .collect();
    let mut unique = msgs.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), msgs.len(), "{:?}", msgs);
    assert!(msgs[0].contains("increasing"));
    assert!(msgs[1].contains("out of range"));
    assert!(msgs[2].contains("empty"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(call(&[]).code, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(call(&["verify", "--n", "5"]).code, EXIT_USAGE);
    assert_eq!(call(&["verify", "no-such-relation"]).code, EXIT_USAGE);
    assert_eq!(call(&["table", "--row", "R99"]).code, EXIT_USAGE);
    assert_eq!(call(&["--help"]).code, EXIT_OK);
}

#[test]
fn verify_reports_all_relations() {
    let (code, out, _) = skein(&["verify"]);
    assert_eq!(code, 0);
    assert!(out.trim().starts_with("all ") && out.trim().ends_with(" relations verified"), "{}", out);
}

#[test]
fn verify_named_relations_as_json() {
    let o = call(&["verify", "[2,2]-1", "red-1", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["zero"], true);
        assert!(r.get("name").is_some() && r.get("residual").is_some() && r.get("ms").is_some());
    }
}

#[test]
fn nf_rewrites_a_commutator() {
    let o = call(&["nf", "t23*t12"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("t12*t23"), "{}", o.stdout);
    assert!(!o.stdout.contains("irreducible"));
}

#[test]
fn nf_checked_json() {
    let o = call(&["nf", "t24*t13", "--checked", "--json"]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["irreducible"].as_array().unwrap().len(), 0);
    assert_eq!(v["steps"], v["checked"]);
}

#[test]
fn table_single_row() {
    let o = call(&["table", "--row", "R1"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    assert!(o.stdout.starts_with("R1 "));
    assert!(o.stdout.contains("1 of 1 rows pass"));
}

#[test]
fn catalog_lists_relations() {
    let text = call(&["catalog"]).stdout;
    let json = call(&["catalog", "--json"]).stdout;
    assert_eq!(text.lines().count(), json.lines().count());
    for line in json.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["name"].is_string());
    }
}

#[test]
fn json_output_is_deterministic() {
    for args in [&["eval", "t13*t24*t12", "--json"][..], &["table", "--row", "R5", "--json"], &["verify", "red-2", "--json"]] {
        let a = skein(args);
        let b = skein(args);
        assert_eq!(a, b, "{:?}", args);
    }
}

#[test]
fn exit_codes_are_distinct() {
    let codes = [EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IRREDUCIBLE, EXIT_INTERNAL];
    assert_eq!(codes, [0, 1, 2, 3, 4]);
}
