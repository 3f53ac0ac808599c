use std::process::{Command, Output};

use serde_json::Value;

use curlspec::spectrum::SpectrumJson;

fn curlspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curlspec")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn lines(v: &Value) -> Vec<(String, u64)> {
    v["lines"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["lambda_exact"].as_str().unwrap().to_string(), l["multiplicity"].as_u64().unwrap()))
        .collect()
}

fn error_record(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(text.trim().lines().count(), 1, "one-line error record: {text}");
    serde_json::from_str(text.trim()).expect("stderr is JSON")
}

#[test]
fn sphere_lines() {
    let v = json(&curlspec(&["sphere", "--n", "3", "--kmax", "1"]));
    let want: Vec<(String, u64)> =
        [("-3", 8), ("-2", 3), ("2", 3), ("3", 8)].iter().map(|(l, m)| (l.to_string(), *m)).collect();
    assert_eq!(lines(&v), want);
    assert_eq!(v["volume_exact"], "2*pi^2");
}

#[test]
fn torus_lines() {
    let v = json(&curlspec(&["torus", "--basis", "identity3", "--lmax", "7"]));
    assert_eq!(
        lines(&v),
        vec![("-2*pi*sqrt(1)".to_string(), 6), ("2*pi*sqrt(1)".to_string(), 6)]
    );
    assert_eq!(v["lines"][0]["shell_norm_sq"], "1");
}

#[test]
fn torus_inline_and_file_bases() {
    let inline = r#"{"n":3,"rows":[["1","0","0"],["0","1","0"],["0","0","1/2"]]}"#;
    let a = curlspec(&["torus", "--basis", inline, "--lmax", "13"]);
    let path = std::env::temp_dir().join(format!("curlspec-basis-{}.json", std::process::id()));
    std::fs::write(&path, inline).unwrap();
    let b = curlspec(&["torus", "--basis", path.to_str().unwrap(), "--lmax", "13"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(a.stdout, b.stdout);
    // dual lattice diag(1, 1, 2): four vectors of norm 1
    assert!(lines(&json(&a)).contains(&("2*pi*sqrt(1)".to_string(), 4)));
}

/// The lens space L(3;1,1): `e₁₂+e₃₄` is invariant, so `m(2) = 1`.
#[test]
fn lens_space_report() {
    let v = json(&curlspec(&["spaceform", "--angles", "3:1,1", "--kmax", "0"]));
    assert_eq!(lines(&v), vec![("-2".to_string(), 3), ("2".to_string(), 1)]);
    assert_eq!(v["symmetric"], false);
    assert_eq!(v["group_order"], 3);
}

#[test]
fn matrix_group_input() {
    let rp3 = r#"{"type":"matrices","generators":[[-1,0,0,0,0,-1,0,0,0,0,-1,0,0,0,0,-1]]}"#;
    let v = json(&curlspec(&["spaceform", "--matrices", rp3, "--kmax", "2"]));
    assert_eq!(
        lines(&v),
        vec![("-4".to_string(), 15), ("-2".to_string(), 3), ("2".to_string(), 3), ("4".to_string(), 15)]
    );
    assert_eq!(v["symmetric"], true);
}

#[test]
fn output_is_deterministic_and_revalidates() {
    for args in [
        vec!["spaceform", "--angles", "5:1,2", "--kmax", "12"],
        vec!["torus", "--basis", "identity5", "--lmax", "10"],
        vec!["sphere", "--n", "7", "--kmax", "6"],
    ] {
        let a = curlspec(&args);
        let b = curlspec(&args);
        assert_eq!(a.stdout, b.stdout);
        let parsed: SpectrumJson = serde_json::from_slice(&a.stdout).unwrap();
        let spectrum = parsed.clone().into_spectrum().unwrap();
        let reparsed: SpectrumJson = serde_json::from_str(&spectrum.to_json_string()).unwrap();
        assert_eq!(reparsed, parsed);
    }
}

#[test]
fn csv_output() {
    let out = curlspec(&["sphere", "--n", "3", "--kmax", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "lambda,multiplicity\n-2,3\n2,3\n");
    let weyl = curlspec(&["weyl", "--n", "3", "--kmax", "40", "--format", "csv"]);
    assert!(String::from_utf8(weyl.stdout).unwrap().starts_with("lambda,relative_error\n"));
}

#[test]
fn analysis_commands() {
    let z = json(&curlspec(&["zeta", "--basis", "identity3"]));
    assert_eq!(z["zeta_zero"]["value"], -2);
    let z = json(&curlspec(&["zeta", "--n", "3", "--kmax", "30", "--s", "4"]));
    assert_eq!(z["zeta_zero"]["semi_characteristic"], 1);
    assert!(z["partial"]["partial"].as_f64().unwrap() > 0.0);

    let e = json(&curlspec(&["eta", "--angles", "3:1,1", "--kmax", "6", "--s", "4"]));
    assert_eq!(e["symmetric"], false);
    assert_eq!(e["certificate"]["symmetric"], false);
    let e = json(&curlspec(&["eta", "--n", "5", "--kmax", "6", "--s", "6"]));
    assert_eq!(e["eta_partial"], 0.0);

    let b = json(&curlspec(&["bounds", "--n", "5", "--kmax", "4"]));
    assert_eq!(b["pass"], true);
    assert_eq!(b["bound"], 3.0);
    let b = json(&curlspec(&["bounds", "--angles", "2:1,1", "--kmax", "4", "--kind", "ricci-3d"]));
    assert_eq!(b["multiplicities_at_bound"], serde_json::json!([3, 3]));

    let w = json(&curlspec(&["weyl", "--basis", "identity3", "--lmax", "60"]));
    assert_eq!(w["samples"].as_array().unwrap().len(), 12);
}

#[test]
fn crosschecks() {
    let c = json(&curlspec(&["crosscheck", "--basis", "identity5", "--lmax", "10"]));
    assert_eq!(c["check"], "counting-identity");
    assert_eq!(c["pass"], true);
    let c = json(&curlspec(&["crosscheck", "--angles", "7:1,3", "--kmax", "20"]));
    assert_eq!(c["check"], "poincare-identity");
    let c = json(&curlspec(&["crosscheck", "--n", "3", "--kmax", "20"]));
    assert_eq!(c["pass"], true);
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["torus", "--basis", "identity3"],
        vec!["sphere", "--n", "4", "--kmax", "1"],
        vec!["sphere", "--n", "3", "--angles", "3:1,1", "--kmax", "1"],
        vec!["spaceform", "--angles", "3:1,0"],
        vec!["spaceform", "--angles", "three"],
        vec!["bounds", "--n", "3", "--kmax", "3", "--kind", "sectional"],
        vec!["zeta", "--n", "3", "--kmax", "3", "--format", "csv"],
        vec!["frobnicate"],
    ] {
        let out = curlspec(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let record = error_record(&out);
        assert_eq!(record["exit_code"], 2);
        assert!(record["message"].as_str().is_some());
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn closure_cap_exits_4() {
    // a rotation by an irrational angle generates an infinite group
    let c = 0.6f64;
    let s = 0.8f64;
    let group = format!(r#"{{"type":"matrices","generators":[[{c},{},0,0,{s},{c},0,0,0,0,{c},{},0,0,{s},{c}]]}}"#, -s, -s);
    let out = curlspec(&["spaceform", "--matrices", &group, "--kmax", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_record(&out)["error"], "closure-cap");
}
