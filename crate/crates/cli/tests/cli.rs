use std::process::{Command, Output};

fn ggbij(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggbij")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mark_prints_the_first_sample_grid() {
    let o = ggbij(&["mark", "--parts", "38,38,36,34,32,30,26,26,22,22,22,18,16,16,14,12,12,10,9,6,6,6,2,1"]);
    assert!(o.status.success());
    let want = "&&6&&&12&&16&&22&&&&&&38\\\\\n&2&6&&10&&14&&18&22&26&&32&&36\\\\\n1&&6&9&&12&&16&&22&26&30&&34&&38\n";
    assert_eq!(stdout(&o), want);
}

#[test]
fn unsorted_input_warns_and_proceeds() {
    let o = ggbij(&["mark", "--parts", "[1,4,2]", "--format", "json"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"]["1"], serde_json::json!([4, 1]));
}

#[test]
fn phi_of_one_odd_part() {
    let o = ggbij(&["map", "--op", "phi", "--partition", "[]", "--zeta", "[1]", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["partition"], serde_json::json!([1]));
    let o = ggbij(&["map", "--op", "psi", "--partition", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["partition"], serde_json::json!([]));
    assert_eq!(v["zeta"], serde_json::json!([1]));
}

#[test]
fn classify_reports_subset_and_index() {
    let o = ggbij(&["classify", "--fixture", "pi1", "--m", "11", "--family", "lt", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["j"], 6);
    assert_eq!(v[0]["p"], 6);
    assert_eq!(v[0]["insertion_index"], 18);
}

#[test]
fn dilation_trace_has_every_step() {
    let o = ggbij(&["map", "--op", "dilate", "--fixture", "pi1", "--p", "6", "--t", "5", "--trace"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for label in ["step 4", "step 3", "step 2", "step 1", "dilated"] {
        assert!(text.contains(&format!("% {label}\n")), "{label}");
    }
    assert!(text.contains(r"\overline{33}"));
}

#[test]
fn identities_pass() {
    for args in [
        &["verify", "--identity", "companion", "--qmax", "36"][..],
        &["verify", "--identity", "product", "--alphas", "1,2", "--eta", "3", "--qmax", "24"],
        &["verify", "--identity", "conjecture", "--k", "4", "--qmax", "24"],
        &["verify", "--identity", "cell", "--k", "4", "--r", "3", "--qmax", "24", "--max-row", "3"],
    ] {
        let o = ggbij(args);
        assert!(o.status.success(), "{args:?}");
        assert!(stdout(&o).starts_with("PASS"), "{args:?}");
    }
}

#[test]
fn count_is_csv() {
    let o = ggbij(&["count", "--max-n", "6"]);
    assert_eq!(stdout(&o), "n,count\n0,1\n1,1\n2,1\n3,2\n4,3\n5,3\n6,4\n");
}

#[test]
fn enumerate_is_json_lines() {
    let o = ggbij(&["enumerate", "--set", "c", "--n", "4"]);
    let lines: Vec<_> = stdout(&o).lines().map(|l| serde_json::from_str::<Vec<i64>>(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
}

#[test]
fn roundtrip_sweep_passes() {
    let o = ggbij(&["roundtrip", "--k", "4", "--r", "3", "--max-weight", "14"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn exit_codes() {
    assert_eq!(ggbij(&["mark", "--parts", "x"]).status.code(), Some(2));
    assert_eq!(ggbij(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ggbij(&["classify", "--fixture", "pi1", "--k", "2", "--r", "2", "--m", "3"]).status.code(), Some(2));
    let o = ggbij(&["verify", "--identity", "product", "--alphas", "1", "--eta", "3", "--qmax", "10"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn json_grids_are_stable() {
    let a = stdout(&ggbij(&["mark", "--fixture", "omega12", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let parts: Vec<i64> = v["rows"]
        .as_object()
        .unwrap()
        .values()
        .flat_map(|r| r.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()))
        .collect();
    let joined = parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    let b = stdout(&ggbij(&["mark", "--parts", &joined, "--format", "json"]));
    assert_eq!(a, b);
}
