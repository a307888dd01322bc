use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qhk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhk")).args(args).output().unwrap()
}

fn qhk_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qhk"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn status<'a>(report: &'a serde_json::Value, stage: &str) -> &'a str {
    report["stages"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == stage)
        .unwrap()["status"]
        .as_str()
        .unwrap()
}

#[test]
fn analyze_cato_passes() {
    let o = qhk(&["analyze", "CATO", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema"], "qhk-report/1");
    assert_eq!(r["data"]["height"], serde_json::json!([0, 1, 2]));
    assert_eq!(r["data"]["gamma_dim"], 9);
    for s in r["stages"].as_array().unwrap() {
        assert_eq!(s["status"], "pass", "{s}");
    }
}

#[test]
fn analyze_triangle_blocks() {
    let o = qhk(&["analyze", "TRIANGLE", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let r = json(&o);
    assert_eq!(status(&r, "quasi_hereditary"), "fail");
    for stage in ["standard_koszul", "height_function", "gamma_built", "double_dual_dims"] {
        assert_eq!(status(&r, stage), "blocked", "{stage}");
    }
}

#[test]
fn analyze_ak4_passes() {
    assert_eq!(qhk(&["analyze", "AK:4"]).status.code(), Some(0));
}

#[test]
fn json_output_is_byte_identical() {
    let a = qhk(&["analyze", "PARA", "--format", "json"]);
    let b = qhk(&["analyze", "PARA", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn parallel_inputs_keep_order() {
    let o = qhk(&["analyze", "CATO", "DUALEXT", "K", "--parallel", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let names: Vec<&str> = r.as_array().unwrap().iter().map(|x| x["input"].as_str().unwrap()).collect();
    assert_eq!(names, ["CATO", "DUALEXT", "K"]);
}

#[test]
fn stage_selection() {
    let o = qhk(&["analyze", "CATO", "--stages", "condition_H", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(status(&r, "condition_H"), "pass");
    assert_eq!(status(&r, "gamma_built"), "skipped");
}

#[test]
fn prime_field_option() {
    let o = qhk(&["analyze", "CATO", "--field", "p:101", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["field"], "F_101");
    assert_eq!(qhk(&["analyze", "CATO", "--field", "p:100"]).status.code(), Some(1));
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(qhk(&["analyze", "NOSUCHTHING"]).status.code(), Some(1));
    let o = qhk_stdin(&["analyze", "-"], "vertices: two\n");
    assert_eq!(o.status.code(), Some(1));
    let o = qhk(&["example", "NOSUCHTHING"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CATO"));
}

#[test]
fn gamma_shapes() {
    let count = |text: &str, prefix: &str| text.lines().filter(|l| l.starts_with(prefix)).count();
    let cato = stdout(&qhk(&["gamma", "CATO"]));
    assert!(cato.contains("vertices: 3"));
    assert_eq!((count(&cato, "arrow"), count(&cato, "relation")), (4, 2));
    let dualext = stdout(&qhk(&["gamma", "DUALEXT"]));
    assert_eq!(count(&dualext, "relation"), 0);
    let para = stdout(&qhk(&["gamma", "PARA"]));
    assert_eq!(count(&para, "relation"), 2);
}

#[test]
fn gamma_of_non_qh_input_is_blocked() {
    let o = qhk(&["gamma", "TRIANGLE"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn gamma_round_trips_through_analyze() {
    for f in ["CATO", "PARA", "SO4", "DUALEXT", "AK:3", "K", "CATO+DUALEXT"] {
        let g = qhk(&["gamma", f]);
        assert_eq!(g.status.code(), Some(0), "{f}");
        let o = qhk_stdin(&["analyze", "-", "--format", "json"], &stdout(&g));
        assert_eq!(o.status.code(), Some(0), "{f}: {}", stdout(&o));
        let r = json(&o);
        assert_eq!(status(&r, "classical_koszul"), "pass", "{f}");
        assert_eq!(status(&r, "gamma_built"), "pass", "{f}");
    }
}

#[test]
fn oracle_agrees() {
    for f in ["CATO", "DUALEXT"] {
        let o = qhk(&["oracle", f, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        for c in json(&o)["checks"].as_array().unwrap() {
            assert_eq!(c["status"], "agree", "{f}: {c}");
        }
    }
}

#[test]
fn oracle_ak6_without_bar() {
    let o = qhk(&["oracle", "AK:6", "--skip-bar", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let checks = r["checks"].as_array().unwrap();
    assert_eq!(checks[0]["status"], "skipped");
    assert_eq!(checks[1]["status"], "agree");
}

#[test]
fn example_sources() {
    let cato = stdout(&qhk(&["example", "CATO"]));
    assert!(cato.contains("vertices: 3"));
    let so4 = stdout(&qhk(&["example", "SO4"]));
    assert_eq!(so4.lines().filter(|l| l.starts_with("relation")).count(), 8);
    let ak = stdout(&qhk(&["example", "AK:3"]));
    assert!(ak.contains("vertices: 4"));
}

#[test]
fn file_input() {
    let dir = std::env::temp_dir().join(format!("qhk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("para.txt");
    std::fs::write(&path, stdout(&qhk(&["example", "PARA"]))).unwrap();
    let o = qhk(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::remove_dir_all(&dir).unwrap();
}
