use std::process::{Command, Output};

fn cubiclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubiclab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn disc_one_is_a_single_row() {
    let o = cubiclab(&["enumerate", "--max-disc", "1", "--sign", "pos"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "disc,x0,x1,x2,x3,aut_order,rtype,signature\n1,0,1,-1,0,6,V1,1\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cubiclab(&["enumerate", "--max-disc", "0"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["enumerate", "--max-disc", "-5"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["enumerate", "--max-disc", "10", "--sign", "up"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["constants", "--field", "quad:10"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["constants", "--field", "cubic:5"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["constants", "--field", "Q", "--precision", "200"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["report", "--max-disc", "500", "--out", "/tmp/x"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["verify", "--suite", "localzeta", "--p", "9"]).status.code(), Some(2));
    assert_eq!(cubiclab(&["enumerate", "--max-disc", "10", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for t in ["1", "8"] {
        let path = dir.path().join(format!("t{t}.csv"));
        let o = cubiclab(&[
            "enumerate",
            "--max-disc",
            "20000",
            "--weighted",
            "true",
            "--threads",
            t,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let text = String::from_utf8(bodies[0].clone()).unwrap();
    assert!(text.starts_with("disc,x0,x1,x2,x3,aut_order,rtype,signature,weight\n"));
}

#[test]
fn env_thread_default() {
    let o = Command::new(env!("CARGO_BIN_EXE_cubiclab"))
        .args(["enumerate", "--max-disc", "50", "--format", "json"])
        .env("CUBICLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["disc"].as_i64().unwrap().abs() <= 50));
    let bad = Command::new(env!("CARGO_BIN_EXE_cubiclab"))
        .args(["enumerate", "--max-disc", "50"])
        .env("CUBICLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn constants_json() {
    let o = cubiclab(&["constants", "--field", "Q"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a: f64 = v["A"].as_str().unwrap().parse().unwrap();
    assert!((a - 0.411_233_516_7).abs() < 1e-10);
    assert!(v["r"].is_string());
    let o = cubiclab(&["constants", "--field", "quad:-23"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["invariants"]["h"], 3);
    assert_eq!(v["invariants"]["h3"], 3);
    assert_eq!(v["predictions"][0]["field_only"]["error_exponent"], "9/11");
}

#[test]
fn report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = cubiclab(&["report", "--max-disc", "10000", "--checkpoints", "3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "X,count_pos,count_neg,field_pos,field_neg,main_pos,sec_pos,resid_pos,main_neg,sec_neg,resid_neg"
    );
    let xs: Vec<u64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs, vec![1000, 3162, 10000]);
    assert!(!csv.contains('\r'));
    let js: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert!(js["fitted_residual_exponent"]["pos"].is_number());
    assert_eq!(js["field_only_cross_check"]["agree"], true);
}

#[test]
fn verify_suites() {
    let o = cubiclab(&["verify", "--suite", "localzeta", "--p", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(cubiclab(&["verify", "--suite", "ringmap"]).status.code(), Some(0));
}

#[test]
fn local_zeta_render_is_stable() {
    let a = stdout(&cubiclab(&["local-zeta", "render", "--q", "7", "--type", "sp"]));
    let b = stdout(&cubiclab(&["local-zeta", "render", "--q", "7", "--type", "sp"]));
    assert_eq!(a, b);
    assert_eq!(a, "(1 - T1*T2^2) / ((1 - T2^2) * (1 - T1)^2 * (1 - 7*T1^2*T2^2))\n");
    assert_eq!(stdout(&cubiclab(&["local-zeta", "render", "--q", "4", "--lambda"])), "(1 + T1) / (1 - 4*T1^2)\n");
}
