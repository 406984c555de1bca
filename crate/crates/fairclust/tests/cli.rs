use std::fs;
use std::process::{Command, Output};

fn fairclust(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairclust"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn round_on_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pts.csv");
    let mut text = String::from("id,x,y,label\n");
    for i in 0..30 {
        let (x, y) = ((i % 6) as f64 * 1.5, (i / 6) as f64 + 0.1 * i as f64);
        text.push_str(&format!("{i},{x},{y},row{i}\n"));
    }
    text.push_str("99,oops,1,bad\n");
    fs::write(&path, text).unwrap();
    let out = fairclust(&[
        "round",
        "--input",
        path.to_str().unwrap(),
        "--features",
        "x,y",
        "--k",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["centers"].as_array().unwrap().len() <= 3);
    assert!(v["max_violation"].as_f64().unwrap() <= 8.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&fairclust(&[])), 1);
    assert_eq!(code(&fairclust(&["--help"])), 0);
    assert_eq!(code(&fairclust(&["radii", "--k", "2"])), 1);
    assert_eq!(
        code(&fairclust(&[
            "radii",
            "--synthetic",
            "10",
            "--k",
            "2",
            "--p",
            "0.5"
        ])),
        1
    );
    assert_eq!(
        code(&fairclust(&[
            "radii",
            "--input",
            "/no/such/file.csv",
            "--k",
            "2"
        ])),
        4
    );
    let infeasible = fairclust(&[
        "solve-lp",
        "--synthetic",
        "20",
        "--k",
        "2",
        "--dilation",
        "0.0001",
    ]);
    assert_eq!(code(&infeasible), 2);
    let broken = fairclust(&[
        "round",
        "--synthetic",
        "20",
        "--k",
        "2",
        "--backend",
        "external:/no/such/solver",
    ]);
    assert_eq!(code(&broken), 3);
}

#[test]
fn radii_csv_and_oracle() {
    let out = fairclust(&["radii", "--synthetic", "12", "--k", "3", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 13);
    let out = fairclust(&["oracle", "--synthetic", "9", "--k", "2", "--p", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["sets_examined"].as_u64().unwrap() > 0);
}

#[test]
fn experiment_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = fairclust(&[
        "experiment",
        "--synthetic",
        "50",
        "--k",
        "3,4",
        "--algorithms",
        "plesnik,kmeanspp",
        "--trials",
        "3",
        "--sample",
        "40",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        fs::read_to_string(&path).unwrap().lines().count(),
        1 + 2 * 2 * 3
    );
}
