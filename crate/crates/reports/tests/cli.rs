use std::process::{Command, Output};

use serde_json::Value;

fn fockbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockbell"))
        .args(args)
        .output()
        .expect("spawn fockbell")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_body(text: &str) -> Vec<csv::StringRecord> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn qcrb_csv_lists_every_state() {
    let text = stdout(&fockbell(&["qcrb", "--max-n", "4"]));
    assert!(text.starts_with("# tool: fockbell\n"));
    assert!(text.contains("N,m,state,qcrb,snl,hl,supersensitive\n"));
    let rows = csv_body(&text);
    assert_eq!(rows.len(), 6);
    let three_one = rows.iter().find(|r| &r[2] == "2::1").unwrap();
    assert_eq!(&three_one[3], "1.0");
    assert_eq!(&three_one[6], "false");
}

#[test]
fn spin_table_json_reports_upper_violations() {
    let text = stdout(&fockbell(&[
        "table",
        "chsh-spin",
        "--max-n",
        "3",
        "--format",
        "json",
        "--seed",
        "4",
    ]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["meta"]["seed"], "4");
    assert_eq!(v["meta"]["functional"], "chsh-spin");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["violation"], "both");
        assert!((r["max_value"].as_f64().unwrap() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
        assert_eq!(r["argmax"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn balanced_grid_layout_is_square() {
    let text = stdout(&fockbell(&[
        "table",
        "ch-balanced",
        "--max-n",
        "3",
        "--layout",
        "grid",
        "--samples",
        "500",
    ]));
    let rows = csv_body(&text);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 5));
    // (N-m, m) = (1, 0): minimum below the diagonal, maximum above it.
    let min: f64 = rows[1][1].parse().unwrap();
    let max: f64 = rows[0][2].parse().unwrap();
    assert!(min < -0.9 && max > -0.1);
    assert_eq!(&rows[0][1], "");
}

#[test]
fn sweep_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = fockbell(&[
        "sweep",
        "ch-unbalanced",
        "delta-2",
        "--n-max",
        "6",
        "--samples",
        "400",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# family: delta-2\n"));
    let states: Vec<String> = csv_body(&text).iter().map(|r| r[2].to_string()).collect();
    assert_eq!(states, ["2::0", "3::1", "4::2"]);
}

#[test]
fn wigner_slice_size_and_origin() {
    let text = stdout(&fockbell(&[
        "wigner", "--n", "1", "--m", "0", "--steps", "3", "--lo", "-1", "--hi", "1",
    ]));
    let rows = csv_body(&text);
    assert_eq!(rows.len(), 9);
    let centre = &rows[4];
    assert_eq!((&centre[0], &centre[1]), ("0.0", "0.0"));
    // Single photon at the origin: negative Wigner value.
    assert!(centre[6].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn bad_arguments_exit_with_failure() {
    let cases: [&[&str]; 4] = [
        &["table", "ch-balanced", "--max-n", "11"],
        &["qcrb", "--max-n", "0"],
        &[
            "wigner", "--n", "3", "--m", "1", "--x-axis", "re-alpha", "--y-axis", "re-alpha",
        ],
        &["wigner", "--n", "3", "--m", "1", "--at", "0,0,0"],
    ];
    for args in cases {
        let out = fockbell(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn seeds_change_search_not_format() {
    let a = stdout(&fockbell(&[
        "table",
        "chsh-unbalanced",
        "--max-n",
        "1",
        "--seed",
        "1",
        "--samples",
        "300",
    ]));
    let b = stdout(&fockbell(&[
        "table",
        "chsh-unbalanced",
        "--max-n",
        "1",
        "--seed",
        "2",
        "--samples",
        "300",
    ]));
    assert_ne!(a, b);
    assert_eq!(a.lines().count(), b.lines().count());
}
