use std::path::Path;
use std::process::{Command, Output};

fn irrbin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irrbin"))
        .args(args)
        .output()
        .unwrap()
}

fn csv_of(args: &[&str], path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut full: Vec<&str> = args.to_vec();
    full.extend(["--csv", path.to_str().unwrap()]);
    let out = irrbin(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn count_exit_codes() {
    let ok = irrbin(&["count", "--t", "2", "--q", "7"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("N_t(q) = 3"));

    let bad = irrbin(&["count", "--t", "2", "--q", "6"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("6 is not a prime power"));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        irrbin(&["verify", "--max-q", "4", "--max-t", "2"])
            .status
            .code(),
        Some(0)
    );
    let out = irrbin(&["verify", "--max-q", "60", "--max-t", "12", "--workers", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        irrbin(&["verify", "--max-q", "10^9", "--max-t", "30"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        irrbin(&["verify", "--max-q", "200", "--max-t", "30", "--cap", "100"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn q_sum_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (header, rows) = csv_of(
        &[
            "census", "q-sum", "--t", "6", "--max-Q", "1000000", "--steps", "10",
        ],
        &dir.path().join("q.csv"),
    );
    assert_eq!(
        header,
        [
            "t",
            "Q",
            "exact_sum",
            "thm1_bound",
            "thm2_floor",
            "ratio1",
            "ratio2"
        ]
    );
    assert_eq!(rows.len(), 10);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], "6");
        assert_eq!(row[1].parse::<u64>().unwrap(), 100_000 * (i as u64 + 1));
        let exact: u128 = row[2].parse().unwrap();
        for field in &row[3..] {
            assert!(!field.contains(['e', 'E']), "{field}");
            let v: f64 = field.parse().unwrap();
            assert_eq!(v.to_string(), *field);
        }
        let ratio1: f64 = row[5].parse().unwrap();
        assert!(ratio1 < 1.1);
        assert!(exact > 0);
    }
}

#[test]
fn t_sum_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (header, rows) = csv_of(
        &["census", "t-sum", "--q", "61", "--max-T", "100"],
        &dir.path().join("t.csv"),
    );
    assert_eq!(header, ["q", "T", "exact_sum", "rho", "upper"]);
    assert_eq!(rows.len(), 100);
    for row in &rows {
        let exact: u128 = row[2].parse().unwrap();
        let rho: u128 = row[3].parse().unwrap();
        let upper: u128 = row[4].parse().unwrap();
        assert_eq!(upper, 60 * rho);
        assert!(exact <= upper);
    }
    // rad(t) | 60 for t = 1..=10 except 7; N_t(61) = 60 phi(t)/t for those t
    assert_eq!(rows[9][3], "9");
}

#[test]
fn double_schema() {
    let dir = tempfile::tempdir().unwrap();
    let (header, rows) = csv_of(
        &["census", "double", "--Q", "1000000", "--T", "50"],
        &dir.path().join("d.csv"),
    );
    assert_eq!(
        header,
        ["Q", "T", "dyadic", "exact_sum", "thm4_main", "ratio"]
    );
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][..3], ["1000000", "50", "false"]);
    let ratio: f64 = rows[0][5].parse().unwrap();
    assert!(ratio > 0.5 && ratio < 2.0, "{ratio}");

    let (_, dyadic) = csv_of(
        &["census", "double", "--Q", "100", "--T", "4", "--dyadic"],
        &dir.path().join("dy.csv"),
    );
    assert_eq!(dyadic[0][2], "true");
}

#[test]
fn unwritable_csv_path() {
    let out = irrbin(&[
        "census",
        "double",
        "--Q",
        "1000",
        "--T",
        "5",
        "--csv",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|w| {
            let path = dir.path().join(format!("q{w}.csv"));
            let out = irrbin(&[
                "census",
                "q-sum",
                "--t",
                "12",
                "--max-Q",
                "200000",
                "--steps",
                "7",
                "--workers",
                w,
                "--csv",
                path.to_str().unwrap(),
            ]);
            assert!(out.status.success());
            std::fs::read(path).unwrap()
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn report_command() {
    let out = irrbin(&["report", "T3", "--q", "61,97", "--T", "10,50"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.ends_with("holds")), "{text}");

    let out = irrbin(&["report", "T5", "--Q", "100000", "--T", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(irrbin(&["report", "T1", "--t", "2"]).status.code(), Some(2));
}
