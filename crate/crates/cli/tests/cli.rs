use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercurve"))
        .args(args)
        .env_remove("SUPERCURVE_CACHE")
        .output()
        .expect("binary runs")
}

fn run_cached(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supercurve"))
        .args(args)
        .env("SUPERCURVE_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn superspecial_verdicts() {
    let o = run(&["superspecial", "--p", "11"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("superspecial: true"));

    let o = run(&["superspecial", "--p", "7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("superspecial: false"));

    let o = run(&[
        "--json",
        "superspecial",
        "--p",
        "29",
        "--s",
        "2+3*i",
        "--t",
        "5",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["superspecial"], true);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 5);
}

#[test]
fn superspecial_rejects_bad_characteristic() {
    let o = run(&["superspecial", "--p", "5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("singular points"), "{}", stderr(&o));

    assert_eq!(code(&run(&["superspecial", "--p", "9"])), 2);
    assert_eq!(code(&run(&["superspecial", "--p", "3"])), 2);
}

#[test]
fn degenerate_coefficients_exit_3() {
    assert_eq!(code(&run(&["superspecial", "--p", "7", "--s", "0"])), 3);
    assert_eq!(code(&run(&["superspecial", "--p", "7", "--t", "7"])), 3);
    assert_eq!(code(&run(&["count", "--p", "11", "--t", "0"])), 3);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(code(&run(&["superspecial", "--p", "7", "--s", "x+y"])), 2);
    assert_eq!(
        code(&run(&[
            "superspecial",
            "--p",
            "7",
            "--field",
            "p",
            "--s",
            "1+i"
        ])),
        2
    );
    assert_eq!(code(&run(&["count", "--p", "abc"])), 2);
}

#[test]
fn count_known_values() {
    for (p, n) in [("59", "count    4072"), ("101", "count    11212")] {
        let o = run(&["count", "--p", p, "--a", "5", "--b", "3", "--c", "1"]);
        assert_eq!(code(&o), 0);
        let out = stdout(&o);
        assert!(out.contains(n), "{out}");
        assert!(out.contains("status   maximal"), "{out}");
    }
    let o = run(&["--json", "count", "--p", "7"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "neither");
    let n = v["count"].as_f64().unwrap();
    assert!(v["hw_lower"].as_f64().unwrap() <= n && n <= v["hw_upper"].as_f64().unwrap());
}

#[test]
fn count_names_violated_relation() {
    let o = run(&["count", "--p", "7", "--a", "6", "--b", "3", "--c", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("b + 2c ≠ a"), "{}", stderr(&o));
}

#[test]
fn scan_only_predicted_rows() {
    let args = [
        "scan",
        "--pmin",
        "7",
        "--pmax",
        "179",
        "--a",
        "5",
        "--b",
        "3",
        "--c",
        "1",
        "--only-predicted",
    ];
    let o = run(&args);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "p,q,a,b,c,s,t,genus,count,hw_lower,hw_upper,status,ss_verdict,ss_predicted"
    );
    let rows: Vec<Vec<&str>> = lines[1..].iter().map(|l| l.split(',').collect()).collect();
    let ps: Vec<&str> = rows.iter().map(|r| r[0]).collect();
    let counts: Vec<&str> = rows.iter().map(|r| r[8]).collect();
    assert_eq!(
        ps,
        ["11", "29", "41", "59", "71", "89", "101", "131", "149", "179"]
    );
    assert_eq!(
        counts,
        ["232", "1132", "2092", "4072", "5752", "8812", "11212", "18472", "23692", "33832"]
    );
    for r in &rows {
        assert_eq!(r.len(), 14);
        assert_eq!(r[11], "maximal");
        assert_eq!((r[12], r[13]), ("true", "true"));
    }
    assert!(!out.contains('\r'));
    assert!(out.ends_with('\n'));
    assert_eq!(out, stdout(&run(&args)), "repeated scans differ");
}

#[test]
fn scan_rows_within_bounds() {
    let o = run(&["scan", "--pmin", "7", "--pmax", "30"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<Vec<i64>> = out
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            vec![
                f[0].parse().unwrap(),
                f[8].parse().unwrap(),
                f[9].parse().unwrap(),
                f[10].parse().unwrap(),
            ]
        })
        .collect();
    assert_eq!(
        rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        [7, 11, 13, 17, 19, 23, 29]
    );
    for r in rows {
        assert!(r[2] <= r[1] && r[1] <= r[3], "{r:?}");
    }
}

#[test]
fn scan_rejects_bad_range() {
    assert_eq!(code(&run(&["scan", "--pmin", "50", "--pmax", "7"])), 2);
    assert_eq!(
        code(&run(&["scan", "--pmin", "7", "--pmax", "50", "--a", "6"])),
        2
    );
}

#[test]
fn cache_round_trip_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("results.jsonl");
    let args = ["scan", "--pmin", "7", "--pmax", "60"];
    let cold = run_cached(&cache, &args);
    assert_eq!(code(&cold), 0);
    let text = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(text.lines().count(), 14);

    // a torn final line must not stop the next run
    std::fs::write(&cache, format!("{text}{{\"p\": 61, \"q\"")).unwrap();
    let warm = run_cached(&cache, &args);
    assert_eq!(code(&warm), 0);
    assert!(
        stderr(&warm).contains("corrupt cache line"),
        "{}",
        stderr(&warm)
    );
    assert_eq!(stdout(&cold), stdout(&warm));

    let o = run_cached(&cache, &["--json", "count", "--p", "11"]);
    let fresh: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let stored: Vec<serde_json::Value> = std::fs::read_to_string(&cache)
        .unwrap()
        .lines()
        .filter_map(|l| serde_json::from_str(l).ok())
        .collect();
    assert_eq!(stored.len(), 14, "count must not duplicate an existing key");
    let hit = stored.iter().find(|r| r["p"] == 11).unwrap();
    for field in [
        "p", "q", "a", "b", "c", "s", "t", "genus", "count", "hw_lower", "hw_upper", "status",
    ] {
        assert_eq!(hit[field], fresh[field], "{field}");
    }

    let flag = dir.path().join("flag.jsonl");
    let o = run_cached(
        &cache,
        &[
            "--cache",
            flag.to_str().unwrap(),
            "count",
            "--p",
            "13",
            "--s",
            "2+i",
        ],
    );
    assert_eq!(code(&o), 0);
    let line = std::fs::read_to_string(&flag).unwrap();
    assert_eq!(line.lines().count(), 1);
    assert!(line.contains("\"s\":\"2+1*i\""), "{line}");
}

#[test]
fn cache_disagreement_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    assert_eq!(code(&run_cached(&cache, &["count", "--p", "11"])), 0);
    let text = std::fs::read_to_string(&cache)
        .unwrap()
        .replace("\"count\":232", "\"count\":233");
    std::fs::write(&cache, text).unwrap();
    assert_eq!(code(&run_cached(&cache, &["count", "--p", "11"])), 4);
}

#[test]
fn verify_cover_pass_and_fail() {
    let o = run(&[
        "verify-cover",
        "--a",
        "5",
        "--b",
        "3",
        "--c",
        "1",
        "--case",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(
        stdout(&o).trim_end().ends_with("Y^p + Y = −Z^{p+1}"),
        "{}",
        stdout(&o)
    );
    assert!(stdout(&o).contains("PASS"));

    let o = run(&["verify-cover", "--case", "2", "--perturb-z", "1"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("FAIL"));

    let o = run(&[
        "verify-cover",
        "--a",
        "8",
        "--b",
        "2",
        "--c",
        "3",
        "--case",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with("1 + Y^{p+1} + Z^{p+1} = 0"));

    // case 2 needs gcd(a, b) = 1
    assert_eq!(
        code(&run(&[
            "verify-cover",
            "--a",
            "8",
            "--b",
            "2",
            "--c",
            "3",
            "--case",
            "2"
        ])),
        2
    );
}

#[test]
fn verify_cover_transcript_is_stable() {
    let o = run(&[
        "verify-cover",
        "--a",
        "5",
        "--b",
        "3",
        "--c",
        "1",
        "--case",
        "1",
    ]);
    let golden = include_str!("golden/cover_5_3_1_case1.txt");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn table2_has_seventeen_rows() {
    let o = run(&["table2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 17);
    assert_eq!(
        rows[2],
        "5 | p ≡ 14 (mod 15) | (5,3,1) | case (1) with n=15"
    );
    assert_eq!(
        rows[3],
        "5 | p ≡ 11 (mod 15) | (5,3,1) | case (2) with (n,d) = (15,12)"
    );
    assert_eq!(
        rows[16],
        "11 | p ≡ 15 (mod 16) | (8,4,2) | case (1) with n=16"
    );

    let o = run(&["--json", "table2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 17);
}

#[test]
fn classify_cases() {
    let o = run(&["--json", "classify", "--p", "11"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matched"], 2);
    assert_eq!(v["d"], 12);
    let o = run(&["--json", "classify", "--p", "29"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matched"], 1);
    let o = run(&["--json", "classify", "--p", "13"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["predicted_maximal"], false);
    assert_eq!(code(&run(&["classify", "--p", "5"])), 2);
}

#[test]
fn oracle_subcommands() {
    let o = run(&["oracle", "singular", "--p", "7"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "[0:0:1]\n");

    let o = run(&["oracle", "singular", "--p", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() >= 2);

    let o = run(&["oracle", "plane", "--p", "11"]);
    assert_eq!(stdout(&o).trim(), "231");

    let o = run(&["oracle", "expand", "--p", "13", "--s", "3+i", "--t", "2"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("MISMATCH"));

    // brute-force guards are input errors
    assert_eq!(code(&run(&["oracle", "expand", "--p", "23"])), 2);
    assert_eq!(code(&run(&["oracle", "plane", "--p", "151"])), 2);
}
