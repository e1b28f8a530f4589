use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic-kappa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

const ARCH: [&str; 6] = ["--b", "0", "--h", "1", "-a", "0.8"];

#[test]
fn eval_samples_the_curve() {
    let o = run(&[
        "eval",
        "--q0",
        "-1,0",
        "--q1",
        "0,1",
        "--q2",
        "1,0",
        "-a",
        "1",
        "--samples",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "t,x,y\n0,-1,0\n0.5,0,0.75\n1,1,0\n");
    let one = run(&["eval", "--b", "0", "--h", "1", "-a", "1", "--samples", "1"]);
    assert_eq!(stdout(&one), "t,x,y\n0,-1,0\n");
}

#[test]
fn bad_input_is_a_usage_error() {
    for args in [
        &["eval", "--b", "0", "--h", "1", "-a", "1.5"][..],
        &["eval", "--b", "0", "--h", "1", "-a", "0"],
        &["eval", "--q0", "1", "--q1", "0,1", "--q2", "1,0", "-a", "1"],
        &["eval", "--b", "0", "-a", "1"],
        &["eval", "--b", "0", "--h", "x", "-a", "1"],
        &["eval", "-a", "1"],
        &["eval", "--b", "0", "--h", "1", "-a", "1", "--samples", "0"],
        &["sweep", "-n", "0"],
        &["sweep", "-n", "5", "--a-min", "0.9", "--a-max", "0.8"],
        &["audit", "--a-values", "0.5"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn help_succeeds() {
    let o = run(&["--help"]);
    assert_eq!(code(&o), 0);
    for sub in ["eval", "curvature", "extrema", "sweep", "audit", "plot"] {
        assert!(stdout(&o).contains(sub));
    }
}

#[test]
fn curvature_table() {
    let o = run(&["curvature", "--b", "0", "--h", "1", "-a", "1", "--samples", "3"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<_> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(rows[0], "t,kappa");
    let mid: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((mid + 8.0 / 3.0).abs() < 1e-12);

    let flat = run(&["curvature", "--b", "0", "--h", "0", "-a", "0.75", "--samples", "5"]);
    assert!(stdout(&flat).lines().skip(1).all(|l| l.ends_with(",0")));

    let kink = run(&[
        "curvature",
        "--q0",
        "0,0",
        "--q1",
        "1,1",
        "--q2",
        "0,0",
        "-a",
        "0.8",
        "--samples",
        "3",
    ]);
    assert_eq!(code(&kink), 0);
    assert!(stdout(&kink).contains("\n0.5,\n"));
    assert!(String::from_utf8_lossy(&kink.stderr).contains("KinkAtHalf"));
}

#[test]
fn extrema_report() {
    let o = run(&["extrema", "--oracle", "20000"]
        .iter()
        .chain(&ARCH)
        .copied()
        .collect::<Vec<_>>());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["kind"], "Regular");
    assert_eq!(v["count"], 1);
    assert_eq!(v["theorem_regime"], true);
    assert_eq!(v["locations"][0]["t"], 0.5);
    assert_eq!(v["locations"][0]["t_exact"], "1/2");
    assert_eq!(v["oracle_count"], 1);

    let kink = json(&run(&[
        "extrema", "--q0", "0,0", "--q1", "1,1", "--q2", "0,0", "-a", "0.8",
    ]));
    assert_eq!(kink["kind"], "KinkAtHalf");
    assert_eq!(kink["count"], 1);
    assert_eq!(kink["locations"][0]["t"], 0.5);

    let monotone = json(&run(&["extrema", "--b", "0.95", "--h", "0.02", "-a", "0.9"]));
    assert_eq!(monotone["count"], 0);
}

#[test]
fn extrema_agree_before_and_after_canonicalization() {
    // (b, h) = (1/2, 1) rotated by 90 degrees, doubled and shifted, endpoints swapped
    let raw = json(&run(&[
        "extrema", "--q0", "3,7", "--q1", "1,6", "--q2", "3,3", "-a", "0.9",
    ]));
    let canon = json(&run(&["extrema", "--b", "1/2", "--h", "1", "-a", "0.9"]));
    assert_eq!(raw["count"], canon["count"]);
    let (t1, t2) = (
        raw["locations"][0]["t"].as_f64().unwrap(),
        canon["locations"][0]["t"].as_f64().unwrap(),
    );
    assert!((t1 - (1.0 - t2)).abs() < 1e-11, "{t1} vs {t2}");
    let lo = |v: &serde_json::Value| v["locations"][0]["window"][0].as_str().unwrap().to_string();
    let frac = |s: String| -> f64 {
        let (n, d) = s.split_once('/').unwrap();
        n.parse::<f64>().unwrap() / d.parse::<f64>().unwrap()
    };
    assert!(frac(lo(&raw)) <= t1 && t1 - frac(lo(&raw)) < 1e-11);
}

#[test]
fn sweep_summary_is_deterministic() {
    let args = ["sweep", "-n", "60", "--seed", "7", "--samples", "5000"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["max_count"], 1);
    assert_eq!(v["mismatches"], 0);
    assert_eq!(v["theorem_regime"], true);
    // runtime goes to stderr only
    assert!(!stdout(&a).contains("configurations in"));
    let threaded = run(&[
        "--threads",
        "2",
        "sweep",
        "-n",
        "60",
        "--seed",
        "7",
        "--samples",
        "5000",
    ]);
    assert_eq!(threaded.stdout, a.stdout);
}

#[test]
fn exploratory_sweep_never_fails() {
    let o = run(&[
        "sweep",
        "-n",
        "20",
        "--a-min",
        "0.1",
        "--a-max",
        "0.5",
        "--samples",
        "2000",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["theorem_regime"], false);
    assert!(v["histogram"].as_object().unwrap().keys().any(|k| k != "0" && k != "1"));
}

#[test]
fn audit_small_grid() {
    let grid = [
        "--a-values",
        "0.7,0.95,1",
        "--b-values",
        "0,1.5,4",
        "--h2-values",
        "0.01,1",
    ];
    let text = run(&["audit"].iter().chain(&grid).copied().collect::<Vec<_>>());
    assert_eq!(code(&text), 0);
    assert!(stdout(&text).contains("checks passed"));
    let j = run(&["audit", "--format", "json"]
        .iter()
        .chain(&grid)
        .copied()
        .collect::<Vec<_>>());
    let v = json(&j);
    assert_eq!(v["passed"], true);
    let first = &v["entries"][0];
    for key in ["lemma", "method", "status"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    let again = run(&["audit", "--format", "json"]
        .iter()
        .chain(&grid)
        .copied()
        .collect::<Vec<_>>());
    assert_eq!(j.stdout, again.stdout);
}

#[test]
fn plot_writes_stable_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("arch.svg");
    let p = path.to_str().unwrap();
    let args: Vec<&str> = ["plot", "--width", "640", "--height", "320", "-o", p]
        .iter()
        .chain(&ARCH)
        .copied()
        .collect();
    assert_eq!(code(&run(&args)), 0);
    let first = std::fs::read(&path).unwrap();
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read(&path).unwrap(), first);
    let svg = String::from_utf8(first).unwrap();
    assert!(svg.contains(r#"width="640" height="320""#));
    assert!(svg.contains("<circle"));
    assert!(svg.contains("extremum at t = 0.500000"));

    let mono = stdout(&run(&["plot", "--b", "0.95", "--h", "0.02", "-a", "0.9"]));
    assert!(mono.contains(">monotone<"));
    assert!(!mono.contains("<circle"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let o = run(&["eval", "--b", "0", "--h", "1", "-a", "1", "-o", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
}
