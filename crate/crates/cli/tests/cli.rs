use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use esdsim_cli::csv::{parse_analytic, parse_series};

fn esdsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esdsim"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn three_set_run_writes_three_series() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("three_sets.toml");
    let o = esdsim(&["run", "--config", s(&cfg), "--out", s(tmp.path())]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for i in 1..=3 {
        let rows =
            parse_series(&std::fs::read_to_string(tmp.path().join(format!("set{i}.csv"))).unwrap())
                .unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r.mitigated && r.c_env_mean.is_some()));
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("manifest.json")).unwrap())
            .unwrap();
    let sets = manifest["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 3);
    assert_eq!(sets[0]["esd_time"], "none");
    assert_eq!(sets[0]["seeds"].as_array().unwrap().len(), 2 * 16 * 10);
    assert!((sets[2]["esd_time"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
}

#[test]
fn run_flags_override_the_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = configs().join("three_sets.toml");
    let out = tmp.path().join("o");
    let o = esdsim(&[
        "run",
        "--config",
        s(&cfg),
        "--out",
        s(&out),
        "--seed",
        "5",
        "--sets",
        "1",
        "--no-mitigation",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.join("set1.csv").exists());
    assert!(!out.join("set2.csv").exists());
    let rows = parse_series(&std::fs::read_to_string(out.join("set1.csv")).unwrap()).unwrap();
    assert!(rows.iter().all(|r| !r.mitigated));
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": 5"));

    let o = esdsim(&["run", "--config", s(&cfg), "--out", s(&out), "--sets", "4"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = write(
        tmp.path(),
        "empty.toml",
        "seed = 1\nshots = 10\nrepetitions = 1\nalpha = 0.5\n[grid]\nmin = 0.0\nmax = 1.0\npoints = 0\n",
    );
    let o = esdsim(&["run", "--config", &empty, "--out", s(tmp.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("grid must be non-empty"));

    let unknown = write(
        tmp.path(),
        "u.toml",
        "seed = 1\nshots = 10\nrepetitions = 1\nalpha = 0.5\nshotz = 3\n",
    );
    let o = esdsim(&["run", "--config", &unknown, "--out", s(tmp.path())]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("shotz"), "{}", stderr(&o));

    let o = esdsim(&[
        "analytic",
        "--alpha",
        "1/sqrt(0.5)",
        "--out",
        s(&tmp.path().join("a.csv")),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn io_errors_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.toml");
    let o = esdsim(&["run", "--config", s(&missing), "--out", s(tmp.path())]);
    assert_eq!(code(&o), 3);

    let blocker = write(tmp.path(), "file", "x");
    let cfg = configs().join("noiseless.toml");
    let o = esdsim(&[
        "run",
        "--config",
        s(&cfg),
        "--out",
        &format!("{blocker}/sub"),
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn analytic_reports_times() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("1/sqrt(5)", Some(LN_2), Some(LN_2)),
        ("1/sqrt(3)", Some(1.227947), Some(0.346574)),
        ("1/sqrt(2)", None, None),
    ];
    for (i, (alpha, td, tb)) in cases.into_iter().enumerate() {
        let out = tmp.path().join(format!("a{i}.csv"));
        let o = esdsim(&["analytic", "--alpha", alpha, "--out", s(&out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let rows = parse_analytic(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(rows.len(), 64);
        let m: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(tmp.path().join(format!("a{i}.manifest.json"))).unwrap(),
        )
        .unwrap();
        for (key, want) in [("esd_time", td), ("esb_time", tb)] {
            match want {
                Some(v) => assert!((m[key].as_f64().unwrap() - v).abs() < 5e-7, "{alpha} {key}"),
                None => assert_eq!(m[key], "none"),
            }
        }
    }
}

#[test]
fn diagnose_noiseless_and_noisy() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |p: &Path| -> Vec<f64> {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    let clean = tmp.path().join("clean.csv");
    assert_eq!(
        code(&esdsim(&["diagnose", "--noiseless", "--out", s(&clean)])),
        0
    );
    let p0 = read(&clean);
    assert_eq!(p0.len(), 19);
    assert!(p0.iter().all(|p| (p - 1.0).abs() < 1e-10));

    let noisy = tmp.path().join("noisy.csv");
    assert_eq!(code(&esdsim(&["diagnose", "--out", s(&noisy)])), 0);
    assert!(read(&noisy).iter().all(|&p| p < 1.0));
    let again = tmp.path().join("again.csv");
    assert_eq!(code(&esdsim(&["diagnose", "--out", s(&again)])), 0);
    assert_eq!(
        std::fs::read(&noisy).unwrap(),
        std::fs::read(&again).unwrap()
    );

    let sampled = tmp.path().join("s.csv");
    let cfg = configs().join("three_sets.toml");
    let o = esdsim(&[
        "diagnose",
        "--config",
        s(&cfg),
        "--shots",
        "5000",
        "--out",
        s(&sampled),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(read(&sampled).len(), 19);
}

#[test]
fn transpile_check_exit_codes() {
    let o = esdsim(&["transpile-check", "--seed", "11", "--n", "200"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("200 of 200 circuits passed"));

    assert_eq!(code(&esdsim(&["transpile-check", "--n", "0"])), 2);

    let o = esdsim(&[
        "transpile-check",
        "--seed",
        "40",
        "--n",
        "10",
        "--corrupt-rule",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("circuit seed"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn plot_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let one = write(
        tmp.path(),
        "one.csv",
        "gamma_t,c_sys_mean,c_sys_stderr,c_env_mean,c_env_stderr,p010_sys,p010_env,mitigated\n0.5,0.4,0.01,,,0.35,,0\n",
    );
    let two = write(
        tmp.path(),
        "two.csv",
        "gamma_t,c_sys_mean,c_sys_stderr,c_env_mean,c_env_stderr,p010_sys,p010_env,mitigated\n0.1,0.9,0.01,0.0,0.0,0.47,0.25,1\n2.7,0.1,0.01,0.3,0.02,0.27,0.32,1\n",
    );
    let analytic = tmp.path().join("a.csv");
    assert_eq!(
        code(&esdsim(&[
            "analytic",
            "--alpha",
            "0.6",
            "--out",
            s(&analytic)
        ])),
        0
    );

    let svg = tmp.path().join("f.svg");
    let o = esdsim(&[
        "plot",
        &one,
        &two,
        "--analytic",
        s(&analytic),
        "--out",
        s(&svg),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("<polyline").count(), 2);

    let svg2 = tmp.path().join("g.svg");
    esdsim(&[
        "plot",
        &one,
        &two,
        "--analytic",
        s(&analytic),
        "--out",
        s(&svg2),
    ]);
    assert_eq!(text, std::fs::read_to_string(&svg2).unwrap());

    let bad = write(tmp.path(), "bad.csv", "gamma_t,oops\n1,2\n");
    let o = esdsim(&["plot", &bad, "--out", s(&svg)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.csv"));
}
