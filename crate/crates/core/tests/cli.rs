use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn tilelocal(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilelocal"))
        .args(args)
        .current_dir(dir)
        .env("TILELOCAL_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.display().to_string()
}

#[test]
fn validate_bundled_space() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilelocal(
        &["spaces", "validate", "--space", &data("period-doubling.json")],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn localize_then_verify_and_reproduce() {
    let dir = tempfile::tempdir().unwrap();
    let map = data("maps/wiggle.json");
    let o = tilelocal(
        &[
            "localize",
            "--map",
            &map,
            "--epsilon",
            "1/8",
            "--space",
            "pd",
            "--out",
            "fe.json",
            "--report",
            "p.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut reports = Vec::new();
    for out in ["r1.json", "r2.json"] {
        let o = tilelocal(
            &[
                "verify",
                "theorem1",
                "--in",
                "fe.json",
                "--samples",
                "200",
                "--seed",
                "7",
                "--out",
                out,
            ],
            dir.path(),
        );
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(out)).unwrap()).unwrap();
        assert!(v["properties"].as_array().unwrap().iter().all(|p| p["pass"] == true));
        v.as_object_mut().unwrap().remove("wall_time_ms");
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn usage_and_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let map = data("maps/wiggle.json");
    let big = tilelocal(
        &["localize", "--map", &map, "--epsilon", "3/4", "--out", "x.json"],
        dir.path(),
    );
    assert_eq!(code(&big), 2);
    assert!(!dir.path().join("x.json").exists());
    assert_eq!(
        code(&tilelocal(
            &[
                "localize",
                "--map",
                &map,
                "--epsilon",
                "1/8",
                "--nope",
                "--out",
                "x.json"
            ],
            dir.path()
        )),
        2
    );
    // sampling commands insist on a seed
    assert_eq!(
        code(&tilelocal(
            &["map", "check-local", "--map", &map, "--radius", "2"],
            dir.path()
        )),
        2
    );
    std::fs::write(
        dir.path().join("bad.json"),
        r#"{"source":"period-doubling","target":"period-doubling","stages":[{"kind":"translate","v":["1/0"]}]}"#,
    )
    .unwrap();
    let o = tilelocal(
        &[
            "map",
            "check-local",
            "--map",
            "bad.json",
            "--radius",
            "2",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("stages[0].v[0]"));
}

#[test]
fn property_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = tilelocal(
        &[
            "map",
            "check-local",
            "--map",
            &data("maps/wiggle.json"),
            "--radius",
            "2",
            "--samples",
            "100",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 1);
    let o = tilelocal(
        &[
            "map",
            "check-local",
            "--map",
            &data("maps/block-code.json"),
            "--radius",
            "2",
            "--samples",
            "100",
            "--seed",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn plot_and_metric() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&tilelocal(
            &["spaces", "sample", "--space", "chair", "--seed", "4", "--out", "t.json"],
            dir.path()
        )),
        0
    );
    let o = tilelocal(
        &[
            "plot", "patch", "--space", "chair", "--tiling", "t.json", "--radius", "2",
        ],
        dir.path(),
    );
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).lines().count() > 3);
    let o = tilelocal(
        &["metric", "--space", "chair", "--a", "t.json", "--b", "t.json"],
        dir.path(),
    );
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["upper"], "0/1");
}
