use std::path::Path;
use std::process::{Command, Output};

fn raqm(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raqm"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn niven_prints_rational_cosines() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["niven", "--turns", "1/6"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "cos φ = 1/2 (rational)");

    let o = raqm(&["niven", "--turns", "1/5"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("irrational"));
}

#[test]
fn json_reports_carry_a_schema() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["--json", "niven", "--turns", "1/3"], dir.path());
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], "raqm.niven");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["report"]["cosine"]["kind"], "rational");
    assert_eq!(v["report"]["cosine"]["value"], "-1/2");
}

#[test]
fn bad_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["niven", "--turns", "0.5"][..],
        &["bogus"],
        &["bell", "--angles", "0,1/6", "--L", "360", "--trials", "200", "--seed", "1"],
        &["bell", "--angles", "0,1/6,1/3", "--L", "360", "--trials", "20", "--seed", "1"],
    ] {
        let o = raqm(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn unrealisable_parameters_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["state", "--singlet", "1/7", "--L", "8"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("3/7"), "{}", stderr(&o));

    let o = raqm(&["bell", "--angles", "0,1/6,1/3", "--L", "361", "--trials", "200", "--seed", "1"], dir.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn measurement_trace_has_one_line_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["measure", "--m", "3", "--n", "0", "--L", "4", "--seed", "1"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with('↦')).count(), 3);
    assert!(text.contains("after 3 steps"));
}

#[test]
fn itc_reports_the_surd_exception() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["--json", "itc", "--cos-ab", "0", "--cos-bc", "1/3", "--phi", "1/8"], dir.path());
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], "raqm.itc");
    assert!(stdout(&o).contains("2/3"));
}

#[test]
fn bell_runs_from_a_config_file_and_repeats_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("bell.cfg"),
        "# small run\nangles = 0,1/6,1/3\nL = 360\ntrials = 2000\nseed = 7\n",
    )
    .unwrap();
    let run = |out: &str, csv: &str| {
        raqm(
            &["bell", "--config", "bell.cfg", "--out", out, "--csv", csv, "--manifest", "manifest.json"],
            dir.path(),
        )
    };
    let o = run("a.json", "a.csv");
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Bell quantity"));
    let o = run("b.json", "b.csv");
    assert!(o.status.success());

    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    assert_eq!(read("a.json"), read("b.json"));
    assert_eq!(read("a.csv"), read("b.csv"));

    let csv = String::from_utf8(read("a.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("pair,"));

    let report: serde_json::Value = serde_json::from_slice(&read("a.json")).unwrap();
    assert_eq!(report["schema"], "raqm.bell");
    assert_eq!(report["report"]["config"]["trials"], 2000);

    let m: serde_json::Value = serde_json::from_slice(&read("manifest.json")).unwrap();
    assert_eq!(m["command"], "bell");
    assert_eq!(m["seed"], 7);
    assert_eq!(m["config"]["L"], 360);
    assert_eq!(m["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(m["timestamp_unix"].as_u64().unwrap() > 0);
    assert_eq!(m["outputs"], serde_json::json!(["b.json", "b.csv"]));
    assert_eq!(m["args"][0], "bell");
}

#[test]
fn sequential_flag_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bell", "--angles", "0,1/6,1/3", "--L", "360", "--trials", "5000", "--seed", "3"];
    let par = raqm(&[&["--json"][..], &args].concat(), dir.path());
    let seq = raqm(&[&["--json", "--sequential"][..], &args].concat(), dir.path());
    assert!(par.status.success() && seq.status.success());
    assert_eq!(par.stdout, seq.stdout);
}

#[test]
fn singlet_state_and_swap() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["--json", "state", "--singlet", "1/2", "--L", "8", "--seed", "3", "--swap"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], "raqm.state");
    assert!(stdout(&o).contains("-1/2"));
}

#[test]
fn uncertainty_modes() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["uncertainty", "--cos", "1/3,2/3,2/3"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("true"));

    let o = raqm(&["--json", "uncertainty", "--samples", "2000", "--seed", "1"], dir.path());
    assert!(o.status.success());
    assert_eq!(json(&o)["schema"], "raqm.uncertainty");
}

#[test]
fn sphere_csv_lists_every_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = raqm(&["sphere", "--L", "4", "--csv", "points.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("points.csv")).unwrap();
    // Header plus 14 points: the poles once each and L longitudes at every interior latitude.
    assert_eq!(csv.lines().count(), 15);
}
