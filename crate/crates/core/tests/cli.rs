use std::process::{Command, Output};

use cr_wedge::scenario::{builtin, SCENARIO_DIR_VAR};

fn crwedge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crwedge"))
        .args(args)
        .env_remove(SCENARIO_DIR_VAR)
        .output()
        .expect("binary runs")
}

fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

#[test]
fn example_1_4_passes_and_reports_levi_value() {
    let o = crwedge(&["verify-example", "1.4"]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    let line = out.lines().find(|l| l.starts_with("L(w0)[0]")).unwrap();
    assert!(line.contains("-2.000000000000e-1"), "{line}");
}

#[test]
fn example_1_3_fails_on_genericity() {
    let o = crwedge(&["verify-example", "1.3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("edge not generic (rank 2 < 4)"));
}

#[test]
fn angle_on_example_1_4() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("angle.csv");
    let o = crwedge(&["angle", "example-1.4", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("name,value,tolerance,margin,verdict\n"));
    let gamma: f64 = rows
        .lines()
        .find(|l| l.starts_with("angle example-1.4/gamma,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((gamma - std::f64::consts::FRAC_PI_2).abs() < 2.0 * std::f64::consts::PI / 720.0);
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(
        crwedge(&["levi", "no-such-scenario"]).status.code(),
        Some(2)
    );
    assert_eq!(crwedge(&["verify-example", "2.1"]).status.code(), Some(2));
    assert_eq!(
        crwedge(&["attach", "quadric", "--grid", "1000"])
            .status
            .code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let mut f = builtin("example-1.4").unwrap();
    f.manifold.h = vec!["abs2(w1) + ".into()];
    std::fs::write(&bad, f.to_json()).unwrap();
    let o = crwedge(&["levi", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("syntax error"));
}

#[test]
fn hypothesis_failures_exit_1_with_clause() {
    let o = crwedge(&["hypotheses", "example-1.2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("levi direction available"));
    let o = crwedge(&["edge-check", "example-1.2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("levi cones span"));
}

#[test]
fn scenario_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let mut f = builtin("quadric").unwrap();
    f.name = "renamed".into();
    std::fs::write(dir.path().join("mine.json"), f.to_json()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_crwedge"))
        .args(["attach", "mine", "--grid", "256"])
        .env(SCENARIO_DIR_VAR, dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("attach renamed"));
}

#[test]
fn show_roundtrips_through_files() {
    let o = crwedge(&["show", "lift"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lift.json");
    std::fs::write(&p, &o.stdout).unwrap();
    let again = crwedge(&["show", p.to_str().unwrap()]);
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = crwedge(&[
            "levi",
            "example-1.4",
            "--samples",
            "800",
            "--csv",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn tolerance_scale_tightens_checks() {
    let o = crwedge(&["attach", "example-1.4", "--tolerance-scale", "1e-3"]);
    assert_eq!(o.status.code(), Some(1), "{}", text(&o));
    assert!(text(&o).contains("holomorphy residual"));
}
