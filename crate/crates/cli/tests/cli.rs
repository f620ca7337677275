use std::path::PathBuf;
use std::process::{Command, Output};

fn prcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prcalc")).args(args).env_remove("PRCALC_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prcalc-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn one_shot_commands() {
    for (args, want) in [
        (vec!["normalize", "d1*x1"], "x1*p1 + z\n"),
        (vec!["normalize", "{x1, d1}"], "-1\n"),
        (vec!["normalize", "e(1)*e(-1)"], "1\n"),
        (vec!["bracket", "x1*d1", "x1^2"], "2*x1^2\n"),
        (vec!["commutator", "d1", "x1"], "z\n"),
        (vec!["divz", "x1*z + z^2"], "x1 + z\n"),
        (vec!["classical", "d1*x1^2"], "x1^2*p1\n"),
        (vec!["spectrum", "--cutoff", "2"], "[\"-2\",\"-1\",\"0\",\"1\",\"2\"]\n"),
        (vec!["construct-z", "--scheme", "torus:2"], "pass: z\n"),
        (vec!["normalize", "x1", "--chart", "euclid:3"], "x1\n"),
    ] {
        let o = prcalc(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), want, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(prcalc(&["divz", "x1"]).status.code(), Some(1));
    let o = prcalc(&["normalize", "x1 + * d1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("syntax error at 1:6"));
    assert_eq!(prcalc(&["normalize", "y"]).status.code(), Some(2));
    assert_eq!(prcalc(&["normalize", "x1 + e(1)"]).status.code(), Some(2));
    assert_eq!(prcalc(&["check", "--suite", "unknown"]).status.code(), Some(2));
    assert_eq!(prcalc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(prcalc(&["quantum", "e(3)", "--cutoff", "3"]).status.code(), Some(1));
}

#[test]
fn check_reports_and_seeds() {
    let o = prcalc(&["check", "--suite", "z-divisibility", "--trials", "20", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["records"].as_array().unwrap().len(), 20);
    assert!(v["records"].as_array().unwrap().iter().all(|r| r["verdict"] == "pass"));

    let env = Command::new(env!("CARGO_BIN_EXE_prcalc"))
        .args(["check", "--suite", "z-divisibility", "--trials", "20"])
        .env("PRCALC_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(env.stdout, o.stdout);

    let dir = scratch("out");
    let path = dir.join("r.json");
    let o = prcalc(&["check", "--suite", "twist", "--timings", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("twist: 25 records, 0 failed"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("elapsed_ms"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn scripts_and_scheme_files() {
    let dir = scratch("script");
    std::fs::write(
        dir.join("shifted.scheme"),
        "chart torus:1\ntriple -sin(t1), cos(t1), dt1\ntriple cos(t1), sin(t1), dt1\n",
    )
    .unwrap();
    std::fs::write(dir.join("broken.scheme"), "triple -sin(t1), cos(t1), dt1\ntriple cos(t1), sin(t1)^2, dt1\n").unwrap();
    let script = dir.join("demo.prc");
    std::fs::write(
        &script,
        "# circle\nchart torus:1\nlet v = cos(t1) o dt1\nlet w = sin(t1) o dt1\n{v, w}\nconstruct-z --scheme shifted.scheme\nheisenberg 2\n",
    )
    .unwrap();
    let o = prcalc(&["run", script.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "p1\npass: z\npass: [xi, pi] = -z, -z\n");

    let o = prcalc(&["run", script.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chart"], "torus:1");
    assert_eq!(v["records"][1]["anchor"], "Z = Σ [qᵢ, gᵢ∘wᵢ] equals z");

    let broken = dir.join("broken.scheme");
    let o = prcalc(&["construct-z", "--scheme", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("fail: partition certificate failed"));
    std::fs::remove_dir_all(dir).unwrap();
}
