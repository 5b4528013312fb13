use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn esd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_esd")).args(args).output().expect("spawn esd")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = esd(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("esd-cli-{}-{name}", std::process::id()));
    fs::write(&path, contents).unwrap();
    path
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

const CONCLUSIONS: &str =
    r#"{"kind":"rmatrix","data":[[1,0,0,-0.24],[0,-0.25,0,0],[0,0,-0.25,0],[-0.24,0,0,-0.5]]}"#;

#[test]
fn classify_alpha_point() {
    let s = ok(&["classify", "--point", "-0.5,-0.7,-0.3"]);
    assert_eq!(field(&s, "class"), Some("ESD"));
    let t: f64 = field(&s, "gamma_t").unwrap().parse().unwrap();
    assert!((t - 0.624).abs() < 1e-3);
    assert_eq!(field(&s, "d_p"), Some("0.5"));
    assert_eq!(field(&s, "d_1"), Some("0.34"));
}

#[test]
fn classify_origin_and_singlet() {
    assert_eq!(ok(&["classify", "--point", "0,0,0"]).trim(), "class=Separable");
    assert_eq!(field(&ok(&["classify", "--point", "-1,-1,-1"]), "class"), Some("EAD"));
}

#[test]
fn classify_cone_matches_its_bell_point() {
    let a = ok(&["classify", "--cone", "2,-1,-1.4,-0.6"]);
    let b = ok(&["classify", "--point", "-0.5,-0.7,-0.3"]);
    assert_eq!(field(&a, "gamma_t"), field(&b, "gamma_t"));
}

#[test]
fn classify_json_is_parseable() {
    let s = ok(&["classify", "--point", "-0.5,-0.7,-0.3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["class"], "ESD");
}

#[test]
fn bad_input_exit_codes() {
    // malformed list: usage error
    assert_eq!(esd(&["classify", "--point", "1,2"]).status.code(), Some(2));
    assert_eq!(esd(&["classify"]).status.code(), Some(2));
    // outside the tetrahedron: domain error
    assert_eq!(esd(&["classify", "--point", "1,1,1"]).status.code(), Some(3));
    let bad = temp_file("unphysical.json", r#"{"kind":"rmatrix","data":[[1,0,0,0],[0,2,0,0],[0,0,2,0],[0,0,0,2]]}"#);
    assert_eq!(esd(&["normal-form", "--state", bad.to_str().unwrap()]).status.code(), Some(3));
    fs::remove_file(bad).ok();
}

#[test]
fn evolve_singlet_follows_exponential() {
    let s = ok(&["evolve", "--point", "-1,-1,-1", "--tau", "5", "--samples", "50"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("tau,x0,x1,x2,x3,x4,x5,concurrence"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 50);
    for r in rows {
        // twelve significant digits in the output
        assert!((r[7] - (-r[0]).exp()).abs() <= 1e-11);
    }
}

#[test]
fn evolve_oracle_reports_agreement() {
    let s = ok(&["evolve", "--point", "-0.5,-0.7,-0.3", "--tau", "2", "--samples", "21", "--oracle"]);
    assert!(s.starts_with("tau,concurrence\n"));
    let diff: f64 = s.lines().last().unwrap().strip_prefix("# max_abs_diff=").unwrap().parse().unwrap();
    assert!(diff < 1e-6);
}

#[test]
fn sweep_small_grid() {
    let s = ok(&["sweep", "--grid", "3"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "x1,x2,x3,class,gamma_t,d_p,d_1,d_2");
    // the 27-point grid meets the closed tetrahedron in 11 points
    assert_eq!(lines.len() - 1, 11);
    assert!(lines.contains(&"-1,-1,-1,EAD,,2,-1,0"));
    assert!(lines.contains(&"0,0,0,Separable,,0,1,2"));
}

#[test]
fn sweep_slice_fixes_the_coordinate() {
    let s = ok(&["sweep", "--grid", "5", "--slice", "x3=-0.5"]);
    for row in s.lines().skip(1) {
        assert_eq!(row.split(',').nth(2), Some("-0.5"));
    }
    assert!(s.contains("-0.5,-0.5,-0.5,ESD,0.623810716365"));
    assert_eq!(esd(&["sweep", "--slice", "x4=0"]).status.code(), Some(2));
}

#[test]
fn sweep_counts_are_swap_symmetric() {
    let s = ok(&["sweep", "--grid", "21"]);
    let rows: Vec<Vec<&str>> = s.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let class_of = |x1: &str, x2: &str, x3: &str| {
        rows.iter().find(|r| r[0] == x1 && r[1] == x2 && r[2] == x3).map(|r| r[3])
    };
    for r in &rows {
        assert_eq!(class_of(r[1], r[0], r[2]), Some(r[3]), "{r:?}");
    }
}

#[test]
fn sweep_writes_file() {
    let path = std::env::temp_dir().join(format!("esd-cli-{}-sweep.csv", std::process::id()));
    let printed = ok(&["sweep", "--grid", "5"]);
    ok(&["sweep", "--grid", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&path).unwrap(), printed);
    fs::remove_file(path).ok();
}

#[test]
fn normal_form_of_the_counterexample() {
    let state = temp_file("conclusions.json", CONCLUSIONS);
    let s = ok(&["normal-form", "--state", state.to_str().unwrap(), "--classify"]);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "class=Diagonal");
    assert_eq!(lines[1], "diag(1, -0.304878, -0.304878, -0.829268)");
    assert!(lines[2].starts_with("representative_class=ESD gamma_t="));
    assert!(lines[3].contains("no finite death time"));
    let json = ok(&["normal-form", "--state", state.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["class"], "Diagonal");
    fs::remove_file(state).ok();
}

#[test]
fn verify_is_deterministic() {
    let a = ok(&["verify", "--seed", "3", "--count", "10"]);
    let b = ok(&["verify", "--seed", "3", "--count", "10"]);
    assert_eq!(a, b);
    assert!(a.starts_with("generator=ChaCha8 seed=3\n"));
    assert!(a.ends_with("overall=pass\n"));
    assert_ne!(a, ok(&["verify", "--seed", "4", "--count", "10"]));
}

#[test]
fn surface_point_clouds() {
    assert_eq!(ok(&["surface", "--which", "quadratic", "--resolution", "3"]), "x1,x2,x3,surface_name\n0,0,-1,quadratic\n");
    let s = ok(&["surface", "--which", "octahedron", "--resolution", "5"]);
    assert!(s.lines().skip(1).all(|l| l.ends_with(",octahedron")));
    assert_eq!(esd(&["surface", "--which", "sphere"]).status.code(), Some(2));
}
