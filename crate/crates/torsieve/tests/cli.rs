use std::process::{Command, Output};

fn torsieve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsieve")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_small_grassmannian() {
    let o = torsieve(&["verify", "grassmannian", "--q", "2", "--n", "4", "--k", "2", "--alpha", "2,2", "--exhaustive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("9 of 9 elements (exhaustive)"), "{text}");
    assert!(text.contains("verdict: pass"));
}

#[test]
fn json_is_deterministic() {
    let args = [
        "verify", "flag", "--q", "2", "--alpha", "3,2", "--beta", "2,2,1", "--sample", "5", "--seed", "9", "--quiet",
        "--no-timing", "--json", "-",
    ];
    let a = torsieve(&args);
    let b = torsieve(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["cases"].as_array().unwrap().len(), 5);
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn timing_is_reported_by_default() {
    let o = torsieve(&["verify", "setflag", "--alpha", "3", "--beta", "1,2", "--quiet", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn weight_table_of_worked_example() {
    let o = torsieve(&["weights", "lambda", "--n", "9", "--k", "4", "--alpha", "4,2,3", "--lambda", "5,4,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("[t_").count(), 11);
    assert!(text.contains("beta = 2,0,2"));
    let cell = torsieve(&["weights", "cell", "--k", "4", "--alpha", "4,2,3", "--lambda", "5,4,1,1", "--row", "2", "--col", "3"]);
    assert_eq!(stdout(&cell).trim(), "[t_1^q,t_2^{q^3}]");
}

#[test]
fn inversion_table_has_thirteen_rows() {
    let o = torsieve(&["weights", "perm", "--w", "385216479"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 15);
}

#[test]
fn usage_errors_exit_two_with_a_code() {
    for args in [
        &["verify", "grassmannian", "--q", "4", "--k", "1", "--alpha", "2"][..],
        &["verify", "grassmannian", "--n", "3", "--k", "1", "--alpha", "2"],
        &["verify", "flag", "--alpha", "2,2", "--beta", "1,2"],
        &["weights", "perm", "--w", "3,4"],
        &["verify", "nothing"],
    ] {
        let o = torsieve(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.starts_with("error["), "{err}");
    }
}

#[test]
fn identities_and_enumeration() {
    for args in [
        &["identities", "vandermonde", "--q", "4", "--max-n", "4"][..],
        &["identities", "vandermonde", "--q", "3", "--alpha", "2,1", "--beta", "1,2"],
        &["identities", "qt-sum", "--q", "3", "--beta", "2,2"],
        &["identities", "qt-eval", "--q", "2", "--beta", "2,4", "--d", "2"],
        &["identities", "upper-block", "--q", "3", "--a", "2", "--u1", "4", "--u2", "1", "--m1", "1", "--m2", "2"],
        &["identities", "cecioni", "--q", "2", "--size", "4", "--seed", "5"],
    ] {
        let o = torsieve(args);
        assert_eq!(o.status.code(), Some(0), "{args:?} {}", stdout(&o));
        assert!(stdout(&o).contains(": ok"), "{args:?}");
    }
    let o = torsieve(&["enumerate", "subspaces", "--q", "3", "--n", "4", "--k", "2"]);
    assert!(stdout(&o).contains("total 130 (q-binomial 130)"));
    let o = torsieve(&["enumerate", "flags", "--q", "2", "--beta", "1,2,1"]);
    assert!(stdout(&o).contains("total 105 (q-multinomial 105)"));
}

#[test]
fn cecioni_reads_grid_files() {
    let dir = std::env::temp_dir().join(format!("torsieve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.grid");
    let b = dir.join("b.grid");
    std::fs::write(&a, "# nilpotent\n010\n001\n000\n").unwrap();
    std::fs::write(&b, "01\n00\n").unwrap();
    let o = torsieve(&["identities", "cecioni", "--q", "2", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // nilpotent Jordan blocks of sizes 3 and 2 admit min(3, 2) = 2 dimensions of X
    assert!(stdout(&o).contains("lhs 2, rhs 2"), "{}", stdout(&o));
    std::fs::write(&b, "01\n0\n").unwrap();
    let o = torsieve(&["identities", "cecioni", "--q", "2", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn golden_files_are_current() {
    let o = torsieve(&["golden"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn golden_regeneration_is_exact() {
    let dir = std::env::temp_dir().join(format!("torsieve-golden-{}", std::process::id()));
    let o = torsieve(&["golden", "--regen", "--dir", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for entry in std::fs::read_dir(torsieve::golden::default_dir()).unwrap() {
        let path = entry.unwrap().path();
        let fresh = std::fs::read(dir.join(path.file_name().unwrap())).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), fresh, "{}", path.display());
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
