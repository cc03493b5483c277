use std::process::{Command, Output};

fn ccrecon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccrecon")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_counts() {
    for (class, n, count) in [("forests", "3", 7), ("empty-graphs", "5", 1), ("all-graphs", "3", 8)] {
        let o = ccrecon(&["enumerate", "--class", class, "--n", n]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.starts_with(&format!("# {class} n={n}: {count} graphs\n")), "{text}");
        assert_eq!(text.lines().count(), count + 1);
    }
    let json = stdout(&ccrecon(&["enumerate", "--class", "forests", "--n", "3", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["count"], 7);
    assert_eq!(v["graphs"][6], serde_json::json!([[1, 2], [1, 3]]));
}

#[test]
fn enumerate_beyond_scale_is_an_error() {
    let o = ccrecon(&["enumerate", "--class", "forests", "--n", "9"]);
    assert!(!o.status.success());
    let o = ccrecon(&["enumerate", "--class", "nope", "--n", "3"]);
    assert!(!o.status.success());
}

#[test]
fn weak_two_round_sweep() {
    let o = ccrecon(&["run", "--class", "forests", "--n", "5", "--protocol", "weak-2r"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "protocol,class,n,class_size,rounds,bandwidth_bits,cost,lb_bits,accepts,rejects,errors"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 291);
    assert!(rows.iter().all(|r| r.ends_with(",1,0,0")));
}

#[test]
fn strong_three_round_over_all_graphs() {
    let o = ccrecon(&["run", "--class", "forests", "--n", "4", "--protocol", "strong-3r", "--graph", "all-graphs", "--format", "json"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 64);
    let sum = |k: &str| rows.iter().map(|r| r[k].as_u64().unwrap()).sum::<u64>();
    assert_eq!((sum("accepts"), sum("rejects"), sum("errors")), (38, 26, 0));
}

#[test]
fn identical_bytes_for_identical_runs() {
    let args = ["run", "--class", "forests", "--n", "4", "--protocol", "strong-2r-rand", "--graph", "all-graphs", "--trials", "7", "--seed", "5"];
    assert_eq!(ccrecon(&args).stdout, ccrecon(&args).stdout);
}

#[test]
fn graph_files_and_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("path.txt");
    std::fs::write(&file, "4 3\n1 2\n2 3\n3 4\n").unwrap();
    let tdir = dir.path().join("t");
    let o = ccrecon(&[
        "run", "--class", "forests", "--n", "4", "--protocol", "general-1r-strong",
        "--graph", file.to_str().unwrap(), "--trials", "2", "--transcripts", tdir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tdir.join("g00000-s1.json")).unwrap()).unwrap();
    assert_eq!(t["seed"], 1);
    assert_eq!(t["outcomes"].as_array().unwrap().len(), 4);
    assert_eq!(t["outcomes"][0]["kind"], "reconstructed");
    assert_eq!(t["rounds"][0]["messages"].as_array().unwrap().len(), 12);

    std::fs::write(&file, "4 2\n1 2\n1 2\n").unwrap();
    let o = ccrecon(&["run", "--class", "forests", "--n", "4", "--protocol", "weak-2r", "--graph", file.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate edge"));
}

#[test]
fn member_index_and_cap() {
    let o = ccrecon(&["run", "--class", "forests", "--n", "4", "--protocol", "weak-2r", "--graph", "member:37"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = ccrecon(&["run", "--class", "forests", "--n", "4", "--protocol", "weak-2r", "--graph", "member:38"]);
    assert!(!o.status.success());
    let o = ccrecon(&["run", "--class", "forests", "--n", "4", "--protocol", "weak-2r", "--bandwidth-cap", "3"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bandwidth violation"));
}

#[test]
fn verify_suites() {
    for suite in ["lemma1", "distance"] {
        let o = ccrecon(&["verify", suite]);
        assert!(o.status.success(), "{suite}");
        for line in stdout(&o).lines() {
            let r: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(r["pass"], true);
        }
    }
    let o = ccrecon(&["verify", "protocols", "--class", "forests", "--n", "4", "--trials", "20", "--format", "text"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn empty_selection_passes_with_warning() {
    let o = ccrecon(&["verify", "all", "--class", "", "--trials", "1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
