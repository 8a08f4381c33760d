use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gha")).args(args).env_remove("GHA_CAP_N").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn solve_example_fixture() {
    let o = gha(&["solve", "--instance", &fixture("ex51.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["optimal_envy"], "5");
    let b = gha(&["solve", "--instance", &fixture("star_rational.json"), "--bruteforce"]);
    // Values 0, 1/3, 1/2, 2 scale to 0, 2, 3, 12; the star puts 2 or 3 in the centre.
    assert_eq!(json(&b)["optimal_envy"], "13");
}

#[test]
fn elegance_table_csv() {
    let o = gha(&["elegance", "--upto", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,elegance,witness_terms,runs"));
    let got: Vec<u32> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(got, [1, 2, 1, 2, 3, 2, 1, 2, 3, 2, 3, 2, 3, 2, 1, 2, 3, 2, 3, 4]);
    assert!(text.contains("\n10,2,3;2,4\n"));
}

#[test]
fn approx_inorder_on_values() {
    let o = gha(&["approx", "--algo", "inorder", "--depth", "3", "--values", &fixture("ex51_values.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let achieved: u64 = v["achieved_envy"].as_str().unwrap().parse().unwrap();
    let bound: u64 = v["guarantee_bound"].as_str().unwrap().parse().unwrap();
    assert!(5 <= achieved && achieved <= bound);
    assert_eq!(gha(&["approx", "--algo", "inorder", "--depth", "2", "--values", &fixture("ex51_values.json")]).status.code(), Some(1));
    let inst = gha(&["approx", "--algo", "inorder", "--instance", &fixture("ex51.json")]);
    assert_eq!(json(&inst)["achieved_envy"], v["achieved_envy"]);
}

#[test]
fn approx_trickle_and_layout() {
    let t = gha(&["approx", "--algo", "trickle", "--instance", &fixture("ex51.json")]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(json(&t)["bound_name"], "TrickleDown");
    for layout in ["bfs", "dfs", "trickle", "exact"] {
        let o = gha(&["approx", "--algo", "layout", "--layout", layout, "--instance", &fixture("star_rational.json")]);
        assert_eq!(o.status.code(), Some(0), "{layout}");
    }
    let big = gha(&["approx", "--algo", "layout", "--layout", "exact", "--instance", &fixture("ex51.json")]);
    assert_eq!(big.status.code(), Some(3));
}

#[test]
fn generate_with_witness_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let roles = dir.path().join("roles.json");
    let alloc = dir.path().join("alloc.json");
    let o = gha(&[
        "generate", "--family", "grid", "--tp", &fixture("tp_m2.json"), "--C", "2",
        "--witness", &fixture("tp_m2_witness.json"),
        "--out", inst.to_str().unwrap(), "--roles-out", roles.to_str().unwrap(), "--alloc-out", alloc.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let i: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&roles).unwrap()).unwrap();
    let n = i["n"].as_u64().unwrap() as usize;
    assert_eq!(r.as_array().unwrap().len(), n);
    assert!(std::fs::read_to_string(&alloc).unwrap().contains("assignment"));
    let bad = gha(&["generate", "--family", "depth2", "--tp", &fixture("tp_no_m2.json"), "--witness", &fixture("tp_m2_witness.json")]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn generate_is_seed_reproducible() {
    let tp = fixture("tp_m2.json");
    let run = |seed: &str| gha(&["generate", "--family", "expander", "--tp", &tp, "--C", "2", "--seed", seed]).stdout;
    assert_eq!(run("7"), run("7"));
    let flower = gha(&["generate", "--family", "flower", "--n", "40", "--k", "3"]);
    assert_eq!(json(&flower)["n"], 40);
}

#[test]
fn bounded_tree_yes_equals_threshold() {
    let o = gha(&[
        "generate", "--family", "bounded-tree", "--tp", &fixture("tp_strict.json"), "--desk-scale",
        "--witness", &fixture("tp_strict_witness.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    let nums: Vec<&str> = err.split_whitespace().map(|w| w.trim_end_matches(',')).filter(|w| w.bytes().all(|b| b.is_ascii_digit())).collect();
    assert_eq!(nums.len(), 2);
    assert_eq!(nums[0], nums[1]);
    assert_eq!(json(&o)["n"], 384);
    let strict = gha(&["generate", "--family", "bounded-tree", "--tp", &fixture("tp_strict.json")]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn random_experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("s.json");
    let args = ["random-experiment", "--n", "150", "--seed", "4", "--trials", "3", "--subsets", "300", "--summary", summary.to_str().unwrap()];
    let a = gha(&args);
    let b = gha(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 4);
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(s["trials"], 3);
}

#[test]
fn verify_suites() {
    for suite in ["core", "repunit", "gadgets", "random"] {
        let o = gha(&["verify", "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
    }
    assert_eq!(gha(&["verify", "--suite", "nope"]).status.code(), Some(1));
}

#[test]
fn bench_outputs() {
    let empty = gha(&["bench", "--manifest", &fixture("manifest_empty.json")]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).lines().count(), 2);
    let over = gha(&["bench", "--manifest", &fixture("manifest_over_cap.json")]);
    assert_eq!(over.status.code(), Some(0));
    assert!(stdout(&over).contains("too large"));
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let plots = dir.path().join("plots");
    let args = ["bench", "--manifest", &fixture("manifest_trees.json"), "--out", csv.to_str().unwrap(), "--plot-dir", plots.to_str().unwrap()];
    assert_eq!(gha(&args).status.code(), Some(0));
    let first = std::fs::read(&csv).unwrap();
    assert_eq!(gha(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&csv).unwrap(), first);
    let plot = std::fs::read_to_string(plots.join("random-tree.csv")).unwrap();
    assert_eq!(plot.lines().next(), Some("n,algorithm,ratio"));
    assert_eq!(plot.lines().count(), 1 + 6 * 3 * 2);
}

#[test]
fn usage_and_cap_exit_codes() {
    assert_eq!(gha(&[]).status.code(), Some(1));
    assert_eq!(gha(&["solve"]).status.code(), Some(1));
    assert_eq!(gha(&["--help"]).status.code(), Some(0));
    assert_eq!(gha(&["solve", "--instance", "/nonexistent.json"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n":2,"edges":[[0,0]],"values":[1,2]}"#).unwrap();
    assert_eq!(gha(&["solve", "--instance", bad.to_str().unwrap()]).status.code(), Some(1));
    let big = dir.path().join("big.json");
    let edges: Vec<[usize; 2]> = (1..30).map(|v| [v - 1, v]).collect();
    let inst = serde_json::json!({"n": 30, "edges": edges, "values": (0..30).collect::<Vec<u32>>()});
    std::fs::write(&big, inst.to_string()).unwrap();
    assert_eq!(gha(&["solve", "--instance", big.to_str().unwrap()]).status.code(), Some(3));
    let capped = Command::new(env!("CARGO_BIN_EXE_gha"))
        .args(["solve", "--instance", &fixture("ex51.json")])
        .env("GHA_CAP_N", "8")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}
