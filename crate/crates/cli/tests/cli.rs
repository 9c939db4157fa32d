use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

fn bnpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bnpg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn bnpg_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bnpg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn gen(dir: &Path, name: &str, args: &[&str]) -> String {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let out = bnpg(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    write(dir, name, &stdout(&out))
}

const TRIANGLE_ANTI: &str = r#"{
  "kind": "game",
  "body": {
    "players": 3,
    "edges": [[0, 1], [0, 2], [1, 2]],
    "altruism": {"directed": true, "edges": []},
    "a": "0",
    "costs": ["1", "1", "1"],
    "tables": [[0, 2, 2, 2], [0, 2, 2, 2], [0, 2, 2, 2]]
  }
}
"#;

#[test]
fn solve_then_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let game = gen(dir.path(), "g.json", &["tree", "--n", "12", "--seed", "7"]);
    let solved = bnpg(&["solve", &game]);
    match code(&solved) {
        0 => {
            let profile = write(dir.path(), "p.json", &stdout(&solved));
            let v = bnpg(&["verify", &game, &profile]);
            assert_eq!(code(&v), 0);
            assert!(stdout(&v).starts_with("equilibrium"));
        }
        3 => assert_eq!(code(&bnpg(&["oracle", "psne", &game])), 3),
        c => panic!("unexpected exit {c}"),
    }
}

#[test]
fn every_method_agrees_on_existence() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6 {
        let game = gen(
            dir.path(),
            "g.json",
            &["clique", "--n", "6", "--seed", &seed.to_string()],
        );
        let expected = code(&bnpg(&["oracle", "psne", &game]));
        for method in ["auto", "clique", "circuit-rank", "brute"] {
            let out = bnpg(&["solve", &game, "--method", method, "--max-rank", "10"]);
            assert_eq!(code(&out), expected, "method {method} seed {seed}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE_ANTI);
    // One investor suffices everywhere, so each single-investor profile is stable.
    assert_eq!(code(&bnpg(&["solve", &tri, "--method", "clique"])), 0);
    assert_eq!(code(&bnpg(&["solve", &tri, "--method", "tree"])), 2);
    assert_eq!(
        code(&bnpg(&[
            "solve",
            &tri,
            "--method",
            "circuit-rank",
            "--max-rank",
            "0"
        ])),
        2
    );
    assert_eq!(code(&bnpg(&["solve", &tri, "--method", "nope"])), 1);
    assert_eq!(
        code(&bnpg(&[
            "solve",
            &dir.path().join("missing.json").to_string_lossy()
        ])),
        1
    );
    let bad = write(dir.path(), "bad.json", "{ not json");
    assert_eq!(code(&bnpg(&["solve", &bad])), 1);
    let all_in = write(
        dir.path(),
        "ones.json",
        r#"{"kind": "profile", "body": {"actions": [1, 1, 1]}}"#,
    );
    let v = bnpg(&["verify", &tri, &all_in]);
    assert_eq!(code(&v), 3);
    assert_eq!(code(&bnpg(&["--help"])), 0);
    assert_eq!(code(&bnpg(&["--version"])), 0);
    assert_eq!(code(&bnpg(&[])), 1);
}

#[test]
fn wrong_document_kind_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let sat = gen(dir.path(), "s.json", &["sat", "--n", "3", "--seed", "1"]);
    let out = bnpg(&["solve", &sat]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected a game"));
}

#[test]
fn stdin_input() {
    let out = bnpg_stdin(&["oracle", "psne", "-"], TRIANGLE_ANTI);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "001\n010\n100\n");
}

#[test]
fn mixed_verification() {
    let dir = TempDir::new().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE_ANTI);
    let pure = write(
        dir.path(),
        "m.json",
        r#"{"kind": "mixed", "body": {"probabilities": ["1", "0", "0"]}}"#,
    );
    assert_eq!(code(&bnpg(&["verify", &tri, &pure, "--eps", "0"])), 0);
    let all = write(
        dir.path(),
        "all.json",
        r#"{"kind": "mixed", "body": {"probabilities": ["1", "1", "1"]}}"#,
    );
    let v = bnpg(&["verify", &tri, &all, "--eps", "1/2"]);
    assert_eq!(code(&v), 3);
    assert_eq!(code(&bnpg(&["verify", &tri, &all, "--eps", "1"])), 0);
}

#[test]
fn knapsack_pipeline_matches_oracle() {
    let dir = TempDir::new().unwrap();
    for seed in 0..5 {
        let ks = gen(
            dir.path(),
            "k.json",
            &["knapsack", "--items", "4", "--seed", &seed.to_string()],
        );
        let yes = code(&bnpg(&["oracle", "min-knapsack", &ks])) == 0 && {
            let text = stdout(&bnpg(&["oracle", "min-knapsack", &ks]));
            let weight: u64 = text.split_whitespace().nth(1).unwrap().parse().unwrap();
            let doc: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(&ks).unwrap()).unwrap();
            weight <= doc["body"]["capacity"].as_u64().unwrap()
        };
        let reduced = bnpg(&["reduce", "knapsack-to-anm", &ks]);
        assert_eq!(code(&reduced), 0);
        let anm = write(dir.path(), "a.json", &stdout(&reduced));
        for method in ["asymmetric", "brute"] {
            let out = bnpg(&["anm", &anm, "--method", method]);
            assert_eq!(code(&out) == 0, yes, "seed {seed} method {method}");
        }
    }
}

#[test]
fn reductions_emit_valid_documents() {
    let dir = TempDir::new().unwrap();
    let sat = gen(dir.path(), "s.json", &["sat", "--n", "6", "--seed", "4"]);
    for variant in ["all-invest", "arbitrary-target"] {
        let out = bnpg(&["reduce", "sat-to-anm", &sat, "--variant", variant]);
        assert_eq!(code(&out), 0);
        assert!(stdout(&out).contains("\"kind\": \"anm\""));
    }
    let anm = write(
        dir.path(),
        "a.json",
        r#"{
  "kind": "anm",
  "body": {
    "game": {
      "players": 3,
      "edges": [[0, 1], [1, 2]],
      "altruism": {"directed": false, "edges": [[0, 1]]},
      "a": "1/2",
      "costs": [2, 2, 2],
      "tables": [[0, 3, 4], [0, 1, 3, 4], [0, 3, 4]]
    },
    "target": [1, 0, 1],
    "add_costs": [{"edge": [1, 2], "cost": 2}],
    "delete_costs": [{"edge": [0, 1], "cost": 1}],
    "budget": "inf"
  }
}
"#,
    );
    for kind in ["homogenize", "homogenize-deg13"] {
        let out = bnpg(&["reduce", kind, &anm]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let h = write(dir.path(), "h.json", &stdout(&out));
        assert_ne!(code(&bnpg(&["anm", &h, "--method", "brute"])), 1);
    }
    let dpgg = write(
        dir.path(),
        "d.json",
        r#"{"kind": "dpgg", "body": {"nodes": 2, "arcs": [[0, 1]], "price": "1/2"}}"#,
    );
    let out = bnpg(&["reduce", "dpgg-to-bnpg", &dpgg, "--eps", "1/10"]);
    assert_eq!(code(&out), 0);
    let game = write(dir.path(), "g.json", &stdout(&out));
    assert_eq!(code(&bnpg(&["solve", &game])), 0);
}

#[test]
fn generation_is_deterministic() {
    for args in [
        vec![
            "gen",
            "circuit-rank",
            "--n",
            "9",
            "--rank",
            "2",
            "--seed",
            "11",
        ],
        vec!["gen", "anm", "--base", "clique", "--n", "5", "--seed", "11"],
    ] {
        let a = bnpg(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, bnpg(&args).stdout);
    }
}

#[test]
fn thread_override() {
    let dir = TempDir::new().unwrap();
    let game = gen(
        dir.path(),
        "g.json",
        &["circuit-rank", "--n", "8", "--rank", "2", "--seed", "3"],
    );
    let out = Command::new(env!("CARGO_BIN_EXE_bnpg"))
        .args(["solve", &game, "--method", "circuit-rank"])
        .env("BNPG_THREADS", "2")
        .output()
        .unwrap();
    assert_ne!(code(&out), 1);
    let bad = Command::new(env!("CARGO_BIN_EXE_bnpg"))
        .args(["solve", &game])
        .env("BNPG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 1);
}
