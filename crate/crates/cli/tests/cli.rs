use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const LOOP_P: &str = r#"{"functor":"kripke","atoms":["p"],"states":["x"],
  "transition":{"x":{"props":["p"],"succ":["x"]}}}"#;
const CYCLE_P: &str = r#"{"functor":"kripke","atoms":["p"],"states":["a","b"],
  "transition":{"a":{"props":["p"],"succ":["b"]},"b":{"props":["p"],"succ":["a"]}}}"#;
const DEADLOCK: &str = r#"{"functor":"kripke","atoms":[],"states":["y"],
  "transition":{"y":{"props":[],"succ":[]}}}"#;
const LIVE: &str = r#"{"functor":"kripke","atoms":[],"states":["x"],
  "transition":{"x":{"props":[],"succ":["x"]}}}"#;
const SPLIT: &str = r#"{"functor":"distribution","states":["x","a","b"],
  "transition":{"x":{"a":"1/2","b":"1/2"},"a":{"a":"1"},"b":{"b":"1"}}}"#;
const POINT: &str = r#"{"functor":"distribution","states":["y","c"],
  "transition":{"y":{"c":"1"},"c":{"c":"1"}}}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, body).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn coalsim(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coalsim"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn eval_on_labelled_loop() {
    let ws = Workspace::new();
    let m = ws.file("m.json", LOOP_P);
    let o = coalsim(&[&"eval", &p(&m), &"x", &"<> p"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "true\n");
    let o = coalsim(&[&"eval", &p(&m), &"x", &"[] ~p"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "false\n");
}

#[test]
fn eval_rejects_foreign_modality() {
    let ws = Workspace::new();
    let m = ws.file("m.json", LOOP_P);
    let o = coalsim(&[&"eval", &p(&m), &"x", &"L(1/2) true"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("L(1/2)"));
}

#[test]
fn closure_of_zigzag_has_four_pairs() {
    let ws = Workspace::new();
    let r = ws.file(
        "r.json",
        r#"{"pairs":[["x1","y1"],["x2","y1"],["x2","y2"]]}"#,
    );
    let o = coalsim(&[&"closure", &p(&r)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(x1, y1)\n(x1, y2)\n(x2, y1)\n(x2, y2)\n");
    let o = coalsim(&[&"--json", &"closure", &p(&r)]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn tbisim_fails_on_non_transportable_mass() {
    let ws = Workspace::new();
    let c = ws.file("c.json", SPLIT);
    let d = ws.file("d.json", POINT);
    let r = ws.file("r.json", r#"{"pairs":[["x","y"],["a","c"]]}"#);
    let o = coalsim(&[&"tbisim", &p(&c), &p(&d), &p(&r)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "no coupling\n");
}

#[test]
fn tbisim_finds_kripke_coupling() {
    let ws = Workspace::new();
    let c = ws.file(
        "c.json",
        r#"{"functor":"kripke","atoms":[],"states":["x","a","b"],
        "transition":{"x":{"props":[],"succ":["a","b"]},"a":{"props":[],"succ":[]},"b":{"props":[],"succ":[]}}}"#,
    );
    let d = ws.file(
        "d.json",
        r#"{"functor":"kripke","atoms":[],"states":["y","c"],
        "transition":{"y":{"props":[],"succ":["c"]},"c":{"props":[],"succ":[]}}}"#,
    );
    let r = ws.file("r.json", r#"{"pairs":[["x","y"],["a","c"],["b","c"]]}"#);
    let o = coalsim(&[&"--json", &"tbisim", &p(&c), &p(&d), &p(&r)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["found"], true);
    let xy = v["coupling"]["couplings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["pair"] == serde_json::json!(["x", "y"]))
        .unwrap();
    assert_eq!(xy["value"]["succ"], serde_json::json!(["(a,c)", "(b,c)"]));
}

#[test]
fn check_sim_reports_witness_and_exit_codes() {
    let ws = Workspace::new();
    let c = ws.file("c.json", LIVE);
    let d = ws.file("d.json", DEADLOCK);
    let r = ws.file("r.json", r#"{"pairs":[["x","y"]]}"#);
    let o = coalsim(&[
        &"--sig",
        &"kripke:diamond",
        &"check-sim",
        &p(&c),
        &p(&d),
        &p(&r),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "fails\n  forward x -> y: <> {x}\n");
    let back = ws.file("back.json", r#"{"pairs":[["y","x"]]}"#);
    let o = coalsim(&[
        &"--sig",
        &"kripke:diamond",
        &"check-sim",
        &p(&d),
        &p(&c),
        &p(&back),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = coalsim(&[
        &"--sig",
        &"kripke:diamond",
        &"check-sim",
        &p(&d),
        &p(&c),
        &p(&back),
        &"--bi",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = coalsim(&[&"check-sim", &p(&c), &p(&d), &p(&r), &"--n", &"0"]);
    assert_eq!(o.status.code(), Some(0));
    let o = coalsim(&[&"check-sim", &p(&c), &p(&d), &p(&r), &"--n", &"1", &"--bi"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn greatest_bisim_and_nstep_on_unfolding() {
    let ws = Workspace::new();
    let c = ws.file("c.json", CYCLE_P);
    let d = ws.file("d.json", LOOP_P);
    let o = coalsim(&[&"greatest-bisim", &p(&c), &p(&d)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "(a, x)\n(b, x)\n");
    let o = coalsim(&[&"nstep", &p(&c), &p(&d), &"--n", &"2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "B0: a b | x\n");
    let o = coalsim(&[&"greatest-sim", &p(&c), &p(&d), &"--n", &"3"]);
    assert_eq!(stdout(&o), "(a, x)\n(b, x)\n");
}

#[test]
fn greatest_sim_empty_is_exit_one() {
    let ws = Workspace::new();
    let c = ws.file("c.json", LIVE);
    let d = ws.file("d.json", DEADLOCK);
    let o = coalsim(&[&"--sig", &"kripke:diamond", &"greatest-sim", &p(&c), &p(&d)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "");
    let o = coalsim(&[&"--sig", &"kripke:diamond", &"greatest-sim", &p(&d), &p(&c)]);
    assert_eq!(stdout(&o), "(y, x)\n");
}

#[test]
fn behavioural_writes_witness() {
    let ws = Workspace::new();
    let c = ws.file("c.json", CYCLE_P);
    let d = ws.file("d.json", LOOP_P);
    let w = ws.path("w.json");
    let o = coalsim(&[&"behavioural", &p(&c), &p(&d), &"--witness", &p(&w)]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(v["blocks"], serde_json::json!(["B0"]));
    assert_eq!(v["kappa_right"]["x"], "B0");
}

#[test]
fn behavioural_requires_separating_signature() {
    let ws = Workspace::new();
    let c = ws.file("c.json", CYCLE_P);
    let o = coalsim(&[&"--sig", &"kripke:diamond", &"behavioural", &p(&c), &p(&c)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_model_is_exit_two() {
    let ws = Workspace::new();
    let bad = ws.file(
        "bad.json",
        r#"{"functor":"distribution","states":["a"],"transition":{"a":{"a":"5/6"}}}"#,
    );
    let o = coalsim(&[&"eval", &p(&bad), &"a", &"true"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("5/6"));
    let o = coalsim(&[&"eval"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn randtest_exit_codes() {
    let o = coalsim(&[
        &"randtest",
        &"stability",
        &"--trials",
        &"500",
        &"--seed",
        &"3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("PASS\n"));
    let o = coalsim(&[
        &"randtest",
        &"prop-difunctional",
        &"--trials",
        &"500",
        &"--seed",
        &"3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = coalsim(&[
        &"randtest",
        &"open-problem-search",
        &"--trials",
        &"20",
        &"--seed",
        &"3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = coalsim(&[&"randtest", &"no-such-property"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let ws = Workspace::new();
    let c = ws.file("c.json", CYCLE_P);
    let d = ws.file("d.json", LOOP_P);
    for args in [
        vec![
            "--json",
            "randtest",
            "n-step-equivalence",
            "--trials",
            "200",
            "--seed",
            "9",
        ],
        vec![
            "randtest",
            "behavioural-soundness",
            "--trials",
            "200",
            "--seed",
            "9",
        ],
    ] {
        let args: Vec<&dyn AsRef<std::ffi::OsStr>> = args
            .iter()
            .map(|a| a as &dyn AsRef<std::ffi::OsStr>)
            .collect();
        assert_eq!(coalsim(&args).stdout, coalsim(&args).stdout);
    }
    let a = coalsim(&[&"--json", &"greatest-sim", &p(&c), &p(&d)]);
    let b = coalsim(&[&"--json", &"greatest-sim", &p(&c), &p(&d)]);
    assert_eq!(a.stdout, b.stdout);
}
