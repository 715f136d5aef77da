use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        let d = Dir(tempfile::tempdir().unwrap());
        d.write("s2.json", r#"{"weights": ["1/2", "1/2"]}"#);
        d
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_condmodel")).current_dir(self.0.path()).args(args).output().unwrap()
    }
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn eval_reports_events_and_witnesses() {
    let d = Dir::new();
    d.write("f.l2", "exists x. x + x = y\n\n# comment\ny < y + 1\n");
    d.write("a.json", r#"{"num": {"y": ["2", "3"]}}"#);
    let o = d.run(&["eval", "--space", "s2.json", "--bounds", "4,5", "--assign", "a.json", "f.l2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["schema"], "condmodel/1");
    assert_eq!(r["formulas"][0]["line"], 1);
    assert_eq!(r["formulas"][0]["event"], serde_json::json!([0]));
    assert_eq!(r["formulas"][0]["measure"], "1/2");
    assert_eq!(r["formulas"][0]["witnesses"][0]["witness"]["num"], serde_json::json!(["1", "0"]));
    assert_eq!(r["formulas"][1]["line"], 4);
    assert_eq!(r["formulas"][1]["measure"], "1");
}

#[test]
fn eval_error_exit_codes() {
    let d = Dir::new();
    d.write("f.l2", "y = y\n");
    assert_eq!(code(&d.run(&["eval", "--space", "missing.json", "f.l2"])), 3);
    assert_eq!(code(&d.run(&["eval", "f.l2"])), 3);
    assert_eq!(code(&d.run(&["eval", "--space", "s2.json", "--bounds", "5,4", "f.l2"])), 3);
    assert_eq!(code(&d.run(&["eval", "--space", "s2.json", "--bounds", "four", "f.l2"])), 3);
    assert_eq!(code(&d.run(&["eval", "--space", "s2.json", "absent.l2"])), 3);
    // `y` is unbound without an assignment
    let o = d.run(&["eval", "--space", "s2.json", "f.l2"]);
    assert_eq!(code(&o), 1);
    assert!(json(&o)["formulas"][0]["error"].as_str().unwrap().contains("unbound"));

    d.write("bad.l2", "0 = 0\nx + = 1\n");
    let o = d.run(&["eval", "--space", "s2.json", "bad.l2"]);
    assert_eq!(code(&o), 2);
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("line 2, col 5"), "{msg}");
}

#[test]
fn axiom_suite_passes_and_is_reproducible() {
    let d = Dir::new();
    let run = |out: &str| d.run(&["suite", "--axioms", "--trials", "200", "--seed", "7", "--out", out]);
    assert_eq!(code(&run("a.json")), 0);
    assert_eq!(code(&run("b.json")), 0);
    let a = read(&d.path("a.json"));
    assert_eq!(a, read(&d.path("b.json")));
    let r: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(r["passed"], true);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["report"]["checks"].as_array().unwrap().len(), 20);
}

#[test]
fn rules_suite_is_seeded() {
    let d = Dir::new();
    let args = ["suite", "rules", "--space", "s2.json", "--trials", "10", "--instances", "4", "--seed", "9"];
    let a = d.run(&args);
    let b = d.run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["rules"].as_array().unwrap().len(), 15);
    assert!(r["rules"].as_array().unwrap().iter().all(|x| x["failures"] == 0));
    let other = d.run(&["suite", "rules", "--trials", "10", "--instances", "4", "--seed", "10"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn suite_selection() {
    let d = Dir::new();
    let o = d.run(&["suite", "--boolean-laws", "--atoms", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["suite"], "boolean-laws");
    assert_eq!(code(&d.run(&["suite"])), 3);
    assert_eq!(code(&d.run(&["suite", "axioms", "--rules"])), 3);
    assert_eq!(code(&d.run(&["suite", "boolean-laws", "--atoms", "9"])), 3);
}

#[test]
fn argmin_quadratic_scenario() {
    let d = Dir::new();
    d.write("w.csv", "atom,lo,hi,delta,integrand\n0,-1,1,1,x^2\n1,-1,1,1,(x-1)^2\n");
    let first = d.run(&["argmin", "--space", "s2.json", "w.csv"]);
    assert_eq!(code(&first), 0);
    let r = json(&first);
    assert_eq!(r["selection"]["point"], serde_json::json!([["0"], ["1"]]));
    assert_eq!(r["selection"]["value"], serde_json::json!(["0", "0"]));
    assert_eq!(d.run(&["argmin", "--space", "s2.json", "w.csv"]).stdout, first.stdout);
}

#[test]
fn argmin_scenario_errors() {
    let d = Dir::new();
    d.write("z.csv", "0,-1,1,1,1/x\n");
    let o = d.run(&["argmin", "z.csv"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("atom 0, point (0)"));
    d.write("e.csv", "0,1,0,1,x\n");
    assert_eq!(code(&d.run(&["argmin", "e.csv"])), 4);
    assert_eq!(code(&d.run(&["argmin", "none.csv"])), 4);
    d.write("one.csv", "0,0,1,1,x\n");
    assert_eq!(code(&d.run(&["argmin", "--space", "s2.json", "one.csv"])), 4);
}

#[test]
fn bw_subsequence_and_limsup() {
    let d = Dir::new();
    d.write(
        "b.json",
        r#"{"terms": ["(-1)^x", "1/(x+1)"], "target": ["1", "0"], "eps": ["1/2", "1/4", "1/8"],
            "horizon": 100, "window": 10, "bound": ["1", "1"]}"#,
    );
    let o = d.run(&["bw", "--space", "s2.json", "b.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["indices"], serde_json::json!([["0", "1"], ["2", "3"], ["4", "7"]]));
    assert_eq!(r["limsup"], serde_json::json!(["1", "1/91"]));

    d.write("u.json", r#"{"terms": ["1", "0"], "target": ["1", "1"], "eps": ["1/2"], "horizon": 50}"#);
    let o = d.run(&["bw", "u.json"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("atom 1 for step 1"));

    d.write("m.json", r#"{"terms": ["x +"], "target": ["0"], "eps": ["1"], "horizon": 5}"#);
    assert_eq!(code(&d.run(&["bw", "m.json"])), 4);
}
