use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

struct Docs {
    dir: TempDir,
}

impl Docs {
    fn new() -> Self {
        let docs = Docs { dir: TempDir::new().unwrap() };
        docs.write("b4.json", r#"{"kind":"powerset","atoms":["x","y"]}"#);
        docs.write("c3.json", r#"{"kind":"poset","elements":["0","m","1"],"leq":[["0","m"],["m","1"]]}"#);
        docs.write("mu.json", r#"{"on_open_weights":{"x":"2","y":"3"}}"#);
        docs.write("f.json", r#"{"kind":"simple","terms":[["2","x"],["3","y"]]}"#);
        docs.write("one.json", r#"{"kind":"constant","value":"1"}"#);
        docs
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| if a.ends_with(".json") { self.path(a).display().to_string() } else { a.to_string() })
            .collect();
        Command::new(env!("CARGO_BIN_EXE_sigma-integral")).args(&resolved).output().unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn integrate_running_example() {
    let d = Docs::new();
    let o = d.run(&["integrate", "--lattice", "b4.json", "--measure", "mu.json", "--function", "f.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "13\nsummable\n");
    let o = d.run(&["integrate", "--lattice", "b4.json", "--measure", "mu.json", "--function", "f.json", "--over", "open:x"]);
    assert_eq!(stdout(&o).lines().next(), Some("4"));
}

#[test]
fn integrate_json_and_signed_cases() {
    let d = Docs::new();
    d.write("heavy.json", r#"{"on_open_weights":{"x":"2","y":"inf"}}"#);
    d.write("signed.json", r#"{"kind":"simple","terms":[["2","x"],["-3","y"]]}"#);
    let o = d.run(&[
        "integrate", "--lattice", "b4.json", "--measure", "heavy.json", "--function", "signed.json", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], "-inf");
    assert_eq!(v["positive"], "4");
    assert_eq!(v["negative"], "inf");
    assert_eq!(v["classification"], "integrable-not-summable");

    d.write("inf_both.json", r#"{"on_open_weights":{"x":"inf","y":"inf"}}"#);
    d.write("mixed.json", r#"{"kind":"simple","terms":[["1","x"],["-1","y"]]}"#);
    let o = d.run(&["integrate", "--lattice", "b4.json", "--measure", "inf_both.json", "--function", "mixed.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not integrable"), "{}", stderr(&o));
}

#[test]
fn decompose_trace() {
    let d = Docs::new();
    let o = d.run(&["decompose", "--function", "one.json", "--k", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.ends_with("f_7 = 41/42\n"), "{out}");
    assert!(out.contains("f_2 = 1/2\n") && out.contains("f_3 = 5/6\n"));
    let default_horizon = stdout(&d.run(&["decompose", "--function", "one.json"]));
    assert!(default_horizon.contains("f_12 = "));

    d.write("neg.json", r#"{"kind":"constant","value":"-1"}"#);
    assert_eq!(d.run(&["decompose", "--function", "neg.json"]).status.code(), Some(3));
}

#[test]
fn congruences_and_eval() {
    let d = Docs::new();
    let out = stdout(&d.run(&["congruences", "--lattice", "c3.json"]));
    assert!(out.starts_with("C(L): 4 congruences\n"), "{out}");
    assert!(out.contains("{0,m}{1}  ∇_m"), "{out}");
    assert!(out.contains("{0}{m,1}  Δ_m"), "{out}");

    let out = stdout(&d.run(&["eval", "--lattice", "b4.json", "--function", "f.json"]));
    assert_eq!(
        out,
        "f(p,—):\n  p < 2: 1\n  2 <= p < 3: y\n  p >= 3: 0\nf(—,q):\n  q <= 2: 0\n  2 < q <= 3: x\n  q > 3: 1\n"
    );
}

#[test]
fn canonicalize_and_indefinite() {
    let d = Docs::new();
    d.write("g.json", r#"{"kind":"simple","terms":[["1","x"],["1","1"]]}"#);
    assert_eq!(stdout(&d.run(&["canonicalize", "--lattice", "b4.json", "--function", "g.json"])), "[(1,y),(2,x)]\n");

    let o = d.run(&["indefinite", "--lattice", "b4.json", "--measure", "mu.json", "--function", "f.json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["void: 0", "open:x: 4", "open:y: 9", "L: 13", "measure axioms: ok"] {
        assert!(out.lines().any(|l| l == line), "missing `{line}` in {out}");
    }
}

#[test]
fn validation_errors_exit_2() {
    let d = Docs::new();
    d.write("m3.json", r#"{"kind":"poset","elements":["0","a","b","c","1"],"leq":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#);
    let o = d.run(&["validate", "--lattice", "m3.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not distributive"));

    d.write("bad_mu.json", r#"{"values":{"void":"0","open:x":"4","open:y":"3","L":"5"}}"#);
    let o = d.run(&["validate", "--lattice", "b4.json", "--measure", "bad_mu.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("(M3)"), "{}", stderr(&o));

    d.write("garbage.json", "{");
    assert_eq!(d.run(&["validate", "--lattice", "garbage.json"]).status.code(), Some(2));
    assert!(!d.path("missing.json").exists());
    assert_eq!(d.run(&["validate", "--lattice", "missing.json"]).status.code(), Some(2));

    let ok = d.run(&["validate", "--lattice", "b4.json", "--measure", "mu.json", "--function", "f.json"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn uncomplemented_terms_exit_3() {
    let d = Docs::new();
    d.write("chi_m.json", r#"{"kind":"simple","terms":[["1","m"]]}"#);
    let o = d.run(&["canonicalize", "--lattice", "c3.json", "--function", "chi_m.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not complemented in"), "{}", stderr(&o));
}

#[test]
fn bridge_command() {
    let d = Docs::new();
    d.write("space.json", r#"{"points":["x","y"],"algebra":"powerset","lambda":{"x":"2","y":"3"}}"#);
    d.write("ft.json", r#"{"kind":"pointwise","values":{"x":"2","y":"3"}}"#);
    let o = d.run(&["bridge", "--space", "space.json", "--function", "ft.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "classical: 13 (summable)\npoint-free: 13 (summable)\nagree\n");
    let o = d.run(&["bridge", "--space", "space.json", "--function", "ft.json", "--over", "x"]);
    assert!(stdout(&o).starts_with("classical: 4 "));
}

#[test]
fn output_is_deterministic() {
    let d = Docs::new();
    let args = ["verify", "--only", "1,4", "--seed", "11"];
    let first = d.run(&args);
    let second = d.run(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stdout(&first));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&first).contains("criterion 1 (bridge-oracle equivalence): PASS"));
}
