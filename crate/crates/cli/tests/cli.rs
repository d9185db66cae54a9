use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;
use tempfile::TempDir;

use nrc_core::syntax::parse::{parse_gamma, parse_rx, parse_rx_type};
use nrc_core::types::RxType;

const WORKED_E: &str = "(for x R (for y x (ifeq z y (fst z) y)))";

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self) -> &Path {
        self.0.path()
    }
}

fn nrc(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nrc"));
    for a in args {
        cmd.arg(a);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Json {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eval_empty_sequence() {
    let d = Dir::new();
    let e = d.file("a.rx", "()");
    let o = nrc(&[&"eval", &e]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o), serde_json::json!({"set": []}));
}

#[test]
fn eval_penrc_with_environment() {
    let d = Dir::new();
    let e = d.file("e.nrc", "(for x R (fst x))");
    let env = d.file("env.json", r#"{"R": {"set": [{"pair": [{"atom": "a"}, {"atom": "b"}]}]}}"#);
    let o = nrc(&[&"eval", &e, &"--env", &env]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o), serde_json::json!({"set": [{"atom": "a"}]}));
}

#[test]
fn eval_undefined_reports_reason_path_and_span() {
    let d = Dir::new();
    let e = d.file("e.nrc", WORKED_E);
    let env = d.file("env.json", r#"{"R": {"set": [{"set": [{"atom": "d"}]}]}, "z": {"atom": "d"}}"#);
    let o = nrc(&[&"eval", &e, &"--env", &env]);
    assert_eq!(code(&o), 3);
    let j = stdout_json(&o);
    assert_eq!(j["undefined"]["reason"], "proj-on-nonpair");
    assert_eq!(j["undefined"]["path"], serde_json::json!([1, 1, 2]));
    assert_eq!(j["undefined"]["span"]["start"], serde_json::json!({"line": 1, "col": 29}));
    assert!(!o.stderr.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    let d = Dir::new();
    let e = d.file("e.nrc", WORKED_E);
    let o = nrc(&[&"eval", &e]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no binding"));

    let extra = d.file("env.json", r#"{"R": {"set": []}, "z": {"atom": "d"}, "w": {"atom": "d"}}"#);
    assert_eq!(code(&nrc(&[&"eval", &e, &"--env", &extra])), 1);

    let bad = d.file("bad.nrc", "(fst x");
    let o = nrc(&[&"parse", &bad]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.nrc:"));

    let unknown = d.file("e.txt", "x");
    assert_eq!(code(&nrc(&[&"parse", &unknown])), 1);
    assert_eq!(code(&nrc(&[&"parse", &unknown, &"--lang", &"penrc"])), 0);

    let rx = d.file("r.rx", "(children x)");
    let g = d.file("g.gamma", "(x (coll (data)))");
    assert_eq!(code(&nrc(&[&"check", &rx, &"--gamma", &g, &"--mode", &"welldef"])), 1);
}

#[test]
fn check_welldef_failure_gives_counterexample() {
    let d = Dir::new();
    let e = d.file("f.nrc", "(fst x)");
    let g = d.file("g.gamma", "(x (coll (atom)))");
    let o = nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"welldef"]);
    assert_eq!(code(&o), 4);
    let j = stdout_json(&o);
    assert_eq!(j["result"], false);
    assert_eq!(j["counterexample"], serde_json::json!({"x": {"set": []}}));
    assert!(j["bounds"]["examined"].as_u64().unwrap() >= 1);
}

#[test]
fn check_welldef_success() {
    let d = Dir::new();
    let e = d.file("f.nrc", "(for y x (fst y))");
    let g = d.file("g.gamma", "(x (coll (prod (atom) (atom))))");
    let o = nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"welldef"]);
    assert_eq!(code(&o), 0);
    let j = stdout_json(&o);
    assert_eq!(j["result"], true);
    assert_eq!(j["counterexample"], Json::Null);
}

#[test]
fn check_type_and_sat() {
    let d = Dir::new();
    let e = d.file("z.nrc", "(empty)");
    let t = d.file("t.type", "(coll (void))");
    assert_eq!(code(&nrc(&[&"check", &e, &"--mode", &"type", &"--type", &t])), 0);
    let o = nrc(&[&"check", &e, &"--mode", &"sat"]);
    assert_eq!(code(&o), 4);
    assert_eq!(stdout_json(&o)["result"], false);

    let s = d.file("s.nrc", r#"(flatten (for x R (ifeq x "a" (sing x) (empty))))"#);
    let g = d.file("g.gamma", "(R (coll (atom)))");
    let o = nrc(&[&"check", &s, &"--gamma", &g, &"--mode", &"sat"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["counterexample"], serde_json::json!({"R": {"set": [{"atom": "a"}]}}));

    // Type mode without an output type is a usage error.
    assert_eq!(code(&nrc(&[&"check", &e, &"--mode", &"type"])), 1);
}

#[test]
fn check_type_on_ill_defined_expression_fails_precheck() {
    let d = Dir::new();
    let e = d.file("f.nrc", "(fst x)");
    let g = d.file("g.gamma", "(x (coll (atom)))");
    let t = d.file("t.type", "(atom)");
    let o = nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"type", &"--type", &t]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not well-defined"));
}

#[test]
fn check_pure_rx() {
    let d = Dir::new();
    let e = d.file("c.prx", "(children x)");
    let g = d.file("g.gamma", "(x (coll (elem (data))))");
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"welldef"])), 0);
    let item = d.file("i.gamma", "(x (elem (data)))");
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &item, &"--mode", &"welldef"])), 4);
    let t = d.file("t.type", "(coll (data))");
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"type", &"--type", &t])), 0);
    let narrow = d.file("n.type", "(coll (elem (data)))");
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"type", &"--type", &narrow])), 4);
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"sat"])), 1);
}

#[test]
fn budget_exhaustion_exits_five() {
    let d = Dir::new();
    let e = d.file("b.nrc", "(for a x (for b y (for c z (pair a (pair b c)))))");
    let g = d.file("b.gamma", "(x (coll (atom)))\n(y (coll (atom)))\n(z (coll (atom)))\n");
    let o = nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"welldef", &"--max-envs", &"50"]);
    assert_eq!(code(&o), 5);
    assert!(stdout_json(&o)["error"].as_str().unwrap().contains("budget"));
    assert_eq!(code(&nrc(&[&"check", &e, &"--gamma", &g, &"--mode", &"welldef", &"--max-envs", &"0"])), 1);
    assert_eq!(code(&nrc(&[&"check", &e, &"--mode", &"bogus"])), 1);
    assert_eq!(code(&nrc(&[&"--help"])), 0);
}

#[test]
fn translate_children() {
    let d = Dir::new();
    let e = d.file("c.prx", "(children x)");
    let o = nrc(&[&"translate", &e]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "(flatten (for _i x (snd _i)))\n");

    let g = d.file("g.gamma", "(x (elem (data)))");
    let out = d.path().join("t.nrc");
    assert_eq!(code(&nrc(&[&"translate", &e, &"--gamma", &g, &"--out", &out])), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("(flatten (for _i x (snd _i)))\n(x "), "{text}");

    let rx = d.file("r.rx", "(ifempty x x x)");
    assert_eq!(code(&nrc(&[&"translate", &rx])), 1);
}

#[test]
fn compile_ra_union_and_gamma_file() {
    let d = Dir::new();
    let p = d.file("u.ra", "(schema (R A B) (S A B))\n(union R S)\n");
    let o = nrc(&[&"compile-ra", &p]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("(seq"), "{text}");
    assert!(text.contains("(R (coll (elem (coll (elem (single (data)))))))"), "{text}");

    let out = d.path().join("u.rx");
    assert_eq!(code(&nrc(&[&"compile-ra", &p, &"--out", &out])), 0);
    let e = std::fs::read_to_string(&out).unwrap();
    parse_rx(&e).unwrap();
    let g: nrc_core::types::TypeAssignment<RxType> =
        parse_gamma(&std::fs::read_to_string(out.with_extension("gamma")).unwrap()).unwrap();
    assert_eq!(g.len(), 2);

    let bad = d.file("bad.ra", "(schema (R A B) (S C))\n(union R S)\n");
    assert_eq!(code(&nrc(&[&"compile-ra", &bad])), 1);
}

#[test]
fn reduce_deps_writes_parseable_files() {
    let d = Dir::new();
    let p = d.file("p.dep", "(problem (arity 2) (sigma (fd (A1) (A2))) (target (fd (A1) (A2))))\n");
    let out = d.path().join("out");
    let o = nrc(&[&"reduce-deps", &p, &"--out", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["files"].as_array().unwrap().len(), 4);
    let read = |n: &str| std::fs::read_to_string(out.join(n)).unwrap();
    parse_rx(&read("e1.rx")).unwrap();
    parse_rx(&read("e2.rx")).unwrap();
    let g: nrc_core::types::TypeAssignment<RxType> = parse_gamma(&read("input.gamma")).unwrap();
    assert_eq!(g.len(), 1);
    parse_rx_type(&read("output.type")).unwrap();

    assert_eq!(code(&nrc(&[&"reduce-deps", &p])), 1);
}

#[test]
fn parse_prints_canonical_form_that_reparses() {
    let d = Dir::new();
    for (name, text) in [
        ("a.rx", "(for  x (children y)\n (name x))"),
        ("b.prx", "(elem \"a\" ())"),
        ("c.nrc", WORKED_E),
        ("d.ra", "(schema (R A B))\n(project (A) R)"),
        ("e.dep", "(problem (arity 2) (sigma) (target (ind (A1) (A2))))"),
    ] {
        let f = d.file(name, text);
        let o = nrc(&[&"parse", &f]);
        assert_eq!(code(&o), 0, "{name}: {}", String::from_utf8_lossy(&o.stderr));
        let once = stdout(&o);
        let g = d.file(&format!("again.{}", name.rsplit('.').next().unwrap()), &once);
        assert_eq!(stdout(&nrc(&[&"parse", &g])), once, "{name}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let d = Dir::new();
    let e = d.file("f.nrc", "(for y x (ifkind y (kind-atom) y (fst y)))");
    let g = d.file("g.gamma", "(x (coll (sum (atom) (coll (atom)))))");
    let args: [&dyn AsRef<std::ffi::OsStr>; 6] = [&"check", &e, &"--gamma", &g, &"--mode", &"welldef"];
    let first = nrc(&args);
    let second = nrc(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(code(&first), code(&second));
    assert_eq!(code(&first), 4);

    let p = d.file("p.dep", "(problem (arity 3) (sigma (fd (A1) (A2)) (ind (A2) (A3))) (target (fd (A1) (A3))))");
    let (o1, o2) = (d.path().join("o1"), d.path().join("o2"));
    nrc(&[&"reduce-deps", &p, &"--out", &o1]);
    nrc(&[&"reduce-deps", &p, &"--out", &o2]);
    for n in ["e1.rx", "e2.rx", "input.gamma", "output.type"] {
        assert_eq!(std::fs::read(o1.join(n)).unwrap(), std::fs::read(o2.join(n)).unwrap(), "{n}");
    }
}
