use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_frameforge");

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn valid_k_axiom_exits_zero() {
    let o = run(&["valid", "--frame", &fixture("three.json"), "--formula", "[]1 (p -> q) -> []1 p -> []1 q"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "valid\n");
}

#[test]
fn valid_refutation_exits_one_and_writes_countermodel() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cm.json");
    let o = run(&[
        "valid",
        "--frame",
        &fixture("three.json"),
        "--formula",
        "[]1 false -> []2 []1 false",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).lines().next().unwrap(), "refuted at u with any valuation");
    assert!(out.exists());
}

#[test]
fn errors_exit_two() {
    let o = run(&["eval", "--frame", &fixture("broken.json"), "--formula", "p"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4, column 23"), "{}", stderr(&o));
    let o = run(&["parse", "[]3 p"]);
    assert_eq!(code(&o), 2);
    let o = run(&["eval", "--frame", "/nonexistent/frame.json", "--formula", "p"]);
    assert_eq!(code(&o), 2);
    let o = run(&["no-such-command"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn eval_two_world_example() {
    let o = run(&["eval", "--frame", &fixture("uv.json"), "--formula", "[]1 p"]);
    assert_eq!(stdout(&o), "u: true\nv: true\n");
    let o = run(&["--json", "eval", "--frame", &fixture("uv.json"), "--formula", "<>1 true", "--at", "v"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["truth"]["v"], false);
}

#[test]
fn parse_prints_canonical_form() {
    let o = run(&["parse", "[]1(p->q)"]);
    assert_eq!(
        stdout(&o),
        "[]1 (p -> q)\ndepth 1, variables {p, q}, modalities {1}, closed false\n"
    );
}

#[test]
fn product_listing() {
    let o = run(&["product", "--left", &fixture("chain_a.json"), "--right", &fixture("chain_b.json")]);
    assert_eq!(
        stdout(&o),
        "kripke frame: 4 worlds, 2 relations, root a0,b0\n\
         R1 a0,b0 -> a1,b0\n\
         R1 a0,b1 -> a1,b1\n\
         R2 a0,b0 -> a0,b1\n\
         R2 a1,b0 -> a1,b1\n"
    );
}

#[test]
fn wproduct_writes_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("wp.json");
    let o = run(&[
        "wproduct",
        "--left",
        &fixture("chain_a.json"),
        "--right",
        &fixture("chain_b.json"),
        "--depth",
        "2",
        "--pretrans",
        "1:2",
        "--pretrans",
        "2:2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("depth 2, total true\nkripke frame: 5 worlds, 2 relations, root ε\n"));
    let file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(file["type"], "kripke");
    assert_eq!(file["meta"]["total"], true);
    assert_eq!(file["meta"]["depth"], 2);
    let o = run(&["wproduct", "--left", &fixture("chain_a.json"), "--right", &fixture("chain_b.json"), "--depth", "2", "--pretrans", "3:2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn thickening_projection_is_a_pmorphism() {
    let dir = tempfile::tempdir().unwrap();
    let (t, m): (PathBuf, PathBuf) = (dir.path().join("t.json"), dir.path().join("m.json"));
    let o = run(&[
        "thicken",
        "--frame",
        &fixture("chain_a.json"),
        "--size",
        "2",
        "--out",
        t.to_str().unwrap(),
        "--map-out",
        m.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("kripke frame: 3 worlds, 1 relations, root a0,0\nR1 a0,0 -> a1,0\nR1 a0,0 -> a1,1\n"));
    let o = run(&["pmorph", "--source", t.to_str().unwrap(), "--target", &fixture("chain_a.json"), "--map", m.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "PASS p-morphism\n");
}

#[test]
fn node_cap_from_environment() {
    let o = Command::new(BIN)
        .args(["thicken", "--frame", &fixture("chain_a.json"), "--size", "3"])
        .env("FRAMEFORGE_MAX_NODES", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("above the cap of 3"), "{}", stderr(&o));
}

#[test]
fn dense_eval_verdict_line() {
    let o = run(&["dense-eval", "--pattern", "p=(0 0)* 1", "--at", "", "--formula", "<>1 p & <>1 ~p", "--kmax", "8", "--len", "12"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "true@bound (k_max=8, L=12) at ''\n");
}

#[test]
fn search_output_is_pinned_and_thread_independent() {
    let args = ["search", "--kind", "wproduct", "--max-worlds", "2", "--formula", "[]1 []2 p -> []2 []1 p"];
    let o = run(&args);
    assert_eq!(
        stdout(&o),
        "refuted: frame #3 at ε with p = {1:a1|2:b1}\n\
         kripke frame: 5 worlds, 2 relations, root ε\n\
         R1 ε -> 1:a1\n\
         R1 2:b1 -> 2:b1|1:a1\n\
         R2 ε -> 2:b1\n\
         R2 1:a1 -> 1:a1|2:b1\n\
         exhaustive search over weak-product, 4 frames checked, 0 skipped\n"
    );
    let json = |threads: &str| {
        let mut a = vec!["--json", "--threads", threads];
        a.extend(["search", "--kind", "kripke", "--max-worlds", "6", "--formula", "[]1 p -> []1 []1 p", "--seed", "5", "--samples", "300"]);
        stdout(&run(&a))
    };
    assert_eq!(json("1"), json("4"));
}

#[test]
fn demos_pass_and_unknown_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let listed = stdout(&run(&["demo", "--list"]));
    for name in listed.lines().map(|l| l.split_whitespace().next().unwrap()) {
        let o = run(&["demo", name, "--out-dir", out]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        let text = stdout(&o);
        assert!(text.starts_with(&format!("demo {name}: ")));
        assert!(text.lines().last().unwrap().starts_with("PASS in "));
        assert!(!text.contains("FAIL"));
    }
    assert!(dir.path().join("k-times-k-separation/kripke-witness.json").exists());
    let o = run(&["demo", "unknown", "--out-dir", out]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown demo 'unknown'"));
}

#[test]
fn demo_list_names_every_demo() {
    let o = run(&["demo", "--list"]);
    let names: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(
        names,
        [
            "fusion-subset",
            "k-times-k-separation",
            "delta-in-nproducts",
            "wproduct-delta",
            "wproduct-com-refutation",
            "dense-diamond-p",
            "horn-closure",
            "seriality-collapse",
            "derived-topology",
        ]
    );
}

#[test]
fn help_documents_every_flag() {
    let flags: &[(&str, &[&str])] = &[
        ("parse", &["--modalities"]),
        ("eval", &["--frame", "--formula", "--at"]),
        ("valid", &["--frame", "--formula", "--out"]),
        ("product", &["--left", "--right", "--out"]),
        ("nproduct", &["--left", "--right", "--out"]),
        ("wproduct", &["--left", "--right", "--out", "--depth", "--pretrans"]),
        ("closure", &["--frame", "--rules", "--pretrans", "--out"]),
        ("unravel", &["--frame", "--depth", "--out", "--map-out"]),
        ("thicken", &["--frame", "--size", "--out", "--map-out"]),
        ("pmorph", &["--source", "--target", "--map"]),
        ("dense-eval", &["--frame", "--pattern", "--at", "--formula", "--kmax", "--len", "--pretrans"]),
        ("search", &["--kind", "--max-worlds", "--formula", "--mode", "--modalities", "--seed", "--samples", "--out"]),
        ("demo", &["--list", "--out-dir"]),
    ];
    let top = stdout(&run(&["--help"]));
    for (cmd, wanted) in flags {
        assert!(top.contains(cmd), "{cmd} missing from --help");
        let help = stdout(&run(&[cmd, "--help"]));
        for flag in wanted.iter().chain(&["--json", "--threads"]) {
            assert!(help.contains(flag), "{cmd} --help lacks {flag}");
        }
    }
}
