use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forge")).args(args).output().expect("spawn forge")
}

fn suite(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../suite").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn help_and_usage_codes() {
    let o = forge(&["--help"]);
    assert_eq!(code(&o), 0);
    let help = String::from_utf8_lossy(&o.stdout);
    for sub in ["tm2tag", "tag2cts", "ctsnorm", "cts2r110", "run", "emulate", "nw", "xcheck", "pipeline"] {
        assert!(help.contains(sub), "{sub} missing from help");
    }
    assert_eq!(code(&forge(&["frobnicate"])), 1);
    assert_eq!(code(&forge(&["run"])), 1);
}

#[test]
fn missing_input_is_an_input_error() {
    assert_eq!(code(&forge(&["ctsnorm", "/no/such/file"])), 2);
}

#[test]
fn passes_chain_through_files() {
    let d = tempfile::tempdir().unwrap();
    let tag = d.path().join("h.tag");
    let cts = d.path().join("h.cts");
    let norm = d.path().join("n.cts");
    let st = d.path().join("h.st");
    let tm = suite("halt1.tm");
    let cfg = suite("blank.cfg");
    assert_eq!(code(&forge(&["tm2tag", s(&tm), "--config", s(&cfg), "-o", s(&tag)])), 0);
    assert!(std::fs::read_to_string(&tag).unwrap().starts_with("forge-tag 1\n"));
    assert_eq!(code(&forge(&["tag2cts", s(&tag), "-o", s(&cts)])), 0);
    assert!(std::fs::read_to_string(&cts).unwrap().starts_with("forge-cts 1\n"));
    assert_eq!(code(&forge(&["ctsnorm", s(&cts), "-o", s(&norm)])), 0);
    assert_eq!(code(&forge(&["cts2r110", s(&norm), "-o", s(&st)])), 0);
    assert!(std::fs::read_to_string(&st).unwrap().starts_with("forge-r110 1\n"));

    let via = d.path().join("p.st");
    let o = forge(&["pipeline", s(&tm), "--config", s(&cfg), "-o", s(&via)]);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read(&st).unwrap(), std::fs::read(&via).unwrap());
    assert!(String::from_utf8_lossy(&o.stderr).contains("v = 324998"));
}

#[test]
fn pipeline_is_deterministic_and_enters_at_cts() {
    let d = tempfile::tempdir().unwrap();
    let (a, b, m) = (d.path().join("a.st"), d.path().join("b.st"), d.path().join("m.txt"));
    let (tm, cfg) = (suite("halt1.tm"), suite("blank.cfg"));
    for out in [&a, &b] {
        let o = forge(&["pipeline", s(&tm), "--config", s(&cfg), "-o", s(out), "--manifest", s(&m)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let manifest = std::fs::read_to_string(&m).unwrap();
    assert!(manifest.starts_with("forge-manifest 1\n"));
    assert!(manifest.contains("deletion = 3\n"));

    let cts = d.path().join("y.cts");
    std::fs::write(&cts, "forge-cts 1\ntape: Y\nYN\nNYYN\n-\n-\n").unwrap();
    let o = forge(&["pipeline", s(&cts), "--from", "cts", "-o", s(&a), "--manifest", s(&m)]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&m).unwrap().contains("v = 3934\n"));
}

#[test]
fn empty_first_appendant_names_the_failing_pass() {
    let d = tempfile::tempdir().unwrap();
    let cts = d.path().join("bad.cts");
    std::fs::write(&cts, "forge-cts 1\ntape: Y\n-\nY\n").unwrap();
    let o = forge(&["pipeline", s(&cts), "--from", "cts", "-o", s(&d.path().join("x"))]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cts2r110"));
}

#[test]
fn run_detects_the_halt_and_renders() {
    let d = tempfile::tempdir().unwrap();
    let st = d.path().join("h.st");
    let o = forge(&["pipeline", s(&suite("halt1.tm")), "--config", s(&suite("blank.cfg")), "-o", s(&st)]);
    assert_eq!(code(&o), 0);
    let o = forge(&["run", s(&st), "--steps", "3000", "--detect-halt"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("halted: true"), "{out}");
    assert!(out.contains("spatial: step 1536 cell -126"), "{out}");

    let pbm = d.path().join("o.pbm");
    let o = forge(&["run", s(&st), "--steps", "20", "--render", s(&pbm), "--window", "-50:50"]);
    assert_eq!(code(&o), 0);
    let img = std::fs::read_to_string(&pbm).unwrap();
    let mut lines = img.lines();
    assert_eq!(lines.next(), Some("P1"));
    assert_eq!(lines.next(), Some("100 21"));
    assert_eq!(code(&forge(&["run", s(&st), "--render", s(&pbm), "--window", "5:5"])), 2);
}

#[test]
fn emulators_check() {
    for name in ["tm2x5", "tm3x4", "tm4x3", "tm7x2"] {
        let o = forge(&["emulate", name, "--rows", "100", "--check"]);
        assert_eq!(code(&o), 0, "{name}");
    }
    assert_eq!(code(&forge(&["emulate", "tm9x9"])), 2);
}

#[test]
fn nw_profile_is_csv() {
    let d = tempfile::tempdir().unwrap();
    let rtm = d.path().join("a.rtm");
    std::fs::write(&rtm, "forge-rtm 1\nstates: q\nq A -> B B q\nq B -> A q\ntape: ABA\n").unwrap();
    let o = forge(&["nw", s(&rtm), "--tm-steps", "5", "--profile"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "tm_step,tape_len,counter,tag_steps,rounds");
    assert_eq!(rows.len(), 6);
    assert!(rows[1..].iter().all(|r| r.split(',').count() == 5));

    let o = forge(&["nw", s(&rtm), "--tm-steps", "1"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("H h A A U u U u U u U u B B A A"));
}

#[test]
fn xcheck_reports_the_looping_case_as_a_verification_failure() {
    let d = tempfile::tempdir().unwrap();
    let xml = d.path().join("j.xml");
    let o = forge(&["xcheck", "--suite", s(&suite("")), "--junit", s(&xml)]);
    assert_eq!(code(&o), 3);
    let xml = std::fs::read_to_string(&xml).unwrap();
    assert!(xml.contains(r#"tests="13" failures="1""#), "{xml}");
}

#[test]
fn bundled_blocks_validate() {
    assert_eq!(code(&forge(&["blocks"])), 0);
    let d = tempfile::tempdir().unwrap();
    let lib = d.path().join("b.txt");
    assert_eq!(code(&forge(&["blocks", "--export", s(&lib)])), 0);
    let mut text = std::fs::read_to_string(&lib).unwrap();
    let i = text.rfind('1').unwrap();
    text.replace_range(i..=i, "0");
    std::fs::write(&lib, text).unwrap();
    assert_eq!(code(&forge(&["blocks", "--library", s(&lib)])), 2);
}
