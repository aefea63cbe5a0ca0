use std::path::PathBuf;
use surflift_cli::{run, EXIT_FAIL, EXIT_NO, EXIT_OK, EXIT_USAGE};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> i32 {
    run(std::iter::once("surflift").chain(args.iter().copied()))
}

#[test]
fn validate_exit_codes() {
    for ok in ["boundary_4simplex.json", "single_tet.json", "embedded_sphere.json"] {
        assert_eq!(cli(&["--quiet", "validate", &fixture(ok)]), EXIT_OK, "{ok}");
    }
    for bad in ["disconnected_link.json", "missing_face.json"] {
        assert_eq!(cli(&["--quiet", "validate", &fixture(bad)]), EXIT_FAIL, "{bad}");
    }
    assert_eq!(cli(&["validate", "/nonexistent.json"]), EXIT_FAIL);
}

#[test]
fn embedded_sphere_lifts() {
    assert_eq!(cli(&["--quiet", "lift", &fixture("embedded_sphere.json")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "analyze", &fixture("embedded_sphere.json")]), EXIT_OK);
}

#[test]
fn sat_subcommands() {
    assert_eq!(cli(&["--quiet", "sat", "solve", &fixture("sat2.cnf")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "sat", "solve", &fixture("unsat8.cnf")]), EXIT_NO);
    let symmetric = ["--quiet", "sat", "check", "--proper", "--symmetric"];
    assert_eq!(cli(&[&symmetric[..], &[fixture("unsat8.cnf").as_str()]].concat()), EXIT_OK);
    assert_eq!(cli(&[&symmetric[..], &[fixture("plain.cnf").as_str()]].concat()), EXIT_NO);
    assert_eq!(cli(&["--quiet", "sat", "check", "--proper", &fixture("plain.cnf")]), EXIT_OK);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sym.cnf");
    let out = out.to_str().unwrap();
    assert_eq!(cli(&["sat", "symmetrize", &fixture("plain.cnf"), "-o", out]), EXIT_OK);
    assert_eq!(cli(&[&symmetric[..], &[out]].concat()), EXIT_OK);
    let reduced = dir.path().join("red.cnf");
    assert_eq!(cli(&["sat", "reduce", out, "-o", reduced.to_str().unwrap()]), EXIT_OK);
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(cli(&["sat"]), EXIT_USAGE);
    assert_eq!(cli(&["lift"]), EXIT_USAGE);
    assert_eq!(cli(&["--help"]), EXIT_OK);
}

#[test]
fn synth_build_lift_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    assert_eq!(cli(&["--quiet", "synth", &fixture("sat2.cnf"), "-o", &p("g.json")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "dadg", "check", &p("g.json")]), EXIT_OK);
    let build = ["--quiet", "build", &p("g.json"), "-o", &p("s.json"), "--concrete", &p("c.json")];
    assert_eq!(cli(&build), EXIT_OK);
    assert!(std::fs::read_to_string(p("c.json")).unwrap().contains("\"coords\""));
    assert_eq!(cli(&["--quiet", "validate", &p("s.json")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "formula", &p("s.json"), "-o", &p("f.cnf")]), EXIT_OK);
    assert!(std::fs::read_to_string(p("f.cnf")).unwrap().starts_with("p cnf"));
    assert_eq!(cli(&["--quiet", "lift", &p("s.json"), "--cert", &p("cert.json")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "verify-cert", &p("s.json"), &p("cert.json")]), EXIT_OK);

    let cert = std::fs::read_to_string(p("cert.json")).unwrap();
    let flipped = match cert.find("\"H\"") {
        Some(i) => format!("{}\"L\"{}", &cert[..i], &cert[i + 3..]),
        None => cert.replacen("\"L\"", "\"H\"", 1),
    };
    std::fs::write(p("bad.json"), flipped).unwrap();
    assert_eq!(cli(&["--quiet", "verify-cert", &p("s.json"), &p("bad.json")]), EXIT_NO);
    std::fs::write(p("junk.json"), "{").unwrap();
    assert_eq!(cli(&["--quiet", "verify-cert", &p("s.json"), &p("junk.json")]), EXIT_FAIL);
}

#[test]
fn roundtrip_anchors() {
    assert_eq!(cli(&["--quiet", "roundtrip", &fixture("sat2.cnf")]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "--json", "roundtrip", &fixture("unsat8.cnf")]), EXIT_OK);
    // A non-symmetric formula needs --from-plain.
    assert_eq!(cli(&["--quiet", "roundtrip", &fixture("plain.cnf")]), EXIT_FAIL);
}

#[test]
fn build_rejects_ungradable_dadg() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("t1.json");
    std::fs::write(&g, surflift::dadg::example_t1().to_json()).unwrap();
    assert_eq!(cli(&["--quiet", "dadg", "check", g.to_str().unwrap()]), EXIT_OK);
    assert_eq!(cli(&["--quiet", "build", g.to_str().unwrap()]), EXIT_FAIL);
}
