//! Command-line front end. `run` maps every outcome to an exit code:
//! 0 success or affirmative decision, 2 negative decision, 1 invalid input or
//! internal error, 64 usage error.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::{Path, PathBuf};
use surflift::analysis::analyze;
use surflift::blocks::assemble::{abstractize, assemble, BlockSet};
use surflift::blocks::fixtures::{builtin_blocks, load_atomic_blocks};
use surflift::complex::{parse_complex, SurfacePair};
use surflift::dadg::{double_arcs, grade, graph_lifting_formula, is_height1, validate_dadg, Dadg, Grading};
use surflift::lifting::{certificate, decide_liftable, lifting_formula, verify_certificate, LiftCertificate, LiftReason};
use surflift::pipeline::{roundtrip, roundtrip_plain};
use surflift::sat::{is_proper, is_symmetric, reduce_formula, solve, symmetrize, Cnf};
use surflift::surface::{verify_generic_surface, SurfaceModel};
use surflift::synth::synthesize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_NO: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(name = "surflift", version, about = "Generic surfaces, lifting formulas and the SAT-to-surface construction")]
struct Cli {
    /// Print nothing but errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a complex is a generic surface in a 3-manifold.
    Validate { complex: PathBuf },
    /// Report double arcs, the index function and strip parameters.
    Analyze { complex: PathBuf },
    /// Write the lifting formula as DIMACS.
    Formula {
        complex: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide liftability (exit 0 liftable, 2 not liftable).
    Lift {
        complex: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check a lifting certificate against a surface.
    VerifyCert { complex: PathBuf, cert: PathBuf },
    /// Formula utilities.
    #[command(subcommand)]
    Sat(SatCommand),
    /// DADG utilities.
    #[command(subcommand)]
    Dadg(DadgCommand),
    /// Turn a proper symmetric formula into a height-1 DADG.
    Synth {
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the surface block of a height-1 DADG.
    Build {
        dadg: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the complex with rational vertex coordinates.
        #[arg(long)]
        concrete: Option<PathBuf>,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
    /// Run formula -> DADG -> surface -> lifting and compare the verdicts.
    Roundtrip {
        formula: PathBuf,
        /// Symmetrize a proper formula that is not symmetric.
        #[arg(long)]
        from_plain: bool,
        #[command(flatten)]
        fixtures: FixtureArgs,
    },
}

#[derive(Args)]
struct FixtureArgs {
    /// Load atomic blocks from this directory instead of the built-in set.
    #[arg(long)]
    fixtures: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SatCommand {
    /// Solve (exit 0 satisfiable, 2 unsatisfiable).
    Solve { formula: PathBuf },
    /// Sort clauses and drop duplicates.
    Reduce {
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Equisatisfiable proper symmetric formula with 4K clauses.
    Symmetrize {
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check properties (exit 0 when all requested ones hold, 2 otherwise).
    Check {
        formula: PathBuf,
        #[arg(long)]
        proper: bool,
        #[arg(long)]
        symmetric: bool,
    },
}

#[derive(Subcommand)]
enum DadgCommand {
    /// Validity, arcs, gradability, height 1 and the graph lifting formula.
    Check { dadg: PathBuf },
}

/// A failure carrying its exit code.
struct Fail(i32, String);

type Outcome = Result<i32, Fail>;

fn invalid(msg: impl std::fmt::Display) -> Fail {
    Fail(EXIT_FAIL, msg.to_string())
}

struct Out {
    quiet: bool,
    json: bool,
}

impl Out {
    fn text(&self, s: impl AsRef<str>) {
        if !self.quiet && !self.json {
            println!("{}", s.as_ref());
        }
    }

    fn report(&self, v: serde_json::Value) {
        if !self.quiet && self.json {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
    }

    /// Writes to `path`, or to stdout unless quiet.
    fn emit(&self, path: Option<&Path>, body: &str) -> Result<(), Fail> {
        match path {
            Some(p) => write(p, body),
            None => {
                if !self.quiet {
                    print!("{body}");
                }
                Ok(())
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, body: &str) -> Result<(), Fail> {
    std::fs::write(path, body).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_pair(path: &Path) -> Result<SurfacePair, Fail> {
    parse_complex(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path) -> Result<SurfaceModel, Fail> {
    verify_generic_surface(load_pair(path)?).map_err(invalid)
}

fn load_cnf(path: &Path) -> Result<Cnf, Fail> {
    Cnf::from_dimacs(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_dadg(path: &Path) -> Result<Dadg, Fail> {
    Dadg::from_json(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_blocks(f: &FixtureArgs) -> Result<BlockSet, Fail> {
    match &f.fixtures {
        Some(dir) => load_atomic_blocks(dir).map_err(invalid),
        None => builtin_blocks().map_err(invalid),
    }
}

fn verdict(yes: bool) -> i32 {
    if yes {
        EXIT_OK
    } else {
        EXIT_NO
    }
}

fn validate(out: &Out, path: &Path) -> Outcome {
    let pair = load_pair(path)?;
    match verify_generic_surface(pair) {
        Ok(m) => {
            let census = m.census();
            out.text(format!("{:<18} {:>8}", "value kind", "count"));
            for (k, n) in &census {
                out.text(format!("{:<18} {:>8}", format!("{k:?}"), n));
            }
            let counts: serde_json::Map<String, serde_json::Value> =
                census.iter().map(|(k, n)| (format!("{k:?}"), json!(n))).collect();
            out.report(json!({ "ok": true, "counts": counts }));
            Ok(EXIT_OK)
        }
        Err(e) => {
            out.report(json!({ "ok": false, "phase": e.phase, "failures": e.report.failures }));
            if !out.json {
                eprintln!("{e}");
            }
            Ok(EXIT_FAIL)
        }
    }
}

fn analyze_cmd(out: &Out, path: &Path) -> Outcome {
    let m = load_model(path)?;
    let a = analyze(&m).map_err(invalid)?;
    // The report is JSON in either mode.
    if !out.quiet {
        println!("{}", serde_json::to_string_pretty(&a.report()).expect("serializable"));
    }
    Ok(EXIT_OK)
}

fn formula(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let m = load_model(path)?;
    let a = analyze(&m).map_err(invalid)?;
    match lifting_formula(&a) {
        Ok(f) => {
            out.emit(output, &f.to_dimacs())?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            if !out.quiet {
                eprintln!("no lifting formula: {e}; the surface is not liftable");
            }
            Ok(EXIT_NO)
        }
    }
}

fn lift(out: &Out, path: &Path, cert: Option<&Path>) -> Outcome {
    let m = load_model(path)?;
    let a = analyze(&m).map_err(invalid)?;
    let d = decide_liftable(&a);
    let reason = match &d.reason {
        LiftReason::NontrivialArc(j) => format!("arc {j} is nontrivial"),
        LiftReason::Unsat => "lifting formula unsatisfiable".to_string(),
        LiftReason::Sat(_) => "lifting formula satisfiable".to_string(),
    };
    out.text(format!("{} ({reason})", if d.liftable { "liftable" } else { "not liftable" }));
    out.report(json!({ "liftable": d.liftable, "reason": d.reason }));
    if let (Some(p), Some(c)) = (cert, certificate(&a, &d)) {
        write(p, &c.to_json())?;
    }
    Ok(verdict(d.liftable))
}

fn verify_cert(out: &Out, path: &Path, cert: &Path) -> Outcome {
    let m = load_model(path)?;
    let a = analyze(&m).map_err(invalid)?;
    let c = LiftCertificate::from_json(&read(cert)?).map_err(|e| invalid(format!("{}: {e}", cert.display())))?;
    let r = verify_certificate(&a, &c);
    match &r {
        Ok(()) => out.text("certificate valid"),
        Err(e) => out.text(format!("certificate rejected: {e}")),
    }
    out.report(json!({ "valid": r.is_ok(), "error": r.as_ref().err() }));
    Ok(verdict(r.is_ok()))
}

fn sat(out: &Out, cmd: &SatCommand) -> Outcome {
    match cmd {
        SatCommand::Solve { formula } => {
            let f = load_cnf(formula)?;
            let x = solve(&f);
            match &x {
                Some(a) => {
                    out.text("s SATISFIABLE");
                    let lits: Vec<String> =
                        a.iter().enumerate().map(|(i, &v)| if v { format!("{}", i + 1) } else { format!("-{}", i + 1) }).collect();
                    out.text(format!("v {} 0", lits.join(" ")));
                }
                None => out.text("s UNSATISFIABLE"),
            }
            out.report(json!({ "sat": x.is_some(), "model": x }));
            Ok(verdict(x.is_some()))
        }
        SatCommand::Reduce { formula, output } => {
            let f = load_cnf(formula)?;
            out.emit(output.as_deref(), &reduce_formula(&f).to_dimacs())?;
            Ok(EXIT_OK)
        }
        SatCommand::Symmetrize { formula, output } => {
            let f = load_cnf(formula)?;
            let g = symmetrize(&f).map_err(invalid)?;
            out.emit(output.as_deref(), &g.to_dimacs())?;
            Ok(EXIT_OK)
        }
        SatCommand::Check { formula, proper, symmetric } => {
            let f = load_cnf(formula)?;
            let (p, s) = (is_proper(&f), is_symmetric(&f));
            out.text(format!("proper: {p}\nsymmetric: {s}"));
            out.report(json!({ "proper": p, "symmetric": s }));
            Ok(verdict((!proper || p) && (!symmetric || s)))
        }
    }
}

fn dadg_check(out: &Out, path: &Path) -> Outcome {
    let d = load_dadg(path)?;
    let report = validate_dadg(&d);
    if !report.ok() {
        out.text(format!("valid: false\n{report}"));
        out.report(json!({ "valid": false, "failures": report.failures }));
        return Ok(EXIT_FAIL);
    }
    let arcs = double_arcs(&d);
    let g = grade(&d);
    let height = g.height(&d);
    let h1 = is_height1(&d);
    let f = graph_lifting_formula(&d, &arcs);
    out.text("valid: true");
    out.text(format!("arcs: {}", arcs.num_arcs()));
    match &g {
        Grading::Graded(_) => out.text(format!("gradable: true (height {})", height.unwrap_or(0))),
        Grading::NotGradable { a, b, .. } => out.text(format!("gradable: false (edges {a} and {b} conflict)")),
    }
    out.text(format!("height 1: {h1}"));
    out.text(f.to_dimacs().trim_end());
    out.report(json!({
        "valid": true,
        "arcs": arcs.arcs,
        "index_fn": arcs.index_fn,
        "gradable": matches!(g, Grading::Graded(_)),
        "height": height,
        "height1": h1,
        "formula": f.to_dimacs(),
    }));
    Ok(EXIT_OK)
}

fn synth(out: &Out, path: &Path, output: Option<&Path>) -> Outcome {
    let f = load_cnf(path)?;
    let (plan, d) = synthesize(&f).map_err(invalid)?;
    out.emit(output, &(d.to_json() + "\n"))?;
    if output.is_some() {
        out.text(format!("{} triple values, {} edges", plan.k_prime, d.edge_count().unwrap_or(0)));
    }
    Ok(EXIT_OK)
}

fn build(out: &Out, path: &Path, output: Option<&Path>, concrete: Option<&Path>, fx: &FixtureArgs) -> Outcome {
    let d = load_dadg(path)?;
    let blocks = load_blocks(fx)?;
    let sb = assemble(&d, &blocks).map_err(invalid)?;
    if let Some(p) = concrete {
        write(p, &(sb.complex.to_json() + "\n"))?;
    }
    let pair = abstractize(&sb);
    out.emit(output, &(pair.to_json() + "\n"))?;
    if output.is_some() {
        out.text(format!(
            "{} blocks, {} vertices, {} tetrahedra, box {:?}",
            sb.placements.len(),
            pair.num_vertices,
            pair.tetrahedra.len(),
            sb.bbox
        ));
        out.report(json!({
            "blocks": sb.placements.len(),
            "vertices": pair.num_vertices,
            "tetrahedra": pair.tetrahedra.len(),
            "bbox": sb.bbox,
        }));
    }
    Ok(EXIT_OK)
}

fn roundtrip_cmd(out: &Out, path: &Path, from_plain: bool, fx: &FixtureArgs) -> Outcome {
    let f = load_cnf(path)?;
    let blocks = load_blocks(fx)?;
    let r = if from_plain { roundtrip_plain(&f, &blocks) } else { roundtrip(&f, &blocks) }.map_err(invalid)?;
    out.text(format!("formula: {} variables, {} clause pairs", r.num_vars, r.clause_pairs));
    out.text(format!("dadg: {} triple values, {} edges, {} arcs", r.triple_values, r.edges, r.arcs));
    out.text(format!("surface: {} blocks, {} tetrahedra", r.blocks, r.tetrahedra));
    out.text(format!("sat(input) = {}, sat(graph formula) = {}, liftable = {}", r.sat_input, r.sat_graph, r.liftable));
    out.text(format!("agree: {}", r.agree));
    out.report(serde_json::to_value(&r).expect("serializable"));
    Ok(verdict(r.agree))
}

fn dispatch(cli: Cli) -> Outcome {
    let out = Out { quiet: cli.quiet, json: cli.json };
    match &cli.command {
        Command::Validate { complex } => validate(&out, complex),
        Command::Analyze { complex } => analyze_cmd(&out, complex),
        Command::Formula { complex, output } => formula(&out, complex, output.as_deref()),
        Command::Lift { complex, cert } => lift(&out, complex, cert.as_deref()),
        Command::VerifyCert { complex, cert } => verify_cert(&out, complex, cert),
        Command::Sat(cmd) => sat(&out, cmd),
        Command::Dadg(DadgCommand::Check { dadg }) => dadg_check(&out, dadg),
        Command::Synth { formula, output } => synth(&out, formula, output.as_deref()),
        Command::Build { dadg, output, concrete, fixtures } => {
            build(&out, dadg, output.as_deref(), concrete.as_deref(), fixtures)
        }
        Command::Roundtrip { formula, from_plain, fixtures } => roundtrip_cmd(&out, formula, *from_plain, fixtures),
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}
