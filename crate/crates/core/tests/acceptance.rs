//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::time::{Duration, Instant};
use surflift::analysis::{analyze, ArcAnalysis};
use surflift::blocks::assemble::{abstractize, assemble, BlockSet};
use surflift::blocks::fixtures::{builtin_blocks, validate_block_set};
use surflift::blocks::{AtomicBlock, BlockKind};
use surflift::complex::{parse_complex, tet_faces, SurfacePair};
use surflift::dadg::{double_arcs, grade, graph_lifting_formula, is_height1, validate_dadg, Grading};
use surflift::geom::Q;
use surflift::lifting::{brute_force_liftable, certificate, decide_liftable, verify_certificate, HeightMark};
use surflift::pipeline::roundtrip;
use surflift::sat::{all_sign_patterns_formula, brute_force_sat, is_proper, is_symmetric, solve, symmetrize, Cnf};
use surflift::surface::verify_generic_surface;
use surflift::synth::synthesize;

/// Outcome of one criterion: pass flag and a one-line summary.
struct Verdict(bool, String);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn verdict(r: Result<String, String>) -> Verdict {
    match r {
        Ok(s) => Verdict(true, s),
        Err(s) => Verdict(false, s),
    }
}

/// Everything the corpus-based criteria need from one formula.
struct CorpusRun {
    k: usize,
    t: usize,
    blocks: usize,
    tets: usize,
    bbox: [[i64; 3]; 2],
    coord_box: [[Q; 3]; 2],
    sat_input: bool,
    sat_graph: bool,
    liftable: bool,
    height: Option<i64>,
    height1: bool,
    /// Seconds spent in validate + analyze + lift.
    decide_time: Duration,
    analysis: ArcAnalysis,
}

fn run_formula(f: &Cnf, set: &BlockSet) -> Result<CorpusRun, String> {
    let (_, d) = synthesize(f).map_err(|e| e.to_string())?;
    let graph = graph_lifting_formula(&d, &double_arcs(&d));
    let sb = assemble(&d, set).map_err(|e| e.to_string())?;
    let mut coord_box = [sb.complex.coords[0], sb.complex.coords[0]];
    for p in &sb.complex.coords {
        for a in 0..3 {
            coord_box[0][a] = coord_box[0][a].min(p[a]);
            coord_box[1][a] = coord_box[1][a].max(p[a]);
        }
    }
    let (blocks, tets, bbox) = (sb.placements.len(), sb.complex.pair.tetrahedra.len(), sb.bbox);
    let pair = abstractize(&sb);
    drop(sb);
    let start = Instant::now();
    let model = verify_generic_surface(pair).map_err(|e| e.to_string())?;
    let analysis = analyze(&model).map_err(|e| e.to_string())?;
    let liftable = decide_liftable(&analysis).liftable;
    let decide_time = start.elapsed();
    Ok(CorpusRun {
        k: f.clauses.len() / 2,
        t: d.t,
        blocks,
        tets,
        bbox,
        coord_box,
        sat_input: solve(f).is_some(),
        sat_graph: solve(&graph).is_some(),
        liftable,
        height: grade(&d).height(&d),
        height1: is_height1(&d),
        decide_time,
        analysis,
    })
}

/// Anchors first, then random formulas, then the widest instance last.
fn corpus() -> Vec<Cnf> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = vec![common::worked_example(), all_sign_patterns_formula()];
    for i in 0..52 {
        let f = if i % 3 == 0 {
            let (n, k) = (rng.gen_range(3..=4), rng.gen_range(6..=8));
            common::random_symmetric(&mut rng, n, k)
        } else {
            let (n, k) = (rng.gen_range(3..=6), rng.gen_range(1..=8));
            common::random_symmetric(&mut rng, n, k)
        };
        out.push(f);
    }
    out.push(common::random_symmetric(&mut rng, 6, 10));
    out.push(common::widest_symmetric(&mut rng, 6, 10));
    out
}

fn criterion1(runs: &[CorpusRun], elapsed: Duration) -> Result<String, String> {
    for (i, r) in runs.iter().enumerate() {
        check(
            r.sat_input == r.sat_graph && r.sat_graph == r.liftable,
            format!("formula {i}: sat {} / graph {} / liftable {}", r.sat_input, r.sat_graph, r.liftable),
        )?;
    }
    check(runs[0].liftable && !runs[1].liftable, "anchor verdicts wrong")?;
    check(elapsed < Duration::from_secs(600), format!("corpus took {elapsed:?}"))?;
    let sat = runs.iter().filter(|r| r.sat_input).count();
    Ok(format!("{} formulas agree ({sat} sat, {} unsat) in {:.0?}", runs.len(), runs.len() - sat, elapsed))
}

fn criterion2(runs: &[CorpusRun]) -> Result<String, String> {
    check(runs[0].t == 4, format!("worked example has T' = {}", runs[0].t))?;
    for (i, r) in runs.iter().enumerate() {
        let t = r.t as i64;
        check(r.t <= 4 * r.k, format!("formula {i}: T' = {} > 4K = {}", r.t, 4 * r.k))?;
        check(r.blocks as i64 == t + 18 * t * t, format!("formula {i}: {} blocks for T = {t}", r.blocks))?;
        // 2 * box, so the half-integer bounds stay integral.
        let want = [[0, 0, -3 * t], [4, 6 * t, 2 + 3 * t]];
        let doubled = r.coord_box.map(|p| p.map(|c| c * 2));
        for s in 0..2 {
            for a in 0..3 {
                check(doubled[s][a] == Q::from(want[s][a]), format!("formula {i}: vertex box {:?}", r.coord_box))?;
                check(2 * r.bbox[s][a] == want[s][a], format!("formula {i}: reported box {:?}", r.bbox))?;
            }
        }
    }
    let widest = runs.iter().max_by_key(|r| r.t).unwrap();
    Ok(format!("T' <= 4K on all, worked example T' = 4, blocks and box exact up to T' = {}", widest.t))
}

fn load(path: &Path) -> SurfacePair {
    parse_complex(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn repo_fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn brute_agrees(a: &ArcAnalysis) -> Result<bool, String> {
    let solver = decide_liftable(a).liftable;
    let brute = match brute_force_liftable(a) {
        Ok(b) => b,
        Err(surflift::lifting::LiftError::NontrivialArc) => false,
        Err(e) => return Err(e.to_string()),
    };
    Ok(solver == brute)
}

fn criterion3(runs: &[CorpusRun]) -> Result<String, String> {
    let start = Instant::now();
    let mut surfaces = 0;
    let sphere = verify_generic_surface(load(&repo_fixture("embedded_sphere.json"))).map_err(|e| e.to_string())?;
    let sphere = analyze(&sphere).map_err(|e| e.to_string())?;
    for (name, a) in std::iter::once(("embedded sphere".to_string(), &sphere))
        .chain(runs.iter().enumerate().map(|(i, r)| (format!("formula {i}"), &r.analysis)))
    {
        if a.num_arcs() > 16 {
            continue;
        }
        let t = Instant::now();
        check(brute_agrees(a)?, format!("{name}: brute force disagrees with the solver"))?;
        check(t.elapsed() < Duration::from_secs(60), format!("{name}: took {:?}", t.elapsed()))?;
        surfaces += 1;
    }
    Ok(format!("{surfaces} surfaces agree in {:.1?}", start.elapsed()))
}

fn criterion4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sat = 0;
    for i in 0..200 {
        let (n, k) = (rng.gen_range(3..=4), rng.gen_range(1..=6));
        let f = common::random_proper(&mut rng, n, k);
        let g = symmetrize(&f).map_err(|e| e.to_string())?;
        let (a, b) = (brute_force_sat(&f), brute_force_sat(&g));
        check(a == b, format!("formula {i}: sat {a}, symmetrized sat {b}"))?;
        check(is_proper(&g) && is_symmetric(&g), format!("formula {i}: output not proper and symmetric"))?;
        check(g.clauses.len() == 4 * k, format!("formula {i}: {} clauses from K = {k}", g.clauses.len()))?;
        sat += usize::from(a);
    }
    // Six clauses of width three never exclude every assignment, so the
    // unsatisfiable side needs the eight-clause formula.
    let g = symmetrize(&all_sign_patterns_formula()).map_err(|e| e.to_string())?;
    check(!brute_force_sat(&g) && g.clauses.len() == 32, "symmetrized 8-clause formula is satisfiable")?;
    Ok(format!("200 formulas equisatisfiable ({sat} sat) plus the 8-clause unsat one, proper, symmetric, 4K clauses"))
}

fn criterion5(runs: &[CorpusRun]) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut tested, mut gradable) = (0, 0);
    while tested < 100 {
        let t = rng.gen_range(1..=6);
        let bd = 2 * rng.gen_range(0..=(20 - 3 * t).min(4));
        let b = rng.gen_range(0..=bd);
        let d = common::random_dadg(&mut rng, t, b, bd - b);
        if !validate_dadg(&d).ok() {
            continue;
        }
        let fast = matches!(grade(&d), Grading::Graded(_));
        check(fast == common::brute_gradable(&d), format!("DADG {}: grading says {fast}", d.to_json()))?;
        tested += 1;
        gradable += usize::from(fast);
    }
    let t1 = surflift::dadg::example_t1();
    check(!matches!(grade(&t1), Grading::Graded(_)) && !common::brute_gradable(&t1), "obstructing loop was graded")?;
    for (i, r) in runs.iter().enumerate() {
        check(r.height1 && r.height == Some(1), format!("synth output {i}: height {:?}", r.height))?;
    }
    Ok(format!("100 random DADGs ({gradable} gradable) agree, loop rejected, {} synth outputs height 1", runs.len()))
}

fn mutations(b: &AtomicBlock) -> Vec<(&'static str, AtomicBlock)> {
    let p = &b.complex.pair;
    let rebuild = |tets: Vec<[u32; 4]>, s: Vec<[u32; 3]>| {
        let mut m = b.clone();
        m.complex.pair = SurfacePair::from_top_simplices(p.num_vertices, tets, s);
        m
    };
    let mut out = Vec::new();
    let mut tets = p.tetrahedra.clone();
    tets.remove(tets.len() / 2);
    out.push(("tetrahedron removed", rebuild(tets, p.s_triangles.clone())));
    if !p.s_triangles.is_empty() {
        let mut s = p.s_triangles.clone();
        s.remove(s.len() / 2);
        out.push(("surface triangle removed", rebuild(p.tetrahedra.clone(), s)));
    }
    let extra = p
        .tetrahedra
        .iter()
        .flat_map(|t| tet_faces(*t))
        .find(|f| !p.s_triangles.contains(f) && p.s_edges.binary_search(&[f[0], f[1]]).is_err())
        .unwrap();
    let mut s = p.s_triangles.clone();
    s.push(extra);
    out.push(("surface triangle added", rebuild(p.tetrahedra.clone(), s)));
    let mut m = b.clone();
    m.manifest.inventory.triple += 1;
    out.push(("inventory changed", m));
    out
}

fn criterion6(set: &BlockSet) -> Result<String, String> {
    for name in ["boundary_4simplex.json", "single_tet.json", "embedded_sphere.json"] {
        verify_generic_surface(load(&repo_fixture(name))).map_err(|e| format!("{name}: {e}"))?;
    }
    for name in ["disconnected_link.json", "missing_face.json"] {
        check(verify_generic_surface(load(&repo_fixture(name))).is_err(), format!("{name} accepted"))?;
    }
    validate_block_set(set.blocks()).map_err(|e| e.to_string())?;
    let mut rejected = 0;
    for kind in BlockKind::ALL {
        for (what, m) in mutations(set.get(kind)) {
            check(validate_block_set(&[m]).is_err(), format!("{kind:?} with {what} accepted"))?;
            rejected += 1;
        }
    }
    Ok(format!("5 reference complexes and 8 fixtures classified, {rejected} mutated fixtures rejected"))
}

fn criterion7(runs: &[CorpusRun]) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut surfaces, mut flips) = (0, 0);
    for (i, r) in runs.iter().enumerate().filter(|(_, r)| r.liftable) {
        let a = &r.analysis;
        let cert = certificate(a, &decide_liftable(a)).ok_or(format!("formula {i}: no certificate"))?;
        let cert = surflift::lifting::LiftCertificate::from_json(&cert.to_json()).map_err(|e| e.to_string())?;
        verify_certificate(a, &cert).map_err(|e| format!("formula {i}: {e}"))?;
        let positions: Vec<(usize, usize)> =
            (0..cert.edges.len()).flat_map(|e| (0..cert.edges[e].labels.len()).map(move |l| (e, l))).collect();
        let sample: Vec<&(usize, usize)> = if positions.len() <= 400 {
            positions.iter().collect()
        } else {
            (0..100).map(|_| &positions[rng.gen_range(0..positions.len())]).collect()
        };
        for &&(e, l) in &sample {
            let mut bad = cert.clone();
            let m = &mut bad.edges[e].labels[l].hl;
            *m = if *m == HeightMark::H { HeightMark::L } else { HeightMark::H };
            check(verify_certificate(a, &bad).is_err(), format!("formula {i}: flip at edge {e} accepted"))?;
            flips += 1;
        }
        surfaces += 1;
    }
    Ok(format!("{surfaces} certificates verified, {flips} single flips rejected"))
}

fn criterion8(runs: &[CorpusRun]) -> Result<String, String> {
    let r = runs.iter().max_by_key(|r| r.t).unwrap();
    check(r.t >= 40, format!("largest instance has T' = {}", r.t))?;
    check(r.decide_time < Duration::from_secs(1800), format!("took {:?}", r.decide_time))?;
    Ok(format!(
        "T' = {}, {} blocks, {} tetrahedra: validate + analyze + lift in {:.1?}",
        r.t, r.blocks, r.tets, r.decide_time
    ))
}

fn main() {
    let set = builtin_blocks().expect("built-in blocks");
    let start = Instant::now();
    let mut runs = Vec::new();
    let mut failure = None;
    for (i, f) in corpus().iter().enumerate() {
        match run_formula(f, &set) {
            Ok(r) => runs.push(r),
            Err(e) => {
                failure = Some(format!("formula {i}: {e}"));
                break;
            }
        }
    }
    let elapsed = start.elapsed();
    let corpus_ok = |c: fn(&[CorpusRun]) -> Result<String, String>| match &failure {
        Some(e) => Err(e.clone()),
        None => c(&runs),
    };
    let anchors = [common::worked_example(), all_sign_patterns_formula()]
        .iter()
        .all(|f| roundtrip(f, &set).map(|r| r.agree).unwrap_or(false));
    let verdicts = [
        verdict(match &failure {
            Some(e) => Err(e.clone()),
            None if !anchors => Err("pipeline report disagrees on an anchor".into()),
            None => criterion1(&runs, elapsed),
        }),
        verdict(corpus_ok(criterion2)),
        verdict(corpus_ok(criterion3)),
        verdict(criterion4()),
        verdict(corpus_ok(criterion5)),
        verdict(criterion6(&set)),
        verdict(corpus_ok(criterion7)),
        verdict(corpus_ok(criterion8)),
    ];
    let names = [
        "round-trip equisatisfiability",
        "construction counts",
        "brute-force liftability oracle",
        "symmetrizer",
        "gradability",
        "validator suite",
        "certificate round trip",
        "scale",
    ];
    let mut all = true;
    for (i, (Verdict(ok, msg), name)) in verdicts.iter().zip(names).enumerate() {
        println!("criterion {} {name}: {} ({msg})", i + 1, if *ok { "PASS" } else { "FAIL" });
        all &= ok;
    }
    if !all {
        std::process::exit(1);
    }
}
