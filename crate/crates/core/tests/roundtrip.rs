//! Formula -> DADG -> surface block -> lifting formula, checked for agreement.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surflift::analysis::analyze;
use surflift::blocks::assemble::{abstractize, assemble, BlockSet};
use surflift::blocks::fixtures::builtin_blocks;
use surflift::dadg::{double_arcs, graph_lifting_formula};
use surflift::lifting::decide_liftable;
use surflift::sat::{all_sign_patterns_formula, solve, Cnf};
use surflift::surface::{verify_generic_surface, ValueKind};
use surflift::synth::synthesize;

fn random_corpus_formula(rng: &mut ChaCha8Rng) -> Cnf {
    // Few variables and many pairs: roughly half of these are unsatisfiable.
    if rng.gen_bool(0.5) {
        let (n, k) = (rng.gen_range(3..=4), rng.gen_range(6..=7));
        common::random_symmetric(rng, n, k)
    } else {
        let (n, k) = (rng.gen_range(3..=6), rng.gen_range(1..=4));
        common::random_symmetric(rng, n, k)
    }
}

fn round_trip(f: &Cnf, set: &BlockSet) -> (bool, bool, bool) {
    let (_, d) = synthesize(f).unwrap();
    let graph = graph_lifting_formula(&d, &double_arcs(&d));
    let sb = assemble(&d, set).unwrap();
    let model = verify_generic_surface(abstractize(&sb)).unwrap();
    assert_eq!(model.count(ValueKind::Triple), d.t);
    assert_eq!(model.count(ValueKind::Branch) + model.bv.len() + model.dv.len(), 0);
    let a = analyze(&model).unwrap();
    assert_eq!(a.num_arcs(), double_arcs(&d).num_arcs());
    assert!(a.nontrivial_arcs.is_empty());
    (solve(f).is_some(), solve(&graph).is_some(), decide_liftable(&a).liftable)
}

#[test]
fn synthesized_surfaces_agree_with_their_formulas() {
    let set = builtin_blocks().unwrap();
    assert_eq!(round_trip(&common::worked_example(), &set), (true, true, true));
    assert_eq!(round_trip(&all_sign_patterns_formula(), &set), (false, false, false));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0; 2];
    for _ in 0..12 {
        let f = random_corpus_formula(&mut rng);
        let (a, b, c) = round_trip(&f, &set);
        assert!(a == b && b == c, "{f:?}: {a} {b} {c}");
        seen[usize::from(a)] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "sat/unsat split {seen:?}");
}
