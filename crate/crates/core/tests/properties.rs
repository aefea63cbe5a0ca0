//! Property tests against exhaustive oracles.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use surflift::complex::{parse_complex, SurfacePair};
use surflift::dadg::{grade, validate_dadg, Grading};
use surflift::sat::{brute_force_sat, is_proper, is_symmetric, reduce_formula, solve, symmetrize, Cnf};
use surflift::synth::{padded_formula, synthesize};

fn formula(max_vars: usize, max_clauses: usize, symmetric: bool) -> impl Strategy<Value = Cnf> {
    (3..=max_vars, 1..=max_clauses, any::<u64>()).prop_map(move |(n, k, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if symmetric {
            common::random_symmetric(&mut rng, n, k)
        } else {
            common::random_proper(&mut rng, n, k)
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dimacs_round_trips(f in formula(8, 12, false)) {
        prop_assert_eq!(Cnf::from_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn solver_matches_truth_table(f in formula(7, 40, false)) {
        let model = solve(&f);
        prop_assert_eq!(model.is_some(), brute_force_sat(&f));
        if let Some(x) = model {
            prop_assert!(f.eval(&x));
        }
    }

    #[test]
    fn reduction_keeps_satisfiability(f in formula(6, 30, false)) {
        prop_assert_eq!(brute_force_sat(&reduce_formula(&f)), brute_force_sat(&f));
    }

    #[test]
    fn symmetrize_is_equisatisfiable(f in formula(4, 10, false)) {
        let g = symmetrize(&f).unwrap();
        prop_assert!(is_proper(&g) && is_symmetric(&g));
        prop_assert_eq!(g.clauses.len(), 4 * f.clauses.len());
        prop_assert_eq!(brute_force_sat(&g), brute_force_sat(&f));
    }

    #[test]
    fn padding_keeps_satisfiability(f in formula(6, 8, true)) {
        let (plan, d) = synthesize(&f).unwrap();
        prop_assert!(plan.k_prime <= 4 * plan.k);
        prop_assert_eq!(d.t, plan.k_prime);
        prop_assert_eq!(brute_force_sat(&padded_formula(&plan)), brute_force_sat(&f));
        prop_assert_eq!(grade(&d).height(&d), Some(1));
    }

    #[test]
    fn grading_matches_level_search(t in 1usize..=5, extra in 0usize..=2, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = loop {
            let d = common::random_dadg(&mut rng, t, extra, extra);
            if validate_dadg(&d).ok() {
                break d;
            }
        };
        prop_assert_eq!(matches!(grade(&d), Grading::Graded(_)), common::brute_gradable(&d));
    }

    #[test]
    fn complex_json_round_trips(n in 4usize..=9, picks in prop::collection::vec((any::<u32>(), any::<bool>()), 1..6)) {
        let tets: Vec<[u32; 4]> = picks
            .iter()
            .map(|(s, _)| {
                let mut t = [s % n as u32, (s / 7 + 1) % n as u32, (s / 49 + 2) % n as u32, (s / 343 + 3) % n as u32];
                t.sort_unstable();
                t
            })
            .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
            .collect();
        let s: Vec<[u32; 3]> = tets.iter().zip(&picks).filter(|(_, p)| p.1).map(|(t, _)| [t[0], t[1], t[2]]).collect();
        let p = SurfacePair::from_top_simplices(n, tets, s);
        prop_assert_eq!(parse_complex(&p.to_json()).unwrap(), p);
    }
}
