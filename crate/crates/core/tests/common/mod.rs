//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use surflift::dadg::{Dadg, Eoe, Segment};
use surflift::sat::{mirror, Clause, Cnf, Lit};

/// A clause over three distinct variables below `n`.
pub fn random_clause<R: Rng>(rng: &mut R, n: usize) -> Clause {
    let vars: Vec<u32> = rand::seq::index::sample(rng, n, 3).into_iter().map(|v| v as u32).collect();
    [0, 1, 2].map(|i| Lit::new(vars[i], rng.gen()))
}

/// `k` clause pairs `(c, mirror(c))` over `n` variables.
pub fn random_symmetric<R: Rng>(rng: &mut R, n: usize, k: usize) -> Cnf {
    let mut clauses = Vec::with_capacity(2 * k);
    for _ in 0..k {
        let c = random_clause(rng, n);
        clauses.push(c);
        clauses.push(mirror(&c));
    }
    Cnf::new(n, clauses)
}

pub fn random_proper<R: Rng>(rng: &mut R, n: usize, k: usize) -> Cnf {
    Cnf::new(n, (0..k).map(|_| random_clause(rng, n)).collect())
}

/// The two-clause formula `(x0 | x1 | x2) & (!x0 | !x1 | !x2)`.
pub fn worked_example() -> Cnf {
    Cnf::new(3, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)], [Lit::neg(0), Lit::neg(1), Lit::neg(2)]])
}

/// `k` all-positive prime clauses with their mirrors. Every literal needs its
/// own padding value, so the synthesized DADG has `4k` triple values.
pub fn widest_symmetric<R: Rng>(rng: &mut R, n: usize, k: usize) -> Cnf {
    let mut clauses = Vec::with_capacity(2 * k);
    for _ in 0..k {
        let c = random_clause(rng, n).map(|l| Lit::pos(l.var));
        clauses.push(c);
        clauses.push(mirror(&c));
    }
    Cnf::new(n, clauses)
}

/// A DADG with `t` triple values, `b` branch and `d` double boundary values,
/// ends distributed uniformly at random. `b + d` must be even.
pub fn random_dadg<R: Rng>(rng: &mut R, t: usize, b: usize, d: usize) -> Dadg {
    let e = 3 * t + (b + d) / 2;
    let mut ends: Vec<Eoe> = (0..e as u32).flat_map(|r| [(r, 0), (r, 1)]).collect();
    ends.shuffle(rng);
    let bv = ends[..b].to_vec();
    let dv = ends[b..b + d].to_vec();
    let rest = &ends[b + d..];
    let tv = (0..t)
        .map(|k| [0, 1, 2].map(|l| -> Segment { [rest[6 * k + 2 * l], rest[6 * k + 2 * l + 1]] }))
        .collect();
    Dadg { c: 0, b, d, t, bv, dv, tv }
}

/// Gradability by exhaustive search over triple-value levels. An edge at a
/// non-preferred end of value `k` has grade `h_k`, at a preferred end
/// `h_k + 1`. Levels of a connected set of values span at most `t - 1`, so
/// `0..t` per value is exhaustive.
pub fn brute_gradable(d: &Dadg) -> bool {
    let t = d.t;
    let mut at: Vec<Vec<(usize, i64)>> = vec![Vec::new(); d.edge_count().unwrap()];
    for (k, segs) in d.tv.iter().enumerate() {
        for seg in segs {
            at[seg[0].0 as usize].push((k, 0));
            at[seg[1].0 as usize].push((k, 1));
        }
    }
    let total = (t as u64).pow(t as u32);
    (0..total).any(|code| {
        let h: Vec<i64> = (0..t).map(|k| ((code / (t as u64).pow(k as u32)) % t as u64) as i64).collect();
        at.iter().all(|ends| ends.windows(2).all(|w| h[w[0].0] + w[0].1 == h[w[1].0] + w[1].1))
    })
}
