//! From a proper symmetric 3-SAT formula to a height-1 DADG realizing it up to
//! tautology pairs.

use crate::dadg::{Dadg, Segment};
use crate::sat::{is_proper, is_symmetric, mirror, Clause, Cnf};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SynthError {
    #[error("formula is not proper")]
    NotProper,
    #[error("formula is not symmetric")]
    NotSymmetric,
    #[error("odd number of clauses")]
    OddClauses,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynthPlan {
    pub num_vars: usize,
    /// Number of mirror pairs in the input.
    pub k: usize,
    /// `j(k, l)` for all triple values (input pairs first, then padding).
    pub index_fn: Vec<[u32; 3]>,
    /// `s'(k, l)` for all triple values.
    pub s_prime: Vec<[u8; 3]>,
    /// Per arc: segments with `s' = 1` and with `s' = 0` (after padding once complete).
    pub c_plus: Vec<usize>,
    pub c_minus: Vec<usize>,
    /// `E_j = 2 max(C+, C-) - min(C+, C-)` of the unpadded counts.
    pub e: Vec<usize>,
    /// Total triple values after padding.
    pub k_prime: usize,
    /// Edge offsets: `P_0 = 0`, `P_{j+1} = P_j + 2 E_j`.
    pub p: Vec<usize>,
}

fn sorted(c: &Clause) -> Clause {
    let mut c = *c;
    c.sort();
    c
}

fn tally(plan: &mut SynthPlan) {
    plan.c_plus = vec![0; plan.num_vars];
    plan.c_minus = vec![0; plan.num_vars];
    for (j, s) in plan.index_fn.iter().zip(&plan.s_prime) {
        for l in 0..3 {
            if s[l] == 1 {
                plan.c_plus[j[l] as usize] += 1;
            } else {
                plan.c_minus[j[l] as usize] += 1;
            }
        }
    }
}

/// Greedily pairs each first remaining clause with its mirror and reads the
/// index function and parameters off the prime clauses.
pub fn extract_pairs(f: &Cnf) -> Result<SynthPlan, SynthError> {
    if !is_proper(f) {
        return Err(SynthError::NotProper);
    }
    if f.clauses.len() % 2 == 1 {
        return Err(SynthError::OddClauses);
    }
    if !is_symmetric(f) {
        return Err(SynthError::NotSymmetric);
    }
    let mut remaining: Vec<Option<Clause>> = f.clauses.iter().map(|c| Some(*c)).collect();
    let mut plan = SynthPlan { num_vars: f.num_vars, ..Default::default() };
    for i in 0..remaining.len() {
        let Some(prime) = remaining[i].take() else { continue };
        let m = sorted(&mirror(&prime));
        let pos = remaining[i + 1..]
            .iter()
            .position(|c| c.map(|c| sorted(&c)) == Some(m))
            .ok_or(SynthError::NotSymmetric)?;
        remaining[i + 1 + pos] = None;
        plan.index_fn.push(prime.map(|l| l.var));
        plan.s_prime.push(prime.map(|l| u8::from(l.sign)));
    }
    plan.k = plan.index_fn.len();
    tally(&mut plan);
    Ok(plan)
}

/// Appends tautology-pair triple values `(j, j, j)` until every arc has
/// `C+ = C- = E_j`, then fixes the edge offsets.
pub fn pad_plan(mut plan: SynthPlan) -> SynthPlan {
    let n = plan.num_vars;
    plan.e = (0..n)
        .map(|j| {
            let (a, b) = (plan.c_plus[j], plan.c_minus[j]);
            2 * a.max(b) - a.min(b)
        })
        .collect();
    for j in 0..n {
        let (a, b) = (plan.c_plus[j], plan.c_minus[j]);
        let (count, s) = if a > b { (a - b, [1, 0, 0]) } else { (b - a, [1, 1, 0]) };
        for _ in 0..count {
            plan.index_fn.push([j as u32; 3]);
            plan.s_prime.push(s);
        }
    }
    tally(&mut plan);
    plan.k_prime = plan.index_fn.len();
    plan.p = Vec::with_capacity(n + 1);
    let mut acc = 0;
    for j in 0..n {
        plan.p.push(acc);
        acc += 2 * plan.e[j];
    }
    plan.p.push(acc);
    plan
}

/// Assigns ends of edges so that arc `j` owns edges `P_j .. P_j + 2E_j` and every
/// edge is preferred or non-preferred.
pub fn wire_dadg(plan: &SynthPlan) -> Dadg {
    let t = plan.k_prime;
    let mut tv: Vec<[Segment; 3]> = vec![[[(0, 0); 2]; 3]; t];
    let mut next_plus = vec![0usize; plan.num_vars];
    let mut next_minus = vec![0usize; plan.num_vars];
    for (k, segs) in tv.iter_mut().enumerate() {
        for (l, seg) in segs.iter_mut().enumerate() {
            let j = plan.index_fn[k][l] as usize;
            let (p, e) = (plan.p[j], plan.e[j]);
            *seg = if plan.s_prime[k][l] == 1 {
                let a = next_plus[j];
                next_plus[j] += 1;
                [((p + e + a) as u32, 1), ((p + a) as u32, 0)]
            } else {
                let a = next_minus[j];
                next_minus[j] += 1;
                let pref = if a + 1 == e { p } else { p + a + 1 };
                [((p + e + a) as u32, 0), (pref as u32, 1)]
            };
        }
    }
    Dadg { c: 0, b: 0, d: 0, t, bv: vec![], dv: vec![], tv }
}

/// The three steps in sequence.
pub fn synthesize(f: &Cnf) -> Result<(SynthPlan, Dadg), SynthError> {
    let plan = pad_plan(extract_pairs(f)?);
    let d = wire_dadg(&plan);
    Ok((plan, d))
}

/// The prime clauses of the plan as a formula (prime then mirror per triple value).
pub fn padded_formula(plan: &SynthPlan) -> Cnf {
    let mut clauses = Vec::new();
    for (j, s) in plan.index_fn.iter().zip(&plan.s_prime) {
        let c = [0, 1, 2].map(|l| crate::sat::Lit::new(j[l], s[l] == 1));
        clauses.push(c);
        clauses.push(mirror(&c));
    }
    Cnf::new(plan.num_vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dadg::{double_arcs, is_height1, validate_dadg};
    use crate::sat::Lit;

    fn worked() -> Cnf {
        Cnf::new(3, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)], [Lit::neg(0), Lit::neg(1), Lit::neg(2)]])
    }

    #[test]
    fn worked_example() {
        let plan = extract_pairs(&worked()).unwrap();
        assert_eq!((plan.k, plan.index_fn.clone(), plan.s_prime.clone()), (1, vec![[0, 1, 2]], vec![[1, 1, 1]]));
        let plan = pad_plan(plan);
        assert_eq!(plan.e, vec![2, 2, 2]);
        assert_eq!(plan.k_prime, 4);
        assert_eq!(&plan.s_prime[1..], &[[1, 0, 0]; 3]);
        let d = wire_dadg(&plan);
        assert_eq!(d.t, 4);
        assert_eq!(d.edge_count(), Some(12));
        assert_eq!(d.tv[0][0], [(2, 1), (0, 0)]);
        assert_eq!(d.tv[1], [[(3, 1), (1, 0)], [(2, 0), (1, 1)], [(3, 0), (0, 1)]]);
        assert!(validate_dadg(&d).ok());
        assert!(is_height1(&d));
        assert_eq!(double_arcs(&d).index_fn, plan.index_fn);
    }

    #[test]
    fn rejects_bad_input() {
        let f = Cnf::new(3, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)]]);
        assert!(extract_pairs(&f).is_err());
        let g = Cnf::new(3, vec![[Lit::pos(0), Lit::pos(1), Lit::pos(2)], [Lit::neg(0), Lit::neg(1), Lit::pos(2)]]);
        assert_eq!(extract_pairs(&g), Err(SynthError::NotSymmetric));
    }
}
