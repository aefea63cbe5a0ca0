//! 3-SAT formulas: canonical form, predicates, a DPLL solver, DIMACS I/O and
//! the reduction from proper to proper symmetric formulas.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

/// Literal `x_var ↔ sign`: `sign = true` is the positive literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lit {
    pub var: u32,
    pub sign: bool,
}

impl Lit {
    pub fn new(var: u32, sign: bool) -> Lit {
        Lit { var, sign }
    }
    pub fn pos(var: u32) -> Lit {
        Lit::new(var, true)
    }
    pub fn neg(var: u32) -> Lit {
        Lit::new(var, false)
    }
    pub fn negate(self) -> Lit {
        Lit::new(self.var, !self.sign)
    }
    /// Rank under `x0 ≺ ¬x0 ≺ x1 ≺ ¬x1 ≺ …`.
    pub fn rank(self) -> u64 {
        2 * self.var as u64 + u64::from(!self.sign)
    }
    pub fn eval(self, a: &[bool]) -> bool {
        a[self.var as usize] == self.sign
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

pub type Clause = [Lit; 3];

/// Negates every literal of a clause.
pub fn mirror(c: &Clause) -> Clause {
    [c[0].negate(), c[1].negate(), c[2].negate()]
}

fn sorted_clause(c: &Clause) -> Clause {
    let mut c = *c;
    c.sort();
    c
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("formula is not proper: clause {0} repeats a variable")]
    NotProper(usize),
    #[error("DIMACS line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Cnf {
        Cnf { num_vars, clauses }
    }

    pub fn eval(&self, a: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(a)))
    }

    /// Every variable index in `[0, N)` and every variable used at least once.
    pub fn uses_all_vars(&self) -> bool {
        let mut seen = vec![false; self.num_vars];
        for l in self.clauses.iter().flatten() {
            if l.var as usize >= self.num_vars {
                return false;
            }
            seen[l.var as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Writes DIMACS CNF text.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                s.push_str(&format!("{} ", if l.sign { v } else { -v }));
            }
            s.push_str("0\n");
        }
        s
    }

    /// Parses DIMACS CNF text with exactly three literals per clause.
    pub fn from_dimacs(text: &str) -> Result<Cnf, SatError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<i64> = Vec::new();
        let err = |line: usize, msg: &str| SatError::Dimacs { line, msg: msg.to_string() };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if t.starts_with('p') {
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(err(line, "malformed header"));
                }
                let n = parts[2].parse().map_err(|_| err(line, "bad variable count"))?;
                let k = parts[3].parse().map_err(|_| err(line, "bad clause count"))?;
                header = Some((n, k));
                continue;
            }
            let (n, _) = header.ok_or_else(|| err(line, "clause before header"))?;
            for tok in t.split_whitespace() {
                let v: i64 = tok.parse().map_err(|_| err(line, "bad literal"))?;
                if v == 0 {
                    if pending.len() != 3 {
                        return Err(err(line, "clause must have exactly 3 literals"));
                    }
                    let mut c = [Lit::pos(0); 3];
                    for (slot, &x) in c.iter_mut().zip(&pending) {
                        if x.unsigned_abs() as usize > n {
                            return Err(err(line, "variable out of range"));
                        }
                        *slot = Lit::new((x.unsigned_abs() - 1) as u32, x > 0);
                    }
                    clauses.push(c);
                    pending.clear();
                } else {
                    pending.push(v);
                }
            }
        }
        let (n, k) = header.ok_or_else(|| err(0, "missing header"))?;
        if !pending.is_empty() {
            return Err(err(0, "unterminated clause"));
        }
        if clauses.len() != k {
            return Err(err(0, "clause count does not match header"));
        }
        Ok(Cnf::new(n, clauses))
    }
}

impl std::fmt::Display for Cnf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let ls: Vec<String> =
                    c.iter().map(|l| format!("{}x{}", if l.sign { "" } else { "¬" }, l.var)).collect();
                format!("({})", ls.join("∨"))
            })
            .collect();
        write!(f, "{}", parts.join("∧"))
    }
}

/// Sorts literals and clauses under the canonical order and removes repeated clauses.
/// Tautological clauses are kept.
pub fn reduce_formula(f: &Cnf) -> Cnf {
    let mut clauses: Vec<Clause> = f.clauses.iter().map(sorted_clause).collect();
    clauses.sort();
    clauses.dedup();
    Cnf::new(f.num_vars, clauses)
}

/// Every clause mentions three distinct variables.
pub fn is_proper(f: &Cnf) -> bool {
    first_improper(f).is_none()
}

fn first_improper(f: &Cnf) -> Option<usize> {
    f.clauses.iter().position(|c| c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var)
}

/// Every clause's mirror occurs with the same multiplicity as the clause.
pub fn is_symmetric(f: &Cnf) -> bool {
    let mut counts: HashMap<Clause, i64> = HashMap::new();
    for c in &f.clauses {
        *counts.entry(sorted_clause(c)).or_default() += 1;
    }
    counts.iter().all(|(c, n)| counts.get(&sorted_clause(&mirror(c))).copied().unwrap_or(0) == *n)
}

/// Complete DPLL search with unit propagation. Branches on the lowest
/// unassigned variable, trying `false` first. Unconstrained variables are `false`.
pub fn solve(f: &Cnf) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; f.num_vars];
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); f.num_vars];
    for (i, c) in f.clauses.iter().enumerate() {
        for l in c {
            occurs[l.var as usize].push(i);
        }
    }
    if dpll(f, &occurs, &mut assign) {
        Some(assign.into_iter().map(|x| x.unwrap_or(false)).collect())
    } else {
        None
    }
}

enum Status {
    Sat,
    Conflict,
    Unit(Lit),
    Open,
}

fn clause_status(c: &Clause, a: &[Option<bool>]) -> Status {
    let mut free = None;
    let mut nfree = 0;
    for &l in c {
        match a[l.var as usize] {
            Some(v) if v == l.sign => return Status::Sat,
            Some(_) => {}
            None => {
                if free != Some(l) {
                    nfree += 1;
                }
                free = Some(l);
            }
        }
    }
    match (nfree, free) {
        (0, _) => Status::Conflict,
        (1, Some(l)) => Status::Unit(l),
        _ => Status::Open,
    }
}

/// Unit propagation from a queue of just-assigned variables. Returns false on conflict.
fn propagate(f: &Cnf, occurs: &[Vec<usize>], a: &mut [Option<bool>], trail: &mut Vec<u32>, start: usize) -> bool {
    let mut head = start;
    while head < trail.len() {
        let v = trail[head] as usize;
        head += 1;
        for &ci in &occurs[v] {
            match clause_status(&f.clauses[ci], a) {
                Status::Conflict => return false,
                Status::Unit(l) => {
                    a[l.var as usize] = Some(l.sign);
                    trail.push(l.var);
                }
                _ => {}
            }
        }
    }
    true
}

fn dpll(f: &Cnf, occurs: &[Vec<usize>], a: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<u32> = Vec::new();
    // Initial units and empty-clause detection.
    for c in &f.clauses {
        match clause_status(c, a) {
            Status::Conflict => return false,
            Status::Unit(l) if a[l.var as usize].is_none() => {
                a[l.var as usize] = Some(l.sign);
                trail.push(l.var);
            }
            _ => {}
        }
    }
    if !propagate(f, occurs, a, &mut trail, 0) {
        return false;
    }
    search(f, occurs, a)
}

fn search(f: &Cnf, occurs: &[Vec<usize>], a: &mut Vec<Option<bool>>) -> bool {
    let Some(v) = (0..a.len()).find(|&v| a[v].is_none() && !occurs[v].is_empty()) else {
        return f.clauses.iter().all(|c| matches!(clause_status(c, a), Status::Sat));
    };
    for value in [false, true] {
        let mut trail = vec![v as u32];
        a[v] = Some(value);
        if propagate(f, occurs, a, &mut trail, 0) && search(f, occurs, a) {
            return true;
        }
        for &u in &trail {
            a[u as usize] = None;
        }
    }
    false
}

/// Exhaustive satisfiability check (oracle for small formulas).
pub fn brute_force_sat(f: &Cnf) -> bool {
    assert!(f.num_vars <= 24, "exhaustive search limited to 24 variables");
    let n = f.num_vars;
    crate::par::any_range(1u64 << n, |m| {
        let a: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
        f.eval(&a)
    })
}

/// Reduction from a proper formula with `K` clauses over `N` variables to a proper
/// symmetric formula with `4K` clauses over `N + 1 + K` variables (`z` at index `N`,
/// `y_k` at `N + 1 + k`), equisatisfiable with the input.
pub fn symmetrize(f: &Cnf) -> Result<Cnf, SatError> {
    if let Some(i) = first_improper(f) {
        return Err(SatError::NotProper(i));
    }
    let n = f.num_vars as u32;
    let z = n;
    let mut clauses = Vec::with_capacity(4 * f.clauses.len());
    for (k, c) in f.clauses.iter().enumerate() {
        let c = sorted_clause(c);
        let y = n + 1 + k as u32;
        clauses.push([c[0], Lit::pos(z), Lit::pos(y)]);
        clauses.push([c[0].negate(), Lit::neg(z), Lit::neg(y)]);
        clauses.push([c[1], c[2], Lit::neg(y)]);
        clauses.push([c[1].negate(), c[2].negate(), Lit::pos(y)]);
    }
    let out = Cnf::new(f.num_vars + 1 + f.clauses.len(), clauses);
    let mut r = reduce_formula(&out);
    // Clauses are pairwise distinct, so reduction keeps all 4K of them.
    debug_assert_eq!(r.clauses.len(), out.clauses.len());
    r.num_vars = out.num_vars;
    Ok(r)
}

/// Extends a model of `f` to a model of `symmetrize(f)` with `z = 0`.
pub fn extend_symmetrized_model(f: &Cnf, x: &[bool]) -> Vec<bool> {
    let mut out = x.to_vec();
    out.push(false);
    for c in &f.clauses {
        let c = sorted_clause(c);
        let (l1, l2, l3) = (c[0].eval(x), c[1].eval(x), c[2].eval(x));
        let y = !l1 || (l2 && l3);
        out.push(y);
    }
    out
}

/// All eight sign patterns over `x0, x1, x2`: unsatisfiable and symmetric.
pub fn all_sign_patterns_formula() -> Cnf {
    let clauses = (0..8u32)
        .map(|m| [Lit::new(0, m & 1 == 0), Lit::new(1, m & 2 == 0), Lit::new(2, m & 4 == 0)])
        .collect();
    reduce_formula(&Cnf::new(3, clauses))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: [(u32, bool); 3]) -> Clause {
        [Lit::new(l[0].0, l[0].1), Lit::new(l[1].0, l[1].1), Lit::new(l[2].0, l[2].1)]
    }

    #[test]
    fn reduce_examples() {
        let f = Cnf::new(
            2,
            vec![c([(1, true), (0, true), (0, true)]), c([(0, true), (0, true), (1, true)]), c([(0, true), (1, true), (1, false)])],
        );
        let r = reduce_formula(&f);
        assert_eq!(r.clauses, vec![c([(0, true), (0, true), (1, true)]), c([(0, true), (1, true), (1, false)])]);
        assert_eq!(reduce_formula(&r), r);
        let g = Cnf::new(1, vec![c([(0, false), (0, true), (0, true)])]);
        assert_eq!(reduce_formula(&g).clauses, vec![c([(0, true), (0, true), (0, false)])]);
    }

    #[test]
    fn predicates() {
        let f = Cnf::new(5, vec![c([(1, true), (3, true), (4, true)]), c([(1, false), (3, false), (4, false)])]);
        assert!(is_symmetric(&f));
        let g = Cnf::new(
            6,
            vec![c([(1, true), (2, true), (5, true)]), c([(1, false), (3, false), (5, false)]), c([(1, false), (3, true), (4, false)])],
        );
        assert!(!is_symmetric(&g));
        assert!(!is_proper(&Cnf::new(6, vec![c([(5, true), (5, true), (5, true)])])));
    }

    #[test]
    fn solver_examples() {
        let f = Cnf::new(1, vec![c([(0, true), (0, true), (0, true)])]);
        assert_eq!(solve(&f), Some(vec![true]));
        let g = Cnf::new(1, vec![c([(0, true); 3]), c([(0, false); 3])]);
        assert_eq!(solve(&g), None);
        assert_eq!(solve(&all_sign_patterns_formula()), None);
        assert!(!brute_force_sat(&all_sign_patterns_formula()));
    }

    #[test]
    fn symmetrize_single_clause() {
        let f = Cnf::new(3, vec![c([(0, true), (1, true), (2, true)])]);
        let s = symmetrize(&f).unwrap();
        let expect = reduce_formula(&Cnf::new(
            5,
            vec![
                c([(0, true), (3, true), (4, true)]),
                c([(0, false), (3, false), (4, false)]),
                c([(1, true), (2, true), (4, false)]),
                c([(1, false), (2, false), (4, true)]),
            ],
        ));
        assert_eq!(s, expect);
        assert!(is_proper(&s) && is_symmetric(&s));
        let x = solve(&f).unwrap();
        assert!(s.eval(&extend_symmetrized_model(&f, &x)));
    }

    #[test]
    fn dimacs_round_trip() {
        let f = all_sign_patterns_formula();
        assert_eq!(Cnf::from_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(Cnf::from_dimacs("p cnf 2 1\n1 2 0\n").is_err());
    }
}
