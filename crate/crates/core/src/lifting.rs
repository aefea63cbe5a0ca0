//! Lifting formula, liftability decision, brute-force oracle and certificates.

use crate::analysis::ArcAnalysis;
use crate::complex::sorted;
use crate::sat::{mirror, solve, Cnf, Lit};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("nontrivial arc present")]
    NontrivialArc,
    #[error("too many double arcs for brute force: {0} > {1}")]
    TooLarge(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LiftReason {
    NontrivialArc(u32),
    Unsat,
    Sat(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftDecision {
    pub liftable: bool,
    pub reason: LiftReason,
    pub formula: Option<Cnf>,
}

/// Per triple value the clause `(x_j1 <-> s1 or x_j2 <-> s2 or x_j3 <-> s3)`
/// followed by its mirror.
pub fn lifting_formula(a: &ArcAnalysis) -> Result<Cnf, LiftError> {
    let s = a.params.as_ref().ok_or(LiftError::NontrivialArc)?;
    let mut clauses = Vec::with_capacity(2 * s.len());
    for (j, s) in a.index_fn().iter().zip(s) {
        let prime = [0, 1, 2].map(|l| Lit::new(j[l], s[l] == 1));
        clauses.push(prime);
        clauses.push(mirror(&prime));
    }
    Ok(Cnf::new(a.num_arcs(), clauses))
}

pub fn decide_liftable(a: &ArcAnalysis) -> LiftDecision {
    if let Some(&j) = a.nontrivial_arcs.first() {
        return LiftDecision { liftable: false, reason: LiftReason::NontrivialArc(j), formula: None };
    }
    let f = lifting_formula(a).expect("trivial arcs");
    match solve(&f) {
        Some(x) => LiftDecision { liftable: true, reason: LiftReason::Sat(x), formula: Some(f) },
        None => LiftDecision { liftable: false, reason: LiftReason::Unsat, formula: Some(f) },
    }
}

pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Tries every choice of higher strip per arc and checks each triple value for
/// the two cyclic height patterns directly.
pub fn brute_force_liftable(a: &ArcAnalysis) -> Result<bool, LiftError> {
    let s = a.params.as_ref().ok_or(LiftError::NontrivialArc)?;
    let n = a.num_arcs();
    if n > BRUTE_FORCE_LIMIT {
        return Err(LiftError::TooLarge(n, BRUTE_FORCE_LIMIT));
    }
    let j = a.index_fn();
    Ok(crate::par::any_range(1u64 << n, |mask| {
        let x = |v: u32| (mask >> v) & 1 == 1;
        j.iter().zip(s).all(|(j, s)| {
            let same = (0..3).all(|l| x(j[l]) == (s[l] == 1));
            let opposite = (0..3).all(|l| x(j[l]) != (s[l] == 1));
            !same && !opposite
        })
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeightMark {
    H,
    L,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleMark {
    pub tri: [u32; 3],
    pub hl: HeightMark,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeMarks {
    pub edge: [u32; 2],
    pub labels: Vec<TriangleMark>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftCertificate {
    pub triv: u8,
    pub edges: Vec<EdgeMarks>,
}

impl LiftCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<LiftCertificate, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn tri_of(e: [u32; 2], third: u32) -> [u32; 3] {
    let mut t = [e[0], e[1], third];
    t.sort_unstable();
    t
}

/// Marks the strip with label `x_j` higher on every edge of arc `j`
/// (`x_j = 0` means the 0-strip is higher).
pub fn certificate_from_assignment(a: &ArcAnalysis, x: &[bool]) -> LiftCertificate {
    let mut edges = Vec::with_capacity(a.designations.len());
    for (j, range) in a.arc_designations.iter().enumerate() {
        let xj = u8::from(x[j]);
        for d in &a.designations[range.clone()] {
            let labels = d
                .labels
                .iter()
                .map(|&(t, l)| TriangleMark { tri: tri_of(d.edge, t), hl: if l == xj { HeightMark::H } else { HeightMark::L } })
                .collect();
            edges.push(EdgeMarks { edge: d.edge, labels });
        }
    }
    edges.sort_by_key(|e| e.edge);
    LiftCertificate { triv: 1, edges }
}

/// Certificate for a decision: the marked strips for a lifting, or `triv = 0`
/// with no edges when some arc is nontrivial. `None` when unsatisfiable.
pub fn certificate(a: &ArcAnalysis, d: &LiftDecision) -> Option<LiftCertificate> {
    match &d.reason {
        LiftReason::NontrivialArc(_) => Some(LiftCertificate { triv: 0, edges: Vec::new() }),
        LiftReason::Sat(x) => Some(certificate_from_assignment(a, x)),
        LiftReason::Unsat => None,
    }
}

/// Checks a certificate against the computed designation: triviality flag,
/// per-arc consistency of the H/L marks, and the lifting formula on the
/// derived assignment.
pub fn verify_certificate(a: &ArcAnalysis, cert: &LiftCertificate) -> Result<(), String> {
    let nontrivial = !a.nontrivial_arcs.is_empty();
    match (cert.triv, nontrivial) {
        (0, true) => return Ok(()),
        (0, false) => return Err("triv = 0 but every closed arc is trivial".into()),
        (1, true) => return Err(format!("triv = 1 but arc {} is nontrivial", a.nontrivial_arcs[0])),
        (1, false) => {}
        (t, _) => return Err(format!("triv must be 0 or 1, got {t}")),
    }
    if cert.edges.len() != a.designations.len() {
        return Err(format!("certificate lists {} edges, surface has {}", cert.edges.len(), a.designations.len()));
    }
    let mut marks: Vec<&EdgeMarks> = cert.edges.iter().collect();
    marks.sort_by_key(|e| sorted(e.edge));
    if marks.windows(2).any(|w| sorted(w[0].edge) == sorted(w[1].edge)) {
        return Err("edge listed twice".into());
    }
    let find = |e: [u32; 2]| marks.binary_search_by_key(&e, |m| sorted(m.edge)).ok().map(|i| marks[i]);
    let mut x = vec![false; a.num_arcs()];
    for (j, range) in a.arc_designations.iter().enumerate() {
        let mut xj: Option<u8> = None;
        for d in &a.designations[range.clone()] {
            let m = find(d.edge).ok_or_else(|| format!("edge {:?} missing", d.edge))?;
            if m.labels.len() != 4 {
                return Err(format!("edge {:?}: {} triangle marks", d.edge, m.labels.len()));
            }
            let highs = m.labels.iter().filter(|t| t.hl == HeightMark::H).count();
            if highs != 2 {
                return Err(format!("edge {:?}: {highs} H marks", d.edge));
            }
            for &(third, label) in &d.labels {
                let t = tri_of(d.edge, third);
                let mark = m
                    .labels
                    .iter()
                    .find(|tm| tri_of([tm.tri[0], tm.tri[1]], tm.tri[2]) == t)
                    .ok_or_else(|| format!("edge {:?}: triangle {t:?} missing", d.edge))?;
                let implied = if mark.hl == HeightMark::H { label } else { 1 - label };
                match xj {
                    None => xj = Some(implied),
                    Some(v) if v != implied => {
                        return Err(format!("arc {j}: marks at edge {:?} disagree with the rest of the arc", d.edge))
                    }
                    _ => {}
                }
            }
        }
        x[j] = xj == Some(1);
    }
    let f = lifting_formula(a).map_err(|e| e.to_string())?;
    if !f.eval(&x) {
        return Err("marked heights form a cyclic height relation".into());
    }
    Ok(())
}
