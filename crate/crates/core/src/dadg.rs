//! Digital arrowed daisy graphs: validity, double arcs, parameters, grading.

use crate::sat::{Cnf, Lit};
use crate::validate::ValidationReport;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// End of edge `(r, s)`: `s = 0` is the beginning of edge `r`, `s = 1` its ending.
pub type Eoe = (u32, u8);

/// An arc segment: `(non-preferred end, preferred end)`.
pub type Segment = [Eoe; 2];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dadg {
    #[serde(rename = "C")]
    pub c: usize,
    #[serde(rename = "B")]
    pub b: usize,
    #[serde(rename = "D")]
    pub d: usize,
    #[serde(rename = "T")]
    pub t: usize,
    #[serde(rename = "BV")]
    pub bv: Vec<Eoe>,
    #[serde(rename = "DV")]
    pub dv: Vec<Eoe>,
    #[serde(rename = "TV")]
    pub tv: Vec<[Segment; 3]>,
}

/// Where an end of edge sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndSite {
    Branch(usize),
    DoubleBoundary(usize),
    /// Triple value `k`, segment `l` (0-based), `preferred`.
    Triple { k: usize, l: usize, preferred: bool },
}

impl Dadg {
    pub fn from_json(text: &str) -> Result<Dadg, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Number of edges `3T + (B + D)/2`, if integral.
    pub fn edge_count(&self) -> Option<usize> {
        let bd = self.b + self.d;
        bd.is_multiple_of(2).then_some(3 * self.t + bd / 2)
    }

    fn ends(&self) -> impl Iterator<Item = (Eoe, EndSite)> + '_ {
        let b = self.bv.iter().enumerate().map(|(i, &e)| (e, EndSite::Branch(i)));
        let d = self.dv.iter().enumerate().map(|(i, &e)| (e, EndSite::DoubleBoundary(i)));
        let t = self.tv.iter().enumerate().flat_map(|(k, segs)| {
            segs.iter().enumerate().flat_map(move |(l, seg)| {
                [
                    (seg[0], EndSite::Triple { k, l, preferred: false }),
                    (seg[1], EndSite::Triple { k, l, preferred: true }),
                ]
            })
        });
        b.chain(d).chain(t)
    }

    /// Site of every end of edge, indexed by `2r + s`. Requires a valid DADG.
    pub fn end_sites(&self) -> Vec<EndSite> {
        let e = self.edge_count().expect("valid DADG");
        let mut out = vec![EndSite::Branch(usize::MAX); 2 * e];
        for ((r, s), site) in self.ends() {
            out[2 * r as usize + s as usize] = site;
        }
        out
    }
}

/// Checks counts, the exactly-once rule for ends of edges, and segment shape.
pub fn validate_dadg(d: &Dadg) -> ValidationReport {
    let mut r = ValidationReport::default();
    if d.bv.len() != d.b || d.dv.len() != d.d || d.tv.len() != d.t {
        r.push("dadg", &[], format!("table sizes ({}, {}, {}) disagree with counts", d.bv.len(), d.dv.len(), d.tv.len()));
        return r;
    }
    let Some(e) = d.edge_count() else {
        r.push("dadg", &[], "B + D is odd, edge count not integral".into());
        return r;
    };
    let mut seen = vec![0u32; 2 * e];
    for ((rr, s), _) in d.ends() {
        if rr as usize >= e || s > 1 {
            r.push("dadg", &[rr, s as u32], format!("end of edge ({rr},{s}) out of range"));
        } else {
            seen[2 * rr as usize + s as usize] += 1;
        }
    }
    for (i, &c) in seen.iter().enumerate() {
        let (rr, s) = (i as u32 / 2, i as u32 % 2);
        match c {
            1 => {}
            0 => r.push("dadg", &[rr, s], format!("end of edge ({rr},{s}) missing")),
            _ => r.push("dadg", &[rr, s], format!("end of edge ({rr},{s}) duplicated")),
        }
    }
    for (k, segs) in d.tv.iter().enumerate() {
        for (l, seg) in segs.iter().enumerate() {
            if seg[0].1 == seg[1].1 {
                r.push("dadg", &[k as u32, l as u32], format!("segment {l} of TV {k} has ends ({},{}) and ({},{})", seg[0].0, seg[0].1, seg[1].0, seg[1].1));
            }
        }
    }
    r
}

/// Double arcs of a DADG: continuation classes of edges, then the disjoint circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DadgArcs {
    /// Edges of each continuation class, ascending; circle arcs are empty.
    pub arcs: Vec<Vec<u32>>,
    /// Arc of every edge.
    pub arc_of_edge: Vec<u32>,
    /// `j(k, l)` for segments `l = 0, 1, 2`.
    pub index_fn: Vec<[u32; 3]>,
}

impl DadgArcs {
    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }
}

fn find(p: &mut [u32], mut x: u32) -> u32 {
    while p[x as usize] != x {
        p[x as usize] = p[p[x as usize] as usize];
        x = p[x as usize];
    }
    x
}

/// Partitions the edges by the continuation relation (union-find over segments).
pub fn double_arcs(d: &Dadg) -> DadgArcs {
    let e = d.edge_count().expect("valid DADG");
    let mut parent: Vec<u32> = (0..e as u32).collect();
    for segs in &d.tv {
        for seg in segs {
            let (a, b) = (find(&mut parent, seg[0].0), find(&mut parent, seg[1].0));
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut class_id = vec![u32::MAX; e];
    let mut arcs: Vec<Vec<u32>> = Vec::new();
    let mut arc_of_edge = vec![0u32; e];
    for r in 0..e as u32 {
        let root = find(&mut parent, r) as usize;
        if class_id[root] == u32::MAX {
            class_id[root] = arcs.len() as u32;
            arcs.push(Vec::new());
        }
        arc_of_edge[r as usize] = class_id[root];
        arcs[class_id[root] as usize].push(r);
    }
    arcs.extend((0..d.c).map(|_| Vec::new()));
    let index_fn = d
        .tv
        .iter()
        .map(|segs| [0, 1, 2].map(|l| arc_of_edge[segs[l][0].0 as usize]))
        .collect();
    DadgArcs { arcs, arc_of_edge, index_fn }
}

/// `s'(k, l)`: the `s` of the non-preferred end; 1 iff the preferred end is a beginning.
pub fn s_prime(d: &Dadg) -> Vec<[u8; 3]> {
    d.tv.iter().map(|segs| [0, 1, 2].map(|l| segs[l][0].1)).collect()
}

/// Graph lifting formula: per triple value the prime clause then its mirror.
pub fn graph_lifting_formula(d: &Dadg, arcs: &DadgArcs) -> Cnf {
    let sp = s_prime(d);
    let mut clauses = Vec::with_capacity(2 * d.t);
    for (j, s) in arcs.index_fn.iter().zip(&sp) {
        let prime = [0, 1, 2].map(|l| Lit::new(j[l], s[l] == 1));
        clauses.push(prime);
        clauses.push(crate::sat::mirror(&prime));
    }
    Cnf::new(arcs.num_arcs(), clauses)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Grade per edge.
    Graded(Vec<i64>),
    /// A constraint `g(b) - g(a) = expected` contradicted by the grades found.
    NotGradable { a: u32, b: u32, expected: i64, found: i64 },
}

impl Grading {
    /// Largest spread `max g - min g` over connected components, if graded.
    pub fn height(&self, d: &Dadg) -> Option<i64> {
        let Grading::Graded(g) = self else { return None };
        let comps = grade_components(d);
        let mut best = 0;
        for c in comps {
            let (lo, hi) = c.iter().fold((i64::MAX, i64::MIN), |(lo, hi), &r| (lo.min(g[r as usize]), hi.max(g[r as usize])));
            best = best.max(hi - lo);
        }
        Some(best)
    }
}

/// Difference constraints `g(b) = g(a) + w` imposed by the triple values.
fn grade_constraints(d: &Dadg) -> Vec<(u32, u32, i64)> {
    let mut out = Vec::new();
    for segs in &d.tv {
        let base = segs[0][0].0;
        for seg in segs {
            out.push((base, seg[0].0, 0));
            out.push((base, seg[1].0, 1));
        }
    }
    out
}

fn constraint_adjacency(d: &Dadg, e: usize) -> Vec<Vec<(u32, i64)>> {
    let mut adj: Vec<Vec<(u32, i64)>> = vec![Vec::new(); e];
    for (a, b, w) in grade_constraints(d) {
        adj[a as usize].push((b, w));
        adj[b as usize].push((a, -w));
    }
    adj
}

fn grade_components(d: &Dadg) -> Vec<Vec<u32>> {
    let e = d.edge_count().unwrap_or(0);
    let adj = constraint_adjacency(d, e);
    let mut seen = vec![false; e];
    let mut out = Vec::new();
    for r in 0..e {
        if seen[r] {
            continue;
        }
        let mut comp = vec![r as u32];
        seen[r] = true;
        let mut i = 0;
        while i < comp.len() {
            for &(n, _) in &adj[comp[i] as usize] {
                if !seen[n as usize] {
                    seen[n as usize] = true;
                    comp.push(n);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

/// BFS grading: the least edge of each component gets grade 0.
pub fn grade(d: &Dadg) -> Grading {
    let e = d.edge_count().expect("valid DADG");
    let adj = constraint_adjacency(d, e);
    let mut g: Vec<Option<i64>> = vec![None; e];
    for root in 0..e {
        if g[root].is_some() {
            continue;
        }
        g[root] = Some(0);
        let mut q = VecDeque::from([root as u32]);
        while let Some(u) = q.pop_front() {
            let gu = g[u as usize].unwrap();
            for &(v, w) in &adj[u as usize] {
                match g[v as usize] {
                    None => {
                        g[v as usize] = Some(gu + w);
                        q.push_back(v);
                    }
                    Some(gv) if gv != gu + w => {
                        return Grading::NotGradable { a: u, b: v, expected: w, found: gv - gu };
                    }
                    _ => {}
                }
            }
        }
    }
    Grading::Graded(g.into_iter().map(Option::unwrap).collect())
}

/// Edge classes used by the height-1 test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Preferred,
    NonPreferred,
    Indecisive,
    Irrelevant,
}

pub fn classify_edges(d: &Dadg) -> Vec<EdgeClass> {
    let sites = d.end_sites();
    (0..sites.len() / 2)
        .map(|r| match (sites[2 * r], sites[2 * r + 1]) {
            (EndSite::Triple { preferred: a, .. }, EndSite::Triple { preferred: b, .. }) => match (a, b) {
                (true, true) => EdgeClass::Preferred,
                (false, false) => EdgeClass::NonPreferred,
                _ => EdgeClass::Indecisive,
            },
            _ => EdgeClass::Irrelevant,
        })
        .collect()
}

/// At least one triple value and no indecisive edge.
pub fn is_height1(d: &Dadg) -> bool {
    d.t >= 1 && classify_edges(d).iter().all(|c| *c != EdgeClass::Indecisive)
}

/// The single-triple-value example whose one arc is a grade-obstructing loop.
pub fn example_t1() -> Dadg {
    Dadg { t: 1, tv: vec![[[(0, 1), (1, 0)], [(1, 1), (2, 0)], [(2, 1), (0, 0)]]], ..Default::default() }
}

/// Two triple values forming a height-1 DADG with three arcs.
pub fn example_t2() -> Dadg {
    Dadg {
        t: 2,
        tv: vec![
            [[(3, 1), (0, 0)], [(4, 1), (1, 0)], [(5, 1), (2, 0)]],
            [[(3, 0), (0, 1)], [(4, 0), (1, 1)], [(5, 0), (2, 1)]],
        ],
        ..Default::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{solve, Lit};

    #[test]
    fn validity() {
        assert!(validate_dadg(&example_t1()).ok());
        let mut bad = example_t1();
        bad.tv[0][2][1] = (0, 1);
        assert!(!validate_dadg(&bad).ok());
        let mut bad = example_t1();
        bad.tv[0][0] = [(0, 1), (1, 1)];
        assert!(!validate_dadg(&bad).ok());
    }

    #[test]
    fn arcs_and_parameters() {
        let a = double_arcs(&example_t1());
        assert_eq!(a.arcs, vec![vec![0, 1, 2]]);
        assert_eq!(a.index_fn, vec![[0, 0, 0]]);
        assert_eq!(s_prime(&example_t1()), vec![[1, 1, 1]]);
        let a2 = double_arcs(&example_t2());
        assert_eq!(a2.arcs, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
        let seg = Dadg { t: 1, tv: vec![[[(3, 0), (0, 1)], [(0, 0), (1, 1)], [(1, 0), (3, 1)]]], ..Default::default() };
        assert_eq!(s_prime(&seg)[0][0], 0);
    }

    #[test]
    fn formulas() {
        let d = example_t2();
        let f = graph_lifting_formula(&d, &double_arcs(&d));
        let p = [Lit::pos(0), Lit::pos(1), Lit::pos(2)];
        let n = [Lit::neg(0), Lit::neg(1), Lit::neg(2)];
        assert_eq!(f.clauses, vec![p, n, n, p]);
        let d1 = example_t1();
        let f1 = graph_lifting_formula(&d1, &double_arcs(&d1));
        assert_eq!(f1.clauses, vec![[Lit::pos(0); 3], [Lit::neg(0); 3]]);
        assert_eq!(solve(&f1), None);
        let circle = Dadg { c: 1, ..Default::default() };
        let fc = graph_lifting_formula(&circle, &double_arcs(&circle));
        assert_eq!((fc.num_vars, fc.clauses.len()), (1, 0));
    }

    #[test]
    fn grading_examples() {
        assert!(matches!(grade(&example_t1()), Grading::NotGradable { .. }));
        let d = example_t2();
        let g = grade(&d);
        let Grading::Graded(v) = &g else { panic!() };
        assert!(v[0] == v[1] && v[1] == v[2] && v[0] == v[3] + 1 && v[3] == v[4] && v[4] == v[5]);
        assert_eq!(g.height(&d), Some(1));
        assert!(is_height1(&d));
        assert!(!is_height1(&example_t1()));
        let forest = Dadg { b: 2, bv: vec![(0, 0), (0, 1)], ..Default::default() };
        assert!(validate_dadg(&forest).ok());
        assert!(matches!(grade(&forest), Grading::Graded(_)));
        assert!(!is_height1(&forest));
    }
}
