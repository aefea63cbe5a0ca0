//! Double arcs, strip designations and the parameters `j(k, l)`, `s(k, l)` of a
//! verified generic surface.

use crate::complex::sorted;
use crate::graph_shape::decompose;
use crate::surface::{SurfaceModel, ValueKind};
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("inconsistent intersection graph at vertex {0}: {1}")]
    Inconsistent(u32, String),
}

/// Per triple value, the three segments `[a_l^-, a_l^+]` (`l = 0, 1, 2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcSegments {
    pub segs: Vec<[[u32; 2]; 3]>,
}

/// Per triple value, closed boundary paths of the sheets `{1,2}`, `{1,3}`, `{2,3}`
/// (first vertex repeated at the end).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SheetBoundaries {
    pub cycles: Vec<[Vec<u32>; 3]>,
}

/// Sheet slot for segments `(l1, l2)`.
fn sheet_slot(l1: usize, l2: usize) -> usize {
    match (l1.min(l2), l1.max(l2)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => unreachable!(),
    }
}

/// Pairs the six degree-4 vertices of each triple value's surface link into antipodes.
pub fn arc_segments(model: &SurfaceModel) -> ArcSegments {
    let segs = model
        .tv_links
        .iter()
        .map(|d| {
            let verts: Vec<u32> = d.special_vertices.iter().map(|x| x.0).collect();
            let adjacent = |a: u32, b: u32| {
                d.long_edges.iter().any(|p| {
                    let (s, e) = (p[0], *p.last().unwrap());
                    (s == a && e == b) || (s == b && e == a)
                })
            };
            let mut pairs: Vec<[u32; 2]> = Vec::new();
            for &a in &verts {
                let b = verts.iter().copied().find(|&b| b != a && !adjacent(a, b)).expect("octahedral link");
                if a < b {
                    pairs.push([a, b]);
                }
            }
            pairs.sort_unstable();
            [pairs[0], pairs[1], pairs[2]]
        })
        .collect();
    ArcSegments { segs }
}

fn long_edge_between(d: &crate::graph_shape::GraphDecomposition, a: u32, b: u32) -> Vec<u32> {
    for p in &d.long_edges {
        if p[0] == a && *p.last().unwrap() == b {
            return p.clone();
        }
        if p[0] == b && *p.last().unwrap() == a {
            let mut q = p.clone();
            q.reverse();
            return q;
        }
    }
    panic!("no long edge between {a} and {b}");
}

/// Concatenates the four long edges bounding each sheet.
pub fn sheet_boundaries(model: &SurfaceModel, segs: &ArcSegments) -> SheetBoundaries {
    let cycles = model
        .tv_links
        .iter()
        .zip(&segs.segs)
        .map(|(d, s)| {
            let cyc = |l1: usize, l2: usize| {
                let (p1, m1, p2, m2) = (s[l1][1], s[l1][0], s[l2][1], s[l2][0]);
                let mut out = vec![p1];
                for (x, y) in [(p1, p2), (p2, m1), (m1, m2), (m2, p1)] {
                    out.extend_from_slice(&long_edge_between(d, x, y)[1..]);
                }
                out
            };
            [cyc(0, 1), cyc(0, 2), cyc(1, 2)]
        })
        .collect();
    SheetBoundaries { cycles }
}

/// A crossing of a triple value by an arc: the arc passes `k` via segment `l`
/// with the triple value at position `pos` of the arc's vertex path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub pos: usize,
    pub k: u32,
    pub l: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcTrace {
    /// Vertex paths; closed arcs repeat the first vertex at the end.
    pub arcs: Vec<Vec<u32>>,
    pub closed: Vec<bool>,
    pub crossings: Vec<Vec<Crossing>>,
    /// `j(k, l)` for all triple values.
    pub index_fn: Vec<[u32; 3]>,
}

fn find_segment(segs: &[[u32; 2]; 3], a: u32) -> Option<(usize, u32)> {
    (0..3).find_map(|l| {
        if segs[l][0] == a {
            Some((l, segs[l][1]))
        } else if segs[l][1] == a {
            Some((l, segs[l][0]))
        } else {
            None
        }
    })
}

/// Traces all double arcs: open arcs from ascending branch/double-boundary values,
/// then closed arcs from the remaining long edges in order of their least edge.
pub fn trace_double_arcs(model: &SurfaceModel, segs: &ArcSegments) -> Result<ArcTrace, AnalysisError> {
    let d = decompose(&[], &model.x_edges);
    let n_le = d.long_edges.len();
    let mut by_start: HashMap<(u32, u32), (usize, bool)> = HashMap::with_capacity(2 * n_le);
    for (i, p) in d.long_edges.iter().enumerate() {
        let m = p.len();
        by_start.insert((p[0], p[1]), (i, true));
        by_start.insert((p[m - 1], p[m - 2]), (i, false));
    }
    let oriented = |i: usize, fwd: bool| -> Vec<u32> {
        let mut p = d.long_edges[i].clone();
        if !fwd {
            p.reverse();
        }
        p
    };
    let mut used = vec![false; n_le];
    let k_count = model.tv.len();
    let mut index_fn = vec![[u32::MAX; 3]; k_count];
    let mut arcs = Vec::new();
    let mut closed = Vec::new();
    let mut crossings = Vec::new();
    let tv_of = |v: u32| -> Option<u32> {
        (model.kind[v as usize] == Some(ValueKind::Triple)).then(|| model.value_pos[v as usize])
    };

    // Extends `path` across triple values; returns crossings. Stops at a
    // non-triple end, or when the next long edge is `stop`.
    let extend = |path: &mut Vec<u32>, used: &mut Vec<bool>, stop: Option<(u32, u32)>, j: u32, index_fn: &mut Vec<[u32; 3]>| -> Result<(Vec<Crossing>, bool), AnalysisError> {
        let mut cr = Vec::new();
        loop {
            let end = *path.last().unwrap();
            let Some(k) = tv_of(end) else { return Ok((cr, false)) };
            let a = path[path.len() - 2];
            let (l, c) = find_segment(&segs.segs[k as usize], a)
                .ok_or_else(|| AnalysisError::Inconsistent(end, "arc enters triple value off its segments".into()))?;
            if index_fn[k as usize][l] != u32::MAX {
                return Err(AnalysisError::Inconsistent(end, "segment crossed twice".into()));
            }
            index_fn[k as usize][l] = j;
            cr.push(Crossing { pos: path.len() - 1, k, l: l as u8 });
            if stop == Some((end, c)) {
                return Ok((cr, true));
            }
            let &(i, fwd) = by_start
                .get(&(end, c))
                .ok_or_else(|| AnalysisError::Inconsistent(end, "no continuation across triple value".into()))?;
            if used[i] {
                return Err(AnalysisError::Inconsistent(end, "long edge reused".into()));
            }
            used[i] = true;
            path.extend_from_slice(&oriented(i, fwd)[1..]);
        }
    };

    let mut ends: Vec<u32> = model.bv.iter().chain(&model.dv).copied().collect();
    ends.sort_unstable();
    for v in ends {
        let Some((i, fwd)) = d.long_edges.iter().enumerate().find_map(|(i, p)| {
            if used[i] {
                None
            } else if p[0] == v {
                Some((i, true))
            } else if *p.last().unwrap() == v {
                Some((i, false))
            } else {
                None
            }
        }) else {
            continue;
        };
        used[i] = true;
        let mut path = oriented(i, fwd);
        let j = arcs.len() as u32;
        let (cr, _) = extend(&mut path, &mut used, None, j, &mut index_fn)?;
        arcs.push(path);
        closed.push(false);
        crossings.push(cr);
    }
    let min_edge = |p: &[u32]| p.windows(2).map(|w| sorted([w[0], w[1]])).min().unwrap();
    let mut rest: Vec<([u32; 2], usize)> =
        (0..n_le).filter(|&i| !used[i]).map(|i| (min_edge(&d.long_edges[i]), i)).collect();
    rest.sort_unstable();
    for (_, i) in rest {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut path = d.long_edges[i].clone();
        if tv_of(path[0]).is_none() {
            return Err(AnalysisError::Inconsistent(path[0], "closed arc not based at a triple value".into()));
        }
        let stop = Some((path[0], path[1]));
        let j = arcs.len() as u32;
        let (cr, done) = extend(&mut path, &mut used, stop, j, &mut index_fn)?;
        if !done {
            return Err(AnalysisError::Inconsistent(path[0], "closed arc did not close".into()));
        }
        arcs.push(path);
        closed.push(true);
        crossings.push(cr);
    }
    let mut circles: Vec<Vec<u32>> = d.circles.clone();
    circles.sort_by_key(|c| min_edge(c));
    for c in circles {
        arcs.push(c);
        closed.push(true);
        crossings.push(Vec::new());
    }
    if let Some(k) = index_fn.iter().position(|s| s.contains(&u32::MAX)) {
        return Err(AnalysisError::Inconsistent(model.tv[k], "segment not crossed by any arc".into()));
    }
    Ok(ArcTrace { arcs, closed, crossings, index_fn })
}

/// Labels of the four surface triangles around an intersection-graph edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeDesignation {
    pub edge: [u32; 2],
    /// `(third vertex, label)`.
    pub labels: [(u32, u8); 4],
}

impl EdgeDesignation {
    pub fn label_of(&self, third: u32) -> u8 {
        self.labels.iter().find(|x| x.0 == third).expect("triangle in star").1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArcAnalysis {
    pub trace: ArcTrace,
    /// Designations of every intersection-graph edge, grouped by arc in path order.
    pub designations: Vec<EdgeDesignation>,
    /// Range of `designations` belonging to each arc.
    pub arc_designations: Vec<std::ops::Range<usize>>,
    pub nontrivial_arcs: Vec<u32>,
    /// `s(k, l)`; absent when some arc is nontrivial.
    pub params: Option<Vec<[u8; 3]>>,
    /// Sorted `(edge, index into designations)`.
    pub edge_lookup: Vec<([u32; 2], u32)>,
}

impl ArcAnalysis {
    pub fn num_arcs(&self) -> usize {
        self.trace.arcs.len()
    }

    pub fn index_fn(&self) -> &[[u32; 3]] {
        &self.trace.index_fn
    }

    pub fn designation(&self, e: [u32; 2]) -> Option<&EdgeDesignation> {
        let e = sorted(e);
        self.edge_lookup
            .binary_search_by_key(&e, |x| x.0)
            .ok()
            .map(|i| &self.designations[self.edge_lookup[i].1 as usize])
    }
}

/// Third vertices of the surface triangles around `e`, in the cyclic order of
/// the edge's link in `M`.
fn star_in_link_order(model: &SurfaceModel, e: [u32; 2]) -> Result<[u32; 4], AnalysisError> {
    let p = &model.pair;
    let idx = &model.idx;
    let ei = idx.edge_index(p, e).expect("edge in M");
    let link: Vec<[u32; 2]> = idx
        .edge_tets
        .get(ei)
        .iter()
        .map(|&t| {
            let t = p.tetrahedra[t as usize];
            let r: Vec<u32> = t.iter().copied().filter(|x| !e.contains(x)).collect();
            [r[0], r[1]]
        })
        .collect();
    let circle = decompose(&[], &link)
        .circles
        .into_iter()
        .next()
        .ok_or_else(|| AnalysisError::Inconsistent(e[0], "edge link is not a circle".into()))?;
    let si = p.s_edges.binary_search(&e).expect("surface edge");
    let thirds: Vec<u32> = idx
        .s_edge_s_tris
        .get(si)
        .iter()
        .map(|&t| p.s_triangles[t as usize].iter().copied().find(|x| !e.contains(x)).unwrap())
        .collect();
    let ordered: Vec<u32> = circle[..circle.len() - 1].iter().copied().filter(|v| thirds.contains(v)).collect();
    if ordered.len() != 4 {
        return Err(AnalysisError::Inconsistent(e[0], "intersection edge without four surface triangles".into()));
    }
    Ok([ordered[0], ordered[1], ordered[2], ordered[3]])
}

/// The four paths from `a` to `c` used for the "following triangle" relation at `b`.
fn following_paths(
    model: &SurfaceModel,
    sheets: &SheetBoundaries,
    segs: &ArcSegments,
    a: u32,
    b: u32,
    c: u32,
) -> Result<Vec<Vec<u32>>, AnalysisError> {
    match model.kind[b as usize] {
        Some(ValueKind::Double) => {
            let edges = model.idx.s_link_edges(&model.pair, b);
            let d = decompose(&[], &edges);
            let out: Vec<Vec<u32>> = d
                .long_edges
                .iter()
                .map(|p| {
                    let mut p = p.clone();
                    if p[0] != a {
                        p.reverse();
                    }
                    p
                })
                .collect();
            if out.len() != 4 || out.iter().any(|p| p[0] != a || *p.last().unwrap() != c) {
                return Err(AnalysisError::Inconsistent(b, "double value link does not join its arc neighbors".into()));
            }
            Ok(out)
        }
        Some(ValueKind::Triple) => {
            let k = model.value_pos[b as usize] as usize;
            let (l, _) = find_segment(&segs.segs[k], a).expect("segment");
            let mut out = Vec::new();
            for l2 in (0..3).filter(|&x| x != l) {
                let cyc = &sheets.cycles[k][sheet_slot(l, l2)];
                let body = &cyc[..cyc.len() - 1];
                let n = body.len();
                let ia = body.iter().position(|&x| x == a).unwrap();
                let rot: Vec<u32> = (0..=n).map(|i| body[(ia + i) % n]).collect();
                let ic = rot.iter().position(|&x| x == c).unwrap();
                out.push(rot[..=ic].to_vec());
                let mut back = rot[ic..].to_vec();
                back.reverse();
                out.push(back);
            }
            Ok(out)
        }
        _ => Err(AnalysisError::Inconsistent(b, "arc passes through a non-double vertex".into())),
    }
}

/// Seeds a designation on each arc's first edge, propagates it continuously,
/// flags nontrivial closed arcs, and reads off `s(k, l)`.
pub fn designate_strips(
    model: &SurfaceModel,
    segs: &ArcSegments,
    sheets: &SheetBoundaries,
    trace: ArcTrace,
) -> Result<ArcAnalysis, AnalysisError> {
    let per_arc = crate::par::map_range(trace.arcs.len(), |j| designate_arc(model, segs, sheets, &trace, j));
    let mut designations = Vec::new();
    let mut arc_designations = Vec::new();
    let mut nontrivial_arcs = Vec::new();
    let mut params = vec![[0u8; 3]; model.tv.len()];
    for (j, res) in per_arc.into_iter().enumerate() {
        let (des, trivial, svals) = res?;
        let start = designations.len();
        designations.extend(des);
        arc_designations.push(start..designations.len());
        if !trivial {
            nontrivial_arcs.push(j as u32);
        }
        for (k, l, s) in svals {
            params[k as usize][l as usize] = s;
        }
    }
    let mut edge_lookup: Vec<([u32; 2], u32)> =
        designations.iter().enumerate().map(|(i, d)| (d.edge, i as u32)).collect();
    edge_lookup.sort_unstable();
    let params = nontrivial_arcs.is_empty().then_some(params);
    Ok(ArcAnalysis { trace, designations, arc_designations, nontrivial_arcs, params, edge_lookup })
}

type ArcResult = Result<(Vec<EdgeDesignation>, bool, Vec<(u32, u8, u8)>), AnalysisError>;

fn designate_arc(model: &SurfaceModel, segs: &ArcSegments, sheets: &SheetBoundaries, trace: &ArcTrace, j: usize) -> ArcResult {
    let path = &trace.arcs[j];
    let q = path.len() - 1;
    let first = star_in_link_order(model, sorted([path[0], path[1]]))?;
    let mut des = Vec::with_capacity(q);
    des.push(EdgeDesignation {
        edge: sorted([path[0], path[1]]),
        labels: [(first[0], 0), (first[1], 1), (first[2], 0), (first[3], 1)],
    });
    let follow = |m: usize, prev: &EdgeDesignation, c: u32| -> Result<EdgeDesignation, AnalysisError> {
        let (a, b) = (path[m - 1], path[m]);
        let paths = following_paths(model, sheets, segs, a, b, c)?;
        let mut labels = [(0u32, 0u8); 4];
        for (slot, p) in labels.iter_mut().zip(&paths) {
            *slot = (p[p.len() - 2], prev.label_of(p[1]));
        }
        Ok(EdgeDesignation { edge: sorted([b, c]), labels })
    };
    for m in 1..q {
        let next = follow(m, des.last().unwrap(), path[m + 1])?;
        des.push(next);
    }
    let mut trivial = true;
    if trace.closed[j] {
        let wrap = follow(q, des.last().unwrap(), path[1])?;
        trivial = wrap.labels.iter().all(|&(t, l)| des[0].label_of(t) == l);
    }
    let mut svals = Vec::new();
    for cr in &trace.crossings[j] {
        let (a, b) = (path[cr.pos - 1], path[cr.pos]);
        let k = cr.k as usize;
        let l = cr.l as usize;
        // Segment 1 and 2 read the sheet {1,2}; segment 3 reads the sheet {2,3}.
        let slot = if l == 2 { sheet_slot(1, 2) } else { sheet_slot(0, 1) };
        let cyc = &sheets.cycles[k][slot];
        let body = &cyc[..cyc.len() - 1];
        let ia = body.iter().position(|&x| x == a).expect("segment end on sheet boundary");
        let v = body[(ia + 1) % body.len()];
        let dz = &des[if cr.pos - 1 < des.len() { cr.pos - 1 } else { des.len() - 1 }];
        debug_assert_eq!(dz.edge, sorted([a, b]));
        let label = dz.label_of(v);
        let s = if l == 0 { 1 - label } else { label };
        svals.push((cr.k, cr.l, s));
    }
    Ok((des, trivial, svals))
}

/// Full analysis: segments, sheets, arcs and designations.
pub fn analyze(model: &SurfaceModel) -> Result<ArcAnalysis, AnalysisError> {
    let segs = arc_segments(model);
    let sheets = sheet_boundaries(model, &segs);
    let trace = trace_double_arcs(model, &segs)?;
    designate_strips(model, &segs, &sheets, trace)
}

/// JSON report of an analysis.
#[derive(Serialize)]
pub struct AnalysisReport<'a> {
    pub arcs: &'a [Vec<u32>],
    pub index_fn: &'a [[u32; 3]],
    pub s: Option<&'a Vec<[u8; 3]>>,
    pub nontrivial_arcs: &'a [u32],
}

impl ArcAnalysis {
    pub fn report(&self) -> AnalysisReport<'_> {
        AnalysisReport {
            arcs: &self.trace.arcs,
            index_fn: &self.trace.index_fn,
            s: self.params.as_ref(),
            nontrivial_arcs: &self.nontrivial_arcs,
        }
    }
}
