//! Generic-surface verification and vertex classification.

use crate::complex::SurfacePair;
use crate::graph_shape::{decompose, simplified_multigraph, GraphDecomposition};
use crate::incidence::{build_incidence, check_3manifold, IncidenceIndex};
use crate::validate::{check_pure_complex, ValidationReport};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum ValueKind {
    Regular,
    Double,
    Triple,
    Branch,
    RegularBoundary,
    DoubleBoundary,
}

impl ValueKind {
    /// Degree of a vertex of this kind within the intersection graph.
    pub fn x_degree(self) -> usize {
        match self {
            ValueKind::Triple => 6,
            ValueKind::Double => 2,
            ValueKind::Branch | ValueKind::DoubleBoundary => 1,
            ValueKind::Regular | ValueKind::RegularBoundary => 0,
        }
    }
}

pub const NO_POS: u32 = u32::MAX;

/// A verified generic surface with its classified values.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub pair: SurfacePair,
    pub idx: IncidenceIndex,
    /// Kind of every surface vertex; `None` off the surface.
    pub kind: Vec<Option<ValueKind>>,
    /// Interior surface edges with four surface triangles around them.
    pub x_edges: Vec<[u32; 2]>,
    /// Triple values, ascending.
    pub tv: Vec<u32>,
    /// Branch values, ascending.
    pub bv: Vec<u32>,
    /// Double-boundary values, ascending.
    pub dv: Vec<u32>,
    /// Position of a vertex in `tv`, `bv` or `dv` according to its kind.
    pub value_pos: Vec<u32>,
    /// Decomposed `Lk'` of each triple value.
    pub tv_links: Vec<GraphDecomposition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Phase {
    Pure,
    Manifold,
    Codim,
    Classify,
}

#[derive(Clone, Debug)]
pub struct VerifyError {
    pub phase: Phase,
    pub report: ValidationReport,
}

impl std::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} phase failed:\n{}", self.phase, self.report)
    }
}

impl std::error::Error for VerifyError {}

/// Checks that surface triangles are interior and surface edges have 1, 2 or 4
/// surface triangles around them. Returns the intersection-graph edges.
pub fn check_codim_values(p: &SurfacePair, idx: &IncidenceIndex) -> (ValidationReport, Vec<[u32; 2]>) {
    let mut r = ValidationReport::default();
    for t in &p.s_triangles {
        let i = IncidenceIndex::triangle_index(p, t).expect("surface triangle in M");
        if idx.tri_tet_count[i] != 2 {
            r.push("codim", t, format!("triangle {t:?} lies in the boundary of M"));
        }
    }
    let mut x_edges = Vec::new();
    for (i, e) in p.s_edges.iter().enumerate() {
        let c = idx.s_edge_s_tris.get(i).len();
        let m = idx.edge_index(p, *e).expect("surface edge in M");
        if idx.boundary_edge[m] {
            if c != 1 {
                r.push("codim", e, format!("boundary edge {e:?}: {c} triangles in St'"));
            }
        } else {
            match c {
                2 => {}
                4 => x_edges.push(*e),
                _ => r.push("codim", e, format!("edge {e:?}: {c} triangles in St'")),
            }
        }
    }
    (r, x_edges)
}

fn is_boundary_edge(p: &SurfacePair, idx: &IncidenceIndex, a: u32, b: u32) -> bool {
    let e = [a.min(b), a.max(b)];
    idx.edge_index(p, e).map(|i| idx.boundary_edge[i]).unwrap_or(false)
}

/// Classifies one surface vertex from the shape of its surface link.
pub fn classify_vertex(
    p: &SurfacePair,
    idx: &IncidenceIndex,
    v: u32,
) -> Result<(ValueKind, GraphDecomposition), String> {
    let edges = idx.s_link_edges(p, v);
    let d = decompose(&[], &edges);
    let m = simplified_multigraph(&d);
    let count = |k: usize| m.vertices.iter().filter(|x| x.1 == k).count();
    let (ver1, ver4) = (count(1), count(4));
    if ver1 + ver4 != m.vertices.len() {
        return Err(format!("vertex {v}: link has vertices of degree other than 1, 2, 4"));
    }
    let loops = m.loops();
    let boundary = idx.boundary_vertex[v as usize];
    let kind = if !boundary {
        match (ver1, ver4) {
            (0, 0) if m.circles == 1 => ValueKind::Regular,
            (0, 2) if m.circles == 0 && m.edges.len() == 4 && loops == 0 => ValueKind::Double,
            (0, 1) if m.circles == 0 && loops == 2 => ValueKind::Branch,
            (0, 6) if m.circles == 0 && loops == 0 && is_octahedral(&m.edges) => ValueKind::Triple,
            _ => {
                return Err(format!(
                    "vertex {v}: interior link census (Ver1={ver1}, Ver4={ver4}, circles={}, loops={loops}) matches no value kind",
                    m.circles
                ))
            }
        }
    } else {
        let ends: Vec<u32> = m.vertices.iter().filter(|x| x.1 == 1).map(|x| x.0).collect();
        let mut on_boundary: Vec<u32> = d
            .long_edges
            .iter()
            .flatten()
            .copied()
            .filter(|&u| is_boundary_edge(p, idx, v, u))
            .collect();
        on_boundary.sort_unstable();
        on_boundary.dedup();
        if ends != on_boundary {
            return Err(format!("vertex {v}: surface link not properly embedded in the boundary link"));
        }
        match (ver1, ver4) {
            (2, 0) if m.circles == 0 && m.edges.len() == 1 => ValueKind::RegularBoundary,
            (4, 1) if m.circles == 0 && m.edges.len() == 4 && loops == 0 => ValueKind::DoubleBoundary,
            _ => {
                return Err(format!(
                    "vertex {v}: boundary link census (Ver1={ver1}, Ver4={ver4}, circles={}) matches no value kind",
                    m.circles
                ))
            }
        }
    };
    Ok((kind, d))
}

/// Six vertices, each joined to exactly four distinct others by single edges.
fn is_octahedral(edges: &[(usize, usize)]) -> bool {
    if edges.len() != 12 || edges.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let mut deg = [0usize; 6];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.iter().all(|&d| d == 4)
}

/// Runs every check in order (pure, manifold, codimension, classification)
/// and returns the classified model or the first failing phase's report.
pub fn verify_generic_surface(mut p: SurfacePair) -> Result<SurfaceModel, VerifyError> {
    let r = check_pure_complex(&mut p);
    if !r.ok() {
        return Err(VerifyError { phase: Phase::Pure, report: r });
    }
    let mut idx = build_incidence(&p);
    let r = check_3manifold(&p, &mut idx);
    if !r.ok() {
        return Err(VerifyError { phase: Phase::Manifold, report: r });
    }
    let (r, x_edges) = check_codim_values(&p, &idx);
    if !r.ok() {
        return Err(VerifyError { phase: Phase::Codim, report: r });
    }
    let n = p.num_vertices;
    let sv = &p.s_vertices;
    let results = crate::par::map_range(sv.len(), |i| {
        let v = sv[i];
        classify_vertex(&p, &idx, v).map(|(k, d)| (k, if k == ValueKind::Triple { Some(d) } else { None }))
    });
    let mut r = ValidationReport::default();
    let mut kind = vec![None; n];
    let mut tv = Vec::new();
    let mut bv = Vec::new();
    let mut dv = Vec::new();
    let mut tv_links = Vec::new();
    for (&v, res) in sv.iter().zip(results) {
        match res {
            Ok((k, d)) => {
                kind[v as usize] = Some(k);
                match k {
                    ValueKind::Triple => {
                        tv.push(v);
                        tv_links.push(d.unwrap());
                    }
                    ValueKind::Branch => bv.push(v),
                    ValueKind::DoubleBoundary => dv.push(v),
                    _ => {}
                }
            }
            Err(m) => r.push("classify", &[v], m),
        }
    }
    let mut xdeg = vec![0u8; n];
    for e in &x_edges {
        xdeg[e[0] as usize] += 1;
        xdeg[e[1] as usize] += 1;
    }
    if r.ok() {
        for &v in sv {
            let k = kind[v as usize].unwrap();
            if xdeg[v as usize] as usize != k.x_degree() {
                r.push("classify", &[v], format!("vertex {v}: {k:?} with intersection degree {}", xdeg[v as usize]));
            }
        }
    }
    if !r.ok() {
        return Err(VerifyError { phase: Phase::Classify, report: r });
    }
    let mut value_pos = vec![NO_POS; n];
    for list in [&tv, &bv, &dv] {
        for (i, &v) in list.iter().enumerate() {
            value_pos[v as usize] = i as u32;
        }
    }
    Ok(SurfaceModel { pair: p, idx, kind, x_edges, tv, bv, dv, value_pos, tv_links })
}

impl SurfaceModel {
    /// Number of surface vertices of each kind, in `ValueKind` order.
    pub fn census(&self) -> Vec<(ValueKind, usize)> {
        use ValueKind::*;
        [Regular, Double, Triple, Branch, RegularBoundary, DoubleBoundary]
            .into_iter()
            .map(|k| (k, self.kind.iter().filter(|x| **x == Some(k)).count()))
            .collect()
    }

    pub fn count(&self, k: ValueKind) -> usize {
        self.kind.iter().filter(|x| **x == Some(k)).count()
    }
}
