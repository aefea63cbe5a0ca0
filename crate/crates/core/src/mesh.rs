//! Conforming tetrahedral meshes from convex cells.
//!
//! Each cell is a convex polytope flagged solid or empty. Facets lying in a
//! common plane are overlaid into pieces, every piece is triangulated by a rule
//! that depends only on the points it contains, and every cell is coned from
//! its centroid. The surface is the set of triangles between a solid and an
//! empty cell.

use crate::complex::{sorted, SurfacePair, Tet, Tri};
use crate::geom::{
    area2, bbox2, bbox_overlap, centroid, clip_convex, convex_order, hull_facets, in_bbox, locate, polytope_vertices,
    HalfSpace, Plane, Where, P2, P3, Q,
};
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub verts: Vec<P3>,
    pub solid: bool,
}

impl Cell {
    /// The polytope cut out by `hs`; `None` unless it has volume.
    pub fn from_halfspaces(hs: &[HalfSpace], solid: bool) -> Option<Cell> {
        let verts = polytope_vertices(hs);
        if verts.len() < 4 || hull_facets(&verts).len() < 4 {
            return None;
        }
        Some(Cell { verts, solid })
    }

    pub fn map(&self, f: impl Fn(P3) -> P3) -> Cell {
        let mut verts: Vec<P3> = self.verts.iter().map(|p| f(*p)).collect();
        verts.sort();
        Cell { verts, solid: self.solid }
    }
}

/// A simplicial complex with rational vertex coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteComplex {
    pub coords: Vec<P3>,
    pub pair: SurfacePair,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConcreteParseError {
    #[error(transparent)]
    Complex(#[from] crate::complex::ParseError),
    #[error("coords: {0}")]
    Coords(String),
}

#[derive(serde::Deserialize)]
struct RawCoords {
    coords: Vec<[i64; 6]>,
}

impl ConcreteComplex {
    /// The complex JSON format with an extra `coords` list of
    /// `[x_num, x_den, y_num, y_den, z_num, z_den]` per vertex.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(&self.pair).expect("serializable");
        let coords: Vec<[i64; 6]> =
            self.coords.iter().map(|p| [p[0].numer(), p[0].denom(), p[1].numer(), p[1].denom(), p[2].numer(), p[2].denom()].map(|x| *x)).collect();
        v["coords"] = serde_json::to_value(coords).expect("serializable");
        serde_json::to_string(&v).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<ConcreteComplex, ConcreteParseError> {
        let pair = crate::complex::parse_complex(text)?;
        let raw: RawCoords = serde_json::from_str(text).map_err(|e| ConcreteParseError::Coords(e.to_string()))?;
        if raw.coords.len() != pair.num_vertices {
            return Err(ConcreteParseError::Coords(format!("{} coordinates for {} vertices", raw.coords.len(), pair.num_vertices)));
        }
        let mut coords = Vec::with_capacity(raw.coords.len());
        for (i, c) in raw.coords.iter().enumerate() {
            if c[1] <= 0 || c[3] <= 0 || c[5] <= 0 {
                return Err(ConcreteParseError::Coords(format!("vertex {i}: non-positive denominator")));
            }
            coords.push([Q::new(c[0], c[1]), Q::new(c[2], c[3]), Q::new(c[4], c[5])]);
        }
        Ok(ConcreteComplex { coords, pair })
    }
}

#[derive(Clone, Debug, Default)]
pub struct MeshInput {
    pub cells: Vec<Cell>,
    /// Extra points inserted wherever they lie on a piece.
    pub steiner: Vec<P3>,
    /// Points preferred as fan apex when they lie on a piece boundary.
    pub apex: Vec<P3>,
    /// Lower and upper corner of the box that the cells tile.
    pub bbox: [P3; 2],
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeshError {
    #[error("cell {0} is not full-dimensional")]
    Flat(usize),
    #[error("facet of cell {cell} in plane {plane:?} is not covered by the other side")]
    Uncovered { cell: usize, plane: Plane },
    #[error("facet of cell {cell} in plane {plane:?} lies inside the box but has no neighbour")]
    Exposed { cell: usize, plane: Plane },
    #[error("piece in plane {0:?} has several interior points")]
    Interior(Plane),
}

struct Piece {
    plane: Plane,
    poly: Vec<P2>,
    /// Cell below (`n . p <= d`) and above.
    below: Option<u32>,
    above: Option<u32>,
}

fn on_box_boundary(plane: &Plane, bbox: &[P3; 2]) -> bool {
    let axis = match plane.n {
        [1, 0, 0] => 0,
        [0, 1, 0] => 1,
        [0, 0, 1] => 2,
        _ => return false,
    };
    plane.d == bbox[0][axis] || plane.d == bbox[1][axis]
}

fn overlay(input: &MeshInput) -> Result<Vec<Piece>, MeshError> {
    type Side = Vec<(u32, Vec<P2>)>;
    let mut planes: BTreeMap<Plane, (Side, Side)> = BTreeMap::new();
    for (ci, cell) in input.cells.iter().enumerate() {
        let facets = hull_facets(&cell.verts);
        if facets.len() < 4 {
            return Err(MeshError::Flat(ci));
        }
        for f in facets {
            let poly = convex_order(&f.verts.iter().map(|p| f.plane.project(*p)).collect::<Vec<_>>());
            let e = planes.entry(f.plane).or_default();
            if f.outward {
                e.0.push((ci as u32, poly));
            } else {
                e.1.push((ci as u32, poly));
            }
        }
    }
    let mut pieces = Vec::new();
    for (plane, (below, above)) in planes {
        if below.is_empty() || above.is_empty() {
            let (side, is_below) = if below.is_empty() { (above, false) } else { (below, true) };
            for (c, poly) in side {
                if !on_box_boundary(&plane, &input.bbox) {
                    return Err(MeshError::Exposed { cell: c as usize, plane });
                }
                let (b, a) = if is_below { (Some(c), None) } else { (None, Some(c)) };
                pieces.push(Piece { plane, poly, below: b, above: a });
            }
            continue;
        }
        let boxes_a: Vec<_> = above.iter().map(|(_, p)| bbox2(p)).collect();
        let mut covered_b = vec![Q::zero(); below.len()];
        let mut covered_a = vec![Q::zero(); above.len()];
        for (i, (cb, pb)) in below.iter().enumerate() {
            let bb = bbox2(pb);
            for (j, (ca, pa)) in above.iter().enumerate() {
                if !bbox_overlap(&bb, &boxes_a[j]) {
                    continue;
                }
                let piece = clip_convex(pb, pa);
                if piece.len() < 3 {
                    continue;
                }
                let a = area2(&piece);
                if a.is_zero() {
                    continue;
                }
                covered_b[i] += a;
                covered_a[j] += a;
                pieces.push(Piece { plane, poly: piece, below: Some(*cb), above: Some(*ca) });
            }
        }
        for (i, (c, p)) in below.iter().enumerate() {
            if covered_b[i] != area2(p) {
                return Err(MeshError::Uncovered { cell: *c as usize, plane });
            }
        }
        for (j, (c, p)) in above.iter().enumerate() {
            if covered_a[j] != area2(p) {
                return Err(MeshError::Uncovered { cell: *c as usize, plane });
            }
        }
    }
    Ok(pieces)
}

struct Points {
    coords: Vec<P3>,
    index: HashMap<P3, u32>,
}

impl Points {
    fn id(&mut self, p: P3) -> u32 {
        if let Some(&i) = self.index.get(&p) {
            return i;
        }
        let i = self.coords.len() as u32;
        self.coords.push(p);
        self.index.insert(p, i);
        i
    }
}

fn collinear(a: P2, b: P2, c: P2) -> bool {
    crate::geom::cross2([b[0] - a[0], b[1] - a[1]], [c[0] - a[0], c[1] - a[1]]).is_zero()
}

/// Triangulates the convex cyclic boundary `cyc`. With an apex whose two
/// neighbours are its only boundary points on lines through it, fans from the
/// apex; otherwise repeatedly cuts the ear at the least strict corner whose
/// removal leaves a proper polygon.
fn triangulate_cycle(cyc: &[(P2, u32)], apex: Option<usize>, coords: &[P3], out: &mut Vec<Tri>) {
    let m = cyc.len();
    if let Some(a) = apex {
        let (prev, next) = (cyc[(a + m - 1) % m].0, cyc[(a + 1) % m].0);
        let clean = !collinear(cyc[a].0, prev, cyc[(a + m - 2) % m].0) && !collinear(cyc[a].0, next, cyc[(a + 2) % m].0);
        if clean {
            for k in 1..m - 1 {
                let (b, c) = (cyc[(a + k) % m], cyc[(a + k + 1) % m]);
                if !collinear(cyc[a].0, b.0, c.0) {
                    out.push(sorted([cyc[a].1, b.1, c.1]));
                }
            }
            return;
        }
    }
    let mut cyc = cyc.to_vec();
    while cyc.len() > 3 {
        let n = cyc.len();
        let v = (0..n)
            .filter(|&i| !collinear(cyc[(i + n - 1) % n].0, cyc[i].0, cyc[(i + 1) % n].0))
            .filter(|&i| {
                let (p, q) = (cyc[(i + n - 1) % n].0, cyc[(i + 1) % n].0);
                (0..n).any(|k| k != i && !collinear(p, q, cyc[k].0))
            })
            .min_by_key(|&i| coords[cyc[i].1 as usize])
            .expect("convex polygon has a corner");
        out.push(sorted([cyc[(v + n - 1) % n].1, cyc[v].1, cyc[(v + 1) % n].1]));
        cyc.remove(v);
    }
    out.push(sorted([cyc[0].1, cyc[1].1, cyc[2].1]));
}

/// Builds the complex. Deterministic in the input order.
pub fn mesh(input: &MeshInput) -> Result<ConcreteComplex, MeshError> {
    let pieces = overlay(input)?;
    let mut pts = Points { coords: Vec::new(), index: HashMap::new() };
    let apex: std::collections::HashSet<P3> = input.apex.iter().copied().collect();
    // Candidate points: piece corners and Steiner points.
    let mut cand: Vec<P3> = input.steiner.clone();
    for pc in &pieces {
        cand.extend(pc.poly.iter().map(|p| pc.plane.lift(*p)));
    }
    cand.sort();
    cand.dedup();
    let mut by_plane: BTreeMap<Plane, Vec<usize>> = BTreeMap::new();
    for (i, pc) in pieces.iter().enumerate() {
        by_plane.entry(pc.plane).or_default().push(i);
    }
    let mut cell_tris: Vec<Vec<Tri>> = vec![Vec::new(); input.cells.len()];
    let mut s_tris = Vec::new();
    for (plane, ids) in &by_plane {
        let on: Vec<(P2, P3)> = cand.iter().filter(|p| plane.contains(**p)).map(|p| (plane.project(*p), *p)).collect();
        for &pi in ids {
            let pc = &pieces[pi];
            let bb = bbox2(&pc.poly);
            let mut interior = Vec::new();
            let mut boundary = Vec::new();
            for (p2, p3) in &on {
                if !in_bbox(&bb, *p2) {
                    continue;
                }
                match locate(&pc.poly, *p2) {
                    Where::Inside => interior.push((*p2, *p3)),
                    Where::Boundary => boundary.push((*p2, *p3)),
                    Where::Outside => {}
                }
            }
            // Cyclic boundary: corners with the points on each edge in order.
            let n = pc.poly.len();
            let mut cyc: Vec<(P2, u32)> = Vec::new();
            for i in 0..n {
                let (a, b) = (pc.poly[i], pc.poly[(i + 1) % n]);
                let mut on_edge: Vec<(Q, P2, P3)> = boundary
                    .iter()
                    .filter(|(p, _)| *p != a && *p != b && crate::geom::cross2([b[0] - a[0], b[1] - a[1]], [p[0] - a[0], p[1] - a[1]]).is_zero())
                    .filter(|(p, _)| {
                        let t = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
                        let l = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]);
                        t > Q::zero() && t < l
                    })
                    .map(|(p, p3)| ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]), *p, *p3))
                    .collect();
                on_edge.sort();
                cyc.push((a, pts.id(plane.lift(a))));
                for (_, p, p3) in on_edge {
                    cyc.push((p, pts.id(p3)));
                }
            }
            let mut tris = Vec::new();
            match interior.len() {
                0 => {
                    let pos = cyc.iter().position(|(_, i)| apex.contains(&pts.coords[*i as usize]));
                    triangulate_cycle(&cyc, pos, &pts.coords, &mut tris);
                }
                1 => {
                    let c = (interior[0].0, pts.id(interior[0].1));
                    let m = cyc.len();
                    for k in 0..m {
                        tris.push(sorted([c.1, cyc[k].1, cyc[(k + 1) % m].1]));
                    }
                }
                _ => return Err(MeshError::Interior(*plane)),
            }
            for side in [pc.below, pc.above].into_iter().flatten() {
                cell_tris[side as usize].extend_from_slice(&tris);
            }
            if let (Some(b), Some(a)) = (pc.below, pc.above) {
                if input.cells[b as usize].solid != input.cells[a as usize].solid {
                    s_tris.extend_from_slice(&tris);
                }
            }
        }
    }
    let mut tets: Vec<Tet> = Vec::new();
    for (ci, tris) in cell_tris.iter().enumerate() {
        let cell = &input.cells[ci];
        if tris.len() == 4 && cell.verts.len() == 4 {
            let mut t: Vec<u32> = tris.iter().flatten().copied().collect();
            t.sort_unstable();
            t.dedup();
            if t.len() == 4 {
                tets.push([t[0], t[1], t[2], t[3]]);
                continue;
            }
        }
        let c = pts.id(centroid(&cell.verts));
        for t in tris {
            let mut v = [c, t[0], t[1], t[2]];
            v.sort_unstable();
            tets.push(v);
        }
    }
    // Drop candidate points that ended up unused.
    let mut used = vec![u32::MAX; pts.coords.len()];
    let mut coords = Vec::new();
    for t in &tets {
        for &v in t {
            if used[v as usize] == u32::MAX {
                used[v as usize] = coords.len() as u32;
                coords.push(pts.coords[v as usize]);
            }
        }
    }
    let tets: Vec<Tet> = tets.into_iter().map(|t| sorted(t.map(|v| used[v as usize]))).collect();
    let s_tris: Vec<Tri> = s_tris.into_iter().map(|t| sorted(t.map(|v| used[v as usize]))).collect();
    let pair = SurfacePair::from_top_simplices(coords.len(), tets, s_tris);
    Ok(ConcreteComplex { coords, pair })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{q, qi};
    use crate::surface::verify_generic_surface;

    fn boxed(lo: [Q; 3], hi: [Q; 3], solid: bool) -> Cell {
        let hs: Vec<HalfSpace> = (0..3).flat_map(|a| [HalfSpace::ge(a, lo[a]), HalfSpace::le(a, hi[a])]).collect();
        Cell::from_halfspaces(&hs, solid).unwrap()
    }

    #[test]
    fn single_cube_is_coned() {
        let z = qi(0);
        let o = qi(1);
        let h = q(1, 2);
        let input = MeshInput {
            cells: vec![boxed([z; 3], [o; 3], false)],
            steiner: vec![[h, h, z], [h, h, o]],
            apex: vec![],
            bbox: [[z; 3], [o; 3]],
        };
        let m = mesh(&input).unwrap();
        // Two faces split into 4 by their centres, four faces into 2.
        assert_eq!(m.pair.tetrahedra.len(), 4 + 4 + 4 * 2);
        assert_eq!(m.coords.len(), 8 + 2 + 1);
        assert!(verify_generic_surface(m.pair).is_ok());
    }

    #[test]
    fn nonconforming_boxes_get_refined() {
        let z = qi(0);
        let (o, t) = (qi(1), qi(2));
        // A big empty box next to two half-height solid boxes.
        let cells = vec![
            boxed([z, z, z], [o, t, t], false),
            boxed([o, z, z], [t, t, o], true),
            boxed([o, z, o], [t, t, t], false),
        ];
        let input = MeshInput { cells, steiner: vec![], apex: vec![], bbox: [[z; 3], [t; 3]] };
        let m = mesh(&input).unwrap();
        assert!(!m.pair.s_triangles.is_empty());
        assert!(verify_generic_surface(m.pair).is_ok());
    }

    #[test]
    fn checkerboard_edge_gives_double_line() {
        let (z, t) = (qi(0), qi(2));
        let c = |x: i64, y: i64| boxed([qi(x), qi(y), z], [qi(x + 1), qi(y + 1), t], (x + y) % 2 == 0);
        let cells = vec![c(0, 0), c(1, 0), c(0, 1), c(1, 1)];
        let input = MeshInput { cells, steiner: vec![], apex: vec![], bbox: [[z; 3], [t, t, t]] };
        let m = mesh(&input).unwrap();
        let model = verify_generic_surface(m.pair).unwrap();
        assert!(!model.x_edges.is_empty());
    }
}
