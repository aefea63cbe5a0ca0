//! Construction and validation of the atomic blocks.

use super::pattern::{blank_triangles, lobe_triangles, socket_trace, socket_triangles, LTri, LocalAxis, L2};
use super::*;
use crate::analysis::{arc_segments, trace_double_arcs};
use crate::complex::{tet_faces, Tri};
use crate::geom::{cross, dot, sub, HalfSpace};
use crate::mesh::{mesh, Cell, MeshError, MeshInput};
use crate::surface::{verify_generic_surface, SurfaceModel, ValueKind};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{kind:?} block{}: {message}", face.map(|f| format!(", face {f:?}")).unwrap_or_default())]
pub struct BlockError {
    pub kind: BlockKind,
    pub face: Option<FaceSquare>,
    pub message: String,
}

fn err(kind: BlockKind, face: Option<FaceSquare>, message: impl Into<String>) -> BlockError {
    BlockError { kind, face, message: message.into() }
}

pub(crate) fn box_halfspaces(lo: [Q; 3], hi: [Q; 3]) -> Vec<HalfSpace> {
    (0..3).flat_map(|a| [HalfSpace::ge(a, lo[a]), HalfSpace::le(a, hi[a])]).collect()
}

/// Half-spaces of the infinite prism over the triangle `t` of `face`.
pub(crate) fn prism_halfspaces(face: &FaceSquare, t: &LTri) -> Vec<HalfSpace> {
    let mut normal = [qi(0); 3];
    normal[face.axis] = qi(1);
    let p = t.map(|l| face.point(l));
    (0..3)
        .map(|i| {
            let (a, b, c) = (p[i], p[(i + 1) % 3], p[(i + 2) % 3]);
            let mut n = cross(sub(b, a), normal);
            if dot(n, c) > dot(n, a) {
                n = n.map(|x| -x);
            }
            HalfSpace { n, d: dot(n, a) }
        })
        .collect()
}

/// Prism cells over the socket triangulation of `face`, cut by `extra`.
pub(crate) fn socket_cells(face: &FaceSquare, lobes: LocalAxis, extra: &[HalfSpace]) -> Vec<Cell> {
    let solid: Vec<LTri> = lobe_triangles(lobes);
    socket_triangles()
        .iter()
        .filter_map(|t| {
            let mut hs = prism_halfspaces(face, t);
            hs.extend_from_slice(extra);
            Cell::from_halfspaces(&hs, solid.contains(t))
        })
        .collect()
}

/// Edge midpoints of every boundary square, plus the centres of blank ones;
/// the centres are also the preferred fan apexes.
pub(crate) fn face_points(faces: &[FaceSpec]) -> (Vec<P3>, Vec<P3>) {
    let mut steiner = Vec::new();
    let mut apex = Vec::new();
    for f in faces {
        for l in [[4, 0], [8, 4], [4, 8], [0, 4]] {
            steiner.push(f.square.point(l));
        }
        if f.pattern == FacePattern::Blank {
            steiner.push(f.square.center());
            apex.push(f.square.center());
        }
    }
    steiner.sort();
    steiner.dedup();
    apex.sort();
    apex.dedup();
    (steiner, apex)
}

pub(crate) fn manifest_with(kind: BlockKind, sockets: &[FaceSpec], inventory: Inventory) -> Manifest {
    let bbox = kind.bbox();
    let faces = boundary_squares(bbox)
        .into_iter()
        .map(|square| {
            let pattern = sockets.iter().find(|s| s.square == square).map(|s| s.pattern).unwrap_or(FacePattern::Blank);
            FaceSpec { square, pattern }
        })
        .collect();
    Manifest { kind, bbox, faces, inventory, sockets: Vec::new() }
}

pub(crate) fn mesh_block(manifest: Manifest, cells: Vec<Cell>) -> Result<AtomicBlock, MeshError> {
    let (steiner, apex) = face_points(&manifest.faces);
    let b = manifest.bbox;
    let input = MeshInput { cells, steiner, apex, bbox: [b[0].map(qi), b[1].map(qi)] };
    let complex = mesh(&input)?;
    Ok(AtomicBlock { manifest, complex })
}

const BOTTOM: FaceSquare = FaceSquare { axis: 2, level: 0, origin: [0, 0] };
const TOP: FaceSquare = FaceSquare { axis: 2, level: 1, origin: [0, 0] };
const EAST: FaceSquare = FaceSquare { axis: 0, level: 1, origin: [0, 0] };

fn tube_inventory() -> Inventory {
    Inventory { double_boundary: 2, ..Default::default() }
}

fn empty_block() -> Result<AtomicBlock, MeshError> {
    let manifest = manifest_with(BlockKind::Empty, &[], Inventory { empty: true, ..Default::default() });
    let cell = Cell::from_halfspaces(&box_halfspaces([qi(0); 3], [qi(1); 3]), false).expect("cube");
    mesh_block(manifest, vec![cell])
}

/// Tube from the bottom face straight to the top face, lobes along x.
fn straight_cells() -> Vec<Cell> {
    socket_cells(&BOTTOM, LocalAxis::U, &[HalfSpace::ge(2, qi(0)), HalfSpace::le(2, qi(1))])
}

/// Reflection through the plane `x + z = 1`, which swaps the bottom and east faces.
fn miter(p: P3) -> P3 {
    [qi(1) - p[2], p[1], qi(1) - p[0]]
}

/// Tube from the bottom face turning to the east face. With `in_plane` the
/// lobes lie in the plane of the bend (x on the bottom face, z on the east
/// face), otherwise along y on both.
fn corner_cells(in_plane: bool) -> Vec<Cell> {
    let lobes = if in_plane { LocalAxis::U } else { LocalAxis::V };
    let cut = [HalfSpace::ge(2, qi(0)), HalfSpace::new([1, 0, 1], qi(1))];
    let lower = socket_cells(&BOTTOM, lobes, &cut);
    let upper: Vec<Cell> = lower.iter().map(|c| c.map(miter)).collect();
    lower.into_iter().chain(upper).collect()
}

fn flip_z(p: P3) -> P3 {
    [p[0], p[1], qi(1) - p[2]]
}

/// Lobe axes of a corner's bottom and east sockets.
pub fn corner_axes(in_plane: bool) -> (Axis, Axis) {
    if in_plane {
        (Axis::X, Axis::Z)
    } else {
        (Axis::Y, Axis::Y)
    }
}

/// Whether each corner kind has its lobes in the plane of the bend. Chosen so
/// that a run leaving the casing's top sockets matches every block on its way.
pub fn corner_in_plane(kind: BlockKind) -> bool {
    let horizontal = matches!(kind, BlockKind::HorizTopCorner | BlockKind::HorizBottomCorner);
    let top_axis = if kind.is_top() { casing::TOP_LOBES } else { casing::BOTTOM_LOBES };
    // A horizontal corner meets the casing socket; the vertical corner then
    // carries the axis left over by the horizontal one.
    horizontal == (top_axis == Axis::X)
}

fn tube_block(kind: BlockKind) -> Result<AtomicBlock, MeshError> {
    let top = kind.is_top();
    let wrap = |p: FacePattern| match p {
        FacePattern::TopSocket(a) if !top => FacePattern::BottomSocket(a),
        other => other,
    };
    let (cells, sockets) = match kind {
        BlockKind::StraightTop | BlockKind::StraightBottom => (
            straight_cells(),
            vec![
                FaceSpec { square: BOTTOM, pattern: FacePattern::TopSocket(Axis::X) },
                FaceSpec { square: TOP, pattern: FacePattern::TopSocket(Axis::X) },
            ],
        ),
        _ => {
            let in_plane = corner_in_plane(kind);
            let (a, b) = corner_axes(in_plane);
            (
                corner_cells(in_plane),
                vec![
                    FaceSpec { square: BOTTOM, pattern: FacePattern::TopSocket(a) },
                    FaceSpec { square: EAST, pattern: FacePattern::TopSocket(b) },
                ],
            )
        }
    };
    let (cells, sockets): (Vec<Cell>, Vec<FaceSpec>) = if top {
        (cells, sockets)
    } else {
        let flip_sq = |s: FaceSquare| if s.axis == 2 { FaceSquare { level: 1 - s.level, ..s } } else { s };
        (
            cells.iter().map(|c| c.map(flip_z)).collect(),
            sockets.iter().map(|f| FaceSpec { square: flip_sq(f.square), pattern: wrap(f.pattern) }).collect(),
        )
    };
    mesh_block(manifest_with(kind, &sockets, tube_inventory()), cells)
}

/// Generates the block of the given kind from its cell decomposition.
pub fn build_block(kind: BlockKind) -> Result<AtomicBlock, MeshError> {
    match kind {
        BlockKind::Empty => empty_block(),
        BlockKind::Casing => casing::casing_block(),
        _ => tube_block(kind),
    }
}

pub(crate) fn boundary_triangles(c: &ConcreteComplex) -> Vec<Tri> {
    let mut count: HashMap<Tri, u8> = HashMap::new();
    for t in &c.pair.tetrahedra {
        for f in tet_faces(*t) {
            *count.entry(f).or_default() += 1;
        }
    }
    let mut out: Vec<Tri> = count.into_iter().filter(|(_, n)| *n == 1).map(|(t, _)| t).collect();
    out.sort_unstable();
    out
}

fn sort_local(mut t: LTri) -> LTri {
    t.sort();
    t
}

/// Checks one face square against its declared pattern.
fn check_face(block: &AtomicBlock, spec: &FaceSpec, tris: &[Tri], s_edges: &[[u32; 2]]) -> Result<(), BlockError> {
    let kind = block.manifest.kind;
    let sq = spec.square;
    let coords = &block.complex.coords;
    let local = |v: u32| sq.local(coords[v as usize]);
    let mut got = Vec::with_capacity(tris.len());
    for t in tris {
        match (local(t[0]), local(t[1]), local(t[2])) {
            (Some(a), Some(b), Some(c)) => got.push(sort_local([a, b, c])),
            _ => return Err(err(kind, Some(sq), "face vertex off the eighth grid")),
        }
    }
    got.sort();
    let (want, trace) = match spec.pattern {
        FacePattern::Blank => (blank_triangles(), Vec::new()),
        FacePattern::TopSocket(a) | FacePattern::BottomSocket(a) => {
            let la = sq.local_axis(a).ok_or_else(|| err(kind, Some(sq), format!("lobe axis {a:?} is normal to the face")))?;
            (socket_triangles(), socket_trace(la))
        }
    };
    if got != want {
        return Err(err(kind, Some(sq), format!("triangulation does not match {:?}", spec.pattern)));
    }
    let mut got_trace: Vec<[L2; 2]> = s_edges
        .iter()
        .filter_map(|e| {
            let (a, b) = (local(e[0])?, local(e[1])?);
            Some(if a < b { [a, b] } else { [b, a] })
        })
        .collect();
    got_trace.sort();
    if got_trace != trace {
        return Err(err(kind, Some(sq), format!("surface trace does not match {:?}", spec.pattern)));
    }
    Ok(())
}

/// Re-verifies every manifest invariant of a block and returns its surface model.
pub fn validate_block(block: &AtomicBlock) -> Result<SurfaceModel, BlockError> {
    let m = &block.manifest;
    let kind = m.kind;
    if m.bbox != kind.bbox() {
        return Err(err(kind, None, format!("bounding box {:?}, expected {:?}", m.bbox, kind.bbox())));
    }
    let coords = &block.complex.coords;
    if coords.len() != block.complex.pair.num_vertices {
        return Err(err(kind, None, "coordinate count differs from vertex count"));
    }
    let lo = m.bbox[0].map(qi);
    let hi = m.bbox[1].map(qi);
    if coords.iter().any(|p| (0..3).any(|a| p[a] < lo[a] || p[a] > hi[a])) {
        return Err(err(kind, None, "vertex outside the bounding box"));
    }
    let distinct: HashSet<&P3> = coords.iter().collect();
    if distinct.len() != coords.len() {
        return Err(err(kind, None, "repeated vertex coordinates"));
    }
    let mut want_squares = boundary_squares(m.bbox);
    let mut have: Vec<FaceSquare> = m.faces.iter().map(|f| f.square).collect();
    want_squares.sort();
    have.sort();
    if want_squares != have {
        return Err(err(kind, None, "manifest does not list each boundary square once"));
    }
    let mut per_face: Vec<Vec<Tri>> = vec![Vec::new(); m.faces.len()];
    for t in boundary_triangles(&block.complex) {
        let pts = t.map(|v| coords[v as usize]);
        let i = m
            .faces
            .iter()
            .position(|f| pts.iter().all(|p| f.square.contains(*p)))
            .ok_or_else(|| err(kind, None, format!("boundary triangle {t:?} spans several squares")))?;
        per_face[i].push(t);
    }
    let s_edges = &block.complex.pair.s_edges;
    for (spec, tris) in m.faces.iter().zip(&per_face) {
        let on: Vec<[u32; 2]> = s_edges
            .iter()
            .copied()
            .filter(|e| e.iter().all(|v| spec.square.contains(coords[*v as usize])))
            .collect();
        check_face(block, spec, tris, &on)?;
    }
    let model = verify_generic_surface(block.complex.pair.clone())
        .map_err(|e| err(kind, None, format!("not a generic surface: {e}")))?;
    let inv = m.inventory;
    if inv.empty && !block.complex.pair.s_triangles.is_empty() {
        return Err(err(kind, None, "surface must be empty"));
    }
    let got = (model.count(ValueKind::Triple), model.count(ValueKind::DoubleBoundary), model.count(ValueKind::Branch));
    if got != (inv.triple, inv.double_boundary, inv.branch) {
        return Err(err(kind, None, format!("value inventory (triple, double boundary, branch) = {got:?}, declared {inv:?}")));
    }
    if !m.sockets.is_empty() {
        let segs = arc_segments(&model);
        let trace = trace_double_arcs(&model, &segs).map_err(|e| err(kind, None, e.to_string()))?;
        let index: HashMap<P3, u32> = coords.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        for s in &m.sockets {
            let (a, b) = match (index.get(&s.top.center()), index.get(&s.bottom.center())) {
                (Some(a), Some(b)) => (*a, *b),
                _ => return Err(err(kind, Some(s.top), format!("socket {} has no centre vertex", s.index))),
            };
            let joined = trace.arcs.iter().zip(&trace.closed).any(|(p, closed)| {
                !closed && ((p[0] == a && *p.last().unwrap() == b) || (p[0] == b && *p.last().unwrap() == a))
            });
            if !joined {
                return Err(err(kind, Some(s.top), format!("sockets {} are not joined by one arc segment", s.index)));
            }
        }
    }
    Ok(model)
}
