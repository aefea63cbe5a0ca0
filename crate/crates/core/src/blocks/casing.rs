//! The casing block around one triple value.
//!
//! The box `[0,2] x [0,3] x [0,1]` is split into a core box and six shell
//! frusta. The core is voxelized on a lattice of square prisms turned by 45
//! degrees about z, so that lattice edges run diagonally in the xy-plane and
//! each vertical lattice edge through a socket centre is surrounded by the
//! socket's four lobes. Three tubes start at a checkerboard triple value in
//! the core and run along lattice edges to the six sockets.

use super::build::{box_halfspaces, manifest_with, mesh_block, socket_cells};
use super::pattern::LocalAxis;
use super::*;
use crate::geom::{q, HalfSpace};
use crate::mesh::{Cell, MeshError};
use std::collections::BTreeSet;

/// Lobe axis of the casing's top sockets.
pub const TOP_LOBES: Axis = Axis::Y;
/// Lobe axis of the casing's bottom sockets.
pub const BOTTOM_LOBES: Axis = Axis::X;

/// Lattice vertex or cell index `(a, b, z)`. The vertex sits at
/// `x = (a + b) / 8`, `y = (a - b) / 8`, `z = z / 32`; cell `(a, b, z)` spans
/// `2a <= 8(x + y) <= 2a + 2`, `2b <= 8(x - y) <= 2b + 2`, `z <= 32 z <= z + 1`.
type V3 = [i64; 3];

/// Core box in lattice units: `x, y` in eighths, `z` in 32nds.
const CORE_X: [i64; 2] = [2, 14];
const CORE_Y: [i64; 2] = [2, 22];
const CORE_Z: [i64; 2] = [8, 24];

const TV: V3 = [10, -2, 15];
/// Parity of the filled octants around the triple value.
const TV_PARITY: i64 = 1;

/// Socket column for socket `l` (1-based): the vertical lattice edge through
/// the centre of the square `[0,1] x [l-1,l]`.
fn socket_column(l: i64) -> [i64; 2] {
    [4 * l, 4 - 4 * l]
}

#[derive(Clone, Copy, Debug)]
struct Step {
    axis: usize,
    sign: i64,
    count: i64,
}

const fn st(axis: usize, sign: i64, count: i64) -> Step {
    Step { axis, sign, count }
}

const A: usize = 0;
const B: usize = 1;
const Z: usize = 2;

/// One tube from the triple value to a socket: the steps, the socket index
/// and whether it ends on the top face. The last step is vertical and is
/// extended to the core boundary.
struct Route {
    steps: Vec<Step>,
    socket: i64,
    top: bool,
}

fn routes() -> Vec<Route> {
    vec![
        // Along a.
        Route { steps: vec![st(A, -1, 3), st(B, 1, 2), st(A, -1, 3), st(Z, 1, 0)], socket: 1, top: true },
        Route {
            steps: vec![st(A, 1, 3), st(Z, -1, 3), st(B, 1, 2), st(Z, -1, 3), st(A, -1, 9), st(Z, -1, 0)],
            socket: 1,
            top: false,
        },
        // Along z.
        Route { steps: vec![st(Z, 1, 3), st(A, -1, 2), st(B, -1, 2), st(Z, 1, 0)], socket: 2, top: true },
        Route { steps: vec![st(Z, -1, 3), st(A, -1, 2), st(B, -1, 2), st(Z, -1, 0)], socket: 2, top: false },
        // Along b.
        Route { steps: vec![st(B, -1, 3), st(A, 1, 2), st(B, -1, 3), st(Z, -1, 0)], socket: 3, top: false },
        Route {
            steps: vec![st(B, 1, 3), st(Z, 1, 3), st(A, 1, 2), st(Z, 1, 3), st(B, -1, 9), st(Z, 1, 0)],
            socket: 3,
            top: true,
        },
    ]
}

/// Octant sign vector of cell `c` relative to vertex `v`.
fn octant(v: V3, c: V3) -> V3 {
    [0, 1, 2].map(|k| if c[k] == v[k] { 1 } else { -1 })
}

fn octant_cell(v: V3, s: V3) -> V3 {
    [0, 1, 2].map(|k| if s[k] > 0 { v[k] } else { v[k] - 1 })
}

fn unit(axis: usize, sign: i64) -> V3 {
    let mut d = [0; 3];
    d[axis] = sign;
    d
}

/// Filled cells of one route and the pair of cells around its final edge.
fn trace_route(r: &Route, filled: &mut BTreeSet<V3>) -> [V3; 2] {
    let mut v = TV;
    let first = r.steps[0];
    let mut pair: Vec<V3> = Vec::new();
    for s in [-1i64, 1].into_iter().flat_map(|a| [-1i64, 1].map(move |b| (a, b))) {
        let mut sig = [0; 3];
        let others: Vec<usize> = (0..3).filter(|&k| k != first.axis).collect();
        sig[first.axis] = first.sign;
        sig[others[0]] = s.0;
        sig[others[1]] = s.1;
        if sig[0] * sig[1] * sig[2] == TV_PARITY {
            pair.push(octant_cell(v, sig));
        }
    }
    let mut pair: [V3; 2] = [pair[0], pair[1]];
    let mut dir = (first.axis, first.sign);
    for (i, step) in r.steps.iter().enumerate() {
        let count = if i + 1 == r.steps.len() {
            let end = if step.sign > 0 { CORE_Z[1] } else { CORE_Z[0] };
            (end - v[Z]) * step.sign
        } else {
            step.count
        };
        if i > 0 {
            if step.axis == dir.0 {
                assert_eq!(step.sign, dir.1, "route reverses");
            } else {
                pair = bend(v, pair, dir, (step.axis, step.sign), filled);
            }
        }
        dir = (step.axis, step.sign);
        let d = unit(step.axis, step.sign);
        for _ in 0..count {
            filled.extend(pair);
            v = [0, 1, 2].map(|k| v[k] + d[k]);
            pair = pair.map(|c| [0, 1, 2].map(|k| c[k] + d[k]));
        }
    }
    let d = unit(dir.0, dir.1);
    pair.map(|c| [0, 1, 2].map(|k| c[k] - d[k]))
}

/// Turns the tube at `v` from direction `din` to `dout`: keeps the incoming
/// cell on the outgoing side, adds the cell diagonal to it across the bend
/// plane and one filler cell. Returns the outgoing pair.
fn bend(v: V3, pair: [V3; 2], din: (usize, i64), dout: (usize, i64), filled: &mut BTreeSet<V3>) -> [V3; 2] {
    let w = 3 - din.0 - dout.0;
    // The pair has been advanced past `v`; shift it back to the incoming edge.
    let back = unit(din.0, din.1);
    let at_v = pair.map(|c| [0, 1, 2].map(|k| c[k] - back[k]));
    let keep = at_v.into_iter().find(|&c| octant(v, c)[dout.0] == dout.1).expect("pair straddles the bend axis");
    let b1 = octant(v, keep)[w];
    let mk = |o: i64, ww: i64, i: i64| {
        let mut s = [0; 3];
        s[dout.0] = o * dout.1;
        s[w] = ww;
        s[din.0] = i * din.1;
        octant_cell(v, s)
    };
    let across = mk(1, -b1, 1);
    let filler = mk(-1, -b1, 1);
    filled.insert(filler);
    [keep, across]
}

fn core_cell(a: i64, b: i64, z0: i64, z1: i64, solid: bool) -> Option<Cell> {
    let mut hs = vec![
        HalfSpace::new([1, 1, 0], q(2 * a + 2, 8)),
        HalfSpace::new([-1, -1, 0], q(-2 * a, 8)),
        HalfSpace::new([1, -1, 0], q(2 * b + 2, 8)),
        HalfSpace::new([-1, 1, 0], q(-2 * b, 8)),
    ];
    hs.extend(box_halfspaces(
        [q(CORE_X[0], 8), q(CORE_Y[0], 8), q(z0, 32)],
        [q(CORE_X[1], 8), q(CORE_Y[1], 8), q(z1, 32)],
    ));
    Cell::from_halfspaces(&hs, solid)
}

fn core_cells(filled: &BTreeSet<V3>) -> Vec<Cell> {
    let mut out = Vec::new();
    for a in 0..=18 {
        for b in -12..=6 {
            if core_cell(a, b, CORE_Z[0], CORE_Z[1], false).is_none() {
                continue;
            }
            let mut z = CORE_Z[0];
            while z < CORE_Z[1] {
                if filled.contains(&[a, b, z]) {
                    out.extend(core_cell(a, b, z, z + 1, true));
                    z += 1;
                    continue;
                }
                let start = z;
                while z < CORE_Z[1] && !filled.contains(&[a, b, z]) {
                    z += 1;
                }
                out.extend(core_cell(a, b, start, z, false));
            }
        }
    }
    out
}

fn top_square(l: i64) -> FaceSquare {
    FaceSquare { axis: 2, level: 1, origin: [0, l - 1] }
}

fn bottom_square(l: i64) -> FaceSquare {
    FaceSquare { axis: 2, level: 0, origin: [0, l - 1] }
}

/// Cuts a shell frustum into the given convex pieces.
fn pieces(frustum: &[HalfSpace], cuts: &[Vec<HalfSpace>]) -> Vec<Cell> {
    cuts.iter()
        .filter_map(|c| {
            let mut hs = frustum.to_vec();
            hs.extend_from_slice(c);
            Cell::from_halfspaces(&hs, false)
        })
        .collect()
}

fn slabs(axis: usize, cuts: &[i64]) -> Vec<Vec<HalfSpace>> {
    let mut out = Vec::new();
    let mut lo: Option<i64> = None;
    for &c in cuts.iter().chain(std::iter::once(&i64::MAX)) {
        let mut hs = Vec::new();
        if let Some(l) = lo {
            hs.push(HalfSpace::ge(axis, qi(l)));
        }
        if c != i64::MAX {
            hs.push(HalfSpace::le(axis, qi(c)));
        }
        out.push(hs);
        lo = Some(c);
    }
    out
}

fn shell_cells(lobes: &[(FaceSquare, Axis)]) -> Vec<Cell> {
    let h = |n: [i64; 3], d: Q| HalfSpace::new(n, d);
    let f = |n: i64, d: i64| q(n, d);
    let top = vec![
        HalfSpace::ge(2, f(3, 4)),
        HalfSpace::le(2, qi(1)),
        h([-1, 0, -1], qi(-1)),
        h([1, 0, -1], qi(1)),
        h([0, -1, -1], qi(-1)),
        h([0, 1, -1], qi(2)),
    ];
    let bottom = vec![
        HalfSpace::ge(2, qi(0)),
        HalfSpace::le(2, f(1, 4)),
        h([-1, 0, 1], qi(0)),
        h([1, 0, 1], qi(2)),
        h([0, -1, 1], qi(0)),
        h([0, 1, 1], qi(3)),
    ];
    let west = vec![
        HalfSpace::ge(0, qi(0)),
        HalfSpace::le(0, f(1, 4)),
        h([1, 0, -1], qi(0)),
        h([1, 0, 1], qi(1)),
        h([1, -1, 0], qi(0)),
        h([1, 1, 0], qi(3)),
    ];
    let east = vec![
        HalfSpace::ge(0, f(7, 4)),
        HalfSpace::le(0, qi(2)),
        h([-1, 0, -1], qi(-2)),
        h([-1, 0, 1], qi(-1)),
        h([-1, -1, 0], qi(-2)),
        h([-1, 1, 0], qi(1)),
    ];
    let south = vec![
        HalfSpace::ge(1, qi(0)),
        HalfSpace::le(1, f(1, 4)),
        h([-1, 1, 0], qi(0)),
        h([1, 1, 0], qi(2)),
        h([0, 1, -1], qi(0)),
        h([0, 1, 1], qi(1)),
    ];
    let north = vec![
        HalfSpace::ge(1, f(11, 4)),
        HalfSpace::le(1, qi(3)),
        h([-1, -1, 0], qi(-3)),
        h([1, -1, 0], qi(-1)),
        h([0, -1, -1], qi(-3)),
        h([0, -1, 1], qi(-2)),
    ];
    let mut out = Vec::new();
    for (frustum, level) in [(&top, 1), (&bottom, 0)] {
        for &(sq, axis) in lobes.iter().filter(|(sq, _)| sq.level == level) {
            out.extend(socket_cells(&sq, sq.local_axis(axis).unwrap_or(LocalAxis::U), frustum));
        }
        let mut rest = slabs(1, &[1, 2]);
        for r in &mut rest {
            r.push(HalfSpace::ge(0, qi(1)));
        }
        out.extend(pieces(frustum, &rest));
    }
    out.extend(pieces(&west, &slabs(1, &[1, 2])));
    out.extend(pieces(&east, &slabs(1, &[1, 2])));
    out.extend(pieces(&south, &slabs(0, &[1])));
    out.extend(pieces(&north, &slabs(0, &[1])));
    out
}

/// Lobe axis of a socket reached by a tube whose last cells are `pair`
/// around the vertical edge through `column`.
fn lobe_axis(column: [i64; 2], pair: [V3; 2]) -> Axis {
    let s = octant([column[0], column[1], 0], [pair[0][0], pair[0][1], 0]);
    if s[0] == s[1] {
        Axis::X
    } else {
        Axis::Y
    }
}

/// The route plan: filled core cells and the lobe axis at each socket end.
fn plan() -> (BTreeSet<V3>, Vec<(FaceSquare, Axis)>) {
    let mut filled = BTreeSet::new();
    let mut ends = Vec::new();
    for r in routes() {
        let pair = trace_route(&r, &mut filled);
        let col = socket_column(r.socket);
        for c in pair {
            assert!(c[0] - col[0] >= -1 && c[0] - col[0] <= 0 && c[1] - col[1] >= -1 && c[1] - col[1] <= 0);
        }
        let sq = if r.top { top_square(r.socket) } else { bottom_square(r.socket) };
        ends.push((sq, lobe_axis(col, pair)));
    }
    (filled, ends)
}

/// Lobe axes the route plan produces at the top and bottom sockets.
pub fn planned_axes() -> Vec<(FaceSquare, Axis)> {
    plan().1
}

pub fn casing_block() -> Result<AtomicBlock, MeshError> {
    let (filled, ends) = plan();
    let faces: Vec<FaceSpec> = ends
        .iter()
        .map(|&(square, a)| FaceSpec {
            square,
            pattern: if square.level == 1 { FacePattern::TopSocket(a) } else { FacePattern::BottomSocket(a) },
        })
        .collect();
    let mut manifest =
        manifest_with(BlockKind::Casing, &faces, Inventory { triple: 1, double_boundary: 6, ..Default::default() });
    manifest.sockets =
        (1..=3).map(|l| CasingSocket { index: l as u8, top: top_square(l), bottom: bottom_square(l) }).collect();
    let mut cells = shell_cells(&ends);
    cells.extend(core_cells(&filled));
    mesh_block(manifest, cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn socket_axes_match_constants() {
        for (sq, a) in planned_axes() {
            let want = if sq.level == 1 { TOP_LOBES } else { BOTTOM_LOBES };
            assert_eq!(a, want, "{sq:?}");
        }
    }

    #[test]
    fn casing_validates() {
        let t = std::time::Instant::now();
        let b = casing_block().expect("meshes");
        eprintln!("meshed in {:?}: {} vertices, {} tets", t.elapsed(), b.complex.coords.len(), b.complex.pair.tetrahedra.len());
        let m = validate_block(&b).unwrap_or_else(|e| panic!("{e}"));
        assert_eq!(m.tv.len(), 1);
    }
}
