//! Placing atomic blocks and gluing them into a casing-and-tube surface block.

use super::build::boundary_triangles;
use super::*;
use crate::complex::{sorted, Edge, SurfacePair, Tet, Tri};
use crate::dadg::{classify_edges, is_height1, validate_dadg, Dadg, EdgeClass, EndSite};
use std::collections::HashMap;
use thiserror::Error;

/// An axis-aligned rotation: `p' = m p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rotation(pub [[i64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation = Rotation([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    /// `(x, y, z) -> (y, 1 - x, z)` on the unit cube.
    pub const QUARTER_TURN_Z: Rotation = Rotation([[0, 1, 0], [-1, 0, 0], [0, 0, 1]]);

    /// The 24 rotations of the cube, identity first.
    pub fn all() -> Vec<Rotation> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = Vec::with_capacity(24);
        for p in perms {
            for signs in 0..8 {
                let mut m = [[0; 3]; 3];
                for i in 0..3 {
                    m[i][p[i]] = if signs >> i & 1 == 0 { 1 } else { -1 };
                }
                let r = Rotation(m);
                if r.det() == 1 {
                    out.push(r);
                }
            }
        }
        out
    }

    fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn apply(&self, p: P3) -> P3 {
        [0, 1, 2].map(|i| (0..3).fold(qi(0), |acc, j| acc + p[j] * qi(self.0[i][j])))
    }

    pub fn axis(&self, a: Axis) -> Axis {
        Axis::from_index((0..3).find(|&i| self.0[i][a.index()] != 0).expect("permutation"))
    }

    /// Image of the outward direction `(axis, positive)`.
    fn dir(&self, d: Dir) -> Dir {
        let i = (0..3).find(|&i| self.0[i][d.0] != 0).expect("permutation");
        (i, (self.0[i][d.0] > 0) == d.1)
    }
}

/// Outward face direction of a box: `(axis, positive)`.
pub type Dir = (usize, bool);

/// Rotates `block` about the centre of its box and moves the box's lower
/// corner to `offset`. Face lists keep their order.
pub fn place_block(block: &AtomicBlock, rot: Rotation, offset: [i64; 3]) -> AtomicBlock {
    let m = &block.manifest;
    let c: P3 = [0, 1, 2].map(|a| Q::new(m.bbox[0][a] + m.bbox[1][a], 2));
    let corners = [m.bbox[0].map(qi), m.bbox[1].map(qi)].map(|p| rot.apply([0, 1, 2].map(|a| p[a] - c[a])));
    let lo: P3 = [0, 1, 2].map(|a| corners[0][a].min(corners[1][a]));
    let shift: P3 = [0, 1, 2].map(|a| qi(offset[a]) - lo[a]);
    let f = |p: P3| {
        let r = rot.apply([0, 1, 2].map(|a| p[a] - c[a]));
        [0, 1, 2].map(|a| r[a] + shift[a])
    };
    let map_square = |s: FaceSquare| {
        let p = f(s.center());
        let axis = rot.dir((s.axis, true)).0;
        let probe = FaceSquare { axis, level: 0, origin: [0, 0] };
        let [u, v] = probe.other_axes();
        let half = Q::new(1, 2);
        FaceSquare {
            axis,
            level: p[axis].to_integer(),
            origin: [(p[u] - half).to_integer(), (p[v] - half).to_integer()],
        }
    };
    let map_pattern = |p: FacePattern| match p {
        FacePattern::Blank => FacePattern::Blank,
        FacePattern::TopSocket(a) => FacePattern::TopSocket(rot.axis(a)),
        FacePattern::BottomSocket(a) => FacePattern::BottomSocket(rot.axis(a)),
    };
    let hi: P3 = [0, 1, 2].map(|a| corners[0][a].max(corners[1][a]));
    let size: [i64; 3] = [0, 1, 2].map(|a| (hi[a] - lo[a]).to_integer());
    let manifest = Manifest {
        kind: m.kind,
        bbox: [offset, [0, 1, 2].map(|a| offset[a] + size[a])],
        faces: m.faces.iter().map(|fs| FaceSpec { square: map_square(fs.square), pattern: map_pattern(fs.pattern) }).collect(),
        inventory: m.inventory,
        sockets: m
            .sockets
            .iter()
            .map(|s| CasingSocket { index: s.index, top: map_square(s.top), bottom: map_square(s.bottom) })
            .collect(),
    };
    let coords = block.complex.coords.iter().map(|p| f(*p)).collect();
    AtomicBlock { manifest, complex: ConcreteComplex { coords, pair: block.complex.pair.clone() } }
}

/// Boundary triangles and surface trace edges of one face square, in the
/// block's own vertex numbering.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceData {
    pub tris: Vec<Tri>,
    pub s_edges: Vec<Edge>,
}

/// Face data aligned with `block.manifest.faces`.
pub fn block_faces(block: &AtomicBlock) -> Vec<FaceData> {
    let coords = &block.complex.coords;
    let faces = &block.manifest.faces;
    let mut out = vec![FaceData::default(); faces.len()];
    let find = |pts: &[P3]| faces.iter().position(|f| pts.iter().all(|p| f.square.contains(*p)));
    for t in boundary_triangles(&block.complex) {
        if let Some(i) = find(&t.map(|v| coords[v as usize])) {
            out[i].tris.push(t);
        }
    }
    for e in &block.complex.pair.s_edges {
        if let Some(i) = find(&e.map(|v| coords[v as usize])) {
            out[i].s_edges.push(*e);
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("face {square:?}: triangulations differ")]
    Triangulation { square: FaceSquare },
    #[error("face {square:?}: surface traces differ")]
    Trace { square: FaceSquare },
}

/// The complex under construction. Vertices are identified by exact
/// coordinates; each face square is matched against the square already
/// present there, if any.
#[derive(Debug, Default)]
pub struct Gluer {
    coords: Vec<P3>,
    index: HashMap<P3, u32>,
    tets: Vec<Tet>,
    s_tris: Vec<Tri>,
    open: HashMap<FaceSquare, FaceData>,
}

impl Gluer {
    pub fn new() -> Gluer {
        Gluer::default()
    }

    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    /// Glues a placed block whose face data (in its own numbering) is `faces`.
    pub fn glue(&mut self, block: &AtomicBlock, faces: &[FaceData]) -> Result<(), GlueError> {
        let ids: Vec<u32> = block
            .complex
            .coords
            .iter()
            .map(|p| {
                *self.index.entry(*p).or_insert_with(|| {
                    self.coords.push(*p);
                    (self.coords.len() - 1) as u32
                })
            })
            .collect();
        let map = |v: u32| ids[v as usize];
        for (spec, data) in block.manifest.faces.iter().zip(faces) {
            let mut tris: Vec<Tri> = data.tris.iter().map(|t| sorted(t.map(map))).collect();
            tris.sort_unstable();
            let mut s_edges: Vec<Edge> = data.s_edges.iter().map(|e| sorted(e.map(map))).collect();
            s_edges.sort_unstable();
            let here = FaceData { tris, s_edges };
            match self.open.remove(&spec.square) {
                None => {
                    self.open.insert(spec.square, here);
                }
                Some(there) => {
                    if there.tris != here.tris {
                        return Err(GlueError::Triangulation { square: spec.square });
                    }
                    if there.s_edges != here.s_edges {
                        return Err(GlueError::Trace { square: spec.square });
                    }
                }
            }
        }
        self.tets.extend(block.complex.pair.tetrahedra.iter().map(|t| sorted(t.map(map))));
        self.s_tris.extend(block.complex.pair.s_triangles.iter().map(|t| sorted(t.map(map))));
        Ok(())
    }

    /// Face squares not shared by two blocks, with their surface traces.
    pub fn open_faces(&self) -> impl Iterator<Item = (&FaceSquare, &FaceData)> {
        self.open.iter()
    }

    pub fn finish(self) -> ConcreteComplex {
        let pair = SurfacePair::from_top_simplices(self.coords.len(), self.tets, self.s_tris);
        ConcreteComplex { coords: self.coords, pair }
    }
}

/// Glues `new` (already placed) into `current`.
pub fn glue_block(current: &mut Gluer, new: &AtomicBlock) -> Result<(), GlueError> {
    let faces = block_faces(new);
    current.glue(new, &faces)
}

/// The eight atomic blocks with their face data.
#[derive(Clone, Debug)]
pub struct BlockSet {
    blocks: Vec<AtomicBlock>,
    faces: Vec<Vec<FaceData>>,
}

impl BlockSet {
    /// `blocks` in any order; each kind exactly once.
    pub fn new(mut blocks: Vec<AtomicBlock>) -> Option<BlockSet> {
        blocks.sort_by_key(|b| b.manifest.kind as usize);
        if blocks.iter().map(|b| b.manifest.kind).collect::<Vec<_>>() != BlockKind::ALL {
            return None;
        }
        let faces = blocks.iter().map(block_faces).collect();
        Some(BlockSet { blocks, faces })
    }

    pub fn get(&self, kind: BlockKind) -> &AtomicBlock {
        &self.blocks[kind as usize]
    }

    pub fn blocks(&self) -> &[AtomicBlock] {
        &self.blocks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub kind: BlockKind,
    pub rotation: Rotation,
    pub offset: [i64; 3],
}

#[derive(Clone, Debug)]
pub struct SurfaceBlock {
    pub complex: ConcreteComplex,
    pub bbox: [[i64; 3]; 2],
    pub placements: Vec<Placement>,
    /// Per DADG edge, the placements (indices into `placements`) of its tube.
    pub tubes: Vec<Vec<usize>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssembleError {
    #[error("invalid DADG: {0}")]
    Invalid(String),
    #[error("DADG has branch, boundary or circle components")]
    NotClosed,
    #[error("DADG is not height 1")]
    NotHeight1,
    #[error("no rotation of the {0:?} block fits its slot")]
    NoOrientation(BlockKind),
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error("surface meets the outer boundary at {0:?}")]
    Exposed(FaceSquare),
}

/// Finds the first rotation taking the sockets of `block` to the directions
/// in `want`, with the given lobe axes where specified. Returns the rotation
/// and the lobe axis at each wanted direction.
fn orient(block: &AtomicBlock, want: &[(Dir, Option<Axis>)]) -> Option<(Rotation, Vec<Axis>)> {
    let sockets: Vec<(Dir, Axis)> = block
        .manifest
        .faces
        .iter()
        .filter_map(|f| Some(((f.square.axis, f.square.level > 0), f.pattern.lobe_axis()?)))
        .collect();
    Rotation::all().into_iter().find_map(|r| {
        let moved: Vec<(Dir, Axis)> = sockets.iter().map(|&(d, a)| (r.dir(d), r.axis(a))).collect();
        if moved.len() != want.len() {
            return None;
        }
        let axes: Option<Vec<Axis>> = want
            .iter()
            .map(|&(d, a)| {
                let &(_, got) = moved.iter().find(|(md, _)| *md == d)?;
                (a.is_none() || a == Some(got)).then_some(got)
            })
            .collect();
        axes.map(|ax| (r, ax))
    })
}

/// Rotations of the tube blocks on one side of the casings.
struct SideKit {
    straight: BlockKind,
    h: BlockKind,
    v: BlockKind,
    up: Rotation,
    h1: Rotation,
    v1: Rotation,
    along: Rotation,
    v2: Rotation,
    h2: Rotation,
}

fn side_kit(set: &BlockSet, top: bool) -> Result<SideKit, AssembleError> {
    let (straight, h, v, sock) = if top {
        (BlockKind::StraightTop, BlockKind::HorizTopCorner, BlockKind::VertTopCorner, casing::TOP_LOBES)
    } else {
        (BlockKind::StraightBottom, BlockKind::HorizBottomCorner, BlockKind::VertBottomCorner, casing::BOTTOM_LOBES)
    };
    let toward: Dir = (2, !top);
    let away: Dir = (2, top);
    let fit = |kind: BlockKind, want: &[(Dir, Option<Axis>)]| {
        orient(set.get(kind), want).ok_or(AssembleError::NoOrientation(kind))
    };
    let (up, _) = fit(straight, &[(toward, Some(sock)), (away, Some(sock))])?;
    let (h1, a) = fit(h, &[(toward, Some(sock)), ((0, true), None)])?;
    let (v1, a) = fit(v, &[((0, false), Some(a[1])), ((1, true), None)])?;
    let along_axis = a[1];
    let (along, _) = fit(straight, &[((1, false), Some(along_axis)), ((1, true), Some(along_axis))])?;
    let (v2, a) = fit(v, &[((1, false), Some(along_axis)), ((0, false), None)])?;
    let (h2, _) = fit(h, &[((0, true), Some(a[1])), (toward, Some(sock))])?;
    Ok(SideKit { straight, h, v, up, h1, v1, along, v2, h2 })
}

/// Checks that the tube blocks fit every slot of the tube runs on both sides.
pub fn check_orientations(set: &BlockSet) -> Result<(), AssembleError> {
    side_kit(set, true)?;
    side_kit(set, false)?;
    Ok(())
}

/// Checks the preconditions of `assemble`.
pub fn check_assemble_input(d: &Dadg) -> Result<(), AssembleError> {
    let report = validate_dadg(d);
    if !report.ok() {
        return Err(AssembleError::Invalid(report.to_string()));
    }
    if d.b != 0 || d.d != 0 || d.c != 0 {
        return Err(AssembleError::NotClosed);
    }
    if !is_height1(d) {
        return Err(AssembleError::NotHeight1);
    }
    Ok(())
}

/// Bounding box of the surface block for `t` triple values.
pub fn assembled_bbox(t: usize) -> [[i64; 3]; 2] {
    let t = t as i64;
    [[0, 0, -(3 * t) / 2], [2, 3 * t, 1 + (3 * t) / 2]]
}

/// Places the casings side by side along y and connects their sockets by
/// tube runs, one level per edge: preferred edges above, non-preferred edges
/// below.
pub fn assemble(d: &Dadg, set: &BlockSet) -> Result<SurfaceBlock, AssembleError> {
    check_assemble_input(d)?;
    let t = d.t;
    let n = 3 * t;
    let sites = d.end_sites();
    let classes = classify_edges(d);
    let socket = |site: EndSite| match site {
        EndSite::Triple { k, l, .. } => 3 * k + l,
        _ => unreachable!("closed DADG"),
    };
    let mut runs: [Vec<(usize, usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (r, class) in classes.iter().enumerate() {
        let (a, b) = (socket(sites[2 * r]), socket(sites[2 * r + 1]));
        let side = match class {
            EdgeClass::Preferred => 0,
            EdgeClass::NonPreferred => 1,
            _ => return Err(AssembleError::NotHeight1),
        };
        runs[side].push((r, a.min(b), a.max(b)));
    }

    let mut gluer = Gluer::new();
    let mut placements = Vec::with_capacity(t + 18 * t * t);
    let mut tubes = vec![Vec::new(); classes.len()];
    let mut put = |kind: BlockKind, rotation: Rotation, offset: [i64; 3], g: &mut Gluer| -> Result<usize, AssembleError> {
        let placed = place_block(set.get(kind), rotation, offset);
        g.glue(&placed, &set.faces[kind as usize])?;
        placements.push(Placement { kind, rotation, offset });
        Ok(placements.len() - 1)
    };

    for k in 0..t {
        put(BlockKind::Casing, Rotation::IDENTITY, [0, 3 * k as i64, 0], &mut gluer)?;
    }
    for (side, runs) in runs.iter().enumerate() {
        let top = side == 0;
        let kit = side_kit(set, top)?;
        let mut owner = vec![usize::MAX; n];
        for &(r, i1, i2) in runs {
            owner[i1] = r;
            owner[i2] = r;
        }
        let mut active = vec![true; n];
        for (b, &(r, i1, i2)) in runs.iter().enumerate() {
            let z = if top { 1 + b as i64 } else { -1 - b as i64 };
            for i in 0..n {
                let y = i as i64;
                let (kind, rot, own) = if i == i1 {
                    (kit.h, kit.h1, Some(r))
                } else if i == i2 {
                    (kit.h, kit.h2, Some(r))
                } else if active[i] {
                    (kit.straight, kit.up, Some(owner[i]))
                } else {
                    (BlockKind::Empty, Rotation::IDENTITY, None)
                };
                let p = put(kind, rot, [0, y, z], &mut gluer)?;
                if let Some(o) = own {
                    tubes[o].push(p);
                }
                let (kind, rot, own) = if i == i1 {
                    (kit.v, kit.v1, Some(r))
                } else if i == i2 {
                    (kit.v, kit.v2, Some(r))
                } else if i1 < i && i < i2 {
                    (kit.straight, kit.along, Some(r))
                } else {
                    (BlockKind::Empty, Rotation::IDENTITY, None)
                };
                let p = put(kind, rot, [1, y, z], &mut gluer)?;
                if let Some(o) = own {
                    tubes[o].push(p);
                }
            }
            active[i1] = false;
            active[i2] = false;
        }
    }
    if let Some((sq, _)) = gluer.open_faces().filter(|(_, f)| !f.s_edges.is_empty()).min_by_key(|(sq, _)| **sq) {
        return Err(AssembleError::Exposed(*sq));
    }
    Ok(SurfaceBlock { complex: gluer.finish(), bbox: assembled_bbox(t), placements, tubes })
}

/// Drops the coordinates.
pub fn abstractize(sb: &SurfaceBlock) -> SurfacePair {
    sb.complex.pair.clone()
}
