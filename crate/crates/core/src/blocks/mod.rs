//! Atomic surface blocks and the casing-and-tube assembly.
//!
//! Every block is a triangulated box with rational coordinates whose boundary
//! is a lattice of unit squares. Each square is blank or carries a socket, the
//! figure-eight trace of a tube. Blocks glue along squares with identical
//! patterns.

pub mod assemble;
pub mod build;
pub mod casing;
pub mod fixtures;
pub mod pattern;

use crate::geom::{qi, P3, Q};
use crate::mesh::ConcreteComplex;
use pattern::LocalAxis;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum BlockKind {
    Empty,
    StraightTop,
    HorizTopCorner,
    VertTopCorner,
    StraightBottom,
    HorizBottomCorner,
    VertBottomCorner,
    Casing,
}

impl BlockKind {
    pub const ALL: [BlockKind; 8] = [
        BlockKind::Empty,
        BlockKind::StraightTop,
        BlockKind::HorizTopCorner,
        BlockKind::VertTopCorner,
        BlockKind::StraightBottom,
        BlockKind::HorizBottomCorner,
        BlockKind::VertBottomCorner,
        BlockKind::Casing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Empty => "empty",
            BlockKind::StraightTop => "straight_top",
            BlockKind::HorizTopCorner => "horiz_top_corner",
            BlockKind::VertTopCorner => "vert_top_corner",
            BlockKind::StraightBottom => "straight_bottom",
            BlockKind::HorizBottomCorner => "horiz_bottom_corner",
            BlockKind::VertBottomCorner => "vert_bottom_corner",
            BlockKind::Casing => "casing",
        }
    }

    pub fn is_top(self) -> bool {
        matches!(self, BlockKind::StraightTop | BlockKind::HorizTopCorner | BlockKind::VertTopCorner)
    }

    pub fn is_bottom(self) -> bool {
        matches!(self, BlockKind::StraightBottom | BlockKind::HorizBottomCorner | BlockKind::VertBottomCorner)
    }

    pub fn bbox(self) -> [[i64; 3]; 2] {
        match self {
            BlockKind::Casing => [[0, 0, 0], [2, 3, 1]],
            _ => [[0, 0, 0], [1, 1, 1]],
        }
    }
}

/// Coordinate axis in space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        [Axis::X, Axis::Y, Axis::Z][i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FacePattern {
    Blank,
    /// Socket of a tube above the casings; the axis is the lobe axis.
    TopSocket(Axis),
    /// Socket of a tube below the casings.
    BottomSocket(Axis),
}

impl FacePattern {
    pub fn lobe_axis(self) -> Option<Axis> {
        match self {
            FacePattern::Blank => None,
            FacePattern::TopSocket(a) | FacePattern::BottomSocket(a) => Some(a),
        }
    }
}

/// A unit square `{p[axis] = level, u0 <= p[u] <= u0 + 1, v0 <= p[v] <= v0 + 1}`
/// where `u < v` are the other two axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct FaceSquare {
    pub axis: usize,
    pub level: i64,
    pub origin: [i64; 2],
}

impl FaceSquare {
    pub fn other_axes(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    /// Global point of the face-local point `l` (in eighths).
    pub fn point(&self, l: [i64; 2]) -> P3 {
        let [u, v] = self.other_axes();
        let mut p = [qi(0); 3];
        p[self.axis] = qi(self.level);
        p[u] = qi(self.origin[0]) + Q::new(l[0], 8);
        p[v] = qi(self.origin[1]) + Q::new(l[1], 8);
        p
    }

    /// Face-local coordinates (in eighths) of a global point, if it lies on
    /// the square at an eighth-grid position.
    pub fn local(&self, p: P3) -> Option<[i64; 2]> {
        if p[self.axis] != qi(self.level) {
            return None;
        }
        let [u, v] = self.other_axes();
        let mut out = [0; 2];
        for (k, a) in [u, v].into_iter().enumerate() {
            let t = (p[a] - qi(self.origin[k])) * qi(8);
            if !t.is_integer() || t < qi(0) || t > qi(8) {
                return None;
            }
            out[k] = t.to_integer();
        }
        Some(out)
    }

    pub fn contains(&self, p: P3) -> bool {
        if p[self.axis] != qi(self.level) {
            return false;
        }
        let [u, v] = self.other_axes();
        [u, v].iter().enumerate().all(|(k, &a)| qi(self.origin[k]) <= p[a] && p[a] <= qi(self.origin[k] + 1))
    }

    pub fn local_axis(&self, a: Axis) -> Option<LocalAxis> {
        let [u, v] = self.other_axes();
        if a.index() == u {
            Some(LocalAxis::U)
        } else if a.index() == v {
            Some(LocalAxis::V)
        } else {
            None
        }
    }

    pub fn global_axis(&self, a: LocalAxis) -> Axis {
        let [u, v] = self.other_axes();
        Axis::from_index(match a {
            LocalAxis::U => u,
            LocalAxis::V => v,
        })
    }

    pub fn center(&self) -> P3 {
        self.point([4, 4])
    }
}

/// All unit squares on the boundary of an integer box.
pub fn boundary_squares(bbox: [[i64; 3]; 2]) -> Vec<FaceSquare> {
    let mut out = Vec::new();
    for axis in 0..3 {
        let probe = FaceSquare { axis, level: 0, origin: [0, 0] };
        let [u, v] = probe.other_axes();
        for level in [bbox[0][axis], bbox[1][axis]] {
            for i in bbox[0][u]..bbox[1][u] {
                for j in bbox[0][v]..bbox[1][v] {
                    out.push(FaceSquare { axis, level, origin: [i, j] });
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceSpec {
    pub square: FaceSquare,
    pub pattern: FacePattern,
}

/// Expected number of special values of the block's surface.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inventory {
    pub triple: usize,
    pub double_boundary: usize,
    pub branch: usize,
    /// True when the surface must be empty.
    pub empty: bool,
}

/// The `index`-th top and bottom socket of a casing (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CasingSocket {
    pub index: u8,
    pub top: FaceSquare,
    pub bottom: FaceSquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: BlockKind,
    pub bbox: [[i64; 3]; 2],
    pub faces: Vec<FaceSpec>,
    pub inventory: Inventory,
    #[serde(default)]
    pub sockets: Vec<CasingSocket>,
}

impl Manifest {
    pub fn pattern(&self, sq: &FaceSquare) -> Option<FacePattern> {
        self.faces.iter().find(|f| f.square == *sq).map(|f| f.pattern)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicBlock {
    pub manifest: Manifest,
    pub complex: ConcreteComplex,
}

pub use build::{build_block, validate_block, BlockError};
