//! Canonical face triangulations and their surface traces.
//!
//! Face-local coordinates are integers in eighths of a unit on the unit
//! square `[0, 8]^2`. The socket trace is a figure-eight: two small diamonds
//! touching at the centre, whose common axis is the lobe axis.

use serde::{Deserialize, Serialize};

pub type L2 = [i64; 2];
pub type LTri = [L2; 3];

/// Which local axis the two lobes of a socket lie along.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum LocalAxis {
    U,
    V,
}

const CENTER: L2 = [4, 4];

/// Quarter turn about the centre of the square.
fn turn(p: L2) -> L2 {
    [8 - p[1], p[0]]
}

fn turn_tri(t: LTri, k: usize) -> LTri {
    t.map(|mut p| {
        for _ in 0..k {
            p = turn(p);
        }
        p
    })
}

fn norm_tri(mut t: LTri) -> LTri {
    t.sort();
    t
}

/// The eight-triangle blank face: a fan from the centre.
pub fn blank_triangles() -> Vec<LTri> {
    let ring = [[0, 0], [4, 0], [8, 0], [8, 4], [8, 8], [4, 8], [0, 8], [0, 4]];
    let mut out: Vec<LTri> = (0..8).map(|i| norm_tri([CENTER, ring[i], ring[(i + 1) % 8]])).collect();
    out.sort();
    out
}

/// The two triangles of the east lobe.
fn east_lobe() -> [LTri; 2] {
    [[CENTER, [5, 3], [6, 4]], [CENTER, [6, 4], [5, 5]]]
}

/// The 24-triangle socket face.
pub fn socket_triangles() -> Vec<LTri> {
    let corner: [LTri; 4] =
        [[[4, 0], [8, 0], [5, 3]], [[4, 0], [5, 3], [4, 2]], [[8, 0], [8, 4], [5, 3]], [[8, 4], [6, 4], [5, 3]]];
    let mut out = Vec::with_capacity(24);
    for k in 0..4 {
        for t in east_lobe().iter().chain(corner.iter()) {
            out.push(norm_tri(turn_tri(*t, k)));
        }
    }
    out.sort();
    out
}

/// Triangles of the two lobes for the given axis.
pub fn lobe_triangles(axis: LocalAxis) -> Vec<LTri> {
    let ks = match axis {
        LocalAxis::U => [0, 2],
        LocalAxis::V => [1, 3],
    };
    let mut out: Vec<LTri> =
        ks.iter().flat_map(|&k| east_lobe().map(|t| norm_tri(turn_tri(t, k)))).collect();
    out.sort();
    out
}

/// Edges of the trace: the outlines of both lobes.
pub fn socket_trace(axis: LocalAxis) -> Vec<[L2; 2]> {
    let lobes = lobe_triangles(axis);
    let mut count: std::collections::BTreeMap<[L2; 2], usize> = Default::default();
    for t in &lobes {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            *count.entry([t[a], t[b]]).or_default() += 1;
        }
    }
    count.into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect()
}

/// Vertices of a triangle list.
pub fn vertices(tris: &[LTri]) -> Vec<L2> {
    let mut v: Vec<L2> = tris.iter().flatten().copied().collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area2(t: &LTri) -> i64 {
        let [a, b, c] = *t;
        ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs()
    }

    fn mirror(t: LTri) -> LTri {
        norm_tri(t.map(|p| [8 - p[0], p[1]]))
    }

    #[test]
    fn blank_face_has_nine_vertices() {
        let b = blank_triangles();
        assert_eq!(b.len(), 8);
        assert_eq!(vertices(&b).len(), 9);
        assert_eq!(b.iter().map(area2).sum::<i64>(), 128);
    }

    #[test]
    fn socket_tiles_the_square_and_is_symmetric() {
        let s = socket_triangles();
        assert_eq!(s.len(), 24);
        assert_eq!(vertices(&s).len(), 17);
        assert_eq!(s.iter().map(area2).sum::<i64>(), 128);
        assert!(s.iter().all(|t| area2(t) > 0));
        let mut m: Vec<LTri> = s.iter().map(|t| mirror(*t)).collect();
        m.sort();
        assert_eq!(m, s);
        let mut r: Vec<LTri> = s.iter().map(|t| norm_tri(turn_tri(*t, 1))).collect();
        r.sort();
        assert_eq!(r, s);
        // Boundary vertices are the corners and edge midpoints only.
        let on_boundary: Vec<L2> =
            vertices(&s).into_iter().filter(|p| p[0] % 8 == 0 || p[1] % 8 == 0).collect();
        assert_eq!(on_boundary.len(), 8);
    }

    #[test]
    fn trace_is_two_diamonds_through_the_centre() {
        let t = socket_trace(LocalAxis::U);
        assert_eq!(t.len(), 8);
        assert_eq!(t.iter().filter(|e| e.contains(&CENTER)).count(), 4);
        assert!(lobe_triangles(LocalAxis::U).iter().all(|t| socket_triangles().contains(t)));
        assert_ne!(socket_trace(LocalAxis::U), socket_trace(LocalAxis::V));
    }
}
