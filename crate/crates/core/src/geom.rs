//! Exact rational geometry: points, half-spaces, convex cells and convex polygons.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

pub type Q = Ratio<i64>;
pub type P3 = [Q; 3];
pub type P2 = [Q; 2];

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn p3(x: Q, y: Q, z: Q) -> P3 {
    [x, y, z]
}

pub fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: P3, b: P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn dot(a: P3, b: P3) -> Q {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn centroid(pts: &[P3]) -> P3 {
    let n = qi(pts.len() as i64);
    let mut s = [Q::zero(); 3];
    for p in pts {
        s = add(s, *p);
    }
    s.map(|c| c / n)
}

/// Half-space `n . p <= d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub n: P3,
    pub d: Q,
}

impl HalfSpace {
    pub fn new(n: [i64; 3], d: Q) -> HalfSpace {
        HalfSpace { n: n.map(qi), d }
    }

    /// `p[axis] <= v`.
    pub fn le(axis: usize, v: Q) -> HalfSpace {
        let mut n = [0; 3];
        n[axis] = 1;
        HalfSpace::new(n, v)
    }

    /// `p[axis] >= v`.
    pub fn ge(axis: usize, v: Q) -> HalfSpace {
        let mut n = [0; 3];
        n[axis] = -1;
        HalfSpace::new(n, -v)
    }

    pub fn contains(&self, p: P3) -> bool {
        dot(self.n, p) <= self.d
    }
}

fn det3(m: [P3; 3]) -> Q {
    dot(m[0], cross(m[1], m[2]))
}

fn solve3(h: [&HalfSpace; 3]) -> Option<P3> {
    let m = [h[0].n, h[1].n, h[2].n];
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let d = [h[0].d, h[1].d, h[2].d];
    let mut out = [Q::zero(); 3];
    for (c, o) in out.iter_mut().enumerate() {
        let mut mc = m;
        for r in 0..3 {
            mc[r][c] = d[r];
        }
        *o = det3(mc) / det;
    }
    Some(out)
}

/// Vertices of the bounded polytope `{p : n_i . p <= d_i}`, sorted.
pub fn polytope_vertices(hs: &[HalfSpace]) -> Vec<P3> {
    let mut out = Vec::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            for k in j + 1..hs.len() {
                if let Some(p) = solve3([&hs[i], &hs[j], &hs[k]]) {
                    if hs.iter().all(|h| h.contains(p)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// A plane `n . p = d` with primitive integer normal whose first nonzero entry is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane {
    pub n: [i64; 3],
    pub d: Q,
}

impl Plane {
    /// Canonical plane through `p` with normal parallel to `n`, and whether
    /// the canonical normal agrees with `n`.
    pub fn through(n: P3, p: P3) -> (Plane, bool) {
        let l = n.iter().fold(1i64, |acc, c| acc.lcm(c.denom()));
        let mut m = n.map(|c| c.numer() * (l / c.denom()));
        let g = m.iter().fold(0i64, |acc, c| acc.gcd(c));
        assert!(g != 0, "zero normal");
        m = m.map(|c| c / g);
        let first = *m.iter().find(|c| **c != 0).unwrap();
        let agrees = first > 0;
        if !agrees {
            m = m.map(|c| -c);
        }
        let nq = m.map(qi);
        (Plane { n: m, d: dot(nq, p) }, agrees)
    }

    pub fn normal(&self) -> P3 {
        self.n.map(qi)
    }

    pub fn side(&self, p: P3) -> std::cmp::Ordering {
        dot(self.normal(), p).cmp(&self.d)
    }

    pub fn contains(&self, p: P3) -> bool {
        dot(self.normal(), p) == self.d
    }

    /// Coordinate dropped when projecting to 2D.
    pub fn drop_axis(&self) -> usize {
        (0..3).max_by_key(|&i| (self.n[i].abs(), std::cmp::Reverse(i))).unwrap()
    }

    pub fn project(&self, p: P3) -> P2 {
        match self.drop_axis() {
            0 => [p[1], p[2]],
            1 => [p[0], p[2]],
            _ => [p[0], p[1]],
        }
    }

    pub fn lift(&self, p: P2) -> P3 {
        let k = self.drop_axis();
        let (a, b) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut out = [Q::zero(); 3];
        out[a] = p[0];
        out[b] = p[1];
        out[k] = (self.d - qi(self.n[a]) * p[0] - qi(self.n[b]) * p[1]) / qi(self.n[k]);
        out
    }
}

/// A facet of a convex cell: its plane, whether the outward normal is the
/// canonical one, and its corner vertices.
#[derive(Clone, Debug)]
pub struct Facet {
    pub plane: Plane,
    pub outward: bool,
    pub verts: Vec<P3>,
}

/// Facets of the convex hull of `verts` (assumed full-dimensional).
pub fn hull_facets(verts: &[P3]) -> Vec<Facet> {
    let mut out: Vec<Facet> = Vec::new();
    let n = verts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let nrm = cross(sub(verts[j], verts[i]), sub(verts[k], verts[i]));
                if nrm.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let (plane, _) = Plane::through(nrm, verts[i]);
                if out.iter().any(|f| f.plane == plane) {
                    continue;
                }
                let mut above = false;
                let mut below = false;
                for v in verts {
                    match plane.side(*v) {
                        std::cmp::Ordering::Greater => above = true,
                        std::cmp::Ordering::Less => below = true,
                        _ => {}
                    }
                }
                if above && below {
                    continue;
                }
                let on: Vec<P3> = verts.iter().copied().filter(|v| plane.contains(*v)).collect();
                out.push(Facet { plane, outward: below, verts: on });
            }
        }
    }
    out
}

pub fn cross2(a: P2, b: P2) -> Q {
    a[0] * b[1] - a[1] * b[0]
}

fn sub2(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Twice the signed area.
pub fn area2(poly: &[P2]) -> Q {
    let n = poly.len();
    (0..n).map(|i| cross2(poly[i], poly[(i + 1) % n])).fold(Q::zero(), |a, b| a + b)
}

/// Counter-clockwise order of the points of a convex polygon, keeping only corners.
pub fn convex_order(pts: &[P2]) -> Vec<P2> {
    let mut pts = pts.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let n = qi(pts.len() as i64);
    let c = [pts.iter().map(|p| p[0]).sum::<Q>() / n, pts.iter().map(|p| p[1]).sum::<Q>() / n];
    let half = |p: P2| {
        let d = sub2(p, c);
        if d[1].is_positive() || (d[1].is_zero() && d[0].is_positive()) {
            0
        } else {
            1
        }
    };
    pts.sort_by(|a, b| {
        half(*a).cmp(&half(*b)).then_with(|| Q::zero().cmp(&cross2(sub2(*a, c), sub2(*b, c))))
    });
    strip_collinear(&pts)
}

fn strip_collinear(pts: &[P2]) -> Vec<P2> {
    let mut out: Vec<P2> = Vec::with_capacity(pts.len());
    for &p in pts {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    loop {
        let n = out.len();
        if n < 3 {
            return out;
        }
        let bad = (0..n).find(|&i| {
            let (a, b, c) = (out[(i + n - 1) % n], out[i], out[(i + 1) % n]);
            cross2(sub2(b, a), sub2(c, b)).is_zero()
        });
        match bad {
            Some(i) => {
                out.remove(i);
            }
            None => return out,
        }
    }
}

/// Intersection of two counter-clockwise convex polygons; empty when the
/// intersection has no area.
pub fn clip_convex(a: &[P2], b: &[P2]) -> Vec<P2> {
    let mut poly = a.to_vec();
    let m = b.len();
    for i in 0..m {
        if poly.is_empty() {
            break;
        }
        let (e0, e1) = (b[i], b[(i + 1) % m]);
        let dir = sub2(e1, e0);
        let side = |p: P2| cross2(dir, sub2(p, e0));
        let mut next = Vec::with_capacity(poly.len() + 1);
        let n = poly.len();
        for j in 0..n {
            let (p, r) = (poly[j], poly[(j + 1) % n]);
            let (sp, sr) = (side(p), side(r));
            if !sp.is_negative() {
                next.push(p);
            }
            if (sp.is_positive() && sr.is_negative()) || (sp.is_negative() && sr.is_positive()) {
                let t = sp / (sp - sr);
                next.push([p[0] + t * (r[0] - p[0]), p[1] + t * (r[1] - p[1])]);
            }
        }
        poly = next;
    }
    let poly = strip_collinear(&poly);
    if poly.len() < 3 || area2(&poly).is_zero() {
        return Vec::new();
    }
    poly
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Where {
    Inside,
    Boundary,
    Outside,
}

/// Location of `p` relative to a counter-clockwise convex polygon.
pub fn locate(poly: &[P2], p: P2) -> Where {
    let n = poly.len();
    let mut on_edge = false;
    for i in 0..n {
        let c = cross2(sub2(poly[(i + 1) % n], poly[i]), sub2(p, poly[i]));
        if c.is_negative() {
            return Where::Outside;
        }
        if c.is_zero() {
            on_edge = true;
        }
    }
    if on_edge {
        Where::Boundary
    } else {
        Where::Inside
    }
}

/// Axis-aligned bounding box of 2D points.
pub fn bbox2(pts: &[P2]) -> [P2; 2] {
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    [lo, hi]
}

pub fn bbox_overlap(a: &[P2; 2], b: &[P2; 2]) -> bool {
    (0..2).all(|k| a[0][k] < b[1][k] && b[0][k] < a[1][k])
}

pub fn in_bbox(b: &[P2; 2], p: P2) -> bool {
    (0..2).all(|k| b[0][k] <= p[k] && p[k] <= b[1][k])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> Vec<HalfSpace> {
        (0..3).flat_map(|a| [HalfSpace::ge(a, qi(0)), HalfSpace::le(a, qi(1))]).collect()
    }

    #[test]
    fn cube_vertices_and_facets() {
        let v = polytope_vertices(&unit_cube());
        assert_eq!(v.len(), 8);
        let f = hull_facets(&v);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|f| f.verts.len() == 4));
        let top = f.iter().find(|f| f.plane == Plane { n: [0, 0, 1], d: qi(1) }).unwrap();
        assert!(top.outward);
        let bottom = f.iter().find(|f| f.plane == Plane { n: [0, 0, 1], d: qi(0) }).unwrap();
        assert!(!bottom.outward);
    }

    #[test]
    fn clipping_squares() {
        let s = |x: i64, y: i64| vec![[qi(x), qi(y)], [qi(x + 2), qi(y)], [qi(x + 2), qi(y + 2)], [qi(x), qi(y + 2)]];
        let c = clip_convex(&s(0, 0), &s(1, 1));
        assert_eq!(area2(&c), qi(2));
        assert!(clip_convex(&s(0, 0), &s(2, 0)).is_empty());
        assert_eq!(locate(&s(0, 0), [qi(1), qi(0)]), Where::Boundary);
        assert_eq!(locate(&s(0, 0), [qi(1), qi(1)]), Where::Inside);
    }

    #[test]
    fn ordering_drops_collinear_points() {
        let pts = [[0, 0], [2, 0], [1, 0], [2, 2], [0, 2], [0, 1]].map(|[x, y]| [qi(x), qi(y)]);
        let o = convex_order(&pts);
        assert_eq!(o.len(), 4);
        assert!(area2(&o).is_positive());
    }

    #[test]
    fn lift_inverts_project() {
        let (pl, _) = Plane::through([qi(1), qi(0), qi(1)], [qi(1), qi(0), qi(0)]);
        let p = [q(1, 4), q(3, 8), q(3, 4)];
        assert!(pl.contains(p));
        assert_eq!(pl.lift(pl.project(p)), p);
    }
}
