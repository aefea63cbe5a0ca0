//! Stars, links and the 3-manifold check.
//!
//! Stars are stored in compressed form: every simplex's star is determined by
//! the maximal simplices containing it, so we keep vertex→tetrahedra,
//! edge→tetrahedra, vertex→S-triangles and S-edge→S-triangles tables.
//! Full star and link lists are derived on demand.

use crate::complex::{tet_faces, SurfacePair, Tri};
use crate::validate::ValidationReport;

/// Compressed adjacency lists.
#[derive(Clone, Debug, Default)]
pub struct Csr {
    pub offsets: Vec<u32>,
    pub items: Vec<u32>,
}

impl Csr {
    /// Builds from `(key, item)` pairs produced twice by `fill`.
    fn build(keys: usize, fill: impl Fn(&mut dyn FnMut(usize, u32))) -> Csr {
        let mut counts = vec![0u32; keys + 1];
        fill(&mut |k, _| counts[k + 1] += 1);
        for i in 0..keys {
            counts[i + 1] += counts[i];
        }
        let mut items = vec![0u32; counts[keys] as usize];
        let mut next = counts.clone();
        fill(&mut |k, x| {
            items[next[k] as usize] = x;
            next[k] += 1;
        });
        Csr { offsets: counts, items }
    }

    pub fn get(&self, k: usize) -> &[u32] {
        &self.items[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }

    pub fn len(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Incidence tables of a pure complex.
#[derive(Clone, Debug, Default)]
pub struct IncidenceIndex {
    pub vert_tets: Csr,
    pub edge_tets: Csr,
    pub tri_tet_count: Vec<u8>,
    pub vert_s_tris: Csr,
    pub s_edge_s_tris: Csr,
    pub in_s: Vec<bool>,
    /// Filled by `check_3manifold`.
    pub boundary_vertex: Vec<bool>,
    /// Filled by `check_3manifold`: edge lies in a boundary triangle.
    pub boundary_edge: Vec<bool>,
}

fn pos<T: Ord>(list: &[T], x: &T) -> usize {
    list.binary_search(x).expect("face present after purity check")
}

/// Builds all incidence tables in time linear in the number of simplices
/// (up to the logarithmic face lookups).
pub fn build_incidence(p: &SurfacePair) -> IncidenceIndex {
    let n = p.num_vertices;
    let vert_tets = Csr::build(n, |push| {
        for (i, t) in p.tetrahedra.iter().enumerate() {
            for &v in t {
                push(v as usize, i as u32);
            }
        }
    });
    let edge_ids: Vec<[usize; 6]> = crate::par::map_range(p.tetrahedra.len(), |i| {
        let t = p.tetrahedra[i];
        let mut out = [0usize; 6];
        let mut c = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                out[c] = pos(&p.edges, &[t[a], t[b]]);
                c += 1;
            }
        }
        out
    });
    let edge_tets = Csr::build(p.edges.len(), |push| {
        for (i, ids) in edge_ids.iter().enumerate() {
            for &e in ids {
                push(e, i as u32);
            }
        }
    });
    drop(edge_ids);
    let mut tri_tet_count = vec![0u8; p.triangles.len()];
    for t in &p.tetrahedra {
        for f in tet_faces(*t) {
            let c = &mut tri_tet_count[pos(&p.triangles, &f)];
            *c = c.saturating_add(1);
        }
    }
    let vert_s_tris = Csr::build(n, |push| {
        for (i, t) in p.s_triangles.iter().enumerate() {
            for &v in t {
                push(v as usize, i as u32);
            }
        }
    });
    let s_edge_s_tris = Csr::build(p.s_edges.len(), |push| {
        for (i, t) in p.s_triangles.iter().enumerate() {
            for e in crate::complex::tri_edges(*t) {
                push(pos(&p.s_edges, &e), i as u32);
            }
        }
    });
    let mut in_s = vec![false; n];
    for &v in &p.s_vertices {
        in_s[v as usize] = true;
    }
    IncidenceIndex {
        vert_tets,
        edge_tets,
        tri_tet_count,
        vert_s_tris,
        s_edge_s_tris,
        in_s,
        boundary_vertex: vec![false; n],
        boundary_edge: vec![false; p.edges.len()],
    }
}

fn subsets(rest: &[u32], out: &mut Vec<Vec<u32>>) {
    let k = rest.len();
    for mask in 1u32..(1 << k) {
        out.push((0..k).filter(|i| mask >> i & 1 == 1).map(|i| rest[i]).collect());
    }
}

fn cofaces<'a>(sigma: &'a [u32], tops: impl Iterator<Item = &'a [u32]>) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for t in tops {
        if sigma.iter().all(|v| t.contains(v)) {
            let rest: Vec<u32> = t.iter().copied().filter(|v| !sigma.contains(v)).collect();
            subsets(&rest, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

impl IncidenceIndex {
    /// Link of `sigma` in `M`: simplices disjoint from `sigma` whose union with it is in `M`.
    pub fn link(&self, p: &SurfacePair, sigma: &[u32]) -> Vec<Vec<u32>> {
        let tops = self.vert_tets.get(sigma[0] as usize).iter().map(|&i| &p.tetrahedra[i as usize][..]);
        cofaces(sigma, tops)
    }

    /// Star of `sigma` in `M`: every simplex containing `sigma`.
    pub fn star(&self, p: &SurfacePair, sigma: &[u32]) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self
            .link(p, sigma)
            .into_iter()
            .map(|mut l| {
                l.extend_from_slice(sigma);
                l.sort_unstable();
                l
            })
            .collect();
        out.push(sigma.to_vec());
        out.sort();
        out
    }

    /// Link of `sigma` within `S`.
    pub fn s_link(&self, p: &SurfacePair, sigma: &[u32]) -> Vec<Vec<u32>> {
        let tops = self.vert_s_tris.get(sigma[0] as usize).iter().map(|&i| &p.s_triangles[i as usize][..]);
        cofaces(sigma, tops)
    }

    /// Edges of the vertex link `Lk'(v)` within `S`, each sorted.
    pub fn s_link_edges(&self, p: &SurfacePair, v: u32) -> Vec<[u32; 2]> {
        let mut out: Vec<[u32; 2]> = self
            .vert_s_tris
            .get(v as usize)
            .iter()
            .map(|&i| {
                let t = p.s_triangles[i as usize];
                let mut e = [0u32; 2];
                let mut c = 0;
                for x in t {
                    if x != v {
                        e[c] = x;
                        c += 1;
                    }
                }
                e
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Boundary circle `∂Lk(v)` of a boundary vertex, as sorted edges.
    pub fn boundary_link_edges(&self, p: &SurfacePair, v: u32) -> Vec<[u32; 2]> {
        let mut out = Vec::new();
        for &ti in self.vert_tets.get(v as usize) {
            for f in tet_faces(p.tetrahedra[ti as usize]) {
                if f.contains(&v) && self.tri_tet_count[pos(&p.triangles, &f)] == 1 {
                    let e: Vec<u32> = f.iter().copied().filter(|&x| x != v).collect();
                    out.push([e[0], e[1]]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn edge_index(&self, p: &SurfacePair, e: [u32; 2]) -> Option<usize> {
        p.edges.binary_search(&e).ok()
    }

    pub fn triangle_index(p: &SurfacePair, t: &Tri) -> Option<usize> {
        p.triangles.binary_search(t).ok()
    }
}

/// Connected components of a graph on labelled vertices given by edges.
fn components(verts: &[u32], edges: &[[u32; 2]]) -> usize {
    let idx = |v: u32| verts.binary_search(&v).unwrap();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = verts.len();
    for e in edges {
        let (a, b) = (find(&mut parent, idx(e[0])), find(&mut parent, idx(e[1])));
        if a != b {
            parent[a] = b;
            comps -= 1;
        }
    }
    comps
}

enum EdgeLink {
    Circle,
    Interval,
    Bad(String),
}

fn classify_edge_link(link: &[[u32; 2]]) -> EdgeLink {
    let mut verts: Vec<u32> = link.iter().flatten().copied().collect();
    verts.sort_unstable();
    let mut deg1 = 0;
    let mut i = 0;
    let mut distinct = Vec::new();
    while i < verts.len() {
        let mut j = i;
        while j < verts.len() && verts[j] == verts[i] {
            j += 1;
        }
        match j - i {
            1 => deg1 += 1,
            2 => {}
            d => return EdgeLink::Bad(format!("link vertex {} has degree {d}", verts[i])),
        }
        distinct.push(verts[i]);
        i = j;
    }
    if link.is_empty() {
        return EdgeLink::Bad("empty link".into());
    }
    if components(&distinct, link) != 1 {
        return EdgeLink::Bad("link disconnected".into());
    }
    match deg1 {
        0 => EdgeLink::Circle,
        2 => EdgeLink::Interval,
        _ => EdgeLink::Bad("link is not a circle or interval".into()),
    }
}

/// Per-vertex link result: `Ok(is_boundary)` or an error message.
fn check_vertex(p: &SurfacePair, idx: &IncidenceIndex, v: u32) -> Result<bool, String> {
    let tets = idx.vert_tets.get(v as usize);
    if tets.is_empty() {
        return Err(format!("vertex {v}: empty link"));
    }
    let mut tris: Vec<Tri> = tets
        .iter()
        .map(|&i| {
            let t = p.tetrahedra[i as usize];
            let mut f = [0u32; 3];
            let mut c = 0;
            for x in t {
                if x != v {
                    f[c] = x;
                    c += 1;
                }
            }
            f
        })
        .collect();
    tris.sort_unstable();
    let mut edges: Vec<[u32; 2]> = tris.iter().flat_map(|t| crate::complex::tri_edges(*t)).collect();
    edges.sort_unstable();
    let mut distinct_edges = edges.clone();
    distinct_edges.dedup();
    let boundary_edges = distinct_edges.len() * 2 - edges.len();
    let mut verts: Vec<u32> = distinct_edges.iter().flatten().copied().collect();
    verts.sort_unstable();
    verts.dedup();
    if components(&verts, &distinct_edges) != 1 {
        return Err(format!("vertex {v}: vertex link disconnected"));
    }
    let chi = verts.len() as i64 - distinct_edges.len() as i64 + tris.len() as i64;
    if boundary_edges == 0 {
        if chi != 2 {
            return Err(format!("vertex {v}: link euler char {chi}"));
        }
        Ok(false)
    } else {
        if chi != 1 {
            return Err(format!("vertex {v}: link euler char {chi} with boundary"));
        }
        Ok(true)
    }
}

/// Verifies that a pure 3-complex is a 3-manifold (possibly with boundary) and
/// records boundary flags in `idx`.
pub fn check_3manifold(p: &SurfacePair, idx: &mut IncidenceIndex) -> ValidationReport {
    let mut r = ValidationReport::default();
    for (t, &c) in p.triangles.iter().zip(&idx.tri_tet_count) {
        if !(1..=2).contains(&c) {
            r.push("manifold", t, format!("triangle {t:?} lies in {c} tetrahedra"));
        }
    }
    let edge_results = crate::par::map_range(p.edges.len(), |i| {
        let e = p.edges[i];
        let link: Vec<[u32; 2]> = idx
            .edge_tets
            .get(i)
            .iter()
            .map(|&ti| {
                let t = p.tetrahedra[ti as usize];
                let rest: Vec<u32> = t.iter().copied().filter(|x| !e.contains(x)).collect();
                [rest[0], rest[1]]
            })
            .collect();
        classify_edge_link(&link)
    });
    for (i, res) in edge_results.into_iter().enumerate() {
        match res {
            EdgeLink::Circle => {}
            EdgeLink::Interval => idx.boundary_edge[i] = true,
            EdgeLink::Bad(m) => {
                let e = p.edges[i];
                r.push("manifold", &e, format!("edge {e:?}: {m}"))
            }
        }
    }
    let vert_results = crate::par::map_range(p.num_vertices, |v| check_vertex(p, idx, v as u32));
    for (v, res) in vert_results.into_iter().enumerate() {
        match res {
            Ok(b) => idx.boundary_vertex[v] = b,
            Err(m) => r.push("manifold", &[v as u32], m),
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::check_pure_complex;

    fn boundary_of_4_simplex() -> SurfacePair {
        let tets = vec![[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 4], [0, 2, 3, 4], [1, 2, 3, 4]];
        SurfacePair::from_top_simplices(5, tets, vec![])
    }

    #[test]
    fn single_tet_links() {
        let p = SurfacePair::from_top_simplices(4, vec![[0, 1, 2, 3]], vec![]);
        let idx = build_incidence(&p);
        let lk = idx.link(&p, &[0]);
        assert_eq!(lk, vec![vec![1], vec![1, 2], vec![1, 2, 3], vec![1, 3], vec![2], vec![2, 3], vec![3]]);
        assert_eq!(idx.link(&p, &[0, 1]), vec![vec![2], vec![2, 3], vec![3]]);
    }

    #[test]
    fn sphere_vertex_link_has_four_triangles() {
        let p = boundary_of_4_simplex();
        let idx = build_incidence(&p);
        let tris = idx.link(&p, &[0]).into_iter().filter(|s| s.len() == 3).count();
        assert_eq!(tris, 4);
    }

    #[test]
    fn manifold_examples() {
        let mut p = boundary_of_4_simplex();
        assert!(check_pure_complex(&mut p).ok());
        let mut idx = build_incidence(&p);
        assert!(check_3manifold(&p, &mut idx).ok());
        assert!(idx.boundary_vertex.iter().all(|b| !b));

        let p = SurfacePair::from_top_simplices(4, vec![[0, 1, 2, 3]], vec![]);
        let mut idx = build_incidence(&p);
        assert!(check_3manifold(&p, &mut idx).ok());
        assert!(idx.boundary_vertex.iter().all(|b| *b));

        let p = SurfacePair::from_top_simplices(7, vec![[0, 1, 2, 3], [0, 4, 5, 6]], vec![]);
        let mut idx = build_incidence(&p);
        let r = check_3manifold(&p, &mut idx);
        assert!(r.failures.iter().any(|f| f.message.contains("vertex link disconnected")), "{r}");
    }
}
