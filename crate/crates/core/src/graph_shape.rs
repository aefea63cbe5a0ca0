//! Decomposition of graphs into special vertices, long edges and circles.

/// A graph decomposed into paths between vertices of degree other than 2
/// ("long edges") and closed paths of degree-2 vertices ("circles").
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDecomposition {
    /// Vertices of degree other than 2, ascending, with their degrees.
    pub special_vertices: Vec<(u32, usize)>,
    /// Vertex paths whose endpoints are special and interior vertices have degree 2.
    pub long_edges: Vec<Vec<u32>>,
    /// Closed paths, first vertex repeated at the end.
    pub circles: Vec<Vec<u32>>,
}

struct Adj {
    verts: Vec<u32>,
    offsets: Vec<usize>,
    /// `(neighbor index, edge id)`, sorted by neighbor label.
    nbrs: Vec<(usize, usize)>,
}

fn adjacency(vertices: &[u32], edges: &[[u32; 2]]) -> Adj {
    let mut verts: Vec<u32> = vertices.iter().copied().chain(edges.iter().flatten().copied()).collect();
    verts.sort_unstable();
    verts.dedup();
    let id = |v: u32| verts.binary_search(&v).unwrap();
    let mut pairs: Vec<(usize, usize, usize)> = Vec::with_capacity(edges.len() * 2);
    for (k, e) in edges.iter().enumerate() {
        let (a, b) = (id(e[0]), id(e[1]));
        pairs.push((a, b, k));
        pairs.push((b, a, k));
    }
    pairs.sort_unstable();
    let mut offsets = vec![0usize; verts.len() + 1];
    for &(a, _, _) in &pairs {
        offsets[a + 1] += 1;
    }
    for i in 0..verts.len() {
        offsets[i + 1] += offsets[i];
    }
    let nbrs = pairs.into_iter().map(|(_, b, k)| (b, k)).collect();
    Adj { verts, offsets, nbrs }
}

impl Adj {
    fn deg(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
    fn around(&self, v: usize) -> &[(usize, usize)] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Splits a graph into long edges and circles in linear time.
///
/// `vertices` may list isolated vertices; every edge endpoint is included automatically.
pub fn decompose(vertices: &[u32], edges: &[[u32; 2]]) -> GraphDecomposition {
    let g = adjacency(vertices, edges);
    let mut used = vec![false; edges.len()];
    let mut special_vertices = Vec::new();
    let mut long_edges = Vec::new();
    // Follows a path from `start` through edge `(next, eid)` until a special vertex.
    let walk = |start: usize, mut next: usize, mut eid: usize, used: &mut Vec<bool>| {
        let mut path = vec![g.verts[start]];
        let mut prev_edge;
        loop {
            used[eid] = true;
            path.push(g.verts[next]);
            if g.deg(next) != 2 || next == start {
                return path;
            }
            prev_edge = eid;
            let &(n2, e2) = g.around(next).iter().find(|&&(_, e)| e != prev_edge).unwrap();
            next = n2;
            eid = e2;
        }
    };
    for v in 0..g.verts.len() {
        if g.deg(v) != 2 {
            special_vertices.push((g.verts[v], g.deg(v)));
            for &(w, e) in g.around(v) {
                if !used[e] {
                    long_edges.push(walk(v, w, e, &mut used));
                }
            }
        }
    }
    let mut circles = Vec::new();
    for v in 0..g.verts.len() {
        if let Some(&(w, e)) = g.around(v).iter().find(|&&(_, e)| !used[e]) {
            // `v` is the least vertex of this circle; head toward the lesser neighbor.
            circles.push(walk(v, w, e, &mut used));
        }
    }
    GraphDecomposition { special_vertices, long_edges, circles }
}

/// Multigraph on the special vertices, one edge per long edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    /// Special vertex labels with degrees.
    pub vertices: Vec<(u32, usize)>,
    /// Endpoint indices into `vertices`, each pair sorted; loops have equal ends.
    pub edges: Vec<(usize, usize)>,
    pub circles: usize,
}

pub fn simplified_multigraph(d: &GraphDecomposition) -> Multigraph {
    let id = |v: u32| d.special_vertices.binary_search_by_key(&v, |x| x.0).unwrap();
    let mut edges: Vec<(usize, usize)> = d
        .long_edges
        .iter()
        .map(|p| {
            let (a, b) = (id(p[0]), id(*p.last().unwrap()));
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    Multigraph { vertices: d.special_vertices.clone(), edges, circles: d.circles.len() }
}

impl Multigraph {
    pub fn loops(&self) -> usize {
        self.edges.iter().filter(|(a, b)| a == b).count()
    }

    /// Isomorphism test by brute force over vertex permutations (small graphs only).
    pub fn isomorphic(&self, other: &Multigraph) -> bool {
        let n = self.vertices.len();
        if n != other.vertices.len() || self.edges.len() != other.edges.len() || self.circles != other.circles {
            return false;
        }
        assert!(n <= 8, "isomorphism only supported for small multigraphs");
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut mapped: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
                .collect();
            mapped.sort_unstable();
            if mapped == other.edges {
                return true;
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Two graphs are homeomorphic iff their simplified multigraphs are isomorphic
/// and they have the same number of circles.
pub fn homeomorphic(a: &GraphDecomposition, b: &GraphDecomposition) -> bool {
    simplified_multigraph(a).isomorphic(&simplified_multigraph(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_is_one_long_edge() {
        let d = decompose(&[], &[[1, 2], [2, 3]]);
        assert_eq!(d.long_edges, vec![vec![1, 2, 3]]);
        assert!(d.circles.is_empty());
    }

    #[test]
    fn triangle_is_one_circle() {
        let d = decompose(&[], &[[0, 1], [1, 2], [0, 2]]);
        assert!(d.long_edges.is_empty());
        assert_eq!(d.circles, vec![vec![0, 1, 2, 0]]);
        let m = simplified_multigraph(&d);
        assert!(m.vertices.is_empty());
        assert_eq!(m.circles, 1);
    }

    #[test]
    fn figure_eight_of_subdivided_loops() {
        // a=0 with loops 0-1-0 and 0-2-0 is not simple; subdivide each loop twice.
        let d = decompose(&[], &[[0, 1], [1, 3], [0, 3], [0, 2], [2, 4], [0, 4]]);
        assert_eq!(d.special_vertices, vec![(0, 4)]);
        let m = simplified_multigraph(&d);
        assert_eq!(m.edges, vec![(0, 0), (0, 0)]);
        assert_eq!(m.circles, 0);
    }

    #[test]
    fn theta_with_four_strands() {
        // Two degree-4 vertices joined by four subdivided strands.
        let d = decompose(&[], &[[0, 2], [1, 2], [0, 3], [1, 3], [0, 4], [1, 4], [0, 5], [1, 5]]);
        let m = simplified_multigraph(&d);
        assert_eq!(m.vertices, vec![(0, 4), (1, 4)]);
        assert_eq!(m.edges, vec![(0, 1); 4]);
    }

    #[test]
    fn isolated_vertex_is_special() {
        let d = decompose(&[7], &[]);
        assert_eq!(d.special_vertices, vec![(7, 0)]);
    }
}
