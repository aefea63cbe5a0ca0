//! Validation reports and the purity/closure check.

use crate::complex::{tet_faces, tri_edges, SurfacePair};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: &'static str,
    pub simplex: Vec<u32>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, check: &'static str, simplex: &[u32], message: String) {
        self.failures.push(Failure { check, simplex: simplex.to_vec(), message });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for x in &self.failures {
            writeln!(f, "[{}] {:?}: {}", x.check, x.simplex, x.message)?;
        }
        Ok(())
    }
}

fn contains<T: Ord>(list: &[T], x: &T) -> bool {
    list.binary_search(x).is_ok()
}

/// Marks which entries of the sorted `list` occur in `faces`.
fn mark<T: Ord>(list: &[T], faces: impl Iterator<Item = T>) -> Vec<bool> {
    let mut used = vec![false; list.len()];
    for f in faces {
        if let Ok(i) = list.binary_search(&f) {
            used[i] = true;
        }
    }
    used
}

/// Checks that `M` is a pure 3-complex closed under faces and `S` a pure
/// 2-subcomplex of it. Leaves all lists sorted and deduplicated.
pub fn check_pure_complex(p: &mut SurfacePair) -> ValidationReport {
    p.canonicalize();
    let mut r = ValidationReport::default();
    let n = p.num_vertices;
    if p.tetrahedra.is_empty() && n > 0 {
        r.push("pure", &[], "complex has vertices but no tetrahedra".into());
    }
    if p.edges.len() > 6 * p.tetrahedra.len() || p.triangles.len() > 4 * p.tetrahedra.len() {
        r.push("pure", &[], "more faces than tetrahedra can carry".into());
        return r;
    }
    for t in &p.tetrahedra {
        for f in tet_faces(*t) {
            if !contains(&p.triangles, &f) {
                r.push("pure", &f, format!("missing face {f:?} of tet {t:?}"));
            }
        }
    }
    for t in &p.triangles {
        for e in tri_edges(*t) {
            if !contains(&p.edges, &e) {
                r.push("pure", &e, format!("missing face {e:?} of triangle {t:?}"));
            }
        }
    }
    let tri_used = mark(&p.triangles, p.tetrahedra.iter().flat_map(|t| tet_faces(*t)));
    for (t, u) in p.triangles.iter().zip(tri_used) {
        if !u {
            r.push("pure", t, format!("triangle {t:?} not in any tetrahedron"));
        }
    }
    let edge_used = mark(&p.edges, p.triangles.iter().flat_map(|t| tri_edges(*t)));
    for (e, u) in p.edges.iter().zip(edge_used) {
        if !u {
            r.push("pure", e, format!("edge {e:?} not in any triangle"));
        }
    }
    let mut vert_used = vec![false; n];
    for e in &p.edges {
        vert_used[e[0] as usize] = true;
        vert_used[e[1] as usize] = true;
    }
    for (v, u) in vert_used.iter().enumerate() {
        if !u {
            r.push("pure", &[v as u32], format!("vertex {v} not in any edge"));
        }
    }
    // Surface subcomplex.
    for t in &p.s_triangles {
        if !contains(&p.triangles, t) {
            r.push("surface", t, format!("S triangle {t:?} not in M"));
        }
        for e in tri_edges(*t) {
            if !contains(&p.s_edges, &e) {
                r.push("surface", &e, format!("missing face {e:?} of S triangle {t:?}"));
            }
        }
    }
    let s_edge_used = mark(&p.s_edges, p.s_triangles.iter().flat_map(|t| tri_edges(*t)));
    for (e, u) in p.s_edges.iter().zip(s_edge_used) {
        if !contains(&p.edges, e) {
            r.push("surface", e, format!("S edge {e:?} not in M"));
        }
        if !u {
            r.push("surface", e, format!("S not pure: edge {e:?} in no S triangle"));
        }
        for v in e {
            if !contains(&p.s_vertices, v) {
                r.push("surface", &[*v], format!("missing face {v} of S edge {e:?}"));
            }
        }
    }
    let s_vert_used = mark(&p.s_vertices, p.s_edges.iter().flat_map(|e| e.iter().copied()));
    for (v, u) in p.s_vertices.iter().zip(s_vert_used) {
        if !u {
            r.push("surface", &[*v], format!("S not pure: vertex {v} in no S edge"));
        }
    }
    r
}
