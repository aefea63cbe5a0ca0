//! Abstract simplicial 3-complexes with a 2-dimensional subcomplex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Edge = [u32; 2];
pub type Tri = [u32; 3];
pub type Tet = [u32; 4];

/// A simplicial 3-complex `M` together with a 2-subcomplex `S`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePair {
    pub num_vertices: usize,
    pub edges: Vec<Edge>,
    pub triangles: Vec<Tri>,
    pub tetrahedra: Vec<Tet>,
    pub s_vertices: Vec<u32>,
    pub s_edges: Vec<Edge>,
    pub s_triangles: Vec<Tri>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed document at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{field}[{index}]: expected {expected} entries, found {found}")]
    Arity { field: &'static str, index: usize, expected: usize, found: usize },
    #[error("{field}[{index}]: entry {value} out of range [0, {num_vertices})")]
    OutOfRange { field: &'static str, index: usize, value: i64, num_vertices: usize },
    #[error("{field}[{index}]: non-increasing tuple {tuple:?}")]
    NonIncreasing { field: &'static str, index: usize, tuple: Vec<i64> },
}

#[derive(Deserialize)]
struct RawPair {
    num_vertices: usize,
    #[serde(default)]
    edges: Vec<Vec<i64>>,
    #[serde(default)]
    triangles: Vec<Vec<i64>>,
    #[serde(default)]
    tetrahedra: Vec<Vec<i64>>,
    #[serde(default)]
    s_vertices: Vec<i64>,
    #[serde(default)]
    s_edges: Vec<Vec<i64>>,
    #[serde(default)]
    s_triangles: Vec<Vec<i64>>,
}

fn convert<const K: usize>(
    field: &'static str,
    raw: &[Vec<i64>],
    n: usize,
) -> Result<Vec<[u32; K]>, ParseError> {
    raw.iter()
        .enumerate()
        .map(|(index, t)| {
            if t.len() != K {
                return Err(ParseError::Arity { field, index, expected: K, found: t.len() });
            }
            let mut out = [0u32; K];
            for (i, &v) in t.iter().enumerate() {
                if v < 0 || v as u64 >= n as u64 {
                    return Err(ParseError::OutOfRange { field, index, value: v, num_vertices: n });
                }
                if i > 0 && t[i - 1] >= v {
                    return Err(ParseError::NonIncreasing { field, index, tuple: t.clone() });
                }
                out[i] = v as u32;
            }
            Ok(out)
        })
        .collect()
}

/// Parses the JSON complex format. Topology is not validated here.
pub fn parse_complex(text: &str) -> Result<SurfacePair, ParseError> {
    let raw: RawPair = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let n = raw.num_vertices;
    let sv: Vec<Vec<i64>> = raw.s_vertices.iter().map(|&v| vec![v]).collect();
    let s_vertices = convert::<1>("s_vertices", &sv, n)?.into_iter().map(|[v]| v).collect();
    Ok(SurfacePair {
        num_vertices: n,
        edges: convert("edges", &raw.edges, n)?,
        triangles: convert("triangles", &raw.triangles, n)?,
        tetrahedra: convert("tetrahedra", &raw.tetrahedra, n)?,
        s_vertices,
        s_edges: convert("s_edges", &raw.s_edges, n)?,
        s_triangles: convert("s_triangles", &raw.s_triangles, n)?,
    })
}

impl SurfacePair {
    /// Sorts every list lexicographically and removes duplicates.
    pub fn canonicalize(&mut self) {
        fn tidy<T: Ord>(v: &mut Vec<T>) {
            v.sort_unstable();
            v.dedup();
        }
        tidy(&mut self.edges);
        tidy(&mut self.triangles);
        tidy(&mut self.tetrahedra);
        tidy(&mut self.s_vertices);
        tidy(&mut self.s_edges);
        tidy(&mut self.s_triangles);
    }

    /// Canonical JSON text (sorted lists).
    pub fn to_json(&self) -> String {
        let mut c = self.clone();
        c.canonicalize();
        serde_json::to_string(&c).expect("serializable")
    }

    /// Builds the full closure of the given tetrahedra and surface triangles.
    pub fn from_top_simplices(num_vertices: usize, tets: Vec<Tet>, s_tris: Vec<Tri>) -> Self {
        let mut p = SurfacePair { num_vertices, tetrahedra: tets, s_triangles: s_tris, ..Default::default() };
        for t in &p.tetrahedra {
            for f in tet_faces(*t) {
                p.triangles.push(f);
            }
        }
        p.triangles.sort_unstable();
        p.triangles.dedup();
        for t in &p.triangles {
            p.edges.extend(tri_edges(*t));
        }
        for t in &p.s_triangles {
            p.s_edges.extend(tri_edges(*t));
        }
        p.canonicalize();
        for e in &p.s_edges {
            p.s_vertices.extend_from_slice(e);
        }
        p.canonicalize();
        p
    }
}

/// The four triangular faces of a tetrahedron, each sorted.
pub fn tet_faces(t: Tet) -> [Tri; 4] {
    [[t[1], t[2], t[3]], [t[0], t[2], t[3]], [t[0], t[1], t[3]], [t[0], t[1], t[2]]]
}

/// The three edges of a triangle, each sorted.
pub fn tri_edges(t: Tri) -> [Edge; 3] {
    [[t[1], t[2]], [t[0], t[2]], [t[0], t[1]]]
}

/// Returns the sorted form of an arbitrary vertex array.
pub fn sorted<const K: usize>(mut a: [u32; K]) -> [u32; K] {
    a.sort_unstable();
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_TET: &str = r#"{"num_vertices":4,
        "edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]],
        "triangles":[[0,1,2],[0,1,3],[0,2,3],[1,2,3]],
        "tetrahedra":[[0,1,2,3]],
        "s_vertices":[],"s_edges":[],"s_triangles":[]}"#;

    #[test]
    fn parses_one_tetrahedron() {
        let p = parse_complex(ONE_TET).unwrap();
        assert_eq!(p.tetrahedra.len(), 1);
        assert_eq!(p.triangles.len(), 4);
        assert_eq!(p.edges.len(), 6);
        assert!(p.s_triangles.is_empty());
    }

    #[test]
    fn rejects_repeated_vertex() {
        let bad = ONE_TET.replace("[0,1],[0,2]", "[2,2],[0,2]");
        let err = parse_complex(&bad).unwrap_err();
        assert!(err.to_string().contains("non-increasing tuple"), "{err}");
    }

    #[test]
    fn rejects_out_of_range_and_syntax() {
        let bad = ONE_TET.replace("[0,1,2,3]", "[0,1,2,9]");
        assert!(matches!(parse_complex(&bad), Err(ParseError::OutOfRange { .. })));
        assert!(matches!(parse_complex("{"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn json_round_trip() {
        let p = SurfacePair::from_top_simplices(4, vec![[0, 1, 2, 3]], vec![[0, 1, 2]]);
        let q = parse_complex(&p.to_json()).unwrap();
        assert_eq!(p, q);
    }
}
