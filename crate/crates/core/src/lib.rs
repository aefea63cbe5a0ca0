//! Generic surfaces in triangulated 3-manifolds.
//!
//! The pipeline validates a surface inside a simplicial 3-manifold, extracts its
//! double arcs and strip parameters, compiles a symmetric 3-SAT lifting formula,
//! and decides liftability. The reverse direction turns a proper symmetric
//! formula into a height-1 arrowed daisy graph and then into a concrete
//! triangulated casing-and-tube surface whose liftability equals the formula's
//! satisfiability.

pub mod analysis;
pub mod blocks;
pub mod complex;
pub mod dadg;
pub mod graph_shape;
pub mod geom;
pub mod incidence;
pub mod lifting;
pub mod mesh;
pub mod par;
pub mod pipeline;
pub mod sat;
pub mod surface;
pub mod synth;
pub mod validate;

pub use complex::{parse_complex, SurfacePair};
pub use validate::{Failure, ValidationReport};
