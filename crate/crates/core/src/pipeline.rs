//! The formula -> DADG -> surface -> lifting chain with its three verdicts.

use crate::analysis::{analyze, AnalysisError};
use crate::blocks::assemble::{abstractize, assemble, AssembleError, BlockSet};
use crate::dadg::{double_arcs, graph_lifting_formula};
use crate::lifting::decide_liftable;
use crate::sat::{is_symmetric, solve, symmetrize, Cnf, SatError};
use crate::surface::{verify_generic_surface, VerifyError};
use crate::synth::{synthesize, SynthError};
use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    /// Variables and clause pairs of the formula fed to the synthesizer.
    pub num_vars: usize,
    pub clause_pairs: usize,
    pub triple_values: usize,
    pub edges: usize,
    pub arcs: usize,
    pub blocks: usize,
    pub tetrahedra: usize,
    pub sat_input: bool,
    pub sat_graph: bool,
    pub liftable: bool,
    pub agree: bool,
}

#[derive(Debug, Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Assemble(#[from] AssembleError),
    #[error("built surface rejected: {0}")]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Runs the chain on a proper symmetric formula.
pub fn roundtrip(f: &Cnf, blocks: &BlockSet) -> Result<RoundTripReport, RoundTripError> {
    let (_, d) = synthesize(f)?;
    let arcs = double_arcs(&d);
    let sat_graph = solve(&graph_lifting_formula(&d, &arcs)).is_some();
    let sb = assemble(&d, blocks)?;
    let (blocks_placed, tetrahedra) = (sb.placements.len(), sb.complex.pair.tetrahedra.len());
    let pair = abstractize(&sb);
    drop(sb);
    let model = verify_generic_surface(pair)?;
    let a = analyze(&model)?;
    let liftable = decide_liftable(&a).liftable;
    let sat_input = solve(f).is_some();
    Ok(RoundTripReport {
        num_vars: f.num_vars,
        clause_pairs: f.clauses.len() / 2,
        triple_values: d.t,
        edges: d.edge_count().unwrap_or(0),
        arcs: a.num_arcs(),
        blocks: blocks_placed,
        tetrahedra,
        sat_input,
        sat_graph,
        liftable,
        agree: sat_input == sat_graph && sat_graph == liftable,
    })
}

/// Symmetrizes a proper formula first unless it is already symmetric.
pub fn roundtrip_plain(f: &Cnf, blocks: &BlockSet) -> Result<RoundTripReport, RoundTripError> {
    if is_symmetric(f) {
        return roundtrip(f, blocks);
    }
    let g = symmetrize(f)?;
    let mut r = roundtrip(&g, blocks)?;
    // The input verdict is that of the plain formula.
    r.sat_input = solve(f).is_some();
    r.agree = r.sat_input == r.sat_graph && r.sat_graph == r.liftable;
    Ok(r)
}
