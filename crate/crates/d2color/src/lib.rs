//! Distance-2 (strong) edge colouring and the reduction from
//! Not-All-Equal 3-SAT to 5-colourability on bipartite subcubic graphs of
//! girth 6.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`]: simple undirected graphs and structural measurements.
//! * [`coloring`]: the conflict relation, verification and exact solvers.
//! * [`gadget`]: gadgets with boundary edges, their certification, synthesis
//!   and the certified set shipped with the crate.
//! * [`reduction`]: NAE-3SAT instances, the graph built from one, and the
//!   transformations between assignments and colourings.
//! * [`dot`]: Graphviz output.

pub mod coloring;
pub mod dot;
pub mod gadget;
pub mod graph;
pub mod reduction;

pub use coloring::{
    conflict_relation, solve, verify, Color, ConflictRelation, D2Coloring, Hints, Palette,
    SolveOutcome,
};
pub use graph::{build_graph, EdgeId, Graph, GraphError};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/strong-coloring.md")]
    mod strong_coloring {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/gadgets.md")]
    mod gadgets {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
