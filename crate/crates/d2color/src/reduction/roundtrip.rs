//! End-to-end check of the equivalence on one instance.
//!
//! The instance is compiled, the graph is solved with five colours under
//! the pinned hints, and a colouring, if found, is read back into an
//! assignment and checked clause by clause. Independently the `2^n`
//! assignments are enumerated. The two verdicts must agree.

use std::fmt;

use thiserror::Error;

use crate::coloring::{conflict_relation, solve_with, SolveError, SolveOptions, SolveOutcome, SolveStats};
use crate::gadget::GadgetSet;

use super::transform::{coloring_to_assignment, TransformError};
use super::{check_nae, compile, nae_brute_force_guarded, Assignment, NaeError, NaeInstance, DEFAULT_NAE_GUARD};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundTripError {
    #[error(transparent)]
    Nae(#[from] NaeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("solver node budget exceeded")]
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTripOptions {
    pub solver: SolveOptions,
    pub nae_guard: usize,
}

impl Default for RoundTripOptions {
    fn default() -> RoundTripOptions {
        RoundTripOptions { solver: SolveOptions::default(), nae_guard: DEFAULT_NAE_GUARD }
    }
}

#[derive(Debug, Clone)]
pub struct RoundTrip {
    /// First satisfying assignment found by enumeration.
    pub brute: Option<Assignment>,
    /// Whether the graph admitted a 5-colouring extending the pinned hints.
    pub colorable: bool,
    /// Assignment read back from the colouring, when there was one.
    pub extracted: Option<Assignment>,
    /// Why the read-back failed, if it did.
    pub extraction_error: Option<TransformError>,
    /// Index of a clause the extracted assignment leaves all-equal.
    pub extracted_violates: Option<usize>,
    pub vertices: usize,
    pub edges: usize,
    pub stats: SolveStats,
}

impl RoundTrip {
    /// Satisfiability as seen through the graph: colourable, and the
    /// extracted assignment really satisfies every clause.
    pub fn reduction_verdict(&self) -> bool {
        self.colorable && self.extraction_error.is_none() && self.extracted_violates.is_none()
    }

    pub fn agrees(&self) -> bool {
        self.brute.is_some() == self.colorable && self.reduction_verdict() == self.colorable
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "satisfiable"
    } else {
        "unsatisfiable"
    }
}

impl fmt::Display for RoundTrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph: {} vertices, {} edges", self.vertices, self.edges)?;
        writeln!(f, "brute force: {}", yes_no(self.brute.is_some()))?;
        writeln!(f, "colouring: {}", if self.colorable { "found" } else { "none" })?;
        if let Some(a) = &self.extracted {
            let bits: String = a.values.iter().map(|&b| if b { '1' } else { '0' }).collect();
            writeln!(f, "extracted: {bits}")?;
        }
        if let Some(e) = &self.extraction_error {
            writeln!(f, "extraction failed: {e}")?;
        }
        if let Some(j) = self.extracted_violates {
            writeln!(f, "extracted assignment leaves clause {} all-equal", j + 1)?;
        }
        write!(f, "{}", if self.agrees() { "AGREE" } else { "DISAGREE" })
    }
}

pub fn roundtrip(
    inst: &NaeInstance,
    gadgets: &GadgetSet,
    opts: &RoundTripOptions,
) -> Result<RoundTrip, RoundTripError> {
    let brute = nae_brute_force_guarded(inst, opts.nae_guard)?;
    let art = compile(inst, gadgets);
    let rel = conflict_relation(&art.graph);
    let (outcome, stats) = solve_with(&art.graph, &rel, 5, &art.pinned_hints, &opts.solver)?;
    let mut out = RoundTrip {
        brute,
        colorable: false,
        extracted: None,
        extraction_error: None,
        extracted_violates: None,
        vertices: art.graph.vertex_count(),
        edges: art.graph.edge_count(),
        stats,
    };
    match outcome {
        SolveOutcome::BudgetExceeded => return Err(RoundTripError::BudgetExceeded),
        SolveOutcome::Unsat(_) => {}
        SolveOutcome::Sat(c) => {
            out.colorable = true;
            match coloring_to_assignment(&art, &c) {
                Ok(a) => {
                    out.extracted_violates = check_nae(inst, &a)?.err();
                    out.extracted = Some(a);
                }
                Err(e) => out.extraction_error = Some(e),
            }
        }
    }
    Ok(out)
}
