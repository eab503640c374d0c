//! Gadgets: small graphs with designated boundary edges that the reduction
//! glues together, their text format and structural invariants.
//!
//! A boundary edge ends in a *free* endpoint of degree 1 inside the gadget.
//! Gluing an output edge `a-b` (free `b`) to an input edge `c-d` (free `c`)
//! yields the single edge `a-d`.

use std::fmt;

use thiserror::Error;

use crate::graph::{bipartition, girth, Bipartition, EdgeId, Girth, Graph, GraphError};

pub mod certify;
pub mod compose;
pub mod shipped;
pub mod synth;

pub use certify::{
    certify, certify_clause, certify_fanout, certify_variable, CertOutcome, CertReport,
    Counterexample, Template, TemplateTable,
};
pub use compose::{fanout_chain, fanout_of_width, Assembly, ChainCopy, ComposeError, FanoutChain, UnitMap};
pub use certify::boundary_colorable;
pub use shipped::{Certified, GadgetSet, GadgetSetError};
pub use synth::{synthesize_gadget, SynthBounds, SynthError, SynthResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Fanout(usize),
    Variable,
    Clause,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Fanout(w) => write!(f, "fanout {w}"),
            Role::Variable => f.write_str("variable"),
            Role::Clause => f.write_str("clause"),
        }
    }
}

impl std::str::FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Role, String> {
        match s.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["variable"] => Ok(Role::Variable),
            ["clause"] => Ok(Role::Clause),
            ["fanout", w] => w.parse().map(Role::Fanout).map_err(|_| format!("bad fanout width `{w}`")),
            _ => Err(format!("unknown role `{}`", s.trim())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryEdge {
    pub edge: EdgeId,
    pub free: usize,
    pub inner: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("boundary edge {0}-{1} is not an edge of the gadget")]
    UnknownEdge(String, String),
    #[error("boundary free endpoint `{0}` is not an endpoint of its edge")]
    BadFreeEndpoint(String),
    #[error("missing `role` line")]
    MissingRole,
}

/// Violations of the gadget invariants, kept apart from behavioural failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("vertex `{0}` has degree {1}, above 3")]
    DegreeTooHigh(String, usize),
    #[error("cycle of length {0}, below 6")]
    ShortCycle(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("free endpoint `{0}` has degree {1}, expected 1")]
    FreeDegree(String, usize),
    #[error("edge {0}-{1} is designated as a boundary edge twice")]
    RepeatedBoundary(String, String),
    #[error("{role} needs {expected}, found {found}")]
    Arity { role: Role, expected: String, found: String },
    #[error("{0}")]
    ClassRule(String),
}

/// A graph with its role and ordered input and output boundary edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    graph: Graph,
    role: Role,
    inputs: Vec<BoundaryEdge>,
    outputs: Vec<BoundaryEdge>,
}

/// A boundary designation by vertex names: `(id1, id2, free)`.
pub type BoundarySpec = (String, String, String);

impl Gadget {
    pub fn new(
        graph: Graph,
        role: Role,
        inputs: &[BoundarySpec],
        outputs: &[BoundarySpec],
    ) -> Result<Gadget, GadgetError> {
        let resolve = |spec: &BoundarySpec, direction| -> Result<BoundaryEdge, GadgetError> {
            let (a, b, free) = spec;
            let edge = graph
                .find_edge(a, b)
                .ok_or_else(|| GadgetError::UnknownEdge(a.clone(), b.clone()))?;
            let (u, v) = graph.endpoints(edge);
            let free_v = graph.vertex(free).ok_or_else(|| GadgetError::BadFreeEndpoint(free.clone()))?;
            let inner = if free_v == u {
                v
            } else if free_v == v {
                u
            } else {
                return Err(GadgetError::BadFreeEndpoint(free.clone()));
            };
            Ok(BoundaryEdge { edge, free: free_v, inner, direction })
        };
        let inputs = inputs
            .iter()
            .map(|s| resolve(s, Direction::Input))
            .collect::<Result<Vec<_>, _>>()?;
        let outputs = outputs
            .iter()
            .map(|s| resolve(s, Direction::Output))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Gadget { graph, role, inputs, outputs })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn inputs(&self) -> &[BoundaryEdge] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[BoundaryEdge] {
        &self.outputs
    }

    /// Inputs followed by outputs.
    pub fn boundary(&self) -> impl Iterator<Item = &BoundaryEdge> {
        self.inputs.iter().chain(&self.outputs)
    }

    pub fn is_boundary(&self, e: EdgeId) -> bool {
        self.boundary().any(|b| b.edge == e)
    }

    /// Edges that are not boundary edges.
    pub fn internal_edge_count(&self) -> usize {
        self.graph.edge_count() - self.inputs.len() - self.outputs.len()
    }

    /// Parses the gadget text format: graph lines plus
    /// `in <id1> <id2> <free>`, `out <id1> <id2> <free>` and
    /// `role <fanout w | variable | clause>`.
    pub fn parse(text: &str) -> Result<Gadget, GadgetError> {
        let mut graph_lines = String::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        let mut role = None;
        for (lineno, line) in text.lines().enumerate() {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: String| GadgetError::Parse { line: lineno + 1, msg };
            match toks.as_slice() {
                ["in", a, b, f] => inputs.push((a.to_string(), b.to_string(), f.to_string())),
                ["out", a, b, f] => outputs.push((a.to_string(), b.to_string(), f.to_string())),
                ["in" | "out", ..] => return Err(bad("expected `in|out <id1> <id2> <free>`".into())),
                ["role", rest @ ..] => role = Some(rest.join(" ").parse().map_err(bad)?),
                _ => {
                    // keep line numbering aligned for graph parse errors
                    graph_lines.push_str(line);
                }
            }
            graph_lines.push('\n');
        }
        let graph = Graph::parse(&graph_lines)?;
        Gadget::new(graph, role.ok_or(GadgetError::MissingRole)?, &inputs, &outputs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("role {}\n", self.role);
        out.push_str(&self.graph.to_text());
        for b in self.boundary() {
            let (x, y) = self.graph.edge_names(b.edge);
            let dir = match b.direction {
                Direction::Input => "in",
                Direction::Output => "out",
            };
            out.push_str(&format!("{dir} {x} {y} {}\n", self.graph.name(b.free)));
        }
        out
    }

    /// Checks every structural invariant and returns the bipartition.
    ///
    /// Besides bipartite, subcubic, connected and girth at least 6, the
    /// inner endpoints must sit in classes that keep glued graphs
    /// bipartite: a fanout's inputs in one class and its outputs in the
    /// other, all four boundary edges of a variable gadget in one class, all
    /// three inputs of a clause gadget in one class.
    pub fn check_structure(&self) -> Result<Bipartition, StructuralError> {
        let g = &self.graph;
        let parts = bipartition(g).ok_or(StructuralError::NotBipartite)?;
        for v in 0..g.vertex_count() {
            if g.degree(v) > 3 {
                return Err(StructuralError::DegreeTooHigh(g.name(v).to_string(), g.degree(v)));
            }
        }
        if let Girth::Cycle(len) = girth(g) {
            if len < 6 {
                return Err(StructuralError::ShortCycle(len));
            }
        }
        if !is_connected(g) {
            return Err(StructuralError::Disconnected);
        }
        let mut seen = Vec::new();
        for b in self.boundary() {
            if g.degree(b.free) != 1 {
                return Err(StructuralError::FreeDegree(g.name(b.free).to_string(), g.degree(b.free)));
            }
            if seen.contains(&b.edge) {
                let (x, y) = g.edge_names(b.edge);
                return Err(StructuralError::RepeatedBoundary(x.to_string(), y.to_string()));
            }
            seen.push(b.edge);
        }
        let (ni, no) = (self.inputs.len(), self.outputs.len());
        let arity = |expected: &str| StructuralError::Arity {
            role: self.role,
            expected: expected.to_string(),
            found: format!("{ni} inputs, {no} outputs, {} internal edges", self.internal_edge_count()),
        };
        let side = |b: &BoundaryEdge| parts.side[b.inner];
        let uniform = |bs: &[BoundaryEdge]| bs.windows(2).all(|w| side(&w[0]) == side(&w[1]));
        match self.role {
            Role::Fanout(w) => {
                if ni < 1 || w < 1 || no != w {
                    return Err(arity(&format!("at least 1 input and exactly {w} >= 1 outputs")));
                }
                if !uniform(&self.inputs) || !uniform(&self.outputs) || side(&self.inputs[0]) == side(&self.outputs[0])
                {
                    return Err(StructuralError::ClassRule(
                        "fanout inputs and outputs must attach at opposite classes".into(),
                    ));
                }
            }
            Role::Variable => {
                if ni != 2 || no != 2 || self.internal_edge_count() != 3 {
                    return Err(arity("2 inputs, 2 outputs and 3 internal edges"));
                }
                let all: Vec<BoundaryEdge> = self.boundary().copied().collect();
                if !uniform(&all) {
                    return Err(StructuralError::ClassRule(
                        "variable boundary edges must attach in one class".into(),
                    ));
                }
            }
            Role::Clause => {
                if ni != 3 || no != 0 {
                    return Err(arity("3 inputs and no outputs"));
                }
                if !uniform(&self.inputs) {
                    return Err(StructuralError::ClassRule(
                        "clause inputs must attach in one class".into(),
                    ));
                }
            }
        }
        Ok(parts)
    }
}

fn is_connected(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &(w, _) in g.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}
