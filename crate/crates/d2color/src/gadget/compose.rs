//! Gluing gadget copies together, and wider fanouts built from a base
//! fanout by chaining copies.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{build_graph, EdgeId, Graph};

use super::{BoundarySpec, Gadget, Role};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("fanout width must be at least 1")]
    ZeroWidth,
    #[error("base gadget is a {0}, not a fanout")]
    NotFanout(Role),
    #[error("a width-1 base fanout cannot be chained to width {0}")]
    NarrowBase(usize),
}

/// Placement of one gadget copy inside an assembled graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitMap {
    /// Assembled vertex for each gadget vertex. A glued free endpoint maps
    /// to the inner endpoint on the other side.
    pub vertex: Vec<usize>,
    /// Assembled edge for each gadget edge.
    pub edge: Vec<EdgeId>,
}

/// Collects named gadget copies and output-to-input fusions, then builds
/// the glued graph. Copy `p` of a gadget gets vertex names `p.<local>`.
#[derive(Debug, Default)]
pub struct Assembly<'a> {
    units: Vec<(String, &'a Gadget)>,
    alias: HashMap<String, String>,
    extra: Vec<(String, String)>,
}

impl<'a> Assembly<'a> {
    pub fn new() -> Assembly<'a> {
        Assembly::default()
    }

    /// Adds a copy and returns its unit index.
    pub fn add(&mut self, prefix: impl Into<String>, gadget: &'a Gadget) -> usize {
        self.units.push((prefix.into(), gadget));
        self.units.len() - 1
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    fn local(&self, unit: usize, v: usize) -> String {
        let (prefix, g) = &self.units[unit];
        format!("{prefix}.{}", g.graph().name(v))
    }

    /// Glues output `out` of `producer` to input `inp` of `consumer`.
    pub fn fuse(&mut self, producer: usize, out: usize, consumer: usize, inp: usize) {
        let o = self.units[producer].1.outputs()[out];
        let i = self.units[consumer].1.inputs()[inp];
        let (a, b) = (self.local(producer, o.inner), self.local(producer, o.free));
        let (d, c) = (self.local(consumer, i.inner), self.local(consumer, i.free));
        self.alias.insert(b, d);
        self.alias.insert(c, a);
    }

    /// Adds an edge outside every copy, between already named vertices or
    /// new ones.
    pub fn extra_edge(&mut self, a: impl Into<String>, b: impl Into<String>) {
        self.extra.push((a.into(), b.into()));
    }

    pub fn vertex_name(&self, unit: usize, v: usize) -> String {
        self.resolve(self.local(unit, v))
    }

    fn resolve(&self, mut name: String) -> String {
        while let Some(next) = self.alias.get(&name) {
            name = next.clone();
        }
        name
    }

    pub fn build(&self) -> (Graph, Vec<UnitMap>) {
        let mut edges = Vec::new();
        for (u, (_, g)) in self.units.iter().enumerate() {
            for e in g.graph().edge_ids() {
                let (x, y) = g.graph().endpoints(e);
                edges.push((self.vertex_name(u, x), self.vertex_name(u, y)));
            }
        }
        edges.extend(self.extra.iter().map(|(a, b)| (self.resolve(a.clone()), self.resolve(b.clone()))));
        let graph = build_graph(&edges).expect("gadget copies have no self-loops");
        let maps = self
            .units
            .iter()
            .enumerate()
            .map(|(u, (_, g))| {
                let vertex: Vec<usize> = (0..g.graph().vertex_count())
                    .map(|v| graph.vertex(&self.vertex_name(u, v)).expect("placed vertex"))
                    .collect();
                let edge = g
                    .graph()
                    .edge_ids()
                    .map(|e| {
                        let (x, y) = g.graph().endpoints(e);
                        graph.edge_between(vertex[x], vertex[y]).expect("placed edge")
                    })
                    .collect();
                UnitMap { vertex, edge }
            })
            .collect();
        (graph, maps)
    }
}

/// Placement of one base copy in a chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCopy {
    pub map: UnitMap,
}

/// A fanout of some width made of base copies glued in a chain: the last
/// output of each copy feeds the first input of the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanoutChain {
    pub gadget: Gadget,
    pub copies: Vec<ChainCopy>,
    /// Base-level source of every composite input: `(copy, input index)`.
    pub inputs: Vec<(usize, usize)>,
    /// Base-level source of every composite output: `(copy, output index)`.
    pub outputs: Vec<(usize, usize)>,
    /// Base outputs left unused, which stay as plain pendant edges.
    pub demoted: Vec<(usize, usize)>,
}

/// Number of base copies needed for width `w` from a base of width `b`.
pub fn copies_needed(b: usize, w: usize) -> usize {
    if w <= b {
        1
    } else {
        (w - 1).div_ceil(b - 1)
    }
}

/// Plans and glues the chain for width `w`. Outputs are taken copy by copy
/// (every output but the chaining one, then all outputs of the last copy);
/// those beyond `w` are demoted to pendants.
pub fn fanout_chain(base: &Gadget, w: usize) -> Result<FanoutChain, ComposeError> {
    let Role::Fanout(b) = base.role() else {
        return Err(ComposeError::NotFanout(base.role()));
    };
    if w == 0 {
        return Err(ComposeError::ZeroWidth);
    }
    if b < 2 && w > b {
        return Err(ComposeError::NarrowBase(w));
    }
    let k = copies_needed(b, w);
    let mut asm = Assembly::new();
    for j in 0..k {
        asm.add(format!("c{j}"), base);
    }
    for j in 1..k {
        asm.fuse(j - 1, b - 1, j, 0);
    }
    let inputs: Vec<(usize, usize)> = (0..base.inputs().len())
        .map(|i| (0, i))
        .chain((1..k).flat_map(|j| (1..base.inputs().len()).map(move |i| (j, i))))
        .collect();
    let mut all_outputs = Vec::new();
    for j in 0..k {
        let last = if j + 1 == k { b } else { b - 1 };
        all_outputs.extend((0..last).map(|o| (j, o)));
    }
    let demoted = all_outputs.split_off(w);
    let outputs = all_outputs;
    let (graph, maps) = asm.build();
    let spec = |(j, e): (usize, usize), free: usize| -> BoundarySpec {
        let map = &maps[j];
        let (x, y) = graph.endpoints(map.edge[e]);
        let free = map.vertex[free];
        (graph.name(x).to_string(), graph.name(y).to_string(), graph.name(free).to_string())
    };
    let in_specs: Vec<BoundarySpec> = inputs
        .iter()
        .map(|&(j, i)| {
            let bd = base.inputs()[i];
            spec((j, bd.edge.0), bd.free)
        })
        .collect();
    let out_specs: Vec<BoundarySpec> = outputs
        .iter()
        .map(|&(j, o)| {
            let bd = base.outputs()[o];
            spec((j, bd.edge.0), bd.free)
        })
        .collect();
    let gadget = Gadget::new(graph, Role::Fanout(w), &in_specs, &out_specs)
        .expect("composite boundary edges exist");
    Ok(FanoutChain {
        gadget,
        copies: maps.into_iter().map(|map| ChainCopy { map }).collect(),
        inputs,
        outputs,
        demoted,
    })
}

/// A fanout with `w` outputs. Returns the base unchanged when the widths
/// already match.
pub fn fanout_of_width(base: &Gadget, w: usize) -> Result<Gadget, ComposeError> {
    if base.role() == Role::Fanout(w) {
        return Ok(base.clone());
    }
    fanout_chain(base, w).map(|c| c.gadget)
}
