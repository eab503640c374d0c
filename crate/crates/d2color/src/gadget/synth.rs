//! Bounded search for certified gadgets.
//!
//! Variable and clause gadgets come from an isomorph-free enumeration of
//! small connected graphs (bipartite, subcubic, girth at least 6), grown one
//! pendant vertex or one closing edge at a time, with every admissible
//! choice of leaves as boundary edges. Fanouts come from a family of
//! hexagon trees: hexagons joined by single bridge edges between
//! even-numbered corners, input at corner 0 of the root, outputs at free
//! even corners of odd-depth hexagons, and a pendant on every other corner.
//! The first certified fanout is then pruned greedily, dropping any pendant
//! whose removal keeps it certified.
//!
//! Candidates are visited in a fixed order, so results are deterministic.

use std::collections::{HashMap, VecDeque};
use std::time::{Duration, Instant};

use petgraph::algo::is_isomorphic;
use petgraph::graph::UnGraph;
use thiserror::Error;

use crate::graph::{build_graph, Graph};

use super::certify::{certify, CertReport};
use super::{BoundarySpec, Gadget, Role};

/// Largest vertex bound accepted for the generic enumeration.
pub const GENERIC_VERTEX_GUARD: usize = 14;
/// Largest hexagon count tried for fanouts.
pub const HEXAGON_GUARD: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthBounds {
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Wall-clock limit; `None` searches the whole bounded space.
    pub time_budget: Option<Duration>,
}

impl SynthBounds {
    pub fn new(max_vertices: usize, max_edges: usize) -> SynthBounds {
        SynthBounds { max_vertices, max_edges, time_budget: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("bounds must allow at least one edge and two vertices")]
    Empty,
    #[error("generic enumeration is limited to {GENERIC_VERTEX_GUARD} vertices, asked for {0}")]
    TooLarge(usize),
    #[error("fanout width must be at least 1")]
    ZeroWidth,
}

#[derive(Debug, Clone)]
pub enum SynthResult {
    Found { gadget: Gadget, report: CertReport, candidates: usize },
    /// Nothing certified within the bounds. `exhausted` is false when the
    /// time budget stopped the search early.
    NotFound { candidates: usize, exhausted: bool },
}

impl SynthResult {
    pub fn gadget(&self) -> Option<&Gadget> {
        match self {
            SynthResult::Found { gadget, .. } => Some(gadget),
            SynthResult::NotFound { .. } => None,
        }
    }
}

pub fn synthesize_gadget(role: Role, bounds: &SynthBounds) -> Result<SynthResult, SynthError> {
    if bounds.max_edges < 1 || bounds.max_vertices < 2 {
        return Err(SynthError::Empty);
    }
    let deadline = bounds.time_budget.map(|d| Instant::now() + d);
    match role {
        Role::Fanout(0) => Err(SynthError::ZeroWidth),
        Role::Fanout(w) => Ok(synth_fanout(w, bounds, deadline)),
        Role::Variable | Role::Clause => {
            if bounds.max_vertices > GENERIC_VERTEX_GUARD {
                return Err(SynthError::TooLarge(bounds.max_vertices));
            }
            Ok(synth_generic(role, bounds, deadline))
        }
    }
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// Small graphs as sorted adjacency lists over vertices `0..n`.
#[derive(Debug, Clone)]
struct Small {
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Small {
    fn to_graph(&self) -> Graph {
        let edges: Vec<(String, String)> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (name(u), name(v))))
            .collect();
        build_graph(&edges).expect("no self-loops")
    }

    fn to_petgraph(&self) -> UnGraph<(), ()> {
        let mut g = UnGraph::new_undirected();
        let nodes: Vec<_> = (0..self.adj.len()).map(|_| g.add_node(())).collect();
        for (u, ns) in self.adj.iter().enumerate() {
            for &v in ns.iter().filter(|&&v| u < v) {
                g.add_edge(nodes[u], nodes[v], ());
            }
        }
        g
    }

    fn dist(&self, s: usize) -> Vec<usize> {
        let mut d = vec![usize::MAX; self.adj.len()];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &w in &self.adj[u] {
                if d[w] == usize::MAX {
                    d[w] = d[u] + 1;
                    q.push_back(w);
                }
            }
        }
        d
    }

    /// Cheap isomorphism invariant: degree sequence and sorted distance
    /// profiles.
    fn invariant(&self) -> Vec<usize> {
        let mut degs: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        degs.sort_unstable();
        let mut profiles: Vec<Vec<usize>> = (0..self.adj.len())
            .map(|s| {
                let mut d = self.dist(s);
                d.sort_unstable();
                d
            })
            .collect();
        profiles.sort();
        degs.into_iter().chain(profiles.into_iter().flatten()).collect()
    }

    fn children(&self, max_vertices: usize, max_edges: usize) -> Vec<Small> {
        let n = self.adj.len();
        let mut out = Vec::new();
        if self.edges + 1 > max_edges {
            return out;
        }
        if n < max_vertices {
            for u in 0..n {
                if self.adj[u].len() < 3 {
                    let mut c = self.clone();
                    c.adj.push(vec![u]);
                    c.adj[u].push(n);
                    c.edges += 1;
                    out.push(c);
                }
            }
        }
        for u in 0..n {
            if self.adj[u].len() >= 3 {
                continue;
            }
            let d = self.dist(u);
            for v in u + 1..n {
                if self.adj[v].len() < 3 && d[v] >= 5 && d[v] % 2 == 1 {
                    let mut c = self.clone();
                    c.adj[u].push(v);
                    c.adj[v].push(u);
                    c.edges += 1;
                    out.push(c);
                }
            }
        }
        out
    }
}

fn name(v: usize) -> String {
    format!("n{v:02}")
}

/// Connected bipartite subcubic graphs of girth at least 6 within the
/// bounds, one per isomorphism class, ordered by vertex count, then edge
/// count, then discovery.
fn small_graphs(max_vertices: usize, max_edges: usize) -> Vec<Small> {
    let mut levels: Vec<Vec<Small>> = vec![vec![Small { adj: vec![vec![1], vec![0]], edges: 1 }]];
    loop {
        let mut next: Vec<Small> = Vec::new();
        let mut buckets: HashMap<(usize, Vec<usize>), Vec<usize>> = HashMap::new();
        for g in levels.last().expect("level") {
            for c in g.children(max_vertices, max_edges) {
                let key = (c.adj.len(), c.invariant());
                let slot = buckets.entry(key).or_default();
                let pc = c.to_petgraph();
                if slot.iter().any(|&i| is_isomorphic(&next[i].to_petgraph(), &pc)) {
                    continue;
                }
                slot.push(next.len());
                next.push(c);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let mut all: Vec<Small> = levels.into_iter().flatten().collect();
    all.sort_by_key(|g| (g.adj.len(), g.edges));
    all
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn leaf_spec(g: &Small, leaf: usize) -> BoundarySpec {
    let inner = g.adj[leaf][0];
    let (a, b) = if leaf < inner { (leaf, inner) } else { (inner, leaf) };
    (name(a), name(b), name(leaf))
}

fn synth_generic(role: Role, bounds: &SynthBounds, deadline: Option<Instant>) -> SynthResult {
    let mut candidates = 0;
    for g in small_graphs(bounds.max_vertices, bounds.max_edges) {
        if role == Role::Variable && g.edges != 7 {
            continue;
        }
        let leaves: Vec<usize> = (0..g.adj.len()).filter(|&v| g.adj[v].len() == 1).collect();
        let graph = g.to_graph();
        let designations: Vec<(Vec<usize>, Vec<usize>)> = match role {
            Role::Clause => combinations(&leaves, 3).into_iter().map(|c| (c, Vec::new())).collect(),
            _ => combinations(&leaves, 2)
                .into_iter()
                .flat_map(|ins| {
                    let rest: Vec<usize> = leaves.iter().copied().filter(|l| !ins.contains(l)).collect();
                    combinations(&rest, 2).into_iter().map(move |outs| (ins.clone(), outs))
                })
                .collect(),
        };
        for (ins, outs) in designations {
            if expired(deadline) {
                return SynthResult::NotFound { candidates, exhausted: false };
            }
            let ins: Vec<BoundarySpec> = ins.iter().map(|&l| leaf_spec(&g, l)).collect();
            let outs: Vec<BoundarySpec> = outs.iter().map(|&l| leaf_spec(&g, l)).collect();
            let gadget = Gadget::new(graph.clone(), role, &ins, &outs).expect("leaf edges exist");
            if gadget.check_structure().is_err() {
                continue;
            }
            candidates += 1;
            let report = certify(&gadget);
            if report.passed() {
                return SynthResult::Found { gadget, report, candidates };
            }
        }
    }
    SynthResult::NotFound { candidates, exhausted: true }
}

/// Shape of a hexagon tree: `parent[i] = (parent, corner)` for every
/// hexagon but the root, children listed after their parents.
type Shape = Vec<Option<(usize, usize)>>;

/// Hexagon trees with `h` hexagons. Each hexagon hangs children off
/// corners 2 and 4; its corner 0 faces the parent (or the input).
fn shapes(h: usize) -> Vec<Shape> {
    // Subtree descriptions as nested (corner-2 child, corner-4 child).
    #[derive(Clone)]
    enum T {
        Node(Option<Box<T>>, Option<Box<T>>),
    }
    fn trees(n: usize) -> Vec<T> {
        if n == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for left in 0..n {
            let right = n - 1 - left;
            let ls: Vec<Option<Box<T>>> =
                if left == 0 { vec![None] } else { trees(left).into_iter().map(|t| Some(Box::new(t))).collect() };
            let rs: Vec<Option<Box<T>>> =
                if right == 0 { vec![None] } else { trees(right).into_iter().map(|t| Some(Box::new(t))).collect() };
            for l in &ls {
                for r in &rs {
                    out.push(T::Node(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    fn flatten(t: &T, parent: Option<(usize, usize)>, out: &mut Shape) {
        let me = out.len();
        out.push(parent);
        let T::Node(l, r) = t;
        if let Some(l) = l {
            flatten(l, Some((me, 2)), out);
        }
        if let Some(r) = r {
            flatten(r, Some((me, 4)), out);
        }
    }
    trees(h)
        .iter()
        .map(|t| {
            let mut s = Vec::new();
            flatten(t, None, &mut s);
            s
        })
        .collect()
}

fn corner(h: usize, i: usize) -> String {
    format!("h{h}c{i}")
}

/// Builds the fanout for a shape, output corners and the set of corners
/// carrying pendants.
fn hex_fanout(shape: &Shape, outs: &[(usize, usize)], pendants: &[(usize, usize)]) -> Gadget {
    let mut edges: Vec<(String, String)> = Vec::new();
    for h in 0..shape.len() {
        for i in 0..6 {
            edges.push((corner(h, i), corner(h, (i + 1) % 6)));
        }
        if let Some((p, c)) = shape[h] {
            edges.push((corner(p, c), corner(h, 0)));
        }
    }
    for &(h, i) in pendants {
        edges.push((corner(h, i), format!("p{h}c{i}")));
    }
    edges.push((corner(0, 0), "fin".into()));
    let mut out_specs = Vec::new();
    for (k, &(h, i)) in outs.iter().enumerate() {
        let free = format!("fout{k}");
        edges.push((corner(h, i), free.clone()));
        out_specs.push(spec(&corner(h, i), &free));
    }
    let graph = build_graph(&edges).expect("no self-loops");
    Gadget::new(graph, Role::Fanout(outs.len()), &[spec(&corner(0, 0), "fin")], &out_specs)
        .expect("boundary edges exist")
}

fn spec(inner: &str, free: &str) -> BoundarySpec {
    let (a, b) = if inner < free { (inner, free) } else { (free, inner) };
    (a.to_string(), b.to_string(), free.to_string())
}

fn depth(shape: &Shape, h: usize) -> usize {
    match shape[h] {
        None => 0,
        Some((p, _)) => 1 + depth(shape, p),
    }
}

fn synth_fanout(w: usize, bounds: &SynthBounds, deadline: Option<Instant>) -> SynthResult {
    let mut candidates = 0;
    for h in 1..=HEXAGON_GUARD.min(bounds.max_vertices / 6) {
        for shape in shapes(h) {
            let used: Vec<(usize, usize)> = shape.iter().flatten().copied().collect();
            let slots: Vec<(usize, usize)> = (0..h)
                .filter(|&x| depth(&shape, x) % 2 == 1)
                .flat_map(|x| [(x, 2), (x, 4)])
                .filter(|s| !used.contains(s))
                .collect();
            let idx: Vec<usize> = (0..slots.len()).collect();
            for pick in combinations(&idx, w) {
                if expired(deadline) {
                    return SynthResult::NotFound { candidates, exhausted: false };
                }
                let outs: Vec<(usize, usize)> = pick.iter().map(|&i| slots[i]).collect();
                let pendants: Vec<(usize, usize)> = (0..h)
                    .flat_map(|x| (0..6).map(move |i| (x, i)))
                    .filter(|&(x, i)| {
                        !(x == 0 && i == 0) && !used.contains(&(x, i)) && !outs.contains(&(x, i)) && !(i == 0 && x > 0)
                    })
                    .collect();
                let gadget = hex_fanout(&shape, &outs, &pendants);
                let g = gadget.graph();
                if g.vertex_count() > bounds.max_vertices || g.edge_count() > bounds.max_edges {
                    continue;
                }
                candidates += 1;
                let report = certify(&gadget);
                if report.passed() {
                    let (gadget, report) = prune(&shape, &outs, pendants, gadget, report);
                    return SynthResult::Found { gadget, report, candidates };
                }
            }
        }
    }
    SynthResult::NotFound { candidates, exhausted: true }
}

/// Drops pendants one at a time, in corner order, whenever the smaller
/// fanout still certifies.
fn prune(
    shape: &Shape,
    outs: &[(usize, usize)],
    mut pendants: Vec<(usize, usize)>,
    mut gadget: Gadget,
    mut report: CertReport,
) -> (Gadget, CertReport) {
    let mut i = 0;
    while i < pendants.len() {
        let mut fewer = pendants.clone();
        fewer.remove(i);
        let candidate = hex_fanout(shape, outs, &fewer);
        let r = certify(&candidate);
        if r.passed() {
            pendants = fewer;
            gadget = candidate;
            report = r;
        } else {
            i += 1;
        }
    }
    (gadget, report)
}
