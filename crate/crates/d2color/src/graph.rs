//! Simple undirected graphs with opaque, totally ordered vertex names and
//! the structural checks used throughout the crate: bipartiteness, girth,
//! maximum degree and inductiveness (degeneracy).
//!
//! A [`Graph`] is immutable once built. Vertices are stored in ascending
//! name order, so a vertex index doubles as its rank in that order, and
//! edges are stored as canonical `(lo, hi)` index pairs sorted
//! lexicographically. Every tie-break in this module goes through that order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Index of an edge in a graph's canonical (sorted) edge list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, EdgeId)>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.names.len())
            .field("edges", &self.edges.len())
            .finish()
    }
}

/// Builds a graph from an edge list. Duplicate edges (in either orientation)
/// collapse to one; self-loops are rejected.
pub fn build_graph<S: AsRef<str>>(edge_list: &[(S, S)]) -> Result<Graph, GraphError> {
    Graph::from_parts(std::iter::empty::<&str>(), edge_list.iter().map(|(a, b)| (a.as_ref(), b.as_ref())))
}

impl Graph {
    /// Builds a graph from explicit vertices (which may be isolated) plus an
    /// edge list. Edge endpoints are added to the vertex set implicitly.
    pub fn from_parts<'a, V, E>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut names: BTreeSet<&str> = vertices.into_iter().collect();
        let mut raw = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a.to_string()));
            }
            names.insert(a);
            names.insert(b);
            raw.push((a, b));
        }
        let names: Vec<String> = names.into_iter().map(str::to_string).collect();
        let index: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edge_set: BTreeSet<(usize, usize)> = raw
            .into_iter()
            .map(|(a, b)| {
                let (u, v) = (index[a], index[b]);
                (u.min(v), u.max(v))
            })
            .collect();
        let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();
        let mut adj = vec![Vec::new(); names.len()];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push((v, EdgeId(i)));
            adj[v].push((u, EdgeId(i)));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { names, index, edges, adj })
    }

    pub fn empty() -> Graph {
        Graph::from_parts(std::iter::empty(), std::iter::empty()).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Neighbours of `v` with the connecting edge, in ascending vertex order.
    pub fn neighbors(&self, v: usize) -> &[(usize, EdgeId)] {
        &self.adj[v]
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e.0]
    }

    pub fn edge_names(&self, e: EdgeId) -> (&str, &str) {
        let (u, v) = self.edges[e.0];
        (&self.names[u], &self.names[v])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.adj[u]
            .binary_search_by(|&(w, _)| w.cmp(&v))
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    pub fn find_edge(&self, a: &str, b: &str) -> Option<EdgeId> {
        self.edge_between(self.vertex(a)?, self.vertex(b)?)
    }

    /// Edge list as name pairs in canonical order.
    pub fn edge_list(&self) -> Vec<(String, String)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.names[u].clone(), self.names[v].clone()))
            .collect()
    }

    /// Parses the line-oriented graph text format: `v <id>`, `e <id1> <id2>`,
    /// `#` comments and blank lines.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = |msg: &str| GraphError::Parse { line: lineno + 1, msg: msg.to_string() };
            match toks.as_slice() {
                ["v", id] => vertices.push(*id),
                ["e", a, b] => edges.push((*a, *b)),
                ["v", ..] => return Err(bad("expected `v <id>`")),
                ["e", ..] => return Err(bad("expected `e <id1> <id2>`")),
                _ => return Err(bad(&format!("unrecognized line `{line}`"))),
            }
        }
        Graph::from_parts(vertices, edges)
    }

    /// Canonical text form: one `e` line per edge, one `v` line per isolated
    /// vertex, all lines sorted lexicographically.
    pub fn to_text(&self) -> String {
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|&(u, v)| format!("e {} {}", self.names[u], self.names[v]))
            .collect();
        lines.extend(
            (0..self.vertex_count())
                .filter(|&v| self.degree(v) == 0)
                .map(|v| format!("v {}", self.names[v])),
        );
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

/// A proper 2-colouring of the vertices; `side[v]` is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<u8>,
}

impl Bipartition {
    pub fn class(&self, side: u8) -> Vec<usize> {
        (0..self.side.len()).filter(|&v| self.side[v] == side).collect()
    }
}

/// Two-colours the graph by breadth-first search, rooting every component at
/// its smallest vertex (which lands in class 0). Returns `None` when an odd
/// cycle exists.
pub fn bipartition(g: &Graph) -> Option<Bipartition> {
    let n = g.vertex_count();
    let mut side = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(Bipartition { side })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Cycle(n) => write!(f, "{n}"),
            Girth::Acyclic => f.write_str("acyclic"),
        }
    }
}

/// Length of a shortest cycle. Runs a breadth-first search from every vertex
/// and closes a cycle at the first non-tree edge seen, so the cost is
/// O(V * E) with early exit once a search can no longer improve the bound.
pub fn girth(g: &Graph) -> Girth {
    let n = g.vertex_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(w, _) in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Acyclic
    } else {
        Girth::Cycle(best)
    }
}

/// Result of iterated minimum-degree deletion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inductiveness {
    /// Largest residual degree seen at a deletion step.
    pub c: usize,
    /// The deletion sequence reversed: every vertex has at most `c`
    /// neighbours earlier in this order.
    pub order: Vec<usize>,
}

/// Computes the degeneracy by repeatedly deleting a vertex of minimum
/// residual degree (smallest name first among ties).
pub fn inductiveness(g: &Graph) -> Inductiveness {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut heap: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut deletion = Vec::with_capacity(n);
    let mut c = 0;
    while let Some((d, v)) = heap.pop_first() {
        c = c.max(d);
        removed[v] = true;
        deletion.push(v);
        for &(w, _) in g.neighbors(v) {
            if !removed[w] {
                heap.remove(&(deg[w], w));
                deg[w] -= 1;
                heap.insert((deg[w], w));
            }
        }
    }
    deletion.reverse();
    Inductiveness { c, order: deletion }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralReport {
    pub bipartition: Option<Bipartition>,
    pub girth: Girth,
    pub max_degree: usize,
    pub inductiveness: Inductiveness,
    pub vertex_count: usize,
    pub edge_count: usize,
}

impl StructuralReport {
    pub fn is_bipartite(&self) -> bool {
        self.bipartition.is_some()
    }
}

impl fmt::Display for StructuralReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertex_count)?;
        writeln!(f, "edges: {}", self.edge_count)?;
        writeln!(f, "bipartite: {}", if self.is_bipartite() { "yes" } else { "no" })?;
        writeln!(f, "girth: {}", self.girth)?;
        writeln!(f, "max_degree: {}", self.max_degree)?;
        writeln!(f, "inductiveness: {}", self.inductiveness.c)
    }
}

pub fn structural_report(g: &Graph) -> StructuralReport {
    StructuralReport {
        bipartition: bipartition(g),
        girth: girth(g),
        max_degree: g.max_degree(),
        inductiveness: inductiveness(g),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
    }
}

/// Small named graphs used by tests, examples and documentation.
pub mod families {
    use super::{build_graph, Graph};

    fn named(i: usize) -> String {
        format!("v{i:02}")
    }

    pub fn path(edges: usize) -> Graph {
        let list: Vec<(String, String)> = (0..edges).map(|i| (named(i), named(i + 1))).collect();
        build_graph(&list).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let list: Vec<(String, String)> = (0..n).map(|i| (named(i), named((i + 1) % n))).collect();
        build_graph(&list).unwrap()
    }

    pub fn star(leaves: usize) -> Graph {
        let list: Vec<(String, String)> = (1..=leaves).map(|i| (named(0), named(i))).collect();
        build_graph(&list).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut list = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                list.push((named(i), named(j)));
            }
        }
        build_graph(&list).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    #[test]
    fn empty_edge_list() {
        let g = build_graph::<&str>(&[]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (0, 0));
    }

    #[test]
    fn reversed_duplicate_collapses() {
        let g = build_graph(&[("a", "b"), ("b", "a")]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert_eq!(g.find_edge("b", "a"), g.find_edge("a", "b"));
    }

    #[test]
    fn self_loop_rejected() {
        let err = build_graph(&[("a", "a")]).unwrap_err();
        assert_eq!(err, GraphError::SelfLoop("a".into()));
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn bipartition_of_path_and_triangle() {
        let g = build_graph(&[("a", "b"), ("b", "c")]).unwrap();
        let p = bipartition(&g).unwrap();
        let names = |side| p.class(side).into_iter().map(|v| g.name(v).to_string()).collect::<Vec<_>>();
        assert_eq!(names(0), ["a", "c"]);
        assert_eq!(names(1), ["b"]);
        assert!(bipartition(&complete(3)).is_none());
        let hex = bipartition(&cycle(6)).unwrap();
        assert_eq!(hex.class(0).len(), 3);
        assert_eq!(hex.class(1).len(), 3);
    }

    #[test]
    fn girth_examples() {
        assert_eq!(girth(&cycle(6)), Girth::Cycle(6));
        assert_eq!(girth(&path(5)), Girth::Acyclic);
        assert_eq!(girth(&star(3)), Girth::Acyclic);
        assert_eq!(girth(&complete(4)), Girth::Cycle(3));
        assert_eq!(girth(&cycle(5)), Girth::Cycle(5));
    }

    #[test]
    fn inductiveness_examples() {
        assert_eq!(inductiveness(&path(4)).c, 1);
        assert_eq!(inductiveness(&star(3)).c, 1);
        assert_eq!(inductiveness(&cycle(6)).c, 2);
        assert_eq!(inductiveness(&complete(4)).c, 3);
        assert_eq!(inductiveness(&Graph::empty()).c, 0);
    }

    #[test]
    fn report_examples() {
        let r = structural_report(&cycle(6));
        assert!(r.is_bipartite());
        assert_eq!(r.girth, Girth::Cycle(6));
        assert_eq!((r.max_degree, r.inductiveness.c, r.vertex_count, r.edge_count), (2, 2, 6, 6));
        let r = structural_report(&star(3));
        assert!(r.is_bipartite());
        assert_eq!(r.girth, Girth::Acyclic);
        assert_eq!((r.max_degree, r.inductiveness.c), (3, 1));
    }

    #[test]
    fn text_format_round_trip() {
        let text = "# demo\nv lonely\ne b a\ne b c\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.to_text(), "e a b\ne b c\nv lonely\n");
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn text_format_errors() {
        assert!(matches!(Graph::parse("e a\n"), Err(GraphError::Parse { line: 1, .. })));
        assert!(matches!(Graph::parse("x y z\n"), Err(GraphError::Parse { .. })));
        assert!(matches!(Graph::parse("e a a\n"), Err(GraphError::SelfLoop(_))));
    }
}
