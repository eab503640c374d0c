//! Graphviz export.
//!
//! Vertices and edges are written in name order. When the graph is
//! bipartite the two classes get different node shapes (class 0 circles,
//! class 1 boxes); otherwise every vertex is an ellipse. Coloured edges are
//! labelled with their palette label.

use std::fmt::Write;

use crate::coloring::D2Coloring;
use crate::graph::{bipartition, Graph};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &Graph, coloring: Option<&D2Coloring>) -> String {
    let classes = bipartition(g);
    let mut out = String::from("graph G {\n");
    let mut vertices: Vec<usize> = (0..g.vertex_count()).collect();
    vertices.sort_by(|&a, &b| g.name(a).cmp(g.name(b)));
    for v in vertices {
        let shape = match &classes {
            Some(b) if b.side[v] == 0 => "circle",
            Some(_) => "box",
            None => "ellipse",
        };
        writeln!(out, "  {} [shape={shape}];", quote(g.name(v))).expect("write to string");
    }
    let mut edges: Vec<(&str, &str, Option<String>)> = g
        .edge_ids()
        .map(|e| {
            let (a, b) = g.edge_names(e);
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            let label = coloring.and_then(|c| c.get(e).map(|col| c.palette().label(col).to_string()));
            (a, b, label)
        })
        .collect();
    edges.sort();
    for (a, b, label) in edges {
        match label {
            Some(l) => writeln!(out, "  {} -- {} [label={}];", quote(a), quote(b), quote(&l)),
            None => writeln!(out, "  {} -- {};", quote(a), quote(b)),
        }
        .expect("write to string");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{Color, Palette};
    use crate::graph::families::{cycle, path};

    #[test]
    fn single_edge() {
        let dot = to_dot(&path(1), None);
        assert_eq!(dot, "graph G {\n  \"v00\" [shape=circle];\n  \"v01\" [shape=box];\n  \"v00\" -- \"v01\";\n}\n");
    }

    #[test]
    fn odd_cycle_has_no_classes() {
        let dot = to_dot(&cycle(5), None);
        assert_eq!(dot.matches("ellipse").count(), 5);
    }

    #[test]
    fn labels_follow_the_palette() {
        let g = path(2);
        let c = D2Coloring::from_colors(Palette::nae(), vec![Some(Color::T), None]);
        let dot = to_dot(&g, Some(&c));
        assert!(dot.contains("\"v00\" -- \"v01\" [label=\"T\"];"));
        assert!(dot.contains("\"v01\" -- \"v02\";"));
    }
}
