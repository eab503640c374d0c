//! Assignment to colouring by stitching stored completion templates, and
//! colouring back to assignment.
//!
//! Variable and clause gadgets are coloured first, straight from their
//! templates. Fanout copies follow, truth and falsehood first, each chain
//! from its input end. A fanout copy reads the colours already present
//! around each of its boundary edges and picks the template for exactly
//! that surrounding, so every glued edge is made consistent by whichever
//! side is coloured later. Each step is a table lookup, so the work is
//! linear in the size of the graph.

use thiserror::Error;

use crate::coloring::{conflict_relation, verify_with, Color, D2Coloring, VerifyReport};
use crate::gadget::compose::UnitMap;
use crate::graph::EdgeId;

use super::compile::{InstanceKind, ReductionArtifact};
use super::{Assignment, NaeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Nae(#[from] NaeError),
    #[error("clause {0} has all literals equal under the assignment")]
    AllEqualClause(usize),
    #[error("no completion template for instance {instance} (copy {copy})")]
    MissingTemplate { instance: usize, copy: usize },
    #[error("colouring is not valid: {} violations, {} uncoloured, {} extra labels", .0.violations.len(), .0.uncolored.len(), .0.overpalette.len())]
    Invalid(VerifyReport),
    #[error("colouring does not respect the pinned hints on edge {0}")]
    HintViolated(usize),
    #[error("variable {0} reads colour `{1}`, expected T or F")]
    NotBoolean(usize, String),
}

/// A colouring with the number of elementary steps used to build it.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub coloring: D2Coloring,
    /// Template lookups plus edges coloured.
    pub operations: usize,
}

fn bool_color(b: bool) -> Color {
    if b {
        Color::T
    } else {
        Color::F
    }
}

pub fn assignment_to_coloring(art: &ReductionArtifact<'_>, a: &Assignment) -> Result<Transformed, TransformError> {
    let inst = &art.instance;
    if a.values.len() != inst.n {
        return Err(NaeError::Length { n: inst.n, found: a.values.len() }.into());
    }
    let g = &art.graph;
    let mut colors: Vec<Option<Color>> = vec![None; g.edge_count()];
    let mut ops = 0;
    let set = art.gadgets;

    let paint = |colors: &mut Vec<Option<Color>>, map: &UnitMap, template: &[Color], ops: &mut usize| {
        for (e, &c) in map.edge.iter().zip(template) {
            let slot = &mut colors[e.0];
            debug_assert!(slot.is_none() || *slot == Some(c), "glued edge coloured twice differently");
            *slot = Some(c);
            *ops += 1;
        }
    };

    for i in 1..=inst.n {
        let v = art.variable_instance(i);
        let x = a.values[i - 1];
        let key = [bool_color(x), bool_color(!x)];
        ops += 1;
        let t = set
            .variable
            .table
            .get(&key)
            .ok_or(TransformError::MissingTemplate { instance: v.id, copy: 0 })?;
        paint(&mut colors, &v.copies[0], t, &mut ops);
    }
    for (j, cl) in inst.clauses.iter().enumerate() {
        let c = art.clause_instance(j);
        let key: Vec<Color> = cl.iter().map(|l| bool_color(l.eval(a))).collect();
        ops += 1;
        let t = set.clause.table.get(&key).ok_or(TransformError::AllEqualClause(j))?;
        paint(&mut colors, &c.copies[0], t, &mut ops);
    }

    let base = &set.fanout.gadget;
    for placed in &art.instances {
        let colour = match placed.kind {
            InstanceKind::Truth => Color::T,
            InstanceKind::Falsehood => Color::F,
            InstanceKind::Literal { var, positive } => bool_color(a.values[var - 1] == positive),
            _ => continue,
        };
        for (j, copy) in placed.copies.iter().enumerate() {
            let mut key = vec![colour];
            let mut stub_pairs = Vec::new();
            for b in base.boundary() {
                let edge = copy.edge[b.edge.0];
                let free = copy.vertex[b.free];
                let mut seen: Vec<Color> = g
                    .neighbors(free)
                    .iter()
                    .filter(|&&(_, f)| f != edge)
                    .filter_map(|&(_, f)| colors[f.0])
                    .collect();
                seen.sort();
                let fill: Vec<Color> =
                    (0..5u8).map(Color).filter(|c| *c != colour && !seen.contains(c)).collect();
                seen.extend(fill.into_iter().take(2 - seen.len().min(2)));
                seen.sort();
                key.extend(&seen);
                stub_pairs.push((free, edge, seen));
            }
            ops += 1;
            let t = set
                .fanout
                .table
                .get(&key)
                .ok_or(TransformError::MissingTemplate { instance: placed.id, copy: j })?;
            paint(&mut colors, copy, t, &mut ops);
            if let Some((s0, s1)) = placed.cap {
                // The stubs were read as uncoloured, so the template assumed
                // the filler pair there; give the stubs exactly that pair.
                let (x, y) = g.endpoints(s0);
                if let Some((_, _, pair)) = stub_pairs.iter().find(|(free, _, _)| *free == x || *free == y) {
                    colors[s0.0] = Some(pair[0]);
                    colors[s1.0] = Some(pair[1]);
                    ops += 2;
                }
            }
        }
    }
    debug_assert!(colors.iter().all(Option::is_some));
    Ok(Transformed { coloring: D2Coloring::from_colors(art.palette.clone(), colors), operations: ops })
}

/// Reads each variable from its gadget's first output: `T` is true, `F`
/// false. The colouring must be valid and agree with the pinned hints.
pub fn coloring_to_assignment(art: &ReductionArtifact<'_>, c: &D2Coloring) -> Result<Assignment, TransformError> {
    coloring_to_assignment_counted(art, c).map(|(a, _)| a)
}

/// [`coloring_to_assignment`], also returning the number of elementary
/// steps: conflict pairs and edges checked, hints compared, outputs read.
pub fn coloring_to_assignment_counted(
    art: &ReductionArtifact<'_>,
    c: &D2Coloring,
) -> Result<(Assignment, usize), TransformError> {
    let rel = conflict_relation(&art.graph);
    let report = verify_with(&art.graph, &rel, c, 5);
    if !report.is_valid() {
        return Err(TransformError::Invalid(report));
    }
    let mut ops = rel.pair_count() + art.graph.edge_count();
    for (&e, &col) in &art.pinned_hints {
        ops += 1;
        if c.get(e) != Some(col) {
            return Err(TransformError::HintViolated(e.0));
        }
    }
    let values = (1..=art.instance.n)
        .map(|i| {
            let e: EdgeId = art.variable_instance(i).outputs[0];
            match c.get(e) {
                Some(Color::T) => Ok(true),
                Some(Color::F) => Ok(false),
                other => Err(TransformError::NotBoolean(
                    i,
                    other.map(|x| c.palette().label(x).to_string()).unwrap_or_default(),
                )),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    ops += values.len();
    Ok((Assignment { values }, ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify;
    use crate::gadget::GadgetSet;
    use crate::reduction::{compile, parse_nae};

    #[test]
    fn satisfying_assignment_colours_validly() {
        let set = GadgetSet::shipped();
        let inst = parse_nae("p nae 2 1\n1 2 -1 0").unwrap();
        let art = compile(&inst, &set);
        let a = Assignment { values: vec![true, true] };
        let out = assignment_to_coloring(&art, &a).unwrap();
        assert!(verify(&art.graph, &out.coloring, 5).is_valid());
        assert_eq!(coloring_to_assignment(&art, &out.coloring).unwrap(), a);
    }

    #[test]
    fn all_equal_clause_is_reported() {
        let set = GadgetSet::shipped();
        let art = compile(&parse_nae("p nae 1 1\n1 1 1 0").unwrap(), &set);
        let err = assignment_to_coloring(&art, &Assignment { values: vec![false] }).unwrap_err();
        assert_eq!(err, TransformError::AllEqualClause(0));
    }

    #[test]
    fn vacuous_instance() {
        let set = GadgetSet::shipped();
        let art = compile(&parse_nae("p nae 2 0").unwrap(), &set);
        for values in [vec![false, true], vec![true, true]] {
            let out = assignment_to_coloring(&art, &Assignment { values }).unwrap();
            assert!(verify(&art.graph, &out.coloring, 5).is_valid());
        }
    }
}
