//! Building the graph for a NAE-3SAT instance by gluing gadget copies.
//!
//! Instances are numbered: 0 is the truth fanout, 1 the falsehood fanout,
//! then for each variable its variable gadget followed by its positive and
//! negative literal fanouts, then one clause gadget per clause.
//!
//! A fanout of width `w` is a chain of base copies (see
//! [`fanout_chain`]). A literal that never occurs still gets a width-1
//! fanout, whose output is closed off by a cap of two stub edges at its free
//! endpoint.

use std::collections::HashMap;

use crate::coloring::{Color, D2Coloring, Hints, Palette};
use crate::gadget::compose::{copies_needed, Assembly, FanoutChain, UnitMap};
use crate::gadget::{fanout_chain, GadgetSet, Role};
use crate::graph::{structural_report, EdgeId, Graph, StructuralReport};

use super::NaeInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Truth,
    Falsehood,
    Variable(usize),
    Literal { var: usize, positive: bool },
    Clause(usize),
}

/// One gadget instance and where it landed in the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedInstance {
    pub id: usize,
    pub kind: InstanceKind,
    /// Role of the placed gadget; literal fanouts are never narrower than 1.
    pub role: Role,
    /// Graph vertex for each vertex of the instance's gadget.
    pub placement: Vec<usize>,
    /// Placement of each base gadget copy, base edges and vertices mapped
    /// into the graph. Variable and clause instances have one copy.
    pub copies: Vec<UnitMap>,
    pub inputs: Vec<EdgeId>,
    pub outputs: Vec<EdgeId>,
    /// Stub edges closing a literal fanout with no occurrences.
    pub cap: Option<(EdgeId, EdgeId)>,
}

/// Output `out_idx` of `producer` glued to input `in_idx` of `consumer`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fusion {
    pub producer: usize,
    pub out_idx: usize,
    pub consumer: usize,
    pub in_idx: usize,
    pub edge: EdgeId,
}

#[derive(Debug, Clone)]
pub struct ReductionArtifact<'g> {
    pub instance: NaeInstance,
    pub gadgets: &'g GadgetSet,
    pub graph: Graph,
    pub palette: Palette,
    pub instances: Vec<PlacedInstance>,
    /// Owning instance of every edge. A glued edge belongs to its producer.
    pub provenance: Vec<usize>,
    pub wiring: Vec<Fusion>,
    pub pinned_hints: Hints,
}

impl ReductionArtifact<'_> {
    pub fn count(&self, pred: impl Fn(&InstanceKind) -> bool) -> usize {
        self.instances.iter().filter(|i| pred(&i.kind)).count()
    }

    pub fn fanout_count(&self) -> usize {
        self.count(|k| matches!(k, InstanceKind::Truth | InstanceKind::Falsehood | InstanceKind::Literal { .. }))
    }

    pub fn variable_count(&self) -> usize {
        self.count(|k| matches!(k, InstanceKind::Variable(_)))
    }

    pub fn clause_count(&self) -> usize {
        self.count(|k| matches!(k, InstanceKind::Clause(_)))
    }

    pub fn structural_report(&self) -> StructuralReport {
        structural_report(&self.graph)
    }

    pub fn variable_instance(&self, var: usize) -> &PlacedInstance {
        &self.instances[2 + 3 * (var - 1)]
    }

    pub fn literal_instance(&self, var: usize, positive: bool) -> &PlacedInstance {
        &self.instances[2 + 3 * (var - 1) + if positive { 1 } else { 2 }]
    }

    pub fn clause_instance(&self, j: usize) -> &PlacedInstance {
        &self.instances[2 + 3 * self.instance.n + j]
    }

    /// Pinned hints in the colouring text format.
    pub fn hints_text(&self) -> String {
        let mut c = D2Coloring::uncolored(self.palette.clone(), self.graph.edge_count());
        for (&e, &col) in &self.pinned_hints {
            c.set(e, Some(col));
        }
        c.to_text(&self.graph)
    }

    /// `prov <id1> <id2> <instance>` per edge, then
    /// `fuse <producer> <outIdx> <consumer> <inIdx>` per fusion.
    pub fn provenance_text(&self) -> String {
        let mut prov: Vec<String> = self
            .graph
            .edge_ids()
            .map(|e| {
                let (a, b) = self.graph.edge_names(e);
                format!("prov {a} {b} {}", self.provenance[e.0])
            })
            .collect();
        prov.sort();
        let mut out = prov.join("\n");
        out.push('\n');
        for f in &self.wiring {
            out.push_str(&format!("fuse {} {} {} {}\n", f.producer, f.out_idx, f.consumer, f.in_idx));
        }
        out
    }
}

/// Predicted `(|V|, |E|)` of the compiled graph from the base gadget sizes,
/// `n`, `m` and the literal occurrence counts.
pub fn predicted_size(inst: &NaeInstance, gadgets: &GadgetSet) -> (usize, usize) {
    let b = gadgets.fanout_width();
    let (vf, ef) = size(&gadgets.fanout.gadget.graph());
    let (vv, ev) = size(&gadgets.variable.gadget.graph());
    let (vc, ec) = size(&gadgets.clause.gadget.graph());
    let n = inst.n;
    let m = inst.m();
    let occ = inst.occurrences();
    let mut copies = 2 * copies_needed(b, n);
    let mut caps = 0;
    for &(p, q) in &occ {
        for w in [p, q] {
            copies += copies_needed(b, w.max(1));
            caps += usize::from(w == 0);
        }
    }
    let fusions = (copies - (2 * n + 2)) + 4 * n + 3 * m;
    let v = vf * copies + vv * n + vc * m + 2 * caps - 2 * fusions;
    let e = ef * copies + ev * n + ec * m + 2 * caps - fusions;
    (v, e)
}

fn size(g: &&Graph) -> (usize, usize) {
    (g.vertex_count(), g.edge_count())
}

pub fn compile<'g>(inst: &NaeInstance, gadgets: &'g GadgetSet) -> ReductionArtifact<'g> {
    let n = inst.n;
    let occ = inst.occurrences();

    let mut kinds = vec![InstanceKind::Truth, InstanceKind::Falsehood];
    let mut widths: Vec<usize> = vec![n, n];
    for (i, &(p, q)) in occ.iter().enumerate() {
        kinds.push(InstanceKind::Variable(i + 1));
        widths.push(0);
        kinds.push(InstanceKind::Literal { var: i + 1, positive: true });
        widths.push(p);
        kinds.push(InstanceKind::Literal { var: i + 1, positive: false });
        widths.push(q);
    }
    for j in 0..inst.m() {
        kinds.push(InstanceKind::Clause(j));
        widths.push(0);
    }
    let is_fanout = |k: &InstanceKind| {
        matches!(k, InstanceKind::Truth | InstanceKind::Falsehood | InstanceKind::Literal { .. })
    };

    let mut chains: HashMap<usize, FanoutChain> = HashMap::new();
    for (k, &w) in kinds.iter().zip(&widths) {
        if is_fanout(k) {
            let w = w.max(1);
            chains
                .entry(w)
                .or_insert_with(|| fanout_chain(&gadgets.fanout.gadget, w).expect("certified base fanout"));
        }
    }

    let mut asm = Assembly::new();
    for (id, (k, &w)) in kinds.iter().zip(&widths).enumerate() {
        let g = match k {
            InstanceKind::Variable(_) => &gadgets.variable.gadget,
            InstanceKind::Clause(_) => &gadgets.clause.gadget,
            _ => &chains[&w.max(1)].gadget,
        };
        asm.add(format!("g{id}"), g);
    }

    let var_id = |i: usize| 2 + 3 * (i - 1);
    let lit_id = |i: usize, positive: bool| var_id(i) + if positive { 1 } else { 2 };
    let mut fusions = Vec::new();
    for i in 1..=n {
        fusions.push((0, i - 1, var_id(i), 0));
        fusions.push((1, i - 1, var_id(i), 1));
        fusions.push((var_id(i), 0, lit_id(i, true), 0));
        fusions.push((var_id(i), 1, lit_id(i, false), 0));
    }
    let mut next_out: HashMap<usize, usize> = HashMap::new();
    for (j, cl) in inst.clauses.iter().enumerate() {
        let cid = 2 + 3 * n + j;
        for (p, l) in cl.iter().enumerate() {
            let lid = lit_id(l.var, l.positive);
            let slot = next_out.entry(lid).or_insert(0);
            fusions.push((lid, *slot, cid, p));
            *slot += 1;
        }
    }
    for &(p, o, c, i) in &fusions {
        asm.fuse(p, o, c, i);
    }
    let mut cap_names = HashMap::new();
    for (id, (k, &w)) in kinds.iter().zip(&widths).enumerate() {
        if matches!(k, InstanceKind::Literal { .. }) && w == 0 {
            let chain = &chains[&1];
            let free = asm.vertex_name(id, chain.gadget.outputs()[0].free);
            let stubs = [format!("g{id}.cap0"), format!("g{id}.cap1")];
            for s in &stubs {
                asm.extra_edge(free.clone(), s.clone());
            }
            cap_names.insert(id, (free, stubs));
        }
    }

    let (graph, maps) = asm.build();
    let mut instances = Vec::new();
    let mut provenance = vec![usize::MAX; graph.edge_count()];
    for (id, (k, map)) in kinds.iter().zip(maps).enumerate() {
        let (role, copies, gadget) = match k {
            InstanceKind::Variable(_) => (Role::Variable, vec![map.clone()], &gadgets.variable.gadget),
            InstanceKind::Clause(_) => (Role::Clause, vec![map.clone()], &gadgets.clause.gadget),
            _ => {
                let chain = &chains[&widths[id].max(1)];
                let copies = chain
                    .copies
                    .iter()
                    .map(|c| UnitMap {
                        vertex: c.map.vertex.iter().map(|&v| map.vertex[v]).collect(),
                        edge: c.map.edge.iter().map(|&e| map.edge[e.0]).collect(),
                    })
                    .collect();
                (chain.gadget.role(), copies, &chain.gadget)
            }
        };
        for &e in &map.edge {
            if provenance[e.0] == usize::MAX {
                provenance[e.0] = id;
            }
        }
        let cap = cap_names.get(&id).map(|(free, [s0, s1])| {
            let a = graph.find_edge(free, s0).expect("cap stub");
            let b = graph.find_edge(free, s1).expect("cap stub");
            provenance[a.0] = id;
            provenance[b.0] = id;
            (a, b)
        });
        instances.push(PlacedInstance {
            id,
            kind: *k,
            role,
            inputs: gadget.inputs().iter().map(|b| map.edge[b.edge.0]).collect(),
            outputs: gadget.outputs().iter().map(|b| map.edge[b.edge.0]).collect(),
            placement: map.vertex,
            copies,
            cap,
        });
    }
    debug_assert!(provenance.iter().all(|&p| p != usize::MAX));

    let wiring = fusions
        .iter()
        .map(|&(producer, out_idx, consumer, in_idx)| Fusion {
            producer,
            out_idx,
            consumer,
            in_idx,
            edge: instances[producer].outputs[out_idx],
        })
        .collect();

    let mut pinned_hints = Hints::new();
    for (id, colour) in [(0, Color::T), (1, Color::F)] {
        for &e in instances[id].inputs.iter().chain(&instances[id].outputs) {
            pinned_hints.insert(e, colour);
        }
    }

    ReductionArtifact {
        instance: inst.clone(),
        gadgets,
        graph,
        palette: Palette::nae(),
        instances,
        provenance,
        wiring,
        pinned_hints,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::parse_nae;

    #[test]
    fn gadget_counts() {
        let set = GadgetSet::shipped();
        let art = compile(&parse_nae("p nae 1 1\n1 1 1 0").unwrap(), &set);
        assert_eq!((art.fanout_count(), art.variable_count(), art.clause_count()), (4, 1, 1));
        let art = compile(&parse_nae("p nae 2 1\n1 2 -1 0").unwrap(), &set);
        assert_eq!((art.fanout_count(), art.variable_count(), art.clause_count()), (6, 2, 1));
        let neg2 = art.literal_instance(2, false);
        assert!(neg2.cap.is_some());
        assert_eq!(neg2.role, Role::Fanout(1));
    }

    #[test]
    fn size_prediction_matches() {
        let set = GadgetSet::shipped();
        for text in ["p nae 1 0", "p nae 1 1\n1 1 1 0", "p nae 3 2\n1 -2 3 0\n-1 -1 2 0"] {
            let inst = parse_nae(text).unwrap();
            let art = compile(&inst, &set);
            assert_eq!(predicted_size(&inst, &set), (art.graph.vertex_count(), art.graph.edge_count()));
        }
    }

    #[test]
    fn wiring_glues_each_input_once() {
        let set = GadgetSet::shipped();
        let art = compile(&parse_nae("p nae 2 2\n1 2 -1 0\n-2 -2 1 0").unwrap(), &set);
        assert_eq!(art.wiring.len(), 4 * 2 + 3 * 2);
        for f in &art.wiring {
            assert_eq!(art.instances[f.consumer].inputs[f.in_idx], f.edge);
        }
    }
}
