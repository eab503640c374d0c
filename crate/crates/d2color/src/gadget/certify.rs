//! Exhaustive behavioural certification of gadgets, over the palette
//! `{T,F,1,2,3}`.
//!
//! Soundness claims ("every valid colouring has property P") are checked by
//! refuting each boundary scenario that violates P with the exact solver,
//! which covers all colourings without listing them. Existence claims store
//! the colouring found as a completion template, so the reduction can
//! colour glued graphs by table lookup.
//!
//! An environment probe models whatever the gadget is glued to: two stub
//! edges at a boundary edge's free endpoint, precoloured with two distinct
//! labels. After gluing, the only conflicts crossing a glued edge `a-d` are
//! between the other edges at `a` and the other edges at `d`, so two stubs
//! describe any surroundings exactly.

use std::collections::HashMap;
use std::fmt;

use crate::coloring::{conflict_relation, solve_with, Color, ConflictRelation, D2Coloring, Hints, Palette, SolveOptions, SolveOutcome};
use crate::graph::{EdgeId, Graph};

use super::{Gadget, Role, StructuralError};

const K: usize = 5;

/// Outcome of a certification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertOutcome {
    Passed,
    BehavioralFailure(Counterexample),
    StructuralFailure(StructuralError),
    /// The role does not match the certifier that was asked for.
    WrongRole { expected: &'static str, found: Role },
}

/// A replayable failing scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// Boundary colours (and probe colours) that were fixed, in text form.
    pub scenario: String,
    pub reason: String,
    /// A colouring of the gadget edges witnessing the failure, when the
    /// failure is that a colouring exists.
    pub coloring: Option<String>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario {}: {}", self.scenario, self.reason)?;
        if let Some(c) = &self.coloring {
            write!(f, "\n{}", c.trim_end())?;
        }
        Ok(())
    }
}

/// One stored completion: the scenario key and a colour per gadget edge.
///
/// Keys are, per role:
/// * fanout: the boundary colour, then the two probe colours (ascending) of
///   every boundary edge, inputs first;
/// * variable: the colours of the two outputs, inputs being `T`, `F`;
/// * clause: the colours of the three inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub key: Vec<Color>,
    pub colors: Vec<Color>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertReport {
    pub role: Role,
    pub outcome: CertOutcome,
    pub scenarios_checked: usize,
    pub templates: Vec<Template>,
}

impl CertReport {
    pub fn passed(&self) -> bool {
        self.outcome == CertOutcome::Passed
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match &self.outcome {
            CertOutcome::BehavioralFailure(c) => Some(c),
            _ => None,
        }
    }

    /// One-line summary, e.g. `passed, 8/8 scenarios`.
    pub fn summary(&self) -> String {
        match &self.outcome {
            CertOutcome::Passed => {
                format!("passed, {}/{} scenarios", self.scenarios_checked, self.scenarios_checked)
            }
            CertOutcome::BehavioralFailure(c) => {
                format!("failed after {} scenarios: {c}", self.scenarios_checked)
            }
            CertOutcome::StructuralFailure(e) => format!("structural failure: {e}"),
            CertOutcome::WrongRole { expected, found } => {
                format!("wrong role: expected {expected}, found {found}")
            }
        }
    }

    pub fn table(&self) -> TemplateTable {
        TemplateTable { map: self.templates.iter().map(|t| (t.key.clone(), t.colors.clone())).collect() }
    }

    /// Text form of a passing report, as stored next to shipped gadgets.
    pub fn to_text(&self) -> String {
        let p = Palette::nae();
        let labels = |cs: &[Color]| cs.iter().map(|&c| p.label(c)).collect::<Vec<_>>().join(" ");
        let verdict = match &self.outcome {
            CertOutcome::Passed => "passed".to_string(),
            other => format!("failed {}", CertReport { outcome: other.clone(), ..self.clone() }.summary()),
        };
        let mut out = format!("role {}\nverdict {verdict}\nscenarios {}\n", self.role, self.scenarios_checked);
        for t in &self.templates {
            out.push_str(&format!("template {} : {}\n", labels(&t.key), labels(&t.colors)));
        }
        out
    }

    /// Reads a passing report written by [`CertReport::to_text`].
    pub fn parse(text: &str) -> Result<CertReport, String> {
        let p = Palette::nae();
        let colors = |s: &str| -> Result<Vec<Color>, String> {
            s.split_whitespace()
                .map(|l| p.color(l).ok_or_else(|| format!("unknown label `{l}`")))
                .collect()
        };
        let mut role = None;
        let mut passed = false;
        let mut scenarios = 0;
        let mut templates = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("role ") {
                role = Some(rest.parse::<Role>()?);
            } else if let Some(rest) = line.strip_prefix("verdict ") {
                passed = rest.trim() == "passed";
            } else if let Some(rest) = line.strip_prefix("scenarios ") {
                scenarios = rest.trim().parse().map_err(|_| "bad scenario count".to_string())?;
            } else if let Some(rest) = line.strip_prefix("template ") {
                let (key, cols) = rest.split_once(':').ok_or("template without `:`")?;
                templates.push(Template { key: colors(key)?, colors: colors(cols)? });
            } else if !line.trim().is_empty() {
                return Err(format!("unrecognized line `{line}`"));
            }
        }
        if !passed {
            return Err("only passing reports can be loaded".into());
        }
        Ok(CertReport {
            role: role.ok_or("missing role")?,
            outcome: CertOutcome::Passed,
            scenarios_checked: scenarios,
            templates,
        })
    }
}

/// Completion templates indexed by scenario key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplateTable {
    map: HashMap<Vec<Color>, Vec<Color>>,
}

impl TemplateTable {
    pub fn get(&self, key: &[Color]) -> Option<&[Color]> {
        self.map.get(key).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Runs the certifier matching the gadget's role.
pub fn certify(gd: &Gadget) -> CertReport {
    match gd.role() {
        Role::Fanout(_) => certify_fanout(gd),
        Role::Variable => certify_variable(gd),
        Role::Clause => certify_clause(gd),
    }
}

fn early(gd: &Gadget, outcome: CertOutcome) -> CertReport {
    CertReport { role: gd.role(), outcome, scenarios_checked: 0, templates: Vec::new() }
}

/// The gadget graph, optionally with two stub edges at chosen free
/// endpoints, and maps from gadget edges to edges of the probed graph.
struct Probed {
    graph: Graph,
    rel: ConflictRelation,
    /// Probed-graph edge for each gadget edge.
    edge: Vec<EdgeId>,
    /// Stub pair for each boundary edge (inputs then outputs), if probed.
    stubs: Vec<Option<(EdgeId, EdgeId)>>,
}

impl Probed {
    fn new(gd: &Gadget, probe: &[bool]) -> Probed {
        let g = gd.graph();
        let mut edges: Vec<(String, String)> = g.edge_list();
        let mut stub_names = Vec::new();
        for (b, &on) in gd.boundary().zip(probe) {
            if on {
                let free = g.name(b.free);
                let s = [format!("{free}~0"), format!("{free}~1")];
                edges.push((free.to_string(), s[0].clone()));
                edges.push((free.to_string(), s[1].clone()));
                stub_names.push(Some((free.to_string(), s)));
            } else {
                stub_names.push(None);
            }
        }
        let graph = crate::graph::build_graph(&edges).expect("probed gadget graph");
        let edge = g
            .edge_ids()
            .map(|e| {
                let (a, b) = g.edge_names(e);
                graph.find_edge(a, b).expect("gadget edge survives probing")
            })
            .collect();
        let stubs = stub_names
            .into_iter()
            .map(|s| {
                s.map(|(free, [s0, s1])| {
                    (graph.find_edge(&free, &s0).expect("stub"), graph.find_edge(&free, &s1).expect("stub"))
                })
            })
            .collect();
        let rel = conflict_relation(&graph);
        Probed { graph, rel, edge, stubs }
    }

    fn solve(&self, hints: &Hints) -> Option<D2Coloring> {
        let (out, _) = solve_with(&self.graph, &self.rel, K, hints, &SolveOptions::default())
            .expect("palette of five and in-range hints");
        match out {
            SolveOutcome::Sat(c) => Some(c),
            SolveOutcome::Unsat(_) => None,
            SolveOutcome::BudgetExceeded => unreachable!("no budget set"),
        }
    }

    /// Restricts a probed-graph colouring to the gadget edges.
    fn gadget_colors(&self, c: &D2Coloring) -> Vec<Color> {
        self.edge.iter().map(|&e| c.get(e).expect("total colouring")).collect()
    }
}

fn render(gd: &Gadget, colors: &[Color]) -> String {
    let p = Palette::nae();
    let c = D2Coloring::from_colors(p, colors.iter().map(|&c| Some(c)).collect());
    c.to_text(gd.graph())
}

fn label(c: Color) -> &'static str {
    crate::coloring::NAE_LABELS[c.0 as usize]
}

fn palette() -> impl Iterator<Item = Color> + Clone {
    (0..K as u8).map(Color)
}

/// Unordered pairs of distinct colours avoiding every colour in `avoid`.
fn probe_pairs(avoid: &[Color]) -> Vec<(Color, Color)> {
    let free: Vec<Color> = palette().filter(|c| !avoid.contains(c)).collect();
    let mut out = Vec::new();
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            out.push((free[i], free[j]));
        }
    }
    out
}

/// Fanout contract. Soundness: in every valid colouring of the gadget alone
/// all boundary edges share one colour. Extendibility: for every colour `c`
/// and every simultaneous choice of probe pairs avoiding `c` at all boundary
/// edges, some colouring gives every boundary edge colour `c`.
pub fn certify_fanout(gd: &Gadget) -> CertReport {
    if !matches!(gd.role(), Role::Fanout(_)) {
        return early(gd, CertOutcome::WrongRole { expected: "fanout", found: gd.role() });
    }
    if let Err(e) = gd.check_structure() {
        return early(gd, CertOutcome::StructuralFailure(e));
    }
    let bounds: Vec<EdgeId> = gd.boundary().map(|b| b.edge).collect();
    let name = |e: EdgeId| {
        let (a, b) = gd.graph().edge_names(e);
        format!("{a}-{b}")
    };
    let mut report = early(gd, CertOutcome::Passed);

    let bare = Probed::new(gd, &vec![false; bounds.len()]);
    for &other in &bounds[1..] {
        for c in palette() {
            for d in palette().filter(|&d| d != c) {
                report.scenarios_checked += 1;
                let hints = Hints::from([(bare.edge[bounds[0].0], c), (bare.edge[other.0], d)]);
                if let Some(col) = bare.solve(&hints) {
                    report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                        scenario: format!("{}={} {}={}", name(bounds[0]), label(c), name(other), label(d)),
                        reason: "boundary edges can differ".into(),
                        coloring: Some(render(gd, &bare.gadget_colors(&col))),
                    });
                    return report;
                }
            }
        }
    }

    let probed = Probed::new(gd, &vec![true; bounds.len()]);
    for c in palette() {
        let pairs = probe_pairs(&[c]);
        let mut choice = vec![0usize; bounds.len()];
        loop {
            report.scenarios_checked += 1;
            let mut hints = Hints::new();
            let mut key = vec![c];
            for (i, &b) in bounds.iter().enumerate() {
                let (x, y) = pairs[choice[i]];
                let (s0, s1) = probed.stubs[i].expect("all boundaries probed");
                hints.insert(probed.edge[b.0], c);
                hints.insert(s0, x);
                hints.insert(s1, y);
                key.extend([x, y]);
            }
            match probed.solve(&hints) {
                Some(col) => report.templates.push(Template { key, colors: probed.gadget_colors(&col) }),
                None => {
                    let scenario = bounds
                        .iter()
                        .enumerate()
                        .map(|(i, &b)| {
                            let (x, y) = pairs[choice[i]];
                            format!("{}={} probe {},{}", name(b), label(c), label(x), label(y))
                        })
                        .collect::<Vec<_>>()
                        .join("; ");
                    report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                        scenario,
                        reason: "no extension with all boundary edges equal".into(),
                        coloring: None,
                    });
                    report.templates.clear();
                    return report;
                }
            }
            if !advance(&mut choice, pairs.len()) {
                break;
            }
        }
    }
    report
}

/// Odometer step over `choice`, last position fastest.
fn advance(choice: &mut [usize], base: usize) -> bool {
    for slot in choice.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Variable contract with inputs coloured `T` and `F`: the outputs can be
/// coloured `(T,F)` and `(F,T)`, and every other output pair is
/// impossible.
pub fn certify_variable(gd: &Gadget) -> CertReport {
    if gd.role() != Role::Variable {
        return early(gd, CertOutcome::WrongRole { expected: "variable", found: gd.role() });
    }
    if let Err(e) = gd.check_structure() {
        return early(gd, CertOutcome::StructuralFailure(e));
    }
    let bare = Probed::new(gd, &[false; 4]);
    let (i0, i1) = (gd.inputs()[0].edge, gd.inputs()[1].edge);
    let (o0, o1) = (gd.outputs()[0].edge, gd.outputs()[1].edge);
    let mut report = early(gd, CertOutcome::Passed);
    for x in palette() {
        for y in palette() {
            report.scenarios_checked += 1;
            let hints = Hints::from([
                (bare.edge[i0.0], Color::T),
                (bare.edge[i1.0], Color::F),
                (bare.edge[o0.0], x),
                (bare.edge[o1.0], y),
            ]);
            let wanted = (x, y) == (Color::T, Color::F) || (x, y) == (Color::F, Color::T);
            let scenario = format!("inputs T,F outputs {},{}", label(x), label(y));
            match (bare.solve(&hints), wanted) {
                (Some(col), true) => report.templates.push(Template { key: vec![x, y], colors: bare.gadget_colors(&col) }),
                (None, false) => {}
                (Some(col), false) => {
                    report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                        scenario,
                        reason: "outputs are not {T,F}".into(),
                        coloring: Some(render(gd, &bare.gadget_colors(&col))),
                    });
                    report.templates.clear();
                    return report;
                }
                (None, true) => {
                    report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                        scenario,
                        reason: "output order not achievable".into(),
                        coloring: None,
                    });
                    report.templates.clear();
                    return report;
                }
            }
        }
    }
    report
}

/// Clause contract: for inputs in `{T,F}^3`, a colouring exists exactly when
/// the three inputs are not all equal.
pub fn certify_clause(gd: &Gadget) -> CertReport {
    if gd.role() != Role::Clause {
        return early(gd, CertOutcome::WrongRole { expected: "clause", found: gd.role() });
    }
    if let Err(e) = gd.check_structure() {
        return early(gd, CertOutcome::StructuralFailure(e));
    }
    let bare = Probed::new(gd, &[false; 3]);
    let ins: Vec<EdgeId> = gd.inputs().iter().map(|b| bare.edge[b.edge.0]).collect();
    let mut report = early(gd, CertOutcome::Passed);
    for bits in 0..8u8 {
        let key: Vec<Color> = (0..3).map(|i| if bits >> (2 - i) & 1 == 0 { Color::T } else { Color::F }).collect();
        report.scenarios_checked += 1;
        let hints: Hints = ins.iter().copied().zip(key.iter().copied()).collect();
        let nae = key.iter().any(|&c| c != key[0]);
        let scenario = format!("inputs {}", key.iter().map(|&c| label(c)).collect::<Vec<_>>().join(","));
        match (bare.solve(&hints), nae) {
            (Some(col), true) => report.templates.push(Template { key, colors: bare.gadget_colors(&col) }),
            (None, false) => {}
            (Some(col), false) => {
                report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                    scenario,
                    reason: "all-equal inputs are colourable".into(),
                    coloring: Some(render(gd, &bare.gadget_colors(&col))),
                });
                report.templates.clear();
                return report;
            }
            (None, true) => {
                report.outcome = CertOutcome::BehavioralFailure(Counterexample {
                    scenario,
                    reason: "not-all-equal inputs are uncolourable".into(),
                    coloring: None,
                });
                report.templates.clear();
                return report;
            }
        }
    }
    report
}

/// Whether the gadget alone has a valid colouring with the given boundary
/// colours (inputs then outputs; `None` leaves an edge free).
pub fn boundary_colorable(gd: &Gadget, colors: &[Option<Color>]) -> bool {
    let bare = Probed::new(gd, &vec![false; colors.len()]);
    let hints: Hints = gd
        .boundary()
        .zip(colors)
        .filter_map(|(b, c)| c.map(|c| (bare.edge[b.edge.0], c)))
        .collect();
    bare.solve(&hints).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_edge_path_fanout_is_unsound() {
        let g = Gadget::parse("role fanout 1\ne a b\ne b c\ne c d\nin a b a\nout c d d\n").unwrap();
        let r = certify_fanout(&g);
        let cx = r.counterexample().expect("soundness counterexample");
        assert_eq!(cx.reason, "boundary edges can differ");
        assert!(cx.coloring.is_some());
    }

    #[test]
    fn single_edge_in_and_out_is_structural() {
        let g = Gadget::parse("role fanout 1\ne a b\nin a b a\nout a b b\n").unwrap();
        assert!(matches!(certify_fanout(&g).outcome, CertOutcome::StructuralFailure(_)));
    }

    #[test]
    fn wrong_role_is_reported() {
        let g = Gadget::parse("role clause\ne a b\n").unwrap();
        assert!(matches!(certify_fanout(&g).outcome, CertOutcome::WrongRole { .. }));
    }

    #[test]
    fn star_variable_candidate_fails() {
        // Outputs on separate leaves of a star are far enough apart to both
        // take T.
        let g = Gadget::parse(
            "role variable\ne s a\ne s b\ne s c\ne a i0\ne a i1\ne b o0\ne c o1\nin a i0 i0\nin a i1 i1\nout b o0 o0\nout c o1 o1\n",
        )
        .unwrap();
        let r = certify_variable(&g);
        assert_eq!(r.counterexample().unwrap().reason, "outputs are not {T,F}");
    }

    #[test]
    fn probe_pairs_count() {
        assert_eq!(probe_pairs(&[Color::T]).len(), 6);
        assert_eq!(probe_pairs(&[Color::T, Color::F]).len(), 3);
    }

    #[test]
    fn report_text_round_trip() {
        let r = CertReport {
            role: Role::Clause,
            outcome: CertOutcome::Passed,
            scenarios_checked: 8,
            templates: vec![Template { key: vec![Color::T, Color::F, Color::T], colors: vec![Color(2), Color(4)] }],
        };
        assert_eq!(CertReport::parse(&r.to_text()).unwrap(), r);
    }
}
