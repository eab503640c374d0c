//! Exact k-colouring search over the conflict relation.
//!
//! Two complete engines are available. The default learns clauses over the
//! boolean (edge, colour) encoding, see [`super::learn`]. The other is forward
//! checking with conflict-directed backjumping: domains are bitmasks, the next
//! edge is always one with the fewest remaining colours, ties going to the
//! smallest canonical edge, and colours are tried in palette order. It needs
//! no memory beyond the search stack but cannot reuse what it learns, which
//! makes refutations of reduction instances out of reach. Both engines are
//! deterministic. Palettes are capped at 64 colours.

use thiserror::Error;

use super::learn::{Cdcl, Verdict};
use super::{conflict_relation, Color, ConflictRelation, D2Coloring, Hints, Palette};
use crate::graph::{EdgeId, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("k must be at least 1")]
    ZeroColors,
    #[error("k = {0} exceeds the supported maximum of 64")]
    TooManyColors(usize),
    #[error("hint on edge {0} uses colour {1}, outside a palette of {2}")]
    HintOutOfPalette(usize, u8, usize),
    #[error("hint on edge {0}, but the graph has only {1} edges")]
    HintOutOfRange(usize, usize),
}

/// Why the hints alone already rule out every colouring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnsatWitness {
    /// Two hinted edges in conflict share a colour.
    HintClash(EdgeId, EdgeId),
    /// Every colour of this edge is taken by hinted edges it conflicts with.
    HintWipeout(EdgeId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(D2Coloring),
    /// Exhaustively refuted. The witness is present when the hints alone
    /// are contradictory.
    Unsat(Option<UnsatWitness>),
    /// The node budget ran out before the search finished.
    BudgetExceeded,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolveOutcome::Unsat(_))
    }

    pub fn coloring(&self) -> Option<&D2Coloring> {
        match self {
            SolveOutcome::Sat(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Clause learning over the (edge, colour) encoding.
    #[default]
    Learning,
    /// Forward checking with conflict-directed backjumping.
    Backjump,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of decisions; `None` for no limit.
    pub node_budget: Option<u64>,
    pub engine: Engine,
}

impl SolveOptions {
    pub fn with_budget(node_budget: Option<u64>) -> SolveOptions {
        SolveOptions { node_budget, ..SolveOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Decisions (learning) or value assignments tried (backjumping).
    pub nodes: u64,
    pub backjumps: u64,
    pub conflicts: u64,
    pub learned: u64,
}

/// Decides k-distance-2 edge colourability, extending `hints`.
pub fn solve(g: &Graph, k: usize, hints: &Hints) -> Result<SolveOutcome, SolveError> {
    let rel = conflict_relation(g);
    solve_with(g, &rel, k, hints, &SolveOptions::default()).map(|(o, _)| o)
}

/// [`solve`] with a precomputed conflict relation and options, also
/// returning search statistics.
pub fn solve_with(
    g: &Graph,
    rel: &ConflictRelation,
    k: usize,
    hints: &Hints,
    opts: &SolveOptions,
) -> Result<(SolveOutcome, SolveStats), SolveError> {
    if k == 0 {
        return Err(SolveError::ZeroColors);
    }
    if k > 64 {
        return Err(SolveError::TooManyColors(k));
    }
    let m = g.edge_count();
    for (&e, &c) in hints {
        if e.0 >= m {
            return Err(SolveError::HintOutOfRange(e.0, m));
        }
        if c.0 as usize >= k {
            return Err(SolveError::HintOutOfPalette(e.0, c.0, k));
        }
    }
    let mut search = Search::new(rel, k, m);
    if let Some(w) = search.apply_hints(hints) {
        return Ok((SolveOutcome::Unsat(Some(w)), search.stats));
    }
    if opts.engine == Engine::Learning {
        let mut cdcl = Cdcl::new(rel, k, m);
        for (&e, &c) in hints {
            cdcl.fix(e.0, c.0);
        }
        let verdict = cdcl.run(opts.node_budget);
        let c = cdcl.counters;
        let stats = SolveStats { nodes: c.decisions, backjumps: c.conflicts, conflicts: c.conflicts, learned: c.learned };
        let outcome = match verdict {
            Verdict::Sat(colors) => SolveOutcome::Sat(D2Coloring::from_colors(
                Palette::standard(k),
                colors.into_iter().map(|c| Some(Color(c))).collect(),
            )),
            Verdict::Unsat => SolveOutcome::Unsat(None),
            Verdict::Budget => SolveOutcome::BudgetExceeded,
        };
        return Ok((outcome, stats));
    }
    let outcome = search.run(opts.node_budget);
    let stats = search.stats;
    Ok((
        match outcome {
            Run::Sat => {
                let colors = search.assign.iter().map(|c| c.map(Color)).collect();
                SolveOutcome::Sat(D2Coloring::from_colors(Palette::standard(k), colors))
            }
            Run::Unsat => SolveOutcome::Unsat(None),
            Run::Budget => SolveOutcome::BudgetExceeded,
        },
        stats,
    ))
}

const NONE: u32 = u32::MAX;

enum Run {
    Sat,
    Unsat,
    Budget,
}

struct Frame {
    var: usize,
    remaining: u64,
    conf: Vec<u64>,
    reductions: Vec<(u32, u8)>,
}

struct Search<'a> {
    rel: &'a ConflictRelation,
    k: usize,
    dom: Vec<u64>,
    assign: Vec<Option<u8>>,
    /// Level that removed colour c from edge e, at `e * k + c`; level 0 is
    /// the hints.
    pruned_by: Vec<u32>,
    words: usize,
    frames: Vec<Frame>,
    unassigned: usize,
    stats: SolveStats,
}

impl<'a> Search<'a> {
    fn new(rel: &'a ConflictRelation, k: usize, m: usize) -> Search<'a> {
        let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Search {
            rel,
            k,
            dom: vec![full; m],
            assign: vec![None; m],
            pruned_by: vec![NONE; m * k],
            words: (m + 1).div_ceil(64),
            frames: Vec::new(),
            unassigned: m,
            stats: SolveStats::default(),
        }
    }

    fn apply_hints(&mut self, hints: &Hints) -> Option<UnsatWitness> {
        for (&e, &c) in hints {
            for &f in self.rel.conflicts(e) {
                if f < e && hints.get(&f) == Some(&c) {
                    return Some(UnsatWitness::HintClash(f, e));
                }
            }
        }
        for (&e, &c) in hints {
            self.assign[e.0] = Some(c.0);
            self.unassigned -= 1;
        }
        for (&e, &c) in hints {
            for &f in self.rel.conflicts(e) {
                if self.assign[f.0].is_none() {
                    self.prune(f.0, c.0, 0);
                    if self.dom[f.0] == 0 {
                        return Some(UnsatWitness::HintWipeout(f));
                    }
                }
            }
        }
        None
    }

    fn prune(&mut self, e: usize, c: u8, level: u32) -> bool {
        let bit = 1u64 << c;
        if self.dom[e] & bit == 0 {
            return false;
        }
        self.dom[e] &= !bit;
        self.pruned_by[e * self.k + c as usize] = level;
        true
    }

    /// Fewest remaining colours, then smallest edge index.
    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_count = u32::MAX;
        for (e, a) in self.assign.iter().enumerate() {
            if a.is_some() {
                continue;
            }
            let count = self.dom[e].count_ones();
            if count < best_count {
                best = e;
                best_count = count;
                if count <= 1 {
                    break;
                }
            }
        }
        best
    }

    /// Levels responsible for the colours missing from `e`'s domain.
    fn past_fc(&self, e: usize, into: &mut [u64]) {
        let row = &self.pruned_by[e * self.k..(e + 1) * self.k];
        for &lvl in row {
            if lvl != NONE {
                into[lvl as usize / 64] |= 1u64 << (lvl % 64);
            }
        }
    }

    fn undo(&mut self, level: usize) {
        let reductions = std::mem::take(&mut self.frames[level - 1].reductions);
        for &(e, c) in &reductions {
            self.dom[e as usize] |= 1u64 << c;
            self.pruned_by[e as usize * self.k + c as usize] = NONE;
        }
        let mut reductions = reductions;
        reductions.clear();
        self.frames[level - 1].reductions = reductions;
    }

    fn run(&mut self, budget: Option<u64>) -> Run {
        'descend: loop {
            if self.unassigned == 0 {
                return Run::Sat;
            }
            let var = self.pick();
            self.frames.push(Frame {
                var,
                remaining: self.dom[var],
                conf: vec![0; self.words],
                reductions: Vec::new(),
            });
            let mut level = self.frames.len();
            loop {
                // Try the remaining colours of the edge at `level`.
                while self.frames[level - 1].remaining != 0 {
                    let frame = &mut self.frames[level - 1];
                    let c = frame.remaining.trailing_zeros() as u8;
                    frame.remaining &= frame.remaining - 1;
                    let var = frame.var;
                    self.stats.nodes += 1;
                    if budget.is_some_and(|b| self.stats.nodes > b) {
                        return Run::Budget;
                    }
                    self.assign[var] = Some(c);
                    let mut wiped = None;
                    for &f in self.rel.conflicts(EdgeId(var)) {
                        let f = f.0;
                        if self.assign[f].is_some() {
                            continue;
                        }
                        if self.prune(f, c, level as u32) {
                            self.frames[level - 1].reductions.push((f as u32, c));
                            if self.dom[f] == 0 {
                                wiped = Some(f);
                                break;
                            }
                        }
                    }
                    match wiped {
                        None => {
                            self.unassigned -= 1;
                            continue 'descend;
                        }
                        Some(f) => {
                            let mut conf = std::mem::take(&mut self.frames[level - 1].conf);
                            self.past_fc(f, &mut conf);
                            self.frames[level - 1].conf = conf;
                            self.undo(level);
                            self.assign[var] = None;
                        }
                    }
                }
                // Domain exhausted: jump back to the deepest culprit.
                let frame = self.frames.pop().expect("level frame");
                let mut conf = frame.conf;
                self.past_fc(frame.var, &mut conf);
                conf[level / 64] &= !(1u64 << (level % 64));
                let Some(h) = highest(&conf) else {
                    return Run::Unsat;
                };
                if h == 0 {
                    return Run::Unsat;
                }
                self.stats.backjumps += 1;
                while self.frames.len() > h {
                    let l = self.frames.len();
                    self.undo(l);
                    let f = self.frames.pop().expect("level frame");
                    self.assign[f.var] = None;
                    self.unassigned += 1;
                }
                conf[h / 64] &= !(1u64 << (h % 64));
                let target = &mut self.frames[h - 1];
                for (w, c) in target.conf.iter_mut().zip(&conf) {
                    *w |= c;
                }
                let var = target.var;
                self.undo(h);
                self.assign[var] = None;
                self.unassigned += 1;
                level = h;
            }
        }
    }
}

fn highest(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .rev()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::verify;
    use crate::graph::families::*;

    fn sat(g: &Graph, k: usize) -> bool {
        let rel = conflict_relation(g);
        let mut verdicts = Vec::new();
        for engine in [Engine::Learning, Engine::Backjump] {
            let opts = SolveOptions { engine, ..SolveOptions::default() };
            verdicts.push(match solve_with(g, &rel, k, &Hints::new(), &opts).unwrap().0 {
                SolveOutcome::Sat(c) => {
                    assert!(verify(g, &c, k).is_valid());
                    true
                }
                SolveOutcome::Unsat(_) => false,
                SolveOutcome::BudgetExceeded => panic!("no budget set"),
            });
        }
        assert_eq!(verdicts[0], verdicts[1], "engines disagree");
        verdicts[0]
    }

    #[test]
    fn five_cycle_needs_five() {
        let g = cycle(5);
        assert!(!sat(&g, 4));
        assert!(sat(&g, 5));
    }

    #[test]
    fn six_cycle_takes_three() {
        assert!(sat(&cycle(6), 3));
        assert!(!sat(&cycle(6), 2));
    }

    #[test]
    fn rejects_zero_colours() {
        assert_eq!(solve(&path(1), 0, &Hints::new()), Err(SolveError::ZeroColors));
    }

    #[test]
    fn empty_graph_is_trivially_sat() {
        assert!(sat(&Graph::empty(), 1));
    }

    #[test]
    fn clashing_hints_are_witnessed() {
        let g = path(2);
        let hints = Hints::from([(EdgeId(0), Color(1)), (EdgeId(1), Color(1))]);
        assert_eq!(
            solve(&g, 3, &hints).unwrap(),
            SolveOutcome::Unsat(Some(UnsatWitness::HintClash(EdgeId(0), EdgeId(1))))
        );
    }

    #[test]
    fn hint_wipeout_is_witnessed() {
        let g = path(3);
        let hints = Hints::from([(EdgeId(0), Color(0)), (EdgeId(2), Color(1))]);
        assert_eq!(
            solve(&g, 2, &hints).unwrap(),
            SolveOutcome::Unsat(Some(UnsatWitness::HintWipeout(EdgeId(1))))
        );
    }

    #[test]
    fn hints_are_respected() {
        let g = cycle(6);
        let hints = Hints::from([(EdgeId(3), Color(2))]);
        let SolveOutcome::Sat(c) = solve(&g, 3, &hints).unwrap() else { panic!() };
        assert_eq!(c.get(EdgeId(3)), Some(Color(2)));
    }

    #[test]
    fn budget_is_not_unsat() {
        let g = complete(5);
        let rel = conflict_relation(&g);
        for engine in [Engine::Learning, Engine::Backjump] {
            let opts = SolveOptions { node_budget: Some(3), engine };
            let (out, _) = solve_with(&g, &rel, 9, &Hints::new(), &opts).unwrap();
            assert_eq!(out, SolveOutcome::BudgetExceeded);
        }
    }

    #[test]
    fn petersen_strong_index_is_five() {
        let outer: Vec<(String, String)> = (0..5)
            .flat_map(|i| {
                [
                    (format!("o{i}"), format!("o{}", (i + 1) % 5)),
                    (format!("o{i}"), format!("i{i}")),
                    (format!("i{i}"), format!("i{}", (i + 2) % 5)),
                ]
            })
            .collect();
        let g = crate::graph::build_graph(&outer).unwrap();
        assert!(!sat(&g, 4));
        assert!(sat(&g, 5));
    }
}
