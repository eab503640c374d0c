//! Clause-learning search for the colouring problem.
//!
//! Works on the direct encoding: one boolean per (edge, colour), with an
//! at-least-one clause per edge, pairwise at-most-one clauses, and one
//! binary clause per conflicting pair and colour. Learning is first-UIP
//! with local minimisation, branching follows variable activity with saved
//! phases, restarts follow the Luby sequence and learned clauses with high
//! literal-block distance are dropped periodically. Nothing is randomised,
//! so runs are reproducible.

use super::ConflictRelation;
use crate::graph::EdgeId;

const UNDEF: u32 = u32::MAX;
const RESTART_UNIT: u64 = 100;

pub(super) enum Verdict {
    Sat(Vec<u8>),
    Unsat,
    Budget,
}

#[derive(Debug, Default, Clone, Copy)]
pub(super) struct Counters {
    pub decisions: u64,
    pub conflicts: u64,
    pub learned: u64,
}

struct Clause {
    lits: Vec<u32>,
    learnt: bool,
    lbd: u32,
    deleted: bool,
}

#[derive(Clone, Copy)]
struct Watch {
    cref: u32,
    blocker: u32,
}

fn var(l: u32) -> usize {
    (l >> 1) as usize
}

fn neg(l: u32) -> u32 {
    l ^ 1
}

fn pos_lit(v: usize) -> u32 {
    (v as u32) << 1
}

pub(super) struct Cdcl {
    k: usize,
    clauses: Vec<Clause>,
    watches: Vec<Vec<Watch>>,
    /// Per variable: 0 unassigned, 1 true, -1 false.
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: Heap,
    phase: Vec<bool>,
    seen: Vec<bool>,
    learnt_count: usize,
    max_learnts: f64,
    pub counters: Counters,
    /// Set when a root-level contradiction was found while loading.
    root_conflict: bool,
}

impl Cdcl {
    pub(super) fn new(rel: &ConflictRelation, k: usize, m: usize) -> Cdcl {
        let nvars = m * k;
        let mut s = Cdcl {
            k,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * nvars],
            value: vec![0; nvars],
            level: vec![0; nvars],
            reason: vec![UNDEF; nvars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; nvars],
            var_inc: 1.0,
            heap: Heap::new(nvars),
            phase: vec![false; nvars],
            seen: vec![false; nvars],
            learnt_count: 0,
            max_learnts: 0.0,
            counters: Counters::default(),
            root_conflict: false,
        };
        let x = |e: usize, c: usize| pos_lit(e * k + c);
        for e in 0..m {
            s.add_clause((0..k).map(|c| x(e, c)).collect());
            for c in 0..k {
                for d in c + 1..k {
                    s.add_clause(vec![neg(x(e, c)), neg(x(e, d))]);
                }
            }
            for &f in rel.conflicts(EdgeId(e)) {
                if f.0 > e {
                    for c in 0..k {
                        s.add_clause(vec![neg(x(e, c)), neg(x(f.0, c))]);
                    }
                }
            }
        }
        for v in 0..nvars {
            s.heap.insert(v, &s.activity);
        }
        s.max_learnts = (s.clauses.len() as f64 / 3.0).max(2000.0);
        s
    }

    /// Fixes edge `e` to colour `c` at the root.
    pub(super) fn fix(&mut self, e: usize, c: u8) {
        let l = pos_lit(e * self.k + c as usize);
        match self.lit_value(l) {
            1 => {}
            -1 => self.root_conflict = true,
            _ => self.enqueue(l, UNDEF),
        }
    }

    fn add_clause(&mut self, lits: Vec<u32>) {
        let cref = self.clauses.len() as u32;
        if lits.len() == 1 {
            self.enqueue(lits[0], UNDEF);
            return;
        }
        self.watches[neg(lits[0]) as usize].push(Watch { cref, blocker: lits[1] });
        self.watches[neg(lits[1]) as usize].push(Watch { cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt: false, lbd: 0, deleted: false });
    }

    fn lit_value(&self, l: u32) -> i8 {
        let v = self.value[var(l)];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: u32, reason: u32) {
        let v = var(l);
        self.value[v] = if l & 1 == 1 { -1 } else { 1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Unit propagation; returns a conflicting clause if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.lit_value(w.blocker) == 1 {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.lit_value(first) == 1 {
                    ws[j] = Watch { cref: w.cref, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for t in 2..len {
                    let l = self.clauses[cref].lits[t];
                    if self.lit_value(l) != -1 {
                        self.clauses[cref].lits.swap(1, t);
                        self.watches[neg(l) as usize].push(Watch { cref: w.cref, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = Watch { cref: w.cref, blocker: first };
                j += 1;
                if self.lit_value(first) == -1 {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, w.cref);
                }
            }
            ws.truncate(j);
            self.watches[p as usize] = ws;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    /// First-UIP analysis. Returns the learned clause (asserting literal
    /// first) and the level to jump back to.
    fn analyze(&mut self, mut confl: u32) -> (Vec<u32>, u32) {
        let mut learnt = vec![0u32];
        let mut pending = 0;
        let mut p = UNDEF;
        let mut idx = self.trail.len();
        let current = self.decision_level();
        loop {
            let lits = self.clauses[confl as usize].lits.clone();
            let start = if p == UNDEF { 0 } else { 1 };
            for &q in &lits[start..] {
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            p = self.trail[idx];
            self.seen[var(p)] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[var(p)];
        }
        learnt[0] = neg(p);

        // Drop literals implied by the rest of the clause.
        let keep: Vec<bool> = learnt
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                if i == 0 {
                    return true;
                }
                let r = self.reason[var(l)];
                r == UNDEF
                    || self.clauses[r as usize].lits[1..]
                        .iter()
                        .any(|&q| !self.seen[var(q)] && self.level[var(q)] > 0)
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut learnt: Vec<u32> = learnt.into_iter().zip(keep).filter(|&(_, k)| k).map(|(l, _)| l).collect();

        let back = if learnt.len() == 1 {
            0
        } else {
            let (bi, _) = learnt
                .iter()
                .enumerate()
                .skip(1)
                .max_by_key(|&(_, &l)| self.level[var(l)])
                .expect("nonempty tail");
            learnt.swap(1, bi);
            self.level[var(learnt[1])]
        };
        (learnt, back)
    }

    fn lbd(&self, lits: &[u32]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|&l| self.level[var(l)]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn cancel_until(&mut self, lvl: u32) {
        if self.decision_level() <= lvl {
            return;
        }
        let stop = self.trail_lim[lvl as usize];
        for i in (stop..self.trail.len()).rev() {
            let v = var(self.trail[i]);
            self.phase[v] = self.trail[i] & 1 == 0;
            self.value[v] = 0;
            self.reason[v] = UNDEF;
            if !self.heap.contains(v) {
                self.heap.insert(v, &self.activity);
            }
        }
        self.trail.truncate(stop);
        self.trail_lim.truncate(lvl as usize);
        self.qhead = stop;
    }

    fn locked(&self, cref: usize) -> bool {
        let l = self.clauses[cref].lits[0];
        self.reason[var(l)] == cref as u32 && self.lit_value(l) == 1
    }

    /// Drops the worse half of the learned clauses, keeping short-LBD and
    /// reason clauses, then rebuilds the watch lists.
    fn reduce(&mut self) {
        let mut cands: Vec<usize> = (0..self.clauses.len())
            .filter(|&i| {
                let c = &self.clauses[i];
                c.learnt && !c.deleted && c.lbd > 2 && !self.locked(i)
            })
            .collect();
        cands.sort_by_key(|&i| (std::cmp::Reverse(self.clauses[i].lbd), i));
        for &i in &cands[..cands.len() / 2] {
            self.clauses[i].deleted = true;
            self.clauses[i].lits = Vec::new();
            self.learnt_count -= 1;
        }
        for w in &mut self.watches {
            w.clear();
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if !c.deleted {
                self.watches[neg(c.lits[0]) as usize].push(Watch { cref: i as u32, blocker: c.lits[1] });
                self.watches[neg(c.lits[1]) as usize].push(Watch { cref: i as u32, blocker: c.lits[0] });
            }
        }
    }

    fn pick_branch(&mut self) -> Option<usize> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.value[v] == 0 {
                return Some(v);
            }
        }
        None
    }

    pub(super) fn run(&mut self, budget: Option<u64>) -> Verdict {
        if self.root_conflict || self.propagate().is_some() {
            return Verdict::Unsat;
        }
        let mut restart = 0u32;
        loop {
            let limit = luby(restart) * RESTART_UNIT;
            restart += 1;
            let mut since = 0u64;
            loop {
                if let Some(confl) = self.propagate() {
                    self.counters.conflicts += 1;
                    since += 1;
                    if self.decision_level() == 0 {
                        return Verdict::Unsat;
                    }
                    let (learnt, back) = self.analyze(confl);
                    self.cancel_until(back);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], UNDEF);
                    } else {
                        let lbd = self.lbd(&learnt);
                        let cref = self.clauses.len() as u32;
                        self.watches[neg(learnt[0]) as usize].push(Watch { cref, blocker: learnt[1] });
                        self.watches[neg(learnt[1]) as usize].push(Watch { cref, blocker: learnt[0] });
                        let first = learnt[0];
                        self.clauses.push(Clause { lits: learnt, learnt: true, lbd, deleted: false });
                        self.learnt_count += 1;
                        self.counters.learned += 1;
                        self.enqueue(first, cref);
                    }
                    self.var_inc /= 0.95;
                    continue;
                }
                if since >= limit {
                    self.cancel_until(0);
                    break;
                }
                if self.learnt_count as f64 >= self.max_learnts + self.trail.len() as f64 {
                    self.reduce();
                    self.max_learnts *= 1.1;
                }
                let Some(v) = self.pick_branch() else {
                    return Verdict::Sat(self.model());
                };
                self.counters.decisions += 1;
                if budget.is_some_and(|b| self.counters.decisions > b) {
                    return Verdict::Budget;
                }
                self.trail_lim.push(self.trail.len());
                let l = if self.phase[v] { pos_lit(v) } else { neg(pos_lit(v)) };
                self.enqueue(l, UNDEF);
            }
        }
    }

    fn model(&self) -> Vec<u8> {
        let m = self.value.len() / self.k;
        (0..m)
            .map(|e| {
                (0..self.k)
                    .find(|&c| self.value[e * self.k + c] == 1)
                    .expect("at-least-one clause holds") as u8
            })
            .collect()
    }
}

/// The Luby sequence 1, 1, 2, 1, 1, 2, 4, ...
fn luby(i: u32) -> u64 {
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    1 << seq
}

/// Binary max-heap of variables keyed by activity, ties to the smaller
/// variable.
struct Heap {
    items: Vec<usize>,
    pos: Vec<u32>,
}

impl Heap {
    fn new(n: usize) -> Heap {
        Heap { items: Vec::with_capacity(n), pos: vec![UNDEF; n] }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != UNDEF
    }

    fn better(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        self.pos[v] = self.items.len() as u32;
        self.items.push(v);
        self.up(self.items.len() - 1, act);
    }

    fn increased(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.up(self.pos[v] as usize, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.items.first()?;
        let last = self.items.pop().expect("nonempty");
        self.pos[top] = UNDEF;
        if !self.items.is_empty() {
            self.items[0] = last;
            self.pos[last] = 0;
            self.down(0, act);
        }
        Some(top)
    }

    fn up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        while i > 0 {
            let p = (i - 1) / 2;
            if !Heap::better(v, self.items[p], act) {
                break;
            }
            self.items[i] = self.items[p];
            self.pos[self.items[i]] = i as u32;
            i = p;
        }
        self.items[i] = v;
        self.pos[v] = i as u32;
    }

    fn down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.items[i];
        let n = self.items.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let c = if r < n && Heap::better(self.items[r], self.items[l], act) { r } else { l };
            if !Heap::better(self.items[c], v, act) {
                break;
            }
            self.items[i] = self.items[c];
            self.pos[self.items[i]] = i as u32;
            i = c;
        }
        self.items[i] = v;
        self.pos[v] = i as u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let got: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(got, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn heap_orders_by_activity() {
        let act = vec![0.5, 2.0, 1.0, 2.0];
        let mut h = Heap::new(4);
        for v in 0..4 {
            h.insert(v, &act);
        }
        let order: Vec<usize> = std::iter::from_fn(|| h.pop(&act)).collect();
        assert_eq!(order, vec![1, 3, 2, 0]);
    }
}
