//! Acceptance criteria, one test per criterion. Each prints a single
//! `criterion N: PASS|FAIL ...` line to standard output, whether or not the
//! harness captures output.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use d2color::coloring::{
    brute_force_index, conflict_relation, encode_cnf, solve_with, verify, Color, D2Coloring, Engine, Hints, Palette,
    SolveOptions, SolveOutcome,
};
use d2color::gadget::{certify, Gadget, GadgetSet, Role};
use d2color::graph::{families, structural_report, Girth};
use d2color::reduction::{
    assignment_to_coloring, check_nae, coloring_to_assignment_counted, compile, predicted_size, roundtrip,
    Assignment, Literal, NaeInstance, RoundTripError, RoundTripOptions,
};
use d2color::{build_graph, EdgeId, Graph};

/// Wall-clock ceiling for a single solve.
const SOLVE_LIMIT: Duration = Duration::from_secs(600);

fn report(n: usize, outcome: &Result<String, String>) {
    let line = match outcome {
        Ok(detail) => format!("criterion {n}: PASS {detail}\n"),
        Err(detail) => format!("criterion {n}: FAIL {detail}\n"),
    };
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn finish(n: usize, outcome: Result<String, String>) {
    report(n, &outcome);
    if let Err(e) = outcome {
        panic!("criterion {n} failed: {e}");
    }
}

fn literals(n: usize) -> Vec<Literal> {
    (1..=n).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect()
}

/// Every instance with n <= 2 and m <= 2: clauses are ordered triples of
/// literals, clause lists are ordered, repeated literals allowed.
fn exhaustive_corpus() -> Vec<NaeInstance> {
    let mut all = Vec::new();
    for n in 1..=2 {
        let lits = literals(n);
        let mut triples = Vec::new();
        for &a in &lits {
            for &b in &lits {
                for &c in &lits {
                    triples.push([a, b, c]);
                }
            }
        }
        all.push(NaeInstance::new(n, vec![]).unwrap());
        for &t in &triples {
            all.push(NaeInstance::new(n, vec![t]).unwrap());
        }
        for &t in &triples {
            for &u in &triples {
                all.push(NaeInstance::new(n, vec![t, u]).unwrap());
            }
        }
    }
    all
}

fn random_instance(rng: &mut StdRng, n: usize, m: usize) -> NaeInstance {
    let lit = |rng: &mut StdRng| Literal { var: rng.gen_range(1..=n), positive: rng.gen() };
    let clauses = (0..m).map(|_| [lit(rng), lit(rng), lit(rng)]).collect();
    NaeInstance::new(n, clauses).unwrap()
}

fn random_corpus() -> Vec<NaeInstance> {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    (0..200)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            let m = rng.gen_range(0..=4);
            random_instance(&mut rng, n, m)
        })
        .collect()
}

/// A random instance satisfied (in the NAE sense) by `a`.
fn planted_instance(rng: &mut StdRng, a: &Assignment, m: usize) -> NaeInstance {
    let n = a.values.len();
    let mut clauses = Vec::new();
    while clauses.len() < m {
        let c = random_instance(rng, n, 1).clauses[0];
        let v: Vec<bool> = c.iter().map(|l| a.values[l.var - 1] == l.positive).collect();
        if v.iter().any(|&x| x) && v.iter().any(|&x| !x) {
            clauses.push(c);
        }
    }
    NaeInstance::new(n, clauses).unwrap()
}

fn nae_sat_oracle(inst: &NaeInstance) -> bool {
    (0u32..1 << inst.n).any(|bits| {
        inst.clauses.iter().all(|c| {
            let v: Vec<bool> = c.iter().map(|l| (bits >> (l.var - 1) & 1 == 1) == l.positive).collect();
            v.contains(&true) && v.contains(&false)
        })
    })
}

fn parallel_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let mut out: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let f = &f;
                s.spawn(move || (w..items.len()).step_by(workers).map(|i| (i, f(&items[i]))).collect::<Vec<_>>())
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().unwrap() {
                out[i] = Some(r);
            }
        }
    });
    out.into_iter().map(Option::unwrap).collect()
}

#[test]
fn criterion_1_equivalence_at_desk_scale() {
    let set = GadgetSet::shipped();
    let mut corpus = exhaustive_corpus();
    let exhaustive = corpus.len();
    corpus.extend(random_corpus());
    let opts = RoundTripOptions::default();
    let results = parallel_map(&corpus, |inst| {
        let t = Instant::now();
        let r = roundtrip(inst, &set, &opts);
        (r, t.elapsed())
    });
    let mut failures = Vec::new();
    let mut unsat = 0;
    let mut slowest = Duration::ZERO;
    for (inst, (r, took)) in corpus.iter().zip(&results) {
        slowest = slowest.max(*took);
        if *took > SOLVE_LIMIT {
            failures.push(format!("{inst}: took {took:?}"));
        }
        match r {
            Ok(rt) => {
                if rt.brute.is_some() != nae_sat_oracle(inst) {
                    failures.push(format!("{inst}: brute force disagrees with the test oracle"));
                }
                if !rt.agrees() {
                    failures.push(format!("{inst}: DISAGREE\n{rt}"));
                }
                unsat += usize::from(!rt.colorable);
            }
            Err(RoundTripError::BudgetExceeded) => failures.push(format!("{inst}: budget exceeded")),
            Err(e) => failures.push(format!("{inst}: {e}")),
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{} instances ({exhaustive} exhaustive with n<=2, m<=2 + 200 random with n<=4, m<=4) all AGREE, \
             {unsat} unsatisfiable, slowest {:.2}s",
            corpus.len(),
            slowest.as_secs_f64()
        ))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(1, outcome);
}

#[test]
fn criterion_2_structure_of_compiled_graphs() {
    let set = GadgetSet::shipped();
    let mut corpus = exhaustive_corpus();
    corpus.extend(random_corpus());
    let mut failures = Vec::new();
    let mut duplicate_free = 0;
    let mut girths: BTreeMap<String, usize> = BTreeMap::new();
    for inst in &corpus {
        let art = compile(inst, &set);
        let r = structural_report(&art.graph);
        if !r.is_bipartite() || r.max_degree != 3 || r.inductiveness.c != 2 {
            failures.push(format!(
                "{inst}: bipartite={} max_degree={} inductiveness={}",
                r.is_bipartite(),
                r.max_degree,
                r.inductiveness.c
            ));
        }
        *girths.entry(r.girth.to_string()).or_default() += 1;
        if !inst.has_repeated_variable() {
            duplicate_free += 1;
            if r.girth != Girth::Cycle(6) {
                failures.push(format!("{inst}: girth {} on a duplicate-free instance", r.girth));
            }
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{} graphs bipartite, max degree 3, 2-inductive; girth 6 on all {duplicate_free} duplicate-free; \
             girth histogram {girths:?}",
            corpus.len()
        ))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(2, outcome);
}

/// Size of the graph from first principles: a width-`w` fanout is a chain of
/// `K` base copies with `K (b - 1) + 1 >= w`, `K >= 1`; each fusion merges
/// two dangling edges into one (losing one edge and two vertices); every
/// literal that never occurs gets two extra stub edges and vertices.
fn size_oracle(inst: &NaeInstance, set: &GadgetSet) -> (usize, usize) {
    let size = |g: &Gadget| (g.graph().vertex_count(), g.graph().edge_count());
    let (vf, ef) = size(&set.fanout.gadget);
    let (vv, ev) = size(&set.variable.gadget);
    let (vc, ec) = size(&set.clause.gadget);
    let b = set.fanout.gadget.outputs().len();
    let chain = |w: usize| (1..).find(|&k| k * (b - 1) + 1 >= w).unwrap();
    let mut pos = vec![0; inst.n];
    let mut neg = vec![0; inst.n];
    for c in &inst.clauses {
        for l in c {
            if l.positive {
                pos[l.var - 1] += 1;
            } else {
                neg[l.var - 1] += 1;
            }
        }
    }
    let mut copies = 2 * chain(inst.n);
    let mut links = 2 * (chain(inst.n) - 1);
    let mut caps = 0;
    for w in pos.iter().chain(&neg) {
        copies += chain((*w).max(1));
        links += chain((*w).max(1)) - 1;
        caps += usize::from(*w == 0);
    }
    // truth/falsehood to variables, variables to literals, literals to clauses
    let fusions = links + 2 * inst.n + 2 * inst.n + 3 * inst.m();
    let v = vf * copies + vv * inst.n + vc * inst.m() + 2 * caps - 2 * fusions;
    let e = ef * copies + ev * inst.n + ec * inst.m() + 2 * caps - fusions;
    (v, e)
}

#[test]
fn criterion_3_linear_size() {
    let set = GadgetSet::shipped();
    let mut corpus = exhaustive_corpus();
    corpus.extend(random_corpus());
    let mut failures = Vec::new();
    for inst in &corpus {
        let art = compile(inst, &set);
        let got = (art.graph.vertex_count(), art.graph.edge_count());
        let want = size_oracle(inst, &set);
        if got != want || predicted_size(inst, &set) != want {
            failures.push(format!("{inst}: graph {got:?}, formula {want:?}, library {:?}", predicted_size(inst, &set)));
        }
    }
    let b = set.fanout.gadget.outputs().len();
    let outcome = if failures.is_empty() {
        Ok(format!(
            "|V| and |E| match the affine formula on all {} instances (fanout {}v/{}e width {b}, variable {}v/{}e, \
             clause {}v/{}e)",
            corpus.len(),
            set.fanout.gadget.graph().vertex_count(),
            set.fanout.gadget.graph().edge_count(),
            set.variable.gadget.graph().vertex_count(),
            set.variable.gadget.graph().edge_count(),
            set.clause.gadget.graph().vertex_count(),
            set.clause.gadget.graph().edge_count(),
        ))
    } else {
        Err(format!("{} mismatches, first: {}", failures.len(), failures[0]))
    };
    finish(3, outcome);
}

#[test]
fn criterion_4_transformations() {
    let set = GadgetSet::shipped();
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut failures = Vec::new();
    let mut samples = 0;
    for _ in 0..60 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(0..=6);
        let inst = random_instance(&mut rng, n, m);
        let art = compile(&inst, &set);
        for bits in 0u32..1 << n {
            let a = Assignment { values: (0..n).map(|i| bits >> i & 1 == 1).collect() };
            if check_nae(&inst, &a).unwrap().is_err() {
                continue;
            }
            samples += 1;
            match assignment_to_coloring(&art, &a) {
                Ok(t) => {
                    if !verify(&art.graph, &t.coloring, 5).is_valid() {
                        failures.push(format!("{inst}: colouring for {:?} does not verify", a.values));
                    }
                    match coloring_to_assignment_counted(&art, &t.coloring) {
                        Ok((back, _)) if back == a => {}
                        other => failures.push(format!("{inst}: read back {other:?} for {:?}", a.values)),
                    }
                }
                Err(e) => failures.push(format!("{inst}: {e}")),
            }
        }
    }
    if samples < 50 {
        failures.push(format!("only {samples} satisfying assignments sampled"));
    }

    // Operation counts on planted instances of doubling size, summed over
    // several instances per size.
    let mut forward = Vec::new();
    let mut backward = Vec::new();
    for size in [4, 8, 16] {
        let (mut f, mut b) = (0, 0);
        for _ in 0..8 {
            let a = Assignment { values: (0..size).map(|_| rng.gen()).collect() };
            let inst = planted_instance(&mut rng, &a, size);
            let art = compile(&inst, &set);
            let t = assignment_to_coloring(&art, &a).expect("planted assignment satisfies");
            let (back, ops) = coloring_to_assignment_counted(&art, &t.coloring).expect("valid colouring");
            if back != a {
                failures.push(format!("{inst}: planted assignment not recovered"));
            }
            f += t.operations;
            b += ops;
        }
        forward.push(f);
        backward.push(b);
    }
    let ratios = |v: &[usize]| [v[1] as f64 / v[0] as f64, v[2] as f64 / v[1] as f64];
    let (rf, rb) = (ratios(&forward), ratios(&backward));
    if rf.iter().chain(&rb).any(|&r| r > 2.5) {
        failures.push(format!("growth per doubling too steep: forward {rf:.3?}, backward {rb:.3?}"));
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{samples} satisfying assignments coloured validly and recovered exactly; ops at (4,4),(8,8),(16,16): \
             forward {forward:?} ratios {rf:.3?}, backward {backward:?} ratios {rb:.3?}"
        ))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(4, outcome);
}

/// Satisfiability of the gadget graph with some boundary edges fixed, by the
/// CNF encoding and its DPLL search (not the main solver).
fn cnf_colourable(g: &Graph, hints: &Hints) -> bool {
    encode_cnf(g, 5, hints).dpll().is_some()
}

/// Builds the gadget graph with two stub edges at every boundary edge's
/// free endpoint, returning the graph and the stub edge ids per boundary.
fn probed(gd: &Gadget) -> (Graph, Vec<(EdgeId, EdgeId)>) {
    let g = gd.graph();
    let mut list = g.edge_list();
    let mut stubs = Vec::new();
    for (i, b) in gd.boundary().enumerate() {
        let free = g.name(b.free).to_string();
        let names = [format!("{free}#probe{i}a"), format!("{free}#probe{i}b")];
        for s in &names {
            list.push((free.clone(), s.clone()));
        }
        stubs.push(names);
    }
    let pg = build_graph(&list).unwrap();
    let ids = stubs
        .iter()
        .zip(gd.boundary())
        .map(|(names, b)| {
            let free = g.name(b.free);
            (pg.find_edge(free, &names[0]).unwrap(), pg.find_edge(free, &names[1]).unwrap())
        })
        .collect();
    (pg, ids)
}

fn check_fanout(set: &GadgetSet) -> Result<String, String> {
    let gd = &set.fanout.gadget;
    let g = gd.graph();
    let bounds: Vec<EdgeId> = gd.boundary().map(|b| b.edge).collect();
    let colours: Vec<Color> = (0..5).map(Color).collect();
    // soundness: no valid colouring has two boundary edges differ
    for &other in &bounds[1..] {
        for &c in &colours {
            for &d in colours.iter().filter(|&&d| d != c) {
                let hints = Hints::from([(bounds[0], c), (other, d)]);
                if cnf_colourable(g, &hints) {
                    return Err(format!("fanout boundary edges can differ ({} vs {})", c.0, d.0));
                }
            }
        }
    }
    // extendibility: every colour and every probe pair at every boundary
    // has a stored completion, and that completion is valid
    let (pg, stubs) = probed(gd);
    let table = &set.fanout.table;
    let mut checked = 0;
    for &c in &colours {
        let pairs: Vec<(Color, Color)> = colours
            .iter()
            .flat_map(|&x| colours.iter().map(move |&y| (x, y)))
            .filter(|&(x, y)| x < y && x != c && y != c)
            .collect();
        let mut choice = vec![0; bounds.len()];
        loop {
            let mut key = vec![c];
            for &i in &choice {
                key.extend([pairs[i].0, pairs[i].1]);
            }
            let template = table.get(&key).ok_or_else(|| format!("no completion stored for {key:?}"))?;
            let mut col = D2Coloring::uncolored(Palette::nae(), pg.edge_count());
            for (e, &t) in g.edge_ids().zip(template) {
                let (a, b) = g.edge_names(e);
                col.set(pg.find_edge(a, b).unwrap(), Some(t));
            }
            for (i, &(s0, s1)) in stubs.iter().enumerate() {
                col.set(s0, Some(pairs[choice[i]].0));
                col.set(s1, Some(pairs[choice[i]].1));
            }
            for &b in &bounds {
                if template[b.0] != c {
                    return Err(format!("completion for {key:?} recolours a boundary edge"));
                }
            }
            if !verify(&pg, &col, 5).is_valid() {
                return Err(format!("completion for {key:?} is not a valid colouring"));
            }
            checked += 1;
            let mut i = 0;
            while i < choice.len() {
                choice[i] += 1;
                if choice[i] < pairs.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == choice.len() {
                break;
            }
        }
    }
    Ok(format!("fanout: sound, {checked} probe scenarios extendible"))
}

fn check_variable(set: &GadgetSet) -> Result<String, String> {
    let gd = &set.variable.gadget;
    let ins: Vec<EdgeId> = gd.inputs().iter().map(|b| b.edge).collect();
    let outs: Vec<EdgeId> = gd.outputs().iter().map(|b| b.edge).collect();
    let mut achievable = BTreeSet::new();
    for a in 0..5u8 {
        for b in 0..5u8 {
            let hints = Hints::from([(ins[0], Color::T), (ins[1], Color::F), (outs[0], Color(a)), (outs[1], Color(b))]);
            if cnf_colourable(gd.graph(), &hints) {
                achievable.insert((a, b));
            }
        }
    }
    let expected = BTreeSet::from([(Color::T.0, Color::F.0), (Color::F.0, Color::T.0)]);
    if achievable != expected {
        return Err(format!("variable outputs achievable: {achievable:?}"));
    }
    Ok("variable: outputs exactly (T,F) and (F,T)".into())
}

fn check_clause(set: &GadgetSet) -> Result<String, String> {
    let gd = &set.clause.gadget;
    let ins: Vec<EdgeId> = gd.inputs().iter().map(|b| b.edge).collect();
    let mut colourable = 0;
    for bits in 0..8u8 {
        let vals: Vec<Color> = (0..3).map(|i| if bits >> i & 1 == 1 { Color::T } else { Color::F }).collect();
        let hints: Hints = ins.iter().copied().zip(vals.iter().copied()).collect();
        let ok = cnf_colourable(gd.graph(), &hints);
        let all_equal = vals[0] == vals[1] && vals[1] == vals[2];
        if ok == all_equal {
            return Err(format!("clause scenario {vals:?} colourable={ok}"));
        }
        colourable += usize::from(ok);
    }
    Ok(format!("clause: {colourable}/8 scenarios colourable, the 2 all-equal ones not"))
}

#[test]
fn criterion_5_gadget_certification() {
    let set = GadgetSet::shipped();
    let mut parts = Vec::new();
    let mut outcome = Ok(());
    for (name, cert) in [("fanout", &set.fanout), ("variable", &set.variable), ("clause", &set.clause)] {
        let fresh = certify(&cert.gadget);
        if !fresh.passed() {
            outcome = Err(format!("{name}: {}", fresh.summary()));
            break;
        }
        if fresh.to_text() != cert.report.to_text() {
            outcome = Err(format!("{name}: re-certification differs from the shipped certificate"));
            break;
        }
        parts.push(format!("{name} {}", fresh.summary()));
    }
    if matches!(set.fanout.gadget.role(), Role::Fanout(w) if w < 2) {
        outcome = Err("base fanout narrower than 2".into());
    }
    let outcome = outcome.and_then(|()| {
        let f = check_fanout(&set)?;
        let v = check_variable(&set)?;
        let c = check_clause(&set)?;
        Ok(format!("{}; {f}; {v}; {c}", parts.join(", ")))
    });
    finish(5, outcome);
}

/// Paths, cycles and stars with up to 8 edges, then 100 random graphs with
/// up to 8 edges.
fn small_graph_corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for e in 1..=8 {
        out.push((format!("path {e}"), families::path(e)));
        out.push((format!("star {e}"), families::star(e)));
        if e >= 3 {
            out.push((format!("cycle {e}"), families::cycle(e)));
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_0006);
    for i in 0..100 {
        let n = rng.gen_range(2..=8);
        let target = rng.gen_range(1..=8);
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for _ in 0..200 {
            if list.len() == target {
                break;
            }
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && seen.insert((a.min(b), a.max(b))) {
                list.push((format!("u{a}"), format!("u{b}")));
            }
        }
        out.push((format!("random {i}"), build_graph(&list).unwrap()));
    }
    out
}

fn solve_default(g: &Graph, k: usize) -> SolveOutcome {
    let rel = conflict_relation(g);
    solve_with(g, &rel, k, &Hints::new(), &SolveOptions::default()).unwrap().0
}

#[test]
fn criterion_6_solver_against_brute_force() {
    let mut failures = Vec::new();
    let mut checks = 0;
    let corpus = small_graph_corpus();
    for (name, g) in &corpus {
        let bound = brute_force_index(g, 5).unwrap();
        for k in 1..=5 {
            let expected = bound.admits(k).unwrap();
            for engine in [Engine::Learning, Engine::Backjump] {
                let rel = conflict_relation(g);
                let opts = SolveOptions { engine, ..SolveOptions::default() };
                let got = solve_with(g, &rel, k, &Hints::new(), &opts).unwrap().0;
                checks += 1;
                if let SolveOutcome::Sat(c) = &got {
                    if !verify(g, c, k).is_valid() {
                        failures.push(format!("{name} k={k} {engine:?}: invalid colouring"));
                    }
                }
                if got.is_sat() != expected || matches!(got, SolveOutcome::BudgetExceeded) {
                    failures.push(format!("{name} k={k} {engine:?}: solver {}, oracle {expected}", got.is_sat()));
                }
            }
        }
    }
    let index = |g: &Graph| (1..=5).find(|&k| solve_default(g, k).is_sat());
    let (c5, c6) = (index(&families::cycle(5)), index(&families::cycle(6)));
    if c5 != Some(5) || c6 != Some(3) {
        failures.push(format!("anchors: 5-cycle {c5:?}, 6-cycle {c6:?}"));
    }
    let outcome = if failures.is_empty() {
        Ok(format!(
            "{} graphs x k=1..5 x 2 engines = {checks} decisions agree with brute force; 5-cycle index 5, 6-cycle index 3",
            corpus.len()
        ))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(6, outcome);
}

#[test]
fn criterion_7_verifier_sensitivity() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let mut pairs = 0;
    let mut failures = Vec::new();
    let mut attempts = 0;
    while pairs < 100 && attempts < 10_000 {
        attempts += 1;
        let n = rng.gen_range(3..=10);
        let mut list = Vec::new();
        let mut seen = BTreeSet::new();
        for _ in 0..rng.gen_range(2..=14) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && seen.insert((a.min(b), a.max(b))) {
                list.push((format!("w{a}"), format!("w{b}")));
            }
        }
        if list.is_empty() {
            continue;
        }
        let g = build_graph(&list).unwrap();
        let rel = conflict_relation(&g);
        let candidates: Vec<EdgeId> = g.edge_ids().filter(|&e| !rel.conflicts(e).is_empty()).collect();
        if candidates.is_empty() {
            continue;
        }
        let k = 16;
        let SolveOutcome::Sat(c) = solve_default(&g, k) else {
            failures.push("no colouring with 16 colours".to_string());
            continue;
        };
        if !verify(&g, &c, k).is_valid() {
            failures.push("solver colouring invalid".to_string());
            continue;
        }
        let e = candidates[rng.gen_range(0..candidates.len())];
        let nbrs = rel.conflicts(e);
        let f = nbrs[rng.gen_range(0..nbrs.len())];
        let mut mutated = c.clone();
        mutated.set(e, c.get(f));
        pairs += 1;
        let r = verify(&g, &mutated, k);
        if r.violations.is_empty() {
            failures.push(format!("mutation of edge {} to the colour of {} went unnoticed", e.0, f.0));
        }
    }
    let outcome = if failures.is_empty() && pairs == 100 {
        Ok("100 single-edge mutations onto a conflicting colour all reported".to_string())
    } else if pairs < 100 {
        Err(format!("only {pairs} pairs generated"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(7, outcome);
}

#[test]
fn criterion_8_cnf_backend_equivalence() {
    let mut failures = Vec::new();
    let mut checks = 0;
    let corpus = small_graph_corpus();
    for (name, g) in &corpus {
        for k in 1..=5 {
            let cnf = encode_cnf(g, k, &Hints::new());
            let model = cnf.dpll();
            if let Some(m) = &model {
                if !cnf.satisfied_by(m) {
                    failures.push(format!("{name} k={k}: DPLL model does not satisfy the formula"));
                }
            }
            checks += 1;
            if model.is_some() != solve_default(g, k).is_sat() {
                failures.push(format!("{name} k={k}: CNF {}, solver disagrees", model.is_some()));
            }
        }
    }
    let outcome = if failures.is_empty() {
        Ok(format!("{checks} (graph, k) pairs: CNF satisfiability agrees with solve"))
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    };
    finish(8, outcome);
}
