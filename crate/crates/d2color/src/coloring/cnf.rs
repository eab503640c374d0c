//! DIMACS CNF export of the k-colouring problem, a DIMACS reader and a small
//! DPLL for checking tiny formulas without an external solver.
//!
//! Variable `e * k + c + 1` is true when edge `e` gets colour `c`.

use super::{conflict_relation, Hints, Palette};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub comments: Vec<String>,
}

pub fn encode_cnf(g: &Graph, k: usize, hints: &Hints) -> Cnf {
    let var = |e: usize, c: usize| (e * k + c + 1) as i32;
    let palette = Palette::standard(k);
    let m = g.edge_count();
    let mut cnf = Cnf { num_vars: m * k, ..Cnf::default() };
    for e in g.edge_ids() {
        let (a, b) = g.edge_names(e);
        for c in palette.colors() {
            cnf.comments.push(format!(
                "var {} edge {a} {b} color {}",
                var(e.0, c.0 as usize),
                palette.label(c)
            ));
        }
    }
    for e in 0..m {
        cnf.clauses.push((0..k).map(|c| var(e, c)).collect());
        for c in 0..k {
            for d in c + 1..k {
                cnf.clauses.push(vec![-var(e, c), -var(e, d)]);
            }
        }
    }
    for (e, f) in conflict_relation(g).pairs() {
        for c in 0..k {
            cnf.clauses.push(vec![-var(e.0, c), -var(f.0, c)]);
        }
    }
    for (&e, &c) in hints {
        cnf.clauses.push(vec![var(e.0, c.0 as usize)]);
    }
    cnf
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("c ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf, String> {
        let mut cnf = Cnf::default();
        let mut declared = None;
        let mut current = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('c') {
                if rest.is_empty() || rest.starts_with(' ') {
                    cnf.comments.push(rest.trim_start().to_string());
                    continue;
                }
            }
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| format!("line {}: bad header", i + 1)))
                    .collect::<Result<_, _>>()?;
                let [v, c] = nums[..] else {
                    return Err(format!("line {}: bad header", i + 1));
                };
                cnf.num_vars = v;
                declared = Some(c);
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| format!("line {}: bad literal `{tok}`", i + 1))?;
                if lit == 0 {
                    cnf.clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > cnf.num_vars {
                    return Err(format!("line {}: literal {lit} beyond declared variables", i + 1));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err("last clause lacks its terminating 0".to_string());
        }
        match declared {
            None => Err("missing `p cnf` header".to_string()),
            Some(c) if c != cnf.clauses.len() => {
                Err(format!("header declares {c} clauses, found {}", cnf.clauses.len()))
            }
            Some(_) => Ok(cnf),
        }
    }

    /// Satisfiability by plain DPLL with unit propagation. Returns a model
    /// indexed by variable (slot 0 unused). Meant for small formulas.
    pub fn dpll(&self) -> Option<Vec<bool>> {
        let mut assign: Vec<Option<bool>> = vec![None; self.num_vars + 1];
        if dpll(&self.clauses, &mut assign) {
            Some(assign.iter().map(|v| v.unwrap_or(false)).collect())
        } else {
            None
        }
    }

    /// Whether `model` satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
    }
}

fn value(assign: &[Option<bool>], lit: i32) -> Option<bool> {
    assign[lit.unsigned_abs() as usize].map(|v| v == (lit > 0))
}

fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    let ok = loop {
        let mut unit = None;
        let mut conflict = false;
        let mut branch = None;
        for cl in clauses {
            let mut open = Vec::new();
            let mut sat = false;
            for &l in cl {
                match value(assign, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => open.push(l),
                }
            }
            if sat {
                continue;
            }
            match open.len() {
                0 => {
                    conflict = true;
                    break;
                }
                1 => {
                    unit = Some(open[0]);
                    break;
                }
                _ => {
                    if branch.is_none() {
                        branch = Some(open[0]);
                    }
                }
            }
        }
        if conflict {
            break false;
        }
        if let Some(l) = unit {
            assign[l.unsigned_abs() as usize] = Some(l > 0);
            trail.push(l.unsigned_abs() as usize);
            continue;
        }
        match branch {
            None => return true,
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                for choice in [l > 0, l < 0] {
                    assign[v] = Some(choice);
                    if dpll(clauses, assign) {
                        return true;
                    }
                }
                assign[v] = None;
                break false;
            }
        }
    };
    for v in trail {
        assign[v] = None;
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn single_edge_counts() {
        let cnf = encode_cnf(&path(1), 2, &Hints::new());
        assert_eq!(cnf.num_vars, 2);
        assert_eq!(cnf.clauses, vec![vec![1, 2], vec![-1, -2]]);
    }

    #[test]
    fn star_satisfiability() {
        assert!(encode_cnf(&star(3), 3, &Hints::new()).dpll().is_some());
        assert!(encode_cnf(&star(3), 2, &Hints::new()).dpll().is_none());
    }

    #[test]
    fn dimacs_round_trip() {
        let cnf = encode_cnf(&cycle(4), 3, &Hints::new());
        let text = cnf.to_dimacs();
        assert!(text.contains("p cnf 12 "));
        assert_eq!(Cnf::parse_dimacs(&text).unwrap(), cnf);
    }

    #[test]
    fn model_is_checked() {
        let cnf = encode_cnf(&cycle(6), 3, &Hints::new());
        let model = cnf.dpll().unwrap();
        assert!(cnf.satisfied_by(&model));
    }
}
