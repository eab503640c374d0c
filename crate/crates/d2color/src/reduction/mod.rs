//! Not-All-Equal 3-SAT instances and their reduction to distance-2
//! 5-colouring.

use std::fmt;

use thiserror::Error;

pub mod compile;
pub mod roundtrip;
pub mod transform;

pub use compile::{compile, predicted_size, Fusion, InstanceKind, PlacedInstance, ReductionArtifact};
pub use roundtrip::{roundtrip, RoundTrip, RoundTripError, RoundTripOptions};
pub use transform::{
    assignment_to_coloring, coloring_to_assignment, coloring_to_assignment_counted, TransformError, Transformed,
};

/// Default guard on the variable count for [`nae_brute_force`].
pub const DEFAULT_NAE_GUARD: usize = 24;

/// A literal over variables numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Literal {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Literal {
        Literal { var, positive: false }
    }

    pub fn eval(self, a: &Assignment) -> bool {
        a.values[self.var - 1] == self.positive
    }

    fn dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", if self.positive { "" } else { "¬" }, self.var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NaeInstance {
    pub n: usize,
    pub clauses: Vec<[Literal; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub values: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaeError {
    #[error("line {line}: bad header, expected `p nae <n> <m>`")]
    BadHeader { line: usize },
    #[error("missing `p nae <n> <m>` header")]
    MissingHeader,
    #[error("instance needs at least one variable")]
    NoVariables,
    #[error("line {line}: clause {clause} has {count} literals, expected 3")]
    ClauseWidth { line: usize, clause: usize, count: usize },
    #[error("line {line}: clause {clause} is not terminated by 0")]
    Unterminated { line: usize, clause: usize },
    #[error("line {line}: variable index {index} outside 1..={n}")]
    VarRange { line: usize, index: i64, n: usize },
    #[error("line {line}: bad literal `{token}`")]
    BadLiteral { line: usize, token: String },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("assignment has {found} values for {n} variables")]
    Length { n: usize, found: usize },
    #[error("{n} variables exceed the brute-force guard of {guard}")]
    TooManyVariables { n: usize, guard: usize },
}

impl NaeInstance {
    pub fn new(n: usize, clauses: Vec<[Literal; 3]>) -> Result<NaeInstance, NaeError> {
        if n == 0 {
            return Err(NaeError::NoVariables);
        }
        for (j, cl) in clauses.iter().enumerate() {
            for l in cl {
                if l.var == 0 || l.var > n {
                    return Err(NaeError::VarRange { line: j + 1, index: l.var as i64, n });
                }
            }
        }
        Ok(NaeInstance { n, clauses })
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Occurrences of each literal: `(positive, negative)` per variable.
    pub fn occurrences(&self) -> Vec<(usize, usize)> {
        let mut occ = vec![(0, 0); self.n];
        for cl in &self.clauses {
            for l in cl {
                if l.positive {
                    occ[l.var - 1].0 += 1;
                } else {
                    occ[l.var - 1].1 += 1;
                }
            }
        }
        occ
    }

    /// Whether some clause repeats a variable.
    pub fn has_repeated_variable(&self) -> bool {
        self.clauses
            .iter()
            .any(|c| c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("p nae {} {}\n", self.n, self.m());
        for cl in &self.clauses {
            out.push_str(&format!("{} {} {} 0\n", cl[0].dimacs(), cl[1].dimacs(), cl[2].dimacs()));
        }
        out
    }
}

impl fmt::Display for NaeInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cls: Vec<String> =
            self.clauses.iter().map(|c| format!("({},{},{})", c[0], c[1], c[2])).collect();
        write!(f, "n={} {}", self.n, cls.join(" "))
    }
}

/// Parses `p nae <n> <m>` followed by one clause per line: three nonzero
/// integers (negative for a negated variable) and a terminating `0`. Lines
/// starting with `c` are comments.
pub fn parse_nae(text: &str) -> Result<NaeInstance, NaeError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "p" {
            match toks.as_slice() {
                [_, "nae", n, m] if header.is_none() => {
                    let n = n.parse().map_err(|_| NaeError::BadHeader { line: line_no })?;
                    let m = m.parse().map_err(|_| NaeError::BadHeader { line: line_no })?;
                    header = Some((n, m));
                    continue;
                }
                _ => return Err(NaeError::BadHeader { line: line_no }),
            }
        }
        let Some((n, _)) = header else {
            return Err(NaeError::MissingHeader);
        };
        let clause = clauses.len() + 1;
        let mut nums = Vec::new();
        for tok in &toks {
            let v: i64 = tok
                .parse()
                .map_err(|_| NaeError::BadLiteral { line: line_no, token: tok.to_string() })?;
            nums.push(v);
        }
        if nums.last() != Some(&0) {
            return Err(NaeError::Unterminated { line: line_no, clause });
        }
        nums.pop();
        if nums.contains(&0) {
            return Err(NaeError::BadLiteral { line: line_no, token: "0".into() });
        }
        if nums.len() != 3 {
            return Err(NaeError::ClauseWidth { line: line_no, clause, count: nums.len() });
        }
        let mut lits = [Literal::pos(1); 3];
        for (slot, &v) in lits.iter_mut().zip(&nums) {
            if v.unsigned_abs() as usize > n {
                return Err(NaeError::VarRange { line: line_no, index: v, n });
            }
            *slot = Literal { var: v.unsigned_abs() as usize, positive: v > 0 };
        }
        clauses.push(lits);
    }
    let (n, m) = header.ok_or(NaeError::MissingHeader)?;
    if m != clauses.len() {
        return Err(NaeError::ClauseCount { declared: m, found: clauses.len() });
    }
    NaeInstance::new(n, clauses)
}

/// Whether every clause has a true and a false literal. On failure, the
/// index (from 0) of the first all-equal clause.
pub fn check_nae(inst: &NaeInstance, a: &Assignment) -> Result<Result<(), usize>, NaeError> {
    if a.values.len() != inst.n {
        return Err(NaeError::Length { n: inst.n, found: a.values.len() });
    }
    for (j, cl) in inst.clauses.iter().enumerate() {
        let v = cl.map(|l| l.eval(a));
        if v[0] == v[1] && v[1] == v[2] {
            return Ok(Err(j));
        }
    }
    Ok(Ok(()))
}

/// Scans all `2^n` assignments in lexicographic order (false before true,
/// `x1` most significant) and returns the first NAE-satisfying one.
pub fn nae_brute_force(inst: &NaeInstance) -> Result<Option<Assignment>, NaeError> {
    nae_brute_force_guarded(inst, DEFAULT_NAE_GUARD)
}

pub fn nae_brute_force_guarded(inst: &NaeInstance, guard: usize) -> Result<Option<Assignment>, NaeError> {
    if inst.n > guard {
        return Err(NaeError::TooManyVariables { n: inst.n, guard });
    }
    for bits in 0u64..1 << inst.n {
        let a = Assignment { values: (0..inst.n).map(|i| bits >> (inst.n - 1 - i) & 1 == 1).collect() };
        if check_nae(inst, &a)? == Ok(()) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let i = parse_nae("p nae 2 1\n1 -2 2 0").unwrap();
        assert_eq!(i.n, 2);
        assert_eq!(i.clauses, vec![[Literal::pos(1), Literal::neg(2), Literal::pos(2)]]);
        assert_eq!(
            parse_nae("p nae 1 1\n1 1 0"),
            Err(NaeError::ClauseWidth { line: 2, clause: 1, count: 2 })
        );
        assert_eq!(parse_nae("p nae 3 0").unwrap().m(), 0);
        assert_eq!(parse_nae("p nae x 0"), Err(NaeError::BadHeader { line: 1 }));
        assert!(matches!(parse_nae("p nae 1 1\n1 2 1 0"), Err(NaeError::VarRange { index: 2, .. })));
        assert_eq!(parse_nae("p nae 0 0"), Err(NaeError::NoVariables));
        assert!(parse_nae("c hello\np nae 1 0\n").is_ok());
    }

    #[test]
    fn text_round_trip() {
        let i = parse_nae("p nae 3 2\n1 -2 3 0\n-1 -1 2 0\n").unwrap();
        assert_eq!(parse_nae(&i.to_text()).unwrap(), i);
    }

    #[test]
    fn check_examples() {
        let all = |n| Assignment { values: vec![true; n] };
        let i = parse_nae("p nae 3 1\n1 2 3 0").unwrap();
        assert_eq!(check_nae(&i, &all(3)).unwrap(), Err(0));
        let i = parse_nae("p nae 2 1\n1 2 -1 0").unwrap();
        assert_eq!(check_nae(&i, &all(2)).unwrap(), Ok(()));
        let i = parse_nae("p nae 1 1\n1 1 1 0").unwrap();
        assert_eq!(check_nae(&i, &all(1)).unwrap(), Err(0));
        assert!(check_nae(&i, &all(2)).is_err());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(nae_brute_force(&parse_nae("p nae 1 1\n1 1 1 0").unwrap()).unwrap(), None);
        let w = nae_brute_force(&parse_nae("p nae 2 1\n1 2 -1 0").unwrap()).unwrap();
        assert_eq!(w, Some(Assignment { values: vec![false, false] }));
        let w = nae_brute_force(&parse_nae("p nae 3 0").unwrap()).unwrap();
        assert_eq!(w, Some(Assignment { values: vec![false; 3] }));
        let w = nae_brute_force(&parse_nae("p nae 2 1\n1 1 2 0").unwrap()).unwrap();
        assert_eq!(w, Some(Assignment { values: vec![false, true] }));
    }
}
