//! Distance-2 edge colourings: the conflict relation, palettes, colourings
//! and their verification, plus the exact solvers in the submodules.
//!
//! Two edges conflict when they share an endpoint or when some third edge
//! touches both of them. The conflict graph is therefore the square of the
//! line graph, and a distance-2 edge colouring is a proper vertex colouring
//! of it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, Graph};

pub mod brute;
pub mod cnf;
mod learn;
pub mod solver;

pub use brute::{brute_force_index, BruteForceError, IndexBound};
pub use cnf::{encode_cnf, Cnf};
pub use brute::{brute_force_index_guarded, DEFAULT_EDGE_GUARD};
pub use solver::{solve, solve_with, Engine, SolveError, SolveOptions, SolveOutcome, SolveStats, UnsatWitness};

/// The symmetric, irreflexive distance-2 relation on the edges of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictRelation {
    lists: Vec<Vec<EdgeId>>,
}

impl ConflictRelation {
    pub fn conflicts(&self, e: EdgeId) -> &[EdgeId] {
        &self.lists[e.0]
    }

    pub fn in_conflict(&self, e: EdgeId, f: EdgeId) -> bool {
        self.lists[e.0].binary_search(&f).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.lists.len()
    }

    /// All conflicting pairs `(e, f)` with `e < f`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.lists.iter().enumerate().flat_map(|(i, list)| {
            list.iter().filter(move |f| f.0 > i).map(move |&f| (EdgeId(i), f))
        })
    }

    pub fn pair_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// For each edge, collect the edges at its endpoints (distance 1) and the
/// edges at the far endpoints of those (distance 2).
pub fn conflict_relation(g: &Graph) -> ConflictRelation {
    let mut lists = Vec::with_capacity(g.edge_count());
    let mut seen = BTreeSet::new();
    for e in g.edge_ids() {
        seen.clear();
        let (u, v) = g.endpoints(e);
        for end in [u, v] {
            for &(w, f) in g.neighbors(end) {
                seen.insert(f);
                for &(_, h) in g.neighbors(w) {
                    seen.insert(h);
                }
            }
        }
        seen.remove(&e);
        lists.push(seen.iter().copied().collect());
    }
    ConflictRelation { lists }
}

/// Ordered list of distinct colour labels; colours are indices into it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Palette {
    labels: Vec<String>,
}

/// Labels of the five-colour palette used by the reduction.
pub const NAE_LABELS: [&str; 5] = ["T", "F", "1", "2", "3"];

impl Palette {
    /// `{T,F,1,2,3}` for `k = 5`, otherwise `k1..k<k>`.
    pub fn standard(k: usize) -> Palette {
        if k == 5 {
            Palette::nae()
        } else {
            Palette { labels: (1..=k).map(|i| format!("k{i}")).collect() }
        }
    }

    pub fn nae() -> Palette {
        Palette { labels: NAE_LABELS.iter().map(|s| s.to_string()).collect() }
    }

    pub fn from_labels<I, S>(labels: I) -> Result<Palette, ColoringError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(ColoringError::DuplicateLabel);
        }
        if labels.len() > 64 {
            return Err(ColoringError::PaletteTooLarge(labels.len()));
        }
        Ok(Palette { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, c: Color) -> &str {
        &self.labels[c.0 as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn color(&self, label: &str) -> Option<Color> {
        self.labels.iter().position(|l| l == label).map(|i| Color(i as u8))
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> {
        (0..self.labels.len() as u8).map(Color)
    }
}

/// Index of a label within a [`Palette`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u8);

impl Color {
    pub const T: Color = Color(0);
    pub const F: Color = Color(1);
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("palette lists a label twice")]
    DuplicateLabel,
    #[error("palette of {0} labels exceeds the supported 64")]
    PaletteTooLarge(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: no edge {a}-{b} in the graph")]
    UnknownEdge { line: usize, a: String, b: String },
    #[error("line {line}: edge {a}-{b} coloured twice")]
    Recolored { line: usize, a: String, b: String },
}

/// A possibly partial assignment of palette colours to the edges of one
/// graph, indexed by [`EdgeId`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D2Coloring {
    palette: Palette,
    colors: Vec<Option<Color>>,
}

impl D2Coloring {
    pub fn uncolored(palette: Palette, edges: usize) -> D2Coloring {
        D2Coloring { palette, colors: vec![None; edges] }
    }

    pub fn from_colors(palette: Palette, colors: Vec<Option<Color>>) -> D2Coloring {
        D2Coloring { palette, colors }
    }

    pub fn palette(&self) -> &Palette {
        &self.palette
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e.0]
    }

    pub fn label(&self, e: EdgeId) -> Option<&str> {
        self.colors[e.0].map(|c| self.palette.label(c))
    }

    pub fn set(&mut self, e: EdgeId, c: Option<Color>) {
        self.colors[e.0] = c;
    }

    pub fn colors(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    /// Iterates over coloured edges.
    pub fn assigned(&self) -> impl Iterator<Item = (EdgeId, Color)> + '_ {
        self.colors.iter().enumerate().filter_map(|(i, c)| c.map(|c| (EdgeId(i), c)))
    }

    /// Parses `c <id1> <id2> <label>` lines against `g`. Labels must belong to
    /// `palette`.
    pub fn parse(g: &Graph, palette: Palette, text: &str) -> Result<D2Coloring, ColoringError> {
        let mut out = D2Coloring::uncolored(palette, g.edge_count());
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let line_no = lineno + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            let ["c", a, b, label] = toks.as_slice() else {
                return Err(ColoringError::Parse {
                    line: line_no,
                    msg: format!("expected `c <id1> <id2> <label>`, found `{line}`"),
                });
            };
            let e = g.find_edge(a, b).ok_or_else(|| ColoringError::UnknownEdge {
                line: line_no,
                a: a.to_string(),
                b: b.to_string(),
            })?;
            let c = out.palette.color(label).ok_or_else(|| ColoringError::Parse {
                line: line_no,
                msg: format!("label `{label}` is not in the palette"),
            })?;
            if out.colors[e.0].is_some() {
                return Err(ColoringError::Recolored { line: line_no, a: a.to_string(), b: b.to_string() });
            }
            out.colors[e.0] = Some(c);
        }
        Ok(out)
    }

    /// Parses a colouring file, choosing the palette from its labels: the
    /// five-colour palette when every label is one of `T,F,1,2,3`, otherwise
    /// the generic `k<i>` palette large enough for the labels present.
    pub fn parse_auto(g: &Graph, text: &str) -> Result<D2Coloring, ColoringError> {
        let labels: Vec<&str> = text
            .lines()
            .filter_map(|l| {
                let toks: Vec<&str> = l.split_whitespace().collect();
                (toks.len() == 4 && toks[0] == "c").then(|| toks[3])
            })
            .collect();
        let palette = if labels.iter().all(|l| NAE_LABELS.contains(l)) {
            Palette::nae()
        } else {
            let top = labels
                .iter()
                .filter_map(|l| l.strip_prefix('k').and_then(|n| n.parse::<usize>().ok()))
                .max()
                .unwrap_or(0);
            Palette::standard(top.max(1))
        };
        D2Coloring::parse(g, palette, text)
    }

    /// Canonical text form, one line per coloured edge, sorted.
    pub fn to_text(&self, g: &Graph) -> String {
        let mut lines: Vec<String> = self
            .assigned()
            .map(|(e, c)| {
                let (a, b) = g.edge_names(e);
                format!("c {a} {b} {}", self.palette.label(c))
            })
            .collect();
        lines.sort();
        lines.iter().map(|l| format!("{l}\n")).collect()
    }

    /// Applies a palette relabelling: colour `c` becomes `perm[c]`.
    pub fn permuted(&self, perm: &[Color]) -> D2Coloring {
        D2Coloring {
            palette: self.palette.clone(),
            colors: self.colors.iter().map(|c| c.map(|c| perm[c.0 as usize])).collect(),
        }
    }
}

/// Outcome of [`verify`]. Every problem found is listed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerifyReport {
    /// Conflicting edge pairs sharing a colour, `e < f`.
    pub violations: Vec<(EdgeId, EdgeId)>,
    pub uncolored: Vec<EdgeId>,
    /// Labels used beyond the first `k` distinct ones (in palette order).
    pub overpalette: Vec<String>,
}

impl VerifyReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.uncolored.is_empty() && self.overpalette.is_empty()
    }

    pub fn render(&self, g: &Graph, c: &D2Coloring) -> String {
        if self.is_valid() {
            return "valid\n".to_string();
        }
        let mut out = String::new();
        for &(e, f) in &self.violations {
            let (a, b) = g.edge_names(e);
            let (x, y) = g.edge_names(f);
            out.push_str(&format!(
                "violation {a} {b} / {x} {y} share {}\n",
                c.label(e).unwrap_or("?")
            ));
        }
        for &e in &self.uncolored {
            let (a, b) = g.edge_names(e);
            out.push_str(&format!("uncolored {a} {b}\n"));
        }
        for l in &self.overpalette {
            out.push_str(&format!("overpalette {l}\n"));
        }
        out
    }
}

/// Checks that `c` is total, uses at most `k` distinct labels and gives
/// distinct colours to every conflicting pair.
pub fn verify(g: &Graph, c: &D2Coloring, k: usize) -> VerifyReport {
    verify_with(g, &conflict_relation(g), c, k)
}

pub fn verify_with(g: &Graph, rel: &ConflictRelation, c: &D2Coloring, k: usize) -> VerifyReport {
    debug_assert_eq!(c.edge_count(), g.edge_count());
    let mut report = VerifyReport::default();
    for (e, f) in rel.pairs() {
        if let (Some(x), Some(y)) = (c.get(e), c.get(f)) {
            if x == y {
                report.violations.push((e, f));
            }
        }
    }
    report.uncolored = g.edge_ids().filter(|&e| c.get(e).is_none()).collect();
    let used: BTreeSet<Color> = c.assigned().map(|(_, col)| col).collect();
    report.overpalette = used.iter().skip(k).map(|&col| c.palette().label(col).to_string()).collect();
    report
}

/// Colour hints keyed by edge, as consumed by the solvers.
pub type Hints = BTreeMap<EdgeId, Color>;

/// Turns a partial colouring into solver hints.
pub fn hints_of(c: &D2Coloring) -> Hints {
    c.assigned().collect()
}

/// Remaps a colouring onto another palette by label. Fails on the first
/// label the target palette lacks.
pub fn relabel(c: &D2Coloring, target: &Palette) -> Result<D2Coloring, String> {
    let map: HashMap<Color, Color> = c
        .palette()
        .colors()
        .filter_map(|col| target.color(c.palette().label(col)).map(|t| (col, t)))
        .collect();
    let colors = c
        .colors()
        .iter()
        .map(|col| match col {
            None => Ok(None),
            Some(col) => map
                .get(col)
                .copied()
                .map(Some)
                .ok_or_else(|| c.palette().label(*col).to_string()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(D2Coloring::from_colors(target.clone(), colors))
}

impl fmt::Display for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(","))
    }
}
