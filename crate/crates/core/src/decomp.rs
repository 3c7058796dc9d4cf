//! Decomposition value types, width formulas and the text file format.
//!
//! Decomposition nodes are dense ids `0..n_nodes`. Bags hold vertex ids of
//! the digraph being decomposed.
//!
//! File format, one record per line:
//!
//! ```text
//! arboreal 3
//! node 0 W: 0
//! arc 0 1 A: 0
//!
//! dag 3
//! node 0 X: 0
//! arc 0 1
//!
//! kelly 3
//! node 0 W: 0 X:
//! arc 0 1
//! order 0: 1
//! roots: 0
//! ```

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{SccPartition, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Arboreal,
    Dag,
    Kelly,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Arboreal, Kind::Dag, Kind::Kelly];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Arboreal => "arboreal",
            Kind::Dag => "dag",
            Kind::Kelly => "kelly",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arboreal" => Ok(Kind::Arboreal),
            "dag" => Ok(Kind::Dag),
            "kelly" => Ok(Kind::Kelly),
            other => Err(FormatError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("unknown decomposition kind {0:?}")]
    UnknownKind(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected a {expected} decomposition, found {found}")]
    WrongKind { expected: Kind, found: Kind },
    #[error("empty document")]
    Empty,
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// `(T, W, A)`: an arborescence with a node bag per node and an arc bag per arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArborealDecomposition {
    pub node_bags: Vec<VertexSet>,
    pub arcs: Vec<(usize, usize)>,
    pub arc_bags: Vec<VertexSet>,
}

/// `(T, X)`: a DAG with one bag per node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagDecomposition {
    pub arcs: Vec<(usize, usize)>,
    pub bags: Vec<VertexSet>,
}

/// `(T, W, X)` plus the child and root enumerations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KellyDecomposition {
    pub arcs: Vec<(usize, usize)>,
    pub node_bags: Vec<VertexSet>,
    pub guard_bags: Vec<VertexSet>,
    pub child_order: Vec<Vec<usize>>,
    pub root_order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Arboreal(ArborealDecomposition),
    Dag(DagDecomposition),
    Kelly(KellyDecomposition),
}

impl ArborealDecomposition {
    pub fn n_nodes(&self) -> usize {
        self.node_bags.len()
    }

    /// `max |W_i ∪ A_{∼i}| − 1`, where `A_{∼i}` joins the bags of every arc
    /// incident with `i` in either direction.
    pub fn width(&self) -> usize {
        (0..self.n_nodes())
            .map(|i| {
                let mut bag = self.node_bags[i].clone();
                for (&(a, b), ab) in self.arcs.iter().zip(&self.arc_bags) {
                    if a == i || b == i {
                        bag.extend(ab);
                    }
                }
                bag.len()
            })
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }
}

impl DagDecomposition {
    pub fn n_nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0)
    }
}

impl KellyDecomposition {
    pub fn n_nodes(&self) -> usize {
        self.node_bags.len()
    }

    pub fn width(&self) -> usize {
        self.node_bags
            .iter()
            .zip(&self.guard_bags)
            .map(|(w, x)| w.union(x).count())
            .max()
            .unwrap_or(0)
    }
}

impl Decomposition {
    pub fn kind(&self) -> Kind {
        match self {
            Decomposition::Arboreal(_) => Kind::Arboreal,
            Decomposition::Dag(_) => Kind::Dag,
            Decomposition::Kelly(_) => Kind::Kelly,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Decomposition::Arboreal(d) => d.width(),
            Decomposition::Dag(d) => d.width(),
            Decomposition::Kelly(d) => d.width(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        match self {
            Decomposition::Arboreal(d) => d.n_nodes(),
            Decomposition::Dag(d) => d.n_nodes(),
            Decomposition::Kelly(d) => d.n_nodes(),
        }
    }

    /// Rewrites every vertex id inside every bag.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Decomposition {
        let map = |bags: &[VertexSet]| -> Vec<VertexSet> {
            bags.iter()
                .map(|b| b.iter().map(|&x| f(x)).collect())
                .collect()
        };
        match self {
            Decomposition::Arboreal(d) => Decomposition::Arboreal(ArborealDecomposition {
                node_bags: map(&d.node_bags),
                arcs: d.arcs.clone(),
                arc_bags: map(&d.arc_bags),
            }),
            Decomposition::Dag(d) => Decomposition::Dag(DagDecomposition {
                arcs: d.arcs.clone(),
                bags: map(&d.bags),
            }),
            Decomposition::Kelly(d) => Decomposition::Kelly(KellyDecomposition {
                arcs: d.arcs.clone(),
                node_bags: map(&d.node_bags),
                guard_bags: map(&d.guard_bags),
                child_order: d.child_order.clone(),
                root_order: d.root_order.clone(),
            }),
        }
    }

    /// Every vertex id mentioned in any bag.
    pub fn vertices(&self) -> VertexSet {
        let bags: Vec<&VertexSet> = match self {
            Decomposition::Arboreal(d) => d.node_bags.iter().chain(&d.arc_bags).collect(),
            Decomposition::Dag(d) => d.bags.iter().collect(),
            Decomposition::Kelly(d) => d.node_bags.iter().chain(&d.guard_bags).collect(),
        };
        bags.into_iter().flatten().copied().collect()
    }
}

fn write_set(out: &mut String, label: &str, set: &VertexSet) {
    out.push(' ');
    out.push_str(label);
    for x in set {
        write!(out, " {x}").unwrap();
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = format!("{} {}\n", self.kind(), self.n_nodes());
        match self {
            Decomposition::Arboreal(d) => {
                for (i, w) in d.node_bags.iter().enumerate() {
                    write!(out, "node {i}").unwrap();
                    write_set(&mut out, "W:", w);
                    out.push('\n');
                }
                for (&(a, b), ab) in d.arcs.iter().zip(&d.arc_bags) {
                    write!(out, "arc {a} {b}").unwrap();
                    write_set(&mut out, "A:", ab);
                    out.push('\n');
                }
            }
            Decomposition::Dag(d) => {
                for (i, x) in d.bags.iter().enumerate() {
                    write!(out, "node {i}").unwrap();
                    write_set(&mut out, "X:", x);
                    out.push('\n');
                }
                for (a, b) in &d.arcs {
                    writeln!(out, "arc {a} {b}").unwrap();
                }
            }
            Decomposition::Kelly(d) => {
                for (i, (w, x)) in d.node_bags.iter().zip(&d.guard_bags).enumerate() {
                    write!(out, "node {i}").unwrap();
                    write_set(&mut out, "W:", w);
                    write_set(&mut out, "X:", x);
                    out.push('\n');
                }
                for (a, b) in &d.arcs {
                    writeln!(out, "arc {a} {b}").unwrap();
                }
                for (i, cs) in d.child_order.iter().enumerate() {
                    write!(out, "order {i}:").unwrap();
                    for c in cs {
                        write!(out, " {c}").unwrap();
                    }
                    out.push('\n');
                }
                out.push_str("roots:");
                for r in &d.root_order {
                    write!(out, " {r}").unwrap();
                }
                out.push('\n');
            }
        }
        f.write_str(&out)
    }
}

struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

fn meaningful_lines(text: &str, first_line: usize) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + first_line, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(no, l)| Line {
            no,
            tokens: l.split_whitespace().collect(),
        })
        .collect()
}

fn num(line: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected an integer, found {tok:?}")))
}

/// Splits `W: 1 2 X: 3` style token runs into labelled sets.
fn labelled_sets(
    line: usize,
    tokens: &[&str],
    labels: &[&str],
) -> Result<Vec<VertexSet>, FormatError> {
    let mut sets = vec![VertexSet::new(); labels.len()];
    let mut current: Option<usize> = None;
    let mut seen = vec![false; labels.len()];
    for tok in tokens {
        if let Some(k) = labels.iter().position(|l| l == tok) {
            if seen[k] {
                return Err(syntax(line, format!("repeated field {tok}")));
            }
            seen[k] = true;
            current = Some(k);
        } else {
            let k = current
                .ok_or_else(|| syntax(line, format!("value {tok:?} before any field label")))?;
            if !sets[k].insert(num(line, tok)?) {
                return Err(syntax(line, format!("vertex {tok} listed twice")));
            }
        }
    }
    if let Some(k) = seen.iter().position(|s| !s) {
        return Err(syntax(line, format!("missing field {}", labels[k])));
    }
    Ok(sets)
}

fn parse_lines(lines: &[Line<'_>]) -> Result<Decomposition, FormatError> {
    let header = lines.first().ok_or(FormatError::Empty)?;
    if header.tokens.len() != 2 {
        return Err(syntax(header.no, "expected header \"<kind> <n_nodes>\""));
    }
    let kind: Kind = header.tokens[0].parse()?;
    let n = num(header.no, header.tokens[1])?;

    let mut w = vec![None; n];
    let mut x = vec![None; n];
    let mut arcs = Vec::new();
    let mut arc_bags = Vec::new();
    let mut order = vec![None; n];
    let mut roots = None;

    let node_id = |line: usize, tok: &str| -> Result<usize, FormatError> {
        let id = num(line, tok)?;
        if id >= n {
            return Err(syntax(
                line,
                format!("node {id} out of range (n_nodes = {n})"),
            ));
        }
        Ok(id)
    };

    for line in &lines[1..] {
        let no = line.no;
        let t = &line.tokens;
        match (t[0], kind) {
            ("node", _) if t.len() >= 2 => {
                let id = node_id(no, t[1])?;
                if w[id].is_some() || x[id].is_some() {
                    return Err(syntax(no, format!("node {id} declared twice")));
                }
                match kind {
                    Kind::Arboreal => {
                        let mut s = labelled_sets(no, &t[2..], &["W:"])?;
                        w[id] = s.pop();
                    }
                    Kind::Dag => {
                        let mut s = labelled_sets(no, &t[2..], &["X:"])?;
                        x[id] = s.pop();
                    }
                    Kind::Kelly => {
                        let mut s = labelled_sets(no, &t[2..], &["W:", "X:"])?;
                        x[id] = s.pop();
                        w[id] = s.pop();
                    }
                }
            }
            ("arc", Kind::Arboreal) if t.len() >= 3 => {
                arcs.push((node_id(no, t[1])?, node_id(no, t[2])?));
                arc_bags.push(labelled_sets(no, &t[3..], &["A:"])?.remove(0));
            }
            ("arc", _) if t.len() == 3 => {
                arcs.push((node_id(no, t[1])?, node_id(no, t[2])?));
            }
            ("order", Kind::Kelly) if t.len() >= 2 => {
                let id = t[1]
                    .strip_suffix(':')
                    .ok_or_else(|| syntax(no, "expected \"order <node>:\""))?;
                let id = node_id(no, id)?;
                if order[id].is_some() {
                    return Err(syntax(no, format!("order for node {id} given twice")));
                }
                order[id] = Some(
                    t[2..]
                        .iter()
                        .map(|c| node_id(no, c))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            ("roots:", Kind::Kelly) => {
                if roots.is_some() {
                    return Err(syntax(no, "roots given twice"));
                }
                roots = Some(
                    t[1..]
                        .iter()
                        .map(|c| node_id(no, c))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            _ => {
                return Err(syntax(
                    no,
                    format!("unexpected record for a {kind} decomposition"),
                ))
            }
        }
    }

    let last = lines.last().map_or(1, |l| l.no);
    let all = |bags: Vec<Option<VertexSet>>, what: &str| -> Result<Vec<VertexSet>, FormatError> {
        bags.into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| syntax(last, format!("node {i} has no {what}"))))
            .collect()
    };
    Ok(match kind {
        Kind::Arboreal => Decomposition::Arboreal(ArborealDecomposition {
            node_bags: all(w, "node record")?,
            arcs,
            arc_bags,
        }),
        Kind::Dag => Decomposition::Dag(DagDecomposition {
            arcs,
            bags: all(x, "node record")?,
        }),
        Kind::Kelly => Decomposition::Kelly(KellyDecomposition {
            arcs,
            node_bags: all(w, "node record")?,
            guard_bags: all(x, "node record")?,
            child_order: order
                .into_iter()
                .enumerate()
                .map(|(i, o)| {
                    o.ok_or_else(|| syntax(last, format!("node {i} has no order record")))
                })
                .collect::<Result<_, _>>()?,
            root_order: roots.ok_or_else(|| syntax(last, "missing roots record"))?,
        }),
    })
}

pub fn parse_decomposition(text: &str) -> Result<Decomposition, FormatError> {
    parse_lines(&meaningful_lines(text, 1))
}

/// One decomposition per strongly connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSection {
    /// Vertices of the component, in the parent digraph's ids.
    pub vertices: VertexSet,
    /// Root of the DFS tree the decomposition was built from, if known.
    pub root: Option<usize>,
    pub decomposition: Decomposition,
}

/// Per-component decompositions of a digraph. The width of the whole is the
/// largest member width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionBundle {
    pub kind: Kind,
    pub sections: Vec<BundleSection>,
    pub scc: Option<SccPartition>,
}

impl DecompositionBundle {
    pub fn overall_width(&self) -> usize {
        self.sections
            .iter()
            .map(|s| s.decomposition.width())
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for DecompositionBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "bundle {} sccs {} width {}",
            self.kind,
            self.sections.len(),
            self.overall_width()
        )?;
        for (i, s) in self.sections.iter().enumerate() {
            write!(f, "scc {i}")?;
            if let Some(r) = s.root {
                write!(f, " root {r}")?;
            }
            write!(f, " vertices:")?;
            for v in &s.vertices {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
            write!(f, "{}", s.decomposition)?;
        }
        Ok(())
    }
}

/// Parses a bundle document: a `bundle <kind> sccs <c> width <w>` header
/// followed by `scc <i> [root <r>] vertices: ...` sections.
pub fn parse_bundle(text: &str) -> Result<DecompositionBundle, FormatError> {
    let lines = meaningful_lines(text, 1);
    let header = lines.first().ok_or(FormatError::Empty)?;
    let t = &header.tokens;
    if t.len() != 6 || t[0] != "bundle" || t[2] != "sccs" || t[4] != "width" {
        return Err(syntax(
            header.no,
            "expected \"bundle <kind> sccs <c> width <w>\"",
        ));
    }
    let kind: Kind = t[1].parse()?;
    let count = num(header.no, t[3])?;
    let width = num(header.no, t[5])?;

    let starts: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.tokens[0] == "scc")
        .map(|(i, _)| i)
        .collect();
    if starts.first() != Some(&1) && !(starts.is_empty() && lines.len() == 1) {
        return Err(syntax(
            lines.get(1).map_or(header.no, |l| l.no),
            "expected an scc section",
        ));
    }
    let mut sections = Vec::new();
    for (k, &start) in starts.iter().enumerate() {
        let end = starts.get(k + 1).copied().unwrap_or(lines.len());
        let head = &lines[start];
        let ht = &head.tokens;
        if ht.len() < 3 || num(head.no, ht[1])? != k {
            return Err(syntax(
                head.no,
                format!("expected \"scc {k} ... vertices: ...\""),
            ));
        }
        let (root, rest) = if ht[2] == "root" && ht.len() >= 4 {
            (Some(num(head.no, ht[3])?), &ht[4..])
        } else {
            (None, &ht[2..])
        };
        let vertices = labelled_sets(head.no, rest, &["vertices:"])?.remove(0);
        let decomposition = parse_lines(&lines[start + 1..end])?;
        if decomposition.kind() != kind {
            return Err(FormatError::WrongKind {
                expected: kind,
                found: decomposition.kind(),
            });
        }
        sections.push(BundleSection {
            vertices,
            root,
            decomposition,
        });
    }
    let bundle = DecompositionBundle {
        kind,
        sections,
        scc: None,
    };
    if bundle.sections.len() != count {
        return Err(syntax(
            header.no,
            format!(
                "header says {count} sections, found {}",
                bundle.sections.len()
            ),
        ));
    }
    if bundle.overall_width() != width {
        return Err(syntax(
            header.no,
            format!(
                "header says width {width}, sections give {}",
                bundle.overall_width()
            ),
        ));
    }
    Ok(bundle)
}
