//! Simple digraphs over dense vertex ids, strongly connected components and
//! the edge-list text format.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A set of vertex ids, kept sorted.
pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: missing \"n m\" header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate arc ({u}, {v})")]
    DuplicateArc { line: usize, u: usize, v: usize },
    #[error("header declares {declared} arcs but {found} were listed")]
    ArcCountMismatch { declared: usize, found: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} is not in a digraph with {n} vertices")]
    UnknownVertex { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("vertex sets do not cover the digraph (vertex {0} missing)")]
    NotCovering(usize),
}

/// A finite simple digraph on vertices `0..n`.
///
/// Adjacency lists are kept sorted so that every traversal visits neighbours
/// in ascending id order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Digraph {
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    arcs: usize,
}

impl Digraph {
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            arcs: 0,
        }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::UnknownVertex { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.out[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateArc(u, v)),
            Err(pos) => {
                self.out[u].insert(pos, v);
                let pos = self.inc[v].binary_search(&u).unwrap_err();
                self.inc[v].insert(pos, u);
                self.arcs += 1;
                Ok(())
            }
        }
    }

    pub fn n(&self) -> usize {
        self.out.len()
    }

    pub fn m(&self) -> usize {
        self.arcs
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub fn out(&self, u: usize) -> &[usize] {
        &self.out[u]
    }

    pub fn inc(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v)))
    }

    /// `G[S]`, relabeled so that the i-th smallest element of `s` becomes
    /// vertex i. The returned vector maps new ids back to old ones.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        let n = self.n();
        if let Some(&bad) = s.iter().find(|&&x| x >= n) {
            return Err(GraphError::UnknownVertex { vertex: bad, n });
        }
        let back: Vec<usize> = s.iter().copied().collect();
        let mut fwd = vec![usize::MAX; n];
        for (i, &x) in back.iter().enumerate() {
            fwd[x] = i;
        }
        let mut h = Digraph::empty(back.len());
        for &u in &back {
            for &v in &self.out[u] {
                if fwd[v] != usize::MAX {
                    h.add_arc(fwd[u], fwd[v]).expect("induced arcs are simple");
                }
            }
        }
        Ok((h, back))
    }

    /// The digraph with every arc reversed.
    pub fn reversed(&self) -> Digraph {
        Digraph {
            out: self.inc.clone(),
            inc: self.out.clone(),
            arcs: self.arcs,
        }
    }

    /// Vertices reachable from `sources` without entering `blocked`.
    pub fn reach_from(
        &self,
        sources: impl IntoIterator<Item = usize>,
        blocked: &VertexSet,
    ) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        let mut stack = Vec::new();
        for s in sources {
            if !blocked.contains(&s) && !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(u) = stack.pop() {
            for &v in &self.out[u] {
                if !seen[v] && !blocked.contains(&v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.n() <= 1 || strongly_connected_components(self).len() == 1
    }

    pub fn is_acyclic(&self) -> bool {
        strongly_connected_components(self).len() == self.n()
    }

    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n(), self.m())?;
        for (u, v) in self.arcs() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// Parses the edge-list format: a `n m` header, then one `u v` arc per line.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_digraph(text: &str) -> Result<Digraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::MissingHeader { line: 1 })?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = Digraph::empty(n);
    let mut found = 0;
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text)?;
        match g.add_arc(u, v) {
            Ok(()) => found += 1,
            Err(GraphError::UnknownVertex { vertex, n }) => {
                return Err(ParseError::VertexOutOfRange { line, vertex, n })
            }
            Err(GraphError::SelfLoop(vertex)) => return Err(ParseError::SelfLoop { line, vertex }),
            Err(GraphError::DuplicateArc(u, v)) => {
                return Err(ParseError::DuplicateArc { line, u, v })
            }
            Err(GraphError::NotCovering(_)) => unreachable!(),
        }
    }
    if found != m {
        return Err(ParseError::ArcCountMismatch { declared: m, found });
    }
    Ok(g)
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let malformed = || ParseError::Malformed {
        line,
        text: text.to_string(),
    };
    let mut it = text.split_whitespace();
    let a = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    let b = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(malformed)?;
    if it.next().is_some() {
        return Err(malformed());
    }
    Ok((a, b))
}

/// Strongly connected components.
///
/// `components` is in reverse topological order of the condensation: every
/// arc between two components goes from a later component to an earlier one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccPartition {
    pub components: Vec<VertexSet>,
    pub component_of: Vec<usize>,
}

impl SccPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Iterative Tarjan. Components come out sinks first.
pub fn strongly_connected_components(g: &Digraph) -> SccPartition {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut components = Vec::new();
    let mut next = 0;
    // (vertex, position in its out-list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for s in 0..n {
        if index[s] != UNSEEN {
            continue;
        }
        call.push((s, 0));
        index[s] = next;
        low[s] = next;
        next += 1;
        stack.push(s);
        on_stack[s] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if let Some(&v) = g.out(u).get(*pos) {
                *pos += 1;
                if index[v] == UNSEEN {
                    index[v] = next;
                    low[v] = next;
                    next += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    call.push((v, 0));
                } else if on_stack[v] {
                    low[u] = low[u].min(index[v]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[u]);
            }
            if low[u] == index[u] {
                let id = components.len();
                let mut comp = VertexSet::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.insert(w);
                    if w == u {
                        break;
                    }
                }
                components.push(comp);
            }
        }
    }
    SccPartition {
        components,
        component_of,
    }
}

/// Whether `d` is the directed union of `d[v1]` and `d[v2]`: no arc has its
/// tail only in `v2` and its head only in `v1`.
pub fn is_directed_union(d: &Digraph, v1: &VertexSet, v2: &VertexSet) -> Result<bool, GraphError> {
    for x in v1.iter().chain(v2) {
        if *x >= d.n() {
            return Err(GraphError::UnknownVertex {
                vertex: *x,
                n: d.n(),
            });
        }
    }
    if let Some(missing) = d.vertices().find(|x| !v1.contains(x) && !v2.contains(x)) {
        return Err(GraphError::NotCovering(missing));
    }
    Ok(!d
        .arcs()
        .any(|(u, v)| v2.contains(&u) && !v1.contains(&u) && v1.contains(&v) && !v2.contains(&v)))
}
