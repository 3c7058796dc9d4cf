//! Definition-level checks for guarding, X-normality and the decomposition
//! axioms. Nothing here looks at how a decomposition was built.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::decomp::{ArborealDecomposition, DagDecomposition, Decomposition, KellyDecomposition};
use crate::graph::{Digraph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MalformedError {
    #[error("node {node} out of range ({n_nodes} nodes)")]
    UnknownNode { node: usize, n_nodes: usize },
    #[error("bag of {at} mentions vertex {vertex}, which is not in the digraph")]
    UnknownVertex { at: String, vertex: usize },
    #[error("arc bag count {bags} does not match arc count {arcs}")]
    ArcBagCount { arcs: usize, bags: usize },
    #[error("bag count mismatch: {0}")]
    BagCount(String),
    #[error("decomposition graph is not an arborescence: {0}")]
    NotArborescence(String),
    #[error("decomposition graph has a cycle through node {0}")]
    Cyclic(usize),
    #[error("duplicate decomposition arc ({0}, {1})")]
    DuplicateArc(usize, usize),
    #[error("child order of node {node} does not list exactly its children")]
    ChildOrder { node: usize },
    #[error("root order does not list exactly the roots")]
    RootOrder,
}

/// Why `X` fails to guard `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuardViolation {
    /// A vertex in both `W` and `X`.
    Overlap(usize),
    /// An arc leaving `W` that lands outside `W ∪ X`.
    Escape(usize, usize),
}

/// Why `W` is not `X`-normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalViolation {
    Overlap(usize),
    /// A directed path avoiding `X` that starts and ends in `W` and passes
    /// outside `W`. First and last vertex may coincide.
    Path(Vec<usize>),
}

/// `X` guards `W`: disjoint, and every arc out of `W` lands in `W ∪ X`.
pub fn guards(g: &Digraph, x: &VertexSet, w: &VertexSet) -> Result<(), GuardViolation> {
    if let Some(&v) = w.intersection(x).next() {
        return Err(GuardViolation::Overlap(v));
    }
    for &u in w {
        for &v in g.out(u) {
            if !w.contains(&v) && !x.contains(&v) {
                return Err(GuardViolation::Escape(u, v));
            }
        }
    }
    Ok(())
}

/// BFS over `g` minus `blocked`, from every vertex of `seeds`. Returns the
/// BFS parent of every reached vertex (`Some(self)` for seeds).
fn bfs_tree(g: &Digraph, seeds: &VertexSet, blocked: &VertexSet) -> Vec<Option<usize>> {
    let mut parent = vec![None; g.n()];
    let mut queue = VecDeque::new();
    for &s in seeds {
        parent[s] = Some(s);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.out(u) {
            if parent[v].is_none() && !blocked.contains(&v) {
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// `W` is `X`-normal: disjoint, and no vertex outside `W ∪ X` is both
/// reachable from `W` and able to reach `W` in `g \ X`.
pub fn is_x_normal(g: &Digraph, x: &VertexSet, w: &VertexSet) -> Result<(), NormalViolation> {
    if let Some(&v) = w.intersection(x).next() {
        return Err(NormalViolation::Overlap(v));
    }
    let fwd = bfs_tree(g, w, x);
    let bwd = bfs_tree(&g.reversed(), w, x);
    let Some(z) = g
        .vertices()
        .find(|&z| !w.contains(&z) && !x.contains(&z) && fwd[z].is_some() && bwd[z].is_some())
    else {
        return Ok(());
    };

    // W -> ... -> z, with only the first vertex in W
    let mut head = vec![z];
    let mut y = z;
    while let Some(p) = fwd[y].filter(|&p| p != y) {
        head.push(p);
        if w.contains(&p) {
            break;
        }
        y = p;
    }
    head.reverse();
    // z -> ... -> W, with only the last vertex in W
    let mut tail = Vec::new();
    let mut y = z;
    while let Some(p) = bwd[y].filter(|&p| p != y) {
        tail.push(p);
        if w.contains(&p) {
            break;
        }
        y = p;
    }
    // splice at the first vertex the two halves share
    let cut = head
        .iter()
        .position(|v| !w.contains(v) && (tail.contains(v) || *v == z))
        .expect("z lies on the head");
    let meet = head[cut];
    let mut path = head[..=cut].to_vec();
    if meet != z {
        let at = tail.iter().position(|&v| v == meet).expect("shared vertex");
        path.extend_from_slice(&tail[at + 1..]);
    } else {
        path.extend_from_slice(&tail);
    }
    Err(NormalViolation::Path(path))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Dtw1,
    Dtw2,
    Dgw1,
    Dgw2,
    Dgw3,
    Kw1,
    Kw2,
    Kw3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Dtw1 => "DTW-1",
            Axiom::Dtw2 => "DTW-2",
            Axiom::Dgw1 => "DGW-1",
            Axiom::Dgw2 => "DGW-2",
            Axiom::Dgw3 => "DGW-3",
            Axiom::Kw1 => "KW-1",
            Axiom::Kw2 => "KW-2",
            Axiom::Kw3 => "KW-3",
        })
    }
}

/// Where a guarding check happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Site {
    Arc(usize, usize),
    Node(usize),
    Root(usize),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Arc(i, j) => write!(f, "arc ({i}, {j})"),
            Site::Node(i) => write!(f, "node {i}"),
            Site::Root(r) => write!(f, "root {r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Vertex in no node bag.
    Uncovered(usize),
    /// Vertex in the node bags of two nodes.
    Repeated {
        vertex: usize,
        nodes: (usize, usize),
    },
    NotNormal {
        arc: (usize, usize),
        violation: NormalViolation,
    },
    /// `i ⪯ j ⪯ k` with `vertex ∈ X_i ∩ X_k` but not in `X_j`.
    Triple {
        i: usize,
        j: usize,
        k: usize,
        vertex: usize,
    },
    NotGuarded {
        site: Site,
        violation: GuardViolation,
    },
    /// `vertex` of the guard bag of `child` is not yet covered when `child`
    /// comes up in the enumeration below `parent` (`None` for the roots).
    Enumeration {
        parent: Option<usize>,
        child: usize,
        vertex: usize,
    },
}

impl Witness {
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Witness {
        match self {
            Witness::Uncovered(v) => Witness::Uncovered(f(*v)),
            Witness::Repeated { vertex, nodes } => Witness::Repeated {
                vertex: f(*vertex),
                nodes: *nodes,
            },
            Witness::NotNormal { arc, violation } => Witness::NotNormal {
                arc: *arc,
                violation: match violation {
                    NormalViolation::Overlap(v) => NormalViolation::Overlap(f(*v)),
                    NormalViolation::Path(p) => {
                        NormalViolation::Path(p.iter().map(|&v| f(v)).collect())
                    }
                },
            },
            Witness::Triple { i, j, k, vertex } => Witness::Triple {
                i: *i,
                j: *j,
                k: *k,
                vertex: f(*vertex),
            },
            Witness::NotGuarded { site, violation } => Witness::NotGuarded {
                site: *site,
                violation: match violation {
                    GuardViolation::Overlap(v) => GuardViolation::Overlap(f(*v)),
                    GuardViolation::Escape(u, v) => GuardViolation::Escape(f(*u), f(*v)),
                },
            },
            Witness::Enumeration {
                parent,
                child,
                vertex,
            } => Witness::Enumeration {
                parent: *parent,
                child: *child,
                vertex: f(*vertex),
            },
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Uncovered(v) => write!(f, "vertex {v} is in no bag"),
            Witness::Repeated { vertex, nodes } => {
                write!(
                    f,
                    "vertex {vertex} is in the bags of nodes {} and {}",
                    nodes.0, nodes.1
                )
            }
            Witness::NotNormal { arc, violation } => {
                write!(f, "arc ({}, {}): ", arc.0, arc.1)?;
                match violation {
                    NormalViolation::Overlap(v) => write!(f, "vertex {v} is in both W and A"),
                    NormalViolation::Path(p) => {
                        let p: Vec<String> = p.iter().map(usize::to_string).collect();
                        write!(f, "path {} leaves and re-enters W", p.join(" -> "))
                    }
                }
            }
            Witness::Triple { i, j, k, vertex } => {
                write!(
                    f,
                    "nodes {i} ⪯ {j} ⪯ {k}: vertex {vertex} in X_{i} and X_{k} but not X_{j}"
                )
            }
            Witness::NotGuarded { site, violation } => match violation {
                GuardViolation::Overlap(v) => write!(
                    f,
                    "{site}: vertex {v} is in both the guard and the guarded set"
                ),
                GuardViolation::Escape(u, v) => write!(f, "{site}: arc ({u}, {v}) escapes"),
            },
            Witness::Enumeration {
                parent: Some(p),
                child,
                vertex,
            } => {
                write!(
                    f,
                    "child {child} of node {p}: guard vertex {vertex} not yet covered"
                )
            }
            Witness::Enumeration {
                parent: None,
                child,
                vertex,
            } => {
                write!(f, "root {child}: guard vertex {vertex} not yet covered")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    /// First violation found, if any.
    pub witness: Option<Witness>,
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub verdicts: Vec<AxiomVerdict>,
    pub width: usize,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(AxiomVerdict::passed)
    }

    pub fn verdict(&self, axiom: Axiom) -> Option<&AxiomVerdict> {
        self.verdicts.iter().find(|v| v.axiom == axiom)
    }

    /// Axioms that failed.
    pub fn failures(&self) -> Vec<Axiom> {
        self.verdicts
            .iter()
            .filter(|v| !v.passed())
            .map(|v| v.axiom)
            .collect()
    }

    pub fn map_vertices(&self, f: impl Fn(usize) -> usize + Copy) -> ValidationReport {
        ValidationReport {
            verdicts: self
                .verdicts
                .iter()
                .map(|v| AxiomVerdict {
                    axiom: v.axiom,
                    witness: v.witness.as_ref().map(|w| w.map_vertices(f)),
                })
                .collect(),
            width: self.width,
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            match &v.witness {
                None => writeln!(f, "{} pass", v.axiom)?,
                Some(w) => writeln!(f, "{} FAIL {w}", v.axiom)?,
            }
        }
        writeln!(f, "width {}", self.width)
    }
}

fn check_vertices<'a>(
    g: &Digraph,
    bags: impl IntoIterator<Item = (String, &'a VertexSet)>,
) -> Result<(), MalformedError> {
    for (at, bag) in bags {
        if let Some(&vertex) = bag.iter().find(|&&v| v >= g.n()) {
            return Err(MalformedError::UnknownVertex { at, vertex });
        }
    }
    Ok(())
}

fn check_arcs(n_nodes: usize, arcs: &[(usize, usize)]) -> Result<(), MalformedError> {
    let mut seen = std::collections::HashSet::new();
    for &(i, j) in arcs {
        for node in [i, j] {
            if node >= n_nodes {
                return Err(MalformedError::UnknownNode { node, n_nodes });
            }
        }
        if !seen.insert((i, j)) {
            return Err(MalformedError::DuplicateArc(i, j));
        }
    }
    Ok(())
}

/// Reflexive reachability over the decomposition graph; fails on a cycle.
fn reachability(n_nodes: usize, arcs: &[(usize, usize)]) -> Result<Vec<Vec<bool>>, MalformedError> {
    let mut children = vec![Vec::new(); n_nodes];
    for &(i, j) in arcs {
        children[i].push(j);
    }
    let mut reach = vec![vec![false; n_nodes]; n_nodes];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut stack: Vec<usize> = children[s].clone();
        while let Some(x) = stack.pop() {
            if x == s {
                return Err(MalformedError::Cyclic(s));
            }
            if !row[x] {
                row[x] = true;
                stack.extend(&children[x]);
            }
        }
        row[s] = true;
    }
    Ok(reach)
}

/// Every vertex of `g` in exactly one bag.
fn partition_check(g: &Digraph, bags: &[VertexSet]) -> Option<Witness> {
    let mut owner = vec![None; g.n()];
    for (i, bag) in bags.iter().enumerate() {
        for &v in bag {
            if let Some(j) = owner[v] {
                return Some(Witness::Repeated {
                    vertex: v,
                    nodes: (j, i),
                });
            }
            owner[v] = Some(i);
        }
    }
    owner
        .iter()
        .position(Option::is_none)
        .map(Witness::Uncovered)
}

fn union_below(reach: &[Vec<bool>], bags: &[VertexSet], i: usize) -> VertexSet {
    reach[i]
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .flat_map(|(j, _)| bags[j].iter().copied())
        .collect()
}

pub fn validate_arboreal(
    g: &Digraph,
    d: &ArborealDecomposition,
) -> Result<ValidationReport, MalformedError> {
    let k = d.n_nodes();
    if d.arc_bags.len() != d.arcs.len() {
        return Err(MalformedError::ArcBagCount {
            arcs: d.arcs.len(),
            bags: d.arc_bags.len(),
        });
    }
    check_arcs(k, &d.arcs)?;
    check_vertices(
        g,
        d.node_bags
            .iter()
            .enumerate()
            .map(|(i, b)| (format!("node {i}"), b))
            .chain(
                d.arcs
                    .iter()
                    .zip(&d.arc_bags)
                    .map(|((i, j), b)| (format!("arc ({i}, {j})"), b)),
            ),
    )?;
    // arborescence: k - 1 arcs, in-degree <= 1, one root reaching everything
    if k > 0 {
        let mut indeg = vec![0; k];
        for &(_, j) in &d.arcs {
            indeg[j] += 1;
            if indeg[j] > 1 {
                return Err(MalformedError::NotArborescence(format!(
                    "node {j} has two parents"
                )));
            }
        }
        if d.arcs.len() != k - 1 {
            return Err(MalformedError::NotArborescence(format!(
                "{} arcs for {k} nodes",
                d.arcs.len()
            )));
        }
        let root = indeg
            .iter()
            .position(|&x| x == 0)
            .expect("k - 1 arcs leave a root");
        let reach = reachability(k, &d.arcs)?;
        if let Some(lost) = reach[root].iter().position(|r| !r) {
            return Err(MalformedError::NotArborescence(format!(
                "node {lost} is unreachable from root {root}"
            )));
        }
    }
    let reach = reachability(k, &d.arcs)?;

    let dtw1 = partition_check(g, &d.node_bags);
    let dtw2 = d.arcs.iter().zip(&d.arc_bags).find_map(|(&(i, j), a)| {
        let below = union_below(&reach, &d.node_bags, j);
        is_x_normal(g, a, &below)
            .err()
            .map(|violation| Witness::NotNormal {
                arc: (i, j),
                violation,
            })
    });
    Ok(ValidationReport {
        verdicts: vec![
            AxiomVerdict {
                axiom: Axiom::Dtw1,
                witness: dtw1,
            },
            AxiomVerdict {
                axiom: Axiom::Dtw2,
                witness: dtw2,
            },
        ],
        width: d.width(),
    })
}

pub fn validate_dag(g: &Digraph, d: &DagDecomposition) -> Result<ValidationReport, MalformedError> {
    let k = d.n_nodes();
    check_arcs(k, &d.arcs)?;
    check_vertices(
        g,
        d.bags
            .iter()
            .enumerate()
            .map(|(i, b)| (format!("node {i}"), b)),
    )?;
    let reach = reachability(k, &d.arcs)?;

    let covered: VertexSet = d.bags.iter().flatten().copied().collect();
    let dgw1 = g
        .vertices()
        .find(|v| !covered.contains(v))
        .map(Witness::Uncovered);

    let mut dgw2 = None;
    'triples: for i in 0..k {
        for j in (0..k).filter(|&j| reach[i][j]) {
            for kk in (0..k).filter(|&kk| reach[j][kk]) {
                if let Some(&vertex) = d.bags[i]
                    .intersection(&d.bags[kk])
                    .find(|v| !d.bags[j].contains(v))
                {
                    dgw2 = Some(Witness::Triple {
                        i,
                        j,
                        k: kk,
                        vertex,
                    });
                    break 'triples;
                }
            }
        }
    }

    let mut has_parent = vec![false; k];
    let mut dgw3 = None;
    for &(i, j) in &d.arcs {
        has_parent[j] = true;
        if dgw3.is_some() {
            continue;
        }
        let guard: VertexSet = d.bags[i].intersection(&d.bags[j]).copied().collect();
        let guarded: VertexSet = union_below(&reach, &d.bags, j)
            .difference(&d.bags[i])
            .copied()
            .collect();
        if let Err(violation) = guards(g, &guard, &guarded) {
            dgw3 = Some(Witness::NotGuarded {
                site: Site::Arc(i, j),
                violation,
            });
        }
    }
    if dgw3.is_none() {
        dgw3 = (0..k).filter(|&r| !has_parent[r]).find_map(|r| {
            guards(g, &VertexSet::new(), &union_below(&reach, &d.bags, r))
                .err()
                .map(|violation| Witness::NotGuarded {
                    site: Site::Root(r),
                    violation,
                })
        });
    }
    Ok(ValidationReport {
        verdicts: vec![
            AxiomVerdict {
                axiom: Axiom::Dgw1,
                witness: dgw1,
            },
            AxiomVerdict {
                axiom: Axiom::Dgw2,
                witness: dgw2,
            },
            AxiomVerdict {
                axiom: Axiom::Dgw3,
                witness: dgw3,
            },
        ],
        width: d.width(),
    })
}

fn same_members(listed: &[usize], actual: &[usize]) -> bool {
    let mut a = listed.to_vec();
    let mut b = actual.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

pub fn validate_kelly(
    g: &Digraph,
    d: &KellyDecomposition,
) -> Result<ValidationReport, MalformedError> {
    let k = d.n_nodes();
    if d.guard_bags.len() != k || d.child_order.len() != k {
        return Err(MalformedError::BagCount(format!(
            "{k} node bags, {} guard bags, {} child orders",
            d.guard_bags.len(),
            d.child_order.len()
        )));
    }
    check_arcs(k, &d.arcs)?;
    check_vertices(
        g,
        d.node_bags
            .iter()
            .enumerate()
            .map(|(i, b)| (format!("node {i}"), b))
            .chain(
                d.guard_bags
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (format!("guard of node {i}"), b)),
            ),
    )?;
    let reach = reachability(k, &d.arcs)?;
    let mut children = vec![Vec::new(); k];
    let mut has_parent = vec![false; k];
    for &(i, j) in &d.arcs {
        children[i].push(j);
        has_parent[j] = true;
    }
    for (node, cs) in children.iter().enumerate() {
        if !same_members(&d.child_order[node], cs) {
            return Err(MalformedError::ChildOrder { node });
        }
    }
    let roots: Vec<usize> = (0..k).filter(|&r| !has_parent[r]).collect();
    if !same_members(&d.root_order, &roots) {
        return Err(MalformedError::RootOrder);
    }

    let kw1 = partition_check(g, &d.node_bags);
    let below: Vec<VertexSet> = (0..k)
        .map(|i| union_below(&reach, &d.node_bags, i))
        .collect();
    let kw2 = (0..k).find_map(|i| {
        guards(g, &d.guard_bags[i], &below[i])
            .err()
            .map(|violation| Witness::NotGuarded {
                site: Site::Node(i),
                violation,
            })
    });

    let enumerate = |parent: Option<usize>, order: &[usize]| -> Option<Witness> {
        let mut covered = match parent {
            Some(i) => d.node_bags[i].union(&d.guard_bags[i]).copied().collect(),
            None => VertexSet::new(),
        };
        for &child in order {
            if let Some(&vertex) = d.guard_bags[child].iter().find(|v| !covered.contains(v)) {
                return Some(Witness::Enumeration {
                    parent,
                    child,
                    vertex,
                });
            }
            covered.extend(&below[child]);
        }
        None
    };
    let kw3 = (0..k)
        .find_map(|i| enumerate(Some(i), &d.child_order[i]))
        .or_else(|| enumerate(None, &d.root_order));

    Ok(ValidationReport {
        verdicts: vec![
            AxiomVerdict {
                axiom: Axiom::Kw1,
                witness: kw1,
            },
            AxiomVerdict {
                axiom: Axiom::Kw2,
                witness: kw2,
            },
            AxiomVerdict {
                axiom: Axiom::Kw3,
                witness: kw3,
            },
        ],
        width: d.width(),
    })
}

pub fn validate(g: &Digraph, d: &Decomposition) -> Result<ValidationReport, MalformedError> {
    match d {
        Decomposition::Arboreal(d) => validate_arboreal(g, d),
        Decomposition::Dag(d) => validate_dag(g, d),
        Decomposition::Kelly(d) => validate_kelly(g, d),
    }
}
