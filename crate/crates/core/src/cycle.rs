//! Exact circumference (length of a longest simple directed cycle).
//!
//! An acyclic digraph has circumference 1 and an empty witness.

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{strongly_connected_components, Digraph};

/// Largest strongly connected component the backtracking search accepts.
pub const DEFAULT_SCC_LIMIT: usize = 20;
/// Largest digraph the enumeration oracle accepts.
pub const ORACLE_LIMIT: usize = 9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycleError {
    #[error("strongly connected component of size {size} exceeds the search limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("oracle accepts at most {ORACLE_LIMIT} vertices, got {0}")]
    OracleTooLarge(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircumferenceResult {
    pub length: usize,
    /// Vertices of a longest cycle in order (the closing arc is implied).
    pub witness: Vec<usize>,
}

pub fn circumference(g: &Digraph) -> Result<CircumferenceResult, CycleError> {
    circumference_with_limit(g, DEFAULT_SCC_LIMIT)
}

/// Backtracking search per strongly connected component. Only cycles whose
/// smallest vertex is the anchor are explored, and a branch is cut once the
/// unvisited part of the component cannot beat the best cycle found.
pub fn circumference_with_limit(
    g: &Digraph,
    limit: usize,
) -> Result<CircumferenceResult, CycleError> {
    let scc = strongly_connected_components(g);
    if let Some(big) = scc.components.iter().find(|c| c.len() > limit) {
        return Err(CycleError::TooLarge {
            size: big.len(),
            limit,
        });
    }
    let mut best = CircumferenceResult {
        length: 1,
        witness: Vec::new(),
    };
    for comp in scc.components.iter().filter(|c| c.len() >= 2) {
        if comp.len() <= best.length {
            continue;
        }
        let (h, map) = g
            .induced_subgraph(comp)
            .expect("component vertices are valid");
        let mut search = Search::new(&h, best.length);
        search.run();
        if let Some(cycle) = search.best_cycle {
            best = CircumferenceResult {
                length: cycle.len(),
                witness: cycle.into_iter().map(|x| map[x]).collect(),
            };
        }
    }
    Ok(best)
}

struct Search<'a> {
    g: &'a Digraph,
    on_path: Vec<bool>,
    path: Vec<usize>,
    best_len: usize,
    best_cycle: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Digraph, incumbent: usize) -> Self {
        Search {
            g,
            on_path: vec![false; g.n()],
            path: Vec::new(),
            best_len: incumbent,
            best_cycle: None,
        }
    }

    fn run(&mut self) {
        let n = self.g.n();
        for anchor in 0..n {
            // vertices >= anchor bound any cycle anchored here
            if n - anchor <= self.best_len {
                break;
            }
            self.path.push(anchor);
            self.on_path[anchor] = true;
            self.extend(anchor, anchor);
            self.on_path[anchor] = false;
            self.path.pop();
        }
    }

    fn extend(&mut self, anchor: usize, u: usize) {
        let n = self.g.n();
        let remaining = n - anchor - self.path.len();
        if self.path.len() + remaining <= self.best_len {
            return;
        }
        for &v in self.g.out(u) {
            if v == anchor {
                if self.path.len() > self.best_len {
                    self.best_len = self.path.len();
                    self.best_cycle = Some(self.path.clone());
                }
            } else if v > anchor && !self.on_path[v] {
                self.on_path[v] = true;
                self.path.push(v);
                self.extend(anchor, v);
                self.path.pop();
                self.on_path[v] = false;
            }
        }
    }
}

/// Brute force: for every vertex subset, try every cyclic order starting at
/// its minimum. Independent of the backtracking search.
pub fn circumference_oracle(g: &Digraph) -> Result<usize, CycleError> {
    let n = g.n();
    if n > ORACLE_LIMIT {
        return Err(CycleError::OracleTooLarge(n));
    }
    for size in (2..=n).rev() {
        for subset in (0..n).combinations(size) {
            let (first, rest) = subset.split_first().expect("size >= 2");
            let found = rest.iter().permutations(rest.len()).any(|order| {
                let mut prev = *first;
                for &&x in &order {
                    if !g.has_arc(prev, x) {
                        return false;
                    }
                    prev = x;
                }
                g.has_arc(prev, *first)
            });
            if found {
                return Ok(size);
            }
        }
    }
    Ok(1)
}

/// Whether `cycle` is a simple directed cycle of `g` (closing arc included).
pub fn is_simple_cycle(g: &Digraph, cycle: &[usize]) -> bool {
    if cycle.len() < 2 || cycle.iter().any(|&x| x >= g.n()) || !cycle.iter().all_unique() {
        return false;
    }
    cycle
        .iter()
        .zip(cycle.iter().cycle().skip(1))
        .all(|(&u, &v)| g.has_arc(u, v))
}
