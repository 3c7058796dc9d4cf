//! Arboreal, DAG- and Kelly-decompositions read off a depth-first search tree.
//!
//! All three constructions share one kernel: for each vertex `v`, the set
//! `B(v)` of tree ancestors of `v` (including `v`) hit by a back arc leaving
//! the subtree of `v`, and its topmost element `b0(v)`. Bags are then the
//! root together with the tree path from `b0(v)` down to `v` or its parent.
//!
//! Decomposition node `i` is vertex `i` of the input digraph.

use std::cmp::Reverse;

use crate::decomp::{ArborealDecomposition, DagDecomposition, KellyDecomposition};
use crate::dfs::{AugmentedDag, DfsForest};
use crate::graph::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackEdgeIndex {
    /// `targets[v]` = `B(v)`.
    pub targets: Vec<VertexSet>,
    /// `b0(v)`, the target closest to the root.
    pub lowest: Vec<Option<usize>>,
}

impl BackEdgeIndex {
    pub fn new(f: &DfsForest) -> Self {
        let n = f.n();
        let mut targets = vec![VertexSet::new(); n];
        for (a, b) in f.back_arcs() {
            // b ⪯ v ⪯ a: walk from the tail up to the head
            let mut v = a;
            loop {
                targets[v].insert(b);
                if v == b {
                    break;
                }
                v = f.parent[v].expect("back arc head is an ancestor of its tail");
            }
        }
        let lowest = targets
            .iter()
            .map(|b| b.iter().copied().min_by_key(|&x| f.dfs(x)))
            .collect();
        BackEdgeIndex { targets, lowest }
    }

    /// `b0` for the tree arc `(u, v)`: the topmost target in `B(v)` that is
    /// an ancestor of `u`, i.e. `B(v)` without `v` itself.
    pub fn lowest_above(&self, f: &DfsForest, v: usize) -> Option<usize> {
        self.targets[v]
            .iter()
            .copied()
            .filter(|&b| b != v)
            .min_by_key(|&b| f.dfs(b))
    }
}

/// `hook(v) = b0(v)`, or `v` itself when no back arc leaves its subtree.
pub fn hooks(idx: &BackEdgeIndex) -> Vec<usize> {
    idx.lowest
        .iter()
        .enumerate()
        .map(|(v, b)| b.unwrap_or(v))
        .collect()
}

fn chain_bag(f: &DfsForest, top: usize, bottom: usize) -> VertexSet {
    let mut bag: VertexSet = f.tree_path(top, bottom).into_iter().collect();
    bag.insert(f.root);
    bag
}

/// Node bags `{i}`; arc `(u, v)` gets `{r}` when `u` is the root or no back
/// arc from below `v` reaches an ancestor of `u`, else `{r} ∪ [b0, u]`.
pub fn build_arboreal(f: &DfsForest, idx: &BackEdgeIndex) -> ArborealDecomposition {
    let n = f.n();
    let arcs = f.tree_arcs();
    let arc_bags = arcs
        .iter()
        .map(|&(u, v)| match idx.lowest_above(f, v) {
            Some(b0) if u != f.root => chain_bag(f, b0, u),
            _ => VertexSet::from([f.root]),
        })
        .collect();
    ArborealDecomposition {
        node_bags: (0..n).map(|i| VertexSet::from([i])).collect(),
        arcs,
        arc_bags,
    }
}

fn dag_bag(f: &DfsForest, idx: &BackEdgeIndex, v: usize) -> VertexSet {
    match idx.lowest[v] {
        Some(b0) if v != f.root => chain_bag(f, b0, v),
        _ => VertexSet::from([f.root]),
    }
}

/// Over the augmented DAG: `X_r = {r}`, otherwise `{r} ∪ [b0(v), v]`, or
/// `{r}` when no back arc leaves the subtree of `v`.
pub fn build_dag(f: &DfsForest, idx: &BackEdgeIndex) -> DagDecomposition {
    let dag = AugmentedDag::new(f.clone());
    DagDecomposition {
        arcs: dag.arcs(),
        bags: (0..f.n()).map(|v| dag_bag(f, idx, v)).collect(),
    }
}

/// Over the augmented DAG: `W_i = {i}`, `X_r = ∅`, otherwise the DAG bag
/// without `v`. Children are listed by descending hook, i.e. hooks closer to
/// the root come last; ties go to the smaller child id.
pub fn build_kelly(f: &DfsForest, idx: &BackEdgeIndex) -> KellyDecomposition {
    let n = f.n();
    let dag = AugmentedDag::new(f.clone());
    let hook = hooks(idx);
    let guard_bags = (0..n)
        .map(|v| {
            if v == f.root {
                VertexSet::new()
            } else {
                let mut bag = dag_bag(f, idx, v);
                bag.remove(&v);
                bag
            }
        })
        .collect();
    let child_order = dag
        .children
        .iter()
        .map(|cs| {
            let mut cs = cs.clone();
            cs.sort_by_key(|&c| (Reverse(f.dfs(hook[c])), c));
            cs
        })
        .collect();
    KellyDecomposition {
        arcs: dag.arcs(),
        node_bags: (0..n).map(|i| VertexSet::from([i])).collect(),
        guard_bags,
        child_order,
        root_order: vec![f.root],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;

    fn set(xs: &[usize]) -> VertexSet {
        xs.iter().copied().collect()
    }

    fn forest(n: usize, arcs: &[(usize, usize)]) -> DfsForest {
        DfsForest::build(&Digraph::from_arcs(n, arcs.iter().copied()).unwrap(), 0).unwrap()
    }

    fn c3() -> DfsForest {
        forest(3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn index_on_triangle() {
        let idx = BackEdgeIndex::new(&c3());
        assert_eq!(idx.targets, vec![set(&[0]), set(&[0]), set(&[0])]);
        assert_eq!(idx.lowest[2], Some(0));
    }

    #[test]
    fn index_on_bidirected_triangle() {
        let f = forest(3, &[(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]);
        let idx = BackEdgeIndex::new(&f);
        // (2, 1) lands on 1 itself
        assert_eq!(idx.targets[1], set(&[0, 1]));
        assert_eq!(idx.targets[2], set(&[0, 1]));
        assert_eq!(idx.lowest[1], Some(0));
        assert_eq!(idx.lowest[2], Some(0));
        assert_eq!(hooks(&idx), vec![0, 0, 0]);
    }

    #[test]
    fn index_without_back_arcs() {
        let f = DfsForest::build(&Digraph::empty(1), 0).unwrap();
        let idx = BackEdgeIndex::new(&f);
        assert_eq!(idx.targets, vec![VertexSet::new()]);
        assert_eq!(hooks(&idx), vec![0]);
    }

    #[test]
    fn arboreal_on_triangle() {
        let f = c3();
        let d = build_arboreal(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.arcs, vec![(0, 1), (1, 2)]);
        assert_eq!(d.arc_bags, vec![set(&[0]), set(&[0, 1])]);
        assert_eq!(d.node_bags, vec![set(&[0]), set(&[1]), set(&[2])]);
        assert_eq!(d.width(), 2);
    }

    #[test]
    fn arboreal_on_digon() {
        let f = forest(2, &[(0, 1), (1, 0)]);
        let d = build_arboreal(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.arc_bags, vec![set(&[0])]);
        assert_eq!(d.width(), 1);
    }

    #[test]
    fn dag_on_triangle() {
        let f = c3();
        let d = build_dag(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.arcs, vec![(0, 1), (1, 2)]);
        assert_eq!(d.bags, vec![set(&[0]), set(&[0, 1]), set(&[0, 1, 2])]);
        assert_eq!(d.width(), 3);
    }

    #[test]
    fn dag_on_single_vertex() {
        let f = DfsForest::build(&Digraph::empty(1), 0).unwrap();
        let d = build_dag(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.bags, vec![set(&[0])]);
        assert_eq!(d.width(), 1);
    }

    #[test]
    fn kelly_on_triangle() {
        let f = c3();
        let d = build_kelly(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.guard_bags, vec![set(&[]), set(&[0]), set(&[0, 1])]);
        assert_eq!(d.child_order, vec![vec![1], vec![2], vec![]]);
        assert_eq!(d.root_order, vec![0]);
        assert_eq!(d.width(), 3);
    }

    #[test]
    fn kelly_on_single_vertex() {
        let f = DfsForest::build(&Digraph::empty(1), 0).unwrap();
        let d = build_kelly(&f, &BackEdgeIndex::new(&f));
        assert_eq!(d.node_bags, vec![set(&[0])]);
        assert_eq!(d.guard_bags, vec![set(&[])]);
        assert_eq!(d.width(), 1);
    }

    #[test]
    fn kelly_children_sorted_by_hook() {
        // root 0 with leaves 1 and 2; 2 -> 1 is a cross arc, so the DAG
        // children of 0 are both leaves and 2 also points at 1.
        let f = forest(3, &[(0, 1), (1, 0), (0, 2), (2, 0), (2, 1)]);
        let idx = BackEdgeIndex::new(&f);
        let d = build_kelly(&f, &idx);
        assert_eq!(d.child_order[0], vec![1, 2]);
        assert_eq!(d.child_order[2], vec![1]);
    }
}
