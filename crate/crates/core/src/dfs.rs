//! Depth-first search trees, arc classification and the augmented DAG.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::graph::{Digraph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfsError {
    #[error("root {root} is not a vertex of a digraph with {n} vertices")]
    BadRoot { root: usize, n: usize },
    #[error("digraph is not strongly connected; split it into components first")]
    NotStronglyConnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    Tree,
    Forward,
    Back,
    Cross,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::Tree => "TREE",
            EdgeClass::Forward => "FORWARD",
            EdgeClass::Back => "BACK",
            EdgeClass::Cross => "CROSS",
        })
    }
}

/// A depth-first search tree of a strongly connected digraph.
///
/// Ancestry is answered from preorder numbers and subtree sizes:
/// `a ⪯ b` iff `dfs(a) <= dfs(b) < dfs(a) + size(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfsForest {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub dfs_number: Vec<usize>,
    /// Vertices by dfs number.
    pub preorder: Vec<usize>,
    /// Tree children, in visiting order.
    pub children: Vec<Vec<usize>>,
    pub subtree_size: Vec<usize>,
    pub edge_class: BTreeMap<(usize, usize), EdgeClass>,
}

impl DfsForest {
    /// Runs a DFS from `root`, exploring out-neighbours in ascending id order.
    pub fn build(g: &Digraph, root: usize) -> Result<Self, DfsError> {
        let n = g.n();
        if root >= n {
            return Err(DfsError::BadRoot { root, n });
        }
        if !g.is_strongly_connected() {
            return Err(DfsError::NotStronglyConnected);
        }
        let mut parent = vec![None; n];
        let mut dfs_number = vec![usize::MAX; n];
        let mut preorder = Vec::with_capacity(n);
        let mut children = vec![Vec::new(); n];
        let mut subtree_size = vec![1; n];

        dfs_number[root] = 0;
        preorder.push(root);
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            if let Some(&v) = g.out(u).get(*pos) {
                *pos += 1;
                if dfs_number[v] == usize::MAX {
                    dfs_number[v] = preorder.len();
                    preorder.push(v);
                    parent[v] = Some(u);
                    children[u].push(v);
                    stack.push((v, 0));
                }
            } else {
                stack.pop();
                if let Some(p) = parent[u] {
                    subtree_size[p] += subtree_size[u];
                }
            }
        }
        debug_assert_eq!(preorder.len(), n);

        let mut forest = DfsForest {
            root,
            parent,
            dfs_number,
            preorder,
            children,
            subtree_size,
            edge_class: BTreeMap::new(),
        };
        let classes = g
            .arcs()
            .map(|(u, v)| ((u, v), forest.classify(u, v)))
            .collect();
        forest.edge_class = classes;
        Ok(forest)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn dfs(&self, v: usize) -> usize {
        self.dfs_number[v]
    }

    /// `a ⪯_T b`: `a` lies on the tree path from the root to `b`.
    pub fn is_ancestor(&self, a: usize, b: usize) -> bool {
        let (da, db) = (self.dfs_number[a], self.dfs_number[b]);
        da <= db && db < da + self.subtree_size[a]
    }

    /// `T_{⪰v}` as a vertex set.
    pub fn subtree(&self, v: usize) -> VertexSet {
        let start = self.dfs_number[v];
        self.preorder[start..start + self.subtree_size[v]]
            .iter()
            .copied()
            .collect()
    }

    /// Tree path from `a` down to `b`, both included. `a` must be an ancestor of `b`.
    pub fn tree_path(&self, a: usize, b: usize) -> Vec<usize> {
        assert!(self.is_ancestor(a, b), "{a} is not an ancestor of {b}");
        let mut path = vec![b];
        let mut x = b;
        while x != a {
            x = self.parent[x].expect("ancestor chain reaches the root");
            path.push(x);
        }
        path.reverse();
        path
    }

    /// Tree arcs in preorder of their heads.
    pub fn tree_arcs(&self) -> Vec<(usize, usize)> {
        self.preorder
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    pub fn back_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edge_class
            .iter()
            .filter(|(_, &c)| c == EdgeClass::Back)
            .map(|(&a, _)| a)
    }

    /// Classifies an arc of the underlying digraph from ancestry alone.
    pub fn classify(&self, u: usize, v: usize) -> EdgeClass {
        if self.parent[v] == Some(u) {
            EdgeClass::Tree
        } else if self.is_ancestor(v, u) {
            EdgeClass::Back
        } else if self.is_ancestor(u, v) {
            EdgeClass::Forward
        } else {
            EdgeClass::Cross
        }
    }
}

/// The DFS tree plus arcs `v -> u` for every `u` numbered before `v` that is
/// not an ancestor of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentedDag {
    pub base: DfsForest,
    pub extra_arcs: Vec<(usize, usize)>,
    /// Children in the DAG: tree children first, then added arcs by dfs number.
    pub children: Vec<Vec<usize>>,
    /// `reach[a][b]` iff `a ⪯ b` in the DAG (reflexive).
    pub reach: Vec<Vec<bool>>,
}

impl AugmentedDag {
    pub fn new(base: DfsForest) -> Self {
        let n = base.n();
        let mut extra_arcs = Vec::new();
        let mut children = base.children.clone();
        for &v in &base.preorder {
            for &u in &base.preorder[..base.dfs(v)] {
                if !base.is_ancestor(u, v) {
                    extra_arcs.push((v, u));
                    children[v].push(u);
                }
            }
        }
        let mut reach = vec![vec![false; n]; n];
        for (s, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![s];
            row[s] = true;
            while let Some(x) = stack.pop() {
                for &y in &children[x] {
                    if !row[y] {
                        row[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        AugmentedDag {
            base,
            extra_arcs,
            children,
            reach,
        }
    }

    pub fn root(&self) -> usize {
        self.base.root
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs: Vec<_> = self
            .children
            .iter()
            .enumerate()
            .flat_map(|(u, cs)| cs.iter().map(move |&c| (u, c)))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    pub fn reaches(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }

    pub fn as_digraph(&self) -> Digraph {
        Digraph::from_arcs(self.base.n(), self.arcs()).expect("augmented DAG arcs are simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn k3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1)]).unwrap()
    }

    #[test]
    fn triangle_tree() {
        let f = DfsForest::build(&c3(), 0).unwrap();
        assert_eq!(f.tree_arcs(), vec![(0, 1), (1, 2)]);
        assert_eq!(f.edge_class[&(2, 0)], EdgeClass::Back);
        assert!(f.is_ancestor(0, 2));
        assert!(!f.is_ancestor(2, 1));
        assert!(f.is_ancestor(1, 1));
        assert_eq!(f.subtree(1), [1, 2].into_iter().collect());
        assert_eq!(f.subtree(0).len(), 3);
        assert_eq!(f.subtree(2), [2].into_iter().collect());
    }

    #[test]
    fn bidirected_triangle_classes() {
        let f = DfsForest::build(&k3(), 0).unwrap();
        assert_eq!(f.tree_arcs(), vec![(0, 1), (1, 2)]);
        for a in [(1, 0), (2, 1), (2, 0)] {
            assert_eq!(f.edge_class[&a], EdgeClass::Back, "{a:?}");
        }
        assert_eq!(f.edge_class[&(0, 2)], EdgeClass::Forward);
    }

    #[test]
    fn single_vertex() {
        let f = DfsForest::build(&Digraph::empty(1), 0).unwrap();
        assert!(f.tree_arcs().is_empty());
        assert_eq!(f.dfs(0), 0);
    }

    #[test]
    fn rejects_bad_input() {
        let g = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(DfsForest::build(&g, 0), Err(DfsError::NotStronglyConnected));
        assert_eq!(
            DfsForest::build(&c3(), 3),
            Err(DfsError::BadRoot { root: 3, n: 3 })
        );
    }

    #[test]
    fn augment_triangle_is_a_path() {
        let dag = AugmentedDag::new(DfsForest::build(&c3(), 0).unwrap());
        assert!(dag.extra_arcs.is_empty());
        assert_eq!(dag.arcs(), vec![(0, 1), (1, 2)]);
        assert!(dag.reaches(0, 2) && !dag.reaches(2, 0));
    }

    #[test]
    fn augment_star_adds_sibling_arc() {
        // 0 <-> 1, 0 <-> 2: leaves 1 and 2 hang off the root.
        let g = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2), (2, 0)]).unwrap();
        let dag = AugmentedDag::new(DfsForest::build(&g, 0).unwrap());
        assert_eq!(dag.extra_arcs, vec![(2, 1)]);
        assert!(dag.as_digraph().is_acyclic());
    }
}
