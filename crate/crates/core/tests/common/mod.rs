#![allow(dead_code)]

use circwidth::{Digraph, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn set(xs: &[usize]) -> VertexSet {
    xs.iter().copied().collect()
}

pub fn digraph(n: usize, arcs: &[(usize, usize)]) -> Digraph {
    Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
}

pub fn c3() -> Digraph {
    digraph(3, &[(0, 1), (1, 2), (2, 0)])
}

/// Arbitrary digraph: every ordered pair independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Digraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                g.add_arc(u, v).unwrap();
            }
        }
    }
    g
}

pub fn random_subset(n: usize, p: f64, rng: &mut ChaCha8Rng) -> VertexSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

prop_compose! {
    pub fn arb_digraph(max_n: usize)(n in 1..=max_n)
        (n in Just(n), bits in proptest::collection::vec(any::<bool>(), n * n)) -> Digraph {
        let arcs = (0..n).flat_map(|u| (0..n).map(move |v| (u, v)))
            .zip(bits)
            .filter(|&((u, v), b)| b && u != v)
            .map(|(a, _)| a);
        Digraph::from_arcs(n, arcs).unwrap()
    }
}

/// Reflexive transitive closure by Floyd–Warshall.
pub fn closure(g: &Digraph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r = vec![vec![false; n]; n];
    for u in 0..n {
        r[u][u] = true;
        for &v in g.out(u) {
            r[u][v] = true;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

/// Simple-path enumeration: is there a path in `g \ x` that starts in `w`,
/// visits a vertex outside `w`, and comes back to `w` (possibly the start)?
pub fn leaves_and_returns(g: &Digraph, x: &VertexSet, w: &VertexSet) -> bool {
    fn go(
        g: &Digraph,
        x: &VertexSet,
        w: &VertexSet,
        u: usize,
        outside: bool,
        on: &mut Vec<bool>,
    ) -> bool {
        for &v in g.out(u) {
            if x.contains(&v) {
                continue;
            }
            if w.contains(&v) && outside {
                return true;
            }
            if !on[v] && !w.contains(&v) {
                on[v] = true;
                if go(g, x, w, v, true, on) {
                    return true;
                }
                on[v] = false;
            }
        }
        false
    }
    w.iter().any(|&s| {
        let mut on = vec![false; g.n()];
        on[s] = true;
        go(g, x, w, s, false, &mut on)
    })
}
