//! Seeded graph families.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64(seed)`, so a
//! `(family, n, seed)` triple always yields the same digraph.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Digraph;

/// Rejection samples drawn before `random-scc` gives up.
pub const SCC_RETRY_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cycle,
    BidirectedComplete,
    BidirectedFromUndirected,
    RandomScc,
    RandomDag,
    Tournament,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Cycle,
        Family::BidirectedComplete,
        Family::BidirectedFromUndirected,
        Family::RandomScc,
        Family::RandomDag,
        Family::Tournament,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::BidirectedComplete => "bidirected-complete",
            Family::BidirectedFromUndirected => "bidirected-from-undirected",
            Family::RandomScc => "random-scc",
            Family::RandomDag => "random-dag",
            Family::Tournament => "tournament",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("family size must be at least 1")]
    EmptyFamily,
    #[error("no strongly connected sample for n = {n} after {tries} tries")]
    RetryBudget { n: usize, tries: usize },
    #[error("edge {{{0}, {1}}} listed twice")]
    DuplicateEdge(usize, usize),
    #[error("invalid undirected edge {{{0}, {1}}}")]
    BadEdge(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Density constant for the random families: `p = min(1, c ln n / n)`.
    pub density: f64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        FamilySpec {
            family,
            n,
            seed,
            density: 2.0,
        }
    }

    fn arc_probability(&self) -> f64 {
        let n = self.n as f64;
        (self.density * n.ln() / n).clamp(0.0, 1.0)
    }
}

pub fn gen(spec: &FamilySpec) -> Result<Digraph, GenError> {
    let n = spec.n;
    if n == 0 {
        return Err(GenError::EmptyFamily);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let p = spec.arc_probability();
    let g = match spec.family {
        Family::Cycle => {
            if n == 1 {
                Digraph::empty(1)
            } else {
                Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
            }
        }
        Family::BidirectedComplete => {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            to_bidirected(n, &edges)?
        }
        Family::BidirectedFromUndirected => {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            to_bidirected(n, &edges)?
        }
        Family::RandomScc => {
            let mut found = None;
            for _ in 0..SCC_RETRY_BUDGET {
                let arcs: Vec<_> = (0..n)
                    .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                    .filter(|_| rng.gen_bool(p))
                    .collect();
                let g = Digraph::from_arcs(n, arcs).expect("sampled arcs are simple");
                if g.is_strongly_connected() {
                    found = Some(g);
                    break;
                }
            }
            found.ok_or(GenError::RetryBudget {
                n,
                tries: SCC_RETRY_BUDGET,
            })?
        }
        Family::RandomDag => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let arcs: Vec<_> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(p))
                .map(|(i, j)| (perm[i], perm[j]))
                .collect();
            Digraph::from_arcs(n, arcs).expect("sampled arcs are simple")
        }
        Family::Tournament => {
            let arcs: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
                .collect();
            Digraph::from_arcs(n, arcs).expect("tournament is simple")
        }
    };
    Ok(g)
}

/// Replaces every undirected edge `{u, v}` by the arcs `(u, v)` and `(v, u)`.
pub fn to_bidirected(n: usize, edges: &[(usize, usize)]) -> Result<Digraph, GenError> {
    let mut g = Digraph::empty(n);
    for &(u, v) in edges {
        if u == v || u >= n || v >= n {
            return Err(GenError::BadEdge(u, v));
        }
        if g.has_arc(u, v) {
            return Err(GenError::DuplicateEdge(u, v));
        }
        g.add_arc(u, v).expect("checked above");
        g.add_arc(v, u).expect("checked above");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::circumference;

    #[test]
    fn bidirected_complete_arc_count() {
        for n in 1..=6 {
            let g = gen(&FamilySpec::new(Family::BidirectedComplete, n, 0)).unwrap();
            assert_eq!(g.m(), n * (n - 1));
        }
    }

    #[test]
    fn cycle_family() {
        let g = gen(&FamilySpec::new(Family::Cycle, 4, 0)).unwrap();
        assert_eq!(circumference(&g).unwrap().length, 4);
    }

    #[test]
    fn random_dag_is_acyclic() {
        for seed in 0..20 {
            let g = gen(&FamilySpec::new(Family::RandomDag, 9, seed)).unwrap();
            assert!(g.is_acyclic());
            assert_eq!(circumference(&g).unwrap().length, 1);
        }
    }

    #[test]
    fn random_scc_is_strongly_connected_and_reproducible() {
        for seed in 0..20 {
            let spec = FamilySpec::new(Family::RandomScc, 2 + (seed as usize % 8), seed);
            let g = gen(&spec).unwrap();
            assert!(g.is_strongly_connected());
            assert_eq!(gen(&spec).unwrap(), g);
        }
    }

    #[test]
    fn tournaments_have_one_arc_per_pair() {
        let g = gen(&FamilySpec::new(Family::Tournament, 7, 3)).unwrap();
        assert_eq!(g.m(), 21);
    }

    #[test]
    fn bidirecting() {
        let g = to_bidirected(2, &[(0, 1)]).unwrap();
        assert_eq!(g.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert_eq!(
            to_bidirected(3, &[(0, 1), (1, 0)]),
            Err(GenError::DuplicateEdge(1, 0))
        );
        assert_eq!(to_bidirected(3, &[(0, 0)]), Err(GenError::BadEdge(0, 0)));
        let k3 = to_bidirected(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.m(), 6);
    }

    #[test]
    fn bidirected_trees_have_circumference_two() {
        // a path and a star
        let path = to_bidirected(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let star = to_bidirected(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        for g in [path, star] {
            assert_eq!(crate::cycle::circumference_oracle(&g), Ok(2));
            assert_eq!(circumference(&g).unwrap().length, 2);
        }
    }

    #[test]
    fn unknown_family() {
        assert!(matches!(
            "grid".parse::<Family>(),
            Err(GenError::UnknownFamily(_))
        ));
        assert_eq!("random-scc".parse::<Family>(), Ok(Family::RandomScc));
    }
}
