//! Digraphs on which the DFS-tree constructions are not decompositions.
//!
//! In both cases a cross arc leads from the decomposed part into an earlier
//! branch of the DFS tree, and a back arc from that branch reaches an
//! ancestor that the bag does not contain. Widths still respect circ + 1.

mod common;

use circwidth::builders::{build_arboreal, build_dag, build_kelly, BackEdgeIndex};
use circwidth::cycle::circumference;
use circwidth::dfs::{DfsForest, EdgeClass};
use circwidth::validate::{
    guards, validate_arboreal, validate_dag, validate_kelly, Axiom, GuardViolation,
    NormalViolation, Site, Witness,
};
use common::*;

#[test]
fn arboreal_bag_bypassed_through_earlier_branch() {
    let g = digraph(
        5,
        &[
            (0, 1),
            (1, 2),
            (2, 1),
            (1, 3),
            (1, 4),
            (3, 4),
            (4, 3),
            (4, 2),
            (3, 0),
        ],
    );
    let f = DfsForest::build(&g, 0).unwrap();
    assert_eq!(f.preorder, vec![0, 1, 2, 3, 4]);
    assert_eq!(f.edge_class[&(4, 2)], EdgeClass::Cross);
    assert_eq!(f.edge_class[&(1, 4)], EdgeClass::Forward);

    let d = build_arboreal(&f, &BackEdgeIndex::new(&f));
    let arc = d.arcs.iter().position(|&a| a == (3, 4)).unwrap();
    assert_eq!(d.arc_bags[arc], set(&[0, 3]));

    let report = validate_arboreal(&g, &d).unwrap();
    assert_eq!(report.failures(), vec![Axiom::Dtw2]);
    assert_eq!(
        report.verdict(Axiom::Dtw2).unwrap().witness,
        Some(Witness::NotNormal {
            arc: (3, 4),
            violation: NormalViolation::Path(vec![4, 2, 1, 4]),
        })
    );
    assert!(report.width <= circumference(&g).unwrap().length + 1);
}

#[test]
fn kelly_and_dag_guards_miss_earlier_back_arc() {
    let g = digraph(5, &[(0, 1), (1, 2), (2, 1), (1, 3), (3, 4), (4, 3), (3, 0)]);
    let f = DfsForest::build(&g, 0).unwrap();
    let idx = BackEdgeIndex::new(&f);
    let circ = circumference(&g).unwrap().length;
    assert_eq!(circ, 3);

    let k = build_kelly(&f, &idx);
    assert_eq!(k.guard_bags[4], set(&[0, 3]));
    let report = validate_kelly(&g, &k).unwrap();
    assert!(report.failures().contains(&Axiom::Kw2), "{report}");
    assert!(report.width <= circ + 1);
    // W_{⪰4} = {2, 4}: vertex 2 precedes 4 in DFS order without being its ancestor
    let below_four = set(&[2, 4]);
    assert_eq!(
        guards(&g, &k.guard_bags[4], &below_four),
        Err(GuardViolation::Escape(2, 1))
    );

    let d = build_dag(&f, &idx);
    let report = validate_dag(&g, &d).unwrap();
    assert!(report.failures().contains(&Axiom::Dgw3), "{report}");
    assert!(report.width <= circ + 1);
    assert_eq!(
        report.verdict(Axiom::Dgw3).unwrap().witness,
        Some(Witness::NotGuarded {
            site: Site::Arc(3, 4),
            violation: GuardViolation::Escape(2, 1),
        })
    );
}
