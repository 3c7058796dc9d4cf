//! Acceptance suite: one line per criterion, nonzero exit if any gating
//! criterion fails. Run with `cargo test -p circwidth --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use circwidth::cycle::{circumference, circumference_oracle};
use circwidth::decomp::{ArborealDecomposition, DagDecomposition, KellyDecomposition, Kind};
use circwidth::generate::{gen, Family, FamilySpec};
use circwidth::graph::strongly_connected_components;
use circwidth::pipeline::{
    build_decomposition, decompose, min_slack, read_csv, run_survey, validate_bundle, write_csv,
    RootChoice, SurveyPlan,
};
use circwidth::validate::{
    guards, is_x_normal, validate, validate_arboreal, validate_dag, validate_kelly, Axiom,
    ValidationReport,
};
use circwidth::{Digraph, VertexSet};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Criterion 1: 500 random strongly connected digraphs, n in [2, 9].
fn bound_suite() -> Outcome {
    let start = Instant::now();
    let mut invalid = [0usize; 3];
    let mut over_bound = [0usize; 3];
    let mut first = None;
    for i in 0..500u64 {
        let n = 2 + (i as usize % 8);
        let g = gen(&FamilySpec::new(Family::RandomScc, n, i)).unwrap();
        let circ = circumference(&g).unwrap().length;
        for (k, kind) in Kind::ALL.into_iter().enumerate() {
            let d = build_decomposition(&g, kind, 0).unwrap();
            let report = validate(&g, &d).unwrap();
            if !report.passed() {
                invalid[k] += 1;
                first.get_or_insert_with(|| {
                    let fails: Vec<String> =
                        report.failures().iter().map(Axiom::to_string).collect();
                    format!("first rejection: seed {i}, {kind}, {}", fails.join("+"))
                });
            }
            if report.width > circ + 1 {
                over_bound[k] += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let passed = invalid == [0; 3] && over_bound == [0; 3] && secs < 120.0;
    outcome(
        passed,
        format!(
            "rejected (arboreal, dag, kelly) = {invalid:?}; width > circ+1 = {over_bound:?}; {secs:.1}s{}",
            first.map(|f| format!("; {f}")).unwrap_or_default()
        ),
    )
}

/// Criterion 2: circumference against the enumeration oracle.
fn circumference_suite() -> Outcome {
    let mut mismatches = 0;
    for i in 0..200u64 {
        let n = 1 + (i as usize % 8);
        let g = random_digraph(n, 0.15 + 0.05 * (i % 8) as f64, 900 + i);
        if circumference(&g).unwrap().length != circumference_oracle(&g).unwrap() {
            mismatches += 1;
        }
    }
    let cycles_ok = (2..=10).all(|n| {
        circumference(&gen(&FamilySpec::new(Family::Cycle, n, 0)).unwrap())
            .unwrap()
            .length
            == n
    });
    let dags_ok = (0..50u64).all(|seed| {
        let g = gen(&FamilySpec::new(
            Family::RandomDag,
            1 + (seed as usize % 12),
            seed,
        ))
        .unwrap();
        let r = circumference(&g).unwrap();
        r.length == 1 && r.witness.is_empty()
    });
    outcome(
        mismatches == 0 && cycles_ok && dags_ok,
        format!("oracle mismatches {mismatches}/200; cycles 2..10 {cycles_ok}; random DAGs circ=1 {dags_ok}"),
    )
}

/// Criterion 3: bidirected cliques.
fn clique_suite() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in 3..=6 {
        let g = gen(&FamilySpec::new(Family::BidirectedComplete, n, 0)).unwrap();
        let circ = circumference(&g).unwrap().length;
        let widths: Vec<usize> = Kind::ALL
            .into_iter()
            .map(|k| build_decomposition(&g, k, 0).unwrap().width())
            .collect();
        ok &= circ == n && widths.iter().all(|&w| w <= n + 1);
        rows.push(format!("K{n}: circ {circ} widths {widths:?}"));
    }
    outcome(ok, rows.join("; "))
}

/// Criterion 4: guarding implies normality; normality matches path enumeration.
fn definition_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut implication_failures = 0;
    for i in 0..1000u64 {
        let n = 1 + (i as usize % 9);
        let g = random_digraph(n, 0.3, 7_000 + i);
        let x = random_subset(n, 0.3, &mut rng);
        let w: VertexSet = random_subset(n, 0.5, &mut rng)
            .difference(&x)
            .copied()
            .collect();
        if guards(&g, &x, &w).is_ok() && is_x_normal(&g, &x, &w).is_err() {
            implication_failures += 1;
        }
    }
    let mut disagreements = 0;
    let mut violations = 0;
    for i in 0..1000u64 {
        let n = 1 + (i as usize % 7);
        let g = random_digraph(n, 0.35, 8_000 + i);
        let x = random_subset(n, 0.25, &mut rng);
        let w: VertexSet = random_subset(n, 0.4, &mut rng)
            .difference(&x)
            .copied()
            .collect();
        let fast = is_x_normal(&g, &x, &w).is_ok();
        let brute = !leaves_and_returns(&g, &x, &w);
        violations += usize::from(!brute);
        disagreements += usize::from(fast != brute);
    }
    outcome(
        implication_failures == 0 && disagreements == 0,
        format!(
            "guards⇒normal failures {implication_failures}/1000; normality vs enumeration disagreements {disagreements}/1000 ({violations} non-normal cases)"
        ),
    )
}

/// Criterion 5: circumference and bundle widths are maxima over components.
fn reduction_suite() -> Outcome {
    let mut bad = 0;
    let mut multi = 0;
    for i in 0..100u64 {
        let n = 1 + (i as usize % 12);
        let g = random_digraph(n, 0.08 + 0.02 * (i % 10) as f64, 3_000 + i);
        let scc = strongly_connected_components(&g);
        multi += usize::from(scc.len() > 1);
        let subs: Vec<Digraph> = scc
            .components
            .iter()
            .map(|c| g.induced_subgraph(c).unwrap().0)
            .collect();
        let circ_max = subs
            .iter()
            .map(|h| circumference(h).unwrap().length)
            .max()
            .unwrap();
        if circumference(&g).unwrap().length != circ_max {
            bad += 1;
        }
        for kind in Kind::ALL {
            let bundle = decompose(&g, kind, RootChoice::Smallest).unwrap();
            let per = subs
                .iter()
                .map(|h| build_decomposition(h, kind, 0).unwrap().width())
                .max()
                .unwrap();
            let report = validate_bundle(&g, &bundle).unwrap();
            if bundle.overall_width() != per
                || report.width() != per
                || bundle.sections.len() != scc.len()
            {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("mismatches {bad}; {multi}/100 instances had several components"),
    )
}

const C3_GOLDEN: [&str; 3] = [
    "bundle arboreal sccs 1 width 2\nscc 0 root 0 vertices: 0 1 2\narboreal 3\nnode 0 W: 0\nnode 1 W: 1\nnode 2 W: 2\narc 0 1 A: 0\narc 1 2 A: 0 1\n",
    "bundle dag sccs 1 width 3\nscc 0 root 0 vertices: 0 1 2\ndag 3\nnode 0 X: 0\nnode 1 X: 0 1\nnode 2 X: 0 1 2\narc 0 1\narc 1 2\n",
    "bundle kelly sccs 1 width 3\nscc 0 root 0 vertices: 0 1 2\nkelly 3\nnode 0 W: 0 X:\nnode 1 W: 1 X: 0\nnode 2 W: 2 X: 0 1\narc 0 1\narc 1 2\norder 0: 1\norder 1: 2\norder 2:\nroots: 0\n",
];

/// Criterion 6: hand-traced triangle decompositions, byte for byte.
fn golden_suite() -> Outcome {
    let g = c3();
    let mut ok = true;
    let mut widths = Vec::new();
    for (kind, golden) in Kind::ALL.into_iter().zip(C3_GOLDEN) {
        let texts: BTreeSet<String> = (0..3)
            .map(|_| {
                decompose(&g, kind, RootChoice::Smallest)
                    .unwrap()
                    .to_string()
            })
            .collect();
        let bundle = decompose(&g, kind, RootChoice::Smallest).unwrap();
        ok &= texts.len() == 1
            && texts.contains(golden)
            && validate_bundle(&g, &bundle).unwrap().passed();
        widths.push(bundle.overall_width());
    }
    ok &= widths == [2, 3, 3];
    outcome(ok, format!("widths (arboreal, dag, kelly) = {widths:?}"))
}

fn fails_exactly(report: &ValidationReport, axiom: Axiom) -> bool {
    report.failures() == vec![axiom] && report.verdict(axiom).unwrap().witness.is_some()
}

/// Criterion 7: one failing fixture per axiom (DGW-3 gets an arc and a root fixture).
fn negative_suite() -> Outcome {
    let g = c3();
    let s = set;
    let arb = ArborealDecomposition {
        node_bags: vec![s(&[0]), s(&[1]), s(&[2])],
        arcs: vec![(0, 1), (1, 2)],
        arc_bags: vec![s(&[0]), s(&[0, 1])],
    };
    let kelly = KellyDecomposition {
        arcs: vec![(0, 1), (1, 2)],
        node_bags: vec![s(&[0]), s(&[1]), s(&[2])],
        guard_bags: vec![s(&[]), s(&[0]), s(&[0, 1])],
        child_order: vec![vec![1], vec![2], vec![]],
        root_order: vec![0],
    };
    let dag = |arcs: Vec<(usize, usize)>, bags: Vec<VertexSet>| DagDecomposition { arcs, bags };

    let mut checks: Vec<(&str, bool)> = Vec::new();
    let mut d = arb.clone();
    d.node_bags[0] = s(&[0, 1]);
    checks.push((
        "DTW-1",
        fails_exactly(&validate_arboreal(&g, &d).unwrap(), Axiom::Dtw1),
    ));
    let mut d = arb.clone();
    d.arc_bags[1] = s(&[]);
    checks.push((
        "DTW-2",
        fails_exactly(&validate_arboreal(&g, &d).unwrap(), Axiom::Dtw2),
    ));
    checks.push((
        "DGW-1",
        fails_exactly(
            &validate_dag(&digraph(2, &[(0, 1)]), &dag(vec![], vec![s(&[1])])).unwrap(),
            Axiom::Dgw1,
        ),
    ));
    checks.push((
        "DGW-2",
        fails_exactly(
            &validate_dag(
                &Digraph::empty(3),
                &dag(vec![(0, 1), (1, 2)], vec![s(&[0]), s(&[1]), s(&[0, 2])]),
            )
            .unwrap(),
            Axiom::Dgw2,
        ),
    ));
    checks.push((
        "DGW-3 arc",
        fails_exactly(
            &validate_dag(&g, &dag(vec![(0, 1)], vec![s(&[0]), s(&[1, 2])])).unwrap(),
            Axiom::Dgw3,
        ),
    ));
    checks.push((
        "DGW-3 root",
        fails_exactly(
            &validate_dag(&g, &dag(vec![], vec![s(&[0, 1]), s(&[2])])).unwrap(),
            Axiom::Dgw3,
        ),
    ));
    let mut d = kelly.clone();
    d.node_bags[0] = s(&[0, 1]);
    checks.push((
        "KW-1",
        fails_exactly(&validate_kelly(&g, &d).unwrap(), Axiom::Kw1),
    ));
    let mut d = kelly.clone();
    d.guard_bags[2] = s(&[1]);
    checks.push((
        "KW-2",
        fails_exactly(&validate_kelly(&g, &d).unwrap(), Axiom::Kw2),
    ));
    let fork = KellyDecomposition {
        arcs: vec![(0, 1), (0, 2)],
        node_bags: vec![s(&[0]), s(&[1]), s(&[2])],
        guard_bags: vec![s(&[]), s(&[2]), s(&[0])],
        child_order: vec![vec![1, 2], vec![], vec![]],
        root_order: vec![0],
    };
    checks.push((
        "KW-3",
        fails_exactly(&validate_kelly(&g, &fork).unwrap(), Axiom::Kw3),
    ));

    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
    outcome(
        failed.is_empty(),
        format!("{} fixtures, unexpected verdicts: {failed:?}", checks.len()),
    )
}

/// Criterion 8 (informational): survey over every family, minimum slack.
fn slack_probe() -> Outcome {
    let plan = SurveyPlan {
        families: Family::ALL.to_vec(),
        sizes: (2..=8).collect(),
        count: 5,
        seed: 0,
    };
    let run = run_survey(&plan, true).unwrap();
    let path = std::env::temp_dir().join(format!("circwidth-survey-{}.csv", std::process::id()));
    let mut emitted = false;
    if let Ok(file) = std::fs::File::create(&path) {
        emitted = write_csv(&run.rows, file).is_ok()
            && std::fs::File::open(&path)
                .ok()
                .and_then(|f| read_csv(f).ok())
                .is_some_and(|back| back == run.rows);
    }
    let _ = std::fs::remove_file(&path);
    let slack = min_slack(&run.rows).unwrap();
    let invalid = run.rows.iter().filter(|r| !r.all_valid).count();
    outcome(
        emitted && run.rows.len() == plan.instances().len(),
        format!(
            "{} rows, CSV round-trip {emitted}; min slack (arboreal, dag, kelly) = {slack:?}; rows with a rejected construction: {invalid}",
            run.rows.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, bool);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 bound suite (500 random SCCs)", bound_suite, true),
        ("2 circumference oracle", circumference_suite, true),
        ("3 bidirected cliques", clique_suite, true),
        ("4 definition-level oracles", definition_suite, true),
        ("5 per-SCC reduction", reduction_suite, true),
        ("6 triangle goldens", golden_suite, true),
        ("7 negative fixtures", negative_suite, true),
        ("8 slack probe (informational)", slack_probe, false),
    ];
    let mut gate = true;
    for (name, run, gating) in criteria {
        let o = run();
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {name}: {}", o.detail);
        if gating && !o.passed {
            gate = false;
        }
    }
    if gate {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: at least one gating criterion failed");
        ExitCode::FAILURE
    }
}
