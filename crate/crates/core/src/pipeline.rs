//! Per-component decomposition bundles, bundle validation and the survey
//! ledger that compares constructed widths with the circumference.

use std::io;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::builders::{build_arboreal, build_dag, build_kelly, BackEdgeIndex};
use crate::cycle::{circumference, CycleError};
use crate::decomp::{BundleSection, Decomposition, DecompositionBundle, Kind};
use crate::dfs::{DfsError, DfsForest};
use crate::generate::{gen, Family, FamilySpec, GenError};
use crate::graph::{strongly_connected_components, Digraph, VertexSet};
use crate::validate::{validate, MalformedError, ValidationReport};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Dfs(#[from] DfsError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("section {section}: {source}")]
    Malformed {
        section: usize,
        source: MalformedError,
    },
    #[error("section {section} lists vertex {vertex}, which is not in the digraph")]
    UnknownVertex { section: usize, vertex: usize },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Which vertex of each component roots its DFS tree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootChoice {
    /// The smallest vertex of every component.
    #[default]
    Smallest,
    /// This vertex for its own component, the smallest vertex elsewhere.
    Vertex(usize),
    /// The first vertex, in ascending order, whose decomposition validates;
    /// the smallest vertex when none does.
    Auto,
}

/// Builds one decomposition of a strongly connected digraph.
pub fn build_decomposition(
    g: &Digraph,
    kind: Kind,
    root: usize,
) -> Result<Decomposition, DfsError> {
    let f = DfsForest::build(g, root)?;
    let idx = BackEdgeIndex::new(&f);
    Ok(match kind {
        Kind::Arboreal => Decomposition::Arboreal(build_arboreal(&f, &idx)),
        Kind::Dag => Decomposition::Dag(build_dag(&f, &idx)),
        Kind::Kelly => Decomposition::Kelly(build_kelly(&f, &idx)),
    })
}

/// Decomposes every strongly connected component separately. Bags use the
/// vertex ids of `g`; decomposition node `i` is the `i`-th smallest vertex
/// of its component.
pub fn decompose(
    g: &Digraph,
    kind: Kind,
    root: RootChoice,
) -> Result<DecompositionBundle, PipelineError> {
    let scc = strongly_connected_components(g);
    let mut sections = Vec::with_capacity(scc.len());
    for comp in &scc.components {
        let (h, map) = g
            .induced_subgraph(comp)
            .expect("component vertices are valid");
        let local_root = match root {
            RootChoice::Vertex(v) if comp.contains(&v) => {
                map.iter().position(|&x| x == v).expect("member")
            }
            RootChoice::Auto => (0..h.n())
                .find(|&r| {
                    build_decomposition(&h, kind, r)
                        .ok()
                        .and_then(|d| validate(&h, &d).ok())
                        .is_some_and(|rep| rep.passed())
                })
                .unwrap_or(0),
            _ => 0,
        };
        let d = build_decomposition(&h, kind, local_root)?;
        sections.push(BundleSection {
            vertices: comp.clone(),
            root: Some(map[local_root]),
            decomposition: d.map_vertices(|x| map[x]),
        });
    }
    Ok(DecompositionBundle {
        kind,
        sections,
        scc: Some(scc),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleReport {
    /// Per-section reports with witnesses in the ids of the whole digraph.
    pub sections: Vec<ValidationReport>,
    /// Set when the sections are not exactly the strongly connected components.
    pub component_mismatch: Option<String>,
}

impl BundleReport {
    pub fn passed(&self) -> bool {
        self.component_mismatch.is_none() && self.sections.iter().all(ValidationReport::passed)
    }

    pub fn width(&self) -> usize {
        self.sections.iter().map(|r| r.width).max().unwrap_or(0)
    }
}

/// Validates each section against the subdigraph induced by its vertices.
pub fn validate_bundle(
    g: &Digraph,
    bundle: &DecompositionBundle,
) -> Result<BundleReport, PipelineError> {
    let mut sections = Vec::with_capacity(bundle.sections.len());
    for (i, s) in bundle.sections.iter().enumerate() {
        if let Some(&vertex) = s.vertices.iter().find(|&&v| v >= g.n()) {
            return Err(PipelineError::UnknownVertex { section: i, vertex });
        }
        let (h, map) = g.induced_subgraph(&s.vertices).expect("checked above");
        let mut local = vec![usize::MAX; g.n()];
        for (j, &v) in map.iter().enumerate() {
            local[v] = j;
        }
        // vertices outside the section become out-of-range ids for `h`
        let d = s.decomposition.map_vertices(|v| {
            local
                .get(v)
                .copied()
                .filter(|&x| x != usize::MAX)
                .unwrap_or(h.n() + v)
        });
        let rep =
            validate(&h, &d).map_err(|source| PipelineError::Malformed { section: i, source })?;
        sections.push(rep.map_vertices(|x| map[x]));
    }

    let scc = strongly_connected_components(g);
    let mut expected: Vec<&VertexSet> = scc.components.iter().collect();
    let mut found: Vec<&VertexSet> = bundle.sections.iter().map(|s| &s.vertices).collect();
    expected.sort();
    found.sort();
    let component_mismatch = (expected != found).then(|| {
        format!(
            "sections cover {} vertex sets but the digraph has {} strongly connected components",
            found.len(),
            expected.len()
        )
    });
    Ok(BundleReport {
        sections,
        component_mismatch,
    })
}

/// One instance of the survey: constructed widths against `circ + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub graph_id: String,
    pub n: usize,
    pub m: usize,
    pub circ: usize,
    pub width_arboreal: usize,
    pub width_dag: usize,
    pub width_kelly: usize,
    pub all_valid: bool,
    pub slack_arboreal: i64,
    pub slack_dag: i64,
    pub slack_kelly: i64,
}

impl SurveyRow {
    pub fn bound_ok(&self) -> bool {
        self.slack_arboreal >= 0 && self.slack_dag >= 0 && self.slack_kelly >= 0
    }
}

/// A construction the validator rejected, with everything needed to replay it.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub graph_id: String,
    pub graph: Digraph,
    pub bundle: DecompositionBundle,
    pub report: BundleReport,
}

impl Counterexample {
    pub fn describe(&self) -> String {
        let mut out = format!(
            "# counterexample {} ({})\n",
            self.graph_id, self.bundle.kind
        );
        if let Some(m) = &self.report.component_mismatch {
            out.push_str(&format!("# {m}\n"));
        }
        for (s, rep) in self.bundle.sections.iter().zip(&self.report.sections) {
            if !rep.passed() {
                let root = s.root.map_or_else(|| "?".to_string(), |r| r.to_string());
                let vs: Vec<String> = s.vertices.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "# section with root {root}, vertices {}\n",
                    vs.join(" ")
                ));
                for line in rep.to_string().lines() {
                    out.push_str(&format!("#   {line}\n"));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SurveyOutcome {
    pub row: SurveyRow,
    pub counterexamples: Vec<Counterexample>,
}

/// Computes the circumference and all three constructions for one digraph.
pub fn survey_instance(graph_id: &str, g: &Digraph) -> Result<SurveyOutcome, PipelineError> {
    let circ = circumference(g)?.length;
    let mut widths = [0usize; 3];
    let mut counterexamples = Vec::new();
    for (slot, kind) in Kind::ALL.into_iter().enumerate() {
        let bundle = decompose(g, kind, RootChoice::Smallest)?;
        let report = validate_bundle(g, &bundle)?;
        widths[slot] = bundle.overall_width();
        if !report.passed() {
            counterexamples.push(Counterexample {
                graph_id: graph_id.to_string(),
                graph: g.clone(),
                bundle,
                report,
            });
        }
    }
    let slack = |w: usize| circ as i64 + 1 - w as i64;
    Ok(SurveyOutcome {
        row: SurveyRow {
            graph_id: graph_id.to_string(),
            n: g.n(),
            m: g.m(),
            circ,
            width_arboreal: widths[0],
            width_dag: widths[1],
            width_kelly: widths[2],
            all_valid: counterexamples.is_empty(),
            slack_arboreal: slack(widths[0]),
            slack_dag: slack(widths[1]),
            slack_kelly: slack(widths[2]),
        },
        counterexamples,
    })
}

/// Instances to survey: every family at every size, `count` seeds each
/// (seeds `seed..seed + count`). Deterministic families run once per size.
#[derive(Clone, Debug, PartialEq)]
pub struct SurveyPlan {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub count: usize,
    pub seed: u64,
}

impl SurveyPlan {
    pub fn instances(&self) -> Vec<FamilySpec> {
        let mut out = Vec::new();
        for &family in &self.families {
            let seeds = match family {
                Family::Cycle | Family::BidirectedComplete => 1,
                _ => self.count as u64,
            };
            for &n in &self.sizes {
                for s in 0..seeds {
                    out.push(FamilySpec::new(family, n, self.seed + s));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct SurveyRun {
    pub rows: Vec<SurveyRow>,
    pub counterexamples: Vec<Counterexample>,
    /// Set when the run stopped at the first rejected construction.
    pub stopped_early: bool,
}

impl SurveyRun {
    /// Every construction validated and respected `circ + 1`.
    pub fn ok(&self) -> bool {
        !self.stopped_early && self.rows.iter().all(|r| r.all_valid && r.bound_ok())
    }
}

/// Runs the plan in order. Unless `keep_going`, stops after the first
/// instance with a rejected construction.
pub fn run_survey(plan: &SurveyPlan, keep_going: bool) -> Result<SurveyRun, PipelineError> {
    let mut run = SurveyRun::default();
    for spec in plan.instances() {
        let g = gen(&spec)?;
        let id = format!("{}-n{}-s{}", spec.family, spec.n, spec.seed);
        let outcome = survey_instance(&id, &g)?;
        let failed = !outcome.row.all_valid;
        run.rows.push(outcome.row);
        run.counterexamples.extend(outcome.counterexamples);
        if failed && !keep_going {
            run.stopped_early = true;
            break;
        }
    }
    Ok(run)
}

pub fn write_csv<W: io::Write>(rows: &[SurveyRow], out: W) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<SurveyRow>, PipelineError> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(PipelineError::from))
        .collect()
}

/// Smallest slack per measure (arboreal, DAG, Kelly) over a set of rows.
pub fn min_slack(rows: &[SurveyRow]) -> Option<[i64; 3]> {
    rows.iter()
        .map(|r| [r.slack_arboreal, r.slack_dag, r.slack_kelly])
        .reduce(|a, b| [a[0].min(b[0]), a[1].min(b[1]), a[2].min(b[2])])
}
