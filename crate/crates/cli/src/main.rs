use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use circwidth::pipeline::{
    decompose, min_slack, run_survey, validate_bundle, write_csv, Counterexample, RootChoice,
    SurveyPlan,
};
use circwidth::{
    circumference, gen, parse_bundle, parse_decomposition, parse_digraph,
    strongly_connected_components, validate, DfsForest, Digraph, Family, FamilySpec, Kind,
};
use clap::{Parser, Subcommand};

/// Arboreal, DAG- and Kelly-decompositions from DFS trees, checked against
/// the circumference.
#[derive(Parser)]
#[command(name = "circwidth", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a generated digraph as an edge list.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the DFS numbering and the class of every arc, one component at a time.
    Dfs {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        root: Option<usize>,
    },
    /// Print the circumference and a longest cycle.
    Circ {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Decompose every strongly connected component and validate the result.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        kind: Kind,
        /// A vertex, or `auto` to try roots until one validates.
        #[arg(long)]
        root: Option<RootArg>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Skip the circumference and the bound check.
        #[arg(long)]
        no_circ: bool,
        /// Directory for reproduction files when validation fails.
        #[arg(long, default_value = ".")]
        repro_dir: PathBuf,
    },
    /// Check a decomposition file (a bundle or a single decomposition) axiom by axiom.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        kind: Option<Kind>,
    },
    /// Run all constructions over generated families and tabulate widths against circ + 1.
    Survey {
        /// Comma-separated family names; all families when omitted.
        #[arg(long, value_delimiter = ',')]
        family: Vec<Family>,
        /// A size, a range `a..b` (inclusive) or a comma-separated list.
        #[arg(long, default_value = "2..8")]
        n: Sizes,
        /// Seeds per size for the random families.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV destination.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Record rejected constructions and continue instead of stopping at the first.
        #[arg(long)]
        keep_going: bool,
        #[arg(long, default_value = ".")]
        repro_dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug)]
enum RootArg {
    Vertex(usize),
    Auto,
}

impl FromStr for RootArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(RootArg::Auto);
        }
        s.parse()
            .map(RootArg::Vertex)
            .map_err(|_| format!("expected a vertex id or `auto`, got `{s}`"))
    }
}

#[derive(Clone, Debug)]
struct Sizes(Vec<usize>);

impl FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad size `{t}`"))
        };
        let sizes = if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            (a..=b).collect()
        } else {
            s.split(',').map(num).collect::<Result<_, _>>()?
        };
        Ok(Sizes(sizes))
    }
}

fn read_graph(path: &Path) -> Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_digraph(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join(xs: impl IntoIterator<Item = usize>) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Writes `<stem>.graph.txt` and `<stem>.decomp.txt`, replayable with `validate`.
fn write_repro(dir: &Path, cx: &Counterexample) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = format!("repro-{}-{}", cx.graph_id, cx.bundle.kind);
    let graph = dir.join(format!("{stem}.graph.txt"));
    let decomp = dir.join(format!("{stem}.decomp.txt"));
    fs::write(
        &graph,
        format!("{}{}", cx.describe(), cx.graph.to_edge_list()),
    )?;
    fs::write(&decomp, cx.bundle.to_string())?;
    eprint!("{}", cx.describe());
    eprintln!("# reproduction: {} {}", graph.display(), decomp.display());
    Ok(())
}

fn cmd_dfs(graph: &Path, root: Option<usize>) -> Result<bool> {
    let g = read_graph(graph)?;
    if let Some(r) = root {
        if r >= g.n() {
            bail!(
                "root {r} is not a vertex of a digraph with {} vertices",
                g.n()
            );
        }
    }
    let scc = strongly_connected_components(&g);
    for (i, comp) in scc.components.iter().enumerate() {
        let (h, map) = g.induced_subgraph(comp)?;
        let local_root = root
            .and_then(|r| map.iter().position(|&x| x == r))
            .unwrap_or(0);
        let f = DfsForest::build(&h, local_root)?;
        println!(
            "# scc {i} root {} vertices: {}",
            map[local_root],
            join(comp.iter().copied())
        );
        let order: Vec<String> = f
            .preorder
            .iter()
            .map(|&v| match f.parent[v] {
                Some(p) => format!("{}<-{}", map[v], map[p]),
                None => map[v].to_string(),
            })
            .collect();
        println!("# preorder: {}", order.join(" "));
        for (&(u, v), class) in &f.edge_class {
            println!("{} {} {class}", map[u], map[v]);
        }
    }
    let between: Vec<_> = g
        .arcs()
        .filter(|&(u, v)| scc.component_of[u] != scc.component_of[v])
        .collect();
    if !between.is_empty() {
        println!("# arcs between components");
        for (u, v) in between {
            println!("{u} {v} BETWEEN");
        }
    }
    Ok(true)
}

fn cmd_circ(graph: &Path) -> Result<bool> {
    let g = read_graph(graph)?;
    let r = circumference(&g)?;
    println!("l = {}", r.length);
    if r.witness.is_empty() {
        println!("cycle: none (acyclic)");
    } else {
        println!("cycle: {}", join(r.witness));
    }
    Ok(true)
}

fn cmd_decompose(
    graph: &Path,
    kind: Kind,
    root: Option<RootArg>,
    output: Option<&Path>,
    no_circ: bool,
    repro_dir: &Path,
) -> Result<bool> {
    let g = read_graph(graph)?;
    let choice = match root {
        None => RootChoice::Smallest,
        Some(RootArg::Vertex(v)) if v >= g.n() => bail!(
            "root {v} is not a vertex of a digraph with {} vertices",
            g.n()
        ),
        Some(RootArg::Vertex(v)) => RootChoice::Vertex(v),
        Some(RootArg::Auto) => RootChoice::Auto,
    };
    let bundle = decompose(&g, kind, choice)?;
    let report = validate_bundle(&g, &bundle)?;
    let width = bundle.overall_width();
    let (circ, bound_ok) = if no_circ {
        ("skipped".to_string(), None)
    } else {
        let c = circumference(&g)?.length;
        (c.to_string(), Some(width <= c + 1))
    };

    emit(&bundle.to_string(), output)?;
    let summary = format!(
        "kind={kind} sccs={} width={width} circ={circ} bound_ok={}",
        bundle.sections.len(),
        bound_ok.map_or("skipped".to_string(), |b| b.to_string())
    );
    if output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }

    if !report.passed() {
        let stem = graph
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("graph");
        write_repro(
            repro_dir,
            &Counterexample {
                graph_id: stem.to_string(),
                graph: g,
                bundle,
                report,
            },
        )?;
        return Ok(false);
    }
    Ok(bound_ok != Some(false))
}

fn cmd_validate(graph: &Path, decomp: &Path, kind: Option<Kind>) -> Result<bool> {
    let g = read_graph(graph)?;
    let text =
        fs::read_to_string(decomp).with_context(|| format!("reading {}", decomp.display()))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("bundle") {
        let bundle =
            parse_bundle(&text).with_context(|| format!("parsing {}", decomp.display()))?;
        if let Some(k) = kind.filter(|&k| k != bundle.kind) {
            bail!(
                "{} holds a {} bundle, not {k}",
                decomp.display(),
                bundle.kind
            );
        }
        let report = validate_bundle(&g, &bundle)?;
        for (i, (s, rep)) in bundle.sections.iter().zip(&report.sections).enumerate() {
            println!("# scc {i} vertices: {}", join(s.vertices.iter().copied()));
            print!("{rep}");
        }
        if let Some(m) = &report.component_mismatch {
            println!("components FAIL {m}");
        }
        println!(
            "overall {} width {}",
            verdict(report.passed()),
            report.width()
        );
        Ok(report.passed())
    } else {
        let d =
            parse_decomposition(&text).with_context(|| format!("parsing {}", decomp.display()))?;
        if let Some(k) = kind.filter(|&k| k != d.kind()) {
            bail!(
                "{} holds a {} decomposition, not {k}",
                decomp.display(),
                d.kind()
            );
        }
        let report = validate(&g, &d)?;
        print!("{report}");
        println!("overall {}", verdict(report.passed()));
        Ok(report.passed())
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_survey(
    plan: SurveyPlan,
    output: Option<&Path>,
    keep_going: bool,
    repro_dir: &Path,
) -> Result<bool> {
    let run = run_survey(&plan, keep_going)?;
    println!(
        "{:<36} {:>3} {:>4} {:>4} {:>4} {:>4} {:>4} {:>5}",
        "graph_id", "n", "m", "circ", "arb", "dag", "kel", "valid"
    );
    for r in &run.rows {
        println!(
            "{:<36} {:>3} {:>4} {:>4} {:>4} {:>4} {:>4} {:>5}",
            r.graph_id, r.n, r.m, r.circ, r.width_arboreal, r.width_dag, r.width_kelly, r.all_valid
        );
    }
    if let Some([a, d, k]) = min_slack(&run.rows) {
        println!("min slack (circ + 1 - width): arboreal {a}, dag {d}, kelly {k}");
    }
    let rejected = run.rows.iter().filter(|r| !r.all_valid).count();
    println!(
        "{} rows, {rejected} with a rejected construction",
        run.rows.len()
    );
    if run.stopped_early {
        println!("stopped at the first rejection; pass --keep-going to finish the sweep");
    }
    if let Some(p) = output {
        let file = fs::File::create(p).with_context(|| format!("writing {}", p.display()))?;
        write_csv(&run.rows, file)?;
    }
    for cx in &run.counterexamples {
        write_repro(repro_dir, cx)?;
    }
    Ok(run.ok())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen {
            family,
            n,
            seed,
            output,
        } => {
            let g = gen(&FamilySpec::new(family, n, seed))?;
            emit(&g.to_edge_list(), output.as_deref())?;
            Ok(true)
        }
        Cmd::Dfs { graph, root } => cmd_dfs(&graph, root),
        Cmd::Circ { graph } => cmd_circ(&graph),
        Cmd::Decompose {
            graph,
            kind,
            root,
            output,
            no_circ,
            repro_dir,
        } => cmd_decompose(&graph, kind, root, output.as_deref(), no_circ, &repro_dir),
        Cmd::Validate {
            graph,
            decomp,
            kind,
        } => cmd_validate(&graph, &decomp, kind),
        Cmd::Survey {
            family,
            n,
            count,
            seed,
            output,
            keep_going,
            repro_dir,
        } => {
            let families = if family.is_empty() {
                Family::ALL.to_vec()
            } else {
                family
            };
            let plan = SurveyPlan {
                families,
                sizes: n.0,
                count,
                seed,
            };
            cmd_survey(plan, output.as_deref(), keep_going, &repro_dir)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
