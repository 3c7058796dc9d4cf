//! Browser bindings: generate a digraph, decompose it, find a longest cycle.
//! Every export returns a JSON string; see `www/index.html`.

use circwidth::pipeline::{decompose, validate_bundle, RootChoice};
use circwidth::{
    circumference, gen, parse_digraph, strongly_connected_components, Decomposition, DfsForest,
    Digraph, Family, FamilySpec, Kind,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn sorted(xs: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = xs.into_iter().collect();
    v.sort_unstable();
    v
}

pub fn generate_edge_list(family: &str, n: usize, seed: u64) -> Result<String, String> {
    let family: Family = family.parse().map_err(err)?;
    Ok(gen(&FamilySpec::new(family, n, seed))
        .map_err(err)?
        .to_edge_list())
}

fn graph_json(g: &Digraph) -> Value {
    let scc = strongly_connected_components(g);
    json!({
        "n": g.n(),
        "arcs": g.arcs().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
        "components": scc.components.iter().map(|c| sorted(c.iter().copied())).collect::<Vec<_>>(),
    })
}

pub fn circumference_json(edge_list: &str) -> Result<String, String> {
    let g = parse_digraph(edge_list).map_err(err)?;
    let r = circumference(&g).map_err(err)?;
    Ok(json!({
        "graph": graph_json(&g),
        "length": r.length,
        "cycle": r.witness,
    })
    .to_string())
}

fn bags_json(d: &Decomposition) -> Value {
    match d {
        Decomposition::Arboreal(a) => json!({
            "nodes": a.node_bags.iter().map(|b| json!({ "W": sorted(b.iter().copied()) })).collect::<Vec<_>>(),
            "arcs": a.arcs.iter().zip(&a.arc_bags)
                .map(|(&(u, v), b)| json!({ "from": u, "to": v, "A": sorted(b.iter().copied()) }))
                .collect::<Vec<_>>(),
        }),
        Decomposition::Dag(x) => json!({
            "nodes": x.bags.iter().map(|b| json!({ "X": sorted(b.iter().copied()) })).collect::<Vec<_>>(),
            "arcs": x.arcs.iter().map(|&(u, v)| json!({ "from": u, "to": v })).collect::<Vec<_>>(),
        }),
        Decomposition::Kelly(k) => json!({
            "nodes": k.node_bags.iter().zip(&k.guard_bags)
                .map(|(w, x)| json!({ "W": sorted(w.iter().copied()), "X": sorted(x.iter().copied()) }))
                .collect::<Vec<_>>(),
            "arcs": k.arcs.iter().map(|&(u, v)| json!({ "from": u, "to": v })).collect::<Vec<_>>(),
            "order": k.child_order,
            "roots": k.root_order,
        }),
    }
}

/// DFS trees, bags and validator verdicts for every strongly connected
/// component. `root` is a vertex id, or negative for the smallest vertex.
pub fn decompose_json(edge_list: &str, kind: &str, root: i64) -> Result<String, String> {
    let g = parse_digraph(edge_list).map_err(err)?;
    let kind: Kind = kind.parse().map_err(err)?;
    let choice = match usize::try_from(root) {
        Ok(v) if v < g.n() => RootChoice::Vertex(v),
        Ok(v) => return Err(format!("root {v} is not a vertex")),
        Err(_) => RootChoice::Smallest,
    };
    let bundle = decompose(&g, kind, choice).map_err(err)?;
    let report = validate_bundle(&g, &bundle).map_err(err)?;
    let circ = circumference(&g).ok().map(|r| r.length);

    let sections: Vec<Value> = bundle
        .sections
        .iter()
        .zip(&report.sections)
        .map(|(s, rep)| {
            let (h, map) = g
                .induced_subgraph(&s.vertices)
                .expect("section is a component");
            let local_root = s
                .root
                .and_then(|r| map.iter().position(|&x| x == r))
                .unwrap_or(0);
            let f = DfsForest::build(&h, local_root).expect("component is strongly connected");
            json!({
                "vertices": map,
                "root": map[local_root],
                "parent": f.parent.iter().map(|p| p.map(|p| map[p])).collect::<Vec<_>>(),
                "dfs": f.dfs_number,
                "classes": f.edge_class.iter()
                    .map(|(&(u, v), c)| json!([map[u], map[v], c.to_string()]))
                    .collect::<Vec<_>>(),
                "bags": bags_json(&s.decomposition),
                "width": s.decomposition.width(),
                "passed": rep.passed(),
                "report": rep.to_string(),
            })
        })
        .collect();

    Ok(json!({
        "graph": graph_json(&g),
        "kind": kind.name(),
        "width": bundle.overall_width(),
        "circ": circ,
        "bound_ok": circ.map(|c| bundle.overall_width() <= c + 1),
        "passed": report.passed(),
        "sections": sections,
        "text": bundle.to_string(),
    })
    .to_string())
}

#[wasm_bindgen]
pub fn generate(family: &str, n: usize, seed: u32) -> Result<String, JsError> {
    generate_edge_list(family, n, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn longest_cycle(edge_list: &str) -> Result<String, JsError> {
    circumference_json(edge_list).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn decompose_graph(edge_list: &str, kind: &str, root: i32) -> Result<String, JsError> {
    decompose_json(edge_list, kind, i64::from(root)).map_err(|e| JsError::new(&e))
}
