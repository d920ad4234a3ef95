//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes and returns plain strings: DIMACS text in, JSON out.
//! The same functions are callable natively, which is how they are tested.

use std::collections::BTreeSet;

use acyclic_backdoors::generators::{gen_grid, gen_random_rcnf};
use acyclic_backdoors::strong::{count_models, detect_strong_approx};
use acyclic_backdoors::{
    detect_deletion, detect_weak, Assignment, BackdoorVerdict, Formula, IncidenceGraph, Node, Var,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest instance the page will analyze; keeps the tab responsive.
const MAX_VARS: usize = 60;

#[derive(Debug, Serialize)]
pub struct Edge {
    pub var: u32,
    pub clause: usize,
    pub positive: bool,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub vars: Vec<u32>,
    pub clauses: Vec<Vec<i64>>,
    pub edges: Vec<Edge>,
    /// Shortest cycle of the incidence graph, if any.
    pub cycle: Option<Vec<Node>>,
    pub found: bool,
    pub backdoor: Option<BTreeSet<Var>>,
    pub witness: Option<Assignment>,
    /// Clauses satisfied by the weak witness.
    pub satisfied_clauses: Vec<usize>,
    /// Shortest cycle of the reduced formula: the backdoor variables deleted
    /// and, for weak sets, the satisfied clauses dropped. Not reported for
    /// strong sets, which have one reduced formula per assignment.
    pub residual_cycle: Option<Vec<Node>>,
}

#[derive(Debug, Serialize)]
pub struct CountResult {
    pub count: String,
    pub universe_size: usize,
    pub backdoor: BTreeSet<Var>,
}

fn parse(dimacs: &str) -> Result<Formula, String> {
    let f = Formula::parse_dimacs(dimacs).map_err(|e| e.to_string())?;
    if f.universe().len() > MAX_VARS {
        return Err(format!("the demo handles at most {MAX_VARS} variables"));
    }
    Ok(f)
}

/// DIMACS text of a generated instance: `grid` uses `size` as the side
/// length, `random` builds a 3-CNF on `size` variables with `size` clauses.
pub fn generate_dimacs(kind: &str, size: u32, seed: u64) -> Result<String, String> {
    let f = match kind {
        "grid" => gen_grid(size as usize),
        "random" => gen_random_rcnf(size, size as usize, 3, seed),
        other => return Err(format!("unknown generator `{other}`")),
    }
    .map_err(|e| e.to_string())?;
    Ok(f.to_dimacs())
}

pub fn analyze_json(dimacs: &str, kind: &str, k: usize) -> Result<String, String> {
    let f = parse(dimacs)?;
    let verdict: BackdoorVerdict = match kind {
        "weak" => detect_weak(&f, k, f.max_clause_width().max(1)),
        "strong" => detect_strong_approx(&f, k),
        "deletion" => detect_deletion(&f, k),
        other => return Err(format!("unknown backdoor kind `{other}`")),
    }
    .map_err(|e| e.to_string())?;

    let g = IncidenceGraph::new(&f);
    let satisfied_clauses: Vec<usize> = match verdict.witness() {
        Some(tau) => (0..f.num_clauses())
            .filter(|&j| {
                f.clauses()[j].lits().iter().any(|l| tau.get(l.var()) == Some(l.is_positive()))
            })
            .collect(),
        None => Vec::new(),
    };
    let residual_cycle = match verdict.set() {
        Some(b) if kind != "strong" => {
            let removed: BTreeSet<Node> = b
                .iter()
                .map(|&v| Node::Var(v))
                .chain(satisfied_clauses.iter().map(|&j| Node::Clause(j)))
                .collect();
            g.find_cycle(&removed).map(|c| c.nodes)
        }
        _ => None,
    };
    let analysis = Analysis {
        vars: f.universe().iter().map(|v| v.id()).collect(),
        clauses: f
            .clauses()
            .iter()
            .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
            .collect(),
        edges: g
            .signed_edges()
            .map(|(v, clause, positive)| Edge { var: v.id(), clause, positive })
            .collect(),
        cycle: g.find_cycle(&BTreeSet::new()).map(|c| c.nodes),
        found: verdict.is_found(),
        backdoor: verdict.set().cloned(),
        witness: verdict.witness().cloned(),
        satisfied_clauses,
        residual_cycle,
    };
    serde_json::to_string(&analysis).map_err(|e| e.to_string())
}

pub fn count_json(dimacs: &str) -> Result<String, String> {
    let f = parse(dimacs)?;
    let (backdoor, count) = count_models(&f).map_err(|e| e.to_string())?;
    let result = CountResult {
        count: count.count.to_string(),
        universe_size: count.universe_size,
        backdoor,
    };
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn generate(kind: &str, size: u32, seed: u32) -> Result<String, JsError> {
    generate_dimacs(kind, size, u64::from(seed)).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(dimacs: &str, kind: &str, k: usize) -> Result<String, JsError> {
    analyze_json(dimacs, kind, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn count(dimacs: &str) -> Result<String, JsError> {
    count_json(dimacs).map_err(|e| JsError::new(&e))
}
