//! Backdoor predicates and kill relations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::acyclic::is_acyclic_satisfiable;
use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, Var};
use crate::graph::{formula_is_acyclic, CycleDescriptor, IncidenceGraph, SlitGraph};
use crate::par;

/// Largest set for which the `2^|B|` verification loops run.
pub const MAX_VERIFY_VARS: usize = 30;

/// Answer of a detector or verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum BackdoorVerdict {
    /// A backdoor set; `witness` is only present for weak backdoors.
    Found {
        set: BTreeSet<Var>,
        witness: Option<Assignment>,
    },
    /// No backdoor set of size at most `k`.
    No { k: usize },
}

impl BackdoorVerdict {
    pub fn found(set: BTreeSet<Var>) -> BackdoorVerdict {
        BackdoorVerdict::Found { set, witness: None }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, BackdoorVerdict::Found { .. })
    }

    pub fn set(&self) -> Option<&BTreeSet<Var>> {
        match self {
            BackdoorVerdict::Found { set, .. } => Some(set),
            BackdoorVerdict::No { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Assignment> {
        match self {
            BackdoorVerdict::Found { witness, .. } => witness.as_ref(),
            BackdoorVerdict::No { .. } => None,
        }
    }
}

/// The three backdoor notions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackdoorKind {
    Weak,
    Strong,
    Deletion,
}

impl std::str::FromStr for BackdoorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<BackdoorKind> {
        match s {
            "weak" => Ok(BackdoorKind::Weak),
            "strong" => Ok(BackdoorKind::Strong),
            "deletion" => Ok(BackdoorKind::Deletion),
            other => Err(Error::InvalidParameter(format!("unknown backdoor kind `{other}`"))),
        }
    }
}

/// How a variable destroys a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KillMode {
    /// Adjacent to a clause of the cycle without lying on it.
    WeakExternal,
    /// Occurs with opposite signs in two clauses of the cycle without lying
    /// on it.
    StrongExternal,
    /// Lies on the cycle.
    Internal,
}

fn check_subset(f: &Formula, b: &BTreeSet<Var>) -> Result<()> {
    match b.iter().find(|v| !f.universe().contains(v)) {
        Some(&v) => Err(Error::OutsideUniverse(v)),
        None => Ok(()),
    }
}

fn check_guard(b: &BTreeSet<Var>) -> Result<()> {
    if b.len() > MAX_VERIFY_VARS {
        return Err(Error::ResourceGuard(format!(
            "backdoor set of {} variables exceeds the verification limit of {MAX_VERIFY_VARS}",
            b.len()
        )));
    }
    Ok(())
}

/// True iff `inc(F − B)` is acyclic.
pub fn is_deletion_bds(f: &Formula, b: &BTreeSet<Var>) -> Result<bool> {
    Ok(formula_is_acyclic(&f.delete_vars(b)?))
}

/// True iff `F[τ]` is acyclic for every `τ ∈ 2^B`. Each restriction is
/// checked on the strong clause-literal graph of `F` by removing the closed
/// neighbourhood of the true literals.
pub fn is_strong_bds(f: &Formula, b: &BTreeSet<Var>) -> Result<bool> {
    check_subset(f, b)?;
    check_guard(b)?;
    let slit = SlitGraph::new(f);
    let vars: Vec<Var> = b.iter().copied().collect();
    Ok(par::all(1u64 << vars.len(), |bits| {
        slit.residual_acyclic(&Assignment::from_bits(&vars, bits))
            .expect("assignment within universe")
    }))
}

/// The lexicographically first `τ ∈ 2^B` (false before true, smallest
/// variable most significant) with `F[τ]` acyclic and satisfiable.
pub fn is_weak_bds(f: &Formula, b: &BTreeSet<Var>) -> Result<Option<Assignment>> {
    check_subset(f, b)?;
    check_guard(b)?;
    if f.has_empty_clause() {
        return Ok(None);
    }
    let slit = SlitGraph::new(f);
    let vars: Vec<Var> = b.iter().copied().collect();
    Ok(par::find_first(1u64 << vars.len(), |bits| {
        let tau = Assignment::from_bits(&vars, bits);
        if !slit.residual_acyclic(&tau).expect("assignment within universe") {
            return None;
        }
        let residual = f.apply(&tau).expect("assignment within universe");
        is_acyclic_satisfiable(&residual)
            .expect("residual is acyclic")
            .then_some(tau)
    }))
}

/// Variables of `pool` adjacent to at least one clause of `c`.
pub fn weak_external_killers(
    g: &IncidenceGraph,
    c: &CycleDescriptor,
    pool: &BTreeSet<Var>,
) -> BTreeSet<Var> {
    let on_cycle: BTreeSet<Var> = c.vars().collect();
    pool.iter()
        .copied()
        .filter(|x| !on_cycle.contains(x))
        .filter(|&x| c.clauses().any(|j| g.sign(x, j).is_some()))
        .collect()
}

/// Number of clauses of `c` containing `x`.
pub fn clause_neighbors_on(g: &IncidenceGraph, x: Var, c: &CycleDescriptor) -> usize {
    c.clauses().filter(|&j| g.sign(x, j).is_some()).count()
}

/// A clause pair `(u, v)` of `c` with `x ∈ u` and `¬x ∈ v`, the
/// lexicographically least one; `None` if `x` lies on `c` or has no such
/// pair.
pub fn strong_kills_externally(
    g: &IncidenceGraph,
    x: Var,
    c: &CycleDescriptor,
) -> Option<(usize, usize)> {
    if c.vars().any(|y| y == x) {
        return None;
    }
    let mut pos: Vec<usize> = Vec::new();
    let mut neg: Vec<usize> = Vec::new();
    for j in c.clauses() {
        match g.sign(x, j) {
            Some(true) => pos.push(j),
            Some(false) => neg.push(j),
            None => {}
        }
    }
    Some((*pos.iter().min()?, *neg.iter().min()?))
}

/// How `x` kills `c`, if it does, under weak (`strong == false`) or strong
/// killing.
pub fn kill_mode(g: &IncidenceGraph, x: Var, c: &CycleDescriptor, strong: bool) -> Option<KillMode> {
    if c.vars().any(|y| y == x) {
        Some(KillMode::Internal)
    } else if strong {
        strong_kills_externally(g, x, c).map(|_| KillMode::StrongExternal)
    } else {
        (clause_neighbors_on(g, x, c) > 0).then_some(KillMode::WeakExternal)
    }
}
