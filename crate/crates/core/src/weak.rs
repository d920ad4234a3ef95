//! Weak backdoor detection for r-CNF formulas.
//!
//! With `2k + 1` disjoint cycles in the incidence graph, a weak backdoor of
//! size `k` kills at most `k` of them internally; for every choice of those
//! `k` the remaining cycles constrain which outside variables can help. The
//! rules below turn each choice into a small set `S` that every such
//! backdoor must hit, and the detector branches on the union. Without the
//! cycles, an exact cycle-driven search decides the instance.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::acyclic::is_acyclic_satisfiable;
use crate::backdoor::{clause_neighbors_on, weak_external_killers, BackdoorKind, BackdoorVerdict};
use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, Formula, Var};
use crate::graph::{CycleDescriptor, IncidenceGraph, IncidencePacking};
use crate::search::{CandidateSet, InternalChoice, Rule, RuleAudit, RuleFiring, SearchLog, Split, WeakRule};

/// Thresholds of the weak rules for budget `k` and clause width `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakParams {
    pub k: usize,
    pub r: usize,
    pub cycles: usize,
    pub ext_cycles: usize,
    pub multi: usize,
    pub supp: usize,
    pub overlap: usize,
}

/// Rule thresholds; widths below 3 are treated as 3.
pub fn weak_params(k: usize, r: usize) -> Result<WeakParams> {
    if k == 0 {
        return Err(Error::InvalidParameter("weak rule parameters need k ≥ 1".into()));
    }
    let r = r.max(3);
    let multi = 4 * k;
    let km = k * multi;
    Ok(WeakParams {
        k,
        r,
        cycles: 2 * k + 1,
        ext_cycles: k + 1,
        multi,
        supp: (r - 3) * (k.pow(3) + 9) + 4 * k * k + k,
        overlap: (r - 2) * km * km + k,
    })
}

/// Applies the first applicable weak rule to one internal choice.
pub fn weak_rule_select(
    g: &IncidenceGraph,
    packing: &[CycleDescriptor],
    choice: &InternalChoice,
    params: &WeakParams,
) -> (WeakRule, BTreeSet<Var>) {
    let cycles: Vec<&CycleDescriptor> = choice.external.iter().map(|&i| &packing[i]).collect();
    let killers: Vec<BTreeSet<Var>> = cycles
        .iter()
        .map(|c| weak_external_killers(g, c, &choice.var_prime))
        .collect();

    if killers.iter().any(BTreeSet::is_empty) {
        return (WeakRule::NoExternalKiller, BTreeSet::new());
    }

    // Per cycle: the heavy killer's neighbour count ℓ and the killers with
    // at least ℓ/(2k) neighbours.
    let heavy: Vec<(Var, usize, BTreeSet<Var>)> = cycles
        .iter()
        .zip(&killers)
        .map(|(c, ks)| {
            let counts: BTreeMap<Var, usize> =
                ks.iter().map(|&x| (x, clause_neighbors_on(g, x, c))).collect();
            let (&x, &ell) = counts
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .expect("killer set is non-empty");
            let strong: BTreeSet<Var> = counts
                .iter()
                .filter(|&(_, &n)| n * 2 * params.k >= ell)
                .map(|(&y, _)| y)
                .collect();
            (x, ell, strong)
        })
        .collect();

    if let Some((_, _, w)) = heavy
        .iter()
        .find(|(_, ell, w)| *ell >= params.multi && w.len() <= params.supp)
    {
        return (WeakRule::MultiKillerSupported, w.clone());
    }
    if let Some((x, _, _)) = heavy
        .iter()
        .find(|(_, ell, w)| *ell >= params.multi && w.len() > params.supp)
    {
        return (WeakRule::MultiKillerUnsupported, [*x].into());
    }

    let n = killers.len();
    let large_overlap = (0..n).any(|i| {
        (i + 1..n).any(|j| killers[i].intersection(&killers[j]).count() >= params.overlap)
    });
    if large_overlap {
        return (WeakRule::LargeOverlap, BTreeSet::new());
    }

    let mut hits: BTreeMap<Var, usize> = BTreeMap::new();
    for &x in killers.iter().flatten() {
        *hits.entry(x).or_default() += 1;
    }
    let common = hits.into_iter().filter(|&(_, n)| n >= 2).map(|(x, _)| x).collect();
    (WeakRule::SmallOverlap, common)
}

/// Union of the rule outputs over all `C(2k+1, k)` internal choices of the
/// first `2k+1` cycles of `packing`.
pub fn weak_candidate_set(
    f: &Formula,
    k: usize,
    r: usize,
    packing: &[CycleDescriptor],
) -> Result<CandidateSet> {
    let params = weak_params(k, r)?;
    if packing.len() < params.cycles {
        return Err(Error::InvalidParameter(format!(
            "need {} disjoint cycles, got {}",
            params.cycles,
            packing.len()
        )));
    }
    let packing = &packing[..params.cycles];
    let g = IncidenceGraph::new(f);
    let firings = InternalChoice::all(packing, k, f.universe())
        .into_iter()
        .map(|choice| {
            let (rule, selected) = weak_rule_select(&g, packing, &choice, &params);
            RuleFiring {
                choice,
                rule: Rule::Weak(rule),
                selected,
            }
        })
        .collect();
    Ok(CandidateSet::from_firings(firings))
}

/// Decides whether `f` has a weak backdoor set of size at most `k`.
///
/// `r` must bound the clause width of `f`.
pub fn detect_weak(f: &Formula, k: usize, r: usize) -> Result<BackdoorVerdict> {
    detect_weak_logged(f, k, r, &mut SearchLog::default())
}

pub fn detect_weak_logged(
    f: &Formula,
    k: usize,
    r: usize,
    log: &mut SearchLog,
) -> Result<BackdoorVerdict> {
    let width = f.max_clause_width();
    if width > r {
        return Err(Error::WidthExceeded { width, r });
    }
    weak_search(f, k, r.max(3), log)
}

fn found(set: BTreeSet<Var>, witness: Assignment) -> BackdoorVerdict {
    BackdoorVerdict::Found {
        set,
        witness: Some(witness),
    }
}

/// Adds `s = value` to a verdict found on `F[s = value]`.
fn lift(v: BackdoorVerdict, s: Var, value: bool) -> BackdoorVerdict {
    match v {
        BackdoorVerdict::Found { mut set, witness } => {
            set.insert(s);
            let mut tau = witness.unwrap_or_default();
            tau.set(s, value);
            found(set, tau)
        }
        no => no,
    }
}

fn weak_search(f: &Formula, k: usize, r: usize, log: &mut SearchLog) -> Result<BackdoorVerdict> {
    log.nodes += 1;
    let g = IncidenceGraph::new(f);
    if g.is_acyclic() {
        return Ok(if is_acyclic_satisfiable(f)? {
            found(BTreeSet::new(), Assignment::new())
        } else {
            BackdoorVerdict::No { k }
        });
    }
    if k == 0 {
        return Ok(BackdoorVerdict::No { k });
    }
    let params = weak_params(k, r)?;
    let packing = match g.disjoint_cycles_or_fvs(params.cycles)? {
        IncidencePacking::Fvs(fvs) => {
            log.note_split(|| Split::Fvs { size: fvs.len() });
            return exact_weak_fallback(f, k);
        }
        IncidencePacking::Cycles(cycles) => cycles,
    };
    log.note_split(|| Split::Packing {
        cycles: packing.clone(),
    });
    let candidates = weak_candidate_set(f, k, r, &packing)?;
    if log.record_audits {
        log.audits.push(RuleAudit {
            kind: BackdoorKind::Weak,
            formula: f.clone(),
            k,
            packing: packing[..params.cycles].to_vec(),
            firings: candidates.firings.clone(),
        });
    }
    for &s in &candidates.vars {
        for value in [false, true] {
            let sub = weak_search(&f.apply(&Assignment::single(s, value))?, k - 1, r, log)?;
            if sub.is_found() {
                return Ok(lift(sub, s, value));
            }
        }
    }
    Ok(BackdoorVerdict::No { k })
}

/// Exact weak backdoor search by branching on shortest cycles.
///
/// Some variable of a weak backdoor must lie on the cycle or share a clause
/// with it, so the search tries every such variable with both values.
/// Failed residual formulas are remembered per remaining budget.
pub fn exact_weak_fallback(f: &Formula, k: usize) -> Result<BackdoorVerdict> {
    let mut failed = HashSet::new();
    Ok(match weak_branch(f, k, &mut failed)? {
        Some((set, tau)) => found(set, tau),
        None => BackdoorVerdict::No { k },
    })
}

fn weak_branch(
    f: &Formula,
    k: usize,
    failed: &mut HashSet<(Vec<Clause>, usize)>,
) -> Result<Option<(BTreeSet<Var>, Assignment)>> {
    if f.has_empty_clause() {
        return Ok(None);
    }
    let g = IncidenceGraph::new(f);
    let Some(cycle) = g.find_cycle(&BTreeSet::new()) else {
        return Ok(is_acyclic_satisfiable(f)?.then(|| (BTreeSet::new(), Assignment::new())));
    };
    if k == 0 {
        return Ok(None);
    }
    let key = (f.clauses().to_vec(), k);
    if failed.contains(&key) {
        return Ok(None);
    }
    let mut candidates: BTreeSet<Var> = cycle.vars().collect();
    candidates.extend(weak_external_killers(&g, &cycle, f.universe()));
    for s in candidates {
        for value in [false, true] {
            let residual = f.apply(&Assignment::single(s, value))?;
            if let Some((mut set, mut tau)) = weak_branch(&residual, k - 1, failed)? {
                set.insert(s);
                tau.set(s, value);
                return Ok(Some((set, tau)));
            }
        }
    }
    failed.insert(key);
    Ok(None)
}
