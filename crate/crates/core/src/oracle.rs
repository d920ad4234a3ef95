//! Brute-force ground truth.
//!
//! Everything here works straight from the definitions with its own small
//! helpers (bitmask evaluation, a union-find acyclicity test, a plain DPLL)
//! so that it shares no logic with the detectors it is used to check.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::backdoor::{is_deletion_bds, is_strong_bds, is_weak_bds, BackdoorKind};
use crate::error::{Error, Result};
use crate::formula::{Formula, Literal, Var};
use crate::par;
use crate::search::{RuleAudit, RuleFiring};

pub const MAX_COUNT_VARS: usize = 24;
pub const MAX_SEARCH_VARS: usize = 16;
pub const MAX_SEARCH_K: usize = 4;

/// What an oracle run computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Weak,
    Strong,
    Deletion,
    Count,
}

impl From<BackdoorKind> for OracleKind {
    fn from(kind: BackdoorKind) -> OracleKind {
        match kind {
            BackdoorKind::Weak => OracleKind::Weak,
            BackdoorKind::Strong => OracleKind::Strong,
            BackdoorKind::Deletion => OracleKind::Deletion,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub kind: OracleKind,
    /// Smallest backdoor size, `None` if there is none within the bound.
    pub optimum: Option<usize>,
    /// All backdoors of optimal size, by size then lexicographically.
    pub witness_sets: Vec<BTreeSet<Var>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_decimal")]
    pub count: Option<BigUint>,
}

mod opt_decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.serialize_str(&n.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| {
                BigUint::parse_bytes(s.as_bytes(), 10)
                    .ok_or_else(|| serde::de::Error::custom("bad count"))
            })
            .transpose()
    }
}

/// Clauses as sign masks over the positions of `universe`.
fn masks(f: &Formula, universe: &BTreeSet<Var>) -> Result<Vec<(u32, u32)>> {
    let pos_of = |v: Var| universe.iter().position(|&u| u == v).ok_or(Error::OutsideUniverse(v));
    f.clauses()
        .iter()
        .map(|c| {
            c.lits().iter().try_fold((0u32, 0u32), |(p, n), l| {
                let bit = 1u32 << pos_of(l.var())?;
                Ok(if l.is_positive() { (p | bit, n) } else { (p, n | bit) })
            })
        })
        .collect()
}

/// Number of assignments of `universe` satisfying `f`, by enumeration.
pub fn brute_count(f: &Formula, universe: &BTreeSet<Var>) -> Result<BigUint> {
    if universe.len() > MAX_COUNT_VARS {
        return Err(Error::ResourceGuard(format!(
            "brute-force counting supports at most {MAX_COUNT_VARS} variables, got {}",
            universe.len()
        )));
    }
    let clauses = masks(f, universe)?;
    let n = universe.len();
    // split the enumeration into blocks of 2^low assignments
    let low = n.min(12);
    let blocks: Vec<u32> = (0..1u32 << (n - low)).collect();
    let counts = par::map(&blocks, |&hi| {
        (0..1u32 << low)
            .filter(|&lo| {
                let a = (hi << low) | lo;
                clauses.iter().all(|&(p, q)| a & p != 0 || !a & q != 0)
            })
            .count() as u64
    });
    Ok(counts.into_iter().map(BigUint::from).sum())
}

type Lits = Vec<Literal>;

/// Unsatisfied clauses under `value`, with falsified literals removed;
/// `None` marks a clause that became empty.
fn restrict(clauses: &[Lits], value: &dyn Fn(Var) -> Option<bool>) -> Vec<Option<Lits>> {
    clauses
        .iter()
        .filter_map(|c| {
            if c.iter().any(|l| value(l.var()) == Some(l.is_positive())) {
                return None;
            }
            let rest: Lits = c.iter().copied().filter(|l| value(l.var()).is_none()).collect();
            Some((!rest.is_empty()).then_some(rest))
        })
        .collect()
}

/// Acyclicity of the incidence graph of a clause list by union-find.
fn incidence_acyclic(clauses: &[Lits]) -> bool {
    let mut ids: Vec<Var> = clauses.iter().flatten().map(|l| l.var()).collect();
    ids.sort();
    ids.dedup();
    let nv = ids.len();
    let mut parent: Vec<usize> = (0..nv + clauses.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (j, c) in clauses.iter().enumerate() {
        for l in c {
            let a = root(&mut parent, ids.binary_search(&l.var()).expect("collected"));
            let b = root(&mut parent, nv + j);
            if a == b {
                return false;
            }
            parent[a] = b;
        }
    }
    true
}

fn dpll(clauses: Vec<Lits>) -> bool {
    if clauses.is_empty() {
        return true;
    }
    if clauses.iter().any(Vec::is_empty) {
        return false;
    }
    let pick = clauses
        .iter()
        .min_by_key(|c| c.len())
        .map(|c| c[0])
        .expect("non-empty");
    let branches: &[bool] = if clauses.iter().any(|c| c.len() == 1 && c[0] == pick) {
        &[true]
    } else {
        &[true, false]
    };
    branches.iter().any(|&b| {
        let lit = if b { pick } else { pick.negate() };
        let next: Vec<Lits> = clauses
            .iter()
            .filter(|c| !c.contains(&lit))
            .map(|c| c.iter().copied().filter(|&l| l != lit.negate()).collect())
            .collect();
        dpll(next)
    })
}

fn all_assignments(b: &[Var]) -> impl Iterator<Item = Vec<(Var, bool)>> + '_ {
    (0..1u64 << b.len()).map(move |bits| {
        b.iter()
            .enumerate()
            .map(|(i, &v)| (v, bits >> i & 1 == 1))
            .collect()
    })
}

/// Definitional backdoor test, independent of the rest of the crate.
fn is_backdoor(clauses: &[Lits], b: &[Var], kind: BackdoorKind) -> bool {
    match kind {
        BackdoorKind::Deletion => {
            let deleted: Vec<Lits> = clauses
                .iter()
                .map(|c| c.iter().copied().filter(|l| !b.contains(&l.var())).collect())
                .collect();
            incidence_acyclic(&deleted)
        }
        BackdoorKind::Strong | BackdoorKind::Weak => {
            let mut outcomes = all_assignments(b).map(|tau| {
                let value = |v: Var| tau.iter().find(|(u, _)| *u == v).map(|&(_, x)| x);
                let residual = restrict(clauses, &value);
                if residual.iter().any(Option::is_none) {
                    // an empty clause is an isolated node
                    let rest: Vec<Lits> = residual.into_iter().flatten().collect();
                    return (incidence_acyclic(&rest), false);
                }
                let rest: Vec<Lits> = residual.into_iter().flatten().collect();
                let acyclic = incidence_acyclic(&rest);
                (acyclic, acyclic && dpll(rest))
            });
            if kind == BackdoorKind::Strong {
                outcomes.all(|(acyclic, _)| acyclic)
            } else {
                outcomes.any(|(_, good)| good)
            }
        }
    }
}

fn clause_lits(f: &Formula) -> Vec<Lits> {
    f.clauses().iter().map(|c| c.lits().to_vec()).collect()
}

/// Smallest backdoor of `kind` with at most `k_max` variables, by
/// enumerating subsets of the universe by size and then lexicographically.
pub fn brute_min_backdoor(f: &Formula, kind: BackdoorKind, k_max: usize) -> Result<OracleReport> {
    if f.num_vars() > MAX_SEARCH_VARS {
        return Err(Error::ResourceGuard(format!(
            "brute-force backdoor search supports at most {MAX_SEARCH_VARS} variables, got {}",
            f.num_vars()
        )));
    }
    if k_max > MAX_SEARCH_K {
        return Err(Error::ResourceGuard(format!(
            "brute-force backdoor search supports k ≤ {MAX_SEARCH_K}, got {k_max}"
        )));
    }
    let clauses = clause_lits(f);
    let vars: Vec<Var> = f.universe().iter().copied().collect();
    for size in 0..=k_max.min(vars.len()) {
        let subsets: Vec<Vec<Var>> = vars.iter().copied().combinations(size).collect();
        let hits = par::map(&subsets, |b| is_backdoor(&clauses, b, kind));
        let witness_sets: Vec<BTreeSet<Var>> = subsets
            .into_iter()
            .zip(hits)
            .filter(|(_, hit)| *hit)
            .map(|(b, _)| b.into_iter().collect())
            .collect();
        if !witness_sets.is_empty() {
            for b in &witness_sets {
                let confirmed = match kind {
                    BackdoorKind::Weak => is_weak_bds(f, b)?.is_some(),
                    BackdoorKind::Strong => is_strong_bds(f, b)?,
                    BackdoorKind::Deletion => is_deletion_bds(f, b)?,
                };
                assert!(confirmed, "backdoor predicates reject oracle witness {b:?}");
            }
            return Ok(OracleReport {
                kind: kind.into(),
                optimum: Some(size),
                witness_sets,
                count: None,
            });
        }
    }
    Ok(OracleReport {
        kind: kind.into(),
        optimum: None,
        witness_sets: Vec::new(),
        count: None,
    })
}

/// Model count packaged as an [`OracleReport`].
pub fn brute_count_report(f: &Formula) -> Result<OracleReport> {
    Ok(OracleReport {
        kind: OracleKind::Count,
        optimum: None,
        witness_sets: Vec::new(),
        count: Some(brute_count(f, f.universe())?),
    })
}

/// Minimum hitting set size of a family, by enumeration.
pub fn min_hitting_set(sets: &[BTreeSet<u32>]) -> usize {
    let elements: Vec<u32> = sets.iter().flatten().copied().sorted().dedup().collect();
    (0..=elements.len())
        .find(|&size| {
            elements
                .iter()
                .combinations(size)
                .any(|h| sets.iter().all(|s| h.iter().any(|e| s.contains(e))))
        })
        .expect("the full element set hits every set")
}

/// Checks one rule firing: searches for a backdoor of the audit's kind
/// with at most `k` variables inside `var′` that avoids the selected set.
/// Returns such a counterexample, if any.
pub fn audit_rule_firing(audit: &RuleAudit, firing: &RuleFiring) -> Option<BTreeSet<Var>> {
    let clauses = clause_lits(&audit.formula);
    let pool: Vec<Var> = firing
        .choice
        .var_prime
        .iter()
        .copied()
        .filter(|v| !firing.selected.contains(v))
        .collect();
    (0..=audit.k.min(pool.len())).find_map(|size| {
        pool.iter()
            .copied()
            .combinations(size)
            .find(|b| is_backdoor(&clauses, b, audit.kind))
            .map(|b| b.into_iter().collect())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_grid;

    fn v(i: u32) -> Var {
        Var::from_id(i)
    }

    fn universe(n: u32) -> BTreeSet<Var> {
        (1..=n).map(v).collect()
    }

    #[test]
    fn counts() {
        let f = Formula::from_ints(&[&[1, 2]]).unwrap();
        assert_eq!(brute_count(&f, &universe(2)).unwrap(), 3u32.into());
        let f = Formula::new(universe(2), vec![crate::formula::Clause::empty()]).unwrap();
        assert_eq!(brute_count(&f, &universe(2)).unwrap(), 0u32.into());
        assert_eq!(brute_count(&gen_grid(2).unwrap(), &universe(5)).unwrap(), 18u32.into());
        assert!(brute_count(&Formula::default(), &universe(25)).is_err());
    }

    #[test]
    fn grid2_strong_optimum() {
        let r = brute_min_backdoor(&gen_grid(2).unwrap(), BackdoorKind::Strong, 2).unwrap();
        assert_eq!(r.optimum, Some(1));
        assert_eq!(r.witness_sets, vec![[v(5)].into()]);
    }

    #[test]
    fn forest_has_optimum_zero() {
        let f = Formula::from_ints(&[&[1, 2], &[-2, 3]]).unwrap();
        for kind in [BackdoorKind::Weak, BackdoorKind::Strong, BackdoorKind::Deletion] {
            let r = brute_min_backdoor(&f, kind, 2).unwrap();
            assert_eq!(r.optimum, Some(0), "{kind:?}");
            assert_eq!(r.witness_sets, vec![BTreeSet::new()]);
        }
    }

    #[test]
    fn independent_gadgets_need_two() {
        let f = Formula::from_ints(&[&[1, 2], &[1, -2], &[3, 4], &[3, -4]]).unwrap();
        let r = brute_min_backdoor(&f, BackdoorKind::Strong, 1).unwrap();
        assert_eq!(r.optimum, None);
        assert!(r.witness_sets.is_empty());
    }

    #[test]
    fn guards() {
        let big = Formula::with_num_vars(17, vec![]).unwrap();
        assert!(brute_min_backdoor(&big, BackdoorKind::Weak, 1).unwrap_err().is_resource_guard());
        let f = Formula::with_num_vars(3, vec![]).unwrap();
        assert!(brute_min_backdoor(&f, BackdoorKind::Weak, 5).unwrap_err().is_resource_guard());
    }

    #[test]
    fn unsatisfiable_has_no_weak_backdoor() {
        let f = Formula::from_ints(&[&[1], &[-1]]).unwrap();
        assert_eq!(brute_min_backdoor(&f, BackdoorKind::Weak, 1).unwrap().optimum, None);
        assert_eq!(brute_min_backdoor(&f, BackdoorKind::Strong, 1).unwrap().optimum, Some(0));
    }

    #[test]
    fn dpll_and_acyclicity_helpers() {
        let tri = clause_lits(&Formula::from_ints(&[&[1, 2], &[-1, 2], &[1, -2]]).unwrap());
        assert!(dpll(tri.clone()));
        assert!(!incidence_acyclic(&tri));
        let unsat = clause_lits(&Formula::from_ints(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]).unwrap());
        assert!(!dpll(unsat));
    }

    #[test]
    fn hitting_sets() {
        assert_eq!(min_hitting_set(&[[1, 2].into(), [2, 3].into()]), 1);
        assert_eq!(min_hitting_set(&[[1].into(), [2].into(), [1, 3].into()]), 2);
    }

    #[test]
    fn report_json() {
        let r = brute_count_report(&Formula::from_ints(&[&[1, 2]]).unwrap()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, r#"{"kind":"count","optimum":null,"witness_sets":[],"count":"3"}"#);
        assert_eq!(serde_json::from_str::<OracleReport>(&json).unwrap(), r);
    }
}
