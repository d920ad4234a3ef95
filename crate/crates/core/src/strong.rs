//! Strong backdoor approximation, exact deletion backdoors and model
//! counting through strong backdoors.
//!
//! For strong backdoors every cycle `C_i` that must be killed from outside
//! is shortened to a cycle `Cx_i`: a killer `x_i` together with the
//! shortest arc of `C_i` between two clauses where `x_i` occurs with
//! opposite signs. Any outside variable killing `Cx_i` then occurs with
//! opposite signs in exactly those two end clauses, which makes the
//! interaction between cycles and killers regular enough for four rules.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::acyclic::{count_acyclic_models, ModelCount};
use crate::backdoor::{is_strong_bds, BackdoorKind, BackdoorVerdict, MAX_VERIFY_VARS};
use crate::error::{Error, Result};
use crate::formula::{Assignment, Clause, Formula, Var};
use crate::graph::{
    CycleDescriptor, IncidenceGraph, IncidencePacking, Node, SlitGraph,
};
use crate::par;
use crate::search::{CandidateSet, InternalChoice, Rule, RuleAudit, RuleFiring, SearchLog, Split, StrongRule};

/// Largest budget accepted by the strong approximation.
pub const MAX_STRONG_K: usize = 6;

/// Thresholds of the strong rules for budget `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongParams {
    pub k: usize,
    pub cycles: usize,
    pub ext_cycles: usize,
    pub fvs: usize,
}

pub fn strong_params(k: usize) -> Result<StrongParams> {
    if k == 0 {
        return Err(Error::InvalidParameter("strong rule parameters need k ≥ 1".into()));
    }
    if k > MAX_STRONG_K {
        return Err(guard(k));
    }
    let cycles = k * k * (1 << (k - 1)) + k + 1;
    Ok(StrongParams {
        k,
        cycles,
        ext_cycles: cycles - k,
        fvs: 12 * cycles * cycles - 27 * cycles + 15,
    })
}

fn guard(k: usize) -> Error {
    Error::ResourceGuard(format!(
        "strong backdoor approximation supports k ≤ {MAX_STRONG_K}, got {k}"
    ))
}

/// A cycle `C_i` shortened through one of its strong external killers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CxCycle {
    /// Index of `C_i` in the packing.
    pub base: usize,
    pub apex: Var,
    /// End clauses of the arc, `u < v`.
    pub u: usize,
    pub v: usize,
    /// The arc of `C_i` from clause `u` to clause `v`, both included.
    pub path: Vec<Node>,
}

impl CxCycle {
    pub fn clauses(&self) -> impl Iterator<Item = usize> + '_ {
        self.path.iter().filter_map(|n| match *n {
            Node::Clause(j) => Some(j),
            Node::Var(_) => None,
        })
    }

    /// No variable of `pool` occurs with opposite signs in two clauses of
    /// the arc unless those clauses are exactly `u` and `v`.
    pub fn is_minimal(&self, g: &IncidenceGraph, pool: &BTreeSet<Var>) -> bool {
        let clauses: Vec<usize> = self.clauses().collect();
        pool.iter().all(|&y| {
            let signs: Vec<(usize, bool)> = clauses
                .iter()
                .filter_map(|&j| g.sign(y, j).map(|s| (j, s)))
                .collect();
            signs.iter().all(|&(a, sa)| {
                signs
                    .iter()
                    .all(|&(b, sb)| sa == sb || (a.min(b), a.max(b)) == (self.u, self.v))
            })
        })
    }
}

/// Arc length, clause pair, killer and arc nodes; the least key wins.
type ArcKey = (usize, usize, usize, Var, Vec<Node>);

/// The shortest arc of `c` between two clauses where some pool variable
/// occurs with opposite signs, or `None` if no pool variable kills `c`
/// that way. Ties go to the smallest `(u, v, x)`, then to the arc whose
/// node sequence is smallest.
pub fn build_cx_cycle(
    g: &IncidenceGraph,
    c: &CycleDescriptor,
    base: usize,
    pool: &BTreeSet<Var>,
) -> Option<CxCycle> {
    let on_cycle: BTreeSet<Var> = c.vars().collect();
    let len = c.len();
    let clause_pos: Vec<(usize, usize)> = c
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(p, n)| match *n {
            Node::Clause(j) => Some((p, j)),
            Node::Var(_) => None,
        })
        .collect();

    let mut best: Option<(ArcKey, CxCycle)> = None;
    for &x in pool.iter().filter(|x| !on_cycle.contains(x)) {
        for &(pu, ju) in &clause_pos {
            for &(pv, jv) in &clause_pos {
                if ju >= jv || g.sign(x, ju).is_none() || g.sign(x, jv).is_none() {
                    continue;
                }
                if g.sign(x, ju) == g.sign(x, jv) {
                    continue;
                }
                // the two arcs from u to v
                let forward: Vec<Node> = (0..=(pv + len - pu) % len)
                    .map(|d| c.nodes[(pu + d) % len])
                    .collect();
                let backward: Vec<Node> = (0..=(pu + len - pv) % len)
                    .map(|d| c.nodes[(pu + len - d) % len])
                    .collect();
                for path in [forward, backward] {
                    let key = (path.len(), ju, jv, x, path.clone());
                    if best.as_ref().is_none_or(|(k, _)| key < *k) {
                        let cx = CxCycle {
                            base,
                            apex: x,
                            u: ju,
                            v: jv,
                            path,
                        };
                        best = Some((key, cx));
                    }
                }
            }
        }
    }
    best.map(|(_, cx)| cx)
}

/// Pool variables other than the apex occurring in `u` and `v` with
/// opposite signs. These are exactly the outside variables killing `Cx`.
pub fn interesting_killers(g: &IncidenceGraph, cx: &CxCycle, pool: &BTreeSet<Var>) -> BTreeSet<Var> {
    pool.iter()
        .copied()
        .filter(|&y| y != cx.apex)
        .filter(|&y| match (g.sign(y, cx.u), g.sign(y, cx.v)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        })
        .collect()
}

/// Applies the first applicable strong rule to one internal choice.
///
/// A backdoor inside `var′` must kill every `Cx_i`; the apex does so
/// internally, so it counts as an interesting killer of `C_i` next to the
/// outside killers of `Cx_i`.
pub fn strong_rule_select(
    g: &IncidenceGraph,
    packing: &[CycleDescriptor],
    choice: &InternalChoice,
    params: &StrongParams,
) -> (StrongRule, BTreeSet<Var>) {
    let pool = &choice.var_prime;
    let mut cxs = Vec::with_capacity(choice.external.len());
    for &i in &choice.external {
        match build_cx_cycle(g, &packing[i], i, pool) {
            Some(cx) => cxs.push(cx),
            None => return (StrongRule::NoCxCycle, BTreeSet::new()),
        }
    }
    let outside: Vec<BTreeSet<Var>> = cxs.iter().map(|cx| interesting_killers(g, cx, pool)).collect();
    if let Some((cx, _)) = cxs.iter().zip(&outside).find(|(_, ys)| ys.is_empty()) {
        return (StrongRule::NoExternalKiller, [cx.apex].into());
    }

    let interesting: Vec<BTreeSet<Var>> = cxs
        .iter()
        .zip(outside)
        .map(|(cx, mut ys)| {
            ys.insert(cx.apex);
            ys
        })
        .collect();

    let half = 1usize << (params.k - 1);
    let mut pairs: BTreeMap<(Var, Var), usize> = BTreeMap::new();
    let mut singles: BTreeMap<Var, usize> = BTreeMap::new();
    for ys in &interesting {
        let ys: Vec<Var> = ys.iter().copied().collect();
        for (a, &y) in ys.iter().enumerate() {
            *singles.entry(y).or_default() += 1;
            for &z in &ys[a + 1..] {
                *pairs.entry((y, z)).or_default() += 1;
            }
        }
    }
    if let Some((&(y, z), _)) = pairs.iter().find(|&(_, &n)| n > half) {
        return (StrongRule::KillingSameCycles, [y, z].into());
    }
    if let Some((&y, _)) = singles.iter().find(|&(_, &n)| n > params.k * half) {
        return (StrongRule::KillingManyCycles, [y].into());
    }
    (StrongRule::TooManyCycles, BTreeSet::new())
}

/// Union of the rule outputs over all internal choices of the first
/// `cycles(k)` cycles of `packing`.
pub fn strong_candidate_set(
    f: &Formula,
    k: usize,
    packing: &[CycleDescriptor],
) -> Result<CandidateSet> {
    let params = strong_params(k)?;
    if packing.len() < params.cycles {
        return Err(Error::InvalidParameter(format!(
            "need {} disjoint cycles, got {}",
            params.cycles,
            packing.len()
        )));
    }
    let packing = &packing[..params.cycles];
    let g = IncidenceGraph::new(f);
    let choices = InternalChoice::all(packing, k, f.universe());
    let firings = par::map(&choices, |choice| {
        let (rule, selected) = strong_rule_select(&g, packing, choice, &params);
        RuleFiring {
            choice: choice.clone(),
            rule: Rule::Strong(rule),
            selected,
        }
    });
    Ok(CandidateSet::from_firings(firings))
}

/// Either a strong backdoor set of size at most `2^k − 1`, or `No` when
/// `f` has no strong backdoor set of size at most `k`.
pub fn detect_strong_approx(f: &Formula, k: usize) -> Result<BackdoorVerdict> {
    detect_strong_approx_logged(f, k, &mut SearchLog::default())
}

pub fn detect_strong_approx_logged(
    f: &Formula,
    k: usize,
    log: &mut SearchLog,
) -> Result<BackdoorVerdict> {
    if k > MAX_STRONG_K {
        return Err(guard(k));
    }
    strong_search(f, k, log)
}

fn strong_search(f: &Formula, k: usize, log: &mut SearchLog) -> Result<BackdoorVerdict> {
    log.nodes += 1;
    let g = IncidenceGraph::new(f);
    if g.is_acyclic() {
        return Ok(BackdoorVerdict::found(BTreeSet::new()));
    }
    if k == 0 {
        return Ok(BackdoorVerdict::No { k });
    }
    let params = strong_params(k)?;
    let packing = match g.disjoint_cycles_or_fvs(params.cycles)? {
        IncidencePacking::Fvs(fvs) => {
            log.note_split(|| Split::Fvs { size: fvs.len() });
            return exact_strong_fallback(f, k);
        }
        IncidencePacking::Cycles(cycles) => cycles,
    };
    log.note_split(|| Split::Packing {
        cycles: packing.clone(),
    });
    let candidates = strong_candidate_set(f, k, &packing)?;
    if log.record_audits {
        log.audits.push(RuleAudit {
            kind: BackdoorKind::Strong,
            formula: f.clone(),
            k,
            packing: packing[..params.cycles].to_vec(),
            firings: candidates.firings.clone(),
        });
    }
    for &x in &candidates.vars {
        let BackdoorVerdict::Found { set: b1, .. } =
            strong_search(&f.apply(&Assignment::single(x, true))?, k - 1, log)?
        else {
            continue;
        };
        let BackdoorVerdict::Found { set: b0, .. } =
            strong_search(&f.apply(&Assignment::single(x, false))?, k - 1, log)?
        else {
            continue;
        };
        let mut set: BTreeSet<Var> = b1.union(&b0).copied().collect();
        set.insert(x);
        return Ok(BackdoorVerdict::found(set));
    }
    Ok(BackdoorVerdict::No { k })
}

/// Exact strong backdoor search over growing variable sets.
///
/// For the current set `B`, the first assignment `τ ∈ 2^B` leaving a cycle
/// is located; every strong backdoor extending `B` must contain a variable
/// of the shortest cycle of `F[τ]` or one occurring with opposite signs in
/// two of its clauses. Sets already explored are skipped.
pub fn exact_strong_fallback(f: &Formula, k: usize) -> Result<BackdoorVerdict> {
    let slit = SlitGraph::new(f);
    let mut seen = HashSet::new();
    Ok(match grow_strong(f, &slit, BTreeSet::new(), k, &mut seen)? {
        Some(set) => BackdoorVerdict::found(set),
        None => BackdoorVerdict::No { k },
    })
}

fn grow_strong(
    f: &Formula,
    slit: &SlitGraph,
    b: BTreeSet<Var>,
    k: usize,
    seen: &mut HashSet<BTreeSet<Var>>,
) -> Result<Option<BTreeSet<Var>>> {
    let vars: Vec<Var> = b.iter().copied().collect();
    let bad = par::find_first(1u64 << vars.len(), |bits| {
        let tau = Assignment::from_bits(&vars, bits);
        (!slit.residual_acyclic(&tau).expect("assignment within universe")).then_some(tau)
    });
    let Some(tau) = bad else {
        return Ok(Some(b));
    };
    if b.len() >= k {
        return Ok(None);
    }
    let residual = f.apply(&tau)?;
    let g = IncidenceGraph::new(&residual);
    let cycle = g.find_cycle(&BTreeSet::new()).expect("residual is cyclic");
    let mut candidates: BTreeSet<Var> = cycle.vars().collect();
    candidates.extend(residual.universe().iter().copied().filter(|&y| {
        let signs: BTreeSet<bool> = cycle.clauses().filter_map(|j| g.sign(y, j)).collect();
        signs.len() == 2
    }));
    for y in candidates {
        let mut next = b.clone();
        next.insert(y);
        if !seen.insert(next.clone()) {
            continue;
        }
        if let Some(found) = grow_strong(f, slit, next, k, seen)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Exact deletion backdoor search: a deletion backdoor contains a variable
/// of every cycle, so branching on the variables of a shortest cycle to
/// depth `k` is complete.
pub fn detect_deletion(f: &Formula, k: usize) -> Result<BackdoorVerdict> {
    let mut failed = HashSet::new();
    Ok(match delete_branch(f, k, &mut failed)? {
        Some(set) => BackdoorVerdict::found(set),
        None => BackdoorVerdict::No { k },
    })
}

fn delete_branch(
    f: &Formula,
    k: usize,
    failed: &mut HashSet<(Vec<Clause>, usize)>,
) -> Result<Option<BTreeSet<Var>>> {
    let Some(cycle) = IncidenceGraph::new(f).find_cycle(&BTreeSet::new()) else {
        return Ok(Some(BTreeSet::new()));
    };
    if k == 0 {
        return Ok(None);
    }
    let key = (f.clauses().to_vec(), k);
    if failed.contains(&key) {
        return Ok(None);
    }
    for x in cycle.vars().collect::<BTreeSet<_>>() {
        if let Some(mut set) = delete_branch(&f.delete_vars(&[x].into())?, k - 1, failed)? {
            set.insert(x);
            return Ok(Some(set));
        }
    }
    failed.insert(key);
    Ok(None)
}

/// Model count of `f` over `universe` as the sum of the acyclic counts of
/// `F[τ]` over all `τ ∈ 2^B`, for a strong backdoor `B`.
pub fn count_via_backdoor(
    f: &Formula,
    b: &BTreeSet<Var>,
    universe: &BTreeSet<Var>,
) -> Result<ModelCount> {
    if let Some(&v) = b.iter().chain(f.universe()).find(|v| !universe.contains(v)) {
        return Err(Error::OutsideUniverse(v));
    }
    if b.len() > MAX_VERIFY_VARS {
        return Err(Error::ResourceGuard(format!(
            "backdoor set of {} variables exceeds the counting limit of {MAX_VERIFY_VARS}",
            b.len()
        )));
    }
    if !is_strong_bds(f, b)? {
        return Err(Error::NotStrongBackdoor(b.iter().copied().collect()));
    }
    let rest: BTreeSet<Var> = universe.difference(b).copied().collect();
    let vars: Vec<Var> = b.iter().copied().collect();
    let assignments: Vec<u64> = (0..1u64 << vars.len()).collect();
    let parts = par::map(&assignments, |&bits| {
        let residual = f.apply(&Assignment::from_bits(&vars, bits))?;
        count_acyclic_models(&residual, &rest).map(|c| c.count)
    });
    let mut count = BigUint::default();
    for part in parts {
        count += part?;
    }
    Ok(ModelCount {
        count,
        universe_size: universe.len(),
    })
}

/// Counts the models of `f` over its universe through the smallest strong
/// backdoor the approximation finds, trying budgets `0, 1, …` in turn.
pub fn count_models(f: &Formula) -> Result<(BTreeSet<Var>, ModelCount)> {
    for k in 0..=MAX_STRONG_K {
        if let BackdoorVerdict::Found { set, .. } = detect_strong_approx(f, k)? {
            let count = count_via_backdoor(f, &set, f.universe())?;
            return Ok((set, count));
        }
    }
    Err(guard(MAX_STRONG_K + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_grid;

    fn v(i: u32) -> Var {
        Var::from_id(i)
    }

    fn set(ids: &[u32]) -> BTreeSet<Var> {
        ids.iter().map(|&i| v(i)).collect()
    }

    fn triangle() -> Formula {
        Formula::from_ints(&[&[1, 2], &[-1, 2], &[1, -2]]).unwrap()
    }

    fn universe(n: u32) -> BTreeSet<Var> {
        (1..=n).map(v).collect()
    }

    #[test]
    fn params() {
        let p = strong_params(1).unwrap();
        assert_eq!((p.cycles, p.ext_cycles, p.fvs), (3, 2, 42));
        let p = strong_params(2).unwrap();
        assert_eq!((p.cycles, p.ext_cycles, p.fvs), (11, 9, 1170));
        assert_eq!(strong_params(3).unwrap().cycles, 40);
        assert_eq!(strong_params(6).unwrap().cycles, 1159);
        assert!(strong_params(0).is_err());
        assert!(strong_params(7).unwrap_err().is_resource_guard());
    }

    #[test]
    fn cx_on_a_square() {
        // a(1) – c0 – b(2) – c1, with x(3) ∈ c0 and ¬x ∈ c1
        let f = Formula::from_ints(&[&[1, 2, 3], &[1, 2, -3]]).unwrap();
        let g = IncidenceGraph::new(&f);
        let c = g.find_cycle(&[Node::Var(v(3))].into()).unwrap();
        assert_eq!(
            c.nodes,
            vec![Node::Var(v(1)), Node::Clause(0), Node::Var(v(2)), Node::Clause(1)]
        );
        let cx = build_cx_cycle(&g, &c, 0, &set(&[3])).unwrap();
        assert_eq!((cx.apex, cx.u, cx.v), (v(3), 0, 1));
        assert_eq!(cx.path, vec![Node::Clause(0), Node::Var(v(1)), Node::Clause(1)]);
        assert!(cx.is_minimal(&g, &set(&[3])));
        assert_eq!(build_cx_cycle(&g, &c, 0, &BTreeSet::new()), None);
    }

    #[test]
    fn cx_prefers_the_inner_pair() {
        // six-clause ring over 1..6; x(7) kills at c0/c3, y(8) at c1/c2
        let mut clauses: Vec<Vec<i64>> = (0..6).map(|j| vec![1 + j, 1 + (j + 1) % 6]).collect();
        clauses[0].push(7);
        clauses[3].push(-7);
        clauses[1].push(8);
        clauses[2].push(-8);
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        let f = Formula::from_ints(&refs).unwrap();
        let g = IncidenceGraph::new(&f);
        let ring = CycleDescriptor {
            nodes: (0..6)
                .flat_map(|j| [Node::Var(v(1 + j)), Node::Clause(j as usize)])
                .collect(),
        };
        assert!(g.is_valid_cycle(&ring));
        let pool = set(&[7, 8]);
        let cx = build_cx_cycle(&g, &ring, 0, &pool).unwrap();
        assert_eq!((cx.apex, cx.u, cx.v), (v(8), 1, 2));
        assert_eq!(cx.path.len(), 3);
        assert!(cx.is_minimal(&g, &pool));
    }

    #[test]
    fn interesting_killer_signs() {
        // square a(1)–c0–b(2)–c1; x(3) apex; y(4) opposite, z(5) same sign,
        // w(6) only in c0
        let f = Formula::from_ints(&[&[1, 2, 3, 4, 5, 6], &[1, 2, -3, -4, 5]]).unwrap();
        let g = IncidenceGraph::new(&f);
        let c = CycleDescriptor {
            nodes: vec![Node::Var(v(1)), Node::Clause(0), Node::Var(v(2)), Node::Clause(1)],
        };
        let pool = set(&[3, 4, 5, 6]);
        let cx = build_cx_cycle(&g, &c, 0, &pool).unwrap();
        assert_eq!(cx.apex, v(3));
        assert_eq!(interesting_killers(&g, &cx, &pool), set(&[4]));
    }

    /// Gadget `i` on `a, b`: `(a ∨ b ∨ K) ∧ (a ∨ ¬b ∨ ¬K)` for its killers
    /// `K`, an incidence 4-cycle that each killer cuts under both values.
    fn gadgets(killers: &[Vec<i64>]) -> Formula {
        let mut clauses: Vec<Vec<i64>> = Vec::new();
        for (i, ks) in killers.iter().enumerate() {
            let a = 2 * i as i64 + 1;
            let mut c0 = vec![a, a + 1];
            let mut c1 = vec![a, -(a + 1)];
            c0.extend(ks.iter().copied());
            c1.extend(ks.iter().map(|k| -k));
            clauses.push(c0);
            clauses.push(c1);
        }
        let refs: Vec<&[i64]> = clauses.iter().map(Vec::as_slice).collect();
        Formula::from_ints(&refs).unwrap()
    }

    #[test]
    fn shared_killer_fires_s1() {
        let f = gadgets(&[vec![7], vec![7], vec![7]]);
        let g = IncidenceGraph::new(&f);
        let IncidencePacking::Cycles(packing) = g.disjoint_cycles_or_fvs(3).unwrap() else {
            panic!("expected cycles");
        };
        let s = strong_candidate_set(&f, 1, &packing).unwrap();
        assert!(s
            .firings
            .iter()
            .all(|f| f.rule == Rule::Strong(StrongRule::NoExternalKiller)));
        assert_eq!(s.vars, set(&[7]));
        assert_eq!(detect_strong_approx(&f, 1).unwrap(), BackdoorVerdict::found(set(&[7])));
    }

    #[test]
    fn private_killers_fire_s4() {
        let f = gadgets(&[vec![7, 8], vec![9, 10], vec![11, 12]]);
        let g = IncidenceGraph::new(&f);
        let IncidencePacking::Cycles(packing) = g.disjoint_cycles_or_fvs(3).unwrap() else {
            panic!("expected cycles");
        };
        let s = strong_candidate_set(&f, 1, &packing).unwrap();
        assert!(s.vars.is_empty());
        assert!(s
            .firings
            .iter()
            .all(|f| f.rule == Rule::Strong(StrongRule::TooManyCycles)));
        assert_eq!(detect_strong_approx(&f, 1).unwrap(), BackdoorVerdict::No { k: 1 });
    }

    #[test]
    fn shared_pair_fires_s2() {
        let f = gadgets(&[vec![7, 8], vec![7, 8], vec![7, 8]]);
        let g = IncidenceGraph::new(&f);
        let IncidencePacking::Cycles(packing) = g.disjoint_cycles_or_fvs(3).unwrap() else {
            panic!("expected cycles");
        };
        let s = strong_candidate_set(&f, 1, &packing).unwrap();
        assert!(s
            .firings
            .iter()
            .all(|f| f.rule == Rule::Strong(StrongRule::KillingSameCycles)));
        assert_eq!(s.vars, set(&[7, 8]));
        let verdict = detect_strong_approx(&f, 1).unwrap();
        assert_eq!(verdict, BackdoorVerdict::found(set(&[7])));
    }

    #[test]
    fn grid3() {
        let f = gen_grid(3).unwrap();
        assert_eq!(detect_strong_approx(&f, 1).unwrap(), BackdoorVerdict::found(set(&[10])));
        assert_eq!(detect_deletion(&f, 1).unwrap(), BackdoorVerdict::No { k: 1 });
    }

    #[test]
    fn triangle_examples() {
        let tri = triangle();
        let b = exact_strong_fallback(&tri, 1).unwrap();
        assert!(b == BackdoorVerdict::found(set(&[1])) || b == BackdoorVerdict::found(set(&[2])));
        assert_eq!(exact_strong_fallback(&tri, 0).unwrap(), BackdoorVerdict::No { k: 0 });
        let acyclic = Formula::from_ints(&[&[1, 2]]).unwrap();
        assert_eq!(exact_strong_fallback(&acyclic, 0).unwrap(), BackdoorVerdict::found(BTreeSet::new()));
        assert_eq!(detect_strong_approx(&acyclic, 0).unwrap(), BackdoorVerdict::found(BTreeSet::new()));
        let d = detect_deletion(&tri, 1).unwrap();
        assert!(d == BackdoorVerdict::found(set(&[1])) || d == BackdoorVerdict::found(set(&[2])));
        assert_eq!(detect_deletion(&acyclic, 0).unwrap(), BackdoorVerdict::found(BTreeSet::new()));
    }

    #[test]
    fn disjoint_gadgets_need_two() {
        let f = gadgets(&[vec![], vec![]]);
        assert_eq!(detect_strong_approx(&f, 1).unwrap(), BackdoorVerdict::No { k: 1 });
        let found = detect_strong_approx(&f, 2).unwrap();
        assert!(is_strong_bds(&f, found.set().unwrap()).unwrap());
    }

    #[test]
    fn counting() {
        let tri = triangle();
        let c = count_via_backdoor(&tri, &set(&[1]), &universe(2)).unwrap();
        assert_eq!(c.count, 1u32.into());
        assert!(matches!(
            count_via_backdoor(&tri, &BTreeSet::new(), &universe(2)),
            Err(Error::NotStrongBackdoor(_))
        ));
        let acyclic = Formula::from_ints(&[&[1, 2], &[-2, 3]]).unwrap();
        assert_eq!(
            count_via_backdoor(&acyclic, &BTreeSet::new(), &universe(4)).unwrap(),
            count_acyclic_models(&acyclic, &universe(4)).unwrap()
        );
        let (b, c) = count_models(&gen_grid(2).unwrap()).unwrap();
        assert_eq!(b, set(&[5]));
        // x = 1 leaves the vertical clauses (a ∨ b) on disjoint pairs: 3·3;
        // x = 0 the horizontal ones: 3·3
        assert_eq!(c.count, 18u32.into());
    }

    #[test]
    fn guard() {
        let tri = triangle();
        assert!(detect_strong_approx(&tri, 7).unwrap_err().is_resource_guard());
    }
}
