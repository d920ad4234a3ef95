//! Bookkeeping shared by the weak and strong detectors: internal-kill
//! choices over a cycle packing, rule firings and the search log.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::backdoor::BackdoorKind;
use crate::formula::{Formula, Var};
use crate::graph::CycleDescriptor;

/// One way of choosing which packed cycles a backdoor may kill internally.
///
/// The remaining cycles (`external`, the C′ list) must be killed from
/// outside, so only variables off those cycles (`var_prime`) are eligible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalChoice {
    pub internal: Vec<usize>,
    pub external: Vec<usize>,
    pub var_prime: BTreeSet<Var>,
}

impl InternalChoice {
    pub fn new(
        packing: &[CycleDescriptor],
        internal: Vec<usize>,
        universe: &BTreeSet<Var>,
    ) -> InternalChoice {
        let external: Vec<usize> = (0..packing.len()).filter(|i| !internal.contains(i)).collect();
        let on_external: BTreeSet<Var> = external.iter().flat_map(|&i| packing[i].vars()).collect();
        let var_prime = universe.difference(&on_external).copied().collect();
        InternalChoice {
            internal,
            external,
            var_prime,
        }
    }

    /// All `C(packing.len(), k)` choices, in lexicographic order of the
    /// internal index sets.
    pub fn all(
        packing: &[CycleDescriptor],
        k: usize,
        universe: &BTreeSet<Var>,
    ) -> Vec<InternalChoice> {
        (0..packing.len())
            .combinations(k)
            .map(|internal| InternalChoice::new(packing, internal, universe))
            .collect()
    }
}

/// Rules of the weak detector, in application order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeakRule {
    NoExternalKiller,
    MultiKillerUnsupported,
    MultiKillerSupported,
    LargeOverlap,
    SmallOverlap,
}

/// Rules of the strong detector, in application order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrongRule {
    /// A C′-cycle has no strong external killer at all, so no Cx-cycle
    /// exists for it and nothing in `var′` can kill it.
    NoCxCycle,
    NoExternalKiller,
    KillingSameCycles,
    KillingManyCycles,
    TooManyCycles,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rule {
    Weak(WeakRule),
    Strong(StrongRule),
}

/// The rule that produced the selection set for one internal choice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleFiring {
    pub choice: InternalChoice,
    pub rule: Rule,
    pub selected: BTreeSet<Var>,
}

/// Result of a candidate-set computation: the union `S*` and the rule
/// applied for every internal choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub vars: BTreeSet<Var>,
    pub firings: Vec<RuleFiring>,
}

impl CandidateSet {
    pub(crate) fn from_firings(firings: Vec<RuleFiring>) -> CandidateSet {
        let vars = firings.iter().flat_map(|f| f.selected.iter().copied()).collect();
        CandidateSet { vars, firings }
    }
}

/// Rule firings of one candidate-set call together with the formula and
/// budget they were computed for.
#[derive(Clone, Debug)]
pub struct RuleAudit {
    pub kind: BackdoorKind,
    pub formula: Formula,
    pub k: usize,
    pub packing: Vec<CycleDescriptor>,
    pub firings: Vec<RuleFiring>,
}

/// How the first dichotomy call of a detection run was resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "lowercase")]
pub enum Split {
    Packing { cycles: Vec<CycleDescriptor> },
    Fvs { size: usize },
}

/// Optional trace of a detection run.
#[derive(Clone, Debug, Default)]
pub struct SearchLog {
    /// Keep a [`RuleAudit`] for every candidate-set computation.
    pub record_audits: bool,
    pub audits: Vec<RuleAudit>,
    pub first_split: Option<Split>,
    /// Number of search nodes visited.
    pub nodes: usize,
}

impl SearchLog {
    pub fn recording() -> SearchLog {
        SearchLog {
            record_audits: true,
            ..SearchLog::default()
        }
    }

    pub(crate) fn note_split(&mut self, split: impl FnOnce() -> Split) {
        if self.first_split.is_none() {
            self.first_split = Some(split());
        }
    }
}
