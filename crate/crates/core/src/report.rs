//! Machine-readable run reports.
//!
//! The JSON layout is versioned by the `schema` field and described by
//! `schema/run-report.schema.json` next to this crate's manifest.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::acyclic::ModelCount;
use crate::backdoor::{BackdoorKind, BackdoorVerdict};
use crate::formula::{Assignment, Formula, Var};
use crate::graph::{CycleDescriptor, IncidenceGraph};
use crate::oracle::OracleReport;
use crate::search::{SearchLog, Split};

pub const SCHEMA_VERSION: u32 = 1;

/// The JSON schema for [`RunReport`].
pub const RUN_REPORT_SCHEMA: &str = include_str!("../schema/run-report.schema.json");

/// Hex SHA-256 of the raw input.
pub fn digest(input: &[u8]) -> String {
    hex::encode(Sha256::digest(input))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Found,
    No,
    True,
    False,
}

impl Verdict {
    /// Process exit code for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Found | Verdict::True => 0,
            Verdict::No | Verdict::False => 1,
        }
    }
}

impl From<&BackdoorVerdict> for Verdict {
    fn from(v: &BackdoorVerdict) -> Verdict {
        if v.is_found() {
            Verdict::Found
        } else {
            Verdict::No
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<BackdoorKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statistics {
    /// Variables in the universe.
    pub n: usize,
    /// Clauses.
    pub m: usize,
    /// Total number of literal occurrences.
    pub length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packing: Option<Vec<CycleDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fvs_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acyclic: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_clause_width: Option<usize>,
}

impl Statistics {
    pub fn of(f: &Formula) -> Statistics {
        Statistics {
            n: f.num_vars(),
            m: f.num_clauses(),
            length: f.length(),
            ..Statistics::default()
        }
    }

    pub fn with_log(mut self, log: &SearchLog) -> Statistics {
        match &log.first_split {
            Some(Split::Packing { cycles }) => {
                self.packing_size = Some(cycles.len());
                self.packing = Some(cycles.clone());
            }
            Some(Split::Fvs { size }) => self.fvs_size = Some(*size),
            None => {}
        }
        self.search_nodes = Some(log.nodes);
        self
    }

    /// Adds acyclicity and width, as reported by `stats`.
    pub fn detailed(mut self, f: &Formula) -> Statistics {
        self.acyclic = Some(IncidenceGraph::new(f).is_acyclic());
        self.max_clause_width = Some(f.max_clause_width());
        self
    }
}

/// One command's outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub input_digest: String,
    pub parameters: Parameters,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backdoor: Option<BTreeSet<Var>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Assignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_count: Option<ModelCount>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub statistics: Statistics,
    /// Omitted when timing is disabled, so that reports are reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, input_digest: String, statistics: Statistics) -> RunReport {
        RunReport {
            schema: SCHEMA_VERSION,
            command: command.into(),
            input_digest,
            parameters: Parameters::default(),
            verdict: None,
            backdoor: None,
            witness: None,
            model_count: None,
            oracle: None,
            statistics,
            wall_time_ms: None,
        }
    }

    pub fn with_verdict(mut self, v: &BackdoorVerdict) -> RunReport {
        self.verdict = Some(v.into());
        self.backdoor = v.set().cloned();
        self.witness = v.witness().cloned();
        self
    }

    /// Checks that the optional fields fit the command: a count exactly for
    /// `count`, witnesses only for weak backdoors, a backdoor only with a
    /// positive verdict.
    pub fn is_consistent(&self) -> bool {
        let counting = self.command == "count";
        let weak = self.parameters.kind == Some(BackdoorKind::Weak);
        self.model_count.is_some() == counting
            && (self.witness.is_none() || weak)
            && (self.backdoor.is_none()
                || matches!(self.verdict, Some(Verdict::Found | Verdict::True)))
            && self.oracle.is_some() == (self.command == "oracle")
            && self.schema == SCHEMA_VERSION
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
