//! Backdoor sets to acyclic CNF formulas.
//!
//! A formula is acyclic when its incidence graph (variables on one side,
//! clauses on the other) is a forest; such formulas are solved and counted
//! by dynamic programming. A backdoor set is a small set of variables that
//! makes a formula acyclic:
//!
//! * **weak**: some assignment to it leaves an acyclic satisfiable formula;
//! * **strong**: every assignment to it leaves an acyclic formula;
//! * **deletion**: removing its variables leaves an acyclic formula.
//!
//! [`weak::detect_weak`] decides weak backdoors of size `k` for bounded
//! clause width, [`strong::detect_strong_approx`] finds strong backdoors of
//! size at most `2^k − 1` or proves there is none of size `k`, and
//! [`strong::count_via_backdoor`] counts models through a strong backdoor.
//!
//! ```
//! use acyclic_backdoors::{generators::gen_grid, strong::detect_strong_approx, Var};
//!
//! let grid = gen_grid(3).unwrap();
//! let verdict = detect_strong_approx(&grid, 1).unwrap();
//! assert_eq!(verdict.set(), Some(&[Var::from_id(10)].into()));
//! ```

pub mod acyclic;
pub mod backdoor;
pub mod error;
pub mod formula;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod search;
pub mod strong;
pub mod weak;

mod par;

pub use acyclic::{count_acyclic_models, is_acyclic_satisfiable, solve_acyclic_sat, ModelCount};
pub use backdoor::{
    is_deletion_bds, is_strong_bds, is_weak_bds, BackdoorKind, BackdoorVerdict,
};
pub use error::{Error, Result};
pub use formula::{Assignment, Clause, Formula, Literal, Var};
pub use graph::{CycleDescriptor, IncidenceGraph, Node};
pub use strong::{count_via_backdoor, detect_deletion, detect_strong_approx};
pub use weak::detect_weak;
