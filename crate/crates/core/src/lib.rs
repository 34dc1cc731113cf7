//! Satisfiability algorithms for sparse depth-two threshold circuits,
//! small-row integer programs and depth-two symmetric-gate circuits.
//!
//! * [`vecdom`]: dominating-pair search between two vector sets.
//! * [`splitlist`]: feasibility of inequality systems by split and list.
//! * [`sparse_sat`]: the random-restriction solver for threshold circuits.
//! * [`symsat`]: symmetric-gate circuits via value guessing and subset sum.
//! * [`oracle`]: brute-force reference solvers and instance generators.

pub mod bench;
pub mod counters;
pub mod error;
pub mod format;
pub mod model;
pub mod oracle;
mod parallel;
pub mod sparse_sat;
pub mod splitlist;
pub mod symsat;
pub mod vecdom;

pub use counters::WorkCounters;
pub use error::{Error, Result};
pub use model::{
    evaluate, simplify, wire_stats, Assignment, Restriction, ThresholdCircuit, ThresholdGate,
    WireStats,
};
pub use oracle::{FaninDist, GenKind, GenSpec, Instance};
pub use splitlist::{IneqSystem, Relation, Row};
pub use symsat::{EqRow, EqSystem, Predicate, SymmetricCircuit, SymmetricGate};
pub use vecdom::{DominationInstance, TaggedVector};
