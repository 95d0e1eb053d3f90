//! Bounded polynomial threshold circuits, decision trees, restrictions and
//! the switching and locality experiments built on them.

pub mod anf;
pub mod bptf;
pub mod canonical;
pub mod dtree;
pub mod restriction;
pub mod turan;

pub use anf::{anf_from_truth_table, Anf};
pub use bptf::{BptfCircuit, BptfGate, GateKind, Wire};
pub use canonical::{canonical_decision_tree, canonical_depth, DepthTwo, Literal, TWitness};
pub use dtree::{dt_to_anf, DecisionForest, DecisionTree};
pub use restriction::{sample_restriction, Restriction};
