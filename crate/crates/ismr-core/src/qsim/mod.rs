//! Dense qupit simulation, cat-state preparation on trees, the ISMR circuits
//! and the non-adaptive rotation gadget.

pub mod circuits;
pub mod gadget;
pub mod gpm;
pub mod graph;
pub mod state;

pub use circuits::{
    analytic_shift_distribution, run_qubit_php_circuit, run_qupit_ismr_circuit,
};
pub use gadget::{delta_vector, nonadaptive_teleport_rz, run_clifford_plus_t_circuit, t_magic_state};
pub use gpm::{build_gpm_state, gpm_reference_string, GpmRecord};
pub use graph::{GraphKind, GraphSpec};
pub use state::{Gate, QupitState};
