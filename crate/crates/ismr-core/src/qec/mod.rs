//! Qupit planar surface code: Pauli algebra, noise, syndromes and HDRG
//! decoding.

pub mod hdrg;
pub mod lattice;
pub mod noise;
pub mod pauli;

pub use hdrg::{
    hdrg_decode, is_logical_failure, logical_z_measure_decoded, monte_carlo_failure, Cluster, FailureEstimate,
};
pub use lattice::{CheckKind, SurfaceLattice, Syndrome};
pub use noise::{sample_local_stochastic, NoiseSpec};
pub use pauli::{conjugate_pauli_through_clifford, PauliOperator};
