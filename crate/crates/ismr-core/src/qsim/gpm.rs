//! Generalized poor-man's cat states `p^{−1/2} Σ_i |z^{+i}⟩` prepared on a tree.
//!
//! Layout: vertex qupits `0..n`, then one ancilla per edge. Each edge ancilla
//! accumulates `−(v_a + v_b)` and is measured; vertices at odd depth are then
//! inverted so every vertex carries `z_u + i` for a shared uniform `i`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::graph::GraphSpec;
use super::state::{Gate, QupitState};
use crate::field::{DitString, Prime};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GpmRecord {
    /// State on the `n` vertex qupits.
    pub state: QupitState,
    pub edge_outcomes: DitString,
    pub reference: DitString,
}

/// Gates preparing the pre-measurement state on `n + |E|` qupits.
pub fn gpm_preparation_gates(p: Prime, graph: &GraphSpec) -> Vec<Gate> {
    let n = graph.n();
    let mut gates: Vec<Gate> = (0..n).map(|t| Gate::Fourier { t }).collect();
    for (k, &(a, b)) in graph.edges().iter().enumerate() {
        gates.push(Gate::Sum { c: a, t: n + k, a: p.get() - 1 });
        gates.push(Gate::Sum { c: b, t: n + k, a: p.get() - 1 });
    }
    gates
}

/// Vertices that receive the INV correction.
pub fn inv_gates(graph: &GraphSpec) -> Vec<Gate> {
    (0..graph.n()).filter(|&u| graph.depth(u) % 2 == 1).map(|t| Gate::Inv { t }).collect()
}

/// Runs the preparation, samples the edge measurements and applies INV.
pub fn build_gpm_state<R: Rng + ?Sized>(
    p: Prime,
    graph: &GraphSpec,
    rng: &mut R,
) -> Result<GpmRecord> {
    let n = graph.n();
    let m = graph.edges().len();
    let mut s = QupitState::zero(p, n + m)?;
    for g in gpm_preparation_gates(p, graph) {
        s.apply_gate(&g)?;
    }
    let mut e = Vec::with_capacity(m);
    for k in 0..m {
        e.push(s.measure(n + k, rng)?);
    }
    let fixed: Vec<(usize, u8)> = e.iter().enumerate().map(|(k, &v)| (n + k, v)).collect();
    let mut state = s.extract(&fixed)?;
    for g in inv_gates(graph) {
        state.apply_gate(&g)?;
    }
    let edge_outcomes = DitString::new(p, e)?;
    let reference = gpm_reference_string(p, graph, &edge_outcomes, 0)?;
    Ok(GpmRecord { state, edge_outcomes, reference })
}

/// Reference string from edge outcomes: walking the path from `u` to the root,
/// the edge whose root-side endpoint sits at distance `d` from `u` contributes
/// `(−1)^{d + depth(u)} e`, plus the root value.
pub fn gpm_reference_string(
    p: Prime,
    graph: &GraphSpec,
    e: &DitString,
    root_value: u32,
) -> Result<DitString> {
    if e.len() != graph.edges().len() {
        return Err(Error::LengthMismatch { expected: graph.edges().len(), got: e.len() });
    }
    let mut z = Vec::with_capacity(graph.n());
    for u in 0..graph.n() {
        let du = graph.depth(u);
        let mut acc = root_value as i64;
        for (d0, k) in graph.path_to_root(u).into_iter().enumerate() {
            let v = e.digits()[k] as i64;
            acc += if (d0 + 1 + du).is_multiple_of(2) { v } else { -v };
        }
        z.push(p.reduce(acc) as u8);
    }
    DitString::new(p, z)
}

/// Edge outcomes consistent with a reference string (inverse of the above).
pub fn gpm_edges_from_reference(p: Prime, graph: &GraphSpec, z: &DitString) -> Result<DitString> {
    if z.len() != graph.n() {
        return Err(Error::LengthMismatch { expected: graph.n(), got: z.len() });
    }
    let mut e = alloc::vec![0u8; graph.edges().len()];
    for (k, &(a, b)) in graph.edges().iter().enumerate() {
        let (par, child) = if graph.parent(b) == Some(a) { (a, b) } else { (b, a) };
        let diff = z.digits()[child] as i64 - z.digits()[par] as i64;
        let v = if graph.depth(par).is_multiple_of(2) { diff } else { -diff };
        e[k] = p.reduce(v) as u8;
    }
    DitString::new(p, e)
}

/// `p^{−1/2} Σ_i |z^{+i}⟩`.
pub fn gpm_state_from_reference(z: &DitString) -> Result<QupitState> {
    let p = z.p();
    let mut s = QupitState::zero(p, z.len())?;
    let amp = Complex64::new(1.0 / libm::sqrt(p.us() as f64), 0.0);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); s.amplitudes().len()];
    for i in 0..p.get() {
        let shifted: Vec<u8> = z.digits().iter().map(|&d| p.add(d as u32, i) as u8).collect();
        amps[s.index_of(&shifted)?] = amp;
    }
    s = QupitState::from_amplitudes(p, z.len(), amps)?;
    Ok(s)
}
