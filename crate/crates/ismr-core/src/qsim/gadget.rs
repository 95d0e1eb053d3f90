//! Rotation by `2π/p²` through a consumed advice state, with no adaptive
//! correction. The leftover shift and phases are pushed into the classical
//! post-processing.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::circuits::{correction_dits, correlation_of_law, rotation_and_readout_gates};
use super::gpm::build_gpm_state;
use super::graph::GraphSpec;
use super::state::{mat, sample_index, Gate, QupitState};
use crate::field::{DitString, Prime};
use crate::ismr::ismr_residue;
use crate::{Error, Result};

/// `R_Z(2π/p²) F|0⟩ = p^{−1/2} Σ_j e^{2πij/p²}|j⟩`.
pub fn t_magic_state(p: Prime) -> QupitState {
    let mut s = QupitState::zero(p, 1).expect("single qupit fits");
    s.apply_gate(&Gate::Fourier { t: 0 }).expect("valid target");
    s.apply_gate(&Gate::Rz { t: 0, a: 1 }).expect("valid target");
    s
}

/// Every outcome of the gadget on `target`: `(c, probability, output state)`.
/// The output keeps the original register layout with the advice qupit moved
/// into the target slot.
pub fn teleport_branches(state: &QupitState, target: usize) -> Result<Vec<(u8, f64, QupitState)>> {
    let n = state.n();
    if target >= n {
        return Err(Error::TargetOutOfRange { target, n });
    }
    let p = state.p();
    let mut joint = state.tensor(&t_magic_state(p))?;
    joint.apply_gate(&Gate::Inv { t: target })?;
    joint.apply_gate(&Gate::Sum { c: n, t: target, a: 1 })?;
    let probs = joint.marginal(target)?;
    let mut out = Vec::with_capacity(p.us());
    for (c, &pr) in probs.iter().enumerate() {
        if pr <= 1e-15 {
            continue;
        }
        out.push((c as u8, pr, collapse_into_target(&joint, target, c as u8)?));
    }
    Ok(out)
}

fn collapse_into_target(joint: &QupitState, target: usize, c: u8) -> Result<QupitState> {
    let p = joint.p();
    let n = joint.n() - 1;
    let mut amps = vec![Complex64::new(0.0, 0.0); p.us().pow(n as u32)];
    let probe = QupitState::zero(p, n)?;
    for (idx, a) in joint.amplitudes().iter().enumerate() {
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let d = joint.digits_of(idx);
        if d[target] != c {
            continue;
        }
        let mut e = d[..n].to_vec();
        e[target] = d[n];
        amps[probe.index_of(&e)?] += a;
    }
    QupitState::from_amplitudes(p, n, amps)
}

/// Samples the gadget; the output register carries `R_Z(2π/p²) X^c|ψ⟩`.
pub fn nonadaptive_teleport_rz<R: Rng + ?Sized>(
    state: &QupitState,
    target: usize,
    rng: &mut R,
) -> Result<(QupitState, u8)> {
    let mut branches = teleport_branches(state, target)?;
    let probs: Vec<f64> = branches.iter().map(|b| b.1).collect();
    let k = sample_index(&probs, rng);
    let (c, _, s) = branches.swap_remove(k);
    Ok((s, c))
}

/// `(R X^{−c} R†)† = R X^c R†` with `R = diag(e^{iφj})`, `φ = 2π/p²`.
pub fn residual_reference(p: Prime, c: u32, phi: f64) -> mat::Mat {
    let pu = p.us();
    let r = mat::rz(pu, phi);
    let xc = mat::shift(pu, c as usize % pu);
    let inner = mat::mul(&mat::mul(&r, &mat::dagger(&xc, pu), pu), &mat::dagger(&r, pu), pu);
    mat::dagger(&inner, pu)
}

/// `X^c · GRz(θ₁) · GRzSet(θ₂, {p−c, …, p−1})`.
pub fn residual_product(p: Prime, c: u32, theta1: f64, theta2: f64) -> mat::Mat {
    let pu = p.us();
    let set: Vec<u32> = (p.get() - c..p.get()).collect();
    mat::mul(
        &mat::mul(&mat::shift(pu, c as usize % pu), &mat::global(pu, theta1), pu),
        &mat::phase_on_set(pu, theta2, &set),
        pu,
    )
}

/// Largest entrywise gap between the residual product with
/// `θ₁ = 2πc/p²`, `θ₂ = −2π/p` and the conjugated-shift reference.
pub fn residual_identity_error(p: Prime, c: u32) -> f64 {
    let phi = core::f64::consts::TAU / (p.get() * p.get()) as f64;
    let lhs = residual_product(p, c, phi * c as f64, -core::f64::consts::TAU / p.get() as f64);
    mat::max_diff(&lhs, &residual_reference(p, c, phi))
}

/// Same identity with both signs flipped, against `R = diag(e^{−iφj})`.
pub fn residual_identity_error_conjugate(p: Prime, c: u32) -> f64 {
    let phi = core::f64::consts::TAU / (p.get() * p.get()) as f64;
    let lhs = residual_product(p, c, -phi * c as f64, core::f64::consts::TAU / p.get() as f64);
    mat::max_diff(&lhs, &residual_reference(p, c, -phi))
}

/// Bit `i` is 1 iff `a_i = b`, computed as `((a_i − b)^{p−1} − 1)^{p−1}`.
pub fn delta_vector(a: &DitString, b: u32) -> Vec<u8> {
    let p = a.p();
    a.digits()
        .iter()
        .map(|&ai| {
            let d = p.pow(p.sub(ai as u32, b % p.get()), p.get() - 1);
            p.pow(p.sub(d, 1), p.get() - 1) as u8
        })
        .collect()
}

/// Extra dits accounting for the gadget shifts: on each support vertex,
/// `δ(z_u, p−1)` and `(p−1)·δ(c_u, j)·δ(z_u, p−1−j)` for every `j`. Their sum
/// turns `⟨x,(z^{+1})^{p−1}⟩` into `⟨x,(z'^{+1})^{p−1}⟩` with `z' = z + c`.
pub fn teleport_correction_dits(p: Prime, x: &[u8], z: &DitString, c: &DitString) -> Result<Vec<u8>> {
    if z.len() != x.len() || c.len() != x.len() {
        return Err(Error::LengthMismatch { expected: x.len(), got: z.len().min(c.len()) });
    }
    let top = delta_vector(z, p.get() - 1);
    let dc: Vec<Vec<u8>> = (0..p.get()).map(|j| delta_vector(c, j)).collect();
    let dz: Vec<Vec<u8>> = (0..p.get()).map(|j| delta_vector(z, p.get() - 1 - j)).collect();
    let mut out = Vec::new();
    for u in (0..x.len()).filter(|&u| x[u] == 1) {
        out.push(top[u]);
        for j in 0..p.us() {
            out.push((dc[j][u] * dz[j][u]) * (p.get() - 1) as u8);
        }
    }
    Ok(out)
}

/// Like the direct qupit circuit, but each rotation goes through the gadget
/// and the correction string carries the gadget terms.
pub fn run_clifford_plus_t_circuit<R: Rng + ?Sized>(
    p: Prime,
    x: &[u8],
    graph: &GraphSpec,
    rng: &mut R,
) -> Result<(DitString, DitString)> {
    ismr_residue(p, x)?;
    if x.len() != graph.n() {
        return Err(Error::LengthMismatch { expected: graph.n(), got: x.len() });
    }
    let rec = build_gpm_state(p, graph, rng)?;
    let mut state = rec.state;
    let mut c = vec![0u8; x.len()];
    for u in (0..x.len()).filter(|&u| x[u] == 1) {
        let (s, cu) = nonadaptive_teleport_rz(&state, u, rng)?;
        state = s;
        c[u] = cu;
    }
    for t in 0..x.len() {
        state.apply_gate(&Gate::Fourier { t })?;
    }
    let mut raw = Vec::with_capacity(x.len());
    for t in 0..x.len() {
        raw.push(state.measure(t, rng)?);
    }
    let mut corr = correction_dits(p, x, graph, &rec.edge_outcomes)?;
    corr.extend(teleport_correction_dits(p, x, &rec.reference, &DitString::new(p, c)?)?);
    Ok((DitString::new(p, raw)?, DitString::new(p, corr)?))
}

/// Exact correlation of the gadget circuit for one input: every edge outcome
/// and every gadget outcome is enumerated.
pub fn teleport_correlation_exact(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<f64> {
    correlation_of_law(p, x, &teleport_residue_law(p, x, graph)?)
}

/// Law of the corrected residue of the gadget circuit.
pub fn teleport_residue_law(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<Vec<f64>> {
    ismr_residue(p, x)?;
    let n = graph.n();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let m = graph.edges().len();
    let ecount = p.us().checked_pow(m as u32).ok_or(Error::TooLarge("edge enumeration"))?;
    let support: Vec<usize> = (0..n).filter(|&u| x[u] == 1).collect();
    let mut law = vec![0.0; p.us()];
    for eidx in 0..ecount {
        let mut r = eidx;
        let e: Vec<u8> = (0..m).map(|_| { let v = (r % p.us()) as u8; r /= p.us(); v }).collect();
        let e = DitString::new(p, e)?;
        let z = super::gpm::gpm_reference_string(p, graph, &e, 0)?;
        let base = correction_dits(p, x, graph, &e)?;
        let start = super::gpm::gpm_state_from_reference(&z)?;
        let mut frontier = vec![(start, 1.0, vec![0u8; n])];
        for &u in &support {
            let mut next = Vec::new();
            for (s, w, c) in frontier {
                for (cu, pr, s2) in teleport_branches(&s, u)? {
                    let mut c2 = c.clone();
                    c2[u] = cu;
                    next.push((s2, w * pr, c2));
                }
            }
            frontier = next;
        }
        for (mut s, w, c) in frontier {
            for t in 0..n {
                s.apply_gate(&Gate::Fourier { t })?;
            }
            let extra = teleport_correction_dits(p, x, &z, &DitString::new(p, c)?)?;
            let corr: usize = base.iter().chain(&extra).map(|&v| v as usize).sum();
            for (d, pr) in s.outcome_law(0.0) {
                let raw: usize = d.iter().map(|&v| v as usize).sum();
                law[(raw + corr) % p.us()] += w * pr / ecount as f64;
            }
        }
    }
    Ok(law)
}

/// The direct-rotation counterpart evaluated the same way (edge enumeration
/// and vertex statevectors) for side-by-side comparison.
pub fn direct_correlation_by_edges(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<f64> {
    correlation_of_law(p, x, &direct_residue_law_by_edges(p, x, graph)?)
}

pub fn direct_residue_law_by_edges(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<Vec<f64>> {
    ismr_residue(p, x)?;
    let m = graph.edges().len();
    let ecount = p.us().checked_pow(m as u32).ok_or(Error::TooLarge("edge enumeration"))?;
    let mut law = vec![0.0; p.us()];
    for eidx in 0..ecount {
        let mut r = eidx;
        let e: Vec<u8> = (0..m).map(|_| { let v = (r % p.us()) as u8; r /= p.us(); v }).collect();
        let e = DitString::new(p, e)?;
        let z = super::gpm::gpm_reference_string(p, graph, &e, 0)?;
        let corr: usize = correction_dits(p, x, graph, &e)?.iter().map(|&v| v as usize).sum();
        let mut s = super::gpm::gpm_state_from_reference(&z)?;
        for gate in rotation_and_readout_gates(x) {
            s.apply_gate(&gate)?;
        }
        for (d, pr) in s.outcome_law(0.0) {
            let raw: usize = d.iter().map(|&v| v as usize).sum();
            law[(raw + corr) % p.us()] += pr / ecount as f64;
        }
    }
    Ok(law)
}
