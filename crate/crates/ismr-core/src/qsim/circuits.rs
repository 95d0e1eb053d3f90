//! Shallow circuits for the ISMR relations: the qubit parity-halving circuit
//! and its qupit generalisation, with their classical correction strings and
//! exact output laws.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use super::gpm::{build_gpm_state, gpm_preparation_gates, gpm_reference_string, inv_gates};
use super::graph::GraphSpec;
use super::state::{Gate, QupitState};
use crate::field::{DitString, Prime};
use crate::ismr::{ismr_residue, InputDistribution, DistKind};
use crate::{Error, Result};

fn check_input(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<()> {
    if x.len() != graph.n() {
        return Err(Error::LengthMismatch { expected: graph.n(), got: x.len() });
    }
    if let Some(&d) = x.iter().find(|&&d| d > 1) {
        return Err(Error::DigitOutOfRange { digit: d as u32, p: 2 });
    }
    let w = x.iter().filter(|&&b| b == 1).count();
    if w % p.us() != 0 {
        return Err(if p.get() == 2 {
            Error::OddInput
        } else {
            Error::ResidueViolation { weight: w, p: p.get() }
        });
    }
    Ok(())
}

/// `R_Z(2πx_u/p²)` then `F` on every vertex.
pub fn rotation_and_readout_gates(x: &[u8]) -> Vec<Gate> {
    let mut g: Vec<Gate> =
        x.iter().enumerate().filter(|(_, &b)| b == 1).map(|(t, _)| Gate::Rz { t, a: 1 }).collect();
    g.extend((0..x.len()).map(|t| Gate::Fourier { t }));
    g
}

/// `AND(x_i, e_l)` for every vertex `i` and every edge `l` on its root path.
pub fn php_correction_bits(x: &[u8], graph: &GraphSpec, e: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for (u, &xu) in x.iter().enumerate() {
        for k in graph.path_to_root(u) {
            out.push(xu & e[k]);
        }
    }
    out
}

/// Samples the qubit circuit; returns vertex outcomes followed by the
/// correction bits.
pub fn run_qubit_php_circuit<R: Rng + ?Sized>(
    x: &[u8],
    graph: &GraphSpec,
    rng: &mut R,
) -> Result<Vec<u8>> {
    let p = Prime::TWO;
    check_input(p, x, graph)?;
    let mut rec = build_gpm_state(p, graph, rng)?;
    for g in rotation_and_readout_gates(x) {
        rec.state.apply_gate(&g)?;
    }
    let mut y = Vec::with_capacity(x.len());
    for t in 0..x.len() {
        y.push(rec.state.measure(t, rng)?);
    }
    y.extend(php_correction_bits(x, graph, rec.edge_outcomes.digits()));
    Ok(y)
}

/// Final state on vertices plus edge ancillas with all measurements deferred.
fn deferred_state(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<QupitState> {
    let mut s = QupitState::zero(p, graph.n() + graph.edges().len())?;
    for g in gpm_preparation_gates(p, graph)
        .into_iter()
        .chain(inv_gates(graph))
        .chain(rotation_and_readout_gates(x))
    {
        s.apply_gate(&g)?;
    }
    Ok(s)
}

/// Exact law of the qubit circuit output `y`.
pub fn php_output_law(x: &[u8], graph: &GraphSpec) -> Result<Vec<(Vec<u8>, f64)>> {
    check_input(Prime::TWO, x, graph)?;
    let n = graph.n();
    let s = deferred_state(Prime::TWO, x, graph)?;
    Ok(s.outcome_law(0.0)
        .into_iter()
        .map(|(d, pr)| {
            let mut y = d[..n].to_vec();
            y.extend(php_correction_bits(x, graph, &d[n..]));
            (y, pr)
        })
        .collect())
}

/// Probability that the qubit circuit outputs an invalid string.
pub fn php_invalid_mass(x: &[u8], graph: &GraphSpec) -> Result<f64> {
    let want = ismr_residue(Prime::TWO, x)?;
    Ok(php_output_law(x, graph)?
        .into_iter()
        .filter(|(y, _)| (y.iter().map(|&b| b as u32).sum::<u32>() % 2) != want)
        .map(|(_, pr)| pr)
        .sum())
}

fn multinomial_mod(p: Prime, ks: &[u32]) -> u32 {
    let fact = |m: u32| (1..=m).fold(1u32, |a, i| p.mul(a, i));
    let total: u32 = ks.iter().sum();
    ks.iter().fold(fact(total), |a, &k| p.mul(a, p.inv(fact(k)).expect("k < p")))
}

fn for_each_composition(parts: usize, total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, parts: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if buf.len() + 1 == parts {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for k in (0..=left).rev() {
            buf.push(k);
            rec(buf, parts, left - k, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(parts), parts, total, f);
}

/// Correction dits whose sum is `⟨x, (z^{+1})^{p−1}⟩ mod p`. For each vertex
/// in the support of `x`, `(Σ ±e + 1)^{p−1}` is expanded over multisets of
/// its path terms; every monomial (with its multinomial coefficient folded
/// in) becomes one dit. Duplicates are kept.
pub fn correction_dits(p: Prime, x: &[u8], graph: &GraphSpec, e: &DitString) -> Result<Vec<u8>> {
    if e.len() != graph.edges().len() {
        return Err(Error::LengthMismatch { expected: graph.edges().len(), got: e.len() });
    }
    let mut out = Vec::new();
    for (u, &xu) in x.iter().enumerate() {
        if xu == 0 {
            continue;
        }
        let du = graph.depth(u);
        let mut terms: Vec<u32> = graph
            .path_to_root(u)
            .into_iter()
            .enumerate()
            .map(|(d0, k)| {
                let v = e.digits()[k] as u32;
                if (d0 + 1 + du).is_multiple_of(2) { v } else { p.neg(v) }
            })
            .collect();
        terms.push(1);
        for_each_composition(terms.len(), p.get() - 1, &mut |ks| {
            let mono = ks.iter().zip(&terms).fold(1u32, |a, (&k, &t)| p.mul(a, p.pow(t, k)));
            out.push(p.mul(multinomial_mod(p, ks), mono) as u8);
        });
    }
    Ok(out)
}

/// `⟨x, (z^{+1})^{p−1}⟩ mod p` evaluated directly.
pub fn correction_value(p: Prime, x: &[u8], z: &[u8]) -> u32 {
    x.iter()
        .zip(z)
        .filter(|(&xu, _)| xu == 1)
        .fold(0, |a, (_, &zu)| p.add(a, p.pow(zu as u32 + 1, p.get() - 1)))
}

/// Samples the qupit circuit: raw outcomes and the correction dits.
pub fn run_qupit_ismr_circuit<R: Rng + ?Sized>(
    p: Prime,
    x: &[u8],
    graph: &GraphSpec,
    rng: &mut R,
) -> Result<(DitString, DitString)> {
    check_input(p, x, graph)?;
    let mut rec = build_gpm_state(p, graph, rng)?;
    for g in rotation_and_readout_gates(x) {
        rec.state.apply_gate(&g)?;
    }
    let mut raw = Vec::with_capacity(x.len());
    for t in 0..x.len() {
        raw.push(rec.state.measure(t, rng)?);
    }
    let corr = correction_dits(p, x, graph, &rec.edge_outcomes)?;
    Ok((DitString::new(p, raw)?, DitString::new(p, corr)?))
}

/// `A_i = Σ_u x_u ((z_u + i) mod p)`.
fn rotation_sum(p: Prime, x: &[u8], z: &[u8], i: u32) -> i64 {
    x.iter()
        .zip(z)
        .filter(|(&xu, _)| xu == 1)
        .map(|(_, &zu)| p.add(zu as u32, i) as i64)
        .sum()
}

/// `E[ω^{t|y|}]` for the raw outcomes given the reference string.
pub fn raw_characteristic(p: Prime, x: &[u8], z: &[u8], t: u32) -> Complex64 {
    let m = (p.us() * p.us()) as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..p.get() {
        let d = rotation_sum(p, x, z, i) - rotation_sum(p, x, z, p.add(i, t));
        acc += crate::field::root_of_unity(m, d);
    }
    acc / p.get() as f64
}

/// Law of `|raw| mod p` given the reference string, by Fourier inversion.
pub fn raw_residue_law(p: Prime, x: &[u8], z: &[u8]) -> Vec<f64> {
    let chi: Vec<Complex64> = (0..p.get()).map(|t| raw_characteristic(p, x, z, t)).collect();
    (0..p.get())
        .map(|r| {
            let s: Complex64 = chi
                .iter()
                .enumerate()
                .map(|(t, c)| c * p.omega(-(t as i64) * r as i64))
                .sum();
            s.re / p.get() as f64
        })
        .collect()
}

/// `E[Re ω^{|raw| + c(z) − g}]` given the reference string.
pub fn correlation_given_reference(p: Prime, x: &[u8], z: &[u8]) -> Result<f64> {
    let g = ismr_residue(p, x)?;
    let c = correction_value(p, x, z);
    Ok((p.omega(c as i64 - g as i64) * raw_characteristic(p, x, z, 1)).re)
}

/// Exact correlation for one input, averaged over every reference string the
/// graph measurement can produce. Only support positions matter; the root is
/// pinned to 0 and the other positions are uniform and independent.
pub fn qupit_correlation_exact(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<f64> {
    check_input(p, x, graph)?;
    let free: Vec<usize> =
        (0..x.len()).filter(|&u| x[u] == 1 && u != graph.root()).collect();
    let count = p
        .us()
        .checked_pow(free.len() as u32)
        .filter(|&c| c <= 1 << 26)
        .ok_or(Error::TooLarge("reference enumeration"))?;
    let mut z = vec![0u8; x.len()];
    let mut total = 0.0;
    for idx in 0..count {
        let mut r = idx;
        for &u in &free {
            z[u] = (r % p.us()) as u8;
            r /= p.us();
        }
        total += correlation_given_reference(p, x, &z)?;
    }
    Ok(total / count as f64)
}

/// Law of the corrected residue for one input, averaged the same way.
pub fn qupit_residue_law_exact(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<Vec<f64>> {
    check_input(p, x, graph)?;
    let free: Vec<usize> =
        (0..x.len()).filter(|&u| x[u] == 1 && u != graph.root()).collect();
    let count = p
        .us()
        .checked_pow(free.len() as u32)
        .filter(|&c| c <= 1 << 26)
        .ok_or(Error::TooLarge("reference enumeration"))?;
    let mut z = vec![0u8; x.len()];
    let mut law = vec![0.0; p.us()];
    for idx in 0..count {
        let mut r = idx;
        for &u in &free {
            z[u] = (r % p.us()) as u8;
            r /= p.us();
        }
        let c = correction_value(p, x, &z);
        for (f, w) in raw_residue_law(p, x, &z).into_iter().enumerate() {
            law[p.add(f as u32, c) as usize] += w / count as f64;
        }
    }
    Ok(law)
}

/// Same quantity through the product structure over independent positions.
pub fn qupit_correlation_factorized(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<f64> {
    check_input(p, x, graph)?;
    let g = ismr_residue(p, x)?;
    let m = (p.us() * p.us()) as u64;
    let factor = |zu: u32, i: u32| {
        let a = p.add(zu, i) as i64;
        let b = p.add(zu, p.add(i, 1)) as i64;
        crate::field::root_of_unity(m, a - b) * p.omega(p.pow(zu + 1, p.get() - 1) as i64)
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..p.get() {
        let mut prod = Complex64::new(1.0, 0.0);
        for u in (0..x.len()).filter(|&u| x[u] == 1) {
            prod *= if u == graph.root() {
                factor(0, i)
            } else {
                (0..p.get()).map(|zu| factor(zu, i)).sum::<Complex64>() / p.get() as f64
            };
        }
        acc += prod;
    }
    Ok((acc / p.get() as f64 * p.omega(-(g as i64))).re)
}

/// Law of the corrected residue `(|raw| + |corr|) mod p` from the deferred
/// statevector over vertices and edge ancillas.
pub fn qupit_residue_law_statevector(p: Prime, x: &[u8], graph: &GraphSpec) -> Result<Vec<f64>> {
    check_input(p, x, graph)?;
    let n = graph.n();
    let m = graph.edges().len();
    let s = deferred_state(p, x, graph)?;
    let pu = p.us();
    let ecount = pu.pow(m as u32);
    let mut corr_by_edge = Vec::with_capacity(ecount);
    for eidx in 0..ecount {
        let mut r = eidx;
        let mut e = vec![0u8; m];
        for slot in e.iter_mut().rev() {
            *slot = (r % pu) as u8;
            r /= pu;
        }
        let e = DitString::new(p, e)?;
        let c: usize = correction_dits(p, x, graph, &e)?.iter().map(|&v| v as usize).sum();
        corr_by_edge.push(c % pu);
    }
    let mut law = vec![0.0; pu];
    for (idx, a) in s.amplitudes().iter().enumerate() {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let mut v = idx / ecount;
        let mut raw = 0usize;
        for _ in 0..n {
            raw += v % pu;
            v /= pu;
        }
        law[(raw + corr_by_edge[idx % ecount]) % pu] += w;
    }
    Ok(law)
}

/// Correlation of a residue law with the target residue of `x`.
pub fn correlation_of_law(p: Prime, x: &[u8], law: &[f64]) -> Result<f64> {
    let g = ismr_residue(p, x)?;
    Ok(law.iter().enumerate().map(|(f, &w)| w * p.omega(f as i64 - g as i64).re).sum())
}

/// Correlation averaged over the uniform residue-zero binary inputs.
pub fn qupit_average_correlation(p: Prime, graph: &GraphSpec) -> Result<f64> {
    let dist = InputDistribution::new(DistKind::UniformBinaryResidueZero, graph.n(), p);
    let mut acc = 0.0;
    for (x, w) in dist.enumerate()? {
        acc += w * qupit_correlation_factorized(p, x.digits(), graph)?;
    }
    Ok(acc)
}

/// Same average but each input is evaluated by full reference enumeration.
pub fn qupit_average_correlation_enumerated(p: Prime, graph: &GraphSpec) -> Result<f64> {
    let dist = InputDistribution::new(DistKind::UniformBinaryResidueZero, graph.n(), p);
    let mut acc = 0.0;
    for (x, w) in dist.enumerate()? {
        acc += w * qupit_correlation_exact(p, x.digits(), graph)?;
    }
    Ok(acc)
}

/// Probability of each shift `k` for the phase vector `(0, a_1, …, a_{p−1})`:
/// `|p^{−1} Σ_j ω^{a_j − jk}|²`.
pub fn analytic_shift_distribution(p: Prime, a: &[u32]) -> Result<Vec<f64>> {
    if a.len() != p.us() - 1 {
        return Err(Error::LengthMismatch { expected: p.us() - 1, got: a.len() });
    }
    let phases: Vec<i64> = core::iter::once(0).chain(a.iter().map(|&v| v as i64)).collect();
    Ok((0..p.us() as i64)
        .map(|k| {
            let s: Complex64 =
                phases.iter().enumerate().map(|(j, &aj)| p.omega(aj - j as i64 * k)).sum();
            (s / p.get() as f64).norm_sqr()
        })
        .collect())
}

/// Reference string for sampled edge outcomes with the root at 0.
pub fn reference_for(p: Prime, graph: &GraphSpec, e: &DitString) -> Result<DitString> {
    gpm_reference_string(p, graph, e, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::graph::GraphKind;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn even_inputs(n: usize) -> impl Iterator<Item = Vec<u8>> {
        (0u32..1 << n)
            .filter(|v| v.count_ones() % 2 == 0)
            .map(move |v| (0..n).map(|i| ((v >> i) & 1) as u8).collect())
    }

    #[test]
    fn php_is_exact_on_small_graphs() {
        for n in [2, 4, 6] {
            for g in [GraphSpec::binary_tree(n).unwrap(), GraphSpec::grid3d(n).unwrap()] {
                for x in even_inputs(n) {
                    assert!(php_invalid_mass(&x, &g).unwrap() < 1e-9, "n={n} x={x:?}");
                }
            }
        }
    }

    #[test]
    fn php_samples_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GraphSpec::binary_tree(6).unwrap();
        for x in [vec![0u8; 6], vec![1, 1, 0, 0, 0, 0], vec![1, 1, 1, 1, 0, 0]] {
            for _ in 0..20 {
                let y = run_qubit_php_circuit(&x, &g, &mut rng).unwrap();
                let w: usize = y.iter().map(|&b| b as usize).sum();
                assert_eq!((w % 2) as u32, ismr_residue(Prime::TWO, &x).unwrap());
            }
        }
        assert_eq!(run_qubit_php_circuit(&[1, 0, 0, 0, 0, 0], &g, &mut rng), Err(Error::OddInput));
    }

    #[test]
    fn without_correction_php_fails() {
        // Dropping the AND bits leaves invalid mass for some input.
        let g = GraphSpec::path(4).unwrap();
        let x = [1u8, 1, 0, 0];
        let law = php_output_law(&x, &g).unwrap();
        let bad: f64 = law
            .iter()
            .filter(|(y, _)| y[..4].iter().map(|&b| b as u32).sum::<u32>() % 2 != 1)
            .map(|(_, p)| p)
            .sum();
        assert!(bad > 0.1);
    }

    #[test]
    fn correction_dits_sum_to_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for p in [2u32, 3, 5, 7] {
            let f = pr(p);
            for kind in [GraphKind::Path, GraphKind::BinaryTree, GraphKind::Grid3d] {
                let g = GraphSpec::of_kind(kind, 8).unwrap();
                for _ in 0..10 {
                    let x: Vec<u8> = (0..8).map(|_| rng.random_range(0..2u8)).collect();
                    let e: Vec<u8> = (0..7).map(|_| rng.random_range(0..p) as u8).collect();
                    let e = DitString::new(f, e).unwrap();
                    let z = reference_for(f, &g, &e).unwrap();
                    let d = correction_dits(f, &x, &g, &e).unwrap();
                    let s = d.iter().map(|&v| v as u32).sum::<u32>() % p;
                    assert_eq!(s, correction_value(f, &x, z.digits()));
                    let gecc = g.eccentricity();
                    assert!(d.len() <= 8 * (gecc + 1).pow(p - 1));
                }
            }
        }
    }

    #[test]
    fn characteristic_law_matches_statevector() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for (p, n) in [(3u32, 3usize), (3, 6), (5, 5)] {
            let f = pr(p);
            let g = GraphSpec::path(n).unwrap();
            for _ in 0..3 {
                let x = InputDistribution::new(DistKind::UniformBinaryResidueZero, n, f).sample(&mut rng);
                let law = qupit_residue_law_statevector(f, x.digits(), &g).unwrap();
                let sv = correlation_of_law(f, x.digits(), &law).unwrap();
                let en = qupit_correlation_exact(f, x.digits(), &g).unwrap();
                let fa = qupit_correlation_factorized(f, x.digits(), &g).unwrap();
                assert!((sv - en).abs() < 1e-9, "{sv} {en}");
                assert!((fa - en).abs() < 1e-9, "{fa} {en}");
                let ex = qupit_residue_law_exact(f, x.digits(), &g).unwrap();
                assert!(ex.iter().zip(&law).all(|(a, b)| (a - b).abs() < 1e-9));
            }
        }
    }

    #[test]
    fn raw_law_given_reference_matches_simulation() {
        let f = pr(3);
        let x = [1u8, 1, 1, 0];
        let z = [2u8, 0, 1, 1];
        let zs = DitString::new(f, z.to_vec()).unwrap();
        let mut s = super::super::gpm::gpm_state_from_reference(&zs).unwrap();
        for g in rotation_and_readout_gates(&x) {
            s.apply_gate(&g).unwrap();
        }
        let mut want = [0.0; 3];
        for (d, w) in s.outcome_law(0.0) {
            want[d.iter().map(|&v| v as usize).sum::<usize>() % 3] += w;
        }
        let got = raw_residue_law(f, &x, &z);
        for r in 0..3 {
            assert!((want[r] - got[r]).abs() < 1e-9);
        }
    }

    #[test]
    fn shift_distribution_extremes() {
        for p in [3u32, 5, 7] {
            let f = pr(p);
            let d = analytic_shift_distribution(f, &vec![0; p as usize - 1]).unwrap();
            assert!((d[0] - 1.0).abs() < 1e-12);
            // averaging over all phase vectors gives the uniform law
            let mut avg = vec![0.0; p as usize];
            let count = (p as usize).pow(p - 1);
            for idx in 0..count {
                let mut r = idx;
                let a: Vec<u32> = (0..p - 1).map(|_| { let v = (r % p as usize) as u32; r /= p as usize; v }).collect();
                for (k, v) in analytic_shift_distribution(f, &a).unwrap().into_iter().enumerate() {
                    avg[k] += v / count as f64;
                }
            }
            for v in avg {
                assert!((v - 1.0 / p as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn residue_violation_rejected() {
        let g = GraphSpec::path(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            run_qupit_ismr_circuit(pr(3), &[1, 1, 0], &g, &mut rng),
            Err(Error::ResidueViolation { weight: 2, p: 3 })
        );
    }

    proptest! {
        #[test]
        fn shift_law_is_a_distribution(a in prop::collection::vec(0u32..5, 4)) {
            let d = analytic_shift_distribution(pr(5), &a).unwrap();
            prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(d.iter().all(|&v| v >= -1e-12));
        }

        #[test]
        fn raw_law_sums_to_one(z in prop::collection::vec(0u8..3, 6), xs in prop::sample::select(vec![[1u8,1,1,0,0,0],[1,1,1,1,1,1],[0,0,0,0,0,0]])) {
            let law = raw_residue_law(pr(3), &xs, &z);
            prop_assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!(law.iter().all(|&v| v > -1e-9));
        }
    }
}
