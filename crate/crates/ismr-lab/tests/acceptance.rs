//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any hard
//! criterion fails; criterion 9 is reported only.

use std::time::Instant;

use ismr_core::classical::anf::{anf_from_truth_table, lsb_anf};
use ismr_core::classical::bptf::{constant_circuit, pairwise_solver, valid_parity_check};
use ismr_core::classical::canonical::{check_downward_closed, switching_bound, DepthTwo, SwitchEstimate};
use ismr_core::classical::dtree::{degree2_cap, dt_to_anf, max_degree2_terms_complete, truth_table, DecisionTree};
use ismr_core::classical::restriction::sample_restriction;
use ismr_core::classical::canonical::canonical_depth;
use ismr_core::games::{
    optimal_classical_correlation_bruteforce, per_symbol_factor, winning_probability_bound_p3, GameSpec,
};
use ismr_core::ismr::{success_from_correlation_p3, DistKind};
use ismr_core::nndecomp::{decompose_activation, eval_krelu, ActivationSpec};
use ismr_core::qec::hdrg::{failure_trial, hdrg_decode, is_logical_failure, FailureEstimate};
use ismr_core::qec::lattice::SurfaceLattice;
use ismr_core::qec::noise::{composed_bound, sample_composed, NoiseSpec};
use ismr_core::qec::pauli::PauliOperator;
use ismr_core::qsim::circuits::{php_invalid_mass, qupit_average_correlation_enumerated};
use ismr_core::qsim::gadget::{direct_correlation_by_edges, residual_identity_error, teleport_correlation_exact};
use ismr_core::qsim::{GraphKind, GraphSpec};
use ismr_core::resource::{resource_crossover, BoundRow, CrossoverModel};
use ismr_core::Prime;
use ismr_lab::seeds::{parallel_count, stream};
use rand::Rng;

const SEED: u64 = 20_240_601;

type Criterion = (u32, &'static str, fn() -> Outcome, bool);

struct Outcome {
    pass: bool,
    detail: String,
}

fn php_exactness() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for kind in [GraphKind::BinaryTree, GraphKind::Grid3d] {
        for n in [4usize, 6, 8] {
            let g = GraphSpec::of_kind(kind, n).unwrap();
            for v in 0u32..1 << n {
                if v.count_ones() % 2 == 1 {
                    continue;
                }
                let x: Vec<u8> = (0..n).map(|i| (v >> i & 1) as u8).collect();
                worst = worst.max(php_invalid_mass(&x, &g).unwrap());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-9 && secs < 120.0,
        detail: format!("max invalid mass {worst:.3e} over all even x (tree, grid3d; n=4,6,8), {secs:.1}s"),
    }
}

fn qupit_correlation() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for p in [3u32, 5] {
        let pr = Prime::new(p).unwrap();
        let target = (p - 1) as f64 / (p * p) as f64;
        for n in [p as usize, 2 * p as usize] {
            let g = GraphSpec::path(n).unwrap();
            let c = qupit_average_correlation_enumerated(pr, &g).unwrap();
            let ok = (c - target).abs() <= 1e-9;
            pass &= ok;
            parts.push(format!("p={p} n={n}: {c:.9} vs {target:.9}{}", if ok { "" } else { " (miss)" }));
        }
    }
    let pr = Prime::new(3).unwrap();
    let g = GraphSpec::path(3).unwrap();
    let mut gap: f64 = 0.0;
    for v in 0u32..8 {
        if v.count_ones() % 3 != 0 {
            continue;
        }
        let x: Vec<u8> = (0..3).map(|i| (v >> i & 1) as u8).collect();
        let t = teleport_correlation_exact(pr, &x, &g).unwrap();
        let d = direct_correlation_by_edges(pr, &x, &g).unwrap();
        gap = gap.max((t - d).abs());
    }
    pass &= gap <= 1e-9;
    parts.push(format!("teleport vs direct at p=3 n=3: max gap {gap:.2e}"));
    Outcome { pass, detail: parts.join("; ") }
}

fn game_bounds() -> Outcome {
    let p = Prime::new(3).unwrap();
    let mut pass = true;
    let mut tightest = f64::INFINITY;
    for kind in [DistKind::UniformDitResidueZero, DistKind::HammingEncodedUniformBinary] {
        for r in [0usize, 2] {
            for n in 1..=8usize {
                let raw = if kind == DistKind::UniformDitResidueZero { n } else { 2 * n };
                if r > raw {
                    continue;
                }
                let g = GameSpec::new(p, n, kind, vec![0; r]).unwrap();
                let (_, corr) = optimal_classical_correlation_bruteforce(&g).unwrap();
                let win = success_from_correlation_p3(corr).unwrap();
                let bound = winning_probability_bound_p3(n, r, kind);
                pass &= win <= bound + 1e-12;
                tightest = tightest.min(bound - win);
            }
        }
    }
    let caps = [(DistKind::UniformDitResidueZero, [0.45, 0.3, 0.85]), (DistKind::HammingEncodedUniformBinary, [0.59, 0.04, 0.89])];
    let mut factors = Vec::new();
    for (kind, cap) in caps {
        for b in 0..3u32 {
            let f = per_symbol_factor(p, b, kind).norm();
            pass &= f <= cap[b as usize] + 1e-9;
            factors.push(format!("{f:.4}"));
        }
    }
    Outcome {
        pass,
        detail: format!("smallest slack bound−win {tightest:.4}; factor magnitudes [{}]", factors.join(", ")),
    }
}

fn anf_machinery() -> Outcome {
    let mut rng = stream(SEED, 4);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let t = DecisionTree::random(n, rng.random_range(1..=n), 0.2, &mut rng);
        if dt_to_anf(&t) != anf_from_truth_table(&truth_table(&t, n)).unwrap() {
            mismatches += 1;
        }
    }
    let mut solver_ok = true;
    for n in [4usize, 6, 8, 10] {
        solver_ok &= valid_parity_check(&pairwise_solver(n).unwrap()).unwrap();
        solver_ok &= !valid_parity_check(&constant_circuit(n, false)).unwrap();
        solver_ok &= !valid_parity_check(&constant_circuit(n, true)).unwrap();
        let lsb = lsb_anf(n).unwrap();
        solver_ok &= lsb.degree() == 2;
    }
    let mut cap_parts = Vec::new();
    let mut cap_ok = true;
    for q in 1..=4 {
        let got = max_degree2_terms_complete(q).unwrap();
        let cap = degree2_cap(q);
        cap_ok &= got <= cap;
        cap_parts.push(format!("q={q}: {got}≤{cap}{}", if got <= cap { "" } else { " violated" }));
    }
    Outcome {
        pass: mismatches == 0 && solver_ok && cap_ok,
        detail: format!(
            "tree/oracle mismatches {mismatches}/200; parity check solver/constant {}; degree-2 cap {}",
            if solver_ok { "ok" } else { "wrong" },
            cap_parts.join(", ")
        ),
    }
}

fn switching() -> Outcome {
    // (w, k, keep, t)
    let settings = [(2usize, 0usize, 0.005, 1usize), (2, 1, 0.005, 2), (3, 0, 0.005, 2), (2, 1, 0.002, 1), (3, 1, 0.004, 2), (4, 0, 0.002, 2)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, &(w, k, keep, t)) in settings.iter().enumerate() {
        let bound = switching_bound(keep, w, t, k);
        assert!(bound < 0.5);
        let f = DepthTwo::random(400, 50, w, k, &mut stream(SEED, 500 + i as u64)).unwrap();
        let hits = parallel_count::<_, ismr_core::Error>(SEED, (i as u64 + 1) << 32, 100_000, |rng| {
            let rho = sample_restriction(400, keep, rng)?;
            Ok(canonical_depth(&f, &rho, t)? > t)
        })
        .unwrap();
        let est = SwitchEstimate::from_counts(hits, 100_000, bound);
        pass &= est.ok_3sigma;
        parts.push(format!("w={w} k={k} p={keep} t={t}: {:.2e}≤{bound:.3}", est.estimate));
    }
    let mut rng = stream(SEED, 5);
    let mut violations = 0;
    for _ in 0..10_000 {
        let k = rng.random_range(0..3);
        let f = DepthTwo::random(12, 6, 3, k, &mut rng).unwrap();
        let rho = sample_restriction(12, 0.5, &mut rng).unwrap();
        let tau = sample_restriction(12, 0.5, &mut rng).unwrap();
        let ext = rho.compose(&tau).unwrap();
        if !check_downward_closed(&f, &rho, &[ext]).unwrap() {
            violations += 1;
        }
    }
    pass &= violations == 0;
    Outcome { pass, detail: format!("{}; downward-closed violations {violations}/10000", parts.join(", ")) }
}

fn hdrg() -> Outcome {
    let start = Instant::now();
    let mut failures = 0;
    let mut aborts = 0;
    for p in [2u32, 3] {
        let lat = SurfaceLattice::new(Prime::new(p).unwrap(), 5).unwrap();
        let n = lat.n_sites();
        for s1 in 0..n {
            for s2 in s1..n {
                for a in 1..p {
                    for b in 1..p {
                        let mut e = PauliOperator::identity(lat.p(), n);
                        e.x[s1] = a;
                        if s2 != s1 {
                            e.x[s2] = b;
                        }
                        match hdrg_decode(&lat, &lat.syndrome(&e).unwrap()).unwrap() {
                            Some(c) => failures += is_logical_failure(&lat, &e.compose(&c.inverse()).unwrap()).unwrap() as u32,
                            None => aborts += 1,
                        }
                    }
                }
            }
        }
    }
    let trials = 4_000_000u64;
    let noise = NoiseSpec::new(0.005).unwrap();
    let mut ests = Vec::new();
    for (i, l) in [3usize, 5, 7].into_iter().enumerate() {
        let lat = SurfaceLattice::new(Prime::new(3).unwrap(), l).unwrap();
        let f = parallel_count(SEED, (100 + i as u64) << 32, trials, |rng| failure_trial(&lat, &noise, rng)).unwrap();
        ests.push((l, FailureEstimate::from_counts(f, trials)));
    }
    let decreasing = ests.windows(2).all(|w| w[1].1.rate < w[0].1.rate && w[1].1.ci.1 < w[0].1.ci.0);
    let secs = start.elapsed().as_secs_f64();
    let rates: Vec<String> = ests
        .iter()
        .map(|(l, e)| format!("L={l}: {:.2e} [{:.2e}, {:.2e}]", e.rate, e.ci.0, e.ci.1))
        .collect();
    Outcome {
        pass: failures == 0 && aborts == 0 && decreasing && secs < 900.0,
        detail: format!(
            "weight≤2 at L=5 (p=2,3): {failures} failures, {aborts} aborts; p=3 τ=0.005, {trials} trials: {}; {secs:.0}s",
            rates.join(", ")
        ),
    }
}

fn residual_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [2u32, 3, 5, 7] {
        let pr = Prime::new(p).unwrap();
        for c in 0..p {
            worst = worst.max(residual_identity_error(pr, c));
        }
    }
    Outcome { pass: worst <= 1e-12, detail: format!("max entry gap {worst:.2e} over p∈{{2,3,5,7}}, all c") }
}

fn nn_decomp() -> Outcome {
    let n = 16;
    let mut pass = true;
    let mut parts = Vec::new();
    for (c, w, k) in [(1.0, 1.0, 4usize), (2.0, 0.5, 6), (0.0, 2.0, 8)] {
        let spec = ActivationSpec::relu(c, w, k, n).unwrap();
        let gates = decompose_activation(&spec).unwrap();
        let mut bad = 0;
        let mut checked = 0;
        let mut x = vec![0u8; n];
        for v in 0u32..1 << n {
            let wt = v.count_ones() as usize;
            if wt > k {
                continue;
            }
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (v >> i & 1) as u8;
            }
            checked += 1;
            if eval_krelu(&gates, w, &x).unwrap() != w * spec.steps(wt) as f64 {
                bad += 1;
            }
        }
        pass &= bad == 0;
        parts.push(format!("(c={c}, w={w}, k={k}): {} gates, {bad}/{checked} mismatches", gates.len()));
    }
    Outcome { pass, detail: format!("n=16: {}", parts.join("; ")) }
}

fn resource() -> Outcome {
    let targets = [(BoundRow::ExactConstK, 11.0), (BoundRow::ExactPolyK, 22.0), (BoundRow::AveragePolyK, 40.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (row, want) in targets {
        let ts: Vec<f64> = (3..=6).map(|d| resource_crossover(&CrossoverModel::new(row, d)).unwrap()).collect();
        let monotone = ts.windows(2).all(|w| w[1] > w[0]);
        let close = (ts[0] - want).abs() <= 1.0;
        pass &= monotone && close;
        parts.push(format!("{}: d=3 → 10^{:.2} (target 10^{want}), monotone in d {}", row.name(), ts[0], monotone));
    }
    Outcome { pass, detail: parts.join("; ") }
}

fn composed_noise() -> Outcome {
    let p = Prime::new(3).unwrap();
    let (tau, rho) = (0.05, 0.02);
    let (first, second) = (NoiseSpec::new(tau).unwrap(), NoiseSpec::new(rho).unwrap());
    let trials = 400_000u64;
    let mut pass = true;
    let mut parts = Vec::new();
    for f in 1..=3usize {
        let hits = parallel_count::<_, ismr_core::Error>(SEED, (200 + f as u64) << 32, trials, |rng| {
            let e = sample_composed(p, 8, &first, &second, rng)?;
            Ok((0..f).all(|s| e.z[s] != 0 || e.x[s] != 0))
        })
        .unwrap();
        let bound = composed_bound(p, tau, rho, f).min(1.0);
        let freq = hits as f64 / trials as f64;
        let sigma = (bound * (1.0 - bound) / trials as f64).sqrt();
        pass &= freq <= bound + 3.0 * sigma;
        parts.push(format!("|F|={f}: {freq:.2e} ≤ {bound:.3e}"));
    }
    Outcome { pass, detail: format!("τ={tau}, ϱ={rho}: {}", parts.join(", ")) }
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "PHP exactness", php_exactness, true),
        (2, "qupit correlation", qupit_correlation, true),
        (3, "game bounds", game_bounds, true),
        (4, "ANF machinery", anf_machinery, true),
        (5, "switching bound", switching, true),
        (6, "HDRG decoder", hdrg, true),
        (7, "teleport residual identity", residual_identity, true),
        (8, "nn-decomp", nn_decomp, true),
        (9, "resource estimator", resource, false),
        (10, "composed noise", composed_noise, true),
    ];
    let mut hard_failures = 0;
    for (id, name, f, hard) in criteria {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let grade = if hard { "" } else { " (reporting)" };
        println!("{tag} {id:>2} {name}{grade}: {}", o.detail);
        if hard && !o.pass {
            hard_failures += 1;
        }
    }
    println!("{hard_failures} hard criteria failed");
    if hard_failures > 0 {
        std::process::exit(1);
    }
}
