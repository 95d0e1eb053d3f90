//! One runner per subcommand.

use std::str::FromStr;

use ismr_core::classical::anf::Anf;
use ismr_core::classical::canonical::{canonical_depth, switching_bound, DepthTwo, SwitchEstimate};
use ismr_core::classical::dtree::{dt_to_anf, truth_table};
use ismr_core::classical::restriction::sample_restriction;
use ismr_core::games::{
    classical_correlation_upper_bound, dit_bound_cosine_form, modulus_bound, optimal_over_range, strategy_count,
    winning_probability_bound_p3, winning_probability_tight_dit_p3, GameSpec,
};
use ismr_core::ismr::{ismr_residue, ismr_verify, success_from_correlation_p3, DistKind, InputDistribution, IsmrInstance};
use ismr_core::nndecomp::{decompose_activation, eval_krelu, ActivationSpec};
use ismr_core::qec::hdrg::{failure_trial, FailureEstimate};
use ismr_core::qec::lattice::SurfaceLattice;
use ismr_core::qec::noise::NoiseSpec;
use ismr_core::qsim::circuits::{
    correction_dits, correlation_of_law, php_correction_bits, php_invalid_mass, qupit_residue_law_exact,
    run_qubit_php_circuit, run_qupit_ismr_circuit,
};
use ismr_core::qsim::gadget::{run_clifford_plus_t_circuit, teleport_residue_law};
use ismr_core::qsim::{GraphKind, GraphSpec};
use ismr_core::resource::{resource_crossover, BoundRow, CrossoverModel};
use ismr_core::{DitString, Prime};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Command, ExperimentConfig};
use crate::output::{num, Report};
use crate::seeds::{parallel_count, stream};
use crate::trees::{parse_tree, TreeJson};
use crate::{param, LabError, LabResult};

/// Input lengths up to this are listed in full by `sim-qupit`; longer ones
/// are sampled.
const LIST_BITS: usize = 12;

pub fn run_experiment(cfg: &ExperimentConfig) -> LabResult<Report> {
    let seed = cfg.seed;
    match &cfg.command {
        Command::IsmrVerify { p, x, y } => {
            let p = prime(*p)?;
            let xs = DitString::parse(Prime::TWO, x)?;
            let ys = DitString::parse(p, y)?;
            let inst = IsmrInstance::new(p, xs.len(), ys.len())?;
            let target = ismr_residue(p, xs.digits())?;
            let valid = ismr_verify(&inst, xs.digits(), ys.digits())?;
            Ok(Report::json(
                cfg,
                json!({ "x": x, "y": y, "target": target, "residue": ys.residue(), "valid": valid }),
            ))
        }
        Command::GameBrute { p, n, dist, r } => {
            let pr = prime(*p)?;
            let kind = dist_kind(dist)?;
            let game = GameSpec::new(pr, *n, kind, vec![0; *r])?;
            let total = strategy_count(&game)?;
            let chunk = total.div_ceil(64).max(1);
            let parts = (0..total.div_ceil(chunk))
                .into_par_iter()
                .map(|i| optimal_over_range(&game, i * chunk, ((i + 1) * chunk).min(total)))
                .collect::<Result<Vec<_>, _>>()?;
            let (b, corr) = parts
                .into_iter()
                .reduce(|best, next| if next.1 > best.1 + 1e-12 { next } else { best })
                .ok_or_else(|| param("n", "no strategies"))?;
            let corr_bound = modulus_bound(&game);
            let mut out = json!({
                "b_star": b.b.to_string(),
                "corr": corr,
                "corr_bound": corr_bound,
            });
            if *p == 3 {
                let win = success_from_correlation_p3(corr)?;
                let bound = winning_probability_bound_p3(*n, *r, kind);
                out["win"] = json!(win);
                out["bound"] = json!(bound);
                out["satisfied"] = json!(win <= bound + 1e-12);
            } else {
                out["bound"] = json!(corr_bound);
                out["satisfied"] = json!(corr <= corr_bound + 1e-12);
            }
            Ok(Report::json(cfg, out))
        }
        Command::GameBound { p, n_max, dist, r } => {
            let pr = prime(*p)?;
            let kind = dist_kind(dist)?;
            let mut rows = Vec::new();
            for n in 1..=*n_max {
                let game = GameSpec::new(pr, n, kind, vec![0; *r]);
                let dit = kind == DistKind::UniformDitResidueZero;
                rows.push(vec![
                    n.to_string(),
                    num(classical_correlation_upper_bound(pr, n, *r, kind)),
                    if dit { num(dit_bound_cosine_form(pr, n, *r)) } else { String::new() },
                    game.map(|g| num(modulus_bound(&g))).unwrap_or_default(),
                    if *p == 3 { num(winning_probability_bound_p3(n, *r, kind)) } else { String::new() },
                    if *p == 3 && dit { num(winning_probability_tight_dit_p3(n, *r)) } else { String::new() },
                ]);
            }
            Ok(Report::table(
                cfg,
                &["n", "corr_closed_form", "corr_cosine_form", "corr_modulus_bound", "win_bound", "win_tight"],
                rows,
            ))
        }
        Command::SimPhp { n, graph, exhaustive, shots } => {
            let g = graph_spec(graph, *n)?;
            let inputs: Vec<Vec<u8>> = bit_strings(*n)?.filter(|x| weight(x).is_multiple_of(2)).collect();
            let rows = inputs
                .par_iter()
                .enumerate()
                .map(|(i, x)| -> LabResult<Vec<String>> {
                    let len = n + php_correction_bits(x, &g, &vec![0; g.edges().len()]).len();
                    let success = if *exhaustive {
                        1.0 - php_invalid_mass(x, &g)?
                    } else {
                        let mut rng = stream(seed, i as u64);
                        let target = ismr_residue(Prime::TWO, x)?;
                        let mut ok = 0u64;
                        for _ in 0..*shots {
                            let y = run_qubit_php_circuit(x, &g, &mut rng)?;
                            ok += (weight(&y) % 2 == target as usize) as u64;
                        }
                        ok as f64 / (*shots).max(1) as f64
                    };
                    Ok(vec![bits(x), num(2.0 * success - 1.0), num(success), len.to_string()])
                })
                .collect::<LabResult<Vec<_>>>()?;
            Ok(Report::table(cfg, &["x", "corr", "success_prob", "output_len"], rows))
        }
        Command::SimQupit { p, n, graph, gadget, shots, inputs } => {
            let pr = prime(*p)?;
            let g = graph_spec(graph, *n)?;
            let teleport = match gadget.as_str() {
                "direct" => false,
                "teleport" => true,
                other => return Err(param("gadget", format!("unknown gadget `{other}`"))),
            };
            let xs: Vec<Vec<u8>> = if *n <= LIST_BITS {
                bit_strings(*n)?.filter(|x| weight(x).is_multiple_of(pr.us())).collect()
            } else {
                let dist = InputDistribution::new(DistKind::UniformBinaryResidueZero, *n, pr);
                let mut rng = stream(seed, u64::MAX);
                (0..*inputs).map(|_| dist.sample(&mut rng).into_digits()).collect()
            };
            let rows = xs
                .par_iter()
                .enumerate()
                .map(|(i, x)| -> LabResult<Vec<String>> {
                    let law = if teleport { teleport_residue_law(pr, x, &g)? } else { qupit_residue_law_exact(pr, x, &g)? };
                    let target = ismr_residue(pr, x)?;
                    let corr = correlation_of_law(pr, x, &law)?;
                    let zero = DitString::zeros(pr, g.edges().len());
                    let extra = if teleport { weight(x) * (pr.us() + 1) } else { 0 };
                    let len = n + correction_dits(pr, x, &g, &zero)?.len() + extra;
                    let mut row = vec![bits(x), num(corr), num(law[target as usize]), len.to_string()];
                    if *shots > 0 {
                        let mut rng = stream(seed, i as u64);
                        let mut ok = 0u64;
                        for _ in 0..*shots {
                            let (raw, corr) = if teleport {
                                run_clifford_plus_t_circuit(pr, x, &g, &mut rng)?
                            } else {
                                run_qupit_ismr_circuit(pr, x, &g, &mut rng)?
                            };
                            ok += ((raw.digit_sum() + corr.digit_sum()) % pr.us() == target as usize) as u64;
                        }
                        row.push(num(ok as f64 / *shots as f64));
                    } else {
                        row.push(String::new());
                    }
                    Ok(row)
                })
                .collect::<LabResult<Vec<_>>>()?;
            Ok(Report::table(cfg, &["x", "corr", "success_prob", "output_len", "sampled_success"], rows))
        }
        Command::SwitchEmpirical { n, m, w, k, keep, t, trials } => {
            if !(0.0..=1.0).contains(keep) {
                return Err(param("keep", "must lie in [0, 1]"));
            }
            let f = DepthTwo::random(*n, *m, *w, *k, &mut stream(seed, u64::MAX))?;
            let hits = parallel_count(seed, 0, *trials, |rng| -> LabResult<bool> {
                let rho = sample_restriction(*n, *keep, rng)?;
                Ok(canonical_depth(&f, &rho, *t)? > *t)
            })?;
            let est = SwitchEstimate::from_counts(hits, *trials, switching_bound(*keep, *w, *t, *k));
            let row = vec![
                n.to_string(),
                m.to_string(),
                w.to_string(),
                k.to_string(),
                num(*keep),
                t.to_string(),
                trials.to_string(),
                hits.to_string(),
                num(est.estimate),
                num(est.ci_upper),
                num(est.bound),
                est.vacuous.to_string(),
                est.ok_ci.to_string(),
                est.ok_3sigma.to_string(),
            ];
            Ok(Report::table(
                cfg,
                &["n", "m", "w", "k", "keep", "t", "trials", "hits", "estimate", "ci_upper", "bound", "vacuous", "ok_ci", "ok_3sigma"],
                vec![row],
            ))
        }
        Command::Anf { tree, n } => {
            let text = std::fs::read_to_string(tree)?;
            let t = parse_tree(&text)?;
            let n = n.unwrap_or(t.arity());
            if n < t.arity() {
                return Err(param("n", format!("tree reads variable {} but n = {n}", t.arity() - 1)));
            }
            let anf = dt_to_anf(&t);
            let check = if n <= 20 { Some(anf.truth_table(n)? == truth_table(&t, n)) } else { None };
            Ok(Report::json(
                cfg,
                json!({
                    "n": n,
                    "depth": t.depth(),
                    "tree": TreeJson::from_tree(&t),
                    "monomials": monomial_lists(&anf),
                    "degree": anf.degree(),
                    "terms": anf.len(),
                    "degree2_terms": anf.count_degree_terms(2),
                    "truth_table_match": check,
                }),
            ))
        }
        Command::QecThreshold { p, l_list, tau_list, trials } => {
            let pr = prime(*p)?;
            let ls: Vec<usize> = parse_list("L_list", l_list)?;
            let taus: Vec<f64> = parse_list("tau_list", tau_list)?;
            let mut rows = Vec::new();
            for (li, &l) in ls.iter().enumerate() {
                let lat = SurfaceLattice::new(pr, l)?;
                for (ti, &tau) in taus.iter().enumerate() {
                    let noise = NoiseSpec::new(tau)?;
                    let offset = ((li * taus.len() + ti) as u64) << 32;
                    let failures =
                        parallel_count(seed, offset, *trials, |rng| failure_trial(&lat, &noise, rng).map_err(LabError::from))?;
                    let est = FailureEstimate::from_counts(failures, *trials);
                    rows.push(vec![
                        p.to_string(),
                        l.to_string(),
                        num(tau),
                        trials.to_string(),
                        failures.to_string(),
                        num(est.rate),
                        num(est.ci.0),
                        num(est.ci.1),
                    ]);
                }
            }
            Ok(Report::table(cfg, &["p", "L", "tau", "trials", "failures", "rate", "ci_low", "ci_high"], rows))
        }
        Command::NnDecompose { activation, c, w, k, n } => {
            if activation != "relu" {
                return Err(param("activation", format!("unknown activation `{activation}`")));
            }
            let spec = ActivationSpec::relu(*c, *w, *k, *n)?;
            let gates = decompose_activation(&spec)?;
            let want = |wt: usize| *w * spec.steps(wt) as f64;
            let mut weight_mismatches = 0;
            for wt in 0..=*k {
                let got = *w * gates.iter().filter(|g| g.eval_weight(wt)).count() as f64;
                weight_mismatches += (got != want(wt)) as usize;
            }
            let exhaustive = *n <= 16;
            let mut checked = 0u64;
            let mut mismatches = 0u64;
            if exhaustive {
                for x in bit_strings(*n)? {
                    let wt = weight(&x);
                    if wt > *k {
                        continue;
                    }
                    checked += 1;
                    mismatches += (eval_krelu(&gates, *w, &x)? != want(wt)) as u64;
                }
            }
            let list: Vec<_> = gates
                .iter()
                .map(|g| {
                    json!({
                        "step": g.step,
                        "threshold": *w * g.step as f64,
                        "fires_on_weights": (0..g.fires.len()).filter(|&i| g.fires[i]).collect::<Vec<_>>(),
                        "k": k,
                        "fan_in": n,
                        "anf_terms": g.gate.as_ref().map(|gt| gt.poly().len()),
                    })
                })
                .collect();
            Ok(Report::json(
                cfg,
                json!({
                    "gates": list,
                    "verification": {
                        "weights_checked": k + 1,
                        "weight_mismatches": weight_mismatches,
                        "exhaustive": exhaustive,
                        "inputs_checked": checked,
                        "input_mismatches": mismatches,
                        "ok": weight_mismatches == 0 && mismatches == 0,
                    }
                }),
            ))
        }
        Command::ResourceEstimate { row, d_list, c_q, hidden } => {
            let rows_sel: Vec<BoundRow> = if row == "all" {
                vec![BoundRow::ExactConstK, BoundRow::ExactPolyK, BoundRow::AveragePolyK]
            } else {
                vec![BoundRow::from_name(row).ok_or_else(|| param("row", format!("unknown row `{row}`")))?]
            };
            let ds: Vec<u32> = parse_list("d_list", d_list)?;
            let mut rows = Vec::new();
            for r in rows_sel {
                for &d in &ds {
                    let model = CrossoverModel { row: r, c_q: *c_q, d, hidden: *hidden };
                    let t = match resource_crossover(&model) {
                        Ok(t) => num(t),
                        Err(ismr_core::Error::NoCrossover) => "none".into(),
                        Err(e) => return Err(e.into()),
                    };
                    rows.push(vec![r.name().into(), d.to_string(), num(*c_q), num(*hidden), t]);
                }
            }
            Ok(Report::table(cfg, &["row", "d", "c_q", "hidden", "log10_n_star"], rows))
        }
    }
}

fn prime(p: u32) -> LabResult<Prime> {
    Ok(Prime::new(p)?)
}

fn dist_kind(s: &str) -> LabResult<DistKind> {
    DistKind::from_name(s).ok_or_else(|| param("dist", format!("unknown distribution `{s}`")))
}

fn graph_spec(name: &str, n: usize) -> LabResult<GraphSpec> {
    let kind = GraphKind::from_name(name).ok_or_else(|| param("graph", format!("unknown graph `{name}`")))?;
    Ok(GraphSpec::of_kind(kind, n)?)
}

fn parse_list<T: FromStr>(field: &'static str, s: &str) -> LabResult<Vec<T>> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| param(field, format!("cannot parse `{v}`"))))
        .collect()
}

fn bit_strings(n: usize) -> LabResult<impl Iterator<Item = Vec<u8>>> {
    if n > 16 {
        return Err(param("n", "input space too large to list"));
    }
    Ok((0u64..1 << n).map(move |v| (0..n).map(|i| (v >> i & 1) as u8).collect()))
}

fn weight(x: &[u8]) -> usize {
    x.iter().map(|&b| b as usize).sum()
}

fn bits(x: &[u8]) -> String {
    x.iter().map(|b| char::from(b'0' + b)).collect()
}

fn monomial_lists(anf: &Anf) -> Vec<Vec<usize>> {
    anf.monomials().map(|m| (0..64).filter(|i| m >> i & 1 == 1).collect()).collect()
}
