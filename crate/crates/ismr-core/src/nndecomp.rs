//! Splitting a weight-symmetric activation into one layer of OR-type bounded
//! threshold gates whose firing count reproduces the discretized function.

use alloc::vec::Vec;

use crate::classical::anf::Anf;
use crate::classical::bptf::{BptfGate, GateKind};
use crate::{Error, Result};

/// Largest fan-in for which gates carry an explicit polynomial.
pub const ANF_FAN_IN_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationSpec {
    /// `f(0), …, f(k)`.
    pub values: Vec<f64>,
    pub w: f64,
    pub n: usize,
}

impl ActivationSpec {
    pub fn new(values: Vec<f64>, w: f64, n: usize) -> Result<Self> {
        if w.is_nan() || w <= 0.0 {
            return Err(Error::OutOfRange("step w must be positive"));
        }
        if values.is_empty() || values.len() > n + 1 {
            return Err(Error::OutOfRange("need f on weights 0..=k with k ≤ n"));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::OutOfRange("activation values must be finite and nonnegative"));
        }
        Ok(ActivationSpec { values, w, n })
    }

    /// `max(0, |x| − c)` on weights `0..=k`.
    pub fn relu(c: f64, w: f64, k: usize, n: usize) -> Result<Self> {
        ActivationSpec::new((0..=k).map(|x| (x as f64 - c).max(0.0)).collect(), w, n)
    }

    pub fn k(&self) -> usize {
        self.values.len() - 1
    }

    /// `⌊f(x)/w⌋`.
    pub fn steps(&self, x: usize) -> usize {
        libm::floor(self.values[x] / self.w) as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepGate {
    /// Step index `i ≥ 1`.
    pub step: usize,
    /// Weights `x ≤ k` with `f(x) ≥ i·w`.
    pub fires: Vec<bool>,
    pub gate: Option<BptfGate>,
}

impl StepGate {
    /// Weight branch: fires on the set below the bound, always above it.
    pub fn eval_weight(&self, weight: usize) -> bool {
        self.fires.get(weight).copied().unwrap_or(true)
    }
}

/// Degree-`≤ k` polynomial agreeing with the weight indicator `fires` on all
/// inputs of weight at most `k`.
pub fn symmetric_low_degree_anf(n: usize, fires: &[bool]) -> Result<Anf> {
    if n > ANF_FAN_IN_LIMIT {
        return Err(Error::TooLarge("fan-in above the polynomial limit"));
    }
    let k = fires.len() - 1;
    let mut monomials = Vec::new();
    for s in 0..=k {
        // coefficient of each size-s monomial: ⊕_{t≤s} C(s,t)·g(t)
        let c = (0..=s).filter(|&t| fires[t] && binomial_odd(s, t)).count() % 2 == 1;
        if c {
            for m in 0u64..1 << n {
                if m.count_ones() as usize == s {
                    monomials.push(m);
                }
            }
        }
    }
    Ok(Anf::from_monomials(monomials))
}

fn binomial_odd(n: usize, k: usize) -> bool {
    k & !n == 0
}

/// One gate per step `i = 1..=⌊max f/w⌋`.
pub fn decompose_activation(spec: &ActivationSpec) -> Result<Vec<StepGate>> {
    let k = spec.k();
    let l = (0..=k).map(|x| spec.steps(x)).max().unwrap_or(0);
    (1..=l)
        .map(|step| {
            let fires: Vec<bool> = (0..=k).map(|x| spec.steps(x) >= step).collect();
            let gate = if spec.n <= ANF_FAN_IN_LIMIT {
                Some(BptfGate::new(GateKind::OrType, k, spec.n, symmetric_low_degree_anf(spec.n, &fires)?)?)
            } else {
                None
            };
            Ok(StepGate { step, fires, gate })
        })
        .collect()
}

/// `w · #(gates firing on x)`, through the polynomial when present.
pub fn eval_krelu(gates: &[StepGate], w: f64, x: &[u8]) -> Result<f64> {
    let weight = x.iter().filter(|&&b| b == 1).count();
    let mut count = 0usize;
    for g in gates {
        let fired = match &g.gate {
            Some(gate) => gate.eval(x)?,
            None => g.eval_weight(weight),
        };
        count += fired as usize;
    }
    Ok(w * count as f64)
}
