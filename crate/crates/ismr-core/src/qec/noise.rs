//! Independent single-site Pauli noise.

use rand::Rng;

use super::pauli::PauliOperator;
use crate::{Error, Prime, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    tau: f64,
}

impl NoiseSpec {
    pub fn new(tau: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::OutOfRange("tau must lie in [0, 1)"));
        }
        Ok(NoiseSpec { tau })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

/// Each site is hit with probability `τ` by a uniformly chosen nontrivial
/// `Z^a X^b`.
pub fn sample_local_stochastic<R: Rng + ?Sized>(
    p: Prime,
    n: usize,
    spec: &NoiseSpec,
    rng: &mut R,
) -> Result<PauliOperator> {
    let mut e = PauliOperator::identity(p, n);
    if spec.tau == 0.0 {
        return Ok(e);
    }
    let q = p.get();
    // geometric gaps between hit sites
    let log_miss = libm::log1p(-spec.tau);
    let mut s = 0usize;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let gap = libm::floor(libm::log(u) / log_miss);
        if gap >= (n - s) as f64 {
            return Ok(e);
        }
        s += gap as usize;
        let k = rng.random_range(1..q * q);
        e.z[s] = k / q;
        e.x[s] = k % q;
        s += 1;
    }
}

/// `E ∘ E′` with `E ∼ N(τ)` and `E′ ∼ N(ϱ)` drawn independently.
pub fn sample_composed<R: Rng + ?Sized>(
    p: Prime,
    n: usize,
    first: &NoiseSpec,
    second: &NoiseSpec,
    rng: &mut R,
) -> Result<PauliOperator> {
    let a = sample_local_stochastic(p, n, first, rng)?;
    let b = sample_local_stochastic(p, n, second, rng)?;
    b.compose(&a)
}

/// `(p · max(√τ, √ϱ))^{|F|}`.
pub fn composed_bound(p: Prime, tau: f64, rho: f64, f: usize) -> f64 {
    libm::pow(p.get() as f64 * libm::sqrt(tau).max(libm::sqrt(rho)), f as f64)
}
