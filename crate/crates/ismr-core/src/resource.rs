//! Crossover between classical size lower bounds and linear quantum size.
//!
//! Every formula is evaluated in log space with `t = log₁₀ n`. Logarithms
//! inside the bounds are natural; the size side is `log₂ s` for the exact rows
//! and the raw exponent of the success-probability bound for the average row.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundRow {
    /// Exact case with constant `k`.
    ExactConstK,
    /// Exact case with `k = n^{1/(5d)}`.
    ExactPolyK,
    /// Average case with `k = n^{1/(5d)}`: the advantage exponent reaches 1.
    AveragePolyK,
}

impl BoundRow {
    pub fn name(self) -> &'static str {
        match self {
            BoundRow::ExactConstK => "exact-const-k",
            BoundRow::ExactPolyK => "exact-poly-k",
            BoundRow::AveragePolyK => "average-poly-k",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [BoundRow::ExactConstK, BoundRow::ExactPolyK, BoundRow::AveragePolyK].into_iter().find(|r| r.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossoverModel {
    pub row: BoundRow,
    /// Quantum circuit size is `c_q · n`.
    pub c_q: f64,
    pub d: u32,
    /// Multiplier standing in for the hidden constant of the lower bound.
    pub hidden: f64,
}

impl CrossoverModel {
    pub fn new(row: BoundRow, d: u32) -> Self {
        CrossoverModel { row, c_q: 1.0, d, hidden: 1.0 }
    }

    /// `ln(classical side) − ln(quantum side)` at `n = 10^t`.
    pub fn margin(&self, t: f64) -> f64 {
        let ln_n = t * core::f64::consts::LN_10;
        let lnln = libm::log(ln_n);
        let d = self.d as f64;
        let ln_s = libm::log(self.c_q) + ln_n;
        match self.row {
            BoundRow::ExactConstK | BoundRow::ExactPolyK => {
                let top = if self.row == BoundRow::ExactConstK { ln_n } else { 0.3 * ln_n };
                let tail = if self.row == BoundRow::ExactConstK { 0.5 * (ln_n + lnln) } else { 0.5 * lnln };
                let ratio = top - tail - libm::log(ln_n + lnln);
                let lhs = libm::log(self.hidden) + 1.0 / (1.0 - d) + ratio / (d - 1.0);
                lhs - libm::log(ln_s / core::f64::consts::LN_2)
            }
            BoundRow::AveragePolyK => {
                let r = libm::sqrt(ln_n + lnln);
                let ln_x = 1.6 * ln_n
                    - (1.0 + 2.0 / r) * (ln_n + lnln)
                    - 2.0 * r * core::f64::consts::LN_2
                    - (2.0 * d - 2.0) * libm::log(ln_s);
                libm::log(self.hidden) + ln_x
            }
        }
    }
}

/// Range of `log₁₀ n` searched.
pub const SEARCH_RANGE: (f64, f64) = (1.0, 400.0);

/// Smallest `log₁₀ n` in the search range where the classical bound meets
/// the quantum size: a 0.01 grid scan for the first sign change followed by
/// bisection.
pub fn resource_crossover(model: &CrossoverModel) -> Result<f64> {
    if model.d < 3 || model.c_q.is_nan() || model.c_q <= 0.0 || model.hidden.is_nan() || model.hidden <= 0.0 {
        return Err(Error::OutOfRange("need d ≥ 3 and positive constants"));
    }
    let (lo, hi) = SEARCH_RANGE;
    let steps = ((hi - lo) * 100.0) as usize;
    let mut prev = lo;
    if model.margin(lo) >= 0.0 {
        return Ok(lo);
    }
    for s in 1..=steps {
        let t = lo + s as f64 / 100.0;
        if model.margin(t) >= 0.0 {
            let (mut a, mut b) = (prev, t);
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if model.margin(m) >= 0.0 { b = m } else { a = m }
            }
            return Ok(b);
        }
        prev = t;
    }
    Err(Error::NoCrossover)
}
