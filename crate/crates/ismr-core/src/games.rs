//! Modular XOR games: exact strategy values, brute-force optima and the
//! closed-form classical bounds.
//!
//! Party `i` receives a dit `x_i` and answers `b_i·x_i`; the strategy value is
//! `E[Re ω^{Σ b_i x_i − |x|/p}]` over the game's residue-zero input slice.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::field::{root_of_unity, DitString, Prime};
use crate::ismr::{encoding_bias, DistKind};
use crate::{Error, Result};

/// A game instance. `fixed` pins the leading raw symbols: dits for
/// [`DistKind::UniformDitResidueZero`], bits for
/// [`DistKind::HammingEncodedUniformBinary`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub p: Prime,
    pub n: usize,
    pub kind: DistKind,
    pub fixed: Vec<u8>,
}

impl GameSpec {
    pub fn new(p: Prime, n: usize, kind: DistKind, fixed: Vec<u8>) -> Result<Self> {
        let raw_len = match kind {
            DistKind::UniformDitResidueZero => n,
            DistKind::HammingEncodedUniformBinary => n * (p.us() - 1),
            DistKind::UniformBinaryResidueZero => {
                return Err(Error::Invalid("games take dit or Hamming-encoded inputs"))
            }
        };
        if fixed.len() > raw_len {
            return Err(Error::OutOfRange("more restricted symbols than inputs"));
        }
        let alphabet = if kind == DistKind::UniformDitResidueZero { p.get() } else { 2 };
        if let Some(&d) = fixed.iter().find(|&&d| d as u32 >= alphabet) {
            return Err(Error::DigitOutOfRange { digit: d as u32, p: alphabet });
        }
        Ok(GameSpec { p, n, kind, fixed })
    }

    pub fn r(&self) -> usize {
        self.fixed.len()
    }

    /// Marginal weight of each dit value for party `i`, given the restriction.
    fn party_marginal(&self, i: usize) -> Vec<f64> {
        let p = self.p.us();
        let mut m = vec![0.0; p];
        match self.kind {
            DistKind::UniformDitResidueZero => match self.fixed.get(i) {
                Some(&d) => m[d as usize] = 1.0,
                None => m.fill(1.0 / p as f64),
            },
            _ => {
                let b = p - 1;
                let lo = i * b;
                let pinned: Vec<u8> =
                    (lo..lo + b).filter_map(|j| self.fixed.get(j).copied()).collect();
                let base: usize = pinned.iter().map(|&v| v as usize).sum();
                let free = b - pinned.len();
                for v in 0..=free {
                    m[base + v] = crate::field::binomial(free as u64, v as u64)
                        / libm::ldexp(1.0, free as i32);
                }
            }
        }
        m
    }

    fn marginals(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.party_marginal(i)).collect()
    }

    /// Number of raw input points (before the residue constraint).
    fn raw_free_count(&self) -> Option<u64> {
        let (len, q) = match self.kind {
            DistKind::UniformDitResidueZero => (self.n, self.p.get() as u64),
            _ => (self.n * (self.p.us() - 1), 2),
        };
        q.checked_pow((len - self.r()) as u32)
    }
}

/// A linear strategy: party `i` answers `b_i·x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearStrategy {
    pub b: DitString,
}

/// Largest enumerable raw input space for the exhaustive evaluator.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 22;

/// Strategy value by summing over every input of the slice.
pub fn strategy_correlation_exact(game: &GameSpec, b: &[u8]) -> Result<f64> {
    check_strategy(game, b)?;
    let count = game
        .raw_free_count()
        .filter(|&c| c <= EXHAUSTIVE_LIMIT)
        .ok_or(Error::TooLarge("exhaustive game evaluation"))?;
    let p = game.p;
    let dit_kind = game.kind == DistKind::UniformDitResidueZero;
    let (len, q) = if dit_kind { (game.n, p.get() as u64) } else { (game.n * (p.us() - 1), 2) };
    let r = game.r();
    let mut raw = vec![0u8; len];
    raw[..r].copy_from_slice(&game.fixed);
    let mut acc = 0.0;
    let mut hits = 0u64;
    for idx in 0..count {
        let mut k = idx;
        for slot in raw[r..].iter_mut().rev() {
            *slot = (k % q) as u8;
            k /= q;
        }
        let dits: Vec<u32> = if dit_kind {
            raw.iter().map(|&d| d as u32).collect()
        } else {
            raw.chunks(p.us() - 1).map(|c| c.iter().map(|&v| v as u32).sum()).collect()
        };
        let s: u32 = dits.iter().sum();
        if !s.is_multiple_of(p.get()) {
            continue;
        }
        hits += 1;
        let lin: i64 = dits.iter().zip(b).map(|(&x, &bi)| (x * bi as u32) as i64).sum();
        acc += p.omega(lin - (s / p.get()) as i64).re;
    }
    if hits == 0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(acc / hits as f64)
}

/// Strategy value by dynamic programming over parties on the integer weight.
pub fn strategy_correlation_product(game: &GameSpec, b: &[u8]) -> Result<f64> {
    check_strategy(game, b)?;
    let marg = game.marginals();
    strategy_value_dp(game.p, &marg, b)
}

fn strategy_value_dp(p: Prime, marg: &[Vec<f64>], b: &[u8]) -> Result<f64> {
    let pu = p.us();
    let max_sum = marg.len() * (pu - 1);
    let mut amp = vec![Complex64::new(0.0, 0.0); max_sum + 1];
    let mut mass = vec![0.0f64; max_sum + 1];
    amp[0] = Complex64::new(1.0, 0.0);
    mass[0] = 1.0;
    let mut top = 0;
    for (i, m) in marg.iter().enumerate() {
        let mut na = vec![Complex64::new(0.0, 0.0); max_sum + 1];
        let mut nm = vec![0.0f64; max_sum + 1];
        for s in 0..=top {
            if mass[s] == 0.0 {
                continue;
            }
            for (x, &w) in m.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let ph = p.omega((x * b[i] as usize) as i64);
                na[s + x] += amp[s] * ph * w;
                nm[s + x] += mass[s] * w;
            }
        }
        amp = na;
        mass = nm;
        top += pu - 1;
    }
    let mut num = Complex64::new(0.0, 0.0);
    let mut z = 0.0;
    for s in (0..=max_sum).step_by(pu) {
        num += amp[s] * p.omega(-((s / pu) as i64));
        z += mass[s];
    }
    if z == 0.0 {
        return Err(Error::EmptyDistribution);
    }
    Ok(num.re / z)
}

fn check_strategy(game: &GameSpec, b: &[u8]) -> Result<()> {
    if b.len() != game.n {
        return Err(Error::LengthMismatch { expected: game.n, got: b.len() });
    }
    if let Some(&d) = b.iter().find(|&&d| d as u32 >= game.p.get()) {
        return Err(Error::DigitOutOfRange { digit: d as u32, p: game.p.get() });
    }
    Ok(())
}

/// Best linear strategy by exhaustive search over `F_p^n`; ties go to the
/// lexicographically smallest `b`.
pub fn optimal_classical_correlation_bruteforce(game: &GameSpec) -> Result<(LinearStrategy, f64)> {
    optimal_over_range(game, 0, strategy_count(game)?)
}

/// Total number of linear strategies, refusing more than `10^6`.
pub fn strategy_count(game: &GameSpec) -> Result<u64> {
    (game.p.get() as u64)
        .checked_pow(game.n as u32)
        .filter(|&c| c <= 1_000_000)
        .ok_or(Error::TooLarge("strategy space above 10^6"))
}

/// Best strategy among indices `[lo, hi)` in lexicographic order.
pub fn optimal_over_range(game: &GameSpec, lo: u64, hi: u64) -> Result<(LinearStrategy, f64)> {
    let marg = game.marginals();
    let p = game.p;
    let mut best: Option<(Vec<u8>, f64)> = None;
    let mut b = vec![0u8; game.n];
    for idx in lo..hi {
        strategy_from_index(p, idx, &mut b);
        let v = strategy_value_dp(p, &marg, &b)?;
        if best.as_ref().is_none_or(|(_, bv)| v > *bv + 1e-12) {
            best = Some((b.clone(), v));
        }
    }
    let (b, v) = best.ok_or(Error::Invalid("empty strategy range"))?;
    Ok((LinearStrategy { b: DitString::new(p, b)? }, v))
}

/// Writes the `idx`-th strategy in lexicographic order into `b`.
pub fn strategy_from_index(p: Prime, mut idx: u64, b: &mut [u8]) {
    for slot in b.iter_mut().rev() {
        *slot = (idx % p.get() as u64) as u8;
        idx /= p.get() as u64;
    }
}

/// Per-symbol factor `Σ_x Δ(x)·e^{2πi x((p−1)+pb)/p²}`.
pub fn per_symbol_factor(p: Prime, b: u32, kind: DistKind) -> Complex64 {
    let m = (p.get() * p.get()) as u64;
    let step = (p.get() - 1 + p.get() * b) as i64;
    (0..p.get())
        .map(|x| {
            let w = match kind {
                DistKind::UniformDitResidueZero => 1.0 / p.get() as f64,
                _ => encoding_bias(p, x),
            };
            root_of_unity(m, x as i64 * step) * w
        })
        .sum()
}

/// `max_b |per_symbol_factor|`.
pub fn base_constant(p: Prime, kind: DistKind) -> f64 {
    (0..p.get()).map(|b| per_symbol_factor(p, b, kind).norm()).fold(0.0, f64::max)
}

/// The two displayed correlation closed forms, evaluated literally.
///
/// Dit inputs: `Re(Q^{n−r}) / (p^{n−1}(p−1))` with `Q = Σ_x e^{−2πix/p²}`.
/// Hamming inputs (`r` in bits): `Re(K^{(n(p−1)−r)/(p−1)}) / (p−1)` with
/// `K = ((1 + e^{−2πi/p²})/2)^{p−1}`.
pub fn classical_correlation_upper_bound(p: Prime, n: usize, r: usize, kind: DistKind) -> f64 {
    let pf = p.get() as f64;
    let m = (p.get() * p.get()) as u64;
    match kind {
        DistKind::UniformDitResidueZero => {
            let q: Complex64 = (0..p.get()).map(|x| root_of_unity(m, -(x as i64))).sum();
            let e = n.saturating_sub(r) as i32;
            q.powi(e).re / (libm::pow(pf, n as f64 - 1.0) * (pf - 1.0))
        }
        _ => {
            let half = (Complex64::new(1.0, 0.0) + root_of_unity(m, -1)) / 2.0;
            let k = half.powi(p.get() as i32 - 1);
            let bits = n * (p.us() - 1);
            let e = bits.saturating_sub(r) as f64 / (pf - 1.0);
            Complex64::from_polar(libm::pow(k.norm(), e), k.arg() * e).re / (pf - 1.0)
        }
    }
}

/// The looser displayed dit form `p/(p−1)·cos(2π/p²)^{n−r}`.
pub fn dit_bound_cosine_form(p: Prime, n: usize, r: usize) -> f64 {
    let pf = p.get() as f64;
    let c = root_of_unity((p.get() * p.get()) as u64, 1).re;
    pf / (pf - 1.0) * libm::pow(c, n.saturating_sub(r) as f64)
}

/// A bound that provably dominates every linear strategy of `game`:
/// `Π_i max_b |F_i(b)| / Z`, with `F_i` the per-party factor under its
/// restricted marginal and `Z` the probability of the residue-zero slice.
pub fn modulus_bound(game: &GameSpec) -> f64 {
    let p = game.p;
    let m = (p.get() * p.get()) as u64;
    let marg = game.marginals();
    let mut prod = 1.0;
    for mi in &marg {
        let best = (0..p.get())
            .map(|b| {
                let step = (p.get() - 1 + p.get() * b) as i64;
                mi.iter()
                    .enumerate()
                    .map(|(x, &w)| root_of_unity(m, x as i64 * step) * w)
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max);
        prod *= best;
    }
    let z = residue_zero_mass(p, &marg);
    prod / z
}

fn residue_zero_mass(p: Prime, marg: &[Vec<f64>]) -> f64 {
    let pu = p.us();
    let mut dist = vec![0.0f64; pu];
    dist[0] = 1.0;
    for m in marg {
        let mut nd = vec![0.0f64; pu];
        for (s, &w) in dist.iter().enumerate() {
            for (x, &mx) in m.iter().enumerate() {
                nd[(s + x) % pu] += w * mx;
            }
        }
        dist = nd;
    }
    dist[0]
}

/// Displayed qutrit winning-probability bounds: `1/3 + (17/20)^{n−r}` for dits
/// and `1/3 + (9/10)^{(2n−r)/2}` for Hamming-encoded bits (`r` in bits).
pub fn winning_probability_bound_p3(n: usize, r: usize, kind: DistKind) -> f64 {
    match kind {
        DistKind::UniformDitResidueZero => 1.0 / 3.0 + libm::pow(0.85, n.saturating_sub(r) as f64),
        _ => 1.0 / 3.0 + libm::pow(0.9, (2 * n).saturating_sub(r) as f64 / 2.0),
    }
}

/// The conversion of the dit correlation bound through `(1+2c)/3`:
/// `1/3 + (17/20)^{n−r}/3`.
pub fn winning_probability_tight_dit_p3(n: usize, r: usize) -> f64 {
    1.0 / 3.0 + libm::pow(0.85, n.saturating_sub(r) as f64) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Prime {
        Prime::THREE
    }

    #[test]
    fn two_party_binary_hand_value() {
        // p=2 dits are bits; inputs {00, 11}: deviation 0 on 00, −1 on 11 for b=00
        let g = GameSpec::new(Prime::TWO, 2, DistKind::UniformDitResidueZero, vec![]).unwrap();
        let v = strategy_correlation_exact(&g, &[0, 0]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn exhaustive_matches_dynamic_programming() {
        for kind in [DistKind::UniformDitResidueZero, DistKind::HammingEncodedUniformBinary] {
            for n in 1..=5 {
                for fixed in [vec![], vec![1u8], vec![1, 0]] {
                    let Ok(g) = GameSpec::new(p3(), n, kind, fixed) else { continue };
                    let mut b = vec![0u8; n];
                    for idx in 0..3u64.pow(n as u32) {
                        strategy_from_index(p3(), idx, &mut b);
                        match (strategy_correlation_exact(&g, &b), strategy_correlation_product(&g, &b)) {
                            (Ok(a), Ok(c)) => assert!((a - c).abs() < 1e-10, "{kind:?} n={n} b={b:?}: {a} vs {c}"),
                            (a, c) => assert_eq!(a, c),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn fully_restricted_game_is_a_single_point() {
        let g = GameSpec::new(p3(), 3, DistKind::UniformDitResidueZero, vec![1, 2, 0]).unwrap();
        let (_, v) = optimal_classical_correlation_bruteforce(&g).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_party_zero_input() {
        let g = GameSpec::new(p3(), 1, DistKind::UniformDitResidueZero, vec![]).unwrap();
        let (b, v) = optimal_classical_correlation_bruteforce(&g).unwrap();
        assert_eq!(b.b.digits(), [0]);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factor_tables() {
        let dit = [0.45, 0.3, 0.85];
        let bin = [0.59, 0.04, 0.89];
        for b in 0..3 {
            let u = per_symbol_factor(p3(), b, DistKind::UniformDitResidueZero).norm();
            let h = per_symbol_factor(p3(), b, DistKind::HammingEncodedUniformBinary).norm();
            assert!(u < dit[b as usize], "{u}");
            assert!(h < bin[b as usize], "{h}");
        }
        // closed forms of the Hamming table entries
        let s = libm::sin(core::f64::consts::PI / 18.0);
        let h0 = per_symbol_factor(p3(), 0, DistKind::HammingEncodedUniformBinary).norm();
        let h1 = per_symbol_factor(p3(), 1, DistKind::HammingEncodedUniformBinary).norm();
        assert!((h0 - 0.5 * (1.0 + s)).abs() < 1e-12);
        assert!((h1 - s * s).abs() < 1e-12);
    }

    #[test]
    fn base_constant_increases_towards_one() {
        let kinds = [DistKind::UniformDitResidueZero, DistKind::HammingEncodedUniformBinary];
        for kind in kinds {
            let cs: Vec<f64> =
                [3u32, 5, 7, 11, 13].iter().map(|&p| base_constant(Prime::new(p).unwrap(), kind)).collect();
            assert!(cs.windows(2).all(|w| w[0] < w[1]), "{cs:?}");
            assert!(cs.iter().all(|&c| c < 1.0));
        }
    }

    #[test]
    fn binary_literal_form_uses_the_table_constant() {
        // |K| = cos²(π/9) for p = 3
        let k = base_constant(p3(), DistKind::HammingEncodedUniformBinary);
        let c = libm::cos(core::f64::consts::PI / 9.0);
        assert!((k - c * c).abs() < 1e-12);
        let v = classical_correlation_upper_bound(p3(), 4, 0, DistKind::HammingEncodedUniformBinary);
        assert!(v.abs() <= libm::pow(k, 4.0) / 2.0 + 1e-12);
    }

    #[test]
    fn winning_bound_thresholds() {
        let d = DistKind::UniformDitResidueZero;
        let h = DistKind::HammingEncodedUniformBinary;
        assert!(winning_probability_bound_p3(12, 0, d) < 0.5);
        assert!(winning_probability_bound_p3(11, 0, d) > 0.5);
        assert!(winning_probability_bound_p3(18, 0, h) < 0.5);
        assert!(winning_probability_bound_p3(17, 0, h) > 0.5);
        assert!((winning_probability_bound_p3(400, 0, d) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn optimum_respects_modulus_bound() {
        for kind in [DistKind::UniformDitResidueZero, DistKind::HammingEncodedUniformBinary] {
            for n in 1..=6 {
                let g = GameSpec::new(p3(), n, kind, vec![]).unwrap();
                let (_, v) = optimal_classical_correlation_bruteforce(&g).unwrap();
                assert!(v <= modulus_bound(&g) + 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn bounds_decrease_in_free_symbols(n in 2usize..30, r in 0usize..2) {
            let d = DistKind::UniformDitResidueZero;
            prop_assert!(winning_probability_bound_p3(n + 1, r, d) < winning_probability_bound_p3(n, r, d));
            prop_assert!(dit_bound_cosine_form(p3(), n + 1, r) < dit_bound_cosine_form(p3(), n, r));
            let h = DistKind::HammingEncodedUniformBinary;
            prop_assert!(winning_probability_bound_p3(n + 1, r, h) < winning_probability_bound_p3(n, r, h));
        }

        #[test]
        fn restriction_stays_under_modulus_bound(vals in proptest::collection::vec(0u8..3, 0..3), n in 3usize..6) {
            let g = GameSpec::new(p3(), n, DistKind::UniformDitResidueZero, vals).unwrap();
            let (_, v) = optimal_classical_correlation_bruteforce(&g).unwrap();
            prop_assert!(v <= modulus_bound(&g) + 1e-12);
        }
    }
}
