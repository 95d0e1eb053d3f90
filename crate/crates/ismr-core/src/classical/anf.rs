//! Algebraic normal forms over F₂ with monomials stored as variable bitmasks.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest arity accepted by the truth-table routines.
pub const TRUTH_TABLE_LIMIT: usize = 20;

/// XOR of monomials; the empty mask is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Anf {
    monomials: BTreeSet<u64>,
}

impl Anf {
    pub fn zero() -> Self {
        Anf::default()
    }

    pub fn one() -> Self {
        Anf::monomial(0)
    }

    pub fn constant(b: bool) -> Self {
        if b { Anf::one() } else { Anf::zero() }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < 64, "variables are limited to 64");
        Anf::monomial(1u64 << i)
    }

    pub fn monomial(mask: u64) -> Self {
        let mut m = BTreeSet::new();
        m.insert(mask);
        Anf { monomials: m }
    }

    pub fn from_monomials(it: impl IntoIterator<Item = u64>) -> Self {
        let mut a = Anf::zero();
        for m in it {
            a.toggle(m);
        }
        a
    }

    fn toggle(&mut self, m: u64) {
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = u64> + '_ {
        self.monomials.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn constant_term(&self) -> bool {
        self.monomials.contains(&0)
    }

    pub fn degree(&self) -> usize {
        self.monomials.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    pub fn count_degree_terms(&self, deg: usize) -> usize {
        self.monomials.iter().filter(|m| m.count_ones() as usize == deg).count()
    }

    pub fn xor(&self, other: &Anf) -> Anf {
        let mut out = self.clone();
        for &m in &other.monomials {
            out.toggle(m);
        }
        out
    }

    /// Product over F₂ (`x_i² = x_i`).
    pub fn and(&self, other: &Anf) -> Anf {
        let mut out = Anf::zero();
        for &a in &self.monomials {
            for &b in &other.monomials {
                out.toggle(a | b);
            }
        }
        out
    }

    /// `x ⊕ y ⊕ xy`.
    pub fn or(&self, other: &Anf) -> Anf {
        self.xor(other).xor(&self.and(other))
    }

    pub fn not(&self) -> Anf {
        self.xor(&Anf::one())
    }

    /// Evaluates on the assignment whose bit `i` is `x_i`.
    pub fn eval(&self, x: u64) -> bool {
        self.monomials.iter().filter(|&&m| x & m == m).count() % 2 == 1
    }

    pub fn eval_bits(&self, x: &[u8]) -> bool {
        self.eval(pack(x))
    }

    /// Substitutes constants for the variables in `fixed` (mask, values).
    pub fn restrict(&self, fixed_mask: u64, values: u64) -> Anf {
        let mut out = Anf::zero();
        for &m in &self.monomials {
            let hit = m & fixed_mask;
            if values & hit == hit {
                out.toggle(m & !fixed_mask);
            }
        }
        out
    }

    /// Truth table indexed by the packed assignment.
    pub fn truth_table(&self, n: usize) -> Result<Vec<u8>> {
        if n > TRUTH_TABLE_LIMIT {
            return Err(Error::TooLarge("truth table above 2^20 rows"));
        }
        if self.monomials.iter().any(|&m| m >> n != 0) {
            return Err(Error::Invalid("monomial outside the first n variables"));
        }
        // zeta transform, the inverse of the Möbius transform over F₂
        let len = 1usize << n;
        let mut t = alloc::vec![0u8; len];
        for &m in &self.monomials {
            t[m as usize] = 1;
        }
        for i in 0..n {
            let bit = 1usize << i;
            for x in 0..len {
                if x & bit != 0 {
                    t[x] ^= t[x ^ bit];
                }
            }
        }
        Ok(t)
    }
}

/// Packs a bit slice (index 0 is the least significant bit).
pub fn pack(x: &[u8]) -> u64 {
    x.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (((b & 1) as u64) << i))
}

/// Möbius transform of a truth table of length `2^n`.
pub fn anf_from_truth_table(f: &[u8]) -> Result<Anf> {
    let len = f.len();
    if !len.is_power_of_two() {
        return Err(Error::Invalid("truth table length must be a power of two"));
    }
    let n = len.trailing_zeros() as usize;
    if n > TRUTH_TABLE_LIMIT {
        return Err(Error::TooLarge("truth table above 2^20 rows"));
    }
    let mut a: Vec<u8> = f.iter().map(|&b| b & 1).collect();
    for i in 0..n {
        let bit = 1usize << i;
        for x in 0..len {
            if x & bit != 0 {
                a[x] ^= a[x ^ bit];
            }
        }
    }
    Ok(Anf::from_monomials(a.iter().enumerate().filter(|(_, &v)| v == 1).map(|(m, _)| m as u64)))
}

/// ANF of `lsb` on `n` variables.
pub fn lsb_anf(n: usize) -> Result<Anf> {
    if n > TRUTH_TABLE_LIMIT {
        return Err(Error::TooLarge("truth table above 2^20 rows"));
    }
    let table: Vec<u8> = (0..1u64 << n).map(|x| u8::from(x.count_ones() % 4 < 2)).collect();
    anf_from_truth_table(&table)
}

/// Members of the even-input solution family `e₂(x) ⊕ (⊕x_j)·g` with `g` of
/// degree at most 1 (`g = c ⊕ ⊕_{j∈T} x_j`); returns the smallest number of
/// degree-2 monomials over all such `g`.
pub fn min_degree2_terms_affine_g(n: usize) -> Result<usize> {
    if n > 16 {
        return Err(Error::TooLarge("affine g search above 16 variables"));
    }
    let mut even = Anf::zero();
    for i in 0..n {
        for j in i + 1..n {
            even.toggle((1u64 << i) | (1u64 << j));
        }
    }
    let parity = Anf::from_monomials((0..n).map(|i| 1u64 << i));
    let mut best = usize::MAX;
    for t in 0u64..1 << n {
        for c in [false, true] {
            let g = Anf::from_monomials((0..n).filter(|i| t >> i & 1 == 1).map(|i| 1u64 << i))
                .xor(&Anf::constant(c));
            let f = even.xor(&parity.and(&g));
            best = best.min(f.count_degree_terms(2));
        }
    }
    Ok(best)
}
