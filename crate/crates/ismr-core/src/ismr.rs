//! The ISMR relation family, the bit-to-dit Hamming encoding and the
//! roots-of-unity correlation measure.

use alloc::vec::Vec;

use rand::Rng;

use crate::field::{binomial, DitString, Prime};
use crate::{Error, Result};

/// One relation instance `R_p^m`: inputs of length `n`, outputs of length `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsmrInstance {
    pub p: Prime,
    pub n: usize,
    pub m: usize,
}

impl IsmrInstance {
    pub fn new(p: Prime, n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("output length must be at least 1"));
        }
        Ok(IsmrInstance { p, n, m })
    }
}

/// Target residue `−(|x|/p) mod p` for a bit string with `|x| ≡ 0 (mod p)`.
pub fn ismr_residue(p: Prime, x: &[u8]) -> Result<u32> {
    let w = weight(x);
    if !w.is_multiple_of(p.us()) {
        return Err(Error::ResidueViolation { weight: w, p: p.get() });
    }
    Ok(p.neg(((w / p.us()) % p.us()) as u32))
}

/// True iff `|y| mod p` equals the target residue of `x`.
pub fn ismr_verify(inst: &IsmrInstance, x: &[u8], y: &[u8]) -> Result<bool> {
    if x.len() != inst.n {
        return Err(Error::LengthMismatch { expected: inst.n, got: x.len() });
    }
    if y.len() != inst.m {
        return Err(Error::LengthMismatch { expected: inst.m, got: y.len() });
    }
    let target = ismr_residue(inst.p, x)?;
    Ok((digit_sum(y) % inst.p.us()) as u32 == target)
}

/// Second least significant bit of the weight, inverted: 1 iff `|x| mod 4 ∈ {0,1}`.
pub fn lsb(x: &[u8]) -> u8 {
    u8::from(weight(x) % 4 < 2)
}

/// Block sums of `p−1` bits.
pub fn hamming_encode(bits: &[u8], p: Prime) -> Result<DitString> {
    let b = p.us() - 1;
    if !bits.len().is_multiple_of(b) {
        return Err(Error::LengthMismatch { expected: bits.len().div_ceil(b) * b, got: bits.len() });
    }
    let digits = bits.chunks(b).map(|c| weight(c) as u8).collect();
    DitString::new(p, digits)
}

/// Canonical preimage: each digit `d` becomes `d` ones followed by zeros.
pub fn hamming_decode_canonical(dits: &[u8], p: Prime) -> Result<Vec<u8>> {
    let b = p.us() - 1;
    let mut out = Vec::with_capacity(dits.len() * b);
    for &d in dits {
        if d as usize > b {
            return Err(Error::DigitOutOfRange { digit: d as u32, p: p.get() });
        }
        out.extend((0..b).map(|i| u8::from(i < d as usize)));
    }
    Ok(out)
}

/// Probability that a uniformly random block of `p−1` bits encodes `v`.
pub fn encoding_bias(p: Prime, v: u32) -> f64 {
    if v >= p.get() {
        return 0.0;
    }
    let b = (p.get() - 1) as u64;
    binomial(b, v as u64) / libm::ldexp(1.0, b as i32)
}

/// `E[Re ω^{f−g}]` over weighted `(f, g, weight)` triples.
pub fn correlation(p: Prime, items: &[(u32, u32, f64)]) -> Result<f64> {
    if items.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let total: f64 = items.iter().map(|t| t.2).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Invalid("weights must sum to 1"));
    }
    Ok(items
        .iter()
        .map(|&(f, g, w)| w * p.omega(f as i64 - g as i64).re)
        .sum())
}

/// `(1 + 2c)/3`, the qutrit success probability for correlation `c`.
pub fn success_from_correlation_p3(c: f64) -> Result<f64> {
    if !(-0.5 - 1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(Error::OutOfRange("correlation must lie in [-1/2, 1]"));
    }
    Ok((1.0 + 2.0 * c) / 3.0)
}

/// Which slice of inputs a distribution covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistKind {
    /// Bit strings of length `n` with `|x| ≡ 0 (mod p)`.
    UniformBinaryResidueZero,
    /// Dit strings of length `n` with digit sum `≡ 0 (mod p)`.
    UniformDitResidueZero,
    /// Uniform bits of length `n(p−1)` with weight `≡ 0`, Hamming-encoded to `n` dits.
    HammingEncodedUniformBinary,
}

impl DistKind {
    pub fn name(self) -> &'static str {
        match self {
            DistKind::UniformBinaryResidueZero => "uniform-binary",
            DistKind::UniformDitResidueZero => "uniform-dit",
            DistKind::HammingEncodedUniformBinary => "hamming-binary",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "uniform-binary" | "UniformBinaryResidueZero" => Some(DistKind::UniformBinaryResidueZero),
            "uniform-dit" | "dit" | "UniformDitResidueZero" => Some(DistKind::UniformDitResidueZero),
            "hamming-binary" | "binary" | "HammingEncodedUniformBinary" => {
                Some(DistKind::HammingEncodedUniformBinary)
            }
            _ => None,
        }
    }
}

/// Enumeration limit: strings are listed explicitly up to `2^24` raw points.
pub const ENUMERATION_LIMIT: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputDistribution {
    pub kind: DistKind,
    pub n: usize,
    pub p: Prime,
}

impl InputDistribution {
    pub fn new(kind: DistKind, n: usize, p: Prime) -> Self {
        InputDistribution { kind, n, p }
    }

    /// Length and alphabet of the raw (pre-encoding) string.
    fn raw_shape(&self) -> (usize, u32) {
        match self.kind {
            DistKind::UniformBinaryResidueZero => (self.n, 2),
            DistKind::UniformDitResidueZero => (self.n, self.p.get()),
            DistKind::HammingEncodedUniformBinary => (self.n * (self.p.us() - 1), 2),
        }
    }

    fn raw_count(&self) -> Option<u64> {
        let (len, q) = self.raw_shape();
        (q as u64).checked_pow(len as u32)
    }

    /// Every supported string with its probability.
    pub fn enumerate(&self) -> Result<Vec<(DitString, f64)>> {
        let count = self
            .raw_count()
            .filter(|&c| c <= ENUMERATION_LIMIT)
            .ok_or(Error::TooLarge("distribution enumeration"))?;
        let (len, q) = self.raw_shape();
        let mut raw = alloc::vec![0u8; len];
        let mut hits: Vec<DitString> = Vec::new();
        for idx in 0..count {
            let mut r = idx;
            for slot in raw.iter_mut().rev() {
                *slot = (r % q as u64) as u8;
                r /= q as u64;
            }
            if digit_sum(&raw).is_multiple_of(self.p.us()) {
                hits.push(self.finish(&raw)?);
            }
        }
        if hits.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let w = 1.0 / hits.len() as f64;
        Ok(hits.into_iter().map(|s| (s, w)).collect())
    }

    fn finish(&self, raw: &[u8]) -> Result<DitString> {
        match self.kind {
            DistKind::UniformBinaryResidueZero => DitString::bits(raw),
            DistKind::UniformDitResidueZero => DitString::new(self.p, raw.to_vec()),
            DistKind::HammingEncodedUniformBinary => hamming_encode(raw, self.p),
        }
    }

    /// Rejection sampler for the residue-zero slice; returns the raw string.
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        let (len, q) = self.raw_shape();
        let mut raw = alloc::vec![0u8; len];
        loop {
            for slot in raw.iter_mut() {
                *slot = rng.random_range(0..q) as u8;
            }
            if digit_sum(&raw).is_multiple_of(self.p.us()) {
                return raw;
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DitString {
        let raw = self.sample_raw(rng);
        self.finish(&raw).expect("sampled digits are in range")
    }
}

/// Uniform sample of the residue-zero slice.
pub fn sample_valid_input<R: Rng + ?Sized>(dist: &InputDistribution, rng: &mut R) -> DitString {
    dist.sample(rng)
}

#[inline]
pub(crate) fn weight(x: &[u8]) -> usize {
    x.iter().filter(|&&b| b != 0).count()
}

#[inline]
pub(crate) fn digit_sum(x: &[u8]) -> usize {
    x.iter().map(|&d| d as usize).sum()
}
