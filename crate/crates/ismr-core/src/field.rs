//! Small prime fields and strings over them.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use core::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// A supported prime dimension, `2 <= p <= 13`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);
    pub const THREE: Prime = Prime(3);

    pub fn new(p: u32) -> Result<Self> {
        match p {
            2 | 3 | 5 | 7 | 11 | 13 => Ok(Prime(p)),
            _ => Err(Error::NotPrime(p)),
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn us(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b % self.0) % self.0
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.0 - a % self.0) % self.0
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.0
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, self.0 - 2))
    }

    /// `ω^k` with `ω = e^{2πi/p}`, argument reduced before the trig call.
    pub fn omega(self, k: i64) -> Complex64 {
        root_of_unity(self.0 as u64, k)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `e^{2πik/m}` with `k` reduced mod `m` first.
pub fn root_of_unity(m: u64, k: i64) -> Complex64 {
    let r = k.rem_euclid(m as i64) as f64;
    Complex64::from_polar(1.0, TAU * r / m as f64)
}

/// A string over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DitString {
    p: Prime,
    digits: Vec<u8>,
}

impl DitString {
    pub fn new(p: Prime, digits: Vec<u8>) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d as u32 >= p.get()) {
            return Err(Error::DigitOutOfRange { digit: d as u32, p: p.get() });
        }
        Ok(DitString { p, digits })
    }

    pub fn zeros(p: Prime, n: usize) -> Self {
        DitString { p, digits: alloc::vec![0; n] }
    }

    pub fn bits(bits: &[u8]) -> Result<Self> {
        DitString::new(Prime::TWO, bits.to_vec())
    }

    /// Parses an ASCII digit string such as `"0121"`.
    pub fn parse(p: Prime, s: &str) -> Result<Self> {
        let mut digits = Vec::with_capacity(s.len());
        for ch in s.trim().chars() {
            let d = ch.to_digit(p.get().max(10)).ok_or(Error::Invalid("non-digit character"))?;
            digits.push(d as u8);
        }
        DitString::new(p, digits)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    /// Number of nonzero digits.
    pub fn hamming_weight(&self) -> usize {
        self.digits.iter().filter(|&&d| d != 0).count()
    }

    /// Integer sum of the digits (the weight `|x|` used by the relations).
    pub fn digit_sum(&self) -> usize {
        self.digits.iter().map(|&d| d as usize).sum()
    }

    pub fn residue(&self) -> u32 {
        (self.digit_sum() % self.p.us()) as u32
    }

    pub fn to_ascii(&self) -> String {
        self.digits
            .iter()
            .map(|&d| char::from_digit(d as u32, 36).unwrap_or('?'))
            .collect()
    }
}

impl fmt::Display for DitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ascii())
    }
}

/// Binomial coefficient as f64 (exact for the small arguments used here).
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    libm::round(acc)
}

/// Exact binomial coefficient in u128.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_accepted_and_rejected() {
        for p in [2, 3, 5, 7, 11, 13] {
            assert!(Prime::new(p).is_ok());
        }
        for p in [0, 1, 4, 9, 15, 17] {
            assert_eq!(Prime::new(p), Err(Error::NotPrime(p)));
        }
    }

    #[test]
    fn field_inverse_table() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            let f = Prime::new(p).unwrap();
            for a in 1..p {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            assert_eq!(f.inv(0), None);
        }
    }

    #[test]
    fn digit_strings_round_trip_ascii() {
        let p = Prime::new(5).unwrap();
        let s = DitString::parse(p, "04123").unwrap();
        assert_eq!(s.to_ascii(), "04123");
        assert_eq!(s.hamming_weight(), 4);
        assert_eq!(s.digit_sum(), 10);
        assert!(DitString::parse(p, "05").is_err());
    }

    #[test]
    fn roots_of_unity_reduce() {
        let w = root_of_unity(9, 10);
        let v = root_of_unity(9, 1);
        assert!((w - v).norm() < 1e-15);
        assert!((root_of_unity(4, 1) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial_u128(34, 8), 18_156_204);
        assert_eq!(binomial(3, 5), 0.0);
    }
}
