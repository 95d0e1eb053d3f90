//! Partial assignments `{0, 1, ⋆}^n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Restriction {
    vals: Vec<Option<bool>>,
}

impl Restriction {
    pub fn new(vals: Vec<Option<bool>>) -> Self {
        Restriction { vals }
    }

    pub fn all_stars(n: usize) -> Self {
        Restriction { vals: vec![None; n] }
    }

    pub fn from_assignment(x: &[u8]) -> Self {
        Restriction { vals: x.iter().map(|&b| Some(b == 1)).collect() }
    }

    /// Parses strings such as `"01**1"`.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Some(false)),
                '1' => Ok(Some(true)),
                '*' => Ok(None),
                _ => Err(Error::Invalid("restriction symbols are 0, 1, *")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Restriction::new)
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.vals[i]
    }

    pub fn values(&self) -> &[Option<bool>] {
        &self.vals
    }

    pub fn is_star(&self, i: usize) -> bool {
        self.vals[i].is_none()
    }

    pub fn stars(&self) -> Vec<usize> {
        (0..self.vals.len()).filter(|&i| self.vals[i].is_none()).collect()
    }

    pub fn star_count(&self) -> usize {
        self.vals.iter().filter(|v| v.is_none()).count()
    }

    pub fn set(&mut self, i: usize, v: Option<bool>) {
        self.vals[i] = v;
    }

    /// `ρ∘τ`: keep what `ρ` fixes, take `τ` on the stars of `ρ`.
    pub fn compose(&self, tau: &Restriction) -> Result<Restriction> {
        if tau.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: tau.len() });
        }
        Ok(Restriction {
            vals: self.vals.iter().zip(&tau.vals).map(|(a, b)| a.or(*b)).collect(),
        })
    }

    /// True when `other` agrees with every value fixed here.
    pub fn is_refined_by(&self, other: &Restriction) -> bool {
        self.len() == other.len()
            && self.vals.iter().zip(&other.vals).all(|(a, b)| a.is_none() || a == b)
    }

    /// Fills the stars from `x`.
    pub fn complete(&self, x: &[u8]) -> Vec<u8> {
        self.vals.iter().zip(x).map(|(v, &b)| v.map_or(b, u8::from)).collect()
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vals {
            f.write_str(match v {
                Some(false) => "0",
                Some(true) => "1",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// Each variable independently stays `⋆` with probability `keep`, otherwise
/// takes a uniform bit.
pub fn sample_restriction<R: Rng + ?Sized>(n: usize, keep: f64, rng: &mut R) -> Result<Restriction> {
    if !(keep > 0.0 && keep < 1.0) {
        return Err(Error::OutOfRange("keep probability must lie in (0, 1)"));
    }
    Ok(Restriction {
        vals: (0..n)
            .map(|_| if rng.random::<f64>() < keep { None } else { Some(rng.random::<bool>()) })
            .collect(),
    })
}
