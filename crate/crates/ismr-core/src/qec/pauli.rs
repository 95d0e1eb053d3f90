//! Generalized Pauli operators `ω^k Z(a) X(b)` and their Clifford conjugation.

use alloc::vec;
use alloc::vec::Vec;

use crate::qsim::Gate;
use crate::{Error, Prime, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    p: Prime,
    pub phase: u32,
    pub z: Vec<u32>,
    pub x: Vec<u32>,
}

impl PauliOperator {
    pub fn identity(p: Prime, n: usize) -> Self {
        PauliOperator { p, phase: 0, z: vec![0; n], x: vec![0; n] }
    }

    pub fn new(p: Prime, phase: u32, z: Vec<u32>, x: Vec<u32>) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::LengthMismatch { expected: z.len(), got: x.len() });
        }
        if let Some(&d) = z.iter().chain(&x).chain([&phase]).find(|&&d| d >= p.get()) {
            return Err(Error::DigitOutOfRange { digit: d, p: p.get() });
        }
        Ok(PauliOperator { p, phase, z, x })
    }

    pub fn single_x(p: Prime, n: usize, site: usize, a: u32) -> Self {
        let mut o = PauliOperator::identity(p, n);
        o.x[site] = a % p.get();
        o
    }

    pub fn single_z(p: Prime, n: usize, site: usize, a: u32) -> Self {
        let mut o = PauliOperator::identity(p, n);
        o.z[site] = a % p.get();
        o
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.x[i] != 0 || self.z[i] != 0).collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&d| d == 0)
    }

    /// `self · other`, reordered into `ω^k Z(a) X(b)` form.
    pub fn compose(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n() != other.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: other.n() });
        }
        let p = self.p;
        // Z^a X^b Z^c X^d = ω^{-b·c} Z^{a+c} X^{b+d}
        let cross = self.x.iter().zip(&other.z).fold(0, |acc, (&b, &c)| p.add(acc, p.mul(b, c)));
        Ok(PauliOperator {
            p,
            phase: p.sub(p.add(self.phase, other.phase), cross),
            z: self.z.iter().zip(&other.z).map(|(&a, &c)| p.add(a, c)).collect(),
            x: self.x.iter().zip(&other.x).map(|(&b, &d)| p.add(b, d)).collect(),
        })
    }

    pub fn inverse(&self) -> PauliOperator {
        let p = self.p;
        let ab = self.z.iter().zip(&self.x).fold(0, |acc, (&a, &b)| p.add(acc, p.mul(a, b)));
        PauliOperator {
            p,
            phase: p.neg(p.add(self.phase, ab)),
            z: self.z.iter().map(|&a| p.neg(a)).collect(),
            x: self.x.iter().map(|&b| p.neg(b)).collect(),
        }
    }

    /// Exponent `s` with `P Q = ω^s Q P`.
    pub fn symplectic(&self, other: &PauliOperator) -> u32 {
        let p = self.p;
        let a = self.z.iter().zip(&other.x).fold(0, |acc, (&z, &x)| p.add(acc, p.mul(z, x)));
        let b = self.x.iter().zip(&other.z).fold(0, |acc, (&x, &z)| p.add(acc, p.mul(x, z)));
        p.sub(a, b)
    }

    /// `U P U†` for a Clifford gate `U`.
    pub fn conjugate(&mut self, g: &Gate) -> Result<()> {
        let p = self.p;
        let n = self.n();
        let check = |t: usize| if t < n { Ok(()) } else { Err(Error::OutOfRange("gate target")) };
        match *g {
            Gate::X { t, a } => {
                check(t)?;
                self.phase = p.sub(self.phase, p.mul(a % p.get(), self.z[t]));
            }
            Gate::Z { t, a } => {
                check(t)?;
                self.phase = p.add(self.phase, p.mul(a % p.get(), self.x[t]));
            }
            Gate::Fourier { t } => {
                check(t)?;
                let (a, b) = (self.z[t], self.x[t]);
                self.phase = p.add(self.phase, p.mul(a, b));
                self.z[t] = b;
                self.x[t] = p.neg(a);
            }
            Gate::FourierDag { t } => {
                check(t)?;
                let (a, b) = (self.z[t], self.x[t]);
                self.phase = p.add(self.phase, p.mul(a, b));
                self.z[t] = p.neg(b);
                self.x[t] = a;
            }
            Gate::Sum { c, t, a } => {
                check(c)?;
                check(t)?;
                let a = a % p.get();
                self.z[c] = p.sub(self.z[c], p.mul(a, self.z[t]));
                self.x[t] = p.add(self.x[t], p.mul(a, self.x[c]));
            }
            Gate::Inv { t } => {
                check(t)?;
                self.z[t] = p.neg(self.z[t]);
                self.x[t] = p.neg(self.x[t]);
            }
            Gate::Cz { a, b, pow } => {
                check(a)?;
                check(b)?;
                let pow = pow % p.get();
                let (ba, bb) = (self.x[a], self.x[b]);
                self.z[a] = p.add(self.z[a], p.mul(pow, bb));
                self.z[b] = p.add(self.z[b], p.mul(pow, ba));
                self.phase = p.sub(self.phase, p.mul(pow, p.mul(ba, bb)));
            }
            _ => return Err(Error::NonCliffordGate),
        }
        Ok(())
    }
}

pub fn conjugate_pauli_through_clifford(gates: &[Gate], pauli: &PauliOperator) -> Result<PauliOperator> {
    let mut out = pauli.clone();
    for g in gates {
        out.conjugate(g)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::QupitState;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn apply_pauli(s: &mut QupitState, o: &PauliOperator) {
        for t in 0..o.n() {
            s.apply_gate(&Gate::X { t, a: o.x[t] }).unwrap();
            s.apply_gate(&Gate::Z { t, a: o.z[t] }).unwrap();
        }
        let ph = o.p().omega(o.phase as i64);
        let amps: Vec<Complex64> = s.amplitudes().iter().map(|a| a * ph).collect();
        *s = QupitState::from_amplitudes(o.p(), o.n(), amps).unwrap();
    }

    /// Checks `U P = P' U` on every basis state.
    fn dense_check(p: u32, n: usize, gates: &[Gate], o: &PauliOperator) -> bool {
        let pr = Prime::new(p).unwrap();
        let img = conjugate_pauli_through_clifford(gates, o).unwrap();
        let dim = (p as usize).pow(n as u32);
        for idx in 0..dim {
            let digits: Vec<u8> = (0..n).rev().map(|k| (idx / (p as usize).pow(k as u32) % p as usize) as u8).collect();
            let mut lhs = QupitState::basis(pr, &digits).unwrap();
            apply_pauli(&mut lhs, o);
            let mut rhs = QupitState::basis(pr, &digits).unwrap();
            for g in gates {
                lhs.apply_gate(g).unwrap();
                rhs.apply_gate(g).unwrap();
            }
            apply_pauli(&mut rhs, &img);
            let diff = lhs.amplitudes().iter().zip(rhs.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if diff > 1e-9 {
                return false;
            }
        }
        true
    }

    fn random_pauli<R: Rng>(p: Prime, n: usize, rng: &mut R) -> PauliOperator {
        let q = p.get();
        PauliOperator::new(
            p,
            rng.random_range(0..q),
            (0..n).map(|_| rng.random_range(0..q)).collect(),
            (0..n).map(|_| rng.random_range(0..q)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn fourier_maps_x_to_z_and_z_to_x_inverse() {
        let p = Prime::new(3).unwrap();
        let x = PauliOperator::single_x(p, 1, 0, 1);
        let z = PauliOperator::single_z(p, 1, 0, 1);
        let f = [Gate::Fourier { t: 0 }];
        assert_eq!(conjugate_pauli_through_clifford(&f, &x).unwrap(), z);
        assert_eq!(conjugate_pauli_through_clifford(&f, &z).unwrap(), PauliOperator::single_x(p, 1, 0, 2));
        assert_eq!(conjugate_pauli_through_clifford(&[], &x).unwrap(), x);
    }

    #[test]
    fn sum_spreads_control_x() {
        let p = Prime::new(3).unwrap();
        let x = PauliOperator::single_x(p, 2, 0, 1);
        let img = conjugate_pauli_through_clifford(&[Gate::Sum { c: 0, t: 1, a: 1 }], &x).unwrap();
        assert_eq!(img.x, vec![1, 1]);
        assert_eq!(img.z, vec![0, 0]);
    }

    #[test]
    fn conjugation_matches_dense_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for p in [2u32, 3, 5] {
            let pr = Prime::new(p).unwrap();
            let n = if p == 5 { 2 } else { 3 };
            for _ in 0..20 {
                let gates: Vec<Gate> = (0..6)
                    .map(|_| {
                        let t = rng.random_range(0..n);
                        let c = (t + rng.random_range(1..n)) % n;
                        let a = rng.random_range(1..p);
                        match rng.random_range(0..7) {
                            0 => Gate::X { t, a },
                            1 => Gate::Z { t, a },
                            2 => Gate::Fourier { t },
                            3 => Gate::FourierDag { t },
                            4 => Gate::Sum { c, t, a },
                            5 => Gate::Inv { t },
                            _ => Gate::Cz { a: c, b: t, pow: a },
                        }
                    })
                    .collect();
                let o = random_pauli(pr, n, &mut rng);
                assert!(dense_check(p, n, &gates, &o), "p={p} {gates:?} {o:?}");
            }
        }
    }

    #[test]
    fn rotations_are_rejected() {
        let p = Prime::new(3).unwrap();
        let o = PauliOperator::single_x(p, 1, 0, 1);
        assert_eq!(
            conjugate_pauli_through_clifford(&[Gate::Rz { t: 0, a: 1 }], &o),
            Err(Error::NonCliffordGate)
        );
    }

    #[test]
    fn composition_and_commutation_phase() {
        let p = Prime::new(5).unwrap();
        let x = PauliOperator::single_x(p, 1, 0, 1);
        let z = PauliOperator::single_z(p, 1, 0, 1);
        // ZX = ω XZ
        let zx = z.compose(&x).unwrap();
        let xz = x.compose(&z).unwrap();
        assert_eq!(zx.phase, p.add(xz.phase, 1));
        assert_eq!(z.symplectic(&x), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let o = random_pauli(p, 4, &mut rng);
        assert_eq!(o.compose(&o.inverse()).unwrap(), PauliOperator::identity(p, 4));
    }
}
