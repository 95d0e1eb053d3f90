//! Dense qupit state vectors and the gate set acting on them.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::field::{root_of_unity, Prime};
use crate::{Error, Result};

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 1 << 24;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Gates understood by [`QupitState::apply_gate`]. Measurements are separate
/// methods on the state.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// `X^a|j⟩ = |j+a⟩`.
    X { t: usize, a: u32 },
    /// `Z^a|j⟩ = ω^{aj}|j⟩`.
    Z { t: usize, a: u32 },
    /// `F|y⟩ = p^{−1/2} Σ_x ω^{xy}|x⟩`.
    Fourier { t: usize },
    FourierDag { t: usize },
    /// `|c,t⟩ ↦ |c, t + a·c⟩`.
    Sum { c: usize, t: usize, a: u32 },
    /// `|j⟩ ↦ |−j⟩`.
    Inv { t: usize },
    /// `|j,k⟩ ↦ ω^{a·jk}|j,k⟩`.
    Cz { a: usize, b: usize, pow: u32 },
    /// `R_Z(2πa/p²)|j⟩ = e^{2πi·aj/p²}|j⟩`.
    Rz { t: usize, a: i64 },
    /// `R_Z(θ)|j⟩ = e^{iθj}|j⟩` for arbitrary θ.
    Phase { t: usize, theta: f64 },
    /// Global phase `e^{iθ}` (acts on one register for bookkeeping).
    GRz { t: usize, theta: f64 },
    /// `e^{iθ}` on basis values in `set`, identity elsewhere.
    GRzSet { t: usize, theta: f64, set: Vec<u32> },
}

/// Amplitudes over `n` qupits; qupit 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct QupitState {
    p: Prime,
    n: usize,
    amps: Vec<Complex64>,
}

fn dim(p: Prime, n: usize) -> Result<usize> {
    (p.us())
        .checked_pow(n as u32)
        .filter(|&d| d <= MAX_DIM)
        .ok_or(Error::TooLarge("p^n above 2^24"))
}

impl QupitState {
    /// `|0…0⟩`.
    pub fn zero(p: Prime, n: usize) -> Result<Self> {
        let d = dim(p, n)?;
        let mut amps = vec![ZERO; d];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(QupitState { p, n, amps })
    }

    pub fn basis(p: Prime, digits: &[u8]) -> Result<Self> {
        let mut s = QupitState::zero(p, digits.len())?;
        s.amps[0] = ZERO;
        let idx = s.index_of(digits)?;
        s.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Builds a state from raw amplitudes and normalises it.
    pub fn from_amplitudes(p: Prime, n: usize, amps: Vec<Complex64>) -> Result<Self> {
        let d = dim(p, n)?;
        if amps.len() != d {
            return Err(Error::LengthMismatch { expected: d, got: amps.len() });
        }
        let mut s = QupitState { p, n, amps };
        let nrm = s.norm();
        if nrm == 0.0 {
            return Err(Error::Invalid("zero vector"));
        }
        s.amps.iter_mut().for_each(|a| *a /= nrm);
        Ok(s)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|a| a.norm_sqr()).sum())
    }

    pub fn amplitude(&self, digits: &[u8]) -> Result<Complex64> {
        Ok(self.amps[self.index_of(digits)?])
    }

    pub fn index_of(&self, digits: &[u8]) -> Result<usize> {
        if digits.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: digits.len() });
        }
        let mut idx = 0usize;
        for &d in digits {
            if d as u32 >= self.p.get() {
                return Err(Error::DigitOutOfRange { digit: d as u32, p: self.p.get() });
            }
            idx = idx * self.p.us() + d as usize;
        }
        Ok(idx)
    }

    pub fn digits_of(&self, mut idx: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.p.us()) as u8;
            idx /= self.p.us();
        }
        out
    }

    #[inline]
    fn stride(&self, t: usize) -> usize {
        self.p.us().pow((self.n - 1 - t) as u32)
    }

    #[inline]
    fn digit(&self, idx: usize, t: usize) -> usize {
        (idx / self.stride(t)) % self.p.us()
    }

    fn check(&self, t: usize) -> Result<()> {
        if t >= self.n {
            Err(Error::TargetOutOfRange { target: t, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &QupitState) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::Invalid("tensor of different dimensions"));
        }
        dim(self.p, self.n + other.n)?;
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(QupitState { p: self.p, n: self.n + other.n, amps })
    }

    /// Applies a `p×p` row-major matrix to qupit `t`.
    pub fn apply_single(&mut self, t: usize, m: &[Complex64]) -> Result<()> {
        self.check(t)?;
        let p = self.p.us();
        if m.len() != p * p {
            return Err(Error::LengthMismatch { expected: p * p, got: m.len() });
        }
        let s = self.stride(t);
        let block = s * p;
        let mut buf = vec![ZERO; p];
        for base in (0..self.amps.len()).step_by(block) {
            for off in 0..s {
                for (j, b) in buf.iter_mut().enumerate() {
                    *b = self.amps[base + off + j * s];
                }
                for i in 0..p {
                    let mut acc = ZERO;
                    for (j, b) in buf.iter().enumerate() {
                        acc += m[i * p + j] * b;
                    }
                    self.amps[base + off + i * s] = acc;
                }
            }
        }
        Ok(())
    }

    fn apply_diagonal(&mut self, t: usize, diag: &[Complex64]) -> Result<()> {
        self.check(t)?;
        for idx in 0..self.amps.len() {
            let d = self.digit(idx, t);
            self.amps[idx] *= diag[d];
        }
        Ok(())
    }

    /// Rewrites digit `t` of every basis index through `f(index, old_digit)`.
    fn permute_digit(&mut self, t: usize, f: impl Fn(usize, usize) -> usize) {
        let s = self.stride(t);
        let mut out = vec![ZERO; self.amps.len()];
        for idx in 0..self.amps.len() {
            let a = self.amps[idx];
            if a == ZERO {
                continue;
            }
            let old = (idx / s) % self.p.us();
            let new = f(idx, old);
            out[idx - old * s + new * s] += a;
        }
        self.amps = out;
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        let p = self.p;
        let pu = p.us();
        match g {
            Gate::X { t, a } => {
                self.check(*t)?;
                let (t, a) = (*t, *a as usize);
                self.permute_digit(t, |_, d| (d + a) % pu);
                Ok(())
            }
            Gate::Z { t, a } => {
                let diag: Vec<_> = (0..pu).map(|j| p.omega((*a as usize * j) as i64)).collect();
                self.apply_diagonal(*t, &diag)
            }
            Gate::Fourier { t } => self.apply_single(*t, &fourier_matrix(p, false)),
            Gate::FourierDag { t } => self.apply_single(*t, &fourier_matrix(p, true)),
            Gate::Sum { c, t, a } => {
                self.check(*c)?;
                self.check(*t)?;
                if c == t {
                    return Err(Error::Invalid("SUM needs distinct control and target"));
                }
                let (c, t, a) = (*c, *t, *a as usize);
                let sc = self.stride(c);
                self.permute_digit(t, |idx, d| (d + a * ((idx / sc) % pu)) % pu);
                Ok(())
            }
            Gate::Inv { t } => {
                self.check(*t)?;
                let t = *t;
                self.permute_digit(t, |_, d| (pu - d) % pu);
                Ok(())
            }
            Gate::Cz { a, b, pow } => {
                self.check(*a)?;
                self.check(*b)?;
                for idx in 0..self.amps.len() {
                    let k = self.digit(idx, *a) * self.digit(idx, *b) * *pow as usize;
                    self.amps[idx] *= p.omega(k as i64);
                }
                Ok(())
            }
            Gate::Rz { t, a } => {
                let m = (pu * pu) as u64;
                let diag: Vec<_> = (0..pu).map(|j| root_of_unity(m, a * j as i64)).collect();
                self.apply_diagonal(*t, &diag)
            }
            Gate::Phase { t, theta } => {
                let diag: Vec<_> =
                    (0..pu).map(|j| Complex64::from_polar(1.0, theta * j as f64)).collect();
                self.apply_diagonal(*t, &diag)
            }
            Gate::GRz { t, theta } => {
                self.check(*t)?;
                let ph = Complex64::from_polar(1.0, *theta);
                self.amps.iter_mut().for_each(|a| *a *= ph);
                Ok(())
            }
            Gate::GRzSet { t, theta, set } => {
                let ph = Complex64::from_polar(1.0, *theta);
                let diag: Vec<_> = (0..pu as u32)
                    .map(|j| if set.contains(&j) { ph } else { Complex64::new(1.0, 0.0) })
                    .collect();
                self.apply_diagonal(*t, &diag)
            }
        }
    }

    /// Outcome probabilities of a Z-basis measurement of qupit `t`.
    pub fn marginal(&self, t: usize) -> Result<Vec<f64>> {
        self.check(t)?;
        let mut out = vec![0.0; self.p.us()];
        for (idx, a) in self.amps.iter().enumerate() {
            out[self.digit(idx, t)] += a.norm_sqr();
        }
        Ok(out)
    }

    /// Projects qupit `t` onto `outcome`, renormalises, and returns the
    /// probability of that outcome. The measured qupit stays in the register.
    pub fn project(&mut self, t: usize, outcome: u8) -> Result<f64> {
        self.check(t)?;
        let mut prob = 0.0;
        for idx in 0..self.amps.len() {
            if self.digit(idx, t) == outcome as usize {
                prob += self.amps[idx].norm_sqr();
            } else {
                self.amps[idx] = ZERO;
            }
        }
        if prob > 0.0 {
            let s = libm::sqrt(prob);
            self.amps.iter_mut().for_each(|a| *a /= s);
        }
        Ok(prob)
    }

    /// Samples a Z-basis outcome of qupit `t` by cumulative sums and collapses.
    pub fn measure<R: Rng + ?Sized>(&mut self, t: usize, rng: &mut R) -> Result<u8> {
        let probs = self.marginal(t)?;
        let k = sample_index(&probs, rng);
        self.project(t, k as u8)?;
        Ok(k as u8)
    }

    /// Drops qupits listed in `fixed` (assumed collapsed to the given values),
    /// keeping the rest in their original order.
    pub fn extract(&self, fixed: &[(usize, u8)]) -> Result<QupitState> {
        for &(t, _) in fixed {
            self.check(t)?;
        }
        let keep: Vec<usize> = (0..self.n).filter(|t| fixed.iter().all(|f| f.0 != *t)).collect();
        let mut out = QupitState::zero(self.p, keep.len())?;
        out.amps[0] = ZERO;
        for (idx, a) in self.amps.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            if fixed.iter().any(|&(t, v)| self.digit(idx, t) != v as usize) {
                continue;
            }
            let mut j = 0usize;
            for &t in &keep {
                j = j * self.p.us() + self.digit(idx, t);
            }
            out.amps[j] += a;
        }
        let nrm = out.norm();
        if nrm == 0.0 {
            return Err(Error::Invalid("extraction hit a zero-probability branch"));
        }
        out.amps.iter_mut().for_each(|a| *a /= nrm);
        Ok(out)
    }

    /// Full Z-basis outcome distribution as `(digits, probability)` pairs with
    /// nonzero mass.
    pub fn outcome_law(&self, eps: f64) -> Vec<(Vec<u8>, f64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > eps)
            .map(|(i, a)| (self.digits_of(i), a.norm_sqr()))
            .collect()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QupitState) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Index drawn from a probability vector by cumulative sums.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (k, &q) in probs.iter().enumerate() {
        acc += q;
        if u < acc {
            return k;
        }
    }
    probs.iter().rposition(|&q| q > 0.0).unwrap_or(0)
}

/// Row-major `F` (or `F†`).
pub fn fourier_matrix(p: Prime, dagger: bool) -> Vec<Complex64> {
    let pu = p.us();
    let s = 1.0 / libm::sqrt(pu as f64);
    let sign = if dagger { -1 } else { 1 };
    let mut m = vec![ZERO; pu * pu];
    for x in 0..pu {
        for y in 0..pu {
            m[x * pu + y] = p.omega(sign * (x * y) as i64) * s;
        }
    }
    m
}

/// Dense single-qupit matrices used by tests and the gadget algebra.
pub mod mat {
    use super::*;

    pub type Mat = Vec<Complex64>;

    pub fn identity(p: usize) -> Mat {
        let mut m = vec![ZERO; p * p];
        for i in 0..p {
            m[i * p + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn mul(a: &Mat, b: &Mat, p: usize) -> Mat {
        let mut c = vec![ZERO; p * p];
        for i in 0..p {
            for k in 0..p {
                let aik = a[i * p + k];
                for j in 0..p {
                    c[i * p + j] += aik * b[k * p + j];
                }
            }
        }
        c
    }

    pub fn dagger(a: &Mat, p: usize) -> Mat {
        let mut c = vec![ZERO; p * p];
        for i in 0..p {
            for j in 0..p {
                c[j * p + i] = a[i * p + j].conj();
            }
        }
        c
    }

    pub fn max_diff(a: &Mat, b: &Mat) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// `X^c` with `X|j⟩ = |j+1⟩`.
    pub fn shift(p: usize, c: usize) -> Mat {
        let mut m = vec![ZERO; p * p];
        for j in 0..p {
            m[((j + c) % p) * p + j] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn clock(p: Prime) -> Mat {
        diag(&(0..p.us()).map(|j| p.omega(j as i64)).collect::<Vec<_>>())
    }

    pub fn diag(d: &[Complex64]) -> Mat {
        let p = d.len();
        let mut m = vec![ZERO; p * p];
        for (i, &v) in d.iter().enumerate() {
            m[i * p + i] = v;
        }
        m
    }

    /// `R_Z(θ) = diag(e^{iθj})`.
    pub fn rz(p: usize, theta: f64) -> Mat {
        diag(&(0..p).map(|j| Complex64::from_polar(1.0, theta * j as f64)).collect::<Vec<_>>())
    }

    pub fn global(p: usize, theta: f64) -> Mat {
        diag(&vec![Complex64::from_polar(1.0, theta); p])
    }

    pub fn phase_on_set(p: usize, theta: f64, set: &[u32]) -> Mat {
        diag(
            &(0..p as u32)
                .map(|j| {
                    if set.contains(&j) {
                        Complex64::from_polar(1.0, theta)
                    } else {
                        Complex64::new(1.0, 0.0)
                    }
                })
                .collect::<Vec<_>>(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn fourier_on_zero_is_uniform() {
        let mut s = QupitState::zero(pr(3), 1).unwrap();
        s.apply_gate(&Gate::Fourier { t: 0 }).unwrap();
        for a in s.amplitudes() {
            assert!((a - Complex64::new(1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn clock_shift_commutation() {
        for p in [2u32, 3, 5] {
            let f = pr(p);
            let x = mat::shift(p as usize, 1);
            let z = mat::clock(f);
            let zx = mat::mul(&z, &x, p as usize);
            let wxz: Vec<_> = mat::mul(&x, &z, p as usize).iter().map(|v| v * f.omega(1)).collect();
            assert!(mat::max_diff(&zx, &wxz) < 1e-12);
        }
    }

    #[test]
    fn inverse_is_involution_and_fourier_has_order_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [2u32, 3, 5, 7, 11, 13] {
            let f = pr(p);
            for j in 0..p as u8 {
                let start = QupitState::basis(f, &[j]).unwrap();
                let mut s = start.clone();
                s.apply_gate(&Gate::Inv { t: 0 }).unwrap();
                s.apply_gate(&Gate::Inv { t: 0 }).unwrap();
                assert!((s.fidelity(&start) - 1.0).abs() < 1e-12);
                let mut s = start.clone();
                for _ in 0..4 {
                    s.apply_gate(&Gate::Fourier { t: 0 }).unwrap();
                }
                assert!(s.amplitudes().iter().zip(start.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-9));
            }
            // F² = INV
            let v = random_state(f, 1, &mut rng);
            let mut a = v.clone();
            a.apply_gate(&Gate::Fourier { t: 0 }).unwrap();
            a.apply_gate(&Gate::Fourier { t: 0 }).unwrap();
            let mut b = v.clone();
            b.apply_gate(&Gate::Inv { t: 0 }).unwrap();
            assert!((a.fidelity(&b) - 1.0).abs() < 1e-9);
        }
    }

    fn random_state(p: Prime, n: usize, rng: &mut ChaCha8Rng) -> QupitState {
        let d = p.us().pow(n as u32);
        let amps = (0..d).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        QupitState::from_amplitudes(p, n, amps).unwrap()
    }

    #[test]
    fn gates_preserve_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for p in [2u32, 3, 5] {
            let f = pr(p);
            let mut s = random_state(f, 3, &mut rng);
            let gates = [
                Gate::X { t: 0, a: 1 },
                Gate::Z { t: 1, a: 2 },
                Gate::Fourier { t: 2 },
                Gate::FourierDag { t: 0 },
                Gate::Sum { c: 0, t: 2, a: 1 },
                Gate::Inv { t: 1 },
                Gate::Cz { a: 0, b: 1, pow: 1 },
                Gate::Rz { t: 2, a: 1 },
                Gate::GRz { t: 0, theta: 0.3 },
                Gate::GRzSet { t: 1, theta: 1.1, set: vec![0, 1] },
            ];
            for g in &gates {
                s.apply_gate(g).unwrap();
                assert!((s.norm() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sum_acts_on_basis() {
        let f = pr(5);
        let mut s = QupitState::basis(f, &[3, 4]).unwrap();
        s.apply_gate(&Gate::Sum { c: 0, t: 1, a: 1 }).unwrap();
        assert!((s.amplitude(&[3, 2]).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!(s.apply_gate(&Gate::Sum { c: 1, t: 1, a: 1 }).is_err());
        assert!(matches!(s.apply_gate(&Gate::Inv { t: 7 }), Err(Error::TargetOutOfRange { .. })));
    }

    #[test]
    fn projection_and_extraction() {
        let f = pr(3);
        let mut s = QupitState::zero(f, 2).unwrap();
        s.apply_gate(&Gate::Fourier { t: 0 }).unwrap();
        s.apply_gate(&Gate::Sum { c: 0, t: 1, a: 1 }).unwrap();
        let pr1 = s.project(1, 2).unwrap();
        assert!((pr1 - 1.0 / 3.0).abs() < 1e-12);
        let v = s.extract(&[(1, 2)]).unwrap();
        assert!((v.amplitude(&[2]).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        assert!(QupitState::zero(pr(2), 24).is_ok());
        assert!(matches!(QupitState::zero(pr(2), 25), Err(Error::TooLarge(_))));
        assert!(QupitState::zero(pr(13), 7).is_err());
    }
}
