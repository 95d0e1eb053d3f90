//! Hard-decision renormalization-group decoding, logical readout and
//! failure-rate estimation.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::lattice::{CheckGraph, CheckKind, SurfaceLattice};
use super::noise::{sample_local_stochastic, NoiseSpec};
use super::pauli::PauliOperator;
use crate::stats::{wilson_interval, Z95};
use crate::{Error, Prime, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub charge: u32,
    pub level: usize,
}

impl Cluster {
    pub fn is_neutral(&self) -> bool {
        self.charge == 0
    }
}

/// Largest level whose search distance `2^l` stays within `2L`.
pub fn max_level(l: usize) -> usize {
    (usize::BITS - 1 - (2 * l).leading_zeros()) as usize
}

struct Router<'a> {
    p: Prime,
    g: &'a CheckGraph,
    lat: &'a SurfaceLattice,
    corr: Vec<u32>,
    charge: Vec<u32>,
}

impl Router<'_> {
    /// Adds to `site` the exponent that removes `q` from `check`.
    fn push(&mut self, check: usize, site: usize, q: u32) {
        let p = self.p;
        let c = self.g.coefficient(check, site).expect("site touches check");
        let de = p.neg(p.mul(q, p.inv(c).expect("coefficients are units")));
        self.corr[site] = p.add(self.corr[site], de);
        for &(k, ck) in self.g.at_site(site) {
            self.charge[k] = p.add(self.charge[k], p.mul(ck, de));
        }
    }

    /// Moves charge `q` from `a` to `b`, rows first, then columns.
    fn transport(&mut self, a: usize, b: usize, q: u32) {
        let (mut i, mut j) = self.g.checks[a].pos;
        let (ti, tj) = self.g.checks[b].pos;
        let mut cur = a;
        while (i, j) != (ti, tj) {
            let (ni, nj, si, sj) = if i != ti {
                let ni = if ti > i { i + 2 } else { i - 2 };
                (ni, j, (i + ni) / 2, j)
            } else {
                let nj = if tj > j { j + 2 } else { j - 2 };
                (i, nj, i, (j + nj) / 2)
            };
            let site = self.lat.site_at(si, sj).expect("midpoint is a data site");
            self.push(cur, site, q);
            cur = self.g.index_at(ni, nj).expect("path stays on checks");
            (i, j) = (ni, nj);
        }
    }

    /// Pushes charge `q` at `a` straight out through the nearest boundary.
    fn absorb(&mut self, a: usize, q: u32) {
        let (_, high) = self.g.boundary(a);
        let side = 2 * self.lat.distance() - 1;
        let mut cur = a;
        loop {
            let (i, j) = self.g.checks[cur].pos;
            let along = if self.g.kind == CheckKind::Plaquette { j } else { i };
            let next = if high { along + 1 } else { along - 1 };
            let (si, sj) = if self.g.kind == CheckKind::Plaquette { (i, next) } else { (next, j) };
            let site = self.lat.site_at(si, sj).expect("boundary path site");
            self.push(cur, site, q);
            if next == 0 || next == side - 1 {
                return;
            }
            let step = if high { next + 1 } else { next - 1 };
            let (ci, cj) = if self.g.kind == CheckKind::Plaquette { (i, step) } else { (step, j) };
            cur = self.g.index_at(ci, cj).expect("path stays on checks");
        }
    }
}

/// Guessed error exponents for one check kind (same charges as `syn`), or `None` when charged clusters
/// survive the last level.
pub fn hdrg_decode_kind(lat: &SurfaceLattice, kind: CheckKind, syn: &[u32]) -> Result<Option<Vec<u32>>> {
    let g = lat.checks(kind);
    if syn.len() != g.len() {
        return Err(Error::LengthMismatch { expected: g.len(), got: syn.len() });
    }
    let p = lat.p();
    let mut r = Router { p, g, lat, corr: vec![0; lat.n_sites()], charge: syn.to_vec() };
    let mut active: Vec<usize> = (0..g.len()).filter(|&k| syn[k] != 0).collect();
    for level in 0..=max_level(lat.distance()) {
        if active.is_empty() {
            break;
        }
        let reach = 1usize << level;
        let clusters = clusters_at(g, &active, reach, &r.charge, p, level);
        let mut keep = Vec::new();
        for c in clusters {
            let near = c.members.iter().copied().min_by_key(|&m| (g.boundary(m).0, m)).expect("nonempty");
            if c.is_neutral() {
                let root = c.members[0];
                for &m in &c.members[1..] {
                    let q = r.charge[m];
                    r.transport(m, root, q);
                }
            } else if 2 * g.boundary(near).0 <= reach {
                for &m in &c.members {
                    if m != near {
                        let q = r.charge[m];
                        r.transport(m, near, q);
                    }
                }
                let q = r.charge[near];
                r.absorb(near, q);
            } else {
                keep.extend(c.members);
            }
        }
        keep.sort_unstable();
        active = keep;
    }
    if !active.is_empty() {
        return Ok(None);
    }
    // the correction neutralizes the defects; the error guess is its inverse
    Ok(Some(r.corr.iter().map(|&e| p.neg(e)).collect()))
}

fn clusters_at(g: &CheckGraph, active: &[usize], reach: usize, charge: &[u32], p: Prime, level: usize) -> Vec<Cluster> {
    let mut seen = vec![false; active.len()];
    let mut out = Vec::new();
    for s in 0..active.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut members = Vec::new();
        while let Some(a) = stack.pop() {
            members.push(active[a]);
            for b in 0..active.len() {
                if !seen[b] && g.distance(active[a], active[b]) <= reach {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        members.sort_unstable();
        let total = members.iter().fold(0, |acc, &m| p.add(acc, charge[m]));
        out.push(Cluster { members, charge: total, level });
    }
    out
}

/// Decodes both check kinds into an error guess with the same syndrome;
/// `None` signals an abort.
pub fn hdrg_decode(lat: &SurfaceLattice, syn: &super::lattice::Syndrome) -> Result<Option<PauliOperator>> {
    let Some(x) = hdrg_decode_kind(lat, CheckKind::Plaquette, &syn.plaquette)? else { return Ok(None) };
    let Some(z) = hdrg_decode_kind(lat, CheckKind::Vertex, &syn.vertex)? else { return Ok(None) };
    Ok(Some(PauliOperator::new(lat.p(), 0, z, x)?))
}

/// Whether a syndrome-free residual acts nontrivially on the logical qupit.
pub fn is_logical_failure(lat: &SurfaceLattice, residual: &PauliOperator) -> Result<bool> {
    if !lat.syndrome(residual)?.is_trivial() {
        return Err(Error::NontrivialSyndrome);
    }
    Ok(residual.symplectic(&lat.logical_z()) != 0 || residual.symplectic(&lat.logical_x()) != 0)
}

/// Plaquette charges of a `Z`-basis readout.
pub fn outcome_syndrome(lat: &SurfaceLattice, outcomes: &[u32]) -> Vec<u32> {
    lat.charges(CheckKind::Plaquette, outcomes)
}

/// Logical `Z` value: the modular sum along the logical column after
/// removing the decoder's guess. `None` when the decoder aborts.
pub fn logical_z_measure_decoded(lat: &SurfaceLattice, outcomes: &[u32], syn: &[u32]) -> Result<Option<u32>> {
    if outcomes.len() != lat.n_sites() {
        return Err(Error::LengthMismatch { expected: lat.n_sites(), got: outcomes.len() });
    }
    let p = lat.p();
    let Some(guess) = hdrg_decode_kind(lat, CheckKind::Plaquette, syn)? else { return Ok(None) };
    Ok(Some(lat.logical_z_sites().iter().fold(0, |acc, &s| p.add(acc, p.sub(outcomes[s], guess[s])))))
}

/// One noisy round: sample, decode, and report whether it failed.
pub fn failure_trial<R: Rng + ?Sized>(lat: &SurfaceLattice, noise: &NoiseSpec, rng: &mut R) -> Result<bool> {
    let e = sample_local_stochastic(lat.p(), lat.n_sites(), noise, rng)?;
    if e.is_identity_up_to_phase() {
        return Ok(false);
    }
    let syn = lat.syndrome(&e)?;
    match hdrg_decode(lat, &syn)? {
        None => Ok(true),
        Some(c) => {
            let residual = e.compose(&c.inverse())?;
            is_logical_failure(lat, &residual)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureEstimate {
    pub failures: u64,
    pub trials: u64,
    pub rate: f64,
    pub ci: (f64, f64),
}

impl FailureEstimate {
    pub fn from_counts(failures: u64, trials: u64) -> Self {
        FailureEstimate {
            failures,
            trials,
            rate: failures as f64 / trials as f64,
            ci: wilson_interval(failures, trials, Z95),
        }
    }
}

pub fn monte_carlo_failure<R: Rng + ?Sized>(
    lat: &SurfaceLattice,
    tau: f64,
    trials: u64,
    rng: &mut R,
) -> Result<FailureEstimate> {
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be positive"));
    }
    let noise = NoiseSpec::new(tau)?;
    let mut failures = 0;
    for _ in 0..trials {
        failures += failure_trial(lat, &noise, rng)? as u64;
    }
    Ok(FailureEstimate::from_counts(failures, trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn x_error(lat: &SurfaceLattice, sites: &[(usize, u32)]) -> PauliOperator {
        let mut e = PauliOperator::identity(lat.p(), lat.n_sites());
        for &(s, a) in sites {
            e.x[s] = a;
        }
        e
    }

    #[test]
    fn levels() {
        assert_eq!(max_level(3), 2);
        assert_eq!(max_level(5), 3);
        assert_eq!(max_level(8), 4);
    }

    #[test]
    fn empty_syndrome_gives_identity() {
        let lat = SurfaceLattice::new(Prime::new(3).unwrap(), 5).unwrap();
        let id = PauliOperator::identity(lat.p(), lat.n_sites());
        let c = hdrg_decode(&lat, &lat.syndrome(&id).unwrap()).unwrap().unwrap();
        assert!(c.is_identity_up_to_phase());
        assert!(!is_logical_failure(&lat, &id).unwrap());
        assert!(is_logical_failure(&lat, &lat.logical_x()).unwrap());
        assert!(is_logical_failure(&lat, &lat.logical_z()).unwrap());
        assert_eq!(is_logical_failure(&lat, &x_error(&lat, &[(12, 1)])), Err(Error::NontrivialSyndrome));
    }

    #[test]
    fn stabilizer_products_are_not_failures() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let lat = SurfaceLattice::new(Prime::new(5).unwrap(), 4).unwrap();
        let stabs = lat.stabilizers();
        for _ in 0..50 {
            let mut o = PauliOperator::identity(lat.p(), lat.n_sites());
            for s in &stabs {
                for _ in 0..rng.random_range(0..5) {
                    o = o.compose(s).unwrap();
                }
            }
            assert!(!is_logical_failure(&lat, &o).unwrap());
        }
    }

    #[test]
    fn correction_reproduces_syndrome() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for p in [2u32, 3, 5] {
            let lat = SurfaceLattice::new(Prime::new(p).unwrap(), 5).unwrap();
            let noise = NoiseSpec::new(0.1).unwrap();
            for _ in 0..200 {
                let e = sample_local_stochastic(lat.p(), lat.n_sites(), &noise, &mut rng).unwrap();
                let syn = lat.syndrome(&e).unwrap();
                if let Some(c) = hdrg_decode(&lat, &syn).unwrap() {
                    assert_eq!(lat.syndrome(&c).unwrap(), syn);
                }
            }
        }
    }

    #[test]
    fn all_weight_two_x_errors_corrected() {
        for p in [2u32, 3] {
            let lat = SurfaceLattice::new(Prime::new(p).unwrap(), 5).unwrap();
            let n = lat.n_sites();
            for s1 in 0..n {
                for s2 in s1..n {
                    for a in 1..p {
                        for b in 1..p {
                            let pattern: Vec<(usize, u32)> = if s1 == s2 { vec![(s1, a)] } else { vec![(s1, a), (s2, b)] };
                            let e = x_error(&lat, &pattern);
                            let c = hdrg_decode(&lat, &lat.syndrome(&e).unwrap()).unwrap().expect("no abort");
                            let res = e.compose(&c.inverse()).unwrap();
                            assert!(!is_logical_failure(&lat, &res).unwrap(), "p={p} {pattern:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn decoded_logical_readout() {
        let mut rng = ChaCha8Rng::seed_from_u64(97);
        let lat = SurfaceLattice::new(Prime::new(3).unwrap(), 5).unwrap();
        let p = lat.p();
        for j in 0..3u32 {
            // j·X̄ on the all-zero string, dressed with random vertex checks
            let mut v = vec![0u32; lat.n_sites()];
            for (s, &x) in lat.logical_x().x.iter().enumerate() {
                v[s] = p.mul(j, x);
            }
            for k in 0..lat.checks(CheckKind::Vertex).len() {
                let r = rng.random_range(0..3);
                for &(s, c) in &lat.checks(CheckKind::Vertex).checks[k].support {
                    v[s] = p.add(v[s], p.mul(r, c));
                }
            }
            let syn = outcome_syndrome(&lat, &v);
            assert!(syn.iter().all(|&c| c == 0));
            assert_eq!(logical_z_measure_decoded(&lat, &v, &syn).unwrap(), Some(j));
            let s = lat.site_at(4, 4).unwrap();
            v[s] = p.add(v[s], 1);
            let syn = outcome_syndrome(&lat, &v);
            assert_eq!(logical_z_measure_decoded(&lat, &v, &syn).unwrap(), Some(j));
        }
    }

    #[test]
    fn zero_noise_never_fails() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let lat = SurfaceLattice::new(Prime::new(3).unwrap(), 3).unwrap();
        assert_eq!(monte_carlo_failure(&lat, 0.0, 100, &mut rng).unwrap().failures, 0);
    }
}
