//! Depth-2 circuits `G(C_1, …, C_m)` with `G` an OR-type bounded threshold
//! gate and `C_j` conjunctions of `w` literals; the batch-query canonical
//! decision tree, its witnesses, and the empirical switching experiments.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::anf::pack;
use super::bptf::{BptfGate, GateKind};
use super::restriction::{sample_restriction, Restriction};
use crate::stats::wilson_interval;
use crate::{Error, Result};

/// A literal `x_var` (positive) or `¬x_var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthTwo {
    n: usize,
    w: usize,
    clauses: Vec<Vec<Literal>>,
    top: BptfGate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClauseState {
    False,
    True,
    Open,
}

impl DepthTwo {
    pub fn new(n: usize, clauses: Vec<Vec<Literal>>, top: BptfGate) -> Result<Self> {
        if top.kind() != GateKind::OrType {
            return Err(Error::Invalid("top gate must be OR-type"));
        }
        if top.fan_in() != clauses.len() {
            return Err(Error::WidthMismatch { expected: clauses.len(), got: top.fan_in() });
        }
        if clauses.iter().flatten().any(|l| l.var >= n) {
            return Err(Error::OutOfRange("literal variable"));
        }
        let w = clauses.iter().map(|c| c.len()).max().unwrap_or(0);
        Ok(DepthTwo { n, w, clauses, top })
    }

    /// `m` clauses of exactly `w` distinct variables with random signs, top
    /// gate random OR-type with degree bound `k`.
    pub fn random<R: Rng + ?Sized>(n: usize, m: usize, w: usize, k: usize, rng: &mut R) -> Result<Self> {
        if w > n {
            return Err(Error::OutOfRange("clause width above n"));
        }
        let clauses = (0..m)
            .map(|_| {
                let mut vars: Vec<usize> = Vec::with_capacity(w);
                while vars.len() < w {
                    let v = rng.random_range(0..n);
                    if !vars.contains(&v) {
                        vars.push(v);
                    }
                }
                vars.into_iter().map(|var| Literal { var, positive: rng.random() }).collect()
            })
            .collect();
        DepthTwo::new(n, clauses, BptfGate::random(GateKind::OrType, k, m, rng))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn k(&self) -> usize {
        self.top.k()
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    fn clause_state(&self, j: usize, known: &[Option<bool>]) -> ClauseState {
        let mut open = false;
        for l in &self.clauses[j] {
            match known[l.var] {
                Some(v) if v != l.positive => return ClauseState::False,
                Some(_) => {}
                None => open = true,
            }
        }
        if open { ClauseState::Open } else { ClauseState::True }
    }

    /// Top gate applied to clause values with unknown variables read as 0.
    fn eval_known(&self, known: &[Option<bool>]) -> bool {
        let vals: Vec<u8> = (0..self.m())
            .map(|j| {
                self.clauses[j].iter().all(|l| known[l.var].unwrap_or(false) == l.positive) as u8
            })
            .collect();
        self.top.eval(&vals).expect("fan-in matches clause count")
    }

    pub fn eval(&self, x: &[u8]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, got: x.len() });
        }
        let known: Vec<Option<bool>> = x.iter().map(|&b| Some(b == 1)).collect();
        Ok(self.eval_known(&known))
    }
}

/// Batch-query description: the `i`-th batch read `s_i` variables at the
/// positions `B_i` of clause `l_i` and received `α_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TWitness {
    pub l: Vec<usize>,
    pub s: Vec<usize>,
    pub b: Vec<Vec<usize>>,
    pub alpha: Vec<Vec<bool>>,
}

impl TWitness {
    pub fn r(&self) -> usize {
        self.l.len()
    }

    pub fn size(&self) -> usize {
        self.s.iter().sum()
    }

    /// Shortest prefix whose size reaches `t` (the whole witness if smaller).
    pub fn prefix(&self, t: usize) -> TWitness {
        let mut out = TWitness::default();
        let mut acc = 0;
        for i in 0..self.r() {
            if acc >= t {
                break;
            }
            out.l.push(self.l[i]);
            out.s.push(self.s[i]);
            out.b.push(self.b[i].clone());
            out.alpha.push(self.alpha[i].clone());
            acc += self.s[i];
        }
        out
    }

    /// Shape constraints of a `t`-witness: `1 ≤ r ≤ t+k`, increasing clause
    /// indices, at most `k` empty batches, size in `[t, t+w−1]`, and
    /// `|B_i| = |α_i| = s_i`.
    pub fn is_well_formed(&self, t: usize, k: usize, w: usize) -> bool {
        let r = self.r();
        r >= 1
            && r <= t + k
            && self.l.windows(2).all(|p| p[0] < p[1])
            && self.s.iter().filter(|&&s| s == 0).count() <= k
            && (t..t + w).contains(&self.size())
            && (0..r).all(|i| self.b[i].len() == self.s[i] && self.alpha[i].len() == self.s[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalRun {
    /// Variables queried along this path.
    pub depth: usize,
    pub witness: TWitness,
    pub value: bool,
}

/// Runs the canonical procedure on `F⌈ρ`, answering batch queries from `x`.
///
/// Clauses are scanned in index order from the last one handled plus one.
/// An open clause has all its unset variables queried at once; a clause that
/// ends up satisfied bumps the counter, and once the counter exceeds `k` the
/// top gate is forced to 1. Otherwise the result is `F` with the remaining
/// unset variables read as 0.
pub fn canonical_decision_tree(f: &DepthTwo, rho: &Restriction, x: &[u8]) -> Result<CanonicalRun> {
    if rho.len() != f.n || x.len() != f.n {
        return Err(Error::WidthMismatch { expected: f.n, got: rho.len().min(x.len()) });
    }
    let mut known: Vec<Option<bool>> = rho.values().to_vec();
    let mut witness = TWitness::default();
    let mut ctr = 0;
    let mut j_star = 0;
    let mut depth = 0;
    while j_star < f.m() {
        let Some(j) = (j_star..f.m()).find(|&j| f.clause_state(j, &known) != ClauseState::False) else {
            break;
        };
        let mut pos = Vec::new();
        let mut ans = Vec::new();
        for (q, l) in f.clauses[j].iter().enumerate() {
            if known[l.var].is_none() {
                known[l.var] = Some(x[l.var] == 1);
                pos.push(q);
                ans.push(x[l.var] == 1);
            }
        }
        depth += pos.len();
        witness.l.push(j);
        witness.s.push(pos.len());
        witness.b.push(pos);
        witness.alpha.push(ans);
        if f.clause_state(j, &known) == ClauseState::True {
            ctr += 1;
            if ctr > f.k() {
                return Ok(CanonicalRun { depth, witness, value: true });
            }
        }
        j_star = j + 1;
    }
    let value = f.eval_known(&known);
    Ok(CanonicalRun { depth, witness, value })
}

/// Depth of the canonical tree of `F⌈ρ` (maximum over all answers), cut
/// off as soon as it exceeds `cap`; the returned value is then `cap + 1`.
pub fn canonical_depth(f: &DepthTwo, rho: &Restriction, cap: usize) -> Result<usize> {
    if rho.len() != f.n {
        return Err(Error::WidthMismatch { expected: f.n, got: rho.len() });
    }
    fn go(f: &DepthTwo, known: &mut Vec<Option<bool>>, j_star: usize, ctr: usize, depth: usize, cap: usize) -> usize {
        if depth > cap {
            return cap + 1;
        }
        let Some(j) = (j_star..f.m()).find(|&j| f.clause_state(j, known) != ClauseState::False) else {
            return depth;
        };
        let open: Vec<usize> = f.clauses[j].iter().map(|l| l.var).filter(|&v| known[v].is_none()).collect();
        let mut best = depth;
        for a in 0u64..1 << open.len() {
            for (i, &v) in open.iter().enumerate() {
                known[v] = Some(a >> i & 1 == 1);
            }
            let d = depth + open.len();
            let res = if f.clause_state(j, known) == ClauseState::True {
                if ctr + 1 > f.k() { d.min(cap + 1) } else { go(f, known, j + 1, ctr + 1, d, cap) }
            } else {
                go(f, known, j + 1, ctr, d, cap)
            };
            best = best.max(res);
            if best > cap {
                break;
            }
        }
        for &v in &open {
            known[v] = None;
        }
        best.min(cap + 1)
    }
    let mut known = rho.values().to_vec();
    Ok(go(f, &mut known, 0, 0, 0, cap))
}

/// Rebuilds an input from a witness (answers on the witnessed positions,
/// 0 elsewhere) and checks that the run reproduces the witness as a prefix.
pub fn replay_witness(f: &DepthTwo, rho: &Restriction, w: &TWitness) -> Result<bool> {
    let mut x = vec![0u8; f.n];
    for i in 0..w.r() {
        let clause = f.clauses.get(w.l[i]).ok_or(Error::OutOfRange("witness clause"))?;
        for (q, &a) in w.b[i].iter().zip(&w.alpha[i]) {
            let lit = clause.get(*q).ok_or(Error::OutOfRange("witness position"))?;
            x[lit.var] = a as u8;
        }
    }
    let run = canonical_decision_tree(f, rho, &x)?;
    let got = &run.witness;
    Ok(got.r() >= w.r()
        && got.l[..w.r()] == w.l[..]
        && got.s[..w.r()] == w.s[..]
        && got.b[..w.r()] == w.b[..]
        && got.alpha[..w.r()] == w.alpha[..])
}

/// Every extension that refines `ρ` has canonical depth at most that of `ρ`.
pub fn check_downward_closed(f: &DepthTwo, rho: &Restriction, extensions: &[Restriction]) -> Result<bool> {
    let l = canonical_depth(f, rho, usize::MAX - 1)?;
    for e in extensions {
        if !rho.is_refined_by(e) {
            return Err(Error::Invalid("extension does not refine the restriction"));
        }
        if canonical_depth(f, e, l)? > l {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub ci_upper: f64,
    pub bound: f64,
    pub vacuous: bool,
    /// Upper 95% Wilson limit at or below the bound.
    pub ok_ci: bool,
    /// Estimate within three binomial standard deviations of the bound.
    pub ok_3sigma: bool,
}

impl SwitchEstimate {
    pub fn from_counts(hits: u64, trials: u64, bound: f64) -> Self {
        let (_, hi) = wilson_interval(hits, trials, crate::stats::Z95);
        let estimate = hits as f64 / trials as f64;
        let b = bound.min(1.0);
        let sigma = libm::sqrt(b * (1.0 - b) / trials as f64);
        let vacuous = bound >= 1.0;
        SwitchEstimate {
            hits,
            trials,
            estimate,
            ci_upper: hi,
            bound,
            vacuous,
            ok_ci: vacuous || hi <= bound,
            ok_3sigma: vacuous || estimate <= bound + 3.0 * sigma,
        }
    }
}

/// `(20·keep·w)^t · 2^k`.
pub fn switching_bound(keep: f64, w: usize, t: usize, k: usize) -> f64 {
    libm::pow(20.0 * keep * w as f64, t as f64) * libm::ldexp(1.0, k as i32)
}

/// `m · 2^k · (80·w·keep)^t`.
pub fn multi_switching_bound(m: usize, keep: f64, w: usize, t: usize, k: usize) -> f64 {
    m as f64 * libm::ldexp(1.0, k as i32) * libm::pow(80.0 * w as f64 * keep, t as f64)
}

/// Frequency of `canonical depth(F⌈ρ) > t` over random restrictions.
pub fn empirical_switch_prob<R: Rng + ?Sized>(
    f: &DepthTwo,
    keep: f64,
    t: usize,
    trials: u64,
    rng: &mut R,
) -> Result<SwitchEstimate> {
    let mut hits = 0;
    for _ in 0..trials {
        let rho = sample_restriction(f.n, keep, rng)?;
        if canonical_depth(f, &rho, t)? > t {
            hits += 1;
        }
    }
    Ok(SwitchEstimate::from_counts(hits, trials, switching_bound(keep, f.w, t, f.k())))
}

/// Multi-circuit event through the constructive global tree: circuits whose
/// canonical depth exceeds `l` have their trees merged into the global tree;
/// the event is a global depth above `t`. Depths are measured under `ρ`
/// alone, which can only overstate the global depth.
pub fn multi_switch_event(fs: &[DepthTwo], rho: &Restriction, l: usize, t: usize) -> Result<bool> {
    let mut global = 0;
    for f in fs {
        let d = canonical_depth(f, rho, usize::MAX - 1)?;
        if d > l {
            global += d;
            if global > t {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

pub fn empirical_multi_switch_prob<R: Rng + ?Sized>(
    fs: &[DepthTwo],
    keep: f64,
    l: usize,
    t: usize,
    trials: u64,
    rng: &mut R,
) -> Result<SwitchEstimate> {
    let f0 = fs.first().ok_or(Error::EmptyDistribution)?;
    let w = fs.iter().map(|f| f.w).max().unwrap_or(0);
    let k = fs.iter().map(|f| f.k()).max().unwrap_or(0);
    let mut hits = 0;
    for _ in 0..trials {
        let rho = sample_restriction(f0.n, keep, rng)?;
        if multi_switch_event(fs, &rho, l, t)? {
            hits += 1;
        }
    }
    Ok(SwitchEstimate::from_counts(hits, trials, multi_switching_bound(fs.len(), keep, w, t, k)))
}

/// Packs a partial assignment's fixed part (debug helper for reports).
pub fn fixed_mask(rho: &Restriction) -> (u64, u64) {
    let mask: Vec<u8> = rho.values().iter().map(|v| v.is_some() as u8).collect();
    let vals: Vec<u8> = rho.values().iter().map(|v| v.unwrap_or(false) as u8).collect();
    (pack(&mask), pack(&vals))
}
