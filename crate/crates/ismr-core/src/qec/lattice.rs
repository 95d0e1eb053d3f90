//! Planar qupit surface code of distance `L`.
//!
//! Everything lives on a `(2L−1)×(2L−1)` grid. Data qupits sit at `(i, j)`
//! with `i + j` even; vertex checks (`X`-type) at odd `i`, even `j`; plaquette
//! checks (`Z`-type) at even `i`, odd `j`. Vertex checks carry `X` on their up
//! and left neighbours and `X†` on down and right; plaquettes carry `Z` on up
//! and right and `Z†` on left and down. Plaquettes are cut at the top and
//! bottom rows, vertices at the left and right columns.

use alloc::vec;
use alloc::vec::Vec;

use super::pauli::PauliOperator;
use crate::{Error, Prime, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    /// `X`-type, detects `Z` errors.
    Vertex,
    /// `Z`-type, detects `X` errors.
    Plaquette,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub pos: (usize, usize),
    pub support: Vec<(usize, u32)>,
}

/// Checks of one kind with the geometry the decoder needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckGraph {
    pub kind: CheckKind,
    pub checks: Vec<Check>,
    grid: Vec<Option<usize>>,
    side: usize,
    by_site: Vec<Vec<(usize, u32)>>,
}

impl CheckGraph {
    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }

    pub fn index_at(&self, i: usize, j: usize) -> Option<usize> {
        self.grid[i * self.side + j]
    }

    /// Chebyshev distance in check units.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (ai, aj) = self.checks[a].pos;
        let (bi, bj) = self.checks[b].pos;
        ai.abs_diff(bi).max(aj.abs_diff(bj)) / 2
    }

    /// Steps to the nearest boundary that absorbs this kind of charge, and
    /// which side (`false` for the low side).
    pub fn boundary(&self, a: usize) -> (usize, bool) {
        let (i, j) = self.checks[a].pos;
        let c = match self.kind {
            CheckKind::Plaquette => j,
            CheckKind::Vertex => i,
        };
        let low = c.div_ceil(2);
        let high = (self.side - c).div_ceil(2);
        if high < low { (high, true) } else { (low, false) }
    }

    /// Checks touching `site`, with their coefficients.
    pub fn at_site(&self, site: usize) -> &[(usize, u32)] {
        &self.by_site[site]
    }

    pub fn coefficient(&self, check: usize, site: usize) -> Option<u32> {
        self.checks[check].support.iter().find(|(s, _)| *s == site).map(|&(_, c)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceLattice {
    p: Prime,
    l: usize,
    sites: Vec<(usize, usize)>,
    site_grid: Vec<Option<usize>>,
    vertices: CheckGraph,
    plaquettes: CheckGraph,
}

/// Charges per check kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome {
    pub vertex: Vec<u32>,
    pub plaquette: Vec<u32>,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.vertex.iter().chain(&self.plaquette).all(|&c| c == 0)
    }

    pub fn of(&self, kind: CheckKind) -> &[u32] {
        match kind {
            CheckKind::Vertex => &self.vertex,
            CheckKind::Plaquette => &self.plaquette,
        }
    }
}

impl SurfaceLattice {
    pub fn new(p: Prime, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::OutOfRange("code distance must be at least 2"));
        }
        let side = 2 * l - 1;
        let mut sites = Vec::new();
        let mut site_grid = vec![None; side * side];
        for i in 0..side {
            for j in 0..side {
                if (i + j) % 2 == 0 {
                    site_grid[i * side + j] = Some(sites.len());
                    sites.push((i, j));
                }
            }
        }
        let one = 1;
        let minus = p.neg(1);
        let build = |kind: CheckKind| {
            let mut checks = Vec::new();
            let mut grid = vec![None; side * side];
            for i in 0..side {
                for j in 0..side {
                    let is = match kind {
                        CheckKind::Vertex => i % 2 == 1 && j % 2 == 0,
                        CheckKind::Plaquette => i % 2 == 0 && j % 2 == 1,
                    };
                    if !is {
                        continue;
                    }
                    // (di, dj, vertex coef, plaquette coef)
                    let dirs = [(-1i64, 0i64, one, one), (1, 0, minus, minus), (0, -1, one, minus), (0, 1, minus, one)];
                    let mut support = Vec::new();
                    for (di, dj, cv, cp) in dirs {
                        let (ni, nj) = (i as i64 + di, j as i64 + dj);
                        if ni < 0 || nj < 0 || ni >= side as i64 || nj >= side as i64 {
                            continue;
                        }
                        let s = site_grid[ni as usize * side + nj as usize].expect("neighbour is a data site");
                        support.push((s, if kind == CheckKind::Vertex { cv } else { cp }));
                    }
                    grid[i * side + j] = Some(checks.len());
                    checks.push(Check { pos: (i, j), support });
                }
            }
            let mut by_site = vec![Vec::new(); sites.len()];
            for (k, c) in checks.iter().enumerate() {
                for &(s, coef) in &c.support {
                    by_site[s].push((k, coef));
                }
            }
            CheckGraph { kind, checks, grid, side, by_site }
        };
        let vertices = build(CheckKind::Vertex);
        let plaquettes = build(CheckKind::Plaquette);
        Ok(SurfaceLattice { p, l, sites, site_grid, vertices, plaquettes })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn distance(&self) -> usize {
        self.l
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn site_pos(&self, s: usize) -> (usize, usize) {
        self.sites[s]
    }

    pub fn site_at(&self, i: usize, j: usize) -> Option<usize> {
        let side = 2 * self.l - 1;
        if i < side && j < side { self.site_grid[i * side + j] } else { None }
    }

    pub fn checks(&self, kind: CheckKind) -> &CheckGraph {
        match kind {
            CheckKind::Vertex => &self.vertices,
            CheckKind::Plaquette => &self.plaquettes,
        }
    }

    pub fn stabilizer(&self, kind: CheckKind, idx: usize) -> PauliOperator {
        let mut o = PauliOperator::identity(self.p, self.n_sites());
        for &(s, c) in &self.checks(kind).checks[idx].support {
            match kind {
                CheckKind::Vertex => o.x[s] = c,
                CheckKind::Plaquette => o.z[s] = c,
            }
        }
        o
    }

    pub fn stabilizers(&self) -> Vec<PauliOperator> {
        [CheckKind::Vertex, CheckKind::Plaquette]
            .into_iter()
            .flat_map(|k| (0..self.checks(k).len()).map(move |i| (k, i)))
            .map(|(k, i)| self.stabilizer(k, i))
            .collect()
    }

    /// `X` on every data site of the top row.
    pub fn logical_x(&self) -> PauliOperator {
        let mut o = PauliOperator::identity(self.p, self.n_sites());
        for j in (0..2 * self.l - 1).step_by(2) {
            o.x[self.site_at(0, j).expect("top row site")] = 1;
        }
        o
    }

    /// `Z` on every data site of the left column.
    pub fn logical_z(&self) -> PauliOperator {
        let mut o = PauliOperator::identity(self.p, self.n_sites());
        for i in (0..2 * self.l - 1).step_by(2) {
            o.z[self.site_at(i, 0).expect("left column site")] = 1;
        }
        o
    }

    pub fn logical_z_sites(&self) -> Vec<usize> {
        (0..2 * self.l - 1).step_by(2).map(|i| self.site_at(i, 0).expect("left column site")).collect()
    }

    /// Charges of one kind for an exponent vector (`X` exponents for
    /// plaquettes, `Z` exponents for vertices).
    pub fn charges(&self, kind: CheckKind, exps: &[u32]) -> Vec<u32> {
        let p = self.p;
        self.checks(kind)
            .checks
            .iter()
            .map(|c| c.support.iter().fold(0, |acc, &(s, k)| p.add(acc, p.mul(k, exps[s]))))
            .collect()
    }

    pub fn syndrome(&self, error: &PauliOperator) -> Result<Syndrome> {
        if error.n() != self.n_sites() {
            return Err(Error::LengthMismatch { expected: self.n_sites(), got: error.n() });
        }
        Ok(Syndrome {
            vertex: self.charges(CheckKind::Vertex, &error.z),
            plaquette: self.charges(CheckKind::Plaquette, &error.x),
        })
    }
}
