//! Input blocks that no output block reads together.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::bptf::BptfCircuit;
use crate::{Error, Result};

/// Conflict graph on input blocks: two blocks are adjacent when some output
/// block depends on both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGraph {
    pub blocks: usize,
    pub adj: Vec<BTreeSet<usize>>,
}

impl BlockGraph {
    /// `deps[j]` lists the inputs output `j` depends on; inputs and outputs
    /// are grouped into consecutive blocks of `block_size`.
    pub fn from_dependencies(n_inputs: usize, deps: &[BTreeSet<usize>], block_size: usize) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::OutOfRange("block size must be positive"));
        }
        let blocks = n_inputs.div_ceil(block_size);
        let mut adj = vec![BTreeSet::new(); blocks];
        for out in deps.chunks(block_size) {
            let touched: BTreeSet<usize> = out.iter().flatten().map(|&i| i / block_size).collect();
            let touched: Vec<usize> = touched.into_iter().collect();
            for (a, &u) in touched.iter().enumerate() {
                for &v in &touched[a + 1..] {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
        }
        Ok(BlockGraph { blocks, adj })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().all(|&u| set.iter().all(|v| !self.adj[u].contains(v)))
    }

    /// Repeatedly deletes a vertex of largest remaining degree (lowest index
    /// on ties) until no edges remain.
    pub fn greedy_independent_set(&self) -> Vec<usize> {
        let mut alive = vec![true; self.blocks];
        let mut deg: Vec<usize> = self.adj.iter().map(|s| s.len()).collect();
        loop {
            let mut best: Option<usize> = None;
            for u in 0..self.blocks {
                if alive[u] && deg[u] > 0 && best.is_none_or(|b| deg[u] > deg[b]) {
                    best = Some(u);
                }
            }
            let Some(u) = best else { break };
            alive[u] = false;
            for &v in &self.adj[u] {
                if alive[v] {
                    deg[v] -= 1;
                }
            }
        }
        (0..self.blocks).filter(|&u| alive[u]).collect()
    }
}

/// Caro–Wei form of Turán's bound, `N²/(2E + N)`.
pub fn turan_bound(vertices: usize, edges: usize) -> f64 {
    let n = vertices as f64;
    n * n / (2.0 * edges as f64 + n)
}

/// The weaker-looking `N²/E` form (infinite when there are no edges).
pub fn turan_bound_ratio(vertices: usize, edges: usize) -> f64 {
    let n = vertices as f64;
    n * n / edges as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockReport {
    pub set: Vec<usize>,
    pub blocks: usize,
    pub edges: usize,
    pub bound: f64,
    pub ratio_bound: f64,
}

pub fn block_independent_set(circ: &BptfCircuit, block_size: usize) -> Result<BlockReport> {
    let g = BlockGraph::from_dependencies(circ.n(), &circ.dependencies(), block_size)?;
    let set = g.greedy_independent_set();
    let edges = g.edge_count();
    Ok(BlockReport {
        set,
        blocks: g.blocks,
        edges,
        bound: turan_bound(g.blocks, edges),
        ratio_bound: turan_bound_ratio(g.blocks, edges),
    })
}
