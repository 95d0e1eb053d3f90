//! Trees over the vertex qupits; edges become ancilla qupits.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Path,
    BinaryTree,
    Grid3d,
    Custom,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Path => "path",
            GraphKind::BinaryTree => "tree",
            GraphKind::Grid3d => "grid3d",
            GraphKind::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "path" => Some(GraphKind::Path),
            "tree" | "binary-tree" => Some(GraphKind::BinaryTree),
            "grid3d" | "3d" => Some(GraphKind::Grid3d),
            _ => None,
        }
    }
}

/// A spanning tree with a designated root. `parent[root]` is `None`;
/// `parent_edge[u]` indexes `edges` for every non-root `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    kind: GraphKind,
    n: usize,
    edges: Vec<(usize, usize)>,
    root: usize,
    parent: Vec<Option<usize>>,
    parent_edge: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl GraphSpec {
    /// Validates that `edges` form a spanning tree on `n` vertices.
    pub fn from_edges(n: usize, edges: Vec<(usize, usize)>, root: usize) -> Result<Self> {
        Self::build(GraphKind::Custom, n, edges, root)
    }

    fn build(kind: GraphKind, n: usize, edges: Vec<(usize, usize)>, root: usize) -> Result<Self> {
        if n == 0 || root >= n {
            return Err(Error::OutOfRange("root vertex"));
        }
        if edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return Err(Error::Invalid("edge endpoint"));
        }
        if edges.len() != n - 1 {
            return Err(Error::DisconnectedGraph);
        }
        let mut adj = vec![Vec::new(); n];
        for (k, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, k));
            adj[b].push((a, k));
        }
        let mut parent = vec![None; n];
        let mut parent_edge = vec![None; n];
        let mut depth = vec![usize::MAX; n];
        depth[root] = 0;
        let mut q = VecDeque::from([root]);
        while let Some(u) = q.pop_front() {
            for &(v, k) in &adj[u] {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = Some(u);
                    parent_edge[v] = Some(k);
                    q.push_back(v);
                }
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::DisconnectedGraph);
        }
        Ok(GraphSpec { kind, n, edges, root, parent, parent_edge, depth })
    }

    /// `0 - 1 - … - (n−1)` rooted at 0.
    pub fn path(n: usize) -> Result<Self> {
        let edges = (1..n).map(|i| (i - 1, i)).collect();
        Self::build(GraphKind::Path, n, edges, 0)
    }

    /// Heap-ordered binary tree rooted at 0.
    pub fn binary_tree(n: usize) -> Result<Self> {
        let edges = (1..n).map(|i| ((i - 1) / 2, i)).collect();
        Self::build(GraphKind::BinaryTree, n, edges, 0)
    }

    /// BFS spanning tree of a near-cubic `a×b×c` grid with `abc = n`, rooted at
    /// the grid centre so only nearest-neighbour edges appear.
    pub fn grid3d(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("n"));
        }
        let (a, b, c) = cube_dims(n);
        let id = |i: usize, j: usize, k: usize| (i * b + j) * c + k;
        let centre = id(a / 2, b / 2, c / 2);
        let mut seen = vec![false; n];
        seen[centre] = true;
        let mut edges = Vec::with_capacity(n - 1);
        let mut q = VecDeque::from([(a / 2, b / 2, c / 2)]);
        while let Some((i, j, k)) = q.pop_front() {
            let mut nb = Vec::with_capacity(6);
            if i > 0 {
                nb.push((i - 1, j, k));
            }
            if i + 1 < a {
                nb.push((i + 1, j, k));
            }
            if j > 0 {
                nb.push((i, j - 1, k));
            }
            if j + 1 < b {
                nb.push((i, j + 1, k));
            }
            if k > 0 {
                nb.push((i, j, k - 1));
            }
            if k + 1 < c {
                nb.push((i, j, k + 1));
            }
            for (x, y, z) in nb {
                let v = id(x, y, z);
                if !seen[v] {
                    seen[v] = true;
                    edges.push((id(i, j, k), v));
                    q.push_back((x, y, z));
                }
            }
        }
        Self::build(GraphKind::Grid3d, n, edges, centre)
    }

    pub fn of_kind(kind: GraphKind, n: usize) -> Result<Self> {
        match kind {
            GraphKind::Path => Self::path(n),
            GraphKind::BinaryTree => Self::binary_tree(n),
            GraphKind::Grid3d => Self::grid3d(n),
            GraphKind::Custom => Err(Error::Invalid("custom graphs need explicit edges")),
        }
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn depth(&self, u: usize) -> usize {
        self.depth[u]
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    /// Largest distance from the root.
    pub fn eccentricity(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Edge indices from `u` up to the root, nearest first.
    pub fn path_to_root(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.depth[u]);
        let mut v = u;
        while let Some(k) = self.parent_edge[v] {
            out.push(k);
            v = self.parent[v].expect("non-root has a parent");
        }
        out
    }
}

fn cube_dims(n: usize) -> (usize, usize, usize) {
    let mut best = (n, 1, 1);
    let mut best_score = n;
    for a in 1..=n {
        if !n.is_multiple_of(a) {
            continue;
        }
        for b in 1..=n / a {
            if !(n / a).is_multiple_of(b) {
                continue;
            }
            let c = n / a / b;
            let score = a.max(b).max(c);
            if score < best_score {
                best_score = score;
                best = (a, b, c);
            }
        }
    }
    best
}
