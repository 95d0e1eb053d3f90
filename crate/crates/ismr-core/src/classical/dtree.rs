//! Decision trees, forests and the path-expansion conversion to ANF.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::anf::Anf;
use super::restriction::Restriction;
use crate::{Error, Result};

/// Query tree; `left` is followed when the variable is 1, `right` when 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    Node { var: usize, left: Box<DecisionTree>, right: Box<DecisionTree> },
}

impl DecisionTree {
    pub fn leaf(b: bool) -> Self {
        DecisionTree::Leaf(b)
    }

    pub fn node(var: usize, left: DecisionTree, right: DecisionTree) -> Self {
        DecisionTree::Node { var, left: Box::new(left), right: Box::new(right) }
    }

    pub fn eval(&self, x: &[u8]) -> bool {
        match self {
            DecisionTree::Leaf(b) => *b,
            DecisionTree::Node { var, left, right } => {
                if x[*var] == 1 { left.eval(x) } else { right.eval(x) }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Node { var, left, right } => (var + 1).max(left.arity()).max(right.arity()),
        }
    }

    /// Checks that no variable repeats along a root-to-leaf path.
    pub fn validate(&self) -> Result<()> {
        fn walk(t: &DecisionTree, seen: &mut Vec<usize>) -> Result<()> {
            if let DecisionTree::Node { var, left, right } = t {
                if seen.contains(var) {
                    return Err(Error::Invalid("variable repeated on a path"));
                }
                seen.push(*var);
                walk(left, seen)?;
                walk(right, seen)?;
                seen.pop();
            }
            Ok(())
        }
        walk(self, &mut Vec::new())
    }

    /// Substitutes fixed variables and merges identical children.
    pub fn restrict(&self, rho: &Restriction) -> DecisionTree {
        match self {
            DecisionTree::Leaf(b) => DecisionTree::Leaf(*b),
            DecisionTree::Node { var, left, right } => match rho.values().get(*var).copied().flatten() {
                Some(true) => left.restrict(rho),
                Some(false) => right.restrict(rho),
                None => {
                    let l = left.restrict(rho);
                    let r = right.restrict(rho);
                    if l == r { l } else { DecisionTree::node(*var, l, r) }
                }
            },
        }
    }

    /// Random tree of the given depth over `n` variables, no repeats on paths.
    /// Each internal position becomes a leaf early with probability `stop`.
    pub fn random<R: Rng + ?Sized>(n: usize, depth: usize, stop: f64, rng: &mut R) -> Self {
        fn go<R: Rng + ?Sized>(n: usize, d: usize, stop: f64, used: &mut Vec<usize>, rng: &mut R) -> DecisionTree {
            if d == 0 || used.len() >= n || rng.random::<f64>() < stop {
                return DecisionTree::Leaf(rng.random());
            }
            let var = loop {
                let v = rng.random_range(0..n);
                if !used.contains(&v) {
                    break v;
                }
            };
            used.push(var);
            let l = go(n, d - 1, stop, used, rng);
            let r = go(n, d - 1, stop, used, rng);
            used.pop();
            DecisionTree::node(var, l, r)
        }
        go(n, depth, stop, &mut Vec::new(), rng)
    }

    /// Complete tree of depth `q` with distinct variables in breadth-first
    /// order and the given leaf labels (left to right, `2^q` of them).
    pub fn complete(q: usize, leaves: &[bool]) -> Result<Self> {
        if leaves.len() != 1 << q {
            return Err(Error::LengthMismatch { expected: 1 << q, got: leaves.len() });
        }
        fn go(node: usize, d: usize, q: usize, leaves: &[bool], first_leaf: usize) -> DecisionTree {
            if d == q {
                return DecisionTree::Leaf(leaves[first_leaf]);
            }
            let half = 1 << (q - d - 1);
            DecisionTree::node(
                node,
                go(2 * node + 1, d + 1, q, leaves, first_leaf),
                go(2 * node + 2, d + 1, q, leaves, first_leaf + half),
            )
        }
        Ok(go(0, 0, q, leaves, 0))
    }
}

/// Path expansion: every 1-leaf contributes the product of its literals; the
/// products are combined with OR and the result reduced.
pub fn dt_to_anf(tree: &DecisionTree) -> Anf {
    fn rec(t: &DecisionTree, path: Anf, set: &mut Vec<Anf>) {
        match t {
            DecisionTree::Leaf(true) => set.push(path),
            DecisionTree::Leaf(false) => {}
            DecisionTree::Node { var, left, right } => {
                rec(left, Anf::var(*var).and(&path), set);
                rec(right, Anf::var(*var).not().and(&path), set);
            }
        }
    }
    let mut paths = Vec::new();
    rec(tree, Anf::one(), &mut paths);
    paths.iter().fold(Anf::zero(), |acc, p| p.or(&acc))
}

/// Largest number of degree-2 monomials over all leaf labelings of the
/// complete depth-`q` tree with distinct variables.
pub fn max_degree2_terms_complete(q: usize) -> Result<usize> {
    if q > 4 {
        return Err(Error::TooLarge("leaf labelings above 2^16"));
    }
    let leaves = 1usize << q;
    let mut best = 0;
    for lab in 0u32..1 << leaves {
        let l: Vec<bool> = (0..leaves).map(|i| lab >> i & 1 == 1).collect();
        let t = DecisionTree::complete(q, &l)?;
        best = best.max(dt_to_anf(&t).count_degree_terms(2));
    }
    Ok(best)
}

/// The claimed cap `C(q,2) + q`.
pub fn degree2_cap(q: usize) -> usize {
    q * q.saturating_sub(1) / 2 + q
}

/// Global tree whose leaves hold one local tree per output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForestTree {
    Leaf(Vec<DecisionTree>),
    Node { var: usize, left: Box<ForestTree>, right: Box<ForestTree> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionForest {
    pub root: ForestTree,
}

impl DecisionForest {
    pub fn eval(&self, x: &[u8]) -> Vec<u8> {
        let mut t = &self.root;
        loop {
            match t {
                ForestTree::Leaf(locals) => return locals.iter().map(|d| d.eval(x) as u8).collect(),
                ForestTree::Node { var, left, right } => {
                    t = if x[*var] == 1 { left } else { right };
                }
            }
        }
    }

    /// Depth of the global tree.
    pub fn global_depth(&self) -> usize {
        fn d(t: &ForestTree) -> usize {
            match t {
                ForestTree::Leaf(_) => 0,
                ForestTree::Node { left, right, .. } => 1 + d(left).max(d(right)),
            }
        }
        d(&self.root)
    }

    /// Deepest local tree across all leaves.
    pub fn local_depth(&self) -> usize {
        fn d(t: &ForestTree) -> usize {
            match t {
                ForestTree::Leaf(ls) => ls.iter().map(|l| l.depth()).max().unwrap_or(0),
                ForestTree::Node { left, right, .. } => d(left).max(d(right)),
            }
        }
        d(&self.root)
    }

    pub fn outputs(&self) -> usize {
        let mut t = &self.root;
        loop {
            match t {
                ForestTree::Leaf(ls) => return ls.len(),
                ForestTree::Node { left, .. } => t = left,
            }
        }
    }
}

/// Forest with a trivial global tree.
pub fn forest_of(trees: Vec<DecisionTree>) -> DecisionForest {
    DecisionForest { root: ForestTree::Leaf(trees) }
}

/// Truth table indexed by the packed assignment (bit `i` is `x_i`).
pub fn truth_table(tree: &DecisionTree, n: usize) -> Vec<u8> {
    let mut x = vec![0u8; n];
    (0..1usize << n)
        .map(|v| {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (v >> i & 1) as u8;
            }
            tree.eval(&x) as u8
        })
        .collect()
}
