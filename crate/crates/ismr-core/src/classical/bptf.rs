//! Bounded polynomial threshold gates and layered circuits built from them.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::anf::{anf_from_truth_table, Anf};
use super::restriction::Restriction;
use crate::{Error, Result};

/// Largest fan-in a gate polynomial may address.
pub const MAX_FAN_IN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    /// 1 above weight `k`, otherwise `P`.
    OrType,
    /// 0 below weight `fan_in − k`, otherwise `P`.
    AndType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BptfGate {
    kind: GateKind,
    k: usize,
    fan_in: usize,
    poly: Anf,
}

impl BptfGate {
    pub fn new(kind: GateKind, k: usize, fan_in: usize, poly: Anf) -> Result<Self> {
        if fan_in > MAX_FAN_IN {
            return Err(Error::TooLarge("fan-in above 64"));
        }
        if poly.degree() > k {
            return Err(Error::Invalid("polynomial degree exceeds k"));
        }
        if fan_in < 64 && poly.monomials().any(|m| m >> fan_in != 0) {
            return Err(Error::Invalid("polynomial uses a wire beyond the fan-in"));
        }
        Ok(BptfGate { kind, k, fan_in, poly })
    }

    /// Unbounded OR.
    pub fn or(fan_in: usize) -> Self {
        BptfGate { kind: GateKind::OrType, k: 0, fan_in, poly: Anf::zero() }
    }

    /// Unbounded AND.
    pub fn and(fan_in: usize) -> Self {
        BptfGate { kind: GateKind::AndType, k: 0, fan_in, poly: Anf::one() }
    }

    /// AND of two wires as an OR-type gate with `k = 2`.
    pub fn and2() -> Self {
        BptfGate { kind: GateKind::OrType, k: 2, fan_in: 2, poly: Anf::monomial(0b11) }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fan_in(&self) -> usize {
        self.fan_in
    }

    pub fn poly(&self) -> &Anf {
        &self.poly
    }

    pub fn eval(&self, bits: &[u8]) -> Result<bool> {
        if bits.len() != self.fan_in {
            return Err(Error::WidthMismatch { expected: self.fan_in, got: bits.len() });
        }
        Ok(self.eval_packed(super::anf::pack(bits), bits.iter().filter(|&&b| b == 1).count()))
    }

    fn eval_packed(&self, x: u64, weight: usize) -> bool {
        match self.kind {
            GateKind::OrType if weight > self.k => true,
            GateKind::AndType if weight + self.k < self.fan_in => false,
            _ => self.poly.eval(x),
        }
    }

    /// Random gate with a sparse polynomial of degree at most `k`.
    pub fn random<R: Rng + ?Sized>(kind: GateKind, k: usize, fan_in: usize, rng: &mut R) -> Self {
        let mut mons = Vec::new();
        if fan_in > 0 {
            for _ in 0..rng.random_range(0..=3usize) {
                let deg = rng.random_range(0..=k.min(fan_in));
                let mut m = 0u64;
                while (m.count_ones() as usize) < deg {
                    m |= 1u64 << rng.random_range(0..fan_in);
                }
                mons.push(m);
            }
        }
        BptfGate { kind, k, fan_in, poly: Anf::from_monomials(mons) }
    }
}

/// Source of a gate input or circuit output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Input(usize),
    Gate(usize),
    Const(bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGate {
    pub gate: BptfGate,
    pub inputs: Vec<Wire>,
    pub layer: usize,
}

/// Gates in topological order; each gate reads inputs, constants or earlier
/// gates. Layer of a gate is one more than the deepest gate it reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BptfCircuit {
    n: usize,
    gates: Vec<CircuitGate>,
    outputs: Vec<Wire>,
}

impl BptfCircuit {
    pub fn new(n: usize) -> Self {
        BptfCircuit { n, gates: Vec::new(), outputs: Vec::new() }
    }

    fn wire_layer(&self, w: Wire) -> Result<usize> {
        match w {
            Wire::Input(i) if i < self.n => Ok(0),
            Wire::Input(_) => Err(Error::OutOfRange("input wire")),
            Wire::Const(_) => Ok(0),
            Wire::Gate(g) => self.gates.get(g).map(|c| c.layer).ok_or(Error::OutOfRange("gate wire")),
        }
    }

    /// Appends a gate and returns its wire.
    pub fn push_gate(&mut self, gate: BptfGate, inputs: Vec<Wire>) -> Result<Wire> {
        if inputs.len() != gate.fan_in() {
            return Err(Error::WidthMismatch { expected: gate.fan_in(), got: inputs.len() });
        }
        let mut layer = 0;
        for &w in &inputs {
            layer = layer.max(self.wire_layer(w)?);
        }
        self.gates.push(CircuitGate { gate, inputs, layer: layer + 1 });
        Ok(Wire::Gate(self.gates.len() - 1))
    }

    pub fn push_output(&mut self, w: Wire) -> Result<()> {
        self.wire_layer(w)?;
        self.outputs.push(w);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CircuitGate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn depth(&self) -> usize {
        self.gates.iter().map(|g| g.layer).max().unwrap_or(0)
    }

    /// Gate count per layer, `s₁…s_d`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.depth()];
        for g in &self.gates {
            s[g.layer - 1] += 1;
        }
        s
    }

    pub fn max_fan_in(&self) -> usize {
        self.gates.iter().map(|g| g.gate.fan_in()).max().unwrap_or(0)
    }

    fn wire_value(w: Wire, x: &[u8], vals: &[bool]) -> bool {
        match w {
            Wire::Input(i) => x[i] == 1,
            Wire::Gate(g) => vals[g],
            Wire::Const(b) => b,
        }
    }

    pub fn eval(&self, x: &[u8]) -> Result<Vec<u8>> {
        if x.len() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, got: x.len() });
        }
        let mut vals = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let mut packed = 0u64;
            let mut weight = 0;
            for (j, &w) in g.inputs.iter().enumerate() {
                if Self::wire_value(w, x, &vals) {
                    packed |= 1 << j;
                    weight += 1;
                }
            }
            vals.push(g.gate.eval_packed(packed, weight));
        }
        Ok(self.outputs.iter().map(|&w| Self::wire_value(w, x, &vals) as u8).collect())
    }

    /// Substitutes fixed inputs by constants and folds every gate whose
    /// inputs all became constant. Variable indexing is unchanged.
    pub fn restrict(&self, rho: &Restriction) -> Result<BptfCircuit> {
        if rho.len() != self.n {
            return Err(Error::WidthMismatch { expected: self.n, got: rho.len() });
        }
        let mut out = BptfCircuit::new(self.n);
        let mut map: Vec<Wire> = Vec::with_capacity(self.gates.len());
        let sub = |w: Wire, map: &[Wire]| match w {
            Wire::Input(i) => rho.get(i).map_or(w, Wire::Const),
            Wire::Gate(g) => map[g],
            c => c,
        };
        for g in &self.gates {
            let inputs: Vec<Wire> = g.inputs.iter().map(|&w| sub(w, &map)).collect();
            if inputs.iter().all(|w| matches!(w, Wire::Const(_))) {
                let bits: Vec<u8> = inputs.iter().map(|w| matches!(w, Wire::Const(true)) as u8).collect();
                map.push(Wire::Const(g.gate.eval(&bits)?));
            } else {
                map.push(out.push_gate(g.gate.clone(), inputs)?);
            }
        }
        for &w in &self.outputs {
            out.push_output(sub(w, &map))?;
        }
        Ok(out)
    }

    /// Input variables each output depends on syntactically.
    pub fn dependencies(&self) -> Vec<BTreeSet<usize>> {
        let mut deps: Vec<BTreeSet<usize>> = Vec::with_capacity(self.gates.len());
        let of = |w: Wire, deps: &[BTreeSet<usize>]| -> BTreeSet<usize> {
            match w {
                Wire::Input(i) => BTreeSet::from([i]),
                Wire::Gate(g) => deps[g].clone(),
                Wire::Const(_) => BTreeSet::new(),
            }
        };
        for g in &self.gates {
            let mut s = BTreeSet::new();
            for &w in &g.inputs {
                s.extend(of(w, &deps));
            }
            deps.push(s);
        }
        self.outputs.iter().map(|&w| of(w, &deps)).collect()
    }

    /// Truth table of output `j` indexed by the packed input.
    pub fn output_truth_table(&self, j: usize) -> Result<Vec<u8>> {
        if self.n > super::anf::TRUTH_TABLE_LIMIT {
            return Err(Error::TooLarge("truth table above 2^20 rows"));
        }
        let mut x = vec![0u8; self.n];
        let mut t = Vec::with_capacity(1 << self.n);
        for v in 0..1usize << self.n {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (v >> i & 1) as u8;
            }
            t.push(self.eval(&x)?[j]);
        }
        Ok(t)
    }

    /// ANF of the XOR of all outputs.
    pub fn output_parity_anf(&self) -> Result<Anf> {
        if self.n > super::anf::TRUTH_TABLE_LIMIT {
            return Err(Error::TooLarge("truth table above 2^20 rows"));
        }
        let mut x = vec![0u8; self.n];
        let mut t = Vec::with_capacity(1 << self.n);
        for v in 0..1usize << self.n {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (v >> i & 1) as u8;
            }
            t.push(self.eval(&x)?.iter().fold(0, |a, &b| a ^ b));
        }
        anf_from_truth_table(&t)
    }

    /// Random layered circuit: each gate reads `fan_in` wires from the
    /// previous layer (inputs for the first), gate kinds and `k` uniform,
    /// outputs are the last layer.
    pub fn random<R: Rng + ?Sized>(
        n: usize,
        widths: &[usize],
        fan_in: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut c = BptfCircuit::new(n);
        let mut prev: Vec<Wire> = (0..n).map(Wire::Input).collect();
        for &w in widths {
            let mut cur = Vec::with_capacity(w);
            for _ in 0..w {
                let inputs: Vec<Wire> = (0..fan_in).map(|_| prev[rng.random_range(0..prev.len())]).collect();
                let kind = if rng.random() { GateKind::OrType } else { GateKind::AndType };
                let kk = rng.random_range(0..=k);
                cur.push(c.push_gate(BptfGate::random(kind, kk, fan_in, rng), inputs)?);
            }
            prev = cur;
        }
        for w in prev {
            c.push_output(w)?;
        }
        Ok(c)
    }
}

/// True when the XOR of the outputs equals `(|x|/2) mod 2` on every
/// even-weight input.
pub fn valid_parity_check(circ: &BptfCircuit) -> Result<bool> {
    let n = circ.n();
    if n > super::anf::TRUTH_TABLE_LIMIT {
        return Err(Error::TooLarge("exhaustive check above 20 inputs"));
    }
    let mut x = vec![0u8; n];
    for v in 0u32..1 << n {
        let w = v.count_ones();
        if w % 2 == 1 {
            continue;
        }
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = (v >> i & 1) as u8;
        }
        let par = circ.eval(&x)?.iter().fold(0u8, |a, &b| a ^ b);
        if par as u32 != (w / 2) % 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Depth-1 exact solver: every pairwise AND `x_i x_j` plus `x_j x_0` for each
/// `j`, `C(n,2) + n` outputs in total.
pub fn pairwise_solver(n: usize) -> Result<BptfCircuit> {
    let mut c = BptfCircuit::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = c.push_gate(BptfGate::and2(), vec![Wire::Input(i), Wire::Input(j)])?;
            c.push_output(w)?;
        }
    }
    for j in 0..n {
        let w = c.push_gate(BptfGate::and2(), vec![Wire::Input(j), Wire::Input(0)])?;
        c.push_output(w)?;
    }
    Ok(c)
}

/// Circuit whose single output is the constant `b`.
pub fn constant_circuit(n: usize, b: bool) -> BptfCircuit {
    let mut c = BptfCircuit::new(n);
    c.outputs.push(Wire::Const(b));
    c
}
