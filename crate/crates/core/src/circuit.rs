//! Reversible-circuit IR: gates over indexed wires, named registers,
//! classical simulation, inversion and gate-cost accounting.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use std::collections::BTreeMap;

pub type Wire = u32;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Gate {
    Cnot { control: Wire, target: Wire },
    Toffoli { c1: Wire, c2: Wire, target: Wire },
    Swap { a: Wire, b: Wire },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        assert_ne!(control, target);
        Gate::Cnot {
            control: control as Wire,
            target: target as Wire,
        }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        assert!(c1 != c2 && c1 != target && c2 != target);
        Gate::Toffoli {
            c1: c1 as Wire,
            c2: c2 as Wire,
            target: target as Wire,
        }
    }

    pub fn swap(a: usize, b: usize) -> Gate {
        assert_ne!(a, b);
        Gate::Swap {
            a: a as Wire,
            b: b as Wire,
        }
    }

    pub fn max_wire(&self) -> Wire {
        match *self {
            Gate::Cnot { control, target } => control.max(target),
            Gate::Toffoli { c1, c2, target } => c1.max(c2).max(target),
            Gate::Swap { a, b } => a.max(b),
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Gate::Toffoli { .. })
    }

    /// Wires whose value the gate reads (SWAP reads and writes both).
    pub fn reads(&self) -> [Option<Wire>; 2] {
        match *self {
            Gate::Cnot { control, .. } => [Some(control), None],
            Gate::Toffoli { c1, c2, .. } => [Some(c1), Some(c2)],
            Gate::Swap { a, b } => [Some(a), Some(b)],
        }
    }

    /// Wires the gate writes.
    pub fn writes(&self) -> [Option<Wire>; 2] {
        match *self {
            Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => [Some(target), None],
            Gate::Swap { a, b } => [Some(a), Some(b)],
        }
    }

    /// Two gates commute when neither writes a wire the other reads and any
    /// shared writes are XOR writes (SWAP writes are not).
    pub fn commutes_with(&self, other: &Gate) -> bool {
        let swap_involved = matches!(self, Gate::Swap { .. }) || matches!(other, Gate::Swap { .. });
        let overlap = |xs: [Option<Wire>; 2], ys: [Option<Wire>; 2]| {
            xs.iter()
                .flatten()
                .any(|x| ys.iter().flatten().any(|y| x == y))
        };
        if swap_involved {
            // conservative: require fully disjoint wire sets
            let wires = |g: &Gate| match *g {
                Gate::Cnot { control, target } => vec![control, target],
                Gate::Toffoli { c1, c2, target } => vec![c1, c2, target],
                Gate::Swap { a, b } => vec![a, b],
            };
            let a = wires(self);
            return !wires(other).iter().any(|w| a.contains(w));
        }
        !overlap(self.writes(), other.reads()) && !overlap(other.writes(), self.reads())
    }

    fn map_wires(&self, f: impl Fn(Wire) -> Wire) -> Gate {
        match *self {
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(control),
                target: f(target),
            },
            Gate::Toffoli { c1, c2, target } => Gate::Toffoli {
                c1: f(c1),
                c2: f(c2),
                target: f(target),
            },
            Gate::Swap { a, b } => Gate::Swap { a: f(a), b: f(b) },
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RegisterRole {
    InputA,
    InputB,
    Target,
    Ancilla,
}

impl RegisterRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegisterRole::InputA => "input_a",
            RegisterRole::InputB => "input_b",
            RegisterRole::Target => "target",
            RegisterRole::Ancilla => "ancilla",
        }
    }

    pub fn parse(s: &str) -> Option<RegisterRole> {
        match s {
            "input_a" => Some(RegisterRole::InputA),
            "input_b" => Some(RegisterRole::InputB),
            "target" => Some(RegisterRole::Target),
            "ancilla" => Some(RegisterRole::Ancilla),
            _ => None,
        }
    }
}

/// Contiguous wire range with a name and role.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
    pub role: RegisterRole,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
    phases: Vec<(String, usize)>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
            registers: Vec::new(),
            phases: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn push(&mut self, gate: Gate) {
        assert!(
            (gate.max_wire() as usize) < self.width,
            "gate {gate:?} out of range for width {}",
            self.width
        );
        self.gates.push(gate);
    }

    pub fn add_register(&mut self, name: &str, start: usize, len: usize, role: RegisterRole) {
        assert!(start + len <= self.width);
        for r in &self.registers {
            assert!(
                start >= r.start + r.len || r.start >= start + len,
                "register '{name}' overlaps '{}'",
                r.name
            );
        }
        self.registers.push(Register {
            name: name.into(),
            start,
            len,
            role,
        });
    }

    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// Mark the start of a cost-accounting phase at the current gate index.
    pub fn mark_phase(&mut self, label: &str) {
        self.phases.push((label.into(), self.gates.len()));
    }

    /// Append all gates of `other` (same width), keeping our registers.
    pub fn extend_from(&mut self, other: &Circuit) {
        assert_eq!(self.width, other.width);
        self.gates.extend_from_slice(&other.gates);
    }

    /// Append `other` with its wire `i` mapped to `offset + i`.
    pub fn extend_offset(&mut self, other: &Circuit, offset: usize) {
        assert!(offset + other.width <= self.width);
        for g in &other.gates {
            self.gates.push(g.map_wires(|w| w + offset as Wire));
        }
    }

    /// Classical simulation of the full gate list.
    pub fn simulate_full(&self, input: &BitVec) -> Result<BitVec> {
        if let Some(h) = input.highest_bit() {
            if h >= self.width {
                return Err(Error::WidthMismatch {
                    want: self.width,
                    got: h + 1,
                });
            }
        }
        let mut state = input.clone();
        for g in &self.gates {
            match *g {
                Gate::Cnot { control, target } => {
                    if state.get(control as usize) {
                        state.flip(target as usize);
                    }
                }
                Gate::Toffoli { c1, c2, target } => {
                    if state.get(c1 as usize) && state.get(c2 as usize) {
                        state.flip(target as usize);
                    }
                }
                Gate::Swap { a, b } => {
                    let (va, vb) = (state.get(a as usize), state.get(b as usize));
                    state.set(a as usize, vb);
                    state.set(b as usize, va);
                }
            }
        }
        state.normalize();
        Ok(state)
    }

    /// The linear map computed by a CNOT/SWAP circuit: returns `M` with
    /// `output = M * input` (column-vector convention).
    pub fn simulate_linear(&self) -> Result<BitMatrix> {
        let mut m = BitMatrix::identity(self.width);
        for (index, g) in self.gates.iter().enumerate() {
            match *g {
                Gate::Cnot { control, target } => m.row_xor(control as usize, target as usize),
                Gate::Swap { a, b } => m.swap_rows(a as usize, b as usize),
                Gate::Toffoli { .. } => return Err(Error::NonlinearGate { index }),
            }
        }
        Ok(m)
    }

    /// Reversed gate list; every gate is self-inverse.
    pub fn invert(&self) -> Circuit {
        let mut c = Circuit::new(self.width);
        c.registers = self.registers.clone();
        c.gates = self.gates.iter().rev().copied().collect();
        c
    }

    pub fn count_toffoli(&self) -> u64 {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Toffoli { .. }))
            .count() as u64
    }

    pub fn cost(&self, model: &CostModel) -> CostReport {
        model.validate();
        // under free_permutation a trailing SWAP-only suffix costs nothing
        let free_from = if model.free_permutation {
            let mut i = self.gates.len();
            while i > 0 && matches!(self.gates[i - 1], Gate::Swap { .. }) {
                i -= 1;
            }
            i
        } else {
            self.gates.len()
        };
        let mut phases: BTreeMap<String, (u64, u64)> = BTreeMap::new();
        let mut toffoli = 0u64;
        let mut cnot = 0u64;
        for (i, g) in self.gates.iter().enumerate() {
            let (dt, dc) = match g {
                Gate::Toffoli { .. } => (1, 0),
                Gate::Cnot { .. } => (0, 1),
                Gate::Swap { .. } => {
                    if i >= free_from {
                        (0, 0)
                    } else if model.swap_as_cnots {
                        (0, 3)
                    } else {
                        (0, 0)
                    }
                }
            };
            toffoli += dt;
            cnot += dc;
            if let Some(label) = self.phase_of(i) {
                let e = phases.entry(label.to_string()).or_insert((0, 0));
                e.0 += dt;
                e.1 += dc;
            }
        }
        CostReport {
            toffoli,
            cnot,
            weighted: model.toffoli_weight * toffoli as f64 + model.cnot_weight * cnot as f64,
            phases,
        }
    }

    fn phase_of(&self, gate_index: usize) -> Option<&str> {
        let mut label = None;
        for (name, start) in &self.phases {
            if *start <= gate_index {
                label = Some(name.as_str());
            } else {
                break;
            }
        }
        label
    }

    /// Commute every SWAP to the end of the gate list by relabeling the
    /// wires of later gates; the result computes the same function with all
    /// swaps in one trailing block.
    pub fn push_swaps_right(&self) -> Circuit {
        let mut out = Circuit::new(self.width);
        out.registers = self.registers.clone();
        // inv[w] = wire that currently holds the content destined for w
        let mut inv: Vec<Wire> = (0..self.width as Wire).collect();
        let mut fwd: Vec<Wire> = inv.clone(); // fwd[v] = where content of v went
        for g in &self.gates {
            match *g {
                Gate::Swap { a, b } => {
                    fwd.swap(inv[a as usize] as usize, inv[b as usize] as usize);
                    inv.swap(a as usize, b as usize);
                }
                _ => out.push(g.map_wires(|w| inv[w as usize])),
            }
        }
        for g in permutation_to_swaps(&fwd) {
            out.push(g);
        }
        out
    }
}

/// Swap gates realizing `perm`, where `perm[v]` is the wire that should end
/// up holding the content initially on wire `v`. Uses `n - cycles` swaps.
pub fn permutation_to_swaps(perm: &[Wire]) -> Vec<Gate> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || perm[start] as usize == start {
            seen[start] = true;
            continue;
        }
        // walk the cycle, swapping backwards from its end
        let mut cycle = vec![start];
        let mut v = perm[start] as usize;
        while v != start {
            cycle.push(v);
            v = perm[v] as usize;
        }
        for &c in &cycle {
            seen[c] = true;
        }
        for i in (1..cycle.len()).rev() {
            out.push(Gate::swap(cycle[i - 1], cycle[i]));
        }
    }
    out
}

/// Gate-cost weights; the default is the `10 * Toffoli + CNOT` metric with
/// SWAP folded as three CNOTs.
#[derive(Clone, Debug)]
pub struct CostModel {
    pub toffoli_weight: f64,
    pub cnot_weight: f64,
    pub swap_as_cnots: bool,
    pub free_permutation: bool,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            toffoli_weight: 10.0,
            cnot_weight: 1.0,
            swap_as_cnots: true,
            free_permutation: false,
        }
    }
}

impl CostModel {
    pub fn free_permutation() -> Self {
        CostModel {
            free_permutation: true,
            ..Default::default()
        }
    }

    fn validate(&self) {
        assert!(self.toffoli_weight.is_finite() && self.toffoli_weight >= 0.0);
        assert!(self.cnot_weight.is_finite() && self.cnot_weight >= 0.0);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub toffoli: u64,
    pub cnot: u64,
    pub weighted: f64,
    pub phases: BTreeMap<String, (u64, u64)>,
}

impl CostReport {
    /// CSV row `m,poly,toffoli,cnot,weighted`.
    pub fn csv_row(&self, m: usize, poly: &str) -> String {
        format!(
            "{m},{poly},{},{},{}",
            self.toffoli, self.cnot, self.weighted
        )
    }
}
