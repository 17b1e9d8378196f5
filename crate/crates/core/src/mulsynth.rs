//! Ancilla-free GF(2^m) multiplication circuits: the in-place Karatsuba
//! construction around the cheap constant multiplier, generalized bilinear
//! (T, R) formulas with per-width planning, and the schoolbook baseline.
//!
//! Multiplier layout: wires `[0, m)` hold input a, `[m, 2m)` input b and
//! `[2m, 3m)` the target c; every circuit maps |a,b,c> to |a,b,c+ab>.
//!
//! Wire bookkeeping: permutations arising from constant-multiplication
//! blocks and the x^(m/2) shifts are never emitted as gates mid-circuit;
//! they are tracked as a logical-to-physical map on the target register and
//! resolved once at the end.

use crate::circuit::{permutation_to_swaps, Circuit, CostModel, CostReport, Gate, RegisterRole, Wire};
use crate::constmul::synth_constmul;
use crate::error::{Error, Result};
use crate::formula::{builtin_formulas, KaratsubaFormula};
use crate::poly::BinPoly;
use std::collections::BTreeMap;

/// How to split at each recursion step.
#[derive(Clone, Debug)]
pub enum MulPlan {
    /// Minimize weighted cost by dynamic programming over the formulas.
    Auto,
    /// Fixed split counts per recursion depth (the last entry repeats).
    Levels(Vec<usize>),
}

/// One option for multiplying at a given operand width.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthChoice {
    /// Schoolbook: w^2 Toffoli gates, no CNOTs.
    School,
    /// Split with the formula at this index in the library.
    Formula(usize),
}

/// A linear map on the target register as a CNOT core plus a trailing wire
/// permutation that is tracked, not emitted.
#[derive(Clone)]
struct LinearBlock {
    gates: Vec<Gate>,
    perm: Vec<usize>,
}

impl LinearBlock {
    /// Split a CNOT/SWAP circuit (swaps already pushed right) into the CNOT
    /// core and the permutation of the trailing swap block.
    fn from_circuit(c: &Circuit) -> LinearBlock {
        let w = c.width();
        let gates: Vec<Gate> = c
            .gates()
            .iter()
            .copied()
            .filter(|g| !matches!(g, Gate::Swap { .. }))
            .collect();
        let mut perm: Vec<usize> = (0..w).collect();
        let mut first_swap = c.gates().len();
        for (i, g) in c.gates().iter().enumerate() {
            if matches!(g, Gate::Swap { .. }) {
                first_swap = i;
                break;
            }
        }
        for g in &c.gates()[first_swap..] {
            match *g {
                Gate::Swap { a, b } => {
                    // content moves with the swap
                    let (pa, pb) = (
                        perm.iter().position(|&x| x == a as usize).unwrap(),
                        perm.iter().position(|&x| x == b as usize).unwrap(),
                    );
                    perm.swap(pa, pb);
                }
                _ => panic!("swap block must be trailing"),
            }
        }
        LinearBlock { gates, perm }
    }
}

/// Target-register shift block: multiplication by x^steps mod p.
fn shift_block(m: usize, p: &BinPoly, steps: usize) -> LinearBlock {
    let tail: Vec<usize> = p.exponents().into_iter().filter(|&e| e > 0 && e < m).collect();
    let mut c = Circuit::new(m);
    for _ in 0..steps {
        // y *= x: feed the top coefficient into the reduction taps, then
        // rotate every wire up by one
        for &e in &tail {
            c.push(Gate::cnot(m - 1, e - 1));
        }
        for w in (1..m).rev() {
            c.push(Gate::swap(w - 1, w));
        }
    }
    LinearBlock::from_circuit(&c.push_swaps_right())
}

/// Structure of one recursion level for width `w` under a formula: the
/// grouped products with their shifts and the conjugation cascades.
struct LevelPlan {
    piece_w: usize,
    /// (t0, other piece indices) per T row, shared by a and b
    preps: Vec<(usize, Vec<usize>)>,
    /// groups of products sharing a normalized R column
    groups: Vec<GroupPlan>,
}

struct GroupPlan {
    /// exponents (in y = x^piece_w units) of the shared column polynomial,
    /// without the constant term
    cexps: Vec<usize>,
    /// cascade window in target coefficients
    window: usize,
    /// (t_row, h offset, operand width) per member product
    members: Vec<(usize, usize, usize)>,
}

fn piece_widths(w: usize, k: usize) -> Option<(usize, Vec<usize>)> {
    if k < 2 || w < k {
        return None;
    }
    let np = w.div_ceil(k);
    let last = w as i64 - ((k - 1) * np) as i64;
    if last < 1 {
        return None;
    }
    let mut widths = vec![np; k - 1];
    widths.push(last as usize);
    Some((np, widths))
}

fn level_plan(w: usize, f: &KaratsubaFormula) -> Option<LevelPlan> {
    let (np, widths) = piece_widths(w, f.k)?;
    let mut preps = Vec::with_capacity(f.p);
    let mut op_width = Vec::with_capacity(f.p);
    for row in 0..f.p {
        let pieces: Vec<usize> = (0..f.k).filter(|&t| f.t.get(row, t)).collect();
        if pieces.is_empty() {
            return None;
        }
        let &t0 = pieces
            .iter()
            .max_by_key(|&&t| (widths[t], std::cmp::Reverse(t)))
            .unwrap();
        let others: Vec<usize> = pieces.iter().copied().filter(|&t| t != t0).collect();
        op_width.push(widths[t0]);
        preps.push((t0, others));
    }
    // group R columns by their shift-normalized pattern
    let mut groups: Vec<(Vec<usize>, GroupPlan)> = Vec::new();
    for j in 0..f.p {
        let rows: Vec<usize> = (0..2 * f.k - 1).filter(|&r| f.r.get(r, j)).collect();
        let s = *rows.first()?;
        let cexps: Vec<usize> = rows.iter().map(|&r| r - s).skip(1).collect();
        let h_off = np * s;
        if h_off + 2 * op_width[j] - 1 > 2 * w - 1 {
            return None; // product would spill past the output window
        }
        let member = (j, h_off, op_width[j]);
        match groups.iter_mut().find(|(key, _)| *key == cexps) {
            Some((_, g)) => g.members.push(member),
            None => groups.push((
                cexps.clone(),
                GroupPlan {
                    cexps,
                    window: 0,
                    members: vec![member],
                },
            )),
        }
    }
    let mut groups: Vec<GroupPlan> = groups.into_iter().map(|(_, g)| g).collect();
    for g in &mut groups {
        if g.cexps.is_empty() {
            continue;
        }
        let reach = g
            .members
            .iter()
            .map(|&(_, off, ow)| off + 2 * ow - 1)
            .max()
            .unwrap();
        let spread = np * g.cexps.iter().max().unwrap();
        g.window = (reach + spread).min(2 * w - 1);
    }
    Some(LevelPlan {
        piece_w: np,
        preps,
        groups,
    })
}

/// Per-width costs of the unreduced polynomial multiplier.
#[derive(Clone, Copy, Debug)]
pub struct WidthCost {
    pub toffoli: u64,
    pub cnot: u64,
}

/// Bottom-up table of the best choice per operand width.
pub struct MulTable {
    pub choices: BTreeMap<usize, WidthChoice>,
    pub costs: BTreeMap<usize, WidthCost>,
}

fn cascade_gate_count(cexps: &[usize], np: usize, window: usize) -> u64 {
    cexps
        .iter()
        .map(|&e| (window as u64).saturating_sub((e * np) as u64))
        .sum()
}

/// Fill the width table up to `max_w` with the weighted-cost-minimal choice
/// (Toffoli at weight 10, CNOT at 1).
pub fn build_mul_table(max_w: usize, formulas: &[KaratsubaFormula]) -> MulTable {
    let mut choices = BTreeMap::new();
    let mut costs: BTreeMap<usize, WidthCost> = BTreeMap::new();
    for w in 1..=max_w {
        let mut best = (
            WidthChoice::School,
            WidthCost {
                toffoli: (w * w) as u64,
                cnot: 0,
            },
        );
        for (fi, f) in formulas.iter().enumerate() {
            let Some(plan) = level_plan(w, f) else { continue };
            let mut toffoli = 0u64;
            let mut cnot = 0u64;
            for g in &plan.groups {
                cnot += 2 * cascade_gate_count(&g.cexps, plan.piece_w, g.window);
                for &(row, _, ow) in &g.members {
                    let sub = costs[&ow];
                    toffoli += sub.toffoli;
                    cnot += sub.cnot;
                    let (_, ref others) = plan.preps[row];
                    let (_, widths) = piece_widths(w, f.k).unwrap();
                    cnot += 4 * others.iter().map(|&t| widths[t] as u64).sum::<u64>();
                }
            }
            let cost = WidthCost { toffoli, cnot };
            if 10 * cost.toffoli + cost.cnot < 10 * best.1.toffoli + best.1.cnot {
                best = (WidthChoice::Formula(fi), cost);
            }
        }
        choices.insert(w, best.0);
        costs.insert(w, best.1);
    }
    MulTable { choices, costs }
}

pub(crate) struct MulBuilder<'a> {
    pub c: Circuit,
    base_b: usize,
    base_h: usize,
    hperm: Vec<usize>,
    formulas: &'a [KaratsubaFormula],
    plan: MulPlan,
    table: Option<MulTable>,
}

impl<'a> MulBuilder<'a> {
    /// `h_width` target wires after the two inputs of `in_width` wires each.
    pub fn new(
        in_width: usize,
        h_width: usize,
        formulas: &'a [KaratsubaFormula],
        plan: MulPlan,
    ) -> Self {
        let width = 2 * in_width + h_width;
        let mut c = Circuit::new(width);
        c.add_register("a", 0, in_width, RegisterRole::InputA);
        c.add_register("b", in_width, in_width, RegisterRole::InputB);
        c.add_register("c", 2 * in_width, h_width, RegisterRole::Target);
        let table = match &plan {
            MulPlan::Auto => Some(build_mul_table(in_width.max(1), formulas)),
            MulPlan::Levels(_) => None,
        };
        MulBuilder {
            c,
            base_b: in_width,
            base_h: 2 * in_width,
            hperm: (0..h_width).collect(),
            formulas,
            plan,
            table,
        }
    }

    fn h_wire(&self, logical: usize) -> usize {
        self.base_h + self.hperm[logical]
    }

    /// Apply a linear block (or its inverse) to the target register; the
    /// block's trailing permutation is folded into the wire map.
    fn apply_h_block(&mut self, block: &LinearBlock, inverse: bool) {
        let apply_perm = |hperm: &mut Vec<usize>, perm: &[usize], invert: bool| {
            let old = hperm.clone();
            for v in 0..perm.len() {
                if invert {
                    hperm[v] = old[perm[v]];
                } else {
                    hperm[perm[v]] = old[v];
                }
            }
        };
        if inverse {
            apply_perm(&mut self.hperm, &block.perm, true);
            for g in block.gates.iter().rev() {
                self.push_h_gate(g);
            }
        } else {
            for g in block.gates.iter() {
                self.push_h_gate(g);
            }
            apply_perm(&mut self.hperm, &block.perm, false);
        }
    }

    fn push_h_gate(&mut self, g: &Gate) {
        match *g {
            Gate::Cnot { control, target } => {
                let (c, t) = (self.h_wire(control as usize), self.h_wire(target as usize));
                self.c.push(Gate::cnot(c, t));
            }
            _ => panic!("linear blocks must be CNOT-only"),
        }
    }

    /// Triangular in-place multiplication (or division) of the target window
    /// by a unit-constant-term polynomial with the given nonzero exponents.
    fn cascade(&mut self, exps: &[usize], window: usize, h_base: usize, div: bool) {
        let step = |b: &mut Self, i: usize| {
            for &e in exps {
                if i >= e {
                    let (c, t) = (b.h_wire(h_base + i - e), b.h_wire(h_base + i));
                    b.c.push(Gate::cnot(c, t));
                }
            }
        };
        if div {
            for i in 1..window {
                step(self, i);
            }
        } else {
            for i in (1..window).rev() {
                step(self, i);
            }
        }
    }

    fn choice_for(&self, w: usize, depth: usize) -> WidthChoice {
        match &self.plan {
            MulPlan::Auto => self.table.as_ref().unwrap().choices[&w],
            MulPlan::Levels(seq) => {
                let k = *seq.get(depth).or(seq.last()).unwrap_or(&2);
                match self.formulas.iter().position(|f| f.k == k) {
                    Some(fi) if level_plan(w, &self.formulas[fi]).is_some() => {
                        WidthChoice::Formula(fi)
                    }
                    _ => match self.formulas.iter().position(|f| f.k == 2) {
                        Some(fi) if level_plan(w, &self.formulas[fi]).is_some() => {
                            WidthChoice::Formula(fi)
                        }
                        _ => WidthChoice::School,
                    },
                }
            }
        }
    }

    /// h[h_off..] += A * B over GF(2)[x], unreduced; a and b are equal-width
    /// wire lists.
    pub fn umul(&mut self, a: &[usize], b: &[usize], h_off: usize, depth: usize) {
        assert_eq!(a.len(), b.len());
        let w = a.len();
        if w == 0 {
            return;
        }
        let choice = if w == 1 {
            WidthChoice::School
        } else {
            self.choice_for(w, depth)
        };
        match choice {
            WidthChoice::School => {
                for i in 0..w {
                    for j in 0..w {
                        let t = self.h_wire(h_off + i + j);
                        self.c.push(Gate::toffoli(a[i], b[j], t));
                    }
                }
            }
            WidthChoice::Formula(fi) => {
                let f = &self.formulas[fi];
                let plan = level_plan(w, f).expect("choice was validated");
                let np = plan.piece_w;
                fn piece<'s>(ops: &'s [usize], t: usize, np: usize, w: usize) -> &'s [usize] {
                    let lo = t * np;
                    let hi = (lo + np).min(w);
                    &ops[lo..hi]
                }
                for g in &plan.groups {
                    if !g.cexps.is_empty() {
                        self.cascade(&g.cexps.iter().map(|&e| e * np).collect::<Vec<_>>(), g.window, h_off, true);
                    }
                    for &(row, off, ow) in &g.members {
                        let (t0, ref others) = plan.preps[row];
                        for &t in others {
                            for (i, (&src_a, &src_b)) in
                                piece(a, t, np, w).iter().zip(piece(b, t, np, w)).enumerate()
                            {
                                self.c.push(Gate::cnot(src_a, piece(a, t0, np, w)[i]));
                                self.c.push(Gate::cnot(src_b, piece(b, t0, np, w)[i]));
                            }
                        }
                        let (pa, pb) = (piece(a, t0, np, w).to_vec(), piece(b, t0, np, w).to_vec());
                        debug_assert_eq!(pa.len(), ow);
                        self.umul(&pa, &pb, h_off + off, depth + 1);
                        for &t in others {
                            for (i, (&src_a, &src_b)) in
                                piece(a, t, np, w).iter().zip(piece(b, t, np, w)).enumerate()
                            {
                                self.c.push(Gate::cnot(src_a, piece(a, t0, np, w)[i]));
                                self.c.push(Gate::cnot(src_b, piece(b, t0, np, w)[i]));
                            }
                        }
                    }
                    if !g.cexps.is_empty() {
                        self.cascade(&g.cexps.iter().map(|&e| e * np).collect::<Vec<_>>(), g.window, h_off, false);
                    }
                }
            }
        }
    }

    /// Emit swaps restoring the target register to physical order.
    pub fn finish(mut self) -> Circuit {
        let width = self.c.width();
        let mut perm: Vec<Wire> = (0..width as Wire).collect();
        for (v, &phys) in self.hperm.iter().enumerate() {
            perm[self.base_h + phys] = (self.base_h + v) as Wire;
        }
        for g in permutation_to_swaps(&perm) {
            self.c.push(g);
        }
        self.c
    }

    pub fn b_wires(&self, range: std::ops::Range<usize>) -> Vec<usize> {
        range.map(|i| self.base_b + i).collect()
    }
}

/// Schoolbook (long multiplication) reduced multiplier: exactly m^2 Toffoli
/// gates. The high partial products are written into a frame of the target
/// register conjugated by multiplication by x^m mod p, which turns target
/// wire i+j-m into the reduced image of x^(i+j).
pub fn synth_mastrovito(m: usize, p: &BinPoly) -> Result<Circuit> {
    assert_eq!(p.degree(), Some(m), "modulus must have degree m");
    let mut b = MulBuilder::new(m, m, &[], MulPlan::Levels(vec![2]));
    if m == 1 {
        b.c.push(Gate::toffoli(0, 1, 2));
        return Ok(b.finish());
    }
    let block = shift_block(m, p, m);
    b.c.mark_phase("high");
    b.apply_h_block(&block, true);
    for i in 0..m {
        for j in 0..m {
            if i + j >= m {
                let t = b.h_wire(i + j - m);
                b.c.push(Gate::toffoli(i, m + j, t));
            }
        }
    }
    b.apply_h_block(&block, false);
    b.c.mark_phase("low");
    for i in 0..m {
        for j in 0..m {
            if i + j < m {
                let t = b.h_wire(i + j);
                b.c.push(Gate::toffoli(i, m + j, t));
            }
        }
    }
    Ok(b.finish())
}

/// In-place Karatsuba multiplier (split count 2 at every level); Toffoli
/// count is exactly 3^k for m = 2^k.
pub fn synth_karatsuba(m: usize, p: &BinPoly) -> Result<Circuit> {
    let formulas = vec![KaratsubaFormula::karatsuba2()];
    synth_with_plan(m, p, &formulas, MulPlan::Levels(vec![2]))
}

/// Multiplier with per-level formula selection.
pub fn synth_karatsuba_like(
    m: usize,
    p: &BinPoly,
    formulas: &[KaratsubaFormula],
    plan: MulPlan,
) -> Result<Circuit> {
    if !formulas.iter().any(|f| f.k == 2) {
        return Err(Error::FormulaInvalid(
            "formula library must include k = 2".into(),
        ));
    }
    synth_with_plan(m, p, formulas, plan)
}

fn synth_with_plan(
    m: usize,
    p: &BinPoly,
    formulas: &[KaratsubaFormula],
    plan: MulPlan,
) -> Result<Circuit> {
    assert_eq!(p.degree(), Some(m), "modulus must have degree m");
    let mut b = MulBuilder::new(m, m, formulas, plan);
    if m == 1 {
        b.c.push(Gate::toffoli(0, 1, 2));
        return Ok(b.finish());
    }
    let half = m.div_ceil(2); // the constant is 1 + x^half
    let low = m - half;
    let const_block = LinearBlock::from_circuit(&synth_constmul(m, p, None)?);
    let shift = shift_block(m, p, half);

    let a0: Vec<usize> = (0..half).collect();
    let b0 = b.b_wires(0..half);
    let a1: Vec<usize> = (half..m).collect();
    let b1 = b.b_wires(half..m);

    b.c.mark_phase("const-div");
    b.apply_h_block(&const_block, true);
    b.c.mark_phase("p0");
    b.umul(&a0, &b0, 0, 0);
    b.c.mark_phase("shift-down");
    b.apply_h_block(&shift, true);
    b.c.mark_phase("p2");
    b.umul(&a1, &b1, 0, 0);
    b.c.mark_phase("const-mul");
    b.apply_h_block(&const_block, false);
    b.c.mark_phase("p1");
    for i in 0..low {
        b.c.push(Gate::cnot(a1[i], a0[i]));
        b.c.push(Gate::cnot(b1[i], b0[i]));
    }
    b.umul(&a0, &b0, 0, 0);
    for i in 0..low {
        b.c.push(Gate::cnot(a1[i], a0[i]));
        b.c.push(Gate::cnot(b1[i], b0[i]));
    }
    b.c.mark_phase("shift-up");
    b.apply_h_block(&shift, false);
    Ok(b.finish())
}

/// Planner output: the width table plus a predicted cost report for the
/// reduced multiplier (exact Toffoli, CNOT upper bound).
pub struct CostPlan {
    pub table: MulTable,
    pub predicted: CostReport,
}

/// Dynamic program over recursion widths. `const_mul_cost` is the CNOT size
/// of the constant-multiplication circuit, `squaring_cost` of the squaring
/// circuit (it enters the division estimate, not the multiplier), and
/// `poly_weight` is the weight of the irreducible polynomial (the shift
/// cascades scale with it).
pub fn plan_costs(
    m: usize,
    const_mul_cost: u64,
    _squaring_cost: u64,
    poly_weight: usize,
    formulas: &[KaratsubaFormula],
) -> CostPlan {
    let half = m.div_ceil(2);
    let low = m - half;
    let table = build_mul_table(half.max(1), formulas);
    let sub = |w: usize| -> WidthCost {
        if w == 0 {
            WidthCost { toffoli: 0, cnot: 0 }
        } else {
            table.costs[&w]
        }
    };
    let toffoli = 2 * sub(half).toffoli + sub(low).toffoli;
    let shift_cnot = (half * poly_weight.saturating_sub(2)) as u64;
    let cnot = 2 * sub(half).cnot
        + sub(low).cnot
        + 2 * const_mul_cost
        + 2 * shift_cnot
        + 4 * low as u64
        + 3 * (m as u64 - 1); // residual permutation bound
    let model = CostModel::default();
    let predicted = CostReport {
        toffoli,
        cnot,
        weighted: model.toffoli_weight * toffoli as f64 + model.cnot_weight * cnot as f64,
        phases: BTreeMap::new(),
    };
    CostPlan { table, predicted }
}

/// Toffoli count of the auto-planned multiplier without synthesizing it.
pub fn predicted_toffoli(m: usize, formulas: &[KaratsubaFormula]) -> u64 {
    plan_costs(m, 0, 0, 3, formulas).predicted.toffoli
}

/// Convenience: the default multiplier (built-in k = 2,3 library, auto plan).
pub fn synth_mul_auto(m: usize, p: &BinPoly) -> Result<Circuit> {
    let formulas = builtin_formulas();
    synth_karatsuba_like(m, p, &formulas, MulPlan::Auto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;
    use crate::poly::gf_mul;
    use crate::rng::SplitMix64;

    fn p(s: &str) -> BinPoly {
        s.parse().unwrap()
    }

    /// Exhaustive |a,b,c> sweep against the field oracle.
    fn check_mul_exhaustive(m: usize, poly: &BinPoly, c: &Circuit, zero_target_only: bool) {
        assert_eq!(c.width(), 3 * m);
        for a in 0u64..1 << m {
            for b in 0u64..1 << m {
                let pa = BinPoly::from_word(a);
                let pb = BinPoly::from_word(b);
                let want = gf_mul(&pa, &pb, poly).unwrap();
                let cs: Vec<u64> = if zero_target_only {
                    vec![0]
                } else {
                    vec![0, 1, (1 << m) - 1, a ^ b]
                };
                for c0 in cs {
                    let mut input = BitVec::from_words(vec![a | b << m | (c0 << (2 * m))]);
                    input.truncate_bits(3 * m);
                    let out = c.simulate_full(&input).unwrap();
                    for i in 0..m {
                        assert_eq!(out.get(i), pa.coeff(i), "a corrupted: a={a:#b} b={b:#b}");
                        assert_eq!(out.get(m + i), pb.coeff(i), "b corrupted");
                        let expect = want.coeff(i) ^ (c0 >> i & 1 == 1);
                        assert_eq!(
                            out.get(2 * m + i),
                            expect,
                            "m={m} a={a:#b} b={b:#b} c0={c0:#b} bit {i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mastrovito_small() {
        let c = synth_mastrovito(1, &p("x+1")).unwrap();
        assert_eq!(c.count_toffoli(), 1);
        let c = synth_mastrovito(2, &p("x^2+x+1")).unwrap();
        assert_eq!(c.count_toffoli(), 4);
        check_mul_exhaustive(2, &p("x^2+x+1"), &c, false);
        let c = synth_mastrovito(4, &p("x^4+x+1")).unwrap();
        assert_eq!(c.count_toffoli(), 16);
        check_mul_exhaustive(4, &p("x^4+x+1"), &c, false);
    }

    #[test]
    fn mastrovito_m3_and_m5() {
        for s in ["x^3+x+1", "x^5+x^2+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let c = synth_mastrovito(m, &poly).unwrap();
            assert_eq!(c.count_toffoli(), (m * m) as u64);
            check_mul_exhaustive(m, &poly, &c, false);
        }
    }

    #[test]
    fn karatsuba_counts_powers_of_two() {
        for (m, s) in [(2usize, "x^2+x+1"), (4, "x^4+x+1"), (8, "x^8+x^4+x^3+x+1")] {
            let c = synth_karatsuba(m, &p(s)).unwrap();
            assert_eq!(c.count_toffoli(), 3u64.pow(m.trailing_zeros()), "m={m}");
        }
    }

    #[test]
    fn karatsuba_exhaustive_small() {
        for s in ["x^2+x+1", "x^3+x+1", "x^4+x+1", "x^5+x^2+1", "x^6+x+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let c = synth_karatsuba(m, &poly).unwrap();
            check_mul_exhaustive(m, &poly, &c, false);
        }
    }

    #[test]
    fn karatsuba_like_exhaustive_small() {
        let formulas = builtin_formulas();
        for s in ["x^3+x+1", "x^4+x+1", "x^5+x^2+1", "x^6+x+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let c = synth_karatsuba_like(m, &poly, &formulas, MulPlan::Auto).unwrap();
            check_mul_exhaustive(m, &poly, &c, false);
        }
    }

    #[test]
    fn karatsuba_like_k2_degenerates_to_karatsuba() {
        let formulas = vec![KaratsubaFormula::karatsuba2()];
        let poly = p("x^8+x^4+x^3+x+1");
        let a = synth_karatsuba(8, &poly).unwrap();
        let b = synth_karatsuba_like(8, &poly, &formulas, MulPlan::Auto).unwrap();
        let model = CostModel::default();
        assert_eq!(a.cost(&model), b.cost(&model));
    }

    #[test]
    fn random_verification_m16() {
        let poly = p("x^16+x^5+x^3+x+1");
        let c = synth_mul_auto(16, &poly).unwrap();
        let mut rng = SplitMix64::new(0xfeed);
        for _ in 0..300 {
            let a = rng.next_u64() & 0xffff;
            let b = rng.next_u64() & 0xffff;
            let c0 = rng.next_u64() & 0xffff;
            let input = BitVec::from_words(vec![a | b << 16 | c0 << 32]);
            let out = c.simulate_full(&input).unwrap();
            let want = gf_mul(&BinPoly::from_word(a), &BinPoly::from_word(b), &poly).unwrap();
            for i in 0..16 {
                assert_eq!(
                    out.get(32 + i),
                    want.coeff(i) ^ (c0 >> i & 1 == 1),
                    "bit {i}"
                );
            }
        }
    }

    #[test]
    fn plan_predicts_measured_toffoli() {
        let formulas = builtin_formulas();
        for s in ["x^7+x+1", "x^13+x^4+x^3+x+1", "x^16+x^5+x^3+x+1", "x^29+x^2+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let c = synth_karatsuba_like(m, &poly, &formulas, MulPlan::Auto).unwrap();
            assert_eq!(
                c.count_toffoli(),
                predicted_toffoli(m, &formulas),
                "m={m}"
            );
        }
    }

    #[test]
    fn table_prefers_k2_for_powers_of_two() {
        let formulas = builtin_formulas();
        let table = build_mul_table(64, &formulas);
        for w in [2usize, 4, 8, 16, 32, 64] {
            assert_eq!(
                table.costs[&w].toffoli,
                3u64.pow(w.trailing_zeros()),
                "width {w}"
            );
        }
        // k=3 wins at width 3 (6 products beat 7)
        assert_eq!(table.costs[&3].toffoli, 6);
    }

    #[test]
    fn shift_block_matches_matrix() {
        let poly = p("x^5+x^2+1");
        let block = shift_block(5, &poly, 3);
        let mut c = Circuit::new(5);
        for g in &block.gates {
            c.push(*g);
        }
        // apply the tracked permutation as swaps to materialize the map
        let mut perm: Vec<Wire> = vec![0; 5];
        for (v, &d) in block.perm.iter().enumerate() {
            perm[v] = d as Wire;
        }
        for g in permutation_to_swaps(&perm) {
            c.push(g);
        }
        let got = c.simulate_linear().unwrap();
        // columns should be x^(j+3) mod p
        for j in 0..5 {
            let want = BinPoly::x_pow(j + 3).rem(&poly).unwrap();
            for r in 0..5 {
                assert_eq!(got.get(r, j), want.coeff(r), "col {j} row {r}");
            }
        }
    }
}
