//! Linear-cost CNOT circuits for in-place multiplication by the constant
//! `1 + x^ceil(m/2)` over GF(2^m), with strategy dispatch on the shape of
//! the irreducible polynomial.
//!
//! Every strategy reduces the constant-multiplication matrix to a
//! permutation while recording the row/column operations, then emits the
//! circuit through [`MatrixReducer`]; swaps are pushed into one trailing
//! permutation block.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::linsynth::lu_synth;
use crate::matrix::{build_constmul_matrix, constmul_matrix_any};
use crate::pattern::{candidates, PolyPattern};
use crate::poly::{is_irreducible, BinPoly};
use crate::reducer::MatrixReducer;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstMulStrategy {
    /// Even m, trinomial `x^m + x^l + 1` with `l < m/2`.
    Alg1EvenTrinomial,
    /// Even m, any `x^m + x^l1 + ... + x^lk + 1` with `l1 < m/2`.
    Alg2EvenClustered,
    /// Odd m, trinomial with `l < (m-1)/2`.
    Alg3OddTrinomial,
    /// Odd m, any polynomial with `l1 < (m-1)/2`.
    Alg4OddGeneral,
    /// Odd m, two-run polynomial; the circulant construction.
    Alg56OddRuns,
    /// Gauss-Jordan on the matrix, for shapes none of the above accept.
    LuFallback,
}

impl ConstMulStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            ConstMulStrategy::Alg1EvenTrinomial => "even-trinomial",
            ConstMulStrategy::Alg2EvenClustered => "even-clustered",
            ConstMulStrategy::Alg3OddTrinomial => "odd-trinomial",
            ConstMulStrategy::Alg4OddGeneral => "odd-general",
            ConstMulStrategy::Alg56OddRuns => "odd-runs",
            ConstMulStrategy::LuFallback => "lu",
        }
    }
}

/// Shape facts about `p` that drive dispatch.
#[derive(Clone, Debug)]
pub struct PolyShape {
    pub m: usize,
    /// exponents strictly between 0 and m, ascending
    pub mid: Vec<usize>,
    pub l1: usize,
    pub lk: usize,
}

impl PolyShape {
    pub fn of(m: usize, p: &BinPoly) -> Result<PolyShape> {
        if p.degree() != Some(m) || !p.coeff(0) {
            return Err(Error::PolyShapeUnsupported(format!(
                "{p} is not a degree-{m} polynomial with constant term 1"
            )));
        }
        let mid: Vec<usize> = p.exponents().into_iter().filter(|&e| e > 0 && e < m).collect();
        if mid.is_empty() {
            return Err(Error::PolyShapeUnsupported(format!("{p} has no middle terms")));
        }
        Ok(PolyShape {
            m,
            l1: *mid.last().unwrap(),
            lk: mid[0],
            mid,
        })
    }

    fn half(&self) -> usize {
        self.m / 2
    }

    /// Trinomial `x^m + x^l + 1` with `l < floor(m/2)`.
    pub fn trinomial_l(&self) -> Option<usize> {
        if self.mid.len() == 1 && self.l1 < self.half() {
            Some(self.l1)
        } else {
            None
        }
    }

    /// Middle exponents form one contiguous run `{l, ..., l+k-1}` below
    /// m/2 for even m, with run length coprime to m/2; returns `(l, k)`.
    pub fn even_run(&self) -> Option<(usize, usize)> {
        if self.m % 2 != 0 || self.m < 4 {
            return None;
        }
        let n = self.m / 2;
        let k = self.mid.len();
        if self.l1 >= n || self.l1 - self.lk + 1 != k || k % 2 == 0 || k >= n {
            return None;
        }
        if !self.mid.windows(2).all(|w| w[1] == w[0] + 1) {
            return None;
        }
        if gcd(k, n) != 1 {
            return None;
        }
        Some((self.lk, k))
    }

    /// Middle exponents form `[n-l1, n-1]` and `[1, l2]` runs for odd
    /// m = 2n+1 (the low run continues the constant term), with
    /// `n - l1 > l2`.
    pub fn odd_runs(&self) -> Option<(usize, usize)> {
        if self.m % 2 == 0 || self.m < 3 {
            return None;
        }
        let n = (self.m - 1) / 2;
        let mut low_top = 0usize; // low run covers 0..=low_top
        let mut i = 0;
        while i < self.mid.len() && self.mid[i] == low_top + 1 {
            low_top += 1;
            i += 1;
        }
        let rest = &self.mid[i..];
        let l2 = low_top;
        let l1 = rest.len();
        if l1 == 0 {
            return if n > l2 { Some((0, l2)) } else { None };
        }
        // rest must be exactly n-l1 ..= n-1
        if rest[0] + l1 - 1 != *rest.last().unwrap() || *rest.last().unwrap() != n - 1 {
            return None;
        }
        if !rest.windows(2).all(|w| w[1] == w[0] + 1) {
            return None;
        }
        if n - l1 > l2 {
            Some((l1, l2))
        } else {
            None
        }
    }
}

/// The dispatch order tries the cheapest asymptotic class first.
pub fn auto_strategy(m: usize, p: &BinPoly) -> Result<ConstMulStrategy> {
    let shape = PolyShape::of(m, p)?;
    if m <= 2 {
        return Ok(ConstMulStrategy::LuFallback);
    }
    Ok(if m % 2 == 0 {
        if shape.trinomial_l().is_some() {
            ConstMulStrategy::Alg1EvenTrinomial
        } else if shape.l1 < shape.half() {
            ConstMulStrategy::Alg2EvenClustered
        } else {
            ConstMulStrategy::LuFallback
        }
    } else if shape.odd_runs().is_some() {
        ConstMulStrategy::Alg56OddRuns
    } else if shape.trinomial_l().is_some() {
        ConstMulStrategy::Alg3OddTrinomial
    } else if shape.l1 < shape.half() {
        ConstMulStrategy::Alg4OddGeneral
    } else {
        ConstMulStrategy::LuFallback
    })
}

/// CNOT/SWAP circuit computing multiplication by `1 + x^ceil(m/2)` mod `p`.
/// `strategy` of `None` dispatches automatically.
pub fn synth_constmul(
    m: usize,
    p: &BinPoly,
    strategy: Option<ConstMulStrategy>,
) -> Result<Circuit> {
    let shape = PolyShape::of(m, p)?;
    let strategy = match strategy {
        Some(s) => s,
        None => auto_strategy(m, p)?,
    };
    let mismatch = || Error::StrategyShapeMismatch {
        strategy: strategy.name().into(),
        poly: p.to_string(),
    };
    let circuit = match strategy {
        ConstMulStrategy::LuFallback => lu_synth(&constmul_matrix_any(m, p))?,
        ConstMulStrategy::Alg1EvenTrinomial => {
            if m % 2 != 0 || m < 4 {
                return Err(mismatch());
            }
            let l = shape.trinomial_l().ok_or_else(mismatch)?;
            let mut red = MatrixReducer::new(build_constmul_matrix(m, p)?);
            alg1_even_trinomial(&mut red, m / 2, l);
            red.finish()?
        }
        ConstMulStrategy::Alg2EvenClustered => {
            if m % 2 != 0 || m < 4 || shape.l1 >= shape.half() {
                return Err(mismatch());
            }
            let mat = build_constmul_matrix(m, p)?;
            if let Some((l, k)) = shape.even_run() {
                // the run-structured circulant admits the cheap sweep/walk
                // finish; take the best ordering
                let mut best: Option<Circuit> = None;
                for variant in RunsVariant::MEASURED {
                    let mut red = MatrixReducer::new(mat.clone());
                    alg2_even_run(&mut red, m / 2, l, k, variant)?;
                    let c = red.finish()?;
                    if best.as_ref().map(|b| c.len() < b.len()).unwrap_or(true) {
                        best = Some(c);
                    }
                }
                best.unwrap()
            } else {
                let mut red = MatrixReducer::new(mat);
                alg2_even_general(&mut red, m / 2, &shape)?;
                red.finish()?
            }
        }
        ConstMulStrategy::Alg3OddTrinomial => {
            if m % 2 == 0 || m < 5 {
                return Err(mismatch());
            }
            let l = shape.trinomial_l().ok_or_else(mismatch)?;
            let mut red = MatrixReducer::new(build_constmul_matrix(m, p)?);
            alg3_odd_trinomial(&mut red, (m - 1) / 2, l)?;
            red.finish()?
        }
        ConstMulStrategy::Alg4OddGeneral => {
            if m % 2 == 0 || m < 5 || shape.l1 >= shape.half() {
                return Err(mismatch());
            }
            let mut red = MatrixReducer::new(build_constmul_matrix(m, p)?);
            alg4_odd_general(&mut red, (m - 1) / 2, &shape)?;
            red.finish()?
        }
        ConstMulStrategy::Alg56OddRuns => {
            let (l1, l2) = shape.odd_runs().ok_or_else(mismatch)?;
            let mat = build_constmul_matrix(m, p)?;
            // the top half can be cleared before or after the column
            // differencing, with or without the copy-up; which is cheapest
            // depends on the run lengths, so measure all four
            let mut best: Option<Circuit> = None;
            for variant in RunsVariant::MEASURED {
                let mut red = MatrixReducer::new(mat.clone());
                alg56_odd_runs(&mut red, (m - 1) / 2, l1, l2, variant)?;
                let c = red.finish()?;
                if best.as_ref().map(|b| c.len() < b.len()).unwrap_or(true) {
                    best = Some(c);
                }
            }
            best.unwrap()
        }
    };
    Ok(circuit.push_swaps_right())
}

/// Division by the constant: the inverse (reversed) multiplication circuit.
pub fn synth_constdiv(m: usize, p: &BinPoly) -> Result<Circuit> {
    Ok(synth_constmul(m, p, None)?.invert())
}

/// Even m = 2n, trinomial x^m + x^l + 1. The matrix is [[I,A],[I,B]]; row
/// additions clear the lower identity, column additions clear the top-right
/// block, and the leftover block is a cyclic shift fixed by the emitter's
/// permutation pass.
fn alg1_even_trinomial(red: &mut MatrixReducer, n: usize, l: usize) {
    for i in 0..n {
        red.add_row(i, n + i);
    }
    for i in 0..n {
        red.add_col(i, n + i);
    }
    for i in l..n {
        red.add_row(n + i, i);
    }
}

/// Even m = 2n, general polynomial with l1 < n.
fn alg2_even_general(red: &mut MatrixReducer, n: usize, shape: &PolyShape) -> Result<()> {
    let m = 2 * n;
    for i in 0..n {
        red.add_row(i, n + i);
    }
    for i in 0..n {
        red.add_row(n + i, i);
    }
    // clear the top-right block with the basis columns on the left
    for j in n..m {
        for i in top_entries(red, j, n) {
            red.add_col(i, j);
        }
    }
    // bottom-right is now the circulant sum of shifts by each middle
    // exponent; rotate so the main diagonal is set
    let lk = shape.lk;
    rotate_rows_up(red, n, n, lk);
    // clear the off-diagonal shifts, reducing the residue to the last
    // l1 - lk rows/columns
    let offsets: Vec<usize> = shape.mid.iter().skip(1).rev().map(|&l| l - lk).collect();
    for j in n..m {
        for &d in &offsets {
            if j + d < m && red.get(j + d, j) {
                red.add_row(j, j + d);
            }
        }
    }
    block_gauss(red, n)
}

/// Odd m = 2n+1, trinomial with l < n.
fn alg3_odd_trinomial(red: &mut MatrixReducer, n: usize, l: usize) -> Result<()> {
    for i in 0..n {
        red.add_row(i, n + i + 1);
    }
    for i in 0..n {
        red.add_col(i, n + i);
    }
    for i in l..n {
        red.add_col(i, n - l + i);
    }
    for i in 0..n - l {
        red.add_row(n + i, n + i + 1);
        red.add_row(n + i, n + i + l + 1);
    }
    block_gauss(red, n)
}

/// Odd m = 2n+1, general polynomial with l1 < n.
fn alg4_odd_general(red: &mut MatrixReducer, n: usize, shape: &PolyShape) -> Result<()> {
    let m = 2 * n + 1;
    for i in 0..n {
        red.add_row(i, n + i + 1);
    }
    for i in 0..n {
        red.add_row(n + i + 1, i);
    }
    for j in n..m {
        for i in top_entries(red, j, n) {
            red.add_col(i, j);
        }
    }
    let l1 = shape.l1;
    if m >= l1 + 2 {
        for j in n..=m - l1 - 2 {
            for &li in shape.mid.iter().rev() {
                if j + li + 1 < m && red.get(j + li + 1, j) {
                    red.add_row(j, j + li + 1);
                }
            }
            if red.get(j + 1, j) {
                red.add_row(j, j + 1);
            }
        }
    }
    block_gauss(red, n)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum RunsVariant {
    /// Fused form: copy the bottom rows up, difference the columns, then
    /// clear the top block.
    DiffFirst,
    /// Copy up, clear the top entry-by-entry, then difference.
    ClearFirst,
    /// Skip the copy-up; difference, then clear the run boundaries.
    SlimDiffFirst,
    /// Skip the copy-up; clear the (run-structured) top, then difference.
    SlimClearFirst,
    /// Bound the top column weights by neighbor additions, clear, uncompute,
    /// then difference (the unfused original; kept for differential tests).
    Unfused,
}

impl RunsVariant {
    const MEASURED: [RunsVariant; 4] = [
        RunsVariant::DiffFirst,
        RunsVariant::ClearFirst,
        RunsVariant::SlimDiffFirst,
        RunsVariant::SlimClearFirst,
    ];
}

/// Odd m = 2n+1 with the two-run polynomial
/// `x^m + (x^(n-1)+...+x^(n-l1)) + (x^l2+...+1)`, n - l1 > l2.
///
/// After clearing the left half, the bottom-right (n+1)x(n+1) block is
/// circulant whose columns are cyclic length-L runs, L = l1+l2+2. Adjacent
/// column differences turn all but the last column into weight-2 "edges"
/// connecting vertices at cyclic distance L; the last column is swept down
/// the edge path to weight one and the path is then walked back, leaving a
/// permutation.
fn alg56_odd_runs(
    red: &mut MatrixReducer,
    n: usize,
    l1: usize,
    l2: usize,
    variant: RunsVariant,
) -> Result<()> {
    let m = 2 * n + 1;
    let run_len = l1 + l2 + 2;
    let ring = n + 1; // size of the bottom-right block
    if run_len % 2 == 0 || run_len >= ring || gcd(run_len, ring) != 1 {
        return Err(Error::PolyShapeUnsupported(format!(
            "run structure (l1={l1}, l2={l2}) degenerate for m={m}"
        )));
    }
    for i in 0..n {
        red.add_row(i, n + i + 1);
    }
    if matches!(variant, RunsVariant::DiffFirst | RunsVariant::ClearFirst | RunsVariant::Unfused) {
        // copy the bottom rows into the top, triangularizing the top block
        for i in 0..n {
            red.add_row(n + i + 1, i);
        }
    }
    match variant {
        RunsVariant::DiffFirst | RunsVariant::SlimDiffFirst => {
            diff_cols(red, n, ring);
            clear_top(red, n);
        }
        RunsVariant::ClearFirst | RunsVariant::SlimClearFirst => {
            clear_top(red, n);
            diff_cols(red, n, ring);
        }
        RunsVariant::Unfused => {
            // neighbor additions bound the top-column weights, clear the
            // top, then uncompute and difference the clean circulant
            let mut added = Vec::new();
            for i in (0..n).rev() {
                if !top_entries(red, n + i, n).is_empty() {
                    red.add_col(n + i, n + i + 1);
                    added.push(i);
                }
            }
            clear_top(red, n);
            for i in added.into_iter().rev() {
                red.add_col(n + i, n + i + 1);
            }
            diff_cols(red, n, ring);
        }
    }
    sweep_and_walk(red, n, ring, n - l1 + 1, run_len)
}

/// Adjacent column differences over the block columns, leaving the last one.
fn diff_cols(red: &mut MatrixReducer, base: usize, ring: usize) {
    for i in 1..ring {
        red.add_col(base + i, base + i - 1);
    }
}

/// Clear everything above row `n` using the left-half basis columns.
fn clear_top(red: &mut MatrixReducer, n: usize) {
    let m = red.n();
    for j in n..m {
        for i in top_entries(red, j, n) {
            red.add_col(i, j);
        }
    }
}

/// Finish a circulant block whose columns were runs of length `run_len`
/// starting at `s0 + c` (column `c` of the block) before differencing.
///
/// The differenced columns are weight-2 edges joining vertices at cyclic
/// distance `run_len`; with gcd(run_len, ring) = 1 they form a path once the
/// untouched last column's edge is removed. The last column is swept along
/// the path to weight one, then the path is walked back converting every
/// edge to weight one; the leftover permutation is the emitter's job.
fn sweep_and_walk(
    red: &mut MatrixReducer,
    base: usize,
    ring: usize,
    s0: usize,
    run_len: usize,
) -> Result<()> {
    debug_assert!((0..base).all(|r| top_entries(red, base + r, base).is_empty()));
    let vertex = |j: usize| (s0 + ring - 1 + (j + 1) * run_len) % ring;
    let edge_col = |j: usize| ((j + 1) * run_len - 1) % ring;
    let last = base + ring - 1;
    // sweep the last column down the path to a single 1 at the far endpoint
    for j in 0..ring - 1 {
        if red.get(base + vertex(j), last) {
            red.add_col(base + edge_col(j), last);
        }
    }
    assert_eq!(red.col_weight(last), 1, "sweep must leave weight 1");
    // walk back, converting every edge column to weight 1
    let mut holder = last;
    for j in (0..ring - 1).rev() {
        red.add_col(holder, base + edge_col(j));
        holder = base + edge_col(j);
        debug_assert_eq!(red.col_weight(holder), 1);
    }
    Ok(())
}

/// Even m = 2n where the middle exponents form one contiguous run
/// `{l, ..., l+k-1}`: the bottom-right circulant has run columns, so the
/// same differencing/sweep/walk machinery as the odd two-run case applies.
fn alg2_even_run(
    red: &mut MatrixReducer,
    n: usize,
    l: usize,
    k: usize,
    variant: RunsVariant,
) -> Result<()> {
    if k % 2 == 0 || k >= n || gcd(k, n) != 1 {
        return Err(Error::PolyShapeUnsupported(format!(
            "run length {k} degenerate for block size {n}"
        )));
    }
    for i in 0..n {
        red.add_row(i, n + i);
    }
    if matches!(variant, RunsVariant::DiffFirst | RunsVariant::ClearFirst) {
        for i in 0..n {
            red.add_row(n + i, i);
        }
    }
    match variant {
        RunsVariant::DiffFirst | RunsVariant::SlimDiffFirst => {
            diff_cols(red, n, n);
            clear_top(red, n);
        }
        _ => {
            clear_top(red, n);
            diff_cols(red, n, n);
        }
    }
    sweep_and_walk(red, n, n, l, k)
}

/// Row indices below `n` where column `j` is set.
fn top_entries(red: &mut MatrixReducer, j: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| red.get(i, j)).collect()
}

/// Cyclically shift rows `[base, base+len)` up by `s` via row swaps.
fn rotate_rows_up(red: &mut MatrixReducer, base: usize, len: usize, s: usize) {
    let s = s % len;
    if s == 0 {
        return;
    }
    let g = gcd(s, len);
    for start in 0..g {
        let mut i = start;
        loop {
            let next = (i + s) % len;
            if next == start {
                break;
            }
            red.swap_rows(base + i, base + next);
            i = next;
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Gauss-Jordan over the trailing block `[lo, m)`; leaves a permutation.
fn block_gauss(red: &mut MatrixReducer, lo: usize) -> Result<()> {
    let m = red.n();
    let mut used = vec![false; m];
    for c in lo..m {
        let pivot = (lo..m)
            .find(|&r| !used[r] && red.get(r, c))
            .ok_or(Error::SingularMatrix)?;
        used[pivot] = true;
        for r in lo..m {
            if r != pivot && red.get(r, c) {
                red.add_row(pivot, r);
            }
        }
    }
    Ok(())
}

/// Search configuration: candidate budget and optional early stop once a
/// circuit is at most `early_exit_ratio * m` CNOTs.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub limit: usize,
    pub early_exit_ratio: Option<f64>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            limit: 5,
            early_exit_ratio: None,
        }
    }
}

/// Best constant-multiplication circuit over up to `limit` pattern-matched
/// irreducible polynomials. Returns the winning polynomial, its circuit and
/// the CNOT count (swaps folded at 3). Ties keep the smaller polynomial.
pub fn search_best_constmul(m: usize, opts: &SearchOptions) -> Result<(BinPoly, Circuit, u64)> {
    let model = crate::circuit::CostModel::default();
    let mut best: Option<(BinPoly, Circuit, u64)> = None;
    let mut tested = 0usize;

    let sources: Vec<Box<dyn Iterator<Item = BinPoly> + Send>> = if m % 2 == 0 {
        vec![
            candidates(
                m,
                &PolyPattern::EvenTrinomial {
                    max_l: Some(m / 2 - 1),
                },
            ),
            even_runs_source(m),
            clustered_by_shape(m, 8),
        ]
    } else {
        vec![
            candidates(m, &PolyPattern::odd_runs()),
            candidates(
                m,
                &PolyPattern::OddTrinomial {
                    max_l: Some(m / 2),
                },
            ),
        ]
    };
    let mut seen: Vec<BinPoly> = Vec::new();
    'outer: for source in sources {
        for cand in source {
            if tested >= opts.limit {
                break 'outer;
            }
            if PolyShape::of(m, &cand)
                .map(|s| s.l1 >= m.div_ceil(2).max(1) && m > 2)
                .unwrap_or(true)
            {
                continue;
            }
            if seen.contains(&cand) || !is_irreducible(&cand) {
                continue;
            }
            seen.push(cand.clone());
            tested += 1;
            let circuit = synth_constmul(m, &cand, None)?;
            let cnot = circuit.cost(&model).cnot;
            if best.as_ref().map(|(_, _, c)| cnot < *c).unwrap_or(true) {
                best = Some((cand, circuit, cnot));
            }
            if let (Some(ratio), Some((_, _, c))) = (opts.early_exit_ratio, best.as_ref()) {
                if (*c as f64) <= ratio * m as f64 {
                    break 'outer;
                }
            }
        }
    }
    if best.is_none() {
        // last resort for tiny or awkward m: first irreducible of degree m
        // in value order, synthesized generically
        if let Some(p) = first_irreducible(m) {
            let circuit = synth_constmul(m, &p, None)?;
            let cnot = circuit.cost(&model).cnot;
            best = Some((p, circuit, cnot));
        }
    }
    best.ok_or(Error::NoPolynomialFound { m })
}

/// Even-m candidates whose middle terms are one contiguous run (the shape
/// the sweep/walk finish wants), shortest runs first.
fn even_runs_source(m: usize) -> Box<dyn Iterator<Item = BinPoly> + Send> {
    let n = m / 2;
    Box::new(
        (3..=9usize)
            .step_by(2)
            .filter(move |&k| k < n && gcd(k, n) == 1)
            .flat_map(move |k| {
                (1..n.saturating_sub(k)).map(move |l| {
                    let mut exps: Vec<usize> = (l..l + k).collect();
                    exps.push(m);
                    exps.push(0);
                    BinPoly::from_exponents(&exps)
                })
            }),
    )
}

/// Clustered candidates ordered by circuit quality rather than value:
/// fewer middle terms and a tighter span cost less, so enumerate by
/// (k, span, l1, interior).
fn clustered_by_shape(m: usize, max_span: usize) -> Box<dyn Iterator<Item = BinPoly> + Send> {
    let n = m / 2;
    Box::new((3..=9usize).step_by(2).flat_map(move |k| {
        ((k - 1)..=max_span).flat_map(move |span| {
            // l1 and l1-span are fixed; choose k-2 interior exponents
            let interior = span - 1;
            (0u64..1u64 << interior)
                .filter(move |mask| mask.count_ones() as usize == k - 2)
                .flat_map(move |mask| {
                    (span + 1..n).map(move |l1| {
                        let mut exps = vec![m, l1, l1 - span, 0];
                        for b in 0..interior {
                            if mask >> b & 1 == 1 {
                                exps.push(l1 - span + 1 + b);
                            }
                        }
                        BinPoly::from_exponents(&exps)
                    })
                })
        })
    }))
}

fn first_irreducible(m: usize) -> Option<BinPoly> {
    if m > 64 {
        return None; // patterns always succeed well below this
    }
    if m == 1 {
        return Some(BinPoly::from_exponents(&[1]));
    }
    let top = 1u64 << m;
    (1..1u64 << m.min(63))
        .map(|v| BinPoly::from_word(top | v))
        .find(is_irreducible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CostModel;
    use crate::matrix::build_constmul_matrix;

    fn p(s: &str) -> BinPoly {
        s.parse().unwrap()
    }

    fn check(m: usize, poly: &BinPoly, strategy: Option<ConstMulStrategy>) -> Circuit {
        let c = synth_constmul(m, poly, strategy).unwrap();
        let want = build_constmul_matrix(m, poly)
            .unwrap_or_else(|_| crate::matrix::constmul_matrix_any(m, poly));
        assert_eq!(
            c.simulate_linear().unwrap(),
            want,
            "m={m} poly={poly} strategy={strategy:?}"
        );
        assert_eq!(c.count_toffoli(), 0);
        c
    }

    #[test]
    fn alg1_matches_matrix_and_bound() {
        let poly = p("x^10+x^3+1");
        let c = check(10, &poly, Some(ConstMulStrategy::Alg1EvenTrinomial));
        let cost = c.cost(&CostModel::default());
        assert!(cost.cnot <= 3 * 10 - 3, "counted {}", cost.cnot);
        // output permutation is free when bit order does not matter
        let free = c.cost(&CostModel::free_permutation());
        assert_eq!(free.cnot, (1.5 * 10.0) as u64 - 3);
    }

    #[test]
    fn alg1_trinomials_various_m() {
        for (m, l) in [(4, 1), (6, 1), (10, 3), (12, 3), (18, 7), (28, 1), (30, 1)] {
            let poly = BinPoly::from_exponents(&[m, l, 0]);
            if !is_irreducible(&poly) {
                continue;
            }
            let c = check(m, &poly, Some(ConstMulStrategy::Alg1EvenTrinomial));
            let cnot = c.cost(&CostModel::default()).cnot;
            assert!(cnot <= (3 * m - l) as u64, "m={m} l={l}: {cnot}");
        }
    }

    #[test]
    fn alg2_clustered() {
        // x^16+x^5+x^3+x+1: k=3, l1=5, lk=1, n=8
        let poly = p("x^16+x^5+x^3+x+1");
        let c = check(16, &poly, Some(ConstMulStrategy::Alg2EvenClustered));
        let (n, k, l1, lk) = (8u64, 3u64, 5u64, 1u64);
        let bound = n * (k + l1 - lk + 5) + l1 * k - 3;
        let cnot = c.cost(&CostModel::default()).cnot;
        assert!(cnot <= bound, "{cnot} > {bound}");
    }

    #[test]
    fn alg2_on_clustered_table_polys() {
        for s in [
            "x^32+x^13+x^12+x^11+1",
            "x^64+x^4+x^3+x^2+1",
            "x^128+x^21+x^20+x^19+1",
        ] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let c = check(m, &poly, Some(ConstMulStrategy::Alg2EvenClustered));
            let shape = PolyShape::of(m, &poly).unwrap();
            let (n, k) = ((m / 2) as u64, shape.mid.len() as u64);
            let (l1, lk) = (shape.l1 as u64, shape.lk as u64);
            let bound = n * (k + l1 - lk + 5) + l1 * k - 3;
            let cnot = c.cost(&CostModel::default()).cnot;
            assert!(cnot <= bound, "{s}: {cnot} > {bound}");
        }
    }

    #[test]
    fn alg3_odd_trinomial() {
        // x^9+x^4+1 is irreducible, l=4 >= n? n=4 -> need l < 4; use x^9+x+1
        for (m, l) in [(9usize, 1usize), (15, 1), (23, 5), (39, 4)] {
            let poly = BinPoly::from_exponents(&[m, l, 0]);
            if !is_irreducible(&poly) {
                continue;
            }
            let n = (m - 1) / 2;
            assert!(l < n);
            let c = check(m, &poly, Some(ConstMulStrategy::Alg3OddTrinomial));
            let bound = (n * (l + 6)) as u64 - (3 * l) as u64;
            let cnot = c.cost(&CostModel::default()).cnot;
            assert!(cnot <= bound, "m={m} l={l}: {cnot} > {bound}");
        }
    }

    #[test]
    fn alg4_odd_general() {
        for s in ["x^163+x^7+x^6+x^3+1", "x^29+x^4+x^2+x+1", "x^233+x^10+x^5+x+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let shape = PolyShape::of(m, &poly).unwrap();
            let n = (m - 1) / 2;
            let c = check(m, &poly, Some(ConstMulStrategy::Alg4OddGeneral));
            let l1 = shape.l1 as u64;
            let sum_l: u64 = shape.mid.iter().map(|&l| l as u64).sum();
            let bound = n as u64 * (2 * l1 + 5) - l1 * l1 - l1 + sum_l;
            let cnot = c.cost(&CostModel::default()).cnot;
            assert!(cnot <= bound, "{s}: {cnot} > {bound}");
        }
    }

    #[test]
    fn alg56_fused_and_unfused_agree() {
        // x^23 + (x^10+x^9) + (x^2+x+1): n=11, l1=2, l2=2? weight parity:
        // l1 + l2 must be odd; pick l1=2, l2=1: x^23+x^10+x^9+x+1
        for (m, l1, l2) in [(23usize, 2usize, 1usize), (23, 1, 0), (31, 3, 0), (31, 0, 3)] {
            let n = (m - 1) / 2;
            let mut exps = vec![m];
            for t in (n - l1)..n {
                exps.push(t);
            }
            for t in 0..=l2 {
                exps.push(t);
            }
            let poly = BinPoly::from_exponents(&exps);
            if !is_irreducible(&poly) {
                continue;
            }
            let shape = PolyShape::of(m, &poly).unwrap();
            assert_eq!(shape.odd_runs(), Some((l1, l2)), "{poly}");
            let want = build_constmul_matrix(m, &poly).unwrap();

            for variant in [
                RunsVariant::DiffFirst,
                RunsVariant::ClearFirst,
                RunsVariant::SlimDiffFirst,
                RunsVariant::SlimClearFirst,
                RunsVariant::Unfused,
            ] {
                let mut red = MatrixReducer::new(want.clone());
                alg56_odd_runs(&mut red, n, l1, l2, variant).unwrap();
                let c = red.finish().unwrap().push_swaps_right();
                assert_eq!(c.simulate_linear().unwrap(), want, "{poly} {variant:?}");
                let cnot = c.cost(&CostModel::default()).cnot;
                let bound = (5.5 * m as f64 + 13.0) as u64;
                if variant != RunsVariant::Unfused {
                    assert!(cnot <= bound, "{poly} {variant:?}: {cnot} > {bound}");
                }
            }
        }
    }

    #[test]
    fn auto_dispatch_priority() {
        assert_eq!(
            auto_strategy(10, &p("x^10+x^3+1")).unwrap(),
            ConstMulStrategy::Alg1EvenTrinomial
        );
        assert_eq!(
            auto_strategy(16, &p("x^16+x^5+x^3+x+1")).unwrap(),
            ConstMulStrategy::Alg2EvenClustered
        );
        // x^23+x^11+x^10+x^9+x+1? shape: middle run must end at n-1 = 10
        assert_eq!(
            auto_strategy(23, &p("x^23+x^10+x^9+x+1")).unwrap(),
            ConstMulStrategy::Alg56OddRuns
        );
        assert_eq!(
            auto_strategy(23, &p("x^23+x^5+1")).unwrap(),
            ConstMulStrategy::Alg3OddTrinomial
        );
        assert_eq!(
            auto_strategy(163, &p("x^163+x^7+x^6+x^3+1")).unwrap(),
            ConstMulStrategy::Alg4OddGeneral
        );
        assert_eq!(
            auto_strategy(2, &p("x^2+x+1")).unwrap(),
            ConstMulStrategy::LuFallback
        );
        // l1 at the boundary: matrix fine but no structured algorithm
        assert_eq!(
            auto_strategy(169, &p("x^169+x^84+1")).unwrap(),
            ConstMulStrategy::LuFallback
        );
    }

    #[test]
    fn mismatch_errors() {
        assert!(matches!(
            synth_constmul(10, &p("x^10+x^3+1"), Some(ConstMulStrategy::Alg3OddTrinomial)),
            Err(Error::StrategyShapeMismatch { .. })
        ));
    }

    #[test]
    fn constdiv_inverts_constmul() {
        for s in ["x^10+x^3+1", "x^16+x^5+x^3+x+1", "x^23+x^10+x^9+x+1"] {
            let poly = p(s);
            let m = poly.degree().unwrap();
            let mul = synth_constmul(m, &poly, None).unwrap();
            let div = synth_constdiv(m, &poly).unwrap();
            let mut both = mul.clone();
            both.extend_from(&div);
            assert!(both.simulate_linear().unwrap().is_identity(), "{s}");
            let model = CostModel::default();
            assert_eq!(mul.cost(&model).cnot, div.cost(&model).cnot);
        }
    }

    #[test]
    fn search_small_sizes() {
        for m in 2..=24 {
            let (poly, c, cnot) = search_best_constmul(m, &SearchOptions::default()).unwrap();
            assert!(is_irreducible(&poly), "m={m}: {poly}");
            assert_eq!(poly.degree(), Some(m));
            assert!(!c.is_empty() || m == 1);
            assert!(cnot > 0, "m={m}");
        }
    }
}
