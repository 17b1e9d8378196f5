//! Pattern-constrained irreducible polynomial search.
//!
//! Each pattern enumerates its candidates in ascending order of the encoded
//! polynomial value, so a search is reproducible across runs. Candidates
//! whose total weight is even are skipped up front (they are divisible by
//! `x + 1`).

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::poly::{is_irreducible, BinPoly};

/// Shapes of irreducible polynomials the synthesis algorithms consume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyPattern {
    /// `x^m + x^l + 1`, even m.
    EvenTrinomial { max_l: Option<usize> },
    /// `x^m + x^l1 + ... + x^lk + 1` with `l1 - lk <= max_span`, even m.
    EvenClustered { max_span: usize },
    /// `x^m + x^l + 1`, odd m.
    OddTrinomial { max_l: Option<usize> },
    /// `x^m + (middle terms up to x^max_l1) + 1`, odd m.
    OddGeneral { max_l1: Option<usize> },
    /// `x^m + (x^(n-1)+...+x^(n-l1)) + (x^l2+...+1)` with `n - l1 > l2`,
    /// odd m = 2n+1.
    OddRuns {
        max_l1: Option<usize>,
        max_l2: Option<usize>,
    },
    /// `x^m + x + 1 + (x^(2*lk) + ... + x^(2*l1))` with `1 <= lk < ... < l1`,
    /// smallest k first; odd m.
    DivisionFriendly { max_k: usize },
}

impl PolyPattern {
    pub fn even_trinomial() -> Self {
        PolyPattern::EvenTrinomial { max_l: None }
    }

    pub fn even_clustered() -> Self {
        PolyPattern::EvenClustered { max_span: 8 }
    }

    pub fn odd_trinomial() -> Self {
        PolyPattern::OddTrinomial { max_l: None }
    }

    pub fn odd_general() -> Self {
        PolyPattern::OddGeneral { max_l1: None }
    }

    pub fn odd_runs() -> Self {
        PolyPattern::OddRuns {
            max_l1: None,
            max_l2: None,
        }
    }

    pub fn division_friendly() -> Self {
        PolyPattern::DivisionFriendly { max_k: 6 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolyPattern::EvenTrinomial { .. } => "even-trinomial",
            PolyPattern::EvenClustered { .. } => "even-clustered",
            PolyPattern::OddTrinomial { .. } => "odd-trinomial",
            PolyPattern::OddGeneral { .. } => "odd-general",
            PolyPattern::OddRuns { .. } => "odd-runs",
            PolyPattern::DivisionFriendly { .. } => "division-friendly",
        }
    }

    /// Does the pattern apply to fields of this extension degree?
    pub fn matches_parity(&self, m: usize) -> bool {
        match self {
            PolyPattern::EvenTrinomial { .. } | PolyPattern::EvenClustered { .. } => m % 2 == 0,
            _ => m % 2 == 1,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "even-trinomial" => Ok(Self::even_trinomial()),
            "even-clustered" => Ok(Self::even_clustered()),
            "odd-trinomial" => Ok(Self::odd_trinomial()),
            "odd-general" => Ok(Self::odd_general()),
            "odd-runs" => Ok(Self::odd_runs()),
            "division-friendly" => Ok(Self::division_friendly()),
            _ => Err(Error::ParseError {
                line: 0,
                msg: format!("unknown pattern '{name}'"),
            }),
        }
    }
}

/// Candidate polynomials of the pattern for degree `m`, ascending by encoded
/// value (candidates divisible by `x` or `x + 1` are already dropped).
pub fn candidates(m: usize, pattern: &PolyPattern) -> Box<dyn Iterator<Item = BinPoly> + Send> {
    match pattern.clone() {
        PolyPattern::EvenTrinomial { max_l } | PolyPattern::OddTrinomial { max_l } => {
            let hi = max_l.unwrap_or(m - 1).min(m - 1);
            Box::new((1..=hi).map(move |l| BinPoly::from_exponents(&[m, l, 0])))
        }
        PolyPattern::EvenClustered { max_span } => {
            Box::new((1..m).flat_map(move |l1| {
                let lo = l1.saturating_sub(max_span).max(1);
                let width = l1 - lo; // window of exponents [lo, l1)
                (0u64..1 << width)
                    .filter(|mask| mask.count_ones() % 2 == 0)
                    .map(move |mask| {
                        let mut exps = vec![m, l1, 0];
                        for b in 0..width {
                            if mask >> b & 1 == 1 {
                                exps.push(lo + b);
                            }
                        }
                        BinPoly::from_exponents(&exps)
                    })
            }))
        }
        PolyPattern::OddGeneral { max_l1 } => {
            let cap = max_l1.unwrap_or_else(|| (usize::BITS - m.leading_zeros()) as usize + 4);
            let cap = cap.min(m - 1);
            Box::new(
                (3u64..1 << (cap + 1))
                    .step_by(2)
                    .filter(|v| v.count_ones() % 2 == 0)
                    .map(move |v| {
                        let mut q = BinPoly::from_word(v);
                        let mut bits: BitVec = q.bits().clone();
                        bits.set(m, true);
                        q = BinPoly::from_bits(bits);
                        q
                    }),
            )
        }
        PolyPattern::OddRuns { max_l1, max_l2 } => {
            Box::new(OddRunsIter::new(m, max_l1, max_l2))
        }
        PolyPattern::DivisionFriendly { max_k } => {
            // smallest k first; within k, exponent tuples ascending by value
            let l1_cap = (m / 2).saturating_sub(1) / 2; // keeps 2*l1 < floor(m/2)
            Box::new((2..=max_k).step_by(2).flat_map(move |k| {
                CombinationIter::new(l1_cap, k).map(move |combo| {
                    let mut exps = vec![m, 1, 0];
                    for l in combo {
                        exps.push(2 * l);
                    }
                    BinPoly::from_exponents(&exps)
                })
            }))
        }
    }
}

/// Two-run candidates `x^m + (x^(n-1)+...+x^(n-l1)) + (x^l2+...+1)` in
/// ascending value order. Per middle-run length `l1` the values ascend in
/// `l2`, so a heap merge of the per-`l1` streams yields the global order.
struct OddRunsIter {
    m: usize,
    n: usize,
    max_l2: Option<usize>,
    // min-heap via Reverse: (candidate, l1, l2)
    heap: std::collections::BinaryHeap<std::cmp::Reverse<(BinPoly, usize, usize)>>,
}

impl OddRunsIter {
    fn new(m: usize, max_l1: Option<usize>, max_l2: Option<usize>) -> Self {
        let n = (m - 1) / 2;
        let l1_hi = max_l1.unwrap_or(n.saturating_sub(1)).min(n.saturating_sub(1));
        let mut it = OddRunsIter {
            m,
            n,
            max_l2,
            heap: std::collections::BinaryHeap::new(),
        };
        if m >= 3 {
            for l1 in 0..=l1_hi {
                let first_l2 = if l1 % 2 == 0 { 1 } else { 0 };
                it.push(l1, first_l2);
            }
        }
        it
    }

    fn push(&mut self, l1: usize, l2: usize) {
        let l2_hi = self.max_l2.unwrap_or(self.m).min(self.n - l1 - 1);
        if l2 > l2_hi {
            return;
        }
        let mut bits = BitVec::zeros(self.m + 1);
        bits.set(self.m, true);
        if l1 > 0 {
            bits.xor_run(self.n - l1, self.n - 1);
        }
        bits.xor_run(0, l2);
        self.heap
            .push(std::cmp::Reverse((BinPoly::from_bits(bits), l1, l2)));
    }
}

impl Iterator for OddRunsIter {
    type Item = BinPoly;

    fn next(&mut self) -> Option<BinPoly> {
        let std::cmp::Reverse((poly, l1, l2)) = self.heap.pop()?;
        self.push(l1, l2 + 2); // same parity class, next low run
        Some(poly)
    }
}

/// k-subsets of `{1..=cap}` in ascending order of `sum 2^(2*l)`, i.e. by the
/// largest element first.
struct CombinationIter {
    cap: usize,
    state: Option<Vec<usize>>, // descending
}

impl CombinationIter {
    fn new(cap: usize, k: usize) -> Self {
        let state = if k <= cap {
            Some((1..=k).rev().collect())
        } else {
            None
        };
        CombinationIter { cap, state }
    }
}

impl Iterator for CombinationIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.state.clone()?;
        let k = cur.len();
        // advance: increment the smallest slot that can grow without
        // colliding with the one above it
        let mut next = cur.clone();
        let mut i = k; // index from the back (smallest first)
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            let limit = if i == 0 { self.cap } else { next[i - 1] - 1 };
            if next[i] < limit {
                next[i] += 1;
                for j in (i + 1..k).rev() {
                    next[j] = k - j;
                }
                // reset the tail below slot i to the smallest legal values
                for j in ((i + 1)..k).rev() {
                    next[j] = k - j;
                }
                self.state = Some(next);
                break;
            }
        }
        Some(cur)
    }
}

/// Up to `limit` irreducible polynomials matching the pattern, in the
/// pattern's deterministic enumeration order.
pub fn find_pattern_polys(m: usize, pattern: &PolyPattern, limit: usize) -> Result<Vec<BinPoly>> {
    if !pattern.matches_parity(m) {
        return Err(Error::PatternParityMismatch {
            pattern: pattern.name().into(),
            m,
        });
    }
    Ok(candidates(m, pattern)
        .filter(is_irreducible_ref)
        .take(limit)
        .collect())
}

fn is_irreducible_ref(p: &BinPoly) -> bool {
    is_irreducible(p)
}
