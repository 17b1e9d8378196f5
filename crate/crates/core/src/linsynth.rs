//! Generic CNOT-circuit synthesis of invertible GF(2) matrices: Gaussian
//! elimination baseline and the section-based Patel-Markov-Hayes algorithm.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::reducer::MatrixReducer;
use std::collections::HashMap;

/// Gauss-Jordan synthesis; at most `n^2 + O(n)` gates.
pub fn lu_synth(m: &BitMatrix) -> Result<Circuit> {
    let n = m.rows();
    let mut red = MatrixReducer::new(m.clone());
    for c in 0..n {
        if !red.get(c, c) {
            let pivot = (c + 1..n)
                .find(|&r| red.get(r, c))
                .ok_or(Error::SingularMatrix)?;
            red.swap_rows(c, pivot);
        }
        for r in 0..n {
            if r != c && red.get(r, c) {
                red.add_row(c, r);
            }
        }
    }
    red.finish()
}

/// Patel-Markov-Hayes synthesis with sub-row pattern elimination in column
/// sections; asymptotically `O(n^2 / log n)` gates. `section_size` defaults
/// to `ceil(log2(n) / 2)`.
pub fn pmh_synth(m: &BitMatrix, section_size: Option<usize>) -> Result<Circuit> {
    let n = m.rows();
    let section = section_size
        .unwrap_or_else(|| ((usize::BITS - n.leading_zeros()) as usize).div_ceil(2))
        .max(1);
    let mut red = MatrixReducer::new(m.clone());
    lower_eliminate(&mut red, false, section)?;
    lower_eliminate(&mut red, true, section)?;
    red.finish()
}

/// Eliminate the below-diagonal half. With `on_cols` false this works on
/// rows (row additions); with `on_cols` true the same procedure runs on the
/// transpose via column additions, clearing the upper half.
fn lower_eliminate(red: &mut MatrixReducer, on_cols: bool, section: usize) -> Result<()> {
    let n = red.n();
    let get = |red: &MatrixReducer, i: usize, j: usize| {
        if on_cols {
            red.get(j, i)
        } else {
            red.get(i, j)
        }
    };
    let add = |red: &mut MatrixReducer, src: usize, dst: usize| {
        if on_cols {
            red.add_col(src, dst);
        } else {
            red.add_row(src, dst);
        }
    };
    let sections = n.div_ceil(section);
    for s in 0..sections {
        let lo = s * section;
        let hi = ((s + 1) * section).min(n);
        // merge rows with identical sub-row patterns inside this section
        let mut patterns: HashMap<u64, usize> = HashMap::new();
        for r in lo..n {
            let mut key = 0u64;
            for (bit, c) in (lo..hi).enumerate() {
                if get(red, r, c) {
                    key |= 1 << bit;
                }
            }
            if key == 0 {
                continue;
            }
            match patterns.get(&key) {
                Some(&first) => add(red, first, r),
                None => {
                    patterns.insert(key, r);
                }
            }
        }
        // then ordinary elimination below the diagonal of the section
        for c in lo..hi {
            if !get(red, c, c) {
                let pivot = (c + 1..n)
                    .find(|&r| get(red, r, c))
                    .ok_or(Error::SingularMatrix)?;
                add(red, pivot, c);
            }
            for r in c + 1..n {
                if get(red, r, c) {
                    add(red, c, r);
                }
            }
        }
    }
    Ok(())
}
