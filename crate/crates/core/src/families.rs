//! Circulant matrix families whose square is a cyclic-shift permutation.

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

/// Parameters of the two circulant families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootFamily {
    /// `n x n` circulant (n even) with exactly one 0 per row, at offset
    /// `zero_pos` in the first row; `zero_pos` in `{0, n/2}` squares to the
    /// identity and is rejected.
    A { n: usize, zero_pos: usize },
    /// `n = p(p+1)` circulant, first row with ones at `0, p, 2p, ..., p^2-p`
    /// cyclically shifted by `shift`; shifts squaring to the identity are
    /// rejected.
    B { p: usize, shift: usize },
}

fn circulant(n: usize, first_row: &[bool]) -> BitMatrix {
    let mut m = BitMatrix::zeros(n, n);
    for r in 0..n {
        for (c, &v) in first_row.iter().enumerate() {
            if v {
                m.set(r, (c + r) % n, true);
            }
        }
    }
    m
}

pub fn build_root_family(family: RootFamily) -> Result<BitMatrix> {
    match family {
        RootFamily::A { n, zero_pos } => {
            if n < 4 || n % 2 != 0 {
                return Err(Error::BadFamilyParam(format!("n={n} must be even, >= 4")));
            }
            if zero_pos >= n {
                return Err(Error::BadFamilyParam(format!("zero_pos {zero_pos} >= n")));
            }
            if zero_pos == 0 || zero_pos == n / 2 {
                return Err(Error::BadFamilyParam(format!(
                    "zero_pos {zero_pos} squares to the identity"
                )));
            }
            let row: Vec<bool> = (0..n).map(|c| c != zero_pos).collect();
            Ok(circulant(n, &row))
        }
        RootFamily::B { p, shift } => {
            if p <= 2 || !is_prime(p) {
                return Err(Error::BadFamilyParam(format!("p={p} must be an odd prime")));
            }
            let n = p * (p + 1);
            if shift >= n {
                return Err(Error::BadFamilyParam(format!("shift {shift} >= n={n}")));
            }
            // M^2 is the cyclic shift by 2*shift + p(p-1); reject identity
            if (2 * shift + p * (p - 1)) % n == 0 {
                return Err(Error::BadFamilyParam(format!(
                    "shift {shift} squares to the identity"
                )));
            }
            let mut row = vec![false; n];
            for j in 0..p {
                row[(j * p + shift) % n] = true;
            }
            Ok(circulant(n, &row))
        }
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// If `m` is a cyclic-shift permutation matrix (row `r` maps input
/// `(r + s) mod n`... i.e. `M[r][c] = 1` iff `c = (r + s) % n`), return the
/// shift `s`.
pub fn cyclic_shift_of(m: &BitMatrix) -> Option<usize> {
    let n = m.rows();
    if n != m.cols() || n == 0 {
        return None;
    }
    let first = m.row(0);
    if first.count_ones() != 1 {
        return None;
    }
    let s = first.lowest_bit().unwrap();
    for r in 0..n {
        let row = m.row(r);
        if row.count_ones() != 1 || row.lowest_bit() != Some((r + s) % n) {
            return None;
        }
    }
    Some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_a_basics() {
        let m = build_root_family(RootFamily::A { n: 4, zero_pos: 1 }).unwrap();
        // first row 1011
        assert!(m.get(0, 0) && !m.get(0, 1) && m.get(0, 2) && m.get(0, 3));
        assert!(m.is_invertible());
        let sq = m.mul(&m);
        let s = cyclic_shift_of(&sq).expect("square is a cyclic shift");
        assert_ne!(s, 0);
        assert_eq!(s, 2); // square shifts by 2 * zero_pos
    }

    #[test]
    fn family_a_rejects_identity_squarers() {
        assert!(build_root_family(RootFamily::A { n: 6, zero_pos: 0 }).is_err());
        assert!(build_root_family(RootFamily::A { n: 6, zero_pos: 3 }).is_err());
        assert!(build_root_family(RootFamily::A { n: 5, zero_pos: 1 }).is_err());
    }

    #[test]
    fn family_b_basics() {
        let m = build_root_family(RootFamily::B { p: 3, shift: 0 }).unwrap();
        assert_eq!(m.rows(), 12);
        let ones: Vec<usize> = m.row(0).iter_ones().collect();
        assert_eq!(ones, vec![0, 3, 6]);
        assert!(m.is_invertible());
        let sq = m.mul(&m);
        let s = cyclic_shift_of(&sq).expect("square is a cyclic shift");
        assert_eq!(s, 3 * 2); // p(p-1) = 6
    }

    #[test]
    fn family_b_rejects_identity_squarers() {
        // 2s + p(p-1) = 0 mod 12 at s in {3, 9} for p = 3
        assert!(build_root_family(RootFamily::B { p: 3, shift: 3 }).is_err());
        assert!(build_root_family(RootFamily::B { p: 3, shift: 9 }).is_err());
        assert!(build_root_family(RootFamily::B { p: 4, shift: 0 }).is_err());
    }
}
