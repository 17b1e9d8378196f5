//! Dense GF(2) matrices: row/column primitives, rank, and the
//! constant-multiplication and squaring matrices.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::poly::BinPoly;

/// Dense bit matrix, row-major, one `u64` word per 64 columns.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        self.words[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.words[r * self.stride + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / 64] ^= 1 << (c % 64);
    }

    /// row `dst` ^= row `src`
    pub fn row_xor(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (s, d) = (src * self.stride, dst * self.stride);
        for i in 0..self.stride {
            let w = self.words[s + i];
            self.words[d + i] ^= w;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.stride {
            self.words.swap(a * self.stride + i, b * self.stride + i);
        }
    }

    /// col `dst` ^= col `src` (bit loop; prefer transposed row ops in bulk)
    pub fn col_xor(&mut self, src: usize, dst: usize) {
        for r in 0..self.rows {
            if self.get(r, src) {
                self.flip(r, dst);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let (va, vb) = (self.get(r, a), self.get(r, b));
            if va != vb {
                self.set(r, a, vb);
                self.set(r, b, va);
            }
        }
    }

    pub fn row(&self, r: usize) -> BitVec {
        let mut v = BitVec::from_words(self.words[r * self.stride..(r + 1) * self.stride].to_vec());
        v.truncate_bits(self.cols);
        v.normalize();
        v
    }

    pub fn set_row(&mut self, r: usize, v: &BitVec) {
        let base = r * self.stride;
        for i in 0..self.stride {
            self.words[base + i] = v.words().get(i).copied().unwrap_or(0);
        }
    }

    pub fn col(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.words[r * self.stride..(r + 1) * self.stride]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let base = r * self.stride;
            for wi in 0..self.stride {
                let mut w = self.words[base + wi];
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.set(wi * 64 + b, r, true);
                }
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let base = r * self.stride;
            for wi in 0..self.stride {
                let mut w = self.words[base + wi];
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    let k = wi * 64 + b;
                    // out row r ^= other row k
                    let (s, d) = (k * other.stride, r * out.stride);
                    for i in 0..other.stride {
                        let x = other.words[s + i];
                        out.words[d + i] ^= x;
                    }
                }
            }
        }
        out
    }

    /// `self^k` for square matrices, by repeated squaring.
    pub fn pow(&self, mut k: u64) -> BitMatrix {
        assert_eq!(self.rows, self.cols);
        let mut result = BitMatrix::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    /// Matrix-vector product over GF(2), column-vector convention.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            let base = r * self.stride;
            let mut acc = 0u64;
            for i in 0..self.stride {
                acc ^= self.words[base + i] & v.words().get(i).copied().unwrap_or(0);
            }
            if acc.count_ones() % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            if let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) {
                m.swap_rows(rank, p);
                for r in 0..m.rows {
                    if r != rank && m.get(r, c) {
                        m.row_xor(rank, r);
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        (0..self.rows).all(|r| {
            let mut want = BitVec::zeros(self.cols);
            want.set(r, true);
            want.normalize();
            self.row(r) == want
        })
    }

    /// If every row and column has exactly one 1, return the permutation
    /// `perm[col] = row` meaning the matrix maps input wire `col` to output
    /// wire `row`.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols {
            return None;
        }
        let mut perm = vec![usize::MAX; self.cols];
        for r in 0..self.rows {
            if self.row_weight(r) != 1 {
                return None;
            }
            let c = self.row(r).lowest_bit().unwrap();
            if perm[c] != usize::MAX {
                return None;
            }
            perm[c] = r;
        }
        Some(perm)
    }

    /// Rows as 0/1 strings, one per line (debug dump format).
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitMatrix {}x{}\n{}", self.rows, self.cols, self.dump())
    }
}

/// Exponent of the constant polynomial `1 + x^ceil(m/2)`.
pub fn constmul_shift(m: usize) -> usize {
    m.div_ceil(2)
}

/// Matrix of multiplication by `1 + x^ceil(m/2)` in GF(2^m) mod `p`;
/// column `j` holds the coefficients of `x^j * (1 + x^ceil(m/2)) mod p`.
///
/// Requires the second-highest exponent `l_1 <= floor(m/2)` so each column
/// reduces in a single step.
pub fn build_constmul_matrix(m: usize, p: &BinPoly) -> Result<BitMatrix> {
    let l1 = second_highest_exponent(m, p)?;
    if l1 > m - constmul_shift(m) {
        return Err(Error::PolyShapeUnsupported(format!(
            "second-highest exponent {l1} of {p} exceeds floor(m/2) = {}",
            m - constmul_shift(m)
        )));
    }
    Ok(constmul_matrix_any(m, p))
}

/// Same matrix without the shape restriction (used by the generic fallback).
pub(crate) fn constmul_matrix_any(m: usize, p: &BinPoly) -> BitMatrix {
    assert_eq!(p.degree(), Some(m));
    let c = constmul_shift(m);
    let mut col = BitVec::zeros(m + 1);
    col.set(0, true);
    col.set(c, true);
    columns_by_x_multiplication(m, p, col, 1)
}

/// Matrix of the Frobenius squaring map; column `j` holds `x^(2j) mod p`.
pub fn build_squaring_matrix(m: usize, p: &BinPoly) -> BitMatrix {
    assert_eq!(p.degree(), Some(m));
    let mut col = BitVec::zeros(m + 1);
    col.set(0, true);
    columns_by_x_multiplication(m, p, col, 2)
}

/// Build an m-by-m matrix whose columns advance by `steps` multiplications
/// by `x` modulo `p`, starting from `first` (already reduced).
fn columns_by_x_multiplication(m: usize, p: &BinPoly, first: BitVec, steps: usize) -> BitMatrix {
    let tail: Vec<usize> = p.exponents().into_iter().filter(|&e| e < m).collect();
    let mut mat = BitMatrix::zeros(m, m);
    let mut col = first;
    for j in 0..m {
        for r in col.iter_ones() {
            mat.set(r, j, true);
        }
        if j + 1 == m {
            break;
        }
        for _ in 0..steps {
            // col *= x mod p
            let mut next = BitVec::zeros(m + 1);
            next.xor_shifted(&col, 1);
            if next.get(m) {
                next.set(m, false);
                for &e in &tail {
                    next.flip(e);
                }
            }
            col = next;
        }
    }
    mat
}

fn second_highest_exponent(m: usize, p: &BinPoly) -> Result<usize> {
    if p.degree() != Some(m) {
        return Err(Error::PolyShapeUnsupported(format!(
            "{p} does not have degree {m}"
        )));
    }
    p.exponents()
        .into_iter()
        .filter(|&e| e < m)
        .next_back()
        .ok_or_else(|| Error::PolyShapeUnsupported(format!("{p} is a monomial")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{gf_mul, BinPoly};

    fn p(s: &str) -> BinPoly {
        s.parse().unwrap()
    }

    #[test]
    fn rank_and_identity() {
        let id = BitMatrix::identity(5);
        assert_eq!(id.rank(), 5);
        assert!(id.is_identity());
        let mut m = id.clone();
        m.row_xor(0, 3);
        assert!(m.is_invertible() && !m.is_identity());
        m.set(3, 0, false);
        m.set(3, 3, false);
        assert!(!m.is_invertible());
    }

    #[test]
    fn constmul_matrix_m2() {
        // columns are the coefficients of (1+x)*x^j mod x^2+x+1
        let m = build_constmul_matrix(2, &p("x^2+x+1")).unwrap();
        assert!(m.get(0, 0) && m.get(1, 0)); // col 0 = 1+x
        assert!(m.get(0, 1) && !m.get(1, 1)); // col 1 = x+x^2 = 1
    }

    #[test]
    fn constmul_matrix_matches_field_oracle() {
        for poly in ["x^10+x^3+1", "x^16+x^5+x^3+x+1", "x^13+x^4+x^3+x+1"] {
            let f = p(poly);
            let m = f.degree().unwrap();
            let c = BinPoly::x_pow(constmul_shift(m)).add(&BinPoly::one());
            let mat = build_constmul_matrix(m, &f).unwrap();
            assert!(mat.is_invertible());
            for j in 0..m {
                let want = gf_mul(&BinPoly::x_pow(j), &c, &f).unwrap();
                for r in 0..m {
                    assert_eq!(mat.get(r, j), want.coeff(r), "{poly} col {j} row {r}");
                }
            }
        }
    }

    #[test]
    fn constmul_matrix_first_column() {
        let f = p("x^10+x^3+1");
        let mat = build_constmul_matrix(10, &f).unwrap();
        let col0 = mat.col(0);
        assert_eq!(col0.iter_ones().collect::<Vec<_>>(), vec![0, 5]);
    }

    #[test]
    fn constmul_matrix_rejects_large_l1() {
        // second-highest exponent above floor(m/2) would need a double
        // reduction step
        let f = p("x^7+x^5+1");
        assert!(matches!(
            build_constmul_matrix(7, &f),
            Err(Error::PolyShapeUnsupported(_))
        ));
        // the boundary case is fine: l1 = floor(m/2) reduces in one step
        let f = p("x^169+x^84+1");
        let mat = build_constmul_matrix(169, &f).unwrap();
        assert!(mat.is_invertible());
    }

    #[test]
    fn squaring_matrix_m2() {
        let m = build_squaring_matrix(2, &p("x^2+x+1"));
        // 1 -> 1, x -> x+1
        assert!(m.get(0, 0) && !m.get(1, 0));
        assert!(m.get(0, 1) && m.get(1, 1));
    }

    #[test]
    fn squaring_matrix_matches_field_oracle_gf32() {
        let f = p("x^5+x^2+1");
        let mat = build_squaring_matrix(5, &f);
        assert!(mat.is_invertible());
        for v in 0u64..32 {
            let a = BinPoly::from_word(v);
            let want = gf_mul(&a, &a, &f).unwrap();
            let got = mat.mul_vec(a.bits());
            for r in 0..5 {
                assert_eq!(got.get(r), want.coeff(r), "a={a} row {r}");
            }
        }
    }

    #[test]
    fn squaring_matrix_low_columns_are_even_monomials() {
        let f = p("x^13+x^4+x^3+x+1");
        let mat = build_squaring_matrix(13, &f);
        for j in 0..7 {
            // 2j < m: no reduction
            let col = mat.col(j);
            assert_eq!(col.iter_ones().collect::<Vec<_>>(), vec![2 * j]);
        }
    }

    #[test]
    fn pow_and_mul() {
        let f = p("x^5+x^2+1");
        let s = build_squaring_matrix(5, &f);
        // Frobenius has order m: S^5 = I
        assert!(s.pow(5).is_identity());
        assert_eq!(s.pow(2), s.mul(&s));
    }
}
