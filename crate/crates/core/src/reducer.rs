//! Records row/column operations that reduce a matrix to the identity (or a
//! permutation) and replays them as the CNOT/SWAP circuit implementing the
//! original matrix.
//!
//! A row operation `row t += row s` during reduction becomes `CNOT(s, t)` in
//! the circuit suffix (suffix in reverse recording order); a column
//! operation `col d += col s` becomes `CNOT(d, s)` in the circuit prefix
//! (prefix in recording order). Row and column swaps become SWAP gates in
//! the same positions, and a leftover permutation is emitted as a swap block
//! between the two.

use crate::circuit::{permutation_to_swaps, Circuit, Gate, Wire};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

#[derive(Clone, Copy)]
enum Op {
    Add { src: u32, dst: u32 },
    Swap { a: u32, b: u32 },
}

pub struct MatrixReducer {
    mat: BitMatrix,
    stored_transposed: bool,
    row_ops: Vec<Op>,
    col_ops: Vec<Op>,
    n: usize,
}

impl MatrixReducer {
    pub fn new(mat: BitMatrix) -> Self {
        assert_eq!(mat.rows(), mat.cols());
        let n = mat.rows();
        MatrixReducer {
            mat,
            stored_transposed: false,
            row_ops: Vec::new(),
            col_ops: Vec::new(),
            n,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ops_recorded(&self) -> usize {
        self.row_ops.len() + self.col_ops.len()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        if self.stored_transposed {
            self.mat.get(c, r)
        } else {
            self.mat.get(r, c)
        }
    }

    /// Make the physical store match the requested orientation so the next
    /// operations run at word speed.
    fn orient(&mut self, want_transposed: bool) {
        if self.stored_transposed != want_transposed {
            self.mat = self.mat.transpose();
            self.stored_transposed = want_transposed;
        }
    }

    /// row `dst` += row `src`
    pub fn add_row(&mut self, src: usize, dst: usize) {
        self.orient(false);
        self.mat.row_xor(src, dst);
        self.row_ops.push(Op::Add {
            src: src as u32,
            dst: dst as u32,
        });
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.orient(false);
        self.mat.swap_rows(a, b);
        self.row_ops.push(Op::Swap {
            a: a as u32,
            b: b as u32,
        });
    }

    /// col `dst` += col `src`
    pub fn add_col(&mut self, src: usize, dst: usize) {
        self.orient(true);
        self.mat.row_xor(src, dst);
        self.col_ops.push(Op::Add {
            src: src as u32,
            dst: dst as u32,
        });
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.orient(true);
        self.mat.swap_rows(a, b);
        self.col_ops.push(Op::Swap {
            a: a as u32,
            b: b as u32,
        });
    }

    /// Weight of a row in the current state.
    pub fn row_weight(&mut self, r: usize) -> usize {
        self.orient(false);
        self.mat.row_weight(r)
    }

    pub fn col_weight(&mut self, c: usize) -> usize {
        self.orient(true);
        self.mat.row_weight(c)
    }

    /// Current residual matrix (row/column oriented as the caller sees it).
    pub fn residual(&mut self) -> &BitMatrix {
        self.orient(false);
        &self.mat
    }

    /// Emit the circuit for the original matrix. Fails unless the residual
    /// is the identity or a permutation matrix.
    pub fn finish(mut self) -> Result<Circuit> {
        self.orient(false);
        let perm = self
            .mat
            .as_permutation()
            .ok_or(Error::SingularMatrix)?
            .iter()
            .map(|&r| r as Wire)
            .collect::<Vec<_>>();
        let mut c = Circuit::new(self.n);
        for op in &self.col_ops {
            c.push(match *op {
                Op::Add { src, dst } => Gate::Cnot {
                    control: dst,
                    target: src,
                },
                Op::Swap { a, b } => Gate::Swap { a, b },
            });
        }
        for g in permutation_to_swaps(&perm) {
            c.push(g);
        }
        for op in self.row_ops.iter().rev() {
            c.push(match *op {
                Op::Add { src, dst } => Gate::Cnot {
                    control: src,
                    target: dst,
                },
                Op::Swap { a, b } => Gate::Swap { a, b },
            });
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_invertible(n: usize, rng: &mut SplitMix64) -> BitMatrix {
        loop {
            let mut m = BitMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, rng.below(2) == 1);
                }
            }
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn row_only_reduction_round_trips() {
        let mut m = BitMatrix::identity(2);
        m.row_xor(0, 1); // [[1,0],[1,1]]
        let target = m.clone();
        let mut red = MatrixReducer::new(m);
        red.add_row(0, 1); // reduce to identity
        let c = red.finish().unwrap();
        assert_eq!(c.gates(), &[Gate::cnot(0, 1)]);
        assert_eq!(c.simulate_linear().unwrap(), target);
    }

    #[test]
    fn col_reduction_round_trips() {
        let mut m = BitMatrix::identity(2);
        m.row_xor(0, 1);
        let target = m.clone();
        let mut red = MatrixReducer::new(m);
        red.add_col(1, 0); // col 0 += col 1 clears the off-diagonal 1
        let c = red.finish().unwrap();
        assert_eq!(c.simulate_linear().unwrap(), target);
    }

    #[test]
    fn permutation_residual_is_emitted() {
        let mut m = BitMatrix::zeros(3, 3);
        m.set(1, 0, true);
        m.set(2, 1, true);
        m.set(0, 2, true);
        let red = MatrixReducer::new(m.clone());
        let c = red.finish().unwrap();
        assert_eq!(c.simulate_linear().unwrap(), m);
    }

    #[test]
    fn mixed_ops_on_random_matrices() {
        let mut rng = SplitMix64::new(99);
        for n in [3usize, 5, 8] {
            for _ in 0..20 {
                let m = random_invertible(n, &mut rng);
                let mut red = MatrixReducer::new(m.clone());
                // random interleaving of row/col ops, then clean up by Gauss
                for _ in 0..10 {
                    let a = rng.below(n as u64) as usize;
                    let mut b = rng.below(n as u64) as usize;
                    if a == b {
                        b = (b + 1) % n;
                    }
                    match rng.below(4) {
                        0 => red.add_row(a, b),
                        1 => red.add_col(a, b),
                        2 => red.swap_rows(a, b),
                        _ => red.swap_cols(a, b),
                    }
                }
                for c in 0..n {
                    if !red.get(c, c) {
                        let p = (c..n).find(|&r| red.get(r, c)).unwrap();
                        red.swap_rows(c, p);
                    }
                    for r in 0..n {
                        if r != c && red.get(r, c) {
                            red.add_row(c, r);
                        }
                    }
                }
                let circuit = red.finish().unwrap();
                assert_eq!(circuit.simulate_linear().unwrap(), m);
            }
        }
    }
}
