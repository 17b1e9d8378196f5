//! Synthesis toolkit for ancilla-free reversible GF(2^m) arithmetic
//! circuits: field multiplication, constant multiplication, squaring and
//! FLT-based division over CNOT/Toffoli gates, with cost accounting and
//! verification oracles.

pub mod bits;
pub mod circuit;
pub mod constmul;
pub mod error;
pub mod families;
pub mod formula;
pub mod linsynth;
pub mod matrix;
pub mod mulsynth;
pub mod pattern;
pub mod peephole;
pub mod poly;
pub mod reducer;
pub mod rng;
pub mod text;

pub use circuit::{Circuit, CostModel, CostReport, Gate, Register, RegisterRole};
pub use error::{Error, Result};
pub use matrix::BitMatrix;
pub use poly::BinPoly;
