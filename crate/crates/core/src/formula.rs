//! Bilinear multiplication formulas `C = R[(TA) o (TB)]`: a split count k,
//! a product count p, and the Boolean matrices T (p x k) and R ((2k-1) x p).
//! Every formula is verified symbolically on load.

use crate::error::{Error, Result};
use crate::matrix::BitMatrix;

#[derive(Clone)]
pub struct KaratsubaFormula {
    pub k: usize,
    pub p: usize,
    pub t: BitMatrix,
    pub r: BitMatrix,
}

impl KaratsubaFormula {
    pub fn new(k: usize, p: usize, t: BitMatrix, r: BitMatrix) -> Result<Self> {
        let f = KaratsubaFormula { k, p, t, r };
        f.verify()?;
        Ok(f)
    }

    /// Classic Karatsuba: 2 pieces, 3 products.
    pub fn karatsuba2() -> Self {
        let mut t = BitMatrix::zeros(3, 2);
        t.set(0, 0, true);
        t.set(1, 0, true);
        t.set(1, 1, true);
        t.set(2, 1, true);
        let mut r = BitMatrix::zeros(3, 3);
        // c0 = p0; c1 = p0 + p1 + p2; c2 = p2
        r.set(0, 0, true);
        r.set(1, 0, true);
        r.set(1, 1, true);
        r.set(1, 2, true);
        r.set(2, 2, true);
        Self::new(2, 3, t, r).expect("builtin k=2 formula")
    }

    /// Three-way split with 6 products.
    pub fn karatsuba3() -> Self {
        let rows_t: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]];
        let mut t = BitMatrix::zeros(6, 3);
        for (i, cols) in rows_t.iter().enumerate() {
            for &c in *cols {
                t.set(i, c, true);
            }
        }
        // c0 = p0
        // c1 = p3 + p0 + p1
        // c2 = p4 + p0 + p1 + p2
        // c3 = p5 + p1 + p2
        // c4 = p2
        let rows_r: [&[usize]; 5] = [&[0], &[0, 1, 3], &[0, 1, 2, 4], &[1, 2, 5], &[2]];
        let mut r = BitMatrix::zeros(5, 6);
        for (i, cols) in rows_r.iter().enumerate() {
            for &c in *cols {
                r.set(i, c, true);
            }
        }
        Self::new(3, 6, t, r).expect("builtin k=3 formula")
    }

    /// Symbolic bilinear check: every coefficient of the reconstructed
    /// product must equal the convolution coefficient. Coefficients live in
    /// GF(2)[a_0..a_{k-1}, b_0..b_{k-1}] represented as bit sets over the
    /// k*k monomials a_i*b_j.
    pub fn verify(&self) -> Result<()> {
        let k = self.k;
        if self.t.rows() != self.p || self.t.cols() != k {
            return Err(Error::FormulaInvalid(format!(
                "T must be {}x{k}, got {}x{}",
                self.p,
                self.t.rows(),
                self.t.cols()
            )));
        }
        if self.r.rows() != 2 * k - 1 || self.r.cols() != self.p {
            return Err(Error::FormulaInvalid(format!(
                "R must be {}x{}, got {}x{}",
                2 * k - 1,
                self.p,
                self.r.rows(),
                self.r.cols()
            )));
        }
        // monomial a_i b_j is bit i*k+j
        let mut products = Vec::with_capacity(self.p);
        for t_row in 0..self.p {
            let mut set = vec![false; k * k];
            for i in 0..k {
                if !self.t.get(t_row, i) {
                    continue;
                }
                for j in 0..k {
                    if self.t.get(t_row, j) {
                        set[i * k + j] ^= true;
                    }
                }
            }
            products.push(set);
        }
        for r in 0..2 * k - 1 {
            let mut acc = vec![false; k * k];
            for (j, prod) in products.iter().enumerate() {
                if self.r.get(r, j) {
                    for (a, b) in acc.iter_mut().zip(prod) {
                        *a ^= b;
                    }
                }
            }
            for i in 0..k {
                for j in 0..k {
                    let want = i + j == r;
                    if acc[i * k + j] != want {
                        return Err(Error::FormulaInvalid(format!(
                            "coefficient {r} disagrees at a_{i}*b_{j}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse the whitespace formula file format: header `K k P p`, then p
    /// rows of k bits for T, then 2k-1 rows of p bits for R.
    pub fn parse(text: &str) -> Result<Vec<KaratsubaFormula>> {
        let mut tokens = text
            .lines()
            .map(|l| match l.find('#') {
                Some(i) => &l[..i],
                None => l,
            })
            .flat_map(|l| l.split_whitespace())
            .peekable();
        let mut out = Vec::new();
        while tokens.peek().is_some() {
            let expect = |tok: Option<&str>, what: &str| -> Result<String> {
                tok.map(str::to_string).ok_or_else(|| Error::ParseError {
                    line: 0,
                    msg: format!("missing {what}"),
                })
            };
            let kw = expect(tokens.next(), "K header")?;
            if kw != "K" {
                return Err(Error::ParseError {
                    line: 0,
                    msg: format!("expected 'K', found '{kw}'"),
                });
            }
            let k: usize = parse_num(&expect(tokens.next(), "k value")?)?;
            let pw = expect(tokens.next(), "P header")?;
            if pw != "P" {
                return Err(Error::ParseError {
                    line: 0,
                    msg: format!("expected 'P', found '{pw}'"),
                });
            }
            let p: usize = parse_num(&expect(tokens.next(), "p value")?)?;
            if k < 2 || p < k {
                return Err(Error::FormulaInvalid(format!("bad sizes k={k} p={p}")));
            }
            let mut read_matrix = |rows: usize, cols: usize| -> Result<BitMatrix> {
                let mut m = BitMatrix::zeros(rows, cols);
                for r in 0..rows {
                    let row = expect(tokens.next(), "matrix row")?;
                    if row.len() != cols {
                        return Err(Error::ParseError {
                            line: 0,
                            msg: format!("row '{row}' is not {cols} bits"),
                        });
                    }
                    for (c, ch) in row.chars().enumerate() {
                        match ch {
                            '0' => {}
                            '1' => m.set(r, c, true),
                            _ => {
                                return Err(Error::ParseError {
                                    line: 0,
                                    msg: format!("bad bit '{ch}'"),
                                })
                            }
                        }
                    }
                }
                Ok(m)
            };
            let t = read_matrix(p, k)?;
            let r = read_matrix(2 * k - 1, p)?;
            out.push(KaratsubaFormula::new(k, p, t, r)?);
        }
        Ok(out)
    }
}

fn parse_num(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::ParseError {
        line: 0,
        msg: format!("bad number '{s}'"),
    })
}

/// The built-in formula library: k = 2 and k = 3.
pub fn builtin_formulas() -> Vec<KaratsubaFormula> {
    vec![KaratsubaFormula::karatsuba2(), KaratsubaFormula::karatsuba3()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_verify() {
        builtin_formulas();
    }

    #[test]
    fn broken_formula_rejected() {
        let mut f = KaratsubaFormula::karatsuba2();
        f.r.set(1, 1, false); // drop the middle product
        assert!(matches!(f.verify(), Err(Error::FormulaInvalid(_))));
    }

    #[test]
    fn parse_round_trip() {
        let text = "K 2 P 3\n10\n11\n01\n100\n111\n001\n";
        let fs = KaratsubaFormula::parse(text).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].k, 2);
        assert_eq!(fs[0].p, 3);
        // matches the builtin
        let b = KaratsubaFormula::karatsuba2();
        assert_eq!(fs[0].t, b.t);
        assert_eq!(fs[0].r, b.r);
    }

    #[test]
    fn parse_rejects_invalid_bilinear() {
        let text = "K 2 P 3\n10\n11\n01\n100\n101\n001\n";
        assert!(KaratsubaFormula::parse(text).is_err());
    }
}
