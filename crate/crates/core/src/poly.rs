//! Polynomials over GF(2) and classical GF(2^m) field arithmetic.
//!
//! A [`BinPoly`] is a bit vector of coefficients (bit `i` holds the
//! coefficient of `x^i`) and doubles as a field element of GF(2^m) when kept
//! reduced modulo an irreducible polynomial of degree `m`. The field
//! operations here are the classical oracle every synthesized circuit is
//! verified against.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::OnceLock;

/// Polynomial over GF(2), canonical (no set bit above its degree, trailing
/// zero words trimmed). The zero polynomial has degree `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinPoly {
    bits: BitVec,
}

impl BinPoly {
    pub fn zero() -> Self {
        BinPoly { bits: BitVec::new() }
    }

    pub fn one() -> Self {
        Self::x_pow(0)
    }

    /// The monomial `x^e`.
    pub fn x_pow(e: usize) -> Self {
        let mut bits = BitVec::new();
        bits.set(e, true);
        BinPoly { bits }
    }

    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut bits = BitVec::new();
        for &e in exps {
            bits.flip(e);
        }
        bits.normalize();
        BinPoly { bits }
    }

    pub fn from_bits(mut bits: BitVec) -> Self {
        bits.normalize();
        BinPoly { bits }
    }

    /// Low 64 coefficient bits as an integer (used for small polynomials).
    pub fn low_word(&self) -> u64 {
        self.bits.words().first().copied().unwrap_or(0)
    }

    pub fn from_word(w: u64) -> Self {
        let mut bits = BitVec::from_words(vec![w]);
        bits.normalize();
        BinPoly { bits }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.bits.highest_bit()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn coeff(&self, e: usize) -> bool {
        self.bits.get(e)
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn exponents(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn add(&self, other: &BinPoly) -> BinPoly {
        let mut bits = self.bits.clone();
        bits.xor_assign(&other.bits);
        bits.normalize();
        BinPoly { bits }
    }

    /// Carry-less product.
    pub fn mul(&self, other: &BinPoly) -> BinPoly {
        let (a, b) = if self.weight() <= other.weight() {
            (other, self)
        } else {
            (self, other)
        };
        let mut out = BitVec::new();
        for j in b.bits.iter_ones() {
            out.xor_shifted(&a.bits, j);
        }
        out.normalize();
        BinPoly { bits: out }
    }

    /// Carry-less square: spreads each coefficient bit to position `2i`.
    pub fn square(&self) -> BinPoly {
        let words = self.bits.words();
        let mut out = Vec::with_capacity(words.len() * 2);
        for &w in words {
            out.push(spread32(w as u32));
            out.push(spread32((w >> 32) as u32));
        }
        let mut bits = BitVec::from_words(out);
        bits.normalize();
        BinPoly { bits }
    }

    /// Remainder modulo `p`.
    pub fn rem(&self, p: &BinPoly) -> Result<BinPoly> {
        let red = Reducer::new(p)?;
        let mut bits = self.bits.clone();
        red.reduce(&mut bits);
        bits.normalize();
        Ok(BinPoly { bits })
    }

    pub fn gcd(&self, other: &BinPoly) -> BinPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero modulus");
            a = b;
            b = r;
        }
        a
    }
}

#[inline]
fn spread32(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

/// Precomputed reduction context for a fixed modulus.
///
/// The modulus is decomposed into maximal runs of consecutive set bits so a
/// reduction step costs one word-level XOR per run rather than one per set
/// bit; the polynomial shapes used throughout are run-structured.
pub struct Reducer {
    deg: usize,
    runs: Vec<(usize, usize)>,
}

impl Reducer {
    pub fn new(p: &BinPoly) -> Result<Self> {
        let deg = p.degree().ok_or(Error::ZeroModulus)?;
        let mut runs = Vec::new();
        let mut start = None;
        let mut prev = 0usize;
        for e in p.bits.iter_ones() {
            match start {
                None => start = Some(e),
                Some(_) if e == prev + 1 => {}
                Some(s) => {
                    runs.push((s, prev));
                    start = Some(e);
                }
            }
            prev = e;
        }
        if let Some(s) = start {
            runs.push((s, prev));
        }
        Ok(Reducer { deg, runs })
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// Reduce `a` in place to degree `< self.deg`.
    pub fn reduce(&self, a: &mut BitVec) {
        if self.deg == 0 {
            // modulus is 1: everything reduces to zero
            *a = BitVec::new();
            return;
        }
        let top_word = self.deg / 64;
        let top_bit = self.deg % 64;
        let mut wi = a.words().len();
        while wi > top_word {
            wi -= 1;
            loop {
                let words = a.words();
                if wi >= words.len() {
                    break;
                }
                let mut w = words[wi];
                if wi == top_word && top_bit > 0 {
                    w &= !((1u64 << top_bit) - 1);
                }
                if w == 0 {
                    break;
                }
                let b = 63 - w.leading_zeros() as usize;
                let shift = wi * 64 + b - self.deg;
                for &(lo, hi) in &self.runs {
                    a.xor_run(lo + shift, hi + shift);
                }
            }
        }
    }

    /// `a^2 mod p` for already-reduced `a`.
    pub fn sqr(&self, a: &BinPoly) -> BinPoly {
        let mut s = a.square();
        self.reduce(&mut s.bits);
        s.bits.normalize();
        s
    }

    pub fn mul(&self, a: &BinPoly, b: &BinPoly) -> BinPoly {
        let mut m = a.mul(b);
        self.reduce(&mut m.bits);
        m.bits.normalize();
        m
    }
}

/// Carry-less product of two polynomials.
pub fn poly_mul(a: &BinPoly, b: &BinPoly) -> BinPoly {
    a.mul(b)
}

/// Remainder of `a` modulo `p`.
pub fn poly_mod(a: &BinPoly, p: &BinPoly) -> Result<BinPoly> {
    a.rem(p)
}

/// Field product in GF(2^m) defined by the irreducible `p`.
pub fn gf_mul(a: &BinPoly, b: &BinPoly, p: &BinPoly) -> Result<BinPoly> {
    poly_mod(&a.mul(b), p)
}

/// Multiplicative inverse via `b^(2^m - 2)`, square-and-multiply.
pub fn gf_inv(b: &BinPoly, p: &BinPoly) -> Result<BinPoly> {
    if b.is_zero() {
        return Err(Error::ZeroInverse);
    }
    let red = Reducer::new(p)?;
    let m = red.degree();
    // exponent 2^m - 2 is m-1 ones followed by a zero
    let mut acc = b.clone();
    for _ in 0..m.saturating_sub(2) {
        acc = red.mul(&red.sqr(&acc), b);
    }
    Ok(red.sqr(&acc))
}

/// The first `n` irreducible polynomials ordered by degree then value.
pub fn small_irreducibles(n: usize) -> Vec<BinPoly> {
    let mut found: Vec<u64> = Vec::with_capacity(n);
    let mut deg = 1usize;
    while found.len() < n {
        for v in (1u64 << deg)..(1u64 << (deg + 1)) {
            let divisible = found.iter().any(|&q| {
                let qd = 63 - q.leading_zeros() as usize;
                qd * 2 <= deg && word_rem(v, q) == 0
            });
            if !divisible {
                found.push(v);
                if found.len() == n {
                    break;
                }
            }
        }
        deg += 1;
    }
    found.into_iter().map(BinPoly::from_word).collect()
}

/// Carry-less remainder for one-word polynomials.
fn word_rem(mut a: u64, q: u64) -> u64 {
    let qd = 63 - q.leading_zeros();
    loop {
        let ad = 63 - (a | 1).leading_zeros();
        if a == 0 || ad < qd {
            return a;
        }
        a ^= q << (ad - qd);
    }
}

struct Prefilter {
    polys: Vec<BinPoly>,
    product: BinPoly,
    product_deg: usize,
}

fn prefilter() -> &'static Prefilter {
    static CELL: OnceLock<Prefilter> = OnceLock::new();
    CELL.get_or_init(|| {
        let polys = small_irreducibles(100);
        let mut product = BinPoly::one();
        for q in &polys {
            product = product.mul(q);
        }
        let product_deg = product.degree().unwrap();
        Prefilter {
            polys,
            product,
            product_deg,
        }
    })
}

/// Irreducibility over GF(2): divisibility pre-filter by the first 100
/// irreducible polynomials, then the gcd criterion on Frobenius powers.
pub fn is_irreducible(p: &BinPoly) -> bool {
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if deg == 1 {
        return true;
    }
    if !p.coeff(0) || p.weight() % 2 == 0 {
        return false; // divisible by x or x+1
    }
    let pf = prefilter();
    if deg > 2 * pf.product_deg {
        // batched: gcd with the product of all 100 small irreducibles
        let r = p.rem(&pf.product).expect("nonzero modulus");
        if !r.gcd(&pf.product).eq(&BinPoly::one()) {
            return false;
        }
    } else {
        for q in &pf.polys {
            let qd = q.degree().unwrap();
            if qd < 2 || 2 * qd > deg {
                continue;
            }
            if p.rem(q).expect("nonzero").is_zero() {
                return false;
            }
        }
    }
    rabin_test(p, deg)
}

/// `p` (degree m) is irreducible iff x^(2^m) = x mod p and
/// gcd(x^(2^(m/q)) - x, p) = 1 for every prime q dividing m.
fn rabin_test(p: &BinPoly, deg: usize) -> bool {
    let red = match Reducer::new(p) {
        Ok(r) => r,
        Err(_) => return false,
    };
    let x = BinPoly::x_pow(1);
    let checkpoints: Vec<usize> = prime_factors(deg).iter().map(|q| deg / q).collect();
    let mut t = x.clone();
    for i in 1..=deg {
        t = red.sqr(&t);
        if checkpoints.contains(&i) {
            let g = t.add(&x).gcd(p);
            if g != BinPoly::one() {
                return false;
            }
        }
    }
    t == x
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Number of irreducible polynomials of degree `m` over GF(2)
/// (necklace-counting formula).
pub fn irreducible_count(m: usize) -> u64 {
    let mut total: i64 = 0;
    for d in 1..=m {
        if m % d == 0 {
            total += moebius(d) * (1i64 << (m / d));
        }
    }
    (total / m as i64) as u64
}

fn moebius(n: usize) -> i64 {
    let mut n = n;
    let mut mu = 1i64;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            mu = -mu;
        }
        d += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

impl Ord for BinPoly {
    /// Numeric order of the encoded coefficient bit string.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let (a, b) = (self.bits.words(), other.bits.words());
        if a.len() != b.len() {
            return a.len().cmp(&b.len());
        }
        for i in (0..a.len()).rev() {
            if a[i] != b[i] {
                return a[i].cmp(&b[i]);
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for BinPoly {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinPoly {
    /// Term form, exponents descending: `x^10+x^3+1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut exps = self.exponents();
        exps.reverse();
        for (i, e) in exps.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for BinPoly {
    type Err = Error;

    /// Accepts the term form (`x^10+x^3+1`) and the hex bit-vector form
    /// (`0x409`, bit i = coefficient of x^i).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::ParseError {
                line: 0,
                msg: "empty polynomial".into(),
            });
        }
        if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            let mut bits = BitVec::new();
            for (i, c) in hex.chars().rev().enumerate() {
                let d = c.to_digit(16).ok_or_else(|| Error::ParseError {
                    line: 0,
                    msg: format!("bad hex digit '{c}'"),
                })?;
                for b in 0..4 {
                    if d >> b & 1 == 1 {
                        bits.set(i * 4 + b, true);
                    }
                }
            }
            return Ok(BinPoly::from_bits(bits));
        }
        if s == "0" {
            return Ok(BinPoly::zero());
        }
        let mut bits = BitVec::new();
        for term in s.split('+') {
            let term = term.trim();
            let e = if term == "1" {
                0
            } else if term == "x" {
                1
            } else if let Some(rest) = term.strip_prefix("x^") {
                rest.parse::<usize>().map_err(|_| Error::ParseError {
                    line: 0,
                    msg: format!("bad exponent '{rest}'"),
                })?
            } else {
                return Err(Error::ParseError {
                    line: 0,
                    msg: format!("bad term '{term}'"),
                });
            };
            if bits.get(e) {
                return Err(Error::ParseError {
                    line: 0,
                    msg: format!("duplicate term x^{e}"),
                });
            }
            bits.set(e, true);
        }
        Ok(BinPoly::from_bits(bits))
    }
}
