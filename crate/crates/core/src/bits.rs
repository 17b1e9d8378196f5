//! Word-packed bit vectors used for polynomials, matrix rows and
//! simulation states.

const WORD_BITS: usize = 64;

/// Growable bit vector backed by `u64` words, bit `i` of the vector is bit
/// `i % 64` of word `i / 64`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn new() -> Self {
        BitVec { words: Vec::new() }
    }

    /// All-zero vector able to hold `n` bits without reallocation.
    pub fn zeros(n: usize) -> Self {
        BitVec {
            words: vec![0; n.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        BitVec { words }
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        match self.words.get(i / WORD_BITS) {
            Some(w) => (w >> (i % WORD_BITS)) & 1 == 1,
            None => false,
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let w = i / WORD_BITS;
        if w >= self.words.len() {
            if !v {
                return;
            }
            self.words.resize(w + 1, 0);
        }
        if v {
            self.words[w] |= 1 << (i % WORD_BITS);
        } else {
            self.words[w] &= !(1 << (i % WORD_BITS));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        let w = i / WORD_BITS;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % WORD_BITS);
    }

    /// Index of the highest set bit, if any.
    pub fn highest_bit(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(i * WORD_BITS + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    /// Index of the lowest set bit, if any.
    pub fn lowest_bit(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// XOR `other` into `self`.
    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    /// XOR `other << shift` into `self`.
    pub fn xor_shifted(&mut self, other: &BitVec, shift: usize) {
        let (word_shift, bit_shift) = (shift / WORD_BITS, shift % WORD_BITS);
        let needed = other.words.len() + word_shift + 1;
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        if bit_shift == 0 {
            for (i, &w) in other.words.iter().enumerate() {
                self.words[i + word_shift] ^= w;
            }
        } else {
            let mut carry = 0u64;
            for (i, &w) in other.words.iter().enumerate() {
                self.words[i + word_shift] ^= (w << bit_shift) | carry;
                carry = w >> (WORD_BITS - bit_shift);
            }
            self.words[other.words.len() + word_shift] ^= carry;
        }
    }

    /// XOR the contiguous run of ones `[lo, hi]` (bit indices, inclusive)
    /// into `self`.
    pub fn xor_run(&mut self, lo: usize, hi: usize) {
        debug_assert!(lo <= hi);
        let needed = hi / WORD_BITS + 1;
        if self.words.len() < needed {
            self.words.resize(needed, 0);
        }
        let (wlo, whi) = (lo / WORD_BITS, hi / WORD_BITS);
        if wlo == whi {
            let mask = (u64::MAX >> (WORD_BITS - 1 - hi % WORD_BITS)) & (u64::MAX << (lo % WORD_BITS));
            self.words[wlo] ^= mask;
        } else {
            self.words[wlo] ^= u64::MAX << (lo % WORD_BITS);
            for w in &mut self.words[wlo + 1..whi] {
                *w ^= u64::MAX;
            }
            self.words[whi] ^= u64::MAX >> (WORD_BITS - 1 - hi % WORD_BITS);
        }
    }

    /// Drop any bits at positions `>= n`.
    pub fn truncate_bits(&mut self, n: usize) {
        let full = n / WORD_BITS;
        if full < self.words.len() {
            self.words.truncate(full + 1);
            if n % WORD_BITS == 0 {
                self.words.truncate(full);
            } else if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> (WORD_BITS - n % WORD_BITS);
            }
        }
    }

    /// Remove trailing zero words so equal vectors compare equal.
    pub fn normalize(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// Iterator over indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec[")?;
        for (n, i) in self.iter_ones().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_flip() {
        let mut v = BitVec::new();
        v.set(3, true);
        v.set(200, true);
        assert!(v.get(3) && v.get(200) && !v.get(4));
        v.flip(3);
        assert!(!v.get(3));
        assert_eq!(v.highest_bit(), Some(200));
        assert_eq!(v.lowest_bit(), Some(200));
    }

    #[test]
    fn xor_shifted_matches_bitwise() {
        let mut a = BitVec::new();
        a.set(0, true);
        a.set(70, true);
        let mut b = BitVec::new();
        b.set(1, true);
        b.set(63, true);
        let mut c = a.clone();
        c.xor_shifted(&b, 37);
        for i in 0..200 {
            let expect = a.get(i) ^ (i >= 37 && b.get(i - 37));
            assert_eq!(c.get(i), expect, "bit {i}");
        }
    }

    #[test]
    fn xor_run_matches_loop() {
        for (lo, hi) in [(0, 0), (5, 63), (60, 70), (64, 127), (3, 200)] {
            let mut a = BitVec::zeros(256);
            a.set(100, true);
            let mut b = a.clone();
            a.xor_run(lo, hi);
            for i in lo..=hi {
                b.flip(i);
            }
            a.normalize();
            b.normalize();
            assert_eq!(a, b, "run {lo}..={hi}");
        }
    }
}
