//! Bit-packed linear algebra over GF(2).

use alloc::vec::Vec;

/// Row of bits packed into 64-bit words, least significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self { words: alloc::vec![0; len.div_ceil(64)] }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn and_count(&self, other: &BitRow) -> u32 {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }
}

/// Rank of a set of equal-length rows, by elimination on copies.
pub fn rank(rows: &[BitRow], len: usize) -> usize {
    let mut m: Vec<BitRow> = rows.to_vec();
    let mut r = 0;
    for col in 0..len {
        let Some(p) = (r..m.len()).find(|&i| m[i].get(col)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(bits: &[u8]) -> BitRow {
        let mut r = BitRow::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            r.set(i, b == 1);
        }
        r
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[row(&[1, 0, 1]), row(&[0, 1, 1]), row(&[1, 1, 0])], 3), 2);
        assert_eq!(rank(&[row(&[1, 0]), row(&[0, 1])], 2), 2);
        assert_eq!(rank(&[row(&[0, 0])], 2), 0);
    }

    #[test]
    fn wide_rows() {
        let mut a = BitRow::zeros(130);
        a.set(129, true);
        let mut b = BitRow::zeros(130);
        b.set(129, true);
        b.set(3, true);
        assert_eq!(rank(&[a.clone(), b.clone()], 130), 2);
        b.xor_assign(&a);
        assert_eq!(b.count_ones(), 1);
        assert!(b.get(3));
    }
}
