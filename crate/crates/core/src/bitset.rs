//! Fixed-width bit rows used for adjacency and GF(2) elimination.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSet {
    words: Vec<u64>,
}

#[inline]
fn split(i: usize) -> (usize, u64) {
    (i >> 6, 1u64 << (i & 63))
}

impl BitSet {
    pub fn new(nbits: usize) -> Self {
        BitSet {
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_iter_with_capacity(nbits: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(nbits);
        for i in items {
            s.insert(i);
        }
        s
    }

    /// Number of bits this set can hold.
    pub fn capacity(&self) -> usize {
        self.words.len() * 64
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = split(i);
        self.words.get(w).is_some_and(|x| x & b != 0)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        let (w, b) = split(i);
        self.words[w] |= b;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        let (w, b) = split(i);
        if let Some(x) = self.words.get_mut(w) {
            *x &= !b;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        let (w, b) = split(i);
        self.words[w] ^= b;
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_with(&mut self, other: &BitSet) {
        let n = other.words.len();
        for (i, a) in self.words.iter_mut().enumerate() {
            *a &= if i < n { other.words[i] } else { 0 };
        }
    }

    pub fn and_not_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn or_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Equality of contents, ignoring differences in capacity.
    pub fn same_bits(&self, other: &BitSet) -> bool {
        let (a, b) = (&self.words, &other.words);
        (0..a.len().max(b.len()))
            .all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Rank over GF(2) of a list of rows. The rows are consumed by the elimination.
pub fn gf2_rank(mut rows: Vec<BitSet>) -> usize {
    let mut rank = 0;
    let nwords = rows.iter().map(|r| r.words.len()).max().unwrap_or(0);
    for w in 0..nwords {
        loop {
            // pick any remaining row with a bit set in word w, lowest bit first
            let mut pivot: Option<(usize, u64)> = None;
            for (i, r) in rows.iter().enumerate().skip(rank) {
                let x = r.words.get(w).copied().unwrap_or(0);
                if x != 0 {
                    let bit = x & x.wrapping_neg();
                    if pivot.is_none_or(|(_, b)| bit < b) {
                        pivot = Some((i, bit));
                    }
                }
            }
            let Some((p, bit)) = pivot else { break };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let prow = &head[rank];
            for r in tail.iter_mut() {
                if r.words.get(w).is_some_and(|x| x & bit != 0) {
                    r.xor_with(prow);
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Rank over GF(2) of rows packed in single machine words.
pub fn gf2_rank_u64(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let x = rows[i];
        if x == 0 {
            continue;
        }
        let low = x & x.wrapping_neg();
        rank += 1;
        for r in rows[i + 1..].iter_mut() {
            if *r & low != 0 {
                *r ^= x;
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_and_len() {
        let s = BitSet::from_iter_with_capacity(200, [0, 63, 64, 130, 199]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(s.len(), 5);
        assert!(s.contains(130));
        assert!(!s.contains(131));
        assert!(!s.contains(10_000));
    }

    #[test]
    fn rank_small() {
        let a = BitSet::from_iter_with_capacity(70, [0, 1, 65]);
        let b = BitSet::from_iter_with_capacity(70, [1, 65]);
        let c = BitSet::from_iter_with_capacity(70, [0]);
        assert_eq!(gf2_rank(vec![a.clone(), b.clone(), c]), 2);
        assert_eq!(gf2_rank(vec![a, b]), 2);
        assert_eq!(gf2_rank(vec![]), 0);
        assert_eq!(gf2_rank_u64(&mut [0b11, 0b11, 0b01]), 2);
        assert_eq!(gf2_rank_u64(&mut [0b100, 0b010, 0b001, 0b111]), 3);
    }

    #[test]
    fn rank_matches_word_packed_version() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let nrows = rng.gen_range(0..12);
            let mut packed: Vec<u64> = (0..nrows).map(|_| rng.gen::<u64>() & 0xfff).collect();
            let rows: Vec<BitSet> = packed
                .iter()
                .map(|&x| BitSet::from_iter_with_capacity(64, (0..12).filter(|b| x >> b & 1 == 1)))
                .collect();
            assert_eq!(gf2_rank(rows), gf2_rank_u64(&mut packed));
        }
    }
}
