//! Fixed-width bit vector over `[0, len)` with cyclic rotation, the storage
//! behind residue sets and sum-sets.

use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet {
            len,
            words: vec![!0; len.div_ceil(WORD)],
        };
        s.mask_tail();
        s
    }

    pub fn from_iter_in(len: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// ORs `self` rotated by `k` into `dst`: bit `i` lands on `(i + k) mod len`.
    pub fn or_rotated_into(&self, k: usize, dst: &mut BitSet) {
        debug_assert_eq!(self.len, dst.len);
        let n = self.len;
        let k = k % n;
        if k == 0 {
            dst.union_with(self);
            return;
        }
        // [0, n-k) moves up by k, [n-k, n) wraps down by n-k.
        or_shl(&self.words, k, &mut dst.words);
        or_shr(&self.words, n - k, &mut dst.words);
        dst.mask_tail();
    }

    pub fn rotated(&self, k: usize) -> BitSet {
        let mut out = BitSet::new(self.len);
        self.or_rotated_into(k, &mut out);
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

fn or_shl(src: &[u64], k: usize, dst: &mut [u64]) {
    let (wo, bo) = (k / WORD, k % WORD);
    for j in 0..src.len() {
        let v = src[j];
        if v == 0 || j + wo >= dst.len() {
            continue;
        }
        dst[j + wo] |= v << bo;
        if bo != 0 && j + wo + 1 < dst.len() {
            dst[j + wo + 1] |= v >> (WORD - bo);
        }
    }
}

fn or_shr(src: &[u64], s: usize, dst: &mut [u64]) {
    let (wo, bo) = (s / WORD, s % WORD);
    for (j, d) in dst.iter_mut().enumerate() {
        let lo = match src.get(j + wo) {
            Some(&v) => v >> bo,
            None => break,
        };
        let hi = if bo != 0 {
            src.get(j + wo + 1).map_or(0, |&v| v << (WORD - bo))
        } else {
            0
        };
        *d |= lo | hi;
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
