//! Fixed-length bitsets over label codes.

use crate::label::Code;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabelBits {
    words: Vec<u64>,
    len: usize,
}

impl LabelBits {
    pub fn empty(len: usize) -> Self {
        LabelBits { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut b = LabelBits { words: vec![!0; len.div_ceil(64)], len };
        b.trim();
        b
    }

    fn trim(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when the universe is empty (not when no bit is set; see `is_clear`).
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn insert(&mut self, c: Code) {
        let c = c as usize;
        self.words[c >> 6] |= 1 << (c & 63);
    }

    #[inline]
    pub fn remove(&mut self, c: Code) {
        let c = c as usize;
        self.words[c >> 6] &= !(1 << (c & 63));
    }

    #[inline]
    pub fn contains(&self, c: Code) -> bool {
        let c = c as usize;
        self.words[c >> 6] >> (c & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &LabelBits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection_count(&self, other: &LabelBits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The `k`-th set bit in increasing order.
    pub fn nth_one(&self, mut k: usize) -> Option<Code> {
        for (wi, &w) in self.words.iter().enumerate() {
            let n = w.count_ones() as usize;
            if k < n {
                let mut w = w;
                for _ in 0..k {
                    w &= w - 1;
                }
                return Some((wi * 64 + w.trailing_zeros() as usize) as Code);
            }
            k -= n;
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = Code> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi * 64 + t) as Code)
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_is_trimmed() {
        let b = LabelBits::full(4);
        assert_eq!(b.count(), 4);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(LabelBits::full(256).count(), 256);
    }

    #[test]
    fn nth_one_walks_in_order() {
        let mut b = LabelBits::empty(200);
        for c in [3, 64, 70, 199] {
            b.insert(c);
        }
        let all: Vec<_> = (0..5).map(|k| b.nth_one(k)).collect();
        assert_eq!(all, vec![Some(3), Some(64), Some(70), Some(199), None]);
        b.remove(64);
        assert!(!b.contains(64));
        assert_eq!(b.count(), 3);
    }
}
