//! Dense bitset over `0..len` with word-level shifted OR, sized for sumset
//! sieves: `acc |= acc << k` ranges over all sums with one more summand.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn new(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; (len + 63) / 64],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        if i >= self.len {
            return false;
        }
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `self |= other << shift`, truncated at `self.len`. Operands may alias
    /// only through a prior clone; Rust's borrows enforce that.
    pub fn or_shifted(&mut self, other: &BitVec, shift: usize) {
        let (wshift, bshift) = (shift / 64, shift % 64);
        let n = self.words.len();
        if bshift == 0 {
            for i in (wshift..n).rev() {
                if let Some(&w) = other.words.get(i - wshift) {
                    self.words[i] |= w;
                }
            }
        } else {
            for i in (wshift..n).rev() {
                let lo = other.words.get(i - wshift).copied().unwrap_or(0);
                let hi = if i - wshift > 0 {
                    other.words.get(i - wshift - 1).copied().unwrap_or(0)
                } else {
                    0
                };
                self.words[i] |= (lo << bshift) | (hi >> (64 - bshift));
            }
        }
        self.mask_tail();
    }

    /// Trailing bits beyond `len` in the last word must stay zero so that
    /// `count_ones` stays truthful.
    fn mask_tail(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }
}
