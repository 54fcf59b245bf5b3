//! Finite integer domains as bitsets over `[offset, offset + 64 * words)`.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    offset: i64,
    bits: Vec<u64>,
    size: usize,
}

impl Domain {
    /// `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        if lo > hi {
            return Self::empty();
        }
        let width = (hi - lo + 1) as usize;
        let mut bits = vec![u64::MAX; width.div_ceil(64)];
        if !width.is_multiple_of(64) {
            *bits.last_mut().unwrap() = (1u64 << (width % 64)) - 1;
        }
        Self {
            offset: lo,
            bits,
            size: width,
        }
    }

    pub fn boolean() -> Self {
        Self::interval(0, 1)
    }

    pub fn empty() -> Self {
        Self {
            offset: 0,
            bits: Vec::new(),
            size: 0,
        }
    }

    pub fn from_values(values: &[i64]) -> Self {
        let (Some(&lo), Some(&hi)) = (values.iter().min(), values.iter().max()) else {
            return Self::empty();
        };
        Self::interval(lo, hi).retain(|v| values.contains(&v))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_fixed(&self) -> bool {
        self.size == 1
    }

    pub fn value(&self) -> Option<i64> {
        if self.is_fixed() {
            self.min()
        } else {
            None
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        if v < self.offset {
            return false;
        }
        let idx = (v - self.offset) as u64;
        let word = (idx / 64) as usize;
        word < self.bits.len() && self.bits[word] >> (idx % 64) & 1 == 1
    }

    pub fn min(&self) -> Option<i64> {
        self.bits.iter().enumerate().find_map(|(w, &b)| {
            (b != 0).then(|| self.offset + 64 * w as i64 + b.trailing_zeros() as i64)
        })
    }

    pub fn max(&self) -> Option<i64> {
        self.bits.iter().enumerate().rev().find_map(|(w, &b)| {
            (b != 0).then(|| self.offset + 64 * w as i64 + 63 - b.leading_zeros() as i64)
        })
    }

    pub fn values(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.size);
        for (w, &b) in self.bits.iter().enumerate() {
            let mut b = b;
            while b != 0 {
                out.push(self.offset + 64 * w as i64 + b.trailing_zeros() as i64);
                b &= b - 1;
            }
        }
        out
    }

    pub fn retain(&self, mut keep: impl FnMut(i64) -> bool) -> Self {
        let mut out = self.clone();
        for v in self.values() {
            if !keep(v) {
                let idx = (v - self.offset) as usize;
                out.bits[idx / 64] &= !(1u64 << (idx % 64));
                out.size -= 1;
            }
        }
        out
    }

    pub fn without(&self, v: i64) -> Self {
        self.retain(|x| x != v)
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        self.retain(|x| lo <= x && x <= hi)
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.values()).finish()
    }
}
