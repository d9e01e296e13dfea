use std::sync::atomic::{AtomicU64, Ordering};

/// Fixed-size bitset whose bits can be set concurrently through `&self`.
///
/// Bits only ever go from 0 to 1, so relaxed ordering suffices; readers
/// synchronize through the thread pool join that ends each BFS layer.
#[derive(Debug)]
pub struct BitSet {
    words: Vec<AtomicU64>,
    len: u64,
}

impl BitSet {
    pub fn new(len: u64) -> Self {
        let words = (0..len.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
        BitSet { words, len }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Sets bit `i`; returns true if it was previously clear.
    #[inline]
    pub fn insert(&self, i: u64) -> bool {
        let mask = 1u64 << (i % 64);
        self.words[(i / 64) as usize].fetch_or(mask, Ordering::Relaxed) & mask == 0
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        self.words[(i / 64) as usize].load(Ordering::Relaxed) & (1u64 << (i % 64)) != 0
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.load(Ordering::Relaxed).count_ones() as u64).sum()
    }

    /// Indices of clear bits, ascending.
    pub fn zeros(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).filter(|&i| !self.contains(i))
    }

    /// True if every bit set here is also set in `other`.
    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a.load(Ordering::Relaxed) & !b.load(Ordering::Relaxed) == 0)
    }
}

impl Clone for BitSet {
    fn clone(&self) -> Self {
        BitSet { words: self.words.iter().map(|w| AtomicU64::new(w.load(Ordering::Relaxed))).collect(), len: self.len }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_count() {
        let b = BitSet::new(130);
        assert!(b.insert(0));
        assert!(b.insert(129));
        assert!(!b.insert(129));
        assert!(b.contains(129) && !b.contains(128));
        assert_eq!(b.count_ones(), 2);
        assert_eq!(b.zeros().count(), 128);
        let c = b.clone();
        c.insert(5);
        assert!(b.is_subset(&c));
        assert!(!c.is_subset(&b));
    }
}
