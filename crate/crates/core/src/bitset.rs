/// Fixed-width bitset used by the set-cover search.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i >> 6] >> (i & 63) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn and_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `|self ∩ mask|` is zero or `self ∩ mask ⊆ other`.
    #[inline]
    pub fn masked_subset(&self, other: &BitSet, mask: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&mask.words)
            .all(|((a, b), m)| a & m & !b == 0)
    }

    #[inline]
    pub fn masked_eq(&self, other: &BitSet, mask: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&mask.words)
            .all(|((a, b), m)| (a ^ b) & m == 0)
    }

    #[inline]
    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }



    pub fn masked_union_with(&mut self, other: &BitSet, mask: &BitSet) {
        for ((a, b), m) in self.words.iter_mut().zip(&other.words).zip(&mask.words) {
            *a |= b & m;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }


    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = BitSet::new(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        let mut b = BitSet::new(130);
        b.insert(64);
        assert_eq!(a.and_count(&b), 1);
        let full = BitSet::full(130);
        assert!(b.masked_subset(&a, &full));
        assert!(!a.masked_subset(&b, &full));
        a.difference_with(&b);
        assert_eq!(a.count(), 2);
        assert!(!a.intersects(&b));
    }
}
