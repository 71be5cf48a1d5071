use std::cmp::Ordering;

/// Fixed-width set of element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = u32>) -> Self {
        let mut b = Bitset::new(len);
        for i in indices {
            b.insert(i);
        }
        b
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn insert(&mut self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        let (w, b) = ((i / 64) as usize, i % 64);
        self.words[w] & (1 << b) != 0
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Lexicographic order on the ascending index sequences.
    pub fn lex_cmp(&self, other: &Bitset) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl std::fmt::Debug for Bitset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_matches_sorted_vectors() {
        let cases: [&[u32]; 5] = [&[0], &[0, 1], &[0, 2], &[0, 1, 70], &[1]];
        for a in cases {
            for b in cases {
                let x = Bitset::from_indices(128, a.iter().copied());
                let y = Bitset::from_indices(128, b.iter().copied());
                assert_eq!(x.lex_cmp(&y), a.cmp(b), "{a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn iteration_and_subset() {
        let x = Bitset::from_indices(200, [3, 64, 199]);
        assert_eq!(x.to_vec(), vec![3, 64, 199]);
        assert_eq!(x.count(), 3);
        let mut y = x.clone();
        y.insert(5);
        assert!(x.is_subset(&y));
        assert!(!y.is_subset(&x));
    }
}
