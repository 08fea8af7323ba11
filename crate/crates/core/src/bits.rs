//! Dense GF(2) vectors and Gaussian elimination.
//!
//! Complexes handled here have at most a few thousand cells, so everything is
//! dense `u64` words. Addition is XOR.

use std::fmt;

/// A vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Adds the unit vector `e_i`.
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range ({})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    /// Dot product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Incremental row-echelon basis of a subspace of GF(2)^n.
///
/// Every inserted vector carries a combination tag recording which of the
/// original generators it is a sum of, so membership queries can also return
/// a witness.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    n_generators: usize,
    /// (pivot, reduced vector, combination of generators)
    rows: Vec<(usize, BitVec, BitVec)>,
}

impl EchelonBasis {
    /// `capacity` bounds the number of generators that will be inserted.
    pub fn new(dim: usize, capacity: usize) -> Self {
        Self { dim, n_generators: capacity, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut BitVec, combo: &mut BitVec) {
        for (pivot, row, row_combo) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
                combo.xor_assign(row_combo);
            }
        }
    }

    /// Inserts generator number `tag`; returns `true` if it was independent.
    pub fn insert(&mut self, tag: usize, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        assert!(tag < self.n_generators, "generator tag out of range");
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.n_generators);
        combo.flip(tag);
        self.reduce(&mut v, &mut combo);
        match v.first_one() {
            None => false,
            Some(pivot) => {
                // keep rows fully reduced on pivot columns
                for (_, row, row_combo) in &mut self.rows {
                    if row.get(pivot) {
                        row.xor_assign(&v);
                        row_combo.xor_assign(&combo);
                    }
                }
                self.rows.push((pivot, v, combo));
                true
            }
        }
    }

    /// Like [`insert`](Self::insert), but when `v` is dependent returns the
    /// relation: a set of generator tags (including `tag`) summing to zero.
    pub fn insert_or_relation(&mut self, tag: usize, v: &BitVec) -> Option<BitVec> {
        let mut r = v.clone();
        let mut combo = BitVec::zeros(self.n_generators);
        combo.flip(tag);
        self.reduce(&mut r, &mut combo);
        if r.is_zero() {
            Some(combo)
        } else {
            self.insert(tag, v);
            None
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.express(v).is_some()
    }

    /// Writes `v` as a sum of inserted generators, if possible.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.n_generators);
        self.reduce(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }
}

/// Rank of a set of vectors.
pub fn rank(vectors: &[BitVec]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut basis = EchelonBasis::new(first.len(), vectors.len());
    vectors.iter().enumerate().filter(|(k, v)| basis.insert(*k, v)).count()
}

/// Solves `sum_k x_k * columns[k] = target`, returning one solution.
pub fn solve(columns: &[BitVec], target: &BitVec) -> Option<BitVec> {
    let mut basis = EchelonBasis::new(target.len(), columns.len().max(1));
    for (k, c) in columns.iter().enumerate() {
        basis.insert(k, c);
    }
    if columns.is_empty() {
        return target.is_zero().then(|| BitVec::zeros(0));
    }
    basis.express(target)
}
