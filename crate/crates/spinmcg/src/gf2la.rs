//! Linear algebra over the two-element field.
//!
//! Vectors are bit-packed into `u64` words, addition is XOR. Subspaces are
//! always stored in reduced echelon form so that equal subspaces have equal
//! representations.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("subspace is not contained in the ambient space (basis vector {0} escapes)")]
    NotASubspace(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector in `F_2^len`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; words_for(len)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from a list of set positions; repeated positions cancel.
    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
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
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// XOR restricted to words at index `from_word` and beyond.
    fn xor_from(&mut self, other: &BitVec, from_word: usize) {
        for (a, b) in self.words[from_word..].iter_mut().zip(&other.words[from_word..]) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set position.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from_word(0)
    }

    fn first_one_from_word(&self, start: usize) -> Option<usize> {
        self.words[start..]
            .iter()
            .position(|&w| w != 0)
            .map(|k| (start + k) * WORD + self.words[start + k].trailing_zeros() as usize)
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
                Some(k * WORD + t)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// A dense matrix over `F_2`, stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols, data: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Panics if the rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        F2Matrix { rows: rows.len(), cols, data: rows.iter().map(|r| BitVec::from_bits(r)).collect() }
    }

    pub fn from_bitvecs(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        F2Matrix { rows: rows.len(), cols, data: rows }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols);
        let mut out = BitVec::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        out
    }
}

/// Incremental row echelon form.
///
/// Each stored row has a distinct leading (lowest) position. Rows may carry a
/// companion vector recording which inserted vectors were combined, which is
/// how kernels of large maps are extracted without forming a transpose.
pub struct Echelon {
    len: usize,
    rows: Vec<BitVec>,
    tags: Vec<BitVec>,
    pivot_of: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon { len, rows: Vec::new(), tags: Vec::new(), pivot_of: vec![None; len] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_tail(&self, v: &mut BitVec, mut tag: Option<&mut BitVec>, mut from: usize) {
        loop {
            let Some(p) = next_one_at_or_after(v, from) else { return };
            if let Some(k) = self.pivot_of[p] {
                v.xor_from(&self.rows[k], p / WORD);
                if let Some(t) = tag.as_deref_mut() {
                    t.xor_assign(&self.tags[k]);
                }
            }
            from = p + 1;
            if from >= self.len {
                return;
            }
        }
    }

    /// Residue of `v` after reduction; zero iff `v` lies in the span.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        self.reduce_tail(&mut v, None, 0);
        v
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true when it was independent of the stored rows.
    pub fn insert(&mut self, v: BitVec) -> bool {
        self.insert_tagged(v, BitVec::zeros(0)).is_none()
    }

    /// Inserts `v` with a tag. When `v` reduces to zero the combined tag is
    /// returned: it records a linear relation among inserted vectors.
    pub fn insert_tagged(&mut self, mut v: BitVec, mut tag: BitVec) -> Option<BitVec> {
        assert_eq!(v.len(), self.len);
        // Tagged and untagged insertions must not be mixed in one echelon.
        if tag.is_empty() {
            self.reduce_tail(&mut v, None, 0);
        } else {
            self.reduce_tail(&mut v, Some(&mut tag), 0);
        }
        match v.first_one() {
            None => Some(tag),
            Some(p) => {
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push(v);
                self.tags.push(tag);
                None
            }
        }
    }

    /// The stored rows, as a canonical reduced echelon subspace.
    pub fn to_subspace(&self) -> F2Subspace {
        F2Subspace::span(self.len, self.rows.iter().cloned())
    }
}

fn next_one_at_or_after(v: &BitVec, from: usize) -> Option<usize> {
    if from >= v.len {
        return None;
    }
    let w = from / WORD;
    let masked = v.words[w] & (!0u64 << (from % WORD));
    if masked != 0 {
        return Some(w * WORD + masked.trailing_zeros() as usize);
    }
    if w + 1 < v.words.len() {
        v.first_one_from_word(w + 1)
    } else {
        None
    }
}

/// A subspace of `F_2^ambient_dim` in canonical reduced echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Subspace {
    ambient_dim: usize,
    basis: Vec<BitVec>,
}

impl F2Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        F2Subspace { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        F2Subspace { ambient_dim, basis: (0..ambient_dim).map(|i| BitVec::unit(ambient_dim, i)).collect() }
    }

    /// Span of arbitrary vectors, canonicalized.
    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = BitVec>) -> Self {
        let mut rows: Vec<BitVec> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for mut v in vectors {
            assert_eq!(v.len(), ambient_dim);
            for (row, &p) in rows.iter().zip(&pivots) {
                if v.get(p) {
                    v.xor_assign(row);
                }
            }
            if let Some(p) = v.first_one() {
                // Clear the new pivot from earlier rows.
                for row in rows.iter_mut() {
                    if row.get(p) {
                        row.xor_assign(&v);
                    }
                }
                rows.push(v);
                pivots.push(p);
            }
        }
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&k| pivots[k]);
        let basis = order.into_iter().map(|k| rows[k].clone()).collect();
        F2Subspace { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.basis.iter().map(|b| b.first_one().expect("nonzero basis vector"))
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.residue(v).is_zero()
    }

    /// Reduction of `v` modulo the subspace.
    pub fn residue(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (b, p) in self.basis.iter().zip(self.pivots().collect::<Vec<_>>()) {
            if v.get(p) {
                v.xor_assign(b);
            }
        }
        v
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let mut coords = BitVec::zeros(self.dim());
        let mut r = v.clone();
        for (k, (b, p)) in self.basis.iter().zip(self.pivots().collect::<Vec<_>>()).enumerate() {
            if r.get(p) {
                r.xor_assign(b);
                coords.set(k, true);
            }
        }
        r.is_zero().then_some(coords)
    }

    pub fn sum(&self, other: &F2Subspace) -> F2Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        F2Subspace::span(self.ambient_dim, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection_dim(&self, other: &F2Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn is_subspace_of(&self, other: &F2Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }
}

pub fn rank(m: &F2Matrix) -> usize {
    let mut e = Echelon::new(m.cols);
    m.data.iter().filter(|r| e.insert((*r).clone())).count()
}

/// Right null space `{v : m v = 0}`.
pub fn kernel_basis(m: &F2Matrix) -> F2Subspace {
    let rref = F2Subspace::span(m.cols, m.data.iter().cloned());
    let pivots: Vec<usize> = rref.pivots().collect();
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..m.cols).filter(|&c| !is_pivot[c]).map(|free| {
        let mut v = BitVec::unit(m.cols, free);
        for (row, &p) in rref.basis.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        v
    });
    F2Subspace::span(m.cols, vectors)
}

/// Column space.
pub fn image_basis(m: &F2Matrix) -> F2Subspace {
    let t = m.transpose();
    F2Subspace::span(m.rows, t.data)
}

pub fn quotient_dim(sub: &F2Subspace, ambient: &F2Subspace) -> Result<usize, LinAlgError> {
    if sub.ambient_dim != ambient.ambient_dim {
        return Err(LinAlgError::DimensionMismatch { expected: ambient.ambient_dim, got: sub.ambient_dim });
    }
    if let Some(k) = sub.basis.iter().position(|b| !ambient.contains(b)) {
        return Err(LinAlgError::NotASubspace(k));
    }
    Ok(ambient.dim() - sub.dim())
}

/// Kernel of the linear map sending the `i`-th unit vector to `images[i]`.
///
/// Returned vectors live in `F_2^images.len()`; they are independent and
/// their number is `images.len() - rank`.
pub fn kernel_of_images(codomain_dim: usize, images: &[BitVec]) -> Vec<BitVec> {
    let n = images.len();
    let mut e = Echelon::new(codomain_dim);
    let mut kernel = Vec::new();
    for (i, img) in images.iter().enumerate() {
        if let Some(rel) = e.insert_tagged(img.clone(), BitVec::unit(n, i)) {
            kernel.push(rel);
        }
    }
    kernel
}

/// Rank of a family of vectors.
pub fn rank_of(len: usize, vectors: impl IntoIterator<Item = BitVec>) -> usize {
    let mut e = Echelon::new(len);
    vectors.into_iter().filter(|v| e.insert(v.clone())).count()
}
