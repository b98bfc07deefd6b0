//! Bit-packed linear algebra over the two-element field.
//!
//! Vectors pack coordinate `i` into bit `i % 64` of word `i / 64`. Elimination
//! is word-parallel XOR with deterministic pivoting: for each column from the
//! left, the lowest-index remaining row with a one in that column is the pivot.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("boundary vector {index} does not lie in the span of the cycles")]
    BoundaryNotInCycles { index: usize },
    #[error("vector is not in the span of the cycles")]
    NotACycle,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
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

    /// Builds a vector from the positions of its nonzero coordinates.
    /// Repeated positions cancel.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.flip(i);
        }
        v
    }

    /// Rebuilds a vector from raw words, clearing any bits past `len`.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut v = F2Vector { len, words };
        v.clear_tail();
        v
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn add_assign(&mut self, other: &F2Vector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    pub fn dot(&self, other: &F2Vector) -> bool {
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    fn clear_tail(&mut self) {
        let extra = self.words.len() * WORD_BITS - self.len;
        if extra > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> extra;
            }
        }
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            rows: vec![F2Vector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix {
            cols: n,
            rows: (0..n).map(|i| F2Vector::unit(n, i)).collect(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(F2Matrix { cols, rows })
    }

    /// Densifies a sparse row list: each row is the list of its nonzero columns.
    pub fn from_sparse_rows(cols: usize, rows: &[Vec<usize>]) -> Self {
        F2Matrix {
            cols,
            rows: rows
                .iter()
                .map(|r| F2Vector::from_support(cols, r.iter().copied()))
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        F2Matrix {
            cols,
            rows: rows.iter().map(|r| F2Vector::from_bits(r)).collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value)
    }

    pub fn push_row(&mut self, row: F2Vector) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `self · v`, where `v` has length `cols`.
    pub fn mul_vec(&self, v: &F2Vector) -> Result<F2Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(F2Vector::from_support(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(v))
                .map(|(i, _)| i),
        ))
    }

    /// Row vector times matrix: `v · self`, where `v` has length `rows`.
    pub fn vec_mul(&self, v: &F2Vector) -> Result<F2Vector, LinalgError> {
        if v.len() != self.rows.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows.len(),
                found: v.len(),
            });
        }
        let mut out = F2Vector::zeros(self.cols);
        for i in v.iter_ones() {
            out.add_assign(&self.rows[i]);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, LinalgError> {
        if self.cols != other.rows.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.vec_mul(r))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(F2Matrix {
            cols: other.cols,
            rows,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(F2Vector::is_zero)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.cols, self.rows.iter().cloned()).rank()
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.add_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        (
            F2Matrix {
                cols: self.cols,
                rows,
            },
            pivots,
        )
    }

    /// Basis of `{ v : self · v = 0 }`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let (reduced, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = F2Vector::unit(self.cols, free);
                for (r, &p) in pivots.iter().enumerate() {
                    if reduced.rows[r].get(free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = rhs`. Returns `Ok(None)` when the system is
    /// inconsistent.
    pub fn solve(&self, rhs: &F2Vector) -> Result<Option<F2Vector>, LinalgError> {
        if rhs.len() != self.rows.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows.len(),
                found: rhs.len(),
            });
        }
        let aug_cols = self.cols + 1;
        let augmented = F2Matrix {
            cols: aug_cols,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let mut a = F2Vector::from_words(aug_cols, r.words().to_vec());
                    a.set(self.cols, rhs.get(i));
                    a
                })
                .collect(),
        };
        let (reduced, pivots) = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = F2Vector::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if reduced.rows[r].get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally built echelon basis of a subspace. Each stored row carries a
/// tag recording which inserted vectors it is a combination of.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<F2Vector>,
    pivots: Vec<usize>,
    tags: Vec<F2Vector>,
    inserted: usize,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            tags: Vec::new(),
            inserted: 0,
        }
    }

    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = F2Vector>) -> Self {
        let mut e = Echelon::new(dim);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the stored rows; returns the residue and the
    /// combination of inserted vectors that was subtracted, indexed by
    /// insertion order.
    pub fn reduce_tagged(&self, v: &F2Vector) -> (F2Vector, Vec<usize>) {
        let mut v = v.clone();
        let mut tag = F2Vector::zeros(self.inserted);
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tags) {
            if v.get(p) {
                v.add_assign(row);
                tag.add_assign(&F2Vector::from_words(self.inserted, t.words().to_vec()));
            }
        }
        (v, tag.iter_ones().collect())
    }

    pub fn reduce(&self, v: &F2Vector) -> F2Vector {
        let mut v = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v.get(p) {
                v.add_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &F2Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true when it enlarged the span.
    pub fn insert(&mut self, v: F2Vector) -> bool {
        assert_eq!(v.len(), self.dim, "echelon dimension mismatch");
        let index = self.inserted;
        self.inserted += 1;
        let mut tag = F2Vector::unit(self.inserted, index);
        let mut v = v;
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tags) {
            if v.get(p) {
                v.add_assign(row);
                tag.add_assign(&F2Vector::from_words(self.inserted, t.words().to_vec()));
            }
        }
        match v.first_one() {
            Some(p) => {
                self.rows.push(v);
                self.pivots.push(p);
                self.tags.push(tag);
                true
            }
            None => false,
        }
    }
}

/// A basis of `span(cycles) / span(boundaries)` with a membership test.
#[derive(Clone, Debug)]
pub struct Subquotient {
    boundaries: Echelon,
    full: Echelon,
    basis: Vec<F2Vector>,
    boundary_rank: usize,
}

impl Subquotient {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Representatives, drawn from the supplied cycle list in its order.
    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn boundary_rank(&self) -> usize {
        self.boundary_rank
    }

    /// True when `v` represents the zero class.
    pub fn is_zero_class(&self, v: &F2Vector) -> bool {
        self.boundaries.contains(v)
    }

    /// Coordinates of the class of `v` in terms of [`Self::basis`].
    pub fn coordinates(&self, v: &F2Vector) -> Result<F2Vector, LinalgError> {
        let (residue, tag) = self.full.reduce_tagged(v);
        if !residue.is_zero() {
            return Err(LinalgError::NotACycle);
        }
        // Insertion order: boundary vectors first, then the basis.
        let offset = self.full.inserted - self.basis.len();
        Ok(F2Vector::from_support(
            self.basis.len(),
            tag.into_iter().filter(|&i| i >= offset).map(|i| i - offset),
        ))
    }
}

/// Computes `span(cycles) / span(boundaries)`.
///
/// Basis representatives are chosen greedily from `cycles` in order, so a
/// caller that lists preferred representatives first gets them back.
pub fn subquotient_basis(
    dim: usize,
    cycles: &[F2Vector],
    boundaries: &[F2Vector],
) -> Result<Subquotient, LinalgError> {
    for v in cycles.iter().chain(boundaries) {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
    }
    let cycle_span = Echelon::from_rows(dim, cycles.iter().cloned());
    if let Some(index) = boundaries.iter().position(|b| !cycle_span.contains(b)) {
        return Err(LinalgError::BoundaryNotInCycles { index });
    }
    let boundary_span = Echelon::from_rows(dim, boundaries.iter().cloned());
    // Only independent vectors are inserted into `full_clean`, so the last
    // `basis.len()` insertions are exactly the quotient representatives.
    let mut full_clean = Echelon::new(dim);
    for b in boundaries {
        if !full_clean.contains(b) {
            full_clean.insert(b.clone());
        }
    }
    let mut basis = Vec::new();
    for c in cycles {
        if !full_clean.contains(c) {
            full_clean.insert(c.clone());
            basis.push(c.clone());
        }
    }
    Ok(Subquotient {
        boundary_rank: boundary_span.rank(),
        boundaries: boundary_span,
        full: full_clean,
        basis,
    })
}

pub fn rank(m: &F2Matrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &F2Matrix) -> Vec<F2Vector> {
    m.kernel_basis()
}

pub fn solve(m: &F2Matrix, rhs: &F2Vector) -> Result<Option<F2Vector>, LinalgError> {
    m.solve(rhs)
}
