//! Bit-packed vectors and matrices over GF(2).
//!
//! Every higher module runs its linear algebra on [`BitVector`] and
//! [`BitMatrix`]. Bits are packed little-endian into `u64` words; padding
//! bits past `len` are always zero, so word-level equality, hashing and
//! popcounts are exact.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Word ranges of at most 1024 bits; products sweep one range at a time so the
/// slices they revisit stay in cache.
fn chunks(words: usize) -> impl Iterator<Item = (usize, usize)> {
    const CHUNK: usize = 16;
    (0..words).step_by(CHUNK).map(move |lo| (lo, (lo + CHUNK).min(words)))
}

/// A vector in GF(2)^len.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// The unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for w in &mut v.words {
            *w = !0;
        }
        v.clear_padding();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from a slice of 0/1 values; any nonzero entry is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones exactly at `indices`.
    pub fn from_support<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask` (bit i of the mask is coordinate i).
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD_BITS, "mask vectors hold at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = mask;
            v.clear_padding();
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// |supp(v)|.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Standard GF(2) inner product: parity of |supp(self) ∩ supp(other)|.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// self += other over GF(2).
    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Entries of self that are not in other.
    pub fn and_not(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of the ones, increasing.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    /// The vector with coordinate `index` deleted; later coordinates shift down by one.
    pub fn delete(&self, index: usize) -> Self {
        assert!(index < self.len);
        Self::from_support(
            self.len - 1,
            self.support()
                .filter(|&i| i != index)
                .map(|i| if i > index { i - 1 } else { i }),
        )
    }

    /// The vector restricted to `coords`, in the given order.
    pub fn select(&self, coords: &[usize]) -> Self {
        Self::from_support(
            coords.len(),
            coords.iter().enumerate().filter(|(_, &c)| self.get(c)).map(|(i, _)| i),
        )
    }

    /// The vector with one extra trailing coordinate.
    pub fn push(&self, bit: bool) -> Self {
        let mut out = Self::zeros(self.len + 1);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        if bit {
            out.set(self.len, true);
        }
        out
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    /// Reduced row echelon form with zero rows removed.
    pub reduced: BitMatrix,
    /// Pivot column of each row of `reduced`, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// A matrix with no rows and `cols` columns.
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    /// Stacks rows that all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some((row, v)) = rows.iter().enumerate().find(|(_, v)| v.len() != cols) {
            return Err(Error::RaggedRows {
                row,
                expected: cols,
                found: v.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix from nested 0/1 slices; all rows must have equal length.
    pub fn from_bits<R: AsRef<[u8]>>(cols: usize, rows: &[R]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| BitVector::from_bits(r.as_ref())).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVector {
        &mut self.rows[i]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.support() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows() == self.cols && *self == self.transpose()
    }

    /// Reduced row echelon form.
    ///
    /// Pivots are chosen as the leftmost nonzero column with the topmost
    /// available row, which makes the result canonical for the row space.
    pub fn rref(&self) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(next, found);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        rows.truncate(next);
        Echelon {
            reduced: Self { cols: self.cols, rows },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        // Incremental XOR basis keyed by leading bit; avoids cloning the full matrix twice.
        let mut basis: Vec<BitVector> = Vec::new();
        let mut leads: Vec<usize> = Vec::new();
        for row in &self.rows {
            let mut v = row.clone();
            for (b, &lead) in basis.iter().zip(&leads) {
                if v.get(lead) {
                    v.xor_assign(b);
                }
            }
            if let Some(lead) = v.first_one() {
                basis.push(v);
                leads.push(lead);
            }
        }
        basis.len()
    }

    /// Basis of the null space {x : Mx = 0}, in reduced echelon form.
    pub fn kernel_basis(&self) -> Self {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut out = Vec::with_capacity(self.cols - ech.rank());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = BitVector::unit(self.cols, free);
            for (row, &p) in ech.reduced.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    x.set(p, true);
                }
            }
            out.push(x);
        }
        // The free-variable basis is already independent; canonicalize for stable output.
        Self {
            cols: self.cols,
            rows: out,
        }
        .rref()
        .reduced
    }

    /// A Aᵀ over GF(2).
    pub fn gram(&self) -> Self {
        let k = self.rows();
        let mut g = Self::zeros(k, k);
        for (lo, hi) in chunks(words_for(self.cols)) {
            for i in 0..k {
                let a = &self.rows[i].words[lo..hi];
                for j in i..k {
                    let b = &self.rows[j].words[lo..hi];
                    let parity = a.iter().zip(b).fold(0, |acc, (x, y)| acc ^ (x & y)).count_ones() & 1;
                    g.rows[i].words[j / WORD_BITS] ^= u64::from(parity) << (j % WORD_BITS);
                }
            }
        }
        for i in 0..k {
            for j in 0..i {
                let bit = g.rows[j].get(i);
                g.rows[i].set(j, bit);
            }
        }
        g
    }

    /// Mx over GF(2).
    pub fn apply(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok(BitVector::from_support(
            self.rows(),
            self.rows.iter().enumerate().filter(|(_, r)| r.dot(x)).map(|(i, _)| i),
        ))
    }

    /// Matrix product self · other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows(),
            });
        }
        let mut rows = vec![BitVector::zeros(other.cols); self.rows()];
        for (lo, hi) in chunks(words_for(other.cols)) {
            for (r, acc) in self.rows.iter().zip(rows.iter_mut()) {
                let acc = &mut acc.words[lo..hi];
                for j in r.support() {
                    for (a, b) in acc.iter_mut().zip(&other.rows[j].words[lo..hi]) {
                        *a ^= b;
                    }
                }
            }
        }
        Ok(Self { cols: other.cols, rows })
    }

    /// Linear combination Σ coeffs_i · row_i.
    pub fn combine(&self, coeffs: &BitVector) -> BitVector {
        debug_assert_eq!(coeffs.len(), self.rows());
        let mut acc = BitVector::zeros(self.cols);
        for i in coeffs.support() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Submatrix on the given rows and columns (in the given orders).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            cols: cols.len(),
            rows: rows.iter().map(|&r| self.rows[r].select(cols)).collect(),
        }
    }

    /// The column `j` as a vector of length `rows`.
    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_support(
            self.rows(),
            self.rows.iter().enumerate().filter(|(_, r)| r.get(j)).map(|(i, _)| i),
        )
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[u8]]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_bits(cols, rows).unwrap()
    }

    #[test]
    fn rref_triangular() {
        let e = m(&[&[1, 1], &[0, 1]]).rref();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.reduced, BitMatrix::identity(2));
    }

    #[test]
    fn rref_zero_matrix() {
        let e = BitMatrix::zeros(3, 3).rref();
        assert_eq!(e.rank(), 0);
        assert_eq!(e.reduced.rows(), 0);
    }

    #[test]
    fn rref_dependent_triple() {
        let e = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]).rref();
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.reduced, m(&[&[1, 0, 1], &[0, 1, 1]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(m(&[&[1, 1]]).kernel_basis(), m(&[&[1, 1]]));
        assert_eq!(BitMatrix::identity(3).kernel_basis().rows(), 0);
        assert_eq!(m(&[&[1, 1, 0], &[0, 1, 1]]).kernel_basis(), m(&[&[1, 1, 1]]));
    }

    #[test]
    fn gram_examples() {
        assert_eq!(BitMatrix::identity(2).gram(), BitMatrix::identity(2));
        assert_eq!(m(&[&[1, 1, 0], &[0, 1, 1]]).gram(), m(&[&[0, 1], &[1, 0]]));
        assert_eq!(m(&[&[1, 1, 1]]).gram(), m(&[&[1]]));
    }

    #[test]
    fn apply_examples() {
        let x = BitVector::from_bits(&[1, 0]);
        assert_eq!(BitMatrix::identity(2).apply(&x).unwrap(), x);
        let y = BitVector::from_bits(&[1, 1]);
        assert_eq!(m(&[&[1, 1]]).apply(&y).unwrap(), BitVector::from_bits(&[0]));
        let q = m(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let v = BitVector::from_bits(&[1, 1, 0]);
        assert_eq!(q.apply(&v).unwrap(), v);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let err = BitMatrix::identity(2).apply(&BitVector::zeros(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, found: 3 }));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = BitMatrix::from_rows(2, vec![BitVector::zeros(2), BitVector::zeros(3)]).unwrap_err();
        assert!(matches!(err, Error::RaggedRows { row: 1, .. }));
    }

    #[test]
    fn padding_stays_clear_across_word_boundary() {
        let v = BitVector::ones(70);
        assert_eq!(v.weight(), 70);
        let w = v.delete(3);
        assert_eq!(w.len(), 69);
        assert_eq!(w.weight(), 69);
        assert_eq!(v.push(true).weight(), 71);
        assert_eq!(v.support().last(), Some(69));
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                BitMatrix::from_rows(c, rows.iter().map(|b| BitVector::from_bools(b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(a in arb_matrix(12, 12)) {
            let once = a.rref().reduced;
            prop_assert_eq!(once.rref().reduced, once);
        }

        #[test]
        fn rank_nullity(a in arb_matrix(64, 64)) {
            let r = a.rref().rank();
            prop_assert_eq!(r, a.transpose().rank());
            prop_assert_eq!(r, a.rank());
            let ker = a.kernel_basis();
            prop_assert_eq!(ker.rows() + r, a.cols());
            for x in ker.row_vectors() {
                prop_assert!(a.apply(x).unwrap().is_zero());
            }
        }

        #[test]
        fn gram_symmetric_with_parity_diagonal(a in arb_matrix(16, 80)) {
            let g = a.gram();
            prop_assert!(g.is_symmetric());
            for i in 0..a.rows() {
                prop_assert_eq!(g.get(i, i), a.row(i).weight() % 2 == 1);
            }
            prop_assert_eq!(g, a.mul(&a.transpose()).unwrap());
        }

        #[test]
        fn products_agree_across_word_chunks(a in arb_matrix(6, 2200), seed in any::<u64>()) {
            let g = a.gram();
            for i in 0..a.rows() {
                for j in 0..a.rows() {
                    prop_assert_eq!(g.get(i, j), a.row(i).dot(a.row(j)));
                }
            }
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = BitMatrix::from_rows(
                a.rows(),
                (0..5).map(|_| BitVector::from_bools(&(0..a.rows()).map(|_| rng.gen()).collect::<Vec<_>>())).collect(),
            )
            .unwrap();
            let p = t.mul(&a).unwrap();
            for (row, coeffs) in p.row_vectors().iter().zip(t.row_vectors()) {
                prop_assert_eq!(row, &a.combine(coeffs));
            }
        }

        #[test]
        fn rref_preserves_row_space(a in arb_matrix(10, 10)) {
            let e = a.rref();
            // every original row reduces to zero against the echelon basis
            for row in a.row_vectors() {
                let mut v = row.clone();
                for (b, &p) in e.reduced.row_vectors().iter().zip(&e.pivots) {
                    if v.get(p) { v.xor_assign(b); }
                }
                prop_assert!(v.is_zero());
            }
            prop_assert!(e.pivots.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
