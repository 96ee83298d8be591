//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as runs of `u64` words, least significant bit first.
//! Bits past the logical width of a row or vector are always zero, so
//! whole-word comparisons and popcounts are exact.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Indicator vector of `positions`.
    pub fn from_support(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for p in positions {
            v.set(p, true);
        }
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

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Positions of the set bits, increasing.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD_BITS + b);
                w &= w - 1;
            }
        }
        out
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn intersects(&self, other: &BitVector) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
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

impl FromStr for BitVector {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                other => {
                    return Err(Gf2Error::Parse {
                        line: 1,
                        reason: format!("unexpected character {:?}", other as char),
                    })
                }
            }
        }
        Ok(v)
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Builds a matrix from row vectors that all have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Gf2Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        let idx = i * self.stride + j / WORD_BITS;
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.row(i).support()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// `row[dst] ^= row[src]`.
    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.row_support(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Copy of the block starting at `(row0, col0)` with the given shape.
    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> BitMatrix {
        assert!(
            row0 + rows <= self.rows && col0 + cols <= self.cols,
            "submatrix out of range"
        );
        let mut out = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if self.get(row0 + i, col0 + j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Keeps only the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (jj, &j) in columns.iter().enumerate() {
                if self.get(i, j) {
                    out.set(i, jj, true);
                }
            }
        }
        out
    }

    /// `(self | other)`; both sides need the same row count.
    pub fn hconcat(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                actual: other.rows,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in self.row_support(i) {
                out.set(i, j, true);
            }
            for j in other.row_support(i) {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }

    /// Stacks `other` under `self`.
    pub fn vconcat(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Product `self * otherᵀ`, i.e. entry (i, j) is `row_i(self) · row_j(other)`.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: other.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a = self.row_words(i);
            for j in 0..other.rows {
                let b = other.row_words(j);
                let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                if ones & 1 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivots are chosen leftmost-first with full back-substitution, so the
    /// result is the unique RREF of the row space. Zero rows sink to the bottom.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&i| m.get(i, col)) else {
                continue;
            };
            m.swap_rows(next, p);
            for i in 0..m.rows {
                if i != next && m.get(i, col) {
                    m.xor_rows(i, next);
                }
            }
            pivots.push(col);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than a full rref.
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&i| m.get(i, col)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.get(i, col) {
                    m.xor_rows(i, rank);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of `{x : self · xᵀ = 0}`, one basis vector per non-pivot column.
    ///
    /// Basis row `b` has a 1 in the `b`-th free column and zeros in every
    /// other free column, so the basis is systematic on the free columns.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let (r, pivots) = self.rref();
        let free = free_columns(self.cols, &pivots);
        let mut basis = BitMatrix::zeros(free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set(b, f, true);
            for (pi, &p) in pivots.iter().enumerate() {
                if r.get(pi, f) {
                    basis.set(b, p, true);
                }
            }
        }
        basis
    }

    pub fn mat_vec_mul(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let ones: u32 = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `v · self` for a row vector `v` of length `rows`.
    pub fn vec_mat_mul(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                actual: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.support() {
            for (a, b) in out.words.iter_mut().zip(self.row_words(i)) {
                *a ^= b;
            }
        }
        Ok(out)
    }

    /// XOR of the selected rows.
    pub fn row_sum<I>(&self, rows: I) -> Result<BitVector, Gf2Error>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut out = BitVector::zeros(self.cols);
        for i in rows {
            if i >= self.rows {
                return Err(Gf2Error::IndexOutOfRange {
                    index: i,
                    len: self.rows,
                });
            }
            for (a, b) in out.words.iter_mut().zip(self.row_words(i)) {
                *a ^= b;
            }
        }
        Ok(out)
    }
}

/// Complement of `pivots` in `0..cols`, increasing.
pub fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut it = pivots.iter().peekable();
    (0..cols)
        .filter(|c| {
            if it.peek() == Some(&c) {
                it.next();
                false
            } else {
                true
            }
        })
        .collect()
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        Ok(())
    }
}

/// Text format: a `rows cols` header line, then one line of `cols`
/// characters from `{0,1}` per row. Every line ends with `\n`.
impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl FromStr for BitMatrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines();
        let header = lines.next().ok_or(Gf2Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let dims: Vec<&str> = header.split(' ').collect();
        let parse_dim = |t: &str| {
            t.parse::<usize>().map_err(|e| Gf2Error::Parse {
                line: 1,
                reason: format!("bad dimension {t:?}: {e}"),
            })
        };
        if dims.len() != 2 {
            return Err(Gf2Error::Parse {
                line: 1,
                reason: format!("expected `rows cols`, got {header:?}"),
            });
        }
        let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            let line_no = i + 2;
            let line = lines.next().ok_or(Gf2Error::Parse {
                line: line_no,
                reason: format!("expected {rows} rows, found {i}"),
            })?;
            if line.len() != cols {
                return Err(Gf2Error::Parse {
                    line: line_no,
                    reason: format!("expected {cols} characters, found {}", line.len()),
                });
            }
            for (j, c) in line.bytes().enumerate() {
                match c {
                    b'0' => {}
                    b'1' => m.set(i, j, true),
                    other => {
                        return Err(Gf2Error::Parse {
                            line: line_no,
                            reason: format!("unexpected character {:?}", other as char),
                        })
                    }
                }
            }
        }
        if let Some(extra) = lines.find(|l| !l.is_empty()) {
            return Err(Gf2Error::Parse {
                line: rows + 2,
                reason: format!("trailing content {extra:?}"),
            });
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> BitMatrix {
        text.parse().unwrap()
    }

    #[test]
    fn identity_rank_and_rref() {
        let id = BitMatrix::identity(3);
        assert_eq!(id.rank(), 3);
        let (r, p) = id.rref();
        assert_eq!(r, id);
        assert_eq!(p, vec![0, 1, 2]);
        assert_eq!(id.nullspace_basis().rows(), 0);
        assert_eq!(id.nullspace_basis().cols(), 3);
    }

    #[test]
    fn zero_matrix_rank() {
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(5, 0).rank(), 0);
        assert_eq!(BitMatrix::zeros(5, 0).nullspace_basis().rows(), 0);
        assert_eq!(BitMatrix::zeros(0, 5).nullspace_basis().rows(), 5);
    }

    #[test]
    fn duplicate_rows_rref() {
        let (r, p) = m("2 2\n11\n11\n").rref();
        assert_eq!(r, m("2 2\n11\n00\n"));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn single_parity_nullspace_is_even_weight() {
        let ones = BitMatrix::ones(1, 6);
        let basis = ones.nullspace_basis();
        assert_eq!(basis.rows(), 5);
        for i in 0..basis.rows() {
            assert_eq!(basis.row_weight(i) % 2, 0);
        }
        let v: BitVector = "101101".parse().unwrap();
        assert!(!ones.mat_vec_mul(&v).unwrap().get(0));
        let v: BitVector = "101100".parse().unwrap();
        assert!(ones.mat_vec_mul(&v).unwrap().get(0));
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let id = BitMatrix::identity(3);
        let err = id.mat_vec_mul(&BitVector::zeros(4)).unwrap_err();
        assert_eq!(
            err,
            Gf2Error::DimensionMismatch {
                expected: 3,
                actual: 4
            }
        );
        let v: BitVector = "101".parse().unwrap();
        assert_eq!(id.mat_vec_mul(&v).unwrap(), v);
    }

    #[test]
    fn row_sum_cases() {
        let a = m("3 4\n1100\n0110\n0011\n");
        assert!(a.row_sum([]).unwrap().is_zero());
        assert_eq!(a.row_sum([1]).unwrap(), a.row(1));
        assert_eq!(a.row_sum([0, 1, 2]).unwrap().to_string(), "1001");
        assert!(matches!(
            a.row_sum([3]),
            Err(Gf2Error::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn text_format_round_trip_and_errors() {
        let text = "2 3\n101\n010\n";
        assert_eq!(m(text).to_string(), text);
        assert_eq!(BitMatrix::zeros(0, 3).to_string(), "0 3\n");
        assert!("2 3\n101\n".parse::<BitMatrix>().is_err());
        assert!("2 3\n101\n01\n".parse::<BitMatrix>().is_err());
        assert!("1 3\n1x1\n".parse::<BitMatrix>().is_err());
        assert!("1 3 \n101\n".parse::<BitMatrix>().is_err());
        assert!("1 3\n101\n111\n".parse::<BitMatrix>().is_err());
    }

    #[test]
    fn padding_bits_stay_clear() {
        let a = BitMatrix::ones(3, 70);
        let (r, _) = a.rref();
        assert_eq!(r.row_weight(0), 70);
        assert_eq!(r.row_weight(1), 0);
        let t = a.transpose();
        assert_eq!(t.rows(), 70);
        assert_eq!(t.row_weight(69), 3);
    }

    #[test]
    fn concat_and_select() {
        let a = BitMatrix::identity(2);
        let b = m("2 1\n1\n1\n");
        let ab = a.hconcat(&b).unwrap();
        assert_eq!(ab, m("2 3\n101\n011\n"));
        assert_eq!(ab.select_columns(&[2, 0]), m("2 2\n11\n10\n"));
        assert_eq!(a.vconcat(&a).unwrap().rows(), 4);
        assert!(a.hconcat(&BitMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn free_columns_complement() {
        assert_eq!(free_columns(6, &[0, 2, 3]), vec![1, 4, 5]);
        assert_eq!(free_columns(2, &[]), vec![0, 1]);
    }
}
