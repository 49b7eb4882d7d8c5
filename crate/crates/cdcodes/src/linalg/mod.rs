//! Exact linear algebra over F₂ with bit-packed rows.
//!
//! A matrix row is a single `u64`; bit `j` holds the coefficient of
//! coordinate `j + 1`. All computations (row reduction, rank, kernels,
//! products) are exact.

mod gf16;

pub use gf16::{Gf16, LinearizedPoly};

/// A matrix over F₂ with at most 64 columns, one machine word per row.
///
/// Rows are packed little-endian: bit 0 of a row is the first coordinate.
/// Two matrices are equal iff they have the same column count and identical
/// row words, so matrices in reduced row echelon form compare canonically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    rows: Vec<u64>,
    ncols: usize,
}

impl BitMatrix {
    /// Builds a matrix from raw row words. Bits at or above `ncols` must be
    /// clear.
    pub fn from_rows(rows: Vec<u64>, ncols: usize) -> Self {
        assert!(ncols <= 64, "at most 64 columns are supported");
        let mask = Self::col_mask(ncols);
        for &r in &rows {
            assert_eq!(r & !mask, 0, "row has bits outside the column range");
        }
        Self { rows, ncols }
    }

    /// The `n`×`n` identity matrix.
    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| 1u64 << i).collect(), n)
    }

    /// The all-zero matrix of the given shape.
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Self::from_rows(vec![0; nrows], ncols)
    }

    fn col_mask(ncols: usize) -> u64 {
        if ncols == 64 {
            u64::MAX
        } else {
            (1u64 << ncols) - 1
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    /// Entry in row `i`, column `j` (both 0-based).
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    /// The unique reduced row echelon form of the row space, zero rows
    /// removed. The row count of the result is the rank.
    pub fn rref(&self) -> BitMatrix {
        let mut basis = rref_rows(self.rows.iter().copied());
        basis.sort_unstable_by_key(|r| r.trailing_zeros());
        BitMatrix {
            rows: basis,
            ncols: self.ncols,
        }
    }

    /// Rank of the matrix over F₂.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.rows.iter().copied())
    }

    /// Whether the matrix already is a reduced row echelon form without zero
    /// rows.
    pub fn is_rref(&self) -> bool {
        !self.rows.contains(&0) && *self == self.rref()
    }

    /// A basis (in RREF) of `{x : self · xᵀ = 0}`. The kernel of an `m`×`n`
    /// matrix of rank `r` has `n - r` rows.
    pub fn kernel(&self) -> BitMatrix {
        let r = self.rref();
        let pivots: Vec<u32> = r.rows.iter().map(|row| row.trailing_zeros()).collect();
        let mut rows = Vec::with_capacity(self.ncols - pivots.len());
        for j in 0..self.ncols as u32 {
            if pivots.contains(&j) {
                continue;
            }
            // Free coordinate j: back-substitute the pivot coordinates.
            let mut x = 1u64 << j;
            for (i, &p) in pivots.iter().enumerate() {
                if (r.rows[i] >> j) & 1 == 1 {
                    x |= 1u64 << p;
                }
            }
            rows.push(x);
        }
        BitMatrix {
            rows,
            ncols: self.ncols,
        }
        .rref()
    }

    /// Matrix product over F₂. Requires `self.ncols == rhs.nrows`.
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(
            self.ncols,
            rhs.nrows(),
            "inner dimensions must agree for a product"
        );
        let rows = self
            .rows
            .iter()
            .map(|&r| vec_mul(r, rhs))
            .collect();
        BitMatrix {
            rows,
            ncols: rhs.ncols,
        }
    }

    /// Whether the matrix is square and invertible.
    pub fn is_invertible(&self) -> bool {
        self.nrows() == self.ncols && self.rank() == self.ncols
    }

    /// Horizontal concatenation `(self | rhs)`.
    pub fn hconcat(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.nrows(), rhs.nrows(), "row counts must agree");
        assert!(self.ncols + rhs.ncols <= 64);
        let rows = self
            .rows
            .iter()
            .zip(&rhs.rows)
            .map(|(&a, &b)| a | (b << self.ncols))
            .collect();
        BitMatrix {
            rows,
            ncols: self.ncols + rhs.ncols,
        }
    }
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.ncols)?;
        for &r in &self.rows {
            write!(f, "  ")?;
            for j in 0..self.ncols {
                write!(f, "{}", (r >> j) & 1)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Row-vector times matrix: the XOR of the rows of `m` selected by the set
/// bits of `x`.
pub fn vec_mul(x: u64, m: &BitMatrix) -> u64 {
    let mut acc = 0;
    let mut bits = x;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        acc ^= m.rows[j];
        bits &= bits - 1;
    }
    acc
}

/// Reduces an iterator of row words to a fully reduced basis (unsorted).
pub(crate) fn rref_rows(rows: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for row in rows {
        let mut r = row;
        for &b in &basis {
            if (r >> b.trailing_zeros()) & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            let p = r.trailing_zeros();
            for b in basis.iter_mut() {
                if (*b >> p) & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push(r);
        }
    }
    basis
}

/// Rank of a set of row words, without materializing the reduced basis.
pub(crate) fn rank_of_rows(rows: impl IntoIterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for row in rows {
        let mut r = row;
        while r != 0 {
            let p = r.trailing_zeros() as usize;
            if basis[p] == 0 {
                basis[p] = r;
                rank += 1;
                break;
            }
            r ^= basis[p];
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Parses a coordinate string like "1100000" (first character =
    /// coordinate 1 = bit 0) into a row word.
    fn row(s: &str) -> u64 {
        s.bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'1')
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    #[test]
    fn rref_of_identity_is_identity() {
        let m = BitMatrix::identity(3);
        let r = m.rref();
        assert_eq!(r, m);
        assert_eq!(r.nrows(), 3);
    }

    #[test]
    fn rref_collapses_duplicate_rows() {
        let m = BitMatrix::from_rows(vec![0b101, 0b101], 3);
        let r = m.rref();
        assert_eq!(r.rows(), &[0b101]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_hand_checked_dependent_rows() {
        let m = BitMatrix::from_rows(
            vec![row("1100000"), row("0110000"), row("1010000")],
            7,
        );
        let r = m.rref();
        assert_eq!(r.rows(), &[row("1010000"), row("0110000")]);
        assert_eq!(r.nrows(), 2);
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert_eq!(BitMatrix::identity(4).kernel().nrows(), 0);
    }

    #[test]
    fn kernel_of_zero_row_is_full() {
        let k = BitMatrix::zero(1, 4).kernel();
        assert_eq!(k.nrows(), 4);
        assert_eq!(k, BitMatrix::identity(4));
    }

    #[test]
    fn kernel_rows_are_orthogonal_to_all_rows() {
        // m = (I4 | B) always has a rank-4 kernel in F2^8.
        for seed in [0x9e3779b9u64, 0x12345, 0xdeadbeef] {
            let b: Vec<u64> = (0..4).map(|i| (seed >> (4 * i)) & 0xf).collect();
            let m = BitMatrix::identity(4).hconcat(&BitMatrix::from_rows(b, 4));
            let k = m.kernel();
            assert_eq!(k.nrows(), 4);
            for &mr in m.rows() {
                for &kr in k.rows() {
                    assert_eq!((mr & kr).count_ones() % 2, 0);
                }
            }
        }
    }

    #[test]
    fn product_against_identity() {
        let m = BitMatrix::from_rows(vec![0b110, 0b011], 3);
        assert_eq!(m.mul(&BitMatrix::identity(3)), m);
        let x = vec_mul(0b11, &m);
        assert_eq!(x, 0b110 ^ 0b011);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..=9, 1usize..=9).prop_flat_map(|(nrows, ncols)| {
            proptest::collection::vec(0u64..(1 << ncols), nrows)
                .prop_map(move |rows| BitMatrix::from_rows(rows, ncols))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn rref_is_idempotent(m in arb_matrix()) {
            let r = m.rref();
            prop_assert_eq!(r.rref(), r);
        }
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            prop_assert_eq!(m.rank() + m.kernel().nrows(), m.ncols());
        }

        #[test]
        fn kernel_annihilates(m in arb_matrix()) {
            let k = m.kernel();
            for &mr in m.rows() {
                for &kr in k.rows() {
                    prop_assert_eq!((mr & kr).count_ones() % 2, 0);
                }
            }
        }
    }
}
