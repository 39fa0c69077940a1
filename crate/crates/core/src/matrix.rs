//! Dense square integer and sign matrices, with the Sylvester-Hadamard
//! constructors and the structural operations used by the proof checks.
//!
//! Indices are 0-based throughout, except [`MinorSpec`], which keeps the
//! 1-based `(row, column)` convention of `S_{i,j}` and converts at the
//! boundary.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the Sylvester order `n` (a `4096 x 4096` matrix).
pub const DEFAULT_MAX_ORDER: u32 = 12;

/// Default cap on the side length of any matrix built by [`kronecker`].
pub const DEFAULT_MAX_SIZE: usize = 1 << DEFAULT_MAX_ORDER;

/// Dense row-major square matrix with exact integer entries.
///
/// The `0 x 0` matrix is a legal value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<i32>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::argument(format!(
                    "row {r} has {} entries, expected {size}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { size, entries })
    }

    pub fn from_vec(size: usize, entries: Vec<i32>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(Error::argument(format!(
                "{} entries cannot form a {size}x{size} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix { size, entries })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> i32) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                entries.push(f(r, c));
            }
        }
        IntMatrix { size, entries }
    }

    pub fn empty() -> Self {
        IntMatrix {
            size: 0,
            entries: Vec::new(),
        }
    }

    pub fn filled(size: usize, value: i32) -> Self {
        IntMatrix {
            size,
            entries: vec![value; size * size],
        }
    }

    /// The all-ones matrix `J`.
    pub fn ones(size: usize) -> Self {
        Self::filled(size, 1)
    }

    pub fn zeros(size: usize) -> Self {
        Self::filled(size, 0)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.entries[row * self.size + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[i32] {
        &self.entries[row * self.size..(row + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i32]> {
        // chunks_exact panics on 0, and a 0x0 matrix has no rows anyway.
        self.entries.chunks_exact(self.size.max(1)).take(self.size)
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i32>> {
        self.rows().map(<[i32]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.size, |r, c| self.get(c, r))
    }

    pub fn is_sign_matrix(&self) -> bool {
        self.entries.iter().all(|&e| e == 1 || e == -1)
    }

    /// Deletes one row and one column. A `1 x 1` input yields the `0 x 0`
    /// matrix.
    pub fn minor(&self, spec: MinorSpec) -> Result<IntMatrix> {
        let (skip_row, skip_col) = spec.zero_based(self.size)?;
        let size = self.size - 1;
        let mut entries = Vec::with_capacity(size * size);
        for (r, row) in self.rows().enumerate() {
            if r == skip_row {
                continue;
            }
            for (c, &e) in row.iter().enumerate() {
                if c != skip_col {
                    entries.push(e);
                }
            }
        }
        Ok(IntMatrix { size, entries })
    }

    /// Restriction to the given row and column index lists, in order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        debug_assert_eq!(rows.len(), cols.len());
        IntMatrix::from_fn(rows.len(), |r, c| self.get(rows[r], cols[c]))
    }

    pub fn permute_rows(&self, perm: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.size, |r, c| self.get(perm[r], c))
    }

    pub fn permute_cols(&self, perm: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.size, |r, c| self.get(r, perm[c]))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

/// Where a [`SignMatrix`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Generated as the Sylvester-Hadamard matrix of order `n`.
    Sylvester(u32),
    General,
}

/// A square matrix whose entries are all `+1` or `-1`.
///
/// Storage is shared with [`IntMatrix`] so every engine accepts both.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    inner: IntMatrix,
    origin: Origin,
}

impl SignMatrix {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if let Some(pos) = matrix.entries.iter().position(|&e| e != 1 && e != -1) {
            let size = matrix.size;
            return Err(Error::argument(format!(
                "entry ({}, {}) = {} is not +1 or -1",
                pos / size,
                pos % size,
                matrix.entries[pos]
            )));
        }
        Ok(SignMatrix {
            inner: matrix,
            origin: Origin::General,
        })
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn size(&self) -> usize {
        self.inner.size
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.inner.get(row, col)
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.inner
    }

    pub fn into_int(self) -> IntMatrix {
        self.inner
    }

    pub fn minor(&self, spec: MinorSpec) -> Result<SignMatrix> {
        Ok(SignMatrix {
            inner: self.inner.minor(spec)?,
            origin: Origin::General,
        })
    }

    pub fn transpose(&self) -> SignMatrix {
        SignMatrix {
            inner: self.inner.transpose(),
            origin: self.origin,
        }
    }
}

impl AsRef<IntMatrix> for SignMatrix {
    fn as_ref(&self) -> &IntMatrix {
        &self.inner
    }
}

impl AsRef<IntMatrix> for IntMatrix {
    fn as_ref(&self) -> &IntMatrix {
        self
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix({:?}){:?}", self.origin, self.inner.to_rows())
    }
}

/// Identifies the minor `S_{i,j}`: row `i` and column `j` removed, both
/// 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MinorSpec {
    pub removed_row: usize,
    pub removed_col: usize,
}

impl MinorSpec {
    pub fn new(removed_row: usize, removed_col: usize) -> Self {
        MinorSpec {
            removed_row,
            removed_col,
        }
    }

    fn zero_based(self, size: usize) -> Result<(usize, usize)> {
        let in_range = |i: usize| (1..=size).contains(&i);
        if !in_range(self.removed_row) || !in_range(self.removed_col) {
            return Err(Error::argument(format!(
                "minor ({}, {}) out of range for a {size}x{size} matrix",
                self.removed_row, self.removed_col
            )));
        }
        Ok((self.removed_row - 1, self.removed_col - 1))
    }
}

#[inline]
fn sylvester_entry(a: usize, c: usize) -> i32 {
    if (a & c).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The Sylvester-Hadamard matrix of order `n` (side `2^n`), built from the
/// closed form `(-1)^popcount(a & c)`.
pub fn sylvester(n: u32) -> Result<SignMatrix> {
    sylvester_with_max(n, DEFAULT_MAX_ORDER)
}

pub fn sylvester_with_max(n: u32, max_order: u32) -> Result<SignMatrix> {
    Error::check_size("sylvester order", n as usize, max_order as usize)?;
    let size = 1usize << n;
    Ok(SignMatrix {
        inner: IntMatrix::from_fn(size, sylvester_entry),
        origin: Origin::Sylvester(n),
    })
}

/// Sylvester matrix by the block recursion `[[H, H], [H, -H]]` from `H_0 = [1]`.
pub fn sylvester_recursive(n: u32) -> Result<SignMatrix> {
    Error::check_size("sylvester order", n as usize, DEFAULT_MAX_ORDER as usize)?;
    let mut h = IntMatrix::ones(1);
    for _ in 0..n {
        let half = h.size;
        h = IntMatrix::from_fn(2 * half, |r, c| {
            let e = h.get(r % half, c % half);
            if r >= half && c >= half {
                -e
            } else {
                e
            }
        });
    }
    Ok(SignMatrix {
        inner: h,
        origin: Origin::Sylvester(n),
    })
}

/// Sylvester matrix as the `n`-fold Kronecker power of `[[1, 1], [1, -1]]`.
pub fn sylvester_kronecker(n: u32) -> Result<SignMatrix> {
    Error::check_size("sylvester order", n as usize, DEFAULT_MAX_ORDER as usize)?;
    let base = IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]])?;
    let mut h = IntMatrix::ones(1);
    for _ in 0..n {
        h = kronecker(&h, &base)?;
    }
    Ok(SignMatrix {
        inner: h,
        origin: Origin::Sylvester(n),
    })
}

pub fn kronecker(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    kronecker_with_max(a, b, DEFAULT_MAX_SIZE)
}

pub fn kronecker_with_max(a: &IntMatrix, b: &IntMatrix, max_size: usize) -> Result<IntMatrix> {
    let size = a.size.checked_mul(b.size).ok_or(Error::SizeLimit {
        what: "kronecker product",
        size: usize::MAX,
        max: max_size,
    })?;
    Error::check_size("kronecker product", size, max_size)?;
    let mut entries = Vec::with_capacity(size * size);
    for ar in 0..a.size {
        for br in 0..b.size {
            for &x in a.row(ar) {
                for &y in b.row(br) {
                    entries.push(
                        x.checked_mul(y)
                            .ok_or_else(|| Error::argument("kronecker entry overflows i32"))?,
                    );
                }
            }
        }
    }
    Ok(IntMatrix { size, entries })
}

/// Multiplies every row of `a` elementwise by row `k` (0-based).
pub fn row_product(a: &SignMatrix, k: usize) -> Result<SignMatrix> {
    let size = a.size();
    if k >= size {
        return Err(Error::argument(format!(
            "row {k} out of range for a {size}x{size} matrix"
        )));
    }
    multiply_rows_by(a, a.inner.row(k))
}

/// Multiplies every row of `a` elementwise by the sign vector `line`.
pub fn multiply_rows_by(a: &SignMatrix, line: &[i32]) -> Result<SignMatrix> {
    let size = a.size();
    if line.len() != size || line.iter().any(|&e| e != 1 && e != -1) {
        return Err(Error::argument(format!(
            "multiplier must be a sign vector of length {size}"
        )));
    }
    let inner = IntMatrix::from_fn(size, |r, c| a.get(r, c) * line[c]);
    Ok(SignMatrix {
        inner,
        origin: Origin::General,
    })
}

/// True iff `A * A^T = m * I` exactly.
pub fn is_hadamard(a: &SignMatrix) -> bool {
    let size = a.size();
    let m = size as i64;
    let rows: Vec<&[i32]> = a.inner.rows().collect();
    for (i, ri) in rows.iter().enumerate() {
        for (j, rj) in rows.iter().enumerate().skip(i) {
            let dot: i64 = ri
                .iter()
                .zip(rj.iter())
                .map(|(&x, &y)| (x * y) as i64)
                .sum();
            let expected = if i == j { m } else { 0 };
            if dot != expected {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineStat {
    pub sum: i64,
    /// Product of the entries; always `+1` or `-1` for a sign matrix.
    pub product: i32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineStats {
    pub rows: Vec<LineStat>,
    pub cols: Vec<LineStat>,
}

pub fn line_stats(a: &SignMatrix) -> LineStats {
    let size = a.size();
    let mut rows = vec![LineStat { sum: 0, product: 1 }; size];
    let mut cols = vec![LineStat { sum: 0, product: 1 }; size];
    for (r, row_stat) in rows.iter_mut().enumerate() {
        for (c, col_stat) in cols.iter_mut().enumerate() {
            let e = a.get(r, c);
            row_stat.sum += e as i64;
            row_stat.product *= e;
            col_stat.sum += e as i64;
            col_stat.product *= e;
        }
    }
    LineStats { rows, cols }
}
