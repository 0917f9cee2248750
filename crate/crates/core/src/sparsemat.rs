//! Exact sparse matrices in compressed-row form.
//!
//! Every tensor-product basis uses the row-major Kronecker convention: the
//! basis of `V ⊗ W` is the lexicographic product of the bases of `V` and `W`,
//! so `kron(A, B)` has entry `a·b` at `(iA·B.rows + iB, jA·B.cols + jB)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::gf::ScalarField;
use crate::{Error, Result};

/// An immutable matrix over a scalar field with no stored zeros and
/// strictly increasing column indices inside each row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix<K: ScalarField> {
    rows: usize,
    cols: usize,
    field: K,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<K::Elem>,
}

/// First entry where two same-shape matrices disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Discrepancy<E> {
    pub row: usize,
    pub col: usize,
    pub lhs: E,
    pub rhs: E,
}

/// Counts returned by [`SparseMatrix::density_stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityStats {
    pub nnz: usize,
    pub total: u128,
    pub max_per_col: usize,
}

impl<K: ScalarField> SparseMatrix<K> {
    pub fn zeros(rows: usize, cols: usize, field: K) -> Self {
        Self {
            rows,
            cols,
            field,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(n: usize, field: K) -> Self {
        let one = field.one();
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            vals: vec![one; n],
            field,
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and zero sums dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, field: K, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, K::Elem)>,
    {
        let mut buf: Vec<(usize, usize, K::Elem)> = Vec::new();
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            buf.push((r, c, v));
        }
        Ok(Self::from_unchecked_triplets(rows, cols, field, buf))
    }

    /// Same as [`from_triplets`](Self::from_triplets) with integer values
    /// mapped into the field.
    pub fn from_int_triplets<I>(rows: usize, cols: usize, field: K, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let f = field.clone();
        Self::from_triplets(rows, cols, field, triplets.into_iter().map(|(r, c, v)| (r, c, f.from_i64(v))))
    }

    pub(crate) fn from_unchecked_triplets(
        rows: usize,
        cols: usize,
        field: K,
        mut buf: Vec<(usize, usize, K::Elem)>,
    ) -> Self {
        buf.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(buf.len());
        let mut vals: Vec<K::Elem> = Vec::with_capacity(buf.len());
        let mut rows_of = Vec::with_capacity(buf.len());
        let mut iter = buf.into_iter().peekable();
        while let Some((r, c, mut v)) = iter.next() {
            while let Some(next) = iter.peek() {
                if next.0 == r && next.1 == c {
                    v = field.add(&v, &next.2);
                    iter.next();
                } else {
                    break;
                }
            }
            if !field.is_zero(&v) {
                rows_of.push(r);
                col_idx.push(c);
                vals.push(v);
            }
        }
        for r in rows_of {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            rows,
            cols,
            field,
            row_ptr,
            col_idx,
            vals,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Entries of row `r` as `(col, value)` pairs in column order.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &K::Elem)> {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().copied().zip(&self.vals[span])
    }

    /// All entries sorted by `(row, col)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &K::Elem)> {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> K::Elem {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&c) {
            Ok(i) => self.vals[span.start + i].clone(),
            Err(_) => self.field.zero(),
        }
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.characteristic(),
                right: other.field.characteristic(),
            });
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut slots: Vec<Option<K::Elem>> = vec![None; self.nnz()];
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                let dst = next[c];
                next[c] += 1;
                col_idx[dst] = r;
                slots[dst] = Some(v.clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            field: self.field.clone(),
            row_ptr,
            col_idx,
            vals: slots.into_iter().map(|v| v.expect("every slot filled")).collect(),
        }
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zeros(self.rows, self.cols, self.field.clone());
        }
        // A nonzero scalar times a nonzero field element is nonzero.
        Self {
            vals: self.vals.iter().map(|v| self.field.mul(c, v)).collect(),
            ..self.clone()
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            vals: self.vals.iter().map(|v| self.field.neg(v)).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() + other.nnz());
        row_ptr.push(0);
        for r in 0..self.rows {
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).peekable();
            loop {
                let (c, v) = match (a.peek(), b.peek()) {
                    (None, None) => break,
                    (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                        a.next();
                        b.next();
                        (ca, f.add(va, vb))
                    }
                    (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                        a.next();
                        (ca, va.clone())
                    }
                    (Some(&(ca, va)), None) => {
                        a.next();
                        (ca, va.clone())
                    }
                    (_, Some(&(cb, vb))) => {
                        b.next();
                        (cb, vb.clone())
                    }
                };
                if !f.is_zero(&v) {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            field: self.field.clone(),
            row_ptr,
            col_idx,
            vals,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// `self · other` (Gustavson row-by-row product with a dense accumulator).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "matmul {}x{} · {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut acc: Vec<Option<K::Elem>> = vec![None; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        let mut col_idx = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    let prod = f.mul(a, b);
                    match &mut acc[c] {
                        Some(slot) => *slot = f.add(slot, &prod),
                        empty => {
                            *empty = Some(prod);
                            touched.push(c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                let v = acc[c].take().expect("touched slot is filled");
                if !f.is_zero(&v) {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
            touched.clear();
            row_ptr.push(col_idx.len());
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            field: self.field.clone(),
            row_ptr,
            col_idx,
            vals,
        })
    }

    /// Kronecker product under the row-major convention.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let f = &self.field;
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() * other.nnz());
        let mut vals = Vec::with_capacity(self.nnz() * other.nnz());
        row_ptr.push(0);
        for ra in 0..self.rows {
            for rb in 0..other.rows {
                for (ca, va) in self.row(ra) {
                    for (cb, vb) in other.row(rb) {
                        col_idx.push(ca * other.cols + cb);
                        vals.push(f.mul(va, vb));
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        Ok(Self {
            rows,
            cols,
            field: self.field.clone(),
            row_ptr,
            col_idx,
            vals,
        })
    }

    /// Nonzero count against total size, with the fullest column.
    pub fn density_stats(&self) -> DensityStats {
        let mut per_col = vec![0usize; self.cols];
        for &c in &self.col_idx {
            per_col[c] += 1;
        }
        DensityStats {
            nnz: self.nnz(),
            total: self.rows as u128 * self.cols as u128,
            max_per_col: per_col.into_iter().max().unwrap_or(0),
        }
    }

    /// Nonzero count of every column.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut per_col = vec![0usize; self.cols];
        for &c in &self.col_idx {
            per_col[c] += 1;
        }
        per_col
    }

    /// The first `(row, col)` in row-major order where the two matrices
    /// differ, or `None` when they are equal. Shapes and fields must agree.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Discrepancy<K::Elem>>> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "compare {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.field.zero();
        for r in 0..self.rows {
            let mut a = self.row(r).peekable();
            let mut b = other.row(r).peekable();
            loop {
                match (a.peek(), b.peek()) {
                    (None, None) => break,
                    (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                        if va != vb {
                            return Ok(Some(Discrepancy {
                                row: r,
                                col: ca,
                                lhs: va.clone(),
                                rhs: vb.clone(),
                            }));
                        }
                        a.next();
                        b.next();
                    }
                    (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                        return Ok(Some(Discrepancy {
                            row: r,
                            col: ca,
                            lhs: va.clone(),
                            rhs: zero,
                        }))
                    }
                    (Some(&(ca, va)), None) => {
                        return Ok(Some(Discrepancy {
                            row: r,
                            col: ca,
                            lhs: va.clone(),
                            rhs: zero,
                        }))
                    }
                    (_, Some(&(cb, vb))) => {
                        return Ok(Some(Discrepancy {
                            row: r,
                            col: cb,
                            lhs: zero,
                            rhs: vb.clone(),
                        }))
                    }
                }
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{PrimeField, Rationals};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_int_triplets(2, 2, f(2), [(0, 0, 1), (0, 0, 1)]).unwrap();
        assert!(m.is_zero());
        let m = SparseMatrix::from_int_triplets(2, 2, f(5), [(0, 1, 7)]).unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), 2);
        let m = SparseMatrix::from_int_triplets(3, 3, f(3), []).unwrap();
        assert_eq!(m, SparseMatrix::zeros(3, 3, f(3)));
        assert!(matches!(
            SparseMatrix::from_int_triplets(2, 2, f(3), [(2, 0, 1)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_dimensional_matrices() {
        let a = SparseMatrix::zeros(0, 3, f(3));
        let b = SparseMatrix::zeros(3, 0, f(3));
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab.shape(), (0, 0));
        let ba = b.matmul(&a).unwrap();
        assert_eq!(ba.shape(), (3, 3));
        assert!(ba.is_zero());
        assert_eq!(a.transpose().shape(), (3, 0));
        assert_eq!(a.kron(&b).unwrap().shape(), (0, 0));
        assert_eq!(SparseMatrix::identity(0, f(2)).density_stats().max_per_col, 0);
    }

    #[test]
    fn identity_and_characteristic_laws() {
        let a = SparseMatrix::from_int_triplets(3, 4, f(2), [(0, 1, 1), (2, 3, 1), (1, 0, 1)]).unwrap();
        assert_eq!(SparseMatrix::identity(3, f(2)).matmul(&a).unwrap(), a);
        assert_eq!(a.transpose().transpose(), a);
        assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn mismatches_are_errors() {
        let a = SparseMatrix::identity(2, f(2));
        let b = SparseMatrix::identity(3, f(2));
        assert!(matches!(a.matmul(&b), Err(Error::DimensionMismatch(_))));
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch(_))));
        let c = SparseMatrix::identity(2, f(3));
        assert!(matches!(a.add(&c), Err(Error::FieldMismatch { left: 2, right: 3 })));
        assert!(matches!(a.kron(&c), Err(Error::FieldMismatch { .. })));
        assert!(matches!(a.matmul(&c), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn kron_examples() {
        let i2 = SparseMatrix::identity(2, f(5));
        let i3 = SparseMatrix::identity(3, f(5));
        assert_eq!(i2.kron(&i3).unwrap(), SparseMatrix::identity(6, f(5)));

        let e01 = SparseMatrix::from_int_triplets(2, 2, f(5), [(0, 1, 1)]).unwrap();
        let e10 = SparseMatrix::from_int_triplets(2, 2, f(5), [(1, 0, 1)]).unwrap();
        let k = e01.kron(&e10).unwrap();
        assert_eq!(k.nnz(), 1);
        assert_eq!(k.get(1, 2), 1);

        let a = SparseMatrix::from_int_triplets(2, 3, f(5), [(0, 0, 2), (1, 2, 3), (1, 1, 1)]).unwrap();
        let b = SparseMatrix::from_int_triplets(2, 2, f(5), [(0, 1, 4), (1, 0, 1)]).unwrap();
        assert_eq!(a.kron(&b).unwrap().nnz(), a.nnz() * b.nnz());
        assert_eq!(a.kron(&b).unwrap().get(2, 2 * 2 + 1), 2); // 3·4 = 12 ≡ 2
    }

    #[test]
    fn density_examples() {
        let s = SparseMatrix::identity(13, f(2)).density_stats();
        assert_eq!((s.nnz, s.total, s.max_per_col), (13, 169, 1));
        assert_eq!(SparseMatrix::zeros(4, 4, f(2)).density_stats().nnz, 0);
    }

    #[test]
    fn first_difference_reports_entries() {
        let a = SparseMatrix::from_int_triplets(2, 2, f(7), [(0, 1, 3)]).unwrap();
        let b = SparseMatrix::from_int_triplets(2, 2, f(7), [(0, 1, 3), (1, 0, 2)]).unwrap();
        let d = a.first_difference(&b).unwrap().unwrap();
        assert_eq!((d.row, d.col, d.lhs, d.rhs), (1, 0, 0, 2));
        assert_eq!(a.first_difference(&a).unwrap(), None);
    }

    #[test]
    fn rational_entries() {
        let q = Rationals;
        let a = SparseMatrix::from_int_triplets(2, 2, q, [(0, 0, 2), (1, 1, -2)]).unwrap();
        let half = q.inv(&q.from_i64(2)).unwrap();
        let b = a.scale(&half);
        assert_eq!(b.get(0, 0), q.one());
        assert_eq!(b.get(1, 1), q.from_i64(-1));
        assert!(a.add(&a.neg()).unwrap().is_zero());
    }
}
