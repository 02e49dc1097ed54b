//! Dense exact matrices and canonical subspaces of `F^n`.
//!
//! Conventions used throughout the crate:
//! - a matrix acting on algebra elements sends `e_c` to its column `c`;
//! - an `n x n` matrix is flattened row-major into a vector of length `n^2`;
//! - a [`Subspace`] is stored as its reduced row echelon basis, so two values
//!   are equal exactly when they describe the same subspace.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

pub type Vector = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("field mismatch: {0} vs {1}")]
    Field(FieldSpec, FieldSpec),
    #[error("matrix is singular")]
    Singular,
}

fn check_dim(expected: usize, found: usize) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::Dimension { expected, found })
    }
}

fn check_field(expected: FieldSpec, found: FieldSpec) -> Result<(), LinalgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinalgError::Field(expected, found))
    }
}

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![Scalar::zero(field); n]
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = Scalar::one(field);
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += s * v`, entrywise.
pub fn axpy(acc: &mut [Scalar], s: &Scalar, v: &[Scalar]) {
    if s.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(s * x);
        }
    }
}

/// Dense row-major matrix over a single field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols` and lie in `field`.
    pub fn from_rows(
        field: FieldSpec,
        cols: usize,
        rows: Vec<Vector>,
    ) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            for x in row {
                check_field(field, x.field())?;
                entries.push(x);
            }
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            field,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(
        field: FieldSpec,
        rows: usize,
        cols: &[Vector],
    ) -> Result<Self, LinalgError> {
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            check_dim(rows, col.len())?;
            for (r, x) in col.iter().enumerate() {
                check_field(field, x.field())?;
                m.set(r, c, x.clone());
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Scalar::from_i64(field, x)).collect())
            .collect();
        Matrix::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    /// Inverse of [`Matrix::flatten`] for an `n x n` matrix.
    pub fn unflatten(field: FieldSpec, n: usize, flat: &[Scalar]) -> Result<Self, LinalgError> {
        check_dim(n * n, flat.len())?;
        Matrix::from_rows(
            field,
            n,
            flat.chunks(n.max(1))
                .take(n)
                .map(<[Scalar]>::to_vec)
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        debug_assert_eq!(x.field(), self.field);
        self.entries[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> Vector {
        self.entries.clone()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vector, LinalgError> {
        check_dim(self.cols, x.len())?;
        if let Some(v) = x.first() {
            check_field(self.field, v.field())?;
        }
        let mut out = zero_vector(self.field, self.rows);
        for (c, xc) in x.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o = &*o + &(a * xc);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        check_dim(self.cols, other.rows)?;
        check_field(self.field, other.field)?;
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = &out.entries[r * out.cols + c] + &(a * b);
                        out.entries[r * out.cols + c] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)?;
        check_field(self.field, other.field)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Matrix {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&-Scalar::one(self.field)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            entries: self.entries.iter().map(|x| x * s).collect(),
            ..self.clone()
        }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        check_dim(self.cols, other.cols)?;
        check_field(self.field, other.field)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            entries,
        })
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Scalar::one(self.field));
        }
        let red = rref(&aug);
        if !red.pivots.iter().copied().take(n).eq(0..n) {
            return Err(LinalgError::Singular);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.reduced.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row echelon form. The zero rows are kept at the bottom, so
/// `reduced` has the same shape as the input.
pub fn rref(m: &Matrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.entries.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a.get(r, c).inv().expect("pivot is nonzero");
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        let pivot_row: Vector = a.row(r).to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for (j, pj) in pivot_row.iter().enumerate().take(cols).skip(c) {
                if !pj.is_zero() {
                    let v = a.get(i, j) - &(&factor * pj);
                    a.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref {
        reduced: a,
        pivots,
        rank,
    }
}

/// `{x : m x = 0}` as a subspace of `F^cols`.
pub fn kernel(m: &Matrix) -> Subspace {
    let Rref {
        reduced, pivots, ..
    } = rref(m);
    let n = m.cols;
    let field = m.field;
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = unit_vector(field, n, free);
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -reduced.get(row, free);
        }
        vectors.push(v);
    }
    Subspace::span(field, n, vectors).expect("kernel vectors have ambient length")
}

/// Span of the columns of `m` as a subspace of `F^rows`.
pub fn column_space(m: &Matrix) -> Subspace {
    Subspace::from_row_matrix(m.transpose())
}

/// A subspace of `F^n`, stored as its canonical RREF basis (no zero rows).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

/// Linear data of the quotient `F^n / z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    /// `qdim x n`, kernel exactly `z`.
    pub proj: Matrix,
    /// `n x qdim`, with `proj * section = I`.
    pub section: Matrix,
    pub qdim: usize,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`, canonicalized.
    pub fn from_row_matrix(m: Matrix) -> Self {
        let Rref {
            reduced,
            pivots,
            rank,
        } = rref(&m);
        let field = m.field;
        let ambient = m.cols;
        let rows = (0..rank).map(|r| reduced.row(r).to_vec()).collect();
        Subspace {
            ambient,
            basis: Matrix::from_rows(field, ambient, rows).expect("rows of a matrix"),
            pivots,
        }
    }

    pub fn span(
        field: FieldSpec,
        ambient: usize,
        vectors: Vec<Vector>,
    ) -> Result<Self, LinalgError> {
        Ok(Subspace::from_row_matrix(Matrix::from_rows(
            field, ambient, vectors,
        )?))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical basis as an `r x n` matrix.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<(), LinalgError> {
        check_field(self.field(), other.field())?;
        check_dim(self.ambient, other.ambient)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        Ok(Subspace::from_row_matrix(self.basis.vstack(&other.basis)?))
    }

    /// Intersection by the Zassenhaus method: row-reduce `[[U, U], [V, 0]]`;
    /// rows with vanishing left half carry a basis of `U ∩ V` in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_compatible(other)?;
        let n = self.ambient;
        let field = self.field();
        let mut block = Matrix::zeros(field, self.dim() + other.dim(), 2 * n);
        for r in 0..self.dim() {
            for c in 0..n {
                block.set(r, c, self.basis.get(r, c).clone());
                block.set(r, n + c, self.basis.get(r, c).clone());
            }
        }
        for r in 0..other.dim() {
            for c in 0..n {
                block.set(self.dim() + r, c, other.basis.get(r, c).clone());
            }
        }
        let red = rref(&block);
        let rows = red
            .pivots
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= n)
            .map(|(r, _)| red.reduced.row(r)[n..].to_vec())
            .collect();
        Subspace::span(field, n, rows)
    }

    /// Membership by eliminating `x` against the RREF basis.
    pub fn contains(&self, x: &[Scalar]) -> Result<bool, LinalgError> {
        check_dim(self.ambient, x.len())?;
        if let Some(v) = x.first() {
            check_field(self.field(), v.field())?;
        }
        let mut residual = x.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let coeff = residual[p].clone();
            if !coeff.is_zero() {
                axpy(&mut residual, &-coeff, self.basis.row(r));
            }
        }
        Ok(is_zero_vector(&residual))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_compatible(other)?;
        for r in 0..self.dim() {
            if !other.contains(self.basis.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Image of the subspace under `m` (a map from `F^ambient`).
    pub fn image(&self, m: &Matrix) -> Result<Subspace, LinalgError> {
        check_dim(self.ambient, m.cols)?;
        check_field(self.field(), m.field)?;
        let images = self
            .basis_vectors()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>, _>>()?;
        Subspace::span(self.field(), m.rows, images)
    }

    /// True when `m` maps the subspace into itself.
    pub fn is_invariant_under(&self, m: &Matrix) -> Result<bool, LinalgError> {
        self.image(m)?.is_subspace_of(self)
    }

    /// Quotient coordinates are the non-pivot coordinates of the RREF basis.
    pub fn quotient_map(&self) -> QuotientMap {
        let n = self.ambient;
        let field = self.field();
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let complement: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let qdim = complement.len();
        let mut proj = Matrix::zeros(field, qdim, n);
        let mut section = Matrix::zeros(field, n, qdim);
        for (j, &q) in complement.iter().enumerate() {
            proj.set(j, q, Scalar::one(field));
            section.set(q, j, Scalar::one(field));
            for (i, &p) in self.pivots.iter().enumerate() {
                proj.set(j, p, -self.basis.get(i, q));
            }
        }
        QuotientMap {
            proj,
            section,
            qdim,
        }
    }
}

/// `{x : m x ∈ w}`.
pub fn preimage(m: &Matrix, w: &Subspace) -> Result<Subspace, LinalgError> {
    check_dim(m.rows, w.ambient)?;
    check_field(m.field, w.field())?;
    let proj = w.quotient_map().proj;
    Ok(kernel(&proj.mul(m)?))
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis_vectors()
            .iter()
            .map(|v| {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(", "))
            })
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}
