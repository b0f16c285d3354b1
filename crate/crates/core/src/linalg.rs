//! Exact sparse linear algebra over a [`FieldSpec`].
//!
//! Every elimination routine produces the reduced row echelon form using the
//! same pivot policy: columns are scanned left to right and, within a column,
//! the remaining row with the lowest index that has a nonzero entry becomes
//! the pivot row. Pivot rows are scaled to a leading 1 and cleared above and
//! below. Row order among non-pivot rows is preserved. Because reduced echelon
//! forms are unique, the sparse and dense paths agree entry for entry; the
//! fixed pivot order additionally pins down which solution `solve` returns
//! (free coordinates are zero) and which representatives the quotient and
//! homology routines report.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Matrices with both dimensions below this bound are eliminated densely.
pub const DENSE_THRESHOLD: usize = 64;

pub type Vector = Vec<Scalar>;
pub type SparseRow = BTreeMap<usize, Scalar>;

pub fn zero_vector(field: FieldSpec, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit_vector(field: FieldSpec, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn add_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vectors(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vector(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`.
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

/// A sparse matrix stored row by row; only nonzero entries are kept.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl SparseMatrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            data: vec![SparseRow::new(); rows],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i].insert(i, field.one());
        }
        m
    }

    pub fn from_dense(field: FieldSpec, rows: &[Vec<Scalar>], cols: usize) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i].insert(j, x.clone());
                }
            }
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix from its columns.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.data[i].insert(j, x.clone());
                }
            }
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<SparseRow>) -> Self {
        debug_assert!(rows.iter().all(|r| r.keys().all(|&c| c < cols)));
        let data = rows
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect::<Vec<SparseRow>>();
        SparseMatrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, &cur + v);
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        self.data
            .iter()
            .map(|r| {
                let mut row = zero_vector(self.field, self.cols);
                for (&j, v) in r {
                    row[j] = v.clone();
                }
                row
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        let mut cols = vec![zero_vector(self.field, self.rows); self.cols];
        for (i, j, v) in self.entries() {
            cols[j][i] = v.clone();
        }
        cols
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.data[j].insert(i, v.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                v.len()
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|r| {
                let mut acc = self.field.zero();
                for (&j, a) in r {
                    if !v[j].is_zero() {
                        acc += &(a * &v[j]);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = SparseRow::new();
            for (&k, a) in r {
                for (&j, b) in &other.data[k] {
                    let prod = a * b;
                    match acc.get_mut(&j) {
                        Some(x) => *x += &prod,
                        None => {
                            acc.insert(j, prod);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &SparseMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_to(i, j, v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_to(i, j, &-v);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseMatrix {
        if c.is_zero() {
            return Self::zeros(self.field, self.rows, self.cols);
        }
        let mut out = self.clone();
        for r in &mut out.data {
            for v in r.values_mut() {
                *v = &*v * c;
            }
        }
        out
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
        let data = rows
            .iter()
            .map(|&i| {
                self.data[i]
                    .iter()
                    .filter_map(|(j, v)| col_pos.get(j).map(|&p| (p, v.clone())))
                    .collect()
            })
            .collect();
        SparseMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for (i, j, v) in self.entries() {
            out.data[i].insert(j, v.clone());
        }
        for (i, j, v) in other.entries() {
            out.data[i].insert(self.cols + j, v.clone());
        }
        Ok(out)
    }

    /// Applies `f` to every entry, dropping results that vanish.
    pub fn map_entries(&self, field: FieldSpec, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<SparseMatrix> {
        let mut out = Self::zeros(field, self.rows, self.cols);
        for (i, j, v) in self.entries() {
            let w = f(v)?;
            if !w.is_zero() {
                out.data[i].insert(j, w);
            }
        }
        Ok(out)
    }
}

/// Which elimination kernel to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    /// Sparse below-and-above elimination on row maps.
    Sparse,
    /// Dense Gauss-Jordan on a full array.
    Dense,
    /// Dense below [`DENSE_THRESHOLD`], sparse otherwise.
    Auto,
}

/// Reduced row echelon form: `rows[i]` has a leading 1 in column `pivots[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseRow>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Reduces a vector against the pivot rows, clearing every pivot column.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = out[p].clone();
            if c.is_zero() {
                continue;
            }
            for (&j, a) in row {
                out[j] -= &(&c * a);
            }
        }
        out
    }
}

pub fn rref(m: &SparseMatrix) -> Rref {
    rref_with(m, Elimination::Auto)
}

pub fn rref_with(m: &SparseMatrix, strategy: Elimination) -> Rref {
    let dense = match strategy {
        Elimination::Sparse => false,
        Elimination::Dense => true,
        Elimination::Auto => m.rows() < DENSE_THRESHOLD && m.cols() < DENSE_THRESHOLD,
    };
    if dense {
        rref_dense(m)
    } else {
        rref_sparse(m)
    }
}

fn rref_sparse(m: &SparseMatrix) -> Rref {
    let mut rows: Vec<SparseRow> = m.data.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(pos) = (r..rows.len()).find(|&i| rows[i].contains_key(&col)) else {
            continue;
        };
        let mut prow = rows.remove(pos);
        let inv = prow[&col].inverse().expect("nonzero pivot");
        for v in prow.values_mut() {
            *v = &*v * &inv;
        }
        for row in rows.iter_mut() {
            let Some(c) = row.get(&col).cloned() else {
                continue;
            };
            for (&j, a) in &prow {
                let delta = &c * a;
                let vanish = match row.get_mut(&j) {
                    Some(x) => {
                        *x -= &delta;
                        x.is_zero()
                    }
                    None => {
                        row.insert(j, -delta);
                        false
                    }
                };
                if vanish {
                    row.remove(&j);
                }
            }
        }
        rows.insert(r, prow);
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Rref {
        cols: m.cols,
        pivots,
        rows,
    }
}

fn rref_dense(m: &SparseMatrix) -> Rref {
    let mut a = m.to_dense();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m.cols {
        if r == a.len() {
            break;
        }
        let Some(pos) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        let mut prow = a.remove(pos);
        let inv = prow[col].inverse().expect("nonzero pivot");
        for x in prow.iter_mut().skip(col) {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for row in a.iter_mut() {
            let c = row[col].clone();
            if c.is_zero() {
                continue;
            }
            for j in col..m.cols {
                if !prow[j].is_zero() {
                    row[j] -= &(&c * &prow[j]);
                }
            }
        }
        a.insert(r, prow);
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    let rows = a
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect::<SparseRow>()
        })
        .collect();
    Rref {
        cols: m.cols,
        pivots,
        rows,
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    rref(m).rank()
}

/// Solves `m x = b`. Returns the solution whose free (non-pivot) coordinates
/// vanish, or `None` when `b` is not in the image of `m`.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vector>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows()
        )));
    }
    let field = m.field();
    let rhs = SparseMatrix::from_columns(field, m.rows(), &[b.to_vec()]);
    let aug = m.hstack(&rhs)?;
    let e = rref(&aug);
    if e.pivots.last() == Some(&m.cols()) {
        return Ok(None);
    }
    let mut x = zero_vector(field, m.cols());
    for (row, &p) in e.rows.iter().zip(&e.pivots) {
        if let Some(v) = row.get(&m.cols()) {
            x[p] = v.clone();
        }
    }
    Ok(Some(x))
}

pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vector> {
    kernel_basis_with(m, Elimination::Auto)
}

/// One kernel vector per free column `f`: coordinate `f` is 1, other free
/// coordinates are 0.
pub fn kernel_basis_with(m: &SparseMatrix, strategy: Elimination) -> Vec<Vector> {
    let e = rref_with(m, strategy);
    let field = m.field();
    e.free_columns()
        .into_iter()
        .map(|f| {
            let mut v = zero_vector(field, m.cols());
            v[f] = field.one();
            for (row, &p) in e.rows.iter().zip(&e.pivots) {
                if let Some(a) = row.get(&f) {
                    v[p] = -a;
                }
            }
            v
        })
        .collect()
}

/// The columns of `m` sitting at pivot positions.
pub fn image_basis(m: &SparseMatrix) -> Vec<Vector> {
    let e = rref(m);
    e.pivots.iter().map(|&p| m.column(p)).collect()
}

/// Coset representatives for `ambient / sub`. Representatives are in reduced
/// echelon form and vanish on every pivot column of `sub`.
pub fn quotient_basis(sub: &Subspace, ambient: &[Vector]) -> Result<Vec<Vector>> {
    for v in ambient {
        if v.len() != sub.ambient_dim() {
            return Err(Error::DimensionMismatch("quotient ambient vector length".into()));
        }
    }
    let residues: Vec<Vector> = ambient.iter().map(|v| sub.echelon.reduce(v)).collect();
    let s = Subspace::span(sub.field, sub.ambient_dim(), &residues)?;
    Ok(s.basis())
}

pub fn inverse(m: &SparseMatrix) -> Option<SparseMatrix> {
    if m.rows() != m.cols() {
        return None;
    }
    let n = m.rows();
    let aug = m.hstack(&SparseMatrix::identity(m.field(), n)).ok()?;
    let e = rref(&aug);
    if e.rank() < n || e.pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    let rows = e
        .rows
        .into_iter()
        .map(|r| r.into_iter().filter(|(j, _)| *j >= n).map(|(j, v)| (j - n, v)).collect())
        .collect();
    Some(SparseMatrix::from_rows(m.field(), n, rows))
}

/// A linear subspace of `K^n`, stored as its reduced echelon basis. Two
/// subspaces are equal exactly when their echelon bases coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: FieldSpec,
    echelon: Rref,
}

impl Subspace {
    pub fn zero(field: FieldSpec, n: usize) -> Self {
        Subspace {
            field,
            echelon: Rref {
                cols: n,
                pivots: vec![],
                rows: vec![],
            },
        }
    }

    pub fn full(field: FieldSpec, n: usize) -> Self {
        Subspace {
            field,
            echelon: rref(&SparseMatrix::identity(field, n)),
        }
    }

    pub fn span(field: FieldSpec, n: usize, vectors: &[Vector]) -> Result<Self> {
        let rows: Vec<SparseRow> = vectors
            .iter()
            .map(|v| {
                if v.len() != n {
                    Err(Error::DimensionMismatch(format!(
                        "vector of length {} in K^{n}",
                        v.len()
                    )))
                } else {
                    Ok(v.iter()
                        .enumerate()
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(j, x)| (j, x.clone()))
                        .collect())
                }
            })
            .collect::<Result<_>>()?;
        let m = SparseMatrix::from_rows(field, n, rows);
        Ok(Subspace {
            field,
            echelon: rref(&m),
        })
    }

    /// Column space of `m`.
    pub fn image(m: &SparseMatrix) -> Self {
        Subspace {
            field: m.field(),
            echelon: rref(&m.transpose()),
        }
    }

    pub fn kernel(m: &SparseMatrix) -> Self {
        Self::span(m.field(), m.cols(), &kernel_basis(m)).expect("kernel vectors have the right length")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.echelon.cols
    }

    pub fn dim(&self) -> usize {
        self.echelon.rank()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.echelon.pivots
    }

    pub fn basis(&self) -> Vec<Vector> {
        self.echelon
            .rows
            .iter()
            .map(|r| {
                let mut v = zero_vector(self.field, self.ambient_dim());
                for (&j, x) in r {
                    v[j] = x.clone();
                }
                v
            })
            .collect()
    }

    /// Reduces `v` modulo this subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        self.echelon.reduce(v)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch("subspace sum".into()));
        }
        let mut vs = self.basis();
        vs.extend(other.basis());
        Self::span(self.field, self.ambient_dim(), &vs)
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        let n = self.ambient_dim();
        if n != other.ambient_dim() {
            return Err(Error::DimensionMismatch("subspace intersection".into()));
        }
        let u = self.basis();
        let w = other.basis();
        if u.is_empty() || w.is_empty() {
            return Ok(Subspace::zero(self.field, n));
        }
        let mut cols = u.clone();
        cols.extend(w.iter().map(|v| scale_vector(&self.field.from_i64(-1), v)));
        let m = SparseMatrix::from_columns(self.field, n, &cols);
        let span: Vec<Vector> = kernel_basis(&m)
            .into_iter()
            .map(|k| {
                let mut acc = zero_vector(self.field, n);
                for (c, v) in k.iter().zip(&u) {
                    axpy(&mut acc, c, v);
                }
                acc
            })
            .collect();
        Self::span(self.field, n, &span)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.echelon.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

/// Homology `ker(d_out) / im(d_in)` with chosen representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    /// Closed vectors whose classes form a basis of homology.
    pub representatives: Vec<Vector>,
    /// `dim x n` matrix sending a closed vector to its class coordinates.
    pub projection: SparseMatrix,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    /// Echelon complement of the cycles inside the ambient space.
    pub complement: Vec<Vector>,
}

impl Homology {
    /// Class coordinates of a closed vector.
    pub fn coordinates(&self, z: &[Scalar]) -> Result<Vector> {
        if !self.cycles.contains(z) {
            return Err(Error::Precondition("vector is not closed".into()));
        }
        self.projection.mul_vec(z)
    }

    /// The closed vector `sum_i c_i rep_i`.
    pub fn lift(&self, coords: &[Scalar]) -> Result<Vector> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} class coordinates, got {}",
                self.dim,
                coords.len()
            )));
        }
        let mut acc = zero_vector(self.cycles.field(), self.cycles.ambient_dim());
        for (c, r) in coords.iter().zip(&self.representatives) {
            axpy(&mut acc, c, r);
        }
        Ok(acc)
    }
}

/// Homology of `K^m --d_in--> K^n --d_out--> K^k`.
pub fn homology(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<Homology> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::NotAComplex("d_out . d_in is nonzero".into()));
    }
    let field = d_in.field();
    let n = d_out.cols();
    let cycles = Subspace::kernel(d_out);
    let boundaries = Subspace::image(d_in);
    let representatives = quotient_basis(&boundaries, &cycles.basis())?;
    let standard: Vec<Vector> = (0..n).map(|i| unit_vector(field, n, i)).collect();
    let complement = quotient_basis(&cycles, &standard)?;
    let mut frame = boundaries.basis();
    let b = frame.len();
    frame.extend(representatives.iter().cloned());
    frame.extend(complement.iter().cloned());
    debug_assert_eq!(frame.len(), n);
    let t = SparseMatrix::from_columns(field, n, &frame);
    let tinv = inverse(&t).ok_or_else(|| Error::Invariant("homology frame is singular".into()))?;
    let rows: Vec<usize> = (b..b + representatives.len()).collect();
    let all: Vec<usize> = (0..n).collect();
    let projection = tinv.submatrix(&rows, &all);
    Ok(Homology {
        dim: representatives.len(),
        representatives,
        projection,
        cycles,
        boundaries,
        complement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn m(rows: &[&[i64]]) -> SparseMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&x| q().from_i64(x)).collect())
            .collect();
        SparseMatrix::from_dense(q(), &dense, cols)
    }

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| q().from_i64(x)).collect()
    }

    #[test]
    fn rank_of_trivial_matrices() {
        assert_eq!(rank(&SparseMatrix::zeros(q(), 3, 3)), 0);
        assert_eq!(rank(&SparseMatrix::identity(q(), 4)), 4);
    }

    #[test]
    fn solve_identity_and_zero() {
        let b = v(&[1, -2, 3]);
        assert_eq!(solve(&SparseMatrix::identity(q(), 3), &b).unwrap(), Some(b.clone()));
        assert_eq!(solve(&SparseMatrix::zeros(q(), 3, 3), &b).unwrap(), None);
        assert!(solve(&SparseMatrix::identity(q(), 2), &b).is_err());
    }

    #[test]
    fn solve_zeroes_free_columns() {
        // x0 + x1 = 2, x2 = 1: free column 1 must be 0.
        let a = m(&[&[1, 1, 0], &[0, 0, 1]]);
        assert_eq!(solve(&a, &v(&[2, 1])).unwrap(), Some(v(&[2, 0, 1])));
    }

    #[test]
    fn kernel_and_image_of_trivial_maps() {
        assert!(kernel_basis(&SparseMatrix::identity(q(), 3)).is_empty());
        assert!(image_basis(&SparseMatrix::zeros(q(), 3, 2)).is_empty());
        let k = kernel_basis(&m(&[&[1, 1, 0], &[0, 0, 1]]));
        assert_eq!(k, vec![v(&[-1, 1, 0])]);
    }

    #[test]
    fn pivot_order_is_leftmost_lowest() {
        // Column 0 is nonzero in rows 1 and 2; row 1 must become the pivot row.
        let a = m(&[&[0, 1], &[2, 0], &[1, 1]]);
        let e = rref(&a);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(rref_with(&a, Elimination::Sparse), rref_with(&a, Elimination::Dense));
    }

    #[test]
    fn homology_trivial_cases() {
        let z = SparseMatrix::zeros(q(), 3, 3);
        assert_eq!(homology(&z, &z).unwrap().dim, 3);
        // K --id--> K --0--> 0
        let id = SparseMatrix::identity(q(), 1);
        let out = SparseMatrix::zeros(q(), 0, 1);
        assert_eq!(homology(&id, &out).unwrap().dim, 0);
    }

    #[test]
    fn homology_rejects_non_complex() {
        let id = SparseMatrix::identity(q(), 2);
        assert!(matches!(homology(&id, &id), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn homology_projection_recovers_coordinates() {
        // d_in: K -> K^3 hitting (1,1,0); d_out: K^3 -> K kills first two coords.
        let d_in = m(&[&[1], &[1], &[0]]);
        let d_out = m(&[&[0, 0, 1]]);
        let h = homology(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 1);
        for r in &h.representatives {
            assert!(h.cycles.contains(r));
        }
        let c = h.coordinates(&v(&[3, 1, 0])).unwrap();
        // (3,1,0) = (1,1,0) + 2*(1,0,0); class is 2 * [rep] or its echelon variant
        let lifted = h.lift(&c).unwrap();
        assert!(h.boundaries.contains(&sub_vectors(&v(&[3, 1, 0]), &lifted)));
    }

    #[test]
    fn subspace_intersection_and_sum() {
        let a = Subspace::span(q(), 3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        let b = Subspace::span(q(), 3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, Subspace::span(q(), 3, &[v(&[0, 2, 0])]).unwrap());
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(q(), 3));
    }

    #[test]
    fn quotient_representatives_avoid_subspace_pivots() {
        let sub = Subspace::span(q(), 3, &[v(&[1, 1, 0])]).unwrap();
        let reps = quotient_basis(&sub, &[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        assert_eq!(reps.len(), 2);
        for r in &reps {
            assert!(r[0].is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), SparseMatrix::identity(q(), 2));
        assert!(inverse(&m(&[&[1, 1], &[1, 1]])).is_none());
    }
}
