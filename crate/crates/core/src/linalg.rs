//! Exact dense linear algebra: matrices with reduced row echelon form,
//! determinants, Pfaffians of skew matrices, and subspaces with canonical
//! bases, intersections, orthogonal complements and Plücker coordinates.

use std::collections::HashMap;
use std::fmt;
use std::ops::ControlFlow;

use itertools::Itertools;
use thiserror::Error;

use crate::scalars::{Field, FieldElem, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not skew-symmetric with zero diagonal")]
    NotSkew,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("operands live in different ambient spaces")]
    AmbientMismatch,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("subspace has dimension zero")]
    ZeroSubspace,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A dense matrix over a single field; the field tag survives even for
/// matrices without entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<FieldElem>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from signed integer rows; panics on ragged input.
    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_fn(field, r, c, |i, j| rows[i][j].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn at(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert_eq!(v.field(), self.field, "entry from the wrong field");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<FieldElem> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.at(i, j) + rhs.at(i, j)
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.at(i, j) - rhs.at(i, j)
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        Matrix::from_fn(self.field, self.rows, rhs.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                acc = &acc + &(self.at(i, k) * rhs.at(k, j));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.at(i, k) * &v[k]);
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElem::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn trace(&self) -> FieldElem {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        let mut acc = self.field.zero();
        for i in 0..self.rows {
            acc = &acc + self.at(i, i);
        }
        acc
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.at(r, c).inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let factor = m.at(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j) - &(&factor * m.at(r, j));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by fraction-free-in-spirit Gaussian elimination with row
    /// swaps tracked by sign; exact in every field.
    pub fn det(&self) -> Result<FieldElem, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pr != c {
                for j in 0..n {
                    m.entries.swap(pr * n + j, c * n + j);
                }
                det = -&det;
            }
            let pivot = m.at(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let factor = m.at(i, c) * &inv;
                for j in c..n {
                    let v = m.at(i, j) - &(&factor * m.at(c, j));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        // Row-reduce [self | I]; the right block becomes the inverse.
        let mut aug = Matrix::zero(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
            return Err(LinalgError::Singular);
        }
        Ok(Matrix::from_fn(self.field, n, n, |i, j| {
            red.at(i, n + j).clone()
        }))
    }

    /// Basis of the right kernel, as a subspace of the column-index space.
    pub fn kernel(&self) -> Subspace {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.at(r, f);
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.field, self.cols, basis)
    }

    /// Submatrix on the given row and column index sets, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), cols.len(), |i, j| {
            self.at(rows[i], cols[j]).clone()
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row = (0..self.cols)
                .map(|j| self.at(i, j).to_string())
                .join(" ");
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

/// Adjugate of a 3x3 matrix by explicit cofactors; `C * adj(C) = det(C) I`.
pub fn adjugate3(c: &Matrix) -> Matrix {
    assert_eq!((c.rows(), c.cols()), (3, 3), "adjugate3 needs a 3x3 matrix");
    let minor = |i: usize, j: usize| {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let s: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let m = &(c.at(r[0], s[0]) * c.at(r[1], s[1])) - &(c.at(r[0], s[1]) * c.at(r[1], s[0]));
        if (i + j) % 2 == 0 {
            m
        } else {
            -&m
        }
    };
    // adj = transpose of the cofactor matrix
    Matrix::from_fn(c.field(), 3, 3, |i, j| minor(j, i))
}

/// A square skew-symmetric matrix with zero diagonal (the characteristic-2
/// safe definition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix(Matrix);

impl SkewMatrix {
    pub fn new(m: Matrix) -> Result<SkewMatrix, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::NotSquare);
        }
        for i in 0..m.rows() {
            if !m.at(i, i).is_zero() {
                return Err(LinalgError::NotSkew);
            }
            for j in 0..i {
                if m.at(i, j) != &(-m.at(j, i)) {
                    return Err(LinalgError::NotSkew);
                }
            }
        }
        Ok(SkewMatrix(m))
    }

    /// Skew matrix from its strict upper triangle, given row by row.
    pub fn from_upper(field: Field, n: usize, upper: &[FieldElem]) -> SkewMatrix {
        assert_eq!(upper.len(), n * (n - 1) / 2, "wrong upper triangle length");
        let mut m = Matrix::zero(field, n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, upper[k].clone());
                m.set(j, i, -&upper[k]);
                k += 1;
            }
        }
        SkewMatrix(m)
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn field(&self) -> Field {
        self.0.field()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// The value of the associated bilinear form on a pair of vectors.
    pub fn pair(&self, x: &[FieldElem], y: &[FieldElem]) -> FieldElem {
        let ax = self.0.mul_vec(y);
        let mut acc = self.field().zero();
        for (xi, axi) in x.iter().zip(&ax) {
            acc = &acc + &(xi * axi);
        }
        acc
    }
}

/// Pfaffian by first-row expansion over index subsets, memoized on the
/// subset bitmask; zero for odd size, `pf([[0,1],[-1,0]]) = 1`.
pub fn pfaffian(m: &SkewMatrix) -> FieldElem {
    let n = m.size();
    let field = m.field();
    if n == 0 {
        return field.one();
    }
    if n % 2 == 1 {
        return field.zero();
    }
    assert!(n <= 64, "pfaffian uses a 64-bit subset mask");
    let entry = |i: usize, j: usize| m.as_matrix().at(i, j).clone();
    pfaffian_expand(((1u128 << n) - 1) as u64, &entry, &mut HashMap::new())
        .unwrap_or_else(|| field.zero())
}

/// Shared expansion used for scalar and polynomial entries alike: `T` only
/// needs ring operations through the callbacks of its own `impl`s.
pub(crate) fn pfaffian_expand<T, F>(mask: u64, entry: &F, memo: &mut HashMap<u64, Option<T>>) -> Option<T>
where
    T: Clone + RingElem,
    F: Fn(usize, usize) -> T,
{
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let idx: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
    let value = if idx.len() < 2 {
        None
    } else if idx.len() == 2 {
        Some(entry(idx[0], idx[1]))
    } else {
        let first = idx[0];
        let mut acc: Option<T> = None;
        for (t, &other) in idx.iter().enumerate().skip(1) {
            let sub = mask & !(1 << first) & !(1 << other);
            let rest = pfaffian_expand(sub, entry, memo).expect("even subset");
            let mut term = entry(first, other).ring_mul(&rest);
            if t % 2 == 0 {
                term = term.ring_neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.ring_add(&term),
            });
        }
        acc
    };
    memo.insert(mask, value.clone());
    value
}

/// The minimal ring interface needed by the Pfaffian expansion.
pub(crate) trait RingElem {
    fn ring_add(&self, rhs: &Self) -> Self;
    fn ring_mul(&self, rhs: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl RingElem for FieldElem {
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

/// A linear subspace stored by its reduced-row-echelon basis, so equal
/// subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    basis: Matrix, // RREF with no zero rows
}

impl Subspace {
    pub fn from_vectors(field: Field, ambient: usize, vectors: Vec<Vec<FieldElem>>) -> Subspace {
        assert!(vectors.iter().all(|v| v.len() == ambient), "wrong ambient dimension");
        let raw = Matrix::from_fn(field, vectors.len(), ambient, |i, j| vectors[i][j].clone());
        Subspace::from_matrix_rows(&raw)
    }

    /// Row span of a matrix, canonicalized.
    pub fn from_matrix_rows(m: &Matrix) -> Subspace {
        let (red, pivots) = m.rref();
        let basis = Matrix::from_fn(m.field(), pivots.len(), m.cols(), |i, j| {
            red.at(i, j).clone()
        });
        Subspace {
            ambient: m.cols(),
            field: m.field(),
            basis,
        }
    }

    /// Wraps rows that are already reduced; used by the exhaustive
    /// enumerator which emits canonical bases directly.
    pub(crate) fn from_rref_unchecked(basis: Matrix) -> Subspace {
        Subspace {
            ambient: basis.cols(),
            field: basis.field(),
            basis,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            field,
            basis: Matrix::zero(field, 0, ambient),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            field,
            basis: Matrix::identity(field, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FieldElem>> {
        (0..self.dim()).map(|i| self.basis.row(i)).collect()
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        assert_eq!(v.len(), self.ambient, "wrong ambient dimension");
        // Reduce v against the canonical basis; membership iff it reaches 0.
        let mut w: Vec<FieldElem> = v.to_vec();
        for r in 0..self.dim() {
            let pc = (0..self.ambient)
                .find(|&j| !self.basis.at(r, j).is_zero())
                .expect("canonical basis has no zero rows");
            if !w[pc].is_zero() {
                let factor = w[pc].clone();
                for j in 0..self.ambient {
                    w[j] = &w[j] - &(&factor * self.basis.at(r, j));
                }
            }
        }
        w.iter().all(FieldElem::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && (0..self.dim()).all(|i| other.contains(&self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient || self.field != other.field {
            return Err(LinalgError::AmbientMismatch);
        }
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Ok(Subspace::from_vectors(self.field, self.ambient, vectors))
    }

    /// Intersection by the Zassenhaus block construction.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        if self.ambient != other.ambient || self.field != other.field {
            return Err(LinalgError::AmbientMismatch);
        }
        let n = self.ambient;
        let rows = self.dim() + other.dim();
        let mut block = Matrix::zero(self.field, rows, 2 * n);
        for i in 0..self.dim() {
            for j in 0..n {
                block.set(i, j, self.basis.at(i, j).clone());
                block.set(i, n + j, self.basis.at(i, j).clone());
            }
        }
        for i in 0..other.dim() {
            for j in 0..n {
                block.set(self.dim() + i, j, other.basis.at(i, j).clone());
            }
        }
        let (red, pivots) = block.rref();
        // Rows whose left block vanished span the intersection in the right block.
        let left_rank = pivots.iter().filter(|&&c| c < n).count();
        let mut vectors = Vec::new();
        for r in left_rank..pivots.len() {
            vectors.push((0..n).map(|j| red.at(r, n + j).clone()).collect());
        }
        Ok(Subspace::from_vectors(self.field, n, vectors))
    }

    /// Orthogonal complement with respect to a nondegenerate symmetric or
    /// skew bilinear form `B`: solutions of `(B u)^T x = 0` over the basis.
    pub fn orth_complement(&self, b: &Matrix) -> Result<Subspace, LinalgError> {
        if b.rows() != b.cols() {
            return Err(LinalgError::NotSquare);
        }
        if b.rows() != self.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        if b.rank() < b.rows() {
            return Err(LinalgError::DegenerateForm);
        }
        let constraints = self.basis.mul(b);
        Ok(constraints.kernel())
    }

    /// Plücker coordinates: all maximal minors of the basis in lexicographic
    /// column order, scaled so the first nonzero entry is 1.
    pub fn plucker(&self) -> Result<Vec<FieldElem>, LinalgError> {
        let raw = self.plucker_raw()?;
        let lead = raw
            .iter()
            .find(|c| !c.is_zero())
            .expect("a rank-r basis has a nonzero maximal minor")
            .clone();
        let inv = lead.inv()?;
        Ok(raw.iter().map(|c| c * &inv).collect())
    }

    /// Unnormalized Plücker vector in lexicographic column-tuple order.
    pub fn plucker_raw(&self) -> Result<Vec<FieldElem>, LinalgError> {
        let r = self.dim();
        if r == 0 {
            return Err(LinalgError::ZeroSubspace);
        }
        let rows: Vec<usize> = (0..r).collect();
        let mut out = Vec::new();
        for cols in (0..self.ambient).combinations(r) {
            out.push(self.basis.submatrix(&rows, &cols).det()?);
        }
        Ok(out)
    }
}

/// Visits the canonical (RREF) bases of every `dim`-dimensional subspace of
/// `F_q^ambient` exactly once, in a fixed order: pivot columns ascending
/// lexicographically, free entries in odometer order. Returning `Break`
/// stops early.
pub fn for_each_subspace<B>(
    field: Field,
    ambient: usize,
    dim: usize,
    mut visit: impl FnMut(Subspace) -> ControlFlow<B>,
) -> Option<B> {
    let elems = field.elements().expect("enumeration needs a finite field");
    if dim > ambient {
        return None;
    }
    for pivots in (0..ambient).combinations(dim) {
        // Free positions: entries (r, c) right of pivot r, excluding later pivot columns.
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in pc + 1..ambient {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut counters = vec![0usize; free.len()];
        loop {
            let mut m = Matrix::zero(field, dim, ambient);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, field.one());
            }
            for (k, &(r, c)) in free.iter().enumerate() {
                m.set(r, c, elems[counters[k]].clone());
            }
            if let ControlFlow::Break(b) = visit(Subspace::from_rref_unchecked(m)) {
                return Some(b);
            }
            // Odometer step.
            let mut k = 0;
            loop {
                if k == counters.len() {
                    break;
                }
                counters[k] += 1;
                if counters[k] < elems.len() {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == counters.len() {
                break;
            }
        }
    }
    None
}

/// Canonical representatives of the points of `P^(dim-1)(F_q)`: first
/// nonzero coordinate 1, enumerated with the pivot moving left to right.
pub fn proj_space_points(field: Field, dim: usize) -> Vec<Vec<FieldElem>> {
    let elems = field.elements().expect("enumeration needs a finite field");
    let mut out = Vec::new();
    for pivot in 0..dim {
        let tail = dim - pivot - 1;
        let mut counters = vec![0usize; tail];
        loop {
            let mut v = vec![field.zero(); dim];
            v[pivot] = field.one();
            for (k, &c) in counters.iter().enumerate() {
                v[pivot + 1 + k] = elems[c].clone();
            }
            out.push(v);
            let mut k = 0;
            loop {
                if k == counters.len() {
                    break;
                }
                counters[k] += 1;
                if counters[k] < elems.len() {
                    break;
                }
                counters[k] = 0;
                k += 1;
            }
            if k == counters.len() {
                break;
            }
        }
    }
    out
}

/// `(q^m - 1)/(q - 1)`, the number of points of `P^(m-1)(F_q)`.
pub fn proj_space_count(q: u64, m: u32) -> u64 {
    let mut acc = 0u64;
    let mut pw = 1u64;
    for _ in 0..m {
        acc += pw;
        pw *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rref_and_rank() {
        let m = Matrix::from_i64_rows(Field::Rational, &[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let (red, pivots) = m.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
        assert_eq!(red.at(0, 0), &Field::Rational.one());
        assert!(red.row(2).iter().all(FieldElem::is_zero));
    }

    #[test]
    fn determinant_matches_cofactor_expansion_3x3() {
        let m = Matrix::from_i64_rows(Field::Rational, &[&[2, -1, 0], &[3, 5, 1], &[0, 4, -2]]);
        // 2*(5*-2 - 1*4) - (-1)*(3*-2 - 0) + 0 = -28 - 6 = -34
        assert_eq!(m.det().unwrap(), Field::Rational.from_i64(-34));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64_rows(f(13), &[&[1, 2, 0], &[0, 1, 5], &[3, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f(13), 3));
        let singular = Matrix::from_i64_rows(f(13), &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.inverse(), Err(LinalgError::Singular));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = Matrix::from_i64_rows(Field::Rational, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = m.kernel();
        assert_eq!(ker.dim(), 2);
        for v in ker.basis_vectors() {
            assert!(m.mul_vec(&v).iter().all(FieldElem::is_zero));
        }
    }

    #[test]
    fn skew_constructor_rejects_nonskew() {
        let bad = Matrix::from_i64_rows(Field::Rational, &[&[0, 1], &[1, 0]]);
        assert_eq!(SkewMatrix::new(bad), Err(LinalgError::NotSkew));
        // Zero diagonal is part of the definition even where -x = x.
        let diag = Matrix::from_i64_rows(f(2), &[&[1, 1], &[1, 0]]);
        assert_eq!(SkewMatrix::new(diag), Err(LinalgError::NotSkew));
    }

    #[test]
    fn pfaffian_base_cases() {
        let j = SkewMatrix::from_upper(Field::Rational, 2, &[Field::Rational.one()]);
        assert_eq!(pfaffian(&j), Field::Rational.one());
        let odd = SkewMatrix::from_upper(Field::Rational, 3, &vec![Field::Rational.one(); 3]);
        assert_eq!(pfaffian(&odd), Field::Rational.zero());
    }

    #[test]
    fn pfaffian_4x4_formula() {
        // pf = a01 a23 - a02 a13 + a03 a12
        let q = Field::Rational;
        let upper: Vec<FieldElem> = [3, -1, 4, 2, 5, 7].iter().map(|&n| q.from_i64(n)).collect();
        let m = SkewMatrix::from_upper(q, 4, &upper);
        // 3*7 - (-1)*5 + 4*2 = 21 + 5 + 8 = 34
        assert_eq!(pfaffian(&m), q.from_i64(34));
    }

    #[test]
    fn pfaffian_squares_to_determinant_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let field = f(101);
        for n in [2usize, 4, 6, 8] {
            for _ in 0..10 {
                let upper: Vec<FieldElem> = (0..n * (n - 1) / 2)
                    .map(|_| field.from_i64(rng.gen_range(0..101)))
                    .collect();
                let m = SkewMatrix::from_upper(field, n, &upper);
                let pf = pfaffian(&m);
                assert_eq!(&pf * &pf, m.as_matrix().det().unwrap());
            }
        }
    }

    #[test]
    fn pfaffian_congruence_transform() {
        // pf(P^T A P) = det(P) pf(A)
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let field = f(13);
        let upper: Vec<FieldElem> = (0..6).map(|_| field.from_i64(rng.gen_range(0..13))).collect();
        let a = SkewMatrix::from_upper(field, 4, &upper);
        for _ in 0..5 {
            let p = Matrix::from_fn(field, 4, 4, |_, _| field.from_i64(rng.gen_range(0..13)));
            let conj = p.transpose().mul(a.as_matrix()).mul(&p);
            let skew = SkewMatrix::new(conj).unwrap();
            assert_eq!(pfaffian(&skew), &p.det().unwrap() * &pfaffian(&a));
        }
    }

    #[test]
    fn subspace_canonical_form_is_basis_independent() {
        let q = Field::Rational;
        let a = Subspace::from_vectors(
            q,
            3,
            vec![
                vec![q.from_i64(1), q.from_i64(1), q.from_i64(0)],
                vec![q.from_i64(0), q.from_i64(0), q.from_i64(1)],
            ],
        );
        let b = Subspace::from_vectors(
            q,
            3,
            vec![
                vec![q.from_i64(2), q.from_i64(2), q.from_i64(3)],
                vec![q.from_i64(1), q.from_i64(1), q.from_i64(-1)],
            ],
        );
        assert_eq!(a, b);
        assert!(a.contains(&[q.from_i64(3), q.from_i64(3), q.from_i64(7)]));
        assert!(!a.contains(&[q.from_i64(1), q.from_i64(0), q.from_i64(0)]));
    }

    #[test]
    fn sum_intersect_dimension_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let field = f(5);
        for _ in 0..25 {
            let rand_space = |rng: &mut ChaCha8Rng, dim: usize| {
                let vecs: Vec<Vec<FieldElem>> = (0..dim)
                    .map(|_| (0..6).map(|_| field.from_i64(rng.gen_range(0..5))).collect())
                    .collect();
                Subspace::from_vectors(field, 6, vecs)
            };
            let u = rand_space(&mut rng, 3);
            let w = rand_space(&mut rng, 2);
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            assert!(i.is_subspace_of(&u) && i.is_subspace_of(&w));
            assert!(u.is_subspace_of(&s) && w.is_subspace_of(&s));
        }
    }

    #[test]
    fn ambient_mismatch_detected() {
        let q = Field::Rational;
        let u = Subspace::full(q, 3);
        let w = Subspace::full(q, 4);
        assert_eq!(u.sum(&w), Err(LinalgError::AmbientMismatch));
        assert_eq!(u.intersect(&w), Err(LinalgError::AmbientMismatch));
    }

    #[test]
    fn orth_complement_dimensions_and_degenerate_form() {
        let q = Field::Rational;
        let b = Matrix::identity(q, 4);
        let u = Subspace::from_vectors(
            q,
            4,
            vec![vec![q.from_i64(1), q.from_i64(0), q.from_i64(1), q.from_i64(0)]],
        );
        let perp = u.orth_complement(&b).unwrap();
        assert_eq!(perp.dim(), 3);
        for v in perp.basis_vectors() {
            let dot = &v[0] + &v[2];
            assert!(dot.is_zero());
        }
        let degenerate = Matrix::zero(q, 4, 4);
        assert_eq!(u.orth_complement(&degenerate), Err(LinalgError::DegenerateForm));
    }

    #[test]
    fn plucker_of_plane_in_four_space() {
        let q = Field::Rational;
        // span{e1 + e3, e2 + e4}: p12=1, p13=0... computed by hand below.
        let u = Subspace::from_vectors(
            q,
            4,
            vec![
                vec![q.from_i64(1), q.from_i64(0), q.from_i64(1), q.from_i64(0)],
                vec![q.from_i64(0), q.from_i64(1), q.from_i64(0), q.from_i64(1)],
            ],
        );
        let p = u.plucker().unwrap();
        let e: Vec<FieldElem> = [1, 0, 1, -1, 0, 1].iter().map(|&n| q.from_i64(n)).collect();
        assert_eq!(p, e);
        // Same subspace from a different spanning set gives the same point.
        let u2 = Subspace::from_vectors(
            q,
            4,
            vec![
                vec![q.from_i64(2), q.from_i64(1), q.from_i64(2), q.from_i64(1)],
                vec![q.from_i64(1), q.from_i64(1), q.from_i64(1), q.from_i64(1)],
            ],
        );
        assert_eq!(u2.plucker().unwrap(), p);
    }

    #[test]
    fn plucker_needs_positive_dimension() {
        let u = Subspace::zero(Field::Rational, 4);
        assert_eq!(u.plucker(), Err(LinalgError::ZeroSubspace));
    }

    #[test]
    fn subspace_enumeration_matches_gaussian_binomials() {
        // |Gr(k, F_q^n)| for small cases: Gr(1,F_2^3)=7, Gr(2,F_2^4)=35, Gr(1,F_3^2)=4.
        let count = |q: u64, n: usize, k: usize| {
            let mut c = 0u64;
            for_each_subspace::<()>(f(q), n, k, |s| {
                assert_eq!(s.dim(), k);
                c += 1;
                ControlFlow::Continue(())
            });
            c
        };
        assert_eq!(count(2, 3, 1), 7);
        assert_eq!(count(2, 4, 2), 35);
        assert_eq!(count(3, 2, 1), 4);
        assert_eq!(count(5, 4, 4), 1);
    }

    #[test]
    fn projective_point_enumeration() {
        let pts = proj_space_points(f(3), 3);
        assert_eq!(pts.len() as u64, proj_space_count(3, 3));
        assert_eq!(pts.len(), 13);
        // All distinct as projective representatives.
        let mut seen = pts.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 13);
    }

    #[test]
    fn adjugate_identity() {
        let q = Field::Rational;
        let c = Matrix::from_i64_rows(q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let adj = adjugate3(&c);
        let det = c.det().unwrap();
        assert_eq!(c.mul(&adj), Matrix::identity(q, 3).scale(&det));
    }
}
