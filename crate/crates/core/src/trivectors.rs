//! Alternating trilinear forms on a finite-dimensional space, with two
//! distinguished examples on the traceless 3x3 matrices: the form
//! `(x,y,z) -> Tr([x,y]z)` and a six-monomial coordinate expression of the
//! generic trivector. Provides stabilizer dimensions under the full matrix
//! algebra and the space of forms invariant under a matrix Lie algebra.

use itertools::Itertools;
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix, Subspace};
use crate::scalars::{Field, FieldElem, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrivectorError {
    #[error("characteristic {0} is excluded here")]
    BadCharacteristic(u64),
    #[error("expected a traceless 3x3 matrix")]
    NotTraceless,
    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("matrices do not close under the bracket")]
    NotClosed,
    #[error("basis matrices are linearly dependent")]
    DependentBasis,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// An alternating 3-form on `k^dim`, stored by its coefficients on sorted
/// index triples `i < j < k` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriVector {
    dim: usize,
    field: Field,
    coeffs: Vec<FieldElem>,
}

/// Sorted triples of `0..dim` in lexicographic order; the coefficient
/// layout of `TriVector`.
pub fn sorted_triples(dim: usize) -> Vec<(usize, usize, usize)> {
    (0..dim)
        .combinations(3)
        .map(|c| (c[0], c[1], c[2]))
        .collect()
}

impl TriVector {
    pub fn zero(field: Field, dim: usize) -> TriVector {
        assert!(dim >= 3, "a trivector needs dimension at least 3");
        let len = dim * (dim - 1) * (dim - 2) / 6;
        TriVector {
            dim,
            field,
            coeffs: vec![field.zero(); len],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    fn rank_of(&self, i: usize, j: usize, k: usize) -> usize {
        // Lexicographic rank of the sorted triple (i, j, k).
        debug_assert!(i < j && j < k && k < self.dim);
        let c3 = |m: usize| m * m.saturating_sub(1) * m.saturating_sub(2) / 6;
        let c2 = |m: usize| m * m.saturating_sub(1) / 2;
        let d = self.dim;
        c3(d) - c3(d - i) + c2(d - 1 - i) - c2(d - j) + (k - j - 1)
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &FieldElem {
        &self.coeffs[self.rank_of(i, j, k)]
    }

    /// Coefficient on an arbitrary index triple, with the permutation sign;
    /// zero on repeated indices.
    pub fn coeff_signed(&self, i: usize, j: usize, k: usize) -> FieldElem {
        if i == j || j == k || i == k {
            return self.field.zero();
        }
        let mut idx = [i, j, k];
        let mut sign = 1i64;
        // Three-element sort, counting transpositions.
        for a in 0..2 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                }
            }
        }
        let c = self.coeff(idx[0], idx[1], idx[2]).clone();
        if sign < 0 {
            -&c
        } else {
            c
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, c: FieldElem) {
        assert!(i < j && j < k, "set_coeff takes a sorted triple");
        let r = self.rank_of(i, j, k);
        self.coeffs[r] = c;
    }

    pub fn from_coeffs(field: Field, dim: usize, coeffs: Vec<FieldElem>) -> TriVector {
        let mut t = TriVector::zero(field, dim);
        assert_eq!(coeffs.len(), t.coeffs.len(), "wrong coefficient count");
        t.coeffs = coeffs;
        t
    }

    pub fn scale(&self, c: &FieldElem) -> TriVector {
        TriVector {
            dim: self.dim,
            field: self.field,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Evaluates on three coordinate vectors via 3x3 minors.
    pub fn eval(&self, v1: &[FieldElem], v2: &[FieldElem], v3: &[FieldElem]) -> FieldElem {
        assert!(
            v1.len() == self.dim && v2.len() == self.dim && v3.len() == self.dim,
            "wrong vector length"
        );
        let mut acc = self.field.zero();
        for (r, (i, j, k)) in sorted_triples(self.dim).into_iter().enumerate() {
            let c = &self.coeffs[r];
            if c.is_zero() {
                continue;
            }
            let det = det3(
                [&v1[i], &v1[j], &v1[k]],
                [&v2[i], &v2[j], &v2[k]],
                [&v3[i], &v3[j], &v3[k]],
            );
            acc = &acc + &(c * &det);
        }
        acc
    }

    /// Two trivectors are projectively proportional if one is a nonzero
    /// scalar multiple of the other.
    pub fn proportional_to(&self, other: &TriVector) -> bool {
        if self.dim != other.dim || self.field != other.field {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let lead = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero");
        if other.coeffs[lead].is_zero() {
            return false;
        }
        let ratio = other.coeffs[lead]
            .div(&self.coeffs[lead])
            .expect("nonzero lead");
        self.scale(&ratio) == *other
    }
}

fn det3(r1: [&FieldElem; 3], r2: [&FieldElem; 3], r3: [&FieldElem; 3]) -> FieldElem {
    let m = |a: &FieldElem, b: &FieldElem, c: &FieldElem, d: &FieldElem| &(a * d) - &(b * c);
    let t1 = r1[0] * &m(r2[1], r2[2], r3[1], r3[2]);
    let t2 = r1[1] * &m(r2[0], r2[2], r3[0], r3[2]);
    let t3 = r1[2] * &m(r2[0], r2[1], r3[0], r3[1]);
    &(&t1 - &t2) + &t3
}

/// Fixed ordered basis of the traceless 3x3 matrices:
/// `E12, E13, E21, E23, E31, E32, E11-E22, E22-E33`.
pub fn sl3_basis(field: Field) -> Vec<Matrix> {
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zero(field, 3, 3);
        m.set(i, j, field.one());
        m
    };
    let h = |i: usize| {
        let mut m = Matrix::zero(field, 3, 3);
        m.set(i, i, field.one());
        m.set(i + 1, i + 1, field.from_i64(-1));
        m
    };
    vec![
        e(0, 1),
        e(0, 2),
        e(1, 0),
        e(1, 2),
        e(2, 0),
        e(2, 1),
        h(0),
        h(1),
    ]
}

/// Coordinates of a traceless 3x3 matrix in the fixed basis; inverse of
/// `coords_to_matrix`.
pub fn matrix_to_coords(m: &Matrix) -> Result<Vec<FieldElem>, TrivectorError> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(TrivectorError::WrongDimension {
            expected: 3,
            got: m.rows(),
        });
    }
    if !m.trace().is_zero() {
        return Err(TrivectorError::NotTraceless);
    }
    Ok(vec![
        m.at(0, 1).clone(),
        m.at(0, 2).clone(),
        m.at(1, 0).clone(),
        m.at(1, 2).clone(),
        m.at(2, 0).clone(),
        m.at(2, 1).clone(),
        m.at(0, 0).clone(),
        -m.at(2, 2),
    ])
}

pub fn coords_to_matrix(field: Field, coords: &[FieldElem]) -> Result<Matrix, TrivectorError> {
    if coords.len() != 8 {
        return Err(TrivectorError::WrongDimension {
            expected: 8,
            got: coords.len(),
        });
    }
    let basis = sl3_basis(field);
    let mut m = Matrix::zero(field, 3, 3);
    for (c, b) in coords.iter().zip(&basis) {
        m = m.add(&b.scale(c));
    }
    Ok(m)
}

/// Commutator `[a, b] = ab - ba`.
pub fn bracket(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

fn trace_product(a: &Matrix, b: &Matrix) -> FieldElem {
    a.mul(b).trace()
}

/// The invariant trivector `(x, y, z) -> Tr([x, y] z)` on the traceless 3x3
/// matrices, in the fixed basis. Characteristic 3 is excluded: scalars
/// become traceless there and the form degenerates.
pub fn trace_form(field: Field) -> Result<TriVector, TrivectorError> {
    if field.characteristic() == 3 {
        return Err(TrivectorError::BadCharacteristic(3));
    }
    let basis = sl3_basis(field);
    let mut t = TriVector::zero(field, 8);
    for (i, j, k) in sorted_triples(8) {
        let c = trace_product(&bracket(&basis[i], &basis[j]), &basis[k]);
        t.set_coeff(i, j, k, c);
    }
    Ok(t)
}

/// The six-monomial coordinate trivector
/// `x238 + x167 - x247 - x356 - x148 - x158` (indices 1-based) on an
/// 8-dimensional space; a representative with the same generic stabilizer
/// behavior as `trace_form`.
pub fn kuchle_coordinate_form(field: Field) -> TriVector {
    let mut t = TriVector::zero(field, 8);
    let one = field.one();
    let neg = field.from_i64(-1);
    // (i, j, k) sorted and 0-based.
    t.set_coeff(1, 2, 7, one.clone());
    t.set_coeff(0, 5, 6, one);
    t.set_coeff(1, 3, 6, neg.clone());
    t.set_coeff(2, 4, 5, neg.clone());
    t.set_coeff(0, 3, 7, neg.clone());
    t.set_coeff(0, 4, 7, neg);
    t
}

/// Dimension of the stabilizer of `t` inside all `dim x dim` matrices: the
/// kernel dimension of the linearized action
/// `X -> t(X., ., .) + t(., X., .) + t(., ., X.)`.
pub fn stabilizer_dim(t: &TriVector) -> usize {
    let d = t.dim();
    let field = t.field();
    let triples = sorted_triples(d);
    // Row per triple, column per matrix entry X_{a b}.
    let mut m = Matrix::zero(field, triples.len(), d * d);
    for (row, &(i, j, k)) in triples.iter().enumerate() {
        for a in 0..d {
            for b in 0..d {
                let mut c = field.zero();
                if b == i {
                    c = &c + &t.coeff_signed(a, j, k);
                }
                if b == j {
                    c = &c + &t.coeff_signed(i, a, k);
                }
                if b == k {
                    c = &c + &t.coeff_signed(i, j, a);
                }
                if !c.is_zero() {
                    m.set(row, a * d + b, c);
                }
            }
        }
    }
    d * d - m.rank()
}

/// True iff `t` vanishes on every triple from the subspace; subspaces of
/// dimension below 3 are trivially isotropic.
pub fn is_isotropic(t: &TriVector, u: &Subspace) -> bool {
    assert_eq!(u.ambient_dim(), t.dim(), "ambient dimension mismatch");
    assert_eq!(u.field(), t.field(), "field mismatch");
    let basis = u.basis_vectors();
    for c in (0..basis.len()).combinations(3) {
        if !t.eval(&basis[c[0]], &basis[c[1]], &basis[c[2]]).is_zero() {
            return false;
        }
    }
    true
}

/// Solution of the ad-invariance equations for a matrix Lie algebra given
/// by a basis: all trivectors `t` on the span with
/// `t([x,u],v,w) + t(u,[x,v],w) + t(u,v,[x,w]) = 0` for every basis `x`.
pub struct InvariantSpace {
    pub dim: usize,
    pub basis: Vec<TriVector>,
}

/// Invariant trivectors of the adjoint representation of the given Lie
/// algebra basis (matrices of any one size, linearly independent, closed
/// under the bracket).
pub fn invariant_trivector_space(basis: &[Matrix]) -> Result<InvariantSpace, TrivectorError> {
    let d = basis.len();
    assert!(d >= 3, "need at least three basis elements");
    let field = basis[0].field();
    let k = basis[0].rows();
    // Flattened basis for expressing brackets back in coordinates.
    let flat = Matrix::from_fn(field, d, k * k, |r, c| {
        basis[r].at(c / k, c % k).clone()
    });
    if flat.rank() < d {
        return Err(TrivectorError::DependentBasis);
    }
    // Structure constants: [b_i, b_j] = sum_m ad[i][j][m] b_m.
    let mut ad = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let br = bracket(&basis[i], &basis[j]);
            ad[i][j] = decompose(&flat, &br, d, k)?;
        }
    }
    let triples = sorted_triples(d);
    let cols = triples.len();
    // One block of C(d,3) equations per acting basis element x = b_x.
    let mut system = Matrix::zero(field, d * cols, cols);
    for x in 0..d {
        for (row, &(u, v, w)) in triples.iter().enumerate() {
            // Coefficient of t_(sorted abc) in the invariance equation.
            for m in 0..d {
                let add_term = |system: &mut Matrix, coeff: &FieldElem, a: usize, b: usize, c: usize| {
                    if coeff.is_zero() {
                        return;
                    }
                    // t(e_a, e_b, e_c) expands into the sorted coefficient
                    // with its permutation sign.
                    if a == b || b == c || a == c {
                        return;
                    }
                    let mut idx = [a, b, c];
                    let mut sign = 1i64;
                    for s in 0..2 {
                        for t2 in 0..2 - s {
                            if idx[t2] > idx[t2 + 1] {
                                idx.swap(t2, t2 + 1);
                                sign = -sign;
                            }
                        }
                    }
                    let col = triples
                        .iter()
                        .position(|&p| p == (idx[0], idx[1], idx[2]))
                        .expect("sorted triple");
                    let signed = if sign < 0 { -coeff } else { coeff.clone() };
                    let cur = system.at(x * cols + row, col).clone();
                    system.set(x * cols + row, col, &cur + &signed);
                };
                add_term(&mut system, &ad[x][u][m].clone(), m, v, w);
                add_term(&mut system, &ad[x][v][m].clone(), u, m, w);
                add_term(&mut system, &ad[x][w][m].clone(), u, v, m);
            }
        }
    }
    let kernel = system.kernel();
    let basis_out = kernel
        .basis_vectors()
        .into_iter()
        .map(|v| TriVector::from_coeffs(field, d, v))
        .collect::<Vec<_>>();
    Ok(InvariantSpace {
        dim: basis_out.len(),
        basis: basis_out,
    })
}

fn decompose(
    flat: &Matrix,
    target: &Matrix,
    d: usize,
    k: usize,
) -> Result<Vec<FieldElem>, TrivectorError> {
    let field = flat.field();
    // Solve flat^T c = vec(target) by row reduction on the augmented system.
    let mut aug = Matrix::zero(field, k * k, d + 1);
    for r in 0..k * k {
        for c in 0..d {
            aug.set(r, c, flat.at(c, r).clone());
        }
        aug.set(r, d, target.at(r / k, r % k).clone());
    }
    let (red, pivots) = aug.rref();
    if pivots.contains(&d) {
        return Err(TrivectorError::NotClosed);
    }
    let mut coeffs = vec![field.zero(); d];
    for (row, &pc) in pivots.iter().enumerate() {
        coeffs[pc] = red.at(row, d).clone();
    }
    Ok(coeffs)
}

/// Dimension (and basis) of the ad-invariant trivectors on the traceless
/// 3x3 matrices over `Q`; the classical answer is the line spanned by
/// `trace_form`.
pub fn invariant_space_dim() -> Result<InvariantSpace, TrivectorError> {
    invariant_trivector_space(&sl3_basis(Field::Rational))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn triple_ranking_is_lexicographic() {
        let t = TriVector::zero(q(), 8);
        for (r, (i, j, k)) in sorted_triples(8).into_iter().enumerate() {
            assert_eq!(t.rank_of(i, j, k), r);
        }
    }

    #[test]
    fn coords_roundtrip_and_traceless_check() {
        let field = q();
        let m = Matrix::from_i64_rows(field, &[&[2, 5, -1], &[3, 1, 0], &[4, 7, -3]]);
        let coords = matrix_to_coords(&m).unwrap();
        assert_eq!(coords_to_matrix(field, &coords).unwrap(), m);
        let not_traceless = Matrix::identity(field, 3);
        assert_eq!(
            matrix_to_coords(&not_traceless),
            Err(TrivectorError::NotTraceless)
        );
    }

    #[test]
    fn trace_form_nonzero_coefficients() {
        // Independently derived by expanding Tr([b_i, b_j] b_k) by hand:
        // these eight sorted triples carry the only nonzero coefficients.
        let t = trace_form(q()).unwrap();
        let expected: Vec<((usize, usize, usize), i64)> = vec![
            ((0, 2, 6), 2),
            ((0, 2, 7), -1),
            ((0, 3, 4), 1),
            ((1, 2, 5), -1),
            ((1, 4, 6), 1),
            ((1, 4, 7), 1),
            ((3, 5, 6), -1),
            ((3, 5, 7), 2),
        ];
        for ((i, j, k), val) in &expected {
            assert_eq!(t.coeff(*i, *j, *k), &q().from_i64(*val), "at ({i},{j},{k})");
        }
        let nonzero = t.coeffs().iter().filter(|c| !c.is_zero()).count();
        assert_eq!(nonzero, expected.len());
    }

    #[test]
    fn trace_form_example_value() {
        // Tr([E12, E21] (E11 - E22)) = Tr((E11 - E22)^2) = 2.
        let t = trace_form(q()).unwrap();
        assert_eq!(t.coeff(0, 2, 6), &q().from_i64(2));
    }

    #[test]
    fn trace_form_excluded_in_characteristic_3() {
        assert_eq!(
            trace_form(Field::prime(3).unwrap()),
            Err(TrivectorError::BadCharacteristic(3))
        );
        assert!(trace_form(Field::prime(7).unwrap()).is_ok());
    }

    #[test]
    fn eval_agrees_with_trace_definition() {
        let field = q();
        let t = trace_form(field).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..10 {
            let rand_traceless = |rng: &mut ChaCha8Rng| {
                let coords: Vec<FieldElem> =
                    (0..8).map(|_| field.from_i64(rng.gen_range(-4..5))).collect();
                coords
            };
            let c1 = rand_traceless(&mut rng);
            let c2 = rand_traceless(&mut rng);
            let c3 = rand_traceless(&mut rng);
            let m1 = coords_to_matrix(field, &c1).unwrap();
            let m2 = coords_to_matrix(field, &c2).unwrap();
            let m3 = coords_to_matrix(field, &c3).unwrap();
            let direct = trace_product(&bracket(&m1, &m2), &m3);
            assert_eq!(t.eval(&c1, &c2, &c3), direct);
        }
    }

    #[test]
    fn eval_is_alternating() {
        let field = q();
        let t = kuchle_coordinate_form(field);
        let v1: Vec<FieldElem> = (0..8).map(|n| field.from_i64(n - 3)).collect();
        let v2: Vec<FieldElem> = (0..8).map(|n| field.from_i64(2 * n + 1)).collect();
        assert!(t.eval(&v1, &v2, &v1).is_zero());
        assert!(t.eval(&v1, &v1, &v2).is_zero());
        let ones = vec![field.one(); 8];
        let plus = t.eval(&v1, &v2, &ones);
        let swapped = t.eval(&v2, &v1, &ones);
        assert_eq!(plus, -&swapped);
    }

    #[test]
    fn stabilizer_dimensions() {
        let field = q();
        assert_eq!(stabilizer_dim(&trace_form(field).unwrap()), 8);
        assert_eq!(stabilizer_dim(&TriVector::zero(field, 8)), 64);
        let mut decomposable = TriVector::zero(field, 8);
        decomposable.set_coeff(0, 1, 2, field.one());
        assert_eq!(stabilizer_dim(&decomposable), 48);
        assert_eq!(stabilizer_dim(&kuchle_coordinate_form(field)), 8);
    }

    #[test]
    fn stabilizer_dimension_stable_mod_p() {
        let field = Field::prime(7).unwrap();
        assert_eq!(stabilizer_dim(&trace_form(field).unwrap()), 8);
        assert_eq!(stabilizer_dim(&kuchle_coordinate_form(field)), 8);
    }

    #[test]
    fn upper_triangulars_are_isotropic_for_trace_form() {
        let field = q();
        let t = trace_form(field).unwrap();
        // span{E12, E13, E23} = coordinates 0, 1, 3.
        let mut vectors = Vec::new();
        for i in [0usize, 1, 3] {
            let mut v = vec![field.zero(); 8];
            v[i] = field.one();
            vectors.push(v);
        }
        let u = Subspace::from_vectors(field, 8, vectors);
        assert!(is_isotropic(&t, &u));
        // span{E12, E21, H1} is not: Tr([E12, E21] H1) = 2.
        let mut vectors = Vec::new();
        for i in [0usize, 2, 6] {
            let mut v = vec![field.zero(); 8];
            v[i] = field.one();
            vectors.push(v);
        }
        let w = Subspace::from_vectors(field, 8, vectors);
        assert!(!is_isotropic(&t, &w));
    }

    #[test]
    fn invariant_space_is_the_trace_line() {
        let inv = invariant_space_dim().unwrap();
        assert_eq!(inv.dim, 1);
        assert!(inv.basis[0].proportional_to(&trace_form(q()).unwrap()));
    }

    #[test]
    fn sl2_invariants_are_one_dimensional() {
        // Unimodular harness: sl2 = span{E12, E21, H} has a single
        // invariant trivector line (the top form).
        let field = q();
        let e = Matrix::from_i64_rows(field, &[&[0, 1], &[0, 0]]);
        let f = Matrix::from_i64_rows(field, &[&[0, 0], &[1, 0]]);
        let h = Matrix::from_i64_rows(field, &[&[1, 0], &[0, -1]]);
        let inv = invariant_trivector_space(&[e, f, h]).unwrap();
        assert_eq!(inv.dim, 1);
    }

    #[test]
    fn dependent_basis_rejected() {
        let field = q();
        let e = Matrix::from_i64_rows(field, &[&[0, 1], &[0, 0]]);
        let e2 = e.scale(&field.from_i64(2));
        let h = Matrix::from_i64_rows(field, &[&[1, 0], &[0, -1]]);
        assert!(matches!(
            invariant_trivector_space(&[e, e2, h]),
            Err(TrivectorError::DependentBasis)
        ));
    }

    #[test]
    fn non_closed_basis_rejected() {
        // span{E12, E21, E11} is not bracket-closed inside 2x2 matrices:
        // [E12, E21] = E11 - E22 falls outside.
        let field = q();
        let e = Matrix::from_i64_rows(field, &[&[0, 1], &[0, 0]]);
        let f = Matrix::from_i64_rows(field, &[&[0, 0], &[1, 0]]);
        let e11 = Matrix::from_i64_rows(field, &[&[1, 0], &[0, 0]]);
        assert!(matches!(
            invariant_trivector_space(&[e, f, e11]),
            Err(TrivectorError::NotClosed)
        ));
    }
}
