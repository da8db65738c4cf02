//! Pencils `u A + v B` of skew bilinear forms on a `2n`-dimensional space:
//! the Pfaffian binary form, the smoothness criterion for the Lagrangian
//! locus, the block normal form, and exhaustive Lagrangian enumeration
//! over small finite fields, together with two hypersurface point counts
//! used as independent cross-checks (multidegree-(1,...,1) divisors in
//! `(P^1)^n` and lines on a four-dimensional quadric).

use std::collections::HashMap;
use std::ops::ControlFlow;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{
    self, for_each_subspace, proj_space_count, LinalgError, Matrix, SkewMatrix, Subspace,
};
use crate::scalars::{
    binary_form_roots, proj_line_points, BinaryForm, Field, FieldElem, ProjPoint1, ScalarError,
};

impl linalg::RingElem for BinaryForm {
    fn ring_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PencilError {
    #[error("matrices do not span a pencil (A and B are proportional)")]
    NotAPencil,
    #[error("sizes or fields of the two forms disagree")]
    ShapeMismatch,
    #[error("a pencil needs even size at least 2")]
    BadSize,
    #[error("the pencil is not smooth, so the requested normal form does not exist")]
    NotSmooth,
    #[error("the first member is degenerate: its Pfaffian vanishes, so no basis makes it the standard symplectic form while keeping the second member diagonal")]
    FirstMemberDegenerate,
    #[error("exhaustive enumeration refused: {0}")]
    GuardExceeded(String),
    #[error("expected one line inside each degenerate-member kernel")]
    BadLine,
    #[error("subspace is not Lagrangian for the pencil")]
    NotLagrangian,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A pencil of skew forms on `k^(2n)`, spanned by two independent members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewPencil {
    n: usize,
    a: SkewMatrix,
    b: SkewMatrix,
}

/// Verdict of the smoothness analysis of the Lagrangian locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Smooth,
    Singular,
    /// The Pfaffian form has a factor with no root over the base field, so
    /// smoothness over the algebraic closure cannot be decided here.
    NonSplit,
}

/// Why a pencil failed the smoothness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// A root of the Pfaffian form has multiplicity above one.
    RepeatedRoot,
    /// Some degenerate member has kernel dimension above two.
    FatKernel(usize),
    /// The kernels at the roots fail to span the whole space.
    NotDirectSum,
    /// The Pfaffian form vanishes identically.
    LineInDiscriminant,
}

/// Everything the smoothness analysis derives from a pencil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub verdict: Verdict,
    pub pfaffian_form: BinaryForm,
    /// Roots of the Pfaffian form with multiplicities, in canonical order.
    pub roots: Vec<(ProjPoint1, usize)>,
    pub residual_degree: usize,
    /// Kernel of the degenerate member at each root, aligned with `roots`.
    pub kernels: Vec<Subspace>,
    pub failure_reason: Option<FailureReason>,
}

/// Basis change exhibiting a smooth pencil as perpendicular 2x2 blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    /// Invertible `P` with `P^T A P = diag(J, ..., J)` and
    /// `P^T B P = diag(-a_1 J, ..., -a_n J)`, `J = [[0,1],[-1,0]]`.
    pub basis_change: Matrix,
    pub a_values: Vec<FieldElem>,
}

/// Result of the exhaustive Lagrangian search over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianEnumeration {
    pub count: u64,
    pub lagrangians: Vec<Subspace>,
}

impl SkewPencil {
    pub fn new(a: SkewMatrix, b: SkewMatrix) -> Result<SkewPencil, PencilError> {
        if a.size() != b.size() || a.field() != b.field() {
            return Err(PencilError::ShapeMismatch);
        }
        let m = a.size();
        if m < 2 || m % 2 != 0 {
            return Err(PencilError::BadSize);
        }
        // Independence of A and B as vectors of upper-triangle entries.
        let mut stacked = Matrix::zero(a.field(), 2, m * m);
        for i in 0..m {
            for j in 0..m {
                stacked.set(0, i * m + j, a.as_matrix().at(i, j).clone());
                stacked.set(1, i * m + j, b.as_matrix().at(i, j).clone());
            }
        }
        if stacked.rank() < 2 {
            return Err(PencilError::NotAPencil);
        }
        Ok(SkewPencil { n: m / 2, a, b })
    }

    /// The reference pencil with `A = diag(J,...,J)` and
    /// `B = diag(-a_1 J, ..., -a_n J)`; its Pfaffian form is
    /// `prod_i (u - a_i v)`.
    pub fn standard(field: Field, a_values: &[FieldElem]) -> Result<SkewPencil, PencilError> {
        let n = a_values.len();
        if n == 0 {
            return Err(PencilError::BadSize);
        }
        let mut a = Matrix::zero(field, 2 * n, 2 * n);
        let mut b = Matrix::zero(field, 2 * n, 2 * n);
        for (i, a_i) in a_values.iter().enumerate() {
            a.set(2 * i, 2 * i + 1, field.one());
            a.set(2 * i + 1, 2 * i, field.from_i64(-1));
            b.set(2 * i, 2 * i + 1, -a_i);
            b.set(2 * i + 1, 2 * i, a_i.clone());
        }
        SkewPencil::new(SkewMatrix::new(a)?, SkewMatrix::new(b)?)
    }

    /// Block pencil whose Pfaffian form is `prod_i (b_i u - a_i v)` for the
    /// given root points `(a_i : b_i)`; this reaches roots at `(1:0)`, which
    /// the `standard` constructor cannot express.
    pub fn from_root_points(field: Field, points: &[ProjPoint1]) -> Result<SkewPencil, PencilError> {
        let n = points.len();
        if n == 0 {
            return Err(PencilError::BadSize);
        }
        let mut a = Matrix::zero(field, 2 * n, 2 * n);
        let mut b = Matrix::zero(field, 2 * n, 2 * n);
        for (i, pt) in points.iter().enumerate() {
            // Block i is beta*J in A and -alpha*J in B, so the degenerate
            // member at (alpha:beta) is exactly this block's vanishing.
            let (alpha, beta) = (pt.u(), pt.v());
            a.set(2 * i, 2 * i + 1, beta.clone());
            a.set(2 * i + 1, 2 * i, -beta);
            b.set(2 * i, 2 * i + 1, -alpha);
            b.set(2 * i + 1, 2 * i, alpha.clone());
        }
        SkewPencil::new(SkewMatrix::new(a)?, SkewMatrix::new(b)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        2 * self.n
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn a(&self) -> &SkewMatrix {
        &self.a
    }

    pub fn b(&self) -> &SkewMatrix {
        &self.b
    }

    /// The member `u A + v B`.
    pub fn member(&self, u: &FieldElem, v: &FieldElem) -> SkewMatrix {
        let m = self
            .a
            .as_matrix()
            .scale(u)
            .add(&self.b.as_matrix().scale(v));
        SkewMatrix::new(m).expect("a linear combination of skew forms is skew")
    }

    /// Pfaffian of `u A + v B` as an honest binary form of degree `n`,
    /// computed symbolically so it survives fields too small for
    /// interpolation.
    pub fn pfaffian_form(&self) -> BinaryForm {
        let field = self.field();
        let entry = |i: usize, j: usize| {
            BinaryForm::new(
                field,
                vec![
                    self.a.as_matrix().at(i, j).clone(),
                    self.b.as_matrix().at(i, j).clone(),
                ],
            )
        };
        let mask = (1u64 << self.size()) - 1;
        linalg::pfaffian_expand(mask, &entry, &mut HashMap::new())
            .expect("pencil size is even and positive")
    }

    /// Smoothness criterion for the locus of common Lagrangian subspaces:
    /// smooth iff the Pfaffian form splits into `n` distinct linear factors
    /// and every degenerate member has the minimal kernel dimension 2.
    pub fn analyze(&self) -> SmoothnessReport {
        let f = self.pfaffian_form();
        if f.is_zero() {
            return SmoothnessReport {
                verdict: Verdict::Singular,
                pfaffian_form: f,
                roots: Vec::new(),
                residual_degree: 0,
                kernels: Vec::new(),
                failure_reason: Some(FailureReason::LineInDiscriminant),
            };
        }
        let report = binary_form_roots(&f).expect("nonzero form");
        let kernels: Vec<Subspace> = report
            .roots
            .iter()
            .map(|(pt, _)| self.member(pt.u(), pt.v()).as_matrix().kernel())
            .collect();
        let mut verdict = Verdict::Smooth;
        let mut failure = None;
        if let Some(fat) = kernels.iter().map(Subspace::dim).find(|&d| d > 2) {
            // A kernel of dimension 2k forces root multiplicity >= k, so
            // this check must come before the multiplicity check to name
            // the sharper cause.
            verdict = Verdict::Singular;
            failure = Some(FailureReason::FatKernel(fat));
        } else if report.roots.iter().any(|(_, m)| *m > 1) {
            verdict = Verdict::Singular;
            failure = Some(FailureReason::RepeatedRoot);
        } else if report.residual_degree > 0 {
            verdict = Verdict::NonSplit;
        } else {
            let mut span = Subspace::zero(self.field(), self.size());
            for k in &kernels {
                span = span.sum(k).expect("same ambient space");
            }
            if span.dim() != self.size() {
                verdict = Verdict::Singular;
                failure = Some(FailureReason::NotDirectSum);
            }
        }
        SmoothnessReport {
            verdict,
            pfaffian_form: f,
            roots: report.roots,
            residual_degree: report.residual_degree,
            kernels,
            failure_reason: failure,
        }
    }

    /// Simultaneous block diagonalization of a smooth pencil. Requires the
    /// first member to be nondegenerate (no root at `(1:0)`), since the
    /// target normal form is expressed in the given pencil coordinates.
    pub fn standard_form(&self) -> Result<StandardForm, PencilError> {
        let report = self.analyze();
        if report.verdict != Verdict::Smooth {
            return Err(PencilError::NotSmooth);
        }
        let field = self.field();
        if f_at_one_zero(&report.pfaffian_form).is_zero() {
            return Err(PencilError::FirstMemberDegenerate);
        }
        let mut columns: Vec<Vec<FieldElem>> = Vec::new();
        let mut a_values = Vec::new();
        for ((pt, _), kernel) in report.roots.iter().zip(&report.kernels) {
            // v != 0 here because (1:0) is not a root; a = u/v.
            let a_i = pt.u().div(pt.v())?;
            let basis = kernel.basis_vectors();
            if basis.len() != 2 {
                return Err(PencilError::InvariantViolation(
                    "smooth pencil kernel is not 2-dimensional".into(),
                ));
            }
            let (w1, w2) = (&basis[0], &basis[1]);
            let s = self.a.pair(w1, w2);
            if s.is_zero() {
                return Err(PencilError::InvariantViolation(
                    "first member degenerates on a kernel block".into(),
                ));
            }
            let sinv = s.inv()?;
            let w2_scaled: Vec<FieldElem> = w2.iter().map(|x| x * &sinv).collect();
            columns.push(w1.clone());
            columns.push(w2_scaled);
            a_values.push(a_i);
        }
        let m = self.size();
        let p = Matrix::from_fn(field, m, m, |i, j| columns[j][i].clone());
        let form = StandardForm {
            basis_change: p,
            a_values,
        };
        self.check_standard_form(&form)?;
        Ok(form)
    }

    /// Exact postcondition of `standard_form`, surfaced as an error rather
    /// than trusted.
    fn check_standard_form(&self, form: &StandardForm) -> Result<(), PencilError> {
        let field = self.field();
        let p = &form.basis_change;
        let pt = p.transpose();
        let a_std = pt.mul(self.a.as_matrix()).mul(p);
        let b_std = pt.mul(self.b.as_matrix()).mul(p);
        let m = self.size();
        let mut expect_a = Matrix::zero(field, m, m);
        let mut expect_b = Matrix::zero(field, m, m);
        for (i, a_i) in form.a_values.iter().enumerate() {
            expect_a.set(2 * i, 2 * i + 1, field.one());
            expect_a.set(2 * i + 1, 2 * i, field.from_i64(-1));
            expect_b.set(2 * i, 2 * i + 1, -a_i);
            expect_b.set(2 * i + 1, 2 * i, a_i.clone());
        }
        if a_std != expect_a || b_std != expect_b {
            return Err(PencilError::InvariantViolation(
                "basis change does not reproduce the block normal form".into(),
            ));
        }
        Ok(())
    }

    /// True iff `U` has dimension `n` and both members vanish on it.
    pub fn is_lagrangian(&self, u: &Subspace) -> bool {
        if u.ambient_dim() != self.size() || u.field() != self.field() || u.dim() != self.n {
            return false;
        }
        let basis = u.basis_vectors();
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                if !self.a.pair(&basis[i], &basis[j]).is_zero()
                    || !self.b.pair(&basis[i], &basis[j]).is_zero()
                {
                    return false;
                }
            }
        }
        true
    }

    /// Decomposes a Lagrangian of a smooth pencil into the `n` lines it
    /// cuts on the degenerate-member kernels, in root order.
    pub fn split_lagrangian(&self, lagrangian: &Subspace) -> Result<Vec<Subspace>, PencilError> {
        let report = self.analyze();
        if report.verdict != Verdict::Smooth {
            return Err(PencilError::NotSmooth);
        }
        if !self.is_lagrangian(lagrangian) {
            return Err(PencilError::NotLagrangian);
        }
        let mut lines = Vec::new();
        for kernel in &report.kernels {
            let line = lagrangian.intersect(kernel)?;
            if line.dim() != 1 {
                return Err(PencilError::InvariantViolation(
                    "Lagrangian meets a kernel in the wrong dimension".into(),
                ));
            }
            lines.push(line);
        }
        Ok(lines)
    }

    /// Rebuilds a Lagrangian from one line per kernel; inverse to
    /// `split_lagrangian`.
    pub fn assemble_lagrangian(&self, lines: &[Subspace]) -> Result<Subspace, PencilError> {
        let report = self.analyze();
        if report.verdict != Verdict::Smooth {
            return Err(PencilError::NotSmooth);
        }
        if lines.len() != report.kernels.len() {
            return Err(PencilError::BadLine);
        }
        let mut sum = Subspace::zero(self.field(), self.size());
        for (line, kernel) in lines.iter().zip(&report.kernels) {
            if line.dim() != 1 || !line.is_subspace_of(kernel) {
                return Err(PencilError::BadLine);
            }
            sum = sum.sum(line)?;
        }
        if !self.is_lagrangian(&sum) {
            return Err(PencilError::InvariantViolation(
                "assembled subspace is not Lagrangian".into(),
            ));
        }
        Ok(sum)
    }

    /// Exhaustive search for Lagrangian subspaces over a finite field; the
    /// locus of a smooth pencil has exactly `(q+1)^n` points.
    pub fn enumerate_lagrangians(&self) -> Result<LagrangianEnumeration, PencilError> {
        let q = match self.field() {
            Field::Rational => {
                return Err(PencilError::GuardExceeded(
                    "enumeration needs a finite field".into(),
                ))
            }
            Field::Prime(q) => q,
        };
        if self.size() > 8 {
            return Err(PencilError::GuardExceeded(format!(
                "size {} above the exhaustive bound 8",
                self.size()
            )));
        }
        if q > 5 {
            return Err(PencilError::GuardExceeded(format!(
                "field size {q} above the exhaustive bound 5"
            )));
        }
        let mut found = Vec::new();
        for_each_subspace::<()>(self.field(), self.size(), self.n, |s| {
            if self.is_lagrangian(&s) {
                found.push(s);
            }
            ControlFlow::Continue(())
        });
        Ok(LagrangianEnumeration {
            count: found.len() as u64,
            lagrangians: found,
        })
    }
}

fn f_at_one_zero(f: &BinaryForm) -> FieldElem {
    let field = f.field();
    f.eval(&field.one(), &field.zero())
}

/// A multilinear form of multidegree `(1,...,1)` on `(P^1)^n`: one
/// coefficient per choice of coordinate from each factor, indexed by the
/// bitmask whose bit `i` selects the second coordinate of factor `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultilinearForm {
    n: usize,
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl MultilinearForm {
    pub fn new(field: Field, n: usize, coeffs: Vec<FieldElem>) -> MultilinearForm {
        assert!(n >= 1 && coeffs.len() == 1 << n, "need 2^n coefficients");
        assert!(coeffs.iter().all(|c| c.field() == field));
        MultilinearForm { n, field, coeffs }
    }

    pub fn random(field: Field, n: usize, rng: &mut impl Rng) -> MultilinearForm {
        let q = field.characteristic();
        assert!(q > 0, "random forms are drawn over a finite field");
        loop {
            let coeffs: Vec<FieldElem> = (0..1usize << n)
                .map(|_| field.from_i64(rng.gen_range(0..q) as i64))
                .collect();
            if coeffs.iter().any(|c| !c.is_zero()) {
                return MultilinearForm::new(field, n, coeffs);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Evaluates at one point per factor.
    pub fn eval(&self, points: &[ProjPoint1]) -> FieldElem {
        assert_eq!(points.len(), self.n, "one point per factor");
        let mut acc = self.field.zero();
        for (mask, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (i, pt) in points.iter().enumerate() {
                let coord = if mask >> i & 1 == 0 { pt.u() } else { pt.v() };
                term = &term * coord;
            }
            acc = &acc + &term;
        }
        acc
    }

    /// The two coefficient forms on the first `n-1` factors obtained by
    /// splitting off the last factor's coordinates.
    pub fn split_last(&self) -> (MultilinearForm, MultilinearForm) {
        assert!(self.n >= 2, "splitting needs at least two factors");
        let m = self.n - 1;
        let top = 1usize << m;
        let mut c0 = Vec::with_capacity(top);
        let mut c1 = Vec::with_capacity(top);
        for mask in 0..top {
            c0.push(self.coeffs[mask].clone());
            c1.push(self.coeffs[mask | top].clone());
        }
        (
            MultilinearForm::new(self.field, m, c0),
            MultilinearForm::new(self.field, m, c1),
        )
    }
}

/// Point counts behind the blow-up description of a multidegree-(1,...,1)
/// divisor: `|X(F_q)| = (q+1)^(n-1) + q |Z(F_q)|` where `Z` is the common
/// zero locus of the two coefficient forms with respect to the last factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct D3Report {
    pub q: u64,
    pub n: usize,
    pub count_x: u64,
    pub count_z: u64,
    /// `(q+1)^(n-1) + q * count_z`
    pub blowup_count: u64,
}

impl D3Report {
    pub fn identity_holds(&self) -> bool {
        self.count_x == self.blowup_count
    }
}

pub fn d3_point_counts(s: &MultilinearForm) -> Result<D3Report, PencilError> {
    let q = match s.field() {
        Field::Rational => {
            return Err(PencilError::GuardExceeded(
                "point counts need a finite field".into(),
            ))
        }
        Field::Prime(q) => q,
    };
    if s.n() < 2 || s.n() > 4 || q > 5 {
        return Err(PencilError::GuardExceeded(format!(
            "counts are exhaustive only for 2 <= n <= 4 and q <= 5, got n={}, q={q}",
            s.n()
        )));
    }
    let line = proj_line_points(s.field()).expect("finite field");
    let count_x = count_zeros(s, &line);
    let (s0, s1) = s.split_last();
    let mut count_z = 0u64;
    for_each_tuple(&line, s.n() - 1, &mut |pts| {
        if s0.eval(pts).is_zero() && s1.eval(pts).is_zero() {
            count_z += 1;
        }
    });
    let blowup_count = (q + 1).pow(s.n() as u32 - 1) + q * count_z;
    Ok(D3Report {
        q,
        n: s.n(),
        count_x,
        count_z,
        blowup_count,
    })
}

fn count_zeros(s: &MultilinearForm, line: &[ProjPoint1]) -> u64 {
    let mut count = 0u64;
    for_each_tuple(line, s.n(), &mut |pts| {
        if s.eval(pts).is_zero() {
            count += 1;
        }
    });
    count
}

fn for_each_tuple(line: &[ProjPoint1], n: usize, visit: &mut impl FnMut(&[ProjPoint1])) {
    let mut idx = vec![0usize; n];
    loop {
        let pts: Vec<ProjPoint1> = idx.iter().map(|&i| line[i].clone()).collect();
        visit(&pts);
        let mut k = 0;
        loop {
            if k == n {
                return;
            }
            idx[k] += 1;
            if idx[k] < line.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Line count on a quadric fourfold in `P^5` over `F_q`, against the closed
/// formula `(q+1)(q^2+1)(q^2+q+1)` valid for the split quadric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct B4Report {
    pub q: u64,
    pub direct_count: u64,
    pub split_formula_count: u64,
}

impl B4Report {
    pub fn matches_split_formula(&self) -> bool {
        self.direct_count == self.split_formula_count
    }
}

/// The split quadric `x1 x2 + x3 x4 + x5 x6` as an upper-triangle
/// coefficient matrix.
pub fn hyperbolic_quadric(field: Field) -> Matrix {
    let mut m = Matrix::zero(field, 6, 6);
    for i in [0, 2, 4] {
        m.set(i, i + 1, field.one());
        m.set(i + 1, i, field.one());
    }
    m
}

/// Evaluates the quadratic form `sum_{i<=j} Q_ij x_i x_j` read off the
/// diagonal and strict upper triangle of a symmetric matrix. Keeping the
/// off-diagonal coefficients unhalved is what lets the split form exist in
/// characteristic 2.
pub fn quadratic_eval(qmat: &Matrix, x: &[FieldElem]) -> FieldElem {
    let field = qmat.field();
    let mut acc = field.zero();
    for i in 0..qmat.rows() {
        for j in i..qmat.cols() {
            let c = qmat.at(i, j);
            if !c.is_zero() {
                acc = &acc + &(&(c * &x[i]) * &x[j]);
            }
        }
    }
    acc
}

/// Counts 2-dimensional subspaces of `F_q^6` on which the quadratic form
/// vanishes identically, i.e. lines of `P^5` on the quadric.
pub fn b4_line_count(qmat: &Matrix) -> Result<B4Report, PencilError> {
    let q = match qmat.field() {
        Field::Rational => {
            return Err(PencilError::GuardExceeded(
                "line counts need a finite field".into(),
            ))
        }
        Field::Prime(q) => q,
    };
    if qmat.rows() != 6 || qmat.cols() != 6 {
        return Err(LinalgError::NotSquare.into());
    }
    if !qmat.is_symmetric() {
        return Err(LinalgError::NotSymmetric.into());
    }
    if q > 5 {
        return Err(PencilError::GuardExceeded(format!(
            "field size {q} above the exhaustive bound 5"
        )));
    }
    let field = qmat.field();
    let elems = field.elements().expect("finite field");
    let mut direct = 0u64;
    for_each_subspace::<()>(field, 6, 2, |s| {
        // The form vanishes on the plane iff it vanishes on every vector,
        // which is decidable on the q^2 coefficient combinations. (Vanishing
        // on a basis is not enough for a quadratic form.)
        let basis = s.basis_vectors();
        let mut all_zero = true;
        'outer: for c0 in &elems {
            for c1 in &elems {
                let v: Vec<FieldElem> = (0..6)
                    .map(|k| &(c0 * &basis[0][k]) + &(c1 * &basis[1][k]))
                    .collect();
                if !quadratic_eval(qmat, &v).is_zero() {
                    all_zero = false;
                    break 'outer;
                }
            }
        }
        if all_zero {
            direct += 1;
        }
        ControlFlow::Continue(())
    });
    let split_formula_count = (q + 1) * (q * q + 1) * (q * q + q + 1);
    Ok(B4Report {
        q,
        direct_count: direct,
        split_formula_count,
    })
}

/// Product of `|P^1(F_q)|` over the factors: the Lagrangian count of a
/// smooth pencil.
pub fn expected_lagrangian_count(q: u64, n: usize) -> u64 {
    (q + 1).pow(n as u32)
}

/// `|P^(m-1)(F_q)|`, re-exported for the count reports.
pub fn projective_count(q: u64, m: u32) -> u64 {
    proj_space_count(q, m)
}
