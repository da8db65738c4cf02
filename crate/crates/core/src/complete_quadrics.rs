//! The variety of complete quadric surfaces: pairs `(C, C')` of nonzero
//! symmetric 3x3 matrices with `C C' = t I`, its four orbits, the
//! three-dimensional Lie algebra `g(y)` attached to each point, the induced
//! five-dimensional subspace `phi(y)` of the traceless matrices, quadric
//! reconstruction from `g`, and exhaustive point counts over small fields.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{adjugate3, proj_space_count, proj_space_points, LinalgError, Matrix, Subspace};
use crate::scalars::{Field, FieldElem, ScalarError};
use crate::trivectors::{
    bracket, is_isotropic, matrix_to_coords, sl3_basis, trace_form, TrivectorError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadricError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("C C' is not a scalar matrix, so the pair lies off the variety")]
    NotOnY,
    #[error("the pair satisfies no orbit description")]
    Unclassifiable,
    #[error("the subalgebra span has dimension {0}, expected 3")]
    RankNotThree(usize),
    #[error("subalgebra contains a matrix with nonzero trace")]
    NotTraceless,
    #[error("subalgebra is not closed under the bracket")]
    NotClosed,
    #[error("the quadric is not determined: the solution space has dimension {0}")]
    NotUnique(usize),
    #[error("no element of the subalgebra annihilates the given (co)vector")]
    NoAnnihilator,
    #[error("characteristic {0} is excluded here")]
    BadCharacteristic(u64),
    #[error("exhaustive count refused: {0}")]
    GuardExceeded(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Trivector(#[from] TrivectorError),
}

/// A point of the complete-quadrics variety: `C C' = t I` with both factors
/// symmetric and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CQPoint {
    c: Matrix,
    cp: Matrix,
    t: FieldElem,
}

/// The four orbits, by corank of the quadric and its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrbitLabel {
    /// Smooth quadrics: `C` invertible, `C'` proportional to `adj(C)`.
    Y0,
    /// Rank-2 quadrics with their distinguished double plane.
    Y1,
    /// Double planes with a distinguished rank-2 dual.
    Y2,
    /// Double plane with a marked double point on it.
    Y3,
}

impl OrbitLabel {
    pub fn all() -> [OrbitLabel; 4] {
        [OrbitLabel::Y0, OrbitLabel::Y1, OrbitLabel::Y2, OrbitLabel::Y3]
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrbitLabel::Y0 => "Y0",
            OrbitLabel::Y1 => "Y1",
            OrbitLabel::Y2 => "Y2",
            OrbitLabel::Y3 => "Y3",
        }
    }
}

impl CQPoint {
    /// Membership test and constructor in one: checks symmetry, nonzeroness
    /// and the scalar-product equation, extracting `t`.
    pub fn new(c: Matrix, cp: Matrix) -> Result<CQPoint, QuadricError> {
        if c.rows() != 3 || c.cols() != 3 || cp.rows() != 3 || cp.cols() != 3 {
            return Err(LinalgError::NotSquare.into());
        }
        if !c.is_symmetric() || !cp.is_symmetric() {
            return Err(QuadricError::NotSymmetric);
        }
        if c.is_zero() || cp.is_zero() {
            return Err(QuadricError::ZeroMatrix);
        }
        let field = c.field();
        let prod = c.mul(&cp);
        let t = prod.at(0, 0).clone();
        let scalar = Matrix::identity(field, 3).scale(&t);
        if prod != scalar {
            return Err(QuadricError::NotOnY);
        }
        Ok(CQPoint { c, cp, t })
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn cp(&self) -> &Matrix {
        &self.cp
    }

    pub fn t(&self) -> &FieldElem {
        &self.t
    }

    pub fn field(&self) -> Field {
        self.c.field()
    }

    /// Transport by `g` in the linear group: `(C, C') -> (g C g^T, (g^-1)^T C' g^-1)`.
    /// Membership is preserved with the same `t`.
    pub fn transport(&self, g: &Matrix) -> Result<CQPoint, QuadricError> {
        let ginv = g.inverse()?;
        let c = g.mul(&self.c).mul(&g.transpose());
        let cp = ginv.transpose().mul(&self.cp).mul(&ginv);
        CQPoint::new(c, cp)
    }

    /// Canonical projective representative: each factor scaled so its first
    /// nonzero entry (row-major) is 1. Two pairs describe the same point of
    /// the variety iff they normalize identically.
    pub fn normalized(&self) -> CQPoint {
        let scale_to_lead = |m: &Matrix| {
            let lead = (0..9)
                .map(|k| m.at(k / 3, k % 3))
                .find(|e| !e.is_zero())
                .expect("nonzero matrix");
            m.scale(&lead.inv().expect("nonzero lead"))
        };
        let c = scale_to_lead(&self.c);
        let cp = scale_to_lead(&self.cp);
        CQPoint::new(c, cp).expect("rescaling preserves membership")
    }
}

/// Representative points of the four orbits.
pub fn orbit_representative(field: Field, label: OrbitLabel) -> CQPoint {
    let diag = |a: i64, b: i64, c: i64| {
        let mut m = Matrix::zero(field, 3, 3);
        m.set(0, 0, field.from_i64(a));
        m.set(1, 1, field.from_i64(b));
        m.set(2, 2, field.from_i64(c));
        m
    };
    let (c, cp) = match label {
        OrbitLabel::Y0 => (diag(1, 1, 1), diag(1, 1, 1)),
        OrbitLabel::Y1 => (diag(1, 1, 0), diag(0, 0, 1)),
        OrbitLabel::Y2 => (diag(1, 0, 0), diag(0, 1, 1)),
        OrbitLabel::Y3 => (diag(1, 0, 0), diag(0, 0, 1)),
    };
    CQPoint::new(c, cp).expect("orbit representatives lie on the variety")
}

/// Sorts a point into its orbit by the rank pair, verifying the stated
/// shape of each orbit rather than assuming it.
pub fn orbit_classify(y: &CQPoint) -> Result<OrbitLabel, QuadricError> {
    let rank_c = y.c.rank();
    let rank_cp = y.cp.rank();
    match rank_c {
        3 => {
            // The dual must be the inverse quadric up to scale.
            if rank_cp == 3 && proportional(&y.cp, &adjugate3(&y.c)) {
                Ok(OrbitLabel::Y0)
            } else {
                Err(QuadricError::Unclassifiable)
            }
        }
        2 => {
            if rank_cp == 1 && proportional(&y.cp, &adjugate3(&y.c)) {
                Ok(OrbitLabel::Y1)
            } else {
                Err(QuadricError::Unclassifiable)
            }
        }
        1 => {
            if rank_cp == 2 && proportional(&y.c, &adjugate3(&y.cp)) {
                Ok(OrbitLabel::Y2)
            } else if rank_cp == 1 && y.c.mul(&y.cp).is_zero() {
                Ok(OrbitLabel::Y3)
            } else {
                Err(QuadricError::Unclassifiable)
            }
        }
        _ => Err(QuadricError::Unclassifiable),
    }
}

fn proportional(a: &Matrix, b: &Matrix) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let lead = (0..9).find(|k| !a.at(k / 3, k % 3).is_zero()).expect("nonzero");
    let (i, j) = (lead / 3, lead % 3);
    if b.at(i, j).is_zero() {
        return false;
    }
    let ratio = b.at(i, j).div(a.at(i, j)).expect("nonzero");
    a.scale(&ratio) == *b
}

/// The three-dimensional Lie algebra attached to a point, spanned inside
/// the 3x3 matrices by `C xi` and `xi C'` for skew `xi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraG {
    basis: Vec<Matrix>,
    span: Subspace, // inside the 9-dimensional coordinate space
}

impl SubalgebraG {
    /// Validates a basis directly: three independent traceless matrices
    /// closed under the bracket.
    pub fn from_basis(matrices: Vec<Matrix>) -> Result<SubalgebraG, QuadricError> {
        let field = matrices
            .first()
            .map(Matrix::field)
            .ok_or(QuadricError::RankNotThree(0))?;
        let span = Subspace::from_vectors(
            field,
            9,
            matrices.iter().map(flatten3).collect(),
        );
        if span.dim() != 3 {
            return Err(QuadricError::RankNotThree(span.dim()));
        }
        let basis: Vec<Matrix> = span.basis_vectors().iter().map(|v| unflatten3(field, v)).collect();
        for m in &basis {
            if !m.trace().is_zero() {
                return Err(QuadricError::NotTraceless);
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let br = bracket(&basis[i], &basis[j]);
                if !span.contains(&flatten3(&br)) {
                    return Err(QuadricError::NotClosed);
                }
            }
        }
        Ok(SubalgebraG { basis, span })
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn field(&self) -> Field {
        self.basis[0].field()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.span.contains(&flatten3(m))
    }
}

fn flatten3(m: &Matrix) -> Vec<FieldElem> {
    (0..9).map(|k| m.at(k / 3, k % 3).clone()).collect()
}

fn unflatten3(field: Field, v: &[FieldElem]) -> Matrix {
    Matrix::from_fn(field, 3, 3, |i, j| v[i * 3 + j].clone())
}

fn skew_basis(field: Field) -> Vec<Matrix> {
    // E12 - E21, E13 - E31, E23 - E32.
    let mk = |i: usize, j: usize| {
        let mut m = Matrix::zero(field, 3, 3);
        m.set(i, j, field.one());
        m.set(j, i, field.from_i64(-1));
        m
    };
    vec![mk(0, 1), mk(0, 2), mk(1, 2)]
}

/// Computes `g(y)`, failing loudly if the span has the wrong dimension or
/// breaks the traceless/bracket invariants.
pub fn g_subalgebra(y: &CQPoint) -> Result<SubalgebraG, QuadricError> {
    let field = y.field();
    let mut generators = Vec::with_capacity(6);
    for xi in skew_basis(field) {
        generators.push(y.c.mul(&xi));
        generators.push(xi.mul(&y.cp));
    }
    let span = Subspace::from_vectors(field, 9, generators.iter().map(flatten3).collect());
    if span.dim() != 3 {
        return Err(QuadricError::RankNotThree(span.dim()));
    }
    SubalgebraG::from_basis(generators)
}

/// The image of a point under the embedding into the Grassmannian of
/// 5-planes: the orthogonal complement of `g(y)` inside the traceless
/// matrices with respect to the pairing `(x, y) -> Tr(x y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiImage {
    pub subspace: Subspace,
    pub plucker: Vec<FieldElem>,
}

/// Gram matrix of the trace pairing on the fixed basis of the traceless
/// matrices; nondegenerate away from characteristics 2 and 3.
pub fn trace_gram(field: Field) -> Result<Matrix, QuadricError> {
    let p = field.characteristic();
    if p == 2 || p == 3 {
        return Err(QuadricError::BadCharacteristic(p));
    }
    let basis = sl3_basis(field);
    Ok(Matrix::from_fn(field, 8, 8, |i, j| {
        basis[i].mul(&basis[j]).trace()
    }))
}

pub fn phi(y: &CQPoint) -> Result<PhiImage, QuadricError> {
    let field = y.field();
    let gram = trace_gram(field)?;
    let g = g_subalgebra(y)?;
    let coords: Vec<Vec<FieldElem>> = g
        .basis()
        .iter()
        .map(matrix_to_coords)
        .collect::<Result<_, _>>()?;
    let g_in_coords = Subspace::from_vectors(field, 8, coords);
    let perp = g_in_coords.orth_complement(&gram)?;
    if perp.dim() != 5 {
        return Err(QuadricError::RankNotThree(perp.dim()));
    }
    let plucker = perp.plucker()?;
    Ok(PhiImage {
        subspace: perp,
        plucker,
    })
}

/// Recovers the quadric preserved by a subalgebra: symmetric `q` with
/// `x^T q + q x = 0` for all `x` in `g`. On the variety the solution line
/// is spanned by the dual factor `C'`.
pub fn reconstruct_quadric(g: &SubalgebraG) -> Result<Matrix, QuadricError> {
    let field = g.field();
    // Unknowns: the 6 upper-triangle entries of q.
    let unknowns: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let mut rows = Vec::new();
    for x in g.basis() {
        // Equation entries of x^T q + q x, one row per matrix position.
        for r in 0..3 {
            for c in 0..3 {
                let mut row = vec![field.zero(); 6];
                for (u, &(a, b)) in unknowns.iter().enumerate() {
                    // q_{ab} contributes to (x^T q)_{rc} when a == r via x^T_{r a'}...
                    // expand (x^T q)_{rc} = sum_k x_{kr} q_{kc}, (q x)_{rc} = sum_k q_{rk} x_{kc}.
                    let mut coeff = field.zero();
                    for k in 0..3 {
                        if (k, c) == (a, b) || (k, c) == (b, a) {
                            coeff = &coeff + x.at(k, r);
                        }
                        if (r, k) == (a, b) || (r, k) == (b, a) {
                            coeff = &coeff + x.at(k, c);
                        }
                    }
                    row[u] = coeff;
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(field, rows);
    let kernel = system.kernel();
    if kernel.dim() != 1 {
        return Err(QuadricError::NotUnique(kernel.dim()));
    }
    let v = kernel.basis_vectors().remove(0);
    let mut q = Matrix::zero(field, 3, 3);
    for (u, &(a, b)) in unknowns.iter().enumerate() {
        q.set(a, b, v[u].clone());
        if a != b {
            q.set(b, a, v[u].clone());
        }
    }
    Ok(q)
}

/// An element of `g` annihilating the given vector (`x v = 0`) or covector
/// (`v^T x = 0`).
pub fn annihilator_element(
    g: &SubalgebraG,
    v: &[FieldElem],
    covector: bool,
) -> Result<Matrix, QuadricError> {
    assert_eq!(v.len(), 3, "vectors live in dimension 3");
    let field = g.field();
    // Rows: the 3 output coordinates; columns: coefficients on the basis.
    let system = Matrix::from_fn(field, 3, 3, |out, b| {
        let x = &g.basis()[b];
        let mut acc = field.zero();
        for k in 0..3 {
            let entry = if covector { x.at(k, out) } else { x.at(out, k) };
            acc = &acc + &(entry * &v[k]);
        }
        acc
    });
    let kernel = system.kernel();
    if kernel.dim() == 0 {
        return Err(QuadricError::NoAnnihilator);
    }
    let coeffs = kernel.basis_vectors().remove(0);
    let mut x = Matrix::zero(field, 3, 3);
    for (c, b) in coeffs.iter().zip(g.basis()) {
        x = x.add(&b.scale(c));
    }
    Ok(x)
}

/// Exhaustive point count over `F_q` against the closed formula
/// `|P^5| + (q + q^2) |P^2|` from the two-step blow-up description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YCountReport {
    pub q: u64,
    pub direct_count: u64,
    pub formula_count: u64,
    /// Populated only on a mismatch: the directly enumerated points, for
    /// inspection rather than silent failure.
    pub mismatch_points: Option<Vec<CQPoint>>,
}

impl YCountReport {
    pub fn matches(&self) -> bool {
        self.direct_count == self.formula_count
    }
}

/// Symmetric matrix from its 6 upper-triangle coordinates
/// `(c00, c01, c02, c11, c12, c22)`.
pub fn symmetric_from_coords(field: Field, v: &[FieldElem]) -> Matrix {
    assert_eq!(v.len(), 6);
    let mut m = Matrix::zero(field, 3, 3);
    let idx: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    for (k, &(i, j)) in idx.iter().enumerate() {
        m.set(i, j, v[k].clone());
        if i != j {
            m.set(j, i, v[k].clone());
        }
    }
    m
}

pub fn y_point_count(field: Field) -> Result<YCountReport, QuadricError> {
    let q = match field {
        Field::Rational => {
            return Err(QuadricError::GuardExceeded(
                "point counts need a finite field".into(),
            ))
        }
        Field::Prime(q) => q,
    };
    if q > 3 {
        return Err(QuadricError::GuardExceeded(format!(
            "field size {q} above the exhaustive bound 3"
        )));
    }
    // Projective classes of nonzero symmetric matrices on both sides.
    let reps: Vec<Matrix> = proj_space_points(field, 6)
        .into_iter()
        .map(|v| symmetric_from_coords(field, &v))
        .collect();
    let mut direct = 0u64;
    let mut points = Vec::new();
    for c in &reps {
        for cp in &reps {
            if let Ok(p) = CQPoint::new(c.clone(), cp.clone()) {
                direct += 1;
                points.push(p);
            }
        }
    }
    let formula = proj_space_count(q, 6) + (q + q * q) * proj_space_count(q, 3);
    Ok(YCountReport {
        q,
        direct_count: direct,
        formula_count: formula,
        mismatch_points: if direct == formula { None } else { Some(points) },
    })
}

/// Configuration for the randomized embedding verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    pub seed: u64,
    /// Samples drawn per orbit over the finite field; 0 keeps only the four
    /// exact representatives over the rationals.
    pub budget: usize,
    pub prime: u64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        EmbeddingConfig {
            seed: 0,
            budget: 100,
            prime: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub witness: Option<String>,
}

impl CheckOutcome {
    fn new(name: &str) -> CheckOutcome {
        CheckOutcome {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            witness: None,
        }
    }

    fn pass(&mut self) {
        self.passed += 1;
    }

    fn fail(&mut self, witness: String) {
        self.failed += 1;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub seed: u64,
    pub budget: usize,
    pub prime: u64,
    pub samples: u64,
    pub checks: Vec<CheckOutcome>,
}

impl EmbeddingReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

/// Runs the full battery of structural checks on the four exact orbit
/// representatives over `Q` and on seeded random orbit samples over `F_p`:
/// the subalgebra has rank 3, is traceless and bracket-closed, its trace
/// complement has dimension 5 and is isotropic for the invariant trivector,
/// the quadric reconstructed from `g` is the dual factor (the adjugate, on
/// the open orbit), classification is transport-stable, and distinct points
/// get distinct Plucker images.
pub fn verify_embedding(config: &EmbeddingConfig) -> Result<EmbeddingReport, QuadricError> {
    if config.prime == 2 || config.prime == 3 {
        return Err(QuadricError::BadCharacteristic(config.prime));
    }
    let fp = Field::prime(config.prime)?;
    let mut checks = vec![
        CheckOutcome::new("subalgebra-rank-3"),
        CheckOutcome::new("subalgebra-traceless"),
        CheckOutcome::new("subalgebra-bracket-closed"),
        CheckOutcome::new("phi-dimension-5"),
        CheckOutcome::new("phi-isotropic-for-trace-form"),
        CheckOutcome::new("reconstruction-is-dual-factor"),
        CheckOutcome::new("reconstruction-is-adjugate-on-open-orbit"),
        CheckOutcome::new("classification-transport-stable"),
        CheckOutcome::new("phi-injective"),
    ];
    let mut samples = 0u64;
    // Plucker images per field, for the global injectivity check.
    let mut images: Vec<(Field, CQPoint, Vec<FieldElem>)> = Vec::new();

    let run_point = |y: &CQPoint,
                         label: OrbitLabel,
                         checks: &mut Vec<CheckOutcome>,
                         images: &mut Vec<(Field, CQPoint, Vec<FieldElem>)>| {
        let field = y.field();
        let witness = |msg: &str| {
            let mut w = format!("orbit {} over {:?}: {msg}", label.name(), field);
            let _ = write!(w, "; C = {:?}", flatten_display(&y.c));
            let _ = write!(w, "; C' = {:?}", flatten_display(&y.cp));
            w
        };
        let g = match g_subalgebra(y) {
            Ok(g) => {
                checks[0].pass();
                checks[1].pass();
                checks[2].pass();
                g
            }
            Err(e) => {
                let idx = match e {
                    QuadricError::RankNotThree(_) => 0,
                    QuadricError::NotTraceless => 1,
                    _ => 2,
                };
                checks[idx].fail(witness(&e.to_string()));
                return;
            }
        };
        match phi(y) {
            Ok(image) => {
                checks[3].pass();
                let lambda = trace_form(field).expect("characteristic checked");
                if is_isotropic(&lambda, &image.subspace) {
                    checks[4].pass();
                } else {
                    checks[4].fail(witness("phi image is not isotropic"));
                }
                images.push((field, y.normalized(), image.plucker));
            }
            Err(e) => checks[3].fail(witness(&e.to_string())),
        }
        match reconstruct_quadric(&g) {
            Ok(q) => {
                if proportional(&q, &y.cp) {
                    checks[5].pass();
                } else {
                    checks[5].fail(witness("reconstructed quadric is not the dual factor"));
                }
                if label == OrbitLabel::Y0 {
                    if proportional(&q, &adjugate3(&y.c)) {
                        checks[6].pass();
                    } else {
                        checks[6].fail(witness("reconstruction differs from the adjugate"));
                    }
                }
            }
            Err(e) => checks[5].fail(witness(&e.to_string())),
        }
        match orbit_classify(y) {
            Ok(found) if found == label => checks[7].pass(),
            Ok(found) => checks[7].fail(witness(&format!(
                "classified as {} instead of {}",
                found.name(),
                label.name()
            ))),
            Err(e) => checks[7].fail(witness(&e.to_string())),
        }
    };

    for label in OrbitLabel::all() {
        let y = orbit_representative(Field::Rational, label);
        run_point(&y, label, &mut checks, &mut images);
        samples += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for label in OrbitLabel::all() {
        let rep = orbit_representative(fp, label);
        for _ in 0..config.budget {
            let g = random_invertible(fp, &mut rng);
            let y = rep.transport(&g)?;
            run_point(&y, label, &mut checks, &mut images);
            samples += 1;
        }
    }
    // Injectivity: same Plucker image forces the same normalized point.
    let mut by_image: BTreeMap<(String, String), Vec<&CQPoint>> = BTreeMap::new();
    for (field, point, plucker) in &images {
        let key = (
            format!("{field:?}"),
            plucker.iter().map(FieldElem::to_string).collect::<Vec<_>>().join(","),
        );
        by_image.entry(key).or_default().push(point);
    }
    let inj = &mut checks[8];
    for group in by_image.values() {
        let all_same = group.windows(2).all(|w| w[0] == w[1]);
        if all_same {
            inj.passed += 1;
        } else {
            inj.fail(format!(
                "{} distinct points share one Plucker image",
                group.len()
            ));
        }
    }
    Ok(EmbeddingReport {
        seed: config.seed,
        budget: config.budget,
        prime: config.prime,
        samples,
        checks,
    })
}

fn flatten_display(m: &Matrix) -> String {
    (0..9)
        .map(|k| m.at(k / 3, k % 3).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Uniform invertible 3x3 matrix by rejection; draw order is row-major,
/// which keeps seeded runs reproducible.
pub fn random_invertible(field: Field, rng: &mut impl Rng) -> Matrix {
    let q = field.characteristic();
    assert!(q > 0, "rejection sampling needs a finite field");
    loop {
        let m = Matrix::from_fn(field, 3, 3, |_, _| {
            field.from_i64(rng.gen_range(0..q) as i64)
        });
        if !m.det().expect("square").is_zero() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    fn diag(field: Field, a: i64, b: i64, c: i64) -> Matrix {
        let mut m = Matrix::zero(field, 3, 3);
        m.set(0, 0, field.from_i64(a));
        m.set(1, 1, field.from_i64(b));
        m.set(2, 2, field.from_i64(c));
        m
    }

    #[test]
    fn membership_accepts_scaled_inverse_pairs() {
        let c = Matrix::from_i64_rows(q(), &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let cp = adjugate3(&c);
        let y = CQPoint::new(c.clone(), cp).unwrap();
        assert_eq!(y.t(), &c.det().unwrap());
    }

    #[test]
    fn membership_rejects_non_scalar_products() {
        let c = diag(q(), 1, 1, 0);
        let cp = diag(q(), 1, 0, 0);
        assert_eq!(CQPoint::new(c, cp), Err(QuadricError::NotOnY));
        let asym = Matrix::from_i64_rows(q(), &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(
            CQPoint::new(asym, diag(q(), 1, 1, 1)),
            Err(QuadricError::NotSymmetric)
        );
        assert_eq!(
            CQPoint::new(Matrix::zero(q(), 3, 3), diag(q(), 1, 1, 1)),
            Err(QuadricError::ZeroMatrix)
        );
    }

    #[test]
    fn representatives_classify_to_their_orbits() {
        for label in OrbitLabel::all() {
            let y = orbit_representative(q(), label);
            assert_eq!(orbit_classify(&y).unwrap(), label);
        }
    }

    #[test]
    fn classification_is_transport_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for label in OrbitLabel::all() {
            let rep = orbit_representative(f7(), label);
            for _ in 0..10 {
                let g = random_invertible(f7(), &mut rng);
                let y = rep.transport(&g).unwrap();
                assert_eq!(orbit_classify(&y).unwrap(), label, "label {label:?}");
            }
        }
    }

    #[test]
    fn subalgebra_of_smooth_quadric_is_skew_matrices() {
        let y = orbit_representative(q(), OrbitLabel::Y0);
        let g = g_subalgebra(&y).unwrap();
        for xi in skew_basis(q()) {
            assert!(g.contains(&xi));
        }
    }

    #[test]
    fn subalgebra_of_deepest_orbit_is_strictly_upper_triangular() {
        let y = orbit_representative(q(), OrbitLabel::Y3);
        let g = g_subalgebra(&y).unwrap();
        let e = |i: usize, j: usize| {
            let mut m = Matrix::zero(q(), 3, 3);
            m.set(i, j, q().one());
            m
        };
        for m in [e(0, 1), e(0, 2), e(1, 2)] {
            assert!(g.contains(&m), "missing strictly upper generator");
        }
        assert!(!g.contains(&e(1, 0)));
    }

    #[test]
    fn phi_images_are_five_dimensional_isotropic_and_distinct() {
        let lambda = trace_form(q()).unwrap();
        let mut pluckers = Vec::new();
        for label in OrbitLabel::all() {
            let y = orbit_representative(q(), label);
            let image = phi(&y).unwrap();
            assert_eq!(image.subspace.dim(), 5);
            assert!(is_isotropic(&lambda, &image.subspace));
            pluckers.push(image.plucker);
        }
        pluckers.sort();
        pluckers.dedup();
        assert_eq!(pluckers.len(), 4);
    }

    #[test]
    fn phi_guards_small_characteristic() {
        let f2 = Field::prime(2).unwrap();
        let y = orbit_representative(f2, OrbitLabel::Y0);
        assert_eq!(phi(&y), Err(QuadricError::BadCharacteristic(2)));
    }

    #[test]
    fn reconstruction_returns_the_dual_factor_on_every_orbit() {
        for label in OrbitLabel::all() {
            let y = orbit_representative(q(), label);
            let g = g_subalgebra(&y).unwrap();
            let rec = reconstruct_quadric(&g).unwrap();
            assert!(proportional(&rec, y.cp()), "orbit {label:?}");
        }
    }

    #[test]
    fn reconstruction_on_open_orbit_is_the_adjugate() {
        let c = Matrix::from_i64_rows(q(), &[&[1, 1, 0], &[1, 3, 1], &[0, 1, 2]]);
        let y = CQPoint::new(c.clone(), adjugate3(&c)).unwrap();
        assert_eq!(orbit_classify(&y).unwrap(), OrbitLabel::Y0);
        let rec = reconstruct_quadric(&g_subalgebra(&y).unwrap()).unwrap();
        assert!(proportional(&rec, &adjugate3(&c)));
    }

    #[test]
    fn annihilator_of_vector_in_skew_algebra() {
        let y = orbit_representative(q(), OrbitLabel::Y0);
        let g = g_subalgebra(&y).unwrap();
        let w = [q().from_i64(1), q().from_i64(2), q().from_i64(-1)];
        let x = annihilator_element(&g, &w, false).unwrap();
        assert!(g.contains(&x));
        assert!(!x.is_zero());
        assert!(x.mul_vec(&w).iter().all(FieldElem::is_zero));
        // Covector side.
        let x2 = annihilator_element(&g, &w, true).unwrap();
        let xt = x2.transpose();
        assert!(xt.mul_vec(&w).iter().all(FieldElem::is_zero));
    }

    #[test]
    fn annihilator_absent_for_generic_vector_in_borel_like_algebra() {
        // span{E11-E22, E22-E33, E12} is closed, traceless, 3-dimensional,
        // and no nonzero combination kills (1,1,1).
        let h1 = diag(q(), 1, -1, 0);
        let h2 = diag(q(), 0, 1, -1);
        let mut e12 = Matrix::zero(q(), 3, 3);
        e12.set(0, 1, q().one());
        let g = SubalgebraG::from_basis(vec![h1, h2, e12]).unwrap();
        let w = vec![q().one(); 3];
        assert_eq!(
            annihilator_element(&g, &w, false),
            Err(QuadricError::NoAnnihilator)
        );
    }

    #[test]
    fn from_basis_rejects_bad_spans() {
        let e12 = {
            let mut m = Matrix::zero(q(), 3, 3);
            m.set(0, 1, q().one());
            m
        };
        let e21 = e12.transpose();
        // Not closed: [E12, E21] = E11 - E22 is outside span{E12, E21, E13}.
        let e13 = {
            let mut m = Matrix::zero(q(), 3, 3);
            m.set(0, 2, q().one());
            m
        };
        assert_eq!(
            SubalgebraG::from_basis(vec![e12.clone(), e21, e13.clone()]),
            Err(QuadricError::NotClosed)
        );
        // Not full rank.
        assert_eq!(
            SubalgebraG::from_basis(vec![e12.clone(), e12.scale(&q().from_i64(2)), e13]),
            Err(QuadricError::RankNotThree(2))
        );
        // Not traceless.
        assert_eq!(
            SubalgebraG::from_basis(vec![diag(q(), 1, 0, 0), diag(q(), 0, 1, 0), diag(q(), 0, 0, 1)]),
            Err(QuadricError::NotTraceless)
        );
    }

    #[test]
    fn point_count_matches_formula_over_f2() {
        let report = y_point_count(Field::prime(2).unwrap()).unwrap();
        assert_eq!(report.direct_count, 105);
        assert_eq!(report.formula_count, 105);
        assert!(report.matches());
        assert!(report.mismatch_points.is_none());
    }

    #[test]
    fn embedding_verification_smoke() {
        let report = verify_embedding(&EmbeddingConfig {
            seed: 1,
            budget: 3,
            prime: 7,
        })
        .unwrap();
        assert!(report.all_passed(), "failing checks: {:?}", report.checks);
        assert_eq!(report.samples, 4 + 4 * 3);
        assert_eq!(
            verify_embedding(&EmbeddingConfig {
                seed: 0,
                budget: 1,
                prime: 3
            }),
            Err(QuadricError::BadCharacteristic(3))
        );
    }

    #[test]
    fn transport_keeps_membership_and_t() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let y = orbit_representative(f7(), OrbitLabel::Y0);
        for _ in 0..5 {
            let g = random_invertible(f7(), &mut rng);
            let moved = y.transport(&g).unwrap();
            assert_eq!(moved.t(), y.t());
        }
    }
}
