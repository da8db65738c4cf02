//! Exact field arithmetic over `Q` and prime fields `F_p`, binary forms in
//! two variables, and projective points of the line.
//!
//! Every element carries its field tag and is kept in canonical form:
//! reduced fractions over `Q`, residues in `[0, p)` over `F_p`. All
//! operations are exact; there is no floating point anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("the zero vector has no projective normalization")]
    ZeroVector,
    #[error("the zero form has no root decomposition")]
    ZeroForm,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse {0:?} as a field element")]
    Parse(String),
    #[error("elements from different fields")]
    FieldMismatch,
}

/// The coefficient field of a computation: `Q` or `F_p` with `p` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Constructs `F_p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field, ScalarError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            Field::Rational => FieldElem::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElem::Residue {
                value: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
        }
    }

    /// All elements of the field in canonical order. Only available for `F_p`.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some((0..*p).map(|v| FieldElem::Residue { value: v, p: *p }).collect()),
        }
    }

    /// Parses the text encoding: `a/b` in lowest terms or a decimal integer
    /// over `Q`; an integer residue over `F_p`.
    pub fn parse(&self, s: &str) -> Result<FieldElem, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        match self {
            Field::Rational => {
                if let Some((num, den)) = s.split_once('/') {
                    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                    if d.is_zero() {
                        return Err(ScalarError::DivisionByZero);
                    }
                    Ok(FieldElem::Rational(BigRational::new(n, d)))
                } else {
                    let n: BigInt = s.parse().map_err(|_| bad())?;
                    Ok(FieldElem::Rational(BigRational::from_integer(n)))
                }
            }
            Field::Prime(p) => {
                let n: i128 = s.parse().map_err(|_| bad())?;
                Ok(FieldElem::Residue {
                    value: n.rem_euclid(*p as i128) as u64,
                    p: *p,
                })
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element in canonical form, tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Rational(_) => Field::Rational,
            FieldElem::Residue { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Rational(r) => FieldElem::Rational(r.recip()),
            FieldElem::Residue { value, p } => FieldElem::Residue {
                value: mod_pow(*value, *p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, rhs: &FieldElem) -> Result<FieldElem, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer representative: the value itself over `F_p`, the numerator of
    /// an integral rational over `Q`.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            FieldElem::Rational(r) if r.is_integer() => Some(r.to_integer()),
            FieldElem::Rational(_) => None,
            FieldElem::Residue { value, .. } => Some(BigInt::from(*value)),
        }
    }
}

fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

fn check_same_field(a: &FieldElem, b: &FieldElem) {
    assert_eq!(a.field(), b.field(), "elements from different fields");
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        check_same_field(self, rhs);
        match (self, rhs) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Residue { value: a, p }, FieldElem::Residue { value: b, .. }) => {
                FieldElem::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self + &(-rhs)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        check_same_field(self, rhs);
        match (self, rhs) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Residue { value: a, p }, FieldElem::Residue { value: b, .. }) => {
                FieldElem::Residue {
                    value: (*a as u128 * *b as u128 % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Rational(a) => FieldElem::Rational(-a),
            FieldElem::Residue { value, p } => FieldElem::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// A point `(u : v)` of the projective line, normalized so the first nonzero
/// coordinate equals 1. Equal projective points normalize identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint1 {
    u: FieldElem,
    v: FieldElem,
}

impl ProjPoint1 {
    pub fn u(&self) -> &FieldElem {
        &self.u
    }

    pub fn v(&self) -> &FieldElem {
        &self.v
    }
}

impl fmt::Display for ProjPoint1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.u, self.v)
    }
}

/// Canonical representative of `(u : v)`; rejects the zero vector.
pub fn normalize_point(u: &FieldElem, v: &FieldElem) -> Result<ProjPoint1, ScalarError> {
    check_same_field(u, v);
    if !u.is_zero() {
        let inv = u.inv()?;
        Ok(ProjPoint1 {
            u: u.field().one(),
            v: v * &inv,
        })
    } else if !v.is_zero() {
        Ok(ProjPoint1 {
            u: u.field().zero(),
            v: v.field().one(),
        })
    } else {
        Err(ScalarError::ZeroVector)
    }
}

/// All points of `P^1(F_p)` in canonical order: `(0:1)`, then `(1:t)` for
/// `t = 0, 1, ..., p-1`.
pub fn proj_line_points(field: Field) -> Option<Vec<ProjPoint1>> {
    let elems = field.elements()?;
    let mut pts = vec![ProjPoint1 {
        u: field.zero(),
        v: field.one(),
    }];
    for t in elems {
        pts.push(ProjPoint1 {
            u: field.one(),
            v: t,
        });
    }
    Some(pts)
}

/// A homogeneous form of degree `n` in two variables `u, v`; `coeffs[i]` is
/// the coefficient of `u^(n-i) v^i`. The zero form is representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    degree: usize,
    coeffs: Vec<FieldElem>,
    field: Field,
}

impl BinaryForm {
    pub fn new(field: Field, coeffs: Vec<FieldElem>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        for c in &coeffs {
            assert_eq!(c.field(), field, "coefficient from the wrong field");
        }
        BinaryForm {
            degree: coeffs.len() - 1,
            coeffs,
            field,
        }
    }

    pub fn zero(field: Field, degree: usize) -> BinaryForm {
        BinaryForm::new(field, vec![field.zero(); degree + 1])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn eval(&self, u: &FieldElem, v: &FieldElem) -> FieldElem {
        let n = self.degree;
        let mut upow = vec![self.field.one()];
        let mut vpow = vec![self.field.one()];
        for i in 0..n {
            upow.push(&upow[i] * u);
            vpow.push(&vpow[i] * v);
        }
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &upow[n - i]) * &vpow[i]);
            }
        }
        acc
    }

    pub fn eval_point(&self, pt: &ProjPoint1) -> FieldElem {
        self.eval(pt.u(), pt.v())
    }

    pub fn scale(&self, c: &FieldElem) -> BinaryForm {
        BinaryForm::new(self.field, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Projective normalization: first nonzero coefficient set to 1.
    pub fn normalize(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero coefficient")),
        }
    }

    pub fn add(&self, rhs: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, rhs.degree, "forms of different degrees");
        BinaryForm::new(
            self.field,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &BinaryForm) -> BinaryForm {
        let mut out = vec![self.field.zero(); self.degree + rhs.degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BinaryForm::new(self.field, out)
    }

    pub fn neg(&self) -> BinaryForm {
        BinaryForm::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    /// The linear form vanishing exactly at the given point of `P^1`.
    pub fn vanishing_at(pt: &ProjPoint1) -> BinaryForm {
        // v0*u - u0*v
        BinaryForm::new(pt.u().field(), vec![pt.v().clone(), -pt.u()])
    }
}

/// Root multiset of a binary form, plus the degree of the factor that did not
/// split over the field (0 when the form splits completely).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootReport {
    pub roots: Vec<(ProjPoint1, usize)>,
    pub residual_degree: usize,
}

impl RootReport {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn is_split(&self) -> bool {
        self.residual_degree == 0
    }
}

/// All roots of `f` in `P^1(k)` with multiplicities. Over `F_p` the line is
/// scanned exhaustively; over `Q` rational roots are found by the rational
/// root bound on the dehomogenization. Multiplicities come from repeated
/// synthetic division, which stays valid in small characteristic.
pub fn binary_form_roots(f: &BinaryForm) -> Result<RootReport, ScalarError> {
    if f.is_zero() {
        return Err(ScalarError::ZeroForm);
    }
    let field = f.field();
    let n = f.degree();
    // Dehomogenize at u = 1: p(x) = sum coeffs[i] x^i with x = v/u.
    let poly: Vec<FieldElem> = f.coeffs().to_vec();
    let deg = poly.iter().rposition(|c| !c.is_zero()).expect("nonzero form");
    let mut roots: Vec<(ProjPoint1, usize)> = Vec::new();
    // (0:1) is the u-adic valuation: monomials below u^(n-deg) are absent.
    if deg < n {
        let inf = normalize_point(&field.zero(), &field.one())?;
        roots.push((inf, n - deg));
    }
    let mut reduced: Vec<FieldElem> = poly[..=deg].to_vec();
    let candidates: Vec<FieldElem> = match field {
        Field::Prime(_) => field.elements().expect("prime field"),
        Field::Rational => rational_root_candidates(&reduced),
    };
    for t in candidates {
        if reduced.len() == 1 {
            break;
        }
        if eval_poly(&reduced, &t).is_zero() {
            let mut mult = 0usize;
            while let Some(quot) = divide_out_root(&reduced, &t) {
                reduced = quot;
                mult += 1;
            }
            let pt = normalize_point(&field.one(), &t)?;
            roots.push((pt, mult));
        }
    }
    roots.sort();
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    Ok(RootReport {
        roots,
        residual_degree: n - total,
    })
}

fn eval_poly(coeffs: &[FieldElem], x: &FieldElem) -> FieldElem {
    let field = x.field();
    let mut acc = field.zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

/// Synthetic division of `p` by `(x - t)`; `None` if `t` is not a root.
fn divide_out_root(coeffs: &[FieldElem], t: &FieldElem) -> Option<Vec<FieldElem>> {
    let field = t.field();
    let d = coeffs.len() - 1;
    if d == 0 {
        return None;
    }
    let mut quotient = vec![field.zero(); d];
    let mut carry = field.zero();
    for i in (1..=d).rev() {
        let q = &coeffs[i] + &carry;
        quotient[i - 1] = q.clone();
        carry = &q * t;
    }
    let rem = &coeffs[0] + &carry;
    if rem.is_zero() {
        Some(quotient)
    } else {
        None
    }
}

/// Rational root candidates a/b of an exact rational polynomial: clear
/// denominators, then a divides the trailing and b the leading coefficient.
fn rational_root_candidates(coeffs: &[FieldElem]) -> Vec<FieldElem> {
    use num_integer::Integer;
    let rationals: Vec<&BigRational> = coeffs
        .iter()
        .map(|c| match c {
            FieldElem::Rational(r) => r,
            _ => unreachable!("rational field expected"),
        })
        .collect();
    let mut lcm = BigInt::one();
    for r in &rationals {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = rationals
        .iter()
        .map(|r| (*r * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    // Strip x^k so the trailing coefficient is nonzero; 0 is tested separately.
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let trailing = ints[low].abs();
    let leading = ints.last().expect("nonempty").abs();
    let mut out: Vec<FieldElem> = vec![Field::Rational.zero()];
    for a in divisors(&trailing) {
        for b in divisors(&leading) {
            let r = BigRational::new(a.clone(), b.clone());
            for signed in [r.clone(), -r] {
                let elem = FieldElem::Rational(signed);
                if !out.contains(&elem) {
                    out.push(elem);
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            large.push(n / &d);
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small.dedup();
    small
}
