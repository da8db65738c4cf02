//! Property suites over randomly drawn exact values: field axioms, the
//! Pfaffian transformation law, subspace dimension bookkeeping, and root
//! accounting for binary forms.

use kuechle_core::linalg::pfaffian;
use kuechle_core::scalars::binary_form_roots;
use kuechle_core::{BinaryForm, Field, FieldElem, Matrix, SkewMatrix, Subspace};
use proptest::collection::vec;
use proptest::prelude::*;

fn rational(n: i64, d: i64) -> FieldElem {
    let f = Field::Rational;
    f.from_i64(n).div(&f.from_i64(d)).expect("nonzero denominator")
}

fn residues(p: u64) -> impl Strategy<Value = FieldElem> {
    let field = Field::prime(p).expect("prime modulus");
    (0..p as i64).prop_map(move |v| field.from_i64(v))
}

fn skew_from(field: &Field, n: usize, upper: &[i64]) -> SkewMatrix {
    let elems: Vec<FieldElem> = upper.iter().map(|&v| field.from_i64(v)).collect();
    SkewMatrix::from_upper(field.clone(), n, &elems)
}

proptest! {
    #[test]
    fn rational_axioms(
        (an, ad) in (-60i64..60, 1i64..12),
        (bn, bd) in (-60i64..60, 1i64..12),
        (cn, cd) in (-60i64..60, 1i64..12),
    ) {
        let (a, b, c) = (rational(an, ad), rational(bn, bd), rational(cn, cd));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.inv().unwrap(), Field::Rational.one());
        }
    }

    #[test]
    fn residue_axioms(a in residues(101), b in residues(101), c in residues(101)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b - &c), &(&a * &b) - &(&a * &c));
        if !a.is_zero() {
            let field = Field::prime(101).unwrap();
            prop_assert_eq!(&a * &a.inv().unwrap(), field.one());
            prop_assert_eq!(a.div(&a).unwrap(), field.one());
        }
    }

    // pf(P^T A P) = det(P) pf(A), including singular P.
    #[test]
    fn pfaffian_transform_law(
        upper in vec(0i64..7, 15),
        change in vec(0i64..7, 36),
    ) {
        let field = Field::prime(7).unwrap();
        let a = skew_from(&field, 6, &upper);
        let p = Matrix::from_fn(field.clone(), 6, 6, |i, j| {
            field.from_i64(change[6 * i + j])
        });
        let congruent = p.transpose().mul(a.as_matrix()).mul(&p);
        let lhs = pfaffian(&SkewMatrix::new(congruent).unwrap());
        let rhs = &p.det().unwrap() * &pfaffian(&a);
        prop_assert_eq!(lhs, rhs);
    }

    // dim(U + W) + dim(U ∩ W) = dim U + dim W.
    #[test]
    fn subspace_dimension_formula(
        uraw in vec(0i64..5, 15),
        wraw in vec(0i64..5, 15),
    ) {
        let field = Field::prime(5).unwrap();
        let rows = |raw: &[i64]| -> Vec<Vec<FieldElem>> {
            raw.chunks(5)
                .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
                .collect()
        };
        let u = Subspace::from_vectors(field.clone(), 5, rows(&uraw));
        let w = Subspace::from_vectors(field.clone(), 5, rows(&wraw));
        let sum = u.sum(&w).unwrap();
        let meet = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(u.is_subspace_of(&sum) && w.is_subspace_of(&sum));
        prop_assert!(meet.is_subspace_of(&u) && meet.is_subspace_of(&w));
    }

    // Multiplicities plus the unsplit remainder account for the degree,
    // and every reported root vanishes.
    #[test]
    fn binary_form_root_accounting(coeffs in vec(-6i64..7, 2..7)) {
        prop_assume!(coeffs.iter().any(|&c| c != 0));
        for field in [Field::Rational, Field::prime(7).unwrap()] {
            let f = BinaryForm::new(
                field.clone(),
                coeffs.iter().map(|&c| field.from_i64(c)).collect(),
            );
            let report = binary_form_roots(&f).unwrap();
            let total: usize = report.roots.iter().map(|(_, m)| m).sum();
            prop_assert_eq!(total + report.residual_degree, f.degree());
            for (root, _) in &report.roots {
                prop_assert!(f.eval_point(root).is_zero());
            }
        }
    }
}
