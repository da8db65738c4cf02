//! Acceptance suite: one test per criterion, each printing a single
//! pass line on success (run with `--nocapture` to see them inline;
//! the per-test ok/FAILED line mirrors the same verdict).

use std::collections::BTreeSet;
use std::process::Command;

use kuechle_core::chow::{
    degeneracy_classes, ledger_b4, ledger_b9, ledger_c7, ledger_d3, ChowClass, GradedRing,
};
use kuechle_core::complete_quadrics::{verify_embedding, y_point_count, EmbeddingConfig};
use kuechle_core::linalg::pfaffian;
use kuechle_core::pencils::{
    b4_line_count, d3_point_counts, expected_lagrangian_count, hyperbolic_quadric,
    FailureReason, MultilinearForm, SkewPencil, Verdict,
};
use kuechle_core::scalars::proj_line_points;
use kuechle_core::trivectors::{invariant_space_dim, stabilizer_dim, trace_form, TriVector};
use kuechle_core::{Field, FieldElem, SkewMatrix, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn elems(field: &Field, values: &[i64]) -> Vec<FieldElem> {
    values.iter().map(|&v| field.from_i64(v)).collect()
}

fn random_skew(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> SkewMatrix {
    let span = match field {
        Field::Rational => 19,
        Field::Prime(p) => *p as i64,
    };
    let upper: Vec<FieldElem> = (0..n * (n - 1) / 2)
        .map(|_| field.from_i64(rng.gen_range(0..span) - span / 2))
        .collect();
    SkewMatrix::from_upper(field.clone(), n, &upper)
}

#[test]
fn criterion_01_pfaffian_square_is_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let f101 = Field::prime(101).unwrap();
    for (field, samples) in [(f101, 200usize), (Field::Rational, 50)] {
        for i in 0..samples {
            let n = 2 + i % 7;
            let m = random_skew(&field, n, &mut rng);
            let pf = pfaffian(&m);
            assert_eq!(
                &pf * &pf,
                m.as_matrix().det().unwrap(),
                "pf^2 != det at size {n} over {field:?}"
            );
        }
    }
    println!("criterion 1: PASS — pf(A)^2 = det(A) on 200 + 50 seeded skew matrices");
}

#[test]
fn criterion_02_smoothness_verdicts() {
    let q = Field::Rational;
    let smooth = SkewPencil::standard(q.clone(), &elems(&q, &[1, 2, 3, 4, 5])).unwrap();
    let report = smooth.analyze();
    assert_eq!(report.verdict, Verdict::Smooth);
    assert_eq!(report.roots.len(), 5);
    assert!(report.roots.iter().all(|(_, m)| *m == 1), "simple roots");
    // The kernels at the five roots decompose the whole 10-space.
    let total: usize = report.kernels.iter().map(|k| k.dim()).sum();
    let span = report
        .kernels
        .iter()
        .fold(Subspace::zero(q.clone(), 10), |acc, k| acc.sum(k).unwrap());
    assert_eq!((total, span.dim()), (10, 10), "kernels sum directly to V");

    // Repeating a slope merges two kernel planes, so the analysis reports
    // the 4-dimensional kernel at the shared root.
    let merged = SkewPencil::standard(q.clone(), &elems(&q, &[1, 2, 2, 4, 5])).unwrap();
    let report = merged.analyze();
    assert_eq!(report.verdict, Verdict::Singular);
    assert_eq!(report.failure_reason, Some(FailureReason::FatKernel(4)));

    // A double Pfaffian root whose degenerate member keeps a minimal kernel.
    let a = SkewMatrix::from_upper(q.clone(), 4, &elems(&q, &[1, 0, 0, 0, 0, 1]));
    let b = SkewMatrix::from_upper(q.clone(), 4, &elems(&q, &[-1, 0, 1, 0, 0, -1]));
    let doubled = SkewPencil::new(a, b).unwrap();
    let report = doubled.analyze();
    assert_eq!(report.verdict, Verdict::Singular);
    assert_eq!(report.failure_reason, Some(FailureReason::RepeatedRoot));
    println!("criterion 2: PASS — smooth standard pencil, and injected failures carry the right reason");
}

#[test]
fn criterion_03_lagrangian_counts_and_bijection() {
    for (n, q, expected) in [(2usize, 2u64, 9u64), (2, 3, 16), (2, 5, 36), (3, 2, 27)] {
        let field = Field::prime(q).unwrap();
        let points = proj_line_points(field.clone()).unwrap();
        let pencil = SkewPencil::from_root_points(field.clone(), &points[..n]).unwrap();
        let run = pencil.enumerate_lagrangians().unwrap();
        assert_eq!(run.count, expected, "count at (n,q)=({n},{q})");
        assert_eq!(expected, expected_lagrangian_count(q, n));
        // Each Lagrangian splits into a distinct tuple of kernel lines and
        // assembles back; with (q+1)^n of each, splitting is a bijection.
        let mut tuples = BTreeSet::new();
        for lagrangian in &run.lagrangians {
            let lines = pencil.split_lagrangian(lagrangian).unwrap();
            assert_eq!(lines.len(), n);
            assert_eq!(&pencil.assemble_lagrangian(&lines).unwrap(), lagrangian);
            tuples.insert(
                lines
                    .iter()
                    .map(|l| l.basis().to_string())
                    .collect::<Vec<_>>(),
            );
        }
        assert_eq!(tuples.len() as u64, expected, "tuples at (n,q)=({n},{q})");
    }
    println!("criterion 3: PASS — 9/16/36/27 Lagrangians, split/assemble bijective");
}

#[test]
fn criterion_04_multilinear_blowup_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for q in [2u64, 3] {
        let field = Field::prime(q).unwrap();
        for _ in 0..5 {
            let s = MultilinearForm::random(field.clone(), 4, &mut rng);
            let report = d3_point_counts(&s).unwrap();
            assert!(
                report.identity_holds(),
                "q={q}: count_x={} vs blowup {}",
                report.count_x,
                report.blowup_count
            );
        }
    }
    println!("criterion 4: PASS — count_X = (q+1)^3 + q*count_Z on 5 seeded forms over F_2 and F_3");
}

#[test]
fn criterion_05_stabilizers_and_invariant_line() {
    let q = Field::Rational;
    let invariant = trace_form(q.clone()).unwrap();
    assert_eq!(stabilizer_dim(&invariant), 8);
    assert_eq!(stabilizer_dim(&TriVector::zero(q.clone(), 8)), 64);
    let mut decomposable = TriVector::zero(q.clone(), 8);
    decomposable.set_coeff(0, 1, 2, q.one());
    assert_eq!(stabilizer_dim(&decomposable), 48);
    let space = invariant_space_dim().unwrap();
    assert_eq!(space.dim, 1);
    assert!(space.basis[0].proportional_to(&invariant));
    println!("criterion 5: PASS — stabilizer dims 8/64/48 and a one-line invariant space");
}

#[test]
fn criterion_06_embedding_checks() {
    let report = verify_embedding(&EmbeddingConfig {
        seed: 0,
        budget: 100,
        prime: 7,
    })
    .unwrap();
    assert_eq!(report.samples, 4 + 4 * 100, "four exact points plus samples");
    for check in &report.checks {
        assert_eq!(
            check.failed, 0,
            "{} failed: {:?}",
            check.name, check.witness
        );
    }
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    for required in [
        "subalgebra-rank-3",
        "subalgebra-traceless",
        "subalgebra-bracket-closed",
        "phi-dimension-5",
        "phi-isotropic-for-trace-form",
        "reconstruction-is-adjugate-on-open-orbit",
        "phi-injective",
    ] {
        assert!(names.contains(&required), "missing check {required}");
    }
    println!("criterion 6: PASS — subalgebra and 5-plane checks at 4 exact points and 400 samples");
}

#[test]
fn criterion_07_complete_quadrics_counts() {
    for (q, expected) in [(2u64, 105u64), (3, 520)] {
        let report = y_point_count(Field::prime(q).unwrap()).unwrap();
        assert_eq!(report.direct_count, expected, "direct count at q={q}");
        assert_eq!(report.formula_count, expected, "formula count at q={q}");
        assert!(report.matches() && report.mismatch_points.is_none());
    }
    println!("criterion 7: PASS — |Y(F_2)| = 105 and |Y(F_3)| = 520, direct = blowup formula");
}

#[test]
fn criterion_08_degeneracy_classes_and_b4_lines() {
    let ring = GradedRing::projective(3);
    let parse = |t: &str| ChowClass::parse(&ring, t).unwrap();
    let classes =
        degeneracy_classes(&parse("4h"), &parse("6h^2"), &parse("4h^3")).unwrap();
    assert_eq!(classes.discriminant, parse("8h"));
    assert_eq!(classes.corank2, parse("80h^3"));
    let report = b4_line_count(&hyperbolic_quadric(Field::prime(2).unwrap())).unwrap();
    assert_eq!(report.direct_count, 105);
    assert!(report.matches_split_formula());
    println!("criterion 8: PASS — degeneracy classes (8h, 80h^3) and 105 = 105 lines over F_2");
}

#[test]
fn criterion_09_ledger_totals() {
    let b9 = ledger_b9();
    assert_eq!(b9.exceptional_total(), 48);
    assert!(!b9.has_symbolic_entries());
    assert!(b9.entries.iter().any(|e| e.rank == Some(21)), "21 = C(7,2)");
    for (ledger, total) in [(ledger_d3(), 16u64), (ledger_c7(), 6), (ledger_b4(), 4)] {
        assert_eq!(ledger.exceptional_total(), total, "{}", ledger.name);
        assert!(ledger.has_symbolic_entries(), "{}", ledger.name);
    }
    println!("criterion 9: PASS — ledgers total 48 / 16 / 6 / 4 with their symbolic parts listed");
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_kuechle-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_10_verify_all_is_deterministic() {
    let first = run_cli(&["verify-all", "--seed", "0"]);
    let second = run_cli(&["verify-all", "--seed", "0"]);
    assert!(first.status.success(), "verify-all must pass");
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout, "reports must be byte-identical");
    println!("criterion 10: PASS — two verify-all runs at seed 0 agree byte for byte");
}

#[test]
fn cli_contract_examples_and_exit_codes() {
    // Documented example outputs.
    let out = run_cli(&["trivector", "stabilizer", "--form", "trace"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["dim"], 8);
    let out = run_cli(&["chow", "ledger", "b9"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["total"], 48);

    // Budget 0 keeps the structural checks and still passes.
    let out = run_cli(&["verify-all", "--seed", "0", "--budget", "0"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["overall"], "pass");
    assert!(json["checks"].as_array().unwrap().len() < 13);

    // Corrupted input exits 2 with a diagnostic on standard error.
    let path = std::env::temp_dir().join("kuechle-acceptance-corrupt.json");
    std::fs::write(&path, "{\"field\": ").unwrap();
    let out = run_cli(&["pencil", "analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid JSON"));
    std::fs::remove_file(&path).ok();

    // Unknown flags are usage errors, also exit 2.
    let out = run_cli(&["pencil", "analyze", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}
