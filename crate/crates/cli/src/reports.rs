//! JSON views of the core report types. Key order is alphabetical (the
//! serializer sorts object keys), so byte-identical inputs give
//! byte-identical output.

use kuechle_core::complete_quadrics::{EmbeddingReport, PhiImage, SubalgebraG, YCountReport};
use kuechle_core::encoding::{
    binary_form_to_json, cq_point_to_json, matrix_to_json, subspace_to_json,
};
use kuechle_core::pencils::{
    B4Report, D3Report, FailureReason, LagrangianEnumeration, SmoothnessReport, StandardForm,
    Verdict,
};
use serde_json::{json, Value};

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Smooth => "smooth",
        Verdict::Singular => "singular",
        Verdict::NonSplit => "non-split",
    }
}

fn failure_reason_json(r: Option<FailureReason>) -> Value {
    match r {
        None => Value::Null,
        Some(FailureReason::RepeatedRoot) => json!({"kind": "repeated-root"}),
        Some(FailureReason::FatKernel(d)) => json!({"kind": "fat-kernel", "kernel_dim": d}),
        Some(FailureReason::NotDirectSum) => json!({"kind": "not-direct-sum"}),
        Some(FailureReason::LineInDiscriminant) => json!({"kind": "line-in-discriminant"}),
    }
}

pub fn smoothness_json(r: &SmoothnessReport) -> Value {
    let roots: Vec<Value> = r
        .roots
        .iter()
        .map(|(p, m)| {
            json!({
                "point": [p.u().to_string(), p.v().to_string()],
                "multiplicity": m,
            })
        })
        .collect();
    json!({
        "verdict": verdict_str(r.verdict),
        "pfaffian_form": binary_form_to_json(&r.pfaffian_form),
        "roots": roots,
        "residual_degree": r.residual_degree,
        "kernels": r.kernels.iter().map(subspace_to_json).collect::<Vec<_>>(),
        "failure_reason": failure_reason_json(r.failure_reason),
    })
}

pub fn standard_form_json(s: &StandardForm) -> Value {
    json!({
        "basis_change": matrix_to_json(&s.basis_change),
        "a_values": s.a_values.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
    })
}

pub fn enumeration_json(e: &LagrangianEnumeration, expected: Option<u64>) -> Value {
    json!({
        "count": e.count,
        "expected": expected,
        "lagrangians": e.lagrangians.iter().map(subspace_to_json).collect::<Vec<_>>(),
    })
}

pub fn d3_json(r: &D3Report, seed: u64) -> Value {
    json!({
        "q": r.q,
        "n": r.n,
        "seed": seed,
        "count_x": r.count_x,
        "count_z": r.count_z,
        "blowup_count": r.blowup_count,
        "identity_holds": r.identity_holds(),
    })
}

pub fn b4_json(r: &B4Report) -> Value {
    json!({
        "q": r.q,
        "direct_count": r.direct_count,
        "split_formula_count": r.split_formula_count,
        "matches": r.matches_split_formula(),
    })
}

pub fn subalgebra_json(g: &SubalgebraG) -> Value {
    json!({
        "dim": g.span().dim(),
        "basis": g.basis().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn phi_json(p: &PhiImage) -> Value {
    json!({
        "dim": p.subspace.dim(),
        "basis": subspace_to_json(&p.subspace),
        "plucker": p.plucker.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    })
}

pub fn embedding_json(r: &EmbeddingReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "failed": c.failed,
                "witness": c.witness,
            })
        })
        .collect();
    json!({
        "seed": r.seed,
        "budget": r.budget,
        "prime": r.prime,
        "samples": r.samples,
        "checks": checks,
        "all_passed": r.all_passed(),
    })
}

pub fn y_count_json(r: &YCountReport) -> Value {
    json!({
        "q": r.q,
        "direct_count": r.direct_count,
        "formula_count": r.formula_count,
        "matches": r.matches(),
        "mismatch_points": r
            .mismatch_points
            .as_ref()
            .map(|ps| ps.iter().map(cq_point_to_json).collect::<Vec<_>>()),
    })
}

pub fn ledger_json(l: &kuechle_core::chow::SODLedger) -> Value {
    let entries: Vec<Value> = l
        .entries
        .iter()
        .map(|e| json!({"label": e.label, "rank": e.rank}))
        .collect();
    json!({
        "name": l.name,
        "entries": entries,
        "total": l.exceptional_total(),
    })
}
