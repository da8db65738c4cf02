//! JSON encodings for the crate's value types.
//!
//! Scalars travel as text (`"3"`, `"-5/7"`), so exact rationals survive a
//! round trip; plain JSON integers are also accepted on input. Shapes:
//!
//! - field: `{"field":"Q"}` or `{"field":"Fp","p":7}`
//! - matrix: `{"rows":r,"cols":c,"entries":[[…]]}` (row-major)
//! - subspace: the matrix of its canonical basis, one vector per row
//! - pencil: `{"field":…,"A":matrix,"B":matrix}`
//! - trivector: `{"dim":8,"terms":[{"ijk":[2,3,8],"c":"1"},…]}` with
//!   one-based index triples and an optional `"field"` (default `Q`)
//! - complete-quadric point: `{"C":[[…]],"Cp":[[…]]}` as bare 3×3 grids
//!   (matrix objects also accepted), optional `"field"`

use serde_json::{json, Value};
use thiserror::Error;

use crate::complete_quadrics::{CQPoint, QuadricError};
use crate::linalg::{LinalgError, Matrix, SkewMatrix, Subspace};
use crate::pencils::{PencilError, SkewPencil};
use crate::scalars::{BinaryForm, Field, FieldElem, ScalarError};
use crate::trivectors::{sorted_triples, TriVector, TrivectorError};

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Trivector(#[from] TrivectorError),
    #[error(transparent)]
    Quadric(#[from] QuadricError),
}

fn bad(msg: impl Into<String>) -> EncodingError {
    EncodingError::Malformed(msg.into())
}

fn expect_obj<'a>(
    v: &'a Value,
    what: &str,
) -> Result<&'a serde_json::Map<String, Value>, EncodingError> {
    v.as_object()
        .ok_or_else(|| bad(format!("expected a JSON object for {what}")))
}

fn get<'a>(
    obj: &'a serde_json::Map<String, Value>,
    key: &str,
) -> Result<&'a Value, EncodingError> {
    obj.get(key).ok_or_else(|| bad(format!("missing key {key:?}")))
}

fn expect_usize(v: &Value, what: &str) -> Result<usize, EncodingError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("expected a non-negative integer for {what}")))
}

pub fn field_to_json(field: &Field) -> Value {
    match field {
        Field::Rational => json!({"field": "Q"}),
        Field::Prime(p) => json!({"field": "Fp", "p": p}),
    }
}

pub fn field_from_json(v: &Value) -> Result<Field, EncodingError> {
    let obj = expect_obj(v, "a field")?;
    match get(obj, "field")?.as_str() {
        Some("Q") => Ok(Field::Rational),
        Some("Fp") => {
            let p = get(obj, "p")?
                .as_u64()
                .ok_or_else(|| bad("expected an integer prime for \"p\""))?;
            Ok(Field::prime(p)?)
        }
        _ => Err(bad("\"field\" must be \"Q\" or \"Fp\"")),
    }
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<FieldElem, EncodingError> {
    match v {
        Value::String(s) => Ok(field.parse(s)?),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| bad(format!("entry {n} is not an exact integer")))?;
            Ok(field.from_i64(i))
        }
        other => Err(bad(format!("expected a scalar entry, got {other}"))),
    }
}

/// Row-major grid of text entries; shared by matrix bodies and the bare
/// `C`/`Cp` grids of complete-quadric points.
fn grid_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.at(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn grid_from_json(field: &Field, v: &Value) -> Result<Matrix, EncodingError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("expected an array of rows"))?;
    if rows.is_empty() {
        return Err(bad("matrix needs at least one row"));
    }
    let mut entries = Vec::with_capacity(rows.len());
    let mut width = None;
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| bad("expected each row to be an array"))?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => return Err(bad("ragged rows in matrix")),
            _ => {}
        }
        let parsed: Result<Vec<FieldElem>, _> =
            cells.iter().map(|c| elem_from_json(field, c)).collect();
        entries.push(parsed?);
    }
    if width == Some(0) {
        return Err(bad("matrix rows must be non-empty"));
    }
    Ok(Matrix::from_rows(field.clone(), entries))
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": grid_to_json(m),
    })
}

pub fn matrix_from_json(field: &Field, v: &Value) -> Result<Matrix, EncodingError> {
    let obj = expect_obj(v, "a matrix")?;
    let rows = expect_usize(get(obj, "rows")?, "\"rows\"")?;
    let cols = expect_usize(get(obj, "cols")?, "\"cols\"")?;
    let m = grid_from_json(field, get(obj, "entries")?)?;
    if m.rows() != rows || m.cols() != cols {
        return Err(bad(format!(
            "declared shape {rows}x{cols} but entries are {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

/// Accepts either the full matrix object or a bare grid.
pub fn matrix_or_grid_from_json(field: &Field, v: &Value) -> Result<Matrix, EncodingError> {
    if v.is_array() {
        grid_from_json(field, v)
    } else {
        matrix_from_json(field, v)
    }
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    matrix_to_json(s.basis())
}

pub fn subspace_from_json(field: &Field, v: &Value) -> Result<Subspace, EncodingError> {
    let m = matrix_or_grid_from_json(field, v)?;
    let vectors: Vec<Vec<FieldElem>> = (0..m.rows()).map(|i| m.row(i)).collect();
    Ok(Subspace::from_vectors(field.clone(), m.cols(), vectors))
}

pub fn pencil_to_json(p: &SkewPencil) -> Value {
    json!({
        "field": field_to_json(&p.field()),
        "A": matrix_to_json(p.a().as_matrix()),
        "B": matrix_to_json(p.b().as_matrix()),
    })
}

pub fn pencil_from_json(v: &Value) -> Result<SkewPencil, EncodingError> {
    let obj = expect_obj(v, "a pencil")?;
    let field = field_from_json(get(obj, "field")?)?;
    let a = matrix_or_grid_from_json(&field, get(obj, "A")?)?;
    let b = matrix_or_grid_from_json(&field, get(obj, "B")?)?;
    Ok(SkewPencil::new(SkewMatrix::new(a)?, SkewMatrix::new(b)?)?)
}

pub fn trivector_to_json(t: &TriVector) -> Value {
    let mut terms = Vec::new();
    for ((i, j, k), c) in sorted_triples(t.dim()).into_iter().zip(t.coeffs()) {
        if !c.is_zero() {
            terms.push(json!({
                "ijk": [i + 1, j + 1, k + 1],
                "c": c.to_string(),
            }));
        }
    }
    json!({
        "dim": t.dim(),
        "field": field_to_json(&t.field()),
        "terms": terms,
    })
}

pub fn trivector_from_json(v: &Value) -> Result<TriVector, EncodingError> {
    let obj = expect_obj(v, "a trivector")?;
    let field = match obj.get("field") {
        Some(f) => field_from_json(f)?,
        None => Field::Rational,
    };
    let dim = expect_usize(get(obj, "dim")?, "\"dim\"")?;
    let mut t = TriVector::zero(field.clone(), dim);
    let terms = get(obj, "terms")?
        .as_array()
        .ok_or_else(|| bad("\"terms\" must be an array"))?;
    for term in terms {
        let term = expect_obj(term, "a term")?;
        let ijk = get(term, "ijk")?
            .as_array()
            .ok_or_else(|| bad("\"ijk\" must be an array"))?;
        if ijk.len() != 3 {
            return Err(bad("\"ijk\" must hold exactly three indices"));
        }
        let mut idx = [0usize; 3];
        for (slot, v) in idx.iter_mut().zip(ijk) {
            let one_based = expect_usize(v, "an index")?;
            if one_based == 0 || one_based > dim {
                return Err(bad(format!(
                    "index {one_based} out of range 1..={dim}"
                )));
            }
            *slot = one_based - 1;
        }
        if idx[0] == idx[1] || idx[0] == idx[2] || idx[1] == idx[2] {
            return Err(bad("repeated index in \"ijk\""));
        }
        let c = elem_from_json(&field, get(term, "c")?)?;
        // Sort the triple, tracking the permutation sign, and accumulate.
        let mut sign_neg = false;
        for a in 0..2 {
            for b in 0..2 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign_neg = !sign_neg;
                }
            }
        }
        let signed = if sign_neg { -&c } else { c };
        let prior = t.coeff(idx[0], idx[1], idx[2]).clone();
        t.set_coeff(idx[0], idx[1], idx[2], &prior + &signed);
    }
    Ok(t)
}

pub fn cq_point_to_json(p: &CQPoint) -> Value {
    json!({
        "field": field_to_json(&p.field()),
        "C": grid_to_json(p.c()),
        "Cp": grid_to_json(p.cp()),
    })
}

pub fn cq_point_from_json(v: &Value) -> Result<CQPoint, EncodingError> {
    let obj = expect_obj(v, "a complete-quadric point")?;
    let field = match obj.get("field") {
        Some(f) => field_from_json(f)?,
        None => Field::Rational,
    };
    let c = matrix_or_grid_from_json(&field, get(obj, "C")?)?;
    let cp = matrix_or_grid_from_json(&field, get(obj, "Cp")?)?;
    Ok(CQPoint::new(c, cp)?)
}

/// Coefficients in descending powers of the first variable, as text.
pub fn binary_form_to_json(f: &BinaryForm) -> Value {
    json!({
        "degree": f.degree(),
        "coeffs": f
            .coeffs()
            .iter()
            .map(|c| Value::String(c.to_string()))
            .collect::<Vec<_>>(),
    })
}

pub fn parse_json(text: &str) -> Result<Value, EncodingError> {
    serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))
}
