//! JSON documents for data, lattices, groups and spectra. Rationals are
//! written as strings `"p/q"` (or `"p"`); integers are also accepted on
//! input.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lattice::{AbelianGroupStructure, Lattice};
use crate::linalg::{format_rational, parse_rational, rat, QMatrix, QVector, Rational};
use crate::rootdatum::EuclideanRootDatum;
use crate::rootsystem::RootSystem;

pub fn rational_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn vector_value(v: &QVector) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn matrix_value(m: &QMatrix) -> Value {
    Value::Array(m.row_vectors().iter().map(vector_value).collect())
}

fn parse_error(path: &str, what: &str) -> Error {
    Error::Parse(format!("{path}: {what}"))
}

pub fn rational_from(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| match e {
            Error::Parse(m) => parse_error(path, &m),
            other => other,
        }),
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| parse_error(path, "numbers must be integers; write fractions as strings")),
        _ => Err(parse_error(path, "expected a rational")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_error(path, "expected an array"))
}

pub fn vector_from(v: &Value, len: usize, path: &str) -> Result<QVector> {
    let items = array(v, path)?;
    if items.len() != len {
        return Err(parse_error(path, &format!("expected {len} entries, found {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, x)| rational_from(x, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()
        .map(QVector)
}

fn vectors_from(v: &Value, len: usize, path: &str) -> Result<Vec<QVector>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| vector_from(x, len, &format!("{path}[{i}]")))
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field \"{key}\"")))
}

fn dim_and_gram(obj: &Map<String, Value>) -> Result<(usize, QMatrix)> {
    let dim = field(obj, "dim")?
        .as_u64()
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_error("dim", "expected a positive integer"))? as usize;
    let rows = vectors_from(field(obj, "gram")?, dim, "gram")?;
    if rows.len() != dim {
        return Err(parse_error("gram", &format!("expected {dim} rows, found {}", rows.len())));
    }
    let gram = QMatrix::from_row_vectors(dim, &rows);
    if !gram.is_symmetric() {
        return Err(parse_error("gram", "not symmetric"));
    }
    if !gram.is_positive_definite() {
        return Err(parse_error("gram", "not positive definite"));
    }
    Ok((dim, gram))
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))
}

pub fn datum_to_json(d: &EuclideanRootDatum) -> Value {
    json!({
        "dim": d.dim(),
        "gram": matrix_value(d.gram()),
        "lattice_basis": d.lattice().basis_vectors().iter().map(vector_value).collect::<Vec<_>>(),
        "roots": d.roots().roots().iter().map(vector_value).collect::<Vec<_>>(),
    })
}

pub fn datum_from_json(v: &Value) -> Result<EuclideanRootDatum> {
    let obj = object(v)?;
    let (dim, gram) = dim_and_gram(obj)?;
    let basis = vectors_from(field(obj, "lattice_basis")?, dim, "lattice_basis")?;
    let roots = vectors_from(field(obj, "roots")?, dim, "roots")?;
    if QMatrix::from_columns(dim, &basis).rank() != basis.len() {
        return Err(parse_error("lattice_basis", "columns are linearly dependent"));
    }
    if roots.iter().any(QVector::is_zero) {
        return Err(parse_error("roots", "contains the zero covector"));
    }
    let lattice = Lattice::from_vectors(gram.clone(), &basis)?;
    EuclideanRootDatum::new(lattice, RootSystem::new(gram, roots)?)
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    json!({
        "dim": l.ambient_dim(),
        "gram": matrix_value(l.gram()),
        "basis": l.basis_vectors().iter().map(vector_value).collect::<Vec<_>>(),
    })
}

pub fn lattice_from_json(v: &Value) -> Result<Lattice> {
    let obj = object(v)?;
    let (dim, gram) = dim_and_gram(obj)?;
    let basis = vectors_from(field(obj, "basis")?, dim, "basis")?;
    if QMatrix::from_columns(dim, &basis).rank() != basis.len() {
        return Err(parse_error("basis", "columns are linearly dependent"));
    }
    Lattice::from_vectors(gram, &basis)
}

pub fn group_to_json(g: &AbelianGroupStructure) -> Value {
    json!({
        "free_rank": g.free_rank,
        "invariant_factors": g.invariant_factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "structure": g.to_string(),
    })
}

pub fn spectrum_to_json(entries: &[(Vec<i64>, Rational)]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|(k, v)| json!({ "k": k, "lambda_scaled": format_rational(v) }))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdatum::DatumType;
    use crate::rootsystem::Family;

    #[test]
    fn datum_round_trip() {
        let d = EuclideanRootDatum::standard(&DatumType::new(Family::BC, 2, rat(2)).unwrap());
        let v = datum_to_json(&d);
        assert_eq!(datum_from_json(&v).unwrap(), d);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"roots\":[[\"-1\",\"0\"]"));
    }

    #[test]
    fn rejects_bad_input() {
        let v = json!({"dim": 1, "gram": [["1/0"]], "lattice_basis": [["1"]], "roots": []});
        let err = datum_from_json(&v).unwrap_err().to_string();
        assert!(err.contains("gram[0][0]"), "{err}");
        let v = json!({"dim": 2, "gram": [["1","0"],["0","1"]], "lattice_basis": [["1","1"],["2","2"]], "roots": []});
        assert!(datum_from_json(&v).unwrap_err().to_string().contains("dependent"));
        let v = json!({"dim": 2, "gram": [["1","1"],["0","1"]], "lattice_basis": [], "roots": []});
        assert!(datum_from_json(&v).unwrap_err().to_string().contains("symmetric"));
    }

    #[test]
    fn lattice_round_trip() {
        let l = Lattice::standard(3).scaled(&rat(2));
        assert_eq!(lattice_from_json(&lattice_to_json(&l)).unwrap(), l);
    }
}
