//! JSON encoding of rings, elements, series, matrices and results.
//!
//! Elements of `Z/m` and `F_p` are integers, rationals are `"a/b"` strings and
//! dual-number elements are arrays in ascending ε-degree. Series are
//! `{"val","coeffs","prec"}` with `"prec": null` for exact data; fractions are
//! `{"num","den"}`. Matrices are row-major nested arrays.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::glue::{BundleTriple, SectionSpace, TransitionDatum};
use crate::laurent::{
    BFraction, LaurentPoly, NilpotencyCertificate, TruncatedSeries, UnitCertificate, UnitClass,
    UnitWitness,
};
use crate::matfact::{CosetRelation, FactorizationResult, Membership, NonMembership};
use crate::matrix::{FractionMatrix, MatLaurent, Matrix, PolyMatrix, SeriesMatrix};
use crate::ring::{format_rational, parse_rational, Classification, Elem, Ring, RingKind};

fn schema(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| schema(format!("missing field \"{key}\"")))
}

fn as_int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| schema(format!("{what} must be an integer, got {v}")))
}

pub fn ring_to_json(ring: &Ring) -> Value {
    match ring.kind() {
        RingKind::Rationals => json!({"type": "Q"}),
        RingKind::PrimeField { p } => json!({"type": "Fp", "p": p}),
        RingKind::IntegersMod { m, .. } => json!({"type": "Zmod", "m": m}),
        RingKind::DualExtension { base, k } => {
            json!({"type": "dual", "base": ring_to_json(base), "k": k})
        }
    }
}

pub fn parse_ring(v: &Value) -> Result<Ring> {
    let ty = field(v, "type")?
        .as_str()
        .ok_or_else(|| schema("ring \"type\" must be a string"))?;
    let uint = |key: &str| -> Result<u64> {
        field(v, key)?.as_u64().ok_or_else(|| {
            schema(format!(
                "ring field \"{key}\" must be a nonnegative integer"
            ))
        })
    };
    match ty {
        "Q" => Ok(Ring::rationals()),
        "Fp" => Ring::prime_field(uint("p")?),
        "Zmod" => Ring::integers_mod(uint("m")?),
        "dual" => Ring::dual(parse_ring(field(v, "base")?)?, uint("k")? as usize),
        other => Err(schema(format!("unknown ring type \"{other}\""))),
    }
}

pub fn elem_to_json(e: &Elem) -> Value {
    match e {
        Elem::Rat(q) => Value::String(format_rational(q)),
        Elem::Res(r) => json!(r),
        Elem::Dual(cs) => Value::Array(cs.iter().map(elem_to_json).collect()),
    }
}

pub fn parse_elem(ring: &Ring, v: &Value) -> Result<Elem> {
    match ring.kind() {
        RingKind::Rationals => {
            let q = match v {
                Value::String(s) => parse_rational(s),
                Value::Number(_) => v.as_i64().and_then(|i| parse_rational(&i.to_string())),
                _ => None,
            };
            q.map(Elem::Rat)
                .ok_or_else(|| schema(format!("{v} is not a rational \"a/b\"")))
        }
        RingKind::PrimeField { .. } | RingKind::IntegersMod { .. } => {
            Ok(ring.from_i64(as_int(v, "residue")?))
        }
        RingKind::DualExtension { base, k } => {
            let items = v
                .as_array()
                .ok_or_else(|| schema(format!("dual element {v} must be an array")))?;
            if items.len() > *k {
                return Err(schema(format!(
                    "dual element {v} has more than {k} components"
                )));
            }
            let mut cs = items
                .iter()
                .map(|x| parse_elem(base, x))
                .collect::<Result<Vec<_>>>()?;
            cs.resize(*k, base.zero());
            Ok(Elem::Dual(cs))
        }
    }
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let s = s.trimmed();
    json!({
        "val": s.val_floor(),
        "coeffs": s.coeffs().iter().map(elem_to_json).collect::<Vec<_>>(),
        "prec": s.prec(),
    })
}

pub fn poly_to_json(p: &LaurentPoly) -> Value {
    series_to_json(&p.to_series())
}

pub fn parse_series(ring: &Ring, v: &Value) -> Result<TruncatedSeries> {
    let val = as_int(field(v, "val")?, "\"val\"")?;
    let coeffs = field(v, "coeffs")?
        .as_array()
        .ok_or_else(|| schema("\"coeffs\" must be an array"))?
        .iter()
        .map(|c| parse_elem(ring, c))
        .collect::<Result<Vec<_>>>()?;
    let prec = match v.get("prec") {
        None | Some(Value::Null) => None,
        Some(p) => Some(as_int(p, "\"prec\"")?),
    };
    TruncatedSeries::new(ring, val, coeffs, prec)
}

pub fn parse_poly(ring: &Ring, v: &Value) -> Result<LaurentPoly> {
    let s = parse_series(ring, v)?;
    if !s.is_exact() {
        return Err(schema("expected an exact polynomial (\"prec\": null)"));
    }
    Ok(s.to_poly())
}

pub fn fraction_to_json(f: &BFraction) -> Value {
    match f.as_poly() {
        Some(p) => poly_to_json(p),
        None => json!({"num": poly_to_json(f.num()), "den": poly_to_json(f.den())}),
    }
}

pub fn parse_fraction(ring: &Ring, v: &Value) -> Result<BFraction> {
    if v.get("num").is_some() {
        BFraction::new(
            parse_poly(ring, field(v, "num")?)?,
            parse_poly(ring, field(v, "den")?)?,
        )
    } else {
        Ok(BFraction::from_poly(parse_poly(ring, v)?))
    }
}

fn matrix_to_json<E>(m: &Matrix<E>, cell: impl Fn(&E) -> Value) -> Value
where
    E: crate::matrix::Entry,
{
    Value::Array(
        m.rows()
            .map(|r| Value::Array(r.iter().map(&cell).collect()))
            .collect(),
    )
}

pub fn series_matrix_to_json(m: &SeriesMatrix) -> Value {
    matrix_to_json(m, series_to_json)
}

pub fn poly_matrix_to_json(m: &PolyMatrix) -> Value {
    matrix_to_json(m, poly_to_json)
}

pub fn fraction_matrix_to_json(m: &FractionMatrix) -> Value {
    matrix_to_json(m, fraction_to_json)
}

pub fn mat_to_json(m: &MatLaurent) -> Value {
    match m {
        MatLaurent::Poly(p) => poly_matrix_to_json(p),
        MatLaurent::Series(s) => series_matrix_to_json(s),
        MatLaurent::Fraction(f) => fraction_matrix_to_json(f),
    }
}

fn cells(v: &Value) -> Result<Vec<Vec<&Value>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| schema("a matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(schema("a matrix must have at least one row"));
    }
    rows.iter()
        .map(|r| {
            let r = r
                .as_array()
                .ok_or_else(|| schema("each matrix row must be an array"))?;
            if r.len() != n {
                return Err(schema(format!(
                    "matrix is not square: row of length {} in {n} rows",
                    r.len()
                )));
            }
            Ok(r.iter().collect())
        })
        .collect()
}

/// Reads a matrix, choosing the narrowest entry kind that fits every cell.
pub fn parse_matrix(ring: &Ring, v: &Value) -> Result<MatLaurent> {
    let cs = cells(v)?;
    let flat: Vec<&Value> = cs.iter().flatten().copied().collect();
    if flat.iter().any(|c| c.get("num").is_some()) {
        let entries = flat
            .iter()
            .map(|c| parse_fraction(ring, c))
            .collect::<Result<_>>()?;
        return Ok(MatLaurent::Fraction(Matrix::new(ring, cs.len(), entries)?));
    }
    let series = flat
        .iter()
        .map(|c| parse_series(ring, c))
        .collect::<Result<Vec<_>>>()?;
    if series.iter().all(|s| s.is_exact()) {
        let entries = series.iter().map(|s| s.to_poly()).collect();
        Ok(MatLaurent::Poly(Matrix::new(ring, cs.len(), entries)?))
    } else {
        Ok(MatLaurent::Series(Matrix::new(ring, cs.len(), series)?))
    }
}

/// Reads a matrix as series without touching the stored precisions.
pub fn parse_series_matrix(ring: &Ring, v: &Value) -> Result<SeriesMatrix> {
    match parse_matrix(ring, v)? {
        MatLaurent::Series(m) => Ok(m),
        MatLaurent::Poly(m) => Ok(m.map(|p| p.to_series())),
        MatLaurent::Fraction(_) => Err(schema("expected series entries, found fractions")),
    }
}

pub fn witness_to_json(w: &UnitWitness) -> Value {
    json!({"j": w.j, "n": poly_to_json(&w.n), "q": series_to_json(&w.q)})
}

pub fn certificate_to_json(c: &UnitCertificate) -> Value {
    match c {
        UnitCertificate::Local(w) => json!({"kind": "local", "witness": witness_to_json(w)}),
        UnitCertificate::Componentwise(parts) => json!({
            "kind": "componentwise",
            "components": parts
                .iter()
                .map(|p| json!({"modulus": p.modulus, "witness": witness_to_json(&p.witness)}))
                .collect::<Vec<_>>(),
        }),
    }
}

fn nilpotency_to_json(c: &NilpotencyCertificate) -> Value {
    json!({"index": c.index, "component": c.component})
}

pub fn unit_class_to_json(c: &UnitClass) -> Value {
    match c {
        UnitClass::Unit(cert) => json!({"class": "unit", "certificate": certificate_to_json(cert)}),
        UnitClass::NotUnit(nil) => {
            json!({"class": "not_unit", "nilpotency": nilpotency_to_json(nil)})
        }
        UnitClass::Undecidable { known_to } => {
            json!({"class": "undecidable", "known_to": known_to})
        }
    }
}

pub fn classification_to_json(c: &Classification) -> Value {
    match c {
        Classification::Unit(inv) => json!({"class": "unit", "inverse": elem_to_json(inv)}),
        Classification::Nilpotent(i) => json!({"class": "nilpotent", "index": i}),
        Classification::Other => json!({"class": "other"}),
    }
}

pub fn non_membership_to_json(w: &NonMembership) -> Value {
    match w {
        NonMembership::NegativeDegree { row, col, degree } => {
            json!({"kind": "negative_degree", "row": row, "col": col, "degree": degree})
        }
        NonMembership::DetConstantNotUnit { constant } => {
            json!({"kind": "det_constant_not_unit", "constant": elem_to_json(constant)})
        }
    }
}

pub fn membership_to_json(m: &Membership) -> Value {
    match m {
        Membership::Yes { det_const_inverse } => {
            json!({"verdict": "yes", "det_const_inverse": elem_to_json(det_const_inverse)})
        }
        Membership::No(w) => json!({"verdict": "no", "witness": non_membership_to_json(w)}),
        Membership::Undecidable(why) => json!({"verdict": "undecidable", "reason": why}),
    }
}

pub fn coset_to_json(c: &CosetRelation) -> Value {
    match c {
        CosetRelation::Equal => json!({"verdict": "equal"}),
        CosetRelation::NotEqual(w) => {
            json!({"verdict": "not_equal", "witness": non_membership_to_json(w)})
        }
        CosetRelation::Undecidable(why) => json!({"verdict": "undecidable", "reason": why}),
    }
}

pub fn factorization_to_json(f: &FactorizationResult) -> Value {
    json!({
        "g": fraction_matrix_to_json(&f.g),
        "delta": series_matrix_to_json(&f.delta),
        "prec": f.prec,
        "truncation_order": f.truncation_order,
        "det_g_certificate": certificate_to_json(&f.det_g),
        "det_delta_const_inverse": elem_to_json(&f.det_delta_const_inverse),
    })
}

pub fn triple_to_json(t: &BundleTriple) -> Value {
    json!({
        "n": t.n(),
        "g": fraction_matrix_to_json(crate::glue::transition_of_triple(t).matrix()),
        "delta": t.formal_delta().map(series_matrix_to_json),
    })
}

/// Reads a triple; factorization results are accepted too (same `g`/`delta`).
pub fn parse_triple(ring: &Ring, v: &Value) -> Result<BundleTriple> {
    let g = parse_matrix(ring, field(v, "g")?)?
        .to_fraction()
        .ok_or_else(|| schema("the transition \"g\" must be exact"))?;
    if let Some(n) = v.get("n") {
        if as_int(n, "\"n\"")? != g.n() as i64 {
            return Err(schema("\"n\" does not match the size of \"g\""));
        }
    }
    let delta = match v.get("delta") {
        None | Some(Value::Null) => None,
        Some(d) => Some(parse_series_matrix(ring, d)?),
    };
    BundleTriple::new(TransitionDatum::new(g)?, delta)
}

pub fn transition_to_json(t: &TransitionDatum) -> Value {
    json!({
        "n": t.n(),
        "g": fraction_matrix_to_json(t.matrix()),
        "det_inverse": fraction_to_json(t.det_inverse()),
        "det_certificate": certificate_to_json(t.det_certificate()),
    })
}

pub fn sections_to_json(s: &SectionSpace) -> Value {
    let polys = |v: &[LaurentPoly]| v.iter().map(poly_to_json).collect::<Vec<_>>();
    json!({
        "twist": s.twist,
        "dimension": s.dimension,
        "basis": s
            .basis
            .iter()
            .map(|p| json!({"s": polys(&p.s), "t": polys(&p.t)}))
            .collect::<Vec<_>>(),
    })
}

pub fn error_to_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(e.code()));
    m.insert("message".into(), json!(e.to_string()));
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_roundtrip() {
        for text in [
            r#"{"type":"Q"}"#,
            r#"{"type":"Fp","p":5}"#,
            r#"{"type":"Zmod","m":8}"#,
            r#"{"type":"dual","base":{"type":"Fp","p":2},"k":2}"#,
        ] {
            let v: Value = serde_json::from_str(text).unwrap();
            let r = parse_ring(&v).unwrap();
            assert_eq!(ring_to_json(&r), v);
        }
        let bad: Value = serde_json::from_str(r#"{"type":"Fp","p":6}"#).unwrap();
        assert!(matches!(parse_ring(&bad), Err(Error::InvalidRing(_))));
        let bad: Value = serde_json::from_str(r#"{"type":"R"}"#).unwrap();
        assert!(matches!(parse_ring(&bad), Err(Error::Schema(_))));
    }

    #[test]
    fn elements() {
        let q = Ring::rationals();
        let e = parse_elem(&q, &json!("-6/4")).unwrap();
        assert_eq!(elem_to_json(&e), json!("-3/2"));
        assert_eq!(
            elem_to_json(&parse_elem(&q, &json!(7)).unwrap()),
            json!("7")
        );
        let z8 = Ring::integers_mod(8).unwrap();
        assert_eq!(
            elem_to_json(&parse_elem(&z8, &json!(-1)).unwrap()),
            json!(7)
        );
        let d = Ring::dual(Ring::prime_field(2).unwrap(), 2).unwrap();
        assert_eq!(
            elem_to_json(&parse_elem(&d, &json!([1])).unwrap()),
            json!([1, 0])
        );
        assert!(parse_elem(&d, &json!([1, 0, 1])).is_err());
    }

    #[test]
    fn series_and_fractions() {
        let f5 = Ring::prime_field(5).unwrap();
        let v = json!({"val": -1, "coeffs": [1, 1, 1], "prec": 2});
        let s = parse_series(&f5, &v).unwrap();
        assert_eq!(series_to_json(&s), v);
        let f = json!({"num": {"val": 0, "coeffs": [1], "prec": null}, "den": {"val": 0, "coeffs": [1, 4], "prec": null}});
        let b = parse_fraction(&f5, &f).unwrap();
        assert_eq!(fraction_to_json(&b), f);
        assert!(parse_poly(&f5, &v).is_err());
    }

    #[test]
    fn matrix_kinds() {
        let f5 = Ring::prime_field(5).unwrap();
        let p = json!([[{"val": 1, "coeffs": [1]}]]);
        assert!(matches!(
            parse_matrix(&f5, &p).unwrap(),
            MatLaurent::Poly(_)
        ));
        let s = json!([[{"val": 0, "coeffs": [1], "prec": 4}]]);
        assert!(matches!(
            parse_matrix(&f5, &s).unwrap(),
            MatLaurent::Series(_)
        ));
        let ragged = json!([[{"val": 0, "coeffs": [1]}], []]);
        assert!(matches!(parse_matrix(&f5, &ragged), Err(Error::Schema(_))));
    }
}
