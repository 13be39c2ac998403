//! JSON forms of matrix polynomials, scalars and linear-factor lists.
//!
//! Rationals are `"p/q"` strings (bare integers are accepted on input);
//! complex numbers are `[re, im]` pairs. Polynomial coefficient arrays are in
//! ascending powers of `z`.

use std::str::FromStr;

use matpoly::{Complex64, ComplexMonic, Field, Mat, MatPoly, MonicMatPoly, Poly, RatMonic, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Z,
    ZInv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Rational,
    Complex,
}

/// `P(z) = z^n I + sum P_k z^(n-k)` for `variable = "z"`, or
/// `I + sum P_k z^-k` for `"z_inv"`; both store `P_1..P_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatPolyDocument {
    pub m: usize,
    pub n: usize,
    pub variable: Variable,
    pub field: FieldKind,
    pub coeffs: Vec<Vec<Vec<Value>>>,
}

/// Linear factors `(z - A_1)...(z - A_n)`, left to right.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorsDocument {
    pub m: usize,
    pub field: FieldKind,
    pub factors: Vec<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyMonic {
    Rational(RatMonic),
    Complex(ComplexMonic),
}

impl AnyMonic {
    pub fn to_complex(&self) -> ComplexMonic {
        match self {
            AnyMonic::Rational(p) => p.map(Field::to_c64),
            AnyMonic::Complex(p) => p.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnyMonic::Rational(p) => p.dim(),
            AnyMonic::Complex(p) => p.dim(),
        }
    }
}

/// Scalars with a JSON encoding.
pub trait JsonScalar: Field {
    const KIND: FieldKind;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value, location: &str) -> Result<Self, CliError>;
}

impl JsonScalar for Rational {
    const KIND: FieldKind = FieldKind::Rational;

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value, location: &str) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::schema(msg, location);
        match v {
            Value::String(s) => Rational::from_str(s.trim()).map_err(|e| bad(format!("invalid rational {s:?}: {e}"))),
            Value::Number(x) => x
                .as_i64()
                .map(|i| Rational::from_integer(i.into()))
                .ok_or_else(|| bad(format!("rational entries must be \"p/q\" strings or integers, found {x}"))),
            other => Err(bad(format!("expected a \"p/q\" string, found {other}"))),
        }
    }
}

impl JsonScalar for Complex64 {
    const KIND: FieldKind = FieldKind::Complex;

    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value, location: &str) -> Result<Self, CliError> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .and_then(|a| Some(Complex64::new(a[0].as_f64()?, a[1].as_f64()?)));
        pair.ok_or_else(|| CliError::schema(format!("expected a [re, im] pair, found {v}"), location))
    }
}

/// A complex value given as `[re, im]`, a number, or a rational string.
pub fn loose_complex(v: &Value, location: &str) -> Result<Complex64, CliError> {
    match v {
        Value::Number(x) => Ok(Complex64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::String(_) => Rational::from_json(v, location).map(|r| r.to_c64()),
        _ => Complex64::from_json(v, location),
    }
}

pub fn mat_json<F: JsonScalar>(a: &Mat<F>) -> Value {
    Value::Array(a.rows().iter().map(|row| row.iter().map(F::to_json).collect()).collect())
}

pub fn poly_json<F: JsonScalar>(p: &Poly<F>) -> Value {
    json!({
        "coeffs": p.coeffs().iter().map(F::to_json).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn matpoly_json<F: JsonScalar>(p: &MatPoly<F>) -> Value {
    let m = p.dim();
    Value::Array((0..m).map(|i| (0..m).map(|j| poly_json(p.get(i, j))).collect()).collect())
}

fn parse_rows<F: JsonScalar>(rows: &[Vec<Value>], m: usize, location: &str) -> Result<Mat<F>, CliError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::schema(format!("expected a {m}x{m} matrix"), location));
    }
    let entries = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| F::from_json(v, &format!("{location}[{i}][{j}]")))
                .collect::<Result<Vec<F>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Mat::from_rows(entries).expect("shape checked"))
}

/// Matrix of arbitrary JSON scalars, read as complex.
pub fn parse_loose_mat(v: &Value, m: usize, location: &str) -> Result<Mat<Complex64>, CliError> {
    let bad = || CliError::schema(format!("expected a {m}x{m} matrix"), location);
    let rows = v.as_array().filter(|r| r.len() == m).ok_or_else(bad)?;
    let mut out = Vec::with_capacity(m);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == m).ok_or_else(bad)?;
        out.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| loose_complex(x, &format!("{location}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(Mat::from_rows(out).expect("shape checked"))
}

fn parse_coeffs<F: JsonScalar>(doc: &MatPolyDocument) -> Result<MonicMatPoly<F>, CliError> {
    let (m, n) = (doc.m, doc.n);
    if m == 0 || n == 0 {
        return Err(CliError::schema("m and n must be positive", "$"));
    }
    let mut mats = doc
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, rows)| parse_rows::<F>(rows, m, &format!("$.coeffs[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if mats.len() == n + 1 {
        if mats[0] != Mat::identity(m) {
            return Err(CliError::schema("leading coefficient must be the identity", "$.coeffs[0]"));
        }
        mats.remove(0);
    }
    if mats.len() != n {
        return Err(CliError::schema(
            format!("expected {n} (or {}) coefficient matrices, found {}", n + 1, doc.coeffs.len()),
            "$.coeffs",
        ));
    }
    Ok(MonicMatPoly::new(m, mats).expect("shapes checked"))
}

impl MatPolyDocument {
    pub fn parse(&self) -> Result<AnyMonic, CliError> {
        Ok(match self.field {
            FieldKind::Rational => AnyMonic::Rational(parse_coeffs(self)?),
            FieldKind::Complex => AnyMonic::Complex(parse_coeffs(self)?),
        })
    }

    pub fn from_monic<F: JsonScalar>(p: &MonicMatPoly<F>, variable: Variable) -> Self {
        MatPolyDocument {
            m: p.dim(),
            n: p.degree(),
            variable,
            field: F::KIND,
            coeffs: p
                .coeffs()
                .iter()
                .map(|a| a.rows().iter().map(|row| row.iter().map(F::to_json).collect()).collect())
                .collect(),
        }
    }

    pub fn from_any(p: &AnyMonic, variable: Variable) -> Self {
        match p {
            AnyMonic::Rational(p) => Self::from_monic(p, variable),
            AnyMonic::Complex(p) => Self::from_monic(p, variable),
        }
    }
}

impl FactorsDocument {
    pub fn parse(&self) -> Result<Vec<Mat<Complex64>>, CliError> {
        if self.m == 0 || self.factors.is_empty() {
            return Err(CliError::schema("need m > 0 and at least one factor", "$"));
        }
        self.factors
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let loc = format!("$.factors[{k}]");
                match self.field {
                    FieldKind::Complex => parse_rows::<Complex64>(rows, self.m, &loc),
                    FieldKind::Rational => parse_rows::<Rational>(rows, self.m, &loc).map(|a| a.map(Field::to_c64)),
                }
            })
            .collect()
    }

    pub fn from_factors(factors: &[Mat<Complex64>]) -> Self {
        FactorsDocument {
            m: factors.first().map_or(0, Mat::dim),
            field: FieldKind::Complex,
            factors: factors
                .iter()
                .map(|a| a.rows().iter().map(|row| row.iter().map(JsonScalar::to_json).collect()).collect())
                .collect(),
        }
    }
}

/// Either input shape accepted by the factor-list commands.
pub enum Input {
    Poly(MatPolyDocument),
    Factors(FactorsDocument),
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(CliError::from_json)
}

pub fn parse_document(text: &str) -> Result<MatPolyDocument, CliError> {
    serde_json::from_value(parse_json(text)?).map_err(CliError::from_json)
}

pub fn parse_input(text: &str) -> Result<Input, CliError> {
    let value = parse_json(text)?;
    if value.get("factors").is_some() {
        serde_json::from_value(value).map(Input::Factors).map_err(CliError::from_json)
    } else {
        serde_json::from_value(value).map(Input::Poly).map_err(CliError::from_json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use matpoly::random;
    use proptest::prelude::*;

    fn round_trip(doc: &MatPolyDocument) -> MatPolyDocument {
        let text = serde_json::to_string(doc).unwrap();
        let parsed = parse_document(&text).unwrap();
        MatPolyDocument::from_any(&parsed.parse().unwrap(), parsed.variable)
    }

    #[test]
    fn leading_identity_is_optional() {
        let text = r#"{"m":1,"n":1,"variable":"z","field":"rational","coeffs":[[["1"]],[["-1/2"]]]}"#;
        let p = parse_document(text).unwrap().parse().unwrap();
        let AnyMonic::Rational(p) = p else { panic!("rational") };
        assert_eq!(p.coeffs()[0], Mat::scalar(1, Rational::new((-1).into(), 2.into())));
    }

    #[test]
    fn bad_entries_report_their_location() {
        let text = r#"{"m":1,"n":1,"variable":"z","field":"complex","coeffs":[[["1/2"]]]}"#;
        let err = parse_document(text).unwrap().parse().unwrap_err();
        assert_eq!(err.kind, "schema");
        assert_eq!(err.location.as_deref(), Some("$.coeffs[0][0][0]"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rational_documents_round_trip(seed in any::<u64>(), m in 1usize..4, n in 1usize..4, zinv in any::<bool>()) {
            let mut rng = random::rng(seed);
            let p = random::rat_monic(&mut rng, m, n);
            let var = if zinv { Variable::ZInv } else { Variable::Z };
            let doc = MatPolyDocument::from_monic(&p, var);
            prop_assert_eq!(&round_trip(&doc), &doc);
            prop_assert_eq!(doc.parse().unwrap(), AnyMonic::Rational(p));
        }

        #[test]
        fn complex_documents_round_trip(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
            let mut rng = random::rng(seed);
            let p = random::complex_monic(&mut rng, m, n, 1.0);
            let doc = MatPolyDocument::from_monic(&p, Variable::Z);
            prop_assert_eq!(&round_trip(&doc), &doc);
            prop_assert_eq!(doc.parse().unwrap(), AnyMonic::Complex(p));
        }
    }
}
