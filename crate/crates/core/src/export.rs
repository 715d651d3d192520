//! JSON and CSV serialization of generator matrices.
//!
//! JSON is canonical. CSV carries decimal entries only and is marked lossy
//! in its header line.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::braid::{BraidMatrices, BuiltMatrices, SigmaFormula};
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::Mat;
use crate::oscillator::LabelSet;
use crate::scalars::{format_numeric, GlobalPhase, Scalar};

/// Environment variable selecting significant digits for numeric entries.
pub const PRECISION_VAR: &str = "BRAIDOSC_PRECISION";

/// Largest precision that still distinguishes every double.
pub const MAX_PRECISION: usize = 17;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?} (json, csv)"))),
        }
    }
}

/// Parses a precision setting: an integer in `1..=17`.
pub fn parse_precision(s: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(p) if (1..=MAX_PRECISION).contains(&p) => Ok(p),
        _ => Err(Error::InvalidParameter(format!(
            "{PRECISION_VAR} must be an integer in 1..={MAX_PRECISION}, got {s:?}"
        ))),
    }
}

/// Precision from the environment; `None` keeps shortest round-trip output.
pub fn precision_from_env() -> Result<Option<usize>> {
    match std::env::var(PRECISION_VAR) {
        Ok(s) => parse_precision(&s).map(Some),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::InvalidParameter(format!("{PRECISION_VAR}: {e}"))),
    }
}

/// Rounds to `digits` significant digits.
pub fn round_significant(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v).parse().unwrap_or(v)
}

/// Scalars that can be written out.
pub trait ExportScalar: Scalar {
    fn to_json_value(&self, precision: Option<usize>) -> Value;
    fn to_csv_field(&self, precision: Option<usize>) -> String;
    /// Backend name recorded in metadata.
    fn backend() -> &'static str;
}

impl ExportScalar for f64 {
    fn to_json_value(&self, precision: Option<usize>) -> Value {
        let v = precision.map_or(*self, |p| round_significant(*self, p));
        // Negative zero prints as `-0.0`; normalize for stable output.
        json!(if v == 0.0 { 0.0 } else { v })
    }

    fn to_csv_field(&self, precision: Option<usize>) -> String {
        let v = if *self == 0.0 { 0.0 } else { *self };
        match precision {
            Some(p) => format!("{:.*e}", p - 1, v),
            None => format_numeric(v),
        }
    }

    fn backend() -> &'static str {
        "numeric"
    }
}

impl ExportScalar for LaurentPoly {
    fn to_json_value(&self, _: Option<usize>) -> Value {
        Value::String(self.to_string())
    }

    fn to_csv_field(&self, _: Option<usize>) -> String {
        self.to_string()
    }

    fn backend() -> &'static str {
        "exact"
    }
}

fn entries_json<S: ExportScalar>(m: &Mat<S>, precision: Option<usize>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| m.get(i, j).to_json_value(precision)).collect()))
            .collect(),
    )
}

fn phase_json(phase: &GlobalPhase, q: Option<f64>, labels: &LabelSet) -> Value {
    let mut v = json!({
        "exponent": phase.to_json(),
        "factor": "q^(-2*c*gamma*exponent)",
    });
    if let (Some(q), true) = (q, labels.is_homogeneous()) {
        let l = labels.class(0);
        v["value"] = json!(phase.value(q, l.gamma, l.c));
    }
    v
}

fn conventions<S: ExportScalar>() -> Value {
    let mut c = json!({
        "action": "column j holds the image of basis vector j",
        "basis": "unnormalized O_1^j1 ... O_(n-1)^j(n-1) v_0 per sector; exponents in descending lexicographic order, monomial major, sector minor",
        "phase": "true matrices are the listed entries times the phase factor",
    });
    if S::backend() == "exact" {
        c["variable"] = json!("x = q^(-gamma)");
    }
    c
}

/// Canonical JSON document for a generator family.
pub fn matrices_json<S: ExportScalar>(m: &BraidMatrices<S>, precision: Option<usize>) -> Value {
    let basis: Vec<Value> = m.basis.iter().map(|b| json!({ "exponents": b.exponents, "sector": b.sector })).collect();
    let mats: Vec<Value> = m
        .matrices
        .iter()
        .enumerate()
        .map(|(i, x)| json!({ "generator": i + 1, "entries": entries_json(x, precision) }))
        .collect();
    json!({
        "n": m.n(),
        "N": m.total,
        "labels": m.labels.to_json(),
        "q": m.q,
        "backend": S::backend(),
        "route": m.route.to_string(),
        "formula": match m.formula {
            SigmaFormula::Series => "series",
            SigmaFormula::Printed => "printed",
        },
        "inverse": m.inverse,
        "family": m.family.map(|f| format!("{f:?}").to_lowercase()),
        "solve_residual": m.solve_residual,
        "conventions": conventions::<S>(),
        "basis": basis,
        "phase": phase_json(&m.phase, m.q, &m.labels),
        "matrices": mats,
    })
}

/// CSV with one `generator,row,col,entry` line per entry.
pub fn matrices_csv<S: ExportScalar>(m: &BraidMatrices<S>, precision: Option<usize>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# lossy decimal export; JSON is canonical. n={} N={} backend={} route={} phase_exponent={}",
        m.n(),
        m.total,
        S::backend(),
        m.route,
        m.phase.to_json().as_str().unwrap_or("")
    );
    out.push_str("generator,row,col,entry\n");
    for (g, x) in m.matrices.iter().enumerate() {
        for i in 0..x.rows() {
            for j in 0..x.cols() {
                let _ = writeln!(out, "{},{},{},{}", g + 1, i, j, x.get(i, j).to_csv_field(precision));
            }
        }
    }
    out
}

/// Renders a family in the chosen format, ending with a newline.
pub fn render<S: ExportScalar>(m: &BraidMatrices<S>, format: Format, precision: Option<usize>) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&matrices_json(m, precision)).expect("json serializes");
            s.push('\n');
            s
        }
        Format::Csv => matrices_csv(m, precision),
    }
}

impl BuiltMatrices {
    pub fn to_json(&self, precision: Option<usize>) -> Value {
        match self {
            BuiltMatrices::Numeric(m) => matrices_json(m, precision),
            BuiltMatrices::Exact(m) => matrices_json(m, precision),
        }
    }

    pub fn render(&self, format: Format, precision: Option<usize>) -> String {
        match self {
            BuiltMatrices::Numeric(m) => render(m, format, precision),
            BuiltMatrices::Exact(m) => render(m, format, precision),
        }
    }
}

/// JSON for the product of a braid word.
pub fn word_json<S: ExportScalar>(
    word: &[i64],
    family: &BraidMatrices<S>,
    product: &Mat<S>,
    phase: &GlobalPhase,
    precision: Option<usize>,
) -> Value {
    let trace = (0..product.rows()).fold(S::zero(), |acc, i| acc + product.get(i, i).clone());
    json!({
        "word": word,
        "n": family.n(),
        "N": family.total,
        "labels": family.labels.to_json(),
        "q": family.q,
        "backend": S::backend(),
        "route": family.route.to_string(),
        "conventions": conventions::<S>(),
        "phase": phase_json(phase, family.q, &family.labels),
        "trace": trace.to_json_value(precision),
        "entries": entries_json(product, precision),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bounds() {
        assert_eq!(parse_precision("17").unwrap(), 17);
        assert_eq!(parse_precision("1").unwrap(), 1);
        assert!(parse_precision("18").is_err());
        assert!(parse_precision("0").is_err());
        assert!(parse_precision("x").is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(round_significant(1.23456, 3), 1.23);
        assert_eq!(round_significant(-0.000123456, 2), -0.00012);
        assert_eq!(round_significant(0.1 + 0.2, 17), 0.1 + 0.2);
    }

    #[test]
    fn csv_fields() {
        assert_eq!((-0.0f64).to_csv_field(None), "0.0");
        assert_eq!(0.5f64.to_csv_field(Some(3)), "5.00e-1");
    }
}
