//! Uniform error envelope `{"error": {kind, message, location}}`.

use matpoly::Error;
use serde_json::{json, Value};

pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: String,
    pub message: String,
    pub location: Option<String>,
    pub exit_code: i32,
}

impl CliError {
    pub fn input(kind: &str, message: impl Into<String>, location: Option<String>) -> Self {
        CliError {
            kind: kind.into(),
            message: message.into(),
            location,
            exit_code: EXIT_INPUT,
        }
    }

    pub fn schema(message: impl Into<String>, location: &str) -> Self {
        Self::input("schema", message, Some(location.into()))
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::input("usage", message, None)
    }

    pub fn field(expected: &str, command: &str) -> Self {
        Self::input(
            "field",
            format!("{command} requires a {expected} document"),
            Some("$.field".into()),
        )
    }

    /// Syntax errors are `parse`; well-formed JSON of the wrong shape is `schema`.
    pub fn from_json(e: serde_json::Error) -> Self {
        let kind = match e.classify() {
            serde_json::error::Category::Data => "schema",
            serde_json::error::Category::Io => "io",
            _ => "parse",
        };
        let location = (e.line() > 0).then(|| format!("line {} column {}", e.line(), e.column()));
        Self::input(kind, e.to_string(), location)
    }

    pub fn envelope(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind,
                "message": self.message,
                "location": self.location,
            }
        })
    }
}

fn domain_kind(e: &Error) -> (&'static str, i32) {
    use Error::*;
    match e {
        DivisionByZeroPolynomial => ("division_by_zero", EXIT_DOMAIN),
        GcdOfZeros => ("gcd_of_zeros", EXIT_DOMAIN),
        DimensionMismatch { .. } => ("dimension_mismatch", EXIT_INPUT),
        IndexOutOfRange(_) => ("index_out_of_range", EXIT_INPUT),
        DegreeExceeds { .. } => ("degree_exceeds", EXIT_INPUT),
        NotMonic(_) => ("not_monic", EXIT_INPUT),
        NonDominantType(_) => ("non_dominant_type", EXIT_INPUT),
        ShapeMismatch(..) => ("shape_mismatch", EXIT_INPUT),
        InexactDivision => ("inexact_division", EXIT_DOMAIN),
        PolesTooClose { .. } => ("poles_too_close", EXIT_DOMAIN),
        NonGenericSpectrum { .. } => ("non_generic_spectrum", EXIT_DOMAIN),
        AmbiguousKernel { .. } => ("ambiguous_kernel", EXIT_DOMAIN),
        EigenResidual { .. } => ("eigen_residual", EXIT_DOMAIN),
        DependentEigenvectors { .. } => ("dependent_eigenvectors", EXIT_DOMAIN),
        ChartExcluded { .. } => ("chart_excluded", EXIT_DOMAIN),
        DivisionResidual { .. } => ("division_residual", EXIT_DOMAIN),
        InnerProductDegenerate { .. } => ("inner_product_degenerate", EXIT_DOMAIN),
        SwapFailed { .. } => ("swap_failed", EXIT_DOMAIN),
        NotAReordering(_) => ("not_a_reordering", EXIT_INPUT),
        DriftExceeded { .. } => ("drift_exceeded", EXIT_DOMAIN),
        InvalidArgument(_) => ("invalid_argument", EXIT_INPUT),
    }
}

fn domain_location(e: &Error) -> Option<String> {
    match e {
        Error::ChartExcluded { stage, .. } => Some(format!("stage {stage}")),
        Error::SwapFailed { step, .. } => Some(format!("step {step}")),
        Error::DriftExceeded { step, .. } => Some(format!("step {step}")),
        _ => None,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (kind, exit_code) = domain_kind(&e);
        CliError {
            kind: kind.into(),
            message: e.to_string(),
            location: domain_location(&e),
            exit_code,
        }
    }
}
