//! Tolerances used across the library and the verification suites.

use serde::{Deserialize, Serialize};

use crate::scalars::Tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Numeric zero test for scalars.
    pub zero: Tolerance,
    /// Singular values below `kernel_rel * sigma_max` count as zero.
    pub kernel_rel: f64,
    /// `|Delta alpha- v|` relative to the cancellation-free magnitude.
    pub lowest_weight_residual: f64,
    /// Mutual projection residual for span equality.
    pub span_residual: f64,
    /// Casimir eigenvalue checks.
    pub casimir: f64,
    /// Operator identities of the algebra.
    pub algebra: f64,
    /// Braid relations, relative to the size of the products.
    pub braid_rel: f64,
    /// `sigma(q) sigma(1/q) = 1`.
    pub inverse: f64,
    /// Entry-wise agreement of the direct and rewrite routes.
    pub route_rel: f64,
    /// Agreement of the two closed forms of `P R` on transitions with `k <= 1`.
    pub series_vs_printed: f64,
    /// Entry-wise agreement with printed matrices.
    pub fixture_rel: f64,
    /// Entries below this fraction of the largest entry are compared
    /// absolutely.
    pub entry_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zero: Tolerance::default(),
            kernel_rel: 1e-10,
            lowest_weight_residual: 1e-9,
            span_residual: 1e-8,
            casimir: 1e-8,
            algebra: 1e-10,
            braid_rel: 1e-9,
            inverse: 1e-9,
            route_rel: 1e-8,
            series_vs_printed: 1e-12,
            fixture_rel: 1e-10,
            entry_floor: 1e-12,
        }
    }
}
