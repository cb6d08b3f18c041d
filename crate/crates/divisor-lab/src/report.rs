//! Shared report types: the divisibility verdict emitted by every counting
//! theorem check, serialized as part of the `divisor-lab/1` JSON schema.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::IntMatrix;

/// Version tag carried by every JSON report this crate emits.
pub const REPORT_SCHEMA: &str = "divisor-lab/1";

/// Outcome of one divisibility claim: an exact solution count, the asserted
/// bound, and whether the bound divides the count (a count of zero is
/// divisible by everything).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisibilityReport {
    /// What the bound is (e.g. "GCD(|C|, invariant factor)").
    pub label: String,
    pub solution_count: u64,
    pub bound: u64,
    pub divides: bool,
    pub breakdown: Breakdown,
}

impl DivisibilityReport {
    pub fn new(label: impl Into<String>, count: u64, bound: u64, breakdown: Breakdown) -> Self {
        assert!(bound > 0, "divisibility bounds are always positive");
        DivisibilityReport {
            label: label.into(),
            solution_count: count,
            bound,
            divides: count.is_multiple_of(bound),
            breakdown,
        }
    }
}

/// Intermediate values behind a verdict; fields are filled per theorem.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Breakdown {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_lower: Option<String>,
    /// Δ_m / Δ_{m-1} (or the homogeneity modulus for ring systems).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariant_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub centralizer_order: Option<u64>,
    /// |H̃| for generalized systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint_subgroup_order: Option<u64>,
    /// |G ∩ C(coefficients)| for ring systems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unit_centralizer_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_sums: Option<Vec<i64>>,
    /// Individually checked bounds (representation example, crossed homs).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub bound_checks: Vec<BoundCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub label: String,
    pub bound: u64,
    pub divides: bool,
}

impl Breakdown {
    pub fn with_matrix(mut self, m: &IntMatrix) -> Self {
        self.matrix = Some(matrix_to_i64_rows(m));
        self
    }

    pub fn with_deltas(mut self, upper: &BigInt, lower: &BigInt, factor: &BigInt) -> Self {
        self.delta_upper = Some(upper.to_string());
        self.delta_lower = Some(lower.to_string());
        self.invariant_factor = Some(factor.to_string());
        self
    }
}

/// Exponent-sum matrices always fit machine integers; serialize them as plain
/// JSON numbers.
pub fn matrix_to_i64_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    use num_traits::ToPrimitive;
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.to_i64().expect("exponent sums fit in i64"))
                .collect()
        })
        .collect()
}
