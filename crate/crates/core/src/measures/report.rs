use serde::Serialize;
use serde_json::{json, Value};

use crate::partitions::Partition;

/// Which case of a measure produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Formula,
    ConstantA,
    ConstantB,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Formula => "formula",
            Branch::ConstantA => "constant_a",
            Branch::ConstantB => "constant_b",
        }
    }
}

/// How per-partition values combine into the measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// `sqrt(min_i v_i)`
    Min,
    /// `(prod_i v_i)^(1 / 2s)`
    GeometricMean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub measure: &'static str,
    pub p: f64,
    pub k: usize,
    pub value: f64,
    pub branch: Branch,
    pub reduction: Reduction,
    /// Partitions attaining the minimum (PE variants only).
    pub argmin: Vec<Partition>,
    /// Mean block deficit `sum_t |1 - Tr rho_t^p| / m` per admitted partition,
    /// in canonical order.
    pub per_partition: Vec<(Partition, f64)>,
}

impl MeasureReport {
    /// Recomputes the value from `per_partition`.
    pub fn rereduce(&self) -> Option<f64> {
        if self.branch != Branch::Formula {
            return None;
        }
        let values: Vec<f64> = self.per_partition.iter().map(|(_, v)| *v).collect();
        Some(match self.reduction {
            Reduction::Min => reduce_min(&values).0,
            Reduction::GeometricMean => reduce_geometric(&values),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "measure": self.measure,
            "p": self.p,
            "k": self.k,
            "value": self.value,
            "branch": self.branch.as_str(),
            "argmin": self.argmin.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "per_partition": self
                .per_partition
                .iter()
                .map(|(p, v)| json!([p.to_string(), v]))
                .collect::<Vec<_>>(),
        })
    }
}

/// `(sqrt(min), min)`.
pub(crate) fn reduce_min(values: &[f64]) -> (f64, f64) {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (min.sqrt(), min)
}

/// Geometric mean of `values`, square-rooted, via the mean of logs in input
/// order. A zero factor yields exactly zero.
pub(crate) fn reduce_geometric(values: &[f64]) -> f64 {
    if values.iter().any(|&v| v <= 0.0) {
        return 0.0;
    }
    let log_sum: f64 = values.iter().map(|v| v.ln()).sum();
    (log_sum / (2.0 * values.len() as f64)).exp()
}
