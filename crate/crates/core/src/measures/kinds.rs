use std::collections::HashMap;

use super::param::MeasureParam;
use super::registry::Measure;
use super::report::{reduce_geometric, reduce_min, Branch, MeasureReport, Reduction};
use super::terms::{is_block_uncorrelated, mean_deficits, per_block};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::partitions::{self, Partition};
use crate::state::PureState;

fn argmin_ties(family: &[Partition], values: &[f64], min: f64, tol: &Tolerances) -> Vec<Partition> {
    family
        .iter()
        .zip(values)
        .filter(|(_, &v)| v - min <= tol.tie)
        .map(|(p, _)| p.clone())
        .collect()
}

fn formula_report(
    name: &'static str,
    param: &MeasureParam,
    family: Vec<Partition>,
    values: Vec<f64>,
    reduction: Reduction,
    tol: &Tolerances,
) -> MeasureReport {
    let (value, argmin) = match reduction {
        Reduction::Min => {
            let (value, min) = reduce_min(&values);
            (value, argmin_ties(&family, &values, min, tol))
        }
        Reduction::GeometricMean => (reduce_geometric(&values), Vec::new()),
    };
    MeasureReport {
        measure: name,
        p: param.p(),
        k: param.k(),
        value,
        branch: Branch::Formula,
        reduction,
        argmin,
        per_partition: family.into_iter().zip(values).collect(),
    }
}

/// Minimum over bounded partitions of the root mean block deficit.
#[derive(Debug, Clone, Copy, Default)]
pub struct PeConcurrence;

impl Measure for PeConcurrence {
    fn name(&self) -> &'static str {
        "pe"
    }

    fn evaluate(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
        let family = partitions::family(state.n(), param.k(), false)?;
        let values = mean_deficits(state, &family, param.p(), tol)?;
        Ok(formula_report(self.name(), param, family, values, Reduction::Min, tol))
    }

    fn value(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<f64> {
        let family = partitions::family(state.n(), param.k(), false)?;
        Ok(reduce_min(&mean_deficits(state, &family, param.p(), tol)?).0)
    }
}

/// Geometric mean over bounded partitions of the mean block deficit.
#[derive(Debug, Clone, Copy, Default)]
pub struct GpeConcurrence;

impl Measure for GpeConcurrence {
    fn name(&self) -> &'static str {
        "gpe"
    }

    fn evaluate(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
        let family = partitions::family(state.n(), param.k(), false)?;
        let values = mean_deficits(state, &family, param.p(), tol)?;
        Ok(formula_report(
            self.name(),
            param,
            family,
            values,
            Reduction::GeometricMean,
            tol,
        ))
    }

    fn value(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<f64> {
        let family = partitions::family(state.n(), param.k(), false)?;
        Ok(reduce_geometric(&mean_deficits(state, &family, param.p(), tol)?))
    }
}

/// Genuine partitions (some block of size exactly `k`) that contain at least
/// one size-`k` block correlated across every split.
pub fn admitted_partitions(state: &PureState, k: usize, tol: &Tolerances) -> Result<Vec<Partition>> {
    if k < 2 {
        return Err(Error::InvalidParam(
            "genuine measures need k >= 2 (a size-1 block has no bipartition)".into(),
        ));
    }
    let family = partitions::family(state.n(), k, true)?;
    let correlated: HashMap<u64, bool> = per_block(state, &family, |block| {
        Ok(block.len() == k && is_block_uncorrelated(state, block, tol)?.is_none())
    })?;
    Ok(family
        .into_iter()
        .filter(|part| part.masks().any(|m| correlated[&m]))
        .collect())
}

fn genuine_report(
    name: &'static str,
    state: &PureState,
    param: &MeasureParam,
    constant: f64,
    constant_branch: Branch,
    reduction: Reduction,
    tol: &Tolerances,
) -> Result<MeasureReport> {
    let admitted = admitted_partitions(state, param.k(), tol)?;
    if admitted.is_empty() {
        return Ok(MeasureReport {
            measure: name,
            p: param.p(),
            k: param.k(),
            value: constant,
            branch: constant_branch,
            reduction,
            argmin: Vec::new(),
            per_partition: Vec::new(),
        });
    }
    let values = mean_deficits(state, &admitted, param.p(), tol)?;
    Ok(formula_report(name, param, admitted, values, reduction, tol))
}

fn check_constant(c: f64) -> Result<f64> {
    if c > 0.0 && c.is_finite() {
        Ok(c)
    } else {
        Err(Error::InvalidParam(format!("constant {c} must be positive")))
    }
}

/// Genuine PE: constant `a` when every genuine partition's size-`k` blocks
/// factorize, otherwise the PE formula over the admitted partitions.
#[derive(Debug, Clone, Copy)]
pub struct GenuinePe {
    a: f64,
}

impl GenuinePe {
    pub fn new(a: f64) -> Result<Self> {
        Ok(Self { a: check_constant(a)? })
    }
}

impl Default for GenuinePe {
    fn default() -> Self {
        Self { a: 1.0 }
    }
}

impl Measure for GenuinePe {
    fn name(&self) -> &'static str {
        "genuine-pe"
    }

    fn evaluate(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
        genuine_report(self.name(), state, param, self.a, Branch::ConstantA, Reduction::Min, tol)
    }
}

/// Genuine GPE: constant `b`, or the geometric mean over admitted partitions.
#[derive(Debug, Clone, Copy)]
pub struct GenuineGpe {
    b: f64,
}

impl GenuineGpe {
    pub fn new(b: f64) -> Result<Self> {
        Ok(Self { b: check_constant(b)? })
    }
}

impl Default for GenuineGpe {
    fn default() -> Self {
        Self { b: 1.0 }
    }
}

impl Measure for GenuineGpe {
    fn name(&self) -> &'static str {
        "genuine-gpe"
    }

    fn evaluate(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
        genuine_report(
            self.name(),
            state,
            param,
            self.b,
            Branch::ConstantB,
            Reduction::GeometricMean,
            tol,
        )
    }
}
