use std::collections::BTreeMap;
use std::sync::Arc;

use super::kinds::{GenuineGpe, GenuinePe, GpeConcurrence, PeConcurrence};
use super::param::MeasureParam;
use super::report::MeasureReport;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::state::PureState;

/// A pure-state entanglement measure over a family of partitions.
///
/// Mixed-state tools (`roof`, `pi`) take `&dyn Measure`, so anything
/// registered here is available to them.
pub trait Measure: Send + Sync {
    /// Registry key, e.g. `"pe"`.
    fn name(&self) -> &'static str;

    fn evaluate(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport>;

    /// Value only; implementations may skip building the report.
    fn value(&self, state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<f64> {
        Ok(self.evaluate(state, param, tol)?.value)
    }
}

/// Measures keyed by name.
#[derive(Clone, Default)]
pub struct MeasureRegistry {
    entries: BTreeMap<&'static str, Arc<dyn Measure>>,
}

impl MeasureRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `pe`, `gpe`, `genuine-pe` (constant `a`) and `genuine-gpe` (constant `b`).
    pub fn with_builtins(a: f64, b: f64) -> Result<Self> {
        let mut reg = Self::empty();
        reg.register(PeConcurrence);
        reg.register(GpeConcurrence);
        reg.register(GenuinePe::new(a)?);
        reg.register(GenuineGpe::new(b)?);
        Ok(reg)
    }

    /// Adds or replaces the measure under its own name.
    pub fn register<M: Measure + 'static>(&mut self, measure: M) {
        self.entries.insert(measure.name(), Arc::new(measure));
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn Measure>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownMeasure(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl std::fmt::Debug for MeasureRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.names()).finish()
    }
}
