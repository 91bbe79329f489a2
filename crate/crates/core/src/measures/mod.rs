//! Partition-based entanglement measures on pure states.
//!
//! Every measure is built from the block deficit `|1 - Tr rho_A^p|` of the
//! reduced state on each block `A` of a partition; `pe` takes the minimum
//! over partitions of the root mean deficit, `gpe` the geometric mean of the
//! mean deficits. The genuine variants restrict to partitions with a block of
//! size exactly `k` whose reduced state does not factorize.

mod kinds;
mod param;
mod registry;
mod report;
mod terms;

pub use kinds::{admitted_partitions, GenuineGpe, GenuinePe, GpeConcurrence, PeConcurrence};
pub use param::{MeasureParam, Regime};
pub use registry::{Measure, MeasureRegistry};
pub use report::{Branch, MeasureReport, Reduction};
pub use terms::{block_term, is_block_uncorrelated};

use crate::config::Tolerances;
use crate::error::Result;
use crate::state::PureState;

pub fn pe_concurrence(state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
    PeConcurrence.evaluate(state, param, tol)
}

pub fn gpe_concurrence(state: &PureState, param: &MeasureParam, tol: &Tolerances) -> Result<MeasureReport> {
    GpeConcurrence.evaluate(state, param, tol)
}

pub fn genuine_pe(state: &PureState, param: &MeasureParam, a: f64, tol: &Tolerances) -> Result<MeasureReport> {
    GenuinePe::new(a)?.evaluate(state, param, tol)
}

pub fn genuine_gpe(state: &PureState, param: &MeasureParam, b: f64, tol: &Tolerances) -> Result<MeasureReport> {
    GenuineGpe::new(b)?.evaluate(state, param, tol)
}

/// Smallest `k` for which the state is `k`-producible according to `pe`
/// (value at most `zero_tol`); `n` when even `k = n - 1` is positive.
pub fn classify(state: &PureState, p: f64, zero_tol: f64, tol: &Tolerances) -> Result<usize> {
    let n = state.n();
    for k in 1..n {
        let param = MeasureParam::new(p, k)?;
        if PeConcurrence.value(state, &param, tol)? <= zero_tol {
            return Ok(k);
        }
    }
    Ok(n)
}
