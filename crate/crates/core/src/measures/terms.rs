use std::collections::HashMap;

use rayon::prelude::*;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::partitions::{block_bipartitions, Partition};
use crate::state::{DensityOperator, PureState};

/// `|1 - Tr rho_block^p|` for the reduced state on `block`.
pub fn block_term(state: &PureState, block: &[usize], p: f64, tol: &Tolerances) -> Result<f64> {
    let power = state.reduced_spectrum(block, tol)?.trace_power(p)?;
    Ok((1.0 - power).abs())
}

fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

// below this the rayon hand-off costs more than the work
const PARALLEL_MIN_DIM: usize = 64;

/// Evaluates `f` once per distinct block mask of `family`.
pub(crate) fn per_block<T, F>(state: &PureState, family: &[Partition], f: F) -> Result<HashMap<u64, T>>
where
    T: Send,
    F: Fn(&[usize]) -> Result<T> + Sync,
{
    let mut masks: Vec<u64> = family.iter().flat_map(Partition::masks).collect();
    masks.sort_unstable();
    masks.dedup();
    let eval = |&mask: &u64| f(&mask_elements(mask)).map(|v| (mask, v));
    let values: Vec<(u64, T)> = if state.layout().total_dim() >= PARALLEL_MIN_DIM {
        masks.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        masks.iter().map(eval).collect::<Result<_>>()?
    };
    Ok(values.into_iter().collect())
}

/// Mean block deficit `sum_t term(A_t) / m` for every partition, in family order.
pub(crate) fn mean_deficits(
    state: &PureState,
    family: &[Partition],
    p: f64,
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let terms = per_block(state, family, |block| block_term(state, block, p, tol))?;
    Ok(family
        .iter()
        .map(|part| {
            let sum: f64 = part.masks().map(|m| terms[&m]).sum();
            sum / part.num_blocks() as f64
        })
        .collect())
}

/// Frobenius distance between `rho` and `rho_first (x) rho_second`, where
/// `first`/`second` are positions within `rho`'s own subsystems.
fn factorization_distance(rho: &DensityOperator, first: &[usize], second: &[usize]) -> Result<f64> {
    let a = rho.partial_trace(first)?;
    let b = rho.partial_trace(second)?;
    let layout = rho.layout();
    let code = |index: usize, subset: &[usize]| {
        subset
            .iter()
            .fold(0usize, |acc, &t| acc * layout.dim(t) + layout.digit(index, t))
    };
    let d = layout.total_dim();
    let split: Vec<(usize, usize)> = (0..d).map(|i| (code(i, first), code(i, second))).collect();
    let m = rho.matrix();
    let mut sum = 0.0;
    for (i, &(ia, ib)) in split.iter().enumerate() {
        for (j, &(ja, jb)) in split.iter().enumerate() {
            let prod = a.matrix()[(ia, ja)] * b.matrix()[(ib, jb)];
            sum += (m[(i, j)] - prod).norm_sqr();
        }
    }
    Ok(sum.sqrt())
}

/// Looks for a split of `block` across which the reduced state factorizes,
/// i.e. `||rho_block - rho_B1 (x) rho_B2||_F <= tol.correlation`.
/// Returns the first such split (global subsystem indices), or `None` when
/// the block is correlated across every split.
pub fn is_block_uncorrelated(
    state: &PureState,
    block: &[usize],
    tol: &Tolerances,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let block = state.layout().check_subset(block)?;
    if block.len() < 2 {
        return Err(Error::InvalidSubsystems(
            "correlation test needs a block of at least two subsystems".into(),
        ));
    }
    let rho = state.partial_trace(&block)?;
    let positions: Vec<usize> = (0..block.len()).collect();
    for (first, second) in block_bipartitions(&positions)? {
        if factorization_distance(&rho, &first, &second)? <= tol.correlation {
            let global = |pos: &[usize]| pos.iter().map(|&i| block[i]).collect::<Vec<_>>();
            return Ok(Some((global(&first), global(&second))));
        }
    }
    Ok(None)
}
