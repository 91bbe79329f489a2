//! Permutation-invariant part of a state and the lower bound built on it.
//!
//! `rho^PI = (1/n!) sum_pi P_pi rho P_pi^dagger`. For a pure `|phi>`, the
//! measure of `(U rho U^dagger)^PI` bounds the measure of `|phi>` from below
//! for every local unitary `U`. The bound is exact only when the projected
//! operator is pure; otherwise its measure is replaced by a roof upper
//! estimate and the candidate is flagged as uncertified.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Tolerances, MAX_PI_SUBSYSTEMS};
use crate::error::{Error, Result};
use crate::measures::{Measure, MeasureParam};
use crate::random;
use crate::roof::{roof_upper, EnsembleDecomposition, RoofOptions};
use crate::state::{DensityOperator, PureState, RegisterLayout};

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

fn check_pi_layout(layout: &RegisterLayout) -> Result<()> {
    if !layout.is_uniform() {
        return Err(Error::DimensionMismatch(
            "permutation-invariant projection needs equal local dimensions".into(),
        ));
    }
    if layout.n() > MAX_PI_SUBSYSTEMS {
        return Err(Error::RegisterTooLarge {
            n: layout.n(),
            cap: MAX_PI_SUBSYSTEMS,
        });
    }
    Ok(())
}

/// `map[i]` = index of basis state `i` after moving subsystem `perm[t]` to slot `t`.
fn index_map(layout: &RegisterLayout, perm: &[usize]) -> Vec<usize> {
    (0..layout.total_dim())
        .map(|i| perm.iter().fold(0, |acc, &s| acc * layout.dim(s) + layout.digit(i, s)))
        .collect()
}

/// Uniform average of `op` over all subsystem permutations.
pub fn pi_project(op: &DensityOperator) -> Result<DensityOperator> {
    let layout = op.layout();
    check_pi_layout(layout)?;
    let d = layout.total_dim();
    // inverse maps: output entry (a, b) gathers input (inv[a], inv[b])
    let inverses: Vec<Vec<usize>> = permutations(layout.n())
        .iter()
        .map(|perm| {
            let map = index_map(layout, perm);
            let mut inv = vec![0; d];
            for (i, &j) in map.iter().enumerate() {
                inv[j] = i;
            }
            inv
        })
        .collect();
    let scale = 1.0 / inverses.len() as f64;
    let m = op.matrix();
    let rows: Vec<Vec<Complex64>> = (0..d)
        .into_par_iter()
        .map(|a| {
            let mut row = vec![Complex64::new(0.0, 0.0); d];
            for inv in &inverses {
                let ia = inv[a];
                for (b, slot) in row.iter_mut().enumerate() {
                    *slot += m[(ia, inv[b])];
                }
            }
            row.iter_mut().for_each(|x| *x *= scale);
            row
        })
        .collect();
    let matrix = DMatrix::from_fn(d, d, |a, b| rows[a][b]);
    Ok(DensityOperator::from_parts_unchecked(layout.clone(), matrix))
}

/// `{1/n!, P_pi |phi>}`, the decomposition of `(|phi><phi|)^PI` that comes
/// from its definition.
pub fn permuted_ensemble(state: &PureState, tol: &Tolerances) -> Result<EnsembleDecomposition> {
    check_pi_layout(state.layout())?;
    let perms = permutations(state.n());
    let w = 1.0 / perms.len() as f64;
    let members = perms
        .iter()
        .map(|perm| Ok((w, state.permute_subsystems(perm)?)))
        .collect::<Result<Vec<_>>>()?;
    EnsembleDecomposition::new(members, tol)
}

#[derive(Debug, Clone)]
pub struct PiOptions {
    /// Random product unitaries tried besides the identity.
    pub samples: usize,
    pub seed: u64,
    /// Roof search used when a projected operator is mixed. Its warm start
    /// is always the permuted ensemble of the rotated state.
    pub roof: RoofOptions,
}

impl Default for PiOptions {
    fn default() -> Self {
        Self {
            samples: 32,
            seed: 0,
            roof: RoofOptions {
                restarts: 1,
                max_sweeps: 1,
                ..RoofOptions::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiCandidate {
    /// 0 is the identity, `i > 0` the `i`-th random unitary.
    pub sample: usize,
    /// True when the projected operator was pure and the value is exact.
    pub certified: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiBound {
    /// Max over all candidates.
    pub value: f64,
    /// Whether `value` is attained by a certified candidate.
    pub certified: bool,
    /// Max over certified candidates only; a proven lower bound.
    pub certified_value: Option<f64>,
    /// Max over roof-estimated candidates only.
    pub heuristic_value: Option<f64>,
    pub candidates: Vec<PiCandidate>,
}

impl PiBound {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "label": if self.certified { "certified" } else { "heuristic" },
            "certified_value": self.certified_value,
            "heuristic_value": self.heuristic_value,
            "candidates": self.candidates.iter().map(|c| json!({
                "sample": c.sample,
                "certified": c.certified,
                "value": c.value,
            })).collect::<Vec<_>>(),
        })
    }
}

fn candidate(
    sample: usize,
    state: &PureState,
    measure: &dyn Measure,
    param: &MeasureParam,
    options: &PiOptions,
    tol: &Tolerances,
) -> Result<PiCandidate> {
    let projected = pi_project(&state.to_density())?;
    if let Some(pure) = projected.as_pure(tol)? {
        return Ok(PiCandidate {
            sample,
            certified: true,
            value: measure.value(&pure, param, tol)?,
        });
    }
    let roof = RoofOptions {
        warm_start: Some(permuted_ensemble(state, tol)?),
        seed: options.seed ^ (sample as u64).rotate_left(32),
        ..options.roof.clone()
    };
    let est = roof_upper(&projected, measure, param, &roof, tol)?;
    Ok(PiCandidate {
        sample,
        certified: false,
        value: est.value,
    })
}

/// Best-of-samples estimate of `max_U E((U rho U^dagger)^PI)`.
pub fn pi_lower_bound(
    state: &PureState,
    measure: &dyn Measure,
    param: &MeasureParam,
    options: &PiOptions,
    tol: &Tolerances,
) -> Result<PiBound> {
    check_pi_layout(state.layout())?;
    let mut rotated = vec![state.clone()];
    for sample in 1..=options.samples {
        let mut rng = random::rng(options.seed, sample as u64);
        let factors = random::local_unitaries(state.layout(), &mut rng);
        rotated.push(state.apply_local_unitary(&factors, tol)?);
    }
    let candidates: Vec<PiCandidate> = rotated
        .par_iter()
        .enumerate()
        .map(|(i, s)| candidate(i, s, measure, param, options, tol))
        .collect::<Result<_>>()?;
    let max_of = |certified: bool| {
        candidates
            .iter()
            .filter(|c| c.certified == certified)
            .map(|c| c.value)
            .reduce(f64::max)
    };
    let certified_value = max_of(true);
    let heuristic_value = max_of(false);
    let (value, certified) = match (certified_value, heuristic_value) {
        (Some(c), Some(h)) if h > c => (h, false),
        (Some(c), _) => (c, true),
        (None, Some(h)) => (h, false),
        (None, None) => unreachable!("identity candidate always present"),
    };
    Ok(PiBound {
        value,
        certified,
        certified_value,
        heuristic_value,
        candidates,
    })
}
