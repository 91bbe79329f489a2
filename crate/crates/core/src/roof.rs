//! Convex-roof upper bounds for mixed states.
//!
//! Every size-`m` pure-state decomposition of `rho = sum_j l_j |e_j><e_j|`
//! (rank `r`) has the form `|psi_i~> = sum_j V_ij sqrt(l_j) |e_j>` for an
//! `m x r` matrix `V` with orthonormal columns. The search rotates pairs of
//! rows of `V` by complex Givens rotations, which keeps the columns
//! orthonormal, and accepts a rotation only when the ensemble average drops.
//! Any ensemble reached this way is feasible, so the returned value is an
//! upper bound on the roof.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::measures::{Measure, MeasureParam};
use crate::random;
use crate::state::{io, DensityOperator, PureState, RegisterLayout};

/// Members with weight below this contribute nothing and are dropped.
const MIN_WEIGHT: f64 = 1e-14;
const THETA_GRID: usize = 8;
const PHI_GRID: usize = 4;
const THETA_REFINE: usize = 16;
const PHI_REFINE: usize = 12;

/// Pure-state ensemble `{p_i, |phi_i>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleDecomposition {
    members: Vec<(f64, PureState)>,
}

impl EnsembleDecomposition {
    /// Checks positivity, normalization and shared layout of the members.
    pub fn new(members: Vec<(f64, PureState)>, tol: &Tolerances) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidParam("empty ensemble".into()))?;
        let layout = first.1.layout().clone();
        let mut total = 0.0;
        for (p, s) in &members {
            if p.is_nan() || *p <= 0.0 {
                return Err(Error::InvalidParam(format!("ensemble weight {p} is not positive")));
            }
            if s.layout() != &layout {
                return Err(Error::DimensionMismatch("ensemble members differ in layout".into()));
            }
            total += p;
        }
        if (total - 1.0).abs() > tol.norm {
            return Err(Error::InvalidParam(format!("ensemble weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn layout(&self) -> &RegisterLayout {
        self.members[0].1.layout()
    }

    /// `sum_i p_i |phi_i><phi_i|`.
    pub fn reconstruct(&self) -> DensityOperator {
        let d = self.layout().total_dim();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for (p, s) in &self.members {
            let a = s.amplitudes();
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += a[i] * a[j].conj() * *p;
                }
            }
        }
        DensityOperator::from_parts_unchecked(self.layout().clone(), m)
    }

    /// `sum_i p_i E(phi_i)`.
    pub fn average(&self, measure: &dyn Measure, param: &MeasureParam, tol: &Tolerances) -> Result<f64> {
        let mut sum = 0.0;
        for (p, s) in &self.members {
            sum += p * measure.value(s, param, tol)?;
        }
        Ok(sum)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.members
                .iter()
                .map(|(p, s)| json!({ "probability": p, "state": io::pure_to_value(s) }))
                .collect(),
        )
    }
}

#[derive(Debug, Clone)]
pub struct RoofOptions {
    /// Ensemble size; `None` means rank + 2.
    pub members: Option<usize>,
    /// Number of starting points (best-of). Start 0 is `warm_start` when
    /// given, then the eigen-ensemble, then seeded Haar-random isometries.
    pub restarts: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    /// A sweep improving the average by less than this ends the search.
    pub improvement: f64,
    pub warm_start: Option<EnsembleDecomposition>,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            members: None,
            restarts: 16,
            seed: 0,
            max_sweeps: 200,
            improvement: 1e-9,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoofEstimate {
    /// Upper bound on the roof: the average over `ensemble`.
    pub value: f64,
    pub ensemble: EnsembleDecomposition,
    pub restarts: usize,
    /// Index of the start that produced `ensemble`.
    pub best_restart: usize,
    /// Whether the winning start stopped on the improvement threshold
    /// rather than the sweep limit.
    pub converged: bool,
    pub sweeps: usize,
}

impl RoofEstimate {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "bound": "upper",
            "restarts": self.restarts,
            "best_restart": self.best_restart,
            "converged": self.converged,
            "sweeps": self.sweeps,
            "ensemble": self.ensemble.to_json(),
        })
    }
}

struct Problem<'a> {
    layout: RegisterLayout,
    /// Columns `sqrt(l_j) e_j`, d x r.
    weighted: DMatrix<Complex64>,
    measure: &'a dyn Measure,
    param: &'a MeasureParam,
    tol: &'a Tolerances,
}

impl Problem<'_> {
    fn member(&self, row: &[Complex64]) -> DVector<Complex64> {
        let coeffs = DVector::from_column_slice(row);
        &self.weighted * coeffs
    }

    /// `p_i E(psi_i)` for one row of V.
    fn cost(&self, row: &[Complex64]) -> Result<f64> {
        let v = self.member(row);
        let weight = v.norm_squared();
        if weight < MIN_WEIGHT {
            return Ok(0.0);
        }
        let state = PureState::normalized(self.layout.clone(), v.iter().copied().collect())?;
        Ok(weight * self.measure.value(&state, self.param, self.tol)?)
    }

    fn ensemble(&self, v: &DMatrix<Complex64>) -> Result<EnsembleDecomposition> {
        let mut members = Vec::new();
        for i in 0..v.nrows() {
            let row: Vec<Complex64> = v.row(i).iter().copied().collect();
            let vec = self.member(&row);
            let weight = vec.norm_squared();
            if weight < MIN_WEIGHT {
                continue;
            }
            members.push((weight, PureState::normalized(self.layout.clone(), vec.iter().copied().collect())?));
        }
        let total: f64 = members.iter().map(|(p, _)| p).sum();
        members.iter_mut().for_each(|(p, _)| *p /= total);
        Ok(EnsembleDecomposition { members })
    }
}

struct Run {
    value: f64,
    v: DMatrix<Complex64>,
    converged: bool,
    sweeps: usize,
}

fn rotate(a: &[Complex64], b: &[Complex64], theta: f64, phi: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let new_a = a.iter().zip(b).map(|(x, y)| x * c - e * y * s).collect();
    let new_b = a.iter().zip(b).map(|(x, y)| e.conj() * x * s + y * c).collect();
    (new_a, new_b)
}

fn golden<F: FnMut(f64) -> Result<f64>>(mut f: F, lo: f64, hi: f64, iters: usize) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

fn optimize(problem: &Problem<'_>, mut v: DMatrix<Complex64>, options: &RoofOptions) -> Result<Run> {
    let m = v.nrows();
    let rows = |v: &DMatrix<Complex64>, i: usize| -> Vec<Complex64> { v.row(i).iter().copied().collect() };
    let mut costs: Vec<f64> = (0..m).map(|i| problem.cost(&rows(&v, i))).collect::<Result<_>>()?;
    let mut total: f64 = costs.iter().sum();
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < options.max_sweeps {
        sweeps += 1;
        let before = total;
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (rows(&v, i), rows(&v, j));
                let base = costs[i] + costs[j];
                let eval = |theta: f64, phi: f64| -> Result<(f64, f64, f64)> {
                    let (na, nb) = rotate(&a, &b, theta, phi);
                    let (ca, cb) = (problem.cost(&na)?, problem.cost(&nb)?);
                    Ok((ca + cb, ca, cb))
                };
                let mut best = (base, 0.0, 0.0);
                for ti in 1..THETA_GRID {
                    let theta = std::f64::consts::PI * ti as f64 / THETA_GRID as f64;
                    for pi in 0..PHI_GRID {
                        let phi = std::f64::consts::PI * pi as f64 / PHI_GRID as f64;
                        let (f, _, _) = eval(theta, phi)?;
                        if f < best.0 {
                            best = (f, theta, phi);
                        }
                    }
                }
                let step = std::f64::consts::PI / THETA_GRID as f64;
                let phi0 = best.2;
                let (theta, _) = golden(|t| Ok(eval(t, phi0)?.0), best.1 - step, best.1 + step, THETA_REFINE)?;
                let pstep = std::f64::consts::PI / PHI_GRID as f64;
                let (phi, _) = golden(|p| Ok(eval(theta, p)?.0), phi0 - pstep, phi0 + pstep, PHI_REFINE)?;
                let mut candidates = vec![(best.1, best.2), (theta, phi0), (theta, phi)];
                candidates.retain(|&(t, _)| t != 0.0);
                let mut chosen: Option<(f64, f64, f64, f64, f64)> = None;
                for (t, p) in candidates {
                    let (f, ca, cb) = eval(t, p)?;
                    if f < base && chosen.is_none_or(|c| f < c.0) {
                        chosen = Some((f, t, p, ca, cb));
                    }
                }
                if let Some((_, t, p, ca, cb)) = chosen {
                    let (na, nb) = rotate(&a, &b, t, p);
                    for c in 0..v.ncols() {
                        v[(i, c)] = na[c];
                        v[(j, c)] = nb[c];
                    }
                    costs[i] = ca;
                    costs[j] = cb;
                }
            }
        }
        total = costs.iter().sum();
        if before - total < options.improvement {
            converged = true;
            break;
        }
    }
    Ok(Run {
        value: total,
        v,
        converged,
        sweeps,
    })
}

/// Orthonormalizes the columns of `v`, keeping each column's phase.
fn orthonormal_columns(v: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let cols = v.ncols();
    let qr = v.qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..cols {
        let d = r[(c, c)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for row in 0..q.nrows() {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}

/// Upper estimate of the convex roof of `measure` at `op`.
pub fn roof_upper(
    op: &DensityOperator,
    measure: &dyn Measure,
    param: &MeasureParam,
    options: &RoofOptions,
    tol: &Tolerances,
) -> Result<RoofEstimate> {
    if options.restarts == 0 {
        return Err(Error::InvalidParam("at least one restart is required".into()));
    }
    let (values, vectors) = op.eigh();
    let rank = values.iter().filter(|&&l| l > tol.rank).count().max(1);
    let mut m = options.members.unwrap_or(rank + 2);
    if m < rank {
        return Err(Error::EnsembleTooSmall { members: m, rank });
    }
    if let Some(warm) = &options.warm_start {
        if warm.layout() != op.layout() {
            return Err(Error::DimensionMismatch("warm start layout differs from the operator".into()));
        }
        m = m.max(warm.len());
    }
    let d = op.layout().total_dim();
    let weighted = DMatrix::from_fn(d, rank, |row, col| vectors[(row, col)] * values[col].max(0.0).sqrt());
    let problem = Problem {
        layout: op.layout().clone(),
        weighted,
        measure,
        param,
        tol,
    };

    let eigen_start = DMatrix::from_fn(m, rank, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let warm_start = options.warm_start.as_ref().map(|warm| {
        let mut v = DMatrix::<Complex64>::zeros(m, rank);
        for (i, (p, s)) in warm.members().iter().enumerate() {
            for j in 0..rank {
                let overlap: Complex64 = (0..d).map(|x| vectors[(x, j)].conj() * s.amplitudes()[x]).sum();
                v[(i, j)] = overlap * (p / values[j]).sqrt();
            }
        }
        orthonormal_columns(v)
    });

    let start = |index: usize| -> DMatrix<Complex64> {
        let deterministic: Vec<&DMatrix<Complex64>> = warm_start.iter().chain([&eigen_start]).collect();
        if let Some(v) = deterministic.get(index) {
            return (*v).clone();
        }
        let mut rng = random::rng(options.seed, index as u64);
        random::haar_unitary(m, &mut rng).columns(0, rank).into_owned()
    };

    let runs: Vec<Result<Run>> = (0..options.restarts)
        .into_par_iter()
        .map(|i| optimize(&problem, start(i), options))
        .collect();
    let mut best: Option<(usize, Run)> = None;
    for (i, run) in runs.into_iter().enumerate() {
        let run = run?;
        if best.as_ref().is_none_or(|(_, b)| run.value < b.value) {
            best = Some((i, run));
        }
    }
    let (best_restart, run) = best.expect("at least one restart");
    let ensemble = problem.ensemble(&run.v)?;
    let value = ensemble.average(measure, param, tol)?;
    Ok(RoofEstimate {
        value,
        ensemble,
        restarts: options.restarts,
        best_restart,
        converged: run.converged,
        sweeps: run.sweeps,
    })
}
