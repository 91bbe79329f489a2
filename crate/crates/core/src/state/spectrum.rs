use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Cleaned eigenvalues of a density operator, nonincreasing.
///
/// Eigenvalues at or below the rank threshold are stored as exact zeros and
/// the retained ones are rescaled to sum to one, so a numerically pure
/// operator has spectrum exactly `(1, 0, ..., 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    rank: usize,
}

impl Spectrum {
    pub(crate) fn from_raw(mut raw: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        raw.sort_by(|a, b| b.total_cmp(a));
        if let Some(&min) = raw.last() {
            if min < -tol.psd {
                return Err(Error::NotPositive(min));
            }
        }
        let mut eigenvalues: Vec<f64> = raw
            .into_iter()
            .map(|l| if l <= tol.rank { 0.0 } else { l.min(1.0) })
            .collect();
        let rank = eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let sum: f64 = eigenvalues.iter().sum();
        if sum > 0.0 {
            eigenvalues.iter_mut().for_each(|l| *l /= sum);
        }
        Ok(Self { eigenvalues, rank })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_pure(&self) -> bool {
        self.rank == 1
    }

    /// `sum_i lambda_i^p` over the retained eigenvalues; the rank when `p == 0`.
    pub fn trace_power(&self, p: f64) -> Result<f64> {
        check_power(p)?;
        if p == 0.0 {
            return Ok(self.rank as f64);
        }
        Ok(self
            .eigenvalues
            .iter()
            .take(self.rank)
            .map(|l| l.powf(p))
            .sum())
    }
}

pub(crate) fn check_power(p: f64) -> Result<()> {
    if !p.is_finite() || p < 0.0 {
        return Err(Error::InvalidParam(format!(
            "exponent p={p} must be a finite nonnegative number"
        )));
    }
    if p == 1.0 {
        return Err(Error::InvalidParam(
            "exponent p=1 is excluded (the deficit vanishes identically)".into(),
        ));
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix (unsorted).
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            // closed form avoids the iterative solver for the common qubit case
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let half = 0.5 * (a - d);
            let r = (half * half + b.norm_sqr()).sqrt();
            vec![mean + r, mean - r]
        }
        _ => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    }
}

/// Eigenpairs of a Hermitian matrix, sorted by nonincreasing eigenvalue.
pub(crate) fn hermitian_eigh(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}
