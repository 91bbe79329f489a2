use nalgebra::DMatrix;
use num_complex::Complex64;

use super::spectrum::{hermitian_eigenvalues, Spectrum};
use super::{DensityOperator, RegisterLayout};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Normalized amplitude vector on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates the length and the norm of `amplitudes`.
    pub fn new(layout: RegisterLayout, amplitudes: Vec<Complex64>, tol: &Tolerances) -> Result<Self> {
        check_len(&layout, &amplitudes)?;
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > tol.norm {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(layout: RegisterLayout, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_len(&layout, &amplitudes)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_pure(self)
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Reduced operator on `keep`, computed as `M M^dagger` from the
    /// reshaped amplitudes without forming the global projector.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = self.layout.check_subset(keep)?;
        let layout = self.layout.restrict(&keep)?;
        let m = self.reshape(&keep);
        Ok(DensityOperator::from_parts_unchecked(layout, &m * m.adjoint()))
    }

    /// Spectrum of the reduced operator on `keep`. Uses whichever side of
    /// the bipartition is smaller, since both share their nonzero spectrum.
    pub fn reduced_spectrum(&self, keep: &[usize], tol: &Tolerances) -> Result<Spectrum> {
        let keep = self.layout.check_subset(keep)?;
        let m = self.reshape(&keep);
        let gram = if m.nrows() <= m.ncols() {
            &m * m.adjoint()
        } else {
            m.adjoint() * &m
        };
        Spectrum::from_raw(hermitian_eigenvalues(&gram), tol)
    }

    /// Amplitudes as a (kept dimension) x (complement dimension) matrix.
    fn reshape(&self, keep: &[usize]) -> DMatrix<Complex64> {
        let (kept_dim, groups) = self.layout.split_indices(keep);
        DMatrix::from_fn(kept_dim, groups.len(), |a, r| self.amplitudes[groups[r][a]])
    }

    /// Reorders subsystems so that new subsystem `t` carries old subsystem `perm[t]`.
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<PureState> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::InvalidSubsystems(format!(
                "permutation has {} entries for {n} subsystems",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &s in perm {
            if s >= n || seen[s] {
                return Err(Error::InvalidSubsystems("not a permutation".into()));
            }
            seen[s] = true;
        }
        for (t, &s) in perm.iter().enumerate() {
            if self.layout.dim(s) != self.layout.dim(t) {
                return Err(Error::DimensionMismatch(format!(
                    "subsystem {} (dim {}) moved onto slot {} (dim {})",
                    s + 1,
                    self.layout.dim(s),
                    t + 1,
                    self.layout.dim(t)
                )));
            }
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (old, &amp) in self.amplitudes.iter().enumerate() {
            let mut new = 0usize;
            for &s in perm {
                new = new * self.layout.dim(s) + self.layout.digit(old, s);
            }
            out[new] = amp;
        }
        Ok(Self {
            layout: self.layout.clone(),
            amplitudes: out,
        })
    }

    /// Applies `factors[0] (x) ... (x) factors[n-1]`.
    pub fn apply_local_unitary(&self, factors: &[DMatrix<Complex64>], tol: &Tolerances) -> Result<PureState> {
        if factors.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} factors for {} subsystems",
                factors.len(),
                self.n()
            )));
        }
        for (t, u) in factors.iter().enumerate() {
            let d = self.layout.dim(t);
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "factor {} is {}x{}, subsystem has dimension {d}",
                    t + 1,
                    u.nrows(),
                    u.ncols()
                )));
            }
            let dev = unitarity_deviation(u);
            if dev > tol.herm {
                return Err(Error::NotUnitary {
                    index: t + 1,
                    deviation: dev,
                });
            }
        }
        let mut amps = self.amplitudes.clone();
        let mut scratch = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (t, u) in factors.iter().enumerate() {
            apply_single(&self.layout, t, u, &amps, &mut scratch);
            std::mem::swap(&mut amps, &mut scratch);
        }
        Ok(Self {
            layout: self.layout.clone(),
            amplitudes: amps,
        })
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amplitudes = Vec::with_capacity(layout.total_dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { layout, amplitudes })
    }
}

fn apply_single(
    layout: &RegisterLayout,
    t: usize,
    u: &DMatrix<Complex64>,
    input: &[Complex64],
    out: &mut [Complex64],
) {
    let d = layout.dim(t);
    let stride = layout.stride(t);
    for (index, slot) in out.iter_mut().enumerate() {
        let digit = layout.digit(index, t);
        let base = index - digit * stride;
        *slot = (0..d).map(|j| u[(digit, j)] * input[base + j * stride]).sum();
    }
}

pub(crate) fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let prod = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    dev
}

fn check_len(layout: &RegisterLayout, amplitudes: &[Complex64]) -> Result<()> {
    if amplitudes.len() != layout.total_dim() {
        return Err(Error::LengthMismatch {
            expected: layout.total_dim(),
            found: amplitudes.len(),
        });
    }
    Ok(())
}

fn norm_sqr(amplitudes: &[Complex64]) -> f64 {
    amplitudes.iter().map(Complex64::norm_sqr).sum()
}
