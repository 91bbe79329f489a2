use nalgebra::DMatrix;
use num_complex::Complex64;

use super::spectrum::{hermitian_eigenvalues, hermitian_eigh, Spectrum};
use super::{PureState, RegisterLayout};
use crate::config::Tolerances;
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive-semidefinite operator on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: RegisterLayout,
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates and returns the operator. Inputs within the Hermiticity
    /// tolerance are replaced by `(m + m^dagger) / 2`.
    pub fn new(layout: RegisterLayout, matrix: DMatrix<Complex64>, tol: &Tolerances) -> Result<Self> {
        let d = layout.total_dim();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::LengthMismatch {
                expected: d * d,
                found: matrix.nrows() * matrix.ncols(),
            });
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > tol.herm {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol.norm {
            return Err(Error::BadTrace(trace));
        }
        let op = Self { layout, matrix };
        op.spectrum(tol)?;
        Ok(op)
    }

    pub(crate) fn from_parts_unchecked(layout: RegisterLayout, matrix: DMatrix<Complex64>) -> Self {
        Self { layout, matrix }
    }

    pub fn from_pure(state: &PureState) -> Self {
        let a = state.amplitudes();
        let d = a.len();
        let matrix = DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj());
        Self {
            layout: state.layout().clone(),
            matrix,
        }
    }

    /// `sum_i w_i rho_i`. Weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityOperator)], tol: &Tolerances) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidParam("empty mixture".into()))?;
        let layout = first.layout.clone();
        let d = layout.total_dim();
        let mut matrix = DMatrix::zeros(d, d);
        let mut total = 0.0;
        for (w, op) in parts {
            if op.layout != layout {
                return Err(Error::DimensionMismatch("mixture members differ in layout".into()));
            }
            if *w < 0.0 {
                return Err(Error::InvalidParam(format!("negative mixture weight {w}")));
            }
            total += w;
            matrix += &op.matrix * Complex64::new(*w, 0.0);
        }
        if (total - 1.0).abs() > tol.norm {
            return Err(Error::InvalidParam(format!("mixture weights sum to {total}")));
        }
        Ok(Self { layout, matrix })
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Reduced operator on `keep` (0-based subsystem indices, any order; the
    /// result keeps the subsystems in ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = self.layout.check_subset(keep)?;
        if keep.len() == self.layout.n() {
            return Ok(self.clone());
        }
        let layout = self.layout.restrict(&keep)?;
        let (kept_dim, groups) = self.layout.split_indices(&keep);
        let mut out = DMatrix::<Complex64>::zeros(kept_dim, kept_dim);
        for group in &groups {
            for (a, &ia) in group.iter().enumerate() {
                for (b, &ib) in group.iter().enumerate() {
                    out[(a, b)] += self.matrix[(ia, ib)];
                }
            }
        }
        Ok(Self { layout, matrix: out })
    }

    pub fn spectrum(&self, tol: &Tolerances) -> Result<Spectrum> {
        Spectrum::from_raw(hermitian_eigenvalues(&self.matrix), tol)
    }

    /// `Tr rho^p` (the rank for `p == 0`); `p == 1` is rejected.
    pub fn trace_power(&self, p: f64, tol: &Tolerances) -> Result<f64> {
        self.spectrum(tol)?.trace_power(p)
    }

    /// Eigenpairs sorted by nonincreasing eigenvalue, unclamped.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        hermitian_eigh(&self.matrix)
    }

    /// Leading eigenvector as a pure state, if the operator has rank one.
    pub fn as_pure(&self, tol: &Tolerances) -> Result<Option<PureState>> {
        if !self.spectrum(tol)?.is_pure() {
            return Ok(None);
        }
        let (_, vectors) = self.eigh();
        let amps: Vec<Complex64> = vectors.column(0).iter().copied().collect();
        Ok(Some(PureState::normalized(self.layout.clone(), amps)?))
    }

    pub fn kron(&self, other: &DensityOperator) -> Result<DensityOperator> {
        let layout = self.layout.concat(&other.layout)?;
        Ok(Self {
            layout,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    pub fn frobenius_distance(&self, other: &DensityOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn validation_errors() {
        let tol = Tolerances::default();
        let l = RegisterLayout::qubits(1).unwrap();
        let wrong_trace = DMatrix::from_row_slice(2, 2, &[c(0.6), c(0.0), c(0.0), c(0.6)]);
        assert!(matches!(
            DensityOperator::new(l.clone(), wrong_trace, &tol),
            Err(Error::BadTrace(_))
        ));
        let non_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(
            DensityOperator::new(l.clone(), non_herm, &tol),
            Err(Error::NotHermitian(_))
        ));
        let negative = DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            DensityOperator::new(l.clone(), negative, &tol),
            Err(Error::NotPositive(_))
        ));
        let small = DMatrix::from_row_slice(1, 1, &[c(1.0)]);
        assert!(matches!(
            DensityOperator::new(l, small, &tol),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn near_hermitian_input_is_symmetrized() {
        let tol = Tolerances::default();
        let l = RegisterLayout::qubits(1).unwrap();
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5), Complex64::new(0.1, 1e-12), Complex64::new(0.1, 0.0), c(0.5)],
        );
        let op = DensityOperator::new(l, m, &tol).unwrap();
        assert_eq!(hermiticity_deviation(op.matrix()), 0.0);
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let tol = Tolerances::default();
        let zz = states::basis(&[2, 2], &[0, 0]).unwrap();
        let r = DensityOperator::from_pure(&zz).partial_trace(&[0]).unwrap();
        assert_eq!(r.matrix()[(0, 0)], c(1.0));
        assert_eq!(r.matrix()[(1, 1)], c(0.0));
        assert_eq!(r.spectrum(&tol).unwrap().eigenvalues(), &[1.0, 0.0]);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let tol = Tolerances::default();
        let r = DensityOperator::from_pure(&states::bell()).partial_trace(&[0]).unwrap();
        assert!((r.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(r.matrix()[(0, 1)].norm() < 1e-15);
        let s = r.spectrum(&tol).unwrap();
        assert!((s.eigenvalues()[0] - 0.5).abs() < 1e-12);
        assert!((r.trace_power(2.0, &tol).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn w4_single_site_marginal() {
        let tol = Tolerances::default();
        let r = DensityOperator::from_pure(&states::w(4).unwrap())
            .partial_trace(&[3])
            .unwrap();
        assert!((r.matrix()[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((r.matrix()[(1, 1)].re - 0.25).abs() < 1e-15);
        assert!(r.matrix()[(0, 1)].norm() < 1e-15);
        let s = r.spectrum(&tol).unwrap();
        assert!((s.eigenvalues()[0] - 0.75).abs() < 1e-12);
        assert!((s.eigenvalues()[1] - 0.25).abs() < 1e-12);
        assert!((1.0 - r.trace_power(2.0, &tol).unwrap() - 0.375).abs() < 1e-12);
        assert_eq!(r.trace_power(0.0, &tol).unwrap(), 2.0);
    }

    #[test]
    fn pure_projector_spectrum() {
        let tol = Tolerances::default();
        let op = DensityOperator::from_pure(&states::ghz(3).unwrap());
        let s = op.spectrum(&tol).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.eigenvalues()[0], 1.0);
        assert!(s.eigenvalues()[1..].iter().all(|&l| l == 0.0));
        assert_eq!(op.trace_power(2.0, &tol).unwrap(), 1.0);
    }

    #[test]
    fn full_keep_is_identity() {
        let op = DensityOperator::from_pure(&states::phi1());
        let same = op.partial_trace(&[3, 1, 0, 2]).unwrap();
        assert_eq!(same, op);
    }
}
