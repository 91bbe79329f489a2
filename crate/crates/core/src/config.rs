//! Numerical tolerances and size caps shared across the crate.

/// Tolerances used when validating and decomposing operators.
///
/// `rank` is shared by the rank count (`p = 0`) and the `0 < p < 1` trace
/// powers: eigenvalues at or below it are treated as exact zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of the squared norm / trace from 1.
    pub norm: f64,
    /// Max entrywise deviation from Hermiticity (and unitarity for local factors).
    pub herm: f64,
    /// Eigenvalues in `[-psd, 0)` are clamped to zero; anything lower is rejected.
    pub psd: f64,
    /// Eigenvalues `<= rank` do not count towards the rank or trace powers.
    pub rank: f64,
    /// Partitions within this distance of the minimum are reported as ties.
    pub tie: f64,
    /// Frobenius distance below which a block is treated as a tensor product.
    pub correlation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-10,
            herm: 1e-10,
            psd: 1e-9,
            rank: 1e-9,
            tie: 1e-10,
            correlation: 1e-8,
        }
    }
}

/// Default cap on the total Hilbert-space dimension of a register.
pub const DEFAULT_MAX_DIM: usize = 1 << 20;

/// Default cap on `n` for partition counting.
pub const DEFAULT_MAX_PARTITION_N: usize = 16;

/// Largest register handled by the permutation-invariant projection (8! terms).
pub const MAX_PI_SUBSYSTEMS: usize = 8;
