use crate::config::DEFAULT_MAX_DIM;
use crate::error::{Error, Result};

/// Local dimensions of a register of `n` subsystems.
///
/// Basis indices are mixed-radix with subsystem 0 most significant, so the
/// stride of subsystem `t` is the product of the dimensions after it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegisterLayout {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl RegisterLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_MAX_DIM)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("register has no subsystems".into()));
        }
        if let Some(t) = dims.iter().position(|&d| d < 2) {
            return Err(Error::InvalidLayout(format!(
                "subsystem {} has dimension {} (must be at least 2)",
                t + 1,
                dims[t]
            )));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
        }
        if total > cap {
            return Err(Error::DimensionCap { dim: total, cap });
        }
        let mut strides = vec![1; dims.len()];
        for t in (0..dims.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * dims[t + 1];
        }
        Ok(Self {
            dims,
            strides,
            total,
        })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, t: usize) -> usize {
        self.dims[t]
    }

    pub fn stride(&self, t: usize) -> usize {
        self.strides[t]
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn is_uniform(&self) -> bool {
        self.dims.windows(2).all(|w| w[0] == w[1])
    }

    /// Digit of subsystem `t` in basis index `index`.
    #[inline]
    pub fn digit(&self, index: usize, t: usize) -> usize {
        (index / self.strides[t]) % self.dims[t]
    }

    pub fn digits(&self, index: usize) -> Vec<usize> {
        (0..self.n()).map(|t| self.digit(index, t)).collect()
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.strides)
            .map(|(d, s)| d * s)
            .sum()
    }

    /// Layout of the listed subsystems, in the given order.
    pub fn restrict(&self, subsystems: &[usize]) -> Result<Self> {
        Self::new(subsystems.iter().map(|&t| self.dims[t]).collect())
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::new(dims)
    }

    /// Sorted, deduplicated, range-checked subsystem list.
    pub(crate) fn check_subset(&self, subsystems: &[usize]) -> Result<Vec<usize>> {
        if subsystems.is_empty() {
            return Err(Error::InvalidSubsystems("empty subsystem set".into()));
        }
        let mut sorted = subsystems.to_vec();
        sorted.sort_unstable();
        if let Some(&t) = sorted.iter().find(|&&t| t >= self.n()) {
            return Err(Error::InvalidSubsystems(format!(
                "subsystem index {t} out of range for {} subsystems",
                self.n()
            )));
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSubsystems("duplicate subsystem index".into()));
        }
        Ok(sorted)
    }

    /// Global basis indices grouped by complement index: `groups[r][a]` is the
    /// global index whose kept digits encode `a` and whose traced digits encode `r`.
    pub(crate) fn split_indices(&self, keep: &[usize]) -> (usize, Vec<Vec<usize>>) {
        let mut is_kept = vec![false; self.n()];
        for &t in keep {
            is_kept[t] = true;
        }
        let kept_dim: usize = keep.iter().map(|&t| self.dims[t]).product();
        let rest_dim = self.total / kept_dim;
        let mut groups = vec![vec![0usize; kept_dim]; rest_dim];
        for index in 0..self.total {
            let (mut a, mut r) = (0usize, 0usize);
            for (t, &kept) in is_kept.iter().enumerate() {
                let d = self.digit(index, t);
                if kept {
                    a = a * self.dims[t] + d;
                } else {
                    r = r * self.dims[t] + d;
                }
            }
            groups[r][a] = index;
        }
        (kept_dim, groups)
    }
}
