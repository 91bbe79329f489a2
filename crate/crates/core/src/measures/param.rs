use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::check_power;

/// Which branch of the parametrized family an exponent falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p > 1`: deficit `1 - Tr rho^p`.
    Q,
    /// `0 <= p < 1`: deficit `Tr rho^p - 1`.
    Alpha,
}

/// Exponent `p` and block bound `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureParam {
    p: f64,
    k: usize,
}

impl MeasureParam {
    pub fn new(p: f64, k: usize) -> Result<Self> {
        check_power(p)?;
        if k == 0 {
            return Err(Error::InvalidParam("k must be at least 1".into()));
        }
        Ok(Self { p, k })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        Self::new(self.p, k)
    }

    pub fn regime(&self) -> Regime {
        if self.p > 1.0 {
            Regime::Q
        } else {
            Regime::Alpha
        }
    }
}
