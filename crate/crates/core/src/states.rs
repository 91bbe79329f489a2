//! Named example states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{PureState, RegisterLayout};

fn from_terms(n: usize, terms: &[(&str, f64)]) -> PureState {
    let layout = RegisterLayout::qubits(n).expect("valid qubit register");
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.total_dim()];
    for (bits, weight) in terms {
        let index = usize::from_str_radix(bits, 2).expect("binary label");
        amps[index] += Complex64::new(*weight, 0.0);
    }
    PureState::normalized(layout, amps).expect("nonzero state")
}

/// Computational basis state `|digits>`.
pub fn basis(dims: &[usize], digits: &[usize]) -> Result<PureState> {
    let layout = RegisterLayout::new(dims.to_vec())?;
    if digits.len() != dims.len() || digits.iter().zip(dims).any(|(d, n)| d >= n) {
        return Err(Error::InvalidSubsystems(format!(
            "basis digits {digits:?} do not fit dims {dims:?}"
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.total_dim()];
    amps[layout.index_of(digits)] = Complex64::new(1.0, 0.0);
    PureState::normalized(layout, amps)
}

/// `(|00> + |11>) / sqrt 2`.
pub fn bell() -> PureState {
    from_terms(2, &[("00", 1.0), ("11", 1.0)])
}

/// `(|0...0> + |1...1>) / sqrt 2`.
pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidParam("ghz needs at least 2 qubits".into()));
    }
    let zeros = "0".repeat(n);
    let ones = "1".repeat(n);
    Ok(from_terms(n, &[(&zeros, 1.0), (&ones, 1.0)]))
}

/// Uniform superposition of the `n` single-excitation basis states.
pub fn w(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::InvalidParam("w needs at least 2 qubits".into()));
    }
    let labels: Vec<String> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { '1' } else { '0' }).collect())
        .collect();
    let terms: Vec<(&str, f64)> = labels.iter().map(|l| (l.as_str(), 1.0)).collect();
    Ok(from_terms(n, &terms))
}

/// `(|0000> + |1011> + |1101> + |1111>) / 2`.
pub fn phi1() -> PureState {
    from_terms(4, &[("0000", 1.0), ("1011", 1.0), ("1101", 1.0), ("1111", 1.0)])
}

/// `(|0000> + |1111> + |1001> + |1110>) / 2`.
pub fn phi2() -> PureState {
    from_terms(4, &[("0000", 1.0), ("1111", 1.0), ("1001", 1.0), ("1110", 1.0)])
}

/// `sin t (|010>/2 + sqrt(3)/2 |100>) + cos t |001>`, with `t` in degrees.
pub fn phitheta(theta_deg: f64) -> PureState {
    let t = theta_deg.to_radians();
    let layout = RegisterLayout::qubits(3).expect("valid qubit register");
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b010] = Complex64::new(0.5 * t.sin(), 0.0);
    amps[0b100] = Complex64::new(0.75f64.sqrt() * t.sin(), 0.0);
    amps[0b001] = Complex64::new(t.cos(), 0.0);
    PureState::normalized(layout, amps).expect("nonzero state")
}
