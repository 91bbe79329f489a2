//! Seeded random states and unitaries.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::state::{PureState, RegisterLayout};

/// Deterministic generator for a `(seed, stream)` pair.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase of
/// `R`'s diagonal folded back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..d {
        let diag = r[(c, c)];
        let phase = if diag.norm() > 0.0 {
            diag / diag.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..d {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Independent Haar unitary on every subsystem.
pub fn local_unitaries<R: Rng + ?Sized>(layout: &RegisterLayout, rng: &mut R) -> Vec<DMatrix<Complex64>> {
    layout.dims().iter().map(|&d| haar_unitary(d, rng)).collect()
}

/// Haar-random pure state.
pub fn pure_state<R: Rng + ?Sized>(layout: &RegisterLayout, rng: &mut R) -> Result<PureState> {
    let amps = (0..layout.total_dim()).map(|_| gaussian(rng)).collect();
    PureState::normalized(layout.clone(), amps)
}

/// Uniformly random permutation of `0..n`.
pub fn permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
