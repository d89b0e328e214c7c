//! Seeded randomness. All sampling uses PCG-XSH-RR 64/32 (`rand_pcg::Pcg32`: 64-bit LCG
//! state, 32-bit output), keyed by `(seed, stream)` so chunked parallel work draws the
//! same values regardless of the worker count.

use rand::Rng;
use rand_pcg::Pcg32;

use crate::gf::{Elem, Field, Frobenius};
use crate::linalg::Mat;

pub type SweepRng = Pcg32;

pub fn seeded(seed: u64, stream: u64) -> SweepRng {
    Pcg32::new(seed, stream)
}

pub fn random_elem(rng: &mut SweepRng, f: &Field) -> Elem {
    rng.random_range(0..f.order()) as Elem
}

pub fn random_nonzero(rng: &mut SweepRng, f: &Field) -> Elem {
    rng.random_range(1..f.order()) as Elem
}

pub fn random_matrix(rng: &mut SweepRng, f: &Field, rows: usize, cols: usize) -> Mat {
    let data = (0..rows * cols).map(|_| random_elem(rng, f)).collect();
    Mat::from_vec(rows, cols, data).expect("sized buffer")
}

pub fn random_nonzero_matrix(rng: &mut SweepRng, f: &Field, side: usize) -> Mat {
    loop {
        let m = random_matrix(rng, f, side, side);
        if !m.is_zero() {
            return m;
        }
    }
}

/// Uniform element of `GL(side, q)` by rejection.
pub fn random_invertible(rng: &mut SweepRng, f: &Field, side: usize) -> Mat {
    loop {
        let m = random_matrix(rng, f, side, side);
        if m.rank(f) == side {
            return m;
        }
    }
}

/// Random invertible `g` that is not a scalar `alpha I` with `alpha` fixed by `sigma`.
pub fn random_non_kernel(rng: &mut SweepRng, f: &Field, sigma: &Frobenius, side: usize) -> Mat {
    loop {
        let g = random_invertible(rng, f, side);
        let a = g.get(0, 0);
        if g != Mat::scalar(side, a) || !sigma.is_fixed(a) {
            return g;
        }
    }
}
