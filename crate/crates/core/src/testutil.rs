//! Seeded randomness helpers shared by unit and integration tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Multivector;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_multivector(rng: &mut impl Rng, n: usize) -> Multivector {
    let coeffs = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Multivector::from_coeffs(n, coeffs)
}

pub fn random_real_multivector(rng: &mut impl Rng, n: usize) -> Multivector {
    let coeffs = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), 0.0))
        .collect();
    Multivector::from_coeffs(n, coeffs)
}
