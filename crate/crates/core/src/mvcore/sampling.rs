//! Random elements for property tests, fitter restarts and benchmarks.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::multivector::Multivector;
use super::signature::Signature;

/// Dense multivector with real coefficients uniform in `[-1, 1]`.
pub fn random_multivector<R: Rng + ?Sized>(sig: &Arc<Signature>, rng: &mut R) -> Multivector {
    Multivector::from_terms(
        sig,
        (0..sig.blade_count() as u32).map(|m| (m, Complex64::new(rng.gen_range(-1.0..=1.0), 0.0))),
    )
}

/// Dense multivector with complex coefficients, both parts in `[-1, 1]`.
pub fn random_complex_multivector<R: Rng + ?Sized>(
    sig: &Arc<Signature>,
    rng: &mut R,
) -> Multivector {
    Multivector::from_terms(
        sig,
        (0..sig.blade_count() as u32).map(|m| {
            (
                m,
                Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
            )
        }),
    )
}

pub fn random_vector<R: Rng + ?Sized>(sig: &Arc<Signature>, rng: &mut R) -> Multivector {
    Multivector::from_terms(
        sig,
        (0..sig.dim()).map(|i| (1u32 << i, Complex64::new(rng.gen_range(-1.0..=1.0), 0.0))),
    )
}

/// Random real antisymmetric matrix with entries in `[-1, 1]`.
#[allow(clippy::needless_range_loop)]
pub fn random_antisymmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-1.0..=1.0);
            a[i][j] = Complex64::new(x, 0.0);
            a[j][i] = Complex64::new(-x, 0.0);
        }
    }
    a
}
