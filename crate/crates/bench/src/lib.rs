//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliffhopf::mvcore::sampling::{random_antisymmetric, random_complex_multivector};
use cliffhopf::{Deformation, Multivector, Signature};

/// Two dense complex multivectors in Cl(2,4) and a random deformation of it.
pub struct Fixture {
    pub a: Multivector,
    pub b: Multivector,
    pub deform: Deformation,
}

pub fn cl24_fixture(seed: u64) -> Fixture {
    let sig = Signature::cl24();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_complex_multivector(&sig, &mut rng);
    let b = random_complex_multivector(&sig, &mut rng);
    let deform =
        Deformation::new(&sig, random_antisymmetric(sig.dim(), &mut rng)).expect("antisymmetric");
    Fixture { a, b, deform }
}
