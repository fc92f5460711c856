//! Seeded random inputs for property suites.
//!
//! Coefficients are small rationals `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3`, so that
//! exact computations stay cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{ModelManifold, PolarizedHamiltonian, Transition};
use crate::symbolic::{rat, Poly, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let r = small_rational(rng);
        if !num_traits::Zero::is_zero(&r) {
            return r;
        }
    }
}

/// Up to `max_terms` monomials of total degree at most `max_degree`.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, max_terms: usize) -> Poly {
    let count = rng.gen_range(0..=max_terms);
    let mut terms = Vec::with_capacity(count);
    for _ in 0..count {
        let degree = rng.gen_range(0..=max_degree);
        let mut exps = vec![0u32; nvars];
        for _ in 0..degree {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        terms.push((exps, nonzero_rational(rng)));
    }
    Poly::from_terms(nvars, terms).expect("exponent vectors sized to nvars")
}

/// Random `a` and `b`, each a polynomial of degree at most `max_degree`.
pub fn random_hamiltonian<R: Rng>(
    rng: &mut R,
    manifold: ModelManifold,
    max_degree: u32,
) -> PolarizedHamiltonian {
    let n = manifold.n();
    let a = (0..n).map(|_| random_poly(rng, n, max_degree, 3)).collect();
    let b = (0..manifold.k())
        .map(|_| random_poly(rng, n, max_degree, 3))
        .collect();
    PolarizedHamiltonian::new(manifold, a, b).expect("dimensions match")
}

/// A random Hamiltonian with `a = 0`.
pub fn random_basic_hamiltonian<R: Rng>(
    rng: &mut R,
    manifold: ModelManifold,
    max_degree: u32,
) -> PolarizedHamiltonian {
    random_hamiltonian(rng, manifold, max_degree).basic_part()
}

pub fn random_constant<R: Rng>(rng: &mut R, k: usize) -> Vec<Rational> {
    (0..k).map(|_| small_rational(rng)).collect()
}

/// A random `θ`-preserving transition: invertible `A` with entries in
/// `-2..=2`, small shift, and `φ` from a random quadratic potential.
pub fn random_transition<R: Rng>(rng: &mut R, manifold: ModelManifold) -> Result<Transition> {
    let n = manifold.n();
    loop {
        let a: Vec<Rational> = (0..n * n).map(|_| rat(rng.gen_range(-2..=2), 1)).collect();
        let c = random_constant(rng, n);
        let psi: Vec<Poly> = (0..manifold.k())
            .map(|_| random_poly(rng, n, 2, 3))
            .collect();
        match Transition::from_potential(manifold, a, c, &psi) {
            Err(crate::Error::SingularMatrix) => continue,
            other => return other,
        }
    }
}
