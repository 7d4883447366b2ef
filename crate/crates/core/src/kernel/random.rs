//! Seeded randomness. Every "general" choice in the crate goes through here so
//! that runs are reproducible from `(prime, seed)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::linalg::Matrix;
use super::monomial::monomials_of_degree;
use super::poly::{Polynomial, Ring};

pub type SeededRng = ChaCha8Rng;

/// A generator for `(seed, stream)`; distinct streams give independent sequences.
pub fn seeded_rng(seed: u64, stream: &str) -> SeededRng {
    // FNV-1a over the stream label
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h);
    rng
}

pub fn random_element(field: Field, rng: &mut SeededRng) -> u32 {
    rng.gen_range(0..field.modulus())
}

pub fn random_nonzero(field: Field, rng: &mut SeededRng) -> u32 {
    rng.gen_range(1..field.modulus())
}

pub fn random_vector(field: Field, n: usize, rng: &mut SeededRng) -> Vec<u32> {
    (0..n).map(|_| random_element(field, rng)).collect()
}

/// Dense random form of degree `d`.
pub fn random_form(ring: Ring, d: u32, rng: &mut SeededRng) -> Polynomial {
    let terms = monomials_of_degree(ring.nvars, d)
        .into_iter()
        .map(|m| (m, random_element(ring.field, rng)))
        .collect();
    Polynomial::from_terms(ring, Default::default(), terms)
}

/// Random linear combination of the given polynomials.
pub fn random_combination(basis: &[Polynomial], rng: &mut SeededRng) -> Option<Polynomial> {
    let first = basis.first()?;
    let f = first.field();
    let mut acc = Polynomial::zero(first.ring());
    for b in basis {
        let c = random_element(f, rng);
        acc = acc.add_scaled(c, &super::monomial::Monomial::ONE, b);
    }
    Some(acc)
}

/// Random invertible `n x n` matrix; redraws on the rare singular sample.
pub fn random_invertible(field: Field, n: usize, rng: &mut SeededRng) -> Matrix {
    loop {
        let rows: Vec<Vec<u32>> = (0..n).map(|_| random_vector(field, n, rng)).collect();
        let m = Matrix::from_rows(field, &rows);
        if m.determinant() != 0 {
            return m;
        }
    }
}
