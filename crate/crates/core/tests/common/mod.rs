//! Oracles that avoid Gröbner bases: graded pieces are spanned directly by
//! monomial multiples of the generators and measured by matrix rank.

#![allow(dead_code)]

use p3loci::kernel::{monomials_of_degree, HomogeneousIdeal, Matrix, Polynomial, Ring};

/// `dim (R/I)_k` from the rank of `{m·g : deg m + deg g = k}`.
pub fn hf_by_rank(i: &HomogeneousIdeal, k: u32) -> i64 {
    let ring = i.ring();
    let cols = monomials_of_degree(ring.nvars, k);
    let mut rows = Vec::new();
    for g in i.generators() {
        let Some(dg) = g.homogeneous_degree() else { continue };
        if dg > k {
            continue;
        }
        for m in monomials_of_degree(ring.nvars, k - dg) {
            let p = g.mul_term(1, &m);
            rows.push(cols.iter().map(|c| p.coeff(c)).collect::<Vec<u32>>());
        }
    }
    let rank = if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(ring.field, &rows).rank()
    };
    cols.len() as i64 - rank as i64
}

/// `(degree, p_a)` of a curve, read off the Hilbert function in degrees `k, k+1`
/// (valid once `k` is past the regularity of a saturated ideal).
pub fn curve_by_rank(i: &HomogeneousIdeal, k: u32) -> (i64, i64) {
    let (a, b) = (hf_by_rank(i, k), hf_by_rank(i, k + 1));
    let deg = b - a;
    (deg, 1 - (a - deg * k as i64))
}

/// Length of a zero-dimensional scheme from its Hilbert function in degree `k`.
pub fn length_by_rank(i: &HomogeneousIdeal, k: u32) -> i64 {
    hf_by_rank(i, k)
}

pub fn ideal(ring: Ring, gens: &[&str]) -> HomogeneousIdeal {
    HomogeneousIdeal::parse(ring, gens).expect("parses")
}

pub fn poly(ring: Ring, s: &str) -> Polynomial {
    p3loci::kernel::parse_polynomial(ring, s).expect("parses")
}
