//! Hilbert functions and polynomials of graded quotients `R/I`, and the
//! invariants read off from them: dimension, degree, arithmetic genus,
//! graded-piece dimensions, the ACM test and `h¹(O_B(k))` for ACM curves.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{binomial, HomogeneousIdeal, Monomial, Polynomial, Saturation};
use crate::kernel::random::{random_vector, seeded_rng};

/// Numerator `N(t)` of the Hilbert series `N(t) / (1 - t)^n` of `R / (monomials)`.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut memo = HashMap::new();
    numerator_rec(minimalize(gens.to_vec()), &mut memo)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|g| g.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

fn canonical_key(gens: &[Monomial]) -> Vec<[u8; 16]> {
    let mut key: Vec<[u8; 16]> = gens
        .iter()
        .map(|g| {
            let mut a = [0u8; 16];
            for (i, slot) in a.iter_mut().enumerate() {
                *slot = g.exp(i) as u8;
            }
            a
        })
        .collect();
    key.sort_unstable();
    key
}

fn numerator_rec(gens: Vec<Monomial>, memo: &mut HashMap<Vec<[u8; 16]>, Vec<i64>>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.degree() == 0) {
        return vec![];
    }
    // pairwise coprime generators: product of (1 - t^deg)
    let coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            acc = poly_mul(&acc, &one_minus_t_pow(g.degree()));
        }
        return acc;
    }
    let key = canonical_key(&gens);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    // pivot x_i^e: most frequent variable among non-pure generators, median exponent
    let mut counts = [0usize; crate::kernel::MAX_VARS];
    for g in gens.iter().filter(|g| g.support_mask().count_ones() > 1) {
        for (i, c) in counts.iter_mut().enumerate() {
            if g.exp(i) > 0 {
                *c += 1;
            }
        }
    }
    let var = (0..crate::kernel::MAX_VARS)
        .max_by_key(|&i| (counts[i], std::cmp::Reverse(i)))
        .expect("some variable");
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|g| g.support_mask().count_ones() > 1 && g.exp(var) > 0)
        .map(|g| g.exp(var))
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2];
    let pivot = Monomial::var_pow(var, e);

    let mut plus = gens.clone();
    plus.push(pivot);
    let plus = minimalize(plus);
    let colon = minimalize(
        gens.iter()
            .map(|g| g.gcd(&pivot).quotient_of(g))
            .collect(),
    );
    let a = numerator_rec(plus, memo);
    let b = numerator_rec(colon, memo);
    let mut shifted = vec![0i64; e as usize];
    shifted.extend(b);
    let out = poly_add(&a, &shifted);
    memo.insert(key, out.clone());
    out
}

fn one_minus_t_pow(d: u32) -> Vec<i64> {
    let mut v = vec![0i64; d as usize + 1];
    v[0] += 1;
    v[d as usize] -= 1;
    v
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    trim(out)
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// `x (x-1) ... (x-r+1) / r!` for any integer `x`.
fn binom_poly(x: i64, r: u32) -> i64 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..r as i64 {
        num *= (x - i) as i128;
        den *= (i + 1) as i128;
    }
    (num / den) as i64
}

/// Hilbert data of a graded quotient `R/I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    pub nvars: usize,
    /// Hilbert series numerator over `(1 - t)^nvars`.
    pub numerator: Vec<i64>,
    /// Reduced numerator over `(1 - t)^(dim + 1)`.
    pub reduced_numerator: Vec<i64>,
    /// `HF(t)` for `t = 0..hf.len()`.
    pub hf: Vec<i64>,
    /// Coefficients of the Hilbert polynomial in `t`, lowest degree first,
    /// as reduced fractions `"a/b"` (or integers).
    pub hp_coeffs: Vec<String>,
    /// Projective dimension; `-1` for the empty scheme.
    pub dim: i64,
    pub degree: i64,
    /// `(-1)^dim (HP(0) - 1)`.
    pub p_a: i64,
    pub stabilization_degree: i64,
}

impl HilbertData {
    /// Build from the Hilbert series numerator over `(1 - t)^nvars`.
    pub fn from_numerator(nvars: usize, numerator: Vec<i64>) -> Self {
        let numerator = trim(numerator);
        // divide out (1 - t) as long as N(1) = 0
        let mut q = numerator.clone();
        let mut krull = nvars as i64;
        while !q.is_empty() && q.iter().sum::<i64>() == 0 {
            q = divide_one_minus_t(&q);
            krull -= 1;
        }
        let (dim, degree) = if q.is_empty() || krull == 0 {
            (-1, 0)
        } else {
            (krull - 1, q.iter().sum())
        };
        let mut data = HilbertData {
            nvars,
            numerator,
            reduced_numerator: q,
            hf: vec![],
            hp_coeffs: vec![],
            dim,
            degree,
            p_a: 0,
            stabilization_degree: 0,
        };
        let hp0 = data.hp(0);
        data.p_a = if dim < 0 {
            0
        } else {
            let s = if dim % 2 == 0 { 1 } else { -1 };
            s * (hp0 - 1)
        };
        let top = data.numerator.len() as i64 + 1;
        let mut stab = top;
        while stab > 0 && data.hf(stab - 1) == data.hp(stab - 1) {
            stab -= 1;
        }
        data.stabilization_degree = stab;
        let tmax = (stab + dim.max(0) + 2).max(8);
        data.hf = (0..=tmax).map(|t| data.hf(t)).collect();
        data.hp_coeffs = data.hp_coefficients().iter().map(ratio_text).collect();
        data
    }

    /// Value of the Hilbert function at `t` (0 for negative `t`).
    pub fn hf(&self, t: i64) -> i64 {
        if t < 0 {
            return 0;
        }
        let n = self.nvars as i64;
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| c * binomial(t - k as i64 + n - 1, n - 1))
            .sum()
    }

    /// Value of the Hilbert polynomial at any integer `t`.
    pub fn hp(&self, t: i64) -> i64 {
        if self.dim < 0 {
            return 0;
        }
        let r = self.dim as u32;
        self.reduced_numerator
            .iter()
            .enumerate()
            .map(|(k, &c)| c * binom_poly(t - k as i64 + r as i64, r))
            .sum()
    }

    /// Exact coefficients of the Hilbert polynomial, lowest degree first.
    pub fn hp_coefficients(&self) -> Vec<Ratio<i64>> {
        if self.dim < 0 {
            return vec![];
        }
        let r = self.dim as usize;
        // Newton forward differences at t = 0..=r, then expand in monomials
        let vals: Vec<i64> = (0..=r as i64).map(|t| self.hp(t)).collect();
        let mut diffs = vec![vals.clone()];
        for k in 1..=r {
            let prev = &diffs[k - 1];
            diffs.push((0..prev.len() - 1).map(|i| prev[i + 1] - prev[i]).collect());
        }
        // HP(t) = Σ_k Δ^k HP(0) · C(t, k); C(t,k) = t(t-1)...(t-k+1)/k!
        let mut coeffs = vec![Ratio::from_integer(0i64); r + 1];
        for k in 0..=r {
            let dk = diffs[k][0];
            let mut falling = vec![Ratio::from_integer(1i64)];
            for i in 0..k as i64 {
                let mut next = vec![Ratio::from_integer(0i64); falling.len() + 1];
                for (j, c) in falling.iter().enumerate() {
                    next[j + 1] += *c;
                    next[j] -= *c * i;
                }
                falling = next;
            }
            let fact: i64 = (1..=k as i64).product();
            for (j, c) in falling.iter().enumerate() {
                coeffs[j] += *c * dk / fact;
            }
        }
        coeffs
    }

    /// First difference of the Hilbert function, `HF(t) - HF(t-1)`.
    pub fn hf_difference(&self, t: i64) -> i64 {
        self.hf(t) - self.hf(t - 1)
    }
}

fn ratio_text(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn divide_one_minus_t(q: &[i64]) -> Vec<i64> {
    // q(t) = (1 - t) s(t): s_k = Σ_{j ≤ k} q_j
    let mut s = Vec::with_capacity(q.len().saturating_sub(1));
    let mut acc = 0i64;
    for &c in &q[..q.len() - 1] {
        acc += c;
        s.push(acc);
    }
    trim(s)
}

/// Hilbert data of `R/I` for the ideal exactly as given (no saturation).
pub fn hilbert_data_raw(i: &HomogeneousIdeal) -> Result<HilbertData> {
    let gb = i.gb()?;
    let num = hilbert_numerator(&gb.lead_monomials());
    Ok(HilbertData::from_numerator(i.nvars(), num))
}

/// Hilbert data of the projective scheme `V(I)`: the ideal is saturated first.
pub fn hilbert_data(i: &HomogeneousIdeal) -> Result<HilbertData> {
    let sat = ensure_saturated(i)?;
    hilbert_data_raw(&sat)
}

fn ensure_saturated(i: &HomogeneousIdeal) -> Result<HomogeneousIdeal> {
    if i.saturation_flag() == Saturation::Yes {
        Ok(i.clone())
    } else {
        i.saturate_irrelevant()
    }
}

/// `dim I_k = h⁰(I_X(k))` for the saturated ideal of `X`.
pub fn graded_dim(i: &HomogeneousIdeal, k: i64) -> Result<i64> {
    if k < 0 {
        return Ok(0);
    }
    let data = hilbert_data(i)?;
    Ok(i.ring().graded_dim(k) - data.hf(k))
}

/// Length of the zero-dimensional scheme `V(I + J)`; 0 when empty.
pub fn length_of_intersection(i: &HomogeneousIdeal, j: &HomogeneousIdeal) -> Result<i64> {
    let data = hilbert_data(&i.sum(j)?)?;
    if data.dim > 0 {
        return Err(Error::PositiveDimensional { dim: data.dim });
    }
    Ok(data.degree)
}

/// Saturated ideal of `V(I) ∩ H` for a seeded random hyperplane `H`, kept in
/// the ambient ring. Retries until the section has the expected degree and
/// dimension one less.
pub fn hyperplane_section(i: &HomogeneousIdeal, seed: u64) -> Result<HomogeneousIdeal> {
    let data = hilbert_data(i)?;
    if data.dim < 1 {
        return Err(Error::InvalidArgument("hyperplane section of a zero-dimensional scheme".into()));
    }
    for attempt in 0..8u64 {
        let mut rng = seeded_rng(seed.wrapping_mul(1_000_003).wrapping_add(attempt), "hyperplane-section");
        let h = Polynomial::linear(i.ring(), &random_vector(i.ring().field, i.nvars(), &mut rng));
        if h.is_zero() {
            continue;
        }
        let sec = i.add_generators(&[h])?.saturate_irrelevant()?;
        let sd = hilbert_data_raw(&sec)?;
        if sd.dim == data.dim - 1 && sd.degree == data.degree {
            return Ok(sec);
        }
    }
    Err(Error::RetriesExhausted {
        what: "general hyperplane section".into(),
        attempts: 8,
    })
}

/// ACM test for a curve: the first difference of `HF(R/I)` must equal the
/// Hilbert function of the saturated general hyperplane section.
pub fn acm_test(i: &HomogeneousIdeal, seed: u64) -> Result<bool> {
    let sat = ensure_saturated(i)?;
    let data = hilbert_data_raw(&sat)?;
    if data.dim != 1 {
        return Err(Error::NotACurve { dim: data.dim });
    }
    let sec = hyperplane_section(&sat, seed)?;
    let sd = hilbert_data_raw(&sec)?;
    let top = data.stabilization_degree.max(sd.stabilization_degree) + 3;
    Ok((0..=top).all(|t| data.hf_difference(t) == sd.hf(t)))
}

/// `h¹(O_B(k)) = HF(R/I, k) - HP(k)`, valid for ACM curves only.
pub fn h1_structure_sheaf(i: &HomogeneousIdeal, k: i64, seed: u64) -> Result<i64> {
    if !acm_test(i, seed)? {
        return Err(Error::NotAcm);
    }
    let data = hilbert_data(i)?;
    Ok(data.hf(k) - data.hp(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Field, Ring};

    fn ring(n: usize) -> Ring {
        Ring::new(n, Field::default())
    }

    #[test]
    fn whole_space() {
        let d = hilbert_data_raw(&HomogeneousIdeal::zero(ring(4))).unwrap();
        assert_eq!(d.dim, 3);
        assert_eq!(d.degree, 1);
        for t in 0..6 {
            assert_eq!(d.hp(t), binomial(t + 3, 3));
        }
        assert_eq!(d.hp_coeffs, vec!["1", "11/6", "1", "1/6"]);
    }

    #[test]
    fn twisted_cubic_data() {
        let i = HomogeneousIdeal::parse(ring(4), &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]).unwrap();
        let d = hilbert_data(&i).unwrap();
        assert_eq!((d.dim, d.degree, d.p_a), (1, 3, 0));
        assert_eq!(d.hf[..4], [1, 4, 7, 10]);
        assert!(acm_test(&i, 1).unwrap());
        assert_eq!(h1_structure_sheaf(&i, 0, 1).unwrap(), 0);
        assert_eq!(graded_dim(&i, 2).unwrap(), 3);
    }

    #[test]
    fn skew_lines_are_not_acm() {
        let r = ring(4);
        let a = HomogeneousIdeal::parse(r, &["x0", "x1"]).unwrap();
        let b = HomogeneousIdeal::parse(r, &["x2", "x3"]).unwrap();
        let u = a.intersect(&b).unwrap();
        let d = hilbert_data(&u).unwrap();
        assert_eq!((d.degree, d.p_a), (2, -1));
        assert!(!acm_test(&u, 1).unwrap());
        assert_eq!(length_of_intersection(&a, &b).unwrap(), 0);
        assert!(matches!(h1_structure_sheaf(&u, 0, 1), Err(Error::NotAcm)));
    }

    #[test]
    fn empty_scheme() {
        let r = ring(3);
        let d = hilbert_data_raw(&HomogeneousIdeal::irrelevant(r)).unwrap();
        assert_eq!(d.dim, -1);
        assert_eq!(d.degree, 0);
    }

    #[test]
    fn numerator_of_complete_intersection() {
        // (x0^2, x1^3) in 3 vars: (1-t^2)(1-t^3)
        let n = hilbert_numerator(&[Monomial::new(&[2]), Monomial::new(&[0, 3])]);
        assert_eq!(n, vec![1, 0, -1, -1, 0, 1]);
    }

    #[test]
    fn pivot_recursion_matches_inclusion_exclusion() {
        // (x0 x1, x1 x2): HS numerator 1 - 2t^2 + t^3
        let n = hilbert_numerator(&[Monomial::new(&[1, 1]), Monomial::new(&[0, 1, 1])]);
        assert_eq!(n, vec![1, 0, -2, 1]);
    }
}
