//! Numerical characters of space curves, read from the h-vector of a general
//! plane section.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{hilbert_data, hilbert_data_raw};
use crate::kernel::random::{random_vector, seeded_rng};
use crate::kernel::{HomogeneousIdeal, Matrix, Polynomial, Ring};

/// First difference of the Hilbert function of a zero-dimensional scheme in P².
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HVector {
    pub h: Vec<i64>,
}

impl HVector {
    pub fn new(mut h: Vec<i64>) -> Self {
        while h.last() == Some(&0) {
            h.pop();
        }
        HVector { h }
    }

    pub fn get(&self, j: usize) -> i64 {
        self.h.get(j).copied().unwrap_or(0)
    }

    /// Section degree `Σ h(j)`.
    pub fn total(&self) -> i64 {
        self.h.iter().sum()
    }

    pub fn sigma(&self) -> i64 {
        self.h.iter().copied().max().unwrap_or(0)
    }

    /// `Ok` when `h(j) = j + 1` for `j < σ` and `h` is non-increasing from
    /// `σ - 1` on; otherwise the first offending index.
    pub fn check_admissible(&self) -> std::result::Result<(), usize> {
        let sigma = self.sigma() as usize;
        if self.h.is_empty() {
            return Err(0);
        }
        for j in 0..self.h.len() {
            let ok = if j < sigma {
                self.h[j] == j as i64 + 1
            } else {
                self.h[j] <= self.h[j - 1]
            };
            if !ok {
                return Err(j);
            }
        }
        Ok(())
    }
}

/// `χ = (n_0, ..., n_{σ-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumericalCharacter {
    pub n: Vec<i64>,
}

impl NumericalCharacter {
    pub fn new(n: Vec<i64>) -> Result<Self> {
        let sigma = n.len() as i64;
        if n.is_empty() || n.windows(2).any(|w| w[0] < w[1]) || *n.last().unwrap() < sigma {
            return Err(Error::InvalidArgument(format!("not a numerical character: {n:?}")));
        }
        Ok(NumericalCharacter { n })
    }

    pub fn sigma(&self) -> usize {
        self.n.len()
    }

    /// `Σ (n_i - i)`, the degree of the section.
    pub fn degree(&self) -> i64 {
        self.n.iter().enumerate().map(|(i, &v)| v - i as i64).sum()
    }
}

impl fmt::Display for NumericalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.n.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn character_from_hvector(h: &HVector) -> Result<NumericalCharacter> {
    h.check_admissible()
        .map_err(|index| Error::InadmissibleHVector { index })?;
    let sigma = h.sigma();
    let n = (0..sigma)
        .map(|i| {
            let last = (0..h.h.len()).rev().find(|&j| h.h[j] > i).expect("h reaches σ");
            1 + last as i64
        })
        .collect();
    NumericalCharacter::new(n)
}

/// `h(j) = #{i : i ≤ j < n_i}`.
pub fn hvector_from_character(chi: &NumericalCharacter) -> HVector {
    let top = chi.n[0] as usize;
    let h = (0..top)
        .map(|j| {
            chi.n
                .iter()
                .enumerate()
                .filter(|&(i, &ni)| i <= j && (j as i64) < ni)
                .count() as i64
        })
        .collect();
    HVector::new(h)
}

/// `g(χ) = Σ_{j≥2} (j - 1) h(j)`.
pub fn genus_of_character(chi: &NumericalCharacter) -> i64 {
    let h = hvector_from_character(chi);
    h.h.iter()
        .enumerate()
        .skip(2)
        .map(|(j, &v)| (j as i64 - 1) * v)
        .sum()
}

/// Connectedness verdict; `gap_after = Some(i)` names the first `i` with `n_i - n_{i+1} ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    pub gap_after: Option<usize>,
}

pub fn is_connected(chi: &NumericalCharacter) -> Connectivity {
    let gap = chi.n.windows(2).position(|w| w[0] - w[1] >= 2);
    Connectivity {
        connected: gap.is_none(),
        gap_after: gap,
    }
}

/// h-vector of a saturated zero-dimensional ideal in three variables.
pub fn h_vector(points: &HomogeneousIdeal) -> Result<HVector> {
    let data = hilbert_data_raw(points)?;
    if data.dim != 0 {
        return Err(Error::InvalidArgument(format!(
            "expected a zero-dimensional scheme, got dimension {}",
            data.dim
        )));
    }
    let top = data.stabilization_degree + 2;
    Ok(HVector::new((0..=top).map(|j| data.hf_difference(j)).collect()))
}

/// Saturated ideal, in three variables, of `V(I) ∩ H` for a seeded general plane `H`.
pub fn plane_section(i: &HomogeneousIdeal, seed: u64) -> Result<HomogeneousIdeal> {
    let data = hilbert_data(i)?;
    if data.dim != 1 {
        return Err(Error::NotACurve { dim: data.dim });
    }
    let n = i.nvars();
    let field = i.ring().field;
    let plane = Ring::new(3, field);
    const ATTEMPTS: usize = 6;
    for attempt in 0..ATTEMPTS as u64 {
        let mut rng = seeded_rng(seed.wrapping_mul(7919).wrapping_add(attempt), "plane-section");
        let rows: Vec<Vec<u32>> = (0..n).map(|_| random_vector(field, 3, &mut rng)).collect();
        if Matrix::from_rows(field, &rows).rank() < 3 {
            continue;
        }
        let images: Vec<Polynomial> = rows.iter().map(|r| Polynomial::linear(plane, r)).collect();
        let sec = i.substitute(&images)?.saturate_irrelevant()?;
        let sd = hilbert_data_raw(&sec)?;
        if sd.dim == 0 && sd.degree == data.degree {
            return Ok(sec);
        }
    }
    Err(Error::RetriesExhausted {
        what: "general plane section".into(),
        attempts: ATTEMPTS,
    })
}

/// Least `k` with a nonzero degree-`k` form through the points.
pub fn sigma_of_points(points: &HomogeneousIdeal) -> Result<i64> {
    let data = hilbert_data_raw(points)?;
    let mut k = 0i64;
    while points.ring().graded_dim(k) - data.hf(k) == 0 {
        k += 1;
    }
    Ok(k)
}

/// Character of a curve from three seeded plane sections that must agree.
pub fn character_of_curve(i: &HomogeneousIdeal, seed: u64) -> Result<NumericalCharacter> {
    for window in 0..3u64 {
        let mut found: Vec<NumericalCharacter> = Vec::new();
        for k in 0..3u64 {
            let sec = plane_section(i, seed.wrapping_add(3 * window + k))?;
            let h = h_vector(&sec)?;
            let chi = character_from_hvector(&h)?;
            let sigma = sigma_of_points(&sec)?;
            if sigma != chi.sigma() as i64 {
                return Err(Error::Certificate {
                    name: "sigma from forms vs h-vector".into(),
                    expected: chi.sigma().to_string(),
                    actual: sigma.to_string(),
                });
            }
            found.push(chi);
        }
        if found.iter().all(|c| *c == found[0]) {
            return Ok(found.swap_remove(0));
        }
    }
    Err(Error::UnstableCharacter)
}
