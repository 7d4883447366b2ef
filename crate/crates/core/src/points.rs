//! Rational points of zero-dimensional schemes in the plane, with local lengths.

use crate::cf::PlanePoint;
use crate::error::{Error, Result};
use crate::invariants::{hilbert_data, hilbert_data_raw};
use crate::kernel::random::{random_invertible, seeded_rng};
use crate::kernel::{Field, HomogeneousIdeal, Matrix, Polynomial, Ring};

/// A rational point of a planar scheme with its local structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemePoint {
    pub coords: PlanePoint,
    /// Length of the scheme at the point.
    pub length: i64,
    /// 2 when the scheme is the full first-order neighbourhood of the point
    /// (length 3, equal to `m_P²` locally), 1 when reduced.
    pub mult: u8,
}

/// Ideal of a point of `P²`, generated by the 2×2 minors of `(x | P)`.
pub fn point_ideal(ring: Ring, p: &PlanePoint) -> Result<HomogeneousIdeal> {
    let f = ring.field;
    let mut gens = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut c = vec![0u32; 3];
        c[i] = p[j];
        c[j] = f.neg(p[i]);
        gens.push(Polynomial::linear(ring, &c));
    }
    HomogeneousIdeal::new(ring, gens)
}

/// Normalizes a projective point so its first nonzero coordinate is 1.
pub fn normalize(field: Field, p: &[u32]) -> PlanePoint {
    let lead = p.iter().copied().find(|&c| c != 0).expect("nonzero point");
    let inv = field.inv(lead);
    [field.mul(p[0], inv), field.mul(p[1], inv), field.mul(p[2], inv)]
}

fn roots_of(field: Field, coeffs: &[u32]) -> Vec<u32> {
    // coeffs[k] is the coefficient of t^k
    (0..field.modulus())
        .filter(|&t| {
            let mut acc = 0u32;
            for &c in coeffs.iter().rev() {
                acc = field.add(field.mul(acc, t), c);
            }
            acc == 0
        })
        .collect()
}

/// Ratios `x_j / x_0` over the points, from the eliminant in `(x_0, x_j)`.
fn ratio_roots(z: &HomogeneousIdeal, j: usize) -> Result<Option<Vec<u32>>> {
    let other = 3 - j;
    let elim = z.eliminate(&[other])?;
    let g = elim
        .gb()?
        .elements()
        .iter()
        .min_by_key(|p| p.homogeneous_degree())
        .cloned()
        .ok_or_else(|| Error::InvalidArgument("empty eliminant".into()))?;
    let deg = g.homogeneous_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![0u32; deg + 1];
    for (m, c) in g.terms() {
        coeffs[m.exp(1) as usize] = *c;
    }
    // a root at x_0 = 0 shows up as a drop in degree
    if coeffs[deg] == 0 {
        return Ok(None);
    }
    Ok(Some(roots_of(z.ring().field, &coeffs)))
}

/// Rational points of the saturated zero-dimensional ideal `z` in three
/// variables, with local lengths. Errors unless the lengths add up to the
/// degree (all points rational and each point either reduced or a full
/// first-order neighbourhood).
pub fn rational_points(z: &HomogeneousIdeal, seed: u64) -> Result<Vec<SchemePoint>> {
    let ring = z.ring();
    if ring.nvars != 3 {
        return Err(Error::InvalidArgument("points live in the plane".into()));
    }
    let data = hilbert_data(z)?;
    if data.dim != 0 {
        return Err(Error::PositiveDimensional { dim: data.dim });
    }
    let z = z.saturate_irrelevant()?;
    let field = ring.field;
    const ATTEMPTS: usize = 6;
    for attempt in 0..ATTEMPTS {
        let mut rng = seeded_rng(seed.wrapping_add(attempt as u64), "rational-points");
        let m = random_invertible(field, 3, &mut rng);
        let zc = z.linear_change(&m)?;
        let (Some(r1), Some(r2)) = (ratio_roots(&zc, 1)?, ratio_roots(&zc, 2)?) else {
            continue;
        };
        let mut found = Vec::new();
        for &a in &r1 {
            for &b in &r2 {
                let q = [1, a, b];
                if zc.generators().iter().all(|g| g.evaluate(&q) == 0) {
                    found.push(normalize(field, &m.mul_vec(&q)));
                }
            }
        }
        let mut out = Vec::new();
        let mut total = 0;
        for p in found {
            let sp = local_structure(&z, &p)?;
            total += sp.length;
            out.push(sp);
        }
        if total != data.degree {
            return Err(Error::Certificate {
                name: "rational points".into(),
                expected: format!("local lengths summing to {}", data.degree),
                actual: total.to_string(),
            });
        }
        if out.iter().any(|p| p.mult == 0) {
            return Err(Error::Certificate {
                name: "local structure".into(),
                expected: "reduced points or first-order neighbourhoods".into(),
                actual: format!("{out:?}"),
            });
        }
        out.sort_by(|a, b| b.mult.cmp(&a.mult).then(a.coords.cmp(&b.coords)));
        return Ok(out);
    }
    Err(Error::RetriesExhausted {
        what: "coordinates separating the points".into(),
        attempts: ATTEMPTS,
    })
}

/// Local length read off `Z + m_P²` and `Z + m_P³`: equal values 1 mean a
/// reduced point, equal values 3 mean `Z = m_P²` near `P` (Nakayama). Any
/// other structure is reported with `mult = 0` and the `m_P³` length.
fn local_structure(z: &HomogeneousIdeal, p: &PlanePoint) -> Result<SchemePoint> {
    let ip = point_ideal(z.ring(), p)?;
    let length_with = |k: u32| -> Result<i64> {
        let s = z.sum(&ip.power(k)?)?.saturate_irrelevant()?;
        Ok(hilbert_data_raw(&s)?.degree)
    };
    let (second, third) = (length_with(2)?, length_with(3)?);
    let mult = match (second, third) {
        (1, 1) => 1,
        (3, 3) => 2,
        _ => 0,
    };
    Ok(SchemePoint {
        coords: *p,
        length: third,
        mult,
    })
}

/// Fat-point ideal `∩ I_P^{m_P}` of a list of points with multiplicities.
pub fn fat_points(ring: Ring, pts: &[(PlanePoint, u8)]) -> Result<HomogeneousIdeal> {
    let mut acc = HomogeneousIdeal::unit(ring);
    for (p, m) in pts {
        acc = acc.intersect(&point_ideal(ring, p)?.power(*m as u32)?)?;
    }
    Ok(acc)
}

/// Matrix whose rows are the coordinates of the points.
pub fn point_matrix(field: Field, pts: &[PlanePoint]) -> Matrix {
    Matrix::from_rows(field, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
}
