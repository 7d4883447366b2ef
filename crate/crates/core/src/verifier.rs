//! The linear system `|(d−1)H − B|` of a base locus: assembly, spannedness,
//! characteristic curve, image degree, sectional curve and the audit of the
//! hypotheses of the birationality criterion.

use serde::{Deserialize, Serialize};

use crate::builders::{restrict_to_plane, BaseLocusBundle, CaseId, Certificate};
use crate::cf::{check_cf, CFReport, PlaneConfig, PlanePoint};
use crate::error::{Error, Result};
use crate::implicit::implicitize;
use crate::invariants::{graded_dim, hilbert_data_raw, length_of_intersection, HilbertData};
use crate::kernel::random::{random_element, random_vector, seeded_rng, SeededRng};
use crate::kernel::{HomogeneousIdeal, Matrix, Monomial, Polynomial, Ring, Saturation};
use crate::points::rational_points;

/// Six forms of degree `d − 1` spanning `(I_B)_{d−1}`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub case: CaseId,
    pub degree: u32,
    pub basis: Vec<Polynomial>,
    pub i_b: HomogeneousIdeal,
}

pub fn assemble_system(bundle: &BaseLocusBundle) -> Result<LinearSystem> {
    let degree = bundle.d() - 1;
    let basis = bundle.i_b.degree_part(degree)?;
    if basis.len() != 6 {
        return Err(Error::H0Mismatch {
            expected: 6,
            actual: basis.len() as i64,
        });
    }
    Ok(LinearSystem {
        case: bundle.case,
        degree,
        basis,
        i_b: bundle.i_b.clone(),
    })
}

/// Base scheme of a set of forms compared with `B`.
#[derive(Clone, Debug)]
pub struct Spannedness {
    pub spanned: bool,
    /// `sat(⟨forms⟩) : I_B`, the ideal of the extra base locus; `None` when spanned.
    pub excess: Option<HomogeneousIdeal>,
}

pub fn spannedness_check(forms: &[Polynomial], i_b: &HomogeneousIdeal) -> Result<Spannedness> {
    let j = HomogeneousIdeal::new(i_b.ring(), forms.to_vec())?.saturate_irrelevant()?;
    if j.same_ideal(i_b)? {
        return Ok(Spannedness {
            spanned: true,
            excess: None,
        });
    }
    Ok(Spannedness {
        spanned: false,
        excess: Some(j.colon(i_b)?),
    })
}

/// Seeded general members `s₁, s₂, s₃` of the system and an auxiliary member `f`.
#[derive(Clone, Debug)]
pub struct Members {
    pub s: [Polynomial; 3],
    pub f: Polynomial,
    /// Coefficients of `s₁, s₂` in the basis.
    pub coeffs: [Vec<u32>; 2],
}

fn combine(basis: &[Polynomial], c: &[u32]) -> Polynomial {
    basis
        .iter()
        .zip(c)
        .fold(Polynomial::zero(basis[0].ring()), |acc, (b, &c)| acc.add_scaled(c, &Monomial::ONE, b))
}

pub fn general_members(sys: &LinearSystem, seed: u64) -> Members {
    let mut rng = seeded_rng(seed, "system-members");
    let field = sys.i_b.ring().field;
    let draw = |rng: &mut SeededRng| random_vector(field, sys.basis.len(), rng);
    let c: Vec<Vec<u32>> = (0..4).map(|_| draw(&mut rng)).collect();
    Members {
        s: [combine(&sys.basis, &c[0]), combine(&sys.basis, &c[1]), combine(&sys.basis, &c[2])],
        f: combine(&sys.basis, &c[3]),
        coeffs: [c[0].clone(), c[1].clone()],
    }
}

#[derive(Clone, Debug)]
pub struct CharacteristicCurve {
    pub ideal: HomogeneousIdeal,
    pub degree: i64,
    pub p_a: i64,
    pub members: Members,
    pub attempts: usize,
}

/// `Γ = ⟨s₁, s₂⟩ : f^∞`, the residual of `B` in two general members; retried
/// over seeds until `deg Γ = d`.
pub fn characteristic_curve(sys: &LinearSystem, seed: u64, retries: usize) -> Result<CharacteristicCurve> {
    let d = sys.degree as i64 + 1;
    let mut last = None;
    for attempt in 0..=retries as u64 {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x2545_f491_4f6c_dd1d));
        let members = general_members(sys, s);
        let ci = HomogeneousIdeal::new(sys.i_b.ring(), vec![members.s[0].clone(), members.s[1].clone()])?;
        let gamma = ci.saturate_element(&members.f)?.saturate_irrelevant()?;
        gamma.set_saturation_flag(Saturation::Yes);
        let data = hilbert_data_raw(&gamma)?;
        if data.dim == 1 && data.degree == d {
            return Ok(CharacteristicCurve {
                degree: data.degree,
                p_a: data.p_a,
                ideal: gamma,
                members,
                attempts: attempt as usize,
            });
        }
        last = Some(data.degree);
    }
    Err(Error::Certificate {
        name: "degree of the characteristic curve".into(),
        expected: d.to_string(),
        actual: format!("{last:?}"),
    })
}

/// Named parts of `B` used for incidence counts, with the weight each part
/// carries in `Γ·Σ` (2 for a line or curve whose first infinitesimal
/// neighbourhood lies in `B`).
pub fn weighted_parts(bundle: &BaseLocusBundle) -> Vec<(String, HomogeneousIdeal, i64)> {
    match (&bundle.b1, &bundle.b2) {
        (Some(b1), Some(b2)) => {
            let w = if bundle.b1_double.is_some() { 2 } else { 1 };
            vec![("B1".into(), b1.clone(), w), ("B2".into(), b2.clone(), 1)]
        }
        _ => vec![("B".into(), bundle.i_b.clone(), 1)],
    }
}

/// `deg(Γ ∩ part)` for every part of `B`.
pub fn char_meets(bundle: &BaseLocusBundle, gamma: &CharacteristicCurve) -> Result<Vec<(String, i64)>> {
    weighted_parts(bundle)
        .into_iter()
        .map(|(name, ideal, _)| Ok((name, length_of_intersection(&gamma.ideal, &ideal)?)))
        .collect()
}

/// Residual intersection count of three general members: `(I_Γ + ⟨s₃⟩) : f^∞`.
pub fn image_degree(gamma: &CharacteristicCurve) -> Result<i64> {
    let m = &gamma.members;
    let z = gamma.ideal.add_generators(&[m.s[2].clone()])?.saturate_element(&m.f)?;
    let data = hilbert_data_raw(&z.saturate_irrelevant()?)?;
    if data.dim > 0 {
        return Err(Error::PositiveDimensional { dim: data.dim });
    }
    Ok(data.degree)
}

/// Image of `Γ` under the system, in its `P³` span: the curve section of the threefold.
#[derive(Clone, Debug)]
pub struct SectionalCurve {
    pub ideal: HomogeneousIdeal,
    pub data: HilbertData,
}

pub fn sectional_curve(sys: &LinearSystem, gamma: &CharacteristicCurve) -> Result<SectionalCurve> {
    let field = sys.i_b.ring().field;
    // complete (s₁, s₂) to a basis of the system; the four extra forms map Γ onto its span
    let mut rows = vec![gamma.members.coeffs[0].clone(), gamma.members.coeffs[1].clone()];
    let mut extra = Vec::new();
    for j in 0..sys.basis.len() {
        let mut e = vec![0u32; sys.basis.len()];
        e[j] = 1;
        rows.push(e);
        if Matrix::from_rows(field, &rows).rank() == rows.len() {
            extra.push(sys.basis[j].clone());
        } else {
            rows.pop();
        }
    }
    if extra.len() != 4 {
        return Err(Error::HypothesesNotMet("members s₁, s₂ are dependent".into()));
    }
    let target = Ring::new(4, field);
    let curve = implicitize(target, &extra, Some(&gamma.ideal), 8)?;
    let data = hilbert_data_raw(&curve)?;
    Ok(SectionalCurve { ideal: curve, data })
}

/// Jacobian criterion: the singular scheme of a curve with saturated ideal is empty.
pub fn sectional_smoothness(curve: &HomogeneousIdeal) -> Result<bool> {
    let data = hilbert_data_raw(curve)?;
    let codim = curve.nvars() as i64 - 1 - data.dim;
    if data.dim != 1 || codim < 1 || codim as usize > curve.generators().len() {
        return Err(Error::HypothesesNotMet(format!(
            "not a local complete intersection input: dimension {}, {} generators",
            data.dim,
            curve.generators().len()
        )));
    }
    let sing = curve.jacobian_ideal_codim(codim as usize)?.saturate_irrelevant()?;
    sing.is_unit()
}

/// `ℓ·phi` lies in the span of the system for every variable `ℓ`: the
/// members through `V(phi)` are the planes plus `phi`.
pub fn phi_splits_off(sys: &LinearSystem, phi: &Polynomial) -> Result<bool> {
    let span = HomogeneousIdeal::new(sys.i_b.ring(), sys.basis.clone())?;
    for i in 0..span.nvars() {
        if !span.contains(&(&Polynomial::var(span.ring(), i) * phi))? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn dot(field: crate::kernel::Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (x, y)| field.add(acc, field.mul(*x, *y)))
}

fn line_through(ring: Ring, p: &[u32], q: &[u32]) -> Result<HomogeneousIdeal> {
    let m = Matrix::from_rows(ring.field, &[p.to_vec(), q.to_vec()]);
    let gens = m.kernel().iter().map(|v| Polynomial::linear(ring, v)).collect();
    HomogeneousIdeal::new(ring, gens)
}

/// Segre case: lines through the point `P` inside the plane `phi` meet `B` in 2 points.
pub fn segre_line_counts(bundle: &BaseLocusBundle, samples: usize, seed: u64) -> Result<Vec<i64>> {
    let ring = bundle.ring();
    let field = ring.field;
    let p_ideal = bundle.b2.as_ref().ok_or(Error::InvalidArgument("Segre bundle without its point".into()))?;
    let p = Matrix::from_rows(
        field,
        &p_ideal.generators().iter().map(|g| (0..4).map(|i| g.coeff(&Monomial::var(i))).collect()).collect::<Vec<_>>(),
    )
    .kernel()
    .pop()
    .ok_or(Error::InvalidArgument("point ideal".into()))?;
    let h: Vec<u32> = (0..4).map(|i| bundle.phi.coeff(&Monomial::var(i))).collect();
    let plane_basis = Matrix::from_rows(field, &[h]).kernel();
    let mut rng = seeded_rng(seed, "segre-lines");
    let mut out = Vec::new();
    while out.len() < samples {
        let c = random_vector(field, 3, &mut rng);
        let q: Vec<u32> = (0..4)
            .map(|i| (0..3).fold(0, |acc, j| field.add(acc, field.mul(c[j], plane_basis[j][i]))))
            .collect();
        if Matrix::from_rows(field, &[p.clone(), q.clone()]).rank() < 2 {
            continue;
        }
        out.push(length_of_intersection(&bundle.i_b, &line_through(ring, &p, &q)?)?);
    }
    Ok(out)
}

/// Del Pezzo case: through a rational point of the quadric `phi` the tangent
/// plane cuts two lines; returns their secancies to `B` for `samples` points.
pub fn quadric_line_secancies(bundle: &BaseLocusBundle, samples: usize, seed: u64) -> Result<Vec<(i64, i64)>> {
    let ring = bundle.ring();
    let field = ring.field;
    let phi = &bundle.phi;
    let mut rng = seeded_rng(seed, "quadric-lines");
    let roots = |a: &[u32], b: &[u32]| -> Vec<u32> {
        (0..field.modulus())
            .filter(|&mu| {
                let pt: Vec<u32> = a.iter().zip(b).map(|(x, y)| field.add(*x, field.mul(mu, *y))).collect();
                phi.evaluate(&pt) == 0
            })
            .collect()
    };
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < samples {
        tries += 1;
        if tries > 200 * samples {
            return Err(Error::RetriesExhausted {
                what: "rational lines on the quadric".into(),
                attempts: tries,
            });
        }
        // a rational point p of the quadric
        let (a, b) = (random_vector(field, 4, &mut rng), random_vector(field, 4, &mut rng));
        let Some(&mu) = roots(&a, &b).first() else { continue };
        let p: Vec<u32> = a.iter().zip(&b).map(|(x, y)| field.add(*x, field.mul(mu, *y))).collect();
        let grad: Vec<u32> = (0..4).map(|i| phi.derivative(i).evaluate(&p)).collect();
        if grad.iter().all(|&g| g == 0) {
            continue;
        }
        // a line in the tangent plane, missing p, meets the conic pair in q₁, q₂
        let tb = Matrix::from_rows(field, std::slice::from_ref(&grad)).kernel();
        let mix = |c: &[u32]| -> Vec<u32> {
            (0..4).map(|i| (0..3).fold(0, |acc, j| field.add(acc, field.mul(c[j], tb[j][i])))).collect()
        };
        let (u, v) = (mix(&random_vector(field, 3, &mut rng)), mix(&random_vector(field, 3, &mut rng)));
        if Matrix::from_rows(field, &[p.clone(), u.clone(), v.clone()]).rank() < 3 {
            continue;
        }
        let r = roots(&u, &v);
        if r.len() != 2 {
            continue;
        }
        let mut counts = Vec::new();
        for mu in r {
            let q: Vec<u32> = u.iter().zip(&v).map(|(x, y)| field.add(*x, field.mul(mu, *y))).collect();
            if dot(field, &grad, &q) != 0 {
                return Err(Error::InvalidArgument("point off the tangent plane".into()));
            }
            counts.push(length_of_intersection(&bundle.i_b, &line_through(ring, &p, &q)?)?);
        }
        counts.sort();
        out.push((counts[0], counts[1]));
    }
    Ok(out)
}

/// Outcome of the three hypotheses of the birationality criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BirationalityHypotheses {
    pub spanned: bool,
    pub h0_dminus1: i64,
    pub h0_dminus2: i64,
    pub cf_pass: bool,
    pub cf_system: Option<String>,
    pub section_pattern: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub image_degree: i64,
    pub sectional_genus: Option<i64>,
    pub sectional_degree: Option<i64>,
    pub sectional_smooth: Option<bool>,
    pub char_curve: (i64, i64),
    pub meets: Vec<(String, i64)>,
    pub hypotheses: BirationalityHypotheses,
    pub cf_report: Option<CFReport>,
    pub certificates: Vec<Certificate>,
    pub retries: usize,
}

impl MapReport {
    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }
}

/// Plane configuration cut on the bundle's section plane: double points come
/// from the doubled part of `B`.
pub fn section_config(bundle: &BaseLocusBundle, seed: u64) -> Result<(Vec<PlanePoint>, Vec<PlanePoint>)> {
    let (z, _) = restrict_to_plane(&bundle.i_b, &bundle.section_plane)?;
    let pts = rational_points(&z, seed)?;
    let doubles = pts.iter().filter(|p| p.mult == 2).map(|p| p.coords).collect();
    let simples = pts.iter().filter(|p| p.mult == 1).map(|p| p.coords).collect();
    Ok((doubles, simples))
}

fn expected_meets(case: CaseId) -> Vec<i64> {
    match case {
        CaseId::Segre => vec![2, 1],
        CaseId::DelPezzo => vec![8],
        CaseId::Castelnuovo => vec![3, 9],
        CaseId::Bordiga => vec![8, 8],
    }
}

fn expected_section(case: CaseId) -> (usize, usize) {
    match case {
        CaseId::Segre => (0, 1),
        CaseId::DelPezzo => (0, 5),
        CaseId::Castelnuovo => (1, 7),
        CaseId::Bordiga => (3, 7),
    }
}

/// Runs every check of the linear system of a certified bundle. Sub-check
/// failures are recorded as failing certificates; only hard errors abort.
pub fn map_audit(bundle: &BaseLocusBundle, seed: u64, retries: usize, heavy: bool) -> Result<MapReport> {
    let d = bundle.d() as i64;
    let case = bundle.case;
    let mut certs = Vec::new();
    let h0_dminus1 = graded_dim(&bundle.i_b, d - 1)?;
    certs.push(Certificate::new(format!("h0(I_B({}))", d - 1), 6, h0_dminus1));
    let h0_dminus2 = graded_dim(&bundle.i_b, d - 2)?;
    certs.push(Certificate::new(format!("h0(I_B({}))", d - 2), 1, h0_dminus2));
    let sys = assemble_system(bundle)?;
    certs.push(Certificate::new("deg Sigma", d - 1, sys.degree));
    let spanned = spannedness_check(&sys.basis, &bundle.i_b)?.spanned;
    certs.push(Certificate::check("I_B(d-1) spanned", spanned));
    certs.push(Certificate::check("phi·l in Sigma for all linear l", phi_splits_off(&sys, &bundle.phi)?));

    // (iii) on the multiplicity-annotated plane section
    let mut rng = seeded_rng(seed, "audit");
    let (doubles, simples) = section_config(bundle, random_element(bundle.ring().field, &mut rng) as u64)?;
    let pattern = (doubles.len(), simples.len());
    certs.push(Certificate::new("plane section (double, simple)", format!("{:?}", expected_section(case)), format!("{pattern:?}")));
    let (cf_pass, cf_system, cf_report) = if case == CaseId::Segre {
        // conics through one point: no condition set applies
        (pattern == (0, 1), None, None)
    } else {
        let config = PlaneConfig::from_coords(bundle.ring().field, &doubles, &simples)?;
        let rep = check_cf(&config)?;
        (rep.passed, Some(rep.system.tag().to_string()), Some(rep))
    };
    certs.push(Certificate::check("very ample on the blown-up plane (CF)", cf_pass));

    let gamma = characteristic_curve(&sys, seed, retries)?;
    certs.push(Certificate::new("characteristic curve (degree, p_a)", format!("({d}, {})", d - 3), format!("({}, {})", gamma.degree, gamma.p_a)));
    let meets = char_meets(bundle, &gamma)?;
    certs.push(Certificate::new(
        "deg of Gamma meeting the parts of B",
        format!("{:?}", expected_meets(case)),
        format!("{:?}", meets.iter().map(|m| m.1).collect::<Vec<_>>()),
    ));
    let img = image_degree(&gamma)?;
    certs.push(Certificate::new("image degree", d, img));
    let weights: Vec<i64> = weighted_parts(bundle).iter().map(|p| p.2).collect();
    let on_b: i64 = meets.iter().zip(&weights).map(|(m, w)| m.1 * w).sum();
    certs.push(Certificate::new("Gamma·Sigma = deg X + weighted meets", (d - 1) * gamma.degree, img + on_b));

    match case {
        CaseId::Segre => {
            let counts = segre_line_counts(bundle, 5, seed)?;
            certs.push(Certificate::new("lines through P in phi meet B twice", "[2, 2, 2, 2, 2]", format!("{counts:?}")));
        }
        CaseId::DelPezzo => {
            let pairs = quadric_line_secancies(bundle, 5, seed)?;
            certs.push(Certificate::new("rulings of phi are (2, 3)-secant", "[(2, 3), (2, 3), (2, 3), (2, 3), (2, 3)]", format!("{pairs:?}")));
        }
        _ => {}
    }

    let (mut sectional_degree, mut sectional_genus, mut sectional_smooth) = (None, None, None);
    if heavy {
        let sc = sectional_curve(&sys, &gamma)?;
        certs.push(Certificate::new("sectional curve (degree, p_a)", format!("({d}, {})", d - 3), format!("({}, {})", sc.data.degree, sc.data.p_a)));
        let smooth = sectional_smoothness(&sc.ideal)?;
        certs.push(Certificate::check("sectional curve smooth", smooth));
        sectional_degree = Some(sc.data.degree);
        sectional_genus = Some(sc.data.p_a);
        sectional_smooth = Some(smooth);
    }

    Ok(MapReport {
        image_degree: img,
        sectional_genus,
        sectional_degree,
        sectional_smooth,
        char_curve: (gamma.degree, gamma.p_a),
        meets,
        hypotheses: BirationalityHypotheses {
            spanned,
            h0_dminus1,
            h0_dminus2,
            cf_pass,
            cf_system,
            section_pattern: pattern,
        },
        cf_report,
        certificates: certs,
        retries: gamma.attempts,
    })
}
