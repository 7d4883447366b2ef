//! Seeded constructions of the four base loci, each with its certificate list.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::character::{character_of_curve, NumericalCharacter};
use crate::error::{Error, Result};
use crate::implicit::implicitize;
use crate::invariants::{acm_test, graded_dim, h1_structure_sheaf, hilbert_data, hilbert_data_raw, length_of_intersection, HilbertData};
use crate::kernel::io::{read_ideal, write_ideal};
use crate::kernel::random::{random_combination, random_element, random_form, random_vector, seeded_rng, SeededRng};
use crate::kernel::{parse_polynomial, Field, HomogeneousIdeal, Matrix, Monomial, Polynomial, Ring, Saturation};
use crate::points::rational_points;

/// The four threefolds, indexed by their degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    Segre,
    DelPezzo,
    Castelnuovo,
    Bordiga,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::Segre, CaseId::DelPezzo, CaseId::Castelnuovo, CaseId::Bordiga];

    pub fn degree(self) -> u32 {
        match self {
            CaseId::Segre => 3,
            CaseId::DelPezzo => 4,
            CaseId::Castelnuovo => 5,
            CaseId::Bordiga => 6,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            CaseId::Segre => "segre",
            CaseId::DelPezzo => "delpezzo",
            CaseId::Castelnuovo => "castelnuovo",
            CaseId::Bordiga => "bordiga",
        }
    }

    pub fn variety(self) -> &'static str {
        match self {
            CaseId::Segre => "Segre",
            CaseId::DelPezzo => "Del Pezzo",
            CaseId::Castelnuovo => "Castelnuovo",
            CaseId::Bordiga => "Bordiga",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.id() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case '{s}'")))
    }
}

/// One named check: expected and actual values rendered as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Certificate {
    pub fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        Certificate {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }

    pub fn check(name: impl Into<String>, ok: bool) -> Self {
        Certificate::new(name, true, ok)
    }

    pub fn into_error(self) -> Error {
        Error::Certificate {
            name: self.name,
            expected: self.expected,
            actual: self.actual,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub prime: u32,
    pub seed: u64,
    pub retries: usize,
}

/// Degree and genus bookkeeping of a linkage inside a complete intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageCertificate {
    pub ci_degrees: (u32, u32),
    pub deg_input: i64,
    pub pa_input: i64,
    pub deg_linked: i64,
    pub pa_linked: i64,
}

impl LinkageCertificate {
    /// `(deg, p_a)` predicted for the linked curve.
    pub fn predicted(ci: (u32, u32), deg: i64, pa: i64) -> (i64, i64) {
        let (s, t) = (ci.0 as i64, ci.1 as i64);
        let deg_linked = s * t - deg;
        (deg_linked, pa + (s + t - 4) * (deg_linked - deg) / 2)
    }
}

/// Residual of `I` in the complete intersection of the two forms.
pub fn link(ci: (&Polynomial, &Polynomial), i: &HomogeneousIdeal) -> Result<(HomogeneousIdeal, LinkageCertificate)> {
    let (f, g) = ci;
    let ring = i.ring();
    if !i.contains(f)? || !i.contains(g)? {
        return Err(Error::InvalidArgument("linkage forms must vanish on the curve".into()));
    }
    let degs = match (f.homogeneous_degree(), g.homogeneous_degree()) {
        (Some(a), Some(b)) if a > 0 && b > 0 => (a, b),
        _ => return Err(Error::NotCompleteIntersection("forms must be homogeneous of positive degree".into())),
    };
    let cij = HomogeneousIdeal::new(ring, vec![f.clone(), g.clone()])?.with_budget(i.budget());
    let cd = hilbert_data_raw(&cij)?;
    if cd.dim != ring.nvars as i64 - 3 || cd.degree != (degs.0 * degs.1) as i64 {
        return Err(Error::NotCompleteIntersection(format!(
            "dimension {} and degree {} for forms of degrees {:?}",
            cd.dim, cd.degree, degs
        )));
    }
    let input = hilbert_data(i)?;
    let linked = cij.colon(i)?.saturate_irrelevant()?;
    let out = hilbert_data_raw(&linked)?;
    let cert = LinkageCertificate {
        ci_degrees: degs,
        deg_input: input.degree,
        pa_input: input.p_a,
        deg_linked: out.degree,
        pa_linked: out.p_a,
    };
    let predicted = LinkageCertificate::predicted(degs, input.degree, input.p_a);
    if (out.degree, out.p_a) != predicted {
        return Err(Error::Certificate {
            name: format!("linkage ({},{})", degs.0, degs.1),
            expected: format!("{predicted:?}"),
            actual: format!("({}, {})", out.degree, out.p_a),
        });
    }
    Ok((linked, cert))
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub field: Field,
    pub seed: u64,
    pub retries: usize,
    /// Fault injection: the first `degenerate_attempts` attempts build from
    /// deliberately special data (quadrics sharing a plane for Del Pezzo).
    pub degenerate_attempts: usize,
}

impl BuildOptions {
    pub fn new(field: Field, seed: u64) -> Self {
        BuildOptions {
            field,
            seed,
            retries: 5,
            degenerate_attempts: 0,
        }
    }
}

/// A base locus together with its parts and the checks it passed.
#[derive(Clone, Debug)]
pub struct BaseLocusBundle {
    pub case: CaseId,
    pub i_b: HomogeneousIdeal,
    pub b1: Option<HomogeneousIdeal>,
    pub b2: Option<HomogeneousIdeal>,
    pub b1_double: Option<HomogeneousIdeal>,
    /// Curve linked to `B₂` (or to `B`) in the construction: the elliptic
    /// quartic for Del Pezzo, the double line for Castelnuovo.
    pub partner: Option<HomogeneousIdeal>,
    /// The unique form of degree `d − 2` through `B`.
    pub phi: Polynomial,
    /// Coefficients of the plane whose section of `B` is used for the CF check.
    pub section_plane: Vec<u32>,
    pub provenance: Provenance,
    pub certificates: Vec<Certificate>,
    pub linkages: Vec<(String, LinkageCertificate)>,
    pub character: Option<NumericalCharacter>,
}

impl BaseLocusBundle {
    pub fn d(&self) -> u32 {
        self.case.degree()
    }

    pub fn all_pass(&self) -> bool {
        self.certificates.iter().all(|c| c.pass)
    }

    pub fn ring(&self) -> Ring {
        self.i_b.ring()
    }

    fn named_ideals(&self) -> Vec<(&'static str, &HomogeneousIdeal)> {
        let mut v = vec![("B", &self.i_b)];
        if let Some(i) = &self.b1 {
            v.push(("B1", i));
        }
        if let Some(i) = &self.b2 {
            v.push(("B2", i));
        }
        if let Some(i) = &self.b1_double {
            v.push(("2B1", i));
        }
        if let Some(i) = &self.partner {
            v.push(("partner", i));
        }
        v
    }

    /// Writes one ideal file per part plus `bundle.json`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
        for (name, i) in self.named_ideals() {
            std::fs::write(dir.join(format!("{name}.ideal")), write_ideal(i)).map_err(|e| Error::Io(e.to_string()))?;
        }
        let meta = BundleMeta {
            case: self.case,
            d: self.d(),
            prime: self.provenance.prime,
            seed: self.provenance.seed,
            retries: self.provenance.retries,
            phi: self.phi.to_string(),
            section_plane: self.section_plane.clone(),
            character: self.character.clone(),
            certificates: self.certificates.clone(),
            linkages: self.linkages.clone(),
        };
        let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::write(dir.join("bundle.json"), json).map_err(|e| Error::Io(e.to_string()))
    }

    /// Reads a directory written by [`BaseLocusBundle::write_dir`].
    pub fn read_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| -> Result<Option<HomogeneousIdeal>> {
            let path = dir.join(format!("{name}.ideal"));
            if !path.exists() {
                return Ok(None);
            }
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(e.to_string()))?;
            let i = read_ideal(&text)?;
            i.set_saturation_flag(Saturation::Yes);
            Ok(Some(i))
        };
        let text = std::fs::read_to_string(dir.join("bundle.json")).map_err(|e| Error::Io(e.to_string()))?;
        let meta: BundleMeta = serde_json::from_str(&text).map_err(|e| Error::Io(e.to_string()))?;
        let i_b = read("B")?.ok_or_else(|| Error::Io("missing B.ideal".into()))?;
        let phi = parse_polynomial(i_b.ring(), &meta.phi)?;
        Ok(BaseLocusBundle {
            case: meta.case,
            b1: read("B1")?,
            b2: read("B2")?,
            b1_double: read("2B1")?,
            partner: read("partner")?,
            i_b,
            phi,
            section_plane: meta.section_plane,
            provenance: Provenance {
                prime: meta.prime,
                seed: meta.seed,
                retries: meta.retries,
            },
            certificates: meta.certificates,
            linkages: meta.linkages,
            character: meta.character,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct BundleMeta {
    case: CaseId,
    d: u32,
    prime: u32,
    seed: u64,
    retries: usize,
    phi: String,
    section_plane: Vec<u32>,
    character: Option<NumericalCharacter>,
    certificates: Vec<Certificate>,
    linkages: Vec<(String, LinkageCertificate)>,
}

pub fn build(case: CaseId, opts: &BuildOptions) -> Result<BaseLocusBundle> {
    match case {
        CaseId::Segre => build_segre(opts),
        CaseId::DelPezzo => build_delpezzo(opts),
        CaseId::Castelnuovo => build_castelnuovo(opts),
        CaseId::Bordiga => build_bordiga(opts),
    }
}

fn attempt_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Runs `once` on successive derived seeds until every certificate passes.
/// When attempts run out, the last bundle is returned with its failing
/// certificates so the caller can report them; hard errors propagate.
fn with_retries(
    case: CaseId,
    opts: &BuildOptions,
    once: impl Fn(&mut SeededRng, usize) -> Result<BaseLocusBundle>,
) -> Result<BaseLocusBundle> {
    let mut last_bundle = None;
    let mut last_err = None;
    for attempt in 0..=opts.retries {
        let mut rng = seeded_rng(attempt_seed(opts.seed, attempt), case.id());
        match once(&mut rng, attempt) {
            Ok(mut b) => {
                b.provenance = Provenance {
                    prime: opts.field.modulus(),
                    seed: opts.seed,
                    retries: attempt,
                };
                if b.all_pass() {
                    return Ok(b);
                }
                last_bundle = Some(b);
            }
            Err(e @ (Error::ResourceLimit { .. } | Error::BadPrime(_) | Error::Io(_))) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    match (last_bundle, last_err) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::RetriesExhausted {
            what: format!("{case} construction"),
            attempts: opts.retries + 1,
        }),
    }
}

fn placeholder_provenance() -> Provenance {
    Provenance { prime: 0, seed: 0, retries: 0 }
}

fn random_point(field: Field, n: usize, rng: &mut SeededRng) -> Vec<u32> {
    loop {
        let v = random_vector(field, n, rng);
        if v.iter().any(|&c| c != 0) {
            return v;
        }
    }
}

/// Ideal of a point of `P^{n-1}`.
pub fn point_ideal_in(ring: Ring, p: &[u32]) -> Result<HomogeneousIdeal> {
    let m = Matrix::from_rows(ring.field, &[p.to_vec()]);
    let gens = m.kernel().iter().map(|v| Polynomial::linear(ring, v)).collect();
    HomogeneousIdeal::new(ring, gens)
}

/// Saturated ideal of `V(I) ∩ {h = 0}` in plane coordinates, together with
/// the `4 × 3` matrix whose columns span the plane.
pub fn restrict_to_plane(i: &HomogeneousIdeal, h: &[u32]) -> Result<(HomogeneousIdeal, Matrix)> {
    let ring = i.ring();
    if ring.nvars != 4 || h.len() != 4 {
        return Err(Error::InvalidArgument("plane restriction expects P³".into()));
    }
    let basis = Matrix::from_rows(ring.field, &[h.to_vec()]).kernel();
    let plane = Ring::new(3, ring.field);
    let mut cols = Matrix::zeros(ring.field, 4, 3);
    for (j, v) in basis.iter().enumerate() {
        for (r, &c) in v.iter().enumerate() {
            cols.set(r, j, c);
        }
    }
    let images: Vec<Polynomial> = (0..4).map(|r| Polynomial::linear(plane, cols.row(r))).collect();
    let sec = i.substitute(&images)?.saturate_irrelevant()?;
    Ok((sec, cols))
}

fn eval_rows(polys: &[Polynomial], pts: &[Vec<u32>]) -> Matrix {
    let field = polys[0].field();
    let rows: Vec<Vec<u32>> = pts.iter().map(|p| polys.iter().map(|f| f.evaluate(p)).collect()).collect();
    Matrix::from_rows(field, &rows)
}

/// Members of `span(basis)` vanishing at all `pts`.
fn subsystem_through(basis: &[Polynomial], pts: &[Vec<u32>]) -> Vec<Polynomial> {
    let ring = basis[0].ring();
    eval_rows(basis, pts)
        .kernel()
        .into_iter()
        .map(|v| {
            basis
                .iter()
                .zip(v)
                .fold(Polynomial::zero(ring), |acc, (b, c)| acc.add_scaled(c, &Monomial::ONE, b))
        })
        .collect()
}

fn hilbert_cert(name: &str, data: &HilbertData, deg: i64, pa: i64) -> Certificate {
    Certificate::new(format!("{name} (degree, p_a)"), format!("({deg}, {pa})"), format!("({}, {})", data.degree, data.p_a))
}

/// `graded_dim(I_B, d−2) = 1`, spanned by `phi`, and `B ⊂ V(phi)`.
fn phi_certs(i_b: &HomogeneousIdeal, d: u32) -> Result<(Polynomial, Vec<Certificate>)> {
    let part = i_b.degree_part(d - 2)?;
    let mut certs = vec![Certificate::new(format!("h0(I_B({}))", d - 2), 1, part.len())];
    let phi = part.first().cloned().unwrap_or_else(|| Polynomial::zero(i_b.ring())).monic();
    certs.push(Certificate::check("phi vanishes on B", !phi.is_zero() && i_b.contains(&phi)?));
    Ok((phi, certs))
}

/// Arithmetic genus and singular length of a general plane section of `V(phi)`.
pub fn plane_section_of_phi(phi: &Polynomial, seed: u64) -> Result<(i64, i64)> {
    let ring = phi.ring();
    let mut rng = seeded_rng(seed, "phi-section");
    let h = random_point(ring.field, 4, &mut rng);
    let (sec, _) = restrict_to_plane(&HomogeneousIdeal::new(ring, vec![phi.clone()])?, &h)?;
    let data = hilbert_data_raw(&sec)?;
    let sing = sec.jacobian_ideal()?.saturate_irrelevant()?;
    let sd = hilbert_data_raw(&sing)?;
    Ok((data.p_a, if sd.dim < 0 { 0 } else { sd.degree }))
}

fn phi_section_certs(phi: &Polynomial, d: u32, seed: u64) -> Result<Vec<Certificate>> {
    let g = crate::kernel::binomial(d as i64 - 3, 2);
    let (pa, sing) = plane_section_of_phi(phi, seed)?;
    Ok(vec![
        Certificate::new("p_a of a plane section of phi", g, pa),
        Certificate::new("singular length of a plane section of phi", g, sing),
    ])
}

/// `B₁ ⊆ Sing(V(phi))`: every generator of the Jacobian ideal lies in `I_{B₁}`.
fn singular_along(phi: &Polynomial, b1: &HomogeneousIdeal) -> Result<bool> {
    let jac = HomogeneousIdeal::new(phi.ring(), vec![phi.clone()])?.jacobian_ideal()?;
    b1.contains_ideal(&jac)
}

pub fn build_segre(opts: &BuildOptions) -> Result<BaseLocusBundle> {
    let ring = Ring::new(4, opts.field);
    with_retries(CaseId::Segre, opts, |rng, _| {
        let field = opts.field;
        let l1 = Polynomial::linear(ring, &random_vector(field, 4, rng));
        let l2 = Polynomial::linear(ring, &random_vector(field, 4, rng));
        let line = HomogeneousIdeal::new(ring, vec![l1.clone(), l2.clone()])?;
        let p = random_point(field, 4, rng);
        let (a, b) = (l1.evaluate(&p), l2.evaluate(&p));
        let mut certs = vec![
            Certificate::new("line (degree, p_a)", "(1, 0)", {
                let d = hilbert_data_raw(&line)?;
                format!("({}, {})", d.degree, d.p_a)
            }),
            Certificate::check("point off the line", a != 0 || b != 0),
        ];
        let i_b = line.intersect(&point_ideal_in(ring, &p)?)?.saturate_irrelevant()?;
        let data = hilbert_data_raw(&i_b)?;
        certs.push(Certificate::new("Hilbert polynomial of B", "[2, 1]", format!("{:?}", data.hp_coeffs).replace('"', "")));
        certs.push(Certificate::new("h0(I_B(2))", 6, graded_dim(&i_b, 2)?));
        let (phi, pc) = phi_certs(&i_b, 3)?;
        certs.extend(pc);
        let plane = (&l1.scale(b) - &l2.scale(a)).monic();
        certs.push(Certificate::check("phi is the plane spanned by B and P", plane == phi));
        let section_plane = loop {
            let h = random_point(field, 4, rng);
            if h.iter().zip(&p).fold(0, |acc, (x, y)| field.add(acc, field.mul(*x, *y))) != 0 {
                break h;
            }
        };
        Ok(BaseLocusBundle {
            case: CaseId::Segre,
            i_b,
            b1: Some(line),
            b2: Some(point_ideal_in(ring, &p)?),
            b1_double: None,
            partner: None,
            phi,
            section_plane,
            provenance: placeholder_provenance(),
            certificates: certs,
            linkages: vec![],
            character: None,
        })
    })
}

/// `k` random points of the plane `x_3 = 0`, in P³ coordinates.
fn points_in_h(field: Field, k: usize, rng: &mut SeededRng) -> Vec<Vec<u32>> {
    (0..k)
        .map(|_| {
            let mut v = random_point(field, 3, rng);
            v.push(0);
            v
        })
        .collect()
}

const H_COORD: [u32; 4] = [0, 0, 0, 1];

pub fn build_delpezzo(opts: &BuildOptions) -> Result<BaseLocusBundle> {
    let ring = Ring::new(4, opts.field);
    let field = opts.field;
    with_retries(CaseId::DelPezzo, opts, |rng, attempt| {
        // D ∩ H is four rational points: lift a pencil of conics through them
        let base = points_in_h(field, 4, rng);
        let conics_basis: Vec<Polynomial> = crate::kernel::monomials_of_degree(3, 2)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, 1, m))
            .collect();
        let pencil = subsystem_through(&conics_basis, &base);
        if pencil.len() != 2 {
            return Err(Error::HypothesesNotMet("four points on a line".into()));
        }
        let x3 = Polynomial::var(ring, 3);
        let mut quadrics: Vec<Polynomial> = pencil
            .iter()
            .map(|q| q + &(&x3 * &Polynomial::linear(ring, &random_vector(field, 4, rng))))
            .collect();
        if attempt < opts.degenerate_attempts {
            let plane = Polynomial::linear(ring, &random_vector(field, 4, rng));
            quadrics = (0..2).map(|_| &plane * &Polynomial::linear(ring, &random_vector(field, 4, rng))).collect();
        }
        let d_ideal = HomogeneousIdeal::new(ring, quadrics.clone())?.saturate_irrelevant()?;
        let dd = hilbert_data_raw(&d_ideal)?;
        let mut certs = vec![
            hilbert_cert("D", &dd, 4, 1),
            Certificate::new("h0(I_D(2))", 2, graded_dim(&d_ideal, 2)?),
        ];
        let cubics = d_ideal.degree_part(3)?;
        let extra = points_in_h(field, 4, rng);
        let through = subsystem_through(&cubics, &extra);
        let g1 = random_combination(&through, rng).ok_or(Error::HypothesesNotMet("no cubics".into()))?;
        let g2 = random_combination(&through, rng).ok_or(Error::HypothesesNotMet("no cubics".into()))?;
        let (i_b, lc) = link((&g1, &g2), &d_ideal)?;
        let bd = hilbert_data_raw(&i_b)?;
        certs.push(hilbert_cert("B", &bd, 5, 2));
        certs.push(Certificate::new("length(B ∩ D)", 8, length_of_intersection(&i_b, &d_ideal)?));
        certs.push(Certificate::new("h0(I_B(3))", 6, graded_dim(&i_b, 3)?));
        let (phi, pc) = phi_certs(&i_b, 4)?;
        certs.extend(pc);
        Ok(BaseLocusBundle {
            case: CaseId::DelPezzo,
            i_b,
            b1: None,
            b2: None,
            b1_double: None,
            partner: Some(d_ideal),
            phi,
            section_plane: H_COORD.to_vec(),
            provenance: placeholder_provenance(),
            certificates: certs,
            linkages: vec![("D -> B in CI(3,3)".into(), lc)],
            character: None,
        })
    })
}

/// Double structure on the line `x_0 = x_1 = 0` cut out by
/// `(x_0, x_1)² + (x_0 β − x_1 α)` with `α, β` binary quadrics in `x_2, x_3`.
pub fn double_line(ring: Ring, rng: &mut SeededRng) -> Result<HomogeneousIdeal> {
    let binary = Ring::new(2, ring.field);
    let lift = |f: &Polynomial| f.map_vars(ring, &[2, 3]);
    let alpha = lift(&random_form(binary, 2, rng));
    let beta = lift(&random_form(binary, 2, rng));
    let (x0, x1) = (Polynomial::var(ring, 0), Polynomial::var(ring, 1));
    let gens = vec![&x0 * &x0, &x0 * &x1, &x1 * &x1, &(&x0 * &beta) - &(&x1 * &alpha)];
    HomogeneousIdeal::new(ring, gens)?.saturate_irrelevant()
}

pub fn build_castelnuovo(opts: &BuildOptions) -> Result<BaseLocusBundle> {
    let ring = Ring::new(4, opts.field);
    let field = opts.field;
    with_retries(CaseId::Castelnuovo, opts, |rng, _| {
        let b1 = HomogeneousIdeal::parse(ring, &["x0", "x1"])?;
        b1.set_saturation_flag(Saturation::Yes);
        let d_ideal = double_line(ring, rng)?;
        let dd = hilbert_data_raw(&d_ideal)?;
        let mut certs = vec![hilbert_cert("double structure D on B1", &dd, 2, -2)];
        // six rational points of H force a rational seventh point of B₂ ∩ H
        let cubics = d_ideal.degree_part(3)?;
        let through = subsystem_through(&cubics, &points_in_h(field, 6, rng));
        let g1 = random_combination(&through, rng).ok_or(Error::HypothesesNotMet("no cubics".into()))?;
        let g2 = random_combination(&through, rng).ok_or(Error::HypothesesNotMet("no cubics".into()))?;
        certs.push(Certificate::check("G1, G2 tangent along B1 (contain D)", d_ideal.contains(&g1)? && d_ideal.contains(&g2)?));
        let (b2, lc) = link((&g1, &g2), &d_ideal)?;
        let b2d = hilbert_data_raw(&b2)?;
        certs.push(hilbert_cert("B2", &b2d, 7, 3));
        certs.push(Certificate::new("length(B1 ∩ B2)", 5, length_of_intersection(&b1, &b2)?));
        let (back, lc_back) = link((&g1, &g2), &b2)?;
        certs.push(Certificate::check("B2 links back to D", back.same_ideal(&d_ideal)?));
        let b1_double = b1.power(2)?;
        b1_double.set_saturation_flag(Saturation::Yes);
        let i_b = b1_double.intersect(&b2)?;
        i_b.set_saturation_flag(Saturation::Yes);
        let bd = hilbert_data_raw(&i_b)?;
        let meet = length_of_intersection(&b1_double, &b2)?;
        certs.push(Certificate::new(
            "p_a(B) = p_a(2B1) + p_a(B2) + length(2B1 ∩ B2) − 1",
            hilbert_data_raw(&b1_double)?.p_a + b2d.p_a + meet - 1,
            bd.p_a,
        ));
        certs.push(Certificate::new("deg B", 10, bd.degree));
        certs.push(Certificate::new("h0(I_B(4))", 6, graded_dim(&i_b, 4)?));
        let (phi, pc) = phi_certs(&i_b, 5)?;
        certs.extend(pc);
        certs.push(Certificate::check("B1 in Sing(phi)", singular_along(&phi, &b1)?));
        certs.extend(phi_section_certs(&phi, 5, random_element(field, rng) as u64)?);
        Ok(BaseLocusBundle {
            case: CaseId::Castelnuovo,
            i_b,
            b1: Some(b1),
            b2: Some(b2),
            b1_double: Some(b1_double),
            partner: Some(d_ideal),
            phi,
            section_plane: H_COORD.to_vec(),
            provenance: placeholder_provenance(),
            certificates: certs,
            linkages: vec![("D -> B2 in CI(3,3)".into(), lc), ("B2 -> D in CI(3,3)".into(), lc_back)],
            character: None,
        })
    })
}

/// Parametrization `(us, ut, vs³, vs²t, vst², vt³)` of the quartic scroll,
/// as polynomials in `(s, t, u, v)`.
pub fn scroll_parametrization(field: Field) -> Vec<Polynomial> {
    let r = Ring::new(4, field);
    ["x0*x2", "x1*x2", "x0^3*x3", "x0^2*x1*x3", "x0*x1^2*x3", "x1^3*x3"]
        .iter()
        .map(|s| parse_polynomial(r, s).expect("static"))
        .collect()
}

fn compose_linear(rows: &[Vec<u32>], images: &[Polynomial]) -> Vec<Polynomial> {
    let ring = images[0].ring();
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(images)
                .fold(Polynomial::zero(ring), |acc, (&c, f)| acc.add_scaled(c, &Monomial::ONE, f))
        })
        .collect()
}

fn binary_form_from_roots(ring: Ring, roots: &[u32]) -> Polynomial {
    let field = ring.field;
    roots.iter().fold(Polynomial::one(ring), |acc, &r| {
        &acc * &Polynomial::linear(ring, &[1, field.neg(r)])
    })
}

pub fn build_bordiga(opts: &BuildOptions) -> Result<BaseLocusBundle> {
    let field = opts.field;
    let p3 = Ring::new(4, field);
    let binary = Ring::new(2, field);
    let phi_param = scroll_parametrization(field);
    with_retries(CaseId::Bordiga, opts, |rng, _| {
        // H = {M₃ = 0} pulls back to a hyperplane through the centre. With
        // M₃∘φ = u(s − ρt) + v·C₃ and C₃(ρ) ≠ 0 (so no ruling lies in H), the
        // curve u A₄ + v B₆ = 0 meets it in the seven prescribed roots of λP₇
        let mut roots: Vec<u32> = Vec::new();
        while roots.len() < 8 {
            let r = random_element(field, rng);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let rho = roots.pop().expect("eight values");
        let at_rho = |f: &Polynomial| f.evaluate(&[rho, 1]);
        let a4 = random_form(binary, 4, rng);
        let c3 = random_form(binary, 3, rng);
        let p7 = binary_form_from_roots(binary, &roots);
        if at_rho(&a4) == 0 || at_rho(&c3) == 0 {
            return Err(Error::HypothesesNotMet("A4 or C3 vanishes at the ruling".into()));
        }
        let lambda = field.neg(field.mul(field.mul(at_rho(&a4), at_rho(&c3)), field.inv(at_rho(&p7))));
        let b6 = (&p7.scale(lambda) + &(&a4 * &c3))
            .div_exact(&binary_form_from_roots(binary, &[rho]))
            .ok_or_else(|| Error::HypothesesNotMet("B6 division".into()))?;
        let mut m3 = vec![1, field.neg(rho)];
        for k in 0..4 {
            m3.push(c3.coeff(&Monomial::new(&[3 - k, k])));
        }
        let mut certs = Vec::new();
        // retry the other three projection forms until the nodes of Φ ∩ H are rational
        let mut found = None;
        for _ in 0..24 {
            let mut rows: Vec<Vec<u32>> = (0..3).map(|_| random_vector(field, 6, rng)).collect();
            rows.push(m3.clone());
            if Matrix::from_rows(field, &rows).rank() < 4 {
                continue;
            }
            let images = compose_linear(&rows, &phi_param);
            let surf = implicitize(p3, &images, None, 5)?;
            if surf.generators().len() != 1 || surf.generators()[0].homogeneous_degree() != Some(4) {
                continue;
            }
            let phi = surf.generators()[0].monic();
            // the Jacobian scheme has embedded points at the pinch points
            let sing = HomogeneousIdeal::new(p3, vec![phi.clone()])?.jacobian_ideal()?.saturate_irrelevant()?;
            let b1 = sing.top_dimensional(2, random_element(field, rng) as u64)?.saturate_irrelevant()?;
            let (nodes, _) = restrict_to_plane(&b1, &H_COORD)?;
            if let Ok(pts) = rational_points(&nodes, random_element(field, rng) as u64) {
                if pts.len() == 3 {
                    found = Some((rows, phi, b1));
                    break;
                }
            }
        }
        let (rows, phi, b1) = found.ok_or(Error::RetriesExhausted {
            what: "projection with rational nodes".into(),
            attempts: 24,
        })?;
        b1.set_saturation_flag(Saturation::Yes);
        let b1d = hilbert_data_raw(&b1)?;
        certs.push(hilbert_cert("B1 = Sing(phi)", &b1d, 3, 0));
        certs.push(Certificate::new("Hilbert polynomial of B1", "[1, 3]", format!("{:?}", b1d.hp_coeffs).replace('"', "")));
        let b1_smooth = b1.jacobian_ideal_codim(2)?.saturate_irrelevant()?.is_unit()?;
        certs.push(Certificate::check("B1 smooth", b1_smooth));
        certs.push(Certificate::check("B1 in Sing(phi)", singular_along(&phi, &b1)?));
        let b1_double = b1.power(2)?.saturate_irrelevant()?;
        let b1dd = hilbert_data_raw(&b1_double)?;

        let v = a4.scale(field.neg(1));
        let binary_images: Vec<Polynomial> = phi_param
            .iter()
            .map(|f| f.substitute(&[
                Polynomial::var(binary, 0),
                Polynomial::var(binary, 1),
                b6.clone(),
                v.clone(),
            ]))
            .collect();
        let b2 = implicitize(p3, &compose_linear(&rows, &binary_images), None, 8)?;
        let b2d = hilbert_data_raw(&b2)?;
        certs.push(hilbert_cert("B2", &b2d, 7, 0));
        certs.push(Certificate::new("length(B1 ∩ B2)", 12, length_of_intersection(&b1, &b2)?));
        let i_b = b1_double.intersect(&b2)?.saturate_irrelevant()?;
        let bd = hilbert_data_raw(&i_b)?;
        let meet = length_of_intersection(&b1_double, &b2)?;
        certs.push(Certificate::new(
            "p_a(B) = p_a(2B1) + p_a(B2) + length(2B1 ∩ B2) − 1",
            b1dd.p_a + b2d.p_a + meet - 1,
            bd.p_a,
        ));
        certs.push(hilbert_cert("B", &bd, 16, 31));
        let (phi_b, pc) = phi_certs(&i_b, 6)?;
        certs.extend(pc);
        certs.push(Certificate::check("phi equals the projected scroll", phi_b == phi));
        certs.push(Certificate::new("h0(I_B(5))", 6, graded_dim(&i_b, 5)?));
        let cseed = random_element(field, rng) as u64;
        let chi = character_of_curve(&i_b, cseed)?;
        certs.push(Certificate::new("character of B", "(6,6,5,5)", &chi));
        let acm = acm_test(&i_b, cseed)?;
        certs.push(Certificate::check("B is ACM", acm));
        if acm {
            certs.push(Certificate::new("h1(O_B(4))", 0, h1_structure_sheaf(&i_b, 4, cseed)?));
        }
        certs.extend(phi_section_certs(&phi, 6, cseed)?);
        let mut linkages = Vec::new();
        let mut partner = None;
        if let Some(f5) = random_combination(&i_b.degree_part(5)?, rng) {
            let (linked, lc) = link((&phi, &f5), &i_b)?;
            let ld = hilbert_data_raw(&linked)?;
            certs.push(hilbert_cert("curve linked in CI(4,5)", &ld, 4, 1));
            linkages.push(("B -> linked curve in CI(4,5)".to_string(), lc));
            partner = Some(linked);
        }
        Ok(BaseLocusBundle {
            case: CaseId::Bordiga,
            i_b,
            b1: Some(b1),
            b2: Some(b2),
            b1_double: Some(b1_double),
            partner,
            phi,
            section_plane: H_COORD.to_vec(),
            provenance: placeholder_provenance(),
            certificates: certs,
            linkages,
            character: Some(chi),
        })
    })
}
