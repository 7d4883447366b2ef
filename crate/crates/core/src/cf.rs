//! Very-ampleness conditions for blown-up plane linear systems, evaluated as
//! rank computations on interpolation matrices, and the line/conic census of
//! the associated surfaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ideal::subsets;
use crate::kernel::random::{random_vector, seeded_rng, SeededRng};
use crate::kernel::{binomial, monomials_of_degree, Field, Matrix};

/// Point of P² with projective coordinates in `F_p`.
pub type PlanePoint = [u32; 3];

/// The five plane systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemId {
    /// `|3H - x_1 - ... - x_5|`
    CF1,
    /// `|4H - 2x_1 - y_2 - ... - y_8|`
    CF2,
    /// `|4H - y_1 - ... - y_10|`
    CF3,
    /// `|5H - 2(x_1 + x_2 + x_3) - y_4 - ... - y_10|`
    CF3Prime,
    /// `|6H - 2(x_1 + ... + x_6) - y_7 - ... - y_11|`
    CF4,
}

impl SystemId {
    /// `(number of double points, number of simple points)`.
    pub fn pattern(self) -> (usize, usize) {
        match self {
            SystemId::CF1 => (0, 5),
            SystemId::CF2 => (1, 7),
            SystemId::CF3 => (0, 10),
            SystemId::CF3Prime => (3, 7),
            SystemId::CF4 => (6, 5),
        }
    }

    pub fn degree_of_w(self) -> usize {
        let (d, s) = self.pattern();
        d + s
    }

    pub fn from_pattern(doubles: usize, simples: usize) -> Option<Self> {
        [
            SystemId::CF1,
            SystemId::CF2,
            SystemId::CF3,
            SystemId::CF3Prime,
            SystemId::CF4,
        ]
        .into_iter()
        .find(|s| s.pattern() == (doubles, simples))
    }

    pub fn tag(self) -> &'static str {
        match self {
            SystemId::CF1 => "CF1",
            SystemId::CF2 => "CF2",
            SystemId::CF3 => "CF3",
            SystemId::CF3Prime => "CF3'",
            SystemId::CF4 => "CF4",
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPoint {
    pub label: String,
    pub mult: u8,
    pub coords: PlanePoint,
}

/// Labeled plane points with multiplicities; the system is determined by the
/// multiplicity pattern. Double points play the role of the `x_i`, simple
/// points that of the `y_j` (for CF1 and CF3 all points are simple).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneConfig {
    pub field: Field,
    pub system: SystemId,
    pub points: Vec<LabeledPoint>,
}

impl PlaneConfig {
    pub fn new(field: Field, points: Vec<LabeledPoint>) -> Result<Self> {
        let doubles = points.iter().filter(|p| p.mult == 2).count();
        let simples = points.iter().filter(|p| p.mult == 1).count();
        if doubles + simples != points.len() {
            return Err(Error::InvalidArgument("multiplicities must be 1 or 2".into()));
        }
        let system = SystemId::from_pattern(doubles, simples).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "no system has {doubles} double and {simples} simple points"
            ))
        })?;
        let p = field.modulus();
        let mut points = points;
        for pt in points.iter_mut() {
            pt.coords = pt.coords.map(|c| c % p);
            if pt.coords == [0, 0, 0] {
                return Err(Error::InvalidArgument(format!("point {} is zero", pt.label)));
            }
        }
        // doubles first, stable within each group
        points.sort_by_key(|pt| std::cmp::Reverse(pt.mult));
        Ok(PlaneConfig {
            field,
            system,
            points,
        })
    }

    /// Build from bare coordinates; labels follow the `x_i`/`y_j` convention.
    pub fn from_coords(field: Field, doubles: &[PlanePoint], simples: &[PlanePoint]) -> Result<Self> {
        let mut pts = Vec::new();
        for (i, c) in doubles.iter().enumerate() {
            pts.push(LabeledPoint {
                label: format!("x{}", i + 1),
                mult: 2,
                coords: *c,
            });
        }
        let simple_prefix = if doubles.is_empty() && simples.len() == 5 { "x" } else { "y" };
        for (j, c) in simples.iter().enumerate() {
            pts.push(LabeledPoint {
                label: format!("{simple_prefix}{}", doubles.len() + j + 1),
                mult: 1,
                coords: *c,
            });
        }
        Self::new(field, pts)
    }

    /// Seeded random configuration for a system.
    pub fn random(field: Field, system: SystemId, seed: u64) -> Self {
        let mut rng = seeded_rng(seed, "plane-config");
        let (d, s) = system.pattern();
        let doubles: Vec<PlanePoint> = (0..d).map(|_| random_point(field, &mut rng)).collect();
        let simples: Vec<PlanePoint> = (0..s).map(|_| random_point(field, &mut rng)).collect();
        Self::from_coords(field, &doubles, &simples).expect("pattern matches system")
    }

    pub fn doubles(&self) -> Vec<PlanePoint> {
        self.points.iter().filter(|p| p.mult == 2).map(|p| p.coords).collect()
    }

    pub fn simples(&self) -> Vec<PlanePoint> {
        self.points.iter().filter(|p| p.mult == 1).map(|p| p.coords).collect()
    }

    /// Apply the projectivity `p -> M p`.
    pub fn transform(&self, m: &Matrix) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| {
                let v = m.mul_vec(&p.coords);
                LabeledPoint {
                    coords: [v[0], v[1], v[2]],
                    ..p.clone()
                }
            })
            .collect();
        PlaneConfig {
            points,
            ..self.clone()
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# prime {}\n", self.field.modulus());
        for p in &self.points {
            out.push_str(&format!(
                "{} {} {} {} {}\n",
                p.label, p.mult, p.coords[0], p.coords[1], p.coords[2]
            ));
        }
        out
    }

    /// Parse the text format: one point per line, `label mult p0 p1 p2`.
    /// `#` starts a comment; a comment of the form `# prime <p>` selects the field.
    /// A trailing `near=<label>` declares an infinitely near point, which is
    /// rejected.
    pub fn parse(text: &str, default_field: Field) -> Result<Self> {
        let mut field = default_field;
        let mut pts = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if let Some(c) = l.strip_prefix('#') {
                let mut it = c.split_whitespace();
                if it.next() == Some("prime") {
                    let v = it.next().and_then(|v| v.parse::<u32>().ok()).ok_or(Error::Parse {
                        line,
                        msg: "bad prime comment".into(),
                    })?;
                    field = Field::new(v).map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?;
                }
                continue;
            }
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.iter().any(|t| t.starts_with("near=")) {
                return Err(Error::UnsupportedConfig(format!(
                    "line {line}: infinitely near points are not supported"
                )));
            }
            if toks.len() != 5 {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected 'label mult p0 p1 p2', got {} fields", toks.len()),
                });
            }
            let mult: u8 = toks[1].parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad multiplicity '{}'", toks[1]),
            })?;
            if mult != 1 && mult != 2 {
                return Err(Error::Parse {
                    line,
                    msg: format!("multiplicity must be 1 or 2, got {mult}"),
                });
            }
            let mut coords = [0u32; 3];
            for (c, t) in coords.iter_mut().zip(&toks[2..]) {
                let v: i64 = t.parse().map_err(|_| Error::Parse {
                    line,
                    msg: format!("bad coordinate '{t}'"),
                })?;
                *c = field.from_i64(v);
            }
            pts.push(LabeledPoint {
                label: toks[0].to_string(),
                mult,
                coords,
            });
        }
        Self::new(field, pts)
    }
}

fn random_point(field: Field, rng: &mut SeededRng) -> PlanePoint {
    loop {
        let v = random_vector(field, 3, rng);
        if v.iter().any(|&c| c != 0) {
            return [v[0], v[1], v[2]];
        }
    }
}

/// Interpolation matrix: one row per simple point, value plus two partials
/// (in an affine chart) per double point.
pub fn interpolation_matrix(field: Field, degree: u32, constraints: &[(PlanePoint, u8)]) -> Matrix {
    let monos = monomials_of_degree(3, degree);
    let mut m = Matrix::zeros(field, 0, monos.len());
    let eval = |p: &PlanePoint, e: [u32; 3]| -> u32 {
        let mut v = 1u32;
        for i in 0..3 {
            v = field.mul(v, field.pow(p[i], e[i] as u64));
        }
        v
    };
    for (p, mult) in constraints {
        let row: Vec<u32> = monos
            .iter()
            .map(|mo| eval(p, [mo.exp(0), mo.exp(1), mo.exp(2)]))
            .collect();
        m.push_row(&row);
        if *mult >= 2 {
            let chart = (0..3).find(|&i| p[i] != 0).expect("nonzero point");
            for var in (0..3).filter(|&i| i != chart) {
                let row: Vec<u32> = monos
                    .iter()
                    .map(|mo| {
                        let mut e = [mo.exp(0), mo.exp(1), mo.exp(2)];
                        if e[var] == 0 {
                            return 0;
                        }
                        let c = e[var] % field.modulus();
                        e[var] -= 1;
                        field.mul(c, eval(p, e))
                    })
                    .collect();
                m.push_row(&row);
            }
        }
    }
    m
}

/// `h⁰` of plane curves of degree `degree` through the constraints.
pub fn interp_dim(field: Field, degree: u32, constraints: &[(PlanePoint, u8)]) -> i64 {
    let total = binomial(degree as i64 + 2, 2);
    if constraints.is_empty() {
        return total;
    }
    total - interpolation_matrix(field, degree, constraints).rank() as i64
}

/// A nonzero curve of the given degree through the constraints, if any.
pub fn interp_section(field: Field, degree: u32, constraints: &[(PlanePoint, u8)]) -> Option<Vec<u32>> {
    if constraints.is_empty() {
        let mut v = vec![0u32; binomial(degree as i64 + 2, 2) as usize];
        v[0] = 1;
        return Some(v);
    }
    interpolation_matrix(field, degree, constraints).kernel().into_iter().next()
}

fn proportional(a: &PlanePoint, b: &PlanePoint, f: Field) -> bool {
    // all 2x2 minors vanish
    (0..3).all(|i| {
        (i + 1..3).all(|j| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])) == 0)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Condition tag such as `CF3'(1)`.
    pub condition: String,
    /// Labels of the witness subset.
    pub witness: Vec<String>,
    /// Coefficients of a nonzero witness curve in descending grevlex monomial order.
    pub section: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CFReport {
    pub system: SystemId,
    pub passed: bool,
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

/// A vanishing condition `h⁰(D·H − Σ_Δ x − Σ_Λ y) = 0` over a family of
/// subsets; `x`-indices and `y`-indices refer to doubles and simples.
struct Family {
    condition: u8,
    degree: u32,
    subsets: Vec<(Vec<usize>, Vec<usize>)>,
}

fn weighted_subsets(nx: usize, ny: usize, min_weight: usize, nonempty_y: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for a in 0..=nx {
        for b in 0..=ny {
            if 2 * a + b < min_weight || (nonempty_y && b == 0) {
                continue;
            }
            for dx in subsets(nx, a) {
                for ly in subsets(ny, b) {
                    out.push((dx.clone(), ly));
                }
            }
        }
    }
    // increasing size, so minimal violations are found first
    out.sort_by_key(|(d, l)| (d.len() + l.len(), 2 * d.len() + l.len()));
    out
}

fn families(system: SystemId) -> Vec<Family> {
    let (nx, ny) = system.pattern();
    let all_y: Vec<usize> = (0..ny).collect();
    let all_x: Vec<usize> = (0..nx).collect();
    match system {
        SystemId::CF1 => vec![Family {
            condition: 1,
            degree: 1,
            subsets: subsets(ny, 3).into_iter().map(|s| (vec![], s)).collect(),
        }],
        SystemId::CF2 => vec![
            Family {
                condition: 1,
                degree: 1,
                subsets: subsets(ny, 2).into_iter().map(|s| (vec![0], s)).collect(),
            },
            Family {
                condition: 2,
                degree: 1,
                subsets: weighted_subsets(0, ny, 4, false),
            },
            Family {
                condition: 3,
                degree: 2,
                subsets: (0..ny)
                    .map(|j| (vec![0], all_y.iter().copied().filter(|&i| i != j).collect()))
                    .collect(),
            },
        ],
        SystemId::CF3 => vec![
            Family {
                condition: 1,
                degree: 1,
                subsets: weighted_subsets(0, ny, 4, false),
            },
            Family {
                condition: 2,
                degree: 2,
                subsets: weighted_subsets(0, ny, 8, false),
            },
            Family {
                condition: 3,
                degree: 3,
                subsets: vec![(vec![], all_y.clone())],
            },
        ],
        SystemId::CF3Prime => vec![
            Family {
                condition: 1,
                degree: 1,
                subsets: weighted_subsets(nx, ny, 5, false),
            },
            Family {
                condition: 2,
                degree: 2,
                subsets: weighted_subsets(nx, ny, 10, false),
            },
            Family {
                condition: 3,
                degree: 3,
                subsets: vec![(all_x.clone(), all_y.clone())],
            },
        ],
        SystemId::CF4 => vec![
            Family {
                condition: 1,
                degree: 1,
                subsets: weighted_subsets(nx, ny, 6, false),
            },
            Family {
                condition: 2,
                degree: 2,
                subsets: weighted_subsets(nx, ny, 12, false),
            },
            Family {
                condition: 3,
                degree: 3,
                subsets: (0..ny)
                    .map(|h| (all_x.clone(), all_y.iter().copied().filter(|&j| j != h).collect()))
                    .collect(),
            },
        ],
    }
}

/// Evaluate every numbered condition of the configuration's system.
pub fn check_cf(config: &PlaneConfig) -> Result<CFReport> {
    let field = config.field;
    let system = config.system;
    let xs = config.doubles();
    let ys = config.simples();
    let x_labels: Vec<&str> = config.points.iter().filter(|p| p.mult == 2).map(|p| p.label.as_str()).collect();
    let y_labels: Vec<&str> = config.points.iter().filter(|p| p.mult == 1).map(|p| p.label.as_str()).collect();
    let mut violations = Vec::new();
    let mut notes = Vec::new();

    // condition (0): infinitely near points are not modeled, so require distinct points
    for i in 0..config.points.len() {
        for j in i + 1..config.points.len() {
            let (a, b) = (&config.points[i], &config.points[j]);
            if proportional(&a.coords, &b.coords, field) {
                violations.push(Violation {
                    condition: format!("{}(0)", system.tag()),
                    witness: vec![a.label.clone(), b.label.clone()],
                    section: vec![],
                });
            }
        }
    }
    if matches!(system, SystemId::CF2 | SystemId::CF3Prime | SystemId::CF4) {
        notes.push(format!(
            "{}(0) enforced as pairwise distinctness (stricter than the stated condition)",
            system.tag()
        ));
    }

    for fam in families(system) {
        let tag = format!("{}({})", system.tag(), fam.condition);
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for (dx, ly) in &fam.subsets {
            if found
                .iter()
                .any(|(fd, fl)| fd.iter().all(|i| dx.contains(i)) && fl.iter().all(|j| ly.contains(j)))
            {
                continue;
            }
            let cons: Vec<(PlanePoint, u8)> = dx
                .iter()
                .map(|&i| (xs[i], 1u8))
                .chain(ly.iter().map(|&j| (ys[j], 1u8)))
                .collect();
            if interp_dim(field, fam.degree, &cons) > 0 {
                let section = interp_section(field, fam.degree, &cons).unwrap_or_default();
                violations.push(Violation {
                    condition: tag.clone(),
                    witness: dx
                        .iter()
                        .map(|&i| x_labels[i].to_string())
                        .chain(ly.iter().map(|&j| y_labels[j].to_string()))
                        .collect(),
                    section,
                });
                found.push((dx.clone(), ly.clone()));
            }
        }
    }
    Ok(CFReport {
        system,
        passed: violations.is_empty(),
        violations,
        notes,
    })
}

/// Line/conic census of the surface attached to a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Census {
    /// Ten simple points: conics on the surface are the lines through pairs.
    Lines { lines: usize },
    /// Six double and five simple points: exceptional curves, lines through
    /// two double points, conics through five double points.
    Conics {
        exceptional: usize,
        lines: usize,
        conics: usize,
        total: usize,
    },
}

impl Census {
    pub fn total(&self) -> usize {
        match self {
            Census::Lines { lines } => *lines,
            Census::Conics { total, .. } => *total,
        }
    }
}

fn normalize(v: &[u32], f: Field) -> Vec<u32> {
    let lead = v.iter().find(|&&c| c != 0).copied().unwrap_or(1);
    let inv = f.inv(lead);
    v.iter().map(|&c| f.mul(c, inv)).collect()
}

fn first_vanishing(
    field: Field,
    degree: u32,
    fam: &[(Vec<usize>, Vec<usize>)],
    xs: &[PlanePoint],
    ys: &[PlanePoint],
) -> Option<(Vec<usize>, Vec<usize>)> {
    fam.iter()
        .find(|(dx, ly)| {
            let cons: Vec<(PlanePoint, u8)> = dx
                .iter()
                .map(|&i| (xs[i], 1u8))
                .chain(ly.iter().map(|&j| (ys[j], 1u8)))
                .collect();
            interp_dim(field, degree, &cons) > 0
        })
        .cloned()
}

/// Count lines (ten simple points) or conics (six double and five simple
/// points) after verifying the vanishing hypotheses.
pub fn census_lines_conics(config: &PlaneConfig) -> Result<Census> {
    let field = config.field;
    let xs = config.doubles();
    let ys = config.simples();
    match config.system {
        SystemId::CF3 => {
            for (deg, w) in [(1u32, 3usize), (2, 7), (2, 6)] {
                let fam = weighted_subsets(0, ys.len(), w, false);
                if let Some((_, ly)) = first_vanishing(field, deg, &fam, &xs, &ys) {
                    return Err(Error::HypothesesNotMet(format!(
                        "h0({deg}H - sum of {} points) != 0 for points {:?}",
                        ly.len(),
                        ly.iter().map(|j| j + 1).collect::<Vec<_>>()
                    )));
                }
            }
            let mut lines: Vec<Vec<u32>> = Vec::new();
            for pair in subsets(ys.len(), 2) {
                let sec = interp_section(field, 1, &[(ys[pair[0]], 1), (ys[pair[1]], 1)])
                    .expect("a line through two points");
                let n = normalize(&sec, field);
                if !lines.contains(&n) {
                    lines.push(n);
                }
            }
            Ok(Census::Lines { lines: lines.len() })
        }
        SystemId::CF4 => {
            let fam1 = weighted_subsets(xs.len(), ys.len(), 4, true);
            if let Some((dx, ly)) = first_vanishing(field, 1, &fam1, &xs, &ys) {
                return Err(Error::HypothesesNotMet(format!(
                    "h0(H - x{dx:?} - y{ly:?}) != 0 (indices from 0)"
                )));
            }
            // five x's always lie on a conic, so Λ ≠ ∅ is required here as well
            let fam2 = weighted_subsets(xs.len(), ys.len(), 10, true);
            if let Some((dx, ly)) = first_vanishing(field, 2, &fam2, &xs, &ys) {
                return Err(Error::HypothesesNotMet(format!(
                    "h0(2H - x{dx:?} - y{ly:?}) != 0 (indices from 0)"
                )));
            }
            let mut lines: Vec<Vec<u32>> = Vec::new();
            for pair in subsets(xs.len(), 2) {
                let sec = interp_section(field, 1, &[(xs[pair[0]], 1), (xs[pair[1]], 1)])
                    .expect("a line through two points");
                let n = normalize(&sec, field);
                if !lines.contains(&n) {
                    lines.push(n);
                }
            }
            let mut conics: Vec<Vec<u32>> = Vec::new();
            for five in subsets(xs.len(), 5) {
                let cons: Vec<(PlanePoint, u8)> = five.iter().map(|&i| (xs[i], 1)).collect();
                if interp_dim(field, 2, &cons) != 1 {
                    continue;
                }
                let n = normalize(&interp_section(field, 2, &cons).unwrap(), field);
                if !conics.contains(&n) {
                    conics.push(n);
                }
            }
            let exceptional = xs.len();
            Ok(Census::Conics {
                exceptional,
                lines: lines.len(),
                conics: conics.len(),
                total: exceptional + lines.len() + conics.len(),
            })
        }
        other => Err(Error::UnsupportedConfig(format!(
            "no line/conic census for {other} configurations"
        ))),
    }
}
