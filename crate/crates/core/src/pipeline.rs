//! End-to-end runs: build, invariants, character, CF check and map report,
//! rendered as a JSON report and as a row of the summary table.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::builders::{build, BaseLocusBundle, BuildOptions, CaseId, Certificate, LinkageCertificate};
use crate::cf::CFReport;
use crate::character::{character_of_curve, genus_of_character, is_connected, Connectivity, NumericalCharacter};
use crate::error::{Error, Result};
use crate::invariants::{acm_test, hilbert_data, length_of_intersection};
use crate::kernel::Field;
use crate::verifier::{map_audit, MapReport};

pub const SCHEMA_VERSION: u32 = 1;

/// Primes below this bound make "general" choices noticeably less reliable.
pub const SMALL_PRIME_WARNING: u32 = 1000;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub field: Field,
    pub seed: u64,
    pub retries: usize,
    pub heavy: bool,
    pub degenerate_attempts: usize,
}

impl RunOptions {
    pub fn new(field: Field, seed: u64) -> Self {
        RunOptions {
            field,
            seed,
            retries: 5,
            heavy: false,
            degenerate_attempts: 0,
        }
    }

    fn build_options(&self) -> BuildOptions {
        BuildOptions {
            field: self.field,
            seed: self.seed,
            retries: self.retries,
            degenerate_attempts: self.degenerate_attempts,
        }
    }
}

pub fn prime_warning(field: Field) -> Option<String> {
    (field.modulus() < SMALL_PRIME_WARNING).then(|| {
        format!(
            "prime {} is small: random choices are less often general, expect more retries",
            field.modulus()
        )
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSummary {
    pub name: String,
    pub degree: i64,
    pub p_a: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseLocusSummary {
    pub degree: i64,
    pub p_a: i64,
    pub parts: Vec<PartSummary>,
    pub meet_b1_b2: Option<i64>,
    pub summary: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub character: NumericalCharacter,
    pub genus: i64,
    pub connectivity: Connectivity,
    pub acm: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Retries {
    pub builder: usize,
    pub characteristic_curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub case: CaseId,
    pub variety: String,
    pub d: u32,
    pub prime: u32,
    pub seed: u64,
    pub heavy: bool,
    pub retries: Retries,
    pub base_locus: BaseLocusSummary,
    pub certificates: Vec<Certificate>,
    pub linkages: Vec<(String, LinkageCertificate)>,
    pub character: Option<CharacterReport>,
    pub cf: Option<CFReport>,
    pub map: Option<MapReport>,
    pub errors: Vec<String>,
    /// Wall-clock times per stage. These are the only fields that change
    /// between identical runs.
    pub timings_ms: BTreeMap<String, u64>,
    pub overall_pass: bool,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with `timings_ms` emptied, for byte-level comparisons across runs.
    pub fn to_json_without_timings(&self) -> String {
        let mut r = self.clone();
        r.timings_ms.clear();
        r.to_json()
    }

    /// Degree of the image, when the audit completed.
    pub fn image_degree(&self) -> Option<i64> {
        self.map.as_ref().map(|m| m.image_degree)
    }
}

fn summarize(bundle: &BaseLocusBundle) -> Result<BaseLocusSummary> {
    let data = hilbert_data(&bundle.i_b)?;
    let mut parts = Vec::new();
    for (name, part) in [("B1", &bundle.b1), ("B2", &bundle.b2), ("2B1", &bundle.b1_double)] {
        if let Some(i) = part {
            let pd = hilbert_data(i)?;
            parts.push(PartSummary {
                name: name.into(),
                degree: pd.degree,
                p_a: pd.p_a,
            });
        }
    }
    let meet = match (&bundle.b1, &bundle.b2, bundle.case) {
        (Some(b1), Some(b2), CaseId::Castelnuovo | CaseId::Bordiga) => Some(length_of_intersection(b1, b2)?),
        _ => None,
    };
    let part = |n: &str| parts.iter().find(|p| p.name == n).cloned();
    let summary = match bundle.case {
        CaseId::Segre => "a point P and a line".to_string(),
        CaseId::DelPezzo => format!("curve of degree {} and genus {}", data.degree, data.p_a),
        CaseId::Castelnuovo => {
            let b2 = part("B2").expect("parts");
            format!(
                "B1 {}-secant line, B2 of degree {} and genus {}, first infinitesimal neighbourhood of B1",
                meet.unwrap_or(0),
                b2.degree,
                b2.p_a
            )
        }
        CaseId::Bordiga => {
            let (b1, b2) = (part("B1").expect("parts"), part("B2").expect("parts"));
            format!(
                "first infinitesimal neighbourhood of B1 of degree {} and genus {}, B2 of degree {} and genus {}, deg(B1 meet B2) = {}",
                b1.degree,
                b1.p_a,
                b2.degree,
                b2.p_a,
                meet.unwrap_or(0)
            )
        }
    };
    Ok(BaseLocusSummary {
        degree: data.degree,
        p_a: data.p_a,
        parts,
        meet_b1_b2: meet,
        summary,
    })
}

fn character_report(bundle: &BaseLocusBundle, seed: u64) -> Result<Option<CharacterReport>> {
    if bundle.case == CaseId::Segre {
        return Ok(None);
    }
    let chi = match &bundle.character {
        Some(c) => c.clone(),
        None => character_of_curve(&bundle.i_b, seed)?,
    };
    Ok(Some(CharacterReport {
        genus: genus_of_character(&chi),
        connectivity: is_connected(&chi),
        acm: acm_test(&bundle.i_b, seed)?,
        character: chi,
    }))
}

fn is_hard(e: &Error) -> bool {
    matches!(e, Error::ResourceLimit { .. } | Error::BadPrime(_) | Error::Io(_))
}

/// Full pipeline for one case. Hard errors (resource limits, I/O) are
/// returned; every other failure is recorded in the report.
pub fn run_case(case: CaseId, opts: &RunOptions) -> Result<PipelineReport> {
    let mut timings = BTreeMap::new();
    let mut errors = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut BTreeMap<String, u64>| {
        timings.insert(name.to_string(), clock.elapsed().as_millis() as u64);
        clock = Instant::now();
    };

    let bundle = build(case, &opts.build_options())?;
    lap("build", &mut timings);
    let base_locus = summarize(&bundle)?;
    let mut certificates = bundle.certificates.clone();
    lap("invariants", &mut timings);

    let character = match character_report(&bundle, opts.seed) {
        Ok(c) => c,
        Err(e) if is_hard(&e) => return Err(e),
        Err(e) => {
            errors.push(format!("character: {e}"));
            None
        }
    };
    if let Some(c) = &character {
        certificates.push(Certificate::new("genus of the character equals p_a(B) (ACM)", base_locus.p_a, c.genus));
    }
    lap("character", &mut timings);

    let map = match map_audit(&bundle, opts.seed, opts.retries, opts.heavy) {
        Ok(m) => {
            certificates.extend(m.certificates.iter().cloned());
            Some(m)
        }
        Err(e) if is_hard(&e) => return Err(e),
        Err(e) => {
            errors.push(format!("audit: {e}"));
            certificates.push(Certificate::new("system audit completed", "ok", e.to_string()));
            None
        }
    };
    lap("audit", &mut timings);

    let overall_pass = certificates.iter().all(|c| c.pass);
    Ok(PipelineReport {
        schema_version: SCHEMA_VERSION,
        case,
        variety: case.variety().to_string(),
        d: case.degree(),
        prime: opts.field.modulus(),
        seed: opts.seed,
        heavy: opts.heavy,
        retries: Retries {
            builder: bundle.provenance.retries,
            characteristic_curve: map.as_ref().map_or(0, |m| m.retries),
        },
        base_locus,
        certificates,
        linkages: bundle.linkages.clone(),
        character,
        cf: map.as_ref().and_then(|m| m.cf_report.clone()),
        map,
        errors,
        timings_ms: timings,
        overall_pass,
    })
}

/// The four cases in parallel, in table order.
pub fn run_all(opts: &RunOptions) -> Vec<(CaseId, Result<PipelineReport>)> {
    CaseId::ALL
        .par_iter()
        .map(|&c| (c, run_case(c, opts)))
        .collect()
}

pub const TABLE_HEADER: [&str; 4] = ["Variety", "Degree", "deg Sigma", "Base locus summary"];

/// Plain-text table with columns `Variety | Degree | deg Sigma | Base locus summary`.
pub fn render_table(reports: &[&PipelineReport]) -> String {
    let rows: Vec<[String; 4]> = reports
        .iter()
        .map(|r| {
            let degree = r.image_degree().map_or("?".to_string(), |d| d.to_string());
            let sigma = r.map.as_ref().map_or("?".to_string(), |_| (r.d - 1).to_string());
            let mark = if r.overall_pass { "" } else { " [FAILED]" };
            [r.variety.clone(), degree, sigma, format!("{}{mark}", r.base_locus.summary)]
        })
        .collect();
    let mut widths = TABLE_HEADER.map(|h| h.len());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join(" | ").trim_end().to_string()
    };
    let mut out = line(&TABLE_HEADER.map(String::from));
    out.push('\n');
    out.push_str(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-|-"));
    out.push('\n');
    for row in &rows {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
