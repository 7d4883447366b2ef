//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

mod common;

use common::{curve_by_rank, hf_by_rank, ideal};
use p3loci::builders::{build, link, BaseLocusBundle, BuildOptions, CaseId};
use p3loci::cf::{census_lines_conics, check_cf, Census, PlaneConfig, SystemId};
use p3loci::character::{character_from_hvector, genus_of_character, is_connected, HVector, NumericalCharacter};
use p3loci::invariants::{acm_test, h1_structure_sheaf, hilbert_data, hilbert_data_raw};
use p3loci::kernel::random::{random_combination, random_invertible, seeded_rng};
use p3loci::kernel::{binomial, Field, HomogeneousIdeal, Polynomial, Ring};
use p3loci::pipeline::{run_all, PipelineReport, RunOptions};
use p3loci::verifier::{
    assemble_system, char_meets, characteristic_curve, image_degree, sectional_curve, sectional_smoothness,
};
use rand::Rng;

/// Collects mismatches for one criterion.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, got: T, want: T) {
        if got != want {
            self.0.push(format!("{what}: got {got:?}, want {want:?}"));
        }
    }

    fn ok(&mut self, what: &str, cond: bool) {
        if !cond {
            self.0.push(what.to_string());
        }
    }

    fn res<T>(&mut self, what: &str, r: p3loci::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.0.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn bundle(case: CaseId) -> BaseLocusBundle {
    build(case, &BuildOptions::new(Field::default(), 1)).expect("build")
}

fn h0(i: &HomogeneousIdeal, k: u32) -> i64 {
    binomial(k as i64 + 3, 3) - hf_by_rank(i, k)
}

fn meet_length(i: &HomogeneousIdeal, j: &HomogeneousIdeal, k: u32) -> i64 {
    hf_by_rank(&i.sum(j).unwrap(), k)
}

fn report(reports: &[PipelineReport], case: CaseId) -> &PipelineReport {
    reports.iter().find(|r| r.case == case).expect("report present")
}

fn criterion_1(reports: &[PipelineReport], c: &mut Checks) {
    for case in CaseId::ALL {
        let d = case.degree() as i64;
        let r = report(reports, case);
        c.eq(&format!("{case} image degree"), r.image_degree(), Some(d));
        let sys = assemble_system(&bundle(case)).unwrap();
        c.eq(&format!("{case} deg Sigma"), sys.degree as i64, d - 1);
        c.ok(
            &format!("{case} Sigma forms have degree d-1"),
            sys.basis.iter().all(|g| g.homogeneous_degree() == Some(d as u32 - 1)),
        );
        // image degree from an independently computed characteristic curve
        if let Some(g) = c.res("characteristic curve", characteristic_curve(&sys, 2, 5)) {
            c.eq(&format!("{case} image degree, seed 2"), image_degree(&g).ok(), Some(d));
        }
    }
}

fn criterion_2(c: &mut Checks) {
    let b = bundle(CaseId::DelPezzo);
    c.eq("B (deg, p_a)", curve_by_rank(&b.i_b, 6), (5, 2));
    c.eq("h0(I_B(3))", h0(&b.i_b, 3), 6);
    c.eq("h0(I_B(2))", h0(&b.i_b, 2), 1);
    let sys = assemble_system(&b).unwrap();
    if let Some(g) = c.res("characteristic curve", characteristic_curve(&sys, 1, 5)) {
        c.eq("Gamma (deg, p_a)", curve_by_rank(&g.ideal, 8), (4, 1));
        c.eq("deg(Gamma meet B)", meet_length(&g.ideal, &b.i_b, 12), 8);
    }
}

fn criterion_3(c: &mut Checks) {
    let b = bundle(CaseId::Castelnuovo);
    let (b1, b2) = (b.b1.as_ref().unwrap(), b.b2.as_ref().unwrap());
    c.eq("B2 (deg, p_a)", curve_by_rank(b2, 8), (7, 3));
    c.eq("deg(B1 meet B2)", meet_length(b1, b2, 8), 5);
    let lc = b.linkages.iter().find(|(n, _)| n.starts_with("D ->")).map(|(_, l)| l);
    c.eq("linked input (deg, p_a)", lc.map(|l| (l.deg_input, l.pa_input)), Some((2, -2)));
    if let Some(l) = lc {
        // residual follows d' = st - d, g' = g + (s+t-4)(d'-d)/2 for CI(3,3)
        c.eq("linked output", (l.deg_linked, l.pa_linked), (9 - 2, -2 + (7 - 2)));
    }
    c.eq("h0(I_B(4))", h0(&b.i_b, 4), 6);
    c.eq("h0(I_B(3))", h0(&b.i_b, 3), 1);
    let sys = assemble_system(&b).unwrap();
    if let Some(g) = c.res("characteristic curve", characteristic_curve(&sys, 1, 5)) {
        c.eq("deg(Gamma meet B1)", meet_length(&g.ideal, b1, 12), 3);
        c.eq("deg(Gamma meet B2)", meet_length(&g.ideal, b2, 12), 9);
    }
}

fn criterion_4(reports: &[PipelineReport], c: &mut Checks) {
    let b = bundle(CaseId::Bordiga);
    let (b1, b2, dbl) = (
        b.b1.as_ref().unwrap(),
        b.b2.as_ref().unwrap(),
        b.b1_double.as_ref().unwrap(),
    );
    c.eq("deg(B1 meet B2)", meet_length(b1, b2, 10), 12);
    c.eq("B (deg, p_a)", curve_by_rank(&b.i_b, 9), (16, 31));
    // character of an ACM curve from the second difference of its Hilbert function
    let hf: Vec<i64> = (0..10).map(|k| hf_by_rank(&b.i_b, k)).collect();
    let mut h: Vec<i64> = (0..10)
        .map(|k| hf[k] - 2 * if k >= 1 { hf[k - 1] } else { 0 } + if k >= 2 { hf[k - 2] } else { 0 })
        .collect();
    while h.last() == Some(&0) {
        h.pop();
    }
    let chi = character_from_hvector(&HVector::new(h)).ok();
    c.eq("chi(B) from Hilbert function", chi.as_ref().map(|x| x.n.clone()), Some(vec![6, 6, 5, 5]));
    let pipeline_chi = report(reports, CaseId::Bordiga).character.as_ref().map(|x| x.character.n.clone());
    c.eq("chi(B) from plane section", pipeline_chi, Some(vec![6, 6, 5, 5]));
    c.eq("acm_test(B)", acm_test(&b.i_b, 1).ok(), Some(true));
    c.eq("h0(I_B(4))", h0(&b.i_b, 4), 1);
    c.eq("h0(I_B(5))", h0(&b.i_b, 5), 6);
    // link B in a complete intersection of type (4,5)
    let mut rng = seeded_rng(9, "acceptance-link");
    let f = random_combination(&b.i_b.degree_part(4).unwrap(), &mut rng).unwrap();
    let g = random_combination(&b.i_b.degree_part(5).unwrap(), &mut rng).unwrap();
    if let Some((res, cert)) = c.res("link in CI(4,5)", link((&f, &g), &b.i_b)) {
        c.eq("linked (deg, p_a)", (cert.deg_linked, cert.pa_linked), (4, 1));
        c.eq("linked curve by rank", curve_by_rank(&res, 8), (4, 1));
    }
    // h1(O_B(4)) = HF(4) - HP(4) for an ACM curve
    c.eq("h1(O_B(4)) oracle", hf_by_rank(&b.i_b, 4) - (16 * 4 + 1 - 31), 0);
    c.eq("h1(O_B(4))", h1_structure_sheaf(&b.i_b, 4, 1).ok(), Some(0));
    // Gamma·Sigma = deg Gamma · deg Sigma splits over the weighted base locus
    let sys = assemble_system(&b).unwrap();
    if let Some(gm) = c.res("characteristic curve", characteristic_curve(&sys, 1, 5)) {
        c.eq("Gamma (deg, p_a)", curve_by_rank(&gm.ideal, 8), (6, 3));
        let meets = char_meets(&b, &gm).unwrap();
        let weighted: Vec<i64> = meets.iter().map(|m| m.1).collect();
        c.eq("Gamma meets", weighted.clone(), vec![8, 8]);
        let total = gm.degree * sys.degree as i64;
        c.eq("Gamma.Sigma", total, 30);
        c.eq("6 + 2*8 + 8", 6 + 2 * weighted[0] + weighted[1], total);
        c.eq("deg(Gamma meet 2B1) by rank", meet_length(&gm.ideal, dbl, 14) - meet_length(&gm.ideal, b1, 14), 8);
    }
}

fn criterion_5(c: &mut Checks) {
    let chi = |n: &[i64]| NumericalCharacter::new(n.to_vec()).unwrap();
    c.eq("g(6,5,5,5,5)", genus_of_character(&chi(&[6, 5, 5, 5, 5])), 30);
    c.eq("g(6,6,5,5)", genus_of_character(&chi(&[6, 6, 5, 5])), 31);
    let rows: [(&str, &[i64], Option<usize>); 9] = [
        ("a", &[10, 4, 4, 4], Some(0)),
        ("a", &[9, 5, 4, 4], Some(0)),
        ("a", &[8, 6, 4, 4], Some(0)),
        ("b", &[7, 7, 4, 4], Some(1)),
        ("c", &[8, 5, 5, 4], Some(0)),
        ("d", &[7, 6, 5, 4], None),
        ("e", &[6, 6, 6, 4], Some(2)),
        ("f", &[7, 5, 5, 5], Some(0)),
        ("g", &[6, 6, 5, 5], None),
    ];
    for (name, n, gap) in rows {
        let v = is_connected(&chi(n));
        c.eq(&format!("row {name} {n:?}"), (v.connected, v.gap_after), (gap.is_none(), gap));
    }
}

fn criterion_6(c: &mut Checks) {
    let f = Field::default();
    for seed in 0..4 {
        for s in [SystemId::CF1, SystemId::CF2, SystemId::CF3, SystemId::CF3Prime, SystemId::CF4] {
            let rep = check_cf(&PlaneConfig::random(f, s, seed)).unwrap();
            c.ok(&format!("{s} seed {seed} generic"), rep.passed);
        }
    }
    // simple points on x2 = x0 + x1, on x0 x2 = x1², and one fewer than the bound
    let mut rng = seeded_rng(3, "acceptance-cf");
    let mut free = || [rng.gen_range(1..f.modulus()), rng.gen_range(1..f.modulus()), 1];
    let line = |t: u32| [1, t, f.add(1, t)];
    let conic = |t: u32| [1, t, f.mul(t, t)];
    let cases: Vec<(&str, Vec<[u32; 3]>, Vec<[u32; 3]>, Option<&str>)> = vec![
        ("3 collinear", vec![], vec![line(2), line(3), line(4), free(), free()], Some("CF1(1)")),
        ("7 on a conic", vec![], (2..9).map(conic).chain((0..3).map(|_| free())).collect(), None),
        ("8 on a conic", vec![], (2..10).map(conic).chain((0..2).map(|_| free())).collect(), Some("CF3(2)")),
        ("4 collinear simple", vec![free()], (2..6).map(line).chain((0..3).map(|_| free())).collect(), Some("CF2(2)")),
        ("double and 2 collinear", vec![line(2)], vec![line(3), line(4), free(), free(), free(), free(), free()], Some("CF2(1)")),
        ("3 collinear doubles", vec![line(2), line(3), line(4), free(), free(), free()], (0..5).map(|_| free()).collect(), Some("CF4(1)")),
        ("6 doubles on a conic", (2..8).map(conic).collect(), (0..5).map(|_| free()).collect(), Some("CF4(2)")),
    ];
    for (name, d, s, tag) in cases {
        let rep = check_cf(&PlaneConfig::from_coords(f, &d, &s).unwrap()).unwrap();
        match tag {
            None => c.ok(&format!("{name}: allowed"), rep.passed),
            Some(t) => c.ok(
                &format!("{name}: {t} expected, got {:?}", rep.violations.iter().map(|v| &v.condition).collect::<Vec<_>>()),
                !rep.passed && rep.violations.iter().any(|v| v.condition == t),
            ),
        }
    }
    c.eq(
        "CF3 census",
        census_lines_conics(&PlaneConfig::random(f, SystemId::CF3, 1)).ok(),
        Some(Census::Lines { lines: 45 }),
    );
    let cf4 = census_lines_conics(&PlaneConfig::random(f, SystemId::CF4, 1)).ok();
    c.eq("CF4 census", cf4.map(|x| x.total()), Some(27));
}

fn criterion_7(reports: &[PipelineReport], c: &mut Checks) {
    let patterns = [(0, 1), (0, 5), (1, 7), (3, 7)];
    for (case, pattern) in CaseId::ALL.into_iter().zip(patterns) {
        let r = report(reports, case);
        c.ok(&format!("{case} overall pass"), r.overall_pass);
        c.ok(&format!("{case} no errors: {:?}", r.errors), r.errors.is_empty());
        let Some(m) = r.map.as_ref() else {
            c.ok(&format!("{case} audit missing"), false);
            continue;
        };
        c.ok(&format!("{case} audit certificates"), m.all_pass());
        c.ok(&format!("{case} spanned"), m.hypotheses.spanned);
        c.eq(&format!("{case} h0(d-1), h0(d-2)"), (m.hypotheses.h0_dminus1, m.hypotheses.h0_dminus2), (6, 1));
        c.eq(&format!("{case} section pattern"), m.hypotheses.section_pattern, pattern);
        c.ok(&format!("{case} CF verdict"), m.hypotheses.cf_pass);
        if case != CaseId::Segre {
            let cf = m.cf_report.as_ref();
            c.ok(&format!("{case} CF run on the section"), cf.is_some_and(|x| x.passed));
            c.eq(&format!("{case} CF system"), cf.map(|x| x.system.pattern()), Some(pattern));
        }
    }
}

fn criterion_8(c: &mut Checks) {
    for case in [CaseId::DelPezzo, CaseId::Castelnuovo, CaseId::Bordiga] {
        let d = case.degree() as i64;
        let sys = assemble_system(&bundle(case)).unwrap();
        let Some(g) = c.res("characteristic curve", characteristic_curve(&sys, 1, 5)) else { continue };
        let Some(s) = c.res(&format!("{case} sectional curve"), sectional_curve(&sys, &g)) else { continue };
        c.eq(&format!("{case} sectional (deg, genus)"), (s.data.degree, s.data.p_a), (d, d - 3));
        c.eq(&format!("{case} sectional by rank"), curve_by_rank(&s.ideal, 8), (d, d - 3));
        c.eq(&format!("{case} sectional smooth"), sectional_smoothness(&s.ideal).ok(), Some(true));
    }
}

fn random_ideal(ring: Ring, seed: u64) -> HomogeneousIdeal {
    let mut rng = seeded_rng(seed, "acceptance-ideal");
    let gens = (0..rng.gen_range(1..=4))
        .map(|_| {
            (0..rng.gen_range(1..=3)).fold(Polynomial::one(ring), |acc, _| {
                let mut v: Vec<u32> = (0..4).map(|_| rng.gen_range(0..4)).collect();
                v[rng.gen_range(0..4)] = 1;
                acc.mul_poly(&Polynomial::linear(ring, &v))
            })
        })
        .collect();
    HomogeneousIdeal::new(ring, gens).unwrap()
}

fn criterion_9(c: &mut Checks) {
    let ring = Ring::new(4, Field::default());
    for seed in 0..12 {
        let (i, j) = (random_ideal(ring, seed), random_ideal(ring, seed + 100));
        let meet = i.intersect(&j).unwrap();
        c.ok("I ∩ J ⊆ I, J", i.contains_ideal(&meet).unwrap() && j.contains_ideal(&meet).unwrap());
        c.ok("IJ ⊆ I ∩ J", meet.contains_ideal(&i.product(&j).unwrap()).unwrap());
        let q = i.colon(&j).unwrap();
        c.ok("I ⊆ I : J", q.contains_ideal(&i).unwrap());
        c.ok("(I : J) J ⊆ I", i.contains_ideal(&q.product(&j).unwrap()).unwrap());
        let s = i.saturate_irrelevant().unwrap();
        let m = HomogeneousIdeal::irrelevant(ring);
        c.ok("saturation idempotent", s.colon(&m).unwrap().same_ideal(&s).unwrap());
        // reduced basis independent of generator order and repeatable
        let mut gens = i.generators().to_vec();
        gens.reverse();
        let other = HomogeneousIdeal::new(ring, gens).unwrap();
        c.eq("reduced basis", other.gb().unwrap().elements().to_vec(), i.gb().unwrap().elements().to_vec());
        let moved = i.linear_change(&random_invertible(ring.field, 4, &mut seeded_rng(seed, "move"))).unwrap();
        c.eq("Hilbert data under coordinate change", hilbert_data_raw(&moved).ok(), hilbert_data_raw(&i).ok());
        let (a, b) = (hilbert_data(&moved).unwrap(), hilbert_data(&i).unwrap());
        c.eq("saturated Hilbert data under coordinate change", (a.degree, a.p_a), (b.degree, b.p_a));
    }
    // character round trip
    for n in [vec![1], vec![3, 2], vec![6, 6, 5, 5], vec![6, 5, 5, 5, 5], vec![8, 6, 4, 4], vec![7, 6, 5, 5, 5]] {
        let chi = NumericalCharacter::new(n.clone()).unwrap();
        let h = p3loci::character::hvector_from_character(&chi);
        c.eq(&format!("round trip {n:?}"), character_from_hvector(&h).ok(), Some(chi));
    }
    // liaison formula on complete intersection links
    let curves = [
        (ideal(ring, &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]), (3, 0)),
        (ideal(ring, &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3 - x3^2 + x0*x2"]), (4, 1)),
    ];
    let types = [(2, 3), (3, 3), (3, 4)];
    for seed in 0..20u64 {
        let (curve, (d, g)) = &curves[(seed % 2) as usize];
        let (s, t) = types[(seed % 3) as usize];
        let mut rng = seeded_rng(seed, "acceptance-liaison");
        let f = random_combination(&curve.degree_part(s).unwrap(), &mut rng).unwrap();
        let h = random_combination(&curve.degree_part(t).unwrap(), &mut rng).unwrap();
        let Some((res, _)) = c.res("link", link((&f, &h), curve)) else { continue };
        let d2 = (s * t) as i64 - d;
        let want = (d2, g + (s + t - 4) as i64 * (d2 - d) / 2);
        c.eq(&format!("link seed {seed} type ({s},{t})"), curve_by_rank(&res, 8), want);
    }
}

#[test]
fn acceptance_criteria() {
    let mut opts = RunOptions::new(Field::default(), 1);
    opts.heavy = false;
    let reports: Vec<PipelineReport> = run_all(&opts)
        .into_iter()
        .map(|(case, r)| r.unwrap_or_else(|e| panic!("{case}: {e}")))
        .collect();

    let mut results: Vec<(usize, Checks)> = Vec::new();
    let run = |n: usize, f: &dyn Fn(&mut Checks)| {
        let mut c = Checks::default();
        f(&mut c);
        (n, c)
    };
    results.push(run(1, &|c| criterion_1(&reports, c)));
    results.push(run(2, &criterion_2));
    results.push(run(3, &criterion_3));
    results.push(run(4, &|c| criterion_4(&reports, c)));
    results.push(run(5, &criterion_5));
    results.push(run(6, &criterion_6));
    results.push(run(7, &|c| criterion_7(&reports, c)));
    results.push(run(8, &criterion_8));
    results.push(run(9, &criterion_9));

    let mut failed = Vec::new();
    for (n, c) in &results {
        if c.0.is_empty() {
            println!("criterion {n}: PASS");
        } else {
            println!("criterion {n}: FAIL");
            for m in &c.0 {
                println!("    {m}");
            }
            failed.push(*n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
