mod common;

use common::curve_by_rank;
use p3loci::builders::{build, BaseLocusBundle, BuildOptions, CaseId};
use p3loci::kernel::Field;
use p3loci::verifier::{
    assemble_system, char_meets, characteristic_curve, image_degree, phi_splits_off, quadric_line_secancies,
    section_config, segre_line_counts, spannedness_check,
};

fn bundle(case: CaseId) -> BaseLocusBundle {
    build(case, &BuildOptions::new(Field::default(), 1)).unwrap()
}

#[test]
fn systems_are_spanned_six_dimensional_and_contain_phi() {
    for case in [CaseId::Segre, CaseId::DelPezzo, CaseId::Castelnuovo] {
        let b = bundle(case);
        let sys = assemble_system(&b).unwrap();
        assert_eq!(sys.basis.len(), 6, "{case}");
        for g in &sys.basis {
            assert_eq!(g.homogeneous_degree(), Some(case.degree() - 1));
            assert!(b.i_b.contains(g).unwrap());
        }
        assert!(spannedness_check(&sys.basis, &b.i_b).unwrap().spanned, "{case}");
        // two members alone leave extra base locus
        let two = spannedness_check(&sys.basis[..2], &b.i_b).unwrap();
        assert!(!two.spanned);
        assert!(!two.excess.unwrap().is_unit().unwrap());
        let phi = &b.phi;
        assert!(phi_splits_off(&sys, phi).unwrap(), "{case}");
    }
}

#[test]
fn characteristic_curves_and_image_degrees() {
    let expected = [
        (CaseId::Segre, (3, 0), vec![2, 1]),
        (CaseId::DelPezzo, (4, 1), vec![8]),
        (CaseId::Castelnuovo, (5, 2), vec![3, 9]),
    ];
    for (case, data, meets) in expected {
        let b = bundle(case);
        let sys = assemble_system(&b).unwrap();
        let gamma = characteristic_curve(&sys, 1, 5).unwrap();
        assert_eq!((gamma.degree, gamma.p_a), data, "{case}");
        assert_eq!(curve_by_rank(&gamma.ideal, 8), data, "{case}: rank oracle");
        let got: Vec<i64> = char_meets(&b, &gamma).unwrap().into_iter().map(|m| m.1).collect();
        assert_eq!(got, meets, "{case}");
        assert_eq!(image_degree(&gamma).unwrap(), case.degree() as i64, "{case}");
    }
}

#[test]
fn segre_lines_through_the_point() {
    let b = bundle(CaseId::Segre);
    assert_eq!(segre_line_counts(&b, 6, 3).unwrap(), vec![2; 6]);
}

#[test]
fn del_pezzo_quadric_rulings() {
    let b = bundle(CaseId::DelPezzo);
    for (a, c) in quadric_line_secancies(&b, 4, 5).unwrap() {
        assert_eq!((a.min(c), a.max(c)), (2, 3));
    }
}

#[test]
fn plane_section_patterns() {
    for (case, pattern) in [
        (CaseId::DelPezzo, (0, 5)),
        (CaseId::Castelnuovo, (1, 7)),
        (CaseId::Bordiga, (3, 7)),
    ] {
        let b = bundle(case);
        let (d, s) = section_config(&b, 1).unwrap();
        assert_eq!((d.len(), s.len()), pattern, "{case}");
    }
}
