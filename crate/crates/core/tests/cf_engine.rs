use p3loci::cf::{census_lines_conics, check_cf, Census, CFReport, PlaneConfig, PlanePoint, SystemId};
use p3loci::kernel::random::{random_element, random_invertible, seeded_rng, SeededRng};
use p3loci::kernel::Field;
use p3loci::Error;
use proptest::prelude::*;

const SYSTEMS: [SystemId; 5] = [
    SystemId::CF1,
    SystemId::CF2,
    SystemId::CF3,
    SystemId::CF3Prime,
    SystemId::CF4,
];

fn f() -> Field {
    Field::default()
}

#[derive(Clone, Copy)]
enum Curve {
    /// `x2 = 2 x0 + 3 x1`
    Line,
    /// `x0 x2 = x1²`
    Conic,
    /// `x1³ = x0² x2`, cuspidal
    Cubic,
}

fn on(curve: Curve, t: u32) -> PlanePoint {
    let k = f();
    match curve {
        Curve::Line => [1, t, k.add(2, k.mul(3, t))],
        Curve::Conic => [1, t, k.mul(t, t)],
        Curve::Cubic => [1, t, k.mul(t, k.mul(t, t))],
    }
}

fn random_point(rng: &mut SeededRng) -> PlanePoint {
    [random_element(f(), rng), random_element(f(), rng), 1]
}

/// Doubles and simples for a system, with the chosen ones placed on `curve`.
fn config(system: SystemId, curve: Curve, doubles_on: &[usize], simples_on: &[usize], seed: u64) -> PlaneConfig {
    let mut rng = seeded_rng(seed, "cf-test");
    let (nd, ns) = system.pattern();
    let mut pick = |on_curve: bool| {
        if on_curve {
            on(curve, random_element(f(), &mut rng))
        } else {
            random_point(&mut rng)
        }
    };
    let doubles: Vec<PlanePoint> = (0..nd).map(|i| pick(doubles_on.contains(&i))).collect();
    let simples: Vec<PlanePoint> = (0..ns).map(|j| pick(simples_on.contains(&j))).collect();
    PlaneConfig::from_coords(f(), &doubles, &simples).unwrap()
}

fn tags(rep: &CFReport) -> Vec<String> {
    let mut t: Vec<String> = rep.violations.iter().map(|v| v.condition.clone()).collect();
    t.dedup();
    t
}

#[test]
fn seeded_generic_configurations_pass() {
    for seed in 0..6 {
        for s in SYSTEMS {
            let rep = check_cf(&PlaneConfig::random(f(), s, seed)).unwrap();
            assert!(rep.passed, "{s} seed {seed}: {:?}", rep.violations);
        }
    }
}

#[test]
fn engineered_degeneracies_are_tagged() {
    use Curve::*;
    let cases: Vec<(SystemId, Curve, Vec<usize>, Vec<usize>, &str)> = vec![
        (SystemId::CF1, Line, vec![], vec![0, 1, 2], "CF1(1)"),
        (SystemId::CF2, Line, vec![0], vec![1, 2], "CF2(1)"),
        (SystemId::CF2, Line, vec![], vec![0, 1, 2, 3], "CF2(2)"),
        (SystemId::CF2, Conic, vec![0], vec![0, 1, 2, 3, 4, 5], "CF2(3)"),
        (SystemId::CF3, Line, vec![], vec![0, 1, 2, 3], "CF3(1)"),
        (SystemId::CF3, Conic, vec![], (0..8).collect(), "CF3(2)"),
        (SystemId::CF3, Cubic, vec![], (0..10).collect(), "CF3(3)"),
        (SystemId::CF3Prime, Line, vec![0, 1], vec![0], "CF3'(1)"),
        (SystemId::CF3Prime, Conic, vec![0, 1, 2], vec![0, 1, 2, 3], "CF3'(2)"),
        (SystemId::CF3Prime, Cubic, vec![0, 1, 2], (0..7).collect(), "CF3'(3)"),
        (SystemId::CF4, Line, vec![0, 1, 2], vec![], "CF4(1)"),
        (SystemId::CF4, Conic, (0..6).collect(), vec![], "CF4(2)"),
        (SystemId::CF4, Cubic, (0..6).collect(), vec![0, 1, 2, 3], "CF4(3)"),
    ];
    for (k, (s, curve, d, y, tag)) in cases.into_iter().enumerate() {
        let c = config(s, curve, &d, &y, 100 + k as u64);
        let rep = check_cf(&c).unwrap();
        assert!(!rep.passed, "{tag}");
        assert!(tags(&rep).iter().any(|t| t == tag), "{tag}: got {:?}", tags(&rep));
        // the complementary generic configuration passes
        let clean = config(s, curve, &[], &[], 100 + k as u64);
        assert!(check_cf(&clean).unwrap().passed, "{tag} generic twin");
    }
}

#[test]
fn one_fewer_point_on_the_curve_passes() {
    // CF3(2) needs 8 points on a conic, 7 are allowed
    let c = config(SystemId::CF3, Curve::Conic, &[], &(0..7).collect::<Vec<_>>(), 7);
    assert!(check_cf(&c).unwrap().passed);
    // CF2(2) needs 4 collinear simple points, 3 are allowed
    let c = config(SystemId::CF2, Curve::Line, &[], &[0, 1, 2], 7);
    assert!(check_cf(&c).unwrap().passed);
}

#[test]
fn collinear_double_and_two_simples_witness() {
    let c = config(SystemId::CF2, Curve::Line, &[0], &[1, 2], 3);
    let rep = check_cf(&c).unwrap();
    let v = rep.violations.iter().find(|v| v.condition == "CF2(1)").unwrap();
    assert_eq!(v.witness, vec!["x1", "y3", "y4"]);
    assert_eq!(v.section.len(), 3);
}

#[test]
fn repeated_point_violates_condition_zero() {
    let mut rng = seeded_rng(5, "dup");
    let p = random_point(&mut rng);
    let mut simples: Vec<PlanePoint> = (0..5).map(|_| random_point(&mut rng)).collect();
    simples[3] = [f().mul(p[0], 7), f().mul(p[1], 7), f().mul(p[2], 7)];
    simples[4] = p;
    let rep = check_cf(&PlaneConfig::from_coords(f(), &[], &simples).unwrap()).unwrap();
    assert_eq!(rep.violations[0].condition, "CF1(0)");
    assert_eq!(rep.violations[0].witness, vec!["x4", "x5"]);
    // a doubled point is collinear with any third point
    assert_eq!(tags(&rep), vec!["CF1(0)", "CF1(1)"]);
}

#[test]
fn census_counts_lines_and_conics() {
    for seed in 0..3 {
        let c3 = PlaneConfig::random(f(), SystemId::CF3, seed);
        assert_eq!(census_lines_conics(&c3).unwrap(), Census::Lines { lines: 45 });
        let c4 = PlaneConfig::random(f(), SystemId::CF4, seed);
        match census_lines_conics(&c4).unwrap() {
            Census::Conics {
                exceptional,
                lines,
                conics,
                total,
            } => {
                assert_eq!((exceptional, lines, conics, total), (6, 15, 6, 27));
            }
            other => panic!("unexpected census {other:?}"),
        }
    }
}

#[test]
fn census_guards_its_hypotheses() {
    let c = config(SystemId::CF3, Curve::Line, &[], &[0, 1, 2], 9);
    assert!(matches!(census_lines_conics(&c), Err(Error::HypothesesNotMet(_))));
    let c = PlaneConfig::random(f(), SystemId::CF1, 1);
    assert!(matches!(census_lines_conics(&c), Err(Error::UnsupportedConfig(_))));
}

fn verdict(rep: &CFReport) -> (bool, Vec<(String, Vec<String>)>) {
    (
        rep.passed,
        rep.violations
            .iter()
            .map(|v| (v.condition.clone(), v.witness.clone()))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn verdicts_are_projectively_invariant(system in 0usize..5, degenerate in any::<bool>(), seed in any::<u64>()) {
        let s = SYSTEMS[system];
        let nd = s.pattern().0;
        let c = if degenerate {
            // three heaviest points collinear
            let d: Vec<usize> = (0..nd.min(3)).collect();
            let y: Vec<usize> = (0..3 - d.len()).collect();
            config(s, Curve::Line, &d, &y, seed)
        } else {
            config(s, Curve::Line, &[], &[], seed)
        };
        let m = random_invertible(f(), 3, &mut seeded_rng(seed, "projectivity"));
        let moved = c.transform(&m);
        prop_assert_eq!(verdict(&check_cf(&c).unwrap()), verdict(&check_cf(&moved).unwrap()));
    }
}
