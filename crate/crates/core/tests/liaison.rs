mod common;

use common::{curve_by_rank, ideal};
use p3loci::builders::link;
use p3loci::kernel::random::{random_combination, seeded_rng};
use p3loci::kernel::{Field, HomogeneousIdeal, Ring};

fn p3() -> Ring {
    Ring::new(4, Field::default())
}

fn twisted_cubic() -> HomogeneousIdeal {
    ideal(p3(), &["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"])
}

fn elliptic_quartic() -> HomogeneousIdeal {
    ideal(p3(), &["x0^2 + x1^2 + x2^2 + x3^2", "x0*x1 + 2*x2*x3 - x3^2 + x0*x2"])
}

/// Residual `(d', g')` with `d' = st - d` and `g' - g = (s + t - 4)(d' - d)/2`.
fn expected(s: i64, t: i64, d: i64, g: i64) -> (i64, i64) {
    let d2 = s * t - d;
    (d2, g + (s + t - 4) * (d2 - d) / 2)
}

fn run(name: &str, curve: &HomogeneousIdeal, (d, g): (i64, i64), types: &[(u32, u32)], seeds: std::ops::Range<u64>) {
    for (k, seed) in seeds.enumerate() {
        let (s, t) = types[k % types.len()];
        let mut rng = seeded_rng(seed, "liaison-test");
        let f = random_combination(&curve.degree_part(s).unwrap(), &mut rng).unwrap();
        let g2 = random_combination(&curve.degree_part(t).unwrap(), &mut rng).unwrap();
        let (res, cert) = link((&f, &g2), curve).unwrap();
        let want = expected(s as i64, t as i64, d, g);
        assert_eq!((cert.deg_input, cert.pa_input), (d, g), "{name} seed {seed}");
        assert_eq!((cert.deg_linked, cert.pa_linked), want, "{name} seed {seed} type ({s},{t})");
        assert_eq!(curve_by_rank(&res, 8), want, "{name} seed {seed}: rank oracle");
        // linkage is symmetric
        let (back, _) = link((&f, &g2), &res).unwrap();
        assert!(back.same_ideal(curve).unwrap(), "{name} seed {seed}: link back");
    }
}

#[test]
fn twisted_cubic_linkages() {
    run("twisted cubic", &twisted_cubic(), (3, 0), &[(2, 2), (2, 3), (3, 3)], 0..10);
}

#[test]
fn elliptic_quartic_linkages() {
    let c = elliptic_quartic();
    assert_eq!(curve_by_rank(&c, 6), (4, 1));
    run("elliptic quartic", &c, (4, 1), &[(2, 3), (3, 3), (2, 4), (3, 4)], 10..20);
}

#[test]
fn forms_outside_the_curve_are_rejected() {
    let c = twisted_cubic();
    let r = p3();
    let f = common::poly(r, "x0*x2 - x1^2");
    let g = common::poly(r, "x0^2 + x3^2");
    assert!(link((&f, &g), &c).is_err());
}
