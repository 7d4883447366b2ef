mod common;

use common::hf_by_rank;
use p3loci::invariants::{hilbert_data, hilbert_data_raw};
use p3loci::kernel::random::{random_invertible, seeded_rng};
use p3loci::kernel::{Field, HomogeneousIdeal, MonomialOrder, Polynomial, Ring};
use proptest::prelude::*;
use rand::seq::SliceRandom;

const N: usize = 4;

fn ring() -> Ring {
    Ring::new(N, Field::default())
}

/// A generator is a product of sparse linear forms with small coefficients, so
/// ideals describe unions of linear spaces with embedded and non-reduced structure.
fn generator() -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..4, N), 1..=3)
        .prop_filter("nonzero factors", |fs| fs.iter().all(|v| v.iter().any(|&c| c != 0)))
}

fn ideal_strategy(max_gens: usize) -> impl Strategy<Value = Vec<Vec<Vec<u32>>>> {
    prop::collection::vec(generator(), 1..=max_gens)
}

fn build(shape: &[Vec<Vec<u32>>]) -> HomogeneousIdeal {
    let r = ring();
    let gens = shape
        .iter()
        .map(|factors| {
            factors
                .iter()
                .fold(Polynomial::one(r), |acc, v| acc.mul_poly(&Polynomial::linear(r, v)))
        })
        .collect();
    HomogeneousIdeal::new(r, gens).unwrap()
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn intersection_sits_between_product_and_factors(a in ideal_strategy(3), b in ideal_strategy(3)) {
        let (i, j) = (build(&a), build(&b));
        let meet = i.intersect(&j).unwrap();
        prop_assert!(i.contains_ideal(&meet).unwrap());
        prop_assert!(j.contains_ideal(&meet).unwrap());
        prop_assert!(meet.contains_ideal(&i.product(&j).unwrap()).unwrap());
    }

    #[test]
    fn colon_contains_ideal_and_multiplies_back(a in ideal_strategy(3), b in ideal_strategy(2)) {
        let (i, j) = (build(&a), build(&b));
        let q = i.colon(&j).unwrap();
        prop_assert!(q.contains_ideal(&i).unwrap());
        prop_assert!(i.contains_ideal(&q.product(&j).unwrap()).unwrap());
        // (I ∩ J) : J = I : J
        prop_assert!(i.intersect(&j).unwrap().colon(&j).unwrap().same_ideal(&q).unwrap());
    }

    #[test]
    fn saturation_is_idempotent_and_larger(a in ideal_strategy(4)) {
        let i = build(&a);
        let s = i.saturate_irrelevant().unwrap();
        prop_assert!(s.contains_ideal(&i).unwrap());
        let again = HomogeneousIdeal::new(i.ring(), s.generators().to_vec()).unwrap().saturate_irrelevant().unwrap();
        prop_assert!(again.same_ideal(&s).unwrap());
        let m = HomogeneousIdeal::irrelevant(i.ring());
        prop_assert!(s.colon(&m).unwrap().same_ideal(&s).unwrap());
        // saturating by the maximal ideal directly agrees with the random-form method
        prop_assert!(i.saturate(&m).unwrap().same_ideal(&s).unwrap());
    }

    #[test]
    fn reduced_basis_is_unique(a in ideal_strategy(4), seed in any::<u64>()) {
        let i = build(&a);
        let gb = i.gb().unwrap();
        let mut shuffled = i.generators().to_vec();
        shuffled.shuffle(&mut seeded_rng(seed, "shuffle"));
        // redundant generators must not change the reduced basis
        let x0 = Polynomial::var(i.ring(), 0);
        shuffled.push(shuffled[0].mul_poly(&x0));
        shuffled.push(shuffled[shuffled.len() - 2].scale(3));
        let other = HomogeneousIdeal::new(i.ring(), shuffled).unwrap();
        let gb2 = other.gb().unwrap();
        prop_assert_eq!(gb.elements(), gb2.elements());
        // a reduced basis is its own reduced basis
        let again = HomogeneousIdeal::new(i.ring(), gb.elements().to_vec()).unwrap();
        let gb3 = again.gb().unwrap();
        prop_assert_eq!(gb3.elements(), gb.elements());
        // and the computation is repeatable
        let gb4 = build(&a).gb().unwrap();
        prop_assert_eq!(gb4.elements(), gb.elements());
    }

    #[test]
    fn lex_and_grevlex_describe_the_same_ideal(a in ideal_strategy(3)) {
        let i = build(&a);
        let lex = i.groebner(MonomialOrder::Lex).unwrap();
        for g in lex.elements() {
            prop_assert!(i.contains(g).unwrap());
        }
        let back = HomogeneousIdeal::new(i.ring(), lex.elements().to_vec()).unwrap();
        prop_assert!(back.same_ideal(&i).unwrap());
    }

    #[test]
    fn hilbert_data_is_invariant_under_coordinate_change(a in ideal_strategy(4), seed in any::<u64>()) {
        let i = build(&a);
        let mut rng = seeded_rng(seed, "change");
        let m = random_invertible(i.ring().field, N, &mut rng);
        let j = i.linear_change(&m).unwrap();
        let (hi, hj) = (hilbert_data_raw(&i).unwrap(), hilbert_data_raw(&j).unwrap());
        prop_assert_eq!(&hi, &hj);
        let (si, sj) = (hilbert_data(&i).unwrap(), hilbert_data(&j).unwrap());
        prop_assert_eq!((si.dim, si.degree, si.p_a), (sj.dim, sj.degree, sj.p_a));
        prop_assert_eq!(si.hp_coeffs, sj.hp_coeffs);
    }

    #[test]
    fn hilbert_function_matches_rank_oracle(a in ideal_strategy(4)) {
        let i = build(&a);
        let data = hilbert_data_raw(&i).unwrap();
        for k in 0..=6u32 {
            prop_assert_eq!(data.hf(k as i64), hf_by_rank(&i, k), "degree {}", k);
        }
    }
}
