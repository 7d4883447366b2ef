use p3loci::character::{
    character_from_hvector, genus_of_character, hvector_from_character, is_connected, HVector, NumericalCharacter,
};

/// `C(k, 2)`, zero for `k < 2`.
fn choose2(k: i64) -> i64 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

/// `g(χ) = Σ_i [C(n_i - 1, 2) - C(i - 1, 2)]`, computed without h-vectors.
fn genus_oracle(n: &[i64]) -> i64 {
    n.iter()
        .enumerate()
        .map(|(i, &ni)| choose2(ni - 1) - choose2(i as i64 - 1))
        .sum()
}

fn all_characters(max_degree: i64) -> Vec<Vec<i64>> {
    fn extend(prefix: &mut Vec<i64>, max_degree: i64, out: &mut Vec<Vec<i64>>) {
        let sigma = prefix.len() as i64;
        let used: i64 = prefix.iter().enumerate().map(|(i, &v)| v - i as i64).sum();
        if sigma > 0 && prefix.last().copied().unwrap() >= sigma {
            out.push(prefix.clone());
        }
        let i = sigma;
        let upper = prefix.last().copied().unwrap_or(max_degree + 1);
        for v in (i + 1)..=upper {
            if used + v - i > max_degree {
                break;
            }
            prefix.push(v);
            extend(prefix, max_degree, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_degree, &mut out);
    out
}

/// Admissible h-vectors `(1, 2, ..., σ, t_1 ≥ t_2 ≥ ... > 0)` with `t_1 ≤ σ`, sum at most `max`.
fn count_hvectors(max: i64) -> usize {
    fn tails(budget: i64, cap: i64) -> usize {
        1 + (1..=cap.min(budget)).map(|v| tails(budget - v, v)).sum::<usize>()
    }
    (1..)
        .map(|sigma: i64| (sigma, sigma * (sigma + 1) / 2))
        .take_while(|&(_, head)| head <= max)
        .map(|(sigma, head)| tails(max - head, sigma))
        .sum()
}

fn chi(n: &[i64]) -> NumericalCharacter {
    NumericalCharacter::new(n.to_vec()).unwrap()
}

#[test]
fn every_character_of_degree_at_most_twenty_round_trips() {
    let all = all_characters(20);
    assert_eq!(all.len(), count_hvectors(20));
    for n in &all {
        let c = chi(n);
        assert!(c.degree() <= 20);
        let h = hvector_from_character(&c);
        assert_eq!(h.h.iter().sum::<i64>(), c.degree(), "{n:?}");
        assert_eq!(h.sigma() as usize, c.sigma(), "{n:?}");
        assert_eq!(character_from_hvector(&h).unwrap(), c, "{n:?}");
        assert_eq!(genus_of_character(&c), genus_oracle(n), "{n:?}");
    }
}

#[test]
fn admissible_hvectors_round_trip() {
    // h(j) = j + 1 below σ, then non-increasing
    for sigma in 1..=5i64 {
        let head: Vec<i64> = (1..=sigma).collect();
        let mut tails = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for t in &tails {
                next.push(t.clone());
                let last = t.last().copied().unwrap_or(sigma);
                for v in 1..=last {
                    let mut u = t.clone();
                    u.push(v);
                    next.push(u);
                }
            }
            tails = next;
        }
        tails.sort();
        tails.dedup();
        for t in tails {
            let h = HVector::new(head.iter().chain(&t).copied().collect());
            let c = character_from_hvector(&h).unwrap();
            assert_eq!(hvector_from_character(&c), h);
        }
    }
}

#[test]
fn inadmissible_hvector_is_rejected() {
    assert!(character_from_hvector(&HVector::new(vec![1, 2, 1, 2])).is_err());
    assert!(NumericalCharacter::new(vec![3, 4]).is_err());
    assert!(NumericalCharacter::new(vec![3, 1]).is_err());
}

#[test]
fn bordiga_characters_with_sigma_five_and_four() {
    assert_eq!(genus_of_character(&chi(&[6, 5, 5, 5, 5])), 30);
    assert_eq!(genus_of_character(&chi(&[6, 6, 5, 5])), 31);
    // (6,5,5,5,5) is the only σ = 5 character of degree 16
    let sigma5: Vec<Vec<i64>> = all_characters(16)
        .into_iter()
        .filter(|n| n.len() == 5 && chi(n).degree() == 16)
        .collect();
    assert_eq!(sigma5, vec![vec![6, 5, 5, 5, 5]]);
}

#[test]
fn table_rows_connectivity() {
    let rows: [(&str, &[i64], Option<usize>); 9] = [
        ("a0", &[10, 4, 4, 4], Some(0)),
        ("a1", &[9, 5, 4, 4], Some(0)),
        ("a2", &[8, 6, 4, 4], Some(0)),
        ("b", &[7, 7, 4, 4], Some(1)),
        ("c", &[8, 5, 5, 4], Some(0)),
        ("d", &[7, 6, 5, 4], None),
        ("e", &[6, 6, 6, 4], Some(2)),
        ("f", &[7, 5, 5, 5], Some(0)),
        ("g", &[6, 6, 5, 5], None),
    ];
    for (name, n, gap) in rows {
        let c = chi(n);
        assert_eq!(c.degree(), 16, "row {name}");
        let v = is_connected(&c);
        assert_eq!(v.gap_after, gap, "row {name}");
        assert_eq!(v.connected, gap.is_none(), "row {name}");
    }
    // the rows are all σ = 4 characters of degree 16
    let mut sigma4: Vec<Vec<i64>> = all_characters(16)
        .into_iter()
        .filter(|n| n.len() == 4 && chi(n).degree() == 16)
        .collect();
    let mut listed: Vec<Vec<i64>> = rows.iter().map(|r| r.1.to_vec()).collect();
    sigma4.sort();
    listed.sort();
    assert_eq!(sigma4, listed);
}
