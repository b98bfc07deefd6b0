use std::collections::BTreeMap;

use adams_e2::bxss::{d1, d1_monomial, enumerate_e1, normalize, power_sum_solutions, E1Element, E1Monomial};
use adams_e2::extlines::ExtPMonomial;
use adams_e2::milnor::QMonomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_monomial(rng: &mut impl Rng) -> E1Monomial {
    let k = rng.gen_range(0..=3);
    let qs: Vec<usize> = (0..k).map(|_| rng.gen_range(0..8)).collect();
    let s = rng.gen_range(0..=2);
    let hs: Vec<u32> = (0..s).map(|_| rng.gen_range(0..9)).collect();
    E1Monomial::new(QMonomial::from_indices(&qs), ExtPMonomial::h_product(&hs))
}

fn times(e: &E1Element, y: &E1Monomial) -> E1Element {
    let mut out = E1Element::zero();
    for x in e.iter() {
        if let Some(p) = normalize(&x.mul(y)) {
            out.toggle(p);
        }
    }
    out
}

#[test]
fn leibniz_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 500 {
        let (Some(x), Some(y)) = (normalize(&random_monomial(&mut rng)), normalize(&random_monomial(&mut rng))) else {
            continue;
        };
        let lhs = match normalize(&x.mul(&y)) {
            Some(xy) => d1_monomial(&xy),
            None => E1Element::zero(),
        };
        let mut rhs = times(&d1_monomial(&x), &y);
        rhs.add_sum(times(&d1_monomial(&y), &x));
        if normalize(&x.mul(&y)).is_none() {
            // The product vanishes in E1; the right side must too.
            assert!(rhs.is_zero(), "{x} * {y}: {rhs:?}");
        } else {
            assert_eq!(lhs, rhs, "{x} * {y}");
        }
        checked += 1;
    }
}

#[test]
fn d1_squares_to_zero_on_windows() {
    for (s, k, t) in [(2, 3, 337), (2, 3, 673), (1, 3, 337), (0, 5, 673), (1, 2, 40), (2, 2, 100)] {
        for x in enumerate_e1(s, k, t).unwrap() {
            let dx = d1_monomial(&x);
            assert!(d1(&dx).is_zero(), "d1 d1 ({x}) = {:?}", d1(&dx));
        }
    }
}

#[test]
fn odd_tridegrees_are_empty() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let k = rng.gen_range(0..6u32);
        let mut t = rng.gen_range(0..3000u64);
        if (t + u64::from(k)) % 2 == 0 {
            t += 1;
        }
        let s = rng.gen_range(0..4);
        assert!(enumerate_e1(s, k, t).unwrap().is_empty(), "({s}, {k}, {t})");
    }
}

#[test]
fn power_sums_match_exhaustive_search() {
    const MAX: u64 = 1 << 13;
    fn all(parts: usize, from: u32, acc: u64, cur: &mut Vec<u32>, out: &mut BTreeMap<u64, Vec<Vec<u32>>>) {
        if parts == 0 {
            out.entry(acc).or_default().push(cur.clone());
            return;
        }
        for i in from..13 {
            let next = acc + (2u64 << i);
            if next > MAX {
                break;
            }
            cur.push(i);
            all(parts - 1, i, next, cur, out);
            cur.pop();
        }
    }
    for parts in 0..=6 {
        let mut table = BTreeMap::new();
        all(parts, 0, 0, &mut Vec::new(), &mut table);
        for total in (0..=MAX).step_by(2) {
            let mut expected = table.get(&total).cloned().unwrap_or_default();
            expected.sort();
            assert_eq!(power_sum_solutions(total, parts), expected, "total {total}, parts {parts}");
        }
    }
}
