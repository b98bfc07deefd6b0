use std::collections::BTreeSet;

use adams_e2::milnor::cobar::{find_massey_witnesses, is_coboundary};
use adams_e2::milnor::product::sq_degree;
use adams_e2::milnor::{
    basis_monomials, coaction_q, cobar_differential, coproduct, milnor_product, verify_massey_witness,
    AlgebraTag, CobarElement, CobarTerm, F2Sum, MilnorMonomial, QMonomial,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_monomial(rng: &mut ChaCha8Rng, tag: AlgebraTag, max_degree: u64) -> MilnorMonomial {
    loop {
        let d = rng.gen_range(0..=max_degree);
        let basis = basis_monomials(tag, d);
        if !basis.is_empty() {
            return basis[rng.gen_range(0..basis.len())].clone();
        }
    }
}

type Triple = (MilnorMonomial, MilnorMonomial, MilnorMonomial);

fn left_assoc(m: &MilnorMonomial) -> F2Sum<Triple> {
    let mut out = F2Sum::zero();
    for (l, r) in coproduct(m).into_terms() {
        for (ll, lr) in coproduct(&l).into_terms() {
            out.toggle((ll, lr, r.clone()));
        }
    }
    out
}

fn right_assoc(m: &MilnorMonomial) -> F2Sum<Triple> {
    let mut out = F2Sum::zero();
    for (l, r) in coproduct(m).into_terms() {
        for (rl, rr) in coproduct(&r).into_terms() {
            out.toggle((l.clone(), rl, rr));
        }
    }
    out
}

#[test]
fn coproduct_is_coassociative_and_counital() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for tag in [AlgebraTag::DualA, AlgebraTag::P, AlgebraTag::Q] {
        for _ in 0..500 / 3 + 1 {
            let m = random_monomial(&mut rng, tag, 64);
            let c = coproduct(&m);
            assert!(c.iter().all(|(l, r)| l.degree() + r.degree() == m.degree()));
            assert!(c.contains(&(m.clone(), MilnorMonomial::one(tag))));
            assert!(c.contains(&(MilnorMonomial::one(tag), m.clone())));
            assert_eq!(left_assoc(&m), right_assoc(&m), "coassociativity fails on {m}");
        }
    }
}

#[test]
fn coaction_filtration_bound_and_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let exps: Vec<u32> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..3)).collect();
        let q = QMonomial::new(exps);
        for (l, out) in coaction_q(&q).iter() {
            assert_eq!(l.degree() + out.t(), q.t());
            assert_eq!(out.k(), q.k());
            if l.is_one() {
                assert_eq!(out, &q);
            } else {
                assert!(out.filtration() < q.filtration());
            }
        }
    }
}

fn random_cobar(rng: &mut ChaCha8Rng, length: usize) -> CobarElement {
    let terms: Vec<CobarTerm> = (0..rng.gen_range(1..4))
        .map(|_| {
            let factors = (0..length)
                .map(|_| loop {
                    let m = random_monomial(rng, AlgebraTag::P, 64 / (length as u64 + 1));
                    if !m.is_one() {
                        break m;
                    }
                })
                .collect();
            let q = QMonomial::new((0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect());
            CobarTerm::new(factors, q)
        })
        .collect();
    CobarElement::from_terms(length, terms)
}

#[test]
fn cobar_d_squared_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let length = rng.gen_range(0..=3);
        let c = random_cobar(&mut rng, length);
        let dc = cobar_differential(&c);
        for t in dc.terms() {
            assert!(c.terms().any(|s| s.degree() == t.degree()));
        }
        assert!(cobar_differential(&dc).is_zero(), "d∘d ≠ 0 on {c:?}");
    }
}

/// Coefficient of ξ^R ⊗ ξ^S in ψ(ξ^T) is the coefficient of Sq(T) in Sq(R)Sq(S).
fn product_by_duality(r: &[u32], s: &[u32]) -> F2Sum<Vec<u32>> {
    let left = MilnorMonomial::new(AlgebraTag::DualA, r.to_vec());
    let right = MilnorMonomial::new(AlgebraTag::DualA, s.to_vec());
    let degree = sq_degree(r) + sq_degree(s);
    basis_monomials(AlgebraTag::DualA, degree)
        .into_iter()
        .filter(|t| coproduct(t).contains(&(left.clone(), right.clone())))
        .map(|t| t.exponents().to_vec())
        .collect()
}

#[test]
fn milnor_product_matches_coproduct_duality_through_degree_16() {
    let mut checked = 0;
    for a in 0..=16u64 {
        for b in 0..=16 - a {
            for r in basis_monomials(AlgebraTag::DualA, a) {
                for s in basis_monomials(AlgebraTag::DualA, b) {
                    assert_eq!(
                        milnor_product(r.exponents(), s.exponents()),
                        product_by_duality(r.exponents(), s.exponents()),
                        "Sq({:?}) Sq({:?})",
                        r.exponents(),
                        s.exponents()
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500);
}

fn binom_odd(n: i64, k: i64) -> bool {
    n >= 0 && k >= 0 && k <= n && (n & k) == k
}

fn mul_sum(a: &F2Sum<Vec<u32>>, b: &F2Sum<Vec<u32>>) -> F2Sum<Vec<u32>> {
    let mut out = F2Sum::zero();
    for x in a.iter() {
        for y in b.iter() {
            out.add_sum(milnor_product(x, y));
        }
    }
    out
}

fn sq(i: u32) -> F2Sum<Vec<u32>> {
    std::iter::once(if i == 0 { vec![] } else { vec![i] }).collect()
}

#[test]
fn adem_relations_hold_through_degree_16() {
    for a in 1..16u32 {
        for b in 1..=16 - a {
            if a >= 2 * b {
                continue;
            }
            let lhs = mul_sum(&sq(a), &sq(b));
            let mut rhs = F2Sum::zero();
            for c in 0..=a / 2 {
                if binom_odd(i64::from(b) - i64::from(c) - 1, i64::from(a) - 2 * i64::from(c)) {
                    rhs.add_sum(mul_sum(&sq(a + b - c), &sq(c)));
                }
            }
            assert_eq!(lhs, rhs, "Adem relation Sq^{a} Sq^{b}");
        }
    }
}

#[test]
fn milnor_product_is_associative_in_low_degrees() {
    let elems: Vec<Vec<u32>> = (1..=6)
        .flat_map(|d| basis_monomials(AlgebraTag::DualA, d))
        .map(|m| m.exponents().to_vec())
        .collect();
    for x in &elems {
        for y in &elems {
            for z in &elems {
                let xy: F2Sum<Vec<u32>> = milnor_product(x, y);
                let yz: F2Sum<Vec<u32>> = milnor_product(y, z);
                let single = |v: &Vec<u32>| std::iter::once(v.clone()).collect::<F2Sum<Vec<u32>>>();
                assert_eq!(mul_sum(&xy, &single(z)), mul_sum(&single(x), &yz));
            }
        }
    }
}

#[test]
fn massey_k2_witness_gives_h_squared() {
    // <h_n, h_{n+1}, h_n> = h_{n+1}^2, with h_j = [ξ1^(2^(j+1))].
    for n in 0..=1u32 {
        let a = CobarElement::bar(&[&[1 << (n + 1)]]);
        let witnesses = find_massey_witnesses(&a, n, 2).unwrap();
        let rep = verify_massey_witness(&a, n, 2, &witnesses).unwrap();
        assert!(cobar_differential(&rep).is_zero());
        let h_sq = CobarElement::bar(&[&[1 << (n + 2)], &[1 << (n + 2)]]);
        assert!(is_coboundary(&rep.add(&h_sq)), "bracket differs from h_(n+1)^2");
        assert!(!is_coboundary(&h_sq));
    }
}

#[test]
fn ladder_total_differential() {
    // d(a ⊗ q_{n+k}) + Σ d(r_i ⊗ q_{n+k-i}) = rep ⊗ q_n for k = 2, a = h_n, n = 0.
    let n = 0u32;
    let k = 2u32;
    let a = CobarElement::bar(&[&[2]]);
    let witnesses = find_massey_witnesses(&a, n, k).unwrap();
    let rep = verify_massey_witness(&a, n, k, &witnesses).unwrap();
    let with_q = |c: &CobarElement, q: usize| {
        CobarElement::from_terms(
            c.length(),
            c.terms().map(|t| CobarTerm::new(t.factors.clone(), QMonomial::generator(q))),
        )
    };
    let mut total = cobar_differential(&with_q(&a, (n + k) as usize));
    for (i, r) in witnesses.iter().enumerate() {
        total = total.add(&cobar_differential(&with_q(r, (n + k) as usize - i - 1)));
    }
    assert_eq!(total, with_q(&rep, n as usize));
    let distinct: BTreeSet<_> = total.terms().map(|t| t.coeff.clone()).collect();
    assert_eq!(distinct.len(), 1);
}
