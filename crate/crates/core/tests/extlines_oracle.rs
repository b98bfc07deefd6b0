use adams_e2::extlines::audit::{audit_indecomposables, audit_low_bases, audit_table, AuditOutcome};
use adams_e2::extlines::RelationTable;
use adams_e2::resolution::Resolution;

fn oracle() -> Resolution {
    let mut r = Resolution::new();
    r.extend_resolution(6, 48).unwrap();
    r
}

#[test]
fn relation_table_audit() {
    let r = oracle();
    let records = audit_table(RelationTable::standard(), &r);
    let fails: Vec<_> = records.iter().filter(|x| x.outcome != AuditOutcome::Pass).collect();
    assert!(fails.is_empty(), "{fails:#?}");
    assert!(records.len() >= 15, "only {} audit records", records.len());
}

#[test]
fn low_lines_are_complete() {
    let r = oracle();
    let records = audit_low_bases(&r, 3);
    let fails: Vec<_> = records.iter().filter(|x| x.outcome != AuditOutcome::Pass).collect();
    assert!(fails.is_empty(), "{fails:#?}");
}

#[test]
fn indecomposable_tables() {
    let r = oracle();
    let records = audit_indecomposables(&r, 3..=5);
    let fails: Vec<_> = records.iter().filter(|x| x.outcome != AuditOutcome::Pass).collect();
    assert!(fails.is_empty(), "{fails:#?}");
}

#[test]
fn normal_form_is_idempotent_on_random_monomials() {
    use adams_e2::extlines::{normal_form, ExtPElement};
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=6);
        let idx: Vec<u32> = (0..len).map(|_| rng.gen_range(0..10)).collect();
        let e = ExtPElement::h_product(&idx);
        let nf = normal_form(&e);
        assert_eq!(normal_form(&nf), nf);
        if let Some(d) = nf.degree() {
            assert_eq!(Some(d), e.degree());
        }
    }
}

#[test]
fn generic_relations_agree_with_yoneda_products() {
    let r = oracle();
    for i in 0..5u32 {
        let hi = r.h(i).unwrap();
        let hj = r.h(i + 1).unwrap();
        assert!(r.yoneda_product(&hi, &hj).unwrap().is_zero());
        if 9 * (1u32 << i) <= 48 {
            let sq = r.yoneda_product(&r.h(i + 2).unwrap(), &r.h(i + 2).unwrap()).unwrap();
            assert!(r.yoneda_product(&hi, &sq).unwrap().is_zero());
        }
        if 6 * (1u32 << i) <= 48 {
            let cube = r.h_monomial(&[i + 1, i + 1, i + 1]).unwrap();
            let other = r.yoneda_product(&r.h_monomial(&[i, i]).unwrap(), &r.h(i + 2).unwrap()).unwrap();
            assert_eq!(cube, other);
        }
    }
}
