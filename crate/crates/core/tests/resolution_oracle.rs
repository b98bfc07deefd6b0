use adams_e2::resolution::{Limits, Resolution, ResolutionError};

fn resolved(s: u32, t: u32) -> Resolution {
    let mut r = Resolution::new();
    r.extend_resolution(s, t).unwrap();
    r
}

#[test]
fn low_range_invariants() {
    let r = resolved(5, 24);
    assert!(r.check_minimal());
    assert!(r.check_d_squared());
    for t in 0..=5 {
        assert_eq!(r.euler_characteristic(t, 5), i64::from(t == 0), "Euler characteristic at t = {t}");
    }
    for s in 0..5 {
        for t in 0..=24 {
            assert!(r.check_exact(s, t), "not exact at ({s}, {t})");
        }
    }
}

#[test]
fn known_generators() {
    let r = resolved(4, 20);
    assert!(r.ext_dim(3, 11).unwrap() >= 1);
    assert_eq!(r.ext_dim(2, 3).unwrap(), 0);
    assert_eq!(r.ext_dim(2, 6).unwrap(), 0);
    assert_eq!(r.ext_dim(2, 12).unwrap(), 0);
    // h_0^2, h_1^2, h_0 h_2 ... known small values
    assert_eq!(r.ext_dim(2, 2).unwrap(), 1);
    assert_eq!(r.ext_dim(2, 5).unwrap(), 1);
    assert_eq!(r.ext_p_dim(3, 22).unwrap(), r.ext_dim(3, 11).unwrap());
    assert_eq!(r.ext_p_dim(3, 21).unwrap(), 0);
    assert_eq!(r.ext_p_dim(1, 8).unwrap(), 1);
}

#[test]
fn h_products() {
    let r = resolved(4, 24);
    for i in 0..3 {
        assert!(r.h_monomial(&[i, i + 1]).unwrap().is_zero(), "h_{i} h_{} ≠ 0", i + 1);
    }
    for i in 0..2 {
        assert_eq!(
            r.h_monomial(&[i + 1, i + 1, i + 1]).unwrap(),
            r.h_monomial(&[i, i, i + 2]).unwrap()
        );
        assert!(!r.h_monomial(&[i, i, i + 2]).unwrap().is_zero());
    }
    for s in 1..=4 {
        assert!(!r.h_monomial(&vec![0; s]).unwrap().is_zero());
    }
}

#[test]
fn yoneda_agrees_with_h_multiplication() {
    let r = resolved(4, 24);
    let unit = r.unit_class().unwrap();
    let h1 = r.h(1).unwrap();
    assert_eq!(r.yoneda_product(&unit, &h1).unwrap(), h1);
    assert_eq!(r.yoneda_product(&h1, &unit).unwrap(), h1);
    let h0 = r.h(0).unwrap();
    assert!(r.yoneda_product(&h0, &h1).unwrap().is_zero());
    let h2 = r.h(2).unwrap();
    let h0h2 = r.h_monomial(&[0, 2]).unwrap();
    assert_eq!(r.yoneda_product(&h0, &h2).unwrap(), h0h2);
    assert_eq!(r.yoneda_product(&h2, &h0).unwrap(), h0h2);
    // every class times h_i two ways
    for s in 1..=2 {
        for t in 0..=12 {
            for g in 0..r.ext_dim(s, t).unwrap() {
                let x = r.basis_class(s, t, g).unwrap();
                for i in 0..3 {
                    let hi = r.h(i).unwrap();
                    assert_eq!(r.yoneda_product(&x, &hi).unwrap(), r.multiply_by_h(i, &x).unwrap());
                    assert_eq!(r.yoneda_product(&hi, &x).unwrap(), r.multiply_by_h(i, &x).unwrap());
                }
            }
        }
    }
}

#[test]
fn yoneda_is_associative_on_small_triples() {
    let r = resolved(4, 20);
    let c0 = r.basis_class(3, 11, 0).unwrap();
    let h1 = r.h(1).unwrap();
    let h0 = r.h(0).unwrap();
    let left = r.yoneda_product(&r.yoneda_product(&h0, &h1).unwrap(), &c0);
    assert!(matches!(left, Err(ResolutionError::OutOfRange { .. })) || left.unwrap().is_zero());
    let h1c0 = r.yoneda_product(&h1, &c0).unwrap();
    assert!(!h1c0.is_zero());
    assert!(r.yoneda_product(&h0, &c0).unwrap().is_zero());
}

#[test]
fn resume_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("res.ckpt");
    let mut partial = Resolution::new();
    let mut writer = adams_e2::resolution::checkpoint::CheckpointWriter::open(&path).unwrap();
    let err = partial
        .extend_with(4, 18, Limits { max_cells: Some(40), deadline: None }, |rec| writer.append(rec))
        .unwrap_err();
    assert!(matches!(err, ResolutionError::ResourceLimit { last_completed: Some(_) }));
    drop(writer);
    let mut resumed = Resolution::load_checkpoint(&path).unwrap();
    resumed.extend_resolution(4, 18).unwrap();
    let fresh = resolved(4, 18);
    for s in 0..=4 {
        for t in 0..=18 {
            assert_eq!(resumed.ext_dim(s, t).unwrap(), fresh.ext_dim(s, t).unwrap());
        }
    }
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    resumed.save_checkpoint(&a).unwrap();
    fresh.save_checkpoint(&b).unwrap();
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn truncated_checkpoint_loses_only_the_tail() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("res.ckpt");
    let r = resolved(3, 12);
    r.save_checkpoint(&path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 5]).unwrap();
    let mut back = Resolution::load_checkpoint(&path).unwrap();
    assert_eq!(back.completed_through(3), 11);
    back.extend_resolution(3, 12).unwrap();
    assert_eq!(back.ext_dim(3, 12).unwrap(), r.ext_dim(3, 12).unwrap());
    std::fs::write(&path, b"NOPE!").unwrap();
    assert!(Resolution::load_checkpoint(&path).is_err());
}

#[test]
fn j0_instance_of_h0_x() {
    let r = resolved(8, 48);
    let ones: Vec<u32> = (0..=48).filter(|&t| r.ext_dim(1, t).unwrap() > 0).collect();
    assert_eq!(ones, vec![1, 2, 4, 8, 16, 32]);
    for s in 1..=8 {
        assert!(!r.h_monomial(&vec![0; s]).unwrap().is_zero(), "h_0^{s} = 0");
    }
    let dim = r.ext_dim(5, 42).unwrap();
    assert!(dim >= 1);
    assert!(r.ext_dim(6, 43).unwrap() >= 1);
    let nonzero = (0..dim).any(|g| !r.multiply_by_h(0, &r.basis_class(5, 42, g).unwrap()).unwrap().is_zero());
    assert!(nonzero, "h_0 kills Ext^(5,42)");
    assert!(r.check_minimal());
    assert!(r.check_d_squared());
    for t in 0..=8 {
        assert_eq!(r.euler_characteristic(t, 8), i64::from(t == 0));
    }
}
