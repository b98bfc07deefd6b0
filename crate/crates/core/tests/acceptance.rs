//! One line per acceptance criterion, with elapsed time against its budget.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use adams_e2::bxss::reference::supplementary_sources;
use adams_e2::bxss::survival::{survives_to_einfty, Disposition, Verdict};
use adams_e2::bxss::window::window_pages;
use adams_e2::bxss::{d1, d1_monomial, enumerate_e1, normalize, power_sum_solutions, E1Element, E1Monomial};
use adams_e2::extlines::audit::{audit_table, AuditOutcome};
use adams_e2::extlines::{ExtPElement, ExtPMonomial, RelationTable};
use adams_e2::milnor::{basis_monomials, cobar_differential, AlgebraTag, CobarElement, CobarTerm, QMonomial};
use adams_e2::resolution::Resolution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn t_of(n: u32) -> u64 {
    (21u64 << (n + 1)) + 1
}

fn m(s: &str) -> E1Monomial {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn four_line_sources() -> Check {
    for n in 3..=12 {
        let col = enumerate_e1(4, 1, t_of(n)).map_err(|e| e.to_string())?;
        let mut expected = vec![
            format!("q0*e{n}"),
            format!("q0*h{}^2*h{}*h{}", n - 1, n + 2, n + 4),
            format!("q{}*h0*h{}*h{}*h{}", n - 1, n - 1, n + 2, n + 4),
            format!("q{}*h0*h{}^2*h{}", n, n + 1, n + 4),
            format!("q{}*h0*h{}*h{}^2", n + 2, n, n + 3),
        ];
        if n > 3 {
            expected.push(format!("q{}*h0*h{}^2*h{}", n + 2, n - 1, n + 4));
            expected.push(format!("q{}*h0*h{}^2*h{}", n + 4, n - 1, n + 2));
        }
        let got: Vec<String> = col.iter().map(ToString::to_string).collect();
        ensure(col.len() == expected.len(), || format!("n = {n}: {got:?}"))?;
        for e in &expected {
            let e = m(e);
            let hit = col.iter().any(|c| normalize(&e).as_ref() == Some(c));
            ensure(hit, || format!("n = {n}: {e} missing from {got:?}"))?;
        }
    }
    Ok(())
}

fn x_class_survives() -> Check {
    for n in 3..=12 {
        let cert = survives_to_einfty(&m(&format!("q0*x{}", n - 1))).map_err(|e| e.to_string())?;
        ensure(cert.verdict == Verdict::Survives, || format!("n = {n}: {:?}", cert.verdict))?;
        let mut products = 0;
        let mut d1_seen = false;
        let mut d2_seen = false;
        for r in &cert.sources {
            match &r.disposition {
                Disposition::PermanentProduct { .. } => products += 1,
                Disposition::DiesEarlier { page: 1, target } => {
                    let cube = RelationTable::standard().normal_form(&ExtPElement::h_product(&[0, n, n, n, n + 4]));
                    let want = cube.terms().map(|c| E1Monomial::new(m(&format!("q{}", n + 1)).q, c.clone())).collect::<Vec<_>>();
                    ensure(r.source == m(&format!("q{}*h0*h{}^2*h{}", n + 2, n - 1, n + 4)) && *target == want, || {
                        format!("n = {n}: d1 {} -> {target:?}", r.source)
                    })?;
                    d1_seen = true;
                }
                Disposition::DiesEarlier { page: 2, target } => {
                    let want = vec![m(&format!("q{}*h0*h{}^2*h{}^2", n + 2, n - 1, n + 3))];
                    ensure(r.source == m(&format!("q{}*h0*h{}^2*h{}", n + 4, n - 1, n + 2)) && *target == want, || {
                        format!("n = {n}: d2 {} -> {target:?}", r.source)
                    })?;
                    d2_seen = true;
                }
                other => return Err(format!("n = {n}: {} has {other:?}", r.source)),
            }
        }
        ensure(products == 5 && d1_seen == (n > 3) && d2_seen == (n > 3), || format!("n = {n}: {products} products"))?;
    }
    Ok(())
}

fn filtration_three_window() -> Check {
    for n in 3..=12 {
        let mut w = window_pages(2, 3, t_of(n), &supplementary_sources(n)).map_err(|e| e.to_string())?;
        w.attach_reference(n);
        let classes = if n == 3 { 25 } else { 26 };
        ensure(w.e1_classes.len() == classes, || format!("n = {n}: {} classes", w.e1_classes.len()))?;
        ensure(w.survivors == 0, || format!("n = {n}: {} survivors", w.survivors))?;
        let cmp = w.reference.as_ref().unwrap();
        ensure(cmp.is_clean(), || format!("n = {n}: {cmp:?}"))?;
        ensure(cmp.flagged.len() == usize::from(n == 3), || format!("n = {n}: flags {:?}", cmp.flagged))?;
    }
    Ok(())
}

fn filtration_five_window() -> Check {
    for n in 3..=12 {
        let w = window_pages(0, 5, t_of(n), &[]).map_err(|e| e.to_string())?;
        let x = m(&format!("q0*q1*q{}*q{}*q{}", n, n + 2, n + 4));
        ensure(w.e1_classes == vec![x.clone()], || format!("n = {n}: {:?}", w.e1_classes))?;
        let mut want = E1Element::zero();
        for t in [
            format!("q0^2*q{}*q{}*q{}*h0", n, n + 2, n + 4),
            format!("q0*q1*q{}*q{}*q{}*h{}", n - 1, n + 2, n + 4, n - 1),
            format!("q0*q1*q{}*q{}*q{}*h{}", n, n + 1, n + 4, n + 1),
            format!("q0*q1*q{}*q{}*q{}*h{}", n, n + 2, n + 3, n + 3),
        ] {
            want.toggle(m(&t));
        }
        let dx = d1_monomial(&x);
        ensure(dx == want, || format!("n = {n}: d1 = {dx:?}"))?;
        ensure(w.survivors == 0, || format!("n = {n}: survives"))?;
    }
    Ok(())
}

fn verify_command() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().to_str().unwrap();
    let mut text = Vec::new();
    let code = adams_e2::cli::run(["adams-e2", "verify", "--n", "3..12", "--out", out], &mut text);
    ensure(code == 0, || String::from_utf8_lossy(&text).into_owned())?;
    for n in 3..=12 {
        let raw = std::fs::read(dir.path().join(format!("certificate_n{n}.json"))).map_err(|e| e.to_string())?;
        let v: serde_json::Value = serde_json::from_slice(&raw).map_err(|e| e.to_string())?;
        let parity = v["parity_exclusions"].as_array().map_or(0, Vec::len);
        ensure(parity == 2, || format!("n = {n}: {parity} parity exclusions"))?;
        for key in ["window_2_3", "window_0_5"] {
            ensure(v[key]["verdict"] == "ALL_DIE", || format!("n = {n}: {key} = {}", v[key]["verdict"]))?;
        }
        ensure(v["conclusion"]["holds"] == true, || format!("n = {n}: conclusion fails"))?;
    }
    Ok(())
}

fn oracle_low_range() -> Check {
    let mut r = Resolution::new();
    r.extend_resolution(8, 48).map_err(|e| e.to_string())?;
    let ones: Vec<u32> = (0..=48).filter(|&t| r.ext_dim(1, t).unwrap() > 0).collect();
    ensure(ones == [1, 2, 4, 8, 16, 32], || format!("s = 1 generators at {ones:?}"))?;
    ensure(r.ext_dim(3, 11).unwrap() >= 1, || "no generator at (3, 11)".into())?;
    ensure(r.h_monomial(&[0, 1]).unwrap().is_zero(), || "h0 h1 != 0".into())?;
    ensure(r.h_monomial(&[1, 1, 1]).unwrap() == r.h_monomial(&[0, 0, 2]).unwrap(), || "h1^3 != h0^2 h2".into())?;
    for s in 1..=8 {
        ensure(!r.h_monomial(&vec![0; s]).unwrap().is_zero(), || format!("h0^{s} = 0"))?;
    }
    let dim = r.ext_dim(5, 42).unwrap();
    let hit = (0..dim).any(|g| !r.multiply_by_h(0, &r.basis_class(5, 42, g).unwrap()).unwrap().is_zero());
    ensure(hit, || "h0 vanishes on Ext^(5,42)".into())
}

fn random_cobar(rng: &mut ChaCha8Rng, length: usize) -> CobarElement {
    let terms: Vec<CobarTerm> = (0..rng.gen_range(1..4))
        .map(|_| {
            let factors = (0..length)
                .map(|_| loop {
                    let d = rng.gen_range(1..=64 / (length as u64 + 1));
                    let basis = basis_monomials(AlgebraTag::P, d);
                    if !basis.is_empty() {
                        break basis[rng.gen_range(0..basis.len())].clone();
                    }
                })
                .collect();
            let q = QMonomial::new((0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..3)).collect());
            CobarTerm::new(factors, q)
        })
        .collect();
    CobarElement::from_terms(length, terms)
}

fn random_e1(rng: &mut ChaCha8Rng) -> Option<E1Monomial> {
    let qs: Vec<usize> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..8)).collect();
    let hs: Vec<u32> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(0..9)).collect();
    normalize(&E1Monomial::new(QMonomial::from_indices(&qs), ExtPMonomial::h_product(&hs)))
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

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let length = rng.gen_range(0..=3);
        let c = random_cobar(&mut rng, length);
        ensure(cobar_differential(&cobar_differential(&c)).is_zero(), || format!("cobar d d != 0 on {c:?}"))?;
    }

    let mut r = Resolution::new();
    r.extend_resolution(6, 48).map_err(|e| e.to_string())?;
    ensure(r.check_d_squared(), || "resolution d d != 0".into())?;

    for (s, k, t) in [(2, 3, 337), (2, 3, 673), (0, 5, 673), (1, 2, 40)] {
        for x in enumerate_e1(s, k, t).map_err(|e| e.to_string())? {
            // d1 asserts degree and filtration of every emitted term.
            let dx = d1_monomial(&x);
            ensure(d1(&dx).is_zero(), || format!("d1 d1 ({x}) != 0"))?;
        }
    }

    let mut pairs = 0;
    while pairs < 500 {
        let (Some(x), Some(y)) = (random_e1(&mut rng), random_e1(&mut rng)) else { continue };
        let mut rhs = times(&d1_monomial(&x), &y);
        rhs.add_sum(times(&d1_monomial(&y), &x));
        let lhs = normalize(&x.mul(&y)).map_or_else(E1Element::zero, |xy| d1_monomial(&xy));
        ensure(lhs == rhs, || format!("Leibniz fails on {x} * {y}"))?;
        pairs += 1;
    }

    for _ in 0..100 {
        let k = rng.gen_range(0..6u32);
        let mut t = rng.gen_range(0..3000u64);
        if (t + u64::from(k)) % 2 == 0 {
            t += 1;
        }
        let s = rng.gen_range(0..4);
        let col = enumerate_e1(s, k, t).map_err(|e| e.to_string())?;
        ensure(col.is_empty(), || format!("({s}, {k}, {t}) not empty"))?;
    }

    const MAX: u64 = 1 << 13;
    let mut table: BTreeMap<(usize, u64), Vec<Vec<u32>>> = BTreeMap::new();
    let mut stack = vec![(Vec::<u32>::new(), 0u64)];
    while let Some((parts, sum)) = stack.pop() {
        table.entry((parts.len(), sum)).or_default().push(parts.clone());
        if parts.len() == 6 {
            continue;
        }
        for i in parts.last().copied().unwrap_or(0)..13 {
            let next = sum + (2u64 << i);
            if next <= MAX {
                let mut p = parts.clone();
                p.push(i);
                stack.push((p, next));
            }
        }
    }
    for parts in 0..=6 {
        for total in (0..=MAX).step_by(2) {
            let mut want = table.get(&(parts, total)).cloned().unwrap_or_default();
            want.sort();
            ensure(power_sum_solutions(total, parts) == want, || format!("power sums {total}/{parts}"))?;
        }
    }

    let fails = audit_table(RelationTable::standard(), &r)
        .into_iter()
        .filter(|x| x.outcome != AuditOutcome::Pass)
        .count();
    ensure(fails == 0, || format!("{fails} relation audit failures"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn() -> Check); 7] = [
        ("four-line sources at (4, 1)", 5, four_line_sources),
        ("q0 x(n-1) survives to E-infinity", 5, x_class_survives),
        ("(2, 3) window matches the reference arrows", 30, filtration_three_window),
        ("(0, 5) window dies by a four-term d1", 1, filtration_five_window),
        ("verify --n 3..12", 60, verify_command),
        ("resolution oracle through (8, 48)", 600, oracle_low_range),
        ("property suites", 600, property_suites),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > Duration::from_secs(budget) {
            result = Err(format!("over the {budget} s budget"));
        }
        match &result {
            Ok(()) => println!("criterion {}: PASS  {name} ({:.2} s, budget {budget} s)", i + 1, elapsed.as_secs_f64()),
            Err(e) => {
                println!("criterion {}: FAIL  {name} ({:.2} s): {e}", i + 1, elapsed.as_secs_f64());
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
