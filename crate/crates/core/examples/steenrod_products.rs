//! Milnor-basis products and the coaction on q-monomials.

use adams_e2::milnor::{coaction_q, milnor_product, QMonomial};

fn show(r: &[u32]) -> String {
    format!("Sq({})", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
}

fn main() {
    for (a, b) in [(vec![2], vec![2]), (vec![1], vec![2]), (vec![0, 1], vec![2])] {
        let p = milnor_product(&a, &b);
        let terms: Vec<String> = p.iter().map(|r| show(r)).collect();
        println!("{} * {} = {}", show(&a), show(&b), if terms.is_empty() { "0".into() } else { terms.join(" + ") });
    }
    let q = QMonomial::from_indices(&[2]);
    println!("coaction of {q}:");
    for (left, right) in coaction_q(&q).iter() {
        println!("  {left} (x) {right}");
    }
}
