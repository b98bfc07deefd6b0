//! Three-fold brackets with h-entries and degree-zero certificates.

use adams_e2::extlines::{massey_bracket, vanishing_bracket_certificate, ExtPElement};

fn main() {
    let a: ExtPElement = "h0*h4^2*h7".parse().unwrap();
    println!("<h7, h8, {a}> = {:?}", massey_bracket(&[7, 8], &a));
    let b: ExtPElement = "h4*h9".parse().unwrap();
    println!("<h4, h5, {b}> = {:?}", massey_bracket(&[4, 5], &b));
    for k in 1..=4 {
        let cert = vanishing_bracket_certificate(4, k, &"h6^2".parse().unwrap());
        println!("k = {k}: {cert:?}");
    }
}
