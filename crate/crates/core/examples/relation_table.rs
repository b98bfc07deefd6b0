//! Normal forms and vanishing verdicts from the relation table.

use adams_e2::extlines::{is_zero, normal_form, ExtPElement};

fn main() {
    for text in ["h1^3", "h2^3*h5", "h0*h1", "h3*h5^2", "h0*h4^3*h8", "h0*h3^3*h8", "e3", "h0*h1*h2*h3*h9*h11"] {
        let e: ExtPElement = text.parse().unwrap();
        let verdict = is_zero(&e);
        println!("{text:<22} -> {:<20} {:?}", normal_form(&e).to_string(), verdict.known());
        println!("{:24}{}", "", verdict.note());
    }
}
