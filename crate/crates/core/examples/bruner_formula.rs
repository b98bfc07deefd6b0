//! The v function and the two d_2 specializations.

use adams_e2::cess::{bruner_specialize, bruner_v};

fn main() {
    for m in [0, 1, 3, 7, 15, 31, 63, 127, 255] {
        println!("v({m}) = {}", bruner_v(m));
    }
    for (family, j) in [("c", 2), ("c", 5), ("e", 2), ("e", 4), ("e", 1)] {
        match bruner_specialize(family, j) {
            Ok(d) => println!("d{}({}) = {} in {:?}; {}", d.page, d.source, d.target, d.target_degree, d.nonvanishing),
            Err(e) => println!("{family}{j}: {e}"),
        }
    }
}
