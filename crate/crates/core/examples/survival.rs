//! Why nothing in the adjacent column can hit q0*x_{n-1}.

use adams_e2::bxss::survival::survives_to_einfty;
use adams_e2::bxss::E1Monomial;

fn main() {
    let n: u32 = std::env::args().nth(1).map_or(5, |a| a.parse().expect("n"));
    let target: E1Monomial = format!("q0*x{}", n - 1).parse().unwrap();
    let cert = survives_to_einfty(&target).unwrap();
    for r in &cert.sources {
        println!("{:<32} {:?}", r.source.to_string(), r.disposition);
    }
    println!("{target}: {:?}", cert.verdict);
}
