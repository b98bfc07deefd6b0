//! Builds the full certificate for one n and prints it as JSON.

use adams_e2::cess::verify_main;

fn main() {
    let n: u32 = std::env::args().nth(1).map_or(3, |a| a.parse().expect("n"));
    let cert = verify_main(n, 12).unwrap();
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());
    eprintln!("passed: {}", cert.passed());
}
