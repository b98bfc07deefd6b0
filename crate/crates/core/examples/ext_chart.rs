//! Resolves F_2 over the Steenrod algebra and prints the Ext chart.
//!
//! `cargo run --release --example ext_chart -- 8 48`

use adams_e2::cli::ext_table;
use adams_e2::resolution::Resolution;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u32>().expect("integer bound"));
    let max_s = args.next().unwrap_or(6);
    let max_t = args.next().unwrap_or(30);
    let mut res = Resolution::new();
    res.extend_resolution(max_s, max_t).unwrap();
    print!("{}", ext_table(&res, max_s, max_t));
    if max_s >= 6 && max_t >= 43 {
        let x0 = res.basis_class(5, 42, 0).unwrap();
        let h0x0 = res.multiply_by_h(0, &x0).unwrap();
        println!("h0 * x0 is {}", if h0x0.is_zero() { "zero" } else { "nonzero" });
    }
}
