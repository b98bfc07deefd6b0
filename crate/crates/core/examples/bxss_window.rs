//! The E_1 classes and differentials of one window.
//!
//! `cargo run --example bxss_window -- 4`

use adams_e2::bxss::reference::supplementary_sources;
use adams_e2::bxss::window::window_pages;
use adams_e2::cess::target_t;

fn main() {
    let n: u32 = std::env::args().nth(1).map_or(4, |a| a.parse().expect("n"));
    let mut w = window_pages(2, 3, target_t(n), &supplementary_sources(n)).unwrap();
    w.attach_reference(n);
    for m in &w.e1_classes {
        println!("{:>3}  {m}", m.filtration());
    }
    for a in &w.differentials {
        println!("d{}: {} -> {}", a.page, a.source, a.target);
    }
    for p in &w.pages {
        println!("filtration {:>2}: E1 {} E2 {} E3 {}", p.filtration, p.e1, p.e2, p.e3);
    }
    println!("survivors: {}", w.survivors);
    if let Some(cmp) = &w.reference {
        println!("reference: {} matched, clean = {}", cmp.matched, cmp.is_clean());
    }
}
