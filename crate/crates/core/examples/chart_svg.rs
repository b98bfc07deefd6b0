//! Writes the chart of the filtration-3 window to `window.svg`.

use adams_e2::bxss::reference::supplementary_sources;
use adams_e2::bxss::window::window_pages;
use adams_e2::cess::target_t;
use adams_e2::cli::chart::ChartSpec;

fn main() {
    let n: u32 = std::env::args().nth(1).map_or(3, |a| a.parse().expect("n"));
    let w = window_pages(2, 3, target_t(n), &supplementary_sources(n)).unwrap();
    let svg = ChartSpec::from_window(&w).to_svg();
    std::fs::write("window.svg", &svg).unwrap();
    println!("wrote window.svg ({} arrows)", w.differentials.len());
}
