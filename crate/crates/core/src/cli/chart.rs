//! SVG charts of a window: `s` horizontal, filtration vertical, `d_1` in
//! red and `d_2` in blue.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use crate::bxss::window::WindowReport;
use crate::bxss::E1Monomial;

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub s: u32,
    pub filtration: u64,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartArrow {
    pub page: u8,
    pub source: String,
    pub target: String,
    pub color: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartSpec {
    pub title: String,
    pub cells: Vec<Cell>,
    pub arrows: Vec<ChartArrow>,
}

pub fn color(page: u8) -> &'static str {
    match page {
        1 => "red",
        2 => "blue",
        _ => "black",
    }
}

impl ChartSpec {
    pub fn from_window(w: &WindowReport) -> ChartSpec {
        let mut cells: BTreeMap<(u32, u64), Vec<String>> = BTreeMap::new();
        let mut place = |m: &E1Monomial| {
            let v = cells.entry((m.s(), m.filtration())).or_default();
            let label = m.to_string();
            if !v.contains(&label) {
                v.push(label);
            }
        };
        for m in w.e1_classes.iter().chain(&w.supplementary_sources) {
            place(m);
        }
        for a in &w.differentials {
            place(&a.source);
            place(&a.target);
        }
        let [s, k, t] = w.tridegree;
        ChartSpec {
            title: format!("(s, k, t) = ({s}, {k}, {t})"),
            cells: cells
                .into_iter()
                .map(|((s, filtration), labels)| Cell { s, filtration, labels })
                .collect(),
            arrows: w
                .differentials
                .iter()
                .map(|a| ChartArrow {
                    page: a.page,
                    source: a.source.to_string(),
                    target: a.target.to_string(),
                    color: color(a.page),
                })
                .collect(),
        }
    }

    pub fn to_svg(&self) -> String {
        const CHAR_W: f64 = 6.6;
        const LINE_H: f64 = 15.0;
        const MARGIN: f64 = 60.0;
        let s_values: Vec<u32> = {
            let mut v: Vec<u32> = self.cells.iter().map(|c| c.s).collect();
            v.dedup();
            v.sort();
            v.dedup();
            v
        };
        let col_width: BTreeMap<u32, f64> = s_values
            .iter()
            .map(|&s| {
                let widest = self
                    .cells
                    .iter()
                    .filter(|c| c.s == s)
                    .flat_map(|c| c.labels.iter())
                    .map(|l| l.len())
                    .max()
                    .unwrap_or(0);
                (s, widest as f64 * CHAR_W + 120.0)
            })
            .collect();
        let mut col_x = BTreeMap::new();
        let mut x = MARGIN;
        for &s in &s_values {
            col_x.insert(s, x);
            x += col_width[&s];
        }
        let width = x + MARGIN;
        let mut filtrations: Vec<u64> = self.cells.iter().map(|c| c.filtration).collect();
        filtrations.sort_unstable_by(|a, b| b.cmp(a));
        filtrations.dedup();
        let mut row_y = BTreeMap::new();
        let mut y = MARGIN;
        for &f in &filtrations {
            let rows = self.cells.iter().filter(|c| c.filtration == f).map(|c| c.labels.len()).max().unwrap_or(1);
            row_y.insert(f, y);
            y += rows as f64 * LINE_H + 12.0;
        }
        let height = y + MARGIN;

        let mut pos: BTreeMap<&str, (f64, f64, f64)> = BTreeMap::new();
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="monospace" font-size="11">"#
        );
        let _ = writeln!(svg, r#"<title>{}</title>"#, self.title);
        let _ = writeln!(
            svg,
            r#"<defs><marker id="head" markerWidth="8" markerHeight="6" refX="8" refY="3" orient="auto"><path d="M0,0 L8,3 L0,6 z" fill="context-stroke"/></marker></defs>"#
        );
        for &s in &s_values {
            let _ = writeln!(svg, r#"<text class="axis" x="{:.1}" y="{:.1}">s = {s}</text>"#, col_x[&s], height - 20.0);
        }
        for &f in &filtrations {
            let _ = writeln!(svg, r#"<text class="axis" x="8" y="{:.1}">{f}</text>"#, row_y[&f] + 10.0);
        }
        for c in &self.cells {
            for (i, label) in c.labels.iter().enumerate() {
                let (lx, ly) = (col_x[&c.s], row_y[&c.filtration] + 10.0 + i as f64 * LINE_H);
                pos.insert(label.as_str(), (lx, ly - 4.0, lx + label.len() as f64 * CHAR_W));
                let _ = writeln!(svg, r#"<text class="class" x="{lx:.1}" y="{ly:.1}">{label}</text>"#);
            }
        }
        for a in &self.arrows {
            let (Some(&(_, y1, x1)), Some(&(x2, y2, _))) = (pos.get(a.source.as_str()), pos.get(a.target.as_str())) else {
                continue;
            };
            let _ = writeln!(
                svg,
                r#"<line class="d{}" x1="{x1:.1}" y1="{y1:.1}" x2="{:.1}" y2="{y2:.1}" stroke="{}" marker-end="url(#head)"><title>{} -&gt; {}</title></line>"#,
                a.page,
                x2 - 4.0,
                a.color,
                a.source,
                a.target
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// One row per class: filtration, s, label.
pub fn classes_tsv(w: &WindowReport) -> String {
    let mut out = String::from("filtration\ts\tlabel\n");
    for m in &w.e1_classes {
        let _ = writeln!(out, "{}\t{}\t{}", m.filtration(), m.s(), m);
    }
    out
}
