//! `E_1`, `E_2` and `E_3` of a fixed tridegree, all filtrations at once.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::reference::{compare, reference_arrows, Comparison};
use super::{d1_monomial, d2_monomial, enumerate_e1, BxssError, E1Element, E1Monomial};
use crate::f2linalg::{subquotient_basis, Echelon, F2Matrix, F2Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub page: u8,
    pub source: E1Monomial,
    pub target: E1Monomial,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiltrationCount {
    pub filtration: u64,
    pub e1: usize,
    pub e2: usize,
    pub d2_out: usize,
    pub d2_in: usize,
    pub e3: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowReport {
    pub n: Option<u32>,
    pub tridegree: [u64; 3],
    pub e1_classes: Vec<E1Monomial>,
    pub supplementary_sources: Vec<E1Monomial>,
    pub differentials: Vec<Arrow>,
    pub pages: Vec<FiltrationCount>,
    pub survivors: usize,
    pub verdict: String,
    pub certificates: Vec<String>,
    pub reference: Option<Comparison>,
}

impl WindowReport {
    pub fn all_die(&self) -> bool {
        self.survivors == 0
    }

    pub fn arrow_triples(&self) -> Vec<(u8, E1Monomial, E1Monomial)> {
        self.differentials
            .iter()
            .map(|a| (a.page, a.source.clone(), a.target.clone()))
            .collect()
    }

    /// Compares the arrows with the reference list for `n`, if there is one
    /// for this tridegree.
    pub fn attach_reference(&mut self, n: u32) {
        self.n = Some(n);
        let t = (21u64 << (n + 1)) + 1;
        if self.tridegree != [2, 3, t] {
            return;
        }
        if let Some(reference) = reference_arrows(n) {
            self.reference = Some(compare(&reference, &self.arrow_triples()));
        }
    }
}

struct Basis {
    index: BTreeMap<E1Monomial, usize>,
    items: Vec<E1Monomial>,
}

impl Basis {
    fn new() -> Self {
        Basis { index: BTreeMap::new(), items: Vec::new() }
    }

    fn of(items: &[E1Monomial]) -> Self {
        let mut b = Basis::new();
        for m in items {
            b.id(m);
        }
        b
    }

    fn id(&mut self, m: &E1Monomial) -> usize {
        if let Some(&i) = self.index.get(m) {
            return i;
        }
        self.items.push(m.clone());
        self.index.insert(m.clone(), self.items.len() - 1);
        self.items.len() - 1
    }

    fn get(&self, m: &E1Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

fn support(basis: &mut Basis, e: &E1Element) -> Vec<usize> {
    e.iter().map(|m| basis.id(m)).collect()
}

fn vectors(len: usize, supports: &[Vec<usize>]) -> Vec<F2Vector> {
    supports.iter().map(|s| F2Vector::from_support(len, s.iter().copied())).collect()
}

/// Cycles of `d_1` on a column, monomial cycles first. Returns the cycle
/// vectors in the column basis.
fn d1_cycles(column: &[E1Monomial], images: &[E1Element]) -> Vec<F2Vector> {
    let mut targets = Basis::new();
    let rows: Vec<Vec<usize>> = images.iter().map(|e| support(&mut targets, e)).collect();
    let mut out: Vec<F2Vector> = (0..column.len())
        .filter(|&i| rows[i].is_empty())
        .map(|i| F2Vector::unit(column.len(), i))
        .collect();
    let mut m = F2Matrix::zeros(targets.items.len(), column.len());
    for (c, row) in rows.iter().enumerate() {
        for &r in row {
            m.set(r, c, !m.get(r, c));
        }
    }
    out.extend(m.kernel_basis());
    out
}

fn monomial_rep(column: &[E1Monomial], v: &F2Vector) -> Result<E1Monomial, BxssError> {
    let ones: Vec<usize> = v.iter_ones().collect();
    match ones.as_slice() {
        [i] => Ok(column[*i].clone()),
        _ => Err(BxssError::RuleGap {
            class: ones.iter().map(|&i| column[i].to_string()).collect::<Vec<_>>().join(" + "),
            reason: "the E_2 representative is not a single monomial".into(),
        }),
    }
}

/// Rank of `span(base ∪ extra) / span(base)`.
fn relative_rank(base: &[Vec<usize>], extra: &[Vec<usize>], dim: usize) -> usize {
    let mut e = Echelon::from_rows(dim, vectors(dim, base));
    let before = e.rank();
    for v in vectors(dim, extra) {
        e.insert(v);
    }
    e.rank() - before
}

/// Pages of the window `(s, k, t)`. `supplementary` lists classes of the
/// adjacent column `(s-1, k, t)` to use as `d_1` sources even if the
/// enumeration misses them.
pub fn window_pages(s: u32, k: u32, t: u64, supplementary: &[E1Monomial]) -> Result<WindowReport, BxssError> {
    let column = enumerate_e1(s, k, t)?;
    let mut certificates = Vec::new();
    let mut sources: BTreeSet<E1Monomial> = if s > 0 {
        enumerate_e1(s - 1, k, t)?.into_iter().collect()
    } else {
        BTreeSet::new()
    };
    let adjacent = sources.len();
    for g in supplementary {
        assert_eq!((g.s() + 1, g.k(), g.t()), (s, u64::from(k), t), "{g} is not in the adjacent column");
        if !sources.contains(g) {
            certificates.push(format!("supplementary source {g} is missing from the enumerated adjacent column"));
            sources.insert(g.clone());
        }
    }
    if s > 0 {
        certificates.push(format!(
            "adjacent column ({}, {k}, {t}) has {adjacent} classes; {} supplied, all {}",
            s - 1,
            supplementary.len(),
            if sources.len() == adjacent { "enumerated" } else { "added" }
        ));
    }
    if u64::from(k) % 2 != t % 2 {
        certificates.push(format!("k + t = {} is odd, so E_1 is empty", u64::from(k) + t));
    }
    let sources: Vec<E1Monomial> = sources.into_iter().collect();

    let mut arrows = Vec::new();
    let column_d1: Vec<E1Element> = column.iter().map(d1_monomial).collect();
    let source_d1: Vec<E1Element> = sources.iter().map(d1_monomial).collect();
    for (x, dx) in column.iter().zip(&column_d1).chain(sources.iter().zip(&source_d1)) {
        for y in dx.iter() {
            arrows.push(Arrow { page: 1, source: x.clone(), target: y.clone() });
        }
    }

    // E_2 of the column.
    let col = Basis::of(&column);
    let mut boundaries = Vec::new();
    for (g, dg) in sources.iter().zip(&source_d1) {
        let mut sup = Vec::new();
        for y in dg.iter() {
            let i = col.get(y).unwrap_or_else(|| panic!("d1({g}) hits {y}, which is not enumerated"));
            sup.push(i);
        }
        boundaries.push(F2Vector::from_support(column.len(), sup));
    }
    let cycles = d1_cycles(&column, &column_d1);
    let e2 = subquotient_basis(column.len(), &cycles, &boundaries).expect("d1 squares to zero");
    let reps: Vec<E1Monomial> = e2.basis().iter().map(|v| monomial_rep(&column, v)).collect::<Result<_, _>>()?;

    // Outgoing d_2, modulo d_1 of the column.
    let mut lower = Basis::new();
    let d1_image: Vec<Vec<usize>> = column_d1.iter().map(|e| support(&mut lower, e)).collect();
    let mut d2_out: BTreeMap<u64, Vec<Vec<usize>>> = BTreeMap::new();
    for x in &reps {
        let dx = d2_monomial(x)?;
        if !dx.iter().map(d1_monomial).fold(E1Element::zero(), |mut a, b| {
            a.add_sum(b);
            a
        }).is_zero()
        {
            certificates.push(format!("d2({x}) is not a d1-cycle"));
        }
        for y in dx.iter() {
            arrows.push(Arrow { page: 2, source: x.clone(), target: y.clone() });
        }
        d2_out.entry(x.filtration()).or_default().push(support(&mut lower, &dx));
    }
    let lower_dim = lower.items.len();

    // Incoming d_2 from d_1-cycles of the adjacent column.
    let source_cycles = d1_cycles(&sources, &source_d1);
    let mut d2_in: BTreeMap<u64, Vec<Vec<usize>>> = BTreeMap::new();
    let mut col_mut = Basis::of(&column);
    for v in &source_cycles {
        let g = monomial_rep(&sources, v)?;
        let dg = d2_monomial(&g)?;
        for y in dg.iter() {
            arrows.push(Arrow { page: 2, source: g.clone(), target: y.clone() });
        }
        d2_in.entry(g.filtration().saturating_sub(2)).or_default().push(support(&mut col_mut, &dg));
    }
    assert_eq!(col_mut.items.len(), column.len(), "incoming d2 leaves the enumerated column");
    let boundary_supports: Vec<Vec<usize>> = boundaries.iter().map(|b| b.iter_ones().collect()).collect();

    let mut pages: BTreeMap<u64, FiltrationCount> = BTreeMap::new();
    for m in &column {
        let c = pages.entry(m.filtration()).or_default();
        c.filtration = m.filtration();
        c.e1 += 1;
    }
    for m in &reps {
        pages.get_mut(&m.filtration()).expect("rep is in the column").e2 += 1;
    }
    for (f, extra) in &d2_out {
        pages.get_mut(f).unwrap().d2_out = relative_rank(&d1_image, extra, lower_dim);
    }
    for (f, extra) in &d2_in {
        if let Some(c) = pages.get_mut(f) {
            c.d2_in = relative_rank(&boundary_supports, extra, column.len());
        }
    }
    for c in pages.values_mut() {
        c.e3 = c.e2 - c.d2_out - c.d2_in;
    }
    let survivors = pages.values().map(|c| c.e3).sum();
    Ok(WindowReport {
        n: None,
        tridegree: [u64::from(s), u64::from(k), t],
        e1_classes: column,
        supplementary_sources: supplementary.to_vec(),
        differentials: arrows,
        pages: pages.into_values().collect(),
        survivors,
        verdict: if survivors == 0 { "ALL_DIE" } else { "SURVIVORS" }.into(),
        certificates,
        reference: None,
    })
}
