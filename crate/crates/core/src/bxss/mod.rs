//! The spectral sequence on `Ext_P ⊗ F[q0, q1, ...]` obtained by giving
//! `q_i` filtration `i`.
//!
//! `d_1` and `d_2` come from the bracket formula
//! `d_k(q_{n+k} a) = q_n <h_n, ..., h_{n+k-1}, a>` extended by the Leibniz
//! rule, with `d_2(q_j^2) = q_{j-1}^2 h_j`.

mod power_sums;
pub mod reference;
pub mod survival;
pub mod window;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::extlines::{
    basis_in_degree, massey_bracket, BracketError, ExtPElement, ExtPMonomial, Family, Gen, ParseError, RelationTable,
    Vanishing,
};
use crate::milnor::{F2Sum, QMonomial};

pub use power_sums::power_sum_solutions;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BxssError {
    #[error("rule gap at {class}: {reason}")]
    RuleGap { class: String, reason: String },
    #[error("nonvanishing of {monomial} is unknown: {reason}")]
    Unknown { monomial: String, reason: String },
    #[error("{class} is not a d_1-cycle")]
    NotACycle { class: String },
}

/// `q^I ⊗ a` with `a` a monomial of `Ext_P`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct E1Monomial {
    pub q: QMonomial,
    pub coeff: ExtPMonomial,
}

impl E1Monomial {
    pub fn new(q: QMonomial, coeff: ExtPMonomial) -> Self {
        E1Monomial { q, coeff }
    }

    pub fn s(&self) -> u32 {
        self.coeff.s()
    }

    pub fn k(&self) -> u64 {
        self.q.k()
    }

    pub fn t(&self) -> u64 {
        self.coeff.t() + self.q.t()
    }

    pub fn filtration(&self) -> u64 {
        self.q.filtration()
    }

    pub fn quadridegree(&self) -> (u32, u64, u64, u64) {
        (self.s(), self.k(), self.t(), self.filtration())
    }

    pub fn mul(&self, other: &E1Monomial) -> E1Monomial {
        E1Monomial::new(self.q.mul(&other.q), self.coeff.mul(&other.coeff))
    }
}

impl fmt::Display for E1Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.q.is_one(), self.coeff.is_one()) {
            (true, _) => write!(f, "{}", self.coeff),
            (false, true) => write!(f, "{}", self.q),
            (false, false) => write!(f, "{}*{}", self.q, self.coeff),
        }
    }
}

impl fmt::Debug for E1Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for E1Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for E1Monomial {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut q_idx = Vec::new();
        let mut rest = Vec::new();
        for factor in text.trim().split('*') {
            let factor = factor.trim();
            let is_q = factor.starts_with('q') && factor[1..].chars().next().is_some_and(|c| c.is_ascii_digit());
            if !is_q {
                rest.push(factor);
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<usize>().map_err(|_| ParseError::Malformed(factor.into()))?),
                None => (factor, 1),
            };
            let i: usize = name[1..].parse().map_err(|_| ParseError::Malformed(factor.into()))?;
            q_idx.extend(std::iter::repeat_n(i, exp));
        }
        let coeff = if rest.is_empty() || rest == ["1"] {
            ExtPMonomial::one()
        } else {
            rest.join("*").parse()?
        };
        Ok(E1Monomial::new(QMonomial::from_indices(&q_idx), coeff))
    }
}

/// A GF(2) sum of E1 monomials.
pub type E1Element = F2Sum<E1Monomial>;

pub fn element_to_string(e: &E1Element) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
}

fn unknown(m: &ExtPMonomial, why: String) -> BxssError {
    BxssError::Unknown {
        monomial: m.to_string(),
        reason: why,
    }
}

/// Nonzero coefficient monomials on line `s` in doubled degree `t`.
pub fn coefficients(s: u32, t: u64) -> Result<Vec<ExtPMonomial>, BxssError> {
    if s <= 3 {
        return Ok(if s == 0 {
            if t == 0 { vec![ExtPMonomial::one()] } else { Vec::new() }
        } else {
            basis_in_degree(s, t)
        });
    }
    let table = RelationTable::standard();
    let named: Vec<Gen> = Family::ALL
        .into_iter()
        .filter(|f| *f != Family::H && f.line() <= s)
        .flat_map(|f| (f.min_index()..40).map(move |j| Gen::new(f, j)))
        .filter(|g| g.t() <= t)
        .collect();
    let mut candidates = BTreeSet::new();
    let mut stack = Vec::new();
    named_products(&named, 0, s, t, &mut stack, &mut |prefix: &[Gen], s_left, t_left| {
        for hs in power_sum_solutions(t_left, s_left as usize) {
            let mut m = ExtPMonomial::h_product(&hs);
            for &g in prefix {
                m.multiply_gen(g, 1);
            }
            candidates.insert(m);
        }
    });
    let mut out = BTreeSet::new();
    for m in candidates {
        let Some(r) = table.reduce_monomial(&m, &mut Vec::new()) else { continue };
        match table.is_zero(&ExtPElement::monomial(r.clone())) {
            Vanishing::Zero(_) => {}
            Vanishing::Nonzero(_) => {
                out.insert(r);
            }
            Vanishing::Unknown(why) => return Err(unknown(&r, why)),
        }
    }
    Ok(out.into_iter().collect())
}

// Multisets of named generators (nondecreasing positions in `named`) with
// line and degree budgets; `emit` fills the rest with h's.
fn named_products(
    named: &[Gen],
    from: usize,
    s_left: u32,
    t_left: u64,
    stack: &mut Vec<Gen>,
    emit: &mut dyn FnMut(&[Gen], u32, u64),
) {
    emit(stack, s_left, t_left);
    for i in from..named.len() {
        let g = named[i];
        if g.s() <= s_left && g.t() <= t_left {
            stack.push(g);
            named_products(named, i, s_left - g.s(), t_left - g.t(), stack, emit);
            stack.pop();
        }
    }
}

/// Multisets of `k` q-indices with `Σ 2^(i+1) <= budget`.
fn q_multisets(k: usize, budget: u64) -> Vec<Vec<usize>> {
    fn go(k: usize, from: usize, budget: u64, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        let mut i = from;
        while i < 62 && (2u64 << i).saturating_mul(k as u64) <= budget {
            cur.push(i);
            go(k - 1, i, budget - (2u64 << i), cur, out);
            cur.pop();
            i += 1;
        }
    }
    let mut out = Vec::new();
    go(k, 0, budget, &mut Vec::new(), &mut out);
    out
}

/// The E1 basis in tridegree `(s, k, t)`, all filtrations, sorted by
/// filtration and then by name.
pub fn enumerate_e1(s: u32, k: u32, t: u64) -> Result<Vec<E1Monomial>, BxssError> {
    let total = t + u64::from(k);
    if total % 2 == 1 {
        return Ok(Vec::new());
    }
    let mut memo: HashMap<u64, Vec<ExtPMonomial>> = HashMap::new();
    let mut out = Vec::new();
    for qs in q_multisets(k as usize, total) {
        let used: u64 = qs.iter().map(|&i| 2u64 << i).sum();
        let rest = total - used;
        let coeffs = match memo.get(&rest) {
            Some(c) => c.clone(),
            None => {
                let c = coefficients(s, rest)?;
                memo.insert(rest, c.clone());
                c
            }
        };
        let q = QMonomial::from_indices(&qs);
        for c in coeffs {
            out.push(E1Monomial::new(q.clone(), c));
        }
    }
    out.sort_by_key(|a| (a.filtration(), a.to_string()));
    Ok(out)
}

fn check_emission(source: &E1Monomial, target: &E1Monomial, page: u64) {
    assert_eq!(target.s(), source.s() + 1, "{source} -> {target}: s must rise by one");
    assert_eq!(target.k(), source.k(), "{source} -> {target}: k must be kept");
    assert_eq!(target.t(), source.t(), "{source} -> {target}: t must be kept");
    assert_eq!(
        target.filtration() + page,
        source.filtration(),
        "{source} -> {target}: filtration must drop by {page}"
    );
}

/// The Leibniz summands of `d_1` on one monomial, before cancellation;
/// `None` marks a summand killed by a relation.
pub fn d1_summands(x: &E1Monomial) -> Vec<(usize, Option<E1Monomial>)> {
    let table = RelationTable::standard();
    let mut out = Vec::new();
    for (j, &e) in x.q.exponents().iter().enumerate() {
        if j == 0 || e % 2 == 0 {
            continue;
        }
        let q = x.q.shifted(j, -1).and_then(|q| q.shifted(j - 1, 1)).expect("exponent is positive");
        let coeff = x.coeff.mul(&ExtPMonomial::h_product(&[j as u32 - 1]));
        let term = table
            .reduce_monomial(&coeff, &mut Vec::new())
            .map(|c| E1Monomial::new(q, c));
        if let Some(t) = &term {
            check_emission(x, t, 1);
        }
        out.push((j, term));
    }
    out
}

pub fn d1_monomial(x: &E1Monomial) -> E1Element {
    let mut out = E1Element::zero();
    for (_, term) in d1_summands(x) {
        if let Some(t) = term {
            out.toggle(t);
        }
    }
    out
}

pub fn d1(x: &E1Element) -> E1Element {
    let mut out = E1Element::zero();
    for m in x.iter() {
        out.add_sum(d1_monomial(m));
    }
    out
}

/// `d_2` on a monomial whose `d_1` summands all vanish.
pub fn d2_monomial(x: &E1Monomial) -> Result<E1Element, BxssError> {
    let source = x.to_string();
    if d1_summands(x).iter().any(|(_, t)| t.is_some()) {
        let reason = if d1_monomial(x).is_zero() {
            "d_1 vanishes only after cancellation between Leibniz summands".to_string()
        } else {
            return Err(BxssError::NotACycle { class: source });
        };
        return Err(BxssError::RuleGap { class: source, reason });
    }
    let table = RelationTable::standard();
    let a = ExtPElement::monomial(x.coeff.clone());
    let mut out = E1Element::zero();
    for (j, &e) in x.q.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if e >= 4 {
            return Err(BxssError::RuleGap {
                class: source,
                reason: format!("q{j}^{e}: no rule for exponents above 3"),
            });
        }
        if e % 2 == 1 && j >= 2 {
            // q_j a -> q_{j-2} <h_{j-2}, h_{j-1}, a>
            let rest = x.q.shifted(j, -1).and_then(|q| q.shifted(j - 2, 1)).expect("positive");
            let bracket = massey_bracket(&[j as u32 - 2, j as u32 - 1], &a).map_err(|err| match err {
                BracketError::Unknown(why) => unknown(&x.coeff, why),
                other => BxssError::RuleGap {
                    class: source.clone(),
                    reason: format!("bracket for q{j}: {other}"),
                },
            })?;
            for c in bracket.value.terms() {
                out.toggle(E1Monomial::new(rest.clone(), c.clone()));
            }
        }
        if e >= 2 && j >= 1 {
            // q_j^2 -> q_{j-1}^2 h_j
            let rest = x.q.shifted(j, -2).and_then(|q| q.shifted(j - 1, 2)).expect("positive");
            let coeff = x.coeff.mul(&ExtPMonomial::h_product(&[j as u32]));
            if let Some(c) = table.reduce_monomial(&coeff, &mut Vec::new()) {
                out.toggle(E1Monomial::new(rest, c));
            }
        }
    }
    for t in out.iter() {
        check_emission(x, t, 2);
    }
    Ok(out)
}

pub fn d2(x: &E1Element) -> Result<E1Element, BxssError> {
    let mut out = E1Element::zero();
    for m in x.iter() {
        out.add_sum(d2_monomial(m)?);
    }
    Ok(out)
}

/// Reduces the coefficient of a product to normal form; `None` if it
/// vanishes.
pub fn normalize(x: &E1Monomial) -> Option<E1Monomial> {
    RelationTable::standard()
        .reduce_monomial(&x.coeff, &mut Vec::new())
        .map(|c| E1Monomial::new(x.q.clone(), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> E1Monomial {
        s.parse().unwrap()
    }

    fn sum(parts: &[&str]) -> E1Element {
        parts.iter().map(|p| m(p)).collect()
    }

    #[test]
    fn parse_round_trip() {
        let x = m("q0^2*q5*h3*h7");
        assert_eq!(x.to_string(), "q0^2*q5*h3*h7");
        assert_eq!(x.k(), 3);
        assert_eq!(x.filtration(), 5);
        assert_eq!(m("q1").to_string(), "q1");
        assert_eq!(m("h0").to_string(), "h0");
    }

    #[test]
    fn d1_examples() {
        assert_eq!(d1_monomial(&m("q1")), sum(&["q0*h0"]));
        assert_eq!(
            d1_monomial(&m("q0*q1*q3*q5*q7")),
            sum(&["q0^2*q3*q5*q7*h0", "q0*q1*q2*q5*q7*h2", "q0*q1*q3*q4*q7*h4", "q0*q1*q3*q5*q6*h6"])
        );
        for n in 3..8 {
            let x = m(&format!("q{}^2*q{}*h1*h{}", n - 1, n + 4, n + 2));
            assert!(d1_monomial(&x).is_zero());
        }
    }

    #[test]
    fn d2_examples() {
        for n in 3..8 {
            let x = m(&format!("q0^2*q{}*h{}*h{}", n + 2, n, n + 4));
            assert_eq!(d2_monomial(&x).unwrap(), sum(&[&format!("q0^2*q{}*h{}^2*h{}", n, n + 1, n + 4)]));
        }
        for n in 4..8 {
            let x = m(&format!("q{}*h0*h{}^2*h{}", n + 4, n - 1, n + 2));
            assert_eq!(d2_monomial(&x).unwrap(), sum(&[&format!("q{}*h0*h{}^2*h{}^2", n + 2, n - 1, n + 3)]));
        }
        assert_eq!(d2_monomial(&m("q2^2*q7*h1*h5")).unwrap(), sum(&["q2^2*q5*h1*h6^2"]));
        assert!(matches!(d2_monomial(&m("q1")), Err(BxssError::NotACycle { .. })));
        assert!(matches!(d2_monomial(&m("q3^4*h0")), Err(BxssError::RuleGap { .. })));
    }

    #[test]
    fn parity_and_small_enumeration() {
        assert!(enumerate_e1(2, 3, 338).unwrap().is_empty());
        assert_eq!(enumerate_e1(0, 1, 3).unwrap(), vec![m("q1")]);
        assert_eq!(enumerate_e1(1, 1, 3).unwrap(), vec![m("q0*h0")]);
    }
}
