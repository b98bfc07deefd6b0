use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{ExtPElement, ExtPMonomial, Family, Gen, RelationTable, Vanishing};
use crate::bxss::power_sum_solutions;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BracketError {
    #[error("bracket undefined: {0} is nonzero")]
    Undefined(String),
    #[error("prefix must be consecutive h indices")]
    NotConsecutive,
    #[error("empty prefix")]
    EmptyPrefix,
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("vanishing unknown: {0}")]
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Indeterminacy {
    Zero(String),
    Uncertified(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BracketValue {
    pub value: ExtPElement,
    pub indeterminacy: Indeterminacy,
}

impl Serialize for ExtPElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Nonzero monomials spanning `Ext_P^{s,t}` for `s <= 3`, in normal form.
///
/// # Panics
/// If `s > 3`.
pub fn basis_in_degree(s: u32, t: u64) -> Vec<ExtPMonomial> {
    assert!(s <= 3, "lines above 3 are not presented by monomials");
    let table = RelationTable::standard();
    let mut out = BTreeSet::new();
    for indices in power_sum_solutions(t, s as usize) {
        let m = ExtPMonomial::h_product(&indices);
        if let Some(r) = table.reduce_monomial(&m, &mut Vec::new()) {
            out.insert(r);
        }
    }
    if s == 3 {
        out.extend(indecomposable_generators(3, t).into_iter().map(ExtPMonomial::generator));
    }
    out.into_iter().collect()
}

/// Named indecomposables at `(s, t)`; `h_i` count as line 1.
pub fn indecomposable_generators(s: u32, t: u64) -> Vec<Gen> {
    let mut out = Vec::new();
    for family in Family::ALL {
        if family.line() != s {
            continue;
        }
        let base = family.base_degree();
        if t == 0 || !t.is_multiple_of(base) {
            continue;
        }
        let ratio = t / base;
        if ratio.is_power_of_two() && ratio >= 2 {
            let index = ratio.trailing_zeros() - 1;
            if index >= family.min_index() {
                out.push(Gen::new(family, index));
            }
        }
    }
    out
}

fn h(i: u32) -> ExtPMonomial {
    ExtPMonomial::h_product(&[i])
}

/// `⟨h_m, ..., h_{m+k-1}, a⟩` for the shapes with a closed form: the product
/// when `k = 1`, and `⟨h_m, h_{m+1}, h_m y⟩ = y h_{m+1}^2` when `k = 2`.
pub fn massey_bracket(prefix: &[u32], a: &ExtPElement) -> Result<BracketValue, BracketError> {
    let table = RelationTable::standard();
    let (&m, rest) = prefix.split_first().ok_or(BracketError::EmptyPrefix)?;
    if rest.iter().enumerate().any(|(i, &x)| x != m + 1 + i as u32) {
        return Err(BracketError::NotConsecutive);
    }
    if prefix.len() == 1 {
        return Ok(BracketValue {
            value: table.normal_form(&a.mul_monomial(&h(m))),
            indeterminacy: Indeterminacy::Zero("a product has no indeterminacy".into()),
        });
    }
    let last = *prefix.last().unwrap();
    let product = a.mul_monomial(&h(last));
    match table.is_zero(&product) {
        Vanishing::Zero(_) => {}
        Vanishing::Nonzero(_) => return Err(BracketError::Undefined(format!("h{last}*({a})"))),
        Vanishing::Unknown(why) => return Err(BracketError::Unknown(why)),
    }
    if prefix.len() > 2 {
        return Err(BracketError::Undetermined(format!("no rule for brackets of length {}", prefix.len() + 1)));
    }
    let a = table.normal_form(a);
    let mut value = ExtPElement::zero();
    for term in a.terms() {
        let y = h(m)
            .quotient_of(term)
            .ok_or_else(|| BracketError::Undetermined(format!("{term} is not divisible by h{m}")))?;
        value.toggle(y.mul(&h(m + 1)).mul(&h(m + 1)));
    }
    let value = table.normal_form(&value);
    let indeterminacy = match a.degree() {
        None => Indeterminacy::Zero("zero bracket entry".into()),
        Some((sa, ta)) => indeterminacy_of(m, sa, ta),
    };
    Ok(BracketValue { value, indeterminacy })
}

// h_m Ext^{sa+1, t(h_{m+1}) + ta} + a Ext^{1, t(h_m) + t(h_{m+1})}; the
// second group vanishes since its degree is not a power of two.
fn indeterminacy_of(m: u32, sa: u32, ta: u64) -> Indeterminacy {
    let s = sa + 1;
    let t = Gen::h(m + 1).t() + ta;
    if s > 3 {
        return Indeterminacy::Uncertified(format!("Ext^({s},{t}) lies above the presented lines"));
    }
    let table = RelationTable::standard();
    let basis = basis_in_degree(s, t);
    let survivors: Vec<String> = basis
        .iter()
        .filter(|b| table.reduce_monomial(&b.mul(&h(m)), &mut Vec::new()).is_some())
        .map(ToString::to_string)
        .collect();
    if survivors.is_empty() {
        Indeterminacy::Zero(format!("h{m} annihilates Ext^({s},{t}) (dimension {})", basis.len()))
    } else {
        Indeterminacy::Uncertified(format!("h{m} times {} is nonzero", survivors.join(", ")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VanishingCertificate {
    pub bracket: String,
    pub s: u32,
    pub t: u64,
    pub reason: String,
}

/// Proof that `⟨h_{n-k}, ..., h_{n-1}, a⟩` vanishes because its group is
/// zero; `Err` when degree reasons do not suffice.
pub fn vanishing_bracket_certificate(n: u32, k: u32, a: &ExtPElement) -> Result<VanishingCertificate, String> {
    if k == 0 || k > n {
        return Err(format!("need 1 <= k <= n, got n = {n}, k = {k}"));
    }
    let (sa, ta) = a.degree().ok_or("zero entry")?;
    let s = sa + 1;
    let t = (n - k..n).map(|i| Gen::h(i).t()).sum::<u64>() + ta;
    let entries: Vec<String> = (n - k..n).map(|i| format!("h{i}")).chain([a.to_string()]).collect();
    let bracket = format!("<{}>", entries.join(", "));
    if s > 3 {
        return Err(format!("{bracket}: Ext^({s},{t}) lies above the presented lines"));
    }
    let basis = basis_in_degree(s, t);
    if basis.is_empty() {
        Ok(VanishingCertificate {
            bracket,
            s,
            t,
            reason: format!("Ext_P^({s},{t}) = 0 by degree"),
        })
    } else {
        let names: Vec<String> = basis.iter().map(ToString::to_string).collect();
        Err(format!("{bracket}: Ext_P^({s},{t}) contains {}", names.join(", ")))
    }
}
