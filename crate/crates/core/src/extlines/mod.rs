//! Low Adams lines of Ext over `P`, presented by generators and relations.
//!
//! Degrees use the doubled grading: `h_i` sits in `(1, 2^(i+1))`. Named
//! generators come in families indexed like the `h_i`, with the internal
//! degree doubling along the index.

pub mod audit;
mod brackets;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::milnor::F2Sum;

pub use brackets::{
    basis_in_degree, indecomposable_generators, massey_bracket, vanishing_bracket_certificate, BracketError,
    BracketValue, Indeterminacy, VanishingCertificate,
};
pub use table::{
    Domain, IndexExpr, NonzeroFamily, RelationEntry, RelationTable, Status, Template, TableError, Vanishing,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed monomial `{0}`")]
    Malformed(String),
    #[error("generator `{0}` has no member at that index")]
    IndexOutOfFamily(String),
}

/// Generator families on lines 1 to 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    H,
    C,
    D,
    E,
    F,
    G,
    P,
    D3,
    PPrime,
    N,
    X,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::H,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
        Family::P,
        Family::D3,
        Family::PPrime,
        Family::N,
        Family::X,
    ];

    /// Adams filtration.
    pub fn line(self) -> u32 {
        match self {
            Family::H => 1,
            Family::C => 3,
            Family::D | Family::E | Family::F | Family::G | Family::P | Family::D3 | Family::PPrime => 4,
            Family::N | Family::X => 5,
        }
    }

    /// Internal degree over the Steenrod algebra of the (possibly
    /// nonexistent) index-0 member; index `j` sits at `base << j`.
    pub fn base_degree(self) -> u64 {
        match self {
            Family::H => 1,
            Family::C => 11,
            Family::D => 18,
            Family::E => 21,
            Family::F => 22,
            Family::G => 12,
            Family::P => 37,
            Family::D3 => 65,
            Family::PPrime => 98,
            Family::N => 36,
            Family::X => 42,
        }
    }

    pub fn min_index(self) -> u32 {
        match self {
            Family::G => 1,
            _ => 0,
        }
    }

    pub fn prefix(self) -> &'static str {
        match self {
            Family::H => "h",
            Family::C => "c",
            Family::D => "d",
            Family::E => "e",
            Family::F => "f",
            Family::G => "g",
            Family::P => "p",
            Family::D3 => "D3_",
            Family::PPrime => "p'",
            Family::N => "n",
            Family::X => "x",
        }
    }

    fn from_prefix(p: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.prefix().trim_end_matches('_') == p)
    }
}

/// One member of a family, e.g. `h3` or `x2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Gen {
    pub family: Family,
    pub index: u32,
}

impl Gen {
    pub fn h(i: u32) -> Gen {
        Gen { family: Family::H, index: i }
    }

    pub fn new(family: Family, index: u32) -> Gen {
        Gen { family, index }
    }

    pub fn s(self) -> u32 {
        self.family.line()
    }

    /// Internal degree in the doubled grading.
    pub fn t(self) -> u64 {
        self.family.base_degree() << (self.index + 1)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.prefix(), self.index)
    }
}

/// Splits `D3_4` / `h12` / `p'0` into prefix and index.
fn split_name(tok: &str) -> Option<(&str, u32)> {
    let tok = tok.trim();
    let digits = tok.len() - tok.chars().rev().take_while(char::is_ascii_digit).count();
    if digits == tok.len() {
        return None;
    }
    let idx = tok[digits..].parse().ok()?;
    Some((tok[..digits].trim_end_matches('_'), idx))
}

impl FromStr for Gen {
    type Err = ParseError;

    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let (prefix, index) = split_name(tok).ok_or_else(|| ParseError::Malformed(tok.to_string()))?;
        let family = Family::from_prefix(prefix).ok_or_else(|| ParseError::UnknownGenerator(tok.to_string()))?;
        if index < family.min_index() {
            return Err(ParseError::IndexOutOfFamily(tok.to_string()));
        }
        Ok(Gen { family, index })
    }
}

/// A product of generators with exponents.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtPMonomial {
    factors: BTreeMap<Gen, u32>,
}

impl ExtPMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Gen, u32)>) -> Self {
        let mut m = Self::one();
        for (g, e) in factors {
            m.multiply_gen(g, e);
        }
        m
    }

    /// `h_{i_1} h_{i_2} ...` with repetition allowed.
    pub fn h_product(indices: &[u32]) -> Self {
        Self::from_factors(indices.iter().map(|&i| (Gen::h(i), 1)))
    }

    pub fn generator(g: Gen) -> Self {
        Self::from_factors([(g, 1)])
    }

    pub fn factors(&self) -> impl Iterator<Item = (Gen, u32)> + '_ {
        self.factors.iter().map(|(&g, &e)| (g, e))
    }

    pub fn exponent(&self, g: Gen) -> u32 {
        self.factors.get(&g).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn s(&self) -> u32 {
        self.factors().map(|(g, e)| g.s() * e).sum()
    }

    pub fn t(&self) -> u64 {
        self.factors().map(|(g, e)| g.t() * u64::from(e)).sum()
    }

    /// True when only `h_i` factors occur.
    pub fn is_h_monomial(&self) -> bool {
        self.factors.keys().all(|g| g.family == Family::H)
    }

    /// `h` indices with multiplicity, ascending.
    pub fn h_indices(&self) -> Vec<u32> {
        self.factors()
            .filter(|(g, _)| g.family == Family::H)
            .flat_map(|(g, e)| std::iter::repeat_n(g.index, e as usize))
            .collect()
    }

    pub fn multiply_gen(&mut self, g: Gen, e: u32) {
        if e > 0 {
            *self.factors.entry(g).or_insert(0) += e;
        }
    }

    pub fn mul(&self, other: &ExtPMonomial) -> ExtPMonomial {
        let mut out = self.clone();
        for (g, e) in other.factors() {
            out.multiply_gen(g, e);
        }
        out
    }

    pub fn divides(&self, other: &ExtPMonomial) -> bool {
        self.factors().all(|(g, e)| other.exponent(g) >= e)
    }

    /// `other / self`, when `self` divides `other`.
    pub fn quotient_of(&self, other: &ExtPMonomial) -> Option<ExtPMonomial> {
        if !self.divides(other) {
            return None;
        }
        let mut out = other.clone();
        for (g, e) in self.factors() {
            let slot = out.factors.get_mut(&g).expect("divides");
            *slot -= e;
            if *slot == 0 {
                out.factors.remove(&g);
            }
        }
        Some(out)
    }
}

impl fmt::Display for ExtPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors()
            .map(|(g, e)| if e == 1 { g.to_string() } else { format!("{g}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for ExtPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ExtPMonomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for ExtPMonomial {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let text = text.trim();
        if text == "1" {
            return Ok(Self::one());
        }
        let mut m = Self::one();
        for factor in text.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n, e.trim().parse().map_err(|_| ParseError::Malformed(factor.to_string()))?),
                None => (factor, 1),
            };
            if exp == 0 {
                return Err(ParseError::Malformed(factor.to_string()));
            }
            m.multiply_gen(name.parse()?, exp);
        }
        Ok(m)
    }
}

/// A GF(2) sum of monomials; callers keep the terms in one bidegree.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ExtPElement {
    terms: F2Sum<ExtPMonomial>,
}

impl ExtPElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: ExtPMonomial) -> Self {
        std::iter::once(m).collect()
    }

    pub fn h_product(indices: &[u32]) -> Self {
        Self::monomial(ExtPMonomial::h_product(indices))
    }

    pub fn is_empty_sum(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = &ExtPMonomial> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn toggle(&mut self, m: ExtPMonomial) {
        self.terms.toggle(m);
    }

    pub fn add(&self, other: &ExtPElement) -> ExtPElement {
        let mut out = self.clone();
        for m in other.terms() {
            out.toggle(m.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &ExtPMonomial) -> ExtPElement {
        self.terms().map(|x| x.mul(m)).collect()
    }

    pub fn mul(&self, other: &ExtPElement) -> ExtPElement {
        let mut out = ExtPElement::zero();
        for m in other.terms() {
            out = out.add(&self.mul_monomial(m));
        }
        out
    }

    /// `(s, t)` of the first term; `None` for the empty sum.
    pub fn degree(&self) -> Option<(u32, u64)> {
        self.terms().next().map(|m| (m.s(), m.t()))
    }
}

impl FromIterator<ExtPMonomial> for ExtPElement {
    fn from_iter<I: IntoIterator<Item = ExtPMonomial>>(iter: I) -> Self {
        ExtPElement {
            terms: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for ExtPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty_sum() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExtPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for ExtPElement {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.trim() == "0" {
            return Ok(Self::zero());
        }
        let mut out = Self::zero();
        for part in text.split('+') {
            out.toggle(part.parse()?);
        }
        Ok(out)
    }
}

/// Normal form under the standard relation table.
pub fn normal_form(e: &ExtPElement) -> ExtPElement {
    RelationTable::standard().normal_form(e)
}

/// Vanishing verdict under the standard relation table.
pub fn is_zero(e: &ExtPElement) -> Vanishing {
    RelationTable::standard().is_zero(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let m: ExtPMonomial = "h3^2*h5*c0".parse().unwrap();
        assert_eq!(m.to_string(), "h3^2*h5*c0");
        assert_eq!(m.s(), 6);
        assert_eq!(m.t(), 16 + 16 + 64 + 22);
        let g: Gen = "D3_2".parse().unwrap();
        assert_eq!(g.to_string(), "D3_2");
        assert_eq!("p'1".parse::<Gen>().unwrap().family, Family::PPrime);
        assert!(matches!("y3".parse::<Gen>(), Err(ParseError::UnknownGenerator(_))));
        assert!(matches!("g0".parse::<Gen>(), Err(ParseError::IndexOutOfFamily(_))));
    }

    #[test]
    fn doubled_degrees() {
        assert_eq!(Gen::h(3).t(), 16);
        assert_eq!(Gen::new(Family::C, 2).t(), 8 * 11);
        assert_eq!(Gen::new(Family::E, 3).t(), 16 * 21);
        assert_eq!(Gen::new(Family::X, 2).t(), 16 * 21);
        assert_eq!(Gen::new(Family::G, 2).t(), 32 * 3);
    }

    #[test]
    fn division() {
        let a: ExtPMonomial = "h0*h2^2*h5".parse().unwrap();
        let b: ExtPMonomial = "h2^2".parse().unwrap();
        assert_eq!(b.quotient_of(&a).unwrap().to_string(), "h0*h5");
        assert!(a.quotient_of(&b).is_none());
    }
}
