//! The cobar complex of `P` with coefficients in `F[q0, q1, ...]`.
//!
//! A term is `[a1 | ... | as] ⊗ m` with each `ai` a positive-degree
//! P-monomial and `m` a q-monomial. The differential applies the reduced
//! coproduct to every bar factor and appends the reduced coaction of `m` as a
//! new last factor.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use thiserror::Error;

use super::{basis_monomials, coaction_q, reduced_coproduct, AlgebraTag, F2Sum, MilnorMonomial, QMonomial};
use crate::f2linalg::{F2Matrix, F2Vector};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CobarTerm {
    pub factors: Vec<MilnorMonomial>,
    pub coeff: QMonomial,
}

impl CobarTerm {
    pub fn new(factors: Vec<MilnorMonomial>, coeff: QMonomial) -> Self {
        assert!(
            factors.iter().all(|f| f.tag() == AlgebraTag::P && !f.is_one()),
            "cobar factors are positive-degree P-monomials"
        );
        CobarTerm { factors, coeff }
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(MilnorMonomial::degree).sum::<u64>() + self.coeff.t()
    }
}

impl fmt::Debug for CobarTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bars: Vec<String> = self.factors.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", bars.join("|"))?;
        if !self.coeff.is_one() {
            write!(f, "{}", self.coeff)?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CobarElement {
    length: usize,
    terms: F2Sum<CobarTerm>,
}

impl CobarElement {
    pub fn zero(length: usize) -> Self {
        CobarElement {
            length,
            terms: F2Sum::zero(),
        }
    }

    pub fn from_terms(length: usize, terms: impl IntoIterator<Item = CobarTerm>) -> Self {
        let terms: F2Sum<CobarTerm> = terms.into_iter().collect();
        assert!(terms.iter().all(|t| t.factors.len() == length));
        CobarElement { length, terms }
    }

    /// `[ξ1^e1 | ...]` from ambient ξ-exponent lists, no q-coefficient.
    pub fn bar(factors: &[&[u32]]) -> Self {
        let factors = factors
            .iter()
            .map(|ambient| p_from_ambient(ambient))
            .collect::<Vec<_>>();
        Self::from_terms(factors.len(), [CobarTerm::new(factors, QMonomial::one())])
    }

    /// The length-0 element `1 ⊗ m`.
    pub fn coefficient(m: QMonomial) -> Self {
        Self::from_terms(0, [CobarTerm::new(Vec::new(), m)])
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn terms(&self) -> impl Iterator<Item = &CobarTerm> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Internal degree, if homogeneous.
    pub fn degree(&self) -> Option<u64> {
        let mut it = self.terms.iter().map(CobarTerm::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &CobarElement) -> CobarElement {
        assert_eq!(self.length, other.length);
        let mut terms = self.terms.clone();
        terms.add_sum(other.terms.clone());
        CobarElement {
            length: self.length,
            terms,
        }
    }

    /// `self ⊗ ξj^(2^e)`: appends one bar factor given in ambient ξ-powers.
    pub fn append_xi_power(&self, j: usize, ambient_exp: u32) -> CobarElement {
        let mut ambient = vec![0u32; j];
        ambient[j - 1] = ambient_exp;
        let factor = p_from_ambient(&ambient);
        CobarElement {
            length: self.length + 1,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut fs = t.factors.clone();
                    fs.push(factor.clone());
                    CobarTerm::new(fs, t.coeff.clone())
                })
                .collect(),
        }
    }

    /// Coordinates in [`cobar_basis`] for coefficient-free homogeneous elements.
    pub fn to_vector(&self, degree: u64) -> F2Vector {
        let basis = cobar_basis(self.length, degree);
        let mut v = F2Vector::zeros(basis.len());
        for t in self.terms.iter() {
            assert!(t.coeff.is_one(), "to_vector expects coefficient-free elements");
            let i = basis.index[&t.factors];
            v.flip(i);
        }
        v
    }

    pub fn from_vector(length: usize, degree: u64, v: &F2Vector) -> CobarElement {
        let basis = cobar_basis(length, degree);
        CobarElement::from_terms(
            length,
            v.iter_ones()
                .map(|i| CobarTerm::new(basis.elements[i].clone(), QMonomial::one())),
        )
    }
}

impl fmt::Debug for CobarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.terms)
    }
}

/// Converts ambient ξ-exponents (all even) to a P-monomial.
fn p_from_ambient(ambient: &[u32]) -> MilnorMonomial {
    assert!(ambient.iter().all(|e| e % 2 == 0), "P-monomials have even ξ-exponents");
    MilnorMonomial::new(AlgebraTag::P, ambient.iter().map(|e| e / 2).collect())
}

pub fn cobar_differential(c: &CobarElement) -> CobarElement {
    let mut out = F2Sum::zero();
    for term in c.terms.iter() {
        for (j, factor) in term.factors.iter().enumerate() {
            for (l, r) in reduced_coproduct(factor).into_terms() {
                let mut fs = Vec::with_capacity(term.factors.len() + 1);
                fs.extend_from_slice(&term.factors[..j]);
                fs.push(l);
                fs.push(r);
                fs.extend_from_slice(&term.factors[j + 1..]);
                out.toggle(CobarTerm::new(fs, term.coeff.clone()));
            }
        }
        for (l, q) in coaction_q(&term.coeff).into_terms() {
            if l.is_one() {
                continue;
            }
            let mut fs = term.factors.clone();
            fs.push(l);
            out.toggle(CobarTerm::new(fs, q));
        }
    }
    CobarElement {
        length: c.length + 1,
        terms: out,
    }
}

/// Coefficient-free cobar basis in one bidegree.
pub struct CobarBasis {
    pub elements: Vec<Vec<MilnorMonomial>>,
    index: HashMap<Vec<MilnorMonomial>, usize>,
}

impl CobarBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

type CobarCache = RwLock<HashMap<(usize, u64), Arc<CobarBasis>>>;

fn cobar_cache() -> &'static CobarCache {
    static CACHE: OnceLock<CobarCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// All `[a1|...|as]` of total degree `t`, memoized per `(s, t)`.
pub fn cobar_basis(length: usize, degree: u64) -> Arc<CobarBasis> {
    if let Some(b) = cobar_cache().read().unwrap().get(&(length, degree)) {
        return b.clone();
    }
    let mut elements = Vec::new();
    let mut prefix = Vec::new();
    fill_bars(length, degree, &mut prefix, &mut elements);
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let b = Arc::new(CobarBasis { elements, index });
    cobar_cache()
        .write()
        .unwrap()
        .entry((length, degree))
        .or_insert(b)
        .clone()
}

fn fill_bars(length: usize, remaining: u64, prefix: &mut Vec<MilnorMonomial>, out: &mut Vec<Vec<MilnorMonomial>>) {
    if length == 0 {
        if remaining == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    // each remaining factor needs degree >= 2
    let mut d = 2;
    while d + 2 * (length as u64 - 1) <= remaining {
        for m in basis_monomials(AlgebraTag::P, d) {
            prefix.push(m);
            fill_bars(length - 1, remaining - d, prefix, out);
            prefix.pop();
        }
        d += 2;
    }
}

/// Matrix of `d : C^s_t -> C^(s+1)_t` on coefficient-free cochains, with one
/// column per source basis element.
pub fn differential_matrix(length: usize, degree: u64) -> F2Matrix {
    let source = cobar_basis(length, degree);
    let target = cobar_basis(length + 1, degree);
    let mut m = F2Matrix::zeros(target.len(), source.len());
    for (j, bars) in source.elements.iter().enumerate() {
        let e = CobarElement::from_terms(length, [CobarTerm::new(bars.clone(), QMonomial::one())]);
        for t in cobar_differential(&e).terms() {
            let i = target.index[&t.factors];
            m.set(i, j, !m.get(i, j));
        }
    }
    m
}

/// Solves `d(r) = target` for a coefficient-free, homogeneous `target`.
pub fn solve_coboundary(target: &CobarElement) -> Option<CobarElement> {
    assert!(target.length >= 1);
    let Some(degree) = target.degree() else {
        return if target.is_zero() { Some(CobarElement::zero(target.length - 1)) } else { None };
    };
    let m = differential_matrix(target.length - 1, degree);
    let rhs = target.to_vector(degree);
    m.solve(&rhs)
        .expect("dimensions agree")
        .map(|x| CobarElement::from_vector(target.length - 1, degree, &x))
}

/// True when the coefficient-free cocycle `c` is a coboundary.
pub fn is_coboundary(c: &CobarElement) -> bool {
    solve_coboundary(c).is_some()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MasseyError {
    #[error("input class is not a cocycle")]
    NotACocycle,
    #[error("expected {expected} witnesses, got {found}")]
    WitnessCount { expected: usize, found: usize },
    #[error("witness r_{index} has length {found}, expected {expected}")]
    WitnessLength { index: usize, expected: usize, found: usize },
    #[error("ladder equation for r_{index} fails")]
    LadderFailure { index: usize },
    #[error("no witness r_{index} exists: the bracket is not defined by these choices")]
    NoWitness { index: usize },
}

/// Right-hand side of the `i`-th ladder equation:
/// `a ⊗ ξi^(2^(n+k+1-i)) + Σ_{j<i} rj ⊗ ξ_{i-j}^(2^(n+k+1-i))`.
fn ladder_rhs(a: &CobarElement, n: u32, k: u32, i: u32, witnesses: &[CobarElement]) -> CobarElement {
    let e = 1u32 << (n + k + 1 - i);
    let mut rhs = a.append_xi_power(i as usize, e);
    for (j, r) in witnesses.iter().enumerate().take(i as usize - 1) {
        let j = j as u32 + 1;
        rhs = rhs.add(&r.append_xi_power((i - j) as usize, e));
    }
    rhs
}

/// Checks the Massey ladder `d(r_i) = ...` for `i = 1..k-1` and returns the
/// cocycle `a ⊗ ξk^(2^(n+1)) + Σ ri ⊗ ξ_{k-i}^(2^(n+1))` representing
/// `<h_n, ..., h_{n+k-1}, a>`.
pub fn verify_massey_witness(
    a: &CobarElement,
    n: u32,
    k: u32,
    witnesses: &[CobarElement],
) -> Result<CobarElement, MasseyError> {
    if !cobar_differential(a).is_zero() {
        return Err(MasseyError::NotACocycle);
    }
    let expected = k.saturating_sub(1) as usize;
    if witnesses.len() != expected {
        return Err(MasseyError::WitnessCount {
            expected,
            found: witnesses.len(),
        });
    }
    for (idx, r) in witnesses.iter().enumerate() {
        let i = idx as u32 + 1;
        if r.length() != a.length() {
            return Err(MasseyError::WitnessLength {
                index: i as usize,
                expected: a.length(),
                found: r.length(),
            });
        }
        if cobar_differential(r) != ladder_rhs(a, n, k, i, witnesses) {
            return Err(MasseyError::LadderFailure { index: i as usize });
        }
    }
    Ok(massey_representative(a, n, k, witnesses))
}

fn massey_representative(a: &CobarElement, n: u32, k: u32, witnesses: &[CobarElement]) -> CobarElement {
    let e = 1u32 << (n + 1);
    let mut rep = a.append_xi_power(k as usize, e);
    for (j, r) in witnesses.iter().enumerate() {
        rep = rep.add(&r.append_xi_power(k as usize - j - 1, e));
    }
    rep
}

/// Solves the ladder one equation at a time. For `k >= 3` the greedy choice
/// of earlier witnesses may block later ones, reported as `NoWitness`.
pub fn find_massey_witnesses(a: &CobarElement, n: u32, k: u32) -> Result<Vec<CobarElement>, MasseyError> {
    let mut witnesses = Vec::new();
    for i in 1..k {
        let rhs = ladder_rhs(a, n, k, i, &witnesses);
        match solve_coboundary(&rhs) {
            Some(r) => witnesses.push(r),
            None => return Err(MasseyError::NoWitness { index: i as usize }),
        }
    }
    Ok(witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h0_is_a_cocycle() {
        assert!(cobar_differential(&CobarElement::bar(&[&[2]])).is_zero());
    }

    #[test]
    fn d_of_xi1_sixth() {
        let want = CobarElement::bar(&[&[2], &[4]]).add(&CobarElement::bar(&[&[4], &[2]]));
        assert_eq!(cobar_differential(&CobarElement::bar(&[&[6]])), want);
    }

    #[test]
    fn d_of_q2_matches_coaction() {
        let d = cobar_differential(&CobarElement::coefficient(QMonomial::generator(2)));
        let want: Vec<CobarTerm> = coaction_q(&QMonomial::generator(2))
            .into_terms()
            .filter(|(l, _)| !l.is_one())
            .map(|(l, q)| CobarTerm::new(vec![l], q))
            .collect();
        assert_eq!(d, CobarElement::from_terms(1, want));
    }

    #[test]
    fn degenerate_bracket_is_product() {
        // k = 1: <a> with h_n is a ⊗ ξ1^(2^(n+1)) = h_n · a
        let a = CobarElement::bar(&[&[2]]);
        let rep = verify_massey_witness(&a, 1, 1, &[]).unwrap();
        assert_eq!(rep, CobarElement::bar(&[&[2], &[4]]));
    }

    #[test]
    fn corrupted_witness_is_named() {
        let a = CobarElement::bar(&[&[2]]);
        let bogus = CobarElement::bar(&[&[6]]);
        assert_eq!(
            verify_massey_witness(&a, 0, 2, &[bogus]),
            Err(MasseyError::LadderFailure { index: 1 })
        );
    }
}
