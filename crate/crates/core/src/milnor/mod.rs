//! Graded Hopf algebras around the dual Steenrod algebra.
//!
//! Three algebras share one monomial type, selected by [`AlgebraTag`]:
//! the dual Steenrod algebra `F[ξ1, ξ2, ...]`, the sub-Hopf algebra
//! `P = F[ξ1², ξ2², ...]` and the exterior quotient `Q = Λ[ξ1, ξ2, ...]`.
//! P-side degrees are kept in the ambient (doubled) grading: `ξi²` has degree
//! `2^(i+1) - 2`.

mod coaction;
pub mod cobar;
pub mod product;

pub use coaction::{coaction_q, QMonomial};
pub use cobar::{cobar_differential, verify_massey_witness, CobarElement, CobarTerm, MasseyError};
pub use product::{milnor_product, SteenrodAlgebra};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraTag {
    DualA,
    P,
    Q,
}

impl AlgebraTag {
    /// Degree of the `i`-th generator (`i >= 1`).
    pub fn generator_degree(self, i: usize) -> u64 {
        assert!(i >= 1, "generators are indexed from 1");
        match self {
            AlgebraTag::DualA | AlgebraTag::Q => (1u64 << i) - 1,
            AlgebraTag::P => (1u64 << (i + 1)) - 2,
        }
    }
}

/// Trims trailing zeros so equal monomials compare equal.
pub(crate) fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// A monomial `ξ1^r1 ξ2^r2 ...` in the tagged algebra. For `P`, `r_i`
/// counts powers of `ξi²`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MilnorMonomial {
    tag: AlgebraTag,
    exponents: Vec<u32>,
}

impl MilnorMonomial {
    pub fn new(tag: AlgebraTag, exponents: Vec<u32>) -> Self {
        let exponents = trim(exponents);
        if tag == AlgebraTag::Q {
            assert!(
                exponents.iter().all(|&r| r <= 1),
                "Q-monomials are square-free"
            );
        }
        MilnorMonomial { tag, exponents }
    }

    pub fn one(tag: AlgebraTag) -> Self {
        MilnorMonomial {
            tag,
            exponents: Vec::new(),
        }
    }

    /// `ξ_i^e` in the tagged algebra's own generators.
    pub fn generator_power(tag: AlgebraTag, i: usize, e: u32) -> Self {
        let mut exps = vec![0; i];
        exps[i - 1] = e;
        Self::new(tag, exps)
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &r)| u64::from(r) * self.tag.generator_degree(i + 1))
            .sum()
    }

    /// Product in the (commutative) algebra; `None` when a Q-square appears.
    pub fn mul(&self, other: &MilnorMonomial) -> Option<MilnorMonomial> {
        assert_eq!(self.tag, other.tag);
        let n = self.exponents.len().max(other.exponents.len());
        let exps: Vec<u32> = (0..n)
            .map(|i| {
                self.exponents.get(i).copied().unwrap_or(0)
                    + other.exponents.get(i).copied().unwrap_or(0)
            })
            .collect();
        if self.tag == AlgebraTag::Q && exps.iter().any(|&e| e > 1) {
            return None;
        }
        Some(MilnorMonomial {
            tag: self.tag,
            exponents: trim(exps),
        })
    }
}

impl fmt::Debug for MilnorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MilnorMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &r) in self.exponents.iter().enumerate() {
            if r == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            // P exponents are printed in ambient ξ-powers.
            let shown = if self.tag == AlgebraTag::P { 2 * r } else { r };
            if shown == 1 {
                write!(f, "xi{}", i + 1)?;
            } else {
                write!(f, "xi{}^{}", i + 1, shown)?;
            }
        }
        Ok(())
    }
}

/// A formal GF(2) sum of terms. Inserting a term twice cancels it.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct F2Sum<T: Ord> {
    terms: BTreeSet<T>,
}

impl<T: Ord> F2Sum<T> {
    pub fn zero() -> Self {
        F2Sum {
            terms: BTreeSet::new(),
        }
    }

    pub fn toggle(&mut self, t: T) {
        if !self.terms.remove(&t) {
            self.terms.insert(t);
        }
    }

    pub fn add_sum(&mut self, other: F2Sum<T>) {
        for t in other.terms {
            self.toggle(t);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.terms.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = T> {
        self.terms.into_iter()
    }
}

impl<T: Ord> FromIterator<T> for F2Sum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = F2Sum::zero();
        for t in iter {
            s.toggle(t);
        }
        s
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for F2Sum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format!("{t:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub type Tensor2 = (MilnorMonomial, MilnorMonomial);

/// All monomials of internal degree `t`, in lexicographic order.
pub fn basis_monomials(tag: AlgebraTag, t: u64) -> Vec<MilnorMonomial> {
    let mut top = 0;
    while tag.generator_degree(top + 1) <= t {
        top += 1;
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; top];
    fill_exponents(tag, top, t, &mut exps, &mut out);
    let mut monos: Vec<MilnorMonomial> = out
        .into_iter()
        .map(|e| MilnorMonomial::new(tag, e))
        .collect();
    monos.sort();
    monos
}

fn fill_exponents(tag: AlgebraTag, i: usize, remaining: u64, exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == 0 {
        if remaining == 0 {
            out.push(exps.clone());
        }
        return;
    }
    let d = tag.generator_degree(i);
    let max = match tag {
        AlgebraTag::Q => (remaining / d).min(1),
        _ => remaining / d,
    };
    for r in 0..=max {
        exps[i - 1] = r as u32;
        fill_exponents(tag, i - 1, remaining - r * d, exps, out);
    }
    exps[i - 1] = 0;
}

/// Ways to distribute the set bits of `r` among `slots` summands: the nonzero
/// multinomial coefficients mod 2.
pub(crate) fn bit_splittings(r: u32, slots: usize) -> Vec<Vec<u32>> {
    let bits: Vec<u32> = (0..32).filter(|b| r >> b & 1 == 1).map(|b| 1u32 << b).collect();
    let mut out = vec![vec![0u32; slots]];
    for bit in bits {
        let mut next = Vec::with_capacity(out.len() * slots);
        for split in &out {
            for s in 0..slots {
                let mut v = split.clone();
                v[s] += bit;
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// The coproduct, from `ψ(ξn) = Σ ξ_{n-i}^{2^i} ⊗ ξi` extended multiplicatively
/// (with `ξ0 = 1`). On `P` the same formula applies to the `ξi²` generators;
/// on `Q` every generator is primitive.
pub fn coproduct(m: &MilnorMonomial) -> F2Sum<Tensor2> {
    let tag = m.tag;
    let one = MilnorMonomial::one(tag);
    let mut acc: F2Sum<Tensor2> = std::iter::once((one.clone(), one)).collect();
    for (idx, &r) in m.exponents.iter().enumerate() {
        if r == 0 {
            continue;
        }
        let n = idx + 1;
        // ψ(ξn)^r, expanded.
        let mut factor: F2Sum<Tensor2> = F2Sum::zero();
        match tag {
            AlgebraTag::Q => {
                let g = MilnorMonomial::generator_power(tag, n, 1);
                factor.toggle((g.clone(), MilnorMonomial::one(tag)));
                factor.toggle((MilnorMonomial::one(tag), g));
            }
            _ => {
                for split in bit_splittings(r, n + 1) {
                    // split[i] copies of the term ξ_{n-i}^{2^i} ⊗ ξ_i
                    let mut left = vec![0u32; n];
                    let mut right = vec![0u32; n];
                    for (i, &a) in split.iter().enumerate() {
                        if a == 0 {
                            continue;
                        }
                        if i < n {
                            left[n - i - 1] += a << i;
                        }
                        if i > 0 {
                            right[i - 1] += a;
                        }
                    }
                    factor.toggle((MilnorMonomial::new(tag, left), MilnorMonomial::new(tag, right)));
                }
            }
        }
        let mut next = F2Sum::zero();
        for (l1, r1) in acc.iter() {
            for (l2, r2) in factor.iter() {
                if let (Some(l), Some(rr)) = (l1.mul(l2), r1.mul(r2)) {
                    next.toggle((l, rr));
                }
            }
        }
        acc = next;
    }
    acc
}

/// Coproduct with the `m ⊗ 1` and `1 ⊗ m` terms removed.
pub fn reduced_coproduct(m: &MilnorMonomial) -> F2Sum<Tensor2> {
    coproduct(m)
        .into_terms()
        .filter(|(l, r)| !l.is_one() && !r.is_one())
        .collect()
}
