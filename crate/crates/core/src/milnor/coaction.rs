use std::fmt;

use serde::{Deserialize, Serialize};

use super::{bit_splittings, trim, AlgebraTag, F2Sum, MilnorMonomial};

/// A monomial in `F[q0, q1, ...]`, where `qi` has `(k, t) = (1, 2^(i+1) - 1)`
/// and filtration `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct QMonomial {
    exponents: Vec<u32>,
}

impl QMonomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        QMonomial {
            exponents: trim(exponents),
        }
    }

    pub fn one() -> Self {
        QMonomial::default()
    }

    pub fn generator(i: usize) -> Self {
        Self::power(i, 1)
    }

    pub fn power(i: usize, e: u32) -> Self {
        let mut exps = vec![0; i + 1];
        exps[i] = e;
        Self::new(exps)
    }

    /// Builds a monomial from a list of generator indices (with repetition).
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut exps = Vec::new();
        for &i in indices {
            if exps.len() <= i {
                exps.resize(i + 1, 0);
            }
            exps[i] += 1;
        }
        Self::new(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exponents.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn k(&self) -> u64 {
        self.exponents.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn t(&self) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| u64::from(e) * ((1u64 << (i + 1)) - 1))
            .sum()
    }

    pub fn filtration(&self) -> u64 {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| u64::from(e) * i as u64)
            .sum()
    }

    pub fn mul(&self, other: &QMonomial) -> QMonomial {
        let n = self.exponents.len().max(other.exponents.len());
        QMonomial::new(
            (0..n)
                .map(|i| self.exponent(i) + other.exponent(i))
                .collect(),
        )
    }

    /// Adds `delta` to the exponent of `qi`; `None` if it would go negative.
    pub fn shifted(&self, i: usize, delta: i64) -> Option<QMonomial> {
        let mut exps = self.exponents.clone();
        if exps.len() <= i {
            exps.resize(i + 1, 0);
        }
        let e = i64::from(exps[i]) + delta;
        if e < 0 {
            return None;
        }
        exps[i] = e as u32;
        Some(QMonomial::new(exps))
    }

    /// Generator indices with multiplicity, ascending.
    pub fn indices(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("q{i}") } else { format!("q{i}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The P-comodule structure on `F[q0, q1, ...]`:
/// `ψ(qn) = Σ_{i=0}^{n} ξ_{n-i}^{2^(i+1)} ⊗ qi`, extended multiplicatively.
/// The left legs are P-monomials.
pub fn coaction_q(m: &QMonomial) -> F2Sum<(MilnorMonomial, QMonomial)> {
    let mut acc: F2Sum<(MilnorMonomial, QMonomial)> =
        std::iter::once((MilnorMonomial::one(AlgebraTag::P), QMonomial::one())).collect();
    for (n, &e) in m.exponents.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut factor = F2Sum::zero();
        for split in bit_splittings(e, n + 1) {
            // split[i] copies of ξ_{n-i}^{2^(i+1)} ⊗ q_i
            let mut left = vec![0u32; n];
            let mut right = vec![0u32; n + 1];
            for (i, &a) in split.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                if i < n {
                    // (ξ_{n-i}²)^{2^i} in P-generators
                    left[n - i - 1] += a << i;
                }
                right[i] += a;
            }
            factor.toggle((MilnorMonomial::new(AlgebraTag::P, left), QMonomial::new(right)));
        }
        let mut next = F2Sum::zero();
        for (l1, q1) in acc.iter() {
            for (l2, q2) in factor.iter() {
                let l = l1.mul(l2).expect("P is polynomial");
                next.toggle((l, q1.mul(q2)));
            }
        }
        acc = next;
    }
    acc
}
