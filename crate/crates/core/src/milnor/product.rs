//! Milnor-basis multiplication in the mod 2 Steenrod algebra.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{basis_monomials, trim, AlgebraTag, F2Sum};

/// Degree of `Sq(r1, r2, ...)`.
pub fn sq_degree(r: &[u32]) -> u64 {
    r.iter()
        .enumerate()
        .map(|(i, &x)| u64::from(x) * ((1u64 << (i + 1)) - 1))
        .sum()
}

/// `Sq(r) · Sq(s)` by Milnor's matrix formula.
///
/// Enumerates matrices `X` with `Σ_j 2^j x_ij = r_i` (rows `i >= 1`) and
/// `Σ_i x_ij = s_j` (columns `j >= 1`); each contributes `Sq(T)` with
/// `T_n = Σ_{i+j=n} x_ij` when every diagonal has pairwise disjoint bits.
pub fn milnor_product(r: &[u32], s: &[u32]) -> F2Sum<Vec<u32>> {
    let rows = r.len() + 1;
    let cols = s.len() + 1;
    let diags = r.len() + s.len();
    let mut m = vec![vec![0u32; cols]; rows];
    for j in 1..cols {
        m[0][j] = s[j - 1];
    }
    for i in 1..rows {
        m[i][0] = r[i - 1];
    }
    let mut result = F2Sum::zero();
    loop {
        let mut total = vec![0u32; diags];
        let mut odd = true;
        'diag: for n in 1..=diags {
            let mut seen = 0u32;
            for j in n.saturating_sub(rows - 1)..=n.min(cols - 1) {
                let x = m[n - j][j];
                if seen & x != 0 {
                    odd = false;
                    break 'diag;
                }
                seen |= x;
            }
            total[n - 1] = seen;
        }
        if odd {
            result.toggle(trim(total));
        }

        // Advance to the next admissible matrix.
        let mut found = false;
        'search: for i in 1..rows {
            let mut avail = m[i][0];
            for j in 1..cols {
                let w = 1u32 << j;
                if avail >= w && (0..i).any(|k| m[k][j] != 0) {
                    for row in 1..i {
                        m[row][0] = r[row - 1];
                        for col in 1..cols {
                            m[0][col] += m[row][col];
                            m[row][col] = 0;
                        }
                    }
                    for col in 1..j {
                        m[0][col] += m[i][col];
                        m[i][col] = 0;
                    }
                    m[0][j] -= 1;
                    m[i][j] += 1;
                    m[i][0] = avail - w;
                    found = true;
                    break 'search;
                }
                avail += m[i][j] * w;
            }
        }
        if !found {
            return result;
        }
    }
}

/// Milnor basis of one degree with a reverse index.
#[derive(Debug)]
pub struct DegreeBasis {
    pub elements: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl DegreeBasis {
    fn new(degree: u64) -> Self {
        let elements: Vec<Vec<u32>> = basis_monomials(AlgebraTag::DualA, degree)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        DegreeBasis { elements, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, r: &[u32]) -> Option<usize> {
        self.index.get(r).copied()
    }
}

type ProductKey = (u32, u32, u32, u32);

/// The Steenrod algebra with memoized degreewise bases and products.
///
/// Caches tolerate concurrent readers; a miss may be computed twice by racing
/// threads but entries are inserted whole.
#[derive(Default)]
pub struct SteenrodAlgebra {
    bases: RwLock<HashMap<u64, Arc<DegreeBasis>>>,
    products: RwLock<HashMap<ProductKey, Arc<[u32]>>>,
}

impl SteenrodAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(&self, degree: u64) -> Arc<DegreeBasis> {
        if let Some(b) = self.bases.read().unwrap().get(&degree) {
            return b.clone();
        }
        let b = Arc::new(DegreeBasis::new(degree));
        self.bases
            .write()
            .unwrap()
            .entry(degree)
            .or_insert(b)
            .clone()
    }

    pub fn dim(&self, degree: u64) -> usize {
        self.basis(degree).len()
    }

    /// Product of basis element `ia` in degree `da` with `ib` in degree `db`,
    /// as basis indices in degree `da + db`.
    pub fn multiply(&self, da: u64, ia: usize, db: u64, ib: usize) -> Arc<[u32]> {
        let key = (da as u32, ia as u32, db as u32, ib as u32);
        if let Some(p) = self.products.read().unwrap().get(&key) {
            return p.clone();
        }
        let a = &self.basis(da).elements[ia];
        let b = &self.basis(db).elements[ib];
        let target = self.basis(da + db);
        let mut out: Vec<u32> = milnor_product(a, b)
            .iter()
            .map(|t| target.index_of(t).expect("product stays in degree") as u32)
            .collect();
        out.sort_unstable();
        let out: Arc<[u32]> = out.into();
        self.products.write().unwrap().insert(key, out.clone());
        out
    }
}
