//! Minimal free resolution of `F_2` over the mod 2 Steenrod algebra.
//!
//! Stage `s` is a free module `F_s` with generators listed in increasing
//! degree. The cell `(s, t)` adds the generators of `F_s` in degree `t`; it
//! needs stage `s - 1` through degree `t` and stage `s` through `t - 1`.
//! Generator counts are the dimensions of `Ext_A^{s,t}(F_2, F_2)`.

pub mod checkpoint;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::time::Instant;

use thiserror::Error;

use crate::f2linalg::{Echelon, F2Matrix, F2Vector};
use crate::milnor::SteenrodAlgebra;

pub use checkpoint::{CellRecord, CheckpointError};

#[derive(Debug, Error)]
pub enum ResolutionError {
    #[error("bidegree ({s}, {t}) is outside the computed range (max_s = {max_s}, max_t = {max_t})")]
    OutOfRange { s: u32, t: i64, max_s: i64, max_t: i64 },
    #[error("resource limit exceeded; last completed cell {last_completed:?}")]
    ResourceLimit { last_completed: Option<(u32, u32)> },
    #[error("class has {found} coordinates but ({s}, {t}) has {expected} generators")]
    BadClass { s: u32, t: u32, expected: usize, found: usize },
    #[error(transparent)]
    Checkpoint(#[from] CheckpointError),
}

/// Caps for one call to [`Resolution::extend_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub max_cells: Option<usize>,
    pub deadline: Option<Instant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub s: u32,
    pub t: u32,
    pub coordinates: F2Vector,
}

impl ExtClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.is_zero()
    }
}

#[derive(Clone, Debug)]
struct Generator {
    degree: u32,
    /// `d(g)` in the basis of `F_{s-1}` in degree `degree`.
    boundary: F2Vector,
}

pub struct Resolution {
    algebra: Arc<SteenrodAlgebra>,
    stages: Vec<Vec<Generator>>,
    /// Highest completed degree per stage, -1 when none.
    completed: Vec<i64>,
    matrices: RwLock<HashMap<(u32, u32), Arc<F2Matrix>>>,
}

impl Default for Resolution {
    fn default() -> Self {
        Self::new()
    }
}

impl Resolution {
    pub fn new() -> Self {
        Resolution {
            algebra: Arc::new(SteenrodAlgebra::new()),
            stages: Vec::new(),
            completed: Vec::new(),
            matrices: RwLock::new(HashMap::new()),
        }
    }

    pub fn algebra(&self) -> &SteenrodAlgebra {
        &self.algebra
    }

    /// Largest `(s, t)` square that is fully computed, as `(max_s, max_t)`;
    /// `(-1, -1)` for an empty resolution.
    pub fn covered(&self) -> (i64, i64) {
        let mut max_s = -1;
        let mut max_t = i64::MAX;
        for (s, &c) in self.completed.iter().enumerate() {
            if c < 0 {
                break;
            }
            max_s = s as i64;
            max_t = max_t.min(c);
        }
        if max_s < 0 {
            (-1, -1)
        } else {
            (max_s, max_t)
        }
    }

    pub fn completed_through(&self, s: u32) -> i64 {
        self.completed.get(s as usize).copied().unwrap_or(-1)
    }

    pub fn is_computed(&self, s: u32, t: u32) -> bool {
        self.completed_through(s) >= i64::from(t)
    }

    fn check_range(&self, s: u32, t: u32) -> Result<(), ResolutionError> {
        if self.is_computed(s, t) {
            Ok(())
        } else {
            let (max_s, max_t) = self.covered();
            Err(ResolutionError::OutOfRange {
                s,
                t: i64::from(t),
                max_s,
                max_t,
            })
        }
    }

    pub fn num_generators(&self, s: u32) -> usize {
        self.stages.get(s as usize).map_or(0, Vec::len)
    }

    pub fn generator_degree(&self, s: u32, g: usize) -> u32 {
        self.stages[s as usize][g].degree
    }

    /// Indices of the stage-`s` generators in degree `t`.
    pub fn generators_in_degree(&self, s: u32, t: u32) -> Vec<usize> {
        self.stages
            .get(s as usize)
            .map(|gens| {
                gens.iter()
                    .enumerate()
                    .filter(|(_, g)| g.degree == t)
                    .map(|(i, _)| i)
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn ext_dim(&self, s: u32, t: u32) -> Result<usize, ResolutionError> {
        self.check_range(s, t)?;
        Ok(self.generators_in_degree(s, t).len())
    }

    /// Dimension of Ext over `P` in the doubled grading.
    pub fn ext_p_dim(&self, s: u32, t: u32) -> Result<usize, ResolutionError> {
        if t % 2 == 1 {
            // parity still requires the halved degree to be in range
            self.check_range(s, t / 2)?;
            return Ok(0);
        }
        self.ext_dim(s, t / 2)
    }

    /// `(generator, offset, dim A_{t - deg g})` for every generator of `F_s`
    /// of degree `<= t`, plus the total dimension.
    fn layout(&self, s: u32, t: u32) -> (Vec<(usize, usize, usize)>, usize) {
        let mut out = Vec::new();
        let mut offset = 0;
        if let Some(gens) = self.stages.get(s as usize) {
            for (i, g) in gens.iter().enumerate() {
                if g.degree > t {
                    continue;
                }
                let dim = self.algebra.dim(u64::from(t - g.degree));
                out.push((i, offset, dim));
                offset += dim;
            }
        }
        (out, offset)
    }

    pub fn module_dim(&self, s: u32, t: u32) -> usize {
        self.layout(s, t).1
    }

    fn offset_of(&self, s: u32, t: u32, gen: usize) -> usize {
        self.layout(s, t)
            .0
            .into_iter()
            .find(|&(g, _, _)| g == gen)
            .map(|(_, o, _)| o)
            .expect("generator present in degree")
    }

    /// `a · v`, where `a` is Milnor basis element `a_idx` of degree `a_deg`
    /// and `v` lies in `F_s` in degree `v_deg`.
    fn act(&self, s: u32, a_deg: u32, a_idx: usize, v_deg: u32, v: &F2Vector) -> F2Vector {
        let t = a_deg + v_deg;
        let (src, _) = self.layout(s, v_deg);
        let (dst, total) = self.layout(s, t);
        let dst_offsets: HashMap<usize, usize> = dst.iter().map(|&(g, o, _)| (g, o)).collect();
        let mut out = F2Vector::zeros(total);
        for (g, off, dim) in src {
            let gdeg = self.stages[s as usize][g].degree;
            let b_deg = v_deg - gdeg;
            for j in 0..dim {
                if !v.get(off + j) {
                    continue;
                }
                let target_off = dst_offsets[&g];
                for &k in self
                    .algebra
                    .multiply(u64::from(a_deg), a_idx, u64::from(b_deg), j)
                    .iter()
                {
                    out.flip(target_off + k as usize);
                }
            }
        }
        out
    }

    /// Matrix of `d_s : F_s -> F_{s-1}` in degree `t`, one row per basis
    /// element of `F_s`. For `s = 0` this is the augmentation.
    pub fn differential_matrix(&self, s: u32, t: u32) -> Arc<F2Matrix> {
        if let Some(m) = self.matrices.read().unwrap().get(&(s, t)) {
            return m.clone();
        }
        let m = Arc::new(self.build_matrix(s, t, None));
        self.matrices.write().unwrap().insert((s, t), m.clone());
        m
    }

    fn build_matrix(&self, s: u32, t: u32, below_degree: Option<u32>) -> F2Matrix {
        if s == 0 {
            let (_, total) = self.layout(0, t);
            let mut m = F2Matrix::zeros(total, 1);
            if t == 0 && total == 1 {
                m.set(0, 0, true);
            }
            return m;
        }
        let (layout, _) = self.layout(s, t);
        let target_dim = self.module_dim(s - 1, t);
        let mut rows = Vec::new();
        for (g, _, dim) in layout {
            let gen = &self.stages[s as usize][g];
            if below_degree.is_some_and(|b| gen.degree >= b) {
                continue;
            }
            let a_deg = t - gen.degree;
            for a_idx in 0..dim {
                rows.push(self.act(s - 1, a_deg, a_idx, gen.degree, &gen.boundary));
            }
        }
        F2Matrix::from_rows(target_dim, rows).expect("rows have target dimension")
    }

    fn kernel_of_previous(&self, s: u32, t: u32) -> Vec<F2Vector> {
        // kernel of d_{s-1} in degree t, as vectors in F_{s-1}
        if s == 1 {
            let dim = self.module_dim(0, t);
            return if t == 0 {
                Vec::new()
            } else {
                (0..dim).map(|i| F2Vector::unit(dim, i)).collect()
            };
        }
        let m = self.differential_matrix(s - 1, t);
        m.transpose().kernel_basis()
    }

    fn compute_cell(&mut self, s: u32, t: u32) -> CellRecord {
        while self.stages.len() <= s as usize {
            self.stages.push(Vec::new());
            self.completed.push(-1);
        }
        let mut new_rows = Vec::new();
        if s == 0 {
            if t == 0 {
                new_rows.push(F2Vector::zeros(0));
            }
        } else {
            let image = self.build_matrix(s, t, Some(t));
            let mut span = Echelon::from_rows(image.num_cols(), image.rows().iter().cloned());
            for k in self.kernel_of_previous(s, t) {
                if span.insert(k.clone()) {
                    new_rows.push(k);
                }
            }
        }
        let record = CellRecord {
            s,
            t,
            boundaries: new_rows,
        };
        self.apply_record(&record);
        record
    }

    pub(crate) fn apply_record(&mut self, record: &CellRecord) {
        let s = record.s as usize;
        while self.stages.len() <= s {
            self.stages.push(Vec::new());
            self.completed.push(-1);
        }
        for b in &record.boundaries {
            self.stages[s].push(Generator {
                degree: record.t,
                boundary: b.clone(),
            });
        }
        self.completed[s] = i64::from(record.t);
        // new generators change d_s and the target basis of d_{s+1}
        self.matrices
            .write()
            .unwrap()
            .retain(|&(ms, mt), _| !((ms == record.s || ms == record.s + 1) && mt >= record.t));
    }

    /// Dependencies a cell needs before it can be computed or replayed.
    pub(crate) fn ready_for(&self, s: u32, t: u32) -> bool {
        let own = self.completed_through(s) == i64::from(t) - 1;
        let below = s == 0 || self.completed_through(s - 1) >= i64::from(t);
        own && below
    }

    pub fn extend_resolution(&mut self, target_s: u32, target_t: u32) -> Result<(), ResolutionError> {
        self.extend_with(target_s, target_t, Limits::default(), |_| Ok(()))
    }

    /// Extends coverage to every `(s <= target_s, t <= target_t)`, calling
    /// `on_cell` after each completed cell. Idempotent on covered cells.
    pub fn extend_with<F>(
        &mut self,
        target_s: u32,
        target_t: u32,
        limits: Limits,
        mut on_cell: F,
    ) -> Result<(), ResolutionError>
    where
        F: FnMut(&CellRecord) -> Result<(), CheckpointError>,
    {
        let mut done = 0usize;
        let mut last = None;
        for s in 0..=target_s {
            let start = (self.completed_through(s) + 1) as u32;
            for t in start..=target_t {
                let over_cells = limits.max_cells.is_some_and(|m| done >= m);
                let over_time = limits.deadline.is_some_and(|d| Instant::now() >= d);
                if over_cells || over_time {
                    return Err(ResolutionError::ResourceLimit { last_completed: last });
                }
                let record = self.compute_cell(s, t);
                on_cell(&record)?;
                done += 1;
                last = Some((s, t));
            }
        }
        Ok(())
    }

    fn check_class(&self, x: &ExtClass) -> Result<(), ResolutionError> {
        self.check_range(x.s, x.t)?;
        let expected = self.generators_in_degree(x.s, x.t).len();
        if x.coordinates.len() != expected {
            return Err(ResolutionError::BadClass {
                s: x.s,
                t: x.t,
                expected,
                found: x.coordinates.len(),
            });
        }
        Ok(())
    }

    /// The class dual to the `i`-th generator at `(s, t)`.
    pub fn basis_class(&self, s: u32, t: u32, i: usize) -> Result<ExtClass, ResolutionError> {
        let dim = self.ext_dim(s, t)?;
        Ok(ExtClass {
            s,
            t,
            coordinates: F2Vector::unit(dim, i),
        })
    }

    pub fn unit_class(&self) -> Result<ExtClass, ResolutionError> {
        self.basis_class(0, 0, 0)
    }

    /// `h_i` in `Ext^{1, 2^i}`.
    pub fn h(&self, i: u32) -> Result<ExtClass, ResolutionError> {
        let t = 1u32 << i;
        let gens = self.generators_in_degree(1, t);
        self.check_range(1, t)?;
        assert_eq!(gens.len(), 1, "Ext^(1, 2^i) is one-dimensional");
        self.basis_class(1, t, 0)
    }

    /// `h_i · x`, read off the coefficient of `Sq(2^i)` in the differential.
    pub fn multiply_by_h(&self, i: u32, x: &ExtClass) -> Result<ExtClass, ResolutionError> {
        self.check_class(x)?;
        let step = 1u32 << i;
        let (s, t) = (x.s + 1, x.t + step);
        self.check_range(s, t)?;
        let x_gens = self.generators_in_degree(x.s, x.t);
        let sq_idx = self.algebra.basis(u64::from(step)).index_of(&[step]).expect("Sq(2^i)");
        let targets = self.generators_in_degree(s, t);
        let mut coords = F2Vector::zeros(targets.len());
        for (ti, &g) in targets.iter().enumerate() {
            let boundary = &self.stages[s as usize][g].boundary;
            let mut bit = false;
            for (xi, &xg) in x_gens.iter().enumerate() {
                if x.coordinates.get(xi) {
                    let off = self.offset_of(x.s, t, xg);
                    bit ^= boundary.get(off + sq_idx);
                }
            }
            coords.set(ti, bit);
        }
        Ok(ExtClass { s, t, coordinates: coords })
    }

    /// Product of `h_{i1} h_{i2} ...` (applied right to left onto the unit).
    pub fn h_monomial(&self, indices: &[u32]) -> Result<ExtClass, ResolutionError> {
        let mut x = self.unit_class()?;
        for &i in indices.iter().rev() {
            x = self.multiply_by_h(i, &x)?;
        }
        Ok(x)
    }

    /// Yoneda product `y · x` by lifting `x` to a chain map.
    pub fn yoneda_product(&self, x: &ExtClass, y: &ExtClass) -> Result<ExtClass, ResolutionError> {
        self.check_class(x)?;
        self.check_class(y)?;
        let (s, t) = (x.s + y.s, x.t + y.t);
        self.check_range(s, t)?;
        let shift = x.t;
        let x_gens = self.generators_in_degree(x.s, x.t);

        // f_j on generators of F_{x.s + j} with degree <= t, as vectors in
        // F_j in degree (deg g - shift).
        let mut prev: HashMap<usize, F2Vector> = HashMap::new();
        for (xi, &g) in x_gens.iter().enumerate() {
            if x.coordinates.get(xi) {
                prev.insert(g, F2Vector::unit(1, 0));
            }
        }
        for j in 1..=y.s {
            let src_stage = x.s + j;
            let mut next = HashMap::new();
            for (g, gen) in self.stages[src_stage as usize].iter().enumerate() {
                if gen.degree > t || gen.degree < shift {
                    continue;
                }
                let deg = gen.degree - shift;
                // f_{j-1}(d g), in F_{j-1} degree `deg`.
                let mut rhs = F2Vector::zeros(self.module_dim(j - 1, deg));
                let (layout, _) = self.layout(src_stage - 1, gen.degree);
                for (h, off, dim) in layout {
                    let hdeg = self.stages[(src_stage - 1) as usize][h].degree;
                    if hdeg < shift {
                        continue;
                    }
                    let Some(fh) = prev.get(&h) else { continue };
                    let a_deg = gen.degree - hdeg;
                    for a_idx in 0..dim {
                        if gen.boundary.get(off + a_idx) {
                            rhs.add_assign(&self.act(j - 1, a_deg, a_idx, hdeg - shift, fh));
                        }
                    }
                }
                if rhs.is_zero() {
                    continue;
                }
                let m = self.differential_matrix(j, deg);
                let lift = m
                    .transpose()
                    .solve(&rhs)
                    .expect("dimensions agree")
                    .expect("resolution is exact");
                next.insert(g, lift);
            }
            prev = next;
        }
        let y_gens = self.generators_in_degree(y.s, y.t);
        let targets = self.generators_in_degree(s, t);
        let mut coords = F2Vector::zeros(targets.len());
        for (ti, g) in targets.iter().enumerate() {
            let Some(f) = prev.get(g) else { continue };
            let mut bit = false;
            for (yi, &yg) in y_gens.iter().enumerate() {
                if y.coordinates.get(yi) {
                    // component on yg · 1; y.s == 0 means F_0 in degree 0
                    let off = if y.s == 0 { 0 } else { self.offset_of(y.s, y.t, yg) };
                    bit ^= f.get(off);
                }
            }
            coords.set(ti, bit);
        }
        Ok(ExtClass { s, t, coordinates: coords })
    }

    /// No generator's boundary has a component on a same-degree generator.
    pub fn check_minimal(&self) -> bool {
        for s in 1..self.stages.len() as u32 {
            for gen in &self.stages[s as usize] {
                let (layout, _) = self.layout(s - 1, gen.degree);
                for (h, off, _) in layout {
                    if self.stages[(s - 1) as usize][h].degree == gen.degree && gen.boundary.get(off) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `d_{s-1} ∘ d_s = 0` on every generator.
    pub fn check_d_squared(&self) -> bool {
        for s in 2..self.stages.len() as u32 {
            for gen in &self.stages[s as usize] {
                let m = self.differential_matrix(s - 1, gen.degree);
                if !m.vec_mul(&gen.boundary).expect("dims").is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exactness at `F_s` in degree `t`: `rank d_s + rank d_{s+1} = dim F_s`.
    pub fn check_exact(&self, s: u32, t: u32) -> bool {
        let dim = self.module_dim(s, t);
        let r_out = if s == 0 {
            usize::from(t == 0)
        } else {
            self.differential_matrix(s, t).rank()
        };
        let r_in = self.differential_matrix(s + 1, t).rank();
        r_out + r_in == dim
    }

    /// Alternating sum of free-module ranks in degree `t` across stages
    /// `0..=max_s`. Equals `[t == 0]` whenever `t <= max_s`.
    pub fn euler_characteristic(&self, t: u32, max_s: u32) -> i64 {
        (0..=max_s)
            .map(|s| {
                let d = self.module_dim(s, t) as i64;
                if s % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }

    pub(crate) fn cell_records(&self) -> Vec<CellRecord> {
        let mut out = Vec::new();
        for (s, gens) in self.stages.iter().enumerate() {
            for t in 0..=self.completed[s].max(-1) {
                if t < 0 {
                    break;
                }
                let t = t as u32;
                out.push(CellRecord {
                    s: s as u32,
                    t,
                    boundaries: gens.iter().filter(|g| g.degree == t).map(|g| g.boundary.clone()).collect(),
                });
            }
        }
        out
    }
}
