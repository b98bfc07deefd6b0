//! Cross-checks the packed eliminator against a naive cubic one.

use adams_e2::f2linalg::{subquotient_basis, Echelon, F2Matrix, F2Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook Gauss–Jordan on byte matrices. Returns (rref rows, pivots).
fn naive_rref(mut m: Vec<Vec<u8>>) -> (Vec<Vec<u8>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] == 1) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..rows {
            if i != r && m[i][c] == 1 {
                for j in 0..cols {
                    m[i][j] ^= m[r][j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

fn naive_rank(m: &[Vec<u8>]) -> usize {
    naive_rref(m.to_vec()).1.len()
}

fn naive_kernel(m: &[Vec<u8>], cols: usize) -> Vec<Vec<u8>> {
    let (red, pivots) = naive_rref(m.to_vec());
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u8; cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = red[r][free];
            }
            v
        })
        .collect()
}

fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<u8>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..2u8)).collect())
        .collect()
}

fn to_bytes(v: &F2Vector) -> Vec<u8> {
    (0..v.len()).map(|i| u8::from(v.get(i))).collect()
}

#[test]
fn rank_matches_naive_on_random_20x30() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let dense = random_dense(&mut rng, 20, 30);
        assert_eq!(F2Matrix::from_dense(&dense).rank(), naive_rank(&dense));
    }
}

#[test]
fn kernel_span_matches_naive_on_random_15x25() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let dense = random_dense(&mut rng, 15, 25);
        let m = F2Matrix::from_dense(&dense);
        let ours = m.kernel_basis();
        let theirs: Vec<F2Vector> = naive_kernel(&dense, 25)
            .iter()
            .map(|v| F2Vector::from_bits(v))
            .collect();
        let ours_span = Echelon::from_rows(25, ours.iter().cloned());
        let theirs_span = Echelon::from_rows(25, theirs.iter().cloned());
        assert_eq!(ours_span.rank(), ours.len(), "kernel basis not independent");
        assert!(theirs.iter().all(|v| ours_span.contains(v)));
        assert!(ours.iter().all(|v| theirs_span.contains(v)));
        for v in &ours {
            assert!(m.mul_vec(v).unwrap().is_zero());
        }
    }
}

#[test]
fn solve_random_consistent_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let dense = random_dense(&mut rng, 18, 24);
        let m = F2Matrix::from_dense(&dense);
        let x: Vec<u8> = (0..24).map(|_| rng.gen_range(0..2u8)).collect();
        let rhs = m.mul_vec(&F2Vector::from_bits(&x)).unwrap();
        let sol = m.solve(&rhs).unwrap().expect("consistent system");
        assert_eq!(m.mul_vec(&sol).unwrap(), rhs);
    }
}

#[test]
fn subquotient_random_nested_spans() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let cycles_dense = random_dense(&mut rng, 10, 40);
        let cycles: Vec<F2Vector> = cycles_dense.iter().map(|v| F2Vector::from_bits(v)).collect();
        // boundaries: random combinations of cycles
        let boundaries: Vec<F2Vector> = (0..6)
            .map(|_| {
                let mut b = F2Vector::zeros(40);
                for c in &cycles {
                    if rng.gen_bool(0.5) {
                        b.add_assign(c);
                    }
                }
                b
            })
            .collect();
        let q = subquotient_basis(40, &cycles, &boundaries).unwrap();
        let bdense: Vec<Vec<u8>> = boundaries.iter().map(to_bytes).collect();
        assert_eq!(q.dimension(), naive_rank(&cycles_dense) - naive_rank(&bdense));
        for v in q.basis() {
            assert!(!q.is_zero_class(v));
        }
    }
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    (1usize..12, 1usize..80).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(0u8..2, c), r)
    })
}

proptest! {
    #[test]
    fn rank_is_transpose_invariant(dense in matrix_strategy()) {
        let m = F2Matrix::from_dense(&dense);
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn rank_nullity(dense in matrix_strategy()) {
        let m = F2Matrix::from_dense(&dense);
        prop_assert_eq!(m.kernel_basis().len() + m.rank(), m.num_cols());
    }

    #[test]
    fn solve_postcondition(dense in matrix_strategy(), seed in any::<u64>()) {
        let m = F2Matrix::from_dense(&dense);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rhs = F2Vector::from_bits(&(0..m.num_rows()).map(|_| rng.gen_range(0..2u8)).collect::<Vec<_>>());
        if let Some(x) = m.solve(&rhs).unwrap() {
            prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs);
        } else {
            // inconsistent: rhs must not be in the column span
            let cols = Echelon::from_rows(m.num_rows(), m.transpose().rows().iter().cloned());
            prop_assert!(!cols.contains(&rhs));
        }
    }

    #[test]
    fn subquotient_dimension_additivity(dense in matrix_strategy(), mask in any::<u64>()) {
        let cycles: Vec<F2Vector> = dense.iter().map(|v| F2Vector::from_bits(v)).collect();
        let dim = cycles[0].len();
        let boundaries: Vec<F2Vector> = cycles.iter().enumerate()
            .filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, v)| v.clone()).collect();
        let q = subquotient_basis(dim, &cycles, &boundaries).unwrap();
        let cyc_rank = Echelon::from_rows(dim, cycles.iter().cloned()).rank();
        prop_assert_eq!(cyc_rank, q.dimension() + q.boundary_rank());
    }
}
