//! Kernel, rank and a subquotient over GF(2).

use adams_e2::f2linalg::{subquotient_basis, F2Matrix, F2Vector};

fn main() {
    // d: F^3 -> F^2, (x, y, z) |-> (x + y, y + z)
    let d = F2Matrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]);
    println!("rank d = {}", d.rank());
    let cycles = d.kernel_basis();
    for c in &cycles {
        println!("cycle {:?}", c.iter_ones().collect::<Vec<_>>());
    }
    let boundary = F2Vector::from_support(3, [0, 1, 2]);
    let h = subquotient_basis(3, &cycles, &[boundary]).unwrap();
    println!("dim ker d / <(1,1,1)> = {}", h.dimension());
}
