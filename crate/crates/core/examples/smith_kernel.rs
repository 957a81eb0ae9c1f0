//! Smith normal form, saturated kernels, cokernels and primitive generators
//! of integer matrices.
//!
//!     cargo run --example smith_kernel

use torb::lattice::{cokernel_invariants, is_unimodular_onto_image, kernel_basis, primitive_generator, smith_normal_form, IntMatrix};

fn main() {
    let m = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    let snf = smith_normal_form(&m);
    println!("diagonal of the Smith form: {:?}", snf.diagonal().iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("U M V == D: {}", snf.u.mul(&m).mul(&snf.v) == snf.d);

    // label matrix of a square: kernel {(-a,-b,1,0), (-c,-d,0,1)}
    let (a, b, c, d) = (1, 2, 3, 1);
    let labels = IntMatrix::from_columns(2, &[vec![1i64, 0], vec![0, 1], vec![a, b], vec![c, d]]);
    for v in kernel_basis(&labels).basis {
        println!("kernel vector {:?}", v.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    let doubled = IntMatrix::from_columns(1, &[vec![2i64], vec![2]]);
    println!("cokernel of (2 2): {:?}", cokernel_invariants(&doubled).unwrap().iter().map(ToString::to_string).collect::<Vec<_>>());
    let edge = IntMatrix::from_rows(&[vec![a, b]]);
    println!("primitive generator of ker (a b): {:?}", primitive_generator(&edge).unwrap().iter().map(ToString::to_string).collect::<Vec<_>>());
    let onto = IntMatrix::from_columns(3, &[vec![1i64, 1, 0], vec![0, 1, 0]]);
    println!("(1,1,0),(0,1,0) unimodular onto image: {}", is_unimodular_onto_image(&onto));
}
