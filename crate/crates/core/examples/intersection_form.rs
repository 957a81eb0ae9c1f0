//! Intersection forms of the square family: square-free diagonal,
//! determinant class, and a hyperbolic basis when b = 0.
//!
//!     cargo run --example intersection_form

mod common;

use torb::gkm::{intersection_form, ring_structure, weights_from_labels};

fn main() {
    for [a, b, c, d] in [[1, 1, 1, 2], [1, 2, 3, 1], [2, 1, 1, 1], [1, 0, 0, 1], [2, 0, 3, 1]] {
        let graph = weights_from_labels(&common::square(), &common::square_labels(a, b, c, d)).expect("admissible labels");
        let form = intersection_form(&ring_structure(&graph).expect("torus orbifold data")).expect("four-dimensional");
        let show = |v: &[num_bigint::BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        print!(
            "({a},{b},{c},{d}): normalized diagonal ({}), -ad(ad-bc) = {}",
            show(&form.normalized_diagonal()),
            -a * d * (a * d - b * c)
        );
        match form.hyperbolic_basis() {
            Some([e, f]) => {
                let show_q = |v: &[torb::linalg::Rat]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
                println!(", hyperbolic basis e = ({}), f = ({})", show_q(&e), show_q(&f))
            }
            None => println!(),
        }
    }
}
