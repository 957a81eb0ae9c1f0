//! Lifting a labelled square to a slice-maximal T^3 action on a 5-manifold,
//! and a lift rejected because a vertex torus is not mapped isomorphically.
//!
//!     cargo run --example slice_maximal

mod common;

use torb::model::slice_model;

fn main() {
    let good = common::labels(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    let s = slice_model(&common::square(), &good).expect("valid lift");
    println!("kernel {:?}", s.kernel.basis.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>());
    println!("manifold dimension {}, minimal orbit dimension {}, 2k = {}", s.manifold_dim, s.min_orbit_dim, 2 * s.torus_rank);
    let bad = common::labels(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2], vec![1, 1, 0]]);
    match slice_model(&common::square(), &bad) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
}
