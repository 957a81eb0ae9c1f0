//! Equivariant cohomology as tuples of polynomials: dimensions per degree,
//! Betti numbers, module generators and the free-module check.
//!
//!     cargo run --example equivariant_cohomology -- 1 1 1 2

mod common;

use torb::gkm::{betti_numbers, equivariant_basis, module_generators, poincare_series_check, weights_from_labels};
use torb::poly::variable_names;

fn main() {
    let [a, b, c, d] = common::tuple_from_args([1, 1, 1, 2]);
    let graph = weights_from_labels(&common::square(), &common::square_labels(a, b, c, d)).expect("admissible labels");
    for deg in 0..=3 {
        println!("dim H_G^{} = {}", 2 * deg, equivariant_basis(&graph, deg).len());
    }
    println!("Betti numbers: {:?}", betti_numbers(&graph).expect("torus orbifold data"));
    let names = variable_names(2);
    for g in module_generators(&graph).expect("torus orbifold data") {
        let parts: Vec<String> = g.components.iter().map(|p| p.display_with(&names).to_string()).collect();
        println!("generator of degree {}: ({})", 2 * g.degree, parts.join(", "));
    }
    let report = poincare_series_check(&graph);
    println!("free over the polynomial ring: {} {:?}", report.holds, report.equivariant_dims);
}
