//! Edge weights of the GKM graph of a labelled square.
//!
//!     cargo run --example gkm_weights -- 2 4 3 1

mod common;

use torb::gkm::weights_from_labels;
use torb::poly::{variable_names, Poly};

fn main() {
    let [a, b, c, d] = common::tuple_from_args([2, 4, 3, 1]);
    let graph = weights_from_labels(&common::square(), &common::square_labels(a, b, c, d)).expect("admissible labels");
    let names = variable_names(2);
    for e in graph.edges() {
        println!(
            "{}: {} -- {}  weight {:<10} (raw {})",
            e.face,
            graph.vertices()[e.ends.0],
            graph.vertices()[e.ends.1],
            Poly::linear(&e.weight).display_with(&names).to_string(),
            Poly::linear(&e.raw_weight).display_with(&names)
        );
    }
}
