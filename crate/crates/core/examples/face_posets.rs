//! Builds the face posets of products of simplices and suspensions, checks
//! the six combinatorial conditions, and recovers the factors again.
//!
//!     cargo run --example face_posets

use torb::poset::{build_product_poset, check_properties, cube_quotient_poset, decompose_product, CombinatorialType, Factor};

fn main() {
    let types = [
        vec![Factor::Simplex(1), Factor::Simplex(1)],
        vec![Factor::Simplex(2)],
        vec![Factor::Suspension(2)],
        vec![Factor::Simplex(1), Factor::Suspension(3)],
    ];
    for factors in types {
        let ctype = CombinatorialType::new(factors).expect("valid factors");
        let poset = build_product_poset(&ctype);
        let report = check_properties(&poset);
        let recovered = decompose_product(&poset).map(|d| d.ctype.to_string());
        println!("{ctype:<22} {poset}");
        println!("{:<22} conditions hold: {}, decomposes as: {}", "", report.all_hold(), recovered.unwrap_or_default());
    }
    for d in [3, 4] {
        let cube = cube_quotient_poset(d).expect("d >= 3");
        let report = check_properties(&cube);
        for failure in report.failures() {
            println!("[-1,1]^{d}/+-: condition ({}) fails: {}", failure.clause.letter(), failure.clause.statement());
        }
        println!("[-1,1]^{d}/+-: product decomposition found: {}", decompose_product(&cube).is_some());
    }
}
