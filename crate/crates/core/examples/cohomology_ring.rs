//! Rational cohomology ring of the square family, re-expressed in the basis
//! u = (0, -ay, bx - ay, 0), v = (0, -cy, dx - cy, dx - cy), w = (0, xy, 0, 0).
//!
//!     cargo run --example cohomology_ring -- 1 2 3 1

mod common;

use torb::gkm::{ring_structure, weights_from_labels, EquivariantClass};
use torb::linalg::rat;
use torb::poly::Poly;

fn lin(p: i64, q: i64) -> Poly {
    Poly::var(2, 0).scale(&rat(p)).add(&Poly::var(2, 1).scale(&rat(q)))
}

fn main() {
    let [a, b, c, d] = common::tuple_from_args([1, 2, 3, 1]);
    let graph = weights_from_labels(&common::square(), &common::square_labels(a, b, c, d)).expect("admissible labels");
    let ring = ring_structure(&graph).expect("torus orbifold data");
    for ((d1, i, d2, j), coords) in ring.products() {
        if *d1 > 0 {
            println!("emitted basis: h{}_{} * h{}_{} = {:?}", 2 * d1, i + 1, 2 * d2, j + 1, coords.iter().map(ToString::to_string).collect::<Vec<_>>());
        }
    }
    let z = || Poly::zero(2);
    let u = EquivariantClass::new(1, vec![z(), lin(0, -a), lin(b, -a), z()]).unwrap();
    let v = EquivariantClass::new(1, vec![z(), lin(0, -c), lin(d, -c), lin(d, -c)]).unwrap();
    let w = EquivariantClass::new(2, vec![z(), Poly::var(2, 0).mul(&Poly::var(2, 1)), z(), z()]).unwrap();
    let ring = ring.with_basis(1, vec![u, v]).and_then(|r| r.with_basis(2, vec![w])).expect("u, v, w form a basis");
    println!("alpha^2    = {} gamma   (ab = {})", ring.multiply(1, 0, 1, 0)[0], a * b);
    println!("beta^2     = {} gamma   (cd = {})", ring.multiply(1, 1, 1, 1)[0], c * d);
    println!("alpha beta = {} gamma   (ad = {})", ring.multiply(1, 0, 1, 1)[0], a * d);
}
