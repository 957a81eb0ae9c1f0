//! The product-of-spheres model: moment-angle complex, kernel torus,
//! vertex determinants and the freeness of the kernel action.
//!
//!     cargo run --example orbifold_model -- 1 2 3 1

mod common;

use torb::model::{build_model, is_manifold_model};

fn main() {
    let [a, b, c, d] = common::tuple_from_args([1, 2, 3, 1]);
    let model = build_model(&common::square(), &common::square_labels(a, b, c, d)).expect("admissible labels");
    let spheres: Vec<String> = model.moment_angle.sphere_dims.iter().map(|d| format!("S^{d}")).collect();
    println!("moment-angle complex {} with a T^{} action", spheres.join(" x "), model.moment_angle.torus_rank);
    for v in &model.kernel.basis {
        println!("kernel vector {:?}", v.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    for v in &model.vertices {
        println!("vertex {}: det {}, local order {}", v.vertex, v.determinant, v.local_order);
    }
    println!("almost free: {}, manifold: {}", model.almost_free, is_manifold_model(&model));
}
