//! The labelled square shared by several examples: facets F1..F4 in cyclic
//! order with labels (1,0), (0,1), (a,b), (c,d), and vertices
//! p1 = F4 & F1, p2 = F1 & F2, p3 = F2 & F3, p4 = F3 & F4.

#![allow(dead_code)]

use torb::lattice::LabelMap;
use torb::poset::{Face, FacePoset};

pub fn square() -> FacePoset {
    let names = (1..=4).map(|i| format!("F{i}")).collect();
    let faces = vec![
        Face::new("Q", [], 2),
        Face::new("F1", [0], 1),
        Face::new("F2", [1], 1),
        Face::new("F3", [2], 1),
        Face::new("F4", [3], 1),
        Face::new("p1", [3, 0], 0),
        Face::new("p2", [0, 1], 0),
        Face::new("p3", [1, 2], 0),
        Face::new("p4", [2, 3], 0),
    ];
    FacePoset::from_facet_sets(2, names, faces).expect("square")
}

pub fn labels(k: usize, columns: &[Vec<i64>]) -> LabelMap {
    LabelMap::from_columns(k, columns).expect("nonzero labels")
}

pub fn square_labels(a: i64, b: i64, c: i64, d: i64) -> LabelMap {
    labels(2, &[vec![1, 0], vec![0, 1], vec![a, b], vec![c, d]])
}

/// `(a, b, c, d)` from the command line, or the given default.
pub fn tuple_from_args(default: [i64; 4]) -> [i64; 4] {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if args.len() == 4 {
        [args[0], args[1], args[2], args[3]]
    } else {
        default
    }
}
