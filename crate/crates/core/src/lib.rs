pub mod cli;
pub mod gkm;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod poset;
