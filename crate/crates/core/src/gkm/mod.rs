//! GKM graphs of labelled orbit spaces and their rational (equivariant)
//! cohomology.
//!
//! `H_G^*(O; Q)` is computed as the space of tuples `(f_1, ..., f_N)` of
//! polynomials, one per fixed point, such that `f_i - f_j` is divisible by
//! the weight of every edge joining `i` and `j`. Divisibility by a linear
//! form is the vanishing of `f_i - f_j` on its kernel hyperplane, so every
//! degree is an exact rational nullspace computation.

mod cohomology;
mod form;
pub use form::{intersection_form, squarefree_part, IntersectionForm};

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice::{self, cofactor_vector, primitive_generator, LabelMap, LatticeError};
use crate::poset::{self, FacePoset, PosetError};

pub use cohomology::{
    betti_numbers, equivariant_basis, module_generators, poincare_duality_holds, poincare_series_check,
    poincare_series_check_up_to,
    ring_structure, CohomologyRing, EquivariantClass, PoincareReport,
};


#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkmError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("label vectors have length {labels} but the orbit space has dimension {poset}")]
    RankMismatch { labels: usize, poset: usize },
    #[error("orbit space is not nice; offending faces: {0:?}")]
    NotNice(Vec<String>),
    #[error("edge `{edge}` lies in {count} facets, expected {expected}")]
    EdgeFacets { edge: String, count: usize, expected: usize },
    #[error("labels of the facets meeting along edge `{0}` are linearly dependent; labels must be linearly independent whenever facets intersect")]
    DependentEdgeLabels(String),
    #[error("labels of the facets at vertex `{0}` are linearly dependent; labels must be linearly independent whenever facets intersect")]
    DependentVertexLabels(String),
    #[error("vertex `{vertex}` meets {degree} edges, expected {expected}")]
    VertexDegree { vertex: String, degree: usize, expected: usize },
    #[error("weights of edges `{0}` and `{1}` at vertex `{2}` are parallel")]
    ParallelWeights(String, String, String),
    #[error("ordinary cohomology does not vanish in degree {degree} (dimension {dim}); not the GKM graph of a torus orbifold")]
    NonvanishingAboveTop { degree: usize, dim: usize },
    #[error("invalid basis for degree {degree}: {reason}")]
    InvalidBasis { degree: usize, reason: String },
    #[error("internal reduction failure: {0}")]
    Reduction(String),
    #[error("intersection form needs an orbifold of dimension 4 (rank 2), got rank {0}")]
    FormRank(usize),
    #[error("intersection form needs b4 = 1, got {0}")]
    FormTop(usize),
    #[error("intersection form is degenerate")]
    DegenerateForm,
}

/// An edge of the GKM graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmEdge {
    /// Identifier of the one-dimensional face.
    pub face: String,
    /// Endpoint vertex indices.
    pub ends: (usize, usize),
    /// Primitive weight, first nonzero entry positive.
    pub weight: Vec<BigInt>,
    /// Signed maximal minors of the edge's label matrix (not divided by their gcd).
    pub raw_weight: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<GkmEdge>,
}

impl GkmGraph {
    /// Assembles a graph without any validation. Intended for hand-built or
    /// deliberately inconsistent graphs; [`weights_from_labels`] is the
    /// checked entry point.
    pub fn from_raw_parts(rank: usize, vertices: Vec<String>, edges: Vec<GkmEdge>) -> Self {
        GkmGraph { rank, vertices, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[GkmEdge] {
        &self.edges
    }

    /// Edges at vertex `v`.
    pub fn edges_at(&self, v: usize) -> impl Iterator<Item = &GkmEdge> {
        self.edges.iter().filter(move |e| e.ends.0 == v || e.ends.1 == v)
    }
}

fn parallel(a: &[BigInt], b: &[BigInt]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Builds the GKM graph of a labelled orbit space with `k = n`.
pub fn weights_from_labels(poset: &FacePoset, labels: &LabelMap) -> Result<GkmGraph, GkmError> {
    let n = poset.rank();
    labels.check_against(poset)?;
    if labels.rank() != n {
        return Err(GkmError::RankMismatch { labels: labels.rank(), poset: n });
    }
    let nice = poset::validate_nice(poset);
    if !nice.nice {
        return Err(GkmError::NotNice(nice.witnesses));
    }
    let graph = poset::vertex_edge_graph(poset)?;
    for &v in &graph.vertices {
        if labels.vertex_submatrix(poset, v)?.determinant().is_zero() {
            return Err(GkmError::DependentVertexLabels(poset.face(v).id.clone()));
        }
    }
    let mut edges = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let face = poset.face(e.face);
        if face.facets.len() + 1 != n {
            return Err(GkmError::EdgeFacets { edge: face.id.clone(), count: face.facets.len(), expected: n - 1 });
        }
        let lambda_e = labels.face_submatrix(poset, e.face)?;
        let weight = match primitive_generator(&lambda_e.transpose()) {
            Ok(w) => w,
            Err(LatticeError::KernelDimension(_)) => return Err(GkmError::DependentEdgeLabels(face.id.clone())),
            Err(other) => return Err(other.into()),
        };
        edges.push(GkmEdge { face: face.id.clone(), ends: e.ends, weight, raw_weight: cofactor_vector(&lambda_e) });
    }
    let g = GkmGraph { rank: n, vertices: graph.vertices.iter().map(|&v| poset.face(v).id.clone()).collect(), edges };
    for v in 0..g.vertex_count() {
        let at: Vec<&GkmEdge> = g.edges_at(v).collect();
        if at.len() != n {
            return Err(GkmError::VertexDegree { vertex: g.vertices[v].clone(), degree: at.len(), expected: n });
        }
        for i in 0..at.len() {
            for j in i + 1..at.len() {
                if parallel(&at[i].weight, &at[j].weight) {
                    return Err(GkmError::ParallelWeights(at[i].face.clone(), at[j].face.clone(), g.vertices[v].clone()));
                }
            }
        }
    }
    Ok(g)
}

/// Integer basis of the hyperplane `{x : <w, x> = 0}`.
pub(crate) fn hyperplane_basis(weight: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = lattice::IntMatrix::from_rows(&[weight.to_vec()]);
    lattice::kernel_basis(&m).basis
}
