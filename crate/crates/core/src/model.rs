//! Model spaces: the moment-angle complex of a product orbit space, the
//! kernel torus of the label map, and the slice-maximal lift.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    is_unimodular_onto_image, kernel_basis, smith_normal_form, IntMatrix, LabelMap, LatticeError, Sublattice,
};
use crate::poset::{decompose_product, CombinatorialType, Factor, FacePoset, FactorBlock, PosetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("face poset is not a product of simplices and suspensions of simplices")]
    NotDecomposable,
    #[error("label vectors have length {labels}, expected {expected}")]
    RankMismatch { labels: usize, expected: String },
    #[error("label map has rational rank {rank} < {rows}; the kernel does not act almost freely")]
    NotRationallySurjective { rank: usize, rows: usize },
    #[error("labels at vertex `{0}` are linearly dependent; the kernel does not act almost freely")]
    NotAlmostFree(String),
    #[error("vertex `{0}` has unimodular labels but face `{1}` does not; inconsistent input")]
    FaceInconsistency(String, String),
    #[error("lemma clause (a) fails: the lifted label map is not surjective over Z (elementary divisors {divisors:?}, rank {rank} of {rows})")]
    NotSurjective { rank: usize, rows: usize, divisors: Vec<BigInt> },
    #[error("lemma clause (b) fails at vertex `{vertex}`: its coordinate torus is not mapped isomorphically onto its image (elementary divisors {divisors:?})")]
    VertexNotIsomorphic { vertex: String, divisors: Vec<BigInt> },
    #[error("internal dimension identity failed: {0}")]
    Identity(String),
}

/// The moment-angle complex of a product orbit space: a product of spheres
/// with the standard action of a torus with one circle per facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentAngleModel {
    /// One sphere per factor, in factor order: `2n + 1` for `Δ^n`, `2m` for `Σ^m`.
    pub sphere_dims: Vec<usize>,
    /// Rank of the acting torus (the number of facets).
    pub torus_rank: usize,
}

impl MomentAngleModel {
    pub fn dimension(&self) -> usize {
        self.sphere_dims.iter().sum()
    }

    pub fn odd_spheres(&self) -> usize {
        self.sphere_dims.iter().filter(|d| *d % 2 == 1).count()
    }
}

pub fn moment_angle(ctype: &CombinatorialType) -> MomentAngleModel {
    let sphere_dims: Vec<usize> = ctype
        .factors()
        .iter()
        .map(|f| match *f {
            Factor::Simplex(n) => 2 * n + 1,
            Factor::Suspension(m) => 2 * m,
        })
        .collect();
    debug_assert!(sphere_dims.iter().all(|&d| d >= 3));
    MomentAngleModel { sphere_dims, torus_rank: ctype.facet_count() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexData {
    pub vertex: String,
    /// Determinant of the vertex's label columns, in facet order.
    pub determinant: BigInt,
    /// `|det|`, the order of the local group in the model quotient.
    pub local_order: BigInt,
    pub elementary_divisors: Vec<BigInt>,
}

/// The torus orbifold `Z_Q / ker(λ)` built from a labelled product orbit space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldModel {
    pub ctype: CombinatorialType,
    pub moment_angle: MomentAngleModel,
    /// Input facets owned by each factor.
    pub blocks: Vec<FactorBlock>,
    /// Saturated basis of `ker λ`, coordinates in input facet order.
    pub kernel: Sublattice,
    /// The same kernel with coordinates regrouped factor by factor
    /// (the order of [`crate::poset::ProductDecomposition::facet_order`]).
    pub grouped_kernel: Sublattice,
    /// Elementary divisors > 1 of the label map: `π_0` of the kernel group.
    pub component_group: Vec<BigInt>,
    pub vertices: Vec<VertexData>,
    pub almost_free: bool,
    pub free: bool,
}

impl OrbifoldModel {
    /// True when the kernel group is disconnected, so its identity component
    /// is used (the quotients are rationally equivalent).
    pub fn uses_connected_reduction(&self) -> bool {
        !self.component_group.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.moment_angle.dimension() - self.kernel.rank()
    }
}

fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).elementary_divisors()
}

fn regroup(kernel: &Sublattice, order: &[usize]) -> Sublattice {
    Sublattice { ambient: kernel.ambient, basis: kernel.restrict(order), saturated: kernel.saturated }
}

/// Builds the orbifold model of a labelled product orbit space with `k = n`.
pub fn build_model(poset: &FacePoset, labels: &LabelMap) -> Result<OrbifoldModel, ModelError> {
    labels.check_against(poset)?;
    let n = poset.rank();
    if labels.rank() != n {
        return Err(ModelError::RankMismatch { labels: labels.rank(), expected: n.to_string() });
    }
    let decomposition = decompose_product(poset).ok_or(ModelError::NotDecomposable)?;
    let matrix = labels.matrix();
    let rank = matrix.rank();
    if rank < n {
        return Err(ModelError::NotRationallySurjective { rank, rows: n });
    }
    let mut vertices = Vec::new();
    for v in poset.vertices() {
        let sub = labels.vertex_submatrix(poset, v)?;
        let determinant = sub.determinant();
        if determinant.is_zero() {
            return Err(ModelError::NotAlmostFree(poset.face(v).id.clone()));
        }
        vertices.push(VertexData {
            vertex: poset.face(v).id.clone(),
            local_order: determinant.abs(),
            determinant,
            elementary_divisors: elementary_divisors(&sub),
        });
    }
    let vertex_unimodular = vertices.iter().all(|v| v.local_order.is_one());
    if vertex_unimodular {
        for f in 0..poset.faces().len() {
            if f == poset.top() {
                continue;
            }
            if !is_unimodular_onto_image(&labels.face_submatrix(poset, f)?) {
                let v = poset.vertices_of(f)[0];
                return Err(ModelError::FaceInconsistency(poset.face(v).id.clone(), poset.face(f).id.clone()));
            }
        }
    }
    let kernel = kernel_basis(matrix);
    let ctype = decomposition.ctype.clone();
    let moment_angle = moment_angle(&ctype);
    let model = OrbifoldModel {
        grouped_kernel: regroup(&kernel, &decomposition.facet_order()),
        kernel,
        component_group: crate::lattice::cokernel_invariants(matrix)?,
        moment_angle,
        blocks: decomposition.blocks,
        ctype,
        vertices,
        almost_free: true,
        free: vertex_unimodular,
    };
    if model.dimension() != 2 * n {
        return Err(ModelError::Identity(format!("quotient dimension {} != {}", model.dimension(), 2 * n)));
    }
    Ok(model)
}

/// True iff the kernel acts freely, so the model quotient is a manifold.
pub fn is_manifold_model(model: &OrbifoldModel) -> bool {
    model.free
}

/// A slice-maximal `T^k` manifold `Z_Q / K` whose quotient by an almost
/// free subtorus recovers the orbit space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMaximalModel {
    pub ctype: CombinatorialType,
    pub moment_angle: MomentAngleModel,
    pub blocks: Vec<FactorBlock>,
    /// Ambient torus rank `k`.
    pub torus_rank: usize,
    /// Orbit space dimension `n`.
    pub orbit_rank: usize,
    pub labels: IntMatrix,
    /// Basis of `K = ker λ_M`, coordinates in input facet order.
    pub kernel: Sublattice,
    pub grouped_kernel: Sublattice,
    /// Restriction of the kernel basis to each factor's facets: the weights
    /// of the `K` action on each sphere.
    pub block_weights: Vec<Vec<Vec<BigInt>>>,
    pub manifold_dim: usize,
    pub min_orbit_dim: usize,
}

impl SliceMaximalModel {
    pub fn is_slice_maximal(&self) -> bool {
        2 * self.torus_rank == self.manifold_dim + self.min_orbit_dim
    }
}

/// Lifts a labelled product orbit space with labels in `Z^k`, `k >= n`, to
/// a slice-maximal manifold model.
pub fn slice_model(poset: &FacePoset, labels: &LabelMap) -> Result<SliceMaximalModel, ModelError> {
    labels.check_against(poset)?;
    let n = poset.rank();
    let k = labels.rank();
    if k < n {
        return Err(ModelError::RankMismatch { labels: k, expected: format!("at least {n}") });
    }
    let decomposition = decompose_product(poset).ok_or(ModelError::NotDecomposable)?;
    for v in poset.vertices() {
        let sub = labels.vertex_submatrix(poset, v)?;
        if !is_unimodular_onto_image(&sub) {
            let snf = smith_normal_form(&sub);
            let mut divisors = snf.elementary_divisors();
            divisors.resize(sub.cols(), BigInt::zero());
            return Err(ModelError::VertexNotIsomorphic { vertex: poset.face(v).id.clone(), divisors });
        }
    }
    let matrix = labels.matrix();
    let snf = smith_normal_form(matrix);
    if snf.rank() < k || !snf.elementary_divisors().iter().all(One::is_one) {
        return Err(ModelError::NotSurjective { rank: snf.rank(), rows: k, divisors: snf.elementary_divisors() });
    }
    let kernel = kernel_basis(matrix);
    let ctype = decomposition.ctype.clone();
    let moment_angle = moment_angle(&ctype);
    let facets = poset.facet_count();
    let manifold_dim = (moment_angle.dimension() + k)
        .checked_sub(facets)
        .ok_or_else(|| ModelError::Identity("negative manifold dimension".into()))?;
    let min_orbit_dim = k - n;
    let block_weights = decomposition.blocks.iter().map(|b| kernel.restrict(&b.facets)).collect();
    let model = SliceMaximalModel {
        grouped_kernel: regroup(&kernel, &decomposition.facet_order()),
        kernel,
        block_weights,
        blocks: decomposition.blocks,
        ctype,
        moment_angle,
        torus_rank: k,
        orbit_rank: n,
        labels: matrix.clone(),
        manifold_dim,
        min_orbit_dim,
    };
    if !model.is_slice_maximal() {
        return Err(ModelError::Identity(format!("2k = {} but n + m = {}", 2 * k, manifold_dim + min_orbit_dim)));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{build_product_poset, Face};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn square() -> FacePoset {
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
        FacePoset::from_facet_sets(2, names, faces).unwrap()
    }

    fn labels(k: usize, cols: &[Vec<i64>]) -> LabelMap {
        LabelMap::from_columns(k, cols).unwrap()
    }

    fn square_labels(a: i64, b: i64, c: i64, d: i64) -> LabelMap {
        labels(2, &[vec![1, 0], vec![0, 1], vec![a, b], vec![c, d]])
    }

    fn ctype(f: Vec<Factor>) -> CombinatorialType {
        CombinatorialType::new(f).unwrap()
    }

    #[test]
    fn sphere_dimensions() {
        assert_eq!(moment_angle(&ctype(vec![Factor::Simplex(1), Factor::Simplex(1)])).sphere_dims, vec![3, 3]);
        assert_eq!(moment_angle(&ctype(vec![Factor::Suspension(2)])).sphere_dims, vec![4]);
        assert_eq!(moment_angle(&ctype(vec![Factor::Simplex(2)])).sphere_dims, vec![5]);
        let m = moment_angle(&ctype(vec![Factor::Simplex(2), Factor::Suspension(3)]));
        let circles: usize = m.sphere_dims.iter().map(|d| if d % 2 == 1 { (d + 1) / 2 } else { d / 2 }).sum();
        assert_eq!(m.torus_rank, 6);
        assert_eq!(circles, m.torus_rank);
        assert_eq!(m.odd_spheres(), 1);
    }

    #[test]
    fn square_model() {
        let (a, b, c, d) = (2, 3, 5, 7);
        let m = build_model(&square(), &square_labels(a, b, c, d)).unwrap();
        assert_eq!(m.kernel.basis, vec![ints(&[-a, -b, 1, 0]), ints(&[-c, -d, 0, 1])]);
        let dets: Vec<BigInt> = m.vertices.iter().map(|v| v.determinant.clone()).collect();
        assert_eq!(dets, ints(&[d, 1, -a, a * d - b * c]));
        assert!(m.almost_free && !m.free);
        assert_eq!(m.moment_angle.sphere_dims, vec![3, 3]);
        for v in &m.vertices {
            let prod = v.elementary_divisors.iter().product::<BigInt>();
            assert_eq!(prod, v.local_order);
        }
    }

    #[test]
    fn freeness_flags() {
        let m = build_model(&square(), &square_labels(1, 0, 0, 1)).unwrap();
        assert!(m.free && is_manifold_model(&m));
        let m = build_model(&square(), &square_labels(1, 2, 3, 1)).unwrap();
        assert!(m.almost_free && !is_manifold_model(&m));
        let orders: Vec<BigInt> = m.vertices.iter().map(|v| v.local_order.clone()).collect();
        assert_eq!(orders, ints(&[1, 1, 1, 5]));
        assert_eq!(m.vertices[3].vertex, "p4");
    }

    #[test]
    fn disconnected_kernel_reported() {
        // labels (2,0),(0,1): the circle kernel meets the second torus in Z/2
        let p = build_product_poset(&ctype(vec![Factor::Simplex(1)]));
        let m = build_model(&p, &labels(1, &[vec![2], vec![2]])).unwrap();
        assert_eq!(m.component_group, ints(&[2]));
        assert!(m.uses_connected_reduction());
        assert_eq!(m.kernel.basis, vec![ints(&[-1, 1])]);
    }

    #[test]
    fn slice_examples() {
        let s = slice_model(&square(), &labels(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]])).unwrap();
        assert_eq!(s.kernel.basis, vec![ints(&[-1, -1, 0, 1])]);
        assert_eq!((s.manifold_dim, s.min_orbit_dim), (5, 1));
        assert!(s.is_slice_maximal());
        let err = slice_model(&square(), &labels(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 2], vec![1, 1, 0]]))
            .unwrap_err();
        assert_eq!(err, ModelError::VertexNotIsomorphic { vertex: "p3".into(), divisors: ints(&[1, 2]) });
        assert!(err.to_string().contains("mapped isomorphically onto"));
    }

    #[test]
    fn slice_with_k_equal_n_matches_orbifold_kernel() {
        let l = square_labels(1, 0, 0, 1);
        assert_eq!(slice_model(&square(), &l).unwrap().kernel, build_model(&square(), &l).unwrap().kernel);
    }

    #[test]
    fn slice_surjectivity_failure() {
        // vertices fine but the lattice generated by the labels has index 2
        let p = build_product_poset(&ctype(vec![Factor::Simplex(1)]));
        let err = slice_model(&p, &labels(2, &[vec![1, 0], vec![1, 2]])).unwrap_err();
        assert!(matches!(err, ModelError::NotSurjective { .. }));
    }
}
