use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{hyperplane_basis, GkmError, GkmGraph};
use crate::linalg::{self, Rat};
use crate::poly::{monomials, Poly};

/// A tuple of homogeneous polynomials of a common degree, one per vertex.
///
/// `degree` is the polynomial degree `d`; the cohomological degree is `2d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    pub degree: usize,
    pub components: Vec<Poly>,
}

impl EquivariantClass {
    /// The unit class `(1, ..., 1)`.
    pub fn one(nvars: usize, vertices: usize) -> Self {
        EquivariantClass { degree: 0, components: vec![Poly::one(nvars); vertices] }
    }

    /// Builds a class from its components, checking they are homogeneous of
    /// the given degree.
    pub fn new(degree: usize, components: Vec<Poly>) -> Result<Self, GkmError> {
        for p in &components {
            if p.terms().any(|(e, _)| e.degree() as usize != degree) {
                return Err(GkmError::InvalidBasis { degree, reason: "component is not homogeneous".into() });
            }
        }
        Ok(EquivariantClass { degree, components })
    }

    /// Multiplies every component by the same polynomial (the module action).
    pub fn times_poly(&self, p: &Poly, degree: usize) -> Self {
        EquivariantClass { degree: self.degree + degree, components: self.components.iter().map(|c| c.mul(p)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        EquivariantClass {
            degree: self.degree + other.degree,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.mul(b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        EquivariantClass {
            degree: self.degree,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        EquivariantClass { degree: self.degree, components: self.components.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    /// Checks every edge condition by exact polynomial division.
    pub fn satisfies(&self, g: &GkmGraph) -> bool {
        self.components.len() == g.vertex_count()
            && g.edges().iter().all(|e| {
                let diff = self.components[e.ends.0].sub(&self.components[e.ends.1]);
                diff.is_zero() || diff.div_linear(&e.weight).is_some()
            })
    }

    fn to_dense(&self) -> Vec<Rat> {
        self.components.iter().flat_map(|p| p.to_dense(self.degree as u32)).collect()
    }

    fn from_dense(nvars: usize, vertices: usize, degree: usize, v: &[Rat]) -> Self {
        let m = monomials(nvars, degree as u32).len();
        let components = (0..vertices).map(|i| Poly::from_dense(nvars, degree as u32, &v[i * m..(i + 1) * m])).collect();
        EquivariantClass { degree, components }
    }
}

/// Dense constraint rows for the edge conditions in polynomial degree `d`.
fn constraint_rows(g: &GkmGraph, d: usize) -> Vec<Vec<Rat>> {
    let n = g.rank();
    let monos = monomials(n, d as u32);
    let m = monos.len();
    let cols = g.vertex_count() * m;
    let mut cache: HashMap<Vec<BigInt>, Vec<Vec<Rat>>> = HashMap::new();
    let mut rows = Vec::new();
    for e in g.edges() {
        let restricted = cache.entry(e.weight.clone()).or_insert_with(|| {
            let h = hyperplane_basis(&e.weight);
            let mut one_var = Poly::zero(n);
            monos
                .iter()
                .map(|mono| {
                    one_var = Poly::zero(n);
                    one_var.add_term(mono.clone(), linalg::rat(1));
                    one_var.substitute_linear(&h).to_dense(d as u32)
                })
                .collect()
        });
        let targets = restricted.first().map_or(0, Vec::len);
        for t in 0..targets {
            let mut row = vec![Rat::zero(); cols];
            let mut nonzero = false;
            for (k, image) in restricted.iter().enumerate() {
                if !image[t].is_zero() {
                    nonzero = true;
                    row[e.ends.0 * m + k] += &image[t];
                    row[e.ends.1 * m + k] -= &image[t];
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    rows
}

/// Reduced-echelon dense basis of the degree-`d` solution space.
fn dense_basis(g: &GkmGraph, d: usize) -> Vec<Vec<Rat>> {
    let cols = g.vertex_count() * monomials(g.rank(), d as u32).len();
    let ns = linalg::nullspace(&constraint_rows(g, d), cols);
    linalg::row_space(&ns, cols)
}

/// A basis of the degree-`d` part (cohomological degree `2d`) of the
/// equivariant cohomology, in reduced echelon form with unknowns ordered
/// vertex by vertex and monomials in descending graded-lex order.
pub fn equivariant_basis(g: &GkmGraph, d: usize) -> Vec<EquivariantClass> {
    dense_basis(g, d)
        .iter()
        .map(|v| EquivariantClass::from_dense(g.rank(), g.vertex_count(), d, v))
        .collect()
}

/// Graded solution spaces together with their decomposable subspaces.
struct Graded {
    nvars: usize,
    vertices: usize,
    /// Echelon bases of the equivariant classes, per polynomial degree.
    bases: Vec<Vec<Vec<Rat>>>,
    /// Echelon bases of `H^{>0}(BG) . H_G`, per polynomial degree.
    decomposables: Vec<Vec<Vec<Rat>>>,
}

impl Graded {
    fn compute(g: &GkmGraph, top: usize) -> Graded {
        let n = g.rank();
        let vertices = g.vertex_count();
        let mut bases = Vec::new();
        let mut decomposables = Vec::new();
        for d in 0..=top {
            let basis = dense_basis(g, d);
            let cols = vertices * monomials(n, d as u32).len();
            let dec = if d == 0 {
                Vec::new()
            } else {
                let prev: &Vec<Vec<Rat>> = &bases[d - 1];
                let mut spanning = Vec::new();
                for v in prev {
                    let class = EquivariantClass::from_dense(n, vertices, d - 1, v);
                    for i in 0..n {
                        spanning.push(class.times_poly(&Poly::var(n, i), 1).to_dense());
                    }
                }
                linalg::row_space(&spanning, cols)
            };
            bases.push(basis);
            decomposables.push(dec);
        }
        Graded { nvars: n, vertices, bases, decomposables }
    }

    fn dim(&self, d: usize) -> usize {
        self.bases[d].len()
    }

    fn betti(&self, d: usize) -> usize {
        self.bases[d].len() - self.decomposables[d].len()
    }

    /// Echelon representatives of a basis of the quotient by decomposables.
    fn generators(&self, d: usize) -> Vec<Vec<Rat>> {
        let cols = self.vertices * monomials(self.nvars, d as u32).len();
        let reduced: Vec<Vec<Rat>> = self.bases[d]
            .iter()
            .map(|v| linalg::reduce(v, &self.decomposables[d]))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        linalg::row_space(&reduced, cols)
    }

    fn class(&self, d: usize, v: &[Rat]) -> EquivariantClass {
        EquivariantClass::from_dense(self.nvars, self.vertices, d, v)
    }
}

fn checked_graded(g: &GkmGraph) -> Result<Graded, GkmError> {
    let n = g.rank();
    let graded = Graded::compute(g, n + 1);
    let above = graded.betti(n + 1);
    if above != 0 {
        return Err(GkmError::NonvanishingAboveTop { degree: 2 * (n + 1), dim: above });
    }
    Ok(graded)
}

/// Betti numbers `[b_0, b_2, ..., b_{2n}]` of the ordinary rational cohomology.
pub fn betti_numbers(g: &GkmGraph) -> Result<Vec<usize>, GkmError> {
    let graded = checked_graded(g)?;
    Ok((0..=g.rank()).map(|d| graded.betti(d)).collect())
}

/// Minimal generators of the equivariant cohomology as a module over the
/// polynomial ring, in increasing degree.
pub fn module_generators(g: &GkmGraph) -> Result<Vec<EquivariantClass>, GkmError> {
    let graded = checked_graded(g)?;
    Ok((0..=g.rank()).flat_map(|d| graded.generators(d).into_iter().map(move |v| (d, v))).map(|(d, v)| graded.class(d, &v)).collect())
}

/// Rational cohomology ring `H^*(O; Q)` with a chosen basis in every degree.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    rank: usize,
    vertex_count: usize,
    betti: Vec<usize>,
    basis: Vec<Vec<EquivariantClass>>,
    /// Bases of the decomposables, per degree, in reduced echelon form.
    decomposables: Vec<Vec<Vec<Rat>>>,
    /// Basis representatives reduced modulo decomposables.
    reduced_basis: Vec<Vec<Vec<Rat>>>,
    /// Equivariant classes of each degree, for membership checks.
    equivariant: Vec<Vec<Vec<Rat>>>,
    products: BTreeMap<(usize, usize, usize, usize), Vec<Rat>>,
}

/// Computes the cohomology ring using the module generators as basis.
pub fn ring_structure(g: &GkmGraph) -> Result<CohomologyRing, GkmError> {
    let graded = checked_graded(g)?;
    let n = g.rank();
    let basis: Vec<Vec<EquivariantClass>> =
        (0..=n).map(|d| graded.generators(d).iter().map(|v| graded.class(d, v)).collect()).collect();
    let mut ring = CohomologyRing {
        rank: n,
        vertex_count: g.vertex_count(),
        betti: (0..=n).map(|d| graded.betti(d)).collect(),
        basis: Vec::new(),
        decomposables: graded.decomposables[..=n].to_vec(),
        reduced_basis: Vec::new(),
        equivariant: graded.bases[..=n].to_vec(),
        products: BTreeMap::new(),
    };
    ring.install_basis(basis)?;
    Ok(ring)
}

impl CohomologyRing {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    /// Basis representatives in polynomial degree `d`.
    pub fn basis(&self, d: usize) -> &[EquivariantClass] {
        &self.basis[d]
    }

    /// Structure constants: coordinates of `basis(d1)[i] * basis(d2)[j]` in
    /// `basis(d1 + d2)`; empty when `d1 + d2` exceeds the rank.
    pub fn multiply(&self, d1: usize, i: usize, d2: usize, j: usize) -> Vec<Rat> {
        self.products.get(&(d1, i, d2, j)).cloned().unwrap_or_default()
    }

    /// All structure constants keyed by `(d1, i, d2, j)` with `d1 <= d2`.
    pub fn products(&self) -> &BTreeMap<(usize, usize, usize, usize), Vec<Rat>> {
        &self.products
    }

    /// Coordinates of an equivariant class in the chosen basis of its degree
    /// (its image in ordinary cohomology). Errors if the class does not lie in
    /// the equivariant cohomology.
    pub fn coordinates(&self, class: &EquivariantClass) -> Result<Vec<Rat>, GkmError> {
        let d = class.degree;
        if d > self.rank {
            // everything above the top degree is decomposable
            return Ok(Vec::new());
        }
        let v = class.to_dense();
        if linalg::solve_combination(&self.equivariant[d], &v).is_none() {
            return Err(GkmError::Reduction(format!("class of degree {} violates an edge condition", 2 * d)));
        }
        let r = linalg::reduce(&v, &self.decomposables[d]);
        linalg::solve_combination(&self.reduced_basis[d], &r)
            .ok_or_else(|| GkmError::Reduction(format!("class of degree {} not spanned by the basis", 2 * d)))
    }

    /// Replaces the basis in polynomial degree `d` by the given classes,
    /// which must restrict to a basis of `H^{2d}(O; Q)`.
    pub fn with_basis(&self, d: usize, classes: Vec<EquivariantClass>) -> Result<CohomologyRing, GkmError> {
        if d > self.rank {
            return Err(GkmError::InvalidBasis { degree: 2 * d, reason: "degree exceeds the orbifold dimension".into() });
        }
        if classes.len() != self.betti[d] {
            return Err(GkmError::InvalidBasis {
                degree: 2 * d,
                reason: format!("expected {} classes, got {}", self.betti[d], classes.len()),
            });
        }
        if let Some(c) = classes.iter().find(|c| c.degree != d || c.components.len() != self.vertex_count) {
            return Err(GkmError::InvalidBasis { degree: 2 * d, reason: format!("class of degree {} has the wrong shape", 2 * c.degree) });
        }
        let mut basis = self.basis.clone();
        basis[d] = classes;
        let mut ring = self.clone();
        ring.install_basis(basis)?;
        Ok(ring)
    }

    fn install_basis(&mut self, basis: Vec<Vec<EquivariantClass>>) -> Result<(), GkmError> {
        let mut reduced_basis = Vec::new();
        for (d, classes) in basis.iter().enumerate() {
            let mut reduced = Vec::new();
            for c in classes {
                let v = c.to_dense();
                if linalg::solve_combination(&self.equivariant[d], &v).is_none() {
                    return Err(GkmError::InvalidBasis { degree: 2 * d, reason: "class violates an edge condition".into() });
                }
                reduced.push(linalg::reduce(&v, &self.decomposables[d]));
            }
            let cols = reduced.first().map_or(0, Vec::len);
            if linalg::rank(&reduced, cols) != self.betti[d] {
                return Err(GkmError::InvalidBasis { degree: 2 * d, reason: "classes are dependent modulo decomposables".into() });
            }
            reduced_basis.push(reduced);
        }
        self.basis = basis;
        self.reduced_basis = reduced_basis;
        let mut products = BTreeMap::new();
        let n = self.rank;
        for d1 in 0..=n {
            for d2 in d1..=n {
                for i in 0..self.basis[d1].len() {
                    for j in 0..self.basis[d2].len() {
                        let p = self.basis[d1][i].mul(&self.basis[d2][j]);
                        if d1 + d2 <= n {
                            products.insert((d1, i, d2, j), self.coordinates(&p)?);
                        }
                    }
                }
            }
        }
        self.products = products;
        Ok(())
    }

    fn product_coords(&self, d1: usize, a: &[Rat], d2: usize, b: &[Rat]) -> Vec<Rat> {
        let d = d1 + d2;
        let mut out = vec![Rat::zero(); self.betti[d]];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                let c = if d1 <= d2 { self.multiply(d1, i, d2, j) } else { self.multiply(d2, j, d1, i) };
                for (o, z) in out.iter_mut().zip(c) {
                    *o += x * y * z;
                }
            }
        }
        out
    }

    /// Checks commutativity and associativity of the structure constants.
    pub fn check_associative_commutative(&self) -> bool {
        let n = self.rank;
        let unit = |d: usize, i: usize| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); self.betti[d]];
            v[i] = linalg::rat(1);
            v
        };
        for d1 in 0..=n {
            for d2 in 0..=n - d1 {
                for i in 0..self.betti[d1] {
                    for j in 0..self.betti[d2] {
                        // commutativity, computed from the stored products
                        let p = self.coordinates(&self.basis[d1][i].mul(&self.basis[d2][j]));
                        let q = self.coordinates(&self.basis[d2][j].mul(&self.basis[d1][i]));
                        if p.is_err() || p != q {
                            return false;
                        }
                        for d3 in 0..=n - d1 - d2 {
                            for k in 0..self.betti[d3] {
                                let ab = self.product_coords(d1, &unit(d1, i), d2, &unit(d2, j));
                                let left = self.product_coords(d1 + d2, &ab, d3, &unit(d3, k));
                                let bc = self.product_coords(d2, &unit(d2, j), d3, &unit(d3, k));
                                let right = self.product_coords(d1, &unit(d1, i), d2 + d3, &bc);
                                if left != right {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Outcome of comparing the equivariant Hilbert series with that of a free
/// module over the polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    /// `dim H_G^{2d}` for `d = 0..=2n`.
    pub equivariant_dims: Vec<usize>,
    /// Multiplicity of generators per degree, `d = 0..=2n`.
    pub generator_counts: Vec<usize>,
    /// `dim` predicted by `(sum b_{2d} t^{2d}) / (1 - t^2)^n`.
    pub predicted_dims: Vec<usize>,
    /// Generators vanish above the orbifold dimension.
    pub vanishes_above_top: bool,
    /// Total number of generators equals the number of vertices.
    pub euler_matches: bool,
    pub holds: bool,
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Verifies that the equivariant cohomology is a free module over the
/// polynomial ring by comparing Hilbert series up to degree `4n`.
pub fn poincare_series_check(g: &GkmGraph) -> PoincareReport {
    poincare_series_check_up_to(g, 2 * g.rank())
}

/// As [`poincare_series_check`], truncated at polynomial degree `top`
/// (cohomological degree `2 top`); `top` is raised to at least `n + 1`.
pub fn poincare_series_check_up_to(g: &GkmGraph, top: usize) -> PoincareReport {
    let n = g.rank();
    let top = top.max(n + 1);
    let graded = Graded::compute(g, top);
    let dims: Vec<usize> = (0..=top).map(|d| graded.dim(d)).collect();
    let counts: Vec<usize> = (0..=top).map(|d| graded.betti(d)).collect();
    let predicted: Vec<usize> = (0..=top)
        .map(|d| {
            (0..=d)
                .map(|j| if n == 0 { usize::from(j == d) * counts[j] } else { counts[j] * binomial(d - j + n - 1, n - 1) })
                .sum()
        })
        .collect();
    let vanishes_above_top = counts[n + 1..].iter().all(|&c| c == 0);
    let euler_matches = counts.iter().sum::<usize>() == g.vertex_count();
    let holds = dims == predicted && vanishes_above_top && euler_matches;
    PoincareReport { equivariant_dims: dims, generator_counts: counts, predicted_dims: predicted, vanishes_above_top, euler_matches, holds }
}

/// Rational Poincaré duality `b_{2d} = b_{2(n-d)}`.
pub fn poincare_duality_holds(betti: &[usize]) -> bool {
    betti.iter().eq(betti.iter().rev())
}
