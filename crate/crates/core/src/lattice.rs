//! Exact integer linear algebra on cocharacter lattices.
//!
//! Everything is carried out over arbitrary-precision integers: Smith normal
//! form with explicit unimodular transforms, saturated kernels, elementary
//! divisors and primitive kernel generators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poset::FacePoset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix is not surjective over Q (rank {rank} < {rows} rows)")]
    NotSurjective { rank: usize, rows: usize },
    #[error("expected a one-dimensional rational kernel, found dimension {0}")]
    KernelDimension(usize),
    #[error("label column {0} is zero")]
    ZeroLabel(usize),
    #[error("label map has {found} columns but the poset has {expected} facets")]
    ColumnCount { expected: usize, found: usize },
    #[error("face `{0}` is not a vertex")]
    NotAVertex(String),
    #[error("face index {0} out of range")]
    NoSuchFace(usize),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. All rows must have the same length.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: rows.len(), cols, data }
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<T: Clone + Into<BigInt>>(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let columns: Vec<Vec<BigInt>> = cols.iter().map(|&j| self.column(j)).collect();
        Self::from_columns(self.rows, &columns)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant of a square matrix by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * m * v == d` with `u`, `v` unimodular and `d` diagonal, `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { u, d, v, v_inv };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &pivot);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &pivot);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                // inverse of the column operation acts on rows of v_inv
                let back = -q;
                v_inv.add_row(t, j, &back);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                let one = BigInt::one();
                d.add_row(t, i, &one);
                u.add_row(t, i, &one);
                continue;
            }
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v, v_inv }
}

/// A sublattice of `Z^ambient` given by a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    pub ambient: usize,
    pub basis: Vec<Vec<BigInt>>,
    pub saturated: bool,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Saturation of the span of `vectors`: the rational span intersected
    /// with `Z^ambient`, returned in canonical echelon form.
    pub fn saturation_of(ambient: usize, vectors: &[Vec<BigInt>]) -> Sublattice {
        if vectors.is_empty() {
            return Sublattice { ambient, basis: Vec::new(), saturated: true };
        }
        // rows of b are the vectors; b = u^-1 d v^-1, so the row space is
        // rationally spanned by the first rank rows of v^-1, which are part
        // of a unimodular matrix and hence span a saturated lattice
        let b = IntMatrix::from_rows(vectors);
        let snf = smith_normal_form(&b);
        let rank = snf.rank();
        let rows: Vec<Vec<BigInt>> = (0..rank).map(|i| snf.v_inv.row(i)).collect();
        Sublattice { ambient, basis: echelon_from_trailing(&rows), saturated: true }
    }

    /// True iff the basis spans a saturated lattice (all elementary divisors 1).
    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        let snf = smith_normal_form(&self.basis_matrix());
        snf.rank() == self.basis.len() && snf.elementary_divisors().iter().all(One::is_one)
    }

    /// Restriction of every basis vector to the given coordinates.
    pub fn restrict(&self, coords: &[usize]) -> Vec<Vec<BigInt>> {
        self.basis
            .iter()
            .map(|v| coords.iter().map(|&i| v[i].clone()).collect())
            .collect()
    }
}

/// Hermite-style echelon basis of the lattice spanned by `rows`, with pivots
/// taken from the trailing coordinate backwards. Pivots are positive, entries
/// sharing a pivot column are reduced into `[0, pivot)`. Output is ordered by
/// ascending pivot column.
pub fn echelon_from_trailing(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let Some(dim) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut rows: Vec<Vec<BigInt>> = rows.to_vec();
    let mut next = 0;
    for col in (0..dim).rev() {
        if next == rows.len() {
            break;
        }
        for i in next + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            if rows[next][col].is_zero() {
                rows.swap(next, i);
                continue;
            }
            let a = rows[next][col].clone();
            let b = rows[i][col].clone();
            let egcd = a.extended_gcd(&b);
            let (g, s, t) = (egcd.gcd, egcd.x, egcd.y);
            let (ag, bg) = (&a / &g, &b / &g);
            let p: Vec<BigInt> = (0..dim).map(|k| &s * &rows[next][k] + &t * &rows[i][k]).collect();
            let q: Vec<BigInt> = (0..dim).map(|k| &ag * &rows[i][k] - &bg * &rows[next][k]).collect();
            rows[next] = p;
            rows[i] = q;
        }
        if rows[next][col].is_zero() {
            continue;
        }
        if rows[next][col].is_negative() {
            rows[next].iter_mut().for_each(|x| *x = -x.clone());
        }
        let pivot = rows[next][col].clone();
        for i in 0..next {
            let q = rows[i][col].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for k in 0..dim {
                let v = &q * &rows[next][k];
                rows[i][k] -= v;
            }
        }
        next += 1;
    }
    rows.truncate(next);
    rows.reverse();
    rows
}

/// Saturated basis of `{v in Z^cols : m v = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> Sublattice {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let raw: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| snf.v.column(j)).collect();
    Sublattice::saturation_of(m.cols(), &raw)
}

/// Elementary divisors greater than one. Requires `m` to be surjective over Q.
pub fn cokernel_invariants(m: &IntMatrix) -> Result<Vec<BigInt>, LatticeError> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    if rank < m.rows() {
        return Err(LatticeError::NotSurjective { rank, rows: m.rows() });
    }
    Ok(snf.elementary_divisors().into_iter().filter(|d| !d.is_one()).collect())
}

/// Primitive generator of a one-dimensional kernel, first nonzero entry positive.
pub fn primitive_generator(m: &IntMatrix) -> Result<Vec<BigInt>, LatticeError> {
    let k = kernel_basis(m);
    if k.rank() != 1 {
        return Err(LatticeError::KernelDimension(k.rank()));
    }
    let mut v = k.basis.into_iter().next().unwrap_or_default();
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_one() && !g.is_zero() {
        v.iter_mut().for_each(|x| *x = &*x / &g);
    }
    normalize_sign(&mut v);
    Ok(v)
}

/// Flips `v` so that its first nonzero entry is positive.
pub fn normalize_sign(v: &mut [BigInt]) {
    if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
}

/// True iff `m` is injective over Q with all elementary divisors equal to 1,
/// i.e. it maps `Z^cols` isomorphically onto a direct summand.
pub fn is_unimodular_onto_image(m: &IntMatrix) -> bool {
    let snf = smith_normal_form(m);
    snf.rank() == m.cols() && snf.elementary_divisors().iter().all(One::is_one)
}

/// Generalized cross product of `n - 1` vectors in `Z^n`: the signed maximal
/// minors. It annihilates every input vector.
pub fn cofactor_vector(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.rows();
    assert_eq!(m.cols() + 1, n, "cofactor vector needs an n x (n-1) matrix");
    (0..n)
        .map(|i| {
            let rows: Vec<Vec<BigInt>> = (0..n).filter(|&r| r != i).map(|r| m.row(r)).collect();
            let minor = if rows.is_empty() {
                BigInt::one()
            } else {
                IntMatrix::from_rows(&rows).determinant()
            };
            if i % 2 == 0 { minor } else { -minor }
        })
        .collect()
}

/// The label map as a `k x #facets` matrix, one column per facet in facet order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    matrix: IntMatrix,
}

impl LabelMap {
    pub fn new(matrix: IntMatrix) -> Result<Self, LatticeError> {
        if let Some(j) = (0..matrix.cols()).find(|&j| matrix.column(j).iter().all(Zero::is_zero)) {
            return Err(LatticeError::ZeroLabel(j));
        }
        Ok(LabelMap { matrix })
    }

    pub fn from_columns<T: Clone + Into<BigInt>>(rank: usize, columns: &[Vec<T>]) -> Result<Self, LatticeError> {
        Self::new(IntMatrix::from_columns(rank, columns))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows()
    }

    pub fn facet_count(&self) -> usize {
        self.matrix.cols()
    }

    pub fn label(&self, facet: usize) -> Vec<BigInt> {
        self.matrix.column(facet)
    }

    pub fn check_against(&self, poset: &FacePoset) -> Result<(), LatticeError> {
        if self.facet_count() != poset.facet_count() {
            return Err(LatticeError::ColumnCount { expected: poset.facet_count(), found: self.facet_count() });
        }
        Ok(())
    }

    /// Label columns of the facets containing `face`, in facet order.
    pub fn face_submatrix(&self, poset: &FacePoset, face: usize) -> Result<IntMatrix, LatticeError> {
        self.check_against(poset)?;
        let f = poset.faces().get(face).ok_or(LatticeError::NoSuchFace(face))?;
        let cols: Vec<usize> = f.facets.iter().copied().collect();
        Ok(self.matrix.select_columns(&cols))
    }

    /// The `k x n` restriction of the label map to `T(q)` at a vertex.
    pub fn vertex_submatrix(&self, poset: &FacePoset, vertex: usize) -> Result<IntMatrix, LatticeError> {
        let f = poset.faces().get(vertex).ok_or(LatticeError::NoSuchFace(vertex))?;
        if f.dim != 0 || f.facets.len() != poset.rank() {
            return Err(LatticeError::NotAVertex(f.id.clone()));
        }
        self.face_submatrix(poset, vertex)
    }
}
