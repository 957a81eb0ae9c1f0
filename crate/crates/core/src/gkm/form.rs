use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CohomologyRing, EquivariantClass, GkmError};
use crate::linalg::{rat, Rat};

/// The pairing `H^2 x H^2 -> H^4 = Q` of a four-dimensional orbifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    /// Gram matrix in the ring's degree-2 basis.
    pub gram: Vec<Vec<Rat>>,
    /// The class of degree 4 used to identify `H^4` with `Q`.
    pub generator: EquivariantClass,
    /// Rows of `P` with `P * gram * P^T = diag(diagonal)`.
    pub change_of_basis: Vec<Vec<Rat>>,
    pub diagonal: Vec<Rat>,
}

/// Square-free integer in the square class of a nonzero rational,
/// `sqfree(num * den)` with its sign.
pub fn squarefree_part(q: &Rat) -> BigInt {
    assert!(!q.is_zero(), "square class of zero");
    let mut n = (q.numer() * q.denom()).abs();
    let mut out = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut k = 0u32;
        while n.is_multiple_of(&p) {
            n /= &p;
            k += 1;
        }
        if k % 2 == 1 {
            out *= &p;
        }
        p += 1;
    }
    out *= n;
    if q.is_negative() {
        -out
    } else {
        out
    }
}

fn is_rational_square(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rat::new(n, d))
}

fn bilinear(g: &[Vec<Rat>], u: &[Rat], v: &[Rat]) -> Rat {
    let mut s = Rat::zero();
    for i in 0..u.len() {
        for j in 0..v.len() {
            s += &u[i] * &g[i][j] * &v[j];
        }
    }
    s
}

fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for k in c..n {
                let v = &f * &a[c][k];
                a[r][k] -= v;
            }
        }
    }
    det
}

/// Diagonalizes a symmetric rational matrix by congruence.
fn diagonalize(gram: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Rat>) {
    let n = gram.len();
    let mut basis: Vec<Vec<Rat>> = (0..n).map(|i| (0..n).map(|j| rat(i64::from(i == j))).collect()).collect();
    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        // make the pivot anisotropic if possible
        if bilinear(gram, &basis[i], &basis[i]).is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !bilinear(gram, &basis[j], &basis[j]).is_zero()) {
                basis.swap(i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !bilinear(gram, &basis[i], &basis[j]).is_zero()) {
                let sum: Vec<Rat> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                basis[i] = sum;
            }
        }
        let q = bilinear(gram, &basis[i], &basis[i]);
        if !q.is_zero() {
            for j in i + 1..n {
                let f = bilinear(gram, &basis[i], &basis[j]) / &q;
                let adjusted: Vec<Rat> = basis[j].iter().zip(&basis[i]).map(|(b, a)| b - &f * a).collect();
                basis[j] = adjusted;
            }
        }
        diagonal.push(q);
    }
    (basis, diagonal)
}

/// Intersection form of a four-dimensional orbifold, relative to the ring's
/// first degree-4 basis class.
pub fn intersection_form(ring: &CohomologyRing) -> Result<IntersectionForm, GkmError> {
    if ring.rank() != 2 {
        return Err(GkmError::FormRank(ring.rank()));
    }
    if ring.betti()[2] != 1 {
        return Err(GkmError::FormTop(ring.betti()[2]));
    }
    let b2 = ring.betti()[1];
    let gram: Vec<Vec<Rat>> = (0..b2)
        .map(|i| (0..b2).map(|j| {
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            ring.multiply(1, lo, 1, hi)[0].clone()
        }).collect())
        .collect();
    if determinant(&gram).is_zero() {
        return Err(GkmError::DegenerateForm);
    }
    let (change_of_basis, diagonal) = diagonalize(&gram);
    Ok(IntersectionForm { gram, generator: ring.basis(2)[0].clone(), change_of_basis, diagonal })
}

impl IntersectionForm {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn determinant(&self) -> Rat {
        determinant(&self.gram)
    }

    /// Square-free representatives of the diagonal entries.
    pub fn squarefree_diagonal(&self) -> Vec<BigInt> {
        self.diagonal.iter().map(squarefree_part).collect()
    }

    /// Diagonal after rescaling the `H^4` generator so that the first entry
    /// becomes a square: `(1, sqfree(q_2 q_1), ...)`. Independent of the
    /// scale of the generator.
    pub fn normalized_diagonal(&self) -> Vec<BigInt> {
        let Some(first) = self.diagonal.first() else { return Vec::new() };
        self.diagonal.iter().map(|q| squarefree_part(&(q * first))).collect()
    }

    /// Square class of the determinant. For rank two it does not depend on
    /// the scale of the `H^4` generator.
    pub fn determinant_class(&self) -> BigInt {
        squarefree_part(&self.determinant())
    }

    /// Evaluates the form on two coordinate vectors.
    pub fn pair(&self, u: &[Rat], v: &[Rat]) -> Rat {
        bilinear(&self.gram, u, v)
    }

    /// For a rank-two form congruent to `[[0, 1], [1, 0]]`, a basis
    /// `(e, f)` with `e.e = f.f = 0` and `e.f = 1`; `None` otherwise.
    pub fn hyperbolic_basis(&self) -> Option<[Vec<Rat>; 2]> {
        if self.rank() != 2 {
            return None;
        }
        let (a, b, c) = (&self.gram[0][0], &self.gram[0][1], &self.gram[1][1]);
        let disc = b * b - a * c;
        let root = is_rational_square(&disc)?;
        // isotropic vector: a t^2 + 2 b t + c = 0 with t = e_0 / e_1
        let e = if a.is_zero() { vec![rat(1), rat(0)] } else { vec![(-b + root) / a, rat(1)] };
        let probe = [vec![rat(1), rat(0)], vec![rat(0), rat(1)]]
            .into_iter()
            .find(|w| !self.pair(&e, w).is_zero())?;
        let s = self.pair(&e, &probe);
        let w: Vec<Rat> = probe.iter().map(|x| x / &s).collect();
        let half = self.pair(&w, &w) / rat(2);
        let f: Vec<Rat> = w.iter().zip(&e).map(|(x, y)| x - &half * y).collect();
        Some([e, f])
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{square, square_labels};
    use super::super::{ring_structure, weights_from_labels};
    use super::*;

    fn form(a: i64, b: i64, c: i64, d: i64) -> IntersectionForm {
        let g = weights_from_labels(&square(), &square_labels(a, b, c, d)).unwrap();
        intersection_form(&ring_structure(&g).unwrap()).unwrap()
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_part(&rat(-8)), BigInt::from(-2));
        assert_eq!(squarefree_part(&(rat(3) / rat(4))), BigInt::from(3));
        assert_eq!(squarefree_part(&(rat(5) / rat(2))), BigInt::from(10));
        assert_eq!(squarefree_part(&rat(1)), BigInt::from(1));
    }

    #[test]
    fn normalized_diagonals_match_closed_form() {
        for (a, b, c, d) in [(1i64, 1i64, 1i64, 2i64), (1, 2, 3, 1), (2, 1, 1, 1)] {
            let f = form(a, b, c, d);
            let expected = squarefree_part(&rat(-a * d * (a * d - b * c)));
            assert_eq!(f.normalized_diagonal(), vec![BigInt::one(), expected]);
            // the congruence really diagonalizes the Gram matrix
            for i in 0..2 {
                for j in 0..2 {
                    let v = f.pair(&f.change_of_basis[i], &f.change_of_basis[j]);
                    assert_eq!(v, if i == j { f.diagonal[i].clone() } else { rat(0) });
                }
            }
        }
    }

    #[test]
    fn product_of_spheres_is_hyperbolic() {
        let f = form(1, 0, 0, 1);
        let [e, h] = f.hyperbolic_basis().unwrap();
        assert_eq!(f.pair(&e, &e), rat(0));
        assert_eq!(f.pair(&h, &h), rat(0));
        assert_eq!(f.pair(&e, &h), rat(1));
        assert!(form(1, 1, 1, 2).hyperbolic_basis().is_none());
    }

    #[test]
    fn four_sphere_has_empty_form() {
        use crate::lattice::LabelMap;
        use crate::poset::{build_product_poset, CombinatorialType, Factor};
        let p = build_product_poset(&CombinatorialType::new(vec![Factor::Suspension(2)]).unwrap());
        let g = weights_from_labels(&p, &LabelMap::from_columns(2, &[vec![1, 0], vec![0, 1]]).unwrap()).unwrap();
        let f = intersection_form(&ring_structure(&g).unwrap()).unwrap();
        assert_eq!(f.rank(), 0);
        assert!(f.normalized_diagonal().is_empty());
        assert_eq!(f.determinant_class(), BigInt::one());
    }
}
