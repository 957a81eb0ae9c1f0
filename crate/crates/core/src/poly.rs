//! Homogeneous polynomials with rational coefficients, i.e. elements of
//! `H^*(BG; Q) = Q[x_1, ..., x_n]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::Rat;

/// Exponent vector ordered by graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponents of total degree `degree` in `nvars` variables, largest first
/// in graded-lex order (`x1^d, x1^(d-1) x2, ...`).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exponent> {
    fn go(nvars: usize, degree: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == nvars {
            prefix.push(degree);
            out.push(Exponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=degree).rev() {
            prefix.push(e);
            go(nvars, degree - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Exponent(Vec::new()));
        }
        return out;
    }
    go(nvars, degree, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Exponent(vec![0; nvars]), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(Exponent(e), Rat::one());
        p
    }

    /// The linear form `sum_i coeffs[i] x_i`.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(Exponent(e), Rat::from_integer(c.clone()));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponent) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Exponent, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, e: Exponent, c: Rat) {
        debug_assert_eq!(e.0.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = Exponent(ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect());
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Substitutes `x_i = sum_k images[k][i] t_k`, giving a polynomial in
    /// `images.len()` variables.
    pub fn substitute_linear(&self, images: &[Vec<BigInt>]) -> Poly {
        let m = images.len();
        let forms: Vec<Poly> = (0..self.nvars)
            .map(|i| Poly::linear(&images.iter().map(|h| h[i].clone()).collect::<Vec<_>>()))
            .collect();
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&forms[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Exact division by the linear form `sum_i l[i] x_i`, or `None` if it
    /// does not divide. Eliminates the first variable with nonzero coefficient.
    pub fn div_linear(&self, l: &[BigInt]) -> Option<Poly> {
        let k = l.iter().position(|x| !x.is_zero())?;
        let lead = Rat::from_integer(l[k].clone());
        let divisor = Poly::linear(l);
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        loop {
            // largest term still involving x_k
            let Some((e, c)) = rem.terms.iter().rev().find(|(e, _)| e.0[k] > 0).map(|(e, c)| (e.clone(), c.clone()))
            else {
                break;
            };
            let mut qe = e.0.clone();
            qe[k] -= 1;
            let mut q = Poly::zero(self.nvars);
            q.add_term(Exponent(qe), c / &lead);
            rem = rem.sub(&q.mul(&divisor));
            quot = quot.add(&q);
        }
        rem.is_zero().then_some(quot)
    }

    /// Coefficients in the order of [`monomials`] for the given degree.
    pub fn to_dense(&self, degree: u32) -> Vec<Rat> {
        monomials(self.nvars, degree).iter().map(|e| self.coefficient(e)).collect()
    }

    pub fn from_dense(nvars: usize, degree: u32, coeffs: &[Rat]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (e, c) in monomials(nvars, degree).into_iter().zip(coeffs) {
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }
}

/// Variable names for rank `n`: `x, y` when `n = 2`, `x1..xn` otherwise.
pub fn variable_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| if k == 1 { self.names[v].clone() } else { format!("{}^{}", self.names[v], k) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{abs}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}
