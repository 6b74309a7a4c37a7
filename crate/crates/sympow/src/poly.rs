//! Homogeneous polynomials in the dual coordinates and the induced
//! substitution action of a matrix.
//!
//! The degree-`d` monomials in `x_1, ..., x_n` are ordered lexicographically
//! by descending exponent vector, so for `n = 2` the basis is
//! `x1^d, x1^{d-1}·x2, ..., x2^d` and index `i` carries exponent
//! `(d-i, i)`. A matrix `A` acts by substitution: `x_i ↦ (row i of A)·x`,
//! extended multiplicatively; [`induced_matrix`] expands that action in the
//! monomial basis, one column per basis monomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::Error;

/// The degree-`d` monomials in `n` variables, in lex-descending order.
#[derive(Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: usize,
    exponents: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn gen_exponents(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for rest in gen_exponents(n - 1, d - first) {
            let mut e = Vec::with_capacity(n);
            e.push(first);
            e.extend(rest);
            out.push(e);
        }
    }
    out
}

/// Build the shared basis object for `n ≥ 1` variables in degree `d`.
pub fn monomial_basis(n: usize, d: usize) -> Arc<MonomialBasis> {
    assert!(n >= 1, "need at least one variable");
    let exponents = gen_exponents(n, d as u32);
    let index = exponents.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Arc::new(MonomialBasis { n, d, exponents, index })
}

impl MonomialBasis {
    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Number of monomials: `C(n+d-1, d)`.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn exponent(&self, i: usize) -> &[u32] {
        &self.exponents[i]
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Human-readable monomial label: `x1^2*x2`, or `1` in degree zero.
    pub fn label(&self, i: usize) -> String {
        let e = &self.exponents[i];
        let mut parts = Vec::new();
        for (k, &exp) in e.iter().enumerate() {
            if exp == 0 {
                continue;
            }
            if exp == 1 {
                parts.push(format!("x{}", k + 1));
            } else {
                parts.push(format!("x{}^{}", k + 1, exp));
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }
}

/// A homogeneous polynomial: coordinates in a [`MonomialBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    basis: Arc<MonomialBasis>,
    field: Field,
    coeffs: Vec<Scalar>,
}

impl HomPoly {
    pub fn new(basis: Arc<MonomialBasis>, field: Field, coeffs: Vec<Scalar>) -> Result<HomPoly, Error> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} monomials, got {} coefficients",
                basis.len(),
                coeffs.len()
            )));
        }
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
        }
        Ok(HomPoly { basis, field, coeffs })
    }

    pub fn zero(basis: Arc<MonomialBasis>, field: Field) -> HomPoly {
        let coeffs = vec![field.zero(); basis.len()];
        HomPoly { basis, field, coeffs }
    }

    /// The `i`-th basis monomial as a polynomial.
    pub fn monomial(basis: Arc<MonomialBasis>, field: Field, i: usize) -> HomPoly {
        let mut p = HomPoly::zero(basis, field);
        p.coeffs[i] = field.one();
        p
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, rhs: &HomPoly) -> Result<HomPoly, Error> {
        self.check_compatible(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(HomPoly { basis: self.basis.clone(), field: self.field, coeffs })
    }

    pub fn sub(&self, rhs: &HomPoly) -> Result<HomPoly, Error> {
        self.check_compatible(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(HomPoly { basis: self.basis.clone(), field: self.field, coeffs })
    }

    pub fn scale(&self, c: &Scalar) -> HomPoly {
        assert_eq!(c.field(), self.field, "scale factor field must match");
        let coeffs = self.coeffs.iter().map(|a| c * a).collect();
        HomPoly { basis: self.basis.clone(), field: self.field, coeffs }
    }

    fn check_compatible(&self, rhs: &HomPoly) -> Result<(), Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        if self.basis.n != rhs.basis.n || self.basis.d != rhs.basis.d {
            return Err(Error::DimensionMismatch(format!(
                "degree {} in {} vars vs degree {} in {} vars",
                self.basis.d, self.basis.n, rhs.basis.d, rhs.basis.n
            )));
        }
        Ok(())
    }

    /// Evaluate at a point, by exact monomial expansion.
    pub fn evaluate(&self, v: &[Scalar]) -> Result<Scalar, Error> {
        if v.len() != self.basis.n {
            return Err(Error::DimensionMismatch(format!(
                "{} variables, point has {} coordinates",
                self.basis.n,
                v.len()
            )));
        }
        for c in v {
            if c.field() != self.field {
                return Err(Error::FieldMismatch(self.field, c.field()));
            }
        }
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (k, &e) in self.basis.exponent(i).iter().enumerate() {
                if e > 0 {
                    term = &term * &v[k].pow(e as u64);
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// Product, landing in degree `d1 + d2`.
    pub fn multiply(&self, rhs: &HomPoly) -> Result<HomPoly, Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        if self.basis.n != rhs.basis.n {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} variables",
                self.basis.n, rhs.basis.n
            )));
        }
        let out_basis = monomial_basis(self.basis.n, self.basis.d + rhs.basis.d);
        let mut out = HomPoly::zero(out_basis, self.field);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let e: Vec<u32> = self
                    .basis
                    .exponent(i)
                    .iter()
                    .zip(rhs.basis.exponent(j))
                    .map(|(x, y)| x + y)
                    .collect();
                let k = out.basis.index_of(&e).expect("product exponent in product basis");
                out.coeffs[k] += &(a * b);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let label = self.basis.label(i);
            if c.is_one() && label != "1" {
                write!(f, "{label}")?;
            } else if label == "1" {
                write!(f, "{}", c.canonical())?;
            } else {
                write!(f, "({})*{label}", c.canonical())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Matrix of the substitution action of `a` on degree-`d` forms.
///
/// Column `j` holds the coefficients of the image of the `j`-th basis
/// monomial under `x_i ↦ (row i of a)·x`. In degree 1 this is `aᵀ`, and the
/// assignment reverses products: the matrix of `a·b` is `matrix(b)·matrix(a)`.
pub fn induced_matrix(a: &Matrix, d: usize) -> Result<Matrix, Error> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch("need a square nonempty matrix".into()));
    }
    let n = a.rows();
    let field = a.field();
    let basis = monomial_basis(n, d);
    let basis1 = monomial_basis(n, 1);
    let row_forms: Vec<HomPoly> = (0..n)
        .map(|i| HomPoly::new(basis1.clone(), field, a.row(i).to_vec()).expect("row length matches"))
        .collect();
    let size = basis.len();
    let mut out = Matrix::zeros(field, size, size);
    let unit = HomPoly::new(monomial_basis(n, 0), field, vec![field.one()]).expect("one coefficient");
    for j in 0..size {
        let mut image = unit.clone();
        for (k, &e) in basis.exponent(j).iter().enumerate() {
            for _ in 0..e {
                image = image.multiply(&row_forms[k])?;
            }
        }
        for (i, c) in image.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.set(i, j, c.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: Vec<Vec<i64>>) -> Matrix {
        let f = Field::Q;
        Matrix::from_rows(
            f,
            rows.into_iter().map(|r| r.into_iter().map(|v| f.from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    fn qv(v: Vec<i64>) -> Vec<Scalar> {
        v.into_iter().map(|x| Field::Q.from_i64(x)).collect()
    }

    #[test]
    fn basis_order_and_size() {
        let b = monomial_basis(2, 2);
        assert_eq!(b.len(), 3);
        assert_eq!(b.exponent(0), &[2, 0]);
        assert_eq!(b.exponent(1), &[1, 1]);
        assert_eq!(b.exponent(2), &[0, 2]);
        assert_eq!(b.labels(), vec!["x1^2", "x1*x2", "x2^2"]);

        let b = monomial_basis(3, 2);
        assert_eq!(b.len(), 6);
        let exps: Vec<&[u32]> = (0..6).map(|i| b.exponent(i)).collect();
        assert_eq!(
            exps,
            vec![
                &[2, 0, 0][..],
                &[1, 1, 0],
                &[1, 0, 1],
                &[0, 2, 0],
                &[0, 1, 1],
                &[0, 0, 2]
            ]
        );

        assert_eq!(monomial_basis(3, 0).labels(), vec!["1"]);
        assert_eq!(monomial_basis(1, 5).labels(), vec!["x1^5"]);
        assert_eq!(b.index_of(&[1, 0, 1]), Some(2));
        assert_eq!(b.index_of(&[3, 0, 0]), None);
    }

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn basis_size_formula() {
        for n in 1..=4 {
            for d in 0..=5 {
                assert_eq!(monomial_basis(n, d).len(), binom(n + d - 1, d), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn evaluate_and_multiply() {
        let f = Field::Q;
        let b2 = monomial_basis(2, 2);
        // x1^2 + 2*x1*x2 at (3,4): 9 + 24 = 33
        let p = HomPoly::new(b2.clone(), f, qv(vec![1, 2, 0])).unwrap();
        assert_eq!(p.evaluate(&qv(vec![3, 4])).unwrap(), f.from_i64(33));

        // (x1 + x2)(x1 - x2) = x1^2 - x2^2
        let b1 = monomial_basis(2, 1);
        let s = HomPoly::new(b1.clone(), f, qv(vec![1, 1])).unwrap();
        let t = HomPoly::new(b1, f, qv(vec![1, -1])).unwrap();
        let prod = s.multiply(&t).unwrap();
        assert_eq!(prod.coeffs(), &qv(vec![1, 0, -1])[..]);

        assert!(p.evaluate(&qv(vec![1, 2, 3])).is_err());
        let b3 = monomial_basis(3, 1);
        let u = HomPoly::new(b3, f, qv(vec![1, 0, 0])).unwrap();
        assert!(s2_err(&u, &prod));
    }

    fn s2_err(a: &HomPoly, b: &HomPoly) -> bool {
        a.multiply(b).is_err()
    }

    #[test]
    fn induced_degree_one_is_transpose() {
        let a = qm(vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(induced_matrix(&a, 1).unwrap(), a.transpose());
    }

    #[test]
    fn induced_unipotent_square() {
        // substitution x1 ↦ x1, x2 ↦ 5·x1 + x2 on degree-2 monomials
        let a = qm(vec![vec![1, 0], vec![5, 1]]);
        let m = induced_matrix(&a, 2).unwrap();
        let expect = qm(vec![vec![1, 5, 25], vec![0, 1, 10], vec![0, 0, 1]]);
        assert_eq!(m, expect);
    }

    #[test]
    fn induced_respects_products_contravariantly() {
        let a = qm(vec![vec![1, 2], vec![0, 1]]);
        let b = qm(vec![vec![1, 0], vec![3, 2]]);
        let ab = a.mul(&b).unwrap();
        for d in 1..=3 {
            let lhs = induced_matrix(&ab, d).unwrap();
            let rhs = induced_matrix(&b, d).unwrap().mul(&induced_matrix(&a, d).unwrap()).unwrap();
            assert_eq!(lhs, rhs, "degree {d}");
        }
    }

    #[test]
    fn induced_compatible_with_evaluation() {
        let f = Field::Q;
        let a = qm(vec![vec![1, 2], vec![0, 3]]);
        let b2 = monomial_basis(2, 2);
        let p = HomPoly::new(b2.clone(), f, qv(vec![1, 2, 0])).unwrap();
        let m = induced_matrix(&a, 2).unwrap();
        let image = HomPoly::new(b2, f, m.apply(p.coeffs()).unwrap()).unwrap();
        let v = qv(vec![1, 1]);
        let av = a.apply(&v).unwrap();
        assert_eq!(image.evaluate(&v).unwrap(), p.evaluate(&av).unwrap());
        assert_eq!(image.evaluate(&v).unwrap(), f.from_i64(27));
    }

    #[test]
    fn induced_degree_zero_is_identity() {
        let a = qm(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(induced_matrix(&a, 0).unwrap(), Matrix::identity(Field::Q, 1));
    }

    #[test]
    fn nilpotent_substitution_is_nilpotent() {
        let a = qm(vec![vec![0, 0], vec![7, 0]]);
        for d in 1..=3 {
            let m = induced_matrix(&a, d).unwrap();
            assert!(m.nilpotency_index().is_some(), "degree {d}");
        }
    }
}
