//! Dense matrices over an exact scalar field, with row-reduction utilities.
//!
//! Everything downstream (kernels, centers, homomorphism checks, canonical
//! subspace comparisons) reduces to exact Gaussian elimination here. Pivoting
//! is deterministic: the first nonzero entry in column order wins, so reduced
//! forms and kernel bases are canonical for a given input.

use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Field, Scalar};
use crate::Error;

/// Accepts scalars in JSON as either bare integers or canonical strings.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum NumOrStr {
    Num(i64),
    Str(String),
}

impl NumOrStr {
    pub(crate) fn into_scalar(self, field: Field) -> Result<Scalar, Error> {
        match self {
            NumOrStr::Num(v) => Ok(field.from_i64(v)),
            NumOrStr::Str(s) => field.parse_scalar(&s),
        }
    }
}

/// A dense `rows × cols` matrix with entries in a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix, Error> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::FieldMismatch(field, e.field()));
            }
        }
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { field, rows, cols, entries }
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(field, rows, cols, |_, _| field.zero())
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix::from_fn(field, n, n, |i, j| if i == j { field.one() } else { field.zero() })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(field: Field, diag: &[Scalar]) -> Result<Matrix, Error> {
        let n = diag.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch(field, d.field()));
            }
            m.set(i, i, d.clone());
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field must match matrix field");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        self.check_same_shape(rhs)?;
        Ok(Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        self.check_same_shape(rhs)?;
        Ok(Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        assert_eq!(c.field(), self.field, "scale factor field must match matrix field");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| c * self.get(i, j))
    }

    fn check_same_shape(&self, rhs: &Matrix) -> Result<(), Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(self.field, rhs.field));
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `A·v` with `v` a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        for e in v {
            if e.field() != self.field {
                return Err(Error::FieldMismatch(self.field, e.field()));
            }
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = self.field.zero();
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    acc += &(a * &v[j]);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Matrix, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("pow of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.field, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Reduced row echelon form and rank. Deterministic: the first nonzero
    /// pivot in scan order is used, and pivots are normalized to 1.
    pub fn rref(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            let Some(r) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            let inv = m.get(pivot_row, col).inv().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = &inv * m.get(pivot_row, j);
                m.set(pivot_row, j, v);
            }
            for r2 in 0..m.rows {
                if r2 == pivot_row || m.get(r2, col).is_zero() {
                    continue;
                }
                let factor = m.get(r2, col).clone();
                for j in col..m.cols {
                    let v = m.get(r2, j) - &(&factor * m.get(pivot_row, j));
                    m.set(r2, j, v);
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        (m, pivot_row)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Null space `{v : A·v = 0}` as a canonical subspace of `F^cols`.
    pub fn kernel(&self) -> Subspace {
        let (r, rank) = self.rref();
        let mut pivot_cols = Vec::with_capacity(rank);
        for row in 0..rank {
            if let Some(j) = (0..self.cols).find(|&j| !r.get(row, j).is_zero()) {
                pivot_cols.push(j);
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (prow, &pcol) in pivot_cols.iter().enumerate() {
                v[pcol] = -r.get(prow, free);
            }
            basis.push(v);
        }
        Subspace::from_spanning(self.field, self.cols, basis)
    }

    /// Inverse via Gauss-Jordan on `[A | I]`; `Err(Singular)` if not invertible.
    pub fn inverse(&self) -> Result<Matrix, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let aug = Matrix::from_fn(self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        let (r, _) = aug.rref();
        for i in 0..n {
            for j in 0..n {
                let expect_one = i == j;
                if r.get(i, j).is_one() != expect_one || (!expect_one && !r.get(i, j).is_zero()) {
                    return Err(Error::Singular);
                }
            }
        }
        Ok(Matrix::from_fn(self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// One solution of `A·x = b` (free variables set to zero), or `Ok(None)`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, Error> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} equations, {} right-hand sides",
                self.rows,
                b.len()
            )));
        }
        for e in b {
            if e.field() != self.field {
                return Err(Error::FieldMismatch(self.field, e.field()));
            }
        }
        let aug = Matrix::from_fn(self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, rank) = aug.rref();
        // Inconsistent iff some pivot lands in the last column.
        for i in 0..rank {
            let lead = (0..=self.cols).find(|&j| !r.get(i, j).is_zero());
            if lead == Some(self.cols) {
                return Ok(None);
            }
        }
        let mut x = vec![self.field.zero(); self.cols];
        for i in 0..rank {
            if let Some(j) = (0..self.cols).find(|&j| !r.get(i, j).is_zero()) {
                x[j] = r.get(i, self.cols).clone();
            }
        }
        Ok(Some(x))
    }

    /// Smallest `m ≥ 1` with `A^m = 0`, or `None` if `A` is not nilpotent.
    pub fn nilpotency_index(&self) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let mut power = self.clone();
        for m in 1..=self.rows.max(1) {
            if power.is_zero() {
                return Some(m);
            }
            power = power.mul(self).expect("square matrix product");
        }
        if power.is_zero() {
            Some(self.rows)
        } else {
            None
        }
    }

    pub fn trace(&self) -> Result<Scalar, Error> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("trace of a non-square matrix".into()));
        }
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t += self.get(i, i);
        }
        Ok(t)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(Scalar::canonical).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Matrix", 4)?;
        st.serialize_field("field", &self.field.tag())?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::canonical).collect())
            .collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct MatrixRepr {
    field: String,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<NumOrStr>>,
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Matrix, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        let field = Field::from_tag(&repr.field).map_err(D::Error::custom)?;
        if repr.entries.len() != repr.rows {
            return Err(D::Error::custom(format!(
                "expected {} rows, got {}",
                repr.rows,
                repr.entries.len()
            )));
        }
        let mut rows = Vec::with_capacity(repr.rows);
        for row in repr.entries {
            if row.len() != repr.cols {
                return Err(D::Error::custom(format!("expected {} columns", repr.cols)));
            }
            let mut out = Vec::with_capacity(repr.cols);
            for cell in row {
                out.push(cell.into_scalar(field).map_err(D::Error::custom)?);
            }
            rows.push(out);
        }
        Matrix::from_rows(field, rows).map_err(D::Error::custom)
    }
}

/// A linear subspace of `F^ambient`, stored as a canonical (RREF, no zero
/// rows) basis so that equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Canonicalize a spanning set (rows) into an RREF basis.
    pub fn from_spanning(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
        let m = Matrix::from_rows(field, rows).unwrap_or_else(|_| Matrix::zeros(field, 0, ambient));
        let m = if m.cols() == ambient {
            m
        } else if m.rows() == 0 {
            Matrix::zeros(field, 0, ambient)
        } else {
            panic!("spanning vectors must have length {ambient}");
        };
        let (r, rank) = m.rref();
        let basis = Matrix::from_fn(field, rank, ambient, |i, j| r.get(i, j).clone());
        Subspace { field, ambient, basis }
    }

    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace::from_spanning(field, ambient, Vec::new())
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let rows = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { field.one() } else { field.zero() })
                    .collect()
            })
            .collect();
        Subspace::from_spanning(field, ambient, rows)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut rows = self.basis_rows();
        rows.push(v.to_vec());
        let stacked = Matrix::from_rows(self.field, rows).expect("consistent row lengths");
        stacked.rank() == self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
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
    fn rref_examples() {
        let (r, rank) = qm(vec![vec![2, 4], vec![1, 2]]).rref();
        assert_eq!(rank, 1);
        assert_eq!(r, qm(vec![vec![1, 2], vec![0, 0]]));

        let f2 = Field::prime(2).unwrap();
        let m = Matrix::from_rows(
            f2,
            vec![vec![f2.from_i64(1), f2.from_i64(1)], vec![f2.from_i64(0), f2.from_i64(1)]],
        )
        .unwrap();
        let (r, rank) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(r, Matrix::identity(f2, 2));

        assert_eq!(Matrix::zeros(Field::Q, 3, 3).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        let k = qm(vec![vec![1, 2], vec![2, 4]]).kernel();
        assert_eq!(k.dim(), 1);
        assert_eq!(k, Subspace::from_spanning(Field::Q, 2, vec![qv(vec![-2, 1])]));
        assert!(k.contains(&qv(vec![-2, 1])));
        assert!(k.contains(&qv(vec![4, -2])));
        assert!(!k.contains(&qv(vec![1, 0])));

        let k = qm(vec![vec![0, 1], vec![0, 0]]).kernel();
        assert_eq!(k, Subspace::from_spanning(Field::Q, 2, vec![qv(vec![1, 0])]));

        assert_eq!(qm(vec![vec![1, 1], vec![0, 1]]).kernel().dim(), 0);
        assert_eq!(Matrix::zeros(Field::Q, 2, 2).kernel().dim(), 2);
    }

    #[test]
    fn rank_nullity_small() {
        for m in [
            qm(vec![vec![1, 2, 3], vec![4, 5, 6]]),
            qm(vec![vec![1, 2, 3], vec![2, 4, 6]]),
            qm(vec![vec![0, 0, 0], vec![0, 0, 0]]),
        ] {
            assert_eq!(m.rank() + m.kernel().dim(), m.cols());
        }
    }

    #[test]
    fn inverse_examples() {
        let m = qm(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(m.inverse().unwrap(), qm(vec![vec![1, -1], vec![0, 1]]));
        assert!(matches!(qm(vec![vec![1, 2], vec![2, 4]]).inverse(), Err(Error::Singular)));

        let qi = Field::Qi;
        let rot = Matrix::from_rows(
            qi,
            vec![vec![qi.from_i64(0), qi.from_i64(-1)], vec![qi.from_i64(1), qi.from_i64(0)]],
        )
        .unwrap();
        let inv = rot.inverse().unwrap();
        assert_eq!(rot.mul(&inv).unwrap(), Matrix::identity(qi, 2));
    }

    #[test]
    fn solve_examples() {
        let m = qm(vec![vec![1, 1], vec![0, 1]]);
        let x = m.solve(&qv(vec![3, 1])).unwrap().unwrap();
        assert_eq!(x, qv(vec![2, 1]));

        // inconsistent: x + 2y = 1, 2x + 4y = 3
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        assert!(m.solve(&qv(vec![1, 3])).unwrap().is_none());
        // consistent with free variable: picks the free var = 0 solution
        let x = m.solve(&qv(vec![1, 2])).unwrap().unwrap();
        assert_eq!(x, qv(vec![1, 0]));
    }

    #[test]
    fn nilpotency_index_examples() {
        let strict = qm(vec![vec![0, 0, 0], vec![1, 0, 0], vec![4, 5, 0]]);
        assert_eq!(strict.nilpotency_index(), Some(3));
        assert_eq!(qm(vec![vec![0, 1], vec![0, 0]]).nilpotency_index(), Some(2));
        assert_eq!(Matrix::identity(Field::Q, 2).nilpotency_index(), None);
        assert_eq!(Matrix::zeros(Field::Q, 2, 2).nilpotency_index(), Some(1));
    }

    #[test]
    fn mul_apply_trace() {
        let a = qm(vec![vec![1, 2], vec![3, 4]]);
        let b = qm(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), qm(vec![vec![2, 1], vec![4, 3]]));
        assert_eq!(a.apply(&qv(vec![1, 1])).unwrap(), qv(vec![3, 7]));
        assert_eq!(a.trace().unwrap(), Field::Q.from_i64(5));
        assert_eq!(a.transpose(), qm(vec![vec![1, 3], vec![2, 4]]));
        assert!(a.mul(&qm(vec![vec![1, 2, 3]])).is_err());
    }

    #[test]
    fn subspace_canonical_equality() {
        // span{(2,4)} == span{(1,2)}
        let s1 = Subspace::from_spanning(Field::Q, 2, vec![qv(vec![2, 4])]);
        let s2 = Subspace::from_spanning(Field::Q, 2, vec![qv(vec![1, 2])]);
        assert_eq!(s1, s2);
        let s3 = Subspace::from_spanning(Field::Q, 2, vec![qv(vec![1, 2]), qv(vec![0, 1])]);
        assert_eq!(s3.dim(), 2);
        assert_eq!(s3, Subspace::full(Field::Q, 2));
        assert_eq!(Subspace::zero(Field::Q, 2).dim(), 0);
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = qm(vec![vec![1, 2], vec![3, 4]]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"field":"Q","rows":2,"cols":2,"entries":[["1","2"],["3","4"]]}"#);
        let back: Matrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);

        // integers accepted on input
        let back: Matrix = serde_json::from_str(r#"{"field":"Q","rows":2,"cols":2,"entries":[[1,2],[3,4]]}"#).unwrap();
        assert_eq!(back, m);

        let qi: Matrix = serde_json::from_str(r#"{"field":"Qi","rows":1,"cols":2,"entries":[["i","1/2-3i"]]}"#).unwrap();
        assert_eq!(qi.get(0, 1).canonical(), "1/2-3i");

        assert!(serde_json::from_str::<Matrix>(r#"{"field":"F4","rows":1,"cols":1,"entries":[[1]]}"#).is_err());
        assert!(serde_json::from_str::<Matrix>(r#"{"field":"Q","rows":2,"cols":2,"entries":[[1,2]]}"#).is_err());
    }
}
