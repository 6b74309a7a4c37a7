//! The bracket construction: from a matrix-eigenvector pair to a Lie algebra
//! structure on degree-`d` forms.
//!
//! Inputs are a square matrix `A` (the map `φ`) and an eigenvector `w` of
//! `A`. Writing `φ*` for the substitution action of `A` on forms, the bracket
//! on two degree-`d` forms is
//!
//! ```text
//! [f, g] = g(w)·φ*(f) − f(w)·φ*(g)
//! ```
//!
//! which is bilinear, alternating, and satisfies Jacobi precisely because
//! `w` is an eigenvector. [`structure_constants`] expands the bracket on the
//! monomial basis of one degree; [`graded_table`] stacks the blocks for all
//! degrees up to a bound, with zero bracket across blocks.

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::field::{Field, Scalar};
use crate::matrix::{Matrix, NumOrStr};
use crate::poly::{monomial_basis, HomPoly};
use crate::Error;

/// A validated `(A, w, λ)` triple: `w` is an eigenvector of `A` with
/// eigenvalue `λ`. Degenerate means `w = 0` or `A = 0`; such seeds produce
/// abelian algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPair {
    a: Matrix,
    w: Vec<Scalar>,
    lambda: Scalar,
    degenerate: bool,
}

impl SeedPair {
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn w(&self) -> &[Scalar] {
        &self.w
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn nvars(&self) -> usize {
        self.a.rows()
    }

    /// Re-validate over `Q(i)` after embedding a rational seed.
    pub fn to_gaussian(&self) -> Result<SeedPair, Error> {
        let a = Matrix::from_fn(Field::Qi, self.a.rows(), self.a.cols(), |i, j| {
            self.a.get(i, j).to_gaussian().expect("rational or Gaussian entry")
        });
        if self.field() != Field::Q && self.field() != Field::Qi {
            return Err(Error::UnsupportedField(self.field()));
        }
        let w: Result<Vec<Scalar>, Error> = self.w.iter().map(Scalar::to_gaussian).collect();
        validate_seed(&a, &w?)
    }
}

/// Check that `w` is an eigenvector of `a` and compute its eigenvalue.
///
/// The eigenvalue is read off at the first nonzero coordinate of `w`; the
/// zero vector is accepted as a degenerate seed with `λ = 0`.
pub fn validate_seed(a: &Matrix, w: &[Scalar]) -> Result<SeedPair, Error> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::DimensionMismatch("need a square nonempty matrix".into()));
    }
    if w.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, w has length {}",
            a.rows(),
            a.cols(),
            w.len()
        )));
    }
    let field = a.field();
    for c in w {
        if c.field() != field {
            return Err(Error::FieldMismatch(field, c.field()));
        }
    }
    let aw = a.apply(w)?;
    let lambda = match w.iter().position(|c| !c.is_zero()) {
        None => field.zero(),
        Some(j) => aw[j].div(&w[j])?,
    };
    for (k, (got, wk)) in aw.iter().zip(w).enumerate() {
        let want = &lambda * wk;
        if *got != want {
            return Err(Error::NotAnEigenvector(format!(
                "(A·w)[{k}] = {} but λ·w[{k}] = {} with λ = {}",
                got.canonical(),
                want.canonical(),
                lambda.canonical()
            )));
        }
    }
    let degenerate = w.iter().all(Scalar::is_zero) || a.is_zero();
    Ok(SeedPair { a: a.clone(), w: w.to_vec(), lambda, degenerate })
}

/// `[f, g] = g(w)·φ*(f) − f(w)·φ*(g)` for two degree-`d` forms.
pub fn bracket(seed: &SeedPair, f: &HomPoly, g: &HomPoly) -> Result<HomPoly, Error> {
    if f.basis().nvars() != seed.nvars() || g.basis().nvars() != seed.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "seed has {} variables, forms have {} and {}",
            seed.nvars(),
            f.basis().nvars(),
            g.basis().nvars()
        )));
    }
    if f.basis().degree() != g.basis().degree() {
        return Err(Error::DimensionMismatch(format!(
            "degree {} vs {}",
            f.basis().degree(),
            g.basis().degree()
        )));
    }
    if f.field() != seed.field() || g.field() != seed.field() {
        return Err(Error::FieldMismatch(seed.field(), f.field()));
    }
    let phi = crate::poly::induced_matrix(seed.a(), f.basis().degree())?;
    let fw = f.evaluate(seed.w())?;
    let gw = g.evaluate(seed.w())?;
    let phi_f = HomPoly::new(f.basis().clone(), f.field(), phi.apply(f.coeffs())?)?;
    let phi_g = HomPoly::new(g.basis().clone(), g.field(), phi.apply(g.coeffs())?)?;
    phi_f.scale(&gw).sub(&phi_g.scale(&fw))
}

/// Construction data carried along with a structure-constant table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub a: Matrix,
    pub w: Vec<Scalar>,
    pub lambda: Scalar,
    pub d: usize,
}

/// An antisymmetric bracket on a finite basis, stored as sparse structure
/// constants: `constants[(i, j)]` (only `i < j`) lists the nonzero
/// coordinates of `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieTable {
    dim: usize,
    labels: Vec<String>,
    field: Field,
    constants: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    provenance: Option<Provenance>,
}

impl LieTable {
    pub fn new(
        dim: usize,
        labels: Vec<String>,
        field: Field,
        constants: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
        provenance: Option<Provenance>,
    ) -> Result<LieTable, Error> {
        if labels.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for dimension {}",
                labels.len(),
                dim
            )));
        }
        for (&(i, j), coeffs) in &constants {
            if i >= j || j >= dim {
                return Err(Error::InvalidParameter(format!(
                    "constants key ({i}, {j}) must satisfy i < j < {dim}"
                )));
            }
            let mut last: Option<usize> = None;
            for (k, v) in coeffs {
                if *k >= dim {
                    return Err(Error::InvalidParameter(format!("coordinate {k} out of range")));
                }
                if let Some(prev) = last {
                    if *k <= prev {
                        return Err(Error::InvalidParameter(
                            "coordinates must be strictly increasing".into(),
                        ));
                    }
                }
                last = Some(*k);
                if v.is_zero() {
                    return Err(Error::InvalidParameter("zero coefficient stored".into()));
                }
                if v.field() != field {
                    return Err(Error::FieldMismatch(field, v.field()));
                }
            }
        }
        if let Some(p) = &provenance {
            if p.a.field() != field {
                return Err(Error::FieldMismatch(field, p.a.field()));
            }
        }
        Ok(LieTable { dim, labels, field, constants, provenance })
    }

    /// The zero bracket on `dim` generators.
    pub fn abelian(field: Field, labels: Vec<String>) -> LieTable {
        LieTable {
            dim: labels.len(),
            labels,
            field,
            constants: BTreeMap::new(),
            provenance: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn constants(&self) -> &BTreeMap<(usize, usize), Vec<(usize, Scalar)>> {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Sparse coordinates of `[e_i, e_j]`, any `i`, `j`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        if i == j {
            return Vec::new();
        }
        if i < j {
            self.constants.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            self.constants
                .get(&(j, i))
                .map(|cs| cs.iter().map(|(k, v)| (*k, -v)).collect())
                .unwrap_or_default()
        }
    }

    /// `[x, y]` for coordinate vectors, by bilinear expansion.
    pub fn bracket_vectors(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>, Error> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "table dimension {}, vectors of length {} and {}",
                self.dim,
                x.len(),
                y.len()
            )));
        }
        for c in x.iter().chain(y) {
            if c.field() != self.field {
                return Err(Error::FieldMismatch(self.field, c.field()));
            }
        }
        let mut out = vec![self.field.zero(); self.dim];
        for (&(i, j), coeffs) in &self.constants {
            // coefficient of [e_i, e_j] in [x, y] is x_i y_j − x_j y_i
            let c = &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            if c.is_zero() {
                continue;
            }
            for (k, v) in coeffs {
                out[*k] += &(&c * v);
            }
        }
        Ok(out)
    }

    /// SHA-256 of the canonical JSON encoding, as `sha256:<hex>`.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("table serializes");
        let mut hasher = Sha256::new();
        hasher.update(json.as_bytes());
        format!("sha256:{:x}", hasher.finalize())
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn from_json_str(s: &str) -> Result<LieTable, Error> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Serialize for LieTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Coeff {
            k: usize,
            value: String,
        }
        #[derive(Serialize)]
        struct Const {
            i: usize,
            j: usize,
            coeffs: Vec<Coeff>,
        }
        #[derive(Serialize)]
        struct Prov {
            a: Matrix,
            w: Vec<String>,
            lambda: String,
            d: usize,
        }
        let mut st = serializer.serialize_struct("LieTable", 5)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("labels", &self.labels)?;
        st.serialize_field("field", &self.field.tag())?;
        let constants: Vec<Const> = self
            .constants
            .iter()
            .map(|(&(i, j), coeffs)| Const {
                i,
                j,
                coeffs: coeffs
                    .iter()
                    .map(|(k, v)| Coeff { k: *k, value: v.canonical() })
                    .collect(),
            })
            .collect();
        st.serialize_field("constants", &constants)?;
        let prov = self.provenance.as_ref().map(|p| Prov {
            a: p.a.clone(),
            w: p.w.iter().map(Scalar::canonical).collect(),
            lambda: p.lambda.canonical(),
            d: p.d,
        });
        st.serialize_field("provenance", &prov)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for LieTable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<LieTable, D::Error> {
        #[derive(Deserialize)]
        struct Coeff {
            k: usize,
            value: NumOrStr,
        }
        #[derive(Deserialize)]
        struct Const {
            i: usize,
            j: usize,
            coeffs: Vec<Coeff>,
        }
        #[derive(Deserialize)]
        struct Prov {
            a: Matrix,
            w: Vec<NumOrStr>,
            lambda: NumOrStr,
            d: usize,
        }
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            labels: Vec<String>,
            field: String,
            constants: Vec<Const>,
            provenance: Option<Prov>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let field = Field::from_tag(&repr.field).map_err(D::Error::custom)?;
        let mut constants = BTreeMap::new();
        for c in repr.constants {
            let mut coeffs = Vec::with_capacity(c.coeffs.len());
            for coeff in c.coeffs {
                let v = coeff.value.into_scalar(field).map_err(D::Error::custom)?;
                coeffs.push((coeff.k, v));
            }
            if constants.insert((c.i, c.j), coeffs).is_some() {
                return Err(D::Error::custom(format!("duplicate key ({}, {})", c.i, c.j)));
            }
        }
        let provenance = match repr.provenance {
            None => None,
            Some(p) => {
                let w: Result<Vec<Scalar>, _> =
                    p.w.into_iter().map(|c| c.into_scalar(field)).collect();
                Some(Provenance {
                    a: p.a,
                    w: w.map_err(D::Error::custom)?,
                    lambda: p.lambda.into_scalar(field).map_err(D::Error::custom)?,
                    d: p.d,
                })
            }
        };
        LieTable::new(repr.dim, repr.labels, field, constants, provenance).map_err(D::Error::custom)
    }
}

/// Expand the bracket of a seed on the degree-`d` monomial basis.
pub fn structure_constants(seed: &SeedPair, d: usize) -> Result<LieTable, Error> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let (labels, constants) = degree_block(seed, d)?;
    let dim = labels.len();
    let provenance = Provenance {
        a: seed.a().clone(),
        w: seed.w().to_vec(),
        lambda: seed.lambda().clone(),
        d,
    };
    LieTable::new(dim, labels, seed.field(), constants, Some(provenance))
}

fn degree_block(
    seed: &SeedPair,
    d: usize,
) -> Result<(Vec<String>, BTreeMap<(usize, usize), Vec<(usize, Scalar)>>), Error> {
    let n = seed.nvars();
    let basis = monomial_basis(n, d);
    let size = basis.len();
    let phi = crate::poly::induced_matrix(seed.a(), d)?;
    let field = seed.field();
    let evals: Vec<Scalar> = (0..size)
        .map(|i| {
            HomPoly::monomial(basis.clone(), field, i)
                .evaluate(seed.w())
                .expect("basis monomial evaluates")
        })
        .collect();
    let cols: Vec<Vec<Scalar>> = (0..size).map(|j| phi.col(j)).collect();
    let mut constants = BTreeMap::new();
    for i in 0..size {
        for j in (i + 1)..size {
            let mut coeffs = Vec::new();
            for k in 0..size {
                let v = &(&evals[j] * &cols[i][k]) - &(&evals[i] * &cols[j][k]);
                if !v.is_zero() {
                    coeffs.push((k, v));
                }
            }
            if !coeffs.is_empty() {
                constants.insert((i, j), coeffs);
            }
        }
    }
    Ok((basis.labels(), constants))
}

/// Stack the degree blocks `0..=max_d` into one table. Elements of different
/// degrees bracket to zero; each block carries the degree-`d` bracket, so the
/// block labels are prefixed `d<deg>:`.
pub fn graded_table(seed: &SeedPair, max_d: usize) -> Result<LieTable, Error> {
    let mut labels = Vec::new();
    let mut constants = BTreeMap::new();
    let mut offset = 0usize;
    for deg in 0..=max_d {
        let (block_labels, block_constants) = degree_block(seed, deg)?;
        let size = block_labels.len();
        labels.extend(block_labels.into_iter().map(|l| format!("d{deg}:{l}")));
        for ((i, j), coeffs) in block_constants {
            let shifted: Vec<(usize, Scalar)> =
                coeffs.into_iter().map(|(k, v)| (k + offset, v)).collect();
            constants.insert((i + offset, j + offset), shifted);
        }
        offset += size;
    }
    let provenance = Provenance {
        a: seed.a().clone(),
        w: seed.w().to_vec(),
        lambda: seed.lambda().clone(),
        d: max_d,
    };
    LieTable::new(offset, labels, seed.field(), constants, Some(provenance))
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
    fn seed_validation() {
        let s = validate_seed(&Matrix::identity(Field::Q, 2), &qv(vec![1, 0])).unwrap();
        assert_eq!(s.lambda(), &Field::Q.from_i64(1));
        assert!(!s.is_degenerate());

        let s = validate_seed(&qm(vec![vec![1, 1], vec![0, 1]]), &qv(vec![1, 0])).unwrap();
        assert_eq!(s.lambda(), &Field::Q.from_i64(1));

        assert!(matches!(
            validate_seed(&qm(vec![vec![1, 1], vec![0, 1]]), &qv(vec![0, 1])),
            Err(Error::NotAnEigenvector(_))
        ));

        // lower-triangular with nonzero subdiagonal: e1 is not an eigenvector
        let a = qm(vec![vec![1, 0, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        assert!(matches!(
            validate_seed(&a, &qv(vec![1, 0, 0])),
            Err(Error::NotAnEigenvector(_))
        ));

        let s = validate_seed(&qm(vec![vec![1, 2], vec![3, 4]]), &qv(vec![0, 0])).unwrap();
        assert!(s.is_degenerate());
        assert!(s.lambda().is_zero());

        let s = validate_seed(&Matrix::zeros(Field::Q, 2, 2), &qv(vec![5, 7])).unwrap();
        assert!(s.is_degenerate());
        assert!(s.lambda().is_zero());

        assert!(validate_seed(&qm(vec![vec![1, 2]]), &qv(vec![1])).is_err());
        assert!(validate_seed(&Matrix::identity(Field::Q, 2), &qv(vec![1])).is_err());
    }

    #[test]
    fn diagonal_seed_structure_constants() {
        // A = diag(2, 6), w = e1, d = 2. The substitution scales the basis
        // monomials by 4, 12, 36; only y0 is nonzero at w, so
        // [y0, y_i] = −(scale of y_i)·y_i for i ≥ 1.
        let seed = validate_seed(&qm(vec![vec![2, 0], vec![0, 6]]), &qv(vec![1, 0])).unwrap();
        assert_eq!(seed.lambda(), &Field::Q.from_i64(2));
        let t = structure_constants(&seed, 2).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(t.labels(), &["x1^2", "x1*x2", "x2^2"]);
        assert_eq!(t.bracket_basis(0, 1), vec![(1, Field::Q.from_i64(-12))]);
        assert_eq!(t.bracket_basis(0, 2), vec![(2, Field::Q.from_i64(-36))]);
        assert_eq!(t.bracket_basis(1, 2), vec![]);
        assert_eq!(t.bracket_basis(1, 0), vec![(1, Field::Q.from_i64(12))]);
    }

    #[test]
    fn unipotent_seed_structure_constants() {
        // A = [[1,0],[a,1]], w = e2 (eigenvalue 1), degree 1 and 2.
        for a in [1i64, 2] {
            let m = qm(vec![vec![1, 0], vec![a, 1]]);
            let seed = validate_seed(&m, &qv(vec![0, 1])).unwrap();
            let t1 = structure_constants(&seed, 1).unwrap();
            assert_eq!(t1.bracket_basis(0, 1), vec![(0, Field::Q.from_i64(1))], "a = {a}");

            let t2 = structure_constants(&seed, 2).unwrap();
            assert_eq!(t2.bracket_basis(0, 1), vec![]);
            assert_eq!(t2.bracket_basis(0, 2), vec![(0, Field::Q.from_i64(1))]);
            assert_eq!(
                t2.bracket_basis(1, 2),
                vec![(0, Field::Q.from_i64(a)), (1, Field::Q.from_i64(1))]
            );
        }
    }

    #[test]
    fn bracket_matches_table() {
        let seed = validate_seed(&qm(vec![vec![2, 1], vec![0, 3]]), &qv(vec![1, 0])).unwrap();
        let t = structure_constants(&seed, 2).unwrap();
        let basis = monomial_basis(2, 2);
        for i in 0..3 {
            for j in 0..3 {
                let f = HomPoly::monomial(basis.clone(), Field::Q, i);
                let g = HomPoly::monomial(basis.clone(), Field::Q, j);
                let via_poly = bracket(&seed, &f, &g).unwrap();
                let mut expect = vec![Field::Q.zero(); 3];
                for (k, v) in t.bracket_basis(i, j) {
                    expect[k] = v;
                }
                assert_eq!(via_poly.coeffs(), &expect[..], "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn bracket_values_vanish_at_w() {
        let seed = validate_seed(&qm(vec![vec![2, 1], vec![0, 3]]), &qv(vec![1, 0])).unwrap();
        let basis = monomial_basis(2, 3);
        let f = HomPoly::new(basis.clone(), Field::Q, qv(vec![1, 2, 3, 4])).unwrap();
        let g = HomPoly::new(basis, Field::Q, qv(vec![5, 0, -1, 2])).unwrap();
        let h = bracket(&seed, &f, &g).unwrap();
        assert!(h.evaluate(seed.w()).unwrap().is_zero());
    }

    #[test]
    fn bracket_vector_expansion() {
        let seed = validate_seed(&qm(vec![vec![2, 0], vec![0, 6]]), &qv(vec![1, 0])).unwrap();
        let t = structure_constants(&seed, 2).unwrap();
        // [y0 + y1, y1 + y2] = [y0,y1] + [y0,y2] + [y1,y2] − wait, plus [y1,y1] = 0
        let x = qv(vec![1, 1, 0]);
        let y = qv(vec![0, 1, 1]);
        let out = t.bracket_vectors(&x, &y).unwrap();
        assert_eq!(out, qv(vec![0, -12, -36]));
        // antisymmetry
        let rev = t.bracket_vectors(&y, &x).unwrap();
        assert_eq!(rev, qv(vec![0, 12, 36]));
    }

    #[test]
    fn graded_blocks_match_single_degrees() {
        let seed = validate_seed(&qm(vec![vec![-1, 0], vec![0, -1]]), &qv(vec![1, 0])).unwrap();
        let g = graded_table(&seed, 3).unwrap();
        // dims 1 + 2 + 3 + 4
        assert_eq!(g.dim(), 10);
        assert_eq!(g.labels()[0], "d0:1");
        assert_eq!(g.labels()[1], "d1:x1");
        assert_eq!(g.labels()[3], "d2:x1^2");

        let offsets = [0usize, 1, 3, 6];
        for d in 1..=3usize {
            let t = structure_constants(&seed, d).unwrap();
            let off = offsets[d];
            for i in 0..t.dim() {
                for j in 0..t.dim() {
                    let shifted: Vec<(usize, Scalar)> = t
                        .bracket_basis(i, j)
                        .into_iter()
                        .map(|(k, v)| (k + off, v))
                        .collect();
                    assert_eq!(g.bracket_basis(i + off, j + off), shifted);
                }
            }
        }
        // cross-degree brackets vanish
        assert_eq!(g.bracket_basis(0, 5), vec![]);
        assert_eq!(g.bracket_basis(1, 3), vec![]);
        assert_eq!(g.bracket_basis(2, 9), vec![]);

        // degree-0 only: a single abelian generator
        let g0 = graded_table(&seed, 0).unwrap();
        assert_eq!(g0.dim(), 1);
        assert!(g0.is_abelian());
    }

    #[test]
    fn table_json_round_trip() {
        let seed = validate_seed(&qm(vec![vec![2, 0], vec![0, 6]]), &qv(vec![1, 0])).unwrap();
        let t = structure_constants(&seed, 2).unwrap();
        let js = t.to_json_string();
        let back = LieTable::from_json_str(&js).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_json_string(), js);
        assert_eq!(back.content_hash(), t.content_hash());

        let abelian = LieTable::abelian(Field::Q, vec!["e1".into(), "e2".into()]);
        assert_ne!(abelian.content_hash(), t.content_hash());
        let js2 = abelian.to_json_string();
        assert_eq!(LieTable::from_json_str(&js2).unwrap(), abelian);
    }

    #[test]
    fn table_json_shape() {
        let seed = validate_seed(&qm(vec![vec![2, 0], vec![0, 6]]), &qv(vec![1, 0])).unwrap();
        let t = structure_constants(&seed, 1).unwrap();
        let js = t.to_json_string();
        assert_eq!(
            js,
            r#"{"dim":2,"labels":["x1","x2"],"field":"Q","constants":[{"i":0,"j":1,"coeffs":[{"k":1,"value":"-6"}]}],"provenance":{"a":{"field":"Q","rows":2,"cols":2,"entries":[["2","0"],["0","6"]]},"w":["1","0"],"lambda":"2","d":1}}"#
        );
    }

    #[test]
    fn table_validation_rejects_bad_input() {
        let bad = r#"{"dim":2,"labels":["a","b"],"field":"Q","constants":[{"i":1,"j":0,"coeffs":[]}],"provenance":null}"#;
        assert!(LieTable::from_json_str(bad).is_err());
        let bad = r#"{"dim":2,"labels":["a"],"field":"Q","constants":[],"provenance":null}"#;
        assert!(LieTable::from_json_str(bad).is_err());
        let bad = r#"{"dim":2,"labels":["a","b"],"field":"Q","constants":[{"i":0,"j":1,"coeffs":[{"k":0,"value":"0"}]}],"provenance":null}"#;
        assert!(LieTable::from_json_str(bad).is_err());
        let bad = r#"{"dim":2,"labels":["a","b"],"field":"F6","constants":[],"provenance":null}"#;
        assert!(LieTable::from_json_str(bad).is_err());
    }

    #[test]
    fn degree_zero_rejected_for_single_table() {
        let seed = validate_seed(&Matrix::identity(Field::Q, 2), &qv(vec![1, 0])).unwrap();
        assert!(matches!(structure_constants(&seed, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn fp_seed_table() {
        let f5 = Field::prime(5).unwrap();
        let a = Matrix::from_rows(
            f5,
            vec![
                vec![f5.from_i64(2), f5.from_i64(0)],
                vec![f5.from_i64(0), f5.from_i64(1)],
            ],
        )
        .unwrap();
        let w = vec![f5.from_i64(1), f5.from_i64(0)];
        let seed = validate_seed(&a, &w).unwrap();
        assert_eq!(seed.lambda(), &f5.from_i64(2));
        let t = structure_constants(&seed, 2).unwrap();
        // substitution scales y0,y1,y2 by 4,2,1; [y0,y1] = −2y1 = 3y1 mod 5
        assert_eq!(t.bracket_basis(0, 1), vec![(1, f5.from_i64(3))]);
        assert_eq!(t.bracket_basis(0, 2), vec![(2, f5.from_i64(4))]);
    }
}
