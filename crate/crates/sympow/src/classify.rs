//! Classification of the two-variable algebras over the Gaussian rationals.
//!
//! For `n = 2` every seed table in degree `d` lands, up to isomorphism, in a
//! short list of families presented on generators `y0..yd`:
//!
//! * `Abelian`: zero bracket;
//! * `G1`: `[y0, yi] = yi`;
//! * `G2(c)`: `[y0, yi] = c^{i-1}·yi`, `c ≠ 0` (`G2(1)` is `G1`);
//! * `G3(c)`: `[y0, yi] = c^{i-1}·Σ_j binom(d-i, j)·c^j·y_{d-j}`, `c ≠ 0`.
//!
//! One configuration escapes the list: a diagonalizable seed whose
//! eigenvector eigenvalue is zero while the other eigenvalue is not, in
//! degree `d ≥ 2`. Its table has a single nonzero bracket `[y0, y_d]` and a
//! center of dimension `d−1`, which no family matches; [`classify`] reports
//! it as `OutsideFamilies` with the fingerprint as evidence instead of
//! forcing a wrong label.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use std::collections::BTreeMap;

use crate::analysis::{conjugated_iso, fingerprint, verify_hom, Fingerprint, HomWitness};
use crate::bracket::{structure_constants, LieTable, SeedPair};
use crate::field::{Field, Scalar};
use crate::matrix::{Matrix, NumOrStr};
use crate::Error;

/// Square root of a nonnegative rational, when it is rational.
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    (&num * &num == *r.numer() && &den * &den == *r.denom())
        .then(|| BigRational::new(num, den))
}

/// Canonical square root in `Q(i)`, if one exists.
///
/// For `x + yi` with `y ≠ 0` a root `u + vi` needs `u² = (|z| + x)/2` with
/// both `|z|` and that quotient rational squares; the canonical choice has
/// `u > 0`. Real inputs take the nonnegative root (`i·√|x|` when negative).
fn gaussian_sqrt(re: &BigRational, im: &BigRational) -> Option<(BigRational, BigRational)> {
    if im.is_zero() {
        return if re.is_negative() {
            rational_sqrt(&-re.clone()).map(|s| (BigRational::zero(), s))
        } else {
            rational_sqrt(re).map(|s| (s, BigRational::zero()))
        };
    }
    let norm_sq = re * re + im * im;
    let norm = rational_sqrt(&norm_sq)?;
    let u_sq = (&norm + re) / BigRational::from_integer(BigInt::from(2));
    let u = rational_sqrt(&u_sq)?;
    debug_assert!(!u.is_zero(), "u vanishes only for nonpositive real inputs");
    let v = im / (&u * BigRational::from_integer(BigInt::from(2)));
    Some((u, v))
}

fn scalar_sqrt(s: &Scalar) -> Option<Scalar> {
    match s {
        Scalar::Gaussian { re, im } => gaussian_sqrt(re, im).map(|(re, im)| Scalar::Gaussian { re, im }),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JordanKind {
    Diagonal { l1: Scalar, l2: Scalar },
    JordanBlock { l: Scalar },
}

/// A 2×2 Jordan decomposition `A = T·J·T⁻¹` over `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanForm2 {
    pub kind: JordanKind,
    pub t: Matrix,
}

impl JordanForm2 {
    /// The normal form `J` itself.
    pub fn j(&self) -> Matrix {
        let f = Field::Qi;
        match &self.kind {
            JordanKind::Diagonal { l1, l2 } => {
                Matrix::diagonal(f, &[l1.clone(), l2.clone()]).expect("entries match field")
            }
            JordanKind::JordanBlock { l } => {
                let mut m = Matrix::diagonal(f, &[l.clone(), l.clone()]).expect("entries match field");
                m.set(0, 1, f.one());
                m
            }
        }
    }
}

fn to_gaussian_matrix(a: &Matrix) -> Result<Matrix, Error> {
    match a.field() {
        Field::Qi => Ok(a.clone()),
        Field::Q => {
            let mut out = Matrix::zeros(Field::Qi, a.rows(), a.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    out.set(i, j, a.get(i, j).to_gaussian()?);
                }
            }
            Ok(out)
        }
        other => Err(Error::UnsupportedField(other)),
    }
}

/// Jordan normal form of a 2×2 matrix over `Q(i)` (rational inputs are
/// embedded first).
///
/// Already-diagonal matrices are returned as-is with `T = identity`; for the
/// rest, the eigenvalues are ordered `λ1 = (tr + s)/2`, `λ2 = (tr − s)/2`
/// where `s` is the canonical square root of the discriminant. Fails with
/// `EigenvaluesNotInField` when the discriminant has no square root in
/// `Q(i)`.
pub fn jordan_form_2x2(a: &Matrix) -> Result<JordanForm2, Error> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("need 2x2, got {}x{}", a.rows(), a.cols())));
    }
    let a = to_gaussian_matrix(a)?;
    let f = Field::Qi;
    if a.get(0, 1).is_zero() && a.get(1, 0).is_zero() {
        return Ok(JordanForm2 {
            kind: JordanKind::Diagonal { l1: a.get(0, 0).clone(), l2: a.get(1, 1).clone() },
            t: Matrix::identity(f, 2),
        });
    }
    let tr = a.trace()?;
    let det = &(a.get(0, 0) * a.get(1, 1)) - &(a.get(0, 1) * a.get(1, 0));
    let disc = &(&tr * &tr) - &(&f.from_i64(4) * &det);
    let s = scalar_sqrt(&disc).ok_or(Error::EigenvaluesNotInField)?;
    let half = f.ratio(1, 2)?;
    if s.is_zero() {
        // double eigenvalue on a non-diagonal matrix: defective
        let l = &half * &tr;
        let shifted = a.sub(&Matrix::diagonal(f, &[l.clone(), l.clone()])?)?;
        let e1 = vec![f.one(), f.zero()];
        let e2 = vec![f.zero(), f.one()];
        let u = if shifted.apply(&e1)?.iter().any(|c| !c.is_zero()) { e1 } else { e2 };
        let v = shifted.apply(&u)?;
        let t = Matrix::from_fn(f, 2, 2, |i, j| if j == 0 { v[i].clone() } else { u[i].clone() });
        let form = JordanForm2 { kind: JordanKind::JordanBlock { l }, t };
        debug_assert_eq!(form.t.mul(&form.j()).unwrap(), a.mul(&form.t).unwrap());
        Ok(form)
    } else {
        let l1 = &half * &(&tr + &s);
        let l2 = &half * &(&tr - &s);
        let col = |l: &Scalar| -> Vec<Scalar> {
            let shifted = a.sub(&Matrix::diagonal(f, &[l.clone(), l.clone()]).unwrap()).unwrap();
            shifted.kernel().basis_rows().remove(0)
        };
        let v1 = col(&l1);
        let v2 = col(&l2);
        let t = Matrix::from_fn(f, 2, 2, |i, j| if j == 0 { v1[i].clone() } else { v2[i].clone() });
        let form = JordanForm2 { kind: JordanKind::Diagonal { l1, l2 }, t };
        debug_assert_eq!(form.t.mul(&form.j()).unwrap(), a.mul(&form.t).unwrap());
        Ok(form)
    }
}

/// Which family a two-variable seed belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassLabel {
    Abelian,
    G1,
    G2(Scalar),
    G3(Scalar),
    OutsideFamilies(String),
}

impl ClassLabel {
    fn family_name(&self) -> &'static str {
        match self {
            ClassLabel::Abelian => "Abelian",
            ClassLabel::G1 => "G1",
            ClassLabel::G2(_) => "G2",
            ClassLabel::G3(_) => "G3",
            ClassLabel::OutsideFamilies(_) => "OutsideFamilies",
        }
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let extra = matches!(self, ClassLabel::G2(_) | ClassLabel::G3(_) | ClassLabel::OutsideFamilies(_));
        let mut st = serializer.serialize_struct("ClassLabel", 1 + extra as usize)?;
        st.serialize_field("family", self.family_name())?;
        match self {
            ClassLabel::G2(c) | ClassLabel::G3(c) => st.serialize_field("c", &c.canonical())?,
            ClassLabel::OutsideFamilies(detail) => st.serialize_field("detail", detail)?,
            _ => {}
        }
        st.end()
    }
}

impl<'de> Deserialize<'de> for ClassLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<ClassLabel, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            family: String,
            c: Option<NumOrStr>,
            detail: Option<String>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let c = |v: Option<NumOrStr>| -> Result<Scalar, D::Error> {
            v.ok_or_else(|| D::Error::custom("missing parameter c"))?
                .into_scalar(Field::Qi)
                .map_err(D::Error::custom)
        };
        match repr.family.as_str() {
            "Abelian" => Ok(ClassLabel::Abelian),
            "G1" => Ok(ClassLabel::G1),
            "G2" => Ok(ClassLabel::G2(c(repr.c)?)),
            "G3" => Ok(ClassLabel::G3(c(repr.c)?)),
            "OutsideFamilies" => Ok(ClassLabel::OutsideFamilies(repr.detail.unwrap_or_default())),
            other => Err(D::Error::custom(format!("unknown family {other:?}"))),
        }
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The reference table of a family on generators `y0..yd`, over `Q(i)`.
pub fn family_table(label: &ClassLabel, d: usize) -> Result<LieTable, Error> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let f = Field::Qi;
    let labels: Vec<String> = (0..=d).map(|i| format!("y{i}")).collect();
    let mut constants: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
    match label {
        ClassLabel::Abelian => {}
        ClassLabel::G1 => {
            for i in 1..=d {
                constants.insert((0, i), vec![(i, f.one())]);
            }
        }
        ClassLabel::G2(c) => {
            if c.is_zero() || c.field() != Field::Qi {
                return Err(Error::InvalidParameter("G2 parameter must be a nonzero Q(i) scalar".into()));
            }
            for i in 1..=d {
                constants.insert((0, i), vec![(i, c.pow((i - 1) as u64))]);
            }
        }
        ClassLabel::G3(c) => {
            if c.is_zero() || c.field() != Field::Qi {
                return Err(Error::InvalidParameter("G3 parameter must be a nonzero Q(i) scalar".into()));
            }
            for i in 1..=d {
                // [y0, y_i] = c^{i-1} · Σ_{j=0}^{d-i} binom(d-i, j) c^j y_{d-j};
                // iterate j downward so the target index d-j increases
                let lead = c.pow((i - 1) as u64);
                let mut coeffs = Vec::new();
                for j in (0..=(d - i)).rev() {
                    let b = f.from_i64(binom(d - i, j).try_into().map_err(|_| {
                        Error::InvalidParameter("degree too large for binomial expansion".into())
                    })?);
                    let v = &(&lead * &c.pow(j as u64)) * &b;
                    coeffs.push((d - j, v));
                }
                constants.insert((0, i), coeffs);
            }
        }
        ClassLabel::OutsideFamilies(_) => {
            return Err(Error::InvalidParameter("no reference table outside the families".into()));
        }
    }
    LieTable::new(d + 1, labels, f, constants, None)
}

/// A classification outcome: the label, a verified isomorphism onto the
/// family reference table when one exists, and the invariant fingerprint of
/// the seed's own table (the evidence in the `OutsideFamilies` case).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub label: ClassLabel,
    pub witness: Option<HomWitness>,
    pub fingerprint: Fingerprint,
}

/// Classify a two-variable seed in degree `d ≥ 1` over `Q(i)`.
///
/// Rational seeds are embedded into `Q(i)` first. The decision runs on the
/// eigenvalues: `λw` from the seed and the complementary `μ = tr(A) − λw`.
/// Scalar `A` gives `Abelian`/`G1`; distinct eigenvalues give `G2(μ/λw)`
/// (with `G1` reported for the degenerate `d = 1` case on the zero
/// eigen-axis, where the 2-dimensional nonabelian algebra is unique);
/// a defective eigenvalue `λ ≠ 0` gives `G3(λ)`; and the documented escape
/// is `OutsideFamilies` for `λw = 0 ≠ μ`, `d ≥ 2`.
pub fn classify(seed: &SeedPair, d: usize) -> Result<Classification, Error> {
    if seed.nvars() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "classification needs 2 variables, seed has {}",
            seed.nvars()
        )));
    }
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let seed = match seed.field() {
        Field::Qi => seed.clone(),
        Field::Q => seed.to_gaussian()?,
        other => return Err(Error::UnsupportedField(other)),
    };
    let f = Field::Qi;
    let raw = structure_constants(&seed, d)?;
    let fp = fingerprint(&raw);

    let w_zero = seed.w().iter().all(Scalar::is_zero);
    let a = seed.a();
    let scalar_a = a.get(0, 1).is_zero() && a.get(1, 0).is_zero() && a.get(0, 0) == a.get(1, 1);
    let lw = seed.lambda().clone();

    // abelian escapes first: zero w, zero A, scalar zero A
    if w_zero || (scalar_a && a.get(0, 0).is_zero()) {
        let fam = family_table(&ClassLabel::Abelian, d)?;
        let witness = verify_hom(&raw, &fam, &Matrix::identity(f, d + 1))?;
        return Ok(Classification { label: ClassLabel::Abelian, witness: Some(witness), fingerprint: fp });
    }

    if scalar_a {
        // A = λI, λ ≠ 0, any nonzero w: G1 after conjugating w to e1 and
        // rescaling y0 by −1/λ^d
        let t1 = complete_to_basis(&seed.w()[0], &seed.w()[1]);
        let q0 = -&lw.pow(d as u64);
        return finish(&seed, d, &raw, fp, ClassLabel::G1, &t1, &q0);
    }

    let tr = a.trace()?;
    let mu = &tr - &lw;
    if mu == lw {
        // double eigenvalue, non-scalar matrix: defective
        if lw.is_zero() {
            // nilpotent Jordan block: the substitution kills every monomial
            // that evaluates away from zero, so the table is abelian
            let fam = family_table(&ClassLabel::Abelian, d)?;
            let witness = verify_hom(&raw, &fam, &Matrix::identity(f, d + 1))?;
            return Ok(Classification { label: ClassLabel::Abelian, witness: Some(witness), fingerprint: fp });
        }
        // solve (A − λI)u = w; the image of (A − λI) is exactly the
        // eigen-line of w, so this always succeeds
        let shifted = a.sub(&Matrix::diagonal(f, &[lw.clone(), lw.clone()])?)?;
        let u = shifted.solve(seed.w())?.expect("w lies in the image of A - lambda");
        let t1 = two_columns(seed.w(), &u);
        let q0 = -&lw;
        return finish(&seed, d, &raw, fp, ClassLabel::G3(lw.clone()), &t1, &q0);
    }

    // distinct eigenvalues
    if mu.is_zero() {
        // the complementary direction is killed; every bracket vanishes
        let fam = family_table(&ClassLabel::Abelian, d)?;
        let witness = verify_hom(&raw, &fam, &Matrix::identity(f, d + 1))?;
        return Ok(Classification { label: ClassLabel::Abelian, witness: Some(witness), fingerprint: fp });
    }
    if lw.is_zero() && d >= 2 {
        return Ok(Classification {
            label: ClassLabel::OutsideFamilies("rank-1 ad, center dim d-1".into()),
            witness: None,
            fingerprint: fp,
        });
    }
    // λw = 0 is only reachable here with d = 1, where the table is the
    // unique 2-dimensional nonabelian algebra: report G1. Otherwise G2(c)
    // with c = μ/λw, folding c = 1 into G1.
    let label = if lw.is_zero() {
        ClassLabel::G1
    } else {
        let c = mu.div(&lw)?;
        if c.is_one() {
            ClassLabel::G1
        } else {
            ClassLabel::G2(c)
        }
    };
    let shifted = a.sub(&Matrix::diagonal(f, &[mu.clone(), mu.clone()])?)?;
    let v2 = shifted.kernel().basis_rows().remove(0);
    let t1 = two_columns(seed.w(), &v2);
    let q0 = -&(&lw.pow((d - 1) as u64) * &mu);
    finish(&seed, d, &raw, fp, label, &t1, &q0)
}

/// `[w | u]` as columns.
fn two_columns(w: &[Scalar], u: &[Scalar]) -> Matrix {
    Matrix::from_fn(Field::Qi, 2, 2, |i, j| if j == 0 { w[i].clone() } else { u[i].clone() })
}

/// Complete a nonzero vector `(w0, w1)` to a basis with a unit vector.
fn complete_to_basis(w0: &Scalar, w1: &Scalar) -> Matrix {
    let f = Field::Qi;
    let u = if w0.is_zero() {
        vec![f.one(), f.zero()]
    } else {
        vec![f.zero(), f.one()]
    };
    two_columns(&[w0.clone(), w1.clone()], &u)
}

/// Shared tail of the nonabelian branches: conjugate the seed so that `w`
/// becomes `e1` and `A` its normal form, then rescale `y0` by the
/// family-specific factor and verify the composite against the reference
/// table.
fn finish(
    seed: &SeedPair,
    d: usize,
    raw: &LieTable,
    fp: Fingerprint,
    label: ClassLabel,
    t1: &Matrix,
    q0: &Scalar,
) -> Result<Classification, Error> {
    let f = Field::Qi;
    let t1_inv = t1.inverse()?;
    let (_, to_normal) = conjugated_iso(seed, &t1_inv, d)?;
    debug_assert!(to_normal.verified);
    let mut diag = vec![f.one(); d + 1];
    diag[0] = q0.clone();
    let q = Matrix::diagonal(f, &diag)?;
    let total = q.mul(&to_normal.map)?;
    let fam = family_table(&label, d)?;
    let witness = verify_hom(raw, &fam, &total)?;
    Ok(Classification { label, witness: Some(witness), fingerprint: fp })
}
