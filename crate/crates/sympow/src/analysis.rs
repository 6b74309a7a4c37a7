//! Structural analysis of bracket tables: Jacobi verification, series,
//! centers, homomorphism checking, and isomorphism search.
//!
//! Everything here treats a [`LieTable`] as the ground truth and works in
//! exact arithmetic. Non-isomorphism over the infinite fields is only ever
//! certified through invariant mismatches; exhaustive search is restricted
//! to prime fields where it is finite and budget-bounded.

use serde::{Deserialize, Serialize};

use crate::bracket::{validate_seed, LieTable, SeedPair};
use crate::field::{Field, Scalar};
use crate::fp::{bracket_dense, DenseBrackets, FpMat};
use crate::matrix::{Matrix, Subspace};
use crate::poly::induced_matrix;
use crate::{par, Error};

/// Default cap on the number of invertible candidates a brute-force
/// isomorphism search is willing to enumerate.
pub const DEFAULT_ISO_BUDGET: u64 = 1_000_000;

/// Outcome of the alternating/Jacobi verification. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum JacobiCheck {
    Ok,
    Violation { i: usize, j: usize, k: usize },
}

/// Check `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0` on all
/// basis triples, returning the first violation in lex order. The
/// alternating contract holds structurally for sparse tables (only `i < j`
/// keys exist), so Jacobi is the real content.
pub fn check_alternating_jacobi(t: &LieTable) -> JacobiCheck {
    let n = t.dim();
    let units: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { t.field().one() } else { t.field().zero() })
                .collect()
        })
        .collect();
    let pair_bracket: Vec<Vec<Vec<Scalar>>> = (0..n)
        .map(|i| (0..n).map(|j| dense_bracket_basis(t, i, j)).collect())
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let mut sum = vec![t.field().zero(); n];
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    let inner = &pair_bracket[x][y];
                    let term = t.bracket_vectors(inner, &units[z]).expect("dims match");
                    for (s, v) in sum.iter_mut().zip(term) {
                        *s += &v;
                    }
                }
                if sum.iter().any(|v| !v.is_zero()) {
                    return JacobiCheck::Violation { i, j, k };
                }
            }
        }
    }
    JacobiCheck::Ok
}

fn dense_bracket_basis(t: &LieTable, i: usize, j: usize) -> Vec<Scalar> {
    let mut out = vec![t.field().zero(); t.dim()];
    for (k, v) in t.bracket_basis(i, j) {
        out[k] = v;
    }
    out
}

/// Span of `[u, w]` over basis vectors of the two subspaces.
pub fn product_space(t: &LieTable, u: &Subspace, w: &Subspace) -> Result<Subspace, Error> {
    if u.ambient() != t.dim() || w.ambient() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "table dim {}, subspaces in dim {} and {}",
            t.dim(),
            u.ambient(),
            w.ambient()
        )));
    }
    if u.field() != t.field() || w.field() != t.field() {
        return Err(Error::FieldMismatch(t.field(), u.field()));
    }
    let mut spanning = Vec::new();
    for x in u.basis_rows() {
        for y in w.basis_rows() {
            let b = t.bracket_vectors(&x, &y)?;
            if b.iter().any(|v| !v.is_zero()) {
                spanning.push(b);
            }
        }
    }
    Ok(Subspace::from_spanning(t.field(), t.dim(), spanning))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

/// Dimension trace of a descending series until stabilization.
///
/// `dims` starts at the table dimension and is extended until it either
/// reaches zero or repeats; `steps` counts the strict decreases, which for a
/// lower-central series reaching zero is the nilpotency class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub dims: Vec<usize>,
    pub terminated_at_zero: bool,
    pub steps: usize,
}

fn run_series(t: &LieTable, kind: SeriesKind) -> SeriesReport {
    let full = Subspace::full(t.field(), t.dim());
    let mut current = full.clone();
    let mut dims = vec![current.dim()];
    loop {
        if current.dim() == 0 {
            break;
        }
        let next = match kind {
            SeriesKind::Derived => product_space(t, &current, &current),
            SeriesKind::LowerCentral => product_space(t, &full, &current),
        }
        .expect("subspaces live in the table's space");
        let stalled = next.dim() == current.dim();
        dims.push(next.dim());
        current = next;
        if stalled {
            break;
        }
    }
    let terminated_at_zero = *dims.last().expect("nonempty") == 0;
    let steps = dims.windows(2).filter(|w| w[1] < w[0]).count();
    SeriesReport { kind, dims, terminated_at_zero, steps }
}

/// `g ⊇ [g,g] ⊇ [[g,g],[g,g]] ⊇ …`
pub fn derived_series(t: &LieTable) -> SeriesReport {
    run_series(t, SeriesKind::Derived)
}

/// `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ …`
pub fn lower_central_series(t: &LieTable) -> SeriesReport {
    run_series(t, SeriesKind::LowerCentral)
}

pub fn is_solvable(t: &LieTable) -> bool {
    derived_series(t).terminated_at_zero
}

/// `Some(class)` when the lower-central series reaches zero.
pub fn is_nilpotent(t: &LieTable) -> Option<usize> {
    let report = lower_central_series(t);
    report.terminated_at_zero.then_some(report.steps)
}

/// `{x : [x, e_j] = 0 for all j}`, via the kernel of the stacked ad-columns.
pub fn center(t: &LieTable) -> Subspace {
    let n = t.dim();
    if n == 0 {
        return Subspace::zero(t.field(), 0);
    }
    // Row block j holds the map x ↦ [x, e_j]: entry ((j, k), i) is the
    // e_k-coordinate of [e_i, e_j].
    let mut stacked = Matrix::zeros(t.field(), n * n, n);
    for j in 0..n {
        for i in 0..n {
            for (k, v) in t.bracket_basis(i, j) {
                stacked.set(j * n + k, i, v);
            }
        }
    }
    stacked.kernel()
}

/// Matrix of `y ↦ [x, y]` in the table basis.
pub fn ad_matrix(t: &LieTable, x: &[Scalar]) -> Result<Matrix, Error> {
    let n = t.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "table dim {n}, vector of length {}",
            x.len()
        )));
    }
    let mut out = Matrix::zeros(t.field(), n, n);
    for j in 0..n {
        let mut unit = vec![t.field().zero(); n];
        unit[j] = t.field().one();
        let col = t.bracket_vectors(x, &unit)?;
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// A candidate isomorphism between two tables, with its exact verification
/// outcome. `source`/`target` are content hashes of the tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomWitness {
    pub map: Matrix,
    pub source: String,
    pub target: String,
    pub verified: bool,
}

/// Check whether `p` is a Lie algebra isomorphism `src → dst`: invertible
/// and `p·[e_i, e_j] = [p·e_i, p·e_j]` on all basis pairs.
pub fn verify_hom(src: &LieTable, dst: &LieTable, p: &Matrix) -> Result<HomWitness, Error> {
    if src.dim() != dst.dim() {
        return Err(Error::DimensionMismatch(format!(
            "source dim {}, target dim {}",
            src.dim(),
            dst.dim()
        )));
    }
    if src.field() != dst.field() || p.field() != src.field() {
        return Err(Error::FieldMismatch(src.field(), p.field()));
    }
    let n = src.dim();
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "map is {}x{}, tables have dimension {n}",
            p.rows(),
            p.cols()
        )));
    }
    let mut verified = p.is_invertible();
    if verified {
        'outer: for i in 0..n {
            for j in (i + 1)..n {
                let lhs = p.apply(&dense_bracket_basis(src, i, j))?;
                let rhs = dst.bracket_vectors(&p.col(i), &p.col(j))?;
                if lhs != rhs {
                    verified = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(HomWitness {
        map: p.clone(),
        source: src.content_hash(),
        target: dst.content_hash(),
        verified,
    })
}

/// Conjugate a seed by an invertible change of variables `T` and return the
/// induced isomorphism of degree-`d` tables.
///
/// The new seed is `(T·A·T⁻¹, T·w)`; since substitution is contravariant,
/// the matrix of `T⁻¹` acting on degree-`d` forms maps the old table to the
/// new one.
pub fn conjugated_iso(seed: &SeedPair, t: &Matrix, d: usize) -> Result<(SeedPair, HomWitness), Error> {
    if t.field() != seed.field() {
        return Err(Error::FieldMismatch(seed.field(), t.field()));
    }
    if t.rows() != seed.nvars() || t.cols() != seed.nvars() {
        return Err(Error::DimensionMismatch(format!(
            "seed has {} variables, T is {}x{}",
            seed.nvars(),
            t.rows(),
            t.cols()
        )));
    }
    let t_inv = t.inverse()?;
    let a2 = t.mul(seed.a())?.mul(&t_inv)?;
    let w2 = t.apply(seed.w())?;
    let seed2 = validate_seed(&a2, &w2)?;
    let src = crate::bracket::structure_constants(seed, d)?;
    let dst = crate::bracket::structure_constants(&seed2, d)?;
    let map = induced_matrix(&t_inv, d)?;
    let witness = verify_hom(&src, &dst, &map)?;
    Ok((seed2, witness))
}

/// Cheap structural summary of a table.
///
/// All components except `basis_ad_ranks` are isomorphism invariants;
/// the ad-rank list is taken over *basis* elements, so it can change under a
/// change of basis and is only a diagnostic. [`Fingerprint::invariant_key`]
/// is the part safe to compare across tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub basis_ad_ranks: Vec<usize>,
    pub derived_subalgebra_dim: usize,
}

impl Fingerprint {
    /// The isomorphism-invariant components: equal keys are necessary for
    /// two tables to be isomorphic.
    pub fn invariant_key(&self) -> (usize, &[usize], &[usize], usize, usize) {
        (
            self.dim,
            &self.derived_dims,
            &self.lower_central_dims,
            self.center_dim,
            self.derived_subalgebra_dim,
        )
    }
}

pub fn fingerprint(t: &LieTable) -> Fingerprint {
    let derived = derived_series(t);
    let lower = lower_central_series(t);
    let full = Subspace::full(t.field(), t.dim());
    let derived_subalgebra_dim = product_space(t, &full, &full).expect("full spaces match").dim();
    let mut ranks: Vec<usize> = (0..t.dim())
        .map(|i| {
            let mut unit = vec![t.field().zero(); t.dim()];
            unit[i] = t.field().one();
            ad_matrix(t, &unit).expect("unit vector length matches").rank()
        })
        .collect();
    ranks.sort_unstable();
    Fingerprint {
        dim: t.dim(),
        derived_dims: derived.dims,
        lower_central_dims: lower.dims,
        center_dim: center(t).dim(),
        basis_ad_ranks: ranks,
        derived_subalgebra_dim,
    }
}

/// Exhaustive isomorphism search between two tables over the same prime
/// field.
///
/// Candidates are enumerated in row-major digit order and the first verified
/// witness (smallest encoding) is returned, independent of the parallel
/// schedule. `Ok(None)` is a proof of non-isomorphism over `F_p`. The budget
/// bounds the number of invertible candidates, `|GL_N(F_p)|`; only the
/// invariant part of the fingerprint is used to shortcut, never the
/// basis-dependent ad-rank list.
pub fn brute_force_iso(t1: &LieTable, t2: &LieTable, budget: u64) -> Result<Option<HomWitness>, Error> {
    let p = match (t1.field(), t2.field()) {
        (Field::Fp(p), Field::Fp(q)) if p == q => p,
        (Field::Fp(_), Field::Fp(_)) => return Err(Error::FieldMismatch(t1.field(), t2.field())),
        (Field::Fp(_), other) | (other, _) => return Err(Error::UnsupportedField(other)),
    };
    if t1.dim() != t2.dim() {
        return Ok(None);
    }
    let n = t1.dim();
    if fingerprint(t1).invariant_key() != fingerprint(t2).invariant_key() {
        return Ok(None);
    }
    let mut gl_order: u128 = 1;
    let pn = (p as u128).pow(n as u32);
    for k in 0..n {
        gl_order = gl_order.saturating_mul(pn - (p as u128).pow(k as u32));
    }
    if gl_order > budget as u128 {
        return Err(Error::BudgetExceeded { required: gl_order, budget: budget as u128 });
    }
    let total_u128 = (p as u128).pow((n * n) as u32);
    if total_u128 > u64::MAX as u128 {
        return Err(Error::BudgetExceeded { required: total_u128, budget: budget as u128 });
    }
    let total = total_u128 as u64;
    let dense1 = to_dense(t1);
    let dense2 = to_dense(t2);
    let hit = par::find_map_first_range(0, total, |idx| {
        let m = FpMat::decode(idx, n, p);
        if m.rank() < n {
            return None;
        }
        let cols: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m.get(i, j)).collect()).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let lhs = m.matvec(&dense1[i][j]);
                let rhs = bracket_dense(&dense2, &cols[i], &cols[j], p);
                if lhs != rhs {
                    return None;
                }
            }
        }
        Some(m)
    });
    match hit {
        None => Ok(None),
        Some(m) => {
            let field = Field::Fp(p);
            let map = Matrix::from_fn(field, n, n, |i, j| Scalar::Fp { value: m.get(i, j), p });
            let witness = verify_hom(t1, t2, &map)?;
            debug_assert!(witness.verified);
            Ok(Some(witness))
        }
    }
}

fn to_dense(t: &LieTable) -> DenseBrackets {
    let n = t.dim();
    let mut out = vec![vec![vec![0u64; n]; n]; n];
    for (&(i, j), coeffs) in t.constants() {
        for (k, v) in coeffs {
            let Scalar::Fp { value, .. } = v else {
                unreachable!("table field checked to be prime");
            };
            out[i][j][*k] = *value;
        }
    }
    out
}
