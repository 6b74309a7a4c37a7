//! Exhaustive enumeration of seed pairs over small prime fields and their
//! partition into conjugation orbits.
//!
//! The pair variety is `M = {(A, w) : A·w = λ·w for some λ}` inside
//! `M_n(F_p) × F_p^n`, acted on by `T·(A, w) = (T A T^{-1}, T w)`. Same-orbit
//! pairs always give isomorphic bracket tables; the converse can fail, and
//! [`iso_class_count`] measures the gap by regrouping orbit representatives
//! with the brute-force isomorphism search.
//!
//! Everything here is generate-and-filter on purpose: the enumeration is the
//! independent oracle the rest of the crate is checked against, so it stays
//! free of cleverness and the budgets keep it at desk scale.

use serde::de::Error as _;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::brute_force_iso;
use crate::bracket::{structure_constants, validate_seed, SeedPair};
use crate::field::{inv_mod, mul_mod, Field, Scalar};
use crate::fp::{decode_vec, encode_pair, FpMat};
use crate::matrix::{Matrix, NumOrStr};
use crate::par;
use crate::Error;

/// Default cap on the number of raw `(A, w)` candidates an enumeration may
/// scan, i.e. on `p^{n²+n}`.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

fn checked_pow(p: u64, e: u32, budget: u64) -> Result<u64, Error> {
    let total = (p as u128).checked_pow(e).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { required: total, budget: budget as u128 });
    }
    Ok(total as u64)
}

fn fp_matrix(a: &FpMat, field: Field) -> Matrix {
    Matrix::from_fn(field, a.n, a.n, |i, j| Scalar::Fp { value: a.get(i, j), p: a.p })
}

fn fp_vector(w: &[u64], p: u64) -> Vec<Scalar> {
    w.iter().map(|&value| Scalar::Fp { value, p }).collect()
}

/// Residue view of a seed over `F_p`; inverse of the construction in
/// [`enumerate_m`].
pub(crate) fn seed_to_fp(seed: &SeedPair) -> Result<(FpMat, Vec<u64>), Error> {
    let Field::Fp(p) = seed.field() else {
        return Err(Error::UnsupportedField(seed.field()));
    };
    let n = seed.nvars();
    let mut a = FpMat::zeros(n, p);
    for i in 0..n {
        for j in 0..n {
            let Scalar::Fp { value, .. } = seed.a().get(i, j) else { unreachable!() };
            a.set(i, j, *value);
        }
    }
    let w = seed
        .w()
        .iter()
        .map(|s| {
            let Scalar::Fp { value, .. } = s else { unreachable!() };
            *value
        })
        .collect();
    Ok((a, w))
}

fn is_eigen_pair(a: &FpMat, w: &[u64], p: u64) -> bool {
    let Some(i0) = w.iter().position(|&c| c != 0) else {
        return true;
    };
    let aw = a.matvec(w);
    let lambda = mul_mod(aw[i0], inv_mod(w[i0], p).expect("nonzero coordinate"), p);
    aw.iter().zip(w).all(|(&y, &x)| y == mul_mod(lambda, x, p))
}

/// All seed pairs over `F_p` in `n` variables: every `(A, w)` with `w` an
/// eigenvector of `A`, the zero vector included iff `include_zero_w`.
///
/// Scans all `p^{n²+n}` candidates (refusing when that exceeds `budget`) in
/// the deterministic base-`p` digit order of the pair encoding.
pub fn enumerate_m(
    n: usize,
    p: u64,
    include_zero_w: bool,
    budget: u64,
) -> Result<Vec<SeedPair>, Error> {
    let field = Field::prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one variable".into()));
    }
    checked_pow(p, (n * n + n) as u32, budget)?;
    let a_count = p.pow((n * n) as u32);
    let w_count = p.pow(n as u32);
    let per_matrix = par::filter_map_range(0, a_count, |a_idx| {
        let a = FpMat::decode(a_idx, n, p);
        let mut hits = Vec::new();
        for w_idx in 0..w_count {
            let w = decode_vec(w_idx, n, p);
            let zero = w.iter().all(|&c| c == 0);
            if (zero && !include_zero_w) || !is_eigen_pair(&a, &w, p) {
                continue;
            }
            let seed = validate_seed(&fp_matrix(&a, field), &fp_vector(&w, p))
                .expect("residue filter agrees with validate_seed");
            hits.push(seed);
        }
        (!hits.is_empty()).then_some(hits)
    });
    Ok(per_matrix.into_iter().flatten().collect())
}

/// All of `GL_n(F_p)` with inverses, in decode order.
fn gl_list(n: usize, p: u64) -> Vec<(FpMat, FpMat)> {
    par::filter_map_range(0, p.pow((n * n) as u32), |idx| {
        let t = FpMat::decode(idx, n, p);
        t.inverse().map(|t_inv| (t, t_inv))
    })
}

fn act(t: &FpMat, t_inv: &FpMat, a: &FpMat, w: &[u64]) -> u64 {
    encode_pair(&t.mul(a).mul(t_inv), &t.matvec(w))
}

/// Expand the orbit of one pair under a precomputed `GL_n(F_p)` list,
/// returning the set of pair keys.
fn orbit_keys(gls: &[(FpMat, FpMat)], a: &FpMat, w: &[u64]) -> BTreeSet<u64> {
    par::map_slice(gls, |(t, t_inv)| act(t, t_inv, a, w)).into_iter().collect()
}

/// The canonical (least-key) member of a pair's conjugation orbit.
#[cfg(test)]
pub(crate) fn canonical_key(seed: &SeedPair) -> Result<u64, Error> {
    let (a, w) = seed_to_fp(seed)?;
    let gls = gl_list(a.n, a.p);
    Ok(*orbit_keys(&gls, &a, &w).iter().next().expect("identity is in GL"))
}

/// The orbit partition of the pair variety under conjugation.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitReport {
    pub n: usize,
    pub p: u64,
    pub include_zero_w: bool,
    pub pair_count: usize,
    pub orbit_count: usize,
    /// Orbit sizes, aligned with `representatives`.
    pub orbit_sizes: Vec<usize>,
    /// Canonical representative of each orbit: the member with the least
    /// base-`p` digit encoding, in ascending key order.
    pub representatives: Vec<SeedPair>,
}

impl OrbitReport {
    /// One CSV line per orbit: `index,size,a,w` with the pair flattened to
    /// digit strings.
    pub fn orbit_sizes_csv(&self) -> String {
        let mut out = String::from("orbit,size,a,w\n");
        for (i, (size, rep)) in self.orbit_sizes.iter().zip(&self.representatives).enumerate() {
            let (a, w) = seed_to_fp(rep).expect("representatives live over F_p");
            let a_txt: Vec<String> = a.a.iter().map(u64::to_string).collect();
            let w_txt: Vec<String> = w.iter().map(u64::to_string).collect();
            out.push_str(&format!("{i},{size},{},{}\n", a_txt.join(" "), w_txt.join(" ")));
        }
        out
    }
}

fn serialize_seed<S: Serializer>(seed: &SeedPair, serializer: S) -> Result<S::Ok, S::Error> {
    let mut st = serializer.serialize_struct("SeedPair", 3)?;
    st.serialize_field("a", seed.a())?;
    let w: Vec<String> = seed.w().iter().map(Scalar::canonical).collect();
    st.serialize_field("w", &w)?;
    st.serialize_field("lambda", &seed.lambda().canonical())?;
    st.end()
}

struct SeedPairSer<'a>(&'a SeedPair);

impl Serialize for SeedPairSer<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_seed(self.0, serializer)
    }
}

#[derive(Deserialize)]
struct SeedRepr {
    a: Matrix,
    w: Vec<NumOrStr>,
}

impl SeedRepr {
    fn into_seed<E: serde::de::Error>(self) -> Result<SeedPair, E> {
        let w = self
            .w
            .into_iter()
            .map(|v| v.into_scalar(self.a.field()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(E::custom)?;
        validate_seed(&self.a, &w).map_err(E::custom)
    }
}

impl Serialize for OrbitReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("OrbitReport", 7)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("include_zero_w", &self.include_zero_w)?;
        st.serialize_field("pair_count", &self.pair_count)?;
        st.serialize_field("orbit_count", &self.orbit_count)?;
        st.serialize_field("orbit_sizes", &self.orbit_sizes)?;
        struct Reps<'a>(&'a [SeedPair]);
        impl Serialize for Reps<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
                for seed in self.0 {
                    seq.serialize_element(&SeedPairSer(seed))?;
                }
                seq.end()
            }
        }
        st.serialize_field("representatives", &Reps(&self.representatives))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for OrbitReport {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<OrbitReport, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            p: u64,
            include_zero_w: bool,
            pair_count: usize,
            orbit_count: usize,
            orbit_sizes: Vec<usize>,
            representatives: Vec<SeedRepr>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.orbit_sizes.len() != repr.orbit_count
            || repr.representatives.len() != repr.orbit_count
        {
            return Err(D::Error::custom("orbit_count does not match the lists"));
        }
        let representatives = repr
            .representatives
            .into_iter()
            .map(SeedRepr::into_seed)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OrbitReport {
            n: repr.n,
            p: repr.p,
            include_zero_w: repr.include_zero_w,
            pair_count: repr.pair_count,
            orbit_count: repr.orbit_count,
            orbit_sizes: repr.orbit_sizes,
            representatives,
        })
    }
}

/// Partition the pair variety over `F_p` into conjugation orbits.
///
/// Orbits are listed by ascending canonical key, each with its size and its
/// least-key representative, so reports are deterministic. The scan budget
/// covers both the pair enumeration and the `GL_n` sweep.
pub fn gl_orbits(
    n: usize,
    p: u64,
    include_zero_w: bool,
    budget: u64,
) -> Result<OrbitReport, Error> {
    let seeds = enumerate_m(n, p, include_zero_w, budget)?;
    let gls = gl_list(n, p);
    let mut by_key: BTreeMap<u64, SeedPair> = BTreeMap::new();
    for seed in seeds {
        let (a, w) = seed_to_fp(&seed)?;
        by_key.insert(encode_pair(&a, &w), seed);
    }
    let pair_count = by_key.len();
    let mut assigned: BTreeSet<u64> = BTreeSet::new();
    let mut orbit_sizes = Vec::new();
    let mut representatives = Vec::new();
    for (&key, seed) in &by_key {
        if assigned.contains(&key) {
            continue;
        }
        let (a, w) = seed_to_fp(seed)?;
        let orbit = orbit_keys(&gls, &a, &w);
        debug_assert_eq!(orbit.iter().next(), Some(&key), "processing order finds minima first");
        debug_assert!(orbit.iter().all(|k| by_key.contains_key(k)), "orbits stay inside M");
        orbit_sizes.push(orbit.len());
        representatives.push(seed.clone());
        assigned.extend(orbit);
    }
    Ok(OrbitReport {
        n,
        p,
        include_zero_w,
        pair_count,
        orbit_count: orbit_sizes.len(),
        orbit_sizes,
        representatives,
    })
}

/// One representative per scalar class of eigenvectors of a matrix over
/// `F_p`, across all eigenvalues.
///
/// Representatives are normalized so the first nonzero coordinate is 1 and
/// listed by ascending eigenvalue; an eigenspace of dimension `m`
/// contributes `(p^m − 1)/(p − 1)` directions.
pub fn eigendirections(a: &Matrix) -> Result<Vec<Vec<Scalar>>, Error> {
    let Field::Fp(p) = a.field() else {
        return Err(Error::UnsupportedField(a.field()));
    };
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("need square, got {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    let field = a.field();
    let mut out = Vec::new();
    for lam in 0..p {
        let shift = Matrix::diagonal(field, &vec![Scalar::Fp { value: lam, p }; n])?;
        let kernel = a.sub(&shift)?.kernel();
        let m = kernel.dim();
        if m == 0 {
            continue;
        }
        let basis = kernel.basis_rows();
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        for combo in 1..p.pow(m as u32) {
            let digits = decode_vec(combo, m, p);
            let mut v = vec![0u64; n];
            for (c, b) in digits.iter().zip(&basis) {
                for (slot, s) in v.iter_mut().zip(b) {
                    let Scalar::Fp { value, .. } = s else { unreachable!() };
                    *slot = (*slot + mul_mod(*c, *value, p)) % p;
                }
            }
            let lead = v.iter().copied().find(|&c| c != 0).expect("combo is nonzero");
            let scale = inv_mod(lead, p).expect("nonzero residue");
            for slot in v.iter_mut() {
                *slot = mul_mod(*slot, scale, p);
            }
            if seen.insert(v.clone()) {
                out.push(fp_vector(&v, p));
            }
        }
    }
    Ok(out)
}

/// How conjugation orbits regroup into isomorphism classes of bracket
/// tables at a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoClassReport {
    pub n: usize,
    pub p: u64,
    pub d: usize,
    pub include_zero_w: bool,
    pub orbit_count: usize,
    pub class_count: usize,
    /// `class_count ≤ orbit_count`; conjugation can only refine isomorphism.
    pub inequality_holds: bool,
    /// Orbit indices (into the orbit report) grouped by isomorphism class,
    /// in first-seen order.
    pub class_members: Vec<Vec<usize>>,
}

/// Build one bracket table per conjugation orbit and regroup them by
/// isomorphism, using the brute-force search (with its invariant prefilter)
/// as the oracle.
pub fn iso_class_count(
    n: usize,
    p: u64,
    d: usize,
    include_zero_w: bool,
    enum_budget: u64,
    iso_budget: u64,
) -> Result<IsoClassReport, Error> {
    let report = gl_orbits(n, p, include_zero_w, enum_budget)?;
    let tables = report
        .representatives
        .iter()
        .map(|seed| structure_constants(seed, d))
        .collect::<Result<Vec<_>, _>>()?;
    let mut class_members: Vec<Vec<usize>> = Vec::new();
    'next: for i in 0..tables.len() {
        for class in class_members.iter_mut() {
            if brute_force_iso(&tables[i], &tables[class[0]], iso_budget)?.is_some() {
                class.push(i);
                continue 'next;
            }
        }
        class_members.push(vec![i]);
    }
    Ok(IsoClassReport {
        n,
        p,
        d,
        include_zero_w,
        orbit_count: report.orbit_count,
        class_count: class_members.len(),
        inequality_holds: class_members.len() <= report.orbit_count,
        class_members,
    })
}
