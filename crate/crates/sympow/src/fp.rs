//! Raw-residue linear algebra over `F_p` (internal fast path).
//!
//! The enumeration and brute-force search code touches millions of tiny
//! matrices; going through [`crate::Scalar`] there would spend most of its
//! time on enum matching and allocation. This module works on bare `u64`
//! residues instead. Only correct for prime `p`.

use crate::field::{inv_mod, mul_mod, sub_mod};

/// Square row-major matrix of residues mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpMat {
    pub n: usize,
    pub p: u64,
    pub a: Vec<u64>,
}

impl FpMat {
    pub fn zeros(n: usize, p: u64) -> FpMat {
        FpMat { n, p, a: vec![0; n * n] }
    }

    pub fn identity(n: usize, p: u64) -> FpMat {
        let mut m = FpMat::zeros(n, p);
        for i in 0..n {
            m.a[i * n + i] = 1 % p;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.a[i * self.n + j] = v % self.p;
    }

    /// Decode a matrix from base-`p` digits of `idx`, row-major, with the
    /// (0,0) entry as the most significant digit.
    pub fn decode(idx: u64, n: usize, p: u64) -> FpMat {
        let mut a = vec![0u64; n * n];
        let mut rest = idx;
        for k in (0..n * n).rev() {
            a[k] = rest % p;
            rest /= p;
        }
        FpMat { n, p, a }
    }

    pub fn mul(&self, rhs: &FpMat) -> FpMat {
        debug_assert_eq!(self.n, rhs.n);
        debug_assert_eq!(self.p, rhs.p);
        let n = self.n;
        let p = self.p;
        let mut out = FpMat::zeros(n, p);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let cur = out.get(i, j);
                    out.a[i * n + j] = (cur + mul_mod(a, rhs.get(k, j), p)) % p;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[u64]) -> Vec<u64> {
        let n = self.n;
        let p = self.p;
        let mut out = vec![0u64; n];
        for i in 0..n {
            let mut acc = 0u64;
            for j in 0..n {
                acc = (acc + mul_mod(self.get(i, j), v[j], p)) % p;
            }
            out[i] = acc;
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let n = m.n;
        let p = m.p;
        let mut rank = 0usize;
        for col in 0..n {
            let Some(r) = (rank..n).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for j in 0..n {
                m.a.swap(rank * n + j, r * n + j);
            }
            let inv = inv_mod(m.get(rank, col), p).expect("pivot nonzero");
            for j in col..n {
                m.a[rank * n + j] = mul_mod(m.get(rank, j), inv, p);
            }
            for r2 in 0..n {
                if r2 == rank || m.get(r2, col) == 0 {
                    continue;
                }
                let f = m.get(r2, col);
                for j in col..n {
                    let v = sub_mod(m.get(r2, j), mul_mod(f, m.get(rank, j), p), p);
                    m.a[r2 * n + j] = v;
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<FpMat> {
        let n = self.n;
        let p = self.p;
        let mut m = self.clone();
        let mut inv = FpMat::identity(n, p);
        let mut rank = 0usize;
        for col in 0..n {
            let r = (rank..n).find(|&r| m.get(r, col) != 0)?;
            for j in 0..n {
                m.a.swap(rank * n + j, r * n + j);
                inv.a.swap(rank * n + j, r * n + j);
            }
            let piv_inv = inv_mod(m.get(rank, col), p).expect("pivot nonzero");
            for j in 0..n {
                m.a[rank * n + j] = mul_mod(m.get(rank, j), piv_inv, p);
                inv.a[rank * n + j] = mul_mod(inv.get(rank, j), piv_inv, p);
            }
            for r2 in 0..n {
                if r2 == rank || m.get(r2, col) == 0 {
                    continue;
                }
                let f = m.get(r2, col);
                for j in 0..n {
                    let v = sub_mod(m.get(r2, j), mul_mod(f, m.get(rank, j), p), p);
                    m.a[r2 * n + j] = v;
                    let v = sub_mod(inv.get(r2, j), mul_mod(f, inv.get(rank, j), p), p);
                    inv.a[r2 * n + j] = v;
                }
            }
            rank += 1;
        }
        (rank == n).then_some(inv)
    }
}

/// Decode a length-`n` vector from base-`p` digits, first coordinate most
/// significant.
pub(crate) fn decode_vec(idx: u64, n: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; n];
    let mut rest = idx;
    for k in (0..n).rev() {
        v[k] = rest % p;
        rest /= p;
    }
    v
}

/// Inverse of [`FpMat::decode`] + [`decode_vec`] as one combined key: the
/// digits of `A` (row-major) followed by the digits of `w`.
pub(crate) fn encode_pair(a: &FpMat, w: &[u64]) -> u64 {
    let p = a.p;
    let mut acc = 0u64;
    for &d in &a.a {
        acc = acc * p + d;
    }
    for &d in w {
        acc = acc * p + d;
    }
    acc
}

/// Sparse structure constants of a table, densified to residue vectors:
/// `table[i][j]` holds the coordinates of `[e_i, e_j]` for `i < j`.
pub(crate) type DenseBrackets = Vec<Vec<Vec<u64>>>;

/// `[u, v]` for coordinate vectors, via bilinearity over the dense table.
pub(crate) fn bracket_dense(table: &DenseBrackets, u: &[u64], v: &[u64], p: u64) -> Vec<u64> {
    let n = u.len();
    let mut out = vec![0u64; n];
    for a in 0..n {
        for b in (a + 1)..n {
            // coefficient u_a v_b − u_b v_a on [e_a, e_b]
            let c = sub_mod(mul_mod(u[a], v[b], p), mul_mod(u[b], v[a], p), p);
            if c == 0 {
                continue;
            }
            for (k, &t) in table[a][b].iter().enumerate() {
                if t != 0 {
                    out[k] = (out[k] + mul_mod(c, t, p)) % p;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_round_trip() {
        let p = 3;
        for idx in 0..81 {
            let m = FpMat::decode(idx, 2, p);
            assert_eq!(encode_pair(&m, &[]), idx);
        }
        let v = decode_vec(5, 2, 3);
        assert_eq!(v, vec![1, 2]);
    }

    #[test]
    fn rank_and_inverse() {
        let p = 5;
        let m = FpMat { n: 2, p, a: vec![1, 1, 0, 1] };
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMat::identity(2, p));
        let singular = FpMat { n: 2, p, a: vec![1, 2, 2, 4] };
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn matvec_works() {
        let p = 7;
        let m = FpMat { n: 2, p, a: vec![1, 2, 3, 4] };
        assert_eq!(m.matvec(&[1, 1]), vec![3, 0]);
    }
}
