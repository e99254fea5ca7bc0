//! Symmetric tridiagonal eigensolver: implicit-shift QL with accumulated
//! Givens rotations, eigenvalues sorted ascending.
//!
//! This is the dense classical algorithm (EISPACK tql2 lineage): O(N²)
//! rotations, each applied to a contiguous column pair of the
//! column-major eigenvector matrix, so the O(N³) accumulation loop
//! vectorizes well.  Accuracy is the usual backward-stable guarantee:
//! orthogonality and residual both O(Nε).

use crate::error::{Error, Result};

/// Hard cap on QL sweeps per eigenvalue before giving up.
pub const MAX_SWEEPS: usize = 30;

/// A symmetric tridiagonal matrix: `diag` of length n, `offdiag` of
/// length n−1.
#[derive(Clone, Debug)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Domain("matrix must have at least one row".into()));
        }
        if offdiag.len() != diag.len() - 1 {
            return Err(Error::SizeMismatch {
                expected: diag.len() - 1,
                got: offdiag.len(),
            });
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// y = J·x.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
    }

    /// Full eigendecomposition J = VΛVᵀ, eigenvalues ascending.
    pub fn eigen_decomposition(&self) -> Result<EigenDecomposition> {
        let n = self.n();
        let mut d = self.diag.clone();
        // e is padded to length n; e[n-1] is scratch.
        let mut e = self.offdiag.clone();
        e.push(0.0);

        // V starts as the identity and accumulates every rotation.
        let mut v = vec![0.0; n * n];
        for j in 0..n {
            v[j * n + j] = 1.0;
        }

        for l in 0..n {
            let mut sweeps = 0;
            loop {
                // Find the first negligible subdiagonal at or beyond l.
                let mut m = l;
                while m + 1 < n {
                    let scale = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * scale {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::NoConvergence {
                        index: l,
                        sweeps: MAX_SWEEPS,
                    });
                }

                // Wilkinson-style shift from the 2x2 block at l.
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c) = (1.0, 1.0);
                let mut p = 0.0;

                // Chase the bulge from m-1 down to l.
                let mut underflowed = false;
                for i in (l..m).rev() {
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        // Rotation annihilated to nothing: deflate and
                        // restart the sweep.
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflowed = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;

                    rotate_column_pair(&mut v, n, i, s, c);
                }
                if underflowed {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        // Sort ascending, permuting eigenvector columns to match.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&j| d[j]).collect();
        let mut vectors = Vec::with_capacity(n * n);
        for &j in &order {
            vectors.extend_from_slice(&v[j * n..(j + 1) * n]);
        }

        Ok(EigenDecomposition {
            n,
            eigenvalues,
            vectors,
        })
    }
}

/// Free-function form of [`SymTridiagonal::eigen_decomposition`].
pub fn eig_sym_tridiag(m: &SymTridiagonal) -> Result<EigenDecomposition> {
    m.eigen_decomposition()
}

/// Plane-rotate columns i and i+1 of the column-major n×n matrix v.
fn rotate_column_pair(v: &mut [f64], n: usize, i: usize, s: f64, c: f64) {
    let (left, right) = v.split_at_mut((i + 1) * n);
    let col_i = &mut left[i * n..];
    let col_i1 = &mut right[..n];
    for (a, b) in col_i.iter_mut().zip(col_i1.iter_mut()) {
        let f = *b;
        *b = s * *a + c * f;
        *a = c * *a - s * f;
    }
}

/// Result of [`SymTridiagonal::eigen_decomposition`]: ascending
/// eigenvalues and the matching orthonormal eigenvectors, column-major.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
}

impl EigenDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvector for eigenvalue j (unit 2-norm).
    pub fn vector(&self, j: usize) -> &[f64] {
        &self.vectors[j * self.n..(j + 1) * self.n]
    }

    /// Column-major n×n backing storage of all eigenvectors.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    /// Consume the decomposition, yielding (eigenvalues, column-major
    /// eigenvectors) without copying the n×n backing store.
    pub(crate) fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.eigenvalues, self.vectors)
    }

    /// Replace the spectrum with its exactly (λ, −λ)-paired average.
    ///
    /// Only meaningful for matrices whose spectrum is symmetric about
    /// zero (e.g. zero diagonal); never applied automatically.
    pub fn symmetrize_spectrum(&mut self) {
        let n = self.n;
        for k in 0..n / 2 {
            let half = 0.5 * (self.eigenvalues[n - 1 - k] - self.eigenvalues[k]);
            self.eigenvalues[k] = -half;
            self.eigenvalues[n - 1 - k] = half;
        }
        if n % 2 == 1 {
            self.eigenvalues[n / 2] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{matvec, matvec_transpose, spectral_norm, spectral_norm_with};

    /// Jacobi matrix whose eigenvalues are the Gauss-Hermite nodes.
    fn hermite_jacobi(n: usize) -> SymTridiagonal {
        let off = (0..n - 1).map(|i| ((i as f64 + 1.0) / 2.0).sqrt()).collect();
        SymTridiagonal::new(vec![0.0; n], off).unwrap()
    }

    fn orthogonality_defect(dec: &EigenDecomposition) -> f64 {
        let n = dec.n();
        let v = dec.vectors();
        // VᵀV − I is symmetric, so the same closure serves both sides;
        // each needs its own scratch buffer.
        let mut fwd_tmp = vec![0.0; n];
        let mut adj_tmp = vec![0.0; n];
        spectral_norm_with(
            n,
            n,
            |x, y| {
                matvec(v, n, n, x, &mut fwd_tmp);
                matvec_transpose(v, n, n, &fwd_tmp, y);
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi -= xi;
                }
            },
            |x, y| {
                matvec(v, n, n, x, &mut adj_tmp);
                matvec_transpose(v, n, n, &adj_tmp, y);
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi -= xi;
                }
            },
            11,
        )
    }

    fn residual_norm(j: &SymTridiagonal, dec: &EigenDecomposition) -> f64 {
        let n = j.n();
        let mut resid = vec![0.0; n * n];
        for k in 0..n {
            let col = dec.vector(k);
            let out = &mut resid[k * n..(k + 1) * n];
            j.apply(col, out);
            let lam = dec.eigenvalues()[k];
            for (r, &vk) in out.iter_mut().zip(col) {
                *r -= lam * vk;
            }
        }
        spectral_norm(&resid, n, n, 13)
    }

    #[test]
    fn one_by_one_is_trivial() {
        let dec = SymTridiagonal::new(vec![3.5], vec![])
            .unwrap()
            .eigen_decomposition()
            .unwrap();
        assert_eq!(dec.eigenvalues(), &[3.5]);
        assert_eq!(dec.vector(0), &[1.0]);
    }

    #[test]
    fn two_by_two_matches_closed_form() {
        // [[1, 2], [2, 3]] has eigenvalues 2 ∓ √5.
        let dec = SymTridiagonal::new(vec![1.0, 3.0], vec![2.0])
            .unwrap()
            .eigen_decomposition()
            .unwrap();
        let s5 = 5f64.sqrt();
        assert!((dec.eigenvalues()[0] - (2.0 - s5)).abs() < 1e-14);
        assert!((dec.eigenvalues()[1] - (2.0 + s5)).abs() < 1e-14);
    }

    #[test]
    fn hermite_jacobi_largest_eigenvalue_matches_reference() {
        // Largest Gauss-Hermite node for N = 100, 16-digit reference.
        let dec = hermite_jacobi(100).eigen_decomposition().unwrap();
        let got = dec.eigenvalues()[99];
        assert!((got - 13.406487338144908).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn eigenvalues_are_strictly_ascending() {
        let dec = hermite_jacobi(120).eigen_decomposition().unwrap();
        for w in dec.eigenvalues().windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn orthogonality_and_residual_meet_bounds() {
        for n in [10usize, 100] {
            let j = hermite_jacobi(n);
            let dec = j.eigen_decomposition().unwrap();
            let bound = 50.0 * n as f64 * f64::EPSILON;
            let ortho = orthogonality_defect(&dec);
            assert!(ortho <= bound, "n = {n}: ortho {ortho:e} > {bound:e}");
            let jnorm = dec.eigenvalues().last().unwrap().abs();
            let resid = residual_norm(&j, &dec);
            assert!(
                resid <= bound * jnorm,
                "n = {n}: resid {resid:e} > {:e}",
                bound * jnorm
            );
        }
    }

    #[test]
    fn general_tridiagonal_decomposes_accurately() {
        // Deterministic non-trivial diagonal, including clustered values.
        let n = 60;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7919 % 23) as f64).sin()).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + ((i * 104729 % 17) as f64).cos()).collect();
        let j = SymTridiagonal::new(diag, off).unwrap();
        let dec = j.eigen_decomposition().unwrap();
        let bound = 50.0 * n as f64 * f64::EPSILON;
        assert!(orthogonality_defect(&dec) <= bound);
        let jnorm = dec
            .eigenvalues()
            .iter()
            .fold(0f64, |m, &l| m.max(l.abs()));
        assert!(residual_norm(&j, &dec) <= bound * jnorm);
        for w in dec.eigenvalues().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn principal_submatrix_eigenvalues_interlace() {
        let full = hermite_jacobi(10).eigen_decomposition().unwrap();
        let sub = hermite_jacobi(9).eigen_decomposition().unwrap();
        for (i, &mu) in sub.eigenvalues().iter().enumerate() {
            assert!(full.eigenvalues()[i] < mu && mu < full.eigenvalues()[i + 1]);
        }
    }

    #[test]
    fn symmetrize_pairs_spectrum_exactly() {
        let mut dec = hermite_jacobi(11).eigen_decomposition().unwrap();
        dec.symmetrize_spectrum();
        let e = dec.eigenvalues();
        for k in 0..5 {
            assert_eq!(e[k], -e[10 - k]);
        }
        assert_eq!(e[5], 0.0);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            SymTridiagonal::new(vec![], vec![]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            SymTridiagonal::new(vec![1.0, 2.0], vec![1.0, 1.0]),
            Err(Error::SizeMismatch { expected: 1, got: 2 })
        ));
        assert!(SymTridiagonal::new(vec![1.0, f64::NAN], vec![0.0]).is_err());
    }
}
