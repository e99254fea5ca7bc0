//! Small dense-matrix utilities: column-major matvecs and a randomized
//! power-iteration estimate of the spectral norm.
//!
//! Matrices are stored column-major throughout the crate (column j of an
//! r×c matrix occupies `a[j*r..(j+1)*r]`), so both A·x and Aᵀ·x walk
//! contiguous memory.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// y = A·x for column-major A (r×c), x of length c, y of length r.
pub fn matvec(a: &[f64], r: usize, c: usize, x: &[f64], y: &mut [f64]) {
    assert_eq!(a.len(), r * c);
    assert_eq!(x.len(), c);
    assert_eq!(y.len(), r);
    y.fill(0.0);
    for (j, &xj) in x.iter().enumerate() {
        let col = &a[j * r..(j + 1) * r];
        for (yi, &aij) in y.iter_mut().zip(col) {
            *yi += aij * xj;
        }
    }
}

/// y = Aᵀ·x for column-major A (r×c), x of length r, y of length c.
pub fn matvec_transpose(a: &[f64], r: usize, c: usize, x: &[f64], y: &mut [f64]) {
    assert_eq!(a.len(), r * c);
    assert_eq!(x.len(), r);
    assert_eq!(y.len(), c);
    for (j, yj) in y.iter_mut().enumerate() {
        let col = &a[j * r..(j + 1) * r];
        *yj = col.iter().zip(x).map(|(&aij, &xi)| aij * xi).sum();
    }
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|&x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm2(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

/// Spectral norm of an r×c operator given as matvec closures, estimated by
/// power iteration on AᵀA from a seeded random start.
///
/// The estimate converges from below; 500 alternating applications with a
/// 1e-12 relative stagnation cutoff leave the result accurate to far
/// better than the slack in any tolerance it is compared against here.
pub fn spectral_norm_with(
    r: usize,
    c: usize,
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut apply_t: impl FnMut(&[f64], &mut [f64]),
    seed: u64,
) -> f64 {
    if r == 0 || c == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..c).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut w = vec![0.0; r];
    let mut sigma = 0.0;
    let mut stagnant = 0;
    for _ in 0..500 {
        apply(&v, &mut w);
        let s = normalize(&mut w);
        if s == 0.0 {
            return 0.0;
        }
        apply_t(&w, &mut v);
        let estimate = normalize(&mut v);
        if (estimate - sigma).abs() <= 1e-12 * estimate.max(1e-300) {
            stagnant += 1;
            if stagnant >= 3 {
                return estimate;
            }
        } else {
            stagnant = 0;
        }
        sigma = estimate;
    }
    sigma
}

/// Spectral norm of a dense column-major r×c matrix.
pub fn spectral_norm(a: &[f64], r: usize, c: usize, seed: u64) -> f64 {
    spectral_norm_with(
        r,
        c,
        |x, y| matvec(a, r, c, x, y),
        |x, y| matvec_transpose(a, r, c, x, y),
        seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_matches_hand_computation() {
        // A = [[1, 3], [2, 4]] column-major.
        let a = [1.0, 2.0, 3.0, 4.0];
        let mut y = [0.0; 2];
        matvec(&a, 2, 2, &[1.0, 1.0], &mut y);
        assert_eq!(y, [4.0, 6.0]);
        matvec_transpose(&a, 2, 2, &[1.0, 1.0], &mut y);
        assert_eq!(y, [3.0, 7.0]);
    }

    #[test]
    fn spectral_norm_of_diagonal_is_max_entry() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        for (j, s) in [0.5, -3.0, 2.0, 1.0, 0.1].iter().enumerate() {
            a[j * n + j] = *s;
        }
        let got = spectral_norm(&a, n, n, 7);
        assert!((got - 3.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn spectral_norm_of_rank_one_matrix() {
        // uvᵀ has norm ‖u‖‖v‖.
        let u = [1.0, 2.0, -2.0];
        let v = [3.0, 4.0];
        let mut a = vec![0.0; 6];
        for j in 0..2 {
            for i in 0..3 {
                a[j * 3 + i] = u[i] * v[j];
            }
        }
        let got = spectral_norm(&a, 3, 2, 7);
        assert!((got - 15.0).abs() < 1e-9, "got {got}");
    }

    #[test]
    fn zero_matrix_has_zero_norm() {
        assert_eq!(spectral_norm(&[0.0; 9], 3, 3, 1), 0.0);
    }
}
