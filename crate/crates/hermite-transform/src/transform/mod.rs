//! Hermite-transform assembly and application.
//!
//! The transform T maps expansion coefficients to values at the N
//! Gauss-Hermite nodes: T_{ij} = ψⱼ(x_i).  Three assembly backends are
//! provided:
//!
//! * `build_direct`: the textbook three-term recurrence with the Gaussian
//!   seeded into column 0.  Fast but silently corrupted once
//!   e^{−x₀²/2} underflows (N ≥ 766 for the extreme node).
//! * `build_bunck`: the adaptively rescaled recurrence.  Stable at every
//!   tested size; columns carry running log-scale corrections that are
//!   undone per entry at the end.
//! * `build_golub_welsch`: the factored form T = diag(d)·Qᵀ obtained from
//!   the Jacobi-matrix eigendecomposition, where Q is orthogonal and
//!   dⱼ = √N·|ψ_{N−1}(xⱼ)|.  Never forms T unless asked.
//!
//! All matrices are stored column-major: entry (i, j) of an N×N matrix
//! `m` lives at `m[j*N + i]`.

pub mod io;

use std::str::FromStr;

use num_complex::Complex64;

use crate::dd::{two_prod, Dd};
use crate::error::{Error, Result};
use crate::linalg::{matvec, matvec_transpose};
use crate::special::{hermite_fn, DEFAULT_DISPATCH_THRESHOLD};
use crate::tridiag::{eig_sym_tridiag, SymTridiagonal};

/// Transform assembly algorithm selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Direct,
    GolubWelsch,
    Bunck,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Direct, Backend::GolubWelsch, Backend::Bunck];
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Backend::Direct),
            "golub_welsch" | "golub-welsch" => Ok(Backend::GolubWelsch),
            "bunck" => Ok(Backend::Bunck),
            other => Err(Error::Domain(format!(
                "unknown backend '{other}' (expected direct, golub_welsch, or bunck)"
            ))),
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Direct => "direct",
            Backend::GolubWelsch => "golub_welsch",
            Backend::Bunck => "bunck",
        })
    }
}

/// The Jacobi matrix of the Hermite recurrence: zero diagonal,
/// offdiag[i] = √((i+1)/2).  Its eigenvalues are the Gauss-Hermite nodes.
pub fn jacobi_matrix(n: usize) -> Result<SymTridiagonal> {
    if n == 0 {
        return Err(Error::Domain("transform size must be at least 1".into()));
    }
    let offdiag = (0..n - 1)
        .map(|i| ((i as f64 + 1.0) / 2.0).sqrt())
        .collect();
    SymTridiagonal::new(vec![0.0; n], offdiag)
}

/// The N Gauss-Hermite nodes, ascending, via the full Jacobi
/// eigendecomposition plus a Newton polish of the eigenvalues.
///
/// This is the node-acquisition step shared by every backend: the direct
/// and Bunck builders have no node source of their own, so their assembly
/// cost includes this call.
pub fn gauss_hermite_nodes(n: usize) -> Result<Vec<f64>> {
    let dec = eig_sym_tridiag(&jacobi_matrix(n)?)?;
    let (mut nodes, _) = dec.into_parts();
    polish_hermite_nodes(&mut nodes);
    Ok(nodes)
}

/// One double-double Newton step per eigenvalue against the Jacobi
/// characteristic polynomial, leaving each node correctly rounded to a
/// few ulps.
///
/// The QL sweep alone carries O(√N·ε·‖J‖) absolute error, which at
/// N = 1000 (‖J‖ ≈ 44) is ~3e-13 and misses the 1e-13 node contract.
/// Seeds that accurate make a single quadratically convergent step land
/// below 1e-24, so the f64 rounding of the result is what remains.  The
/// polynomial is evaluated through the ratio recurrence
/// r_k = λ − B_{k−1}/r_{k−1} (monic char poly, B_j = j/2 exact in f64),
/// which cannot overflow; the log-derivative comes along for the Newton
/// increment −p/p′ = −1/q_n.
fn polish_hermite_nodes(nodes: &mut [f64]) {
    let n = nodes.len();
    for x in nodes.iter_mut() {
        // The exact-center node of odd N is already ~ε accurate, and
        // λ → 0 makes q_1 = 1/λ a pole; leave it be.
        if !x.is_finite() || x.abs() < 1e-9 {
            continue;
        }
        let lam = Dd::from_f64(*x);
        let mut r = lam; // r_1
        let mut q_prev2 = Dd::ZERO; // q_0
        let mut q_prev = Dd::from_f64(1.0).div(lam); // q_1
        for k in 2..=n {
            if r.hi == 0.0 {
                r = Dd::from_f64(f64::MIN_POSITIVE);
            }
            let b = (k - 1) as f64 / 2.0;
            let r_next = lam.sub(Dd::from_f64(b).div(r));
            let s = Dd::from_f64(1.0)
                .add(lam.mul(q_prev))
                .sub(q_prev2.mul_f64(b).div(r));
            let r_safe = if r_next.hi == 0.0 {
                Dd::from_f64(f64::MIN_POSITIVE)
            } else {
                r_next
            };
            q_prev2 = q_prev;
            q_prev = s.div(r_safe);
            r = r_next;
        }
        let delta = Dd::from_f64(-1.0).div(q_prev);
        // A sane step moves a 3e-13-accurate seed by about that much; a
        // wild one means the recurrence hit a pole, so keep the seed.
        if delta.hi.is_finite() && delta.hi.abs() < 1e-6 {
            *x = lam.add(delta).to_f64();
        }
    }
}

/// Factored Hermite transform T = diag(d)·Qᵀ, T⁻¹ = Q·diag(1/d).
///
/// Q is orthogonal with Q_{kj} = ψₖ(xⱼ)/dⱼ and dⱼ = √N·|ψ_{N−1}(xⱼ)| > 0,
/// so applying the transform in either direction is one dense mat-vec
/// plus a diagonal scaling.  Immutable after construction and safe to
/// share across threads.
#[derive(Clone, Debug)]
pub struct TransformFactors {
    n: usize,
    nodes: Vec<f64>,
    d: Vec<f64>,
    q: Vec<f64>,
}

impl TransformFactors {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Gauss-Hermite nodes, ascending.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Diagonal scale factors dⱼ = √N·|ψ_{N−1}(xⱼ)|.
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Orthogonal factor, column-major N×N.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub(crate) fn from_parts(n: usize, nodes: Vec<f64>, d: Vec<f64>, q: Vec<f64>) -> Self {
        TransformFactors { n, nodes, d, q }
    }

    /// v = diag(d)·(Qᵀc): coefficients to node values.
    pub fn forward(&self, c: &[f64]) -> Result<Vec<f64>> {
        self.check_len(c.len())?;
        let mut v = vec![0.0; self.n];
        matvec_transpose(&self.q, self.n, self.n, c, &mut v);
        for (vi, di) in v.iter_mut().zip(&self.d) {
            *vi *= di;
        }
        Ok(v)
    }

    /// c = Q·(v/d): node values to coefficients.
    pub fn inverse(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check_len(v.len())?;
        let scaled: Vec<f64> = v.iter().zip(&self.d).map(|(vi, di)| vi / di).collect();
        let mut c = vec![0.0; self.n];
        matvec(&self.q, self.n, self.n, &scaled, &mut c);
        Ok(c)
    }

    /// Complex forward transform (the real operator applied to real and
    /// imaginary parts).
    pub fn forward_complex(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(c.len())?;
        let mut v = matvec_transpose_complex(&self.q, self.n, c);
        for (vi, di) in v.iter_mut().zip(&self.d) {
            *vi *= *di;
        }
        Ok(v)
    }

    /// Complex inverse transform.
    pub fn inverse_complex(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(v.len())?;
        let scaled: Vec<Complex64> = v.iter().zip(&self.d).map(|(vi, di)| vi / di).collect();
        Ok(matvec_complex(&self.q, self.n, &scaled))
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got == self.n {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: self.n,
                got,
            })
        }
    }
}

/// An explicit dense transform matrix (direct/Bunck backends, or a
/// densified factored transform), with the node grid it was built on.
#[derive(Clone, Debug)]
pub struct DenseTransform {
    n: usize,
    nodes: Vec<f64>,
    t: Vec<f64>,
}

impl DenseTransform {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Column-major N×N matrix entries.
    pub fn matrix(&self) -> &[f64] {
        &self.t
    }

    /// y = T·x.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; self.n];
        matvec(&self.t, self.n, self.n, x, &mut y);
        Ok(y)
    }

    /// y = T·x for complex x.
    pub fn apply_complex(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(matvec_complex(&self.t, self.n, x))
    }
}

fn validate_nodes(nodes: &[f64]) -> Result<usize> {
    if nodes.is_empty() {
        return Err(Error::Domain("node set must be non-empty".into()));
    }
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("nodes must be finite".into()));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("nodes must be strictly ascending".into()));
    }
    Ok(nodes.len())
}

/// Assemble T by the plain recurrence: column 0 is π^{−1/4}e^{−x²/2},
/// column 1 is √2·x ⊙ column 0, then ψ_{j+1} = √(2/(j+1))·x·ψⱼ −
/// √(j/(j+1))·ψ_{j−1} columnwise.
///
/// No rescaling: this faithfully reproduces the unstable baseline, whose
/// extreme rows underflow to exact zeros for N ≥ 766.
pub fn build_direct(nodes: &[f64]) -> Result<DenseTransform> {
    let n = validate_nodes(nodes)?;
    let inv_pi4 = std::f64::consts::PI.powf(-0.25);
    let mut t = vec![0.0; n * n];

    for (k, &x) in nodes.iter().enumerate() {
        t[k] = inv_pi4 * (-x * x / 2.0).exp();
    }
    if n >= 2 {
        let (c0, c1) = t.split_at_mut(n);
        for (k, &x) in nodes.iter().enumerate() {
            c1[k] = std::f64::consts::SQRT_2 * x * c0[k];
        }
    }
    for j in 1..n - 1 {
        let a = (2.0 / (j as f64 + 1.0)).sqrt();
        let b = (j as f64 / (j as f64 + 1.0)).sqrt();
        let (prev, next) = t.split_at_mut((j + 1) * n);
        let cm1 = &prev[(j - 1) * n..j * n];
        let c0 = &prev[j * n..];
        let c1 = &mut next[..n];
        for k in 0..n {
            c1[k] = a * nodes[k] * c0[k] - b * cm1[k];
        }
    }

    Ok(DenseTransform {
        n,
        nodes: nodes.to_vec(),
        t,
    })
}

/// Assemble T by the rescaled recurrence.
///
/// Working vectors start without the Gaussian (h₀ = π^{−1/4}·𝟙,
/// h₁ = √2·π^{−1/4}·x); whenever a working value reaches |h| ≥ 10 it is
/// damped by e^{−s} with s = ln|h| (both active vectors, keeping the
/// recurrence consistent), and each finished column j is de-scaled by
/// exp(−x²/2 + Σ_{i≤j} sᵢ).  The running Σsᵢ is kept incrementally, one
/// compensated accumulator per node, and the x² in the final exponent is
/// split into high/low parts so the de-scaling itself stays accurate to a
/// few ulps even when Σsᵢ has grown to O(x²/2) ≈ 750.
pub fn build_bunck(nodes: &[f64]) -> Result<DenseTransform> {
    let n = validate_nodes(nodes)?;
    let inv_pi4 = std::f64::consts::PI.powf(-0.25);
    let mut t = vec![0.0; n * n];

    // Per-node working state.
    let mut h_prev: Vec<f64> = vec![inv_pi4; n];
    let mut h_cur: Vec<f64> = nodes
        .iter()
        .map(|&x| std::f64::consts::SQRT_2 * inv_pi4 * x)
        .collect();
    let mut h_next = vec![0.0; n];
    // x²/2 split exactly: x² = p + e with p the rounded product.
    let split: Vec<(f64, f64)> = nodes.iter().map(|&x| two_prod(x, x)).collect();
    let mut sum = vec![0.0; n];
    let mut comp = vec![0.0; n];

    let finalize = |h: f64, s: f64, c: f64, pe: (f64, f64)| -> f64 {
        h * ((-pe.0 / 2.0 + s) + (c - pe.1 / 2.0)).exp()
    };

    // Column 0 is never rescaled (the first damping step acts on h₁, h₂).
    for k in 0..n {
        t[k] = finalize(h_prev[k], 0.0, 0.0, split[k]);
    }
    for j in 1..n - 1 {
        let a = (2.0 / (j as f64 + 1.0)).sqrt();
        let b = (j as f64 / (j as f64 + 1.0)).sqrt();
        let col = &mut t[j * n..(j + 1) * n];
        for k in 0..n {
            h_next[k] = a * nodes[k] * h_cur[k] - b * h_prev[k];
            let s = if h_cur[k].abs() >= 10.0 {
                h_cur[k].abs().ln()
            } else {
                0.0
            };
            if s != 0.0 {
                let damp = (-s).exp();
                h_cur[k] *= damp;
                h_next[k] *= damp;
                kahan_add(&mut sum[k], &mut comp[k], s);
            }
            col[k] = finalize(h_cur[k], sum[k], comp[k], split[k]);
        }
        std::mem::swap(&mut h_prev, &mut h_cur);
        std::mem::swap(&mut h_cur, &mut h_next);
    }
    if n >= 2 {
        let col = &mut t[(n - 1) * n..];
        for k in 0..n {
            col[k] = finalize(h_cur[k], sum[k], comp[k], split[k]);
        }
    }

    Ok(DenseTransform {
        n,
        nodes: nodes.to_vec(),
        t,
    })
}

/// Compensated accumulation: sum + comp carries Σv to roughly double the
/// working precision.
fn kahan_add(sum: &mut f64, comp: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *comp += (*sum - t) + v;
    } else {
        *comp += (v - t) + *sum;
    }
    *sum = t;
}

/// Assemble the factored transform from the Jacobi eigendecomposition,
/// with the default degree threshold for the ψ_{N−1} evaluation.
pub fn build_golub_welsch(n: usize) -> Result<TransformFactors> {
    build_golub_welsch_with_threshold(n, DEFAULT_DISPATCH_THRESHOLD)
}

/// Assemble the factored transform: eigendecompose the Jacobi matrix,
/// fix eigenvector column signs to sign(Q_{N−1,j}) = (−1)^{N−1−j}, and
/// evaluate dⱼ = √N·|ψ_{N−1}(xⱼ)| on the non-negative nodes only,
/// mirroring to negative nodes by parity of |ψ_{N−1}|.
///
/// `threshold` selects Clenshaw vs asymptotic ψ evaluation (degree+1 <
/// threshold uses Clenshaw); it exists so error sweeps can move the
/// crossover.
pub fn build_golub_welsch_with_threshold(n: usize, threshold: usize) -> Result<TransformFactors> {
    let dec = eig_sym_tridiag(&jacobi_matrix(n)?)?;
    let (mut nodes, mut q) = dec.into_parts();
    polish_hermite_nodes(&mut nodes);

    for j in 0..n {
        let last = q[j * n + (n - 1)];
        // ψ_{N−1} cannot vanish at a node of ψ_N (interlacing), so the
        // entry fixing the sign is never zero.
        assert!(last != 0.0, "zero trailing eigenvector component");
        let want_negative = (n - 1 - j) % 2 == 1;
        if (last < 0.0) != want_negative {
            for entry in &mut q[j * n..(j + 1) * n] {
                *entry = -*entry;
            }
        }
    }

    let half = n / 2;
    let psi = hermite_fn(n - 1, &nodes[half..], threshold)?;
    let sqrt_n = (n as f64).sqrt();
    let d_pos: Vec<f64> = psi.iter().map(|p| sqrt_n * p.abs()).collect();
    let mut d = Vec::with_capacity(n);
    d.extend(d_pos.iter().rev());
    d.extend(&d_pos[n % 2..]);

    Ok(TransformFactors { n, nodes, d, q })
}

/// Densify the factored transform: T = diag(d)·Qᵀ and T⁻¹ = Q·diag(1/d).
pub fn dense_from_factors(f: &TransformFactors) -> (DenseTransform, DenseTransform) {
    let n = f.n;
    let mut t = vec![0.0; n * n];
    let mut tinv = vec![0.0; n * n];
    for j in 0..n {
        let tcol = &mut t[j * n..(j + 1) * n];
        for i in 0..n {
            tcol[i] = f.d[i] * f.q[i * n + j];
        }
        let icol = &mut tinv[j * n..(j + 1) * n];
        let inv_d = 1.0 / f.d[j];
        for (dst, src) in icol.iter_mut().zip(&f.q[j * n..(j + 1) * n]) {
            *dst = src * inv_d;
        }
    }
    (
        DenseTransform {
            n,
            nodes: f.nodes.clone(),
            t,
        },
        DenseTransform {
            n,
            nodes: f.nodes.clone(),
            t: tinv,
        },
    )
}

/// T⁻¹ = Tᵀ·W from a dense T, with Wⱼ = 1/(N·ψ_{N−1}(xⱼ)²) read off T's
/// own final column.
///
/// This is how the direct and Bunck backends obtain their inverse, so a
/// corrupted final column (direct backend at large N) corrupts — or
/// poisons with infinities — the inverse as well.  That is intentional.
pub fn dense_inverse_via_weights(t: &DenseTransform) -> DenseTransform {
    let n = t.n;
    let last = &t.t[(n - 1) * n..];
    let nf = n as f64;
    let mut tinv = vec![0.0; n * n];
    for j in 0..n {
        let w = 1.0 / (nf * last[j] * last[j]);
        let col = &mut tinv[j * n..(j + 1) * n];
        // Column j of T⁻¹ is row j of T, scaled by Wⱼ.
        for (i, dst) in col.iter_mut().enumerate() {
            *dst = t.t[i * n + j] * w;
        }
    }
    DenseTransform {
        n,
        nodes: t.nodes.clone(),
        t: tinv,
    }
}

/// Build (T, T⁻¹) for any backend: a convenience wrapper used by the CLI
/// and the PDE solver's dense paths.
pub fn build_dense_pair(n: usize, backend: Backend) -> Result<(DenseTransform, DenseTransform)> {
    match backend {
        Backend::GolubWelsch => Ok(dense_from_factors(&build_golub_welsch(n)?)),
        Backend::Direct => {
            let t = build_direct(&gauss_hermite_nodes(n)?)?;
            let tinv = dense_inverse_via_weights(&t);
            Ok((t, tinv))
        }
        Backend::Bunck => {
            let t = build_bunck(&gauss_hermite_nodes(n)?)?;
            let tinv = dense_inverse_via_weights(&t);
            Ok((t, tinv))
        }
    }
}

/// Gauss-Hermite quadrature data derived from the factored transform.
#[derive(Clone, Debug)]
pub struct GaussHermiteRule {
    nodes: Vec<f64>,
    raw_weights: Vec<f64>,
    effective_weights: Vec<f64>,
}

impl GaussHermiteRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// wₖ = e^{−xₖ²}/(N·ψ_{N−1}(xₖ)²).  Underflows to exact zeros at the
    /// extreme nodes once N ≥ 372.
    pub fn raw_weights(&self) -> &[f64] {
        &self.raw_weights
    }

    /// Wₖₖ = wₖ·e^{xₖ²} = 1/dₖ², always representable.
    pub fn effective_weights(&self) -> &[f64] {
        &self.effective_weights
    }
}

/// Quadrature rule from factors: Wₖₖ = 1/dₖ², wₖ = e^{−xₖ²}·Wₖₖ.
pub fn gauss_hermite_rule(f: &TransformFactors) -> GaussHermiteRule {
    let effective_weights: Vec<f64> = f.d.iter().map(|d| 1.0 / (d * d)).collect();
    let raw_weights: Vec<f64> = f
        .nodes
        .iter()
        .zip(&effective_weights)
        .map(|(&x, &w)| (-x * x).exp() * w)
        .collect();
    GaussHermiteRule {
        nodes: f.nodes.clone(),
        raw_weights,
        effective_weights,
    }
}

fn matvec_complex(a: &[f64], n: usize, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for (j, &xj) in x.iter().enumerate() {
        let col = &a[j * n..(j + 1) * n];
        for (yi, &aij) in y.iter_mut().zip(col) {
            *yi += xj * aij;
        }
    }
    y
}

fn matvec_transpose_complex(a: &[f64], n: usize, x: &[Complex64]) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            let col = &a[j * n..(j + 1) * n];
            col.iter()
                .zip(x)
                .map(|(&aij, &xi)| xi * aij)
                .sum::<Complex64>()
        })
        .collect()
}
