//! Extended-precision reference computations (test/diagnostic path).
//!
//! Everything here runs on an arbitrary-precision binary float with a
//! configurable significand (default 256 bits).  At that precision the
//! plain three-term recurrence for ψₙ is stable at every size this crate
//! handles: e^{−x²/2} cannot underflow, so the double-precision hazards
//! this library exists to work around simply do not occur, which is what
//! makes these routines usable as references.
//!
//! The oracle is deliberately implementation-independent from the fast
//! path: no code is shared with the double-precision builders beyond the
//! published recurrence coefficients.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::error::{Error, Result};
use crate::transform::{gauss_hermite_nodes, TransformFactors};

/// Significand size for oracle arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub bits: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { bits: 256 }
    }
}

impl PrecisionConfig {
    pub fn new(bits: usize) -> Result<Self> {
        let cfg = PrecisionConfig { bits };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 128 {
            return Err(Error::Precision(format!(
                "oracle precision must be at least 128 bits, got {}",
                self.bits
            )));
        }
        Ok(())
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Shared arithmetic context: precision plus cached constants.
struct Ctx {
    p: usize,
    cs: Consts,
}

impl Ctx {
    fn new(cfg: &PrecisionConfig) -> Result<Ctx> {
        cfg.validate()?;
        let cs = Consts::new()
            .map_err(|e| Error::Precision(format!("constants cache unavailable: {e:?}")))?;
        Ok(Ctx { p: cfg.bits, cs })
    }

    fn f(&self, v: f64) -> BigFloat {
        big_from_f64(v, self.p)
    }

    fn u(&self, v: usize) -> BigFloat {
        BigFloat::from_u64(v as u64, self.p)
    }

    fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cs)
    }

    fn pi(&mut self) -> BigFloat {
        self.cs.pi(self.p, RM)
    }

    /// π^{−1/4}.
    fn inv_pi_quarter(&mut self) -> BigFloat {
        let pi = self.pi();
        let quarter = self.sqrt(&self.sqrt(&pi));
        self.div(&self.f(1.0), &quarter)
    }

    /// ψ₀(x) = π^{−1/4}·e^{−x²/2}.
    fn psi0(&mut self, x: &BigFloat) -> BigFloat {
        let x2 = self.mul(x, x);
        let half = self.div(&x2, &self.f(-2.0));
        let gauss = self.exp(&half);
        let c = self.inv_pi_quarter();
        self.mul(&c, &gauss)
    }

    /// Recurrence coefficients aⱼ = √(2/(j+1)), bⱼ = √(j/(j+1)) for
    /// j = 0..max_degree−1, shared across nodes.
    fn recurrence_coeffs(&self, max_degree: usize) -> (Vec<BigFloat>, Vec<BigFloat>) {
        let mut a = Vec::with_capacity(max_degree);
        let mut b = Vec::with_capacity(max_degree);
        for j in 0..max_degree {
            let jp1 = self.u(j + 1);
            a.push(self.sqrt(&self.div(&self.f(2.0), &jp1)));
            b.push(self.sqrt(&self.div(&self.u(j), &jp1)));
        }
        (a, b)
    }

    /// All of ψ₀..ψ_degree at one point, using precomputed coefficients.
    /// Calls `sink(j, ψⱼ)` for each degree and returns ψ_degree.
    fn psi_sweep(
        &mut self,
        degree: usize,
        x: &BigFloat,
        a: &[BigFloat],
        b: &[BigFloat],
        mut sink: impl FnMut(usize, &BigFloat),
    ) -> BigFloat {
        let mut prev = self.psi0(x);
        sink(0, &prev);
        if degree == 0 {
            return prev;
        }
        let mut cur = self.mul(&self.mul(&a[0], x), &prev);
        sink(1, &cur);
        for j in 1..degree {
            let t1 = self.mul(&self.mul(&a[j], x), &cur);
            let t2 = self.mul(&b[j], &prev);
            let next = self.sub(&t1, &t2);
            prev = cur;
            cur = next;
            sink(j + 1, &cur);
        }
        cur
    }
}

/// Exact conversion of a double into an arbitrary-precision value by
/// direct bit decomposition (v = m·2^e with integer m).
///
/// `BigFloat::from_f64` is not used because (as of astro-float 0.9) it
/// halves subnormal inputs: its subnormal branch misses the exponent
/// adjustment the normal branch applies.  Signed zero collapses to the
/// unsigned arbitrary-precision zero either way.
pub fn big_from_f64(v: f64, p: usize) -> BigFloat {
    if v == 0.0 || !v.is_finite() {
        // Zero, ±∞ and NaN are unaffected by the upstream defect.
        return BigFloat::from_f64(v, p);
    }
    let bits = v.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e2) = if exp_field > 0 {
        ((1u64 << 52) | frac, exp_field - 1075)
    } else {
        (frac, -1074)
    };
    let mut big = BigFloat::from_u64(m, p);
    // Scale by 2^e2 in exactly representable power-of-two chunks.
    let mut rem = e2;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        big = big.mul(
            &BigFloat::from_f64(f64::from_bits(((1023 + step) as u64) << 52), p),
            p,
            RM,
        );
        rem -= step;
    }
    if v.is_sign_negative() {
        big.neg()
    } else {
        big
    }
}

/// Correctly rounded (nearest-even) conversion of an arbitrary-precision
/// value to f64, including overflow to ±∞ and gradual underflow through
/// the subnormal range.
pub fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf() {
        return if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if x.is_zero() {
        return 0.0;
    }
    let (words, _bits, sign, exponent, _inexact) = match x.as_raw_parts() {
        Some(parts) => parts,
        None => return f64::NAN,
    };
    // Mantissa words are little-endian; the top bit of the last word is
    // set.  Value = 0.mantissa × 2^exponent, mantissa ∈ [1/2, 1).
    let top = *words.last().expect("nonzero value has mantissa words");
    let sticky_low = words[..words.len() - 1].iter().any(|&w| w != 0);
    let e = exponent as i64;

    // Number of mantissa bits a double can hold at this magnitude.
    let keep_bits: i64 = if e >= -1021 { 53 } else { e + 1074 };
    let magnitude = if keep_bits < 0 {
        0.0
    } else if keep_bits == 0 {
        // Value in [2^-1075, 2^-1074): round-to-nearest-even of a pure
        // fraction against the smallest subnormal quantum.
        let tie = top == 1u64 << 63 && !sticky_low;
        if tie {
            0.0
        } else {
            f64::from_bits(1)
        }
    } else {
        let keep = keep_bits as u32; // 1..=53
        let shift = 64 - keep;
        let mut kept = top >> shift;
        let guard = (top >> (shift - 1)) & 1 == 1;
        let below_mask = (1u64 << (shift - 1)) - 1;
        let sticky = (top & below_mask) != 0 || sticky_low;
        if guard && (sticky || kept & 1 == 1) {
            kept += 1; // may carry to keep+1 bits; handled by scaling
        }
        scale_by_pow2(kept as f64, e - 64 + i64::from(shift))
    };
    if sign == Sign::Neg {
        -magnitude
    } else {
        magnitude
    }
}

/// x · 2^e with exact power-of-two factors (no powi underflow issues).
fn scale_by_pow2(x: f64, e: i64) -> f64 {
    let mut result = x;
    let mut rem = e;
    while rem != 0 {
        let step = rem.clamp(-1000, 1000);
        let factor = f64::from_bits(((1023 + step) as u64) << 52);
        result *= factor;
        rem -= step;
    }
    result
}

/// Round a vector of extended values to doubles.
pub fn to_f64_vec(values: &[BigFloat]) -> Vec<f64> {
    values.iter().map(big_to_f64).collect()
}

/// ψₙ at each x by the plain recurrence in extended precision.
pub fn oracle_hermite_fn(n: usize, xs: &[f64], cfg: &PrecisionConfig) -> Result<Vec<BigFloat>> {
    if n > 100_000 {
        return Err(Error::Domain(format!(
            "oracle degree cap is 100000, got {n}"
        )));
    }
    let mut ctx = Ctx::new(cfg)?;
    let (a, b) = ctx.recurrence_coeffs(n);
    Ok(xs
        .iter()
        .map(|&x| {
            let xb = ctx.f(x);
            ctx.psi_sweep(n, &xb, &a, &b, |_, _| {})
        })
        .collect())
}

/// Gauss-Hermite nodes and raw weights in extended precision, with Newton
/// seeds taken from the double-precision eigensolver.
pub fn oracle_nodes_weights(
    n: usize,
    cfg: &PrecisionConfig,
) -> Result<(Vec<BigFloat>, Vec<BigFloat>)> {
    let seeds = gauss_hermite_nodes(n)?;
    oracle_nodes_weights_from_seeds(&seeds, cfg)
}

/// As [`oracle_nodes_weights`], but reusing already-computed double
/// eigenvalues as seeds (callers that hold factors avoid a second
/// eigendecomposition).
pub fn oracle_nodes_weights_from_seeds(
    seeds: &[f64],
    cfg: &PrecisionConfig,
) -> Result<(Vec<BigFloat>, Vec<BigFloat>)> {
    let n = seeds.len();
    if n == 0 || n > 5000 {
        return Err(Error::Domain(format!(
            "oracle node count must be in 1..=5000, got {n}"
        )));
    }
    let mut ctx = Ctx::new(cfg)?;
    let (a, b) = ctx.recurrence_coeffs(n);
    let sqrt_2n = ctx.sqrt(&ctx.u(2 * n));
    // Convergence floor a few bits above working precision.
    let tol = ctx.f(2f64.powi(-((ctx.p as i32 - 8).min(1000))));
    let max_iters = 40;

    // Newton on the non-negative half; mirror the rest by parity.
    let half_start = n / 2;
    let mut pos_nodes = Vec::with_capacity(n - half_start);
    for (offset, &seed) in seeds[half_start..].iter().enumerate() {
        let mut x = ctx.f(seed);
        let mut converged = false;
        for _ in 0..max_iters {
            let mut penult = ctx.f(0.0);
            let psi_n = ctx.psi_sweep(n, &x, &a, &b, |j, v| {
                if j == n - 1 {
                    penult = v.clone();
                }
            });
            // ψ_N′ = √(2N)·ψ_{N−1} − x·ψ_N
            let deriv = ctx.sub(&ctx.mul(&sqrt_2n, &penult), &ctx.mul(&x, &psi_n));
            let delta = ctx.div(&psi_n, &deriv);
            x = ctx.sub(&x, &delta);
            let scale = if x.abs() > ctx.f(1.0) {
                x.abs()
            } else {
                ctx.f(1.0)
            };
            if delta.abs() <= ctx.mul(&tol, &scale) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                index: half_start + offset,
                sweeps: max_iters,
            });
        }
        pos_nodes.push(x);
    }

    // Assemble [−p_m..−p_1, (center for odd n), p_1..p_m]; the center
    // entry of pos_nodes (odd n) is its own mirror.
    let mut nodes = Vec::with_capacity(n);
    for x in pos_nodes.iter().skip(n % 2).rev() {
        nodes.push(x.neg());
    }
    if n % 2 == 1 {
        nodes.push(pos_nodes[0].clone());
    }
    nodes.extend(pos_nodes.iter().skip(n % 2).cloned());
    debug_assert_eq!(nodes.len(), n);

    // wₖ = e^{−xₖ²}/(N·ψ_{N−1}(xₖ)²), symmetric in k.
    let mut weights = Vec::with_capacity(n);
    let nb = ctx.u(n);
    for x in &nodes {
        let penult = ctx.psi_sweep(n - 1, x, &a, &b, |_, _| {});
        let x2 = ctx.mul(x, x);
        let gauss = ctx.exp(&x2.neg());
        let denom = ctx.mul(&nb, &ctx.mul(&penult, &penult));
        weights.push(ctx.div(&gauss, &denom));
    }
    Ok((nodes, weights))
}

/// Reference dense transform and inverse, rounded to double for norm
/// comparisons.  Matrices are column-major.
#[derive(Clone, Debug)]
pub struct OracleDenseTransform {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub t: Vec<f64>,
    pub tinv: Vec<f64>,
}

/// T_ref and T⁻¹_ref at extended precision, rounded to double.
///
/// T_{kj} = ψⱼ(xₖ) row by row; T⁻¹ = Tᵀ·W with Wₖ = 1/(N·ψ_{N−1}(xₖ)²),
/// which needs no exponentials and therefore no underflow handling.
pub fn oracle_dense_transform(n: usize, cfg: &PrecisionConfig) -> Result<OracleDenseTransform> {
    if n == 0 || n > 3000 {
        return Err(Error::Domain(format!(
            "oracle dense size must be in 1..=3000, got {n}"
        )));
    }
    let (nodes_big, _) = oracle_nodes_weights(n, cfg)?;
    let mut ctx = Ctx::new(cfg)?;
    let (a, b) = ctx.recurrence_coeffs(n);
    let nb = ctx.u(n);

    let mut t = vec![0.0; n * n];
    let mut tinv = vec![0.0; n * n];
    for (k, x) in nodes_big.iter().enumerate() {
        let mut row = vec![BigFloat::from_f64(0.0, cfg.bits); n];
        ctx.psi_sweep(n - 1, x, &a, &b, |j, v| {
            row[j] = v.clone();
        });
        let last = &row[n - 1];
        let w = ctx.div(&ctx.f(1.0), &ctx.mul(&nb, &ctx.mul(last, last)));
        for (j, v) in row.iter().enumerate() {
            t[j * n + k] = big_to_f64(v);
            // Column k of T⁻¹ is row k of T scaled by Wₖ.
            tinv[k * n + j] = big_to_f64(&ctx.mul(v, &w));
        }
    }
    Ok(OracleDenseTransform {
        n,
        nodes: to_f64_vec(&nodes_big),
        t,
        tinv,
    })
}

/// Max entry of |T·T⁻¹ − I| evaluated wholly in extended precision.
/// Diagnostic for small sizes (cap 128): O(n³) extended products.
pub fn oracle_identity_defect(n: usize, cfg: &PrecisionConfig) -> Result<f64> {
    if n == 0 || n > 128 {
        return Err(Error::Domain(format!(
            "identity-defect size must be in 1..=128, got {n}"
        )));
    }
    let (nodes_big, _) = oracle_nodes_weights(n, cfg)?;
    let mut ctx = Ctx::new(cfg)?;
    let (a, b) = ctx.recurrence_coeffs(n);
    let nb = ctx.u(n);

    // Extended T rows and the weights W.
    let mut rows: Vec<Vec<BigFloat>> = Vec::with_capacity(n);
    let mut w: Vec<BigFloat> = Vec::with_capacity(n);
    for x in &nodes_big {
        let mut row = vec![BigFloat::from_f64(0.0, cfg.bits); n];
        ctx.psi_sweep(n - 1, x, &a, &b, |j, v| {
            row[j] = v.clone();
        });
        let last = row[n - 1].clone();
        w.push(ctx.div(&ctx.f(1.0), &ctx.mul(&nb, &ctx.mul(&last, &last))));
        rows.push(row);
    }

    // (T·T⁻¹)_{il} = W_l · Σⱼ ψⱼ(x_i)ψⱼ(x_l).
    let mut worst = ctx.f(0.0);
    for i in 0..n {
        for l in 0..n {
            let mut acc = ctx.f(0.0);
            for j in 0..n {
                acc = ctx.add(&acc, &ctx.mul(&rows[i][j], &rows[l][j]));
            }
            let mut entry = ctx.mul(&w[l], &acc);
            if i == l {
                entry = ctx.sub(&entry, &ctx.f(1.0));
            }
            if entry.abs() > worst {
                worst = entry.abs();
            }
        }
    }
    Ok(big_to_f64(&worst))
}

/// Reference factored transform (x, d, Q) rounded to double — the same
/// shape the fast path produces, e.g. for dumping into an HTF1 container.
pub fn oracle_factors(n: usize, cfg: &PrecisionConfig) -> Result<TransformFactors> {
    if n == 0 || n > 3000 {
        return Err(Error::Domain(format!(
            "oracle factors size must be in 1..=3000, got {n}"
        )));
    }
    let (nodes_big, _) = oracle_nodes_weights(n, cfg)?;
    let mut ctx = Ctx::new(cfg)?;
    let (a, b) = ctx.recurrence_coeffs(n);
    let sqrt_n = ctx.sqrt(&ctx.u(n));

    let mut d = vec![0.0; n];
    let mut q = vec![0.0; n * n];
    for (j, x) in nodes_big.iter().enumerate() {
        let mut col = vec![BigFloat::from_f64(0.0, cfg.bits); n];
        ctx.psi_sweep(n - 1, x, &a, &b, |k, v| {
            col[k] = v.clone();
        });
        let dj = ctx.mul(&sqrt_n, &col[n - 1].abs());
        d[j] = big_to_f64(&dj);
        for (k, v) in col.iter().enumerate() {
            q[j * n + k] = big_to_f64(&ctx.div(v, &dj));
        }
    }
    Ok(TransformFactors::from_parts(
        n,
        to_f64_vec(&nodes_big),
        d,
        q,
    ))
}
