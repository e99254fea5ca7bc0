//! Minimal double-double arithmetic.
//!
//! A value is stored as an unevaluated sum `hi + lo` of two doubles with
//! `|lo| <= ulp(hi)/2`, giving roughly 32 significant digits.  Only the
//! handful of operations needed elsewhere in the crate are implemented:
//! series accumulation with heavy cancellation and trigonometric argument
//! reduction for large phases, where plain f64 would lose most of its
//! digits.

/// Exact sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`.
#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Exact sum assuming `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Exact product via fused multiply-add: `a * b = p + e`.
#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = f64::mul_add(a, b, -p);
    (p, e)
}

/// Double-double number `hi + lo`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// 2*pi to double-double precision.
pub(crate) const TWO_PI: Dd = Dd {
    hi: 6.283185307179586,
    lo: 2.4492935982947064e-16,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let (p, e) = two_prod(q1, b);
        let q2 = ((self.hi - p) - e + self.lo) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        let (hi, lo2) = quick_two_sum(hi, lo + q3);
        Dd { hi, lo: lo2 }
    }

    /// Square root of a non-negative double, to double-double accuracy.
    #[inline]
    pub fn sqrt_f64(x: f64) -> Dd {
        if x == 0.0 {
            return Dd::ZERO;
        }
        let r = x.sqrt();
        // One Newton correction: e = (x - r*r) / (2r), with the residual
        // computed exactly by fma.
        let e = f64::mul_add(r, -r, x) / (2.0 * r);
        Dd { hi: r, lo: e }
    }

    /// Reduce into (-pi, pi] modulo 2*pi, keeping double-double accuracy.
    ///
    /// The quotient fits an f64 integer for any phase this crate produces,
    /// so the subtracted multiple of `TWO_PI` is exact to ~1e-32 relative.
    #[inline]
    pub fn rem_two_pi(self) -> Dd {
        let n = (self.hi / TWO_PI.hi).round();
        self.sub(TWO_PI.mul_f64(n))
    }

    /// sin(hi + lo), first order in `lo`.
    #[inline]
    pub fn sin(self) -> f64 {
        self.hi.sin() + self.lo * self.hi.cos()
    }

    /// cos(hi + lo), first order in `lo`.
    #[inline]
    pub fn cos(self) -> f64 {
        self.hi.cos() - self.lo * self.hi.sin()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_sum_recovers_lost_bits() {
        let (s, e) = two_sum(1e16, 1.0);
        // The unit here is 2.0, so the 1.0 must reappear in the error term.
        assert_eq!(s + e, 1e16 + 1.0);
        assert_ne!(e, 0.0);
    }

    #[test]
    fn two_prod_residual_is_exact() {
        let a = 1.0 + f64::EPSILON;
        let (p, e) = two_prod(a, a);
        // a^2 = 1 + 2eps + eps^2; the eps^2 cannot fit in p.
        assert_eq!(p, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(e, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn sqrt_squares_back() {
        let s = Dd::sqrt_f64(2.0);
        let r = s.mul(s).sub(Dd::from_f64(2.0));
        assert!(r.hi.abs() < 1e-30, "residual {:e}", r.hi);
        assert_eq!(Dd::sqrt_f64(0.0).to_f64(), 0.0);
    }

    #[test]
    fn div_inverts() {
        let third = Dd::from_f64(1.0).div_f64(3.0);
        let r = third.mul_f64(3.0).sub(Dd::from_f64(1.0));
        assert!(r.hi.abs() < 1e-31, "residual {:e}", r.hi);
    }

    #[test]
    fn full_division_round_trips() {
        let cases = [
            (Dd::sqrt_f64(2.0), Dd::sqrt_f64(3.0)),
            (Dd::from_f64(1.0), Dd::from_f64(7.0)),
            (Dd::new(1e8, 3.1e-9), Dd::new(-44.25, 2.0e-15)),
            (TWO_PI, Dd::sqrt_f64(0.5)),
        ];
        for (a, b) in cases {
            let q = a.div(b);
            let r = q.mul(b).sub(a);
            let scale = a.hi.abs().max(1.0);
            assert!(
                r.hi.abs() <= 1e-30 * scale,
                "residual {:e} for {} / {}",
                r.hi,
                a.hi,
                b.hi
            );
        }
    }

    #[test]
    fn two_pi_low_word_matches_doubled_pi() {
        // 2*fl(pi) differs from true 2pi by exactly the low word.
        let doubled = Dd::from_f64(std::f64::consts::PI).mul_f64(2.0);
        let diff = TWO_PI.sub(doubled);
        assert_eq!(TWO_PI.hi, 2.0 * std::f64::consts::PI);
        assert!((diff.to_f64() - TWO_PI.lo).abs() < 1e-32);
    }

    #[test]
    fn reduced_sin_matches_libm() {
        // std's sin performs correct range reduction, so it is a fair
        // reference for the composed dd path.
        for &x in &[1e3, 12345.678, 1e6, 2.5e8] {
            let red = Dd::from_f64(x).rem_two_pi();
            assert!(red.hi.abs() <= std::f64::consts::PI + 1e-12);
            assert!((red.sin() - x.sin()).abs() < 1e-13, "x = {x}");
            assert!((red.cos() - x.cos()).abs() < 1e-13, "x = {x}");
        }
    }
}
