//! Interval arithmetic on MPFR floats with directed rounding.
//!
//! A `RealBall` is a closed interval `[lo, hi]` guaranteed to contain the
//! mathematical value. All operations round outward, so enclosures stay
//! valid under composition; precision escalation is driven by the callers.

use rug::float::{Constant, Round};
use rug::{Float, Integer};

use crate::angle::TurnAngle;

#[derive(Debug, Clone, PartialEq)]
pub struct RealBall {
    lo: Float,
    hi: Float,
}

fn min_f(a: Float, b: Float) -> Float {
    if a < b {
        a
    } else {
        b
    }
}

fn max_f(a: Float, b: Float) -> Float {
    if a > b {
        a
    } else {
        b
    }
}

impl RealBall {
    pub fn new(lo: Float, hi: Float) -> Self {
        debug_assert!(lo <= hi, "inverted interval: [{lo}, {hi}]");
        RealBall { lo, hi }
    }

    pub fn exact_i64(v: i64, prec: u32) -> Self {
        let f = Float::with_val(prec, v);
        RealBall { lo: f.clone(), hi: f }
    }

    pub fn exact_u64(v: u64, prec: u32) -> Self {
        let f = Float::with_val(prec, v);
        RealBall { lo: f.clone(), hi: f }
    }

    /// An exact point interval at a dyadic rational `num / 2^log2_den`.
    pub fn exact_dyadic(num: i64, log2_den: u32, prec: u32) -> Self {
        let f = Float::with_val(prec.max(64), num) >> log2_den;
        RealBall { lo: f.clone(), hi: f }
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        let f = Float::with_val(prec.max(53), v);
        RealBall { lo: f.clone(), hi: f }
    }

    pub fn from_ratio(num: i64, den: u64, prec: u32) -> Self {
        let lo = Float::with_val_round(prec, Float::with_val(prec + 32, num) / den, Round::Down).0;
        let hi = Float::with_val_round(prec, Float::with_val(prec + 32, num) / den, Round::Up).0;
        RealBall { lo, hi }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact_i64(0, prec)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn width(&self) -> Float {
        Float::with_val_round(self.prec(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn contains_f64(&self, v: f64) -> bool {
        self.lo <= v && self.hi >= v
    }

    pub fn contains_integer(&self, v: &Integer) -> bool {
        self.lo <= *v && self.hi >= *v
    }

    /// Midpoint and radius collapsed to `f64`, rounding the radius up.
    pub fn to_mid_rad(&self) -> (f64, f64) {
        let p = self.prec();
        let mut mid = Float::with_val(p, &self.lo + &self.hi);
        mid /= 2u32;
        let mut rad = Float::with_val_round(p, &self.hi - &mid, Round::Up).0;
        let down = Float::with_val_round(p, &mid - &self.lo, Round::Up).0;
        if down > rad {
            rad = down;
        }
        let mid64 = mid.to_f64();
        // pad for the f64 conversion of the midpoint itself
        let rad64 = rad.to_f64_round(Round::Up) + mid64.abs() * f64::EPSILON;
        (mid64, rad64)
    }

    /// The unique integer contained in the interval, if there is exactly one.
    pub fn unique_integer(&self) -> Option<Integer> {
        let mut lo = self.lo.clone();
        lo.ceil_mut();
        let mut hi = self.hi.clone();
        hi.floor_mut();
        let a = lo.to_integer()?;
        let b = hi.to_integer()?;
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RealBall { lo: self.hi.clone() * -1i32, hi: self.lo.clone() * -1i32 }
    }

    pub fn add(&self, o: &RealBall) -> Self {
        let p = self.prec().max(o.prec());
        RealBall {
            lo: Float::with_val_round(p, &self.lo + &o.lo, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + &o.hi, Round::Up).0,
        }
    }

    pub fn sub(&self, o: &RealBall) -> Self {
        let p = self.prec().max(o.prec());
        RealBall {
            lo: Float::with_val_round(p, &self.lo - &o.hi, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi - &o.lo, Round::Up).0,
        }
    }

    pub fn mul(&self, o: &RealBall) -> Self {
        let p = self.prec().max(o.prec());
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for a in [&self.lo, &self.hi] {
            for b in [&o.lo, &o.hi] {
                let d = Float::with_val_round(p, a * b, Round::Down).0;
                let u = Float::with_val_round(p, a * b, Round::Up).0;
                lo = Some(match lo {
                    None => d,
                    Some(c) => min_f(c, d),
                });
                hi = Some(match hi {
                    None => u,
                    Some(c) => max_f(c, u),
                });
            }
        }
        RealBall { lo: lo.unwrap(), hi: hi.unwrap() }
    }

    pub fn mul_u64(&self, k: u64) -> Self {
        let p = self.prec();
        RealBall {
            lo: Float::with_val_round(p, &self.lo * k, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi * k, Round::Up).0,
        }
    }

    pub fn div_u64(&self, k: u64) -> Self {
        assert!(k > 0);
        let p = self.prec();
        RealBall {
            lo: Float::with_val_round(p, &self.lo / k, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi / k, Round::Up).0,
        }
    }

    pub fn add_i64(&self, v: i64) -> Self {
        let p = self.prec();
        RealBall {
            lo: Float::with_val_round(p, &self.lo + v, Round::Down).0,
            hi: Float::with_val_round(p, &self.hi + v, Round::Up).0,
        }
    }

    /// `x^k` by binary exponentiation; requires a nonnegative interval.
    pub fn pow_u64(&self, k: u64) -> Self {
        assert!(self.lo >= 0, "pow_u64 needs a nonnegative base");
        let p = self.prec();
        let mut result = RealBall::exact_i64(1, p);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn cosh(&self) -> Self {
        let p = self.prec();
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(p, f);
            g.cosh_round(r);
            g
        };
        if self.lo >= 0 {
            RealBall { lo: eval(&self.lo, Round::Down), hi: eval(&self.hi, Round::Up) }
        } else if self.hi <= 0 {
            RealBall { lo: eval(&self.hi, Round::Down), hi: eval(&self.lo, Round::Up) }
        } else {
            // spans zero: minimum is cosh(0) = 1 exactly
            let hi = max_f(eval(&self.lo, Round::Up), eval(&self.hi, Round::Up));
            RealBall { lo: Float::with_val(p, 1), hi }
        }
    }

    /// `argcosh`, clamping endpoints below 1. Callers must guarantee the true
    /// value of the argument is `>= 1`; the clamp only absorbs rounding slack.
    pub fn acosh_clamped(&self) -> Self {
        let p = self.prec();
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(p, f);
            if g < 1 {
                g.assign(1);
            }
            g.acosh_round(r);
            g
        };
        use rug::Assign;
        RealBall { lo: eval(&self.lo, Round::Down), hi: eval(&self.hi, Round::Up) }
    }

    /// Natural log; requires a strictly positive interval.
    pub fn ln(&self) -> Self {
        assert!(self.lo > 0, "ln needs a positive interval, got lo = {}", self.lo);
        let p = self.prec();
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(p, f);
            g.ln_round(r);
            g
        };
        RealBall { lo: eval(&self.lo, Round::Down), hi: eval(&self.hi, Round::Up) }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(p, f);
            g.exp_round(r);
            g
        };
        RealBall { lo: eval(&self.lo, Round::Down), hi: eval(&self.hi, Round::Up) }
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.lo >= 0, "sqrt needs a nonnegative interval");
        let p = self.prec();
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(p, f);
            g.sqrt_round(r);
            g
        };
        RealBall { lo: eval(&self.lo, Round::Down), hi: eval(&self.hi, Round::Up) }
    }

    /// Enclosure of `cos(2*pi*angle)`. Angles with an exact dyadic cosine
    /// come back as point intervals, so zero detection stays decidable.
    pub fn cos_two_pi(angle: TurnAngle, prec: u32) -> Self {
        if let Some((num, log2_den)) = angle.cos_exact() {
            return RealBall::exact_dyadic(num, log2_den, prec);
        }
        let wp = prec + 32;
        let pi_lo = Float::with_val_round(wp, Constant::Pi, Round::Down).0;
        let pi_hi = Float::with_val_round(wp, Constant::Pi, Round::Up).0;
        let theta_lo =
            Float::with_val_round(wp, pi_lo * (2 * angle.num()), Round::Down).0 / angle.den();
        let theta_lo = Float::with_val_round(wp, theta_lo, Round::Down).0;
        let theta_hi =
            Float::with_val_round(wp, pi_hi * (2 * angle.num()), Round::Up).0 / angle.den();
        let theta_hi = Float::with_val_round(wp, theta_hi, Round::Up).0;
        let width = Float::with_val_round(wp, &theta_hi - &theta_lo, Round::Up).0;
        let eval = |f: &Float, r: Round| {
            let mut g = Float::with_val(prec, f);
            g.cos_round(r);
            g
        };
        // cos is 1-Lipschitz, so widening by the argument width covers any
        // interior extremum of the (tiny) argument interval.
        let mut lo = min_f(eval(&theta_lo, Round::Down), eval(&theta_hi, Round::Down));
        let mut hi = max_f(eval(&theta_lo, Round::Up), eval(&theta_hi, Round::Up));
        lo = Float::with_val_round(prec, lo - &width, Round::Down).0;
        hi = Float::with_val_round(prec, hi + &width, Round::Up).0;
        if lo < -1 {
            lo = Float::with_val(prec, -1);
        }
        if hi > 1 {
            hi = Float::with_val(prec, 1);
        }
        RealBall { lo, hi }
    }
}

impl std::fmt::Display for RealBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (mid, rad) = self.to_mid_rad();
        write!(f, "{mid} +/- {rad:.3e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_encloses() {
        let a = RealBall::from_ratio(1, 3, 128);
        let b = RealBall::from_ratio(1, 7, 128);
        let s = a.add(&b);
        let (mid, _) = s.to_mid_rad();
        assert!((mid - (1.0 / 3.0 + 1.0 / 7.0)).abs() < 1e-15);
        let m = a.mul(&b);
        let (mid, _) = m.to_mid_rad();
        assert!((mid - 1.0 / 21.0).abs() < 1e-15);
        assert!(m.width() < 1e-30);
    }

    #[test]
    fn cos_two_pi_exact_points() {
        for (p, q, want) in [(0, 5, 1.0), (1, 2, -1.0), (1, 4, 0.0), (1, 3, -0.5), (1, 6, 0.5)] {
            let c = RealBall::cos_two_pi(TurnAngle::new(p, q), 128);
            assert!(c.is_exact_zero() == (want == 0.0) || c.width().is_zero());
            assert!(c.contains_f64(want));
            assert!(c.width().is_zero(), "expected exact cos for {p}/{q}");
        }
    }

    #[test]
    fn cos_two_pi_generic() {
        let c = RealBall::cos_two_pi(TurnAngle::new(1, 5), 128);
        let (mid, _) = c.to_mid_rad();
        assert!((mid - (2.0 * std::f64::consts::PI / 5.0).cos()).abs() < 1e-15);
        assert!(c.width() < 1e-30);
    }

    #[test]
    fn cosh_acosh_round_trip() {
        let x = RealBall::from_ratio(5, 2, 128);
        let y = x.acosh_clamped().cosh();
        assert!(y.contains_f64(2.5));
        assert!(y.width() < 1e-30);
    }

    #[test]
    fn unique_integer_detection() {
        let a = RealBall::new(Float::with_val(64, 11.9997), Float::with_val(64, 12.0003));
        assert_eq!(a.unique_integer(), Some(Integer::from(12)));
        let b = RealBall::new(Float::with_val(64, 11.4), Float::with_val(64, 13.6));
        assert_eq!(b.unique_integer(), None);
    }

    #[test]
    fn pow_u64_matches() {
        let x = RealBall::from_ratio(3, 2, 128);
        let y = x.pow_u64(10);
        assert!(y.contains_f64(1.5f64.powi(10)));
    }
}
