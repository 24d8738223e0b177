//! Modified I-Bessel functions and their multidimensional analogue, with
//! explicit error accounting.
//!
//! The power series has all-positive terms, so it is cancellation-free and
//! serves as the reference branch; the exponentially-scaled asymptotic
//! expansion takes over for large arguments, with the two branches required
//! to agree at the seam (see tests).

use super::Enclosure;
use crate::error::{Error, Result};
use crate::entropy::quad::adaptive_gk;

/// Seam between the power series and the asymptotic expansion.
const SERIES_LIMIT: f64 = 80.0;

fn ln_factorial(n: u32) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 256 {
        (2..=n).map(|j| (j as f64).ln()).sum()
    } else {
        // Stirling with the leading correction terms
        let x = n as f64 + 1.0;
        (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x * x * x)
    }
}

/// Power-series evaluation of `I_order(x)`, unscaled. Valid for any
/// `x >= 0` that does not overflow `f64` (roughly `x < 700`).
fn series_i(order: u32, x: f64) -> Enclosure {
    let half = 0.5 * x;
    let q = half * half;
    // leading term (x/2)^order / order!
    let ln_t0 = order as f64 * half.ln() - ln_factorial(order);
    if ln_t0 < -745.0 {
        // underflows f64 entirely; the value is below 5e-324
        return Enclosure { mid: 0.0, rad: f64::MIN_POSITIVE };
    }
    let mut term = ln_t0.exp();
    let mut sum = term;
    let mut k = 0u64;
    loop {
        k += 1;
        let ratio = q / (k as f64 * (k as f64 + order as f64));
        term *= ratio;
        sum += term;
        if term < sum * 1e-18 && ratio < 0.5 {
            let tail = term * ratio / (1.0 - ratio);
            let rounding = sum * (k as f64 + 4.0) * f64::EPSILON;
            return Enclosure { mid: sum, rad: tail + rounding };
        }
        if k > 100_000 {
            return Enclosure { mid: sum, rad: sum }; // should be unreachable
        }
    }
}

/// Asymptotic expansion of `e^{-x} I_order(x)` for large `x`.
/// Error taken as twice the first omitted term, standard for this regime.
fn asymptotic_i_scaled(order: u32, x: f64) -> Enclosure {
    let mu = 4.0 * (order as f64) * (order as f64);
    let prefactor = 1.0 / (2.0 * std::f64::consts::PI * x).sqrt();
    let mut term = 1.0f64;
    let mut sum = term;
    let mut prev_abs = f64::INFINITY;
    for k in 1..=30u32 {
        let kk = (2 * k - 1) as f64;
        term *= -(mu - kk * kk) / (8.0 * k as f64 * x);
        if term.abs() >= prev_abs {
            // divergent tail reached; back the last term out of the sum
            return Enclosure {
                mid: (sum) * prefactor,
                rad: (2.0 * term.abs() + 30.0 * f64::EPSILON * sum.abs()) * prefactor,
            };
        }
        sum += term;
        prev_abs = term.abs();
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    Enclosure {
        mid: sum * prefactor,
        rad: (2.0 * term.abs() + 30.0 * f64::EPSILON * sum.abs()) * prefactor,
    }
}

/// Enclosure of `e^{-x} I_order(x)`, `x >= 0`.
pub fn bessel_i_scaled(order: u32, x: f64) -> Enclosure {
    assert!(x >= 0.0 && x.is_finite(), "bessel argument must be finite and nonnegative");
    if x == 0.0 {
        return Enclosure { mid: if order == 0 { 1.0 } else { 0.0 }, rad: 0.0 };
    }
    if x <= SERIES_LIMIT {
        let s = series_i(order, x);
        let e = (-x).exp();
        return Enclosure { mid: s.mid * e, rad: s.rad * e + s.mid * e * 4.0 * f64::EPSILON };
    }
    if (order as f64) * (order as f64) <= x / 4.0 {
        return asymptotic_i_scaled(order, x);
    }
    // large argument and large order: outside both branches' comfort zone;
    // return an honest wide enclosure from two standard upper bounds
    let ub_order = (order as f64 * (0.5 * x).ln() - ln_factorial(order)).exp().min(1.0);
    let ub_zero = 1.0 / (2.0 * std::f64::consts::PI * x).sqrt() * 1.1;
    let ub = ub_order.min(ub_zero);
    Enclosure { mid: 0.5 * ub, rad: 0.5 * ub }
}

/// Enclosure of `I_order(x)`, `x >= 0`. Overflows to an infinite enclosure
/// past the `f64` range; large-argument callers use the scaled variant.
pub fn bessel_i(order: u32, x: f64) -> Enclosure {
    assert!(x >= 0.0 && x.is_finite(), "bessel argument must be finite and nonnegative");
    if x == 0.0 {
        return Enclosure { mid: if order == 0 { 1.0 } else { 0.0 }, rad: 0.0 };
    }
    if x <= SERIES_LIMIT {
        return series_i(order, x);
    }
    let s = bessel_i_scaled(order, x);
    let e = x.exp();
    if !e.is_finite() {
        return Enclosure { mid: f64::INFINITY, rad: f64::INFINITY };
    }
    Enclosure { mid: s.mid * e, rad: s.rad * e + s.mid * e * 4.0 * f64::EPSILON }
}

/// Which representation of the multidimensional Bessel value to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselForm {
    Integral,
    Series,
}

/// `s(w) = (cos w - 1) + sum_m (cos(gamma_m w) - 1)`, written with `sin^2`
/// so the peak at `w = 0` is computed without cancellation.
fn peak_exponent(gammas: &[u64], w: f64) -> f64 {
    let mut s = -2.0 * (0.5 * w).sin().powi(2);
    for &g in gammas {
        s -= 2.0 * (0.5 * g as f64 * w).sin().powi(2);
    }
    s
}

/// Enclosure of `e^{-2mt} I_0^{1,gamma_1,...}(2t, ..., 2t)` where `m` counts
/// the implicit leading generator 1 plus `gammas`. Evaluated from the angular
/// integral, restricted to the neighborhood of the `w = 0` peak once the
/// Gaussian bound `s(w) <= -2 w^2 / pi^2` makes the remainder negligible.
pub fn multidim_bessel_scaled(gammas: &[u64], t: f64, tol: f64) -> Result<Enclosure> {
    assert!(t >= 0.0 && t.is_finite());
    if t == 0.0 {
        return Ok(Enclosure { mid: 1.0, rad: 0.0 });
    }
    let pi = std::f64::consts::PI;
    let (w_max, remainder) = if t <= 10.0 {
        (pi, 0.0)
    } else {
        let w = pi * (56.0 / (4.0 * t)).sqrt();
        if w >= pi {
            (pi, 0.0)
        } else {
            (w, pi * (-4.0 * t * w * w / (pi * pi)).exp())
        }
    };
    let integrand = |w: f64| {
        let arg = 2.0 * t * peak_exponent(gammas, w);
        let v = arg.exp();
        (v, v * (1e-14 + arg.abs() * 1e-15))
    };
    let (q, qrad) = adaptive_gk(integrand, 0.0, w_max, tol * pi, 40_000)?;
    Ok(Enclosure { mid: q / pi, rad: (qrad + remainder) / pi })
}

/// `multidim_bessel_scaled - 1` for small `t`, evaluated with `expm1` so the
/// removable singularity of entropy integrands at `t -> 0` stays accurate.
pub fn multidim_bessel_scaled_m1(gammas: &[u64], t: f64, tol: f64) -> Result<Enclosure> {
    assert!((0.0..=4.0).contains(&t), "m1 form is for small t");
    if t == 0.0 {
        return Ok(Enclosure { mid: 0.0, rad: 0.0 });
    }
    let pi = std::f64::consts::PI;
    let integrand = |w: f64| {
        let arg = 2.0 * t * peak_exponent(gammas, w);
        let v = arg.exp_m1();
        (v, (v.abs() + 1.0) * (1e-14 + arg.abs() * 1e-15))
    };
    let (q, qrad) = adaptive_gk(integrand, 0.0, pi, tol * pi, 40_000)?;
    Ok(Enclosure { mid: q / pi, rad: qrad / pi })
}

/// `e^{-x}(I_0(x) - 1)` companion: the series for `I_0(x) - 1` itself,
/// unscaled, accurate near zero.
pub fn i0_minus_one(x: f64) -> Enclosure {
    assert!((0.0..=16.0).contains(&x));
    let q = 0.25 * x * x;
    let mut term = q;
    let mut sum = term;
    let mut k = 1u32;
    loop {
        k += 1;
        term *= q / (k as f64 * k as f64);
        sum += term;
        if term < sum * 1e-18 {
            return Enclosure { mid: sum, rad: term * 2.0 + sum * k as f64 * f64::EPSILON };
        }
    }
}

/// The d-dimensional modified I-Bessel value `I_0^{1,gammas}(2t,...,2t)`
/// in either representation. The series form sums
/// `I_{sum gamma_i k_i}(2t) prod_i I_{k_i}(2t)` over a certified box.
pub fn multidim_bessel(gammas: &[u64], t: f64, form: BesselForm, tol: f64) -> Result<Enclosure> {
    assert!(t >= 0.0 && t.is_finite());
    let m = gammas.len() + 1;
    match form {
        BesselForm::Integral => {
            let scale = (2.0 * m as f64 * t).exp();
            if !scale.is_finite() {
                return Err(Error::Overflow(format!(
                    "unscaled multidimensional Bessel value at t = {t} exceeds f64 range"
                )));
            }
            let s = multidim_bessel_scaled(gammas, t, tol / scale)?;
            Ok(Enclosure { mid: s.mid * scale, rad: s.rad * scale + s.mid * scale * 4e-16 })
        }
        BesselForm::Series => {
            let x = 2.0 * t;
            if gammas.is_empty() {
                return Ok(bessel_i(0, x));
            }
            // box radius: tail of one coordinate bounded by the term bound
            // I_k(x) <= (x/2)^k / k! e^x, everything else by sum I_k = e^x
            let dims = gammas.len();
            let mut radius = None;
            for k in 1..=300u32 {
                let ln_tail = (k as f64 + 1.0) * (0.5 * x).ln() - ln_factorial(k + 1)
                    + 0.5 * x
                    + x * dims as f64;
                if (ln_tail.exp()) * 2.0 * dims as f64 <= tol.max(1e-300) {
                    radius = Some(k as i64);
                    break;
                }
            }
            let radius = radius.ok_or(Error::SeriesBudget { radius: 300 })?;
            let mut total = Enclosure { mid: 0.0, rad: 0.0 };
            let mut index = vec![-radius; dims];
            'outer: loop {
                let order: i64 =
                    index.iter().zip(gammas).map(|(&k, &g)| k * g as i64).sum();
                let mut term = bessel_i(order.unsigned_abs().min(u32::MAX as u64) as u32, x);
                for &k in &index {
                    term = term.mul(&bessel_i(k.unsigned_abs() as u32, x));
                }
                total = total.add(&term);
                let mut i = 0;
                loop {
                    if i == dims {
                        break 'outer;
                    }
                    index[i] += 1;
                    if index[i] <= radius {
                        break;
                    }
                    index[i] = -radius;
                    i += 1;
                }
            }
            let ln_tail_bound = ((radius as f64 + 1.0) * (0.5 * x).ln()
                - ln_factorial(radius as u32 + 1)
                + 0.5 * x
                + x * dims as f64)
                .exp()
                * 2.0
                * dims as f64;
            total.rad += ln_tail_bound;
            Ok(total)
        }
    }
}
