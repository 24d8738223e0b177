//! Closed-form spanning-tree counts for scaled circulant families and
//! diagonal discrete tori, evaluated with interval arithmetic, precision
//! escalation and certified rounding to the unique enclosed integer.
//!
//! The product is evaluated in the `2cosh(n*argcosh(.))` form, which is free
//! of the catastrophic cancellation hiding in the `(a - sqrt(b))^n` surface
//! form of the same identity.

use rug::Integer;

use crate::angle::TurnAngle;
use crate::ball::RealBall;
use crate::error::{Error, Result};
use crate::graph::{torus_spectrum, ScaledCirculantFamily, TorusSpec};

/// Working-precision escalation policy: start at `initial_bits`, double
/// until a unique integer is certified or `max_bits` is exceeded.
#[derive(Debug, Clone, Copy)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { initial_bits: 128, max_bits: 1 << 20 }
    }
}

/// Results above this size must go through log mode.
pub const EXACT_MODE_BIT_CAP: u64 = 100_000_000;

/// One factor of the telescoped product: subgraph eigenvalue `mu`, its
/// `theta = argcosh(1 + mu/2)` and the exact outer angle `omega`.
#[derive(Debug, Clone)]
pub struct FactorTerm {
    pub mu: RealBall,
    pub theta: RealBall,
    pub omega: TurnAngle,
    /// Decided from the exact angles, not from the enclosure.
    pub mu_is_zero: bool,
}

impl FactorTerm {
    fn new(angles: &[TurnAngle], omega: TurnAngle, prec: u32) -> Self {
        let mu_is_zero = angles.iter().all(|a| a.is_zero());
        if mu_is_zero {
            return FactorTerm {
                mu: RealBall::zero(prec),
                theta: RealBall::zero(prec),
                omega,
                mu_is_zero,
            };
        }
        let mut mu = RealBall::exact_i64(2 * angles.len() as i64, prec);
        for a in angles {
            mu = mu.sub(&RealBall::cos_two_pi(*a, prec).mul_u64(2));
        }
        let theta = mu.div_u64(2).add_i64(1).acosh_clamped();
        FactorTerm { mu, theta, omega, mu_is_zero }
    }
}

/// Factor terms for the scaled-circulant product: `k = 1..beta-1`, eigenvalues of
/// the subgraph `C^{gamma_1,...,gamma_{d-1}}_beta`, outer angle `2 pi k/beta`.
pub fn circulant_factor_terms(beta: u64, gammas: &[u64], prec: u32) -> Vec<FactorTerm> {
    (1..beta)
        .map(|k| {
            let angles: Vec<TurnAngle> =
                gammas.iter().map(|&g| TurnAngle::new(k * g % beta, beta)).collect();
            FactorTerm::new(&angles, TurnAngle::new(k, beta), prec)
        })
        .collect()
}

/// Factor terms for the torus product: nonzero eigenvalues of
/// `Z^{d-1}/AZ^{d-1}` with outer angle 0.
pub fn torus_factor_terms(alphas: &[u64], prec: u32) -> Result<Vec<FactorTerm>> {
    let base = TorusSpec::new(alphas, 1)?;
    Ok(torus_spectrum(&base, prec)
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| FactorTerm::new(&p.exact_angle_args, TurnAngle::ZERO, prec))
        .collect())
}

/// The telescoping identity's right-hand side:
/// `prod_{l=0}^{n-1} (2cosh(theta) - 2cos((omega + 2 pi l)/n)) =
///  2cosh(n*theta) - 2cos(omega)`.
///
/// For an exactly-zero `theta` this degenerates to `2 - 2cos(omega)`,
/// exact at the dyadic-cosine angles.
pub fn telescoped_factor(theta: &RealBall, omega: TurnAngle, n: u64) -> RealBall {
    let prec = theta.prec();
    let cos_omega = RealBall::cos_two_pi(omega, prec);
    if theta.is_exact_zero() {
        return RealBall::exact_i64(2, prec).sub(&cos_omega.mul_u64(2));
    }
    theta.mul_u64(n).cosh().mul_u64(2).sub(&cos_omega.mul_u64(2))
}

/// Rounds an enclosure to the unique integer it isolates, requiring the
/// width to be below 1/2. `None` signals the escalation loop.
pub fn certified_round(enclosure: &RealBall) -> Option<Integer> {
    if enclosure.width() >= 0.5 {
        return None;
    }
    enclosure.unique_integer()
}

#[cfg(test)]
fn theta_sum_upper(terms: &[FactorTerm]) -> f64 {
    terms
        .iter()
        .map(|t| t.theta.hi().to_f64_round(rug::float::Round::Up).max(0.0))
        .sum()
}

/// Certified product pipeline shared by the circulant and torus paths:
/// `tau = (n / divisor) * prod_k (2cosh(n theta_k) - 2cos(omega_k))`.
fn certified_product(
    n: u64,
    divisor: u64,
    terms_at: impl Fn(u32) -> Vec<FactorTerm>,
    policy: &PrecisionPolicy,
) -> Result<Integer> {
    // a-priori size estimate drives the starting precision: sum the factor
    // magnitudes in log2, never crediting factors below 1
    let estimate_bits = {
        let probe = terms_at(64);
        let mut bits = 0.0f64;
        for t in &probe {
            let theta = t.theta.hi().to_f64_round(rug::float::Round::Up).max(0.0);
            let x = n as f64 * theta;
            let log2_factor = if x > 700.0 {
                x / std::f64::consts::LN_2 + 1.0
            } else {
                (2.0 * x.cosh() + 2.0).log2()
            };
            bits += log2_factor.max(0.0);
        }
        bits.ceil() as u64 + 64
    };
    if estimate_bits > EXACT_MODE_BIT_CAP {
        return Err(Error::DigitCapExceeded { bits: estimate_bits });
    }
    let ceiling = policy.max_bits.max((2 * estimate_bits).min(u32::MAX as u64) as u32);
    let mut prec = policy.initial_bits.max(estimate_bits as u32 + 64);
    loop {
        if let Some(tau) = product_attempt(n, divisor, &terms_at(prec), prec) {
            assert!(tau > 0, "spanning-tree count must be positive");
            // the product of the factors is itself an integer: divisor*tau/n
            let scaled = tau.clone() * divisor;
            assert!(
                scaled.is_divisible(&Integer::from(n)),
                "divisor * tau / n must be an integer"
            );
            return Ok(tau);
        }
        if prec >= ceiling {
            return Err(Error::PrecisionExhausted { bits: prec });
        }
        prec = prec.saturating_mul(2).min(ceiling);
    }
}

fn product_attempt(n: u64, divisor: u64, terms: &[FactorTerm], prec: u32) -> Option<Integer> {
    let mut product = RealBall::exact_i64(1, prec);
    for t in terms {
        let factor = telescoped_factor(&t.theta, t.omega, n);
        // every factor is strictly positive: theta_k >= 0 and the outer
        // cosine never reaches 1 for k != 0; demand the enclosure shows it
        if !(*factor.lo() > 0) {
            return None;
        }
        product = product.mul(&factor);
    }
    certified_round(&product.mul_u64(n).div_u64(divisor))
}

/// Exact spanning-tree count of `C^{1, g_1 n, ..., g_{d-1} n}_{beta n}` via
/// the `beta - 1`-factor closed formula. `beta = 1` degenerates to the
/// cycle, which has exactly `n` spanning trees.
pub fn tau_scaled_circulant(
    family: &ScaledCirculantFamily,
    policy: &PrecisionPolicy,
) -> Result<Integer> {
    let beta = family.beta();
    let n = family.scale();
    if beta == 1 {
        return Ok(Integer::from(n));
    }
    let gammas = family.base_generators().to_vec();
    certified_product(n, beta, |prec| circulant_factor_terms(beta, &gammas, prec), policy)
}

/// Exact spanning-tree count of the discrete torus
/// `Z^d / diag(alpha_1,...,alpha_{d-1}, n) Z^d`. `d = 1` is the cycle.
pub fn tau_torus(spec: &TorusSpec, policy: &PrecisionPolicy) -> Result<Integer> {
    let n = spec.last();
    let alphas = spec.alphas().to_vec();
    let det_a: u64 = alphas.iter().product();
    if alphas.is_empty() || det_a == 1 {
        // empty product over nonzero eigenvalues of a trivial quotient
        return Ok(Integer::from(n));
    }
    certified_product(
        n,
        det_a,
        |prec| torus_factor_terms(&alphas, prec).expect("validated alphas"),
        policy,
    )
}

fn log_factor(theta: &RealBall, omega: TurnAngle, n: u64) -> RealBall {
    let prec = theta.prec();
    let cos_omega = RealBall::cos_two_pi(omega, prec);
    if theta.is_exact_zero() {
        return RealBall::exact_i64(2, prec).sub(&cos_omega.mul_u64(2)).ln();
    }
    let x = theta.mul_u64(n);
    if *x.hi() > 20 {
        // ln(2cosh(x) - 2cos w) = x + ln(1 + e^{-x}(e^{-x} - 2cos w)),
        // stable for arbitrarily large n*theta
        let em = x.neg().exp();
        let inner = em.mul(&em.sub(&cos_omega.mul_u64(2))).add_i64(1);
        x.add(&inner.ln())
    } else {
        x.cosh().mul_u64(2).sub(&cos_omega.mul_u64(2)).ln()
    }
}

fn log_tau_from_terms(n: u64, divisor: u64, terms: &[FactorTerm], prec: u32) -> RealBall {
    let mut acc = RealBall::exact_u64(n, prec).ln().sub(&RealBall::exact_u64(divisor, prec).ln());
    for t in terms {
        acc = acc.add(&log_factor(&t.theta, t.omega, n));
    }
    acc
}

/// Enclosure of `ln tau` without constructing the integer; usable far past
/// the exact-mode digit cap (the factor logs are `O(n theta)` scalars).
pub fn log_tau_scaled_circulant(family: &ScaledCirculantFamily, prec: u32) -> RealBall {
    let beta = family.beta();
    let n = family.scale();
    if beta == 1 {
        return RealBall::exact_u64(n, prec).ln();
    }
    let terms = circulant_factor_terms(beta, family.base_generators(), prec);
    log_tau_from_terms(n, beta, &terms, prec)
}

/// Enclosure of `ln tau` for the torus path.
pub fn log_tau_torus(spec: &TorusSpec, prec: u32) -> Result<RealBall> {
    let n = spec.last();
    let det_a: u64 = spec.alphas().iter().product();
    if spec.alphas().is_empty() || det_a == 1 {
        return Ok(RealBall::exact_u64(n, prec).ln());
    }
    let terms = torus_factor_terms(spec.alphas(), prec)?;
    Ok(log_tau_from_terms(n, det_a, &terms, prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_multigraph;
    use crate::oracle::count_spanning_trees_oracle;

    fn tau(beta: u64, gammas: &[u64], n: u64) -> Integer {
        let family = ScaledCirculantFamily::new(beta, gammas, n).unwrap();
        tau_scaled_circulant(&family, &PrecisionPolicy::default()).unwrap()
    }

    #[test]
    fn small_instances_match_oracle() {
        assert_eq!(tau(3, &[1], 1), 12);
        assert_eq!(tau(3, &[1], 2), 384);
        assert_eq!(tau(2, &[1], 1), 4);
    }

    #[test]
    fn cycle_convention() {
        assert_eq!(tau(1, &[], 7), 7);
        let spec = TorusSpec::new(&[], 9).unwrap();
        assert_eq!(tau_torus(&spec, &PrecisionPolicy::default()).unwrap(), 9);
    }

    #[test]
    fn torus_small() {
        let policy = PrecisionPolicy::default();
        assert_eq!(tau_torus(&TorusSpec::new(&[2], 2).unwrap(), &policy).unwrap(), 32);
        assert_eq!(tau_torus(&TorusSpec::new(&[2], 3).unwrap(), &policy).unwrap(), 294);
        assert_eq!(tau_torus(&TorusSpec::new(&[1], 11).unwrap(), &policy).unwrap(), 11);
    }

    #[test]
    fn matches_oracle_on_a_grid() {
        let policy = PrecisionPolicy::default();
        for beta in 2u64..=5 {
            for n in 1u64..=4 {
                let family = ScaledCirculantFamily::new(beta, &[1], n);
                let family = match family {
                    Ok(f) => f,
                    Err(_) => continue,
                };
                let closed = tau_scaled_circulant(&family, &policy).unwrap();
                let oracle =
                    count_spanning_trees_oracle(&build_multigraph(&family.instantiate())).unwrap();
                assert_eq!(closed, oracle, "beta={beta} n={n}");
            }
        }
    }

    #[test]
    fn certified_round_examples() {
        let a = RealBall::new(
            rug::Float::with_val(64, 11.9997),
            rug::Float::with_val(64, 12.0003),
        );
        assert_eq!(certified_round(&a), Some(Integer::from(12)));
        let b = RealBall::new(rug::Float::with_val(64, 11.4), rug::Float::with_val(64, 12.6));
        assert_eq!(certified_round(&b), None);
    }

    #[test]
    fn large_n_digit_growth() {
        // (beta=3, gamma=(1), n=50): unique integer with ~n-proportional digits
        let t = tau(3, &[1], 50);
        let digits = t.to_string().len();
        let family = ScaledCirculantFamily::new(3, &[1], 50).unwrap();
        let terms = circulant_factor_terms(3, family.base_generators(), 96);
        let expect =
            (50.0 * super::theta_sum_upper(&terms) / std::f64::consts::LN_10).floor() as usize;
        assert!(
            digits >= expect && digits <= expect + 3,
            "digits {digits} vs estimate {expect}"
        );
    }

    #[test]
    fn log_mode_agrees_with_exact() {
        for (beta, gammas, n) in [(3u64, vec![1u64], 10u64), (2, vec![1], 1), (6, vec![2, 3], 4)] {
            let family = ScaledCirculantFamily::new(beta, &gammas, n).unwrap();
            let exact = tau_scaled_circulant(&family, &PrecisionPolicy::default()).unwrap();
            let ln_exact = exact.to_f64().ln();
            let (mid, rad) = log_tau_scaled_circulant(&family, 160).to_mid_rad();
            assert!(rad < 1e-12);
            assert!((mid - ln_exact).abs() < 1e-10 * mid.abs().max(1.0));
        }
    }

    #[test]
    fn log_mode_cycle() {
        let family = ScaledCirculantFamily::new(1, &[], 1_000_000).unwrap();
        let (mid, _) = log_tau_scaled_circulant(&family, 128).to_mid_rad();
        assert!((mid - (1e6f64).ln()).abs() < 1e-12);
    }
}
