//! Randomized invariants of the spectrum and the telescoped factor.

use proptest::prelude::*;
use spantree::closed_form::telescoped_factor;
use spantree::graph::circulant_spectrum;
use spantree::{CirculantSpec, RealBall, TurnAngle};

proptest! {
    #[test]
    fn spectrum_is_symmetric(n in 3u64..40, raw in prop::collection::vec(1u64..40, 1..3)) {
        let gens: Vec<u64> = raw.iter().map(|g| g % n).collect();
        prop_assume!(gens.iter().all(|&g| g != 0));
        let spec = CirculantSpec::new(n, &gens);
        prop_assume!(spec.is_ok());
        let spectrum = circulant_spectrum(&spec.unwrap(), 96);
        prop_assert_eq!(spectrum.len() as u64, n);
        for k in 1..n {
            let a = &spectrum[k as usize];
            let b = &spectrum[(n - k) as usize];
            prop_assert_eq!(a.is_zero(), b.is_zero());
            let (am, _) = a.value.to_mid_rad();
            let (bm, _) = b.value.to_mid_rad();
            prop_assert!((am - bm).abs() < 1e-12, "k={} vs n-k: {} vs {}", k, am, bm);
        }
    }

    #[test]
    fn telescoped_factor_matches_brute_product(
        theta_m in 5u32..300,
        p in 0u64..12,
        q in 1u64..12,
        n in 1u64..10,
    ) {
        let theta = theta_m as f64 / 100.0;
        let omega = TurnAngle::new(p, q);
        let w = 2.0 * std::f64::consts::PI * omega.as_f64();
        let mut brute = 1.0f64;
        for l in 0..n {
            let angle = (w + 2.0 * std::f64::consts::PI * l as f64) / n as f64;
            brute *= 2.0 * theta.cosh() - 2.0 * angle.cos();
        }
        let tb = RealBall::from_f64(theta, 128);
        let (mid, rad) = telescoped_factor(&tb, omega, n).to_mid_rad();
        prop_assert!(
            (mid - brute).abs() <= 1e-9 * brute.abs().max(1.0) + rad + 1e-9,
            "theta={} omega={}/{} n={}: telescoped {} vs brute {}",
            theta, p, q, n, mid, brute
        );
    }
}
