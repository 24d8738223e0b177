//! Cross-operation consistency: log-mode counts against the entropy sum,
//! and the two entropy representations over a broad parameter sweep.

use spantree::entropy::{z_nf_integral, z_nf_sum};
use spantree::{log_tau_scaled_circulant, ScaledCirculantFamily};

#[test]
fn log_count_per_vertex_approaches_entropy() {
    let beta = 6u64;
    let gammas = [2u64, 3];
    let z = z_nf_sum(beta, &gammas).value.mid;
    let gap = |n: u64| {
        let family = ScaledCirculantFamily::new(beta, &gammas, n).unwrap();
        let (mid, _) = log_tau_scaled_circulant(&family, 128).to_mid_rad();
        (mid / (beta * n) as f64 - z).abs()
    };
    let (e2, e3, e4) = (gap(100), gap(1_000), gap(10_000));
    assert!(e2 > e3 && e3 > e4, "gaps not monotone: {e2:e} {e3:e} {e4:e}");
    // C/n envelope with empirically fitted C (the gap carries a ln n
    // factor, so the fit must span all three scales)
    let c = 1.1 * (e2 * 100.0).max(e3 * 1_000.0).max(e4 * 10_000.0);
    assert!(e2 < c / 100.0 && e3 < c / 1_000.0 && e4 < c / 10_000.0);
}

fn gamma_lists(beta: u64) -> Vec<Vec<u64>> {
    let top = (beta / 2).max(1);
    let mut lists: Vec<Vec<u64>> = (1..=top).map(|g| vec![g]).collect();
    for g1 in 1..=top {
        for g2 in g1..=top {
            lists.push(vec![g1, g2]);
        }
    }
    lists
}

#[test]
fn representation_agreement_subsample() {
    // a deterministic spread over the beta <= 24 sweep; the exhaustive
    // version is the ignored test below
    let mut picked = 0usize;
    for beta in 2..=24u64 {
        for (i, gammas) in gamma_lists(beta).into_iter().enumerate() {
            if (beta as usize + 3 * i) % 11 != 0 {
                continue;
            }
            let s = z_nf_sum(beta, &gammas).value;
            let i = z_nf_integral(beta, &gammas, 1e-10).unwrap().value;
            let gap = (s.mid - i.mid).abs();
            assert!(
                gap <= s.rad + i.rad + 1e-10,
                "beta={beta} gammas={gammas:?}: gap {gap:e}"
            );
            picked += 1;
        }
    }
    assert!(picked > 30, "subsample too small: {picked}");
}

#[test]
#[ignore = "exhaustive beta <= 24 sweep; minutes of quadrature"]
fn representation_agreement_full_sweep() {
    for beta in 2..=24u64 {
        for gammas in gamma_lists(beta) {
            let s = z_nf_sum(beta, &gammas).value;
            let i = z_nf_integral(beta, &gammas, 1e-10).unwrap().value;
            let gap = (s.mid - i.mid).abs();
            assert!(
                gap <= s.rad + i.rad + 1e-10,
                "beta={beta} gammas={gammas:?}: gap {gap:e}"
            );
        }
    }
}
