//! The determinant oracle checked against an independent second oracle
//! (deletion-contraction) and against numeric spectra.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use spantree::graph::{
    build_multigraph, build_torus_multigraph, circulant_spectrum, EdgeMultiset,
};
use spantree::oracle::{count_spanning_trees_oracle, eigenproduct_estimate, BigCount};
use spantree::{CirculantSpec, TorusSpec};

/// Deletion-contraction spanning tree count; exponential, so only for tiny
/// multigraphs. An edge of multiplicity m contributes
/// `tau(G - e) + m * tau(G / e)`.
fn dc_count(g: &EdgeMultiset) -> BigCount {
    let n = g.vertex_count();
    if n == 1 {
        return BigCount::from(1);
    }
    let Some(((u, v), m)) = g.edges().next() else {
        return BigCount::from(0);
    };
    let map = |x: usize| {
        if x == v {
            u
        } else if x > v {
            x - 1
        } else {
            x
        }
    };
    let mut contracted = EdgeMultiset::new(n - 1);
    let mut deleted = EdgeMultiset::new(n);
    for ((a, b), mult) in g.edges() {
        let (a2, b2) = (map(a), map(b));
        if a2 != b2 {
            contracted.add_edge(a2, b2, mult);
        }
        if (a, b) != (u, v) {
            deleted.add_edge(a, b, mult);
        }
    }
    dc_count(&deleted) + dc_count(&contracted) * BigCount::from(m)
}

#[test]
fn deletion_contraction_agrees() {
    let mut graphs: Vec<EdgeMultiset> = Vec::new();
    for n in 2..=8 {
        graphs.push(build_multigraph(&CirculantSpec::new(n, &[1]).unwrap()));
    }
    for (n, gens) in [(5u64, vec![1u64, 2]), (6, vec![1, 2]), (7, vec![1, 3]), (6, vec![2, 3])] {
        graphs.push(build_multigraph(&CirculantSpec::new(n, &gens).unwrap()));
    }
    graphs.push(build_torus_multigraph(&TorusSpec::new(&[2], 3).unwrap()));
    graphs.push(build_torus_multigraph(&TorusSpec::new(&[2], 2).unwrap()));
    for g in &graphs {
        let det = count_spanning_trees_oracle(g).unwrap();
        let dc = dc_count(g);
        assert_eq!(det, dc, "graph on {} vertices", g.vertex_count());
    }
}

#[test]
fn oracle_is_permutation_invariant() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    for (n, gens) in [(9u64, vec![1u64, 2]), (10, vec![1, 3]), (12, vec![2, 3]), (8, vec![1, 4])] {
        let g = build_multigraph(&CirculantSpec::new(n, &gens).unwrap());
        let base = count_spanning_trees_oracle(&g).unwrap();
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..n as usize).collect();
            perm.shuffle(&mut rng);
            let h = g.relabeled(&perm);
            assert_eq!(count_spanning_trees_oracle(&h).unwrap(), base);
        }
    }
}

#[test]
fn eigenproduct_contains_oracle() {
    for (n, gens) in [(5u64, vec![1u64]), (8, vec![1, 3]), (12, vec![1, 2]), (15, vec![2, 3])] {
        let spec = CirculantSpec::new(n, &gens).unwrap();
        let exact = count_spanning_trees_oracle(&build_multigraph(&spec)).unwrap();
        let spectrum = circulant_spectrum(&spec, 128);
        let est = eigenproduct_estimate(&spectrum, n).unwrap();
        assert!(est.contains_integer(&exact), "n={n} gens={gens:?}: {est} vs {exact}");
    }
}

#[test]
fn spectrum_matches_dense_laplacian() {
    use nalgebra::DMatrix;
    for (n, gens) in [(8u64, vec![1u64, 3]), (17, vec![2, 5]), (32, vec![1, 4]), (64, vec![1, 2])]
    {
        let spec = CirculantSpec::new(n, &gens).unwrap();
        let g = build_multigraph(&spec);
        let nu = n as usize;
        let mut lap = DMatrix::<f64>::zeros(nu, nu);
        for ((u, v), m) in g.edges() {
            lap[(u, v)] -= m as f64;
            lap[(v, u)] -= m as f64;
            lap[(u, u)] += m as f64;
            lap[(v, v)] += m as f64;
        }
        let mut numeric: Vec<f64> = lap.symmetric_eigenvalues().iter().copied().collect();
        numeric.sort_by(f64::total_cmp);
        let mut closed: Vec<f64> =
            circulant_spectrum(&spec, 128).iter().map(|p| p.value.to_mid_rad().0).collect();
        closed.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-9, "n={n} gens={gens:?}: {a} vs {b}");
        }
    }
}
