//! Ground-truth spanning-tree counting: exact big-integer determinant of a
//! reduced Laplacian minor (matrix tree theorem), no floating point anywhere.

use rug::{Complete, Integer};

use crate::ball::RealBall;
use crate::error::{Error, Result};
use crate::graph::{EdgeMultiset, SpectrumPoint};

/// Arbitrary-precision nonnegative spanning-tree count.
pub type BigCount = Integer;

/// Reduced Laplacian minor with vertex 0 removed; loops are stripped,
/// parallel edges add their multiplicity to the off-diagonal entries.
fn reduced_laplacian(graph: &EdgeMultiset) -> Vec<Vec<Integer>> {
    let n = graph.vertex_count();
    let m = n - 1;
    let mut mat = vec![vec![Integer::new(); m]; m];
    for ((u, v), mult) in graph.edges() {
        let mult = Integer::from(mult);
        if u > 0 {
            mat[u - 1][u - 1] += &mult;
        }
        if v > 0 {
            mat[v - 1][v - 1] += &mult;
        }
        if u > 0 && v > 0 {
            mat[u - 1][v - 1] -= &mult;
            mat[v - 1][u - 1] -= &mult;
        }
    }
    mat
}

/// Determinant by Bareiss fraction-free elimination. Exact over the
/// integers; intermediate entries stay within Hadamard-type growth.
pub fn bareiss_determinant(mut mat: Vec<Vec<Integer>>) -> Integer {
    let m = mat.len();
    if m == 0 {
        return Integer::from(1);
    }
    let mut sign = 1i32;
    let mut prev = Integer::from(1);
    for k in 0..m - 1 {
        if mat[k][k].is_zero() {
            // pivot search with a row swap (flips the sign)
            match (k + 1..m).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return Integer::new(),
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let num = (&mat[i][j] * &mat[k][k]).complete()
                    - (&mat[i][k] * &mat[k][j]).complete();
                mat[i][j] = num.div_exact(&prev);
            }
            mat[i][k] = Integer::new();
        }
        prev = mat[k][k].clone();
    }
    let mut det = std::mem::take(&mut mat[m - 1][m - 1]);
    if sign < 0 {
        det = -det;
    }
    det
}

/// Exact spanning-tree count via any principal `(n-1)`-minor of the
/// Laplacian. Returns 0 (not an error) for disconnected input.
pub fn count_spanning_trees_oracle(graph: &EdgeMultiset) -> Result<BigCount> {
    if graph.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if graph.vertex_count() == 1 {
        return Ok(Integer::from(1));
    }
    let det = bareiss_determinant(reduced_laplacian(graph));
    debug_assert!(det >= 0, "Laplacian minor determinant must be nonnegative");
    Ok(det)
}

/// Floating cross-check of the matrix tree theorem:
/// `(1/n) * product of nonzero eigenvalues` as an enclosure.
///
/// Errors unless the spectrum has exactly one zero eigenvalue (decided on
/// the exact angles); a disconnected graph must go through the oracle.
pub fn eigenproduct_estimate(spectrum: &[SpectrumPoint], n: u64) -> Result<RealBall> {
    let zeros = spectrum.iter().filter(|p| p.is_zero()).count();
    if zeros != 1 {
        return Err(Error::ZeroEigenvalueCount { count: zeros });
    }
    let prec = spectrum.iter().map(|p| p.value.prec()).max().unwrap_or(64);
    let mut product = RealBall::exact_i64(1, prec);
    for p in spectrum {
        if !p.is_zero() {
            product = product.mul(&p.value);
        }
    }
    Ok(product.div_u64(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_multigraph, build_torus_multigraph, circulant_spectrum};
    use crate::graph::{CirculantSpec, TorusSpec};

    #[test]
    fn cycles_have_n_trees() {
        for n in 3u64..=12 {
            let g = build_multigraph(&CirculantSpec::new(n, &[1]).unwrap());
            assert_eq!(count_spanning_trees_oracle(&g).unwrap(), n);
        }
    }

    #[test]
    fn k5_by_cayley() {
        let g = build_multigraph(&CirculantSpec::new(5, &[1, 2]).unwrap());
        assert_eq!(count_spanning_trees_oracle(&g).unwrap(), 125);
    }

    #[test]
    fn torus_2x2() {
        let g = build_torus_multigraph(&TorusSpec::new(&[2], 2).unwrap());
        assert_eq!(count_spanning_trees_oracle(&g).unwrap(), 32);
    }

    #[test]
    fn four_parallel_edges() {
        let g = build_multigraph(&CirculantSpec::new(2, &[1, 1]).unwrap());
        assert_eq!(count_spanning_trees_oracle(&g).unwrap(), 4);
    }

    #[test]
    fn disconnected_returns_zero() {
        let g = build_multigraph(&CirculantSpec::new(4, &[2, 2]).unwrap());
        assert_eq!(count_spanning_trees_oracle(&g).unwrap(), 0);
    }

    #[test]
    fn single_vertex() {
        let g = EdgeMultiset::new(1);
        assert_eq!(count_spanning_trees_oracle(&g).unwrap(), 1);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(matches!(count_spanning_trees_oracle(&EdgeMultiset::new(0)), Err(Error::EmptyGraph)));
    }

    #[test]
    fn eigenproduct_cycle() {
        let spec = CirculantSpec::new(5, &[1]).unwrap();
        let est = eigenproduct_estimate(&circulant_spectrum(&spec, 128), 5).unwrap();
        let (mid, rad) = est.to_mid_rad();
        assert!((mid - 5.0).abs() < 1e-9 && rad < 1e-9);
    }

    #[test]
    fn eigenproduct_c11_3() {
        let spec = CirculantSpec::new(3, &[1, 1]).unwrap();
        let est = eigenproduct_estimate(&circulant_spectrum(&spec, 128), 3).unwrap();
        assert!(est.contains_integer(&Integer::from(12)));
    }

    #[test]
    fn eigenproduct_rejects_disconnected() {
        let spec = CirculantSpec::new(4, &[2, 2]).unwrap();
        let err = eigenproduct_estimate(&circulant_spectrum(&spec, 128), 4).unwrap_err();
        assert!(matches!(err, Error::ZeroEigenvalueCount { count: 2 }));
    }
}
