//! Test-only helpers: a dense direct solver used as an independent oracle
//! for the matrix-free iterative solvers.

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
/// Panics on singular systems; only meant for small oracle problems.
pub(crate) fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut x: Vec<f64> = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| m[p][col].abs().total_cmp(&m[q][col].abs()))
            .unwrap();
        assert!(m[pivot][col].abs() > 1e-14, "singular oracle matrix");
        m.swap(col, pivot);
        x.swap(col, pivot);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= f * m[col][k];
            }
            x[row] -= f * x[col];
        }
    }
    for col in (0..n).rev() {
        x[col] /= m[col][col];
        for row in 0..col {
            x[row] -= m[row][col] * x[col];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_known_2x2_system() {
        // [2 1; 1 3] x = [3; 5] has solution x = (4/5, 7/5)
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let x = dense_solve(&a, &[3.0, 5.0]);
        assert!((x[0] - 0.8).abs() < 1e-14);
        assert!((x[1] - 1.4).abs() < 1e-14);
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let x = dense_solve(&a, &[2.0, 3.0]);
        assert_eq!(x, vec![3.0, 2.0]);
    }
}
