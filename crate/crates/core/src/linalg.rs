//! Small dense linear algebra helpers: exact Gauss inversion, fraction-free
//! integer determinants, and Jacobi eigenvalues for symmetric float matrices.

use crate::scalar::Scalar;

/// Gauss-Jordan inverse over an exact field; `None` if singular.
pub fn gauss_inverse<S: Scalar>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a.to_vec();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { S::one() } else { S::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let pinv = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = m[col][j].clone() * pinv.clone();
            inv[col][j] = inv[col][j].clone() * pinv.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                m[r][j] = m[r][j].clone() - f.clone() * m[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}

/// Exact determinant of an integer matrix by Bareiss fraction-free
/// elimination; intermediate values are minors, so i128 suffices for the
/// matrix sizes used here.
pub fn bareiss_det(a: &[Vec<i128>]) -> i128 {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn sym_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut evs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    evs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    evs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rat};

    #[test]
    fn gauss_inverts_rationals() {
        let a = vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(1), rat_int(1)],
        ];
        let inv = gauss_inverse(&a).unwrap();
        assert_eq!(
            inv,
            vec![
                vec![rat_int(1), rat_int(-1)],
                vec![rat_int(-1), rat_int(2)],
            ]
        );
        let singular = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert!(gauss_inverse(&singular).is_none());
        let third = vec![vec![rat(1, 3)]];
        assert_eq!(gauss_inverse(&third).unwrap()[0][0], rat_int(3));
    }

    #[test]
    fn bareiss_matches_small_cases() {
        assert_eq!(bareiss_det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            bareiss_det(&vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]),
            30
        );
        assert_eq!(
            bareiss_det(&vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]),
            0
        );
        // compare against the cofactor expansion in Mat3
        let m = [[3, -1, 2], [0, 4, -3], [5, 2, 1]];
        let exact = crate::mat3::Mat3::from_i64(m).det();
        let b = bareiss_det(&m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect::<Vec<_>>());
        assert_eq!(Rat::from_int(b as i64), exact);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let evs = sym_eigenvalues(&a);
        assert!((evs[0] - 1.0).abs() < 1e-10);
        assert!((evs[1] - 3.0).abs() < 1e-10);
    }
}
