//! Integer Gram lattices and the rank-2 discriminant used by the K3-side
//! solvers.

use crate::error::{Error, Result};
use crate::linalg::bareiss_det;

#[derive(Clone, PartialEq, Debug)]
pub struct GramLattice {
    pub gram: Vec<Vec<i64>>,
    pub even: bool,
}

pub type LatticeVector = Vec<i64>;

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, even: bool) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NonSymmetric);
                }
            }
            if even && gram[i][i] % 2 != 0 {
                return Err(Error::Invalid("odd diagonal in even lattice".into()));
            }
        }
        Ok(GramLattice { gram, even })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn check(&self, v: &[i64]) -> Result<()> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn pair(&self, u: &[i64], v: &[i64]) -> Result<i64> {
        self.check(u)?;
        self.check(v)?;
        let mut acc: i128 = 0;
        for i in 0..u.len() {
            for j in 0..v.len() {
                acc += u[i] as i128 * self.gram[i][j] as i128 * v[j] as i128;
            }
        }
        acc.try_into().map_err(|_| Error::Domain("pairing overflow".into()))
    }

    /// D_{u1,u2} = u1^2 u2^2 - (u1,u2)^2.
    pub fn pair_discriminant(&self, u1: &[i64], u2: &[i64]) -> Result<i64> {
        let a = self.pair(u1, u1)? as i128;
        let b = self.pair(u1, u2)? as i128;
        let c = self.pair(u2, u2)? as i128;
        (a * c - b * b)
            .try_into()
            .map_err(|_| Error::Domain("discriminant overflow".into()))
    }

    /// Exact Sylvester criterion on the full Gram matrix.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.rank();
        (1..=n).all(|k| {
            let sub: Vec<Vec<i128>> = (0..k)
                .map(|i| (0..k).map(|j| self.gram[i][j] as i128).collect())
                .collect();
            bareiss_det(&sub) > 0
        })
    }

    /// Whether the sublattice Zu1 + Zu2 is positive definite.
    pub fn pair_is_positive_definite(&self, u1: &[i64], u2: &[i64]) -> Result<bool> {
        Ok(self.pair(u1, u1)? > 0 && self.pair_discriminant(u1, u2)? > 0)
    }

    /// Signature as (positive, negative, zero) eigenvalue counts (float).
    pub fn signature(&self) -> (usize, usize, usize) {
        let a: Vec<Vec<f64>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let evs = crate::linalg::sym_eigenvalues(&a);
        let pos = evs.iter().filter(|&&l| l > 1e-9).count();
        let neg = evs.iter().filter(|&&l| l < -1e-9).count();
        (pos, neg, self.rank() - pos - neg)
    }
}

/// Linear independence over Q of two integer vectors.
pub fn independent(u1: &[i64], u2: &[i64]) -> bool {
    if u1.iter().all(|&x| x == 0) || u2.iter().all(|&x| x == 0) {
        return false;
    }
    for i in 0..u1.len() {
        for j in i + 1..u1.len() {
            if u1[i] as i128 * u2[j] as i128 != u1[j] as i128 * u2[i] as i128 {
                return true;
            }
        }
    }
    false
}

pub fn basis_vector(rank: usize, i: usize) -> LatticeVector {
    let mut v = vec![0i64; rank];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_discriminant_examples() {
        let l = GramLattice::new(vec![vec![2, 0], vec![0, 2]], true).unwrap();
        let (e1, e2) = (basis_vector(2, 0), basis_vector(2, 1));
        assert_eq!(l.pair_discriminant(&e1, &e2).unwrap(), 4);
        assert_eq!(l.pair_discriminant(&e1, &e1).unwrap(), 0);
        let l2 = GramLattice::new(vec![vec![2, 1], vec![1, 2]], true).unwrap();
        assert_eq!(l2.pair_discriminant(&e1, &e2).unwrap(), 3);
        assert!(l2.is_positive_definite());
        let neg = GramLattice::new(vec![vec![-2, 0], vec![0, -2]], true).unwrap();
        assert!(!neg.is_positive_definite());
        assert_eq!(neg.signature(), (0, 2, 0));
    }

    #[test]
    fn independence() {
        assert!(independent(&[1, 0], &[0, 1]));
        assert!(!independent(&[2, 4], &[1, 2]));
        assert!(!independent(&[0, 0], &[1, 2]));
    }

    #[test]
    fn even_lattice_rejects_odd_diagonal() {
        assert!(GramLattice::new(vec![vec![1]], true).is_err());
        assert!(GramLattice::new(vec![vec![1]], false).is_ok());
    }
}
