//! From a Picard-number-9 period matrix, reconstruct a rational charge whose
//! unique symmetric attractor is that matrix, then clear denominators.

use crate::error::{Error, Result};
use crate::mat3::Mat3;
use crate::scalar::{rat_int, QuadNumber, Rat, Scalar};
use crate::torus::TorusCharge;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

/// Exact presentation of T = N R^{-1} + sqrt(-D) R^{-1} on the Picard-9
/// locus: R integer symmetric positive definite, N integer with N R^{-1}
/// symmetric, D a positive integer.
#[derive(Clone, PartialEq, Debug)]
pub struct Picard9Period {
    r: Mat3<Rat>,
    d: u64,
    n: Mat3<Rat>,
}

fn is_integral(m: &Mat3<Rat>) -> bool {
    m.e.iter().flatten().all(|x| x.denom().is_one())
}

impl Picard9Period {
    pub fn new(r: Mat3<Rat>, d: u64, n: Mat3<Rat>) -> Result<Self> {
        if !is_integral(&r) || !is_integral(&n) {
            return Err(Error::Invalid("R and N must be integral".into()));
        }
        if d == 0 {
            return Err(Error::Invalid("D must be positive".into()));
        }
        if !r.is_positive_definite() {
            return Err(Error::Invalid("R must be symmetric positive definite".into()));
        }
        let r_inv = r.inverse().expect("positive definite");
        if !n.mul(&r_inv).is_symmetric() {
            return Err(Error::NonSymmetric);
        }
        Ok(Picard9Period { r, d, n })
    }

    pub fn from_i64(r: [[i64; 3]; 3], d: u64, n: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(Mat3::from_i64(r), d, Mat3::from_i64(n))
    }

    pub fn r(&self) -> &Mat3<Rat> {
        &self.r
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn n(&self) -> &Mat3<Rat> {
        &self.n
    }

    /// T = N R^{-1} + sqrt(-D) R^{-1}, exactly.
    pub fn period_matrix(&self) -> Mat3<QuadNumber> {
        let r_inv = self.r.inverse().expect("positive definite");
        let sd = QuadNumber::sqrt_minus(&rat_int(self.d as i64));
        self.n
            .mul(&r_inv)
            .map(|x| QuadNumber::from_rat(x.clone()))
            .add(&r_inv.map(|x| QuadNumber::from_rat(x.clone())).scale(&sd))
    }
}

/// The construction: a rational symmetric charge whose attractor is exactly
/// the given period matrix, with invariant transport R~ = nR, M~ = M,
/// D~ = 4 n^2 D for n = (D+1) det(R).
pub fn charge_from_period(p: &Picard9Period) -> TorusCharge<Rat> {
    let det_r = p.r.det();
    let d = rat_int(p.d as i64);
    let n_scalar = (d + rat_int(1)) * det_r.clone();
    let m = rat_int(2) * n_scalar.clone() * det_r.clone();
    let s = p.n.scale(&(rat_int(2) * n_scalar.clone()));
    let p0 = det_r.clone();
    let two_n_r_inv = p
        .r
        .scale(&(rat_int(2) * n_scalar.clone()))
        .inverse()
        .expect("positive definite");
    let big_p = s
        .scale(&p0)
        .add(&Mat3::identity().scale(&m))
        .mul(&two_n_r_inv);
    let p0_inv = p0.inv().expect("det R > 0");
    let big_q = p
        .r
        .scale(&n_scalar)
        .sub(&big_p.cofactor())
        .scale(&p0_inv);
    let q0 = (rat_int(2) * n_scalar * det_r
        - rat_int(2) * big_p.det()
        - p0.clone() * big_p.mul(&big_q).trace())
        * p0_inv.clone()
        * p0_inv;
    TorusCharge {
        p0,
        p: big_p,
        q: big_q,
        q0,
    }
}

/// Least k > 0 making the charge integral; the attractor matrix is unchanged
/// and C scales by k.
pub fn clear_denominators(ch: &TorusCharge<Rat>) -> (BigInt, TorusCharge<Rat>) {
    let mut k = BigInt::one();
    let mut fold = |x: &Rat| k = k.lcm(x.denom());
    fold(&ch.p0);
    fold(&ch.q0);
    ch.p.e.iter().flatten().for_each(&mut fold);
    ch.q.e.iter().flatten().for_each(&mut fold);
    let kr = Rat::from_integer(k.clone());
    (k, ch.scale(&kr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::Exact;
    use crate::torus::{invariants, solve_complex_symmetric};

    fn id3(k: i64) -> [[i64; 3]; 3] {
        [[k, 0, 0], [0, k, 0], [0, 0, k]]
    }

    #[test]
    fn appendix_examples() {
        let p = Picard9Period::from_i64(id3(1), 1, id3(0)).unwrap();
        let ch = charge_from_period(&p);
        assert_eq!(ch, TorusCharge::from_i64(1, id3(1), id3(1), -1));
        let (sol, inv) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        assert_eq!(sol.a, p.period_matrix());
        assert_eq!(inv.d, rat_int(16));

        let p = Picard9Period::from_i64(id3(1), 4, id3(0)).unwrap();
        let ch = charge_from_period(&p);
        assert_eq!(ch, TorusCharge::from_i64(1, id3(1), id3(4), -4));
        let (sol, inv) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        assert_eq!(sol.a, p.period_matrix());
        assert_eq!(inv.d, rat_int(400));

        let p = Picard9Period::from_i64(id3(1), 1, id3(1)).unwrap();
        let ch = charge_from_period(&p);
        assert_eq!(ch, TorusCharge::from_i64(1, id3(2), id3(-2), 0));
        let (sol, _) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        assert_eq!(sol.a, p.period_matrix());
    }

    #[test]
    fn invariant_transport() {
        let p = Picard9Period::from_i64([[2, 1, 0], [1, 2, 0], [0, 0, 3]], 5, id3(2)).unwrap();
        let ch = charge_from_period(&p);
        let inv = invariants::<Exact>(&ch);
        let det_r = p.r().det();
        let n_scalar = rat_int(p.d() as i64 + 1) * det_r.clone();
        assert_eq!(inv.r, p.r().scale(&n_scalar));
        assert_eq!(inv.m, rat_int(2) * n_scalar.clone() * det_r);
        assert_eq!(
            inv.d,
            rat_int(4) * n_scalar.clone() * n_scalar * rat_int(p.d() as i64)
        );
    }

    #[test]
    fn clearing_preserves_the_attractor() {
        let p = Picard9Period::from_i64([[2, 1, 0], [1, 2, 1], [0, 1, 2]], 3, id3(0)).unwrap();
        let ch = charge_from_period(&p);
        let (k, cleared) = clear_denominators(&ch);
        assert!(is_integral(&cleared.p) && is_integral(&cleared.q));
        let (sol, _) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        let (csol, _) = solve_complex_symmetric::<Exact>(&cleared).unwrap();
        assert_eq!(csol.a, sol.a);
        assert_eq!(csol.c, sol.c * QuadNumber::from_rat(Rat::from_integer(k)));
        assert_eq!(sol.a, p.period_matrix());

        let integral = TorusCharge::from_i64(1, id3(1), id3(1), -1);
        let (k, same) = clear_denominators(&integral);
        assert!(k.is_one());
        assert_eq!(same, integral);

        let half = integral.scale(&crate::scalar::rat(1, 2));
        let (k, doubled) = clear_denominators(&half);
        assert_eq!(k, BigInt::from(2));
        assert_eq!(doubled, integral);
    }

    #[test]
    fn invalid_inputs_rejected() {
        // N R^{-1} not symmetric
        assert!(Picard9Period::from_i64(
            [[1, 0, 0], [0, 2, 0], [0, 0, 1]],
            1,
            [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
        )
        .is_err());
        // R not positive definite
        assert!(Picard9Period::from_i64(id3(-1), 1, id3(0)).is_err());
        assert!(Picard9Period::from_i64(id3(1), 0, id3(0)).is_err());
    }
}
