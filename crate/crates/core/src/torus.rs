//! Closed-form complex and Kahler attractor solvers for the 6-torus.

use crate::error::{Error, NoAttractorReason, Result};
use crate::mat3::{Backend, Exact, Mat3};
use crate::scalar::{rat, QuadNumber, Rat, Scalar};
use num_traits::One;

/// 3-cycle charge (p0, P, Q, q0).
#[derive(Clone, PartialEq, Debug)]
pub struct TorusCharge<R> {
    pub p0: R,
    pub p: Mat3<R>,
    pub q: Mat3<R>,
    pub q0: R,
}

/// Mukai-vector charge (v0, V, U, u0) on the mirror side.
#[derive(Clone, PartialEq, Debug)]
pub struct KahlerTorusCharge<R> {
    pub v0: R,
    pub v: Mat3<R>,
    pub u: Mat3<R>,
    pub u0: R,
}

impl<R: Scalar> TorusCharge<R> {
    pub fn is_zero(&self) -> bool {
        self.p0.is_zero() && self.q0.is_zero() && self.p.is_zero() && self.q.is_zero()
    }

    pub fn negate(&self) -> Self {
        TorusCharge {
            p0: -self.p0.clone(),
            p: self.p.neg(),
            q: self.q.neg(),
            q0: -self.q0.clone(),
        }
    }

    pub fn scale(&self, k: &R) -> Self {
        TorusCharge {
            p0: k.clone() * self.p0.clone(),
            p: self.p.scale(k),
            q: self.q.scale(k),
            q0: k.clone() * self.q0.clone(),
        }
    }
}

impl TorusCharge<Rat> {
    pub fn from_i64(p0: i64, p: [[i64; 3]; 3], q: [[i64; 3]; 3], q0: i64) -> Self {
        TorusCharge {
            p0: Rat::from_int(p0),
            p: Mat3::from_i64(p),
            q: Mat3::from_i64(q),
            q0: Rat::from_int(q0),
        }
    }

    pub fn to_float(&self) -> TorusCharge<f64> {
        TorusCharge {
            p0: crate::mat3::Float::real_from_rat(&self.p0),
            p: self.p.to_f64(),
            q: self.q.to_f64(),
            q0: crate::mat3::Float::real_from_rat(&self.q0),
        }
    }
}

impl<R: Scalar> KahlerTorusCharge<R> {
    /// Global sign flip onto the complex-side charge convention.
    pub fn to_complex_charge(&self) -> TorusCharge<R> {
        TorusCharge {
            p0: -self.v0.clone(),
            p: self.v.neg(),
            q: self.u.neg(),
            q0: -self.u0.clone(),
        }
    }

    /// Same entries reinterpreted as a complex charge (no sign flip).
    pub fn as_complex_charge(&self) -> TorusCharge<R> {
        TorusCharge {
            p0: self.v0.clone(),
            p: self.v.clone(),
            q: self.u.clone(),
            q0: self.u0.clone(),
        }
    }
}

impl KahlerTorusCharge<Rat> {
    pub fn from_i64(v0: i64, v: [[i64; 3]; 3], u: [[i64; 3]; 3], u0: i64) -> Self {
        KahlerTorusCharge {
            v0: Rat::from_int(v0),
            v: Mat3::from_i64(v),
            u: Mat3::from_i64(u),
            u0: Rat::from_int(u0),
        }
    }
}

/// The quartic invariants R, M, D attached to a charge.
#[derive(Clone, PartialEq, Debug)]
pub struct AttractorInvariants<R> {
    pub r: Mat3<R>,
    pub m: R,
    pub d: R,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Branch {
    PlusGeneral,
    MinusGeneral,
    SymmetricSiegel,
}

#[derive(Clone, PartialEq, Debug)]
pub struct AttractorSolution<C> {
    pub c: C,
    pub a: Mat3<C>,
    pub branch: Branch,
}

pub fn invariants<B: Backend>(ch: &TorusCharge<B::R>) -> AttractorInvariants<B::R> {
    let two = B::R::from_int(2);
    let four = B::R::from_int(4);
    let ptq = ch.p.transpose().mul(&ch.q);
    let t = ptq.trace();
    let r = ch.p.cofactor().add(&ch.q.scale(&ch.p0));
    let m = two.clone() * ch.p.det()
        + ch.p0.clone() * ch.p0.clone() * ch.q0.clone()
        + ch.p0.clone() * t.clone();
    let e = ch.p0.clone() * ch.q0.clone() + t.clone();
    let d = two * (t.clone() * t.clone() - ptq.mul(&ptq).trace()) - e.clone() * e
        + four * (ch.p0.clone() * ch.q.det() - ch.q0.clone() * ch.p.det());
    AttractorInvariants { r, m, d }
}

/// The general (not necessarily symmetric) branch: exactly two solutions when
/// det(R) > 0 and D > 0, with the +i M/sqrt(D) branch first.
pub fn solve_complex_general<B: Backend>(
    ch: &TorusCharge<B::R>,
) -> Result<[AttractorSolution<B::C>; 2]> {
    if ch.is_zero() {
        return Err(Error::Invalid("zero charge".into()));
    }
    let inv = invariants::<B>(ch);
    if !B::is_positive(&inv.r.det()) {
        return Err(Error::NoAttractor(NoAttractorReason::DetRNonPositive));
    }
    if !B::is_positive(&inv.d) {
        return Err(Error::NoAttractor(NoAttractorReason::DiscriminantNonPositive));
    }
    let sd = B::sqrt_minus(&inv.d); // i sqrt(D)
    let d_inv = inv.d.inv().expect("D > 0");
    // C = p0 +- i M / sqrt(D) = p0 +- M * (i sqrt(D)) / D
    let swing = B::complexify(&(inv.m.clone() * d_inv)) * sd.clone();
    let c_plus = B::complexify(&ch.p0) + swing.clone();
    let c_minus = B::complexify(&ch.p0) - swing;
    let t = ch.p.transpose().mul(&ch.q).trace();
    let e = ch.p0.clone() * ch.q0.clone() + t;
    let base = B::complexify_mat(
        &ch.p
            .mul(&ch.q.transpose())
            .scale(&B::R::from_int(2))
            .sub(&Mat3::identity().scale(&e)),
    );
    let two_r_inv_t = B::complexify_mat(&inv.r.scale(&B::R::from_int(2)))
        .inverse_transpose()
        .expect("det(R) > 0");
    let sd_e = Mat3::<B::C>::identity().scale(&sd);
    let a_plus = base.sub(&sd_e).mul(&two_r_inv_t);
    let a_minus = base.add(&sd_e).mul(&two_r_inv_t);
    Ok([
        AttractorSolution {
            c: c_plus,
            a: a_plus,
            branch: Branch::PlusGeneral,
        },
        AttractorSolution {
            c: c_minus,
            a: a_minus,
            branch: Branch::MinusGeneral,
        },
    ])
}

/// The symmetric Siegel branch: unique solution with A in H_3 when P, Q are
/// symmetric, R is positive definite and D > 0.
pub fn solve_complex_symmetric<B: Backend>(
    ch: &TorusCharge<B::R>,
) -> Result<(AttractorSolution<B::C>, AttractorInvariants<B::R>)> {
    if !ch.p.is_symmetric() || !ch.q.is_symmetric() {
        return Err(Error::AsymmetricCharge);
    }
    if ch.is_zero() {
        return Err(Error::Invalid("zero charge".into()));
    }
    let inv = invariants::<B>(ch);
    if !B::is_pd(&inv.r) {
        return Err(Error::NoAttractor(NoAttractorReason::RNotPositiveDefinite));
    }
    if !B::is_positive(&inv.d) {
        return Err(Error::NoAttractor(NoAttractorReason::DiscriminantNonPositive));
    }
    let sd = B::sqrt_minus(&inv.d);
    let d_inv = inv.d.inv().expect("D > 0");
    let c = B::complexify(&ch.p0) - B::complexify(&(inv.m.clone() * d_inv)) * sd.clone();
    let t = ch.p.mul(&ch.q).trace();
    let e = ch.p0.clone() * ch.q0.clone() + t;
    let base = B::complexify_mat(
        &ch.p
            .mul(&ch.q)
            .scale(&B::R::from_int(2))
            .sub(&Mat3::identity().scale(&e)),
    );
    let two_r_inv = B::complexify_mat(&inv.r.scale(&B::R::from_int(2)))
        .inverse()
        .expect("R positive definite");
    let a = base.add(&Mat3::<B::C>::identity().scale(&sd)).mul(&two_r_inv);
    Ok((
        AttractorSolution {
            c,
            a,
            branch: Branch::SymmetricSiegel,
        },
        inv,
    ))
}

/// Max-abs deviation of each of the four attractor equations
/// Re(C) = p0, Re(CA) = P, Re(C Cof(A)) = -Q, Re(C det A) = q0.
pub fn residual<B: Backend>(
    ch: &TorusCharge<B::R>,
    c: &B::C,
    a: &Mat3<B::C>,
) -> [B::R; 4] {
    let r1 = B::abs(&(B::re(c) - ch.p0.clone()));
    let ca = a.scale(c);
    let mut r2 = B::R::zero();
    for i in 0..3 {
        for j in 0..3 {
            let dev = B::abs(&(B::re(&ca.e[i][j]) - ch.p.e[i][j].clone()));
            r2 = B::max(r2, dev);
        }
    }
    let ccof = a.cofactor().scale(c);
    let mut r3 = B::R::zero();
    for i in 0..3 {
        for j in 0..3 {
            let dev = B::abs(&(B::re(&ccof.e[i][j]) + ch.q.e[i][j].clone()));
            r3 = B::max(r3, dev);
        }
    }
    let r4 = B::abs(&(B::re(&(c.clone() * a.det())) - ch.q0.clone()));
    [r1, r2, r3, r4]
}

/// Kahler attractor via the global sign-flip reduction. The returned matrix
/// equals the complex solve on (v0, V, U, u0) entrywise; C is negated.
pub fn solve_kahler<B: Backend>(
    k: &KahlerTorusCharge<B::R>,
) -> Result<(AttractorSolution<B::C>, AttractorInvariants<B::R>)> {
    solve_complex_symmetric::<B>(&k.to_complex_charge())
}

/// Mirror covering data of a Kahler attractor: the sublattice scale 2R and
/// the pulled-back structure with integral B-field and Im = (sqrt(D)/2) E.
#[derive(Clone, PartialEq, Debug)]
pub struct MirrorCover {
    pub d: Rat,
    pub scale: Mat3<Rat>,
    pub omega_prime: Mat3<QuadNumber>,
}

pub fn mirror_cover(k: &KahlerTorusCharge<Rat>) -> Result<MirrorCover> {
    let integral = |x: &Rat| x.denom().is_one();
    let all_integral = integral(&k.v0)
        && integral(&k.u0)
        && k.v.e.iter().flatten().all(integral)
        && k.u.e.iter().flatten().all(integral);
    if !all_integral {
        return Err(Error::Invalid("mirror cover needs an integral charge".into()));
    }
    // existence check (and D > 0) via the solver
    solve_kahler::<Exact>(k)?;
    let inv = invariants::<Exact>(&k.as_complex_charge());
    let t = k.v.mul(&k.u).trace();
    let re = k
        .v
        .mul(&k.u)
        .scale(&Rat::from_int(2))
        .sub(&Mat3::identity().scale(&(k.v0.clone() * k.u0.clone() + t)));
    let half_sd = QuadNumber::sqrt_minus(&inv.d) * QuadNumber::from_rat(rat(1, 2));
    let omega_prime = re
        .map(|x| QuadNumber::from_rat(x.clone()))
        .add(&Mat3::identity().scale(&half_sd));
    Ok(MirrorCover {
        d: inv.d,
        scale: inv.r.scale(&Rat::from_int(2)),
        omega_prime,
    })
}

/// The 9x9 coefficient matrix of the p0 = 0 branch: the differential of the
/// cofactor map at P, with row index (i,j) and column index (k,l) row-major.
pub fn cofactor_differential_matrix(p: [[i64; 3]; 3]) -> Vec<Vec<i128>> {
    let pm = Mat3::from_fn(|i, j| p[i][j] as i128);
    let cof_p = pm.cofactor();
    let mut m = vec![vec![0i128; 9]; 9];
    for k in 0..3 {
        for l in 0..3 {
            let mut e = Mat3::from_fn(|_, _| 0i128);
            e.e[k][l] = 1;
            // polarization: Cof is quadratic in the entries
            let col = pm.add(&e).cofactor().sub(&cof_p).sub(&e.cofactor());
            for i in 0..3 {
                for j in 0..3 {
                    m[3 * i + j][3 * k + l] = col.e[i][j];
                }
            }
        }
    }
    m
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_int(n: i64) -> Self {
        n as i128
    }
    fn from_rat(_r: &Rat) -> Self {
        panic!("i128 scalar does not embed rationals")
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn conj(&self) -> Self {
        *self
    }
    fn inv(&self) -> Option<Self> {
        match *self {
            1 => Some(1),
            -1 => Some(-1),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::bareiss_det;
    use crate::mat3::Float;
    use crate::scalar::rat_int;
    use proptest::prelude::*;

    fn id3(k: i64) -> [[i64; 3]; 3] {
        [[k, 0, 0], [0, k, 0], [0, 0, k]]
    }

    #[test]
    fn invariant_examples() {
        let inv = invariants::<Exact>(&TorusCharge::from_i64(1, id3(0), id3(1), 0));
        assert_eq!(inv.r, Mat3::identity());
        assert_eq!(inv.m, rat_int(0));
        assert_eq!(inv.d, rat_int(4));

        let inv = invariants::<Exact>(&TorusCharge::from_i64(1, id3(1), id3(1), -1));
        assert_eq!(inv.r, Mat3::<Rat>::identity().scale(&rat_int(2)));
        assert_eq!(inv.m, rat_int(4));
        assert_eq!(inv.d, rat_int(16));

        let inv = invariants::<Exact>(&TorusCharge::from_i64(1, id3(0), id3(0), 1));
        assert_eq!(inv.r, Mat3::zero());
        assert_eq!(inv.m, rat_int(1));
        assert_eq!(inv.d, rat_int(-1));
    }

    #[test]
    fn general_branch_examples() {
        let ch = TorusCharge::from_i64(1, id3(0), id3(1), 0);
        let [plus, minus] = solve_complex_general::<Exact>(&ch).unwrap();
        let i_mat = Mat3::<QuadNumber>::identity().scale(&QuadNumber::i());
        assert_eq!(plus.c, QuadNumber::from_int(1));
        assert_eq!(plus.a, i_mat.neg());
        assert_eq!(minus.c, QuadNumber::from_int(1));
        assert_eq!(minus.a, i_mat);
        for s in [&plus, &minus] {
            assert_eq!(residual::<Exact>(&ch, &s.c, &s.a), [rat_int(0), rat_int(0), rat_int(0), rat_int(0)]);
        }

        // p0 = 0 branch
        let ch = TorusCharge::from_i64(0, id3(1), id3(0), -1);
        let [plus, minus] = solve_complex_general::<Exact>(&ch).unwrap();
        assert_eq!(plus.c, QuadNumber::i());
        assert_eq!(plus.a, i_mat.neg());
        assert_eq!(minus.c, -QuadNumber::i());
        assert_eq!(minus.a, i_mat);
        for s in [&plus, &minus] {
            assert_eq!(residual::<Exact>(&ch, &s.c, &s.a), [rat_int(0), rat_int(0), rat_int(0), rat_int(0)]);
        }

        let bad = TorusCharge::from_i64(1, id3(0), id3(-1), 0);
        assert!(matches!(
            solve_complex_general::<Exact>(&bad),
            Err(Error::NoAttractor(NoAttractorReason::DetRNonPositive))
        ));
    }

    #[test]
    fn symmetric_branch_examples() {
        let i_mat = Mat3::<QuadNumber>::identity().scale(&QuadNumber::i());
        let ch = TorusCharge::from_i64(1, id3(0), id3(1), 0);
        let (sol, _) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        assert_eq!(sol.c, QuadNumber::from_int(1));
        assert_eq!(sol.a, i_mat);

        let ch = TorusCharge::from_i64(1, id3(1), id3(1), -1);
        let (sol, _) = solve_complex_symmetric::<Exact>(&ch).unwrap();
        assert_eq!(sol.c, QuadNumber::new(rat_int(1), rat_int(-1), 1));
        assert_eq!(sol.a, i_mat);
        assert_eq!(
            residual::<Exact>(&ch, &sol.c, &sol.a),
            [rat_int(0), rat_int(0), rat_int(0), rat_int(0)]
        );

        let bad = TorusCharge::from_i64(1, id3(0), id3(-1), 0);
        assert!(matches!(
            solve_complex_symmetric::<Exact>(&bad),
            Err(Error::NoAttractor(NoAttractorReason::RNotPositiveDefinite))
        ));
    }

    #[test]
    fn residual_detects_wrong_scale() {
        let ch = TorusCharge::from_i64(1, id3(0), id3(1), 0);
        let two_i = Mat3::<QuadNumber>::identity()
            .scale(&(QuadNumber::i() * QuadNumber::from_int(2)));
        let r = residual::<Exact>(&ch, &QuadNumber::from_int(1), &two_i);
        assert_eq!(r[0], rat_int(0));
        // the wrong scale shows up in the cofactor equation: Cof(2iI) = -4I
        assert_eq!(r[2], rat_int(3));
        let r = residual::<Exact>(
            &ch,
            &QuadNumber::new(rat_int(1), rat_int(1), 1),
            &two_i,
        );
        assert!(r[1] > rat_int(0) && r[2] > rat_int(0) && r[3] > rat_int(0));
    }

    #[test]
    fn kahler_and_mirror_examples() {
        let i_mat = Mat3::<QuadNumber>::identity().scale(&QuadNumber::i());
        let k = KahlerTorusCharge::from_i64(1, id3(0), id3(1), 0);
        let (sol, _) = solve_kahler::<Exact>(&k).unwrap();
        assert_eq!(sol.a, i_mat);
        assert_eq!(sol.c, QuadNumber::from_int(-1));
        let cover = mirror_cover(&k).unwrap();
        assert_eq!(cover.omega_prime, i_mat);
        assert_eq!(cover.scale, Mat3::<Rat>::identity().scale(&rat_int(2)));

        let k = KahlerTorusCharge::from_i64(1, id3(1), id3(1), -1);
        let (sol, _) = solve_kahler::<Exact>(&k).unwrap();
        assert_eq!(sol.a, i_mat);
        let cover = mirror_cover(&k).unwrap();
        assert_eq!(
            cover.omega_prime,
            Mat3::<QuadNumber>::identity().scale(&(QuadNumber::i() * QuadNumber::from_int(2)))
        );

        let bad = KahlerTorusCharge::from_i64(1, id3(0), id3(-1), 0);
        assert!(solve_kahler::<Exact>(&bad).is_err());
        assert!(mirror_cover(&bad).is_err());
    }

    #[test]
    fn float_backend_agrees() {
        let ch = TorusCharge::from_i64(1, id3(1), id3(1), -1);
        let (sol, _) = solve_complex_symmetric::<Float>(&ch.to_float()).unwrap();
        let r = residual::<Float>(&ch.to_float(), &sol.c, &sol.a);
        assert!(r.iter().all(|&x| x < 1e-12));
        assert!((sol.c.re - 1.0).abs() < 1e-12 && (sol.c.im + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cofactor_differential_det_at_identity() {
        let m = cofactor_differential_matrix(id3(1));
        assert_eq!(bareiss_det(&m), -2);
    }

    proptest! {
        #[test]
        fn rmd_identity(entries in proptest::array::uniform14(-5i64..=5)) {
            let ch = TorusCharge::from_i64(
                entries[0],
                [[entries[1], entries[2], entries[3]],
                 [entries[2], entries[4], entries[5]],
                 [entries[3], entries[5], entries[6]]],
                [[entries[7], entries[8], entries[9]],
                 [entries[8], entries[10], entries[11]],
                 [entries[9], entries[11], entries[12]]],
                entries[13],
            );
            let inv = invariants::<Exact>(&ch);
            let lhs = rat_int(4) * inv.r.det() - inv.m.clone() * inv.m.clone();
            let rhs = ch.p0.clone() * ch.p0.clone() * inv.d.clone();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sign_flip_equivariance(entries in proptest::array::uniform14(-3i64..=3)) {
            let ch = TorusCharge::from_i64(
                entries[0],
                [[entries[1], entries[2], entries[3]],
                 [entries[2], entries[4], entries[5]],
                 [entries[3], entries[5], entries[6]]],
                [[entries[7], entries[8], entries[9]],
                 [entries[8], entries[10], entries[11]],
                 [entries[9], entries[11], entries[12]]],
                entries[13],
            );
            if let Ok((sol, _)) = solve_complex_symmetric::<Exact>(&ch) {
                let (neg, _) = solve_complex_symmetric::<Exact>(&ch.negate()).unwrap();
                prop_assert_eq!(neg.a, sol.a);
                prop_assert_eq!(neg.c, -sol.c);
            }
        }
    }
}
