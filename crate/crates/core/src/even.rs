//! The 20-dimensional even cohomology of the 6-torus: Mukai pairing table,
//! exponential classes and their derivatives, and the Kahler attractor
//! residual, with the hard-coded tables certified against the wedge algebra
//! in the test suite.

use crate::error::{Error, Result};
use crate::mat3::{Backend, Mat3};
use crate::scalar::{rat_int, QuadNumber, Rat, Scalar};
use crate::torus::KahlerTorusCharge;
use num_traits::{Signed, ToPrimitive};

/// Basis order: delta_0; delta_ij (row-major, 9); eps^ij (row-major, 9);
/// eps_0.
pub const RANK: usize = 20;

fn dij(i: usize, j: usize) -> usize {
    1 + 3 * i + j
}

fn eij(i: usize, j: usize) -> usize {
    10 + 3 * i + j
}

/// Mukai pairing Gram matrix <v, w> = int v^vee wedge w in the fixed basis.
/// Skew, and G^2 = -1, so the inverse is -G.
pub fn gram() -> Vec<Vec<Rat>> {
    let mut g = vec![vec![rat_int(0); RANK]; RANK];
    g[0][RANK - 1] = rat_int(1);
    g[RANK - 1][0] = rat_int(-1);
    for i in 0..3 {
        for j in 0..3 {
            g[dij(i, j)][eij(i, j)] = rat_int(1);
            g[eij(i, j)][dij(i, j)] = rat_int(-1);
        }
    }
    g
}

/// e^omega = (1, omega_ij, -Cof(omega)_ij, det omega) in the fixed basis.
pub fn exp_omega<S: Scalar>(omega: &Mat3<S>) -> Vec<S> {
    let cof = omega.cofactor();
    let mut v = Vec::with_capacity(RANK);
    v.push(S::one());
    for i in 0..3 {
        for j in 0..3 {
            v.push(omega.e[i][j].clone());
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            v.push(-cof.e[i][j].clone());
        }
    }
    v.push(omega.det());
    v
}

/// d/d omega_kl of e^omega: (0, E_kl, -dCof(omega)[E_kl], Cof(omega)_kl).
pub fn d_exp_omega<S: Scalar>(omega: &Mat3<S>, k: usize, l: usize) -> Vec<S> {
    let e_kl = Mat3::from_fn(|i, j| if (i, j) == (k, l) { S::one() } else { S::zero() });
    // polarization of the quadratic map Cof
    let d_cof = omega
        .add(&e_kl)
        .cofactor()
        .sub(&omega.cofactor())
        .sub(&e_kl.cofactor());
    let mut v = Vec::with_capacity(RANK);
    v.push(S::zero());
    for i in 0..3 {
        for j in 0..3 {
            v.push(e_kl.e[i][j].clone());
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            v.push(-d_cof.e[i][j].clone());
        }
    }
    v.push(omega.cofactor().e[k][l].clone());
    v
}

/// Mukai vector of a Kahler charge in the fixed basis: (v0, V, U, u0).
pub fn charge_vector<R: Scalar>(k: &KahlerTorusCharge<R>) -> Vec<R> {
    let mut v = Vec::with_capacity(RANK);
    v.push(k.v0.clone());
    for i in 0..3 {
        for j in 0..3 {
            v.push(k.v.e[i][j].clone());
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            v.push(k.u.e[i][j].clone());
        }
    }
    v.push(k.u0.clone());
    v
}

/// Pair two coefficient vectors through a rational Gram matrix.
pub fn pair_with_gram<S: Scalar>(g: &[Vec<Rat>], a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (i, row) in g.iter().enumerate() {
        for (j, gij) in row.iter().enumerate() {
            if gij == &rat_int(0) {
                continue;
            }
            acc = acc + a[i].clone() * S::from_rat(gij) * b[j].clone();
        }
    }
    acc
}

/// Classical central charge Z(F) = -<e^omega, v(F)>.
pub fn central_charge<B: Backend>(omega: &Mat3<B::C>, v: &[B::R]) -> B::C {
    let e = exp_omega(omega);
    let vc: Vec<B::C> = v.iter().map(|x| B::complexify(x)).collect();
    -pair_with_gram(&gram(), &e, &vc)
}

/// Exact Mukai form i^{-3} b(e^omega, conj e^omega) for a Gaussian-rational
/// omega, where b pairs through the inverse Gram matrix -G. Equals
/// 8 det(Im omega); the tests certify this identity.
pub fn torus_pairing_volume(omega: &Mat3<QuadNumber>) -> Result<Rat> {
    let e = exp_omega(omega);
    let ebar: Vec<QuadNumber> = e.iter().map(|x| x.conj()).collect();
    let inv_gram: Vec<Vec<Rat>> = gram()
        .into_iter()
        .map(|row| row.into_iter().map(|x| -x).collect())
        .collect();
    let b = pair_with_gram(&inv_gram, &e, &ebar);
    let v = QuadNumber::i() * b; // i^{-3} = i
    if !v.is_rational() {
        return Err(Error::Domain("pairing volume is not rational".into()));
    }
    Ok(v.re().clone())
}

/// A-model potential K = -log(i^{-3} b(e^omega, conj e^omega)); requires a
/// positive pairing volume, i.e. Im(omega) inside the Kahler cone.
pub fn torus_a_potential(omega: &Mat3<QuadNumber>) -> Result<f64> {
    let v = torus_pairing_volume(omega)?;
    if !v.is_positive() {
        return Err(Error::Domain("pairing volume is not positive".into()));
    }
    Ok(-v.to_f64().unwrap().ln())
}

/// Per-basis-class deviations |chi(F, F_j) - Re(C Z(F_j))| of the Kahler
/// attractor equation; identically zero at a Kahler attractor.
pub fn kahler_attractor_residual<B: Backend>(
    v: &[B::R],
    omega: &Mat3<B::C>,
    c: &B::C,
) -> Vec<B::R> {
    let g = gram();
    let e = exp_omega(omega);
    // chi(F, F_j) - Re(C Z(F_j)) = sum_m (v_m + Re(C e_m)) G_mj
    let shifted: Vec<B::R> = (0..RANK)
        .map(|m| v[m].clone() + B::re(&(c.clone() * e[m].clone())))
        .collect();
    (0..RANK)
        .map(|j| {
            let mut acc = B::R::zero();
            for m in 0..RANK {
                acc = acc + shifted[m].clone() * B::real_from_rat(&g[m][j]);
            }
            B::abs(&acc)
        })
        .collect()
}
