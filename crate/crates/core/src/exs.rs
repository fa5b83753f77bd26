//! Attractor solvers for the product of an elliptic curve with a K3 surface:
//! the complex attractor on a rank-2 sublattice of NS(S), the Kahler
//! attractor for a pair of Mukai vectors, and the Kahler rigidity test.

use crate::error::{Error, NoAttractorReason, Result};
use crate::lattice::{independent, GramLattice, LatticeVector};
use crate::scalar::{rat_int, C64, QuadNumber, Rat, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

/// A class (r, D, s) in NS'(S) = H^0 + NS(S) + H^4.
#[derive(Clone, PartialEq, Debug)]
pub struct MukaiVector {
    pub r: i64,
    pub d: LatticeVector,
    pub s: i64,
}

impl MukaiVector {
    pub fn new(r: i64, d: LatticeVector, s: i64) -> Self {
        MukaiVector { r, d, s }
    }

    fn full(&self) -> Vec<i64> {
        let mut v = Vec::with_capacity(self.d.len() + 2);
        v.push(self.r);
        v.extend_from_slice(&self.d);
        v.push(self.s);
        v
    }
}

/// Classical K3 Mukai pairing: (D, D') - r s' - r' s.
pub fn mukai_pair(ns: &GramLattice, v: &MukaiVector, w: &MukaiVector) -> Result<i64> {
    let dd = ns.pair(&v.d, &w.d)?;
    Ok(dd - v.r * w.s - w.r * v.s)
}

/// The complex attractor on the rank-2 sublattice Z u1 + Z u2.
///
/// Omega_S is only defined up to scale and the paper's representative
/// -i (conj(tau) u1 - u2) leaves the field Q(sqrt(-D)); we store the field
/// element i Omega_S = conj(tau) u1 - u2 in (u1, u2)-coordinates instead,
/// which spans the same complex line and has the same pairing invariants up
/// to the sign (i z, i w) = -(z, w).
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexExsAttractor {
    pub tau: QuadNumber,
    pub i_omega: [QuadNumber; 2],
    pub disc: i64,
    /// Gram matrix of (u1, u2).
    pub pair_gram: [[i64; 2]; 2],
}

impl ComplexExsAttractor {
    fn pairing(&self, a: &[QuadNumber; 2], b: &[QuadNumber; 2]) -> QuadNumber {
        let mut acc = QuadNumber::from_int(0);
        for i in 0..2 {
            for j in 0..2 {
                acc = acc
                    + a[i].clone()
                        * b[j].clone()
                        * QuadNumber::from_int(self.pair_gram[i][j]);
            }
        }
        acc
    }

    /// (Omega_S, Omega_S) = -(i Omega, i Omega); zero at an attractor.
    pub fn self_pairing(&self) -> QuadNumber {
        -self.pairing(&self.i_omega, &self.i_omega)
    }

    /// (Omega_S, conj(Omega_S)) = (i Omega, conj(i Omega)); positive real.
    pub fn hermitian_pairing(&self) -> QuadNumber {
        let conj = [self.i_omega[0].conj(), self.i_omega[1].conj()];
        self.pairing(&self.i_omega, &conj)
    }

    /// Omega_S in the ambient lattice as a float vector (for oracles).
    pub fn omega_line(&self, u1: &[i64], u2: &[i64]) -> Vec<C64> {
        let minus_i = C64::new(0.0, -1.0);
        let (c1, c2) = (self.i_omega[0].to_c64(), self.i_omega[1].to_c64());
        (0..u1.len())
            .map(|k| minus_i * (c1 * C64::new(u1[k] as f64, 0.0) + c2 * C64::new(u2[k] as f64, 0.0)))
            .collect()
    }
}

pub fn solve_complex_exs(
    l: &GramLattice,
    u1: &LatticeVector,
    u2: &LatticeVector,
) -> Result<ComplexExsAttractor> {
    if !independent(u1, u2) {
        return Err(Error::DependentVectors);
    }
    let a = l.pair(u1, u1)?;
    let b = l.pair(u1, u2)?;
    let c = l.pair(u2, u2)?;
    let disc = l.pair_discriminant(u1, u2)?;
    if a <= 0 || disc <= 0 {
        return Err(Error::NoAttractor(NoAttractorReason::PairNotPositiveDefinite));
    }
    let a_rat = rat_int(a);
    let tau = (QuadNumber::from_rat(rat_int(b)) + QuadNumber::sqrt_minus(&rat_int(disc)))
        * QuadNumber::from_rat(a_rat).inv().unwrap();
    let i_omega = [tau.conj(), QuadNumber::from_int(-1)];
    Ok(ComplexExsAttractor {
        tau,
        i_omega,
        disc,
        pair_gram: [[a, b], [b, c]],
    })
}

/// Omega with Re(C1 Omega) = g1 and Re(C2 Omega) = g2 componentwise.
pub fn rank2_omega(c1: C64, c2: C64, g1: &[f64], g2: &[f64]) -> Result<Vec<C64>> {
    if g1.len() != g2.len() {
        return Err(Error::LatticeMismatch);
    }
    let im = (c1 * c2.conj()).im;
    if im.abs() < 1e-14 {
        return Err(Error::DegenerateCoefficients);
    }
    let f = C64::new(0.0, 1.0 / im);
    Ok((0..g1.len())
        .map(|k| f * (c1.conj() * g2[k] - c2.conj() * g1[k]))
        .collect())
}

/// Kahler attractor data: delta = e^{omega_S} with degree-0 part 1, the
/// elliptic-curve modulus omega_E, and the normalization C.
#[derive(Clone, PartialEq, Debug)]
pub struct KahlerExsAttractor {
    pub omega_e: QuadNumber,
    /// degree-0 part of delta; always 1.
    pub delta0: QuadNumber,
    /// degree-2 part of delta: omega_S in NS(S) coordinates.
    pub omega_s: Vec<QuadNumber>,
    /// degree-4 part of delta; equals omega_S^2 / 2.
    pub delta4: QuadNumber,
    pub c: QuadNumber,
    pub disc: i64,
}

impl KahlerExsAttractor {
    /// (omega_S, omega_S) in the NS Gram form.
    pub fn omega_s_square(&self, ns: &GramLattice) -> Result<QuadNumber> {
        let n = self.omega_s.len();
        if n != ns.rank() {
            return Err(Error::LatticeMismatch);
        }
        let mut acc = QuadNumber::from_int(0);
        for i in 0..n {
            for j in 0..n {
                acc = acc
                    + self.omega_s[i].clone()
                        * self.omega_s[j].clone()
                        * QuadNumber::from_int(ns.gram[i][j]);
            }
        }
        Ok(acc)
    }

    /// Im(omega_S)^2, an exact rational; positive on the Kahler side.
    pub fn im_omega_s_square(&self, ns: &GramLattice) -> Result<Rat> {
        let n = self.omega_s.len();
        if n != ns.rank() {
            return Err(Error::LatticeMismatch);
        }
        let kernel = self
            .omega_s
            .iter()
            .map(|x| x.field_d())
            .max()
            .unwrap_or(1);
        let mut acc = rat_int(0);
        for i in 0..n {
            for j in 0..n {
                acc = acc
                    + self.omega_s[i].im_coeff()
                        * self.omega_s[j].im_coeff()
                        * rat_int(ns.gram[i][j]);
            }
        }
        Ok(acc * rat_int(kernel as i64))
    }

    /// delta as a full NS'(S) vector with quadratic-field coefficients.
    pub fn delta(&self) -> Vec<QuadNumber> {
        let mut v = Vec::with_capacity(self.omega_s.len() + 2);
        v.push(self.delta0.clone());
        v.extend(self.omega_s.iter().cloned());
        v.push(self.delta4.clone());
        v
    }
}

pub fn solve_kahler_exs(
    ns: &GramLattice,
    v1: &MukaiVector,
    v2: &MukaiVector,
) -> Result<KahlerExsAttractor> {
    if !independent(&v1.full(), &v2.full()) {
        return Err(Error::DependentVectors);
    }
    let a = mukai_pair(ns, v1, v1)?;
    let b = mukai_pair(ns, v1, v2)?;
    let c = mukai_pair(ns, v2, v2)?;
    let disc = a
        .checked_mul(c)
        .and_then(|ac| ac.checked_sub(b * b))
        .ok_or_else(|| Error::Domain("discriminant overflow".into()))?;
    if a <= 0 || disc <= 0 {
        return Err(Error::NoAttractor(NoAttractorReason::PairNotPositiveDefinite));
    }
    let sd = QuadNumber::sqrt_minus(&rat_int(disc));
    let omega_e = (QuadNumber::from_rat(rat_int(b)) + sd.clone())
        * QuadNumber::from_rat(rat_int(a)).inv().unwrap();
    let omega_e_bar = omega_e.conj();
    let denom = QuadNumber::from_int(v2.r) - omega_e_bar.clone() * QuadNumber::from_int(v1.r);
    if Scalar::is_zero(&denom) {
        // impossible when NS(S) has hyperbolic signature; guards synthetic input
        return Err(Error::Invalid(
            "both Mukai vectors have vanishing rank".into(),
        ));
    }
    let denom_inv = denom.clone().inv().unwrap();
    let coeff = |x1: i64, x2: i64| {
        (QuadNumber::from_int(x2) - omega_e_bar.clone() * QuadNumber::from_int(x1))
            * denom_inv.clone()
    };
    let delta0 = coeff(v1.r, v2.r);
    let omega_s: Vec<QuadNumber> = (0..ns.rank()).map(|k| coeff(v1.d[k], v2.d[k])).collect();
    let delta4 = coeff(v1.s, v2.s);
    // C = -i (r2 - conj(omega_E) r1) / Im(omega_E)
    //   = -(v1^2 / disc) * sqrt(-disc) * denom
    let c_norm = -(QuadNumber::from_rat(rat_int(a) / rat_int(disc)) * sd * denom);
    Ok(KahlerExsAttractor {
        omega_e,
        delta0,
        omega_s,
        delta4,
        c: c_norm,
        disc,
    })
}

/// Outcome of the Kahler rigidity test for e^{B + i kappa}.
#[derive(Clone, PartialEq, Debug)]
pub enum RigidityOutcome {
    Rigid {
        /// m * Re(e^{B + i kappa}), integral.
        gen_re: Vec<Rat>,
        /// n * (the integral direction of Im(e^{B + i kappa})).
        gen_im: Vec<Rat>,
        m: BigInt,
        n: BigInt,
    },
    NotRigid {
        reason: String,
    },
}

/// kappa^2 of kappa = k H, given structurally since k itself may be
/// irrational while kappa^2 stays rational.
#[derive(Clone, PartialEq, Debug)]
pub enum KappaSquare {
    Rational(Rat),
    Irrational,
}

/// Whether e^{B + i kappa} with kappa = k H, k^2 = k2, spans a rank-2
/// integral lattice, and the minimal generators if so.
pub fn kahler_rigidity(
    ns: &GramLattice,
    b: &[Rat],
    k2: &KappaSquare,
    h: &LatticeVector,
) -> Result<RigidityOutcome> {
    if b.len() != ns.rank() || h.len() != ns.rank() {
        return Err(Error::LatticeMismatch);
    }
    let h2 = ns.pair(h, h)?;
    if h2 <= 0 {
        return Err(Error::Invalid("H^2 must be positive".into()));
    }
    let k2 = match k2 {
        KappaSquare::Rational(v) if v.is_positive() => v.clone(),
        KappaSquare::Rational(_) => {
            return Err(Error::Invalid("k^2 must be positive".into()));
        }
        KappaSquare::Irrational => {
            return Ok(RigidityOutcome::NotRigid {
                reason: "kappa^2 is irrational, so no proper sublattice contains \
                         e^{B + i kappa}"
                    .into(),
            });
        }
    };
    let mut b_sq = rat_int(0);
    let mut b_h = rat_int(0);
    for i in 0..ns.rank() {
        for j in 0..ns.rank() {
            b_sq = b_sq + b[i].clone() * b[j].clone() * rat_int(ns.gram[i][j]);
        }
        b_h = b_h + b[i].clone() * rat_int(ns.pair(h, &crate::lattice::basis_vector(ns.rank(), i))?);
    }
    let kappa_sq = k2 * rat_int(h2);
    let mut re = Vec::with_capacity(ns.rank() + 2);
    re.push(rat_int(1));
    re.extend(b.iter().cloned());
    re.push((b_sq - kappa_sq) / rat_int(2));
    let mut im = Vec::with_capacity(ns.rank() + 2);
    im.push(rat_int(0));
    im.extend(h.iter().map(|&x| rat_int(x)));
    im.push(b_h);
    let lcm_den = |v: &[Rat]| {
        v.iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    };
    let (m, n) = (lcm_den(&re), lcm_den(&im));
    let scale = |v: &[Rat], k: &BigInt| -> Vec<Rat> {
        let kr = Rat::from_integer(k.clone());
        v.iter().map(|x| x * &kr).collect()
    };
    Ok(RigidityOutcome::Rigid {
        gen_re: scale(&re, &m),
        gen_im: scale(&im, &n),
        m,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::basis_vector;
    use crate::scalar::rat;

    fn ns_rank1(h2: i64) -> GramLattice {
        GramLattice::new(vec![vec![h2]], true).unwrap()
    }

    #[test]
    fn mukai_pair_examples() {
        for n in 1..=4 {
            let ns = ns_rank1(2 * n);
            let v = MukaiVector::new(1, vec![0], -n);
            assert_eq!(mukai_pair(&ns, &v, &v).unwrap(), 2 * n);
            let w = MukaiVector::new(0, vec![1], 0);
            assert_eq!(mukai_pair(&ns, &w, &w).unwrap(), 2 * n);
            let x = MukaiVector::new(0, vec![-1], 0);
            assert_eq!(mukai_pair(&ns, &v, &x).unwrap(), 0);
        }
    }

    #[test]
    fn complex_exs_examples() {
        let l = GramLattice::new(vec![vec![2, 0], vec![0, 2]], true).unwrap();
        let (e1, e2) = (basis_vector(2, 0), basis_vector(2, 1));
        let sol = solve_complex_exs(&l, &e1, &e2).unwrap();
        assert_eq!(sol.tau, QuadNumber::i());
        // Omega = -i(conj(i) u1 - u2) = -u1 + i u2
        assert!(Scalar::is_zero(&sol.self_pairing()));
        assert_eq!(sol.hermitian_pairing(), QuadNumber::from_int(4));
        let omega = sol.omega_line(&e1, &e2);
        assert!((omega[0] - C64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((omega[1] - C64::new(0.0, 1.0)).norm() < 1e-14);

        let l2 = GramLattice::new(vec![vec![2, 1], vec![1, 2]], true).unwrap();
        let sol = solve_complex_exs(&l2, &e1, &e2).unwrap();
        assert_eq!(sol.tau, QuadNumber::new(rat(1, 2), rat(1, 2), 3));
        assert_eq!(sol.disc, 3);
        assert!(Scalar::is_zero(&sol.self_pairing()));

        let neg = GramLattice::new(vec![vec![-2, 0], vec![0, -2]], true).unwrap();
        assert!(matches!(
            solve_complex_exs(&neg, &e1, &e2),
            Err(Error::NoAttractor(NoAttractorReason::PairNotPositiveDefinite))
        ));
        assert!(matches!(
            solve_complex_exs(&l, &e1, &e1),
            Err(Error::DependentVectors)
        ));
    }

    #[test]
    fn rank2_omega_examples() {
        let g1 = [1.0, 0.0];
        let g2 = [0.0, 1.0];
        let omega = rank2_omega(C64::new(1.0, 0.0), C64::new(0.0, 1.0), &g1, &g2).unwrap();
        assert!((omega[0] - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((omega[1] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!(matches!(
            rank2_omega(C64::new(1.0, 0.0), C64::new(1.0, 0.0), &g1, &g2),
            Err(Error::DegenerateCoefficients)
        ));
        // linearity under scaling
        let k = C64::new(3.0, 0.0);
        let scaled = rank2_omega(k * C64::new(1.0, 0.0), k * C64::new(0.0, 1.0), &g1, &g2).unwrap();
        for i in 0..2 {
            assert!((scaled[i] * k - omega[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn kahler_exs_paper_example() {
        for n in 1..=5 {
            let ns = ns_rank1(2 * n);
            let v1 = MukaiVector::new(1, vec![0], -n);
            let v2 = MukaiVector::new(0, vec![-1], 0); // -H
            let sol = solve_kahler_exs(&ns, &v1, &v2).unwrap();
            assert_eq!(sol.omega_e, QuadNumber::i());
            assert_eq!(sol.delta0, QuadNumber::from_int(1));
            assert_eq!(sol.omega_s, vec![QuadNumber::i()]); // i H
            assert_eq!(sol.delta4, QuadNumber::from_int(-n));
            assert_eq!(sol.c, QuadNumber::from_int(1));
            // delta-exponential invariants
            let dd = sol.omega_s_square(&ns).unwrap();
            assert_eq!(
                sol.delta4,
                dd.clone() * QuadNumber::from_rat(rat(1, 2))
            );
            assert!(sol.im_omega_s_square(&ns).unwrap() > rat_int(0));
        }
    }

    #[test]
    fn kahler_exs_anti_kahler_example() {
        let ns = ns_rank1(2);
        let v1 = MukaiVector::new(1, vec![0], -1);
        let v2 = MukaiVector::new(0, vec![1], 0); // +H
        let sol = solve_kahler_exs(&ns, &v1, &v2).unwrap();
        assert_eq!(sol.omega_s, vec![-QuadNumber::i()]); // -i H: anti-Kahler
        assert_eq!(sol.im_omega_s_square(&ns).unwrap(), rat_int(2));

        let dep = MukaiVector::new(2, vec![0], -2);
        assert!(matches!(
            solve_kahler_exs(&ns, &v1, &dep),
            Err(Error::DependentVectors)
        ));
    }

    #[test]
    fn kahler_attractor_equation_exact() {
        // Re(C delta) = v1 and Re(C omega_E delta) = v2, componentwise
        let ns = GramLattice::new(vec![vec![4, 1], vec![1, -2]], false).unwrap();
        let v1 = MukaiVector::new(2, vec![1, 0], -1);
        let v2 = MukaiVector::new(1, vec![0, 1], 3);
        if let Ok(sol) = solve_kahler_exs(&ns, &v1, &v2) {
            let delta = sol.delta();
            let full1 = v1.full();
            let full2 = v2.full();
            for k in 0..delta.len() {
                let cd = sol.c.clone() * delta[k].clone();
                assert_eq!(cd.re(), &rat_int(full1[k]));
                let cwd = sol.c.clone() * sol.omega_e.clone() * delta[k].clone();
                assert_eq!(cwd.re(), &rat_int(full2[k]));
            }
        }
    }

    #[test]
    fn rigidity_examples() {
        for n in 1..=5 {
            let ns = ns_rank1(2 * n);
            let out = kahler_rigidity(
                &ns,
                &[rat_int(0)],
                &KappaSquare::Rational(rat_int(1)),
                &vec![1],
            )
            .unwrap();
            match out {
                RigidityOutcome::Rigid { gen_re, gen_im, m, n: nn } => {
                    assert_eq!(gen_re, vec![rat_int(1), rat_int(0), rat_int(-n)]);
                    assert_eq!(gen_im, vec![rat_int(0), rat_int(1), rat_int(0)]);
                    assert!(m.is_one() && nn.is_one());
                }
                _ => panic!("expected rigid"),
            }
        }

        let ns = ns_rank1(2);
        let out = kahler_rigidity(&ns, &[rat_int(0)], &KappaSquare::Irrational, &vec![1]).unwrap();
        assert!(matches!(out, RigidityOutcome::NotRigid { .. }));

        // B = H/2, kappa = H, H^2 = 2: Re = (1, 1/2, -3/4), m = 4; Im dir = (0, 1, 1)
        let out = kahler_rigidity(
            &ns,
            &[rat(1, 2)],
            &KappaSquare::Rational(rat_int(1)),
            &vec![1],
        )
        .unwrap();
        match out {
            RigidityOutcome::Rigid { gen_re, gen_im, m, n } => {
                assert_eq!(m, BigInt::from(4));
                assert!(n.is_one());
                assert_eq!(gen_re, vec![rat_int(4), rat_int(2), rat_int(-3)]);
                assert_eq!(gen_im, vec![rat_int(0), rat_int(1), rat_int(1)]);
            }
            _ => panic!("expected rigid"),
        }
    }
}
