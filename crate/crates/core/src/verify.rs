//! Named verification suites shared by the CLI and the acceptance tests.
//! Each suite runs exact randomized checks and reports every failure.

use crate::constellation::{covering_radius, tau_point, tau_set};
use crate::error::{Error, Result};
use crate::exs::{
    kahler_rigidity, solve_complex_exs, solve_kahler_exs, KappaSquare, MukaiVector,
    RigidityOutcome,
};
use crate::lattice::GramLattice;
use crate::linalg::bareiss_det;
use crate::mat3::{Exact, Mat3};
use crate::period::{charge_from_period, Picard9Period};
use crate::scalar::{rat, rat_int, QuadNumber, Rat, Scalar};
use crate::torus::{
    cofactor_differential_matrix, invariants, mirror_cover, residual, solve_complex_general,
    solve_complex_symmetric, solve_kahler, KahlerTorusCharge, TorusCharge,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, PartialEq, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const SUITES: [&str; 6] = ["rmd", "residuals", "roundtrip", "exs", "legendrian", "density"];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteOutcome> {
    match name {
        "rmd" => Ok(rmd_suite(10_000, seed)),
        "residuals" => Ok(residual_suite(1_000, seed)),
        "roundtrip" => Ok(roundtrip_suite(1_000, seed)),
        "exs" => Ok(exs_suite(200, seed)),
        "legendrian" => Ok(legendrian_suite()),
        "density" => Ok(density_suite()),
        _ => Err(Error::Invalid(format!(
            "unknown suite {name}; expected one of {SUITES:?}"
        ))),
    }
}

fn rand_mat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> [[i64; 3]; 3] {
    std::array::from_fn(|_| std::array::from_fn(|_| rng.random_range(lo..=hi)))
}

fn rand_sym(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> [[i64; 3]; 3] {
    let mut m = rand_mat(rng, lo, hi);
    for i in 0..3 {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
    m
}

/// 4 det(R) - M^2 = (p0)^2 D, exactly, for random integer charges,
/// including singular P.
pub fn rmd_suite(n: usize, seed: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..n {
        let mut p = rand_mat(&mut rng, -5, 5);
        if case % 10 == 0 {
            // force det(P) = 0 via a repeated row
            p[2] = p[0];
        }
        let ch = TorusCharge::from_i64(
            rng.random_range(-5..=5),
            p,
            rand_mat(&mut rng, -5, 5),
            rng.random_range(-5..=5),
        );
        let inv = invariants::<Exact>(&ch);
        let lhs = rat_int(4) * inv.r.det() - inv.m.clone() * inv.m.clone();
        let rhs = ch.p0.clone() * ch.p0.clone() * inv.d.clone();
        if lhs != rhs {
            failures.push(format!("case {case}: 4detR - M^2 != p0^2 D"));
        }
    }
    SuiteOutcome {
        name: "rmd",
        cases: n,
        failures,
    }
}

/// `n` integral charges with R positive definite and D > 0, built through
/// the period construction (uniform sampling makes such charges far too
/// rare to collect directly).
pub fn admissible_charges(n: usize, rng: &mut ChaCha8Rng) -> Vec<TorusCharge<Rat>> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let r = rand_sym(rng, -3, 3);
        if !Mat3::from_i64(r).is_positive_definite() {
            continue;
        }
        let d: u64 = rng.random_range(1..=9);
        let s = Mat3::from_i64(rand_sym(rng, -2, 2));
        let nn = s.mul(&Mat3::from_i64(r));
        let Ok(p) = Picard9Period::new(Mat3::from_i64(r), d, nn) else {
            continue;
        };
        let (_, ch) = crate::period::clear_denominators(&charge_from_period(&p));
        out.push(ch);
    }
    out
}

/// Closed-form solver soundness: exact zero residuals on both branches,
/// existence matching the predicates, the p0 = 0 cofactor-differential
/// determinant, and the Kahler/mirror agreement.
pub fn residual_suite(n: usize, seed: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut cases = 0;
    let admissible = admissible_charges(n, &mut rng);
    for ch in &admissible {
        cases += 1;
        let inv = invariants::<Exact>(ch);
        if !(inv.r.is_positive_definite() && inv.d.is_positive()) {
            failures.push(format!("generated charge not admissible: {ch:?}"));
            continue;
        }
        match solve_complex_symmetric::<Exact>(ch) {
            Ok((sol, _)) => {
                let r = residual::<Exact>(ch, &sol.c, &sol.a);
                if r != [rat_int(0), rat_int(0), rat_int(0), rat_int(0)] {
                    failures.push(format!("nonzero symmetric residual: {ch:?}"));
                }
            }
            Err(e) => failures.push(format!("admissible charge unsolvable ({e}): {ch:?}")),
        }
        match solve_complex_general::<Exact>(ch) {
            Ok(sols) => {
                for s in &sols {
                    let r = residual::<Exact>(ch, &s.c, &s.a);
                    if r != [rat_int(0), rat_int(0), rat_int(0), rat_int(0)] {
                        failures.push(format!("nonzero general residual: {ch:?}"));
                    }
                }
            }
            Err(e) => failures.push(format!("general branch failed ({e}): {ch:?}")),
        }
    }

    // existence matches the predicates on uniform random symmetric charges
    for _ in 0..n {
        let ch = TorusCharge::from_i64(
            rng.random_range(-5..=5),
            rand_sym(&mut rng, -5, 5),
            rand_sym(&mut rng, -5, 5),
            rng.random_range(-5..=5),
        );
        if ch.is_zero() {
            continue;
        }
        cases += 1;
        let inv = invariants::<Exact>(&ch);
        let sym_exists = inv.r.is_positive_definite() && inv.d.is_positive();
        let gen_exists = inv.r.det().is_positive() && inv.d.is_positive();
        if solve_complex_symmetric::<Exact>(&ch).is_ok() != sym_exists {
            failures.push(format!("symmetric existence mismatch: {ch:?}"));
        }
        if solve_complex_general::<Exact>(&ch).is_ok() != gen_exists {
            failures.push(format!("general existence mismatch: {ch:?}"));
        }
    }

    // p0 = 0 branch: det of the cofactor differential
    for case in 0..n {
        let p = rand_mat(&mut rng, -5, 5);
        let det_p = Mat3::from_fn(|i, j| p[i][j] as i128).det();
        let lhs = bareiss_det(&cofactor_differential_matrix(p));
        if lhs != -2 * det_p.pow(3) {
            failures.push(format!("cofactor differential det mismatch at case {case}"));
        }
        cases += 1;
    }

    // Kahler solve agrees entrywise with the complex solve; mirror cover
    // has Im(Omega') = (sqrt(D)/2) I. The invariants are even in the charge,
    // so the admissible list transfers to the Kahler side unchanged.
    for ch in &admissible {
        let k = KahlerTorusCharge {
            v0: ch.p0.clone(),
            v: ch.p.clone(),
            u: ch.q.clone(),
            u0: ch.q0.clone(),
        };
        let ks = match solve_kahler::<Exact>(&k) {
            Ok((s, _)) => s,
            Err(e) => {
                failures.push(format!("kahler side unsolvable ({e}): {k:?}"));
                continue;
            }
        };
        cases += 1;
        match solve_complex_symmetric::<Exact>(&k.as_complex_charge()) {
            Ok((cs, inv)) => {
                if cs.a != ks.a || ks.c != -cs.c {
                    failures.push(format!("kahler/complex disagreement: {k:?}"));
                }
                let cover = match mirror_cover(&k) {
                    Ok(c) => c,
                    Err(e) => {
                        failures.push(format!("mirror cover failed: {k:?}: {e}"));
                        continue;
                    }
                };
                let half_sd = QuadNumber::sqrt_minus(&inv.d) * QuadNumber::from_rat(rat(1, 2));
                for i in 0..3 {
                    for j in 0..3 {
                        let im_ok = if i == j {
                            cover.omega_prime.e[i][j].clone()
                                - QuadNumber::from_rat(
                                    cover.omega_prime.e[i][j].re().clone(),
                                )
                                == half_sd
                        } else {
                            cover.omega_prime.e[i][j].is_rational()
                        };
                        if !im_ok {
                            failures.push(format!("mirror Im part wrong: {k:?}"));
                        }
                    }
                }
                if cover.scale != inv.r.scale(&rat_int(2)) {
                    failures.push(format!("mirror scale wrong: {k:?}"));
                }
            }
            Err(_) => failures.push(format!("complex side unsolvable: {k:?}")),
        }
    }

    SuiteOutcome {
        name: "residuals",
        cases,
        failures,
    }
}

/// Appendix-B style round trip: period data -> charge -> attractor
/// reproduces the period matrix exactly, with exact invariant transport.
pub fn roundtrip_suite(n: usize, seed: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut done = 0;
    let mut attempts = 0;
    while done < n && attempts < 400 * n {
        attempts += 1;
        let r = rand_sym(&mut rng, -3, 3);
        if !Mat3::from_i64(r).is_positive_definite() {
            continue;
        }
        let d: u64 = rng.random_range(1..=9);
        // N = S R with S symmetric guarantees N R^{-1} symmetric
        let s = Mat3::from_i64(rand_sym(&mut rng, -3, 3));
        let nn = s.mul(&Mat3::from_i64(r));
        let p = match Picard9Period::new(Mat3::from_i64(r), d, nn) {
            Ok(p) => p,
            Err(_) => continue,
        };
        done += 1;
        let ch = charge_from_period(&p);
        let (sol, inv) = match solve_complex_symmetric::<Exact>(&ch) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("reconstructed charge unsolvable ({e}): {p:?}"));
                continue;
            }
        };
        if sol.a != p.period_matrix() {
            failures.push(format!("period not reproduced: {p:?}"));
        }
        let det_r = p.r().det();
        let n_scalar = rat_int(p.d() as i64 + 1) * det_r.clone();
        if inv.r != p.r().scale(&n_scalar) {
            failures.push(format!("R transport wrong: {p:?}"));
        }
        if inv.m != rat_int(2) * n_scalar.clone() * det_r {
            failures.push(format!("M transport wrong: {p:?}"));
        }
        if inv.d != rat_int(4) * n_scalar.clone() * n_scalar * rat_int(p.d() as i64) {
            failures.push(format!("D transport wrong: {p:?}"));
        }
    }
    if done < n {
        failures.push(format!("only {done}/{n} period triples generated"));
    }
    SuiteOutcome {
        name: "roundtrip",
        cases: done,
        failures,
    }
}

fn rand_even_pd_gram(rng: &mut ChaCha8Rng) -> GramLattice {
    loop {
        let a = 2 * rng.random_range(1..=5);
        let c = 2 * rng.random_range(1..=5);
        let b = rng.random_range(-4..=4);
        if a * c - b * b > 0 {
            return GramLattice::new(vec![vec![a, b], vec![b, c]], true).unwrap();
        }
    }
}

/// E x S exact checks: isotropy and positivity of Omega_S, the rigid Kahler
/// worked example, delta-exponential invariants, and the rigidity test.
pub fn exs_suite(n: usize, seed: u64) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut cases = 0;

    // complex side on random even positive-definite rank-2 grams
    for case in 0..n {
        let l = rand_even_pd_gram(&mut rng);
        let (u1, u2) = loop {
            let u1: Vec<i64> = (0..2).map(|_| rng.random_range(-3..=3)).collect();
            let u2: Vec<i64> = (0..2).map(|_| rng.random_range(-3..=3)).collect();
            if crate::lattice::independent(&u1, &u2) {
                break (u1, u2);
            }
        };
        let sol = match solve_complex_exs(&l, &u1, &u2) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: pd sublattice rejected ({e})"));
                continue;
            }
        };
        cases += 1;
        if !Scalar::is_zero(&sol.self_pairing()) {
            failures.push(format!("case {case}: (Omega, Omega) != 0"));
        }
        let h = sol.hermitian_pairing();
        if !h.is_rational() || !h.re().is_positive() {
            failures.push(format!("case {case}: (Omega, conj Omega) not positive"));
        }
        if !sol.tau.im_coeff().is_positive() {
            failures.push(format!("case {case}: tau not in upper half plane"));
        }
    }

    // rigid Kahler worked example and rigidity, n = 1..5
    for nn in 1..=5i64 {
        cases += 1;
        let ns = GramLattice::new(vec![vec![2 * nn]], true).unwrap();
        let v1 = MukaiVector::new(1, vec![0], -nn);
        let v2 = MukaiVector::new(0, vec![-1], 0);
        match solve_kahler_exs(&ns, &v1, &v2) {
            Ok(sol) => {
                if sol.omega_e != QuadNumber::i()
                    || sol.omega_s != vec![QuadNumber::i()]
                    || sol.c != QuadNumber::from_int(1)
                {
                    failures.push(format!("worked example wrong at n = {nn}"));
                }
            }
            Err(e) => failures.push(format!("worked example failed at n = {nn}: {e}")),
        }
        match kahler_rigidity(&ns, &[rat_int(0)], &KappaSquare::Rational(rat_int(1)), &vec![1]) {
            Ok(RigidityOutcome::Rigid { gen_re, gen_im, m, n }) => {
                use num_traits::One;
                if !(m.is_one() && n.is_one()) {
                    failures.push(format!("clearing scalars wrong at n = {nn}"));
                }
                if gen_re != vec![rat_int(1), rat_int(0), rat_int(-nn)]
                    || gen_im != vec![rat_int(0), rat_int(1), rat_int(0)]
                {
                    failures.push(format!("generators wrong at n = {nn}"));
                }
            }
            _ => failures.push(format!("rigidity failed at n = {nn}")),
        }
        match kahler_rigidity(&ns, &[rat_int(0)], &KappaSquare::Irrational, &vec![1]) {
            Ok(RigidityOutcome::NotRigid { .. }) => {}
            _ => failures.push(format!("irrational case not reported at n = {nn}")),
        }
    }

    // Kahler side invariants on random positive-definite Mukai pairs
    let mut done = 0;
    let mut attempts = 0;
    while done < n && attempts < 400 * n {
        attempts += 1;
        let h2 = 2 * rng.random_range(1..=6);
        let ns = GramLattice::new(vec![vec![h2]], true).unwrap();
        let v1 = MukaiVector::new(
            rng.random_range(-3..=3),
            vec![rng.random_range(-3..=3)],
            rng.random_range(-3..=3),
        );
        let v2 = MukaiVector::new(
            rng.random_range(-3..=3),
            vec![rng.random_range(-3..=3)],
            rng.random_range(-3..=3),
        );
        let sol = match solve_kahler_exs(&ns, &v1, &v2) {
            Ok(s) => s,
            Err(_) => continue,
        };
        done += 1;
        cases += 1;
        if sol.delta0 != QuadNumber::from_int(1) {
            failures.push(format!("delta0 != 1: {v1:?} {v2:?}"));
        }
        let half = QuadNumber::from_rat(rat(1, 2));
        match sol.omega_s_square(&ns) {
            Ok(sq) => {
                if sol.delta4 != sq * half {
                    failures.push(format!("delta4 != omega^2/2: {v1:?} {v2:?}"));
                }
            }
            Err(e) => failures.push(format!("omega^2 failed: {e}")),
        }
        match sol.im_omega_s_square(&ns) {
            Ok(im2) => {
                if !im2.is_positive() {
                    failures.push(format!("Im(omega_S)^2 <= 0: {v1:?} {v2:?}"));
                }
            }
            Err(e) => failures.push(format!("Im(omega)^2 failed: {e}")),
        }
        // exact attractor equations Re(C delta) = v1, Re(C omega_E delta) = v2
        let delta = sol.delta();
        let full1 = [v1.r, v1.d[0], v1.s];
        let full2 = [v2.r, v2.d[0], v2.s];
        for k in 0..3 {
            let cd = sol.c.clone() * delta[k].clone();
            let cwd = sol.c.clone() * sol.omega_e.clone() * delta[k].clone();
            if cd.re() != &rat_int(full1[k]) || cwd.re() != &rat_int(full2[k]) {
                failures.push(format!("attractor equation broken: {v1:?} {v2:?}"));
                break;
            }
        }
    }
    if done < n {
        failures.push(format!("only {done}/{n} Kahler Mukai pairs found"));
    }

    SuiteOutcome {
        name: "exs",
        cases,
        failures,
    }
}

/// Exactly-zero Legendrian residuals for the classical torus and quintic
/// families.
pub fn legendrian_suite() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut cases = 0;

    // torus: all 81 direction pairs at sample omega points
    let g = crate::even::gram();
    let samples: [Mat3<QuadNumber>; 2] = [
        Mat3::identity().scale(&QuadNumber::i()),
        Mat3::from_fn(|i, j| QuadNumber::new(rat_int(i as i64 - j as i64), rat_int(1 + (i * j) as i64), 1)),
    ];
    for omega in &samples {
        for k1 in 0..3 {
            for l1 in 0..3 {
                for k2 in 0..3 {
                    for l2 in 0..3 {
                        cases += 1;
                        let d1 = crate::even::d_exp_omega(omega, k1, l1);
                        let d2 = crate::even::d_exp_omega(omega, k2, l2);
                        let mut acc = QuadNumber::from_int(0);
                        for (i, row) in g.iter().enumerate() {
                            for (j, gij) in row.iter().enumerate() {
                                acc = acc
                                    + d1[i].clone()
                                        * QuadNumber::from_rat(-gij.clone())
                                        * d2[j].clone();
                            }
                        }
                        if !Scalar::is_zero(&acc) {
                            failures.push(format!(
                                "torus b(dZ_{k1}{l1}, dZ_{k2}{l2}) != 0"
                            ));
                        }
                    }
                }
            }
        }
    }

    // quintic classical truncation at rational tau points
    let chi = crate::amodel::quintic_euler_matrix();
    for (a, b) in [(0i64, 1i64), (1, 2), (-3, 5)] {
        cases += 1;
        let tau = QuadNumber::new(rat_int(a), rat_int(b), 1);
        let dz: Vec<QuadNumber> = crate::amodel::quintic_basis()
            .iter()
            .map(|f| {
                let (coeffs, _) = crate::amodel::quintic_classical_coeffs(f);
                let mut acc = QuadNumber::from_int(0);
                let mut pow = QuadNumber::from_int(1);
                for k in 1..4 {
                    acc = acc
                        + QuadNumber::from_rat(coeffs[k].clone() * rat_int(k as i64))
                            * pow.clone();
                    pow = pow * tau.clone();
                }
                acc
            })
            .collect();
        match crate::amodel::bform(&chi, &dz, &dz) {
            Ok(b) => {
                if !Scalar::is_zero(&b) {
                    failures.push(format!("quintic b(dZ, dZ) != 0 at tau = {tau:?}"));
                }
            }
            Err(e) => failures.push(format!("quintic bform failed: {e}")),
        }
    }

    SuiteOutcome {
        name: "legendrian",
        cases,
        failures,
    }
}

/// Dense-tau identities up to height 6 and strict covering-radius decrease
/// over heights 4 -> 8 -> 16 for the diag(2,2) lattice.
pub fn density_suite() -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut cases = 0;
    let l = GramLattice::new(vec![vec![2, 0], vec![0, 2]], true).unwrap();

    let pts = match tau_set(&l, 6, false) {
        Ok(p) => p,
        Err(e) => {
            return SuiteOutcome {
                name: "density",
                cases: 0,
                failures: vec![format!("tau_set failed: {e}")],
            }
        }
    };
    for p in &pts {
        cases += 1;
        let mut ok = true;
        for (k, m) in [(2i64, 1i64), (1, 3), (2, 3)] {
            let scaled = tau_point(
                &l,
                &p.u1.iter().map(|x| k * x).collect(),
                &p.u2.iter().map(|x| m * x).collect(),
            )
            .unwrap();
            if scaled.tau != p.tau.clone() * QuadNumber::from_rat(rat(m, k)) {
                ok = false;
            }
        }
        for k in [1i64, 2, -3] {
            let translated = tau_point(
                &l,
                &p.u1,
                &(0..2).map(|i| k * p.u1[i] + p.u2[i]).collect(),
            )
            .unwrap();
            if translated.tau != p.tau.clone() + QuadNumber::from_int(k) {
                ok = false;
            }
        }
        if !ok {
            failures.push(format!("identity failed for pair {:?}, {:?}", p.u1, p.u2));
        }
    }

    let bbox = [0.0, 1.0, 1.0, 2.0];
    let mut last = f64::INFINITY;
    for h in [4i64, 8, 16] {
        cases += 1;
        let pts = tau_set(&l, h, false).unwrap();
        let r = covering_radius(&pts, bbox, 12).unwrap();
        if r >= last {
            failures.push(format!("covering radius did not shrink at height {h}"));
        }
        last = r;
    }

    SuiteOutcome {
        name: "density",
        cases,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_rejected() {
        assert!(run_suite("nope", 0).is_err());
    }

    #[test]
    fn small_suites_pass() {
        // smaller case counts than the acceptance gate, but same logic
        assert!(rmd_suite(200, 1).passed());
        assert!(residual_suite(25, 2).passed());
        assert!(roundtrip_suite(25, 3).passed());
        assert!(exs_suite(25, 4).passed());
        assert!(legendrian_suite().passed());
    }
}
