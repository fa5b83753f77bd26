//! A-model Weil-Petersson machinery: the bilinear form attached to an Euler
//! matrix, Hirzebruch-Riemann-Roch pairings from Chern data, quintic quantum
//! central charges driven by an ingested Gromov-Witten table, and the
//! Legendrian residual.

use crate::error::{Error, Result};
use crate::linalg::gauss_inverse;
use crate::scalar::{rat_int, C64, Rat, Scalar};
use num_traits::{Signed, ToPrimitive, Zero};

/// zeta(3), entering only through the log Gamma class.
pub const ZETA3: f64 = 1.2020569031595942;

/// The quintic's Gamma-class constant lambda = 40 zeta(3) / (2 pi)^3.
pub fn quintic_lambda() -> f64 {
    40.0 * ZETA3 / (2.0 * std::f64::consts::PI).powi(3)
}

/// Matrix of Euler pairings chi(F_i, F_j) on a chosen basis, kept exact.
#[derive(Clone, PartialEq, Debug)]
pub struct EulerMatrix {
    chi: Vec<Vec<Rat>>,
    inv: Vec<Vec<Rat>>,
}

impl EulerMatrix {
    pub fn new(chi: Vec<Vec<Rat>>) -> Result<Self> {
        let n = chi.len();
        if chi.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("Euler matrix is not square".into()));
        }
        let inv = gauss_inverse(&chi)
            .ok_or_else(|| Error::Invalid("Euler matrix is singular".into()))?;
        Ok(EulerMatrix { chi, inv })
    }

    pub fn rank(&self) -> usize {
        self.chi.len()
    }

    pub fn chi(&self) -> &Vec<Vec<Rat>> {
        &self.chi
    }

    pub fn inverse(&self) -> &Vec<Vec<Rat>> {
        &self.inv
    }

    pub fn is_skew(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| (0..n).all(|j| self.chi[i][j] == -self.chi[j][i].clone()))
    }
}

/// b(Z1, Z2) = sum chi^{ij} Z1(F_i) Z2(F_j), with (chi^{ij}) the exact
/// inverse of the Euler matrix.
pub fn bform<S: Scalar>(chi: &EulerMatrix, z1: &[S], z2: &[S]) -> Result<S> {
    if z1.len() != chi.rank() || z2.len() != chi.rank() {
        return Err(Error::LatticeMismatch);
    }
    let mut acc = S::zero();
    for (i, row) in chi.inverse().iter().enumerate() {
        for (j, cij) in row.iter().enumerate() {
            if Zero::is_zero(cij) {
                continue;
            }
            acc = acc + z1[i].clone() * S::from_rat(cij) * z2[j].clone();
        }
    }
    Ok(acc)
}

/// K^A = -log( i^{-n} b(Z, conj Z) ); errors when that real part is not
/// positive (the charge leaves the admissible cone).
pub fn a_potential(chi: &EulerMatrix, z: &[C64], n: i64) -> Result<f64> {
    let b = bform(chi, z, &z.iter().map(|x| x.conj()).collect::<Vec<_>>())?;
    let phase = C64::new(0.0, 1.0).powi(-(n as i32));
    let val = phase * b;
    if val.im.abs() > 1e-9 * val.norm().max(1.0) {
        return Err(Error::Domain("i^{-n} b(Z, conj Z) is not real".into()));
    }
    if val.re <= 0.0 {
        return Err(Error::Domain("b-norm of the charge is not positive".into()));
    }
    Ok(-val.re.ln())
}

/// Chern character coefficients (ch0, ch1, ch2, ch3) in powers of H.
#[derive(Clone, PartialEq, Debug)]
pub struct ChernData {
    pub ch: [Rat; 4],
}

impl ChernData {
    pub fn new(ch: [Rat; 4]) -> Self {
        ChernData { ch }
    }

    pub fn from_i64(ch: [i64; 4]) -> Self {
        ChernData {
            ch: ch.map(rat_int),
        }
    }

    pub fn dual(&self) -> Self {
        ChernData {
            ch: [
                self.ch[0].clone(),
                -self.ch[1].clone(),
                self.ch[2].clone(),
                -self.ch[3].clone(),
            ],
        }
    }
}

/// Intersection context of a degree-deg 3-fold with Td = 1 + todd2 H^2
/// (Td1 = Td3 = 0 on a Calabi-Yau).
#[derive(Clone, PartialEq, Debug)]
pub struct ThreefoldContext {
    /// int_X H^3
    pub deg: Rat,
    /// H^2-coefficient of the Todd class, c2/12.
    pub todd2: Rat,
}

pub fn quintic_context() -> ThreefoldContext {
    ThreefoldContext {
        deg: rat_int(5),
        todd2: Rat::new(5.into(), 6.into()),
    }
}

/// Total Chern class coefficients c_0..c_{n-1} of a degree-d hypersurface
/// in P^n, from the truncated expansion of (1+H)^{n+1} / (1+dH).
pub fn hypersurface_chern(n: usize, d: i64) -> Vec<Rat> {
    let dim = n; // classes live in degrees 0..n-1; keep c_0..c_{n-1}
    let mut binom = vec![rat_int(0); dim];
    let mut b = rat_int(1);
    for (k, slot) in binom.iter_mut().enumerate() {
        *slot = b.clone();
        b = b * rat_int((n + 1 - k) as i64) / rat_int((k + 1) as i64);
    }
    // multiply by sum (-d)^k H^k
    let mut c = vec![rat_int(0); dim];
    for k in 0..dim {
        let mut acc = rat_int(0);
        let mut pow = rat_int(1);
        for j in (0..=k).rev() {
            acc = acc + binom[j].clone() * pow.clone();
            pow = pow * rat_int(-d);
        }
        c[k] = acc;
    }
    c
}

/// chi(E, F) = int_X ch(E^vee) ch(F) Td_X, exactly.
pub fn euler_pairing(e: &ChernData, f: &ChernData, ctx: &ThreefoldContext) -> Rat {
    let ed = e.dual();
    let mut top = rat_int(0);
    for a in 0..4 {
        top = top + ed.ch[a].clone() * f.ch[3 - a].clone();
    }
    for a in 0..2 {
        top = top + ctx.todd2.clone() * ed.ch[a].clone() * f.ch[1 - a].clone();
    }
    ctx.deg.clone() * top
}

/// Chern characters of the quintic basis 1, H, H^2, pt (= H^3 / 5).
pub fn quintic_basis() -> [ChernData; 4] {
    [
        ChernData::from_i64([1, 0, 0, 0]),
        ChernData::from_i64([0, 1, 0, 0]),
        ChernData::from_i64([0, 0, 1, 0]),
        ChernData::new([rat_int(0), rat_int(0), rat_int(0), Rat::new(1.into(), 5.into())]),
    ]
}

/// The quintic Euler matrix over `quintic_basis`.
pub fn quintic_euler_matrix() -> EulerMatrix {
    let basis = quintic_basis();
    let ctx = quintic_context();
    let chi = basis
        .iter()
        .map(|e| basis.iter().map(|f| euler_pairing(e, f, &ctx)).collect())
        .collect();
    EulerMatrix::new(chi).expect("quintic Euler matrix is unimodular up to sign")
}

/// Genus-0 Gromov-Witten table, external data.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct GWTable {
    entries: Vec<(u32, Rat)>,
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<num_bigint::BigInt> {
        t.trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad rational component: {t}")))
    };
    if let Some((num, den)) = s.split_once('/') {
        let d = parse_int(den)?;
        if !d.is_positive() {
            return Err(Error::Invalid(format!("nonpositive denominator: {s}")));
        }
        Ok(Rat::new(parse_int(num)?, d))
    } else {
        Ok(Rat::from_integer(parse_int(s)?))
    }
}

impl GWTable {
    pub fn new(mut entries: Vec<(u32, Rat)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Invalid(format!("duplicate degree {}", w[0].0)));
            }
        }
        if entries.iter().any(|e| e.0 == 0) {
            return Err(Error::Invalid("degrees must be positive".into()));
        }
        Ok(GWTable { entries })
    }

    pub fn empty() -> Self {
        GWTable::default()
    }

    pub fn entries(&self) -> &[(u32, Rat)] {
        &self.entries
    }

    /// Parses CSV with header "d,N_d"; N_d as integer or "p/q".
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if idx == 0 && line.to_lowercase().replace(' ', "") == "d,n_d" {
                continue;
            }
            let (d, n) = line
                .split_once(',')
                .ok_or_else(|| Error::Invalid(format!("bad CSV row: {line}")))?;
            let d: u32 = d
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad degree: {d}")))?;
            entries.push((d, parse_rat(n)?));
        }
        GWTable::new(entries)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        GWTable {
            entries: self
                .entries
                .iter()
                .map(|(d, n)| (*d, n * k))
                .collect(),
        }
    }

    /// (sum N_d q^d, sum N_d d q^d) at q = e^{2 pi i tau}.
    pub fn instanton_sums(&self, tau: C64) -> (C64, C64) {
        let q = (C64::new(0.0, 2.0 * std::f64::consts::PI) * tau).exp();
        let mut s0 = C64::new(0.0, 0.0);
        let mut s1 = C64::new(0.0, 0.0);
        for (d, n) in &self.entries {
            let nd = n.to_f64().unwrap_or(f64::NAN);
            let qd = q.powi(*d as i32);
            s0 += nd * qd;
            s1 += nd * *d as f64 * qd;
        }
        (s0, s1)
    }
}

/// Coefficients of the classical quintic central charge as a polynomial in
/// tau: (a_0..a_3 rational) plus mu, the coefficient of -5 i lambda. Exact.
pub fn quintic_classical_coeffs(f: &ChernData) -> ([Rat; 4], Rat) {
    // Z_cl = -5 [ sum_j (-tau)^{3-j}/(3-j)! (ch_j + (5/12) ch_{j-2}) + i lambda ch_0 ]
    let ctx = quintic_context();
    let sqrt_todd2 = ctx.todd2 / rat_int(2); // 5/12
    let mut a = [rat_int(0), rat_int(0), rat_int(0), rat_int(0)];
    let fact = [rat_int(1), rat_int(1), rat_int(2), rat_int(6)];
    for j in 0..4usize {
        let k = 3 - j; // power of tau
        let mut vj = f.ch[j].clone();
        if j >= 2 {
            vj = vj + sqrt_todd2.clone() * f.ch[j - 2].clone();
        }
        let sign = if k % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        a[k] = a[k].clone() + rat_int(-5) * sign * vj / fact[k].clone();
    }
    (a, f.ch[0].clone())
}

/// Quantum central charge of the quintic:
/// -int e^{-tau H} v_X(F) + 2 ch0 (pi i tau S1 + S0) + (S1 / 5) int ch1 H^2,
/// with (S0, S1) the instanton sums of the table at q = e^{2 pi i tau}.
pub fn quintic_central_charge(tau: C64, f: &ChernData, gw: &GWTable) -> C64 {
    let (a, mu) = quintic_classical_coeffs(f);
    let lam = quintic_lambda();
    let mut z = C64::new(0.0, 0.0);
    let mut pow = C64::new(1.0, 0.0);
    for ak in &a {
        z += ak.to_f64().unwrap_or(f64::NAN) * pow;
        pow *= tau;
    }
    z += C64::new(0.0, -5.0 * lam) * mu.to_f64().unwrap_or(f64::NAN);
    let (s0, s1) = gw.instanton_sums(tau);
    let ch0 = f.ch[0].to_f64().unwrap_or(f64::NAN);
    let ch1 = f.ch[1].to_f64().unwrap_or(f64::NAN);
    z += 2.0 * ch0 * (C64::new(0.0, std::f64::consts::PI) * tau * s1 + s0);
    // (1/5) S1 int ch1 H^2 = (1/5) S1 * 5 ch1
    z += s1 * ch1;
    z
}

/// The rank-4 quintic charge vector over `quintic_basis`.
pub fn quintic_charge_vector(tau: C64, gw: &GWTable) -> [C64; 4] {
    let basis = quintic_basis();
    std::array::from_fn(|k| quintic_central_charge(tau, &basis[k], gw))
}

/// A-model Weil-Petersson potential of the quintic at tau.
pub fn quintic_a_potential(tau: C64, gw: &GWTable) -> Result<f64> {
    let chi = quintic_euler_matrix();
    let z = quintic_charge_vector(tau, gw);
    a_potential(&chi, &z, 3)
}

/// The elliptic-curve Euler matrix over (O_X, O_p).
pub fn elliptic_euler_matrix() -> EulerMatrix {
    EulerMatrix::new(vec![
        vec![rat_int(0), rat_int(1)],
        vec![rat_int(-1), rat_int(0)],
    ])
    .expect("unimodular")
}

/// Elliptic-curve charge vector Z = (tau, -1) over (O_X, O_p).
pub fn elliptic_charge_vector(tau: C64) -> [C64; 2] {
    [tau, C64::new(-1.0, 0.0)]
}

/// A-model Weil-Petersson potential of an elliptic curve: -log(2 Im tau).
pub fn elliptic_a_potential(tau: C64) -> Result<f64> {
    a_potential(&elliptic_euler_matrix(), &elliptic_charge_vector(tau), 1)
}

/// Matrix of b(dZ_i, dZ_j) over supplied derivative vectors; zero for
/// Legendrian families.
pub fn legendrian_residual(chi: &EulerMatrix, derivs: &[Vec<C64>]) -> Result<Vec<Vec<C64>>> {
    derivs
        .iter()
        .map(|di| derivs.iter().map(|dj| bform(chi, di, dj)).collect())
        .collect()
}
