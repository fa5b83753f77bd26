//! Density experiments: exact tau-sets of rank-2 sublattices, Euclidean
//! covering radii, and enumeration of low-height torus attractor charges.

use crate::error::{Error, Result};
use crate::lattice::{independent, GramLattice, LatticeVector};
use crate::mat3::{Exact, Mat3};
use crate::scalar::{rat_int, QuadNumber, Rat, Scalar};
use crate::torus::{solve_complex_symmetric, AttractorInvariants, TorusCharge};
use rayon::prelude::*;
use std::collections::HashSet;

/// tau_{u1,u2} = ((u1,u2) + sqrt(-D)) / u1^2, a CM point in the upper half
/// plane attached to an independent pair.
#[derive(Clone, PartialEq, Debug)]
pub struct TauPoint {
    pub tau: QuadNumber,
    pub u1: LatticeVector,
    pub u2: LatticeVector,
    pub d: i64,
}

pub fn tau_point(l: &GramLattice, u1: &LatticeVector, u2: &LatticeVector) -> Result<TauPoint> {
    if !independent(u1, u2) {
        return Err(Error::DependentVectors);
    }
    let a = l.pair(u1, u1)?;
    let b = l.pair(u1, u2)?;
    let d = l.pair_discriminant(u1, u2)?;
    if a <= 0 || d <= 0 {
        return Err(Error::Domain("pair is not positive definite".into()));
    }
    let tau = (QuadNumber::from_rat(rat_int(b)) + QuadNumber::sqrt_minus(&rat_int(d)))
        * QuadNumber::from_rat(rat_int(a)).inv().unwrap();
    Ok(TauPoint {
        tau,
        u1: u1.clone(),
        u2: u2.clone(),
        d,
    })
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| {
        let mut a = g.abs();
        let mut b = x.abs();
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    })
}

/// All tau points from independent pairs with coordinate sup-norm at most
/// `height`, deduplicated by exact tau value. With `primitive_only`, only
/// pairs of primitive vectors are enumerated.
pub fn tau_set(l: &GramLattice, height: i64, primitive_only: bool) -> Result<Vec<TauPoint>> {
    if l.rank() != 2 {
        return Err(Error::Invalid("tau_set needs a rank-2 lattice".into()));
    }
    if !l.is_positive_definite() {
        return Err(Error::Domain("lattice must be positive definite".into()));
    }
    if height < 1 {
        return Err(Error::Invalid("height must be positive".into()));
    }
    let mut vectors: Vec<LatticeVector> = Vec::new();
    for x in -height..=height {
        for y in -height..=height {
            if (x, y) == (0, 0) {
                continue;
            }
            if primitive_only && gcd_all(&[x, y]) != 1 {
                continue;
            }
            vectors.push(vec![x, y]);
        }
    }
    let mut seen: HashSet<QuadNumber> = HashSet::new();
    let mut out = Vec::new();
    for u1 in &vectors {
        for u2 in &vectors {
            if !independent(u1, u2) {
                continue;
            }
            let p = tau_point(l, u1, u2)?;
            if seen.insert(p.tau.clone()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Max over an (grid x grid) lattice of the box [a,b] x [c,d] (endpoints
/// included) of the minimal Euclidean distance to the point set.
pub fn covering_radius(points: &[TauPoint], bbox: [f64; 4], grid: usize) -> Result<f64> {
    let [a, b, c, d] = bbox;
    if points.is_empty() {
        return Err(Error::Invalid("empty point set".into()));
    }
    if grid < 2 {
        return Err(Error::Invalid("grid must be at least 2".into()));
    }
    if c <= 0.0 || d < c || b < a {
        return Err(Error::Domain("box must lie in the upper half plane".into()));
    }
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let z = p.tau.to_c64();
            (z.re, z.im)
        })
        .collect();
    let mut radius: f64 = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let x = a + (b - a) * i as f64 / (grid - 1) as f64;
            let y = c + (d - c) * j as f64 / (grid - 1) as f64;
            let dist = pts
                .iter()
                .map(|&(px, py)| ((px - x).powi(2) + (py - y).powi(2)).sqrt())
                .fold(f64::INFINITY, f64::min);
            radius = radius.max(dist);
        }
    }
    Ok(radius)
}

/// One enumerated symmetric attractor charge with its exact data.
#[derive(Clone, PartialEq, Debug)]
pub struct ConstellationEntry {
    pub charge: TorusCharge<Rat>,
    pub t: Mat3<QuadNumber>,
    pub invariants: AttractorInvariants<Rat>,
}

const SYM_SLOTS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn sym_from(vals: &[i64; 6]) -> [[i64; 3]; 3] {
    let mut m = [[0i64; 3]; 3];
    for (k, &(i, j)) in SYM_SLOTS.iter().enumerate() {
        m[i][j] = vals[k];
        m[j][i] = vals[k];
    }
    m
}

fn canonical_sign(flat: &[i64; 14]) -> bool {
    for &x in flat {
        if x != 0 {
            return x > 0;
        }
    }
    false
}

/// Integer prefilter for the symmetric branch: R positive definite and
/// D > 0, computed in i64/i128 without allocation.
fn prefilter(p0: i64, p: &[[i64; 3]; 3], q: &[[i64; 3]; 3], q0: i64) -> bool {
    let pm: Mat3<i128> = Mat3::from_fn(|i, j| p[i][j] as i128);
    let qm: Mat3<i128> = Mat3::from_fn(|i, j| q[i][j] as i128);
    let r = pm.cofactor().add(&qm.scale(&(p0 as i128)));
    let minors = r.leading_minors();
    if minors.iter().any(|&m| m <= 0) {
        return false;
    }
    let pq = pm.mul(&qm);
    let t = pq.trace();
    let e = p0 as i128 * q0 as i128 + t;
    let d = 2 * (t * t - pq.mul(&pq).trace()) - e * e
        + 4 * (p0 as i128 * qm.det() - q0 as i128 * pm.det());
    d > 0
}

/// All symmetric integer charges with entries in [-height, height] that admit
/// a (Siegel-branch) attractor, up to global sign, with exact attractor data.
pub fn torus_constellation(height: i64) -> Result<Vec<ConstellationEntry>> {
    if height < 1 {
        return Err(Error::Invalid("height must be positive".into()));
    }
    let range: Vec<i64> = (-height..=height).collect();
    let n = range.len() as u64;
    // index space: p0, 6 P-slots, 6 Q-slots, q0
    let total = n.pow(14);
    let chunk: u64 = 1 << 16;
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let mut entries: Vec<(u64, ConstellationEntry)> = chunks
        .into_par_iter()
        .flat_map_iter(|c| {
            let lo = c * chunk;
            let hi = total.min(lo + chunk);
            let range = range.clone();
            (lo..hi).filter_map(move |idx| {
                let mut rest = idx;
                let mut digits = [0i64; 14];
                for d in digits.iter_mut() {
                    *d = range[(rest % n) as usize];
                    rest /= n;
                }
                if !canonical_sign(&digits) {
                    return None;
                }
                let p0 = digits[0];
                let p = sym_from(digits[1..7].try_into().unwrap());
                let q = sym_from(digits[7..13].try_into().unwrap());
                let q0 = digits[13];
                if !prefilter(p0, &p, &q, q0) {
                    return None;
                }
                let charge = TorusCharge::from_i64(p0, p, q, q0);
                let (sol, inv) = solve_complex_symmetric::<Exact>(&charge).ok()?;
                Some((
                    idx,
                    ConstellationEntry {
                        charge,
                        t: sol.a,
                        invariants: inv,
                    },
                ))
            })
        })
        .collect();
    entries.sort_by_key(|e| e.0);
    Ok(entries.into_iter().map(|e| e.1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::torus::residual;

    fn diag22() -> GramLattice {
        GramLattice::new(vec![vec![2, 0], vec![0, 2]], true).unwrap()
    }

    #[test]
    fn tau_set_contains_i() {
        let pts = tau_set(&diag22(), 1, false).unwrap();
        assert!(pts.iter().any(|p| p.tau == QuadNumber::i()));
        // taus are distinct by construction
        let mut seen = HashSet::new();
        assert!(pts.iter().all(|p| seen.insert(p.tau.clone())));

        let neg = GramLattice::new(vec![vec![-2, 0], vec![0, -2]], true).unwrap();
        assert!(tau_set(&neg, 1, false).is_err());
    }

    #[test]
    fn scaling_and_translation_identities() {
        let l = GramLattice::new(vec![vec![2, 1], vec![1, 4]], true).unwrap();
        let u1 = vec![1, 0];
        let u2 = vec![0, 1];
        let base = tau_point(&l, &u1, &u2).unwrap();
        for k in 1..4i64 {
            for m in 1..4i64 {
                let scaled = tau_point(
                    &l,
                    &u1.iter().map(|x| k * x).collect(),
                    &u2.iter().map(|x| m * x).collect(),
                )
                .unwrap();
                assert_eq!(
                    scaled.tau,
                    base.tau.clone() * QuadNumber::from_rat(rat(m, k))
                );
            }
            let translated = tau_point(
                &l,
                &u1,
                &(0..2).map(|i| k * u1[i] + u2[i]).collect(),
            )
            .unwrap();
            assert_eq!(
                translated.tau,
                base.tau.clone() + QuadNumber::from_int(k)
            );
        }
    }

    #[test]
    fn covering_radius_geometry() {
        let center = TauPoint {
            tau: QuadNumber::new(rat(1, 2), rat(3, 2), 1),
            u1: vec![1, 0],
            u2: vec![0, 1],
            d: 1,
        };
        let r = covering_radius(&[center.clone()], [0.0, 1.0, 1.0, 2.0], 3).unwrap();
        assert!((r - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(covering_radius(&[], [0.0, 1.0, 1.0, 2.0], 3).is_err());
        assert!(covering_radius(&[center], [0.0, 1.0, -1.0, 2.0], 3).is_err());
    }

    #[test]
    fn covering_radius_shrinks_with_height() {
        let l = diag22();
        let bbox = [0.0, 1.0, 1.0, 2.0];
        let mut last = f64::INFINITY;
        for h in [1, 2, 4] {
            let pts = tau_set(&l, h, false).unwrap();
            let r = covering_radius(&pts, bbox, 8).unwrap();
            assert!(r < last, "height {h}: {r} !< {last}");
            last = r;
        }
    }

    #[test]
    fn constellation_height_one() {
        let entries = torus_constellation(1).unwrap();
        let i_mat = Mat3::<QuadNumber>::identity().scale(&QuadNumber::i());
        let target = TorusCharge::from_i64(
            1,
            [[0; 3]; 3],
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            0,
        );
        let hit = entries.iter().find(|e| e.charge == target).unwrap();
        assert_eq!(hit.t, i_mat);
        assert_eq!(hit.invariants.d, rat_int(4));

        // canonical sign: no entry's negation appears
        for e in &entries {
            assert!(!entries.iter().any(|f| f.charge == e.charge.negate()));
        }
        // exact residual check on a sample
        for e in entries.iter().step_by(entries.len() / 20 + 1) {
            let c = {
                let inv = &e.invariants;
                let d_inv = Scalar::inv(&inv.d).unwrap();
                QuadNumber::from_rat(e.charge.p0.clone())
                    - QuadNumber::from_rat(inv.m.clone() * d_inv)
                        * QuadNumber::sqrt_minus(&inv.d)
            };
            let r = residual::<Exact>(&e.charge, &c, &e.t);
            assert_eq!(r, [rat_int(0), rat_int(0), rat_int(0), rat_int(0)]);
        }
    }
}
