//! Exterior algebra on six one-form generators with coefficients in any
//! scalar backend. Used as an independent oracle for volume pairings and for
//! the even-cohomology pairing table of the 3-torus.

use crate::scalar::Scalar;

pub const GENS: usize = 6;
pub const DIM: usize = 1 << GENS;

/// A (mixed-degree) form: coefficient per basis monomial, indexed by the
/// bitmask of participating generators in ascending order.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<S> {
    pub c: Vec<S>,
}

fn wedge_sign(a: usize, b: usize) -> i32 {
    // parity of transpositions needed to merge the two ascending monomials
    let mut crossings = 0u32;
    for j in 0..GENS {
        if b & (1 << j) != 0 {
            crossings += (a >> (j + 1)).count_ones();
        }
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero() -> Self {
        Form {
            c: vec![S::zero(); DIM],
        }
    }

    pub fn one() -> Self {
        let mut f = Self::zero();
        f.c[0] = S::one();
        f
    }

    pub fn generator(i: usize) -> Self {
        let mut f = Self::zero();
        f.c[1 << i] = S::one();
        f
    }

    pub fn monomial(mask: usize, coeff: S) -> Self {
        let mut f = Self::zero();
        f.c[mask] = coeff;
        f
    }

    pub fn add(&self, o: &Self) -> Self {
        Form {
            c: (0..DIM).map(|m| self.c[m].clone() + o.c[m].clone()).collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        Form {
            c: self.c.iter().map(|x| k.clone() * x.clone()).collect(),
        }
    }

    pub fn wedge(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for a in 0..DIM {
            if self.c[a].is_zero() {
                continue;
            }
            for b in 0..DIM {
                if a & b != 0 || o.c[b].is_zero() {
                    continue;
                }
                let term = self.c[a].clone() * o.c[b].clone();
                let term = if wedge_sign(a, b) == 1 { term } else { -term };
                out.c[a | b] = out.c[a | b].clone() + term;
            }
        }
        out
    }

    /// Interior product with the vector dual to generator `i`.
    pub fn contract(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for m in 0..DIM {
            if m & (1 << i) == 0 || self.c[m].is_zero() {
                continue;
            }
            let preceding = (m & ((1 << i) - 1)).count_ones();
            let v = self.c[m].clone();
            out.c[m & !(1 << i)] = if preceding % 2 == 0 { v } else { -v };
        }
        out
    }

    /// Degree-k homogeneous component.
    pub fn component(&self, k: u32) -> Self {
        let mut out = Self::zero();
        for m in 0..DIM {
            if (m as u32).count_ones() == k {
                out.c[m] = self.c[m].clone();
            }
        }
        out
    }

    /// Applies a per-degree scalar factor (e.g. the Mukai dual).
    pub fn degree_scale(&self, factor: impl Fn(u32) -> S) -> Self {
        Form {
            c: (0..DIM)
                .map(|m| factor((m as u32).count_ones()) * self.c[m].clone())
                .collect(),
        }
    }

    /// Coefficient of the top monomial relative to the orientation given by
    /// the generator order (a permutation of 0..6).
    pub fn top_coeff(&self, order: &[usize; GENS]) -> S {
        let mut inversions = 0;
        for i in 0..GENS {
            for j in i + 1..GENS {
                if order[i] > order[j] {
                    inversions += 1;
                }
            }
        }
        let v = self.c[DIM - 1].clone();
        if inversions % 2 == 0 {
            v
        } else {
            -v
        }
    }
}
