//! 3x3 matrices over any `Scalar`, plus the exact positivity tests the
//! solvers rely on.

use crate::scalar::{C64, QuadNumber, Rat, Scalar};
use num_traits::{Signed, ToPrimitive};

#[derive(Clone, PartialEq, Debug)]
pub struct Mat3<S> {
    pub e: [[S; 3]; 3],
}

impl<S: Scalar> Mat3<S> {
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        Mat3 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))),
        }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn diag(a: S, b: S, c: S) -> Self {
        let d = [a, b, c];
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat3<T> {
        Mat3::from_fn(|i, j| f(&self.e[i][j]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.e[j][i].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.e[i][j].clone() + o.e[i][j].clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| self.e[i][j].clone() - o.e[i][j].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(|i, j| -self.e[i][j].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::from_fn(|i, j| k.clone() * self.e[i][j].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = S::zero();
            for k in 0..3 {
                acc = acc + self.e[i][k].clone() * o.e[k][j].clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> S {
        self.e[0][0].clone() + self.e[1][1].clone() + self.e[2][2].clone()
    }

    pub fn det(&self) -> S {
        let m = &self.e;
        m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
            - m[0][1].clone()
                * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
            + m[0][2].clone()
                * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
    }

    /// Signed-minor matrix: A * Cof(A)^T = det(A) * I.
    pub fn cofactor(&self) -> Self {
        let m = &self.e;
        Self::from_fn(|i, j| {
            let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
            let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
            m[i1][j1].clone() * m[i2][j2].clone() - m[i1][j2].clone() * m[i2][j1].clone()
        })
    }

    /// Inverse via the adjugate; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let di = self.det().inv()?;
        Some(self.cofactor().transpose().scale(&di))
    }

    /// Inverse transpose, i.e. Cof(A) / det(A); `None` if singular.
    pub fn inverse_transpose(&self) -> Option<Self> {
        let di = self.det().inv()?;
        Some(self.cofactor().scale(&di))
    }

    pub fn is_symmetric(&self) -> bool {
        self.e[0][1] == self.e[1][0] && self.e[0][2] == self.e[2][0] && self.e[1][2] == self.e[2][1]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|r| r.iter().all(|x| x.is_zero()))
    }

    /// Leading principal minors (1x1, 2x2, 3x3).
    pub fn leading_minors(&self) -> [S; 3] {
        let m = &self.e;
        [
            m[0][0].clone(),
            m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
            self.det(),
        ]
    }
}

impl Mat3<Rat> {
    pub fn from_i64(m: [[i64; 3]; 3]) -> Self {
        Mat3::from_fn(|i, j| Rat::from_int(m[i][j]))
    }

    /// Sylvester's criterion; exact, requires symmetry.
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.leading_minors().iter().all(|m| m.is_positive())
    }

    pub fn to_f64(&self) -> Mat3<f64> {
        self.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl Mat3<f64> {
    /// Cholesky with pivot threshold 1e-12; requires symmetry (to 1e-9).
    pub fn is_positive_definite(&self) -> bool {
        let m = &self.e;
        for i in 0..3 {
            for j in 0..i {
                if (m[i][j] - m[j][i]).abs() > 1e-9 {
                    return false;
                }
            }
        }
        let mut l = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..=i {
                let mut s = m[i][j];
                for k in 0..j {
                    s -= l[i][k] * l[j][k];
                }
                if i == j {
                    if s <= 1e-12 {
                        return false;
                    }
                    l[i][i] = s.sqrt();
                } else {
                    l[i][j] = s / l[j][j];
                }
            }
        }
        true
    }
}

impl Mat3<QuadNumber> {
    pub fn re(&self) -> Mat3<Rat> {
        self.map(|x| x.re().clone())
    }

    /// Coefficient matrix of sqrt(-d); the actual imaginary part is this
    /// times sqrt(d).
    pub fn im_coeff(&self) -> Mat3<Rat> {
        self.map(|x| x.im_coeff().clone())
    }

    pub fn to_c64(&self) -> Mat3<C64> {
        self.map(|x| x.to_c64())
    }
}

impl Mat3<C64> {
    pub fn re(&self) -> Mat3<f64> {
        self.map(|x| x.re)
    }

    pub fn im(&self) -> Mat3<f64> {
        self.map(|x| x.im)
    }
}

/// A scalar backend pairing a real type with its complex extension. The
/// closed-form solvers are generic over this, so the same formulas run in
/// exact rational/quadratic arithmetic and in double precision.
pub trait Backend {
    type R: Scalar;
    type C: Scalar;
    fn real_from_rat(q: &Rat) -> Self::R;
    fn complexify(r: &Self::R) -> Self::C;
    fn re(c: &Self::C) -> Self::R;
    /// sqrt(-r) for r > 0.
    fn sqrt_minus(r: &Self::R) -> Self::C;
    fn is_positive(r: &Self::R) -> bool;
    fn abs(r: &Self::R) -> Self::R;
    fn is_pd(m: &Mat3<Self::R>) -> bool;

    fn complexify_mat(m: &Mat3<Self::R>) -> Mat3<Self::C> {
        m.map(|x| Self::complexify(x))
    }
    fn max(a: Self::R, b: Self::R) -> Self::R {
        if Self::is_positive(&(a.clone() - b.clone())) {
            a
        } else {
            b
        }
    }
}

/// Exact arithmetic: rationals and imaginary quadratic numbers.
pub struct Exact;

impl Backend for Exact {
    type R = Rat;
    type C = QuadNumber;
    fn real_from_rat(q: &Rat) -> Rat {
        q.clone()
    }
    fn complexify(r: &Rat) -> QuadNumber {
        QuadNumber::from_rat(r.clone())
    }
    fn re(c: &QuadNumber) -> Rat {
        c.re().clone()
    }
    fn sqrt_minus(r: &Rat) -> QuadNumber {
        QuadNumber::sqrt_minus(r)
    }
    fn is_positive(r: &Rat) -> bool {
        Signed::is_positive(r)
    }
    fn abs(r: &Rat) -> Rat {
        Signed::abs(r)
    }
    fn is_pd(m: &Mat3<Rat>) -> bool {
        m.is_positive_definite()
    }
}

/// Double precision arithmetic.
pub struct Float;

impl Backend for Float {
    type R = f64;
    type C = C64;
    fn real_from_rat(q: &Rat) -> f64 {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn complexify(r: &f64) -> C64 {
        C64::new(*r, 0.0)
    }
    fn re(c: &C64) -> f64 {
        c.re
    }
    fn sqrt_minus(r: &f64) -> C64 {
        C64::new(0.0, r.sqrt())
    }
    fn is_positive(r: &f64) -> bool {
        *r > 0.0
    }
    fn abs(r: &f64) -> f64 {
        r.abs()
    }
    fn is_pd(m: &Mat3<f64>) -> bool {
        m.is_positive_definite()
    }
}

pub fn frobenius_distance(a: &Mat3<C64>, b: &Mat3<C64>) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            s += (a.e[i][j] - b.e[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}
