//! Binary cubic and quadratic forms, the twisted GL₂ action, the Borel action
//! on quadratic forms and the embedding of quadratic forms into cubic ones.
//!
//! Coefficients are ordered by descending powers of `v₁`. Matrices act on row
//! vectors, `v ↦ vg`.

use crate::int::Int;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("matrix is singular")]
    Singular,
    #[error("determinant must be ±1 for an integral action")]
    NotUnimodular,
    #[error("form has zero discriminant")]
    ZeroDiscriminant,
    #[error("sign parameter must be ±1")]
    BadSign,
    #[error("quadratic form has Q1·Q2 = 0")]
    Degenerate,
    #[error("coefficient out of the supported range")]
    Overflow,
}

/// `x₀v₁³ + x₁v₁²v₂ + x₂v₁v₂² + x₃v₂³`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubicForm<T = BigInt> {
    pub x0: T,
    pub x1: T,
    pub x2: T,
    pub x3: T,
}

/// `y₁v₁² + y₂v₁v₂ + y₃v₂²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm<T = BigInt> {
    pub y1: T,
    pub y2: T,
    pub y3: T,
}

/// A quadratic form together with a vector `(ȳ₁, ȳ₂)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AugQuadForm<T = BigInt> {
    pub quad: QuadForm<T>,
    pub ybar1: T,
    pub ybar2: T,
}

/// `[[a, b], [c, d]]`, acting on row vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GL2Elem<T = BigInt> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

/// Element `(t, p, u)` of the integral Borel subgroup; `t`, `p` are ±1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BElem<T = BigInt> {
    pub t: T,
    pub p: T,
    pub u: T,
}

impl<T: Int> CubicForm<T> {
    pub fn new(x0: T, x1: T, x2: T, x3: T) -> Self {
        CubicForm { x0, x1, x2, x3 }
    }

    pub fn coeffs(&self) -> [T; 4] {
        [self.x0.clone(), self.x1.clone(), self.x2.clone(), self.x3.clone()]
    }

    pub fn from_coeffs(c: [T; 4]) -> Self {
        let [x0, x1, x2, x3] = c;
        CubicForm { x0, x1, x2, x3 }
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero() && self.x2.is_zero() && self.x3.is_zero()
    }

    /// The discriminant `P(x)`.
    pub fn disc(&self) -> T {
        let (a, b, c, d) = (&self.x0, &self.x1, &self.x2, &self.x3);
        let t = |v: i64| T::int(v);
        b.clone() * b.clone() * c.clone() * c.clone()
            - t(4) * a.clone() * c.clone() * c.clone() * c.clone()
            - t(4) * b.clone() * b.clone() * b.clone() * d.clone()
            + t(18) * a.clone() * b.clone() * c.clone() * d.clone()
            - t(27) * a.clone() * a.clone() * d.clone() * d.clone()
    }

    /// Value at `(v1, v2)`.
    pub fn eval(&self, v1: &T, v2: &T) -> T {
        // Horner in v1 with powers of v2
        let v22 = v2.clone() * v2.clone();
        ((self.x0.clone() * v1.clone() + self.x1.clone() * v2.clone()) * v1.clone() + self.x2.clone() * v22.clone())
            * v1.clone()
            + self.x3.clone() * v22 * v2.clone()
    }

    pub fn neg(&self) -> Self {
        CubicForm::new(-self.x0.clone(), -self.x1.clone(), -self.x2.clone(), -self.x3.clone())
    }

    /// `f(vg)` without the determinant twist.
    pub fn substitute(&self, g: &GL2Elem<T>) -> [T; 4] {
        // X = a v1 + c v2, Y = b v1 + d v2
        let xl = [g.a.clone(), g.c.clone()];
        let yl = [g.b.clone(), g.d.clone()];
        let mut out = [T::zero(), T::zero(), T::zero(), T::zero()];
        let coeffs = self.coeffs();
        for (k, coef) in coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            // X^(3-k) Y^k
            let mut poly = vec![T::one()];
            for _ in 0..(3 - k) {
                poly = mul_linear(&poly, &xl);
            }
            for _ in 0..k {
                poly = mul_linear(&poly, &yl);
            }
            for (i, c) in poly.into_iter().enumerate() {
                out[i] = out[i].clone() + coef.clone() * c;
            }
        }
        out
    }

    /// Twisted action `(gx)(v) = det(g)⁻¹ x(vg)` for `det g = ±1`.
    pub fn act(&self, g: &GL2Elem<T>) -> Result<Self, FormError> {
        let det = g.det();
        if det.is_zero() {
            return Err(FormError::Singular);
        }
        if !(det.is_one() || det == -T::one()) {
            return Err(FormError::NotUnimodular);
        }
        let s = self.substitute(g);
        let f = CubicForm::from_coeffs(s);
        Ok(if det.is_one() { f } else { f.neg() })
    }

    /// Action for `g` known to be unimodular.
    pub(crate) fn act_unimodular(&self, g: &GL2Elem<T>) -> Self {
        let s = CubicForm::from_coeffs(self.substitute(g));
        if g.det().is_one() {
            s
        } else {
            s.neg()
        }
    }

    /// Hessian covariant.
    pub fn hessian(&self) -> QuadForm<T> {
        let (a, b, c, d) = (&self.x0, &self.x1, &self.x2, &self.x3);
        let t = |v: i64| T::int(v);
        QuadForm::new(
            b.clone() * b.clone() - t(3) * a.clone() * c.clone(),
            b.clone() * c.clone() - t(9) * a.clone() * d.clone(),
            c.clone() * c.clone() - t(3) * b.clone() * d.clone(),
        )
    }

    /// Membership in the dual lattice `{x₁ ≡ x₂ ≡ 0 mod 3}`.
    pub fn in_dual(&self) -> bool {
        let three = T::int(3);
        (self.x1.clone() % three.clone()).is_zero() && (self.x2.clone() % three).is_zero()
    }

    pub fn to_big(&self) -> CubicForm<BigInt> {
        CubicForm::new(self.x0.to_big(), self.x1.to_big(), self.x2.to_big(), self.x3.to_big())
    }

    pub fn try_from_big(f: &CubicForm<BigInt>) -> Option<Self> {
        Some(CubicForm::new(T::from_big(&f.x0)?, T::from_big(&f.x1)?, T::from_big(&f.x2)?, T::from_big(&f.x3)?))
    }
}

impl CubicForm<BigInt> {
    pub fn from_i64(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        CubicForm::new(x0.into(), x1.into(), x2.into(), x3.into())
    }

    /// Action with an arbitrary nonsingular rational-valued twist; returns
    /// rational coefficients.
    pub fn act_rational(&self, g: &GL2Elem<BigInt>) -> Result<[BigRational; 4], FormError> {
        let det = g.det();
        if det.is_zero() {
            return Err(FormError::Singular);
        }
        let s = self.substitute(g);
        Ok(s.map(|c| BigRational::new(c, det.clone())))
    }
}

fn mul_linear<T: Int>(poly: &[T], l: &[T; 2]) -> Vec<T> {
    let mut out = vec![T::zero(); poly.len() + 1];
    for (i, c) in poly.iter().enumerate() {
        out[i] = out[i].clone() + c.clone() * l[0].clone();
        out[i + 1] = out[i + 1].clone() + c.clone() * l[1].clone();
    }
    out
}

impl<T: Int> QuadForm<T> {
    pub fn new(y1: T, y2: T, y3: T) -> Self {
        QuadForm { y1, y2, y3 }
    }

    pub fn q1(&self) -> T {
        self.y1.clone()
    }

    /// `y₂² − 4y₁y₃`.
    pub fn q2(&self) -> T {
        self.y2.clone() * self.y2.clone() - T::int(4) * self.y1.clone() * self.y3.clone()
    }

    pub fn eval(&self, v1: &T, v2: &T) -> T {
        self.y1.clone() * v1.clone() * v1.clone()
            + self.y2.clone() * v1.clone() * v2.clone()
            + self.y3.clone() * v2.clone() * v2.clone()
    }

    /// Substitution `y(vg)`.
    pub fn substitute(&self, g: &GL2Elem<T>) -> QuadForm<T> {
        // coefficient of v1² is y(a, b), of v2² is y(c, d)
        let (a, b, c, d) = (&g.a, &g.b, &g.c, &g.d);
        let two = T::int(2);
        QuadForm::new(
            self.eval(a, b),
            two.clone() * self.y1.clone() * a.clone() * c.clone()
                + self.y2.clone() * (a.clone() * d.clone() + b.clone() * c.clone())
                + two * self.y3.clone() * b.clone() * d.clone(),
            self.eval(c, d),
        )
    }

    /// Borel action `(by)(v) = t·y(v₁ + u v₂, p v₂)`.
    pub fn act_b(&self, b: &BElem<T>) -> Result<Self, FormError> {
        b.check()?;
        let (t, p, u) = (&b.t, &b.p, &b.u);
        let two = T::int(2);
        Ok(QuadForm::new(
            t.clone() * self.y1.clone(),
            t.clone() * (two * u.clone() * self.y1.clone() + p.clone() * self.y2.clone()),
            t.clone()
                * (u.clone() * u.clone() * self.y1.clone()
                    + u.clone() * p.clone() * self.y2.clone()
                    + p.clone() * p.clone() * self.y3.clone()),
        ))
    }

    /// The cubic form `v₂·y(v)`.
    pub fn embed_star(&self) -> CubicForm<T> {
        CubicForm::new(T::zero(), self.y1.clone(), self.y2.clone(), self.y3.clone())
    }

    pub fn to_big(&self) -> QuadForm<BigInt> {
        QuadForm::new(self.y1.to_big(), self.y2.to_big(), self.y3.to_big())
    }
}

impl QuadForm<BigInt> {
    pub fn from_i64(y1: i64, y2: i64, y3: i64) -> Self {
        QuadForm::new(y1.into(), y2.into(), y3.into())
    }
}

impl<T: Int> AugQuadForm<T> {
    pub fn new(quad: QuadForm<T>, ybar1: T, ybar2: T) -> Self {
        AugQuadForm { quad, ybar1, ybar2 }
    }

    /// `y₁ȳ₁² + y₂ȳ₁ȳ₂ + y₃ȳ₂²`.
    pub fn r1(&self) -> T {
        self.quad.eval(&self.ybar1, &self.ybar2)
    }

    pub fn r2(&self) -> T {
        self.quad.q2()
    }

    /// Membership in the dual lattice: middle quadratic coefficient even.
    pub fn in_dual(&self) -> bool {
        (self.quad.y2.clone() % T::int(2)).is_zero()
    }
}

impl<T: Int> GL2Elem<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        GL2Elem { a, b, c, d }
    }

    pub fn identity() -> Self {
        GL2Elem::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, o: &Self) -> Self {
        GL2Elem::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<Self, FormError> {
        let det = self.det();
        if !(det.is_one() || det == -T::one()) {
            return Err(FormError::NotUnimodular);
        }
        Ok(GL2Elem::new(
            det.clone() * self.d.clone(),
            -(det.clone() * self.b.clone()),
            -(det.clone() * self.c.clone()),
            det * self.a.clone(),
        ))
    }

    pub fn is_unimodular(&self) -> bool {
        let det = self.det();
        det.is_one() || det == -T::one()
    }

    pub fn to_big(&self) -> GL2Elem<BigInt> {
        GL2Elem::new(self.a.to_big(), self.b.to_big(), self.c.to_big(), self.d.to_big())
    }

    pub fn try_from_big(g: &GL2Elem<BigInt>) -> Option<Self> {
        Some(GL2Elem::new(T::from_big(&g.a)?, T::from_big(&g.b)?, T::from_big(&g.c)?, T::from_big(&g.d)?))
    }

    pub fn from_i64s(a: i64, b: i64, c: i64, d: i64) -> Self {
        GL2Elem::new(T::int(a), T::int(b), T::int(c), T::int(d))
    }

    /// `[[0, 1], [1, 0]]`.
    pub fn swap() -> Self {
        Self::from_i64s(0, 1, 1, 0)
    }

    /// `[[1, 0], [n, 1]]`: `f(v₁ + n v₂, v₂)`.
    pub fn translation(n: T) -> Self {
        GL2Elem::new(T::one(), T::zero(), n, T::one())
    }

    /// `diag(1, −1)`.
    pub fn reflection() -> Self {
        Self::from_i64s(1, 0, 0, -1)
    }
}

impl<T: Int> BElem<T> {
    pub fn new(t: T, p: T, u: T) -> Self {
        BElem { t, p, u }
    }

    pub fn identity() -> Self {
        BElem::new(T::one(), T::one(), T::zero())
    }

    fn check(&self) -> Result<(), FormError> {
        let unit = |v: &T| v.is_one() || *v == -T::one();
        if unit(&self.t) && unit(&self.p) {
            Ok(())
        } else {
            Err(FormError::BadSign)
        }
    }

    /// `b* = [[t, 0], [tu, tp]]`.
    pub fn embed_star(&self) -> GL2Elem<T> {
        GL2Elem::new(self.t.clone(), T::zero(), self.t.clone() * self.u.clone(), self.t.clone() * self.p.clone())
    }
}

/// Free-function spellings of the operations above.
pub fn disc_cubic<T: Int>(f: &CubicForm<T>) -> T {
    f.disc()
}

pub fn act_gl2<T: Int>(g: &GL2Elem<T>, f: &CubicForm<T>) -> Result<CubicForm<T>, FormError> {
    f.act(g)
}

pub fn act_b<T: Int>(b: &BElem<T>, y: &QuadForm<T>) -> Result<QuadForm<T>, FormError> {
    y.act_b(b)
}

pub fn embed_star<T: Int>(y: &QuadForm<T>) -> CubicForm<T> {
    y.embed_star()
}

pub fn embed_star_group<T: Int>(b: &BElem<T>) -> GL2Elem<T> {
    b.embed_star()
}

pub fn hessian<T: Int>(f: &CubicForm<T>) -> QuadForm<T> {
    f.hessian()
}

pub fn in_dual_v<T: Int>(f: &CubicForm<T>) -> bool {
    f.in_dual()
}

pub fn in_dual_u<T: Int>(u: &AugQuadForm<T>) -> bool {
    u.in_dual()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
        CubicForm::from_i64(a, b, c, d)
    }

    fn g(a: i64, b: i64, c: i64, d: i64) -> GL2Elem {
        GL2Elem::from_i64s(a, b, c, d)
    }

    #[test]
    fn discriminants() {
        assert_eq!(cf(0, 1, 0, 0).disc(), 0.into());
        assert_eq!(cf(0, 1, 1, 0).disc(), 1.into());
        assert_eq!(cf(1, 0, 0, 1).disc(), (-27).into());
        assert_eq!(cf(1, 1, 1, 1).disc(), (-16).into());
        assert_eq!(cf(1, 0, -1, -1).disc(), (-23).into());
    }

    #[test]
    fn gl2_examples() {
        let f = cf(1, 0, 0, 1);
        assert_eq!(f.act(&GL2Elem::identity()).unwrap(), f);
        assert_eq!(f.act(&g(1, 0, 0, -1)).unwrap(), cf(-1, 0, 0, 1));
        assert_eq!(cf(0, 1, 1, 0).act(&g(0, 1, 1, 0)).unwrap(), cf(0, -1, -1, 0));
        assert_eq!(f.act(&g(2, 0, 0, 1)), Err(FormError::NotUnimodular));
        assert_eq!(f.act(&g(1, 1, 1, 1)), Err(FormError::Singular));
    }

    #[test]
    fn action_is_left_action() {
        let f = cf(3, -1, 4, 2);
        let g1 = g(2, 1, 1, 1);
        let g2 = g(0, 1, -1, 3);
        let lhs = f.act(&g2).unwrap().act(&g1).unwrap();
        let rhs = f.act(&g1.mul(&g2)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_variant_agrees() {
        let f = cf(1, 2, -3, 5);
        let m = g(2, 1, 1, 1);
        let r = f.act_rational(&m).unwrap();
        let i = f.act(&m).unwrap();
        for (a, b) in r.iter().zip(i.coeffs()) {
            assert_eq!(*a, BigRational::from_integer(b));
        }
        let m2 = g(2, 0, 0, 1);
        let r2 = f.act_rational(&m2).unwrap();
        assert_eq!(r2[0], BigRational::new(8.into(), 2.into()));
    }

    #[test]
    fn borel_examples() {
        let b = BElem::new(big(1), big(1), big(-1));
        assert_eq!(QuadForm::from_i64(1, 3, 1).act_b(&b).unwrap(), QuadForm::from_i64(1, 1, -1));
        let b = BElem::new(big(-1), big(1), big(0));
        assert_eq!(QuadForm::from_i64(1, 0, 1).act_b(&b).unwrap(), QuadForm::from_i64(-1, 0, -1));
        let y = QuadForm::from_i64(2, 5, 7);
        assert_eq!(y.act_b(&BElem::identity()).unwrap(), y);
        assert!(y.act_b(&BElem::new(big(2), big(1), big(0))).is_err());
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn embedding_examples() {
        for (y, f, p) in [((1, 1, 0), (0, 1, 1, 0), 1), ((1, 0, 1), (0, 1, 0, 1), -4), ((1, 0, -1), (0, 1, 0, -1), 4)] {
            let q = QuadForm::from_i64(y.0, y.1, y.2);
            let e = q.embed_star();
            assert_eq!(e, cf(f.0, f.1, f.2, f.3));
            assert_eq!(e.disc(), big(p));
            assert_eq!(e.disc(), q.q1() * q.q1() * q.q2());
        }
        let b = BElem::new(big(1), big(1), big(3));
        assert_eq!(b.embed_star(), g(1, 0, 3, 1));
        assert_eq!(BElem::<BigInt>::identity().embed_star(), GL2Elem::identity());
        let b = BElem::new(big(-1), big(1), big(2));
        let y = QuadForm::from_i64(1, 1, 6);
        assert_eq!(y.embed_star().act(&b.embed_star()).unwrap(), y.act_b(&b).unwrap().embed_star());
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(cf(0, 1, 0, 0).hessian(), QuadForm::from_i64(1, 0, 0));
        let h = cf(1, 0, 0, 1).hessian();
        assert_eq!(h, QuadForm::from_i64(0, -9, 0));
        assert_eq!(h.q2(), big(81));
        let h = cf(0, 1, 1, 0).hessian();
        assert_eq!(h, QuadForm::from_i64(1, 1, 1));
        assert_eq!(h.q2(), big(-3));
    }

    #[test]
    fn dual_lattices() {
        assert!(cf(1, 3, 6, 2).in_dual());
        assert!(!cf(1, 1, 0, 0).in_dual());
        let u = AugQuadForm::new(QuadForm::from_i64(1, 2, 5), big(1), big(1));
        assert!(u.in_dual());
        assert_eq!(u.r1(), big(8));
        assert_eq!(u.r2(), big(-16));
    }
}
