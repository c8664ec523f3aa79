//! Invariants of ℚ and of quadratic fields: class number, regulator, roots
//! of unity and the size of the 3-torsion of the class group.

use crate::dirichlet::{is_fundamental, kronecker};
use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("class number computation did not round cleanly ({0})")]
    ClassNumber(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldInvariants {
    /// `None` for ℚ, otherwise the fundamental discriminant.
    pub disc: Option<i64>,
    pub degree: u32,
    pub r1: u32,
    pub r2: u32,
    pub disc_abs: u64,
    pub h: u64,
    pub reg: f64,
    pub roots_of_unity: u32,
    /// `None` when the 3-rank is not determined by `h` and no class group
    /// computation is available (real fields with `9 | h`).
    pub h3: Option<u64>,
}

impl FieldInvariants {
    /// `2^{r₁}(2π)^{r₂} h R / e`.
    pub fn c_k(&self) -> f64 {
        2f64.powi(self.r1 as i32) * (2.0 * PI).powi(self.r2 as i32) * self.h as f64 * self.reg
            / self.roots_of_unity as f64
    }

    /// Residue of `ζ_k` at `s = 1`.
    pub fn residue(&self) -> f64 {
        self.c_k() / (self.disc_abs as f64).sqrt()
    }

    pub fn name(&self) -> String {
        match self.disc {
            None => "Q".into(),
            Some(d) => format!("quad:{d}"),
        }
    }
}

pub fn invariants_q() -> FieldInvariants {
    FieldInvariants { disc: None, degree: 1, r1: 1, r2: 0, disc_abs: 1, h: 1, reg: 1.0, roots_of_unity: 2, h3: Some(1) }
}

pub fn invariants_quadratic(d: i64) -> Result<FieldInvariants, FieldError> {
    if !is_fundamental(d) {
        return Err(FieldError::NotFundamental(d));
    }
    if d < 0 {
        let forms = reduced_forms(d);
        let h = forms.len() as u64;
        let h3 = three_torsion(d, &forms) as u64;
        Ok(FieldInvariants {
            disc: Some(d),
            degree: 2,
            r1: 0,
            r2: 1,
            disc_abs: d.unsigned_abs(),
            h,
            reg: 1.0,
            roots_of_unity: match d {
                -3 => 6,
                -4 => 4,
                _ => 2,
            },
            h3: Some(h3),
        })
    } else {
        let reg = regulator(d);
        let h = real_class_number(d, reg)?;
        Ok(FieldInvariants {
            disc: Some(d),
            degree: 2,
            r1: 2,
            r2: 0,
            disc_abs: d as u64,
            h,
            reg,
            roots_of_unity: 2,
            h3: forced_h3(h),
        })
    }
}

/// `h₃` when the 3-part of a group of order `h` has at most one cyclic factor.
fn forced_h3(h: u64) -> Option<u64> {
    match crate::int::valuation(h as i64, 3) {
        0 => Some(1),
        1 => Some(3),
        _ => None,
    }
}

/// Positive definite binary quadratic form `ax² + bxy + cy²`.
pub type Form = (i64, i64, i64);

fn reduce_form((mut a, mut b, mut c): Form) -> Form {
    loop {
        if b > a || b <= -a {
            // translate b into (−a, a]
            let two_a = 2 * a;
            let k = (a - b).div_euclid(two_a);
            let nb = b + k * two_a;
            c = (nb * nb - (b * b - 4 * a * c)) / (4 * a);
            b = nb;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// Reduced primitive forms of discriminant `d < 0`, i.e. the class group.
pub fn reduced_forms(d: i64) -> Vec<Form> {
    let mut out = Vec::new();
    let amax = ((-d) / 3).sqrt() + 1;
    for a in 1..=amax {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push((a, b, c));
        }
    }
    out
}

fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

/// Dirichlet composition of primitive forms of the same negative
/// discriminant, followed by reduction.
pub fn compose(f: Form, g: Form) -> Form {
    let (f, g) = if f.0 > g.0 { (g, f) } else { (f, g) };
    let (a1, b1, _c1) = f;
    let (a2, b2, c2) = g;
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _v) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, x2, y2) = xgcd(s, d);
        (d1, x2, -y2)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = ((y1 as i128 * y2 as i128 * n as i128 - x2 as i128 * c2 as i128).rem_euclid(v1 as i128)) as i64;
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let disc = b1 * b1 - 4 * f.0 * f.2;
    let c3 = (b3 as i128 * b3 as i128 - disc as i128) / (4 * a3 as i128);
    reduce_form((a3, b3, c3 as i64))
}

pub fn principal_form(d: i64) -> Form {
    let b = d.rem_euclid(2);
    reduce_form((1, b, (b * b - d) / 4))
}

fn three_torsion(d: i64, forms: &[Form]) -> usize {
    let e = principal_form(d);
    forms.iter().filter(|&&f| compose(compose(f, f), f) == e).count()
}

/// `ln(A + B√D)` for large non-negative integers.
fn ln_sum(a: &BigInt, b: &BigInt, d: i64) -> f64 {
    let bits = a.bits().max(b.bits());
    let k = bits.saturating_sub(60);
    let af = (a >> k).to_f64().unwrap();
    let bf = (b >> k).to_f64().unwrap();
    (af + bf * (d as f64).sqrt()).ln() + k as f64 * std::f64::consts::LN_2
}

/// The fundamental unit `ε = (x + y√D)/2 > 1`, as `(x, y)`.
pub fn fundamental_unit(d: i64) -> (BigInt, BigInt) {
    assert!(d > 4 && is_fundamental(d));
    // continued fraction of ω = (b + √D)/2; a unit shows up as x − yω of
    // norm ±1 at some convergent x/y, and ε is its conjugate x − yω̄
    let b = d.rem_euclid(2);
    let sq = BigInt::from(d.sqrt());
    let dd = BigInt::from(d);
    let (mut p, mut q) = (BigInt::from(b), BigInt::from(2));
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    // Tr ω = b, N ω = (b² − D)/4
    let tr = BigInt::from(b);
    let nm = BigInt::from((b * b - d) / 4);
    loop {
        let a: BigInt = if q.is_positive() { (&p + &sq).div_floor(&q) } else { (&p + &sq + 1u32).div_floor(&q) };
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let (x, y) = (&h1, &k1);
        let norm = x * x - x * y * &tr + y * y * &nm;
        if norm.abs().is_one() {
            // ε = x − y(b − √D)/2 = ((2x − yb) + y√D)/2
            return (BigInt::from(2) * x - y * &tr, y.clone());
        }
        p = &a * &q - &p;
        q = (&dd - &p * &p) / &q;
    }
}

/// `ln ε` for the fundamental unit `ε`.
pub fn regulator(d: i64) -> f64 {
    if d == 5 {
        return ((1.0 + 5f64.sqrt()) / 2.0).ln();
    }
    let (x, y) = fundamental_unit(d);
    ln_sum(&x, &y, d) - std::f64::consts::LN_2
}

/// `h = −(1/2R) Σ_{a<D} χ(a) ln sin(πa/D)` for real quadratic fields.
fn real_class_number(d: i64, reg: f64) -> Result<u64, FieldError> {
    let mut s = 0.0;
    for a in 1..d as u64 {
        let c = kronecker(d, a);
        if c != 0 {
            s += c as f64 * (PI * a as f64 / d as f64).sin().ln();
        }
    }
    let h = -s / (2.0 * reg);
    let r = h.round();
    if (h - r).abs() > 1e-6 || r < 1.0 {
        return Err(FieldError::ClassNumber(format!("{h}")));
    }
    Ok(r as u64)
}
