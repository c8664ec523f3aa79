//! Γ, Hurwitz ζ, Riemann ζ and quadratic Dirichlet L-values in double
//! precision, with an error estimate attached to every real zeta value.
//!
//! Accuracy is limited by `f64`: requested precisions beyond
//! [`MAX_DIGITS`] decimal digits are refused rather than silently rounded.

use crate::dirichlet::{is_fundamental, kronecker};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::f64::consts::PI;
use std::sync::OnceLock;
use thiserror::Error;

/// Decimal digits the evaluators can certify.
pub const MAX_DIGITS: u32 = 13;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument {0} is within {1:e} of a pole")]
    NearPole(String, f64),
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("requested {0} digits, at most {MAX_DIGITS} are available")]
    Precision(u32),
}

/// A value with an absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certified {
    pub value: f64,
    pub error: f64,
}

impl Certified {
    pub fn check_digits(&self, digits: u32) -> Result<(), SpecialError> {
        if digits > MAX_DIGITS || self.error > 10f64.powi(-(digits as i32)) {
            Err(SpecialError::Precision(digits))
        } else {
            Ok(())
        }
    }
}

/// Distance under which an argument counts as a pole.
pub const POLE_TOL: f64 = 1e-10;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn near_nonpositive_integer(z: Complex64) -> bool {
    z.re < 0.5 && (z.re - z.re.round()).abs() < POLE_TOL && z.im.abs() < POLE_TOL
}

/// `Γ(z)` for complex `z`, Lanczos approximation plus reflection.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecialError> {
    if near_nonpositive_integer(z) {
        return Err(SpecialError::NearPole(format!("{z}"), POLE_TOL));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        pi / ((pi * z).sin() * gamma_unchecked(Complex64::new(1.0, 0.0) - z))
    } else {
        let z = z - 1.0;
        let mut x = Complex64::new(LANCZOS[0], 0.0);
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
    }
}

pub fn gamma_real(x: f64) -> Result<f64, SpecialError> {
    gamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// `B₂, B₄, …, B₃₆` as doubles, from the exact recurrence.
fn bernoulli_even() -> &'static [f64] {
    static B: OnceLock<Vec<f64>> = OnceLock::new();
    B.get_or_init(|| {
        let n = 37;
        let mut b: Vec<BigRational> = Vec::with_capacity(n);
        let one = BigRational::from_integer(BigInt::from(1));
        b.push(one.clone());
        let binom = |n: usize, k: usize| -> BigInt {
            let mut r = BigInt::from(1);
            for i in 0..k {
                r = r * BigInt::from(n - i) / BigInt::from(i + 1);
            }
            r
        };
        for m in 1..n {
            // Σ_{k<m+1} C(m+1, k) B_k = 0
            let mut s = BigRational::from_integer(BigInt::from(0));
            for (k, bk) in b.iter().enumerate() {
                s += BigRational::from_integer(binom(m + 1, k)) * bk;
            }
            b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
        }
        (1..=18).map(|j| b[2 * j].to_f64().unwrap()).collect()
    })
}

const EM_TERMS: usize = 12;
const EM_SHIFT: usize = 24;

/// Hurwitz zeta `ζ(s, a)` for real `s ≠ 1`, `a > 0`, by Euler–Maclaurin.
/// The error bound is the first omitted correction term plus a rounding
/// allowance proportional to the sum of absolute values.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<Certified, SpecialError> {
    if (s - 1.0).abs() < POLE_TOL {
        return Err(SpecialError::NearPole(format!("s = {s}"), POLE_TOL));
    }
    assert!(a > 0.0, "Hurwitz parameter must be positive");
    let bern = bernoulli_even();
    let mut sum = 0.0;
    let mut abs = 0.0;
    for k in 0..EM_SHIFT {
        let t = (a + k as f64).powf(-s);
        sum += t;
        abs += t.abs();
    }
    let x = a + EM_SHIFT as f64;
    let head = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    sum += head;
    abs += head.abs();
    // running factor (s)_{2j−1} x^{−s−2j+1} / (2j)!
    let mut f = s * x.powf(-s - 1.0) / 2.0;
    let mut tail = 0.0;
    for j in 1..=EM_TERMS + 1 {
        let term = bern[j - 1] * f;
        if j == EM_TERMS + 1 {
            tail = term.abs();
            break;
        }
        sum += term;
        abs += term.abs();
        let m = (2 * j) as f64;
        f *= (s + m - 1.0) * (s + m) / (x * x) / ((m + 1.0) * (m + 2.0));
    }
    Ok(Certified { value: sum, error: tail + 4.0 * f64::EPSILON * abs })
}

/// Riemann `ζ(s)` for real `s ≠ 1`.
pub fn zeta(s: f64) -> Result<Certified, SpecialError> {
    hurwitz_zeta(s, 1.0)
}

/// `L(s, χ_D) = |D|^{−s} Σ_{a=1}^{|D|} χ_D(a) ζ(s, a/|D|)`.
pub fn l_chi(s: f64, d: i64) -> Result<Certified, SpecialError> {
    if !is_fundamental(d) {
        return Err(SpecialError::NotFundamental(d));
    }
    let m = d.unsigned_abs();
    let scale = (m as f64).powf(-s);
    let mut v = 0.0;
    let mut e = 0.0;
    for a in 1..=m {
        let c = kronecker(d, a);
        if c == 0 {
            continue;
        }
        let h = hurwitz_zeta(s, a as f64 / m as f64)?;
        v += c as f64 * h.value;
        e += h.error;
    }
    Ok(Certified { value: scale * v, error: scale * e + 4.0 * f64::EPSILON * (scale * v).abs() })
}

/// `ζ_k(s)` for `k = ℚ` or the quadratic field of discriminant `d`.
pub fn zeta_k(disc: Option<i64>, s: f64) -> Result<Certified, SpecialError> {
    let z = zeta(s)?;
    match disc {
        None => Ok(z),
        Some(d) => {
            let l = l_chi(s, d)?;
            Ok(Certified {
                value: z.value * l.value,
                error: z.error * l.value.abs() + l.error * z.value.abs() + z.error * l.error,
            })
        }
    }
}

/// `ζ_k(s)` refusing results whose error exceeds `10^{−digits}`.
pub fn zeta_k_special(disc: Option<i64>, s: f64, digits: u32) -> Result<Certified, SpecialError> {
    if digits > MAX_DIGITS {
        return Err(SpecialError::Precision(digits));
    }
    let v = zeta_k(disc, s)?;
    v.check_digits(digits)?;
    Ok(v)
}

/// `ζ(1 − s)` from `ζ(s)` through the functional equation
/// `ζ(1−s) = 2(2π)^{−s} cos(πs/2) Γ(s) ζ(s)`.
pub fn zeta_reflected(s: f64) -> Result<f64, SpecialError> {
    Ok(2.0 * (2.0 * PI).powf(-s) * (PI * s / 2.0).cos() * gamma_real(s)? * zeta(s)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn gamma_values() {
        assert!(close(gamma_real(0.5).unwrap(), PI.sqrt(), 1e-14));
        assert!(close(gamma_real(5.0).unwrap(), 24.0, 1e-14));
        assert!(close(gamma_real(1.5).unwrap(), PI.sqrt() / 2.0, 1e-14));
        assert!(close(gamma_real(-0.5).unwrap(), -2.0 * PI.sqrt(), 1e-13));
        // Γ(1/3)Γ(2/3) = 2π/√3
        let p = gamma_real(1.0 / 3.0).unwrap() * gamma_real(2.0 / 3.0).unwrap();
        assert!(close(p, 2.0 * PI / 3f64.sqrt(), 1e-14));
        assert!(gamma_real(-2.0).is_err());
        assert!(gamma_real(0.0).is_err());
        // |Γ(i)|² = π / sinh π
        let g = gamma(Complex64::new(0.0, 1.0)).unwrap();
        assert!(close(g.norm_sqr(), PI / PI.sinh(), 1e-13));
    }

    #[test]
    fn zeta_values() {
        let z2 = zeta(2.0).unwrap();
        assert!((z2.value - PI * PI / 6.0).abs() < 1e-14);
        assert!(z2.error < 1e-13);
        assert!((zeta(4.0).unwrap().value - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(0.0).unwrap().value + 0.5).abs() < 1e-14);
        assert!((zeta(-1.0).unwrap().value + 1.0 / 12.0).abs() < 1e-14);
        let z13 = zeta(1.0 / 3.0).unwrap();
        assert!(z13.value < 0.0);
        assert!((z13.value + 0.973_360_4).abs() < 1e-6);
        assert!((zeta_reflected(2.0 / 3.0).unwrap() - z13.value).abs() < 1e-13);
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn l_values() {
        // Catalan's constant
        let g = l_chi(2.0, -4).unwrap();
        assert!((g.value - 0.915_965_594_177_219).abs() < 1e-14);
        // L(1, χ₋₂₃) = 2πh/(e√23) with h = 3, e = 2
        let l1 = l_chi(1.0 + 1e-9, -23).unwrap().value;
        assert!((l1 - 3.0 * PI / 23f64.sqrt()).abs() < 1e-7);
        // L(0, χ_D) = 2h/e for imaginary D
        assert!((l_chi(0.0, -23).unwrap().value - 3.0).abs() < 1e-12);
        assert!((l_chi(0.0, -4).unwrap().value - 0.5).abs() < 1e-12);
        assert!(l_chi(2.0, -12).is_err());
    }

    #[test]
    fn precision_cap() {
        assert!(zeta_k_special(None, 2.0, 12).is_ok());
        assert!(zeta_k_special(None, 2.0, 30).is_err());
    }
}
