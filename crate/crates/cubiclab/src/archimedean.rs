//! Gamma matrices that appear in the functional equations of the orbital
//! zeta functions, over ℝ and ℂ.

use crate::special::{gamma, SpecialError};
use num_complex::Complex64;
use std::f64::consts::PI;

pub type Mat2 = [[Complex64; 2]; 2];

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_scale(a: &Mat2, k: Complex64) -> Mat2 {
    [[a[0][0] * k, a[0][1] * k], [a[1][0] * k, a[1][1] * k]]
}

pub fn det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Largest entrywise distance.
pub fn mat_dist(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn pow(base: f64, e: Complex64) -> Complex64 {
    c(base).powc(e)
}

/// `Γ(s₁)² Γ(s₂) Γ(s₁ + s₂ − 1/2)`.
pub fn gamma_tilde(s1: Complex64, s2: Complex64) -> Result<Complex64, SpecialError> {
    Ok(gamma(s1)?.powu(2) * gamma(s2)? * gamma(s1 + s2 - 0.5)?)
}

fn d_real(s1: Complex64, s2: Complex64) -> Mat2 {
    let h1 = s1 * PI / 2.0;
    let h12 = (s1 + 2.0 * s2) * PI / 2.0;
    let sp = (s1 * PI).sin();
    let off = sp * h1.cos();
    [[2.0 * h1.cos().powu(2) * h12.sin(), off], [off, sp * h12.cos()]]
}

fn d_complex(s1: Complex64, s2: Complex64) -> Complex64 {
    -(s1 * PI).sin().powu(2) * (s2 * PI).sin() * ((s1 + s2) * PI).cos()
}

/// `2^{2s₂−s₁} π^{−(3s₁+2s₂−1/2)} Γ̃(s₁, s₂) D_ℝ(s₁, s₂)`.
pub fn gamma_matrix_real(s1: Complex64, s2: Complex64) -> Result<Mat2, SpecialError> {
    let pre = pow(2.0, 2.0 * s2 - s1) * pow(PI, -(3.0 * s1 + 2.0 * s2 - 0.5)) * gamma_tilde(s1, s2)?;
    Ok(mat_scale(&d_real(s1, s2), pre))
}

/// `2^{2(2s₂−s₁)} π^{−2(3s₁+2s₂−1/2)} Γ̃(s₁, s₂)² D_ℂ(s₁, s₂)`.
pub fn gamma_matrix_complex(s1: Complex64, s2: Complex64) -> Result<Complex64, SpecialError> {
    let pre =
        pow(2.0, 2.0 * (2.0 * s2 - s1)) * pow(PI, -2.0 * (3.0 * s1 + 2.0 * s2 - 0.5)) * gamma_tilde(s1, s2)?.powu(2);
    Ok(pre * d_complex(s1, s2))
}

/// The two factors of each full matrix: the first acts on the quadratic
/// form alone, the second on the marked vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixMatrices {
    pub real_first: Mat2,
    pub real_second: Mat2,
    pub complex_first: Complex64,
    pub complex_second: Complex64,
}

/// Factor matrices at `(s₁, s₂)`. The second factor depends only on `s₁`.
pub fn appendix_matrices(s1: Complex64, s2: Complex64) -> Result<AppendixMatrices, SpecialError> {
    let w = s1 + 2.0 * s2;
    let g2 = gamma(s2)?;
    let g12 = gamma(s1 + s2 - 0.5)?;
    let g1 = gamma(s1)?;
    let pre1 = pow(2.0, w - 1.0) * pow(PI, -(w - 0.5)) * g2 * g12;
    let m1 = [[(w * PI / 2.0).sin(), (s1 * PI / 2.0).cos()], [(s1 * PI / 2.0).sin(), (w * PI / 2.0).cos()]];
    let cf = pow(2.0, 2.0 * s1 + 4.0 * s2 - 2.0)
        * pow(PI, -(2.0 * s1 + 4.0 * s2 - 1.0))
        * g2.powu(2)
        * g12.powu(2)
        * (s2 * PI).sin()
        * ((s1 + s2) * PI).cos();
    Ok(AppendixMatrices {
        real_first: mat_scale(&m1, pre1),
        real_second: real_second(g1, s1),
        complex_first: cf,
        complex_second: complex_second(g1, s1),
    })
}

fn real_second(g1: Complex64, s1: Complex64) -> Mat2 {
    let pre = 2.0 * pow(2.0 * PI, -2.0 * s1) * g1.powu(2);
    let zero = c(0.0);
    mat_scale(&[[2.0 * (s1 * PI / 2.0).cos().powu(2), zero], [zero, (s1 * PI).sin()]], pre)
}

fn complex_second(g1: Complex64, s1: Complex64) -> Complex64 {
    4.0 * pow(2.0 * PI, -4.0 * s1) * g1.powu(4) * (s1 * PI).sin().powu(2)
}

/// First factor at `(s₁, s₂)` times second factor at `(s₁, 3/2 − s₁ − s₂)`.
/// Since the second factor only sees `s₁`, this is `first · second` at the
/// same point.
pub fn appendix_composite(s1: Complex64, s2: Complex64) -> Result<(Mat2, Complex64), SpecialError> {
    let a = appendix_matrices(s1, s2)?;
    Ok((mat_mul(&a.real_first, &a.real_second), a.complex_first * a.complex_second))
}

/// `½ [[sin 2πs, 3 sin πs], [sin πs, sin 2πs]]`, the real gamma matrix of
/// the space of binary cubic forms.
pub fn gamma_cubic_real(s: f64) -> [[f64; 2]; 2] {
    let a = (2.0 * PI * s).sin() / 2.0;
    let b = (PI * s).sin() / 2.0;
    [[a, 3.0 * b], [b, a]]
}

/// `sin²(πs) sin(πs − π/6) sin(πs + π/6)`.
pub fn gamma_cubic_complex(s: f64) -> f64 {
    (PI * s).sin().powi(2) * (PI * s - PI / 6.0).sin() * (PI * s + PI / 6.0).sin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_tilde_at_one() {
        let g = gamma_tilde(c(1.0), c(1.0)).unwrap();
        assert!((g - c(PI.sqrt() / 2.0)).norm() < 1e-14);
        assert!(gamma_tilde(c(0.0), c(1.0)).is_err());
    }

    #[test]
    fn cubic_matrices() {
        let m = gamma_cubic_real(0.5);
        assert!(m[0][0].abs() < 1e-15 && (m[0][1] - 1.5).abs() < 1e-15 && (m[1][0] - 0.5).abs() < 1e-15);
        assert!((gamma_cubic_complex(0.5) - 0.75).abs() < 1e-15);
        for s in [0.1, 0.37, 0.8] {
            let m = gamma_cubic_real(s);
            let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            let want = ((2.0 * PI * s).sin().powi(2) - 3.0 * (PI * s).sin().powi(2)) / 4.0;
            assert!((d - want).abs() < 1e-15);
        }
    }

    #[test]
    fn appendix_composes() {
        for (a, b) in [(1.3, 0.7), (0.6, 1.9), (2.2, 1.1)] {
            let (s1, s2) = (c(a), c(b));
            let (r, z) = appendix_composite(s1, s2).unwrap();
            let full = gamma_matrix_real(s1, s2).unwrap();
            assert!(mat_dist(&r, &full) < 1e-12 * (1.0 + full[0][0].norm()));
            let fc = gamma_matrix_complex(s1, s2).unwrap();
            assert!((z + fc).norm() < 1e-12 * (1.0 + fc.norm()));
        }
    }
}
