//! The density constants `𝔄_k`, `𝔅_k` and the predicted counts built from
//! them.

use crate::fields::FieldInvariants;
use crate::special::{gamma, gamma_real, zeta, zeta_k, SpecialError};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("signature index {r} outside 0..={r1}")]
    Signature { r: u32, r1: u32 },
    #[error("3-torsion of the class group of {0} is not known")]
    UnknownH3(String),
}

/// `𝔠_k ζ_k(2) / (2^{r₁+r₂+1} √Δ)`.
pub fn const_a(k: &FieldInvariants) -> Result<f64, ConstantsError> {
    let z2 = zeta_k(k.disc, 2.0)?.value;
    Ok(k.c_k() * z2 / (2f64.powi((k.r1 + k.r2 + 1) as i32) * (k.disc_abs as f64).sqrt()))
}

/// Two printed normalizations of `𝔅_k`. They differ by `(2π)^{2n}`; only
/// the first reproduces `r/10` over ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BNormalization {
    /// `Res ζ_k · 3^{r₁+r₂/2} ζ_k(1/3) / (5·2^{r₁+r₂} √Δ) · (Γ(1/3)³/2π)^n`.
    Residue,
    /// `3^{r₁+r₂/2} 𝔠_k ζ_k(1/3) / (5·2^{r₁+r₂} Δ) · (Γ(1/3)/2π)^{3n}`.
    Cubed,
}

pub fn const_b(k: &FieldInvariants) -> Result<f64, ConstantsError> {
    const_b_with(k, BNormalization::Residue)
}

pub fn const_b_with(k: &FieldInvariants, norm: BNormalization) -> Result<f64, ConstantsError> {
    let z = zeta_k(k.disc, 1.0 / 3.0)?.value;
    let g = gamma_real(1.0 / 3.0)?;
    let n = k.degree as i32;
    let three = 3f64.powf(k.r1 as f64 + k.r2 as f64 / 2.0);
    let two = 2f64.powi((k.r1 + k.r2) as i32);
    let delta = k.disc_abs as f64;
    Ok(match norm {
        BNormalization::Residue => {
            k.residue() * three * z / (5.0 * two * delta.sqrt()) * (g.powi(3) / (2.0 * PI)).powi(n)
        }
        BNormalization::Cubed => three * k.c_k() * z / (5.0 * two * delta) * (g / (2.0 * PI)).powi(3 * n),
    })
}

/// `(2π)^{1/3} ζ(2/3) Γ(1/3) / Γ(2/3)`.
pub fn r_shintani() -> Result<f64, ConstantsError> {
    Ok((2.0 * PI).powf(1.0 / 3.0) * zeta(2.0 / 3.0)?.value * gamma_real(1.0 / 3.0)? / gamma_real(2.0 / 3.0)?)
}

/// Which rings are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountScope {
    /// All cubic rings with one Steinitz class, given whether that class is
    /// a cube in the class group.
    SteinitzClass { cube: bool },
    /// All cubic rings, summed over Steinitz classes.
    AllRings,
    /// Orders in cubic fields with a fixed archimedean type.
    FieldOnly,
    /// Orders in cubic fields with `r₁ + 2i` real places, any arrangement.
    FieldAggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub main_coeff: f64,
    pub secondary_coeff: f64,
    /// Exponents of the two terms, always `1` and `5/6`.
    pub exponents: (f64, f64),
    /// Error exponent as `(numerator, denominator)`, up to `+ε`.
    pub error_exponent: (u32, u32),
}

impl Prediction {
    pub fn main(&self, x: f64) -> f64 {
        self.main_coeff * x
    }
    pub fn secondary(&self, x: f64) -> f64 {
        self.secondary_coeff * x.powf(5.0 / 6.0)
    }
    pub fn total(&self, x: f64) -> f64 {
        self.main(x) + self.secondary(x)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Main and secondary coefficients for counts graded by `N(Δ) < X`. `r` is
/// the number of real places of `k` above which the cubic algebra splits
/// completely.
pub fn predict_counts(k: &FieldInvariants, r: u32, scope: CountScope) -> Result<Prediction, ConstantsError> {
    if r > k.r1 {
        return Err(ConstantsError::Signature { r, r1: k.r1 });
    }
    let a = const_a(k)?;
    let b = const_b(k)?;
    let n = k.degree;
    let r2 = k.r2 as i32;
    let ri = r as i32;
    let all_err = (4 * n - 1, 4 * n + 1);
    let field_err = (5 * n - 1, 5 * n + 1);
    let sec_scale = 3f64.powf(-(r as f64) / 2.0);
    let (main, sec, err) = match scope {
        CountScope::SteinitzClass { cube } => {
            let h3 = k.h3.ok_or_else(|| ConstantsError::UnknownH3(k.name()))?;
            let h = k.h as f64;
            let tau = if cube { 1.0 } else { 0.0 };
            ((1.0 + 3f64.powi(-ri - r2)) * a / h, tau * b * h3 as f64 * sec_scale / h, all_err)
        }
        CountScope::AllRings => ((1.0 + 3f64.powi(-ri - r2)) * a, b * sec_scale, all_err),
        CountScope::FieldOnly => (3f64.powi(-ri - r2) * a, b * sec_scale, field_err),
        CountScope::FieldAggregate => {
            let c = binomial(k.r1, r);
            (c * 3f64.powi(-ri - r2) * a, c * b * sec_scale, field_err)
        }
    };
    Ok(Prediction { main_coeff: main, secondary_coeff: sec, exponents: (1.0, 5.0 / 6.0), error_exponent: err })
}

/// `3^{n(6s−2)} π^{−4ns} Γ(s)^{2n} Γ(s−1/6)^n Γ(s+1/6)^n`.
pub fn dw_theta_prefactor(s: Complex64, n: u32) -> Result<Complex64, ConstantsError> {
    let nf = n as f64;
    let g = gamma(s)?.powf(2.0 * nf) * gamma(s - 1.0 / 6.0)?.powf(nf) * gamma(s + 1.0 / 6.0)?.powf(nf);
    let three = Complex64::new(3.0, 0.0).powc((s * 6.0 - 2.0) * nf);
    let pi = Complex64::new(PI, 0.0).powc(-s * 4.0 * nf);
    Ok(three * pi * g)
}

/// Residues at `s = 1` and `s = 5/6` of the cubic-form Dirichlet series of
/// type `r`, for the trivial class group character.
pub fn dw_theta_residues(k: &FieldInvariants, r: u32) -> Result<(f64, f64), ConstantsError> {
    let a = const_a(k)?;
    let b = const_b(k)?;
    Ok((a * (1.0 + 3f64.powi(-(r as i32) - k.r2 as i32)), 5.0 / 6.0 * b * 3f64.powf(-(r as f64) / 2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{invariants_q, invariants_quadratic};

    #[test]
    fn rational_constants() {
        let q = invariants_q();
        assert!((const_a(&q).unwrap() - PI * PI / 24.0).abs() < 1e-14);
        let r = r_shintani().unwrap();
        assert!((r + 8.9352).abs() < 1e-3, "{r}");
        let b = const_b(&q).unwrap();
        assert!((b - r / 10.0).abs() < 1e-12);
        let body = const_b_with(&q, BNormalization::Cubed).unwrap();
        assert!((b / body - (2.0 * PI).powi(2)).abs() < 1e-10);
        assert!(b < 0.0);
    }

    #[test]
    fn predictions_over_q() {
        let q = invariants_q();
        let a = PI * PI / 24.0;
        let r = r_shintani().unwrap();
        let all1 = predict_counts(&q, 1, CountScope::AllRings).unwrap();
        assert!((all1.main_coeff - PI * PI / 18.0).abs() < 1e-14);
        let f1 = predict_counts(&q, 1, CountScope::FieldOnly).unwrap();
        assert!((f1.main_coeff - PI * PI / 72.0).abs() < 1e-14);
        assert!((f1.secondary_coeff - 3f64.sqrt() * r / 30.0).abs() < 1e-12);
        let f0 = predict_counts(&q, 0, CountScope::FieldOnly).unwrap();
        assert!((f0.main_coeff - a).abs() < 1e-14);
        assert!((f0.secondary_coeff - r / 10.0).abs() < 1e-12);
        assert_eq!(f0.error_exponent, (4, 6));
        for rj in 0..=1 {
            let all = predict_counts(&q, rj, CountScope::AllRings).unwrap();
            let field = predict_counts(&q, rj, CountScope::FieldOnly).unwrap();
            assert!((all.main_coeff - field.main_coeff - a).abs() < 1e-14);
            assert_eq!(all.secondary_coeff, field.secondary_coeff);
        }
        assert!(predict_counts(&q, 2, CountScope::AllRings).is_err());
    }

    #[test]
    fn steinitz_classes_sum_to_total() {
        let k = invariants_quadratic(-23).unwrap();
        let h = k.h as f64;
        let h3 = k.h3.unwrap() as f64;
        let total = predict_counts(&k, 0, CountScope::AllRings).unwrap();
        let cube = predict_counts(&k, 0, CountScope::SteinitzClass { cube: true }).unwrap();
        let other = predict_counts(&k, 0, CountScope::SteinitzClass { cube: false }).unwrap();
        // h/h₃ classes are cubes
        let cubes = h / h3;
        assert!((cube.main_coeff * h - total.main_coeff).abs() < 1e-14);
        assert!(
            (cube.secondary_coeff * cubes + other.secondary_coeff * (h - cubes) - total.secondary_coeff).abs() < 1e-12
        );
        assert_eq!(total.error_exponent, (7, 9));
        assert_eq!(predict_counts(&k, 0, CountScope::FieldOnly).unwrap().error_exponent, (9, 11));
        let (res1, _) = dw_theta_residues(&k, 0).unwrap();
        assert!((res1 - total.main_coeff).abs() < 1e-14);
    }

    #[test]
    fn aggregate_over_real_quadratic() {
        let k = invariants_quadratic(5).unwrap();
        let one = predict_counts(&k, 1, CountScope::FieldOnly).unwrap();
        let agg = predict_counts(&k, 1, CountScope::FieldAggregate).unwrap();
        assert!((agg.main_coeff - 2.0 * one.main_coeff).abs() < 1e-14);
        // 𝔠_k/√Δ is the residue of ζ_k at 1
        let near = zeta_k(Some(5), 1.0 + 1e-7).unwrap().value * 1e-7;
        assert!((near - k.residue()).abs() < 1e-6);
    }

    #[test]
    fn prefactor_and_residues() {
        let p = dw_theta_prefactor(Complex64::new(0.5, 0.0), 1).unwrap();
        assert!((p.re - 2.0 * 3f64.sqrt()).abs() < 1e-13 && p.im.abs() < 1e-13);
        let q = invariants_q();
        let (r1, r56) = dw_theta_residues(&q, 1).unwrap();
        assert!((r1 - PI * PI / 18.0).abs() < 1e-14);
        let (_, r56_0) = dw_theta_residues(&q, 0).unwrap();
        assert!((r56_0 - 5.0 / 6.0 * const_b(&q).unwrap()).abs() < 1e-14);
        assert!((r56 - r56_0 / 3f64.sqrt()).abs() < 1e-14);
        assert!(dw_theta_prefactor(Complex64::new(1.0 / 6.0 - 1.0, 0.0), 1).is_err());
    }
}
