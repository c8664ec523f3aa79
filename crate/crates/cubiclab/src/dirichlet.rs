//! Truncated Dirichlet series `Σ_{n ≤ N} aₙ n^{−s}` with exact rational
//! coefficients.
//!
//! Every series carries its truncation length; binary operations work to the
//! smaller of the two lengths and the result says so.

use crate::int::primes_up_to;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirichletError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("series is not invertible: a₁ = 0")]
    NotInvertible,
    #[error("argument {x} is beyond the truncation length {n}")]
    BeyondTruncation { x: String, n: usize },
    #[error("abscissa must exceed 1, got {0}")]
    Abscissa(f64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCoeffs {
    /// `coeffs[i]` is `a_{i+1}`.
    coeffs: Vec<BigRational>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl DirichletCoeffs {
    pub fn from_fn(n: usize, f: impl Fn(u64) -> BigRational) -> Self {
        assert!(n >= 1, "truncation length must be positive");
        DirichletCoeffs { coeffs: (1..=n as u64).map(f).collect() }
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DirichletCoeffs::from_fn(v.len(), |n| q(v[n as usize - 1]))
    }

    /// `1`, the unit for multiplication.
    pub fn identity(n: usize) -> Self {
        DirichletCoeffs::from_fn(n, |k| if k == 1 { q(1) } else { q(0) })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `aₙ`; panics past the truncation length rather than guess.
    pub fn get(&self, n: u64) -> &BigRational {
        assert!(n >= 1 && n as usize <= self.len(), "index {n} outside 1..={}", self.len());
        &self.coeffs[n as usize - 1]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, n: usize) -> Self {
        assert!(n >= 1 && n <= self.len());
        DirichletCoeffs { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Integer coefficients, if all of them are integers.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| if c.is_integer() { Some(c.to_integer()) } else { None }).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.len().min(o.len());
        DirichletCoeffs::from_fn(n, |k| self.get(k) + o.get(k))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        DirichletCoeffs { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }
}

/// `ζ(s)`.
pub fn zeta_coeffs(n: usize) -> DirichletCoeffs {
    DirichletCoeffs::from_fn(n, |_| q(1))
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 1 || d == 0 {
        return false;
    }
    let sqfree = |m: i64| {
        let m = m.unsigned_abs();
        crate::int::is_squarefree_u64(m)
    };
    match d.rem_euclid(4) {
        1 => sqfree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && sqfree(m)
        }
        _ => false,
    }
}

/// Kronecker symbol `(d/n)` for `n ≥ 1`.
pub fn kronecker(d: i64, n: u64) -> i64 {
    let mut n = n;
    let mut result = 1i64;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        // (d/2) = 1 for d ≡ ±1 mod 8, −1 for d ≡ ±3 mod 8
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            result = -result;
        }
        n >>= tz;
    }
    // Jacobi symbol (d/n) for odd n
    let mut a = d.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a != 0 {
        let t = a.trailing_zeros();
        a >>= t;
        if t % 2 == 1 && matches!(m % 8, 3 | 5) {
            result = -result;
        }
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// `L(s, χ_D)` for a fundamental discriminant `D`.
pub fn l_chi_coeffs(d: i64, n: usize) -> Result<DirichletCoeffs, DirichletError> {
    if !is_fundamental(d) {
        return Err(DirichletError::NotFundamental(d));
    }
    Ok(DirichletCoeffs::from_fn(n, |k| q(kronecker(d, k))))
}

/// Dirichlet convolution up to the shorter length.
pub fn mul(a: &DirichletCoeffs, b: &DirichletCoeffs) -> DirichletCoeffs {
    let n = a.len().min(b.len());
    let coeffs: Vec<BigRational> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let mut acc = BigRational::zero();
            let mut d = 1;
            while d * d <= k {
                if k % d == 0 {
                    let e = k / d;
                    acc += a.get(d as u64) * b.get(e as u64);
                    if d != e {
                        acc += a.get(e as u64) * b.get(d as u64);
                    }
                }
                d += 1;
            }
            acc
        })
        .collect();
    DirichletCoeffs { coeffs }
}

/// Multiplicative inverse; needs `a₁ ≠ 0`.
pub fn inv(a: &DirichletCoeffs) -> Result<DirichletCoeffs, DirichletError> {
    let a1 = a.get(1).clone();
    if a1.is_zero() {
        return Err(DirichletError::NotInvertible);
    }
    let n = a.len();
    let inv1 = a1.recip();
    let mut b = vec![BigRational::zero(); n];
    b[0] = inv1.clone();
    // b_k = −(1/a₁) Σ_{d | k, d > 1} a_d b_{k/d}; scatter from each b_m
    let mut acc = vec![BigRational::zero(); n];
    for m in 1..=n {
        if m > 1 {
            b[m - 1] = -(&acc[m - 1]) * &inv1;
        }
        if b[m - 1].is_zero() {
            continue;
        }
        let mut d = 2;
        while d * m <= n {
            let ad = a.get(d as u64);
            if !ad.is_zero() {
                acc[d * m - 1] += ad * &b[m - 1];
            }
            d += 1;
        }
    }
    Ok(DirichletCoeffs { coeffs: b })
}

/// `F(ks)`: coefficient `a_m` moves to `m^k`.
pub fn stretch(a: &DirichletCoeffs, k: u32) -> DirichletCoeffs {
    assert!(k >= 1);
    let n = a.len();
    let mut coeffs = vec![BigRational::zero(); n];
    let mut m: u64 = 1;
    while let Some(p) = m.checked_pow(k) {
        if p as usize > n {
            break;
        }
        coeffs[p as usize - 1] = a.get(m).clone();
        m += 1;
    }
    DirichletCoeffs { coeffs }
}

/// `F(s − c)` for a non-negative integer shift: `aₙ ↦ nᶜ aₙ`.
pub fn shift(a: &DirichletCoeffs, c: u32) -> DirichletCoeffs {
    DirichletCoeffs::from_fn(a.len(), |n| a.get(n) * BigRational::from_integer(BigInt::from(n).pow(c)))
}

/// `ζ(6s − 1)`: coefficient `m` at `n = m⁶`.
pub fn zeta_6s_minus_1(n: usize) -> DirichletCoeffs {
    stretch(&shift(&zeta_coeffs(n), 1), 6)
}

/// `ζ(2s)³ζ(6s−1)/ζ(4s)²`, the orders of `ℚ³` graded by discriminant.
pub fn series_p_orders(n: usize) -> DirichletCoeffs {
    let z = zeta_coeffs(n);
    let z2 = stretch(&z, 2);
    let inv4 = inv(&stretch(&z, 4)).expect("a₁ = 1");
    let num = mul(&mul(&z2, &z2), &z2);
    mul(&mul(&num, &zeta_6s_minus_1(n)), &mul(&inv4, &inv4))
}

/// Dedekind zeta from local data: `degrees(p)` lists the residue degrees of
/// the primes above `p`, so the Euler factor is `Π (1 − p^{−fs})^{−1}`.
pub fn zeta_from_local(n: usize, degrees: impl Fn(u64) -> Vec<u32>) -> DirichletCoeffs {
    let mut out = DirichletCoeffs::identity(n);
    for p in primes_up_to(n) {
        for f in degrees(p) {
            let Some(pf) = p.checked_pow(f) else { continue };
            if pf as usize > n {
                continue;
            }
            // multiply by the geometric series in p^{f}
            let mut c = out.coeffs.clone();
            for k in 1..=n {
                if (k as u64).is_multiple_of(pf) {
                    let add = c[k / pf as usize - 1].clone();
                    c[k - 1] += add;
                }
            }
            out.coeffs = c;
        }
    }
    out
}

/// `ζ_k` for `k = ℚ` (`disc = None`) or the quadratic field of a
/// fundamental discriminant.
pub fn dedekind_zeta(disc: Option<i64>, n: usize) -> Result<DirichletCoeffs, DirichletError> {
    match disc {
        None => Ok(zeta_coeffs(n)),
        Some(d) => Ok(mul(&zeta_coeffs(n), &l_chi_coeffs(d, n)?)),
    }
}

/// `ζ(4s)ζ(6s−1)ζ_F(2s)/ζ_F(4s)` for a cubic field with Dedekind zeta
/// coefficients `zeta_f`.
pub fn series_q_factor(zeta_f: &DirichletCoeffs, n: usize) -> DirichletCoeffs {
    let n = n.min(zeta_f.len());
    let zf = zeta_f.truncate(n);
    let ratio = mul(&stretch(&zf, 2), &inv(&stretch(&zf, 4)).expect("a₁ = 1"));
    let z4 = stretch(&zeta_coeffs(n), 4);
    mul(&mul(&z4, &zeta_6s_minus_1(n)), &ratio)
}

/// `ζ(2s)³/ζ(4s)³`, the coefficientwise majorant of `ζ_F(2s)/ζ_F(4s)`.
pub fn squarefree_cube_majorant(n: usize) -> DirichletCoeffs {
    let z = zeta_coeffs(n);
    let r = mul(&stretch(&z, 2), &inv(&stretch(&z, 4)).expect("a₁ = 1"));
    mul(&mul(&r, &r), &r)
}

/// `Σ_{n < x} aₙ`.
pub fn summatory(a: &DirichletCoeffs, x: &BigRational) -> Result<BigRational, DirichletError> {
    let top = strict_floor(x);
    if top > a.len() as u64 {
        return Err(DirichletError::BeyondTruncation { x: x.to_string(), n: a.len() });
    }
    Ok((1..=top).map(|k| a.get(k)).fold(BigRational::zero(), |s, v| s + v))
}

/// Largest integer strictly below `x`, clamped at 0.
fn strict_floor(x: &BigRational) -> u64 {
    if !x.is_positive() {
        return 0;
    }
    let f = x.floor().to_integer();
    let f = if BigRational::from_integer(f.clone()) == *x { f - 1 } else { f };
    f.to_u64().unwrap_or(u64::MAX)
}

/// `Σ_{m < x} d_m B(x/m)`.
pub fn convolve_counts(
    b: impl Fn(&BigRational) -> BigRational,
    d: &DirichletCoeffs,
    x: &BigRational,
) -> Result<BigRational, DirichletError> {
    let top = strict_floor(x);
    if top > d.len() as u64 {
        return Err(DirichletError::BeyondTruncation { x: x.to_string(), n: d.len() });
    }
    let mut acc = BigRational::zero();
    for m in 1..=top {
        let dm = d.get(m);
        if !dm.is_zero() {
            acc += dm * b(&(x / q(m as i64)));
        }
    }
    Ok(acc)
}

/// Bound on `Σ_{m ≥ M} |d_m| m^{−s₀}` for the coefficients of `1/ζ_k(s)`.
///
/// Over ℚ `|d_m| ≤ 1` and the tail is at most `M^{−s} + M^{1−s}/(s−1)`.
/// Over a quadratic field `|d_m| ≤ τ(m)`; partial summation with
/// `Σ_{m ≤ t} τ(m) ≤ t(ln t + 1)` gives the second branch.
pub fn inv_zeta_tail_bound(quadratic: bool, s0: f64, m: u64) -> Result<f64, DirichletError> {
    if s0.is_nan() || s0 <= 1.0 {
        return Err(DirichletError::Abscissa(s0));
    }
    let mf = m.max(1) as f64;
    let e = s0 - 1.0;
    if !quadratic {
        Ok(mf.powf(-s0) + mf.powf(1.0 - s0) / e)
    } else {
        let l = mf.ln() + 1.0;
        Ok(s0 * (l * mf.powf(-s0) + mf.powf(1.0 - s0) * (l / e + 1.0 / (e * e))))
    }
}

/// `μ(n)` by trial division, for checks.
pub fn mobius(n: u64) -> i64 {
    let mut n = n;
    let mut r = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            r = -r;
        }
        p += 1;
    }
    if n > 1 {
        -r
    } else {
        r
    }
}

/// Number of divisors, for checks.
pub fn tau(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count() as u64
}

pub fn is_one_series(a: &DirichletCoeffs) -> bool {
    a.get(1).is_one() && a.coeffs[1..].iter().all(|c| c.is_zero())
}

/// `|a| ≤ |b|` coefficientwise.
pub fn dominated(a: &DirichletCoeffs, b: &DirichletCoeffs) -> bool {
    let n = a.len().min(b.len());
    (1..=n as u64).all(|k| a.get(k).abs() <= b.get(k).abs())
}
