//! Local zeta functions of binary quadratic forms with a marked vector at a
//! finite prime, as exact rational functions of `T₁ = q^{−s₁}`,
//! `T₂ = q^{−s₂}`.
//!
//! Besides the closed forms this module has an independent check: the
//! measures of the strata `{ord R₁ = i, ord R₂ = j}` of one orbit inside
//! `U(ℤ_p)`, obtained by counting residues.

use crate::dirichlet::{is_fundamental, kronecker};
use crate::int::is_prime_u64;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalZetaError {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("need Re s₁ > 1 and Re s₂ > 1, got s₁ = {0}, s₂ = {1}")]
    Region(String, String),
    #[error("residue counts did not stabilize between 1/{0} and 1/{1}")]
    Unstable(u64, u64),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Polynomial in `T₁, T₂` with exact coefficients, keyed by exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<(u32, u32), BigRational>);

impl Poly {
    pub fn one() -> Self {
        Poly::monomial(rat(1), 0, 0)
    }

    pub fn monomial(c: BigRational, e1: u32, e2: u32) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((e1, e2), c);
        }
        Poly(m)
    }

    pub fn coeff(&self, e1: u32, e2: u32) -> BigRational {
        self.0.get(&(e1, e2)).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, e: (u32, u32), c: BigRational) {
        let v = self.0.entry(e).or_insert_with(BigRational::zero);
        *v += c;
        if v.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::default();
        for (&(a1, a2), x) in &self.0 {
            for (&(b1, b2), y) in &o.0 {
                out.add_term((a1 + b1, a2 + b2), x * y);
            }
        }
        out
    }

    /// Terms of total degree at most `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly(self.0.iter().filter(|(e, _)| e.0 + e.1 <= d).map(|(e, c)| (*e, c.clone())).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.keys().map(|e| e.0 + e.1).max().unwrap_or(0)
    }

    pub fn eval(&self, t1: Complex64, t2: Complex64) -> Complex64 {
        self.0.iter().map(|(&(a, b), c)| c.to_f64().unwrap() * t1.powu(a) * t2.powu(b)).sum()
    }

    pub fn only_even_t2(&self) -> bool {
        self.0.keys().all(|e| e.1 % 2 == 0)
    }

    /// Exact quotient by `1 − c·T₁^{e₁}T₂^{e₂}`, if it divides.
    fn div_factor(&self, f: &Factor) -> Option<Poly> {
        if self.0.is_empty() {
            return Some(Poly::default());
        }
        // Q = N + m·Q, solved in increasing order of the T₁ exponent, then T₂
        let deg = self.total_degree();
        let step = f.e1 + f.e2;
        let mut q = Poly::default();
        let mut keys: Vec<(u32, u32)> = Vec::new();
        for a in 0..=deg {
            for b in 0..=deg - a {
                keys.push((a, b));
            }
        }
        keys.sort_by_key(|&(a, b)| (a + b, a));
        let c = BigRational::from_integer(f.c.clone());
        for (a, b) in keys {
            let mut v = self.coeff(a, b);
            if a >= f.e1 && b >= f.e2 && step > 0 {
                v += &c * q.coeff(a - f.e1, b - f.e2);
            }
            if !v.is_zero() {
                q.0.insert((a, b), v);
            }
        }
        if q.0.keys().any(|&(a, b)| a + b + step > deg) {
            return None;
        }
        (f.poly().mul(&q) == *self).then_some(q)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut terms: Vec<_> = self.0.iter().collect();
        terms.sort_by_key(|(e, _)| (e.0 + e.1, e.0));
        for (&(a, b), c) in terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = monomial_text(a, b);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_text(a: u32, b: u32) -> String {
    let var = |name: &str, e: u32| match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    };
    let parts: Vec<String> = [var("T1", a), var("T2", b)].into_iter().filter(|s| !s.is_empty()).collect();
    parts.join("*")
}

/// `1 − c·T₁^{e₁}T₂^{e₂}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub c: BigInt,
    pub e1: u32,
    pub e2: u32,
}

impl Factor {
    pub fn new(c: u64, e1: u32, e2: u32) -> Self {
        Factor { c: BigInt::from(c), e1, e2 }
    }

    pub fn poly(&self) -> Poly {
        let mut p = Poly::one();
        p.add_term((self.e1, self.e2), -BigRational::from_integer(self.c.clone()));
        p
    }

    /// Power series of `1/(1 − m)` to total degree `d`.
    fn inverse_series(&self, d: u32) -> Poly {
        let mut out = Poly::default();
        let step = self.e1 + self.e2;
        let mut k = 0u32;
        let mut c = BigInt::one();
        while k * step <= d {
            out.add_term((k * self.e1, k * self.e2), BigRational::from_integer(c.clone()));
            c *= &self.c;
            k += 1;
            if step == 0 {
                break;
            }
        }
        out
    }

    pub fn eval(&self, t1: Complex64, t2: Complex64) -> Complex64 {
        1.0 - self.c.to_f64().unwrap() * t1.powu(self.e1) * t2.powu(self.e2)
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = monomial_text(self.e1, self.e2);
        if self.c.is_one() {
            write!(f, "(1 - {m})")
        } else {
            write!(f, "(1 - {}*{m})", self.c)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SplitType {
    Sp,
    Ur,
    Rm,
}

impl SplitType {
    pub fn label(&self) -> &'static str {
        match self {
            SplitType::Sp => "sp",
            SplitType::Ur => "ur",
            SplitType::Rm => "rm",
        }
    }
}

impl std::str::FromStr for SplitType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sp" => Ok(SplitType::Sp),
            "ur" => Ok(SplitType::Ur),
            "rm" => Ok(SplitType::Rm),
            _ => Err(format!("unknown splitting type '{s}' (expected sp, ur or rm)")),
        }
    }
}

/// `numerator / Π factorᵏ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalZetaFn {
    pub q: u64,
    pub numerator: Poly,
    pub denominator: BTreeMap<Factor, u32>,
}

impl LocalZetaFn {
    /// The factors a local zeta function may have in its denominator.
    pub fn allowed_factors(q: u64) -> [Factor; 5] {
        [Factor::new(1, 0, 2), Factor::new(q, 2, 2), Factor::new(1, 1, 2), Factor::new(1, 1, 0), Factor::new(1, 2, 0)]
    }

    /// Divide out every denominator factor that divides the numerator.
    pub fn cancel(mut self) -> Self {
        loop {
            let mut changed = false;
            let keys: Vec<Factor> = self.denominator.keys().cloned().collect();
            for f in keys {
                if let Some(q) = self.numerator.div_factor(&f) {
                    self.numerator = q;
                    let k = self.denominator.get_mut(&f).unwrap();
                    *k -= 1;
                    if *k == 0 {
                        self.denominator.remove(&f);
                    }
                    changed = true;
                }
            }
            if !changed {
                return self;
            }
        }
    }

    pub fn denominator_poly(&self) -> Poly {
        let mut p = Poly::one();
        for (f, &k) in &self.denominator {
            for _ in 0..k {
                p = p.mul(&f.poly());
            }
        }
        p
    }

    /// Same rational function: `N₁·D₂ = N₂·D₁`.
    pub fn same_function(&self, o: &LocalZetaFn) -> bool {
        self.numerator.mul(&o.denominator_poly()) == o.numerator.mul(&self.denominator_poly())
    }

    pub fn denominator_in_fixed_set(&self) -> bool {
        let allowed = LocalZetaFn::allowed_factors(self.q);
        self.denominator.keys().all(|f| allowed.contains(f))
    }

    /// Taylor coefficients up to total degree `d`.
    pub fn series(&self, d: u32) -> Poly {
        let mut p = self.numerator.truncate(d);
        for (f, &k) in &self.denominator {
            let inv = f.inverse_series(d);
            for _ in 0..k {
                p = p.mul(&inv).truncate(d);
            }
        }
        p
    }

    pub fn eval(&self, t1: Complex64, t2: Complex64) -> Complex64 {
        let mut v = self.numerator.eval(t1, t2);
        for (f, &k) in &self.denominator {
            v /= f.eval(t1, t2).powu(k);
        }
        v
    }

    /// Value at `T₁ = q^{−s₁}`, `T₂ = q^{−s₂}`.
    pub fn eval_s(&self, s1: Complex64, s2: Complex64) -> Complex64 {
        let q = Complex64::new(self.q as f64, 0.0);
        self.eval(q.powc(-s1), q.powc(-s2))
    }
}

impl fmt::Display for LocalZetaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.to_string();
        let num = if self.numerator.0.len() > 1 { format!("({num})") } else { num };
        let mut parts = Vec::new();
        for (fac, &k) in &self.denominator {
            if k == 1 {
                parts.push(fac.to_string());
            } else {
                parts.push(format!("{fac}^{k}"));
            }
        }
        match parts.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / {}", parts[0]),
            _ => write!(f, "{num} / ({})", parts.join(" * ")),
        }
    }
}

/// The uncancelled quotient for the standard representative of type `t`,
/// then reduced.
pub fn explicit_local_zeta(q: u64, t: SplitType) -> LocalZetaFn {
    explicit_local_zeta_raw(q, t).cancel()
}

pub fn explicit_local_zeta_raw(q: u64, t: SplitType) -> LocalZetaFn {
    assert!(q >= 2);
    let a = Factor::new(1, 1, 2);
    let mut den = BTreeMap::new();
    den.insert(Factor::new(1, 0, 2), 1);
    den.insert(Factor::new(q, 2, 2), 1);
    den.insert(a.clone(), 1);
    let numerator = match t {
        SplitType::Sp => {
            *den.entry(Factor::new(1, 1, 0)).or_insert(0) += 2;
            a.poly().mul(&a.poly())
        }
        SplitType::Ur => {
            *den.entry(Factor::new(1, 2, 0)).or_insert(0) += 1;
            Factor::new(1, 2, 4).poly()
        }
        SplitType::Rm => {
            *den.entry(Factor::new(1, 1, 0)).or_insert(0) += 1;
            a.poly()
        }
    };
    LocalZetaFn { q, numerator, denominator: den }
}

/// `(1 − T²)/((1 − T)(1 − qT²))` reduced, as a function of `T₁` alone.
pub fn lambda_local(q: u64) -> LocalZetaFn {
    let mut den = BTreeMap::new();
    den.insert(Factor::new(1, 1, 0), 1);
    den.insert(Factor::new(q, 2, 0), 1);
    LocalZetaFn { q, numerator: Factor::new(1, 2, 0).poly(), denominator: den }.cancel()
}

pub fn splitting_type(p: u64, d: i64) -> Result<SplitType, LocalZetaError> {
    if !is_fundamental(d) {
        return Err(LocalZetaError::NotFundamental(d));
    }
    if !is_prime_u64(p) {
        return Err(LocalZetaError::NotPrime(p));
    }
    Ok(match kronecker(d, p) {
        1 => SplitType::Sp,
        -1 => SplitType::Ur,
        _ => SplitType::Rm,
    })
}

/// The square class of `D` in `ℚ_p^×`: valuation parity and unit residue
/// (Legendre symbol for odd `p`, residue mod 8 for `p = 2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct SquareClass {
    parity: u32,
    unit: i64,
}

fn legendre(u: i64, p: u64) -> i64 {
    kronecker(u.rem_euclid(p as i64), p)
}

fn square_class(v: i64, p: u64) -> SquareClass {
    let pi = p as i64;
    let mut v = v;
    let mut e = 0;
    while v % pi == 0 {
        v /= pi;
        e += 1;
    }
    let unit = if p == 2 { v.rem_euclid(8) } else { legendre(v, p) };
    SquareClass { parity: e % 2, unit }
}

/// Valuation of `D` at `p`.
pub fn disc_valuation(d: i64, p: u64) -> u32 {
    crate::int::valuation(d, p as i64)
}

/// `P(ord(y₂² − 4p^e z) = j, class = class(D))` for `y₂, z` uniform in
/// `ℤ_p`, as an exact fraction, counted modulo `p^n`.
fn g_table(p: u64, e: u32, target: SquareClass, jmax: u32, n: u32) -> Vec<BigRational> {
    let big_e = if p == 2 { e + 2 } else { e };
    let m = big_e.min(n);
    let pm = p.pow(m);
    let pn = p.pow(n);
    // square counts modulo p^m
    let mut sq = vec![0u64; pm as usize];
    for y in 0..pm {
        sq[((y as u128 * y as u128) % pm as u128) as usize] += 1;
    }
    let mut counts = vec![0u64; jmax as usize + 1];
    let lifts = pn / pm;
    for (t, &c) in sq.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for k in 0..lifts {
            let r = t as u64 + pm * k;
            if r == 0 {
                continue;
            }
            let mut j = 0;
            let mut u = r;
            while u.is_multiple_of(p) {
                u /= p;
                j += 1;
            }
            if j > jmax {
                continue;
            }
            let unit = if p == 2 { (u % 8) as i64 } else { legendre(u as i64, p) };
            if j % 2 == target.parity && unit == target.unit {
                counts[j as usize] += c;
            }
        }
    }
    counts.into_iter().map(|c| BigRational::new(BigInt::from(c), BigInt::from(pn))).collect()
}

fn precision_for(p: u64, jmax: u32) -> u32 {
    if p == 2 {
        jmax + 3
    } else {
        jmax + 1
    }
}

/// Exact measures `μ(i, j)` of `{ỹ ∈ U(ℤ_p) : ord R₁ = i, ord R₂ = j,
/// ℚ_p(√R₂) ≅ ℚ_p(√D)}` for `i ≤ imax`, `j ≤ jmax`, with Haar measure of
/// total mass one on `U(ℤ_p)`.
///
/// After moving the vector `ȳ = p^m·(primitive)` to `p^m(1, 0)` with
/// `GL₂(ℤ_p)`, `R₁ = p^{2m}y₁`, and the law of `R₂ = y₂² − 4y₁y₃` only
/// depends on `ord y₁`. Residue counts are repeated at one extra digit of
/// precision and must agree.
pub fn measure_oracle_grid(
    p: u64,
    d: i64,
    imax: u32,
    jmax: u32,
) -> Result<BTreeMap<(u32, u32), BigRational>, LocalZetaError> {
    if !is_fundamental(d) {
        return Err(LocalZetaError::NotFundamental(d));
    }
    if !is_prime_u64(p) {
        return Err(LocalZetaError::NotPrime(p));
    }
    let target = square_class(d, p);
    let n = precision_for(p, jmax);
    let mut g: Vec<Vec<BigRational>> = Vec::new();
    for e in 0..=imax {
        let a = g_table(p, e, target, jmax, n);
        let b = g_table(p, e, target, jmax, n + 1);
        if a != b {
            return Err(LocalZetaError::Unstable(p.pow(n), p.pow(n + 1)));
        }
        g.push(a);
    }
    let pr = |num: i64, exp: u32| BigRational::new(BigInt::from(num), BigInt::from(p).pow(exp));
    let one = rat(1);
    let mut out = BTreeMap::new();
    for i in 0..=imax {
        for j in 0..=jmax {
            let mut acc = BigRational::zero();
            for m in 0..=i / 2 {
                let e = i - 2 * m;
                let vec_part = pr(1, 2 * m) * (&one - pr(1, 2));
                let y1_part = pr(1, e) * (&one - pr(1, 1));
                acc += vec_part * y1_part * &g[e as usize][j as usize];
            }
            out.insert((i, j), acc);
        }
    }
    Ok(out)
}

/// The strata with `i + j ≤ max_stratum`.
pub fn measure_oracle(p: u64, d: i64, max_stratum: u32) -> Result<BTreeMap<(u32, u32), BigRational>, LocalZetaError> {
    let grid = measure_oracle_grid(p, d, max_stratum, max_stratum)?;
    Ok(grid.into_iter().filter(|(k, _)| k.0 + k.1 <= max_stratum).collect())
}

/// Oracle strata rewritten as normalized Taylor coefficients of the local
/// zeta function of the standard representative: coefficient of
/// `T₁ⁱT₂ʲ` is `μ(i, j + δ)·qⁱ⁺ʲ / μ(0, δ)` with `δ = ord_p D`.
pub fn oracle_series(p: u64, d: i64, degree: u32) -> Result<Poly, LocalZetaError> {
    let delta = disc_valuation(d, p);
    let grid = measure_oracle_grid(p, d, degree, degree + delta)?;
    let base = grid[&(0, delta)].clone();
    let mut out = Poly::default();
    for i in 0..=degree {
        for j in 0..=degree - i {
            let mu = &grid[&(i, j + delta)];
            let v = mu * BigRational::from_integer(BigInt::from(p).pow(i + j)) / &base;
            out.add_term((i, j), v);
        }
    }
    Ok(out)
}

/// Closed-form Taylor coefficients normalized by the constant term.
pub fn formula_series(p: u64, t: SplitType, degree: u32) -> Poly {
    let s = explicit_local_zeta(p, t).series(degree);
    let c0 = s.coeff(0, 0);
    Poly(s.0.into_iter().map(|(k, v)| (k, v / &c0)).collect())
}

/// Result of [`orbital_euler_truncated`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    /// `Π_{p ≤ P} 𝔛_p(s₁, s₂)` from the local closed forms.
    pub by_factors: Complex64,
    /// The same truncation of `ζ(2s₂)ζ(2s₁+2s₂−1)ζ(s₁+2s₂)ζ_F(s₁)/ζ_F(s₁+2s₂)`.
    pub closed_form: Complex64,
    /// Bound on `|Π_{p > P}(local factor) − 1|`.
    pub tail_bound: f64,
}

fn local_closed_form(p: u64, t: SplitType, s1: Complex64, s2: Complex64) -> Complex64 {
    let q = Complex64::new(p as f64, 0.0);
    let inv = |s: Complex64| 1.0 / (1.0 - q.powc(-s));
    let zf = |s: Complex64| match t {
        SplitType::Sp => inv(s) * inv(s),
        SplitType::Ur => inv(2.0 * s),
        SplitType::Rm => inv(s),
    };
    inv(2.0 * s2) * inv(2.0 * s1 + 2.0 * s2 - 1.0) * inv(s1 + 2.0 * s2) * zf(s1) / zf(s1 + 2.0 * s2)
}

/// Virtual count and real part of the exponent for each `(1 − p^{−s})^{±1}`
/// making up the local factor.
fn factor_exponents(s1: Complex64, s2: Complex64) -> [(f64, f64); 5] {
    [
        (1.0, 2.0 * s2.re),
        (1.0, 2.0 * s1.re + 2.0 * s2.re - 1.0),
        (1.0, s1.re + 2.0 * s2.re),
        (2.0, s1.re),
        (2.0, s1.re + 2.0 * s2.re),
    ]
}

pub fn orbital_euler_truncated(
    d: i64,
    s1: Complex64,
    s2: Complex64,
    p_max: u64,
) -> Result<EulerProduct, LocalZetaError> {
    if !is_fundamental(d) && d != 1 {
        return Err(LocalZetaError::NotFundamental(d));
    }
    if !(s1.re > 1.0 && s2.re > 1.0) {
        return Err(LocalZetaError::Region(s1.to_string(), s2.to_string()));
    }
    let mut a = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, 0.0);
    for p in crate::int::primes_up_to(p_max as usize) {
        let t = if d == 1 { SplitType::Sp } else { splitting_type(p, d)? };
        a *= explicit_local_zeta(p, t).eval_s(s1, s2);
        b *= local_closed_form(p, t, s1, s2);
    }
    // |log(1 − x)^{±1}| ≤ |x|/(1 − |x|) and Σ_{n > P} n^{−σ} ≤ P^{1−σ}/(σ − 1)
    let pm = p_max.max(1) as f64;
    let bsum: f64 = factor_exponents(s1, s2)
        .iter()
        .map(|&(c, sigma)| c * pm.powf(1.0 - sigma) / (sigma - 1.0) / (1.0 - pm.powf(-sigma)))
        .sum();
    Ok(EulerProduct { by_factors: a, closed_form: b, tail_bound: bsum.exp() - 1.0 })
}

/// The untruncated closed form at real arguments, from special values.
pub fn orbital_euler_complete(d: i64, s1: f64, s2: f64) -> Result<f64, crate::special::SpecialError> {
    use crate::special::{l_chi, zeta};
    let zf = |s: f64| -> Result<f64, crate::special::SpecialError> {
        Ok(if d == 1 { zeta(s)?.value.powi(2) } else { zeta(s)?.value * l_chi(s, d)?.value })
    };
    Ok(zeta(2.0 * s2)?.value * zeta(2.0 * s1 + 2.0 * s2 - 1.0)?.value * zeta(s1 + 2.0 * s2)?.value * zf(s1)?
        / zf(s1 + 2.0 * s2)?)
}

/// A small fundamental discriminant with the given splitting type at `p`.
pub fn sample_discriminant(p: u64, t: SplitType) -> i64 {
    (1..).flat_map(|k: i64| [-k, k]).find(|&d| is_fundamental(d) && splitting_type(p, d).ok() == Some(t)).unwrap()
}
