//! The Borel side: quadratic forms `y` under `B_ℤ = {(t, p, u) : t, p = ±1}`,
//! the map `ψ(y) = class of v₂·y(v)` into cubic classes, and counts of
//! reducible classes graded by `|Q₁²Q₂|`.

use crate::enumerate::Sign;
use crate::forms::{BElem, CubicForm, FormError, QuadForm};
use crate::int::{div_ceil, div_floor, is_square};
use crate::reduce::reduce_canonical;
use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Orbit types of `W` with `Q₁ ≠ 0`, by the rational splitting of `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WType {
    W0,
    W1,
    W2,
}

impl WType {
    pub fn label(&self) -> &'static str {
        match self {
            WType::W0 => "W0",
            WType::W1 => "W1",
            WType::W2 => "W2",
        }
    }

    pub fn of_q2(q2: &BigInt) -> WType {
        if q2.is_zero() {
            WType::W0
        } else if is_square(q2) {
            WType::W1
        } else {
            WType::W2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadClassRecord {
    pub canonical: QuadForm,
    pub q1: BigInt,
    pub q2: BigInt,
    pub norm_p: BigInt,
    pub stab_order: u8,
    pub wtype: WType,
}

/// Pair of ideals `(𝔞, 𝔠)` indexing the family of maps `ψ`. Over ℤ both are
/// the unit ideal; the type only keeps call sites shaped like the general case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IdealPair;

fn check(y: &QuadForm) -> Result<(), FormError> {
    if y.y1.is_zero() || y.q2().is_zero() {
        Err(FormError::Degenerate)
    } else {
        Ok(())
    }
}

/// Canonical representative of the `B_ℤ`-orbit of `y`.
pub fn quad_canonical(y: &QuadForm) -> Result<QuadForm, FormError> {
    check(y)?;
    let q2 = y.q2();
    let (y1, y2) = if y.y1.is_negative() { (-&y.y1, -&y.y2) } else { (y.y1.clone(), y.y2.clone()) };
    let m = BigInt::from(2) * &y1;
    let r = ((&y2 % &m) + &m) % &m;
    // p = −1 sends the residue r to 2y₁ − r; y₃ grows with y₂², so the
    // smaller residue wins
    let alt = (&m - &r) % &m;
    let y2 = r.min(alt);
    let y3 = (&y2 * &y2 - &q2) / (BigInt::from(4) * &y1);
    Ok(QuadForm::new(y1, y2, y3))
}

/// `(t, p, u)` taking `y` to its canonical form.
pub fn quad_canonical_transform(y: &QuadForm) -> Result<BElem, FormError> {
    check(y)?;
    let t = if y.y1.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };
    let y1 = &t * &y.y1;
    let y2 = &t * &y.y2;
    let m = BigInt::from(2) * &y1;
    let target = quad_canonical(y)?.y2;
    // t(2uy₁ + p y₂) after the sign flip is 2u y₁ + p·y2
    for p in [1i64, -1] {
        let num = &target - BigInt::from(p) * &y2;
        if (&num % &m).is_zero() {
            return Ok(BElem::new(t.clone(), BigInt::from(p), num / &m));
        }
    }
    unreachable!("canonical residue is reachable")
}

/// Order of `Stab(B_ℤ; y)`. Only `t = 1` can fix `y₁ ≠ 0`; with `p = 1` the
/// translation must be trivial, and `p = −1` contributes exactly when
/// `y₁ | y₂` (take `u = y₂/y₁`).
pub fn quad_stab_order(y: &QuadForm) -> Result<u8, FormError> {
    check(y)?;
    Ok(if (&y.y2 % &y.y1).is_zero() { 2 } else { 1 })
}

/// Stabilizer order by trying every `(t, p)` and every `u` that can possibly
/// fix `y₂` (`|u| ≤ |y₂|/|y₁| + 1`).
pub fn quad_stab_order_brute(y: &QuadForm) -> u8 {
    let bound = (&y.y2.abs() / &y.y1.abs()).to_i64().unwrap() + 1;
    let mut n = 0;
    for t in [1i64, -1] {
        for p in [1i64, -1] {
            for u in -bound..=bound {
                let b = BElem::new(BigInt::from(t), BigInt::from(p), BigInt::from(u));
                if y.act_b(&b).unwrap() == *y {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Canonical cubic class of `v₂·y(v)`.
pub fn psi_map(y: &QuadForm) -> Result<CubicForm, FormError> {
    psi_map_for(IdealPair, y)
}

pub fn psi_map_for(_ideals: IdealPair, y: &QuadForm) -> Result<CubicForm, FormError> {
    check(y)?;
    reduce_canonical(&y.embed_star())
}

fn record(y1: i64, y2: i64, y3: i64) -> QuadClassRecord {
    let y = QuadForm::from_i64(y1, y2, y3);
    let q1 = y.q1();
    let q2 = y.q2();
    QuadClassRecord {
        norm_p: (&q1 * &q1 * &q2).abs(),
        stab_order: if y2 % y1 == 0 { 2 } else { 1 },
        wtype: WType::of_q2(&q2),
        canonical: y,
        q1,
        q2,
    }
}

/// Range of `y₃` giving `Q₂ = y₂² − 4y₁y₃` of the requested sign with
/// `|Q₂| ≤ qmax`.
fn y3_range(y1: i64, y2: i64, qmax: i64, pos: bool) -> (i64, i64) {
    let (y1, y2, qmax) = (y1 as i128, y2 as i128, qmax as i128);
    let den = 4 * y1;
    let (lo, hi) = if pos {
        (div_ceil(&(y2 * y2 - qmax), &den), div_floor(&(y2 * y2 - 1), &den))
    } else {
        (div_ceil(&(y2 * y2 + 1), &den), div_floor(&(y2 * y2 + qmax), &den))
    };
    (lo as i64, hi as i64)
}

fn signs(sign: Sign) -> Vec<bool> {
    let mut v = Vec::new();
    if sign.includes_pos() {
        v.push(true);
    }
    if sign.includes_neg() {
        v.push(false);
    }
    v
}

/// All canonical `y` with `0 < |Q₁²Q₂| ≤ x` and `sign(Q₂)` as requested,
/// ordered by `(|Q₁²Q₂|, y)`.
pub fn enumerate_reducible(x: u64, sign: Sign) -> Vec<QuadClassRecord> {
    let x = x.min(i64::MAX as u64) as i64;
    let ymax = x.sqrt();
    let mut out: Vec<QuadClassRecord> = (1..=ymax)
        .into_par_iter()
        .flat_map_iter(|y1| {
            let qmax = x / (y1 * y1);
            let mut v = Vec::new();
            for pos in signs(sign) {
                for y2 in 0..=y1 {
                    let (lo, hi) = y3_range(y1, y2, qmax, pos);
                    for y3 in lo..=hi {
                        v.push(record(y1, y2, y3));
                    }
                }
            }
            v
        })
        .collect();
    out.par_sort_by(|a, b| {
        (&a.norm_p, &a.canonical.y1, &a.canonical.y2, &a.canonical.y3).cmp(&(
            &b.norm_p,
            &b.canonical.y1,
            &b.canonical.y2,
            &b.canonical.y3,
        ))
    });
    out
}

/// Twice the weighted count, as an integer: each `(y₁, y₂)` contributes its
/// number of admissible `y₃`, halved when `y₁ | y₂`.
fn count_reducible_twice(x: u64, sign: Sign) -> u128 {
    let x = x.min(i64::MAX as u64) as i64;
    let ymax = x.sqrt();
    (1..=ymax)
        .into_par_iter()
        .map(|y1| {
            let qmax = x / (y1 * y1);
            let mut acc: u128 = 0;
            for pos in signs(sign) {
                for y2 in 0..=y1 {
                    let (lo, hi) = y3_range(y1, y2, qmax, pos);
                    if hi >= lo {
                        let n = (hi - lo + 1) as u128;
                        acc += if y2 == 0 || y2 == y1 { n } else { 2 * n };
                    }
                }
            }
            acc
        })
        .sum()
}

/// `Σ 1/#Stab(B_ℤ; y)` over [`enumerate_reducible`], in closed form per
/// `(y₁, y₂)`.
pub fn count_reducible_weighted(x: u64, sign: Sign) -> BigRational {
    BigRational::new(BigInt::from(count_reducible_twice(x, sign)), BigInt::from(2))
}

/// Fibre sizes of `ψ` on `W¹` records: canonical cubic class to the number of
/// quadratic classes mapping to it. Measured only.
pub fn w1_fibres(x: u64) -> BTreeMap<CubicForm, usize> {
    let mut m = BTreeMap::new();
    for r in enumerate_reducible(x, Sign::Pos) {
        if r.wtype == WType::W1 {
            *m.entry(psi_map(&r.canonical).unwrap()).or_insert(0) += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64) -> QuadForm {
        QuadForm::from_i64(a, b, c)
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(quad_canonical(&q(1, 3, 1)).unwrap(), q(1, 1, -1));
        assert_eq!(quad_canonical(&q(-1, 0, -1)).unwrap(), q(1, 0, 1));
        assert_eq!(quad_canonical(&q(1, 1, 6)).unwrap(), q(1, 1, 6));
        assert!(quad_canonical(&q(0, 1, 1)).is_err());
        assert!(quad_canonical(&q(1, 2, 1)).is_err());
    }

    #[test]
    fn transform_reaches_canonical() {
        for (a, b, c) in [(1, 3, 1), (-3, 7, 2), (5, -11, 4), (2, 9, -3), (-4, -4, 1)] {
            let y = q(a, b, c);
            let g = quad_canonical_transform(&y).unwrap();
            assert_eq!(y.act_b(&g).unwrap(), quad_canonical(&y).unwrap());
        }
    }

    #[test]
    fn stabilizers() {
        assert_eq!(quad_stab_order(&q(1, 0, 1)).unwrap(), 2);
        // (t, p, u) = (1, −1, 1) sends y₂ = 1 to 2 − 1 = 1
        assert_eq!(quad_stab_order(&q(1, 1, 6)).unwrap(), 2);
        assert_eq!(quad_stab_order(&q(2, 1, 1)).unwrap(), 1);
        for a in 1..6 {
            for b in -8..8 {
                for c in -4..4 {
                    let y = q(a, b, c);
                    if y.q2().is_zero() {
                        continue;
                    }
                    assert_eq!(quad_stab_order(&y).unwrap(), quad_stab_order_brute(&y), "{:?}", y);
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        let c = psi_map(&q(1, 1, 6)).unwrap();
        assert_eq!(c.disc(), BigInt::from(-23));
        assert_eq!(psi_map(&q(1, 1, 0)).unwrap(), reduce_canonical(&CubicForm::from_i64(0, 1, 1, 0)).unwrap());
        assert_eq!(psi_map(&q(1, 3, 1)).unwrap(), psi_map(&q(1, 1, -1)).unwrap());
    }

    #[test]
    fn small_enumerations() {
        let one = enumerate_reducible(1, Sign::Pos);
        assert!(one.iter().any(|r| r.canonical == q(1, 1, 0)));
        let neg = enumerate_reducible(23, Sign::Neg);
        assert!(neg.iter().any(|r| r.canonical == q(1, 1, 6)));
        assert!(count_reducible_weighted(1, Sign::Pos) >= BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn closed_form_matches_records() {
        for &x in &[1u64, 7, 50, 300, 2000] {
            for s in [Sign::Pos, Sign::Neg, Sign::Both] {
                let recs = enumerate_reducible(x, s);
                let twice: u128 = recs.iter().map(|r| 2 / r.stab_order as u128).sum();
                assert_eq!(twice, count_reducible_twice(x, s));
                for r in &recs {
                    assert_eq!(quad_canonical(&r.canonical).unwrap(), r.canonical);
                    assert!(r.norm_p <= BigInt::from(x));
                }
            }
        }
    }

    #[test]
    fn enumeration_is_complete_on_a_box() {
        // every form in a box with small |Q₁²Q₂| must canonicalise into the list
        let x = 120u64;
        let recs: std::collections::HashSet<QuadForm> =
            enumerate_reducible(x, Sign::Both).into_iter().map(|r| r.canonical).collect();
        for a in -11i64..=11 {
            for b in -25i64..=25 {
                for c in -25i64..=25 {
                    let y = q(a, b, c);
                    if a == 0 || y.q2().is_zero() {
                        continue;
                    }
                    let n = (BigInt::from(a * a) * y.q2()).abs();
                    if n <= BigInt::from(x) {
                        assert!(recs.contains(&quad_canonical(&y).unwrap()));
                    }
                }
            }
        }
    }
}
