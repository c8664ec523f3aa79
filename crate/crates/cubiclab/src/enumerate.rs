//! Enumeration of GL₂(ℤ)-classes of binary cubic forms with `0 < |P| ≤ X`.
//!
//! The sweep walks coefficient ranges that contain every canonical form
//! (bounds come from the reduction domain, see the loop comments) and keeps a
//! tuple exactly when it is its own canonical representative. Work is split
//! over `(x₀, x₁)` pairs and the output is sorted by `(|P|, form)`, so the
//! result does not depend on the number of workers.

use crate::forms::CubicForm;
use crate::int::{div_ceil, div_floor};
use crate::reduce::canonical_stab_order;
use crate::ring::{classify_rational, RationalType};
use num_bigint::BigInt;
use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
    Both,
}

impl Sign {
    pub fn includes_pos(&self) -> bool {
        matches!(self, Sign::Pos | Sign::Both)
    }
    pub fn includes_neg(&self) -> bool {
        matches!(self, Sign::Neg | Sign::Both)
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pos" => Ok(Sign::Pos),
            "neg" => Ok(Sign::Neg),
            "both" => Ok(Sign::Both),
            _ => Err(format!("unknown sign '{s}' (expected pos, neg or both)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("discriminant bound must be at least 1")]
    BadBound,
    #[error("discriminant bound {0} is beyond the supported range")]
    TooLarge(u64),
}

/// Largest bound accepted by the sweep; coefficients stay far inside `i64`
/// and every intermediate product inside `i128`.
pub const MAX_BOUND: u64 = 1 << 40;

/// One class with `P ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassRecord {
    pub canonical: CubicForm,
    pub disc: BigInt,
    pub aut_order: u8,
    pub rtype: RationalType,
    pub signature: u8,
}

/// Machine-word form of [`ClassRecord`] used inside the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompactClass {
    pub form: [i64; 4],
    pub disc: i64,
    pub aut: u8,
    pub rtype: RationalType,
}

impl CompactClass {
    pub fn signature(&self) -> u8 {
        u8::from(self.disc > 0)
    }

    /// `6/#Aut`, an integer.
    pub fn mass6(&self) -> u64 {
        6 / self.aut as u64
    }

    pub fn to_record(&self) -> ClassRecord {
        let [a, b, c, d] = self.form;
        ClassRecord {
            canonical: CubicForm::from_i64(a, b, c, d),
            disc: BigInt::from(self.disc),
            aut_order: self.aut,
            rtype: self.rtype,
            signature: self.signature(),
        }
    }

    fn sort_key(&self) -> (u64, [i64; 4]) {
        (self.disc.unsigned_abs(), self.form)
    }
}

fn keep(out: &mut Vec<CompactClass>, f: CubicForm<i128>, disc: i128, pos: bool) {
    if let Some(aut) = canonical_stab_order(&f, pos) {
        let rtype = classify_rational(&f);
        out.push(CompactClass {
            form: [f.x0 as i64, f.x1 as i64, f.x2 as i64, f.x3 as i64],
            disc: disc as i64,
            aut: aut as u8,
            rtype,
        });
    }
}

fn fl(v: f64) -> i128 {
    v.floor() as i128
}

/// Positive discriminant, `x₀ ≥ 1`. The Hessian `(A, B, C)` of a reduced form
/// satisfies `|B| ≤ A ≤ C` and `3P = 4AC − B²`, so `A ≤ √P`; spreading of the
/// three real roots bounds `x₀` and `x₁`.
fn sweep_pos_a(x: i128, a: i128, b: i128, out: &mut Vec<CompactClass>) {
    let sx = x.sqrt();
    let b2 = b * b;
    let clo = div_ceil(&(b2 - sx), &(3 * a));
    let chi = div_floor(&(b2 - 1), &(3 * a));
    for c in clo..=chi {
        let aa = b2 - 3 * a * c;
        let bc = b * c;
        let dlo = div_ceil(&(bc - aa), &(9 * a));
        let dhi = div_floor(&(bc + aa), &(9 * a));
        for d in dlo..=dhi {
            let cc = c * c - 3 * b * d;
            if cc < aa {
                continue;
            }
            let f = CubicForm::new(a, b, c, d);
            let p = f.disc();
            if p <= 0 || p > x {
                continue;
            }
            keep(out, f, p, true);
        }
    }
}

/// Positive discriminant, `x₀ = 0`: `f = v₂·(b, c, d)` with `|c| ≤ b` and
/// `c² − 3bd ≥ b²`, so `P ≥ b⁴`.
fn sweep_pos_zero(x: i128, b: i128, out: &mut Vec<CompactClass>) {
    for c in -b..=b {
        let dlo = div_ceil(&(c * c * b * b - x), &(4 * b * b * b));
        let dhi = div_floor(&(c * c - b * b), &(3 * b));
        for d in dlo..=dhi {
            let f = CubicForm::new(0, b, c, d);
            let p = f.disc();
            if p <= 0 || p > x {
                continue;
            }
            keep(out, f, p, true);
        }
    }
}

/// Candidate `x₃` values with `−X ≤ P ≤ −1` for fixed `(a, b, c)`, from the
/// quadratic `P(d) = −27a²d² + βd + γ`. The float roots are widened and
/// every value is filtered exactly afterwards.
fn neg_d_ranges(x: i128, a: i128, b: i128, c: i128) -> Vec<(i128, i128)> {
    let beta = (18 * a * b * c - 4 * b * b * b) as f64;
    let gamma = (b * b * c * c - 4 * a * c * c * c) as f64;
    let q = -27.0 * (a * a) as f64;
    // roots of q d² + β d + (γ − t) = 0
    let roots = |t: f64| -> Option<(f64, f64)> {
        let disc = beta * beta - 4.0 * q * (gamma - t);
        if disc < 0.0 {
            return None;
        }
        let s = disc.sqrt();
        let r1 = (-beta + s) / (2.0 * q);
        let r2 = (-beta - s) / (2.0 * q);
        Some((r1.min(r2), r1.max(r2)))
    };
    let Some((lo, hi)) = roots(-(x as f64)) else { return Vec::new() };
    match roots(-1.0) {
        Some((ilo, ihi)) if fl(ihi) - fl(ilo) > 6 => {
            vec![(fl(lo) - 2, fl(ilo) + 2), (fl(ihi) - 2, fl(hi) + 2)]
        }
        _ => vec![(fl(lo) - 2, fl(hi) + 2)],
    }
}

/// Negative discriminant, `x₀ ≥ 1`. Writing `f = a(x − θ)|x − φ|²` with the
/// reduced point `φ`, `|P| = 4a⁴(Im φ)²|θ − φ|⁴`, which bounds `a`, `θ` and
/// `|φ|` and with them `x₁`, `x₂`.
fn sweep_neg_a(x: i128, a: i128, b: i128, cmax: i128, out: &mut Vec<CompactClass>) {
    for c in -cmax..=cmax {
        for (dlo, dhi) in neg_d_ranges(x, a, b, c) {
            for d in dlo..=dhi {
                let f = CubicForm::new(a, b, c, d);
                let p = f.disc();
                if p >= 0 || p < -x {
                    continue;
                }
                keep(out, f, p, false);
            }
        }
    }
}

/// Negative discriminant, `x₀ = 0`: `(b, c, d)` is a reduced definite
/// quadratic, `|c| ≤ b ≤ d`, and `|P| ≥ 3b⁴`.
fn sweep_neg_zero(x: i128, b: i128, out: &mut Vec<CompactClass>) {
    for c in -b..=b {
        let dhi = div_floor(&(x + c * c * b * b), &(4 * b * b * b));
        for d in b..=dhi {
            let f = CubicForm::new(0, b, c, d);
            let p = f.disc();
            if p >= 0 || p < -x {
                continue;
            }
            keep(out, f, p, false);
        }
    }
}

#[derive(Clone, Copy)]
enum Task {
    PosA(i128, i128),
    PosZero(i128),
    NegA(i128, i128, i128),
    NegZero(i128),
}

fn tasks(x: u64, sign: Sign, slack: f64) -> Vec<Task> {
    let xf = x as f64;
    let mut out = Vec::new();
    if sign.includes_pos() {
        let amax = fl(slack * (4.0 * xf.sqrt() / 27.0).sqrt()) + 1;
        let x4 = xf.powf(0.25);
        for a in 1..=amax {
            let bmax = fl(slack * (1.5 * a as f64 + 4.0 / 3f64.sqrt() * x4)) + 1;
            for b in -bmax..=bmax {
                out.push(Task::PosA(a, b));
            }
        }
        for b in 1..=fl(slack * x4) + 1 {
            out.push(Task::PosZero(b));
        }
    }
    if sign.includes_neg() {
        let amax = fl(slack * (16.0 * xf / 27.0).powf(0.25)) + 1;
        let r = (xf / 3.0).powf(0.25);
        for a in 1..=amax {
            let af = a as f64;
            let bmax = fl(slack * (1.5 * af + r)) + 1;
            let cmax = fl(slack * (r + af * (0.75 + (xf / (4.0 * af.powi(4))).cbrt()))) + 1;
            for b in -bmax..=bmax {
                out.push(Task::NegA(a, b, cmax));
            }
        }
        for b in 1..=fl(slack * r) + 1 {
            out.push(Task::NegZero(b));
        }
    }
    out
}

fn run(task: Task, x: i128) -> Vec<CompactClass> {
    let mut out = Vec::new();
    match task {
        Task::PosA(a, b) => sweep_pos_a(x, a, b, &mut out),
        Task::PosZero(b) => sweep_pos_zero(x, b, &mut out),
        Task::NegA(a, b, cmax) => sweep_neg_a(x, a, b, cmax, &mut out),
        Task::NegZero(b) => sweep_neg_zero(x, b, &mut out),
    }
    out
}

/// Sweep with every float bound scaled by `slack ≥ 1`; `slack = 1` is the
/// production setting, larger values exist to test that the bounds are
/// not too tight.
pub fn enumerate_compact_with_slack(x: u64, sign: Sign, slack: f64) -> Result<Vec<CompactClass>, EnumError> {
    if x == 0 {
        return Err(EnumError::BadBound);
    }
    if x > MAX_BOUND {
        return Err(EnumError::TooLarge(x));
    }
    let xi = x as i128;
    let mut all: Vec<CompactClass> = tasks(x, sign, slack).into_par_iter().flat_map_iter(|t| run(t, xi)).collect();
    all.par_sort_unstable_by_key(|c| c.sort_key());
    Ok(all)
}

/// All classes with `0 < |P| ≤ X` of the requested sign, sorted by
/// `(|P|, canonical form)`.
pub fn enumerate_compact(x: u64, sign: Sign) -> Result<Vec<CompactClass>, EnumError> {
    enumerate_compact_with_slack(x, sign, 1.0)
}

/// Streaming view of [`enumerate_compact`] with arbitrary-precision records.
pub fn enumerate_classes(x: u64, sign: Sign) -> Result<impl Iterator<Item = ClassRecord>, EnumError> {
    Ok(enumerate_compact(x, sign)?.into_iter().map(|c| c.to_record()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::reduce_canonical;

    #[test]
    fn disc_one() {
        let v: Vec<ClassRecord> = enumerate_classes(1, Sign::Pos).unwrap().collect();
        assert_eq!(v.len(), 1);
        let r = &v[0];
        assert_eq!(r.disc, BigInt::from(1));
        assert_eq!(r.aut_order, 6);
        assert_eq!(r.rtype, RationalType::ThreeRational);
        assert_eq!(r.canonical, reduce_canonical(&CubicForm::from_i64(0, 1, 1, 0)).unwrap());
        assert!(enumerate_compact(1, Sign::Neg).unwrap().is_empty());
        assert_eq!(enumerate_compact(0, Sign::Pos), Err(EnumError::BadBound));
    }

    #[test]
    fn disc_minus_23() {
        let v: Vec<CompactClass> =
            enumerate_compact(23, Sign::Neg).unwrap().into_iter().filter(|c| c.disc == -23).collect();
        assert_eq!(v.len(), 2);
        let mut kinds: Vec<(RationalType, u8)> = v.iter().map(|c| (c.rtype, c.aut)).collect();
        kinds.sort();
        assert_eq!(kinds, vec![(RationalType::LinTimesQuad, 2), (RationalType::Irreducible, 1)]);
    }

    #[test]
    fn sorted_and_canonical() {
        let v = enumerate_compact(500, Sign::Both).unwrap();
        for w in v.windows(2) {
            assert!(w[0].sort_key() < w[1].sort_key());
        }
        for c in &v {
            let [a, b, cc, d] = c.form;
            let f = CubicForm::<i128>::new(a as i128, b as i128, cc as i128, d as i128);
            assert_eq!(reduce_canonical(&f).unwrap(), f);
            assert_eq!(f.disc(), c.disc as i128);
        }
    }

    #[test]
    fn bounds_are_not_tight() {
        for x in [200u64, 3000] {
            assert_eq!(
                enumerate_compact(x, Sign::Both).unwrap(),
                enumerate_compact_with_slack(x, Sign::Both, 2.0).unwrap()
            );
        }
    }
}
