//! Weighted class counts at a ladder of discriminant bounds, set against the
//! two-term asymptotic for cubic fields over ℚ.
//!
//! Counts are `Σ 1/#Aut` over classes with `0 < ±P ≤ X`. Field-only counts
//! keep the irreducible classes. Main and secondary terms are rounded to
//! [`DECIMALS`] places first, so the residual column is exact arithmetic on
//! the printed numbers.

use crate::constants::{predict_counts, ConstantsError, CountScope};
use crate::enumerate::{enumerate_compact, CompactClass, EnumError, Sign};
use crate::fields::invariants_q;
use crate::reducible::{enumerate_reducible, WType};
use crate::ring::RationalType;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

pub const DECIMALS: u32 = 6;
pub const MIN_REPORT_BOUND: u64 = 1000;
/// Bound up to which field-only counts are recomputed as total minus
/// reducible mass.
pub const CROSS_CHECK_BOUND: u64 = 10_000;

pub const CSV_HEADER: &str =
    "X,count_pos,count_neg,field_pos,field_neg,main_pos,sec_pos,resid_pos,main_neg,sec_neg,resid_neg";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("report bound must be at least {MIN_REPORT_BOUND}, got {0}")]
    BoundTooSmall(u64),
    #[error("need at least one checkpoint")]
    NoCheckpoints,
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
}

/// A decimal with [`DECIMALS`] fractional digits, stored as an integer
/// number of units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Fixed(pub i128);

impl Fixed {
    fn scale() -> i128 {
        10i128.pow(DECIMALS)
    }

    /// Round half away from zero.
    pub fn from_rational(r: &BigRational) -> Fixed {
        let s = r * BigRational::from_integer(BigInt::from(Fixed::scale()));
        let mag = s.abs();
        let fl = mag.floor();
        let frac = &mag - &fl;
        let mut v = fl.to_integer().to_i128().expect("count out of range");
        if frac * BigRational::from_integer(BigInt::from(2)) >= BigRational::from_integer(BigInt::from(1)) {
            v += 1;
        }
        Fixed(if r.is_negative() { -v } else { v })
    }

    pub fn from_f64(x: f64) -> Fixed {
        Fixed((x * Fixed::scale() as f64).round() as i128)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / Fixed::scale() as f64
    }
}

impl std::ops::Sub for Fixed {
    type Output = Fixed;
    fn sub(self, o: Fixed) -> Fixed {
        Fixed(self.0 - o.0)
    }
}

impl std::fmt::Display for Fixed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = Fixed::scale();
        let sign = if self.0 < 0 { "-" } else { "" };
        let m = self.0.unsigned_abs();
        write!(f, "{sign}{}.{:0w$}", m / s as u128, m % s as u128, w = DECIMALS as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub x: u64,
    pub count_pos: Fixed,
    pub count_neg: Fixed,
    pub field_pos: Fixed,
    pub field_neg: Fixed,
    pub main_pos: Fixed,
    pub sec_pos: Fixed,
    pub resid_pos: Fixed,
    pub main_neg: Fixed,
    pub sec_neg: Fixed,
    pub resid_neg: Fixed,
}

impl ReportRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.x,
            self.count_pos,
            self.count_neg,
            self.field_pos,
            self.field_neg,
            self.main_pos,
            self.sec_pos,
            self.resid_pos,
            self.main_neg,
            self.sec_neg,
            self.resid_neg
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossCheck {
    pub bound: u64,
    /// Field-only mass from irreducible classes.
    pub irreducible_pos: String,
    pub irreducible_neg: String,
    /// Total mass minus V¹ mass minus the mass of W² classes.
    pub by_subtraction_pos: String,
    pub by_subtraction_neg: String,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    /// Least-squares slope of `log |resid|` against `log X`.
    pub fitted_residual_exponent_pos: Option<f64>,
    pub fitted_residual_exponent_neg: Option<f64>,
    /// Class weighting used in every count column.
    pub weighting: String,
    pub cross_check: CrossCheck,
}

impl Report {
    pub fn csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "max_disc": self.rows.last().map(|r| r.x),
            "checkpoints": self.rows.iter().map(|r| r.x).collect::<Vec<_>>(),
            "fitted_residual_exponent": {
                "pos": self.fitted_residual_exponent_pos,
                "neg": self.fitted_residual_exponent_neg,
            },
            "weighting": self.weighting,
            "p_series_weighting": "6/#Aut",
            "field_only_cross_check": self.cross_check,
        })
    }
}

/// `k` bounds from `10³` to `x`, geometrically spaced and strictly
/// increasing (coincident values after rounding are dropped).
pub fn checkpoints(x: u64, k: usize) -> Result<Vec<u64>, ReportError> {
    if x < MIN_REPORT_BOUND {
        return Err(ReportError::BoundTooSmall(x));
    }
    if k == 0 {
        return Err(ReportError::NoCheckpoints);
    }
    if k == 1 {
        return Ok(vec![x]);
    }
    let lo = MIN_REPORT_BOUND as f64;
    let ratio = x as f64 / lo;
    let mut out: Vec<u64> = (0..k)
        .map(|i| if i == k - 1 { x } else { (lo * ratio.powf(i as f64 / (k - 1) as f64)).round() as u64 })
        .collect();
    out.dedup();
    Ok(out)
}

fn mass(c: &CompactClass) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(c.aut))
}

fn rat_string(r: &BigRational) -> String {
    r.to_string()
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn cross_check(classes: &[CompactClass], x: u64) -> CrossCheck {
    let bound = x.min(CROSS_CHECK_BOUND);
    let zero = BigRational::zero;
    let (mut irr, mut total, mut v1) = ([zero(), zero()], [zero(), zero()], [zero(), zero()]);
    for c in classes.iter().filter(|c| c.disc.unsigned_abs() <= bound) {
        let i = usize::from(c.disc < 0);
        total[i] += mass(c);
        match c.rtype {
            RationalType::Irreducible => irr[i] += mass(c),
            RationalType::ThreeRational => v1[i] += mass(c),
            _ => {}
        }
    }
    let mut w2 = [zero(), zero()];
    for r in enumerate_reducible(bound, Sign::Both) {
        if r.wtype == WType::W2 {
            let i = usize::from(r.q2.is_negative());
            w2[i] += BigRational::new(BigInt::from(1), BigInt::from(r.stab_order));
        }
    }
    let sub = [&total[0] - &v1[0] - &w2[0], &total[1] - &v1[1] - &w2[1]];
    CrossCheck {
        bound,
        irreducible_pos: rat_string(&irr[0]),
        irreducible_neg: rat_string(&irr[1]),
        by_subtraction_pos: rat_string(&sub[0]),
        by_subtraction_neg: rat_string(&sub[1]),
        agree: sub == irr,
    }
}

/// Counts and predictions at `checkpoints(x, k)`.
pub fn build_report(x: u64, k: usize) -> Result<Report, ReportError> {
    let cps = checkpoints(x, k)?;
    let classes = enumerate_compact(x, Sign::Both)?;
    let q = invariants_q();
    let pos = predict_counts(&q, 1, CountScope::FieldOnly)?;
    let neg = predict_counts(&q, 0, CountScope::FieldOnly)?;
    let zero = BigRational::zero;
    let (mut all, mut field) = ([zero(), zero()], [zero(), zero()]);
    let mut rows = Vec::with_capacity(cps.len());
    let mut it = classes.iter().peekable();
    for &cx in &cps {
        while let Some(c) = it.peek() {
            if c.disc.unsigned_abs() > cx {
                break;
            }
            let i = usize::from(c.disc < 0);
            all[i] += mass(c);
            if c.rtype == RationalType::Irreducible {
                field[i] += mass(c);
            }
            it.next();
        }
        let xf = cx as f64;
        let (fp, fnn) = (Fixed::from_rational(&field[0]), Fixed::from_rational(&field[1]));
        let (mp, sp) = (Fixed::from_f64(pos.main(xf)), Fixed::from_f64(pos.secondary(xf)));
        let (mn, sn) = (Fixed::from_f64(neg.main(xf)), Fixed::from_f64(neg.secondary(xf)));
        rows.push(ReportRow {
            x: cx,
            count_pos: Fixed::from_rational(&all[0]),
            count_neg: Fixed::from_rational(&all[1]),
            field_pos: fp,
            field_neg: fnn,
            main_pos: mp,
            sec_pos: sp,
            resid_pos: fp - mp - sp,
            main_neg: mn,
            sec_neg: sn,
            resid_neg: fnn - mn - sn,
        });
    }
    let fit = |f: fn(&ReportRow) -> Fixed| {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| f(r).0 != 0).map(|r| ((r.x as f64).ln(), f(r).to_f64().abs().ln())).collect();
        least_squares_slope(&pts)
    };
    let cross = cross_check(&classes, x);
    Ok(Report {
        fitted_residual_exponent_pos: fit(|r| r.resid_pos),
        fitted_residual_exponent_neg: fit(|r| r.resid_neg),
        rows,
        weighting: "1/#Aut".to_string(),
        cross_check: cross,
    })
}

/// Human-readable residual table.
pub fn residual_table(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>10} {:>16} {:>16} {:>16} {:>16}", "X", "field_pos", "resid_pos", "field_neg", "resid_neg");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:>10} {:>16} {:>16} {:>16} {:>16}",
            row.x,
            row.field_pos.to_string(),
            row.resid_pos.to_string(),
            row.field_neg.to_string(),
            row.resid_neg.to_string()
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounding() {
        let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        assert_eq!(Fixed::from_rational(&r(1, 3)).to_string(), "0.333333");
        assert_eq!(Fixed::from_rational(&r(2, 3)).to_string(), "0.666667");
        assert_eq!(Fixed::from_rational(&r(-1, 2)).to_string(), "-0.500000");
        assert_eq!(Fixed::from_rational(&r(-2, 3)).to_string(), "-0.666667");
        assert_eq!(Fixed::from_f64(-0.0000004).to_string(), "0.000000");
        assert_eq!(Fixed(-1).to_string(), "-0.000001");
    }

    #[test]
    fn checkpoint_ladder() {
        assert_eq!(checkpoints(1_000_000, 4).unwrap(), vec![1000, 10_000, 100_000, 1_000_000]);
        assert_eq!(checkpoints(1000, 3).unwrap(), vec![1000]);
        assert!(checkpoints(999, 3).is_err());
        assert!(checkpoints(5000, 0).is_err());
    }

    #[test]
    fn small_report() {
        let r = build_report(20_000, 3).unwrap();
        assert!(r.csv().starts_with(&format!("{CSV_HEADER}\n")));
        for w in r.rows.windows(2) {
            assert!(w[0].x < w[1].x);
            assert!(w[0].count_pos <= w[1].count_pos);
        }
        for row in &r.rows {
            assert_eq!(row.resid_pos, row.field_pos - row.main_pos - row.sec_pos);
            assert!(row.field_pos <= row.count_pos);
        }
        assert!(r.cross_check.agree);
        assert_eq!(r.cross_check.bound, CROSS_CHECK_BOUND);
    }
}
