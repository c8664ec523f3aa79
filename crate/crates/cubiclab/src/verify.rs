//! Property suites behind `cubiclab verify`. Each returns named checks that
//! serialize to one JSON object.

use crate::dirichlet::{series_p_orders, DirichletCoeffs};
use crate::enumerate::{enumerate_classes, enumerate_compact, Sign};
use crate::forms::{CubicForm, GL2Elem};
use crate::local_zeta::{formula_series, oracle_series, sample_discriminant, splitting_type, SplitType};
use crate::oracle::{act, unimodular_box};
use crate::reduce::equivalent;
use crate::reducible::{enumerate_reducible, psi_map, WType};
use crate::report::{build_report, residual_table};
use crate::ring::{automorphisms, form_to_ring, induced_ring_map, ring_disc, ring_to_form, RationalType};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::collections::HashMap;
use std::str::FromStr;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Free-form text printed after the JSON (residual tables).
    #[serde(skip)]
    pub extra: Option<String>,
}

impl SuiteReport {
    fn new(suite: &str, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport { suite: suite.to_string(), pass, checks, extra: None }
    }
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), pass, detail: detail.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    RingMap,
    Reducible,
    LocalZeta,
    Dirichlet,
    Shintani,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ringmap" => Ok(Suite::RingMap),
            "reducible" => Ok(Suite::Reducible),
            "localzeta" => Ok(Suite::LocalZeta),
            "dirichlet" => Ok(Suite::Dirichlet),
            "shintani" => Ok(Suite::Shintani),
            _ => Err(format!("unknown suite '{s}'")),
        }
    }
}

/// Options shared by the suites; `None` picks the suite default.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteOptions {
    pub max_disc: Option<u64>,
    pub p: Option<u64>,
}

pub fn run_suite(s: Suite, o: SuiteOptions) -> SuiteReport {
    match s {
        Suite::RingMap => ringmap(o.max_disc.map_or(3, |v| v as i64)),
        Suite::Reducible => reducible(o.max_disc.unwrap_or(10_000)),
        Suite::LocalZeta => localzeta(o.p.map_or(vec![2, 3, 5, 7], |p| vec![p]), 4),
        Suite::Dirichlet => dirichlet(o.max_disc.unwrap_or(200) as usize),
        Suite::Shintani => shintani(o.max_disc.unwrap_or(100_000)),
    }
}

/// A unimodular basis change of the ring whose first vector is not the
/// identity, built from the coefficients so each form gets its own.
fn scramble_basis(f: &CubicForm<i64>) -> [[BigInt; 3]; 3] {
    let u = BigInt::from(f.x0 - f.x3);
    let v = BigInt::from(f.x1 + 2);
    let w = BigInt::from(f.x2 - 1);
    let z = BigInt::from(0);
    let one = BigInt::from(1);
    [[u, one.clone(), z.clone()], [one.clone(), z.clone(), z], [v, w, one]]
}

/// Entry bound for the exhaustive stabilizer search in [`ringmap`]; forms
/// with coefficients up to 3 have automorphisms with entries up to 6.
const STAB_SEARCH: i64 = 10;

/// Every form with coefficients in `[−b, b]` and `P ≠ 0`.
pub fn ringmap(b: i64) -> SuiteReport {
    let (mut n, mut disc_bad, mut trip_bad, mut aut_bad) = (0usize, Vec::new(), Vec::new(), Vec::new());
    let mats = unimodular_box(STAB_SEARCH);
    for x0 in -b..=b {
        for x1 in -b..=b {
            for x2 in -b..=b {
                for x3 in -b..=b {
                    let f64f = CubicForm::new(x0, x1, x2, x3);
                    if f64f.disc() == 0 {
                        continue;
                    }
                    n += 1;
                    let f = f64f.to_big();
                    let ring = form_to_ring(&f);
                    if ring_disc(&ring) != f.disc() {
                        disc_bad.push(f64f.coeffs());
                    }
                    let round = ring.table().rebase(&scramble_basis(&f64f)).ok().and_then(|t| ring_to_form(&t).ok());
                    if !matches!(round.map(|g| equivalent(&f, &g)), Some(Ok(true))) {
                        trip_bad.push(f64f.coeffs());
                    }
                    let auts: Vec<GL2Elem> = automorphisms(&f).unwrap_or_default();
                    let genuine = auts.iter().all(|m| induced_ring_map(&f, m).is_some());
                    let brute = mats.iter().filter(|&&g| act(f64f.coeffs(), g) == f64f.coeffs()).count();
                    if !genuine || auts.len() != brute {
                        aut_bad.push(f64f.coeffs());
                    }
                }
            }
        }
    }
    let detail = |bad: &Vec<[i64; 4]>| match bad.first() {
        Some(f) => format!("{} of {n} forms fail, first {f:?}", bad.len()),
        None => format!("all {n} forms"),
    };
    SuiteReport::new(
        "ringmap",
        vec![
            check("ring_disc(form_to_ring(f)) = disc(f)", disc_bad.is_empty(), detail(&disc_bad)),
            check("form -> ring -> rebased ring -> form is in the orbit of f", trip_bad.is_empty(), detail(&trip_bad)),
            check("automorphisms induce ring automorphisms", aut_bad.is_empty(), detail(&aut_bad)),
        ],
    )
}

/// ψ on W² classes against V² classes with `|P| ≤ X`.
pub fn reducible(x: u64) -> SuiteReport {
    let mut image: HashMap<CubicForm, u8> = HashMap::new();
    let mut injective = true;
    for r in enumerate_reducible(x, Sign::Both) {
        if r.wtype != WType::W2 {
            continue;
        }
        match psi_map(&r.canonical) {
            Ok(c) => injective &= image.insert(c, r.stab_order).is_none(),
            Err(_) => injective = false,
        }
    }
    let v2: HashMap<CubicForm, u8> = match enumerate_classes(x, Sign::Both) {
        Ok(it) => it.filter(|c| c.rtype == RationalType::LinTimesQuad).map(|c| (c.canonical, c.aut_order)).collect(),
        Err(e) => return SuiteReport::new("reducible", vec![check("enumeration", false, e.to_string())]),
    };
    let onto = image.keys().all(|k| v2.contains_key(k)) && v2.keys().all(|k| image.contains_key(k));
    let stabs = onto && image.iter().all(|(k, s)| v2[k] == *s);
    SuiteReport::new(
        "reducible",
        vec![
            check("psi injective on W2 classes", injective, format!("{} W2 classes, X = {x}", image.len())),
            check("psi onto V2 classes", onto, format!("{} V2 classes", v2.len())),
            check("stabilizer orders match", stabs, format!("{} classes compared", if onto { v2.len() } else { 0 })),
        ],
    )
}

/// Closed-form local zeta functions against the stratum-measure oracle.
pub fn localzeta(primes: Vec<u64>, degree: u32) -> SuiteReport {
    let mut checks = Vec::new();
    for p in primes {
        for t in [SplitType::Sp, SplitType::Ur, SplitType::Rm] {
            let d = sample_discriminant(p, t);
            let name = format!("p = {p}, {} (D = {d}), degree <= {degree}", t.label());
            match oracle_series(p, d, degree) {
                Ok(o) => {
                    let f = formula_series(p, t, degree);
                    let bad: Vec<_> =
                        f.0.keys().chain(o.0.keys()).filter(|k| f.coeff(k.0, k.1) != o.coeff(k.0, k.1)).collect();
                    checks.push(check(name, bad.is_empty(), format!("mismatched monomials {bad:?}")));
                }
                Err(e) => checks.push(check(name, false, e.to_string())),
            }
        }
        // a second representative of each type gives the same series
        for t in [SplitType::Sp, SplitType::Ur, SplitType::Rm] {
            let d0 = sample_discriminant(p, t);
            let d1 = (1..)
                .flat_map(|k: i64| [k, -k])
                .filter(|&d| d != d0 && crate::dirichlet::is_fundamental(d))
                .find(|&d| splitting_type(p, d).ok() == Some(t))
                .unwrap();
            let same = matches!((oracle_series(p, d0, degree.min(3)), oracle_series(p, d1, degree.min(3))), (Ok(a), Ok(b)) if a == b);
            checks.push(check(format!("p = {p}, {}: D = {d0} and D = {d1} agree", t.label()), same, ""));
        }
    }
    SuiteReport::new("localzeta", checks)
}

/// V¹ class counts under three weightings against `ζ(2s)³ζ(6s−1)/ζ(4s)²`.
pub fn v1_counts(n: usize) -> [Vec<BigRational>; 3] {
    let zero = || vec![BigRational::from_integer(0.into()); n];
    let mut out = [zero(), zero(), zero()];
    if n == 0 {
        return out;
    }
    for c in enumerate_compact(n as u64, Sign::Pos).expect("bound in range") {
        if c.rtype != RationalType::ThreeRational {
            continue;
        }
        let i = c.disc as usize - 1;
        let aut = BigInt::from(c.aut);
        out[0][i] += BigRational::from_integer(1.into());
        out[1][i] += BigRational::new(1.into(), aut.clone());
        out[2][i] += BigRational::new(6.into(), aut);
    }
    out
}

pub const WEIGHTINGS: [&str; 3] = ["1", "1/#Aut", "6/#Aut"];

/// Indices into [`WEIGHTINGS`] whose counts match `p(n)` for all `n ≤ N`.
pub fn matching_weightings(n: usize) -> Vec<usize> {
    let p: DirichletCoeffs = series_p_orders(n);
    let counts = v1_counts(n);
    (0..3).filter(|&k| counts[k] == p.coeffs()).collect()
}

pub fn dirichlet(n: usize) -> SuiteReport {
    let m = matching_weightings(n);
    let names: Vec<&str> = m.iter().map(|&i| WEIGHTINGS[i]).collect();
    SuiteReport::new(
        "dirichlet",
        vec![check(
            format!("exactly one weighting of V1 counts matches p(n), n <= {n}"),
            m.len() == 1,
            format!("matching: {names:?}"),
        )],
    )
}

/// Two-term asymptotic checks at the top two decades of a report to `X`.
pub fn shintani(x: u64) -> SuiteReport {
    let decades = (x as f64).log10().round() as usize;
    let report = match build_report(x, decades.saturating_sub(2).max(1)) {
        Ok(r) => r,
        Err(e) => return SuiteReport::new("shintani", vec![check("report", false, e.to_string())]),
    };
    let mut checks = Vec::new();
    let rows = &report.rows;
    let last = rows.last().unwrap();
    for (label, field, main, sec, resid) in [
        ("pos", last.field_pos, last.main_pos, last.sec_pos, last.resid_pos),
        ("neg", last.field_neg, last.main_neg, last.sec_neg, last.resid_neg),
    ] {
        let without = (field - main).to_f64().abs();
        let with = resid.to_f64().abs();
        checks.push(check(
            format!("{label}: secondary term reduces the residual at X = {}", last.x),
            with < without,
            format!("|resid| = {with:.3}, without secondary {without:.3}, secondary {:.3}", sec.to_f64()),
        ));
    }
    if rows.len() >= 2 {
        let prev = &rows[rows.len() - 2];
        let norm = |r: f64, x: u64| r.abs() / (x as f64).powf(5.0 / 6.0);
        for (label, a, b) in [("pos", prev.resid_pos, last.resid_pos), ("neg", prev.resid_neg, last.resid_neg)] {
            let (na, nb) = (norm(a.to_f64(), prev.x), norm(b.to_f64(), last.x));
            checks.push(check(
                format!("{label}: |resid|/X^(5/6) decreases from {} to {}", prev.x, last.x),
                nb < na,
                format!("{na:.5} -> {nb:.5}"),
            ));
        }
    }
    checks.push(check(
        "field-only counts agree with total minus reducible mass",
        report.cross_check.agree,
        format!("up to {}", report.cross_check.bound),
    ));
    let mut s = SuiteReport::new("shintani", checks);
    s.extra = Some(residual_table(&report));
    s
}
