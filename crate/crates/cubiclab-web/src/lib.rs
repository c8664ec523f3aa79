//! Browser bindings: classify a form, draw the counting curve, print a local
//! zeta function. Every export returns a JSON string.

use cubiclab::constants::{predict_counts, CountScope};
use cubiclab::enumerate::{enumerate_compact, Sign};
use cubiclab::fields::invariants_q;
use cubiclab::local_zeta::{explicit_local_zeta, SplitType};
use cubiclab::reduce::reduce;
use cubiclab::ring::{classify_rational, form_to_ring, real_signature, RationalType};
use cubiclab::CubicForm;
use num_bigint::BigInt;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest bound `count_curve` accepts; beyond this the page stalls.
pub const CURVE_LIMIT: u64 = 200_000;

fn parse_form(text: &str) -> Result<CubicForm, String> {
    let parts: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if parts.len() != 4 {
        return Err(format!("expected four coefficients, got {}", parts.len()));
    }
    let mut c = Vec::with_capacity(4);
    for p in parts {
        c.push(p.parse::<BigInt>().map_err(|_| format!("'{p}' is not an integer"))?);
    }
    let [a, b, cc, d]: [BigInt; 4] = c.try_into().unwrap();
    Ok(CubicForm::new(a, b, cc, d))
}

pub fn classify_json(text: &str) -> Result<String, String> {
    let f = parse_form(text)?;
    let disc = f.disc();
    let rtype = classify_rational(&f);
    if rtype == RationalType::MultipleRoot {
        return Ok(json!({ "disc": "0", "rtype": rtype.label(), "note": "degenerate: repeated root" }).to_string());
    }
    let r = reduce(&f).map_err(|e| e.to_string())?;
    let c = &r.canonical;
    let ring = form_to_ring(&f);
    Ok(json!({
        "disc": disc.to_string(),
        "canonical": [c.x0.to_string(), c.x1.to_string(), c.x2.to_string(), c.x3.to_string()],
        "aut_order": r.stabilizer.len(),
        "rtype": rtype.label(),
        "signature": real_signature(&f).map_err(|e| e.to_string())?,
        "ring": format!(
            "w1^2 = {} + {} w1 + {} w2, w2^2 = {} + {} w1 + {} w2, w1 w2 = {}",
            -(&ring.a * &ring.c), -&ring.b, &ring.a, -(&ring.b * &ring.d), -&ring.d, &ring.c, -(&ring.a * &ring.d)
        ),
    })
    .to_string())
}

/// Field-only weighted counts at `points` bounds up to `x`, next to the two
/// predicted curves.
pub fn count_curve_json(x: u64, negative: bool, points: u32) -> Result<String, String> {
    if x == 0 || x > CURVE_LIMIT {
        return Err(format!("bound must be in 1..={CURVE_LIMIT}"));
    }
    let sign = if negative { Sign::Neg } else { Sign::Pos };
    let classes = enumerate_compact(x, sign).map_err(|e| e.to_string())?;
    let pred =
        predict_counts(&invariants_q(), u32::from(!negative), CountScope::FieldOnly).map_err(|e| e.to_string())?;
    let points = points.clamp(2, 400);
    let mut rows = Vec::new();
    let mut count = 0.0;
    let mut it = classes.iter().filter(|c| c.rtype == RationalType::Irreducible).peekable();
    for i in 1..=points {
        let b = (x as f64 * i as f64 / points as f64).round() as u64;
        while let Some(c) = it.peek() {
            if c.disc.unsigned_abs() > b {
                break;
            }
            count += 1.0 / c.aut as f64;
            it.next();
        }
        let bf = b as f64;
        rows.push(json!([b, count, pred.main(bf), pred.total(bf)]));
    }
    Ok(json!({ "columns": ["X", "count", "main", "main+secondary"], "rows": rows }).to_string())
}

pub fn local_zeta_json(q: u64, kind: &str, degree: u32) -> Result<String, String> {
    if q < 2 {
        return Err("q must be at least 2".into());
    }
    let t: SplitType = kind.parse()?;
    let f = explicit_local_zeta(q, t);
    let s = f.series(degree.min(12));
    let terms: Vec<_> = s.0.iter().map(|((a, b), c)| json!([a, b, c.to_string()])).collect();
    Ok(json!({ "closed_form": f.to_string(), "series": s.to_string(), "terms": terms }).to_string())
}

#[wasm_bindgen]
pub fn classify(coeffs: &str) -> Result<String, JsValue> {
    classify_json(coeffs).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn count_curve(max_disc: u32, negative: bool, points: u32) -> Result<String, JsValue> {
    count_curve_json(max_disc as u64, negative, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn local_zeta(q: u32, kind: &str, degree: u32) -> Result<String, JsValue> {
    local_zeta_json(q as u64, kind, degree).map_err(|e| JsValue::from_str(&e))
}
