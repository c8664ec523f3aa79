//! GL₂(ℤ) reduction of binary cubic forms.
//!
//! Every form with `P ≠ 0` carries a covariant point `z` in the upper half
//! plane, taken up to complex conjugation: the root of the Hessian when
//! `P > 0`, and the non-real root of the form itself when `P < 0`. The action
//! of `g` moves the point exactly like the roots of the form, so a form is
//! reduced when `|Re z| ≤ 1/2` and `|z| ≥ 1`. All comparisons of `z` against
//! the domain boundary are decided by exact integer sign tests.
//!
//! The canonical representative is the lexicographically smallest normalized
//! form (`x₀ > 0`, or `x₀ = 0 < x₁`) among the reduced forms in the orbit.

use crate::forms::{CubicForm, FormError, GL2Elem};
use crate::int::{div_floor, flip, sgn, Int};
use num_bigint::BigInt;
use std::cmp::Ordering;
use std::sync::OnceLock;

/// Sign of `Re z − k/2`.
fn re_cmp<T: Int>(f: &CubicForm<T>, pos: bool, k: &T) -> Ordering {
    let (a, b, c) = (&f.x0, &f.x1, &f.x2);
    if pos {
        let h = f.hessian();
        return sgn(&(-h.y2 - k.clone() * h.y1));
    }
    if a.is_zero() {
        // point is the root of (b, c, d)
        return flip(sgn(&(-c.clone() - k.clone() * b.clone())), sgn(b));
    }
    let sa = sgn(a);
    let mut p = -k.clone() * a.clone() - b.clone();
    if sa == Ordering::Less {
        p = -p;
    }
    let q = a.abs();
    flip(sgn(&f.eval(&p, &q)), sa)
}

/// Sign of `|z|² − 1`.
fn abs_cmp<T: Int>(f: &CubicForm<T>, pos: bool) -> Ordering {
    let (a, b, c, d) = (&f.x0, &f.x1, &f.x2, &f.x3);
    if pos {
        let h = f.hessian();
        return sgn(&(h.y3 - h.y1));
    }
    if a.is_zero() {
        return flip(sgn(&(d.clone() - b.clone())), sgn(b));
    }
    let sa = sgn(a);
    if d.is_zero() {
        return flip(sgn(&(c.clone() - a.clone())), sa);
    }
    let mut p = -d.clone();
    if sa == Ordering::Less {
        p = -p;
    }
    let q = a.abs();
    flip(flip(sgn(&f.eval(&p, &q)), sa), sgn(&p))
}

/// An integer `M` with `|Re z| ≤ M`.
fn re_bound<T: Int>(f: &CubicForm<T>, pos: bool) -> T {
    let (a, b, c, d) = (&f.x0, &f.x1, &f.x2, &f.x3);
    if pos {
        let h = f.hessian();
        return h.y2.abs() / h.y1.abs() + T::one();
    }
    if a.is_zero() {
        return c.abs() / b.abs() + T::one();
    }
    let m = b.abs().max(c.abs()).max(d.abs());
    m / a.abs() + T::one()
}

/// Whether the covariant point lies in the closed domain.
fn in_domain<T: Int>(f: &CubicForm<T>, pos: bool) -> bool {
    let one = T::one();
    re_cmp(f, pos, &-one.clone()) != Ordering::Less
        && re_cmp(f, pos, &one) != Ordering::Greater
        && abs_cmp(f, pos) != Ordering::Less
}

fn in_interior<T: Int>(f: &CubicForm<T>, pos: bool) -> bool {
    let one = T::one();
    re_cmp(f, pos, &-one.clone()) == Ordering::Greater
        && re_cmp(f, pos, &one) == Ordering::Less
        && abs_cmp(f, pos) == Ordering::Greater
}

fn is_normalized<T: Int>(f: &CubicForm<T>) -> bool {
    f.x0.is_positive() || (f.x0.is_zero() && f.x1.is_positive())
}

/// Integer translation bringing `Re z` into `[−1/2, 1/2]`.
fn centering_shift<T: Int>(f: &CubicForm<T>, pos: bool) -> T {
    let two = T::int(2);
    let m = re_bound(f, pos);
    // smallest k with Re z ≤ k/2
    let mut lo = -(two.clone() * m.clone()) - two.clone();
    let mut hi = two.clone() * m + two.clone();
    while hi.clone() - lo.clone() > T::one() {
        let mid = div_floor(&(lo.clone() + hi.clone()), &two);
        if re_cmp(f, pos, &mid) == Ordering::Greater {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    div_floor(&hi, &two)
}

/// Move `f` into the domain; returns `(g·f, g)`.
pub fn to_domain<T: Int>(f: &CubicForm<T>) -> Result<(CubicForm<T>, GL2Elem<T>), FormError> {
    let p = f.disc();
    if p.is_zero() {
        return Err(FormError::ZeroDiscriminant);
    }
    let pos = p.is_positive();
    let mut cur = f.clone();
    let mut g = GL2Elem::identity();
    let one = T::one();
    loop {
        let centered =
            re_cmp(&cur, pos, &-one.clone()) != Ordering::Less && re_cmp(&cur, pos, &one) != Ordering::Greater;
        if !centered {
            let n = centering_shift(&cur, pos);
            let t = GL2Elem::translation(n);
            cur = cur.act_unimodular(&t);
            g = t.mul(&g);
        }
        if abs_cmp(&cur, pos) == Ordering::Less {
            let s = GL2Elem::swap();
            cur = cur.act_unimodular(&s);
            g = s.mul(&g);
        } else {
            return Ok((cur, g));
        }
    }
}

fn small_matrices() -> &'static [[i64; 4]] {
    static CELL: OnceLock<Vec<[i64; 4]>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for a in -1..=1i64 {
            for b in -1..=1 {
                for c in -1..=1 {
                    for d in -1..=1 {
                        let det = a * d - b * c;
                        if det == 1 || det == -1 {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    })
}

const INTERIOR: [[i64; 4]; 4] = [[1, 0, 0, 1], [-1, 0, 0, -1], [1, 0, 0, -1], [-1, 0, 0, 1]];

/// Matrices `h` that can keep a reduced form reduced.
fn candidate_moves<T: Int>(f: &CubicForm<T>, pos: bool) -> Vec<GL2Elem<T>> {
    let list: &[[i64; 4]] = if in_interior(f, pos) { &INTERIOR } else { small_matrices() };
    list.iter().map(|m| GL2Elem::from_i64s(m[0], m[1], m[2], m[3])).collect()
}

/// Result of reducing a form.
#[derive(Debug, Clone)]
pub struct Reduction<T = BigInt> {
    /// Canonical representative.
    pub canonical: CubicForm<T>,
    /// `g` with `g·f = canonical`.
    pub transform: GL2Elem<T>,
    /// Stabilizer of `canonical`.
    pub stabilizer: Vec<GL2Elem<T>>,
}

/// Canonical data for a form already in the domain.
fn finish<T: Int>(cur: &CubicForm<T>, pos: bool) -> (CubicForm<T>, GL2Elem<T>, Vec<GL2Elem<T>>) {
    let mut best: Option<(CubicForm<T>, GL2Elem<T>)> = None;
    for h in candidate_moves(cur, pos) {
        let img = cur.act_unimodular(&h);
        if !is_normalized(&img) || !in_domain(&img, pos) {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| img < *b) {
            best = Some((img, h));
        }
    }
    let (canon, h0) = best.expect("the orbit meets the domain in a normalized form");
    let stab = candidate_moves(&canon, pos).into_iter().filter(|h| canon.act_unimodular(h) == canon).collect();
    (canon, h0, stab)
}

/// Full reduction of `f` with transform and stabilizer.
pub fn reduce<T: Int>(f: &CubicForm<T>) -> Result<Reduction<T>, FormError> {
    let (cur, g) = to_domain(f)?;
    let pos = f.disc().is_positive();
    let (canonical, h0, stabilizer) = finish(&cur, pos);
    Ok(Reduction { canonical, transform: h0.mul(&g), stabilizer })
}

/// Canonical representative of the GL₂(ℤ)-orbit of `f`.
pub fn reduce_canonical<T: Int>(f: &CubicForm<T>) -> Result<CubicForm<T>, FormError> {
    Ok(reduce(f)?.canonical)
}

/// Same-orbit test.
pub fn equivalent<T: Int>(f: &CubicForm<T>, g: &CubicForm<T>) -> Result<bool, FormError> {
    if f.disc() != g.disc() {
        // still reject degenerate input on either side
        reduce_canonical(f)?;
        reduce_canonical(g)?;
        return Ok(false);
    }
    Ok(reduce_canonical(f)? == reduce_canonical(g)?)
}

/// If `f` is its own canonical representative, the order of its stabilizer.
///
/// This is the enumeration filter: `P ≠ 0` is assumed.
pub fn canonical_stab_order<T: Int>(f: &CubicForm<T>, pos: bool) -> Option<usize> {
    if !is_normalized(f) || !in_domain(f, pos) {
        return None;
    }
    let mut stab = 0;
    for h in candidate_moves(f, pos) {
        let img = f.act_unimodular(&h);
        if img == *f {
            stab += 1;
            continue;
        }
        if is_normalized(&img) && img < *f && in_domain(&img, pos) {
            return None;
        }
    }
    Some(stab)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
        CubicForm::from_i64(a, b, c, d)
    }

    #[test]
    fn swap_related_forms() {
        assert_eq!(reduce_canonical(&cf(0, -1, -1, 0)).unwrap(), reduce_canonical(&cf(0, 1, 1, 0)).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let f = cf(1, 0, 0, 1);
        assert!(equivalent(&f, &f).unwrap());
        assert!(!equivalent(&cf(0, 1, 1, 0), &cf(0, 1, 0, 1)).unwrap());
        let g = f.act(&GL2Elem::from_i64s(2, 1, 1, 1)).unwrap();
        assert!(equivalent(&f, &g).unwrap());
        assert!(reduce_canonical(&cf(0, 1, 0, 0)).is_err());
    }

    #[test]
    fn transform_and_stabilizer_are_consistent() {
        for f in [cf(3, -7, 11, 2), cf(-5, 1, 9, -4), cf(0, 1, 1, 0), cf(1, 0, 0, 1), cf(2, 13, -40, 7)] {
            let r = reduce(&f).unwrap();
            assert_eq!(f.act(&r.transform).unwrap(), r.canonical);
            assert!(!r.stabilizer.is_empty());
            for s in &r.stabilizer {
                assert_eq!(r.canonical.act(s).unwrap(), r.canonical);
            }
            assert_eq!(canonical_stab_order(&r.canonical, f.disc() > BigInt::from(0)), Some(r.stabilizer.len()));
        }
    }

    #[test]
    fn known_stabilizer_orders() {
        let order = |f: CubicForm| reduce(&f).unwrap().stabilizer.len();
        assert_eq!(order(cf(0, 1, 1, 0)), 6);
        assert_eq!(order(cf(1, 0, 0, 1)), 2);
        assert_eq!(order(cf(1, 0, -1, -1)), 1);
        // x³ − 3x − 1 defines the cyclic cubic field of conductor 9
        assert_eq!(order(cf(1, 0, -3, -1)), 3);
    }

    #[test]
    fn small_box_consistency() {
        // every form in a small box reduces to a fixed point of the reduction
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in -3..=3 {
                        let f = CubicForm::<i128>::new(a, b, c, d);
                        if f.disc() == 0 {
                            continue;
                        }
                        let r = reduce(&f).unwrap();
                        assert_eq!(reduce_canonical(&r.canonical).unwrap(), r.canonical);
                        assert!(canonical_stab_order(&r.canonical, f.disc() > 0).is_some());
                    }
                }
            }
        }
    }
}
