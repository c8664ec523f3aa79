//! Cubic rings over ℤ and their correspondence with binary cubic forms.

use crate::forms::{CubicForm, FormError, GL2Elem};
use crate::int::{div_floor, exact_sqrt, is_square, Int};
use crate::reduce;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("multiplication is not commutative")]
    NotCommutative,
    #[error("multiplication is not associative")]
    NotAssociative,
    #[error("no integral identity element")]
    NoIdentity,
    #[error("basis change is not unimodular")]
    BadBasis,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Structure constants `(a, b, c, d)` of the ring attached to a form, in the
/// normalized basis `(1, ω₁, ω₂)`:
/// `ω₁² = −ac − bω₁ + aω₂`, `ω₂² = −bd − dω₁ + cω₂`, `ω₁ω₂ = −ad`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicRing {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl CubicRing {
    pub fn table(&self) -> RingTable {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let z = BigInt::zero;
        let mut t = RingTable::identity_skeleton();
        t.set(1, 1, [-(a * c), -b.clone(), a.clone()]);
        t.set(2, 2, [-(b * d), -d.clone(), c.clone()]);
        t.set(1, 2, [-(a * d), z(), z()]);
        t
    }

    pub fn form(&self) -> CubicForm {
        CubicForm::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone())
    }
}

/// A rank-3 commutative ℤ-algebra given by structure constants on a basis
/// `e₀, e₁, e₂`: `eᵢeⱼ = Σₖ c[i][j][k] eₖ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingTable {
    pub c: [[[BigInt; 3]; 3]; 3],
}

type Vec3 = [BigInt; 3];

fn zero3() -> Vec3 {
    [BigInt::zero(), BigInt::zero(), BigInt::zero()]
}

fn unit3(i: usize) -> Vec3 {
    let mut v = zero3();
    v[i] = BigInt::one();
    v
}

impl RingTable {
    pub fn new(c: [[[BigInt; 3]; 3]; 3]) -> Self {
        RingTable { c }
    }

    pub fn from_i64(c: [[[i64; 3]; 3]; 3]) -> Self {
        RingTable { c: c.map(|r| r.map(|v| v.map(BigInt::from))) }
    }

    /// Table with `e₀ = 1` and zero products among `e₁, e₂`.
    fn identity_skeleton() -> Self {
        let mut c: [[[BigInt; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            c[0][i] = unit3(i);
            c[i][0] = unit3(i);
        }
        RingTable { c }
    }

    fn set(&mut self, i: usize, j: usize, v: Vec3) {
        self.c[i][j] = v.clone();
        self.c[j][i] = v;
    }

    pub fn mul(&self, x: &Vec3, y: &Vec3) -> Vec3 {
        let mut out = zero3();
        for i in 0..3 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y[j].is_zero() {
                    continue;
                }
                let s = &x[i] * &y[j];
                for k in 0..3 {
                    out[k] += &s * &self.c[i][j][k];
                }
            }
        }
        out
    }

    pub fn check_commutative(&self) -> Result<(), RingError> {
        for i in 0..3 {
            for j in 0..3 {
                if self.c[i][j] != self.c[j][i] {
                    return Err(RingError::NotCommutative);
                }
            }
        }
        Ok(())
    }

    pub fn check_associative(&self) -> Result<(), RingError> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let (ei, ej, ek) = (unit3(i), unit3(j), unit3(k));
                    if self.mul(&self.mul(&ei, &ej), &ek) != self.mul(&ei, &self.mul(&ej, &ek)) {
                        return Err(RingError::NotAssociative);
                    }
                }
            }
        }
        Ok(())
    }

    fn first_is_identity(&self) -> bool {
        (0..3).all(|i| self.c[0][i] == unit3(i) && self.c[i][0] == unit3(i))
    }

    /// Trace of multiplication by `x`.
    pub fn trace(&self, x: &Vec3) -> BigInt {
        let mut t = BigInt::zero();
        for k in 0..3 {
            t += self.mul(x, &unit3(k))[k].clone();
        }
        t
    }

    /// Determinant of the trace pairing.
    pub fn disc(&self) -> BigInt {
        let mut m: [[BigInt; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.trace(&self.c[i][j]);
            }
        }
        det3(&m)
    }

    /// The table in the basis whose `i`-th vector has old coordinates
    /// `basis[i]`.
    pub fn rebase(&self, basis: &[Vec3; 3]) -> Result<RingTable, RingError> {
        let inv = inverse3_unimodular(basis).ok_or(RingError::BadBasis)?;
        let mut c: [[[BigInt; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let prod = self.mul(&basis[i], &basis[j]);
                // new coordinates: prod = Σ y_k basis[k]  =>  y = prod · inv
                let mut y = zero3();
                for k in 0..3 {
                    for l in 0..3 {
                        y[k] += &prod[l] * &inv[l][k];
                    }
                }
                c[i][j] = y;
            }
        }
        Ok(RingTable { c })
    }

    /// Integral identity element, if any.
    pub fn find_identity(&self) -> Option<Vec3> {
        // e·e_j = e_j for all j: linear in e with 9 equations
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..3 {
            for k in 0..3 {
                rows.push([self.c[0][j][k].clone(), self.c[1][j][k].clone(), self.c[2][j][k].clone()]);
                rhs.push(if j == k { BigInt::one() } else { BigInt::zero() });
            }
        }
        solve_integral(&rows, &rhs)
    }

    /// Rebased table with the identity as first basis vector.
    pub fn normalize_identity(&self) -> Result<RingTable, RingError> {
        if self.first_is_identity() {
            return Ok(self.clone());
        }
        let e = self.find_identity().ok_or(RingError::NoIdentity)?;
        let basis = complete_basis(&e).ok_or(RingError::NoIdentity)?;
        let t = self.rebase(&basis)?;
        if !t.first_is_identity() {
            return Err(RingError::NoIdentity);
        }
        Ok(t)
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn inverse3_unimodular(m: &[Vec3; 3]) -> Option<[Vec3; 3]> {
    let det = det3(m);
    if !(det.is_one() || det == -BigInt::one()) {
        return None;
    }
    let mut inv: [Vec3; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            // cofactor of (j, i)
            let r: Vec<usize> = (0..3).filter(|&x| x != j).collect();
            let c: Vec<usize> = (0..3).filter(|&x| x != i).collect();
            let minor = &m[r[0]][c[0]] * &m[r[1]][c[1]] - &m[r[0]][c[1]] * &m[r[1]][c[0]];
            let sign = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            inv[i][j] = sign * minor * &det;
        }
    }
    Some(inv)
}

/// Unimodular basis of ℤ³ whose first vector is the primitive vector `v`.
fn complete_basis(v: &Vec3) -> Option<[Vec3; 3]> {
    // row operations reduce v to ±e₀; the inverse accumulates in `m`
    // (columns of m are the new basis in old coordinates)
    let mut w = v.clone();
    let mut m: [Vec3; 3] = [unit3(0), unit3(1), unit3(2)];
    loop {
        let nz: Vec<usize> = (0..3).filter(|&i| !w[i].is_zero()).collect();
        if nz.is_empty() {
            return None;
        }
        if nz.len() == 1 {
            let i = nz[0];
            if !w[i].abs().is_one() {
                return None;
            }
            // swap to position 0 and fix the sign
            w.swap(0, i);
            for row in m.iter_mut() {
                row.swap(0, i);
            }
            if w[0].is_negative() {
                w[0] = -w[0].clone();
                for row in m.iter_mut() {
                    row[0] = -row[0].clone();
                }
            }
            break;
        }
        let (i, j) = {
            let mut s = nz.clone();
            s.sort_by(|&x, &y| w[x].abs().cmp(&w[y].abs()));
            (s[1], s[0])
        };
        let q = div_floor(&w[i], &w[j]);
        // w_i -= q w_j ; inverse op on columns: col_j += q col_i
        w[i] = &w[i] - &q * &w[j];
        for row in m.iter_mut() {
            row[j] = &row[j] + &q * &row[i];
        }
    }
    // basis vectors are columns of m
    let col = |k: usize| [m[0][k].clone(), m[1][k].clone(), m[2][k].clone()];
    let b = [col(0), col(1), col(2)];
    debug_assert_eq!(&b[0], v);
    Some(b)
}

/// Unique integral solution of an overdetermined consistent system of rank 3.
fn solve_integral(rows: &[Vec3], rhs: &[BigInt]) -> Option<Vec3> {
    use num_rational::BigRational;
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = rows[i].iter().map(|v| BigRational::from_integer(v.clone())).collect();
            r.push(BigRational::from_integer(rhs[i].clone()));
            r
        })
        .collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..3 {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let pv = a[row][col].clone();
        for k in col..4 {
            a[row][k] = &a[row][k] / &pv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..4 {
                    let t = &f * &a[row][k];
                    a[r][k] = &a[r][k] - t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < 3 || (row..n).any(|r| !a[r][3].is_zero()) {
        return None;
    }
    let mut x = zero3();
    for (r, &c) in pivots.iter().enumerate() {
        if !a[r][3].is_integer() {
            return None;
        }
        x[c] = a[r][3].to_integer();
    }
    Some(x)
}

pub fn form_to_ring(f: &CubicForm) -> CubicRing {
    CubicRing { a: f.x0.clone(), b: f.x1.clone(), c: f.x2.clone(), d: f.x3.clone() }
}

pub fn ring_disc(r: &CubicRing) -> BigInt {
    r.table().disc()
}

/// The form attached to a rank-3 commutative associative table.
pub fn ring_to_form(t: &RingTable) -> Result<CubicForm, RingError> {
    t.check_commutative()?;
    let t = t.normalize_identity()?;
    t.check_associative()?;
    // ω₁ω₂ = m₀ + m₁ω₁ + m₂ω₂; shift ω₁ by −m₂ and ω₂ by −m₁
    let m = &t.c[1][2];
    let u = -m[2].clone();
    let v = -m[1].clone();
    let basis = [unit3(0), [u, BigInt::one(), BigInt::zero()], [v, BigInt::zero(), BigInt::one()]];
    let n = t.rebase(&basis)?;
    let a = n.c[1][1][2].clone();
    let b = -n.c[1][1][1].clone();
    let c = n.c[2][2][2].clone();
    let d = -n.c[2][2][1].clone();
    let ring = CubicRing { a, b, c, d };
    if ring.table() != n {
        return Err(RingError::NotAssociative);
    }
    Ok(ring.form())
}

/// Stabilizer of `f` in GL₂(ℤ).
pub fn automorphisms(f: &CubicForm) -> Result<Vec<GL2Elem>, FormError> {
    let r = reduce::reduce(f)?;
    let g = &r.transform;
    let ginv = g.inverse_unimodular()?;
    let mut out: Vec<GL2Elem> = r.stabilizer.iter().map(|s| ginv.mul(s).mul(g)).collect();
    out.sort();
    Ok(out)
}

/// The ring automorphism induced by `m ∈ Stab(f)`, as images of `ω₁, ω₂`
/// in coordinates `(1, ω₁, ω₂)`.
pub fn induced_ring_map(f: &CubicForm, m: &GL2Elem) -> Option<[Vec3; 2]> {
    let t = form_to_ring(f).table();
    let l1: Vec3 = [BigInt::zero(), m.a.clone(), m.b.clone()];
    let l2: Vec3 = [BigInt::zero(), m.c.clone(), m.d.clone()];
    // (l1 + n1)(l2 + n2) ∈ ℤ
    let p = t.mul(&l1, &l2);
    // ω₁: p1 + n2 a + n1 c = 0 ; ω₂: p2 + n2 b + n1 d = 0
    let (p1, p2) = (&p[1], &p[2]);
    // solve [[c, a], [d, b]] (n1, n2) = (−p1, −p2)
    let mdet = &m.c * &m.b - &m.a * &m.d;
    if mdet.is_zero() {
        return None;
    }
    let n1 = (-(p1 * &m.b) + p2 * &m.a) / &mdet;
    let n2 = (-(p2 * &m.c) + p1 * &m.d) / &mdet;
    let s1: Vec3 = [n1, m.a.clone(), m.b.clone()];
    let s2: Vec3 = [n2, m.c.clone(), m.d.clone()];
    let images = [unit3(0), s1.clone(), s2.clone()];
    // σ(eᵢ)σ(eⱼ) = σ(eᵢeⱼ)
    for i in 0..3 {
        for j in 0..3 {
            let lhs = t.mul(&images[i], &images[j]);
            let prod = &t.c[i][j];
            let mut rhs = zero3();
            for k in 0..3 {
                for l in 0..3 {
                    rhs[l] += &prod[k] * &images[k][l];
                }
            }
            if lhs != rhs {
                return None;
            }
        }
    }
    Some([s1, s2])
}

/// Factorization type of a form over ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RationalType {
    /// `P = 0`.
    MultipleRoot,
    /// Three rational roots.
    ThreeRational,
    /// A linear factor times an irreducible quadratic.
    LinTimesQuad,
    Irreducible,
}

impl RationalType {
    pub fn label(&self) -> &'static str {
        match self {
            RationalType::MultipleRoot => "V0",
            RationalType::ThreeRational => "V1",
            RationalType::LinTimesQuad => "V2",
            RationalType::Irreducible => "V3",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Some(match s {
            "V0" => RationalType::MultipleRoot,
            "V1" => RationalType::ThreeRational,
            "V2" => RationalType::LinTimesQuad,
            "V3" => RationalType::Irreducible,
            _ => return None,
        })
    }

    pub fn code(&self) -> u8 {
        *self as u8
    }

    pub fn from_code(c: u8) -> Self {
        match c {
            0 => RationalType::MultipleRoot,
            1 => RationalType::ThreeRational,
            2 => RationalType::LinTimesQuad,
            _ => RationalType::Irreducible,
        }
    }
}

fn quad_type<T: Int>(disc: &T) -> RationalType {
    if is_square(disc) {
        RationalType::ThreeRational
    } else {
        RationalType::LinTimesQuad
    }
}

const CERT_PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// Integer roots of the monic cubic `t³ + pt² + qt + r`.
fn first_integer_root<T: Int>(p: &T, q: &T, r: &T) -> Option<T> {
    let h = |t: &T| ((t.clone() + p.clone()) * t.clone() + q.clone()) * t.clone() + r.clone();
    let m = p.abs().max(q.abs()).max(r.abs()) + T::one();
    let three = T::int(3);
    // monotone pieces split at the critical points of h
    let disc = p.clone() * p.clone() - three.clone() * q.clone();
    let mut cuts: Vec<T> = Vec::new();
    if !disc.is_negative() {
        let s = disc.sqrt();
        for k in [div_floor(&(-p.clone() - s.clone() - T::one()), &three), div_floor(&(-p.clone() + s.clone()), &three)]
        {
            cuts.push(k);
        }
    }
    let mut pieces: Vec<(T, T)> = Vec::new();
    let mut lo = -m.clone();
    for k in &cuts {
        let a = k.clone() - T::int(1);
        let b = k.clone() + T::int(2);
        for t in num_iter(&a, &b) {
            if h(&t).is_zero() {
                return Some(t);
            }
        }
        if a > lo {
            pieces.push((lo.clone(), a.clone()));
        }
        lo = lo.max(b + T::one());
    }
    if m >= lo {
        pieces.push((lo, m));
    }
    for (a, b) in pieces {
        if let Some(t) = monotone_root(&h, a, b) {
            return Some(t);
        }
    }
    None
}

fn num_iter<T: Int>(a: &T, b: &T) -> Vec<T> {
    let mut out = Vec::new();
    let mut t = a.clone();
    while t <= *b {
        out.push(t.clone());
        t = t + T::one();
    }
    out
}

fn monotone_root<T: Int>(h: &impl Fn(&T) -> T, mut lo: T, mut hi: T) -> Option<T> {
    let (hl, hh) = (h(&lo), h(&hi));
    if hl.is_zero() {
        return Some(lo);
    }
    if hh.is_zero() {
        return Some(hi);
    }
    if hl.signum() == hh.signum() {
        return None;
    }
    let rising = hl.is_negative();
    let two = T::int(2);
    while hi.clone() - lo.clone() > T::one() {
        let mid = div_floor(&(lo.clone() + hi.clone()), &two);
        let v = h(&mid);
        if v.is_zero() {
            return Some(mid);
        }
        if v.is_negative() == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    None
}

fn has_root_mod<T: Int>(f: &CubicForm<T>, p: i64) -> bool {
    let c = f.coeffs().map(|x| {
        let r = (x % T::int(p)).to_i64().unwrap();
        r.rem_euclid(p)
    });
    (0..p).any(|t| (((c[0] * t + c[1]) % p * t + c[2]) % p * t + c[3]) % p == 0)
}

/// Factorization type over ℚ.
pub fn classify_rational<T: Int>(f: &CubicForm<T>) -> RationalType {
    let disc = f.disc();
    if disc.is_zero() {
        return RationalType::MultipleRoot;
    }
    let (a, b, c, d) = (&f.x0, &f.x1, &f.x2, &f.x3);
    let four = T::int(4);
    if a.is_zero() {
        return quad_type(&(c.clone() * c.clone() - four * b.clone() * d.clone()));
    }
    if d.is_zero() {
        return quad_type(&(b.clone() * b.clone() - four * a.clone() * c.clone()));
    }
    for &p in &CERT_PRIMES {
        if !(a.clone() % T::int(p)).is_zero() && !has_root_mod(f, p) {
            return RationalType::Irreducible;
        }
    }
    // t = aθ is an integer root of t³ + bt² + act + a²d
    let q = a.clone() * c.clone();
    let r = a.clone() * a.clone() * d.clone();
    match first_integer_root(b, &q, &r) {
        None => RationalType::Irreducible,
        Some(t) => {
            let delta = (b.clone() + t.clone()) * (b.clone() - T::int(3) * t) - four * q;
            quad_type(&delta)
        }
    }
}

/// 1 for three real roots (P > 0), 0 otherwise.
pub fn real_signature<T: Int>(f: &CubicForm<T>) -> Result<u8, FormError> {
    let p = f.disc();
    if p.is_zero() {
        return Err(FormError::ZeroDiscriminant);
    }
    Ok(if p.is_positive() { 1 } else { 0 })
}

/// Splitting shape over 𝔽_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModShape {
    /// Three distinct rational roots; `𝔽_p³`.
    Split,
    /// Rational root and irreducible quadratic; `𝔽_p × 𝔽_{p²}`.
    LinQuad,
    /// Irreducible; `𝔽_{p³}`.
    Inert,
    /// Double and simple root; `𝔽_p[x]/(x²) × 𝔽_p`.
    DoubleSimple,
    /// Triple root; `𝔽_p[x]/(x³)`.
    Triple,
    /// Zero form; `𝔽_p[x, y]/(x, y)²`.
    Zero,
}

impl ModShape {
    pub fn is_etale(&self) -> bool {
        matches!(self, ModShape::Split | ModShape::LinQuad | ModShape::Inert)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChange {
    pub form_shape: ModShape,
    pub ring_shape: ModShape,
}

fn reduce_mod(c: &BigInt, p: i64) -> i64 {
    c.mod_floor(&BigInt::from(p)).to_i64().unwrap()
}

/// Root multiplicities of `f mod p` on the projective line.
fn form_shape_mod(f: &CubicForm, p: i64) -> ModShape {
    let c = f.coeffs().map(|x| reduce_mod(&x, p));
    if c.iter().all(|&x| x == 0) {
        return ModShape::Zero;
    }
    let mut mults = Vec::new();
    let inf = c.iter().take_while(|&&x| x == 0).count();
    if inf > 0 {
        mults.push(inf);
    }
    // affine polynomial in t with coefficients of descending degree
    let mut poly: Vec<i64> = c[inf..].to_vec();
    for t in 0..p {
        let mut m = 0;
        while poly.len() > 1 {
            // synthetic division by (x − t)
            let mut q = Vec::with_capacity(poly.len() - 1);
            let mut acc = 0i64;
            for &co in &poly {
                acc = (acc * t + co).rem_euclid(p);
                q.push(acc);
            }
            let rem = q.pop().unwrap();
            if rem != 0 {
                break;
            }
            poly = q;
            m += 1;
        }
        if m > 0 {
            mults.push(m);
        }
    }
    mults.sort_unstable();
    match (mults.iter().sum::<usize>(), mults.as_slice()) {
        (0, _) => ModShape::Inert,
        (1, _) => ModShape::LinQuad,
        (3, [1, 1, 1]) => ModShape::Split,
        (3, [1, 2]) => ModShape::DoubleSimple,
        (3, [3]) => ModShape::Triple,
        _ => unreachable!("degree-3 root multiplicities"),
    }
}

/// Algebra structure of `R/pR` from Frobenius and nilpotent counts.
fn ring_shape_mod(t: &RingTable, p: i64) -> ModShape {
    let c: Vec<i64> = (0..27).map(|i| reduce_mod(&t.c[i / 9][(i / 3) % 3][i % 3], p)).collect();
    let mul = |x: [i64; 3], y: [i64; 3]| -> [i64; 3] {
        let mut out = [0i64; 3];
        for i in 0..3 {
            for j in 0..3 {
                let s = x[i] * y[j] % p;
                if s == 0 {
                    continue;
                }
                for k in 0..3 {
                    out[k] = (out[k] + s * c[i * 9 + j * 3 + k]) % p;
                }
            }
        }
        out
    };
    let pow = |x: [i64; 3], mut e: u64| -> [i64; 3] {
        let mut base = x;
        let mut acc = [1, 0, 0];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    let elems: Vec<[i64; 3]> = (0..p * p * p).map(|n| [n % p, (n / p) % p, n / (p * p)]).collect();
    let log_p = |n: usize| -> u32 {
        let mut k = 0;
        let mut m = n;
        while m > 1 {
            m /= p as usize;
            k += 1;
        }
        k
    };
    let nil: Vec<[i64; 3]> = elems.iter().copied().filter(|&x| pow(x, 3) == [0, 0, 0]).collect();
    let nil_dim = log_p(nil.len());
    match nil_dim {
        0 => {
            let fixed = elems.iter().filter(|&&x| pow(x, p as u64) == x).count();
            match log_p(fixed) {
                3 => ModShape::Split,
                2 => ModShape::LinQuad,
                _ => ModShape::Inert,
            }
        }
        1 => ModShape::DoubleSimple,
        _ => {
            let square_zero = nil.iter().all(|&x| nil.iter().all(|&y| mul(x, y) == [0, 0, 0]));
            if square_zero {
                ModShape::Zero
            } else {
                ModShape::Triple
            }
        }
    }
}

/// Reduction of `f` and of its ring modulo a prime, computed independently.
pub fn base_change_mod_p(f: &CubicForm, p: u64) -> BaseChange {
    let p = p as i64;
    BaseChange { form_shape: form_shape_mod(f, p), ring_shape: ring_shape_mod(&form_to_ring(f).table(), p) }
}

/// Integer square root helper exported for callers that test squareness.
pub fn sqrt_if_square(v: &BigInt) -> Option<BigInt> {
    exact_sqrt(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(a: i64, b: i64, c: i64, d: i64) -> CubicForm {
        CubicForm::from_i64(a, b, c, d)
    }

    #[test]
    fn tables_for_examples() {
        let t = form_to_ring(&cf(0, 1, 1, 0)).table();
        assert_eq!(t.c[1][1], [0, -1, 0].map(BigInt::from));
        assert_eq!(t.c[2][2], [0, 0, 1].map(BigInt::from));
        assert_eq!(t.c[1][2], [0, 0, 0].map(BigInt::from));
        let t = form_to_ring(&cf(1, 1, 1, 1)).table();
        assert_eq!(t.c[1][1], [-1, -1, 1].map(BigInt::from));
        assert_eq!(t.c[2][2], [-1, -1, 1].map(BigInt::from));
        assert_eq!(t.c[1][2], [-1, 0, 0].map(BigInt::from));
        assert_eq!(ring_disc(&form_to_ring(&cf(1, 1, 1, 1))), BigInt::from(-16));
        assert_eq!(ring_disc(&form_to_ring(&cf(0, 1, 1, 0))), BigInt::from(1));
        assert_eq!(ring_disc(&form_to_ring(&cf(1, 0, 0, 1))), BigInt::from(-27));
        assert_eq!(ring_disc(&form_to_ring(&cf(0, 1, 0, 0))), BigInt::from(0));
    }

    #[test]
    fn idempotent_basis_of_z3() {
        let mut c = [[[0i64; 3]; 3]; 3];
        for i in 0..3 {
            c[i][i][i] = 1;
        }
        let f = ring_to_form(&RingTable::from_i64(c)).unwrap();
        assert!(reduce::equivalent(&f, &cf(0, 1, 1, 0)).unwrap());
    }

    #[test]
    fn untranslated_basis() {
        // ω₁ ↦ ω₁ + 2, ω₂ ↦ ω₂ − 3 in the ring of x³ + x + 1
        let f = cf(1, 0, 1, 1);
        let t = form_to_ring(&f).table();
        let shifted = t.rebase(&[unit3(0), [2.into(), 1.into(), 0.into()], [(-3).into(), 0.into(), 1.into()]]).unwrap();
        assert_ne!(shifted.c[1][2][1], BigInt::zero());
        assert_eq!(ring_to_form(&shifted).unwrap(), f);
    }

    #[test]
    fn rejects_bad_tables() {
        let mut c = [[[0i64; 3]; 3]; 3];
        for i in 0..3 {
            c[0][i][i] = 1;
            c[i][0][i] = 1;
        }
        c[1][2] = [0, 1, 0];
        c[2][1] = [0, 0, 1];
        assert_eq!(ring_to_form(&RingTable::from_i64(c)), Err(RingError::NotCommutative));
        let mut c = [[[0i64; 3]; 3]; 3];
        for i in 0..3 {
            c[0][i][i] = 1;
            c[i][0][i] = 1;
        }
        c[1][1] = [0, 0, 1];
        c[2][2] = [0, 0, 1];
        assert_eq!(ring_to_form(&RingTable::from_i64(c)), Err(RingError::NotAssociative));
        let c = [[[0i64; 3]; 3]; 3];
        assert_eq!(ring_to_form(&RingTable::from_i64(c)), Err(RingError::NoIdentity));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&cf(0, 1, 1, 0)).unwrap().len(), 6);
        assert_eq!(automorphisms(&cf(1, 0, 0, 1)).unwrap().len(), 2);
        assert_eq!(automorphisms(&cf(1, 0, -1, -1)).unwrap().len(), 1);
        assert!(automorphisms(&cf(0, 1, 0, 0)).is_err());
        let f = cf(5, -3, 7, 2).act(&GL2Elem::from_i64s(3, 2, 4, 3)).unwrap();
        for g in automorphisms(&f).unwrap() {
            assert_eq!(f.act(&g).unwrap(), f);
            assert!(induced_ring_map(&f, &g).is_some());
        }
        for g in automorphisms(&cf(0, 1, 1, 0)).unwrap() {
            assert!(induced_ring_map(&cf(0, 1, 1, 0), &g).is_some());
        }
    }

    #[test]
    fn rational_types() {
        assert_eq!(classify_rational(&cf(0, 1, 1, 0)), RationalType::ThreeRational);
        assert_eq!(classify_rational(&cf(0, 1, 0, 1)), RationalType::LinTimesQuad);
        assert_eq!(classify_rational(&cf(1, 0, -1, -1)), RationalType::Irreducible);
        assert_eq!(classify_rational(&cf(0, 1, 0, 0)), RationalType::MultipleRoot);
        // (x − 2)(x − 3)(2x + 1)
        assert_eq!(classify_rational(&cf(2, -9, 7, 6)), RationalType::ThreeRational);
        // (3x − 1)(x² + 1)
        assert_eq!(classify_rational(&cf(3, -1, 3, -1)), RationalType::LinTimesQuad);
    }

    #[test]
    fn signatures() {
        assert_eq!(real_signature(&cf(0, 1, 1, 0)), Ok(1));
        assert_eq!(real_signature(&cf(1, 0, -1, -1)), Ok(0));
        assert_eq!(real_signature(&cf(1, 1, 1, 1)), Ok(0));
        assert!(real_signature(&cf(0, 1, 0, 0)).is_err());
    }

    #[test]
    fn reductions_mod_p() {
        let bc = base_change_mod_p(&cf(1, 0, -1, -1), 23);
        assert_eq!(bc.form_shape, ModShape::DoubleSimple);
        assert_eq!(bc.ring_shape, ModShape::DoubleSimple);
        for p in [2, 3, 5, 7] {
            let bc = base_change_mod_p(&cf(0, 1, 1, 0), p);
            assert_eq!((bc.form_shape, bc.ring_shape), (ModShape::Split, ModShape::Split));
        }
        let bc = base_change_mod_p(&cf(1, 0, 0, 1), 2);
        assert_eq!((bc.form_shape, bc.ring_shape), (ModShape::LinQuad, ModShape::LinQuad));
        let bc = base_change_mod_p(&cf(1, 0, 0, 1), 3);
        assert_eq!((bc.form_shape, bc.ring_shape), (ModShape::Triple, ModShape::Triple));
        let bc = base_change_mod_p(&cf(3, 3, 6, 9), 3);
        assert_eq!((bc.form_shape, bc.ring_shape), (ModShape::Zero, ModShape::Zero));
        let bc = base_change_mod_p(&cf(1, 0, -1, 1), 5);
        assert_eq!(bc.form_shape, bc.ring_shape);
    }
}
