//! Integer abstraction shared by the exact algorithms.
//!
//! Everything that must be exact is written once against [`Int`] and then
//! used with `BigInt` on the public surface and `i128` inside the hot
//! enumeration loops.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;

pub trait Int:
    Clone
    + Ord
    + Eq
    + Hash
    + Debug
    + Display
    + Integer
    + Signed
    + Roots
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn int(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits")
    }

    fn to_big(&self) -> BigInt;

    fn from_big(v: &BigInt) -> Option<Self>;
}

impl Int for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

impl Int for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl Int for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

/// Sign of `v` as an `Ordering` against zero.
pub fn sgn<T: Int>(v: &T) -> Ordering {
    v.cmp(&T::zero())
}

/// Multiply an ordering by a sign.
pub fn flip(o: Ordering, by: Ordering) -> Ordering {
    match by {
        Ordering::Less => o.reverse(),
        Ordering::Equal => Ordering::Equal,
        Ordering::Greater => o,
    }
}

/// `Some(r)` with `r*r == v` when `v` is a perfect square.
pub fn exact_sqrt<T: Int>(v: &T) -> Option<T> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    if r.clone() * r.clone() == *v {
        Some(r)
    } else {
        None
    }
}

pub fn is_square<T: Int>(v: &T) -> bool {
    exact_sqrt(v).is_some()
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Floor of `num/den` for `den != 0` (rounds toward negative infinity).
pub fn div_floor<T: Int>(num: &T, den: &T) -> T {
    num.div_floor(den)
}

/// Ceiling of `num/den` for `den != 0`.
pub fn div_ceil<T: Int>(num: &T, den: &T) -> T {
    -((-num.clone()).div_floor(den))
}

/// Trial-division factorisation of a small positive integer.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    factor_u64(n).len() == 1 && factor_u64(n)[0].1 == 1
}

pub fn primes_up_to(n: usize) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter_map(|(k, &b)| if b { Some(k as u64) } else { None }).collect()
}

pub fn is_squarefree_u64(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: i64, p: i64) -> u32 {
    assert!(n != 0);
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}
