//! Brute-force class enumeration used to check the reduction-based sweep.
//!
//! Every form in a coefficient box is a node; nodes are joined when one of
//! the generators `[[1,0],[±1,1]]`, `[[0,1],[1,0]]`, `diag(1,−1)`, `−I` maps
//! one to the other inside an enlarged box. Stabilizers come from a search
//! over small matrices and rational types from the rational root theorem, so
//! nothing here relies on reduction theory except the key used to name a
//! class.

use crate::enumerate::ClassRecord;
use crate::forms::{CubicForm, GL2Elem};
use crate::reduce::reduce_canonical;
use crate::ring::RationalType;
use num_bigint::BigInt;
use std::collections::HashMap;

/// Ratio between the scanned box and the box used for orbit closure.
pub const ENLARGE: i64 = 2;

/// Matrix entries searched for stabilizer elements.
pub const STAB_SEARCH: i64 = 6;

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn disc(f: [i64; 4]) -> i64 {
    let [a, b, c, d] = f;
    b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d + 18 * a * b * c * d - 27 * a * a * d * d
}

pub fn act(f: [i64; 4], g: [i64; 4]) -> [i64; 4] {
    let h =
        CubicForm::<i64>::new(f[0], f[1], f[2], f[3]).act(&GL2Elem::new(g[0], g[1], g[2], g[3])).expect("unimodular");
    [h.x0, h.x1, h.x2, h.x3]
}

const GENERATORS: [[i64; 4]; 5] = [[1, 0, 1, 1], [1, 0, -1, 1], [0, 1, 1, 0], [1, 0, 0, -1], [-1, 0, 0, -1]];

fn height(f: &[i64; 4]) -> i64 {
    f.iter().map(|v| v.abs()).max().unwrap()
}

pub fn unimodular_box(bound: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let det = a * d - b * c;
                    if det == 1 || det == -1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Stabilizer order by exhaustive search over small matrices.
pub fn brute_stab_order(f: [i64; 4], bound: i64) -> usize {
    unimodular_box(bound).into_iter().filter(|&g| act(f, g) == f).count()
}

/// Members of a component given the wide stabilizer search; every member
/// also gets a narrow search with entries in `[−2, 2]`.
pub const STAB_PROBES: usize = 24;

fn component_stab_order(members: &[[i64; 4]], wide: &[[i64; 4]], narrow: &[[i64; 4]]) -> usize {
    let count = |f: [i64; 4], mats: &[[i64; 4]]| mats.iter().filter(|&&g| act(f, g) == f).count();
    let mut by_height: Vec<[i64; 4]> = members.to_vec();
    by_height.sort_by_key(|f| (height(f), *f));
    let w = by_height.iter().take(STAB_PROBES).map(|&f| count(f, wide)).max().unwrap_or(0);
    let n = members.iter().map(|&f| count(f, narrow)).max().unwrap_or(0);
    w.max(n)
}

fn divisors(n: i64) -> Vec<i64> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            out.push(k);
            out.push(n / k);
        }
        k += 1;
    }
    out
}

/// Rational type from the rational root theorem on the projective line.
pub fn brute_rational_type(f: [i64; 4]) -> RationalType {
    if disc(f) == 0 {
        return RationalType::MultipleRoot;
    }
    let mut roots = 0;
    // leading zeros are roots at infinity, trailing zeros roots at 0
    let lead = f.iter().take_while(|&&v| v == 0).count();
    let trail = f.iter().rev().take_while(|&&v| v == 0).count();
    roots += lead + trail;
    let core = &f[lead..4 - trail];
    if core.len() > 1 {
        let (l, k) = (core[0], core[core.len() - 1]);
        let mut seen = Vec::new();
        for r in divisors(k) {
            for s in divisors(l) {
                for sr in [r, -r] {
                    let g = num_integer::gcd(sr, s);
                    let key = (sr / g, s / g);
                    if seen.contains(&key) {
                        continue;
                    }
                    seen.push(key);
                    // homogeneous evaluation of core at (sr, s)
                    let deg = core.len() - 1;
                    let mut acc: i128 = 0;
                    for (i, &co) in core.iter().enumerate() {
                        acc += co as i128 * (key.0 as i128).pow((deg - i) as u32) * (key.1 as i128).pow(i as u32);
                    }
                    if acc == 0 {
                        roots += 1;
                    }
                }
            }
        }
    }
    match roots {
        0 => RationalType::Irreducible,
        1 => RationalType::LinTimesQuad,
        _ => RationalType::ThreeRational,
    }
}

/// Classes with `0 < |P| ≤ disc_bound` that have a representative with all
/// coefficients in `[−coeff_bound, coeff_bound]`.
pub fn oracle_enumerate_box(coeff_bound: i64, disc_bound: i64) -> Vec<ClassRecord> {
    let comps = box_components(coeff_bound * ENLARGE, disc_bound);
    let wide = unimodular_box(STAB_SEARCH);
    let narrow = unimodular_box(2);
    let mut out: Vec<ClassRecord> = comps
        .into_iter()
        .filter(|members| members.iter().any(|f| height(f) <= coeff_bound))
        .map(|members| {
            let rep = *members.iter().min_by_key(|f| (height(f), **f)).unwrap();
            let canonical = reduce_canonical(&CubicForm::from_i64(rep[0], rep[1], rep[2], rep[3])).expect("P ≠ 0");
            let p = disc(rep);
            ClassRecord {
                canonical,
                disc: BigInt::from(p),
                aut_order: component_stab_order(&members, &wide, &narrow) as u8,
                rtype: brute_rational_type(rep),
                signature: u8::from(p > 0),
            }
        })
        .collect();
    out.sort_by(|x, y| (x.disc.magnitude(), &x.canonical).cmp(&(y.disc.magnitude(), &y.canonical)));
    out
}

/// Union-find components of the forms with `0 < |P| ≤ disc_bound` in a box.
pub fn box_components(coeff_bound: i64, disc_bound: i64) -> Vec<Vec<[i64; 4]>> {
    let e = coeff_bound;
    let mut index: HashMap<[i64; 4], usize> = HashMap::new();
    let mut nodes: Vec<[i64; 4]> = Vec::new();
    for a in -e..=e {
        for b in -e..=e {
            for c in -e..=e {
                for d in -e..=e {
                    let f = [a, b, c, d];
                    let p = disc(f);
                    if p != 0 && p.abs() <= disc_bound {
                        index.insert(f, nodes.len());
                        nodes.push(f);
                    }
                }
            }
        }
    }
    let mut dsu = Dsu { parent: (0..nodes.len()).collect() };
    for (i, f) in nodes.iter().enumerate() {
        for g in GENERATORS {
            if let Some(&j) = index.get(&act(*f, g)) {
                dsu.union(i, j);
            }
        }
    }
    let mut comps: HashMap<usize, Vec<[i64; 4]>> = HashMap::new();
    for (i, f) in nodes.iter().enumerate() {
        let r = dsu.find(i);
        comps.entry(r).or_default().push(*f);
    }
    let mut v: Vec<Vec<[i64; 4]>> = comps.into_values().collect();
    for c in v.iter_mut() {
        c.sort();
    }
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_box() {
        let v = oracle_enumerate_box(1, 1);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].disc, BigInt::from(1));
        assert_eq!(v[0].aut_order, 6);
    }

    #[test]
    fn brute_types() {
        assert_eq!(brute_rational_type([0, 1, 1, 0]), RationalType::ThreeRational);
        assert_eq!(brute_rational_type([0, 1, 0, 1]), RationalType::LinTimesQuad);
        assert_eq!(brute_rational_type([1, 0, -1, -1]), RationalType::Irreducible);
        assert_eq!(brute_rational_type([2, -9, 7, 6]), RationalType::ThreeRational);
        assert_eq!(brute_stab_order([1, 0, 0, 1], 3), 2);
    }

    #[test]
    fn monotone_in_box() {
        let small = oracle_enumerate_box(2, 60);
        let big = oracle_enumerate_box(3, 60);
        for r in &small {
            assert!(big.contains(r));
        }
    }
}
