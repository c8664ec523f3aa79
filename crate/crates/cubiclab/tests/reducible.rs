use cubiclab::enumerate::{enumerate_classes, Sign};
use cubiclab::reducible::{count_reducible_weighted, enumerate_reducible, psi_map, quad_canonical, WType};
use cubiclab::ring::RationalType;
use cubiclab::{BElem, CubicForm};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

#[test]
fn psi_is_a_bijection_onto_v2() {
    let x = 10_000;
    let mut image: HashMap<CubicForm, u8> = HashMap::new();
    for r in enumerate_reducible(x, Sign::Both) {
        if r.wtype != WType::W2 {
            continue;
        }
        let c = psi_map(&r.canonical).unwrap();
        assert_eq!(c.disc().magnitude(), r.norm_p.magnitude());
        assert!(image.insert(c, r.stab_order).is_none(), "psi not injective");
    }
    let v2: HashMap<CubicForm, u8> = enumerate_classes(x, Sign::Both)
        .unwrap()
        .filter(|c| c.rtype == RationalType::LinTimesQuad)
        .map(|c| (c.canonical, c.aut_order))
        .collect();
    assert_eq!(image, v2);
}

#[test]
fn psi_is_constant_on_orbits() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in enumerate_reducible(500, Sign::Both).into_iter().step_by(3) {
        let b = BElem::new(
            BigInt::from(if rng.gen() { 1 } else { -1 }),
            BigInt::from(if rng.gen() { 1 } else { -1 }),
            BigInt::from(rng.gen_range(-20..=20)),
        );
        let y = r.canonical.act_b(&b).unwrap();
        assert_eq!(quad_canonical(&y).unwrap(), r.canonical);
        assert_eq!(psi_map(&y).unwrap(), psi_map(&r.canonical).unwrap());
    }
}

#[test]
fn weighted_count_near_main_term() {
    let x = 100_000u64;
    let main = std::f64::consts::PI.powi(2) / 24.0 * x as f64;
    for s in [Sign::Pos, Sign::Neg] {
        let c = count_reducible_weighted(x, s).to_f64().unwrap();
        assert!((c / main - 1.0).abs() < 0.1, "{s:?}: {c} vs {main}");
    }
}
