use cubiclab::archimedean::{appendix_matrices, gamma_matrix_real};
use cubiclab::local_zeta::{
    explicit_local_zeta, explicit_local_zeta_raw, formula_series, measure_oracle, oracle_series,
    orbital_euler_complete, orbital_euler_truncated, sample_discriminant, Factor, LocalZetaFn, SplitType,
};
use num_complex::Complex64;
use num_traits::Zero;

const TYPES: [SplitType; 3] = [SplitType::Sp, SplitType::Ur, SplitType::Rm];

#[test]
fn formula_matches_oracle_to_degree_four() {
    for p in [2u64, 3, 5, 7] {
        for t in TYPES {
            let d = sample_discriminant(p, t);
            assert_eq!(oracle_series(p, d, 4).unwrap(), formula_series(p, t, 4), "p = {p}, {t:?}, D = {d}");
        }
    }
}

#[test]
fn oracle_ignores_the_representative() {
    // different ramified extensions of Q_3 and Q_2, same type
    for (p, a, b) in [(3u64, -3i64, 24i64), (3, -3, 12), (2, -4, 8), (2, -4, -8), (2, -3, 5), (5, 5, -15)] {
        assert_eq!(oracle_series(p, a, 4).unwrap(), oracle_series(p, b, 4).unwrap(), "p = {p}: {a} vs {b}");
    }
}

#[test]
fn oracle_parity_and_support() {
    // ord R₂ − ord D is even on every nonempty stratum
    for p in [2u64, 3, 5] {
        for t in TYPES {
            let d = sample_discriminant(p, t);
            let delta = cubiclab::int::valuation(d, p as i64);
            for ((_, j), mu) in measure_oracle(p, d, 4).unwrap() {
                if (j + delta) % 2 == 1 {
                    assert!(mu.is_zero());
                }
            }
        }
    }
}

#[test]
fn cancellation_keeps_the_function() {
    for q in [2u64, 3, 4, 5, 8, 9, 25] {
        for t in TYPES {
            let raw = explicit_local_zeta_raw(q, t);
            let red = explicit_local_zeta(q, t);
            assert!(raw.same_function(&red));
            assert!(red.denominator_in_fixed_set());
            assert_eq!(raw.series(6), red.series(6));
        }
        // rm loses exactly the (1 − T₁T₂²) factor
        let rm = explicit_local_zeta(q, SplitType::Rm);
        assert!(!rm.denominator.contains_key(&Factor::new(1, 1, 2)));
        assert_eq!(rm.denominator.len(), 3);
    }
    // R_ur = (1 − (T₁T₂²)²)/(1 − T₁²)
    let sq = Factor::new(1, 1, 2).poly().mul(&Factor::new(1, 1, 2).poly());
    let mut plus = Factor::new(1, 1, 2).poly();
    plus.0.insert((1, 2), num_rational::BigRational::from_integer(1.into()));
    assert_eq!(Factor::new(1, 2, 4).poly(), Factor::new(1, 1, 2).poly().mul(&plus));
    assert_ne!(sq, Factor::new(1, 2, 4).poly());
}

#[test]
fn rendering_is_canonical() {
    let a = explicit_local_zeta(5, SplitType::Ur).to_string();
    let b = explicit_local_zeta(5, SplitType::Ur).to_string();
    assert_eq!(a, b);
    assert_eq!(a, "(1 + T1*T2^2) / ((1 - T2^2) * (1 - T1^2) * (1 - 5*T1^2*T2^2))");
    assert_eq!(explicit_local_zeta(5, SplitType::Rm).to_string(), "1 / ((1 - T2^2) * (1 - T1) * (1 - 5*T1^2*T2^2))");
    let f = LocalZetaFn { q: 3, numerator: Factor::new(1, 1, 0).poly(), denominator: Default::default() };
    assert_eq!(f.to_string(), "(1 - T1)");
}

#[test]
fn euler_product_two_routes() {
    let s = Complex64::new(2.0, 0.0);
    for d in [-23i64, -4, 5] {
        let e = orbital_euler_truncated(d, s, s, 1000).unwrap();
        assert!((e.by_factors - e.closed_form).norm() < 1e-10, "D = {d}");
        let full = orbital_euler_complete(d, 2.0, 2.0).unwrap();
        let gap = (full - e.closed_form.re).abs() / full.abs();
        assert!(gap <= e.tail_bound, "D = {d}: gap {gap:e} vs bound {:e}", e.tail_bound);
    }
    // complex arguments inside the region
    let z = Complex64::new(1.5, 3.0);
    let e = orbital_euler_truncated(-23, z, Complex64::new(1.2, -0.5), 300).unwrap();
    assert!((e.by_factors - e.closed_form).norm() < 1e-10 * e.closed_form.norm());
    assert!(orbital_euler_truncated(-23, Complex64::new(1.0, 0.0), s, 10).is_err());
    assert!(orbital_euler_truncated(-23, s, Complex64::new(0.5, 0.0), 10).is_err());
    assert!(orbital_euler_truncated(-12, s, s, 10).is_err());
}

#[test]
fn all_split_is_pure_zeta() {
    let s = Complex64::new(2.0, 0.0);
    let e = orbital_euler_truncated(1, s, s, 1000).unwrap();
    let full = orbital_euler_complete(1, 2.0, 2.0).unwrap();
    assert!((full - e.by_factors.re).abs() / full <= e.tail_bound);
}

#[test]
fn tail_shrinks_with_more_primes() {
    let s = Complex64::new(2.0, 0.0);
    let full = orbital_euler_complete(-4, 2.0, 2.0).unwrap();
    let mut last = f64::INFINITY;
    for pm in [10u64, 100, 1000] {
        let e = orbital_euler_truncated(-4, s, s, pm).unwrap();
        let gap = (full - e.closed_form.re).abs();
        assert!(gap < last);
        last = gap;
    }
}

#[test]
fn gamma_matrix_shape() {
    let z = |x: f64| Complex64::new(x, 0.0);
    let m = gamma_matrix_real(z(1.0), z(1.3)).unwrap();
    assert!(m[0][0].norm() < 1e-15 && m[0][1].norm() < 1e-15 && m[1][0].norm() < 1e-15);
    let m = gamma_matrix_real(z(0.7), z(1.3)).unwrap();
    assert!((m[0][1] - m[1][0]).norm() < 1e-15);
    let a = appendix_matrices(z(0.7), z(1.3)).unwrap();
    assert_eq!(a.real_second[0][1], z(0.0));
    assert_eq!(a.real_second[1][0], z(0.0));
}
