use cubiclab::dirichlet::{series_p_orders, DirichletCoeffs};
use cubiclab::enumerate::{enumerate_compact, Sign};
use cubiclab::ring::RationalType;
use num_bigint::BigInt;
use num_rational::BigRational;

/// V¹ class counts by discriminant under the three natural weightings:
/// unweighted, `1/#Aut`, and `6/#Aut` (orders of ℚ³ up to equality rather
/// than up to permutation of the factors).
fn v1_counts(n: usize) -> [Vec<BigRational>; 3] {
    let zero = || vec![BigRational::from_integer(0.into()); n];
    let mut out = [zero(), zero(), zero()];
    for c in enumerate_compact(n as u64, Sign::Pos).unwrap() {
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

#[test]
fn exactly_one_weighting_matches_p() {
    let n = 200;
    let p: DirichletCoeffs = series_p_orders(n);
    let counts = v1_counts(n);
    let matches: Vec<usize> = (0..3).filter(|&k| counts[k] == p.coeffs()).collect();
    assert_eq!(matches, vec![2]);
}
