mod common;

use bikraw::angular::*;
use bikraw::poly::limit_law_gap;
use bikraw::{Error, Rational};
use common::{q, Draws};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn fact(n: i64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn delta(a: i64, b: i64, c: i64) -> f64 {
    // arguments are 2j
    (fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((b + c - a) / 2) / fact((a + b + c) / 2 + 1)).sqrt()
}

fn tri(a: i64, b: i64, c: i64) -> bool {
    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// Racah's closed sum for the 6-j symbol, arguments as 2j.
fn sixj(j: [i64; 6]) -> f64 {
    let [j1, j2, j3, j4, j5, j6] = j;
    if !(tri(j1, j2, j3) && tri(j1, j5, j6) && tri(j4, j2, j6) && tri(j4, j5, j3)) {
        return 0.0;
    }
    let pre = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
    let a = [j1 + j2 + j3, j1 + j5 + j6, j4 + j2 + j6, j4 + j5 + j3].map(|v| v / 2);
    let b = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4].map(|v| v / 2);
    let lo = *a.iter().max().unwrap();
    let hi = *b.iter().min().unwrap();
    let mut s = 0.0;
    for t in lo..=hi {
        let den: f64 = a.iter().map(|&x| fact(t - x)).product::<f64>() * b.iter().map(|&x| fact(x - t)).product::<f64>();
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * fact(t + 1) / den;
    }
    pre * s
}

/// Standard 9-j as a sum over three 6-j symbols, arguments as 2j, row-major.
fn ninej_oracle(j: [i64; 9]) -> f64 {
    let [j11, j12, j13, j21, j22, j23, j31, j32, j33] = j;
    let lo = [(j11 - j33).abs(), (j32 - j21).abs(), (j12 - j23).abs()].into_iter().max().unwrap();
    let hi = [j11 + j33, j32 + j21, j12 + j23].into_iter().min().unwrap();
    let mut s = 0.0;
    let mut x = lo;
    while x <= hi {
        let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
        s += sign
            * (x + 1) as f64
            * sixj([j11, j21, j31, j32, j33, x])
            * sixj([j12, j22, j32, j21, x, j23])
            * sixj([j13, j23, j33, x, j11, j12]);
        x += 2;
    }
    s
}

fn all_args(max: u32) -> impl Iterator<Item = [u32; 9]> {
    (0..(max + 1).pow(9)).map(move |mut code| {
        let mut v = [0u32; 9];
        for slot in v.iter_mut() {
            *slot = code % (max + 1);
            code /= max + 1;
        }
        v
    })
}

#[test]
fn ninej_matches_six_j_oracle() {
    let mut cache = AngularCache::new();
    let mut nonzero = 0;
    for v in all_args(2) {
        let args = NineJArgs::from_two_j(v);
        let exact = cache.ninej(&args).to_f64();
        let oracle = ninej_oracle(v.map(|x| x as i64));
        assert!((exact - oracle).abs() < 1e-12, "{v:?}: {exact} vs {oracle}");
        if exact != 0.0 {
            nonzero += 1;
        }
    }
    assert!(nonzero > 100);
}

#[test]
fn known_values() {
    // {1/2 1/2 1; 1/2 1/2 1; 1 1 2} = 1/9
    let v = ninej(&NineJArgs::from_two_j([1, 1, 2, 1, 1, 2, 2, 2, 4]));
    assert_eq!(v.to_rational(), Some(q(1, 9)));
    // {1/2 1/2 0; 1/2 1/2 0; 0 0 0} = 1/2
    let v = ninej(&NineJArgs::from_two_j([1, 1, 0, 1, 1, 0, 0, 0, 0]));
    assert_eq!(v.to_rational(), Some(q(1, 2)));
}

#[test]
fn terms_share_one_radicand() {
    let mut cache = AngularCache::new();
    for v in all_args(3).step_by(7) {
        let terms = cache.ninej_terms(&NineJArgs::from_two_j(v));
        if let Some(first) = terms.first() {
            assert!(terms.iter().all(|t| t.radicand() == first.radicand()), "{v:?}");
        }
    }
}

#[test]
fn triangle_violation_is_zero() {
    // 1/2 + 1/2 cannot couple to 2
    assert!(ninej(&NineJArgs::from_two_j([1, 1, 4, 1, 1, 2, 2, 2, 2])).is_zero());
    // half-integer parity mismatch
    assert!(ninej(&NineJArgs::from_two_j([1, 2, 2, 1, 1, 2, 2, 2, 2])).is_zero());
    assert!(triangle_delta(HalfInt::int(1), HalfInt::int(1), HalfInt::int(3)).is_zero());
}

#[test]
fn orthogonality_small() {
    let report = ninej_orthocheck(3);
    assert!(report.passed(), "{:?}", report.failures.first());
    assert!(report.sums > 0);
}

#[test]
fn weight_is_square_of_f00() {
    let mut cache = AngularCache::new();
    let mut checked = 0;
    for code in 0..7u32.pow(4) {
        let abcd = [code % 7, code / 7 % 7, code / 49 % 7, code / 343].map(HalfInt::from_two_j);
        let total: u32 = abcd.iter().map(|h| h.two_j).sum();
        for big_n in 0..=total / 2 {
            for x in 0..=big_n {
                for y in 0..=big_n - x {
                    let w = match weight_w_xy(x, y, abcd, big_n) {
                        Ok(w) => w,
                        Err(Error::NegativeArgument { .. }) => continue,
                        Err(e) => panic!("{e}"),
                    };
                    let f = f_mn_normalized_cached(&mut cache, x, y, 0, 0, abcd, big_n).unwrap();
                    assert_eq!(w, f.square(), "abcd={abcd:?} N={big_n} x={x} y={y}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn negative_substitution_rejected() {
    let abcd = [1, 1, 1, 1].map(HalfInt::int);
    assert!(matches!(weight_w_xy(3, 0, abcd, 3), Err(Error::NegativeArgument { .. })));
    assert!(matches!(f_mn_normalized(0, 0, 0, 0, abcd, 5), Err(Error::NegativeArgument { .. })));
}

fn is_identity(g: &[Vec<Rational>]) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

#[test]
fn racah_orthonormal_on_random_draws() {
    let mut d = Draws::new(5);
    let mut done = 0;
    while done < 8 {
        let n = d.int(1, 6) as u32;
        let p = RacahParams::new(d.rational(0, 6, 7), d.rational(0, 6, 7), d.rational(-6, 6, 7), n);
        match racah_gram(&p) {
            Ok(g) => {
                assert!(is_identity(&g), "{p:?}");
                done += 1;
            }
            Err(Error::ZeroFactor(_) | Error::ZeroDenominator { .. }) => continue,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn racah_unit_parameters_are_singular() {
    // (-gamma)_N = (-1)_3 = 0: the normalizer is undefined.
    let p = RacahParams::new(q(1, 1), q(1, 1), q(1, 1), 3);
    assert!(matches!(racah_weight_and_norm(&p), Err(Error::ZeroFactor(_))));
    assert_eq!(racah_polynomial(1, 1, &p).unwrap(), q(11, 9));
}

#[test]
fn limit_law_gap_shrinks() {
    let gaps: Vec<f64> = [4, 8, 16, 32, 64].iter().map(|&t| limit_law_gap([2, 1, 1, 1], 2, t).unwrap()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[4] < 1e-2);
    // roughly halves with t
    assert!(gaps[3] / gaps[4] > 1.8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ninej_transpose_symmetric(v in prop::array::uniform9(0u32..5)) {
        let t = [v[0], v[3], v[6], v[1], v[4], v[7], v[2], v[5], v[8]];
        prop_assert_eq!(ninej(&NineJArgs::from_two_j(v)), ninej(&NineJArgs::from_two_j(t)));
    }

    #[test]
    fn ninej_row_swap_phase(v in prop::array::uniform9(0u32..5)) {
        // swapping rows 1 and 2 multiplies by (-1)^(sum of all j)
        let s = [v[3], v[4], v[5], v[0], v[1], v[2], v[6], v[7], v[8]];
        let a = ninej(&NineJArgs::from_two_j(v));
        let b = ninej(&NineJArgs::from_two_j(s));
        let total: u32 = v.iter().sum();
        if total.is_multiple_of(4) || total % 2 == 1 {
            prop_assert_eq!(a.clone(), b.clone());
        } else {
            prop_assert_eq!(a, -b);
        }
    }
}
