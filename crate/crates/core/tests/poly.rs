mod common;

use bikraw::poly::*;
use bikraw::series::hyp_terminating;
use bikraw::surd::Surd;
use bikraw::{Error, Rational, Scalar};
use common::{q, Draws};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn is_identity(g: &[Vec<Surd>]) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, v)| if i == j { *v == Surd::one() } else { v.is_zero() })
    })
}

#[test]
fn uniform_parameters_first_degree() {
    let ones = TuvwParams::uniform(q(1, 1));
    for (x, y) in grid(2) {
        let expected = q(1, 1) - q((x + y) as i64, 2);
        assert_eq!(poly_p(1, 0, x, y, 2, &ones).unwrap(), expected);
        assert_eq!(poly_p(0, 1, x, y, 2, &ones).unwrap(), expected);
    }
}

#[test]
fn worked_parameters() {
    let p = PParams::from_ints([2, 1, 1, 1]).unwrap();
    let eta = eta_from_p(&p).unwrap();
    let bar = etabar_from_p(&p).unwrap();
    assert_eq!(complement_closed_form(&p), eta.complement);
    assert!(eta.complement > Rational::zero() && bar.complement > Rational::zero());
    let t = tuvw_from_p(&p);
    assert_eq!(t.t, q(9, 10));
    assert_eq!(t.w, q(4, 5));
}

#[test]
fn degenerate_weight_rejected() {
    let p = PParams::from_ints([1, 1, 1, 1]).unwrap();
    assert!(matches!(r_mn_explicit(0, 0, 0, 0, 1, &p), Err(Error::DegenerateWeight)));
    assert!(eta_from_p(&p).is_err());
}

#[test]
fn orthonormal_for_reference_p() {
    let p = PParams::from_ints([2, 1, 1, 1]).unwrap();
    for n in 0..=4 {
        assert!(is_identity(&r_gram_exact(n, &p).unwrap()), "N = {n}");
        assert!(analytic_norm_discrepancy(n, &p).unwrap().is_zero());
    }
}

#[test]
fn orthonormal_for_random_p() {
    let mut d = Draws::new(21);
    for _ in 0..4 {
        let p = d.p_exact();
        for n in 1..=3 {
            assert!(is_identity(&r_gram_exact(n, &p).unwrap()), "{p:?} N = {n}");
        }
    }
}

#[test]
fn float_gram_is_close() {
    let p = PParams::new([2.0, 1.0, 1.0, 1.0]).unwrap();
    assert!(r_gram_residual_f64(4, &p).unwrap() < 1e-12);
    let p = PParams::new([0.3, 1.7, 2.2, 0.9]).unwrap();
    assert!(r_gram_residual_f64(3, &p).unwrap() < 1e-12);
}

#[test]
fn explicit_r_agrees_with_composition() {
    let p = PParams::from_ints([2, 1, 1, 1]).unwrap();
    for n in 0..=3 {
        for (m, k) in grid(n) {
            for (x, y) in grid(n) {
                let a = r_mn_explicit(m, k, x, y, n, &p).unwrap();
                let b = orthonormal_r_exact(m, k, x, y, n, &p).unwrap();
                assert_eq!(a, b, "N={n} (m,n)=({m},{k}) (x,y)=({x},{y})");
            }
        }
    }
}

#[test]
fn explicit_form_sign_for_negative_cross() {
    let p = PParams::from_ints([1, 2, 3, 4]).unwrap();
    // m = n = 0 at N = 1: the composed R is positive, the explicit form flips at x = y = 0
    let direct = orthonormal_r_exact(0, 0, 0, 0, 1, &p).unwrap();
    let explicit = r_mn_explicit(0, 0, 0, 0, 1, &p).unwrap();
    assert_eq!(explicit, -direct);
    assert_eq!(explicit_form_sign(0, 0, 0, 0, 1, &p), -1);
    assert_eq!(explicit_form_sign(0, 0, 0, 1, 1, &p), 1);
    // the sign-flipped family is still orthonormal
    let pts = grid(2);
    for &(m, k) in &pts {
        for &(m2, k2) in &pts {
            let s = pts.iter().fold(Surd::zero(), |acc, &(x, y)| {
                let a = r_mn_explicit(m, k, x, y, 2, &p).unwrap();
                let b = r_mn_explicit(m2, k2, x, y, 2, &p).unwrap();
                acc.checked_add(&(&a * &b)).expect("terms share the radicand of b2(m,n) b2(m',n')")
            });
            assert_eq!(s, if (m, k) == (m2, k2) { Surd::one() } else { Surd::zero() });
        }
    }
}

#[test]
fn three_evaluators_of_p() {
    let mut d = Draws::new(3);
    for _ in 0..5 {
        let p = d.p_exact();
        let t = tuvw_from_p(&p);
        for n in 0..=3 {
            for (m, k) in grid(n) {
                for (x, y) in grid(n) {
                    let direct = poly_p(m, k, x, y, n, &t).unwrap();
                    assert_eq!(poly_p_alt(m, k, x, y, n, &t).unwrap(), direct);
                    let r = r_mn_explicit(m, k, x, y, n, &p).unwrap();
                    let w = r_weight_sq(m, k, x, y, n, &p).unwrap();
                    assert_eq!(r.square(), &w * &direct * &direct);
                    let sign = |v: &Rational| v.cmp(&Rational::zero()) as i32;
                    assert_eq!(r.signum(), sign(&direct) * explicit_form_sign(m, k, x, y, n, &p));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn self_dual(n in 0u32..5, tn in 1i64..9, un in -4i64..9, vn in 1i64..9, wn in -4i64..9, den in 1i64..5,
                 a in 0usize..15, b in 0usize..15) {
        let g = grid(n);
        let (m, k) = g[a % g.len()];
        let (x, y) = g[b % g.len()];
        let params = TuvwParams::new(q(tn, den), q(un, den), q(vn, den), q(wn, den));
        let left = poly_p(m, k, x, y, n, &params).unwrap();
        let right = poly_p(x, y, m, k, n, &params.swap_uv()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn degenerate_collapse(n in 0u32..6, tn in -9i64..9, den in 1i64..7) {
        let t = q(tn, den);
        let params = TuvwParams::uniform(t.clone());
        for (m, k) in grid(n) {
            for (x, y) in grid(n) {
                let f = hyp_terminating(
                    &[Rational::from_i64(-((m + k) as i64)), Rational::from_i64(-((x + y) as i64))],
                    &[Rational::from_i64(-(n as i64))],
                    &t,
                ).unwrap().value;
                prop_assert_eq!(&poly_p(m, k, x, y, n, &params).unwrap(), &f);
                prop_assert_eq!(poly_p_degenerate(m, k, x, y, n, &t).unwrap(), f);
            }
        }
    }

    #[test]
    fn zero_degree_is_one(n in 0u32..6, x in 0u32..6, tn in 1i64..9) {
        prop_assume!(x <= n);
        let params = TuvwParams::new(q(tn, 3), q(2, 7), q(5, 4), q(tn, 2));
        prop_assert!(poly_p(0, 0, x, n - x, n, &params).unwrap().is_one());
    }
}
