#![allow(dead_code)]

use bikraw::chain::ChainParams;
use bikraw::poly::PParams;
use bikraw::{Rational, Scalar};
use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Seeded source of random rationals and floats for parameter draws.
pub struct Draws(ChaCha8Rng);

impl Draws {
    pub fn new(seed: u64) -> Self {
        Draws(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn float(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Rational `a/b` with `b` in `1..=max_den` and value in `[lo, hi]`.
    pub fn rational(&mut self, lo: i64, hi: i64, max_den: i64) -> Rational {
        let d = self.int(1, max_den);
        let n = self.int(lo * d, hi * d);
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Exact chain parameters: alpha in (0, 1), beta1 + beta2 < 1.
    pub fn chain_exact(&mut self, n: u32) -> ChainParams<Rational> {
        loop {
            let a1 = q(self.int(1, 11), 12);
            let a2 = q(self.int(1, 11), 12);
            let b1 = q(self.int(1, 8), 20);
            let b2 = q(self.int(1, 8), 20);
            if let Ok(p) = ChainParams::new(n, a1, a2, b1, b2) {
                return p;
            }
        }
    }

    /// Float chain parameters with alpha in (0.1, 0.9), beta in (0.05, 0.45)
    /// and `|alpha1 - alpha2| >= 0.05`.
    pub fn chain_float(&mut self, n: u32) -> ChainParams<f64> {
        loop {
            let a1 = self.float(0.1, 0.9);
            let a2 = self.float(0.1, 0.9);
            if (a1 - a2).abs() < 0.05 {
                continue;
            }
            let b1 = self.float(0.05, 0.45);
            let b2 = self.float(0.05, 0.45);
            if let Ok(p) = ChainParams::new(n, a1, a2, b1, b2) {
                return p;
            }
        }
    }

    /// Exact nondegenerate chain parameters whose discriminant is a rational
    /// square. One factor `e` of the two-by-two characteristic polynomial
    /// is fixed first and `beta2` solved for.
    pub fn chain_square_discriminant(&mut self, n: u32) -> ChainParams<Rational> {
        loop {
            let a1 = q(self.int(1, 19), 20);
            let a2 = q(self.int(1, 19), 20);
            let b1 = q(self.int(1, 9), 20);
            let e = q(self.int(1, 39), 40);
            if a1 == a2 || e == a1 {
                continue;
            }
            let one = Rational::from_i64(1);
            let g = &a1 * (&one - &b1) - &e;
            let b2 = &g * (&a2 - &e) / (&a2 * (&a1 - &e));
            let Ok(p) = ChainParams::new(n, a1, a2, b1, b2) else { continue };
            if bikraw::chain::solve_fixed_points(&p).is_ok() {
                return p;
            }
        }
    }

    pub fn p_exact(&mut self) -> PParams<Rational> {
        loop {
            let p = [1, 2, 3, 4].map(|_| q(self.int(1, 9), self.int(1, 4)));
            if let Ok(pp) = PParams::new(p) {
                if pp.check_nondegenerate().is_ok() {
                    return pp;
                }
            }
        }
    }
}

/// Exact identity checks on random terminating instances. Each function draws
/// until it finds an instance where both sides are defined and reports
/// whether they agree.
pub mod identities {
    use super::*;
    use bikraw::series::transforms::*;
    use bikraw::series::{appell_f1, f1_iterated, hyp_terminating, whipple_transform};

    fn hyp(numer: &[Rational], denom: &[Rational], z: &Rational) -> bikraw::Result<Rational> {
        hyp_terminating(numer, denom, z).map(|v| v.value)
    }

    fn generic(d: &mut Draws) -> Rational {
        d.rational(-4, 4, 7)
    }

    /// Denominator parameters must not be nonpositive integers; the classical
    /// transformations assume it.
    fn fine(params: &[&Rational]) -> bool {
        params.iter().all(|p| p.nonpositive_integer().is_none())
    }

    fn arg(d: &mut Draws) -> Rational {
        loop {
            let x = d.rational(-2, 2, 5);
            if x != q(1, 1) {
                return x;
            }
        }
    }

    /// Balanced `4F3(-n, a, b, c; d, e, f; 1)` and its Whipple image.
    pub fn whipple(d: &mut Draws) -> bool {
        loop {
            let n = d.int(0, 5);
            let (a, b, c, dd, e) = (generic(d), generic(d), generic(d), generic(d), generic(d));
            let f = &a + &b + &c + q(1 - n, 1) - &dd - &e;
            let lower = [&q(1, 1) + &a - &e - q(n, 1), &q(1, 1) + &a - &f - q(n, 1)];
            if !fine(&[&dd, &e, &f, &lower[0], &lower[1]]) {
                continue;
            }
            let numer = [q(-n, 1), a, b, c];
            let denom = [dd, e, f];
            let Ok(lhs) = hyp(&numer, &denom, &q(1, 1)) else { continue };
            let Ok(w) = whipple_transform(&numer, &denom) else { continue };
            let Ok(rhs) = hyp(&w.numer, &w.denom, &q(1, 1)) else { continue };
            return lhs == w.prefactor * rhs;
        }
    }

    /// Two successive Whipple transforms compose to the original value.
    pub fn whipple_twice(d: &mut Draws) -> bool {
        loop {
            let n = d.int(0, 4);
            let (a, b, c, dd, e) = (generic(d), generic(d), generic(d), generic(d), generic(d));
            let f = &a + &b + &c + q(1 - n, 1) - &dd - &e;
            let numer = [q(-n, 1), a, b, c];
            let denom = [dd, e, f];
            let Ok(lhs) = hyp(&numer, &denom, &q(1, 1)) else { continue };
            let Ok(w1) = whipple_transform(&numer, &denom) else { continue };
            if !fine(&w1.denom.iter().chain(&denom).collect::<Vec<_>>()) {
                continue;
            }
            let Ok(w2) = whipple_transform(&w1.numer, &w1.denom) else { continue };
            if !fine(&w2.denom.iter().collect::<Vec<_>>()) {
                continue;
            }
            let Ok(rhs) = hyp(&w2.numer, &w2.denom, &q(1, 1)) else { continue };
            return lhs == w1.prefactor * w2.prefactor * rhs;
        }
    }

    /// Direct, Pfaff and Euler forms of a terminating `2F1(-n, b; c; x)`.
    /// Euler's form terminates only when `c - b` is a nonpositive integer, so
    /// `b = c + k`.
    pub fn two_f1_trio(d: &mut Draws) -> bool {
        loop {
            let n = d.int(0, 6);
            let c = generic(d);
            if !fine(&[&c]) {
                continue;
            }
            let b = &c + q(d.int(0, 4), 1);
            let x = arg(d);
            let a = q(-n, 1);
            let Ok(direct) = hyp(&[a.clone(), b.clone()], std::slice::from_ref(&c), &x) else { continue };
            let Ok(pfaff) = hyp2f1_pfaff(&a, &b, &c, &x) else { continue };
            let Ok(euler) = hyp2f1_euler(&a, &b, &c, &x) else { continue };
            let ok = direct == pfaff && direct == euler;
            if !ok {
                eprintln!("2F1(-{n}, {b}; {c}; {x}): direct {direct}, pfaff {pfaff}, euler {euler}");
            }
            return ok;
        }
    }

    /// `2F1(-n, b; c; x) = (c-b)_n / (c)_n 2F1(-n, b; 1+b-c-n; 1-x)`.
    pub fn two_f1_reflect(d: &mut Draws) -> bool {
        loop {
            let n = d.int(0, 6);
            let (b, c, x) = (generic(d), generic(d), generic(d));
            if !fine(&[&c, &(&q(1 - n, 1) + &b - &c)]) {
                continue;
            }
            let Ok(direct) = hyp(&[q(-n, 1), b.clone()], std::slice::from_ref(&c), &x) else { continue };
            let Ok(rhs) = hyp2f1_reflect(n as u64, &b, &c, &x) else { continue };
            return direct == rhs;
        }
    }

    /// Both transformations of a terminating Appell `F1`.
    pub fn f1_pair(d: &mut Draws) -> bool {
        loop {
            let a = q(-d.int(0, 5), 1);
            let (b, c, dd) = (generic(d), generic(d), generic(d));
            if !fine(&[&dd]) {
                continue;
            }
            let (x, y) = (arg(d), arg(d));
            let Ok(direct) = appell_f1(&a, &b, &c, &dd, &x, &y) else { continue };
            let Ok(first) = appell_f1_first(&a, &b, &c, &dd, &x, &y) else { continue };
            let Ok(second) = appell_f1_second(&a, &b, &c, &dd, &x, &y) else { continue };
            return direct == first && direct == second;
        }
    }

    /// Both transformations of a terminating iterated `F1`.
    pub fn f1_iterated_pair(d: &mut Draws) -> bool {
        loop {
            let a = q(-d.int(0, 3), 1);
            let a2 = q(-d.int(0, 3), 1);
            let (b, c, dd) = (generic(d), generic(d), generic(d));
            if !fine(&[&dd]) {
                continue;
            }
            let (l, m, n, r) = (arg(d), arg(d), arg(d), arg(d));
            let Ok(direct) = f1_iterated(&a, &a2, &b, &c, &dd, &l, &m, &n, &r) else { continue };
            let Ok(first) = f1_iterated_first(&a, &a2, &b, &c, &dd, &l, &m, &n, &r) else { continue };
            let Ok(second) = f1_iterated_second(&a, &a2, &b, &c, &dd, &l, &m, &n, &r) else { continue };
            return direct == first && direct == second;
        }
    }
}
