//! Bivariate Krawtchouk polynomials `P_{m,n}(x, y)` on the triangle
//! `x + y <= N`, their trinomial weights, and the orthonormal functions
//! `R_{m,n}`.
//!
//! `P_{m,n}` is a quadruple sum in the four parameters `(t, u, v, w)`. When
//! those come from a positive quadruple `(p1, p2, p3, p4)` the weight in
//! `(x, y)` is trinomial in `(eta1, eta2)` and the dual weight in `(m, n)` is
//! trinomial in `(etabar1, etabar2)`.
//!
//! Three evaluators exist for cross-checking:
//! [`poly_p`] (direct quadruple sum), [`poly_p_alt`] (an outer double sum of
//! Appell `F1` factors) and [`r_mn_explicit`] (the explicit single sum of
//! products of three 2F1s, for `R_{m,n}`).

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::angular::{weight_w_xy, HalfInt};
use crate::error::{Error, Result};
use crate::scalar::{factorial, trinomial_coefficient, Backend, Rational, Scalar, FLOAT_INTEGER_SNAP};
use crate::series::{appell_f1, f1_iterated, hyp_terminating, pochhammer};
use crate::surd::Surd;

/// Positive parameter quadruple `(p1, p2, p3, p4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PParams<S> {
    pub p: [S; 4],
}

impl<S: Scalar> PParams<S> {
    pub fn new(p: [S; 4]) -> Result<Self> {
        for v in &p {
            if *v <= S::zero() {
                return Err(Error::InvalidParameter {
                    name: "p",
                    reason: format!("all four entries must be positive, got {v:?}"),
                });
            }
        }
        Ok(PParams { p })
    }

    fn sum(&self) -> S {
        self.p.iter().fold(S::zero(), |acc, v| acc + v.clone())
    }

    /// `p1 p4 - p2 p3`; zero makes the trinomial weight degenerate.
    pub fn cross(&self) -> S {
        let [p1, p2, p3, p4] = self.p.clone();
        p1 * p4 - p2 * p3
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        let c = self.cross();
        let degenerate = match S::BACKEND {
            Backend::Exact => c.is_zero(),
            Backend::Float64 => c.to_f64().abs() <= FLOAT_INTEGER_SNAP,
        };
        if degenerate {
            Err(Error::DegenerateWeight)
        } else {
            Ok(())
        }
    }
}

impl PParams<Rational> {
    pub fn from_ints(p: [i64; 4]) -> Result<Self> {
        PParams::new(p.map(Rational::from_i64))
    }
}

/// A trinomial parameter pair with its complement `1 - eta1 - eta2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaPair<S> {
    pub eta1: S,
    pub eta2: S,
    pub complement: S,
}

impl<S: Scalar> EtaPair<S> {
    /// Builds the pair from `eta1`, `eta2`, deriving the complement.
    pub fn new(eta1: S, eta2: S) -> Self {
        let complement = S::one() - eta1.clone() - eta2.clone();
        EtaPair { eta1, eta2, complement }
    }
}

/// `(p1 p4 - p2 p3)^2 / ((p1+p2)(p1+p3)(p4+p2)(p4+p3))`.
pub fn complement_closed_form<S: Scalar>(p: &PParams<S>) -> S {
    let [p1, p2, p3, p4] = p.p.clone();
    let c = p.cross();
    c.clone() * c / ((p1.clone() + p2.clone()) * (p1 + p3.clone()) * (p4.clone() + p2) * (p4 + p3))
}

/// `eta1 = p1 p2 S / ((p1+p2)(p1+p3)(p2+p4))`, `eta2 = p3 p4 S / ((p1+p3)(p4+p2)(p4+p3))`
/// with `S = p1+p2+p3+p4`.
pub fn eta_from_p<S: Scalar>(p: &PParams<S>) -> Result<EtaPair<S>> {
    p.check_nondegenerate()?;
    let [p1, p2, p3, p4] = p.p.clone();
    let s = p.sum();
    let eta1 = p1.clone() * p2.clone() * s.clone()
        / ((p1.clone() + p2.clone()) * (p1.clone() + p3.clone()) * (p2.clone() + p4.clone()));
    let eta2 = p3.clone() * p4.clone() * s / ((p1 + p3.clone()) * (p4.clone() + p2) * (p4 + p3));
    Ok(EtaPair::new(eta1, eta2))
}

/// Dual pair `etabar1 = p1 p3 S / ((p1+p2)(p1+p3)(p3+p4))`,
/// `etabar2 = p2 p4 S / ((p1+p2)(p2+p4)(p4+p3))`.
pub fn etabar_from_p<S: Scalar>(p: &PParams<S>) -> Result<EtaPair<S>> {
    p.check_nondegenerate()?;
    let [p1, p2, p3, p4] = p.p.clone();
    let s = p.sum();
    let e1 = p1.clone() * p3.clone() * s.clone()
        / ((p1.clone() + p2.clone()) * (p1.clone() + p3.clone()) * (p3.clone() + p4.clone()));
    let e2 = p2.clone() * p4.clone() * s / ((p1 + p2.clone()) * (p2 + p4.clone()) * (p4 + p3));
    Ok(EtaPair::new(e1, e2))
}

/// The four arguments of `P_{m,n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuvwParams<S> {
    pub t: S,
    pub u: S,
    pub v: S,
    pub w: S,
}

impl<S: Scalar> TuvwParams<S> {
    pub fn new(t: S, u: S, v: S, w: S) -> Self {
        TuvwParams { t, u, v, w }
    }

    pub fn uniform(t: S) -> Self {
        TuvwParams { t: t.clone(), u: t.clone(), v: t.clone(), w: t }
    }

    /// The parameters with `u` and `v` exchanged (the dual family).
    pub fn swap_uv(&self) -> Self {
        TuvwParams { t: self.t.clone(), u: self.v.clone(), v: self.u.clone(), w: self.w.clone() }
    }
}

/// ```text
/// t = (p1+p2)(p1+p3) / (p1 S)    u = (p1+p3)(p4+p3) / (p3 S)
/// v = (p1+p2)(p2+p4) / (p2 S)    w = (p4+p2)(p4+p3) / (p4 S)
/// ```
pub fn tuvw_from_p<S: Scalar>(p: &PParams<S>) -> TuvwParams<S> {
    let [p1, p2, p3, p4] = p.p.clone();
    let s = p.sum();
    TuvwParams {
        t: (p1.clone() + p2.clone()) * (p1.clone() + p3.clone()) / (p1.clone() * s.clone()),
        u: (p1.clone() + p3.clone()) * (p4.clone() + p3.clone()) / (p3.clone() * s.clone()),
        v: (p1 + p2.clone()) * (p2.clone() + p4.clone()) / (p2.clone() * s.clone()),
        w: (p4.clone() + p2) * (p4.clone() + p3) / (p4 * s),
    }
}

fn check_grid(a: u32, b: u32, big_n: u32, what: &str) -> Result<()> {
    if a + b > big_n {
        Err(Error::OutOfRange(format!("{what} = ({a}, {b}) lies outside the triangle of size N = {big_n}")))
    } else {
        Ok(())
    }
}

/// Trinomial mass `N!/(x! y! (N-x-y)!) eta1^x eta2^y (1-eta1-eta2)^{N-x-y}`.
pub fn trinomial_pmf<S: Scalar>(x: u32, y: u32, big_n: u32, eta: &EtaPair<S>) -> Result<S> {
    check_grid(x, y, big_n, "(x, y)")?;
    let c = S::from_rational(&Rational::from_integer(BigInt::from(trinomial_coefficient(
        big_n as u64,
        x as u64,
        y as u64,
    ))));
    Ok(c * eta.eta1.powi(x as i64) * eta.eta2.powi(y as i64) * eta.complement.powi((big_n - x - y) as i64))
}

/// Triangular grid `{(x, y) : x + y <= N}` in lexicographic order.
pub fn grid(big_n: u32) -> Vec<(u32, u32)> {
    (0..=big_n).flat_map(|x| (0..=big_n - x).map(move |y| (x, y))).collect()
}

/// Direct quadruple sum
///
/// ```text
/// P_{m,n}(x,y) = sum (-m)_{i+j} (-n)_{k+l} (-x)_{i+k} (-y)_{j+l}
///                    / (i! j! k! l! (-N)_{i+j+k+l}) t^i u^j v^k w^l
/// ```
pub fn poly_p<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, q: &TuvwParams<S>) -> Result<S> {
    check_grid(m, n, big_n, "(m, n)")?;
    check_grid(x, y, big_n, "(x, y)")?;
    let neg = |k: u32| S::from_i64(-(k as i64));
    f1_iterated(&neg(m), &neg(n), &neg(x), &neg(y), &neg(big_n), &q.t, &q.u, &q.v, &q.w)
}

/// Which Appell-factored representation to use in [`poly_p_factored`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactoredForm {
    /// `F1(-n; i-x, j-y; i+j-N; v, w)`.
    Plain,
    /// `(1-v)^n F1(-n; x+y-N, j-y; i+j-N; v/(v-1), (v-w)/(v-1))`, needs `v != 1`.
    VShift,
    /// `(1-w)^n F1(-n; i-x, x+y-N; i+j-N; (w-v)/(w-1), w/(w-1))`, needs `w != 1`.
    WShift,
}

/// Outer double sum over `(i, j)` with the inner `(k, l)` sum collapsed to an
/// Appell `F1`.
pub fn poly_p_factored<S: Scalar>(
    form: FactoredForm,
    m: u32,
    n: u32,
    x: u32,
    y: u32,
    big_n: u32,
    q: &TuvwParams<S>,
) -> Result<S> {
    check_grid(m, n, big_n, "(m, n)")?;
    check_grid(x, y, big_n, "(x, y)")?;
    let one = S::one();
    let si = |k: i64| S::from_i64(k);
    let (mi, ni, xi, yi, nn) = (m as i64, n as i64, x as i64, y as i64, big_n as i64);

    let (pre, b_of, c_of, arg1, arg2): (S, Box<dyn Fn(i64, i64) -> S>, Box<dyn Fn(i64, i64) -> S>, S, S) =
        match form {
            FactoredForm::Plain => (
                one.clone(),
                Box::new(move |i, _| S::from_i64(i - xi)),
                Box::new(move |_, j| S::from_i64(j - yi)),
                q.v.clone(),
                q.w.clone(),
            ),
            FactoredForm::VShift => {
                let vm1 = q.v.clone() - one.clone();
                if vm1.is_zero() {
                    return Err(Error::InvalidParameter { name: "v", reason: "v = 1 is singular for this form".into() });
                }
                (
                    (one.clone() - q.v.clone()).powi(ni),
                    Box::new(move |_, _| S::from_i64(xi + yi - nn)),
                    Box::new(move |_, j| S::from_i64(j - yi)),
                    q.v.clone() / vm1.clone(),
                    (q.v.clone() - q.w.clone()) / vm1,
                )
            }
            FactoredForm::WShift => {
                let wm1 = q.w.clone() - one.clone();
                if wm1.is_zero() {
                    return Err(Error::InvalidParameter { name: "w", reason: "w = 1 is singular for this form".into() });
                }
                (
                    (one.clone() - q.w.clone()).powi(ni),
                    Box::new(move |i, _| S::from_i64(i - xi)),
                    Box::new(move |_, _| S::from_i64(xi + yi - nn)),
                    (q.w.clone() - q.v.clone()) / wm1.clone(),
                    q.w.clone() / wm1,
                )
            }
        };

    let mut sum = S::zero();
    let mut fi = S::one();
    for i in 0..=mi {
        if i > 0 {
            fi = fi * si(i);
        }
        let mut fj = S::one();
        for j in 0..=(mi - i) {
            if j > 0 {
                fj = fj * si(j);
            }
            let coeff = pochhammer(&si(-mi), (i + j) as u64)
                * pochhammer(&si(-xi), i as u64)
                * pochhammer(&si(-yi), j as u64);
            if coeff.is_zero() {
                continue;
            }
            let den = pochhammer(&si(-nn), (i + j) as u64) * fi.clone() * fj.clone();
            if den.is_zero() {
                return Err(Error::ZeroDenominator { parameter: 0, term: (i + j) as u64 });
            }
            let inner = appell_f1(&si(-ni), &b_of(i, j), &c_of(i, j), &si(i + j - nn), &arg1, &arg2)?;
            sum = sum + coeff / den * q.t.powi(i) * q.u.powi(j) * inner;
        }
    }
    Ok(pre * sum)
}

/// `P_{m,n}` through the shifted `F1` factorization: the `v`-shifted form when
/// `v != 1`, else the `w`-shifted form when `w != 1`, else the direct sum.
pub fn poly_p_alt<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, q: &TuvwParams<S>) -> Result<S> {
    let one = S::one();
    if q.v != one {
        poly_p_factored(FactoredForm::VShift, m, n, x, y, big_n, q)
    } else if q.w != one {
        poly_p_factored(FactoredForm::WShift, m, n, x, y, big_n, q)
    } else {
        poly_p(m, n, x, y, big_n, q)
    }
}

/// `2F1(-m-n, -x-y; -N; t)`, the value of `P_{m,n}(x, y)` when `t = u = v = w`.
pub fn poly_p_degenerate<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, t: &S) -> Result<S> {
    check_grid(m, n, big_n, "(m, n)")?;
    check_grid(x, y, big_n, "(x, y)")?;
    let neg = |k: u32| S::from_i64(-(k as i64));
    Ok(hyp_terminating(&[neg(m + n), neg(x + y)], &[neg(big_n)], t)?.value)
}

/// Squared orthonormalizing factor
/// `b2(x,y;N;eta) b2(m,n;N;etabar) (1-eta1-eta2)^{-N}`.
pub fn r_weight_sq<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, p: &PParams<S>) -> Result<S> {
    let eta = eta_from_p(p)?;
    let bar = etabar_from_p(p)?;
    Ok(trinomial_pmf(x, y, big_n, &eta)? * trinomial_pmf(m, n, big_n, &bar)? * eta.complement.powi(-(big_n as i64)))
}

/// Orthonormal function `R_{m,n}(x,y) = {b2(x,y;eta) b2(m,n;etabar) (1-eta1-eta2)^{-N}}^{1/2} P_{m,n}(x,y)`
/// in a backend with real square roots (`f64`).
pub fn orthonormal_r<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, p: &PParams<S>) -> Result<S> {
    let wsq = r_weight_sq(m, n, x, y, big_n, p)?;
    let root = wsq.sqrt_checked().ok_or_else(|| Error::InvalidParameter {
        name: "p",
        reason: "weight factor has no square root in this backend; use orthonormal_r_exact".into(),
    })?;
    Ok(root * poly_p(m, n, x, y, big_n, &tuvw_from_p(p))?)
}

/// Exact `R_{m,n}(x,y)` as a surd.
pub fn orthonormal_r_exact(m: u32, n: u32, x: u32, y: u32, big_n: u32, p: &PParams<Rational>) -> Result<Surd> {
    let wsq = r_weight_sq(m, n, x, y, big_n, p)?;
    let root = Surd::sqrt_of(&wsq).ok_or(Error::NegativeRadicand { factor: "b2 b2 (1-eta1-eta2)^-N", value: wsq.to_string() })?;
    Ok(root.scale(&poly_p(m, n, x, y, big_n, &tuvw_from_p(p))?))
}

/// Gram matrix `G[(m,n)][(m',n')] = sum_{x,y} R_{m,n}(x,y) R_{m',n'}(x,y)`,
/// indices in [`grid`] order. Orthonormality is `G = I` exactly.
pub fn r_gram_exact(big_n: u32, p: &PParams<Rational>) -> Result<Vec<Vec<Surd>>> {
    let eta = eta_from_p(p)?;
    let bar = etabar_from_p(p)?;
    let q = tuvw_from_p(p);
    let pts = grid(big_n);
    let scale = eta.complement.powi(-(big_n as i64));
    let bx: Vec<Rational> = pts.iter().map(|&(x, y)| trinomial_pmf(x, y, big_n, &eta)).collect::<Result<_>>()?;
    let bm: Vec<Rational> = pts.iter().map(|&(m, n)| trinomial_pmf(m, n, big_n, &bar)).collect::<Result<_>>()?;
    let table: Vec<Vec<Rational>> = pts
        .iter()
        .map(|&(m, n)| pts.iter().map(|&(x, y)| poly_p(m, n, x, y, big_n, &q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;

    let mut g = vec![vec![Surd::zero(); pts.len()]; pts.len()];
    for a in 0..pts.len() {
        for b in a..pts.len() {
            let s = (0..pts.len()).fold(Rational::zero(), |acc, r| acc + &bx[r] * &table[a][r] * &table[b][r]);
            let root = Surd::sqrt_of(&(&bm[a] * &bm[b])).expect("trinomial masses are nonnegative");
            let v = root.scale(&(s * &scale));
            g[b][a] = v.clone();
            g[a][b] = v;
        }
    }
    Ok(g)
}

/// Largest `|G - I|` entry of the float Gram matrix of `R_{m,n}`.
pub fn r_gram_residual_f64(big_n: u32, p: &PParams<f64>) -> Result<f64> {
    let pts = grid(big_n);
    let vals: Vec<Vec<f64>> = pts
        .iter()
        .map(|&(m, n)| pts.iter().map(|&(x, y)| orthonormal_r(m, n, x, y, big_n, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut worst = 0f64;
    for a in 0..pts.len() {
        for b in 0..pts.len() {
            let s: f64 = (0..pts.len()).map(|r| vals[a][r] * vals[b][r]).sum();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((s - target).abs());
        }
    }
    Ok(worst)
}

/// Explicit single-sum form of `R_{m,n}(x, y)` for rational `p`, returned
/// exactly as a surd.
///
/// ```text
/// R = {C(N;x,y) C(N;m,n)}^{1/2} {p1^{2N-2y-x-m} p2^{x+n} p3^{y+m} p4^{y-n}
///       (p1+p2)^{y-N} (p1+p3)^{n-N} (p2+p4)^{N-m-2y} (p3+p4)^{N-x-2y} S^{m-n+x+y}}^{1/2}
///     * (p2+p3+p4)^{y-N} (-y)_n / (-N)_n
///     * sum_{l=0}^{N-y} (y-N)_l / l! z0^l F(-l, -x; y-N; z1)
///                       F(-l, -n; y-n+1; z2) F(n-y-l, -m; n-N; z3)
/// ```
///
/// with `z0 = p2 p3 S / (p1 (p2+p4)(p3+p4))`, `z1 = (p1+p2)(p2+p3+p4) / (p2 S)`,
/// `z2 = -p4 (p2+p3+p4) / (p2 p3)`, `z3 = (p1+p3)(p2+p3+p4) / (p3 S)`.
///
/// This equals [`orthonormal_r_exact`] times [`explicit_form_sign`], which is
/// `+1` when `p1 p4 > p2 p3`. For `m = n = 0` the sum collapses to
/// `(1 - z0)^N`, and `1 - z0 = (p2+p3+p4)(p1 p4 - p2 p3) / (p1 (p2+p4)(p3+p4))`.
///
/// The factor `(-y)_n F(-l, -n; y-n+1; z2)` is evaluated as
/// `(-1)^n sum_k (-l)_k (-n)_k / k! z2^k (y-n+1+k)_{n-k}`, which is the same
/// polynomial but has no `0 * inf` when `n > y`.
pub fn r_mn_explicit(m: u32, n: u32, x: u32, y: u32, big_n: u32, p: &PParams<Rational>) -> Result<Surd> {
    check_grid(m, n, big_n, "(m, n)")?;
    check_grid(x, y, big_n, "(x, y)")?;
    p.check_nondegenerate()?;
    let [p1, p2, p3, p4] = p.p.clone();
    let s = p.sum();
    let q234 = &p2 + &p3 + &p4;
    let (mi, ni, xi, yi, nn) = (m as i64, n as i64, x as i64, y as i64, big_n as i64);
    let qi = |k: i64| Rational::from_i64(k);
    let fact = |k: i64| Rational::from_integer(BigInt::from(factorial(k as u64)));

    let inner = p1.powi(2 * nn - 2 * yi - xi - mi)
        * p2.powi(xi + ni)
        * p3.powi(yi + mi)
        * p4.powi(yi - ni)
        * (&p1 + &p2).powi(yi - nn)
        * (&p1 + &p3).powi(ni - nn)
        * (&p2 + &p4).powi(nn - mi - 2 * yi)
        * (&p3 + &p4).powi(nn - xi - 2 * yi)
        * s.powi(mi - ni + xi + yi);
    if inner < Rational::zero() {
        return Err(Error::NegativeRadicand { factor: "p-power bracket", value: inner.to_string() });
    }
    let multinomials = Rational::from_integer(BigInt::from(
        trinomial_coefficient(big_n as u64, x as u64, y as u64) * trinomial_coefficient(big_n as u64, m as u64, n as u64),
    ));
    let root = Surd::sqrt_of(&(multinomials * inner)).expect("checked nonnegative");

    let z0 = &p2 * &p3 * &s / (&p1 * (&p2 + &p4) * (&p3 + &p4));
    let z1 = (&p1 + &p2) * &q234 / (&p2 * &s);
    let z2 = -(&p4 * &q234) / (&p2 * &p3);
    let z3 = (&p1 + &p3) * &q234 / (&p3 * &s);

    let mut total = Rational::zero();
    for l in 0..=(nn - yi) {
        let lead = pochhammer(&qi(yi - nn), l as u64) / fact(l) * z0.powi(l);
        if lead.is_zero() {
            continue;
        }
        let f1 = hyp_terminating(&[qi(-l), qi(-xi)], &[qi(yi - nn)], &z1)?.value;
        let mut mid = Rational::zero();
        for k in 0..=l.min(ni) {
            let c = pochhammer(&qi(-l), k as u64) * pochhammer(&qi(-ni), k as u64)
                / fact(k)
                * z2.powi(k)
                * pochhammer(&qi(yi - ni + 1 + k), (ni - k) as u64);
            mid += c;
        }
        if ni % 2 == 1 {
            mid = -mid;
        }
        let f3 = hyp_terminating(&[qi(ni - yi - l), qi(-mi)], &[qi(ni - nn)], &z3)?.value;
        total += lead * f1 * mid * f3;
    }
    let den = pochhammer(&qi(-nn), n as u64);
    Ok(root.scale(&(q234.powi(yi - nn) * total / den)))
}

/// `sign(p1 p4 - p2 p3)^(N - x - y + m + n)`: the ratio of [`r_mn_explicit`]
/// to the composed `R_{m,n}(x, y)`.
pub fn explicit_form_sign<S: Scalar>(m: u32, n: u32, x: u32, y: u32, big_n: u32, p: &PParams<S>) -> i32 {
    let negative = p.cross() < S::zero();
    if negative && (big_n + m + n + x + y) % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Largest `|w_{x,y} - b2(x,y;N;eta)|` over the grid, with the angular weight
/// taken at `2a = p1 t, 2b = p2 t, 2c = p3 t, 2d = p4 t`.
pub fn limit_law_gap(p: [u32; 4], big_n: u32, t: u32) -> Result<f64> {
    let pp = PParams::from_ints(p.map(|v| v as i64))?;
    let eta = eta_from_p(&pp)?;
    let abcd = p.map(|v| HalfInt::from_two_j(v * t));
    let mut worst = 0f64;
    for (x, y) in grid(big_n) {
        let w = weight_w_xy(x, y, abcd, big_n)?;
        let b = trinomial_pmf(x, y, big_n, &eta)?;
        worst = worst.max((w - b).to_f64().abs());
    }
    Ok(worst)
}

/// `sum_{x,y} b2(x,y;N;eta) P_{m,n} P_{m',n'}` compared with its analytic value
/// `delta delta (1-eta1-eta2)^N / b2(m,n;N;etabar)`; returns the largest
/// exact discrepancy (zero when the identity holds).
pub fn analytic_norm_discrepancy(big_n: u32, p: &PParams<Rational>) -> Result<Rational> {
    let eta = eta_from_p(p)?;
    let bar = etabar_from_p(p)?;
    let q = tuvw_from_p(p);
    let pts = grid(big_n);
    let bx: Vec<Rational> = pts.iter().map(|&(x, y)| trinomial_pmf(x, y, big_n, &eta)).collect::<Result<_>>()?;
    let table: Vec<Vec<Rational>> = pts
        .iter()
        .map(|&(m, n)| pts.iter().map(|&(x, y)| poly_p(m, n, x, y, big_n, &q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let cn = eta.complement.powi(big_n as i64);
    let mut worst = Rational::zero();
    for a in 0..pts.len() {
        for b in 0..pts.len() {
            let s = (0..pts.len()).fold(Rational::zero(), |acc, r| acc + &bx[r] * &table[a][r] * &table[b][r]);
            let target = if a == b {
                let (m, n) = pts[a];
                &cn / trinomial_pmf(m, n, big_n, &bar)?
            } else {
                Rational::zero()
            };
            let d = num_traits::Signed::abs(&(s - target));
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}
