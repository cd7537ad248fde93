//! Triangle coefficients, Racah `W` functions, 9-j symbols and the Racah
//! polynomials.
//!
//! Angular momenta are [`HalfInt`]s stored as `2j`. Every value is exact: a
//! [`Surd`] for coupling coefficients, a [`Rational`] for weights.
//!
//! Coupling coefficients are zero (never an error) when a triangle condition
//! fails. Only inputs that make a substituted momentum negative are errors.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{factorial, rational_from_biguints, trinomial_coefficient, Rational, Scalar};
use crate::series::{hyp_terminating, pochhammer};
use crate::surd::Surd;

/// A nonnegative half-integer `two_j / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInt {
    pub two_j: u32,
}

impl HalfInt {
    pub const fn from_two_j(two_j: u32) -> Self {
        HalfInt { two_j }
    }

    pub const fn int(j: u32) -> Self {
        HalfInt { two_j: 2 * j }
    }

    pub fn is_integer(self) -> bool {
        self.two_j.is_multiple_of(2)
    }

    pub fn to_f64(self) -> f64 {
        self.two_j as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// `n!` for `n = two / 2`, `two` even and nonnegative.
fn fact2(two: i64) -> BigUint {
    debug_assert!(two >= 0 && two % 2 == 0, "factorial of half-integer {two}/2");
    factorial((two / 2) as u64)
}

fn ratio(num: BigUint, den: BigUint) -> Rational {
    rational_from_biguints(num, den)
}

/// `|a-b| <= c <= a+b` with `a+b+c` an integer.
pub fn triangle_ok(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.two_j as i64, b.two_j as i64, c.two_j as i64);
    (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// `Delta(abc)^2`, or `None` when the triangle fails.
pub fn triangle_delta_sq(a: HalfInt, b: HalfInt, c: HalfInt) -> Option<Rational> {
    if !triangle_ok(a, b, c) {
        return None;
    }
    let (a, b, c) = (a.two_j as i64, b.two_j as i64, c.two_j as i64);
    Some(ratio(
        fact2(a + b - c) * fact2(a - b + c) * fact2(b + c - a),
        fact2(a + b + c + 2),
    ))
}

/// Triangle coefficient `Delta(abc) = sqrt((a+b-c)!(a-b+c)!(b+c-a)!/(a+b+c+1)!)`.
pub fn triangle_delta(a: HalfInt, b: HalfInt, c: HalfInt) -> Surd {
    match triangle_delta_sq(a, b, c) {
        Some(sq) => Surd::sqrt_of(&sq).expect("squared triangle coefficient is nonnegative"),
        None => Surd::zero(),
    }
}

/// Racah `W(a e b y; k x)` as a balanced terminating 4F3 times its
/// triangle-coefficient prefactor.
///
/// The denominator factor is `(a-e+k)!`.
pub fn racah_w(a: HalfInt, e: HalfInt, b: HalfInt, y: HalfInt, k: HalfInt, x: HalfInt) -> Surd {
    let deltas = [
        triangle_delta_sq(a, b, x),
        triangle_delta_sq(b, y, k),
        triangle_delta_sq(x, y, e),
        triangle_delta_sq(a, e, k),
    ];
    if deltas.iter().any(Option::is_none) {
        return Surd::zero();
    }
    let radicand = deltas.into_iter().flatten().fold(Rational::one(), |acc, d| acc * d);

    let [a2, e2, b2, y2, k2, x2] = [a, e, b, y, k, x].map(|h| h.two_j as i64);
    let num = fact2(2 * a2) * fact2(a2 + b2 + e2 - y2) * fact2(a2 + b2 + e2 + y2 + 2);
    let den = fact2(a2 + b2 - x2)
        * fact2(a2 - b2 + x2)
        * fact2(b2 + y2 - k2)
        * fact2(b2 - y2 + k2)
        * fact2(x2 - y2 + e2)
        * fact2(y2 - x2 + e2)
        * fact2(a2 + e2 - k2)
        * fact2(a2 - e2 + k2);

    let h = |two: i64| Rational::from_ratio(two, 2);
    let f = hyp_terminating(
        &[
            h(k2 - a2 - e2),
            h(-k2 - a2 - e2 - 2),
            h(x2 - a2 - b2),
            h(-x2 - a2 - b2 - 2),
        ],
        &[h(-2 * a2), h(y2 - a2 - b2 - e2), h(-y2 - a2 - b2 - e2 - 2)],
        &Rational::one(),
    )
    .expect("W-function 4F3 terminates before any denominator vanishes when triangles hold")
    .value;

    Surd::sqrt_of(&radicand)
        .expect("product of squared triangle coefficients is nonnegative")
        .scale(&(ratio(num, den) * f))
}

/// The nine entries of a 9-j symbol, row-major:
///
/// ```text
/// { a b x }
/// { c d y }
/// { m n e }
/// ```
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NineJArgs(pub [HalfInt; 9]);

impl NineJArgs {
    pub fn from_two_j(v: [u32; 9]) -> Self {
        NineJArgs(v.map(HalfInt::from_two_j))
    }

    /// The six coupling triples: three rows and three columns.
    pub fn triads(&self) -> [[HalfInt; 3]; 6] {
        let j = self.0;
        [
            [j[0], j[1], j[2]],
            [j[3], j[4], j[5]],
            [j[6], j[7], j[8]],
            [j[0], j[3], j[6]],
            [j[1], j[4], j[7]],
            [j[2], j[5], j[8]],
        ]
    }

    pub fn all_triads_ok(&self) -> bool {
        self.triads().iter().all(|t| triangle_ok(t[0], t[1], t[2]))
    }
}

/// Memoizing evaluator for `W` and 9-j values. Independent instances share
/// nothing, so one per worker thread is the intended use.
#[derive(Default)]
pub struct AngularCache {
    w: HashMap<[u32; 6], Surd>,
}

impl AngularCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn w(&mut self, a: HalfInt, e: HalfInt, b: HalfInt, y: HalfInt, k: HalfInt, x: HalfInt) -> Surd {
        let key = [a, e, b, y, k, x].map(|h| h.two_j);
        self.w
            .entry(key)
            .or_insert_with(|| racah_w(a, e, b, y, k, x))
            .clone()
    }

    /// The individual terms `(2k+1) W(aecn;km) W(aeby;kx) W(bync;kd)` of the
    /// 9-j sum, zero terms omitted.
    pub fn ninej_terms(&mut self, args: &NineJArgs) -> Vec<Surd> {
        let [a, b, x, c, d, y, m, n, e] = args.0;
        if !args.all_triads_ok() {
            return Vec::new();
        }
        let t = |h: HalfInt| h.two_j as i64;
        let lo = (t(a) - t(e)).abs().max((t(b) - t(y)).abs()).max((t(c) - t(n)).abs());
        let hi = (t(a) + t(e)).min(t(b) + t(y)).min(t(c) + t(n));
        let mut out = Vec::new();
        let mut k2 = lo;
        while k2 <= hi {
            let k = HalfInt::from_two_j(k2 as u32);
            let w1 = self.w(a, e, c, n, k, m);
            if !w1.is_zero() {
                let w2 = self.w(a, e, b, y, k, x);
                let w3 = self.w(b, y, n, c, k, d);
                let term = (&(&w1 * &w2) * &w3).scale(&Rational::from_i64(k2 + 1));
                if !term.is_zero() {
                    out.push(term);
                }
            }
            k2 += 2;
        }
        out
    }

    /// 9-j symbol as a single surd.
    ///
    /// # Panics
    ///
    /// If two terms of the sum carry different radicands; each `k`-dependent
    /// triangle coefficient occurs in exactly two of the three `W` factors,
    /// so this signals a defect, not bad input.
    pub fn ninej(&mut self, args: &NineJArgs) -> Surd {
        self.ninej_terms(args).iter().fold(Surd::zero(), |acc, t| {
            acc.checked_add(t)
                .unwrap_or_else(|| panic!("9-j terms with distinct radicands for {args:?}"))
        })
    }
}

/// 9-j symbol via the single sum over three Racah `W` functions.
pub fn ninej(args: &NineJArgs) -> Surd {
    AngularCache::new().ninej(args)
}

/// The substituted 9-j arguments of the bivariate form `F_{m,n}`.
fn substituted_args(
    x: u32,
    y: u32,
    m: u32,
    n: u32,
    abcd: [HalfInt; 4],
    big_n: u32,
) -> Result<NineJArgs> {
    let [a, b, c, d] = abcd.map(|h| h.two_j as i64);
    let (x, y, m, n, nn) = (x as i64, y as i64, m as i64, n as i64, big_n as i64);
    let entries: [(&'static str, i64); 5] = [
        ("a+b-x", a + b - 2 * x),
        ("c+d-y", c + d - 2 * y),
        ("a+c-m", a + c - 2 * m),
        ("b+d-n", b + d - 2 * n),
        ("a+b+c+d-N", a + b + c + d - 2 * nn),
    ];
    for (name, v) in entries {
        if v < 0 {
            return Err(Error::NegativeArgument { name, value: format!("{v}/2") });
        }
    }
    let v = entries.map(|(_, v)| v as u32);
    Ok(NineJArgs::from_two_j([
        a as u32, b as u32, v[0], c as u32, d as u32, v[1], v[2], v[3], v[4],
    ]))
}

/// Normalized bivariate function
///
/// ```text
/// F_{m,n}(x,y) = [(2a+2b+1-2x)(2a+2c+1-2m)(2b+2d+1-2n)(2c+2d+1-2y)]^{1/2}
///              * { a       b       a+b-x     }
///                { c       d       c+d-y     }
///                { a+c-m   b+d-n   a+b+c+d-N }
/// ```
pub fn f_mn_normalized(
    x: u32,
    y: u32,
    m: u32,
    n: u32,
    abcd: [HalfInt; 4],
    big_n: u32,
) -> Result<Surd> {
    f_mn_normalized_cached(&mut AngularCache::new(), x, y, m, n, abcd, big_n)
}

#[allow(clippy::too_many_arguments)]
pub fn f_mn_normalized_cached(
    cache: &mut AngularCache,
    x: u32,
    y: u32,
    m: u32,
    n: u32,
    abcd: [HalfInt; 4],
    big_n: u32,
) -> Result<Surd> {
    let args = substituted_args(x, y, m, n, abcd, big_n)?;
    let j = args.0;
    let dims = [j[2], j[6], j[7], j[5]]
        .iter()
        .fold(Rational::one(), |acc, h| acc * Rational::from_i64(h.two_j as i64 + 1));
    let pre = Surd::sqrt_of(&dims).expect("dimension product is positive");
    Ok(&pre * &cache.ninej(&args))
}

/// `1/k!` with the convention `1/k! = 0` for negative `k`.
fn inv_fact(k: i64) -> Rational {
    if k < 0 {
        Rational::zero()
    } else {
        ratio(BigUint::one(), factorial(k as u64))
    }
}

fn fact_i(k: i64) -> Option<BigUint> {
    (k >= 0).then(|| factorial(k as u64))
}

/// Weight of the bivariate family at `(x, y)` (the `m = n = 0` case of
/// `F_{m,n}^2`), written with a squared 3F2 at unit argument.
///
/// The double pole `(2a+y-N)!^2` in the denominator is absorbed into the
/// 3F2: `3F2[..; 2a+1+y-N, ..] / (2a+y-N)! = sum_k (...)_k / (k! (2y-2c-2d)_k (2a+y-N+k)!)`,
/// with `1/j! = 0` for `j < 0`. A numerator factorial at a negative argument
/// or a vanishing `(2y-2c-2d)_k` before termination marks a point outside
/// the support, where the weight is 0.
pub fn weight_w_xy(x: u32, y: u32, abcd: [HalfInt; 4], big_n: u32) -> Result<Rational> {
    substituted_args(x, y, 0, 0, abcd, big_n)?;
    let [a, b, c, d] = abcd.map(|h| h.two_j as i64);
    let (x, y, n) = (x as i64, y as i64, big_n as i64);
    let zero = Rational::zero();

    if x + y > n {
        return Ok(zero);
    }
    let num_args = [
        n,
        a - x,
        a,
        b,
        c,
        d,
        a + b + y - x - n,
        a + c - n,
        c + d - 2 * y,
        c + d - 2 * y,
        b + d - n,
        a + b + c + d + 1 - n,
    ];
    let den_args = [
        x,
        y,
        n - x - y,
        b - x,
        c - y,
        d - y,
        a + b - x,
        a + c,
        c + d - y,
        c + d + x - y - n,
        b + d,
        a + b + c + d + 1 - x - y - n,
    ];
    let mut num = BigUint::one();
    for k in num_args {
        match fact_i(k) {
            Some(f) => num *= f,
            None => return Ok(zero),
        }
    }
    let mut den = BigUint::one();
    for k in den_args {
        match fact_i(k) {
            Some(f) => den *= f,
            None => return Ok(zero),
        }
    }
    let extra = Rational::from_ratio(a + b + 1 - 2 * x, a + b + 1 - x)
        * Rational::from_ratio(c + d + 1 - 2 * y, c + d + 1 - y);

    // regularized 3F2 / (2a+y-N)!
    let top = [x + y - n, a + b + 1 + y - x - n, y - c].map(Rational::from_i64);
    let bottom = Rational::from_i64(2 * y - c - d);
    let terms = (n - x - y) as u64;
    let mut g = Rational::zero();
    for k in 0..=terms {
        let numer = top.iter().fold(Rational::one(), |acc, p| acc * pochhammer(p, k));
        if numer.is_zero() {
            break;
        }
        let den_k = pochhammer(&bottom, k);
        if den_k.is_zero() {
            return Ok(zero);
        }
        let kf = ratio(BigUint::one(), factorial(k));
        g += numer / den_k * kf * inv_fact(a + y - n + k as i64);
    }

    Ok(ratio(num, den) * extra * g.clone() * g)
}

/// Trinomial probability `N!/(x! y! (N-x-y)!) e1^x e2^y (1-e1-e2)^{N-x-y}`.
pub fn trinomial_pmf_exact(x: u32, y: u32, big_n: u32, e1: &Rational, e2: &Rational) -> Rational {
    if x + y > big_n {
        return Rational::zero();
    }
    let c = Rational::from_integer(BigInt::from(trinomial_coefficient(big_n as u64, x as u64, y as u64)));
    let rest = Rational::one() - e1 - e2;
    c * e1.powi(x as i64) * e2.powi(y as i64) * rest.powi((big_n - x - y) as i64)
}

/// Parameters of the Racah polynomials `R_n(x; alpha, beta, gamma, N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RacahParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub n: u32,
}

impl RacahParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational, n: u32) -> Self {
        RacahParams { alpha, beta, gamma, n }
    }
}

/// `R_n(x) = 4F3(-n, n+alpha+beta+1, -x, x+gamma-N; alpha+1, -N, beta+gamma+1; 1)`.
pub fn racah_polynomial(deg: u32, x: u32, p: &RacahParams) -> Result<Rational> {
    if deg > p.n || x > p.n {
        return Err(Error::OutOfRange(format!("n={deg}, x={x} must lie in 0..={}", p.n)));
    }
    let q = |v: i64| Rational::from_i64(v);
    let one = Rational::one();
    let nn = q(p.n as i64);
    let v = hyp_terminating(
        &[
            q(-(deg as i64)),
            q(deg as i64) + &p.alpha + &p.beta + &one,
            q(-(x as i64)),
            q(x as i64) + &p.gamma - &nn,
        ],
        &[&p.alpha + &one, -nn, &p.beta + &p.gamma + &one],
        &one,
    )?;
    Ok(v.value)
}

fn nonzero(v: Rational, what: &str) -> Result<Rational> {
    if v.is_zero() {
        Err(Error::ZeroFactor(what.to_string()))
    } else {
        Ok(v)
    }
}

/// Weight `rho(x)`, `x = 0..=N`, and normalizers `h_m`, `m = 0..=N`, so that
/// `f_m(x) = (rho(x) h_m)^{1/2} R_m(x)` is orthonormal.
pub fn racah_weight_and_norm(p: &RacahParams) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let q = |v: i64| Rational::from_i64(v);
    let one = Rational::one();
    let nn = q(p.n as i64);
    let (al, be, ga) = (&p.alpha, &p.beta, &p.gamma);
    let n = p.n as u64;

    let gn = nonzero(ga - &nn, "gamma-N")?;
    let mut rho = Vec::with_capacity(n as usize + 1);
    for x in 0..=n {
        let num = (ga - &nn + q(2 * x as i64))
            * pochhammer(&(ga - &nn), x)
            * pochhammer(&(al + &one), x)
            * pochhammer(&(be + ga + &one), x)
            * pochhammer(&-nn.clone(), x);
        let den = nonzero(pochhammer(&(ga - &nn - al), x), "(gamma-N-alpha)_x")?
            * nonzero(pochhammer(&(-nn.clone() - be), x), "(-N-beta)_x")?
            * nonzero(pochhammer(&(ga + &one), x), "(gamma+1)_x")?
            * ratio(factorial(x), BigUint::one());
        rho.push(num / (den * &gn));
    }

    let lead_den = nonzero(pochhammer(&(al + be + q(2)), n), "(alpha+beta+2)_N")?
        * nonzero(pochhammer(&-ga.clone(), n), "(-gamma)_N")?;
    let lead = pochhammer(&(be + &one), n) * pochhammer(&(al + &one - ga), n) / lead_den;
    let ab1 = nonzero(al + be + &one, "alpha+beta+1")?;
    let mut h = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let num = (&ab1 + q(2 * m as i64))
            * pochhammer(&ab1, m)
            * pochhammer(&(al + &one), m)
            * pochhammer(&(be + ga + &one), m)
            * pochhammer(&-nn.clone(), m);
        let den = nonzero(pochhammer(&(be + &one), m), "(beta+1)_m")?
            * nonzero(pochhammer(&(al - ga + &one), m), "(alpha-gamma+1)_m")?
            * nonzero(pochhammer(&(nn.clone() + al + be + q(2)), m), "(N+alpha+beta+2)_m")?
            * ratio(factorial(m), BigUint::one());
        h.push(&lead * num / (den * &ab1));
    }
    Ok((rho, h))
}

/// Matrix `G[m][n] = h_m * sum_x rho(x) R_m(x) R_n(x)`. Orthonormality of the
/// `f_m` is exactly `G = I`.
pub fn racah_gram(p: &RacahParams) -> Result<Vec<Vec<Rational>>> {
    let (rho, h) = racah_weight_and_norm(p)?;
    let n = p.n;
    let mut r = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        let row: Result<Vec<_>> = (0..=n).map(|x| racah_polynomial(m, x, p)).collect();
        r.push(row?);
    }
    let mut g = vec![vec![Rational::zero(); n as usize + 1]; n as usize + 1];
    for m in 0..=n as usize {
        for k in 0..=n as usize {
            let s = (0..=n as usize).fold(Rational::zero(), |acc, x| acc + &rho[x] * &r[m][x] * &r[k][x]);
            g[m][k] = &h[m] * s;
        }
    }
    Ok(g)
}

/// Outcome of the 9-j orthogonality sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct OrthoReport {
    pub max_two_j: u32,
    /// `(a, b, c, d, e)` tuples with at least one admissible `(m, n)`.
    pub tuples: u64,
    /// Number of `(m, n, m', n')` sums evaluated.
    pub sums: u64,
    pub failures: Vec<OrthoFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoFailure {
    pub abcde: [u32; 5],
    pub mn: [u32; 2],
    pub mn2: [u32; 2],
    pub value: String,
}

impl OrthoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn coupling_range(a: u32, b: u32) -> impl Iterator<Item = u32> {
    let lo = a.abs_diff(b);
    (lo..=a + b).step_by(2)
}

/// Checks
/// `sum_{x,y} (2x+1)(2y+1)(2m+1)(2n+1) {a b x; c d y; m n e}{a b x; c d y; m' n' e} = delta delta`
/// exactly for every `(a, b, c, d, e)` with `2j <= max_two_j`, `x`, `y`, `m`,
/// `n` running over their full coupling ranges.
pub fn ninej_orthocheck(max_two_j: u32) -> OrthoReport {
    let mut tuples = Vec::new();
    for a in 0..=max_two_j {
        for b in 0..=max_two_j {
            for c in 0..=max_two_j {
                for d in 0..=max_two_j {
                    for e in 0..=max_two_j {
                        tuples.push([a, b, c, d, e]);
                    }
                }
            }
        }
    }
    let run = |t: &[u32; 5]| ortho_tuple(*t);
    #[cfg(feature = "parallel")]
    let parts: Vec<(u64, u64, Vec<OrthoFailure>)> = {
        use rayon::prelude::*;
        tuples.par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<(u64, u64, Vec<OrthoFailure>)> = tuples.iter().map(run).collect();

    let mut report = OrthoReport { max_two_j, ..Default::default() };
    for (t, s, f) in parts {
        report.tuples += t;
        report.sums += s;
        report.failures.extend(f);
    }
    report
}

fn ortho_tuple(abcde: [u32; 5]) -> (u64, u64, Vec<OrthoFailure>) {
    let [a, b, c, d, e] = abcde.map(HalfInt::from_two_j);
    let mut cache = AngularCache::new();
    let mn: Vec<(u32, u32)> = coupling_range(a.two_j, c.two_j)
        .flat_map(|m| coupling_range(b.two_j, d.two_j).map(move |n| (m, n)))
        .filter(|&(m, n)| triangle_ok(HalfInt::from_two_j(m), HalfInt::from_two_j(n), e))
        .collect();
    if mn.is_empty() {
        return (0, 0, Vec::new());
    }
    let xy: Vec<(u32, u32)> = coupling_range(a.two_j, b.two_j)
        .flat_map(|x| coupling_range(c.two_j, d.two_j).map(move |y| (x, y)))
        .filter(|&(x, y)| triangle_ok(HalfInt::from_two_j(x), HalfInt::from_two_j(y), e))
        .collect();

    // column (m, n) of sqrt((2x+1)(2y+1)(2m+1)(2n+1)) * 9-j over the (x, y) rows
    let columns: Vec<Vec<Surd>> = mn
        .iter()
        .map(|&(m, n)| {
            xy.iter()
                .map(|&(x, y)| {
                    let args = NineJArgs::from_two_j([a.two_j, b.two_j, x, c.two_j, d.two_j, y, m, n, e.two_j]);
                    let dim = Rational::from_i64(((x + 1) * (y + 1) * (m + 1) * (n + 1)) as i64);
                    &Surd::sqrt_of(&dim).expect("positive") * &cache.ninej(&args)
                })
                .collect()
        })
        .collect();

    let mut sums = 0u64;
    let mut failures = Vec::new();
    for i in 0..mn.len() {
        for j in i..mn.len() {
            sums += 1;
            let mut acc = Surd::zero();
            let mut closed = true;
            for r in 0..xy.len() {
                let term = &columns[i][r] * &columns[j][r];
                match acc.checked_add(&term) {
                    Some(s) => acc = s,
                    None => {
                        closed = false;
                        break;
                    }
                }
            }
            let target = if i == j { Surd::one() } else { Surd::zero() };
            if !closed || acc != target {
                failures.push(OrthoFailure {
                    abcde,
                    mn: [mn[i].0, mn[i].1],
                    mn2: [mn[j].0, mn[j].1],
                    value: if closed { acc.to_string() } else { "radicand closure broken".into() },
                });
            }
        }
    }
    (1, sums, failures)
}
