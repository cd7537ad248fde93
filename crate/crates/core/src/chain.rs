//! The cumulative Bernoulli-trial chain on `{(i1, i2) : i1 + i2 <= N}`.
//!
//! One step from `(i1, i2)`: bank `k1 ~ Bin(i1, alpha1)` and
//! `k2 ~ Bin(i2, alpha2)` successes, rethrow the `N - k1 - k2` remaining dice
//! as a trinomial with cell probabilities `(beta1, beta2)`, and add the new
//! successes to the banked ones.
//!
//! # Orientation
//!
//! `K(j; i)` is the probability of moving from source `i` to destination `j`.
//! A [`KernelMatrix`] stores it as `entries[dest][src]`, so every column
//! sums to one. The polynomial eigenvectors satisfy
//! `sum_j K(j; i) P(j) = lambda P(i)`, i.e. they are eigenvectors of the
//! transposed matrix ([`Orientation::Transpose`]); the same spectrum acts on
//! `Psi_00 * P` through the matrix itself ([`Orientation::PsiForward`]).

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{poly_p, EtaPair, TuvwParams};
use crate::scalar::{binomial, trinomial_coefficient, Backend, Rational, Scalar};
use crate::series::appell_f3;

/// Tolerance for float residual checks on kernels and fixed points.
pub const FLOAT_TOL: f64 = 1e-12;

/// Tolerance for matching numeric eigenvalues against analytic candidates.
pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainParams<S> {
    pub n: u32,
    pub alpha1: S,
    pub alpha2: S,
    pub beta1: S,
    pub beta2: S,
}

fn open_unit<S: Scalar>(v: &S, name: &'static str) -> Result<()> {
    if *v > S::zero() && *v < S::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("must lie in (0, 1), got {v:?}") })
    }
}

impl<S: Scalar> ChainParams<S> {
    pub fn new(n: u32, alpha1: S, alpha2: S, beta1: S, beta2: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter { name: "n", reason: "N must be at least 1".into() });
        }
        open_unit(&alpha1, "alpha1")?;
        open_unit(&alpha2, "alpha2")?;
        open_unit(&beta1, "beta1")?;
        open_unit(&beta2, "beta2")?;
        if beta1.clone() + beta2.clone() >= S::one() {
            return Err(Error::InvalidParameter {
                name: "beta1+beta2",
                reason: format!("must be below 1, got {:?}", beta1 + beta2),
            });
        }
        Ok(ChainParams { n, alpha1, alpha2, beta1, beta2 })
    }

    /// `D = 1 + alpha1 beta1 / (1 - alpha1) + alpha2 beta2 / (1 - alpha2)`.
    pub fn d(&self) -> S {
        let one = S::one();
        one.clone()
            + self.alpha1.clone() * self.beta1.clone() / (one.clone() - self.alpha1.clone())
            + self.alpha2.clone() * self.beta2.clone() / (one - self.alpha2.clone())
    }

    /// Stationary trinomial parameters `eta_r = beta_r / ((1 - alpha_r) D)`.
    pub fn eta(&self) -> EtaPair<S> {
        let one = S::one();
        let d = self.d();
        EtaPair::new(
            self.beta1.clone() / ((one.clone() - self.alpha1.clone()) * d.clone()),
            self.beta2.clone() / ((one - self.alpha2.clone()) * d),
        )
    }

    pub fn is_degenerate(&self) -> bool {
        match S::BACKEND {
            Backend::Exact => self.alpha1 == self.alpha2,
            Backend::Float64 => (self.alpha1.to_f64() - self.alpha2.to_f64()).abs() <= 1e-12,
        }
    }

    pub fn to_f64(&self) -> ChainParams<f64> {
        ChainParams {
            n: self.n,
            alpha1: self.alpha1.to_f64(),
            alpha2: self.alpha2.to_f64(),
            beta1: self.beta1.to_f64(),
            beta2: self.beta2.to_f64(),
        }
    }
}

/// States `(i1, i2)` with `i1 + i2 <= N` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateSpace {
    pub n: u32,
    pub states: Vec<(u32, u32)>,
    #[serde(skip)]
    index: BTreeMap<(u32, u32), usize>,
}

impl StateSpace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: (u32, u32)) -> Option<usize> {
        self.index.get(&s).copied()
    }
}

pub fn build_state_space(n: u32) -> StateSpace {
    let states = crate::poly::grid(n);
    let index = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    StateSpace { n, states, index }
}

/// Dense kernel, `entries[dest][src] = K(dest; src)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<S> {
    pub space: StateSpace,
    pub entries: Vec<Vec<S>>,
}

impl<S: Scalar> KernelMatrix<S> {
    pub fn get(&self, dest: usize, src: usize) -> &S {
        &self.entries[dest][src]
    }

    pub fn to_f64(&self) -> KernelMatrix<f64> {
        KernelMatrix {
            space: self.space.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(S::to_f64).collect()).collect(),
        }
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        let n = self.space.len();
        DMatrix::from_fn(n, n, |r, c| self.entries[r][c].to_f64())
    }

    /// Largest `|column sum - 1|`.
    pub fn column_sum_residual(&self) -> S {
        let n = self.space.len();
        let mut worst = S::zero();
        for c in 0..n {
            let s = (0..n).fold(S::zero(), |acc, r| acc + self.entries[r][c].clone());
            let d = (s - S::one()).abs_value();
            if d > worst {
                worst = d;
            }
        }
        worst
    }

    /// Largest entrywise difference from another kernel.
    pub fn max_difference(&self, other: &KernelMatrix<S>) -> S {
        let mut worst = S::zero();
        for (ra, rb) in self.entries.iter().zip(&other.entries) {
            for (a, b) in ra.iter().zip(rb) {
                let d = (a.clone() - b.clone()).abs_value();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn min_entry(&self) -> S {
        self.entries
            .iter()
            .flatten()
            .fold(S::one(), |acc, v| if *v < acc { v.clone() } else { acc })
    }
}

/// `C(M, k) alpha^k (1 - alpha)^{M-k}`.
pub fn binomial_pmf<S: Scalar>(k: u32, m: u32, alpha: &S) -> Result<S> {
    if k > m {
        return Err(Error::OutOfRange(format!("k = {k} exceeds M = {m}")));
    }
    let c = S::from_rational(&Rational::from_integer(BigInt::from(binomial(m as u64, k as u64))));
    Ok(c * alpha.powi(k as i64) * (S::one() - alpha.clone()).powi((m - k) as i64))
}

/// `N!/(i1! i2! (N-i1-i2)!) p^i1 q^i2 (1-p-q)^{N-i1-i2}`, zero off the triangle.
pub fn trinomial<S: Scalar>(i1: u32, i2: u32, n: u32, p: &S, q: &S) -> S {
    if i1 + i2 > n {
        return S::zero();
    }
    let c = S::from_rational(&Rational::from_integer(BigInt::from(trinomial_coefficient(
        n as u64, i1 as u64, i2 as u64,
    ))));
    c * p.powi(i1 as i64) * q.powi(i2 as i64) * (S::one() - p.clone() - q.clone()).powi((n - i1 - i2) as i64)
}

fn assemble<S: Scalar>(params: &ChainParams<S>, f: impl Fn((u32, u32), (u32, u32)) -> S + Sync) -> KernelMatrix<S> {
    let space = build_state_space(params.n);
    let column = |&src: &(u32, u32)| -> Vec<S> { space.states.iter().map(|&dest| f(dest, src)).collect() };
    #[cfg(feature = "parallel")]
    let columns: Vec<Vec<S>> = {
        use rayon::prelude::*;
        space.states.par_iter().map(column).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let columns: Vec<Vec<S>> = space.states.iter().map(column).collect();

    let n = space.len();
    let entries = (0..n).map(|r| (0..n).map(|c| columns[c][r].clone()).collect()).collect();
    KernelMatrix { space, entries }
}

/// Sum over the banked successes `(k1, k2)` of binomial times trinomial
/// probabilities.
pub fn kernel_convolution_entry<S: Scalar>(p: &ChainParams<S>, dest: (u32, u32), src: (u32, u32)) -> S {
    let (j1, j2) = dest;
    let (i1, i2) = src;
    let mut acc = S::zero();
    for k1 in 0..=i1.min(j1) {
        for k2 in 0..=i2.min(j2) {
            let b1 = binomial_pmf(k1, i1, &p.alpha1).expect("k1 <= i1");
            let b2 = binomial_pmf(k2, i2, &p.alpha2).expect("k2 <= i2");
            let t = trinomial(j1 - k1, j2 - k2, p.n - k1 - k2, &p.beta1, &p.beta2);
            acc = acc + b1 * b2 * t;
        }
    }
    acc
}

/// The closed single expression for `K(j; i)` with the factorials pulled out
/// of the double sum.
pub fn kernel_closed_entry<S: Scalar>(p: &ChainParams<S>, dest: (u32, u32), src: (u32, u32)) -> S {
    let (j1, j2) = dest;
    let (i1, i2) = src;
    let n = p.n;
    let one = S::one();
    let f = |k: u32| S::from_rational(&Rational::from_integer(BigInt::from(crate::scalar::factorial(k as u64))));
    let rest = one.clone() - p.beta1.clone() - p.beta2.clone();
    let lead = f(i1) * f(i2) * p.beta1.powi(j1 as i64) * p.beta2.powi(j2 as i64) * rest.powi((n - j1 - j2) as i64)
        * (one.clone() - p.alpha1.clone()).powi(i1 as i64)
        * (one.clone() - p.alpha2.clone()).powi(i2 as i64)
        / f(n - j1 - j2);
    let r1 = p.alpha1.clone() / ((one.clone() - p.alpha1.clone()) * p.beta1.clone());
    let r2 = p.alpha2.clone() / ((one - p.alpha2.clone()) * p.beta2.clone());
    let mut acc = S::zero();
    for k1 in 0..=i1.min(j1) {
        for k2 in 0..=i2.min(j2) {
            acc = acc
                + r1.powi(k1 as i64) * r2.powi(k2 as i64) * f(n - k1 - k2)
                    / (f(i1 - k1) * f(i2 - k2) * f(j1 - k1) * f(j2 - k2) * f(k1) * f(k2));
        }
    }
    lead * acc
}

/// `K(j; i) = b2(j1, j2, N; beta1, beta2) (1-alpha1)^i1 (1-alpha2)^i2
///            F3(-j1, -j2, -i1, -i2; -N; alpha1/(beta1(alpha1-1)), alpha2/(beta2(alpha2-1)))`.
///
/// The trinomial factor carries the destination and the `(1-alpha)` powers
/// the source; this was fixed by exact comparison with the other two
/// evaluators.
pub fn kernel_f3_entry<S: Scalar>(p: &ChainParams<S>, dest: (u32, u32), src: (u32, u32)) -> S {
    let (j1, j2) = dest;
    let (i1, i2) = src;
    let one = S::one();
    let neg = |k: u32| S::from_i64(-(k as i64));
    let x = p.alpha1.clone() / (p.beta1.clone() * (p.alpha1.clone() - one.clone()));
    let y = p.alpha2.clone() / (p.beta2.clone() * (p.alpha2.clone() - one.clone()));
    let f3 = appell_f3(&neg(j1), &neg(j2), &neg(i1), &neg(i2), &neg(p.n), &x, &y)
        .expect("kernel F3 terminates and (-N)_{r+s} stays nonzero on the triangle");
    trinomial(j1, j2, p.n, &p.beta1, &p.beta2)
        * (one.clone() - p.alpha1.clone()).powi(i1 as i64)
        * (one - p.alpha2.clone()).powi(i2 as i64)
        * f3
}

pub fn kernel_convolution<S: Scalar>(p: &ChainParams<S>) -> KernelMatrix<S> {
    assemble(p, |d, s| kernel_convolution_entry(p, d, s))
}

pub fn kernel_closed<S: Scalar>(p: &ChainParams<S>) -> KernelMatrix<S> {
    assemble(p, |d, s| kernel_closed_entry(p, d, s))
}

pub fn kernel_f3<S: Scalar>(p: &ChainParams<S>) -> KernelMatrix<S> {
    assemble(p, |d, s| kernel_f3_entry(p, d, s))
}

/// `Psi_00(i) = b2(i1, i2, N; eta1, eta2)` over the state space.
pub fn stationary_distribution<S: Scalar>(p: &ChainParams<S>) -> Vec<S> {
    let eta = p.eta();
    build_state_space(p.n)
        .states
        .iter()
        .map(|&(i1, i2)| trinomial(i1, i2, p.n, &eta.eta1, &eta.eta2))
        .collect()
}

/// Largest `|Psi(j) K(i; j) - Psi(i) K(j; i)|`.
pub fn detailed_balance_residual<S: Scalar>(k: &KernelMatrix<S>, psi: &[S]) -> S {
    let n = k.space.len();
    let mut worst = S::zero();
    for i in 0..n {
        for j in 0..n {
            let d = (psi[j].clone() * k.entries[i][j].clone() - psi[i].clone() * k.entries[j][i].clone()).abs_value();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Largest `|(K Psi)(i) - Psi(i)|`.
pub fn stationarity_residual<S: Scalar>(k: &KernelMatrix<S>, psi: &[S]) -> S {
    let n = k.space.len();
    let mut worst = S::zero();
    for r in 0..n {
        let s = (0..n).fold(S::zero(), |acc, c| acc + k.entries[r][c].clone() * psi[c].clone());
        let d = (s - psi[r].clone()).abs_value();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Which quadratic root went into `(t, u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(t, u)` from the `+sqrt` root, `(v, w)` from the `-sqrt` root.
    PlusMinus,
    MinusPlus,
    /// `alpha1 = alpha2`: `t = u = v = w`.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointSolution<S> {
    pub tuvw: TuvwParams<S>,
    pub branch: Branch,
    pub degenerate: bool,
    /// `(a1 - a2 + a1 b1 + a2 b2)^2 - 4 a1 b1 (a1 - a2)`.
    pub discriminant: S,
    /// `(a1 - a2 + a2 b2 - a1 b1)^2 + 4 a1 a2 b1 b2`; equal to `discriminant`.
    pub discriminant_alt: S,
}

/// Both forms of the discriminant.
pub fn discriminants<S: Scalar>(p: &ChainParams<S>) -> (S, S) {
    let (a1, a2, b1, b2) = (p.alpha1.clone(), p.alpha2.clone(), p.beta1.clone(), p.beta2.clone());
    let four = S::from_i64(4);
    let q = a1.clone() - a2.clone() + a1.clone() * b1.clone() + a2.clone() * b2.clone();
    let d1 = q.clone() * q - four.clone() * a1.clone() * b1.clone() * (a1.clone() - a2.clone());
    let r = a1.clone() - a2.clone() + a2.clone() * b2.clone() - a1.clone() * b1.clone();
    let d2 = r.clone() * r + four * a1 * a2 * b1 * b2;
    (d1, d2)
}

/// Solves the four fixed-point relations for `(t, u, v, w)`.
///
/// For `alpha1 != alpha2`, `t - alpha1 = (a1 - a2 + a1 b1 + a2 b2 +- sqrt(Delta)) (1 - a1) / (2 (a1 - a2) b1)`
/// and `beta2 u = -beta1 t + t (1 - alpha1) / (t - alpha1)`; `(t, u)` takes one
/// root and `(v, w)` the other, giving two solutions. For `alpha1 = alpha2 = a`,
/// `t = u = v = w = (1 - a (1 - beta1 - beta2)) / (beta1 + beta2)` (both
/// returned solutions are equal).
///
/// In the exact backend `Delta` must be a rational square.
pub fn solve_fixed_points<S: Scalar>(p: &ChainParams<S>) -> Result<(FixedPointSolution<S>, FixedPointSolution<S>)> {
    let (d1, d2) = discriminants(p);
    let one = S::one();
    if p.is_degenerate() {
        let t = (one.clone() - p.alpha1.clone() * (one - p.beta1.clone() - p.beta2.clone()))
            / (p.beta1.clone() + p.beta2.clone());
        let sol = FixedPointSolution {
            tuvw: TuvwParams::uniform(t),
            branch: Branch::Degenerate,
            degenerate: true,
            discriminant: d1,
            discriminant_alt: d2,
        };
        return Ok((sol.clone(), sol));
    }
    let root = d1.sqrt_checked().ok_or_else(|| Error::IrrationalDiscriminant(format!("{d1:?}")))?;
    let (a1, a2, b1, b2) = (p.alpha1.clone(), p.alpha2.clone(), p.beta1.clone(), p.beta2.clone());
    let q = a1.clone() - a2.clone() + a1.clone() * b1.clone() + a2.clone() * b2.clone();
    let scale = (one.clone() - a1.clone()) / (S::from_i64(2) * (a1.clone() - a2) * b1.clone());
    let tu = |sign: S| -> Result<(S, S)> {
        let tma = (q.clone() + sign * root.clone()) * scale.clone();
        if tma.is_zero() {
            return Err(Error::SingularRoot);
        }
        let t = a1.clone() + tma.clone();
        let u = (-(b1.clone() * t.clone()) + t.clone() * (one.clone() - a1.clone()) / tma) / b2.clone();
        Ok((t, u))
    };
    let (tp, up) = tu(S::one())?;
    let (tm, um) = tu(-S::one())?;
    let mk = |t: &S, u: &S, v: &S, w: &S, branch| FixedPointSolution {
        tuvw: TuvwParams::new(t.clone(), u.clone(), v.clone(), w.clone()),
        branch,
        degenerate: false,
        discriminant: d1.clone(),
        discriminant_alt: d2.clone(),
    };
    Ok((mk(&tp, &up, &tm, &um, Branch::PlusMinus), mk(&tm, &um, &tp, &up, Branch::MinusPlus)))
}

/// Residuals of the four fixed-point relations
///
/// ```text
/// t = a1 (t (1-b1) - b2 u) / (1 - b1 t - b2 u)
/// u = a2 (u (1-b2) - b1 t) / (1 - b1 t - b2 u)
/// v = a1 (v (1-b1) - b2 w) / (1 - b1 v - b2 w)
/// w = a2 (w (1-b2) - b1 v) / (1 - b1 v - b2 w)
/// ```
///
/// each scaled by `max(1, |lhs|)`.
pub fn fixed_point_residuals<S: Scalar>(p: &ChainParams<S>, q: &TuvwParams<S>) -> [S; 4] {
    relations(p, q, false)
}

/// Residuals of the relations exactly as first written down, with
/// `u (1 - b1)` in the second and `- b2 u` in the third. Kept so that reports
/// can show why the corrected forms are used.
pub fn fixed_point_residuals_as_printed<S: Scalar>(p: &ChainParams<S>, q: &TuvwParams<S>) -> [S; 4] {
    relations(p, q, true)
}

fn relations<S: Scalar>(p: &ChainParams<S>, q: &TuvwParams<S>, printed: bool) -> [S; 4] {
    let one = S::one();
    let (a1, a2, b1, b2) = (p.alpha1.clone(), p.alpha2.clone(), p.beta1.clone(), p.beta2.clone());
    let (t, u, v, w) = (q.t.clone(), q.u.clone(), q.v.clone(), q.w.clone());
    let den1 = one.clone() - b1.clone() * t.clone() - b2.clone() * u.clone();
    let den2 = one.clone() - b1.clone() * v.clone() - b2.clone() * w.clone();
    let u_coef = if printed { one.clone() - b1.clone() } else { one.clone() - b2.clone() };
    let third_tail = if printed { u.clone() } else { w.clone() };
    let rhs = [
        a1.clone() * (t.clone() * (one.clone() - b1.clone()) - b2.clone() * u.clone()) / den1.clone(),
        a2.clone() * (u.clone() * u_coef - b1.clone() * t.clone()) / den1,
        a1 * (v.clone() * (one.clone() - b1.clone()) - b2.clone() * third_tail) / den2.clone(),
        a2 * (w.clone() * (one - b2) - b1 * v.clone()) / den2,
    ];
    let lhs = [t, u, v, w];
    let mut out: [S; 4] = std::array::from_fn(|_| S::zero());
    for k in 0..4 {
        let diff = (lhs[k].clone() - rhs[k].clone()).abs_value();
        out[k] = match S::BACKEND {
            Backend::Exact => diff,
            Backend::Float64 => {
                let scale = lhs[k].abs_value();
                if scale > S::one() {
                    diff / scale
                } else {
                    diff
                }
            }
        };
    }
    out
}

/// Analytic eigenvalue family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `lambda_{m,n} = (1 - b1 t - b2 u)^m (1 - b1 v - b2 w)^n`.
    BranchProduct,
    /// `lambda_{m,n} = ((a1(1-b1) + a2(1-b2) + sqrt(Delta)) / 2)^{m+n}`,
    /// which is `alpha^{m+n}` when `alpha1 = alpha2`.
    SymmetricPower,
}

/// How the product family's two factors were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    PlusMinus,
    MinusPlus,
    /// Both factors from the finite degenerate solution `t = u = v = w`.
    DegenerateFinite,
    /// Degenerate case, first factor from the finite solution and second
    /// from the other quadratic root, which escapes to infinity as
    /// `alpha2 -> alpha1`; there `1 - b1 t - b2 u = a1 (t - 1) / (t - a1) -> alpha`.
    DegenerateEscapedRoot,
    /// Not built from a fixed-point solution.
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenCandidate<S> {
    pub family: Family,
    pub assignment: Assignment,
    /// `((m, n), lambda_{m,n})` in grid order.
    pub values: Vec<((u32, u32), S)>,
}

impl<S: Scalar> EigenCandidate<S> {
    pub fn label(&self) -> String {
        format!("{:?}/{:?}", self.family, self.assignment)
    }
}

fn product_candidate<S: Scalar>(n: u32, f1: S, f2: S, assignment: Assignment) -> EigenCandidate<S> {
    EigenCandidate {
        family: Family::BranchProduct,
        assignment,
        values: crate::poly::grid(n)
            .into_iter()
            .map(|(m, k)| ((m, k), f1.powi(m as i64) * f2.powi(k as i64)))
            .collect(),
    }
}

/// Every analytic eigenvalue candidate for the given fixed-point solutions.
pub fn eigenvalues_analytic<S: Scalar>(
    p: &ChainParams<S>,
    fps: &(FixedPointSolution<S>, FixedPointSolution<S>),
) -> Vec<EigenCandidate<S>> {
    let one = S::one();
    let factor = |t: &S, u: &S| one.clone() - p.beta1.clone() * t.clone() - p.beta2.clone() * u.clone();
    let mut out = Vec::new();
    if fps.0.degenerate {
        let q = &fps.0.tuvw;
        let finite = factor(&q.t, &q.u);
        out.push(product_candidate(p.n, finite.clone(), factor(&q.v, &q.w), Assignment::DegenerateFinite));
        out.push(product_candidate(p.n, finite, p.alpha1.clone(), Assignment::DegenerateEscapedRoot));
    } else {
        for (fp, a) in [(&fps.0, Assignment::PlusMinus), (&fps.1, Assignment::MinusPlus)] {
            let q = &fp.tuvw;
            out.push(product_candidate(p.n, factor(&q.t, &q.u), factor(&q.v, &q.w), a));
        }
    }
    let top = if fps.0.degenerate {
        Some(p.alpha1.clone())
    } else {
        fps.0.discriminant.sqrt_checked().map(|r| {
            (p.alpha1.clone() * (one.clone() - p.beta1.clone()) + p.alpha2.clone() * (one.clone() - p.beta2.clone()) + r)
                / S::from_i64(2)
        })
    };
    if let Some(top) = top {
        out.push(EigenCandidate {
            family: Family::SymmetricPower,
            assignment: Assignment::None,
            values: crate::poly::grid(p.n).into_iter().map(|(m, k)| ((m, k), top.powi((m + k) as i64))).collect(),
        });
    }
    out
}

/// Eigen-equation orientation tested by [`verify_eigen`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `sum_j K(i; j) phi(j)`: the stored matrix times `phi`.
    Forward,
    /// `sum_j K(j; i) phi(j)`: the transposed matrix times `phi`.
    Transpose,
    /// Forward product applied to `Psi_00 * phi`.
    PsiForward,
    /// Transposed product applied to `Psi_00 * phi`.
    PsiTranspose,
}

/// The orientation in which `P_{m,n}` is an eigenvector.
pub const EIGEN_ORIENTATION: Orientation = Orientation::Transpose;

#[derive(Clone, Debug, Serialize)]
pub struct OrientationResult {
    pub orientation: Orientation,
    /// Rayleigh quotient `<v, K v> / <v, v>`.
    pub lambda: f64,
    /// `||K v - lambda v||_inf / ||v||_inf`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    pub m: u32,
    pub n: u32,
    pub results: Vec<OrientationResult>,
}

impl EigenReport {
    pub fn best(&self) -> &OrientationResult {
        self.results
            .iter()
            .min_by(|a, b| a.residual.total_cmp(&b.residual))
            .expect("four orientations")
    }
}

fn rayleigh(mat: &DMatrix<f64>, v: &[f64]) -> (f64, f64) {
    let n = v.len();
    let kv: Vec<f64> = (0..n).map(|r| (0..n).map(|c| mat[(r, c)] * v[c]).sum()).collect();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let lambda = v.iter().zip(&kv).map(|(a, b)| a * b).sum::<f64>() / vv;
    let norm = v.iter().fold(0f64, |m, x| m.max(x.abs()));
    let res = kv.iter().zip(v).fold(0f64, |m, (a, b)| m.max((a - lambda * b).abs()));
    (lambda, if norm > 0.0 { res / norm } else { res })
}

/// Builds `phi = P_{m,n}` at the solved `(t, u, v, w)` and measures how well
/// it solves the eigen-equation in each orientation.
pub fn verify_eigen<S: Scalar>(p: &ChainParams<S>, q: &TuvwParams<S>, m: u32, n: u32) -> Result<EigenReport> {
    EigenChecker::new(p).check(q, m, n)
}

/// [`verify_eigen`] for every `(m, n)` with `m + n <= N`.
pub fn verify_eigen_all<S: Scalar>(p: &ChainParams<S>, q: &TuvwParams<S>) -> Result<Vec<EigenReport>> {
    let checker = EigenChecker::new(p);
    crate::poly::grid(p.n).into_iter().map(|(m, n)| checker.check(q, m, n)).collect()
}

/// Float kernel, its transpose and the stationary law, built once.
struct EigenChecker {
    n: u32,
    kernel: DMatrix<f64>,
    transpose: DMatrix<f64>,
    psi: Vec<f64>,
    space: StateSpace,
}

impl EigenChecker {
    fn new<S: Scalar>(p: &ChainParams<S>) -> Self {
        let pf = p.to_f64();
        let kernel = kernel_closed(&pf).to_dmatrix();
        let transpose = kernel.transpose();
        EigenChecker { n: p.n, kernel, transpose, psi: stationary_distribution(&pf), space: build_state_space(p.n) }
    }

    fn check<S: Scalar>(&self, q: &TuvwParams<S>, m: u32, n: u32) -> Result<EigenReport> {
        let phi: Vec<f64> = self
            .space
            .states
            .iter()
            .map(|&(i1, i2)| poly_p(m, n, i1, i2, self.n, q).map(|v| v.to_f64()))
            .collect::<Result<_>>()?;
        let psi_phi: Vec<f64> = phi.iter().zip(&self.psi).map(|(a, b)| a * b).collect();
        let results = [
            (Orientation::Forward, &self.kernel, &phi),
            (Orientation::Transpose, &self.transpose, &phi),
            (Orientation::PsiForward, &self.kernel, &psi_phi),
            (Orientation::PsiTranspose, &self.transpose, &psi_phi),
        ]
        .into_iter()
        .map(|(o, mat, v)| {
            let (lambda, residual) = rayleigh(mat, v);
            OrientationResult { orientation: o, lambda, residual }
        })
        .collect();
        Ok(EigenReport { m, n, results })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateMatch {
    pub family: Family,
    pub assignment: Assignment,
    /// Largest deviation between sorted numeric and candidate eigenvalues.
    pub max_deviation: f64,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    /// Numeric eigenvalues, descending.
    pub numeric: Vec<f64>,
    /// `(value, multiplicity)` with values merged within [`SPECTRUM_TOL`].
    pub multiplicities: Vec<(f64, usize)>,
    pub candidates: Vec<CandidateMatch>,
    /// Families with at least one matching candidate.
    pub matched_families: Vec<Family>,
    /// Exactly one family matched.
    pub unambiguous: bool,
    /// `lambda = 1` is simple and every eigenvalue lies in `[-1, 1]`.
    pub confined: bool,
    pub symmetry_defect: f64,
}

impl SpectrumReport {
    pub fn verdict(&self) -> String {
        let matched: Vec<String> = self
            .candidates
            .iter()
            .filter(|c| c.matched)
            .map(|c| format!("{:?}/{:?}", c.family, c.assignment))
            .collect();
        if matched.is_empty() {
            "no analytic candidate matches the numeric spectrum".into()
        } else if self.unambiguous {
            format!("unambiguous: {}", matched.join(", "))
        } else {
            format!("ambiguous: {}", matched.join(", "))
        }
    }
}

/// Dense spectral check: symmetrize the kernel with the stationary law,
/// diagonalize, and compare with every analytic candidate.
pub fn verify_spectrum<S: Scalar>(p: &ChainParams<S>) -> Result<SpectrumReport> {
    let pf = p.to_f64();
    let kernel = kernel_closed(&pf).to_dmatrix();
    let psi = stationary_distribution(&pf);
    let n = psi.len();
    // S[i][j] = K[i][j] sqrt(psi(j) / psi(i))
    let sym = DMatrix::from_fn(n, n, |i, j| kernel[(i, j)] * (psi[j] / psi[i]).sqrt());
    let symmetry_defect = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(0f64, |m, (i, j)| m.max((sym[(i, j)] - sym[(j, i)]).abs()));
    let sym = (&sym + sym.transpose()) * 0.5;
    let mut numeric: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    numeric.sort_by(|a, b| b.total_cmp(a));

    let mut multiplicities: Vec<(f64, usize)> = Vec::new();
    for &v in &numeric {
        match multiplicities.last_mut() {
            Some((last, count)) if (*last - v).abs() <= SPECTRUM_TOL => *count += 1,
            _ => multiplicities.push((v, 1)),
        }
    }
    let ones = numeric.iter().filter(|v| (*v - 1.0).abs() <= SPECTRUM_TOL).count();
    let confined = ones == 1 && numeric.iter().all(|v| v.abs() <= 1.0 + SPECTRUM_TOL);

    let candidates: Vec<CandidateMatch> = match solve_fixed_points(&pf) {
        Ok(fps) => eigenvalues_analytic(&pf, &fps)
            .into_iter()
            .map(|c| {
                let mut vals: Vec<f64> = c.values.iter().map(|(_, v)| *v).collect();
                vals.sort_by(|a, b| b.total_cmp(a));
                let max_deviation = if vals.iter().all(|v| v.is_finite()) {
                    vals.iter().zip(&numeric).fold(0f64, |m, (a, b)| m.max((a - b).abs()))
                } else {
                    f64::INFINITY
                };
                CandidateMatch {
                    family: c.family,
                    assignment: c.assignment,
                    max_deviation,
                    matched: max_deviation <= SPECTRUM_TOL,
                }
            })
            .collect(),
        Err(_) => Vec::new(),
    };
    let mut matched_families: Vec<Family> = Vec::new();
    for c in candidates.iter().filter(|c| c.matched) {
        if !matched_families.contains(&c.family) {
            matched_families.push(c.family);
        }
    }
    let unambiguous = matched_families.len() == 1;
    Ok(SpectrumReport { numeric, multiplicities, candidates, matched_families, unambiguous, confined, symmetry_defect })
}

/// For `alpha1 = alpha2`, `P_{m,n}(i1, i2)` depends on `i1 + i2` only; returns
/// whether that holds exactly for every `(m, n)`.
pub fn degenerate_eigenvector_collapses(p: &ChainParams<Rational>) -> Result<bool> {
    let fps = solve_fixed_points(p)?;
    if !fps.0.degenerate {
        return Err(Error::InvalidParameter { name: "alpha", reason: "requires alpha1 = alpha2".into() });
    }
    let q = &fps.0.tuvw;
    for (m, n) in crate::poly::grid(p.n) {
        let mut by_level: HashMap<u32, Rational> = HashMap::new();
        for (i1, i2) in crate::poly::grid(p.n) {
            let v = poly_p(m, n, i1, i2, p.n, q)?;
            let d = crate::poly::poly_p_degenerate(m, n, i1, i2, p.n, &q.t)?;
            if v != d {
                return Ok(false);
            }
            match by_level.get(&(i1 + i2)) {
                Some(prev) if *prev != v => return Ok(false),
                Some(_) => {}
                None => {
                    by_level.insert(i1 + i2, v);
                }
            }
        }
    }
    Ok(true)
}

/// Largest absolute entry.
pub fn max_abs<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |m, x| {
        let a = x.abs_value();
        if a > m {
            a
        } else {
            m
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn worked(n: u32) -> ChainParams<Rational> {
        ChainParams::new(n, q(1, 2), q(1, 3), q(1, 4), q(1, 4)).unwrap()
    }

    #[test]
    fn state_spaces() {
        assert_eq!(build_state_space(5).len(), 21);
        assert_eq!(build_state_space(1).states, vec![(0, 0), (0, 1), (1, 0)]);
        assert_eq!(build_state_space(2).len(), 6);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_pmf(1, 2, &q(1, 2)).unwrap(), q(1, 2));
        assert_eq!(binomial_pmf(0, 4, &q(1, 3)).unwrap(), q(16, 81));
        let total = (0..=6).fold(Rational::zero(), |acc, k| acc + binomial_pmf(k, 6, &q(1, 6)).unwrap());
        assert_eq!(total, q(1, 1));
        assert!(binomial_pmf(3, 2, &q(1, 2)).is_err());
    }

    #[test]
    fn n1_hand_enumeration() {
        let p = worked(1);
        let s = build_state_space(1);
        let at = |d, src| s.index_of(d).zip(s.index_of(src)).unwrap();
        for k in [kernel_convolution(&p), kernel_closed(&p), kernel_f3(&p)] {
            let (r, c) = at((1, 0), (1, 0));
            assert_eq!(k.entries[r][c], q(5, 8));
            let (r, c) = at((1, 0), (0, 0));
            assert_eq!(k.entries[r][c], q(1, 4));
            let (r, c) = at((0, 0), (0, 0));
            assert_eq!(k.entries[r][c], q(1, 2));
            assert!(k.column_sum_residual().is_zero());
        }
    }

    #[test]
    fn worked_stationary_law() {
        let p = worked(1);
        assert_eq!(p.d(), q(11, 8));
        let eta = p.eta();
        assert_eq!((eta.eta1, eta.eta2), (q(4, 11), q(3, 11)));
        assert_eq!(stationary_distribution(&p), vec![q(4, 11), q(3, 11), q(4, 11)]);
    }

    #[test]
    fn worked_discriminant() {
        let (d1, d2) = discriminants(&worked(2));
        assert_eq!(d1, q(11, 192));
        assert_eq!(d2, q(11, 192));
        assert!(matches!(solve_fixed_points(&worked(2)), Err(Error::IrrationalDiscriminant(_))));
    }

    #[test]
    fn degenerate_fixed_point() {
        let p = ChainParams::new(2, q(1, 2), q(1, 2), q(1, 4), q(1, 4)).unwrap();
        let (a, b) = solve_fixed_points(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tuvw, TuvwParams::uniform(q(3, 2)));
        assert!(fixed_point_residuals(&p, &a.tuvw).iter().all(Zero::is_zero));
    }

    #[test]
    fn invalid_params() {
        assert!(ChainParams::new(1, q(1, 2), q(1, 2), q(3, 5), q(3, 5)).is_err());
        assert!(ChainParams::new(1, q(1, 1), q(1, 2), q(1, 5), q(1, 5)).is_err());
        assert!(ChainParams::new(0, q(1, 2), q(1, 2), q(1, 5), q(1, 5)).is_err());
    }
}
