//! Terminating hypergeometric and Appell-type series.
//!
//! Every evaluator sums the defining multiple series term by term. A series
//! terminates through numerator parameters that are nonpositive integers; a
//! denominator Pochhammer symbol that vanishes on a term whose numerator is
//! still nonzero is reported as [`Error::ZeroDenominator`], never skipped.
//!
//! Float inputs within [`FLOAT_INTEGER_SNAP`](crate::scalar::FLOAT_INTEGER_SNAP)
//! of a nonpositive integer are treated as that integer.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Value of a terminating series together with the number of nonzero terms
/// that went into it.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue<S> {
    pub value: S,
    pub term_count: u64,
}

/// Rising factorial `(a)_k = a (a+1) ... (a+k-1)`, `(a)_0 = 1`.
pub fn pochhammer<S: Scalar>(a: &S, k: u64) -> S {
    let a = snap(a);
    let mut acc = S::one();
    let mut f = a;
    for _ in 0..k {
        acc = acc * f.clone();
        f = f + S::one();
    }
    acc
}

/// Replaces a float that sits on a nonpositive integer by the integer itself.
fn snap<S: Scalar>(a: &S) -> S {
    match a.nonpositive_integer() {
        Some(n) => S::from_i64(-(n as i64)),
        None => a.clone(),
    }
}

/// First index `k` with `(a)_k = 0`, if any.
fn vanishes_from<S: Scalar>(a: &S) -> Option<u64> {
    a.nonpositive_integer().map(|n| n + 1)
}

/// `(a)_0 ..= (a)_len`.
fn poch_table<S: Scalar>(a: &S, len: u64) -> Vec<S> {
    let a = snap(a);
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut acc = S::one();
    out.push(acc.clone());
    let mut f = a;
    for _ in 0..len {
        acc = acc * f.clone();
        f = f + S::one();
        out.push(acc.clone());
    }
    out
}

fn power_table<S: Scalar>(x: &S, len: u64) -> Vec<S> {
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut acc = S::one();
    out.push(acc.clone());
    for _ in 0..len {
        acc = acc * x.clone();
        out.push(acc.clone());
    }
    out
}

fn inverse_factorials<S: Scalar>(len: u64) -> Vec<S> {
    let mut out = Vec::with_capacity(len as usize + 1);
    let mut acc = S::one();
    out.push(acc.clone());
    for k in 1..=len {
        acc = acc / S::from_i64(k as i64);
        out.push(acc.clone());
    }
    out
}

/// Index bound set by the smallest terminating numerator parameter.
fn termination_bound<S: Scalar>(params: &[&S]) -> Option<u64> {
    params.iter().filter_map(|p| p.nonpositive_integer()).min()
}

/// Checks a denominator Pochhammer symbol against the largest index it will
/// be evaluated at on a term with nonzero numerator.
fn check_denominator<S: Scalar>(d: &S, parameter: usize, max_index: u64) -> Result<()> {
    match vanishes_from(d) {
        Some(k) if k <= max_index => Err(Error::ZeroDenominator { parameter, term: k }),
        _ => Ok(()),
    }
}

/// Generalized hypergeometric `pFq(numer; denom; z)` for terminating
/// parameter lists (2F1, 3F2 and 4F3 are the cases used in this crate).
pub fn hyp_terminating<S: Scalar>(numer: &[S], denom: &[S], z: &S) -> Result<SeriesValue<S>> {
    let refs: Vec<&S> = numer.iter().collect();
    let bound = termination_bound(&refs).ok_or(Error::NonTerminating)?;
    for (j, d) in denom.iter().enumerate() {
        check_denominator(d, j, bound)?;
    }
    let numer: Vec<S> = numer.iter().map(snap).collect();
    let denom: Vec<S> = denom.iter().map(snap).collect();

    let mut sum = S::one();
    let mut term = S::one();
    let mut count = 1u64;
    for k in 0..bound {
        let kk = S::from_i64(k as i64);
        let mut num = z.clone();
        for a in &numer {
            num = num * (a.clone() + kk.clone());
        }
        let mut den = S::from_i64(k as i64 + 1);
        for d in &denom {
            den = den * (d.clone() + kk.clone());
        }
        if num.is_zero() {
            // the remaining terms carry the same vanishing factor
            break;
        }
        term = term * num / den;
        sum = sum + term.clone();
        count += 1;
    }
    Ok(SeriesValue { value: sum, term_count: count })
}

/// Result of the Whipple transformation of a balanced terminating 4F3 at
/// unit argument: `4F3(original) = prefactor * 4F3(numer; denom)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WhippleTransform<S> {
    pub numer: [S; 4],
    pub denom: [S; 3],
    pub prefactor: S,
}

/// Whipple transformation. `numer[0]` must be `-n`; the remaining entries are
/// `a, b, c` and `denom` is `d, e, f`.
///
/// ```text
/// 4F3(-n,a,b,c; d,e,f; 1) = (e-a)_n (f-a)_n / ((e)_n (f)_n)
///                         * 4F3(-n, a, d-b, d-c; d, 1+a-e-n, 1+a-f-n; 1)
/// ```
pub fn whipple_transform<S: Scalar>(numer: &[S], denom: &[S]) -> Result<WhippleTransform<S>> {
    if numer.len() != 4 {
        return Err(Error::Arity { expected: "4 numerator", got: numer.len() });
    }
    if denom.len() != 3 {
        return Err(Error::Arity { expected: "3 denominator", got: denom.len() });
    }
    let n = numer[0].nonpositive_integer().ok_or(Error::NonTerminating)?;
    let ns = S::from_i64(n as i64);
    let (a, b, c) = (numer[1].clone(), numer[2].clone(), numer[3].clone());
    let (d, e, f) = (denom[0].clone(), denom[1].clone(), denom[2].clone());
    let one = S::one();

    let residual = a.clone() + b.clone() + c.clone() + one.clone()
        - d.clone()
        - e.clone()
        - f.clone()
        - ns.clone();
    if !is_negligible(&residual) {
        return Err(Error::Unbalanced { residual: format!("{residual:?}") });
    }

    let den = pochhammer(&e, n) * pochhammer(&f, n);
    if den.is_zero() {
        return Err(Error::ZeroFactor("(e)_n (f)_n".into()));
    }
    let prefactor = pochhammer(&(e.clone() - a.clone()), n) * pochhammer(&(f.clone() - a.clone()), n) / den;
    Ok(WhippleTransform {
        numer: [numer[0].clone(), a.clone(), d.clone() - b, d.clone() - c],
        denom: [d, one.clone() + a.clone() - e - ns.clone(), one + a - f - ns],
        prefactor,
    })
}

fn is_negligible<S: Scalar>(x: &S) -> bool {
    match S::BACKEND {
        crate::scalar::Backend::Exact => x.is_zero(),
        crate::scalar::Backend::Float64 => x.to_f64().abs() <= crate::scalar::FLOAT_INTEGER_SNAP,
    }
}

/// Appell `F1(a; b, c; d; x, y) = sum (a)_{i+j} (b)_i (c)_j / (i! j! (d)_{i+j}) x^i y^j`.
pub fn appell_f1<S: Scalar>(a: &S, b: &S, c: &S, d: &S, x: &S, y: &S) -> Result<S> {
    let ta = a.nonpositive_integer();
    let tb = b.nonpositive_integer();
    let tc = c.nonpositive_integer();
    let (imax, jmax) = match (ta, tb, tc) {
        (Some(na), _, _) => (tb.map_or(na, |nb| nb.min(na)), tc.map_or(na, |nc| nc.min(na))),
        (None, Some(nb), Some(nc)) => (nb, nc),
        _ => return Err(Error::NonTerminating),
    };
    let total = imax + jmax;
    let pa = poch_table(a, total);
    let pb = poch_table(b, imax);
    let pc = poch_table(c, jmax);
    let pd = poch_table(d, total);
    let xi = power_table(x, imax);
    let yj = power_table(y, jmax);
    let inv = inverse_factorials::<S>(imax.max(jmax));
    let za = vanishes_from(a).unwrap_or(u64::MAX);
    let zb = vanishes_from(b).unwrap_or(u64::MAX);
    let zc = vanishes_from(c).unwrap_or(u64::MAX);
    let zd = vanishes_from(d).unwrap_or(u64::MAX);

    let mut sum = S::zero();
    for i in 0..=imax {
        if i >= zb {
            break;
        }
        for j in 0..=jmax {
            if j >= zc || i + j >= za {
                break;
            }
            if i + j >= zd {
                return Err(Error::ZeroDenominator { parameter: 0, term: i + j });
            }
            let num = pa[(i + j) as usize].clone() * pb[i as usize].clone() * pc[j as usize].clone();
            let den = pd[(i + j) as usize].clone();
            sum = sum
                + num * inv[i as usize].clone() * inv[j as usize].clone() / den
                    * xi[i as usize].clone()
                    * yj[j as usize].clone();
        }
    }
    Ok(sum)
}

/// Appell `F3(a, b, a', b'; c; x, y) = sum (a)_r (a')_r (b)_s (b')_s / (r! s! (c)_{r+s}) x^r y^s`.
#[allow(clippy::too_many_arguments)]
pub fn appell_f3<S: Scalar>(a: &S, b: &S, a2: &S, b2: &S, c: &S, x: &S, y: &S) -> Result<S> {
    let rmax = termination_bound(&[a, a2]).ok_or(Error::NonTerminating)?;
    let smax = termination_bound(&[b, b2]).ok_or(Error::NonTerminating)?;
    let pa = poch_table(a, rmax);
    let pa2 = poch_table(a2, rmax);
    let pb = poch_table(b, smax);
    let pb2 = poch_table(b2, smax);
    let pc = poch_table(c, rmax + smax);
    let xr = power_table(x, rmax);
    let ys = power_table(y, smax);
    let inv = inverse_factorials::<S>(rmax.max(smax));
    let zc = vanishes_from(c).unwrap_or(u64::MAX);

    let mut sum = S::zero();
    for r in 0..=rmax {
        let left = pa[r as usize].clone() * pa2[r as usize].clone();
        if left.is_zero() {
            break;
        }
        for s in 0..=smax {
            let right = pb[s as usize].clone() * pb2[s as usize].clone();
            if right.is_zero() {
                break;
            }
            if r + s >= zc {
                return Err(Error::ZeroDenominator { parameter: 0, term: r + s });
            }
            sum = sum
                + left.clone() * right * inv[r as usize].clone() * inv[s as usize].clone()
                    / pc[(r + s) as usize].clone()
                    * xr[r as usize].clone()
                    * ys[s as usize].clone();
        }
    }
    Ok(sum)
}

/// Iterated Appell function
///
/// ```text
/// F1^(2)(a, a'; b, c; d; l, m, n, r)
///   = sum_{i,j,k,l} (a)_{i+j} (a')_{k+l} (b)_{i+k} (c)_{j+l}
///                   / (i! j! k! l! (d)_{i+j+k+l}) * l^i m^j n^k r^l
/// ```
///
/// `a` and `a'` must both be nonpositive integers.
#[allow(clippy::too_many_arguments)]
pub fn f1_iterated<S: Scalar>(
    a: &S,
    a2: &S,
    b: &S,
    c: &S,
    d: &S,
    lambda: &S,
    mu: &S,
    nu: &S,
    rho: &S,
) -> Result<S> {
    let na = a.nonpositive_integer().ok_or(Error::NonTerminating)?;
    let na2 = a2.nonpositive_integer().ok_or(Error::NonTerminating)?;
    let total = na + na2;
    let pa = poch_table(a, na);
    let pa2 = poch_table(a2, na2);
    let pb = poch_table(b, total);
    let pc = poch_table(c, total);
    let pd = poch_table(d, total);
    let li = power_table(lambda, na);
    let mj = power_table(mu, na);
    let nk = power_table(nu, na2);
    let rl = power_table(rho, na2);
    let inv = inverse_factorials::<S>(na.max(na2));
    let zd = vanishes_from(d).unwrap_or(u64::MAX);

    let mut sum = S::zero();
    for i in 0..=na {
        for j in 0..=(na - i) {
            let outer = pa[(i + j) as usize].clone() * inv[i as usize].clone() * inv[j as usize].clone();
            for k in 0..=na2 {
                for l in 0..=(na2 - k) {
                    let num = pb[(i + k) as usize].clone() * pc[(j + l) as usize].clone();
                    if num.is_zero() {
                        continue;
                    }
                    let idx = i + j + k + l;
                    if idx >= zd {
                        return Err(Error::ZeroDenominator { parameter: 0, term: idx });
                    }
                    let term = outer.clone()
                        * pa2[(k + l) as usize].clone()
                        * num
                        * inv[k as usize].clone()
                        * inv[l as usize].clone()
                        / pd[idx as usize].clone()
                        * li[i as usize].clone()
                        * mj[j as usize].clone()
                        * nk[k as usize].clone()
                        * rl[l as usize].clone();
                    sum = sum + term;
                }
            }
        }
    }
    Ok(sum)
}

/// Closed-form rewrites of terminating 2F1, F1 and F1^(2) series.
///
/// Each function evaluates the *right-hand side* of a classical
/// transformation; comparing it with the direct evaluator is the identity
/// check.
pub mod transforms {
    use super::*;

    fn integer_exponent<S: Scalar>(e: &S) -> Result<i64> {
        e.as_integer().ok_or_else(|| Error::InvalidParameter {
            name: "exponent",
            reason: format!("{e:?} is not an integer; the prefactor is not rational"),
        })
    }

    /// Pfaff: `(1-x)^{-a} 2F1(a, c-b; c; x/(x-1))`.
    pub fn hyp2f1_pfaff<S: Scalar>(a: &S, b: &S, c: &S, x: &S) -> Result<S> {
        let one = S::one();
        let e = integer_exponent(&-a.clone())?;
        let z = x.clone() / (x.clone() - one.clone());
        let f = hyp_terminating(&[a.clone(), c.clone() - b.clone()], std::slice::from_ref(c), &z)?.value;
        Ok((one - x.clone()).powi(e) * f)
    }

    /// Euler: `(1-x)^{c-a-b} 2F1(c-a, c-b; c; x)`.
    pub fn hyp2f1_euler<S: Scalar>(a: &S, b: &S, c: &S, x: &S) -> Result<S> {
        let one = S::one();
        let e = integer_exponent(&(c.clone() - a.clone() - b.clone()))?;
        let f = hyp_terminating(&[c.clone() - a.clone(), c.clone() - b.clone()], std::slice::from_ref(c), x)?.value;
        Ok((one - x.clone()).powi(e) * f)
    }

    /// `(c-b)_n / (c)_n * 2F1(-n, b; 1+b-c-n; 1-x)`.
    pub fn hyp2f1_reflect<S: Scalar>(n: u64, b: &S, c: &S, x: &S) -> Result<S> {
        let one = S::one();
        let ns = S::from_i64(n as i64);
        let den = pochhammer(c, n);
        if den.is_zero() {
            return Err(Error::ZeroFactor("(c)_n".into()));
        }
        let pre = pochhammer(&(c.clone() - b.clone()), n) / den;
        let f = hyp_terminating(
            &[-ns.clone(), b.clone()],
            &[one.clone() + b.clone() - c.clone() - ns],
            &(one - x.clone()),
        )?
        .value;
        Ok(pre * f)
    }

    /// `(1-y)^{-a} F1(a; b, d-b-c; d; (y-x)/(y-1), y/(y-1))`.
    pub fn appell_f1_first<S: Scalar>(a: &S, b: &S, c: &S, d: &S, x: &S, y: &S) -> Result<S> {
        let one = S::one();
        let e = integer_exponent(&-a.clone())?;
        let ym1 = y.clone() - one.clone();
        let v = appell_f1(
            a,
            b,
            &(d.clone() - b.clone() - c.clone()),
            d,
            &((y.clone() - x.clone()) / ym1.clone()),
            &(y.clone() / ym1),
        )?;
        Ok((one - y.clone()).powi(e) * v)
    }

    /// `(1-x)^{-a} F1(a; d-b-c, c; d; x/(x-1), (x-y)/(x-1))`.
    pub fn appell_f1_second<S: Scalar>(a: &S, b: &S, c: &S, d: &S, x: &S, y: &S) -> Result<S> {
        let one = S::one();
        let e = integer_exponent(&-a.clone())?;
        let xm1 = x.clone() - one.clone();
        let v = appell_f1(
            a,
            &(d.clone() - b.clone() - c.clone()),
            c,
            d,
            &(x.clone() / xm1.clone()),
            &((x.clone() - y.clone()) / xm1),
        )?;
        Ok((one - x.clone()).powi(e) * v)
    }

    /// `(1-l)^{-a} (1-n)^{-a'} F1^(2)(a, a'; d-b-c, c; d; l/(l-1), (l-m)/(l-1), n/(n-1), (n-r)/(n-1))`.
    #[allow(clippy::too_many_arguments)]
    pub fn f1_iterated_first<S: Scalar>(
        a: &S,
        a2: &S,
        b: &S,
        c: &S,
        d: &S,
        lambda: &S,
        mu: &S,
        nu: &S,
        rho: &S,
    ) -> Result<S> {
        let one = S::one();
        let e1 = integer_exponent(&-a.clone())?;
        let e2 = integer_exponent(&-a2.clone())?;
        let lm1 = lambda.clone() - one.clone();
        let nm1 = nu.clone() - one.clone();
        let v = f1_iterated(
            a,
            a2,
            &(d.clone() - b.clone() - c.clone()),
            c,
            d,
            &(lambda.clone() / lm1.clone()),
            &((lambda.clone() - mu.clone()) / lm1),
            &(nu.clone() / nm1.clone()),
            &((nu.clone() - rho.clone()) / nm1),
        )?;
        Ok((one.clone() - lambda.clone()).powi(e1) * (one - nu.clone()).powi(e2) * v)
    }

    /// `(1-m)^{-a} (1-r)^{-a'} F1^(2)(a, a'; b, d-b-c; d; (m-l)/(m-1), m/(m-1), (r-n)/(r-1), r/(r-1))`.
    #[allow(clippy::too_many_arguments)]
    pub fn f1_iterated_second<S: Scalar>(
        a: &S,
        a2: &S,
        b: &S,
        c: &S,
        d: &S,
        lambda: &S,
        mu: &S,
        nu: &S,
        rho: &S,
    ) -> Result<S> {
        let one = S::one();
        let e1 = integer_exponent(&-a.clone())?;
        let e2 = integer_exponent(&-a2.clone())?;
        let mm1 = mu.clone() - one.clone();
        let rm1 = rho.clone() - one.clone();
        let v = f1_iterated(
            a,
            a2,
            b,
            &(d.clone() - b.clone() - c.clone()),
            d,
            &((mu.clone() - lambda.clone()) / mm1.clone()),
            &(mu.clone() / mm1),
            &((rho.clone() - nu.clone()) / rm1.clone()),
            &(rho.clone() / rm1),
        )?;
        Ok((one.clone() - mu.clone()).powi(e1) * (one - rho.clone()).powi(e2) * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }
    fn qi(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(&q(7, 3), 0), qi(1));
        assert_eq!(pochhammer(&qi(-3), 4), qi(0));
        assert_eq!(pochhammer(&qi(2), 3), qi(24));
        assert_eq!(pochhammer(&2.0f64, 3), 24.0);
    }

    #[test]
    fn hyp_examples() {
        let v = hyp_terminating(&[qi(0), q(1, 2), q(1, 3), q(1, 5)], &[q(3, 2), q(5, 2), q(7, 2)], &qi(1)).unwrap();
        assert_eq!(v.value, qi(1));
        assert_eq!(v.term_count, 1);

        // 1 + (-2)(1)/3 + (-2)(-1)(1)(2)/(3*4*2) = 1/2
        let v = hyp_terminating(&[qi(-2), qi(1)], &[qi(3)], &qi(1)).unwrap();
        assert_eq!(v.value, q(1, 2));
        assert_eq!(v.term_count, 3);
    }

    #[test]
    fn hyp_errors() {
        assert_eq!(
            hyp_terminating(&[q(1, 2), qi(1)], &[qi(3)], &qi(1)),
            Err(Error::NonTerminating)
        );
        // (-1)_k vanishes from k = 2 while the series runs to k = 3
        assert_eq!(
            hyp_terminating(&[qi(-3), qi(1)], &[qi(-1)], &qi(1)),
            Err(Error::ZeroDenominator { parameter: 0, term: 2 })
        );
        // ... but a denominator -N with N >= termination index is fine
        assert!(hyp_terminating(&[qi(-2), qi(1)], &[qi(-2)], &qi(1)).is_ok());
    }

    #[test]
    fn hyp_float_snaps_termination() {
        let v = hyp_terminating(&[-2.0 + 1e-12, 1.0], &[3.0], &1.0).unwrap();
        assert!((v.value - 0.5).abs() < 1e-14);
        assert_eq!(v.term_count, 3);
    }

    #[test]
    fn whipple_n0_and_unbalanced() {
        // n = 0: balanced means a+b+c+1 = d+e+f
        let w = whipple_transform(&[qi(0), q(1, 2), q(1, 3), q(2, 3)], &[qi(1), q(1, 2), qi(1)]).unwrap();
        assert_eq!(w.prefactor, qi(1));
        let err = whipple_transform(&[qi(0), qi(1), qi(1), qi(1)], &[qi(1), qi(1), qi(1)]).unwrap_err();
        assert_eq!(err, Error::Unbalanced { residual: format!("{:?}", qi(1)) });
    }

    #[test]
    fn appell_f1_examples() {
        let (b, c, d) = (q(2, 3), q(-5, 7), q(9, 4));
        assert_eq!(appell_f1(&qi(0), &b, &c, &d, &q(1, 3), &q(2, 5)).unwrap(), qi(1));
        assert_eq!(appell_f1(&q(1, 3), &qi(-1), &qi(-2), &d, &qi(0), &qi(0)).unwrap(), qi(1));
        let (x, y) = (q(1, 3), q(2, 5));
        let v = appell_f1(&qi(-1), &b, &c, &d, &x, &y).unwrap();
        assert_eq!(v, qi(1) - (b.clone() * x + c.clone() * y) / d);
        assert_eq!(
            appell_f1(&q(1, 2), &q(1, 2), &qi(-1), &qi(1), &qi(1), &qi(1)),
            Err(Error::NonTerminating)
        );
    }

    #[test]
    fn appell_f3_examples() {
        let one = qi(1);
        assert_eq!(appell_f3(&qi(-2), &qi(-3), &q(1, 2), &q(1, 3), &q(5, 2), &qi(0), &qi(0)).unwrap(), one);
        assert_eq!(appell_f3(&qi(0), &qi(0), &q(1, 2), &q(1, 3), &q(5, 2), &qi(3), &qi(7)).unwrap(), one);
        assert_eq!(
            appell_f3(&q(1, 2), &qi(0), &q(1, 2), &qi(1), &qi(1), &qi(1), &qi(1)),
            Err(Error::NonTerminating)
        );
    }

    #[test]
    fn f1_iterated_trivial() {
        let p = [q(1, 2), q(2, 3), q(7, 2)];
        let z = qi(0);
        assert_eq!(f1_iterated(&qi(-2), &qi(-3), &p[0], &p[1], &p[2], &z, &z, &z, &z).unwrap(), qi(1));
        let w = q(3, 7);
        assert_eq!(f1_iterated(&qi(0), &qi(0), &p[0], &p[1], &p[2], &w, &w, &w, &w).unwrap(), qi(1));
        assert_eq!(
            f1_iterated(&q(1, 2), &qi(0), &p[0], &p[1], &p[2], &w, &w, &w, &w),
            Err(Error::NonTerminating)
        );
    }
}
