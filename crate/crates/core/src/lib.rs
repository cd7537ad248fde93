//! Bivariate Krawtchouk polynomials, Racah coefficients and the
//! two-dimensional Krawtchouk (trinomial) Markov chain.
//!
//! Modules, bottom-up:
//!
//! * [`scalar`]: exact rational and `f64` backends behind one trait.
//! * [`series`]: terminating hypergeometric, Appell `F1`/`F3` and iterated `F1` sums.
//! * [`surd`]: rational multiples of square roots, used for exact Racah algebra.
//! * [`angular`]: Racah `W` and 9-j coefficients, the trinomial weight and its limit.
//! * [`poly`]: eigenfunctions `P_{m,n}`, orthonormal `R_{m,n}`, univariate families.
//! * [`chain`]: the chain kernel, stationary law, fixed points and spectrum.
//! * [`montecarlo`]: seeded simulation of the chain.

pub mod angular;
pub mod chain;
pub mod error;
pub mod montecarlo;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod surd;

pub use error::{Error, ParseError, Result};
pub use scalar::{Backend, Rational, Scalar};
