//! Exact and asymptotic counts of quadrangulations with a simple boundary.

mod gw;

pub use gw::{
    gw_derivative_at_one, gw_first_passage_counts, gw_first_passage_simulation, gw_generating_function, GwSummary,
};

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountingError {
    #[error("product is not an integer: prime {prime} has exponent {exponent}")]
    NonIntegralProduct { prime: u64, exponent: i64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("argument outside the domain: {0}")]
    DomainError(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for BigCount {
    fn from(x: u64) -> Self {
        BigCount(BigUint::from(x))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCount(pub f64);

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n as u64).filter(|&k| sieve[k as usize]).collect()
}

fn legendre(k: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut q = k;
    while q > 0 {
        q /= p;
        e += q as i64;
    }
    e
}

/// Evaluates `prod a_i! / prod b_j!` times `prod base^exp` exactly, failing
/// unless the result is an integer.
fn factorial_ratio(num: &[u64], den: &[u64], powers: &[(u64, i64)]) -> Result<BigUint, CountingError> {
    let top = num.iter().chain(den).copied().max().unwrap_or(0);
    let top = top.max(powers.iter().map(|p| p.0).max().unwrap_or(0));
    let mut result = BigUint::one();
    for p in primes_up_to(top) {
        let mut e: i64 =
            num.iter().map(|&a| legendre(a, p)).sum::<i64>() - den.iter().map(|&b| legendre(b, p)).sum::<i64>();
        e += powers.iter().filter(|(b, _)| *b == p).map(|(_, x)| x).sum::<i64>();
        if e < 0 {
            return Err(CountingError::NonIntegralProduct { prime: p, exponent: e });
        }
        if e > 0 {
            result *= BigUint::from(p).pow(e as u32);
        }
    }
    Ok(result)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial_ratio(&[n as u64], &[k as u64, (n - k) as u64], &[]).expect("binomials are integers")
}

fn count_cache() -> &'static RwLock<HashMap<(i64, i64), BigCount>> {
    static CACHE: OnceLock<RwLock<HashMap<(i64, i64), BigCount>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Number of rooted quadrangulations with a simple boundary of length `p`
/// and `m` inner faces.
///
/// For `m, l >= 1` with `p = 2l` this is
/// `3^(m-l) (3l)! (2m+l-1)! / (l! (2l-1)! (m-l+1)! (m+2l)!)`.
/// The count is 1 for `(m, p) = (0, 2)` and 0 otherwise.
pub fn count_simple(m: i64, p: i64) -> Result<BigCount, CountingError> {
    if m == 0 && p == 2 {
        return Ok(BigCount::from(1));
    }
    if m < 1 || p < 2 || p % 2 != 0 || m - p / 2 + 1 < 0 {
        return Ok(BigCount::zero());
    }
    if let Some(c) = count_cache().read().unwrap().get(&(m, p)) {
        return Ok(c.clone());
    }
    let l = (p / 2) as u64;
    let m = m as u64;
    let value =
        factorial_ratio(&[3 * l, 2 * m + l - 1], &[l, 2 * l - 1, m + 1 - l, m + 2 * l], &[(3, m as i64 - l as i64)])?;
    let c = BigCount(value);
    count_cache().write().unwrap().insert((m as i64, p), c.clone());
    Ok(c)
}

/// `(n + p/2 + 1) * count_simple(n, p)`.
pub fn pointed_count_simple(n: i64, p: i64) -> Result<BigCount, CountingError> {
    let c = count_simple(n, p)?;
    if c.is_zero() {
        return Ok(c);
    }
    Ok(BigCount(c.0 * BigUint::from((n + p / 2 + 1) as u64)))
}

/// Natural log of `count_simple(m, 2l)` through log-gamma; `-inf` when the
/// count is zero.
pub fn log_count_exact(m: i64, l: i64) -> LogCount {
    if m == 0 && l == 1 {
        return LogCount(0.0);
    }
    if m < 1 || l < 1 || m - l + 1 < 0 {
        return LogCount(f64::NEG_INFINITY);
    }
    let (m, l) = (m as f64, l as f64);
    LogCount(
        (m - l) * 3f64.ln() + ln_gamma(3.0 * l + 1.0) + ln_gamma(2.0 * m + l)
            - ln_gamma(l + 1.0)
            - ln_gamma(2.0 * l)
            - ln_gamma(m - l + 2.0)
            - ln_gamma(m + 2.0 * l + 1.0),
    )
}

/// Log of `sqrt(3)/(2 pi) 12^m (9/2)^l m^(-5/2) l^(1/2) exp(-9 l^2 / (4 m))`.
pub fn log_count_asymptotic(m: i64, l: i64) -> LogCount {
    assert!(m >= 1 && l >= 1);
    let (m, l) = (m as f64, l as f64);
    LogCount(
        (3f64.sqrt() / (2.0 * std::f64::consts::PI)).ln() + m * 12f64.ln() + l * 4.5f64.ln() - 2.5 * m.ln()
            + 0.5 * l.ln()
            - 9.0 * l * l / (4.0 * m),
    )
}

/// Shape of a restriction map as seen by the counting formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RestrictionShape {
    pub area: i64,
    pub perimeter: i64,
    pub p_in: i64,
    pub p_left: i64,
}

/// Probability that the restriction of a uniform pointed simple-boundary
/// quadrangulation of size `(n_prime, p_prime)` is a given map of shape `r`:
/// `q(n'-|r|, p'-per(r)+2 p_in) / ((n'+p'/2+1) q(n',p'))`, times the
/// indicator `p' - p_left > p_n / 3`.
pub fn restriction_probability(
    r: RestrictionShape,
    n_prime: i64,
    p_prime: i64,
    p_n: i64,
) -> Result<BigRational, CountingError> {
    if 2 * p_prime < p_n {
        return Err(CountingError::PreconditionViolated(format!(
            "p' = {p_prime} is below p_n / 2 = {}",
            p_n as f64 / 2.0
        )));
    }
    let den = pointed_count_simple(n_prime, p_prime)?;
    if den.is_zero() {
        return Err(CountingError::PreconditionViolated(format!(
            "no simple-boundary map of size ({n_prime}, {p_prime})"
        )));
    }
    if 3 * (p_prime - r.p_left) <= p_n {
        return Ok(BigRational::zero());
    }
    let num = count_simple(n_prime - r.area, p_prime - r.perimeter + 2 * r.p_in)?;
    Ok(BigRational::new(num.to_bigint(), den.to_bigint()))
}

/// Ratio of the restriction probabilities at `(n, p_n)` and at
/// `(n_prime, p_prime)`, computed in log space. Identical arguments give
/// exactly 1.
pub fn ratio_bound_check(
    r: RestrictionShape,
    n: i64,
    p_n: i64,
    n_prime: i64,
    p_prime: i64,
) -> Result<f64, CountingError> {
    let log_prob = |n: i64, p: i64| -> Result<f64, CountingError> {
        let num = log_count_exact(n - r.area, (p - r.perimeter) / 2 + r.p_in).0;
        let den = log_count_exact(n, p / 2).0;
        if !num.is_finite() || !den.is_finite() {
            return Err(CountingError::ZeroDenominator);
        }
        Ok(num - den - ((n + p / 2 + 1) as f64).ln())
    };
    let a = log_prob(n, p_n)?;
    let b = log_prob(n_prime, p_prime)?;
    Ok((a - b).exp())
}

/// `2 * max(1, round(alpha * sqrt(2 n)))`.
pub fn perimeter_sequence(n: u64, alpha: f64) -> u64 {
    let x = (alpha * (2.0 * n as f64).sqrt()).round();
    2 * (x as u64).max(1)
}
