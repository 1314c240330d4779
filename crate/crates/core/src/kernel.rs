//! Exact scalars and the combinatorial special functions the models are built from.

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type ExactInteger = BigInt;
/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
pub type ExactRational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("{num} is not divisible by {den}")]
    InexactDivision { num: String, den: String },
    #[error("trinomial parts {parts:?} do not sum to {m}")]
    PartsMismatch { m: i64, parts: [i64; 3] },
    #[error("{what} must satisfy {bound}, got {value}")]
    Domain {
        what: &'static str,
        bound: &'static str,
        value: String,
    },
    #[error("catastrophic cancellation: |a + b| = {result:e} from terms of size {scale:e}")]
    Cancellation { result: f64, scale: f64 },
}

fn domain(what: &'static str, bound: &'static str, value: impl fmt::Display) -> KernelError {
    KernelError::Domain {
        what,
        bound,
        value: value.to_string(),
    }
}

thread_local! {
    static NEGATIVE_UPPER_HITS: Cell<u64> = const { Cell::new(0) };
}

fn note_negative_upper() {
    NEGATIVE_UPPER_HITS.with(|c| c.set(c.get() + 1));
}

/// How many times `binomial` has been asked for C(n, k) with n < 0 on this thread.
///
/// No formula in the crate should ever do this; tests assert the counter stays put.
pub fn negative_upper_index_hits() -> u64 {
    NEGATIVE_UPPER_HITS.with(Cell::get)
}

/// Exact division; a nonzero remainder is an error.
pub fn exact_div(num: &ExactInteger, den: &ExactInteger) -> Result<ExactInteger, KernelError> {
    if den.is_zero() {
        return Err(domain("divisor", "nonzero", 0));
    }
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(KernelError::InexactDivision {
            num: num.to_string(),
            den: den.to_string(),
        });
    }
    Ok(q)
}

/// C(n, k), zero outside 0 <= k <= n. C(n, k) with n < 0 is also zero (and counted).
pub fn binomial(n: i64, k: i64) -> ExactInteger {
    if n < 0 {
        note_negative_upper();
        return BigInt::zero();
    }
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: u64) -> ExactInteger {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// m!/(p1! p2! p3!), zero if any part is negative.
pub fn trinomial(m: i64, p1: i64, p2: i64, p3: i64) -> Result<ExactInteger, KernelError> {
    if p1 + p2 + p3 != m {
        return Err(KernelError::PartsMismatch { m, parts: [p1, p2, p3] });
    }
    if p1 < 0 || p2 < 0 || p3 < 0 {
        return Ok(BigInt::zero());
    }
    Ok(binomial(m, p1) * binomial(m - p1, p2))
}

pub fn catalan(m: i64) -> Result<ExactInteger, KernelError> {
    if m < 0 {
        return Err(domain("catalan index", ">= 0", m));
    }
    Ok(binomial(2 * m, m) / (m + 1))
}

/// Paths of `a` steps (1, ±1) from height 0 staying weakly above the axis and ending at height `h`.
pub fn ballot(a: i64, h: i64) -> ExactInteger {
    if a < 0 || h < 0 || h > a || (a - h) % 2 != 0 {
        return BigInt::zero();
    }
    let d = (a - h) / 2;
    binomial(a, d) - binomial(a, d - 1)
}

/// x(x-1)...(x-m+1).
pub fn falling_factorial(x: &ExactRational, m: i64) -> Result<ExactRational, KernelError> {
    if m < 0 {
        return Err(domain("falling factorial length", ">= 0", m));
    }
    let mut acc = BigRational::one();
    let mut term = x.clone();
    for _ in 0..m {
        acc *= &term;
        term -= BigRational::one();
    }
    Ok(acc)
}

/// log C(n, k) through log-gamma.
pub fn log_binomial(n: f64, k: f64) -> Result<LogValue, KernelError> {
    if !(n.is_finite() && k.is_finite()) || k < 0.0 || k > n {
        return Err(domain("log_binomial arguments", "n >= k >= 0", format!("({n}, {k})")));
    }
    let v = ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0);
    Ok(LogValue::from_ln(v))
}

/// Σ_{m=0}^{n} (-1)^m a/(m+a) C(n,m), which equals 1/C(n+a, a).
pub fn inverse_binomial_sum(n: i64, a: i64) -> Result<ExactRational, KernelError> {
    if a <= 0 {
        return Err(domain("a", ">= 1", a));
    }
    if n < 0 {
        return Err(domain("n", ">= 0", n));
    }
    let mut acc = BigRational::zero();
    for m in 0..=n {
        let term = BigRational::new(binomial(n, m) * a, BigInt::from(m + a));
        if m % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

pub fn pow2(e: u32) -> ExactInteger {
    BigInt::one() << e as usize
}

pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn int_rational(v: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(v.into())
}

/// "num/den", always with an explicit denominator.
pub fn rational_to_string(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses "num/den" or a plain integer.
pub fn parse_rational(s: &str) -> Option<ExactRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Natural log of |x| for a nonzero big integer, valid far beyond f64 range.
pub fn ln_abs_integer(x: &ExactInteger) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift as usize).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rational_to_f64(q: &ExactRational) -> f64 {
    LogValue::from_rational(q).to_f64()
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    ln_abs: f64,
    sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        ln_abs: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogValue = LogValue { ln_abs: 0.0, sign: 1 };

    /// Positive value with the given natural log; -inf gives zero.
    pub fn from_ln(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { ln_abs, sign: 1 }
        }
    }

    pub fn new(ln_abs: f64, sign: i8) -> Self {
        match sign.signum() {
            0 => Self::ZERO,
            s => LogValue { ln_abs, sign: s },
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue::new(x.abs().ln(), if x > 0.0 { 1 } else { -1 })
        }
    }

    pub fn from_integer(x: &ExactInteger) -> Self {
        if x.is_zero() {
            Self::ZERO
        } else {
            LogValue::new(ln_abs_integer(x), if x.is_positive() { 1 } else { -1 })
        }
    }

    pub fn from_rational(q: &ExactRational) -> Self {
        if q.is_zero() {
            return Self::ZERO;
        }
        let ln = ln_abs_integer(q.numer()) - ln_abs_integer(q.denom());
        LogValue::new(ln, if q.is_positive() { 1 } else { -1 })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// ln|x|, or None for zero.
    pub fn ln(&self) -> Option<f64> {
        (self.sign != 0).then_some(self.ln_abs)
    }

    /// ln x with zero mapped to -inf; negative values are a caller bug.
    pub fn ln_or_neg_inf(&self) -> f64 {
        debug_assert!(self.sign >= 0);
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.ln_abs
        }
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.ln_abs.exp()
    }

    pub fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::new(self.ln_abs + rhs.ln_abs, self.sign * rhs.sign)
    }

    pub fn div(self, rhs: LogValue) -> Result<LogValue, KernelError> {
        if rhs.sign == 0 {
            return Err(domain("LogValue divisor", "nonzero", 0));
        }
        Ok(LogValue::new(self.ln_abs - rhs.ln_abs, self.sign * rhs.sign))
    }

    /// Sum that refuses to return a result when opposite signs cancel more than
    /// `1 - 1e-8` of the larger term.
    pub fn try_add(self, rhs: LogValue) -> Result<LogValue, KernelError> {
        if self.sign == 0 {
            return Ok(rhs);
        }
        if rhs.sign == 0 {
            return Ok(self);
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let ratio = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            return Ok(LogValue::new(big.ln_abs + ratio.ln_1p(), big.sign));
        }
        let rest = 1.0 - ratio;
        if rest < 1e-8 {
            return Err(KernelError::Cancellation {
                result: rest * big.ln_abs.exp(),
                scale: big.ln_abs.exp(),
            });
        }
        Ok(LogValue::new(big.ln_abs + rest.ln(), big.sign))
    }
}

impl PartialOrd for LogValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Some(Ordering::Equal),
                1 => self.ln_abs.partial_cmp(&other.ln_abs),
                _ => other.ln_abs.partial_cmp(&self.ln_abs),
            },
            o => Some(o),
        }
    }
}

/// log Σ exp(x_i); -inf for an empty or all -inf input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// ln k! for k = 0..=max, for fast repeated log-binomials.
#[derive(Debug, Clone)]
pub struct LogFactorials {
    table: Vec<f64>,
}

impl LogFactorials {
    pub fn new(max: usize) -> Self {
        let table = (0..=max).map(|k| ln_gamma(k as f64 + 1.0)).collect();
        LogFactorials { table }
    }

    pub fn max(&self) -> usize {
        self.table.len() - 1
    }

    pub fn ln_factorial(&self, k: i64) -> f64 {
        self.table[k as usize]
    }

    /// ln C(n, k), -inf outside the support.
    pub fn ln_binomial(&self, n: i64, k: i64) -> f64 {
        if n < 0 || k < 0 || k > n {
            return f64::NEG_INFINITY;
        }
        self.table[n as usize] - self.table[k as usize] - self.table[(n - k) as usize]
    }
}

/// Exact factorials 0..=max, for binomials with large arguments evaluated many times.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    table: Vec<ExactInteger>,
}

impl FactorialTable {
    pub fn new(max: usize) -> Self {
        let mut table = Vec::with_capacity(max + 1);
        table.push(BigInt::one());
        for i in 1..=max {
            let next = &table[i - 1] * i;
            table.push(next);
        }
        FactorialTable { table }
    }

    pub fn factorial(&self, n: usize) -> &ExactInteger {
        &self.table[n]
    }

    /// Same conventions as [`binomial`].
    pub fn binomial(&self, n: i64, k: i64) -> ExactInteger {
        if n < 0 {
            note_negative_upper();
            return BigInt::zero();
        }
        if k < 0 || k > n {
            return BigInt::zero();
        }
        let (n, k) = (n as usize, k as usize);
        &self.table[n] / (&self.table[k] * &self.table[n - k])
    }
}
