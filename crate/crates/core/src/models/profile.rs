//! One-point profiles ℓ ↦ H(ℓ).
//!
//! [`OnePointProfile`] holds exact values. [`ln_profile`] feeds the saddle scans: it is
//! exact (then logged) up to a crossover size and evaluated with log-factorials above it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{asm_refined_ratio, check_range, n_vsasm, n_vsasm_refined, GvModel, ModelError, ModelId};
use crate::kernel::{ln_abs_integer, log_sum_exp, ExactRational, FactorialTable, LogFactorials};

pub const DEFAULT_CROSSOVER: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
}

/// The direction in which H moves with ℓ, as dictated by the partial sums.
pub fn expected_monotonicity(id: ModelId) -> Option<Monotonicity> {
    match id {
        ModelId::Aztec | ModelId::StaircaseAlt => Some(Monotonicity::NonDecreasing),
        ModelId::Staircase | ModelId::RedHalfHex | ModelId::DyckHalfHex => Some(Monotonicity::NonIncreasing),
        ModelId::Vsasm => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnePointProfile {
    pub model: ModelId,
    pub n: usize,
    pub k: Option<usize>,
    pub ell_start: i64,
    #[serde(serialize_with = "serialize_rationals")]
    pub values: Vec<ExactRational>,
}

fn serialize_rationals<S: serde::Serializer>(v: &[ExactRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(crate::kernel::rational_to_string))
}

impl OnePointProfile {
    /// Closed-form H over the model's whole ℓ range.
    pub fn of_model(model: &GvModel) -> Result<Self, ModelError> {
        let (lo, hi) = model.ell_range();
        let values = (lo..=hi)
            .into_par_iter()
            .map(|ell| model.one_point(ell))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OnePointProfile {
            model: model.id(),
            n: model.n(),
            k: model.k(),
            ell_start: lo,
            values,
        })
    }

    /// N_VSASM(size, ℓ)/N_VSASM(size) for ℓ ∈ [1, size].
    pub fn vsasm(size: i64) -> Result<Self, ModelError> {
        check_range("size", size, 3, i64::MAX)?;
        let total = n_vsasm(size)?;
        let values = (1..=size)
            .map(|ell| Ok(BigRational::new(n_vsasm_refined(size, ell)?, total.clone())))
            .collect::<Result<Vec<_>, ModelError>>()?;
        Ok(OnePointProfile {
            model: ModelId::Vsasm,
            n: size as usize,
            k: None,
            ell_start: 1,
            values,
        })
    }

    pub fn get(&self, ell: i64) -> Option<&ExactRational> {
        usize::try_from(ell - self.ell_start)
            .ok()
            .and_then(|i| self.values.get(i))
    }

    pub fn ell_end(&self) -> i64 {
        self.ell_start + self.values.len() as i64 - 1
    }

    pub fn is_bounded(&self) -> bool {
        let (zero, one) = (BigRational::zero(), BigRational::one());
        self.values.iter().all(|v| *v >= zero && *v <= one)
    }

    pub fn is_monotone(&self, dir: Monotonicity) -> bool {
        self.values.windows(2).all(|w| match dir {
            Monotonicity::NonDecreasing => w[0] <= w[1],
            Monotonicity::NonIncreasing => w[0] >= w[1],
        })
    }
}

/// ln H(ℓ) for ℓ = ell_start, ell_start+1, ...; -inf where H vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct LnProfile {
    pub ell_start: i64,
    pub values: Vec<f64>,
    pub exact: bool,
}

impl LnProfile {
    pub fn get(&self, ell: i64) -> f64 {
        usize::try_from(ell - self.ell_start)
            .ok()
            .and_then(|i| self.values.get(i).copied())
            .unwrap_or(f64::NEG_INFINITY)
    }
}

/// Which H a scan needs. `Asm { m }` is the refined ASM ratio used for the VSASM scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanModel {
    Path(GvModel),
    Asm { m: usize },
}

fn ln_rational(q: &ExactRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_integer(q.numer()) - ln_abs_integer(q.denom())
}

/// ln H over the model's ℓ range, exact when the size is at most `crossover`.
pub fn ln_profile(model: ScanModel, crossover: usize) -> Result<LnProfile, ModelError> {
    let size = match model {
        ScanModel::Path(m) => m.n(),
        ScanModel::Asm { m } => m,
    };
    if size <= crossover {
        exact_ln_profile(model)
    } else {
        log_space_profile(model)
    }
}

/// Row of C(n, p) for p = 0..=n by the multiplicative recurrence.
fn binomial_row(n: i64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for p in 0..=n {
        row.push(c.clone());
        c = c * (n - p) / (p + 1);
    }
    row
}

fn prefix_ratio(row: &[BigInt], upto: i64, den: &BigInt) -> ExactRational {
    if upto < 0 {
        return BigRational::zero();
    }
    let top = (upto as usize).min(row.len() - 1);
    BigRational::new(row[..=top].iter().sum(), den.clone())
}

fn exact_ln_profile(model: ScanModel) -> Result<LnProfile, ModelError> {
    let (ell_start, values): (i64, Vec<ExactRational>) = match model {
        ScanModel::Path(GvModel::Aztec { n }) => {
            let n = n as i64;
            let row = binomial_row(n);
            let den = BigInt::one() << n as usize;
            (0, (0..=n).map(|ell| prefix_ratio(&row, ell, &den)).collect())
        }
        ScanModel::Path(GvModel::Staircase { n }) => {
            let n = n as i64;
            let row = binomial_row(n);
            let den = BigInt::one() << n as usize;
            (
                0,
                (0..=2 * n).map(|ell| prefix_ratio(&row, 2 * n - ell, &den)).collect(),
            )
        }
        ScanModel::Path(GvModel::StaircaseAlt { n }) => {
            let n = n as i64;
            let row = binomial_row(n);
            let den = BigInt::one() << n as usize;
            (0, (0..=2 * n).map(|ell| prefix_ratio(&row, ell - n, &den)).collect())
        }
        ScanModel::Path(GvModel::Dyck { n, k }) => {
            let (n, k) = (n as i64, k as i64);
            let f = FactorialTable::new((2 * n + 2 * k + 2) as usize);
            let vals = (0..=n + k)
                .into_par_iter()
                .map(|ell| {
                    if ell <= n {
                        return BigRational::one();
                    }
                    let sum: BigInt = (0..=n)
                        .map(|s| f.binomial(n + ell + 1, 2 * n + 1 - 2 * s) * f.binomial(2 * n + k - s, n + ell))
                        .sum();
                    BigRational::new(sum, f.binomial(2 * n + 2 * k, n + ell))
                })
                .collect();
            (0, vals)
        }
        ScanModel::Path(GvModel::Red { n, k }) => {
            let (n, k) = (n as i64, k as i64);
            if k < 2 {
                return Err(ModelError::Unsupported("the red-path profile needs k >= 2".into()));
            }
            let f = FactorialTable::new((2 * n + 2 * k + 2) as usize);
            let den = f.binomial(2 * n + 2 * k, 2 * n + 3);
            let terms: Vec<BigInt> = (0..=n + 1)
                .map(|s| f.binomial(k + n - s - 1, k - 2) * f.binomial(k + n + s, k - 2))
                .collect();
            let mut suffix = vec![BigInt::zero(); terms.len() + 1];
            for s in (0..terms.len()).rev() {
                suffix[s] = &suffix[s + 1] + &terms[s];
            }
            let vals = (0..=n + 1)
                .map(|ell| BigRational::new(&suffix[ell as usize] * 2, den.clone()))
                .collect();
            (0, vals)
        }
        ScanModel::Asm { m } => {
            let m = m as i64;
            let vals = (1..=m).map(|ell| asm_refined_ratio(m, ell)).collect::<Result<_, _>>()?;
            (1, vals)
        }
    };
    Ok(LnProfile {
        ell_start,
        values: values.iter().map(ln_rational).collect(),
        exact: true,
    })
}

/// Running log-sum-exp of `terms`, from the front.
fn ln_prefix(terms: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms.len());
    let mut acc = f64::NEG_INFINITY;
    for &t in terms {
        acc = log_add(acc, t);
        out.push(acc);
    }
    out
}

pub(crate) fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn log_space_profile(model: ScanModel) -> Result<LnProfile, ModelError> {
    let ln2 = std::f64::consts::LN_2;
    let (ell_start, values) = match model {
        ScanModel::Path(GvModel::Aztec { n }) => {
            let n = n as i64;
            let lf = LogFactorials::new(n as usize);
            let terms: Vec<f64> = (0..=n).map(|p| lf.ln_binomial(n, p)).collect();
            let pre = ln_prefix(&terms);
            (0, pre.into_iter().map(|v| v - n as f64 * ln2).collect())
        }
        ScanModel::Path(GvModel::Staircase { n }) => {
            let n = n as i64;
            let lf = LogFactorials::new(n as usize);
            let terms: Vec<f64> = (0..=n).map(|p| lf.ln_binomial(n, p)).collect();
            let pre = ln_prefix(&terms);
            let vals = (0..=2 * n)
                .map(|ell| pre[(2 * n - ell).min(n) as usize] - n as f64 * ln2)
                .collect();
            (0, vals)
        }
        ScanModel::Path(GvModel::StaircaseAlt { n }) => {
            let n = n as i64;
            let lf = LogFactorials::new(n as usize);
            let terms: Vec<f64> = (0..=n).map(|p| lf.ln_binomial(n, p)).collect();
            let pre = ln_prefix(&terms);
            let vals = (0..=2 * n)
                .map(|ell| {
                    if ell < n {
                        f64::NEG_INFINITY
                    } else {
                        pre[(ell - n) as usize] - n as f64 * ln2
                    }
                })
                .collect();
            (0, vals)
        }
        ScanModel::Path(GvModel::Dyck { n, k }) => {
            let (n, k) = (n as i64, k as i64);
            let lf = LogFactorials::new((2 * n + 2 * k + 2) as usize);
            let vals = (0..=n + k)
                .into_par_iter()
                .map(|ell| {
                    if ell <= n {
                        return 0.0;
                    }
                    let terms: Vec<f64> = (0..=n)
                        .map(|s| {
                            lf.ln_binomial(n + ell + 1, 2 * n + 1 - 2 * s) + lf.ln_binomial(2 * n + k - s, n + ell)
                        })
                        .collect();
                    (log_sum_exp(&terms) - lf.ln_binomial(2 * n + 2 * k, n + ell)).min(0.0)
                })
                .collect();
            (0, vals)
        }
        ScanModel::Path(GvModel::Red { n, k }) => {
            let (n, k) = (n as i64, k as i64);
            if k < 2 {
                return Err(ModelError::Unsupported("the red-path profile needs k >= 2".into()));
            }
            let lf = LogFactorials::new((2 * n + 2 * k + 2) as usize);
            let norm = ln2 - lf.ln_binomial(2 * n + 2 * k, 2 * n + 3);
            let mut vals = vec![f64::NEG_INFINITY; (n + 2) as usize];
            let mut acc = f64::NEG_INFINITY;
            for s in (0..=n + 1).rev() {
                acc = log_add(
                    acc,
                    lf.ln_binomial(k + n - s - 1, k - 2) + lf.ln_binomial(k + n + s, k - 2),
                );
                vals[s as usize] = (acc + norm).min(0.0);
            }
            (0, vals)
        }
        ScanModel::Asm { m } => {
            let m = m as i64;
            let lf = LogFactorials::new((3 * m) as usize);
            let vals = (1..=m)
                .map(|ell| {
                    lf.ln_binomial(m + ell - 2, m - 1) + lf.ln_binomial(2 * m - 1 - ell, m - 1)
                        - lf.ln_binomial(3 * m - 2, m - 1)
                })
                .collect();
            (1, vals)
        }
    };
    Ok(LnProfile {
        ell_start,
        values,
        exact: false,
    })
}
