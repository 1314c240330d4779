//! The tangent method: finite-size saddle scans of H·Y, analytic saddles, tangent
//! families and their numerical envelopes.
//!
//! Each model is scanned along one parameter, called `z` throughout: the scaled target
//! k/n (Aztec, VSASM), p/n (both staircases) or p/n = y (Dyck, red paths, where the
//! fixed width x = k/n lives in [`TangentSetup`]).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{log_sum_exp, LogFactorials};
use crate::models::profile::{ln_profile, log_add, ScanModel, DEFAULT_CROSSOVER};
use crate::models::{GvModel, ModelError, ModelId};
use crate::oracle::{Point, Progress};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TangentError {
    #[error("{what} = {value} outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: String,
    },
    #[error("no admissible root: {0}")]
    NoRoot(String),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error("need at least {need} lines, got {got}")]
    TooFewLines { got: usize, need: usize },
    #[error("parameters must increase strictly (index {index})")]
    Unsorted { index: usize },
    #[error("singular envelope system at index {index}")]
    Singular { index: usize },
    #[error("vertical tangent line at z = {z}")]
    Vertical { z: f64 },
    #[error("endpoint {0:?} is unreachable")]
    Unreachable(Point),
    #[error("no step advances in a common direction")]
    NoProgress,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn out_of_range(what: &'static str, value: f64, range: impl Into<String>) -> TangentError {
    TangentError::OutOfRange {
        what,
        value,
        range: range.into(),
    }
}

/// A model together with its fixed shape parameter x (used by Dyck and red paths only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentSetup {
    pub model: ModelId,
    pub x: f64,
}

impl TangentSetup {
    pub fn new(model: ModelId, x: f64) -> Result<Self, TangentError> {
        if matches!(model, ModelId::DyckHalfHex | ModelId::RedHalfHex) && !(x > 0.0 && x.is_finite()) {
            return Err(out_of_range("x", x, "(0, inf)"));
        }
        Ok(TangentSetup { model, x })
    }

    pub fn of(model: ModelId) -> Self {
        TangentSetup { model, x: 1.0 }
    }

    /// Admissible z as (lo, hi, hi_inclusive); lo is always excluded.
    pub fn z_range(&self) -> (f64, f64, bool) {
        match self.model {
            ModelId::Aztec | ModelId::Staircase => (1.0, f64::INFINITY, false),
            ModelId::StaircaseAlt => (1.0, 2.0, true),
            ModelId::DyckHalfHex | ModelId::RedHalfHex | ModelId::Vsasm => (0.0, f64::INFINITY, false),
        }
    }

    pub fn check_z(&self, z: f64) -> Result<(), TangentError> {
        let (lo, hi, incl) = self.z_range();
        let ok = z.is_finite() && z > lo && (z < hi || (incl && z == hi));
        if !ok {
            let close = if incl { "]" } else { ")" };
            return Err(out_of_range("z", z, format!("({lo}, {hi}{close}")));
        }
        Ok(())
    }

    /// Range of the exit fraction ξ.
    pub fn xi_domain(&self) -> (f64, f64) {
        match self.model {
            ModelId::Aztec | ModelId::RedHalfHex | ModelId::Vsasm => (0.0, 1.0),
            ModelId::DyckHalfHex => (0.0, 1.0 + self.x),
            ModelId::Staircase | ModelId::StaircaseAlt => (0.0, 2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Self {
        Grid {
            min,
            max,
            count,
            spacing,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.min],
            c => (0..c)
                .map(|i| {
                    let f = i as f64 / (c - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => self.min + f * (self.max - self.min),
                        Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                    }
                })
                .collect(),
        }
    }
}

/// The default scan grid per model.
pub fn default_grid(model: ModelId, count: usize) -> Grid {
    match model {
        ModelId::Aztec => Grid::new(1.1, 5.0, count, Spacing::Linear),
        ModelId::DyckHalfHex => Grid::new(0.1, 50.0, count, Spacing::Log),
        ModelId::RedHalfHex => Grid::new(0.05, 10.0, count, Spacing::Log),
        ModelId::Staircase => Grid::new(1.05, 6.0, count, Spacing::Linear),
        ModelId::StaircaseAlt => Grid::new(1.05, 2.0, count, Spacing::Linear),
        ModelId::Vsasm => Grid::new(0.05, 20.0, count, Spacing::Log),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleResult {
    pub model: ModelId,
    pub z: f64,
    pub xi_hat: f64,
    pub ell_star: i64,
    /// ln Σ_ℓ H(ℓ)Y(ℓ).
    pub log_mass: f64,
    pub n_used: usize,
    /// Consecutive ℓ whose score is within 1e-9 of the maximum.
    pub plateau_width: usize,
    pub degenerate: bool,
    pub exact_profile: bool,
}

fn bisect(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// (√(t²-t+1) - 1)/(t-1), written as t/(1+√(t²-t+1)) so t = 1 needs no special case.
pub fn r_asm(t: f64) -> Result<f64, TangentError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(out_of_range("t", t, "[0, 1]"));
    }
    Ok(t / (1.0 + (t * t - t + 1.0).sqrt()))
}

/// The t solving t = (1-ξ)/(1-ξ+z) with ξ = r_ASM(t).
pub fn vsasm_t(z: f64) -> Result<f64, TangentError> {
    TangentSetup::of(ModelId::Vsasm).check_z(z)?;
    let g = |t: f64| {
        let xi = t / (1.0 + (t * t - t + 1.0).sqrt());
        t - (1.0 - xi) / (1.0 - xi + z)
    };
    Ok(bisect(g, 0.0, 1.0))
}

/// Dyck: y as a function of ξ along the admissible branch ξ > (2+3x)/(2+x).
pub fn dyck_y_of_xi(x: f64, xi: f64) -> f64 {
    xi * ((2.0 + x) * xi - (2.0 + 3.0 * x)) / ((1.0 + xi) * (1.0 + x - xi))
}

/// Red paths: y = 2xξ²/((1-ξ)(1+x+ξ)).
pub fn red_y_of_xi(x: f64, xi: f64) -> f64 {
    2.0 * x * xi * xi / ((1.0 - xi) * (1.0 + x + xi))
}

/// The closed-form or implicit saddle ξ*(z).
pub fn analytic_saddle(setup: &TangentSetup, z: f64) -> Result<f64, TangentError> {
    setup.check_z(z)?;
    let x = setup.x;
    Ok(match setup.model {
        ModelId::Aztec => 1.0 / (2.0 * z),
        ModelId::DyckHalfHex => {
            let lo = (2.0 + 3.0 * x) / (2.0 + x);
            let hi = 1.0 + x;
            if lo >= hi {
                return Err(TangentError::NoRoot(format!("empty Dyck branch at x = {x}")));
            }
            bisect(|xi| dyck_y_of_xi(x, xi) - z, lo, hi)
        }
        ModelId::RedHalfHex => bisect(|xi| red_y_of_xi(x, xi) - z, 0.0, 1.0),
        ModelId::Staircase => {
            // 2ξ² + (z-4)ξ - 2(z-1) = 0, larger root.
            ((4.0 - z) + ((z - 4.0).powi(2) + 16.0 * (z - 1.0)).sqrt()) / 4.0
        }
        ModelId::StaircaseAlt => 2.0 - z / 2.0,
        ModelId::Vsasm => r_asm(vsasm_t(z)?)?,
    })
}

/// Scaled exit and target points of the distinguished path.
pub fn exit_and_target(setup: &TangentSetup, z: f64, xi: f64) -> ((f64, f64), (f64, f64)) {
    let x = setup.x;
    match setup.model {
        ModelId::Aztec => ((xi, 2.0 - xi), (z, z)),
        ModelId::DyckHalfHex => ((2.0 * x + 1.0 - xi, 1.0 + xi), (2.0 * x + 1.0 + z, 1.0 + z)),
        ModelId::RedHalfHex => ((2.0 * x, 2.0 * xi), (2.0 * x + z, -z)),
        ModelId::Staircase => ((xi, 1.0), (0.0, z)),
        ModelId::StaircaseAlt => ((xi, 1.0), (2.0, z)),
        ModelId::Vsasm => ((1.0, xi), (1.0 + z, 1.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentLine {
    pub z: f64,
    pub xi: f64,
    pub slope: f64,
    pub intercept: f64,
    pub exit: (f64, f64),
    pub target: (f64, f64),
}

impl TangentLine {
    pub fn through(z: f64, xi: f64, exit: (f64, f64), target: (f64, f64)) -> Result<Self, TangentError> {
        let dx = target.0 - exit.0;
        if dx == 0.0 {
            return Err(TangentError::Vertical { z });
        }
        let slope = (target.1 - exit.1) / dx;
        Ok(TangentLine {
            z,
            xi,
            slope,
            intercept: exit.1 - slope * exit.0,
            exit,
            target,
        })
    }

    pub fn y_at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// Vertical offset of a point from the line.
    pub fn offset(&self, p: (f64, f64)) -> f64 {
        p.1 - self.y_at(p.0)
    }
}

pub fn tangent_line(setup: &TangentSetup, z: f64) -> Result<TangentLine, TangentError> {
    let xi = analytic_saddle(setup, z)?;
    let (exit, target) = exit_and_target(setup, z, xi);
    TangentLine::through(z, xi, exit, target)
}

pub fn tangent_family(setup: &TangentSetup, zs: &[f64]) -> Result<Vec<TangentLine>, TangentError> {
    if zs.is_empty() {
        return Err(TangentError::EmptyGrid);
    }
    zs.iter().map(|&z| tangent_line(setup, z)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopePoint {
    pub z: f64,
    pub x: f64,
    pub y: f64,
    /// 2-norm condition number of the 2x2 system solved for this point.
    pub condition: f64,
}

fn condition_2x2(m: [[f64; 2]; 2]) -> f64 {
    let fro2: f64 = m.iter().flatten().map(|v| v * v).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs();
    if det == 0.0 {
        return f64::INFINITY;
    }
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let smax2 = 0.5 * (fro2 + disc);
    let smin2 = det * det / smax2;
    (smax2 / smin2).sqrt()
}

/// Envelope of lines Y = s(z)X + b(z) at every interior parameter, from F = 0 and a
/// three-point (non-uniform) central difference of ∂_z F = 0.
pub fn envelope(lines: &[TangentLine]) -> Result<Vec<EnvelopePoint>, TangentError> {
    if lines.len() < 3 {
        return Err(TangentError::TooFewLines {
            got: lines.len(),
            need: 3,
        });
    }
    for i in 1..lines.len() {
        if !(lines[i].z > lines[i - 1].z) {
            return Err(TangentError::Unsorted { index: i });
        }
    }
    let mut out = Vec::with_capacity(lines.len() - 2);
    for i in 1..lines.len() - 1 {
        let (a, c, e) = (&lines[i - 1], &lines[i], &lines[i + 1]);
        let h1 = c.z - a.z;
        let h2 = e.z - c.z;
        let d = |fa: f64, fc: f64, fe: f64| {
            -h2 / (h1 * (h1 + h2)) * fa + (h2 - h1) / (h1 * h2) * fc + h1 / (h2 * (h1 + h2)) * fe
        };
        let ds = d(a.slope, c.slope, e.slope);
        let db = d(a.intercept, c.intercept, e.intercept);
        let scale = c.slope.abs().max(1.0) * 1e-13;
        if !ds.is_finite() || ds.abs() <= scale {
            return Err(TangentError::Singular { index: i });
        }
        let x = -db / ds;
        out.push(EnvelopePoint {
            z: c.z,
            x,
            y: c.slope * x + c.intercept,
            condition: condition_2x2([[c.slope, -1.0], [ds, 0.0]]),
        });
    }
    Ok(out)
}

/// Per-model pieces of a finite-n scan.
struct Scan {
    profile: ScanModel,
    n_used: usize,
    ell_lo: i64,
    ell_hi: i64,
    ln_y: Box<dyn Fn(i64) -> f64 + Sync>,
}

fn round_pos(v: f64) -> i64 {
    v.round() as i64
}

fn build_scan(setup: &TangentSetup, n: usize, z: f64) -> Result<Scan, TangentError> {
    let ni = n as i64;
    let x = setup.x;
    Ok(match setup.model {
        ModelId::Aztec => {
            let k = round_pos(z * n as f64);
            if k <= ni {
                return Err(out_of_range("k", k as f64, format!("> {ni}")));
            }
            let big_k = k - ni - 1;
            let lf = LogFactorials::new(ni.max(big_k) as usize + 1);
            let ln2 = std::f64::consts::LN_2;
            // A_{a,b} = Σ_p C(a,p) C(b,p) 2^p.
            let ln_a = move |a: i64, b: i64| -> f64 {
                if a < 0 || b < 0 {
                    return f64::NEG_INFINITY;
                }
                let terms: Vec<f64> = (0..=a.min(b))
                    .map(|p| lf.ln_binomial(a, p) + lf.ln_binomial(b, p) + p as f64 * ln2)
                    .collect();
                log_sum_exp(&terms)
            };
            Scan {
                profile: ScanModel::Path(GvModel::Aztec { n }),
                n_used: n,
                ell_lo: 0,
                ell_hi: ni,
                ln_y: Box::new(move |ell| log_add(ln_a(ni - ell, big_k), ln_a(ni - ell - 1, big_k))),
            }
        }
        ModelId::DyckHalfHex | ModelId::RedHalfHex => {
            let k = round_pos(x * n as f64);
            let p = round_pos(z * n as f64).max(1);
            let red = setup.model == ModelId::RedHalfHex;
            if red && k < 2 {
                return Err(out_of_range("k", k as f64, "[2, inf)"));
            }
            if k < 1 {
                return Err(out_of_range("k", k as f64, "[1, inf)"));
            }
            let hi = if red { ni + 1 } else { ni + k };
            let lf = LogFactorials::new((p + hi + 1) as usize);
            Scan {
                profile: ScanModel::Path(if red {
                    GvModel::Red { n, k: k as usize }
                } else {
                    GvModel::Dyck { n, k: k as usize }
                }),
                n_used: n,
                ell_lo: 0,
                ell_hi: hi,
                ln_y: Box::new(move |ell| lf.ln_binomial(p + ell - 1, ell)),
            }
        }
        ModelId::Staircase | ModelId::StaircaseAlt => {
            let p = round_pos(z * n as f64);
            if p <= ni {
                return Err(out_of_range("p", p as f64, format!("> {ni}")));
            }
            let lf = LogFactorials::new((p + 2 * ni + 1) as usize);
            let alt = setup.model == ModelId::StaircaseAlt;
            Scan {
                profile: ScanModel::Path(if alt {
                    GvModel::StaircaseAlt { n }
                } else {
                    GvModel::Staircase { n }
                }),
                n_used: n,
                ell_lo: 0,
                ell_hi: 2 * ni,
                ln_y: if alt {
                    Box::new(move |ell| lf.ln_binomial(2 * ni - ell - 1, p - ni - 1))
                } else {
                    Box::new(move |ell| lf.ln_binomial(p - ni - 1 + ell, ell))
                },
            }
        }
        ModelId::Vsasm => {
            let size = if n % 2 == 1 { ni } else { ni + 1 };
            let k = round_pos(z * size as f64).max(1);
            let lf = LogFactorials::new((size + k) as usize);
            Scan {
                profile: ScanModel::Asm { m: (size - 1) as usize },
                n_used: size as usize,
                ell_lo: 1,
                ell_hi: size - 1,
                ln_y: Box::new(move |ell| {
                    let terms: Vec<f64> = (0..=(k - 1).min(size - ell))
                        .map(|q| lf.ln_binomial(k - 1, q) + lf.ln_binomial(size - ell, q))
                        .collect();
                    log_sum_exp(&terms)
                }),
            }
        }
    })
}

pub const MIN_SCAN_N: usize = 64;

/// argmax over ℓ of ln H(ℓ) + ln Y(ℓ), with H exact up to `crossover` and log-space above.
pub fn finite_n_saddle(setup: &TangentSetup, n: usize, z: f64, crossover: usize) -> Result<SaddleResult, TangentError> {
    if n < MIN_SCAN_N {
        return Err(out_of_range("n", n as f64, format!("[{MIN_SCAN_N}, inf)")));
    }
    setup.check_z(z)?;
    let scan = build_scan(setup, n, z)?;
    let prof = ln_profile(scan.profile, crossover)?;
    let ells: Vec<i64> = (scan.ell_lo..=scan.ell_hi).collect();
    let scores: Vec<f64> = ells
        .par_iter()
        .map(|&ell| {
            let h = prof.get(ell);
            if h == f64::NEG_INFINITY {
                h
            } else {
                h + (scan.ln_y)(ell)
            }
        })
        .collect();
    let mut best = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    let top = scores[best];
    if top == f64::NEG_INFINITY {
        return Err(TangentError::NoRoot(format!("all scores vanish at z = {z}")));
    }
    let near = |s: f64| top - s <= 1e-9 * top.abs().max(1.0);
    let mut lo = best;
    while lo > 0 && near(scores[lo - 1]) {
        lo -= 1;
    }
    let mut hi = best;
    while hi + 1 < scores.len() && near(scores[hi + 1]) {
        hi += 1;
    }
    let width = hi - lo + 1;
    let ell_star = ells[best];
    Ok(SaddleResult {
        model: setup.model,
        z,
        xi_hat: ell_star as f64 / scan.n_used as f64,
        ell_star,
        log_mass: log_sum_exp(&scores),
        n_used: scan.n_used,
        plateau_width: width,
        degenerate: width > 3,
        exact_profile: prof.exact,
    })
}

/// [`finite_n_saddle`] over a grid, in parallel, results in grid order.
pub fn finite_n_scan(
    setup: &TangentSetup,
    n: usize,
    zs: &[f64],
    crossover: usize,
) -> Result<Vec<SaddleResult>, TangentError> {
    if zs.is_empty() {
        return Err(TangentError::EmptyGrid);
    }
    zs.par_iter()
        .map(|&z| finite_n_saddle(setup, n, z, crossover))
        .collect()
}

pub fn finite_n_saddle_default(setup: &TangentSetup, n: usize, z: f64) -> Result<SaddleResult, TangentError> {
    finite_n_saddle(setup, n, z, DEFAULT_CROSSOVER)
}

/// Leading-order rates (per unit n) of ln Y and ln H at scaled (z, ξ).
///
/// `s0` is the escape part and `s1` the one-point part; for red paths the one-point part
/// is reported as `s1_prime` and `s1` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionValue {
    pub s0: f64,
    pub s1: f64,
    pub s1_prime: Option<f64>,
    pub total: f64,
}

impl ActionValue {
    fn new(s0: f64, s1: f64, s1_prime: Option<f64>) -> Self {
        ActionValue {
            s0,
            s1,
            s1_prime,
            total: s0 + s1 + s1_prime.unwrap_or(0.0),
        }
    }
}

fn xlnx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.ln()
    }
}

/// lim (1/n) ln C(an, bn).
pub fn binomial_rate(a: f64, b: f64) -> f64 {
    let eps = 1e-14;
    if b < -eps || b > a + eps || a < 0.0 {
        return f64::NEG_INFINITY;
    }
    let b = b.clamp(0.0, a);
    xlnx(a) - xlnx(b) - xlnx(a - b)
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let mut c = hi - GOLDEN * (hi - lo);
    let mut d = lo + GOLDEN * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLDEN * (hi - lo);
            fd = f(d);
        }
    }
    let m = 0.5 * (lo + hi);
    (m, f(m))
}

/// sup over σ ∈ [lo, hi] of a concave rate, comparing the interior optimum with both
/// (possibly saturated) endpoints.
fn sup_concave(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    if lo > hi {
        return f64::NEG_INFINITY;
    }
    if hi - lo < 1e-15 {
        return f(lo);
    }
    let (_, interior) = golden_max(f, lo, hi, 120);
    interior.max(f(lo)).max(f(hi))
}

pub fn action(setup: &TangentSetup, z: f64, xi: f64) -> Result<ActionValue, TangentError> {
    setup.check_z(z)?;
    let (lo, hi) = setup.xi_domain();
    if !(lo..=hi).contains(&xi) {
        return Err(out_of_range("ξ", xi, format!("[{lo}, {hi}]")));
    }
    let ln2 = std::f64::consts::LN_2;
    let h = binomial_rate;
    let x = setup.x;
    let half_sum = |upto: f64| sup_concave(&|s| h(1.0, s) - ln2, 0.0, upto.min(1.0));
    Ok(match setup.model {
        ModelId::Aztec => {
            let s1 = half_sum(xi);
            let s0 = sup_concave(
                &|s| h(1.0 - xi, s) + h(z - 1.0, s) + s * ln2,
                0.0,
                (1.0 - xi).min(z - 1.0),
            );
            ActionValue::new(s0, s1, None)
        }
        ModelId::DyckHalfHex => {
            let inner = sup_concave(
                &|s| h(1.0 + xi, 2.0 - 2.0 * s) + h(2.0 + x - s, 1.0 + xi),
                ((1.0 - xi) / 2.0).max(0.0),
                (1.0 + x - xi).min(1.0),
            );
            let s1 = (inner - h(2.0 + 2.0 * x, 1.0 + xi)).min(0.0);
            ActionValue::new(h(z + xi, xi), s1, None)
        }
        ModelId::RedHalfHex => {
            let inner = sup_concave(&|s| h(x + 1.0 - s, x) + h(x + 1.0 + s, x), xi, 1.0);
            let s1p = inner - h(2.0 + 2.0 * x, 2.0);
            ActionValue::new(h(z + xi, xi), 0.0, Some(s1p))
        }
        ModelId::Staircase => ActionValue::new(h(z - 1.0 + xi, xi), half_sum(2.0 - xi), None),
        ModelId::StaircaseAlt => {
            let s1 = if xi < 1.0 {
                f64::NEG_INFINITY
            } else {
                half_sum(xi - 1.0)
            };
            ActionValue::new(h(2.0 - xi, z - 1.0), s1, None)
        }
        ModelId::Vsasm => {
            let s1 = h(1.0 + xi, 1.0) + h(2.0 - xi, 1.0) - h(3.0, 1.0);
            let s0 = sup_concave(&|e| h(z, e) + h(1.0 - xi, e), 0.0, z.min(1.0 - xi));
            ActionValue::new(s0, s1, None)
        }
    })
}

/// The ξ maximizing the total action: a coarse grid, then golden-section refinement.
pub fn action_saddle(setup: &TangentSetup, z: f64) -> Result<f64, TangentError> {
    setup.check_z(z)?;
    let (lo, hi) = setup.xi_domain();
    let total = |xi: f64| action(setup, z, xi).map(|a| a.total).unwrap_or(f64::NEG_INFINITY);
    let steps = 4000;
    let dx = (hi - lo) / steps as f64;
    let mut best = (lo, total(lo));
    for i in 1..=steps {
        let xi = lo + i as f64 * dx;
        let v = total(xi);
        if v > best.1 {
            best = (xi, v);
        }
    }
    if best.1 == f64::NEG_INFINITY {
        return Err(TangentError::NoRoot(format!("action is -inf everywhere at z = {z}")));
    }
    let a = (best.0 - dx).max(lo);
    let b = (best.0 + dx).min(hi);
    let (m, v) = golden_max(&total, a, b, 100);
    Ok(if v >= best.1 { m } else { best.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedStep {
    pub dx: i64,
    pub dy: i64,
    pub weight: f64,
}

impl WeightedStep {
    pub fn unit(dx: i64, dy: i64) -> Self {
        WeightedStep { dx, dy, weight: 1.0 }
    }
}

/// The most likely midpoint of a single free path from the origin to `endpoint`, scaled by 1/n.
///
/// Maximizes ln Z(0 → m) + ln Z(m → endpoint) over the lattice points m halfway along the
/// progress direction.
pub fn free_path_midpoint(steps: &[WeightedStep], endpoint: Point, n: usize) -> Result<(f64, f64), TangentError> {
    if n < MIN_SCAN_N {
        return Err(out_of_range("n", n as f64, format!("[{MIN_SCAN_N}, inf)")));
    }
    let plain: Vec<Point> = steps.iter().map(|s| (s.dx, s.dy)).collect();
    let phi = Progress::find(&plain).ok_or(TangentError::NoProgress)?;
    let total = phi.at(endpoint);
    if total < 0 {
        return Err(TangentError::Unreachable(endpoint));
    }
    let ln_w: Vec<f64> = steps.iter().map(|s| s.weight.ln()).collect();
    let mut buckets: Vec<std::collections::HashMap<Point, f64>> = vec![Default::default(); total as usize + 1];
    buckets[0].insert((0, 0), 0.0);
    for t in 0..=total as usize {
        let mut here: Vec<(Point, f64)> = buckets[t].iter().map(|(&p, &v)| (p, v)).collect();
        here.sort_by_key(|a| a.0);
        for (p, v) in here {
            for (s, w) in plain.iter().zip(&ln_w) {
                let q = (p.0 + s.0, p.1 + s.1);
                let tq = phi.at(q) as usize;
                if tq > total as usize {
                    continue;
                }
                let e = buckets[tq].entry(q).or_insert(f64::NEG_INFINITY);
                *e = log_add(*e, v + w);
            }
        }
    }
    let ln_z = |p: Point| -> f64 {
        let t = phi.at(p);
        if t < 0 || t > total {
            return f64::NEG_INFINITY;
        }
        buckets[t as usize].get(&p).copied().unwrap_or(f64::NEG_INFINITY)
    };
    if ln_z(endpoint) == f64::NEG_INFINITY {
        return Err(TangentError::Unreachable(endpoint));
    }
    let mut mids: Vec<Point> = buckets[(total / 2) as usize].keys().copied().collect();
    mids.sort();
    let mut best: Option<(Point, f64)> = None;
    for m in mids {
        let v = ln_z(m) + ln_z((endpoint.0 - m.0, endpoint.1 - m.1));
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((m, v));
        }
    }
    let (m, _) = best.ok_or(TangentError::Unreachable(endpoint))?;
    Ok((m.0 as f64 / n as f64, m.1 as f64 / n as f64))
}

/// Distance from `p` to the segment from the origin to `end`.
pub fn distance_to_segment(p: (f64, f64), end: (f64, f64)) -> f64 {
    let len2 = end.0 * end.0 + end.1 * end.1;
    let t = ((p.0 * end.0 + p.1 * end.1) / len2).clamp(0.0, 1.0);
    let (cx, cy) = (t * end.0, t * end.1);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}
