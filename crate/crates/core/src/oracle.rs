//! Brute-force enumerators used to validate determinants, one-point functions and
//! refined ASM counts at small sizes.
//!
//! Path families are counted by a transfer-matrix walk. A linear progress functional φ
//! with φ(step) > 0 for every step orders the vertices; each path visits vertex v at
//! time φ(v), so two paths share a vertex iff they sit at the same point at the same
//! time. All paths advance one time unit per transition and the frontier is memoized.
//! Nothing here uses the Gessel-Viennot determinant.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{
    aztec_escape, dyck_escape, red_escape, staircase_alt_escape, staircase_escape, GvModel, ModelError,
};

pub type Point = (i64, i64);

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const MAX_ASM_SIZE: usize = 6;
pub const MAX_VSASM_SIZE: usize = 7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{starts} start points but {ends} end points")]
    CountMismatch { starts: usize, ends: usize },
    #[error("no step set given")]
    NoSteps,
    #[error("no linear progress direction advances every step")]
    NoProgress,
    #[error("state budget of {budget} exceeded")]
    Budget { budget: u64 },
    #[error("{what} = {value} exceeds the enumeration limit {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    None,
    WeaklyAboveAxis,
    FirstQuadrant,
}

impl Constraint {
    fn allows(self, (x, y): Point) -> bool {
        match self {
            Constraint::None => true,
            Constraint::WeaklyAboveAxis => y >= 0,
            Constraint::FirstQuadrant => x >= 0 && y >= 0,
        }
    }
}

/// Vertex-disjoint paths from `starts[i]` to `ends[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamilySpec {
    pub steps: Vec<Point>,
    pub starts: Vec<Point>,
    pub ends: Vec<Point>,
    pub constraint: Constraint,
}

impl PathFamilySpec {
    pub fn new(
        steps: Vec<Point>,
        starts: Vec<Point>,
        ends: Vec<Point>,
        constraint: Constraint,
    ) -> Result<Self, OracleError> {
        let spec = PathFamilySpec {
            steps,
            starts,
            ends,
            constraint,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<Progress, OracleError> {
        if self.starts.len() != self.ends.len() {
            return Err(OracleError::CountMismatch {
                starts: self.starts.len(),
                ends: self.ends.len(),
            });
        }
        if self.steps.is_empty() {
            return Err(OracleError::NoSteps);
        }
        Progress::find(&self.steps).ok_or(OracleError::NoProgress)
    }

    /// Same family with the last (distinguished) path sent to `end`.
    pub fn with_last_end(&self, end: Point) -> Self {
        let mut s = self.clone();
        if let Some(last) = s.ends.last_mut() {
            *last = end;
        }
        s
    }

    pub fn paths(&self) -> usize {
        self.starts.len()
    }
}

/// φ(x, y) = αx + βy with small integer coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progress {
    pub alpha: i64,
    pub beta: i64,
}

impl Progress {
    /// The functional in [-2, 2]² that advances every step and has the smallest largest increment.
    pub fn find(steps: &[Point]) -> Option<Progress> {
        let mut best: Option<(i64, Progress)> = None;
        for alpha in -2..=2 {
            for beta in -2..=2 {
                let p = Progress { alpha, beta };
                let incs: Vec<i64> = steps.iter().map(|&s| p.at(s)).collect();
                if incs.iter().any(|&v| v <= 0) {
                    continue;
                }
                let worst = *incs.iter().max().unwrap();
                if best.is_none_or(|(b, _)| worst < b) {
                    best = Some((worst, p));
                }
            }
        }
        best.map(|(_, p)| p)
    }

    pub fn at(&self, (x, y): Point) -> i64 {
        self.alpha * x + self.beta * y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Slot {
    Waiting,
    At(Point),
    /// Mid-step: lands on the point after the given number of further time units.
    Flight(Point, u32),
    Done,
}

struct Walker<'a> {
    spec: &'a PathFamilySpec,
    phi: Progress,
    reach: HashMap<Point, bool>,
    budget: u64,
    spent: u64,
}

impl<'a> Walker<'a> {
    /// Whether some sequence of steps has total displacement `d`.
    fn reachable(&mut self, d: Point) -> bool {
        if d == (0, 0) {
            return true;
        }
        if self.phi.at(d) <= 0 {
            return false;
        }
        if let Some(&r) = self.reach.get(&d) {
            return r;
        }
        let steps = self.spec.steps.clone();
        let r = steps.iter().any(|s| self.reachable((d.0 - s.0, d.1 - s.1)));
        self.reach.insert(d, r);
        r
    }

    fn options(&mut self, path: usize, slot: Slot, t: i64) -> Vec<Slot> {
        let start = self.spec.starts[path];
        let end = self.spec.ends[path];
        match slot {
            Slot::Waiting => {
                if self.phi.at(start) == t + 1 {
                    vec![Slot::At(start)]
                } else {
                    vec![Slot::Waiting]
                }
            }
            Slot::At(p) if p == end => vec![Slot::Done],
            Slot::At(p) => {
                let mut out = Vec::new();
                for s in self.spec.steps.clone() {
                    let q = (p.0 + s.0, p.1 + s.1);
                    if !self.spec.constraint.allows(q) || !self.reachable((end.0 - q.0, end.1 - q.1)) {
                        continue;
                    }
                    let inc = self.phi.at(s) as u32;
                    out.push(if inc == 1 {
                        Slot::At(q)
                    } else {
                        Slot::Flight(q, inc - 1)
                    });
                }
                out
            }
            Slot::Flight(q, 1) => vec![Slot::At(q)],
            Slot::Flight(q, r) => vec![Slot::Flight(q, r - 1)],
            Slot::Done => vec![Slot::Done],
        }
    }

    fn expand(
        &mut self,
        choices: &[Vec<Slot>],
        idx: usize,
        cur: &mut Vec<Slot>,
        weight: &BigInt,
        out: &mut HashMap<Vec<Slot>, BigInt>,
    ) -> Result<(), OracleError> {
        if idx == choices.len() {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(OracleError::Budget { budget: self.budget });
            }
            *out.entry(cur.clone()).or_insert_with(BigInt::zero) += weight;
            return Ok(());
        }
        for &c in &choices[idx] {
            if let Slot::At(p) = c {
                if cur.contains(&Slot::At(p)) {
                    continue;
                }
            }
            cur.push(c);
            self.expand(choices, idx + 1, cur, weight, out)?;
            cur.pop();
        }
        Ok(())
    }
}

pub fn count_nilp(spec: &PathFamilySpec) -> Result<BigInt, OracleError> {
    count_nilp_with_budget(spec, DEFAULT_BUDGET)
}

/// Number of vertex-disjoint families; errors once more than `budget` frontier states are generated.
pub fn count_nilp_with_budget(spec: &PathFamilySpec, budget: u64) -> Result<BigInt, OracleError> {
    let phi = spec.validate()?;
    if spec.starts.is_empty() {
        return Ok(BigInt::from(1));
    }
    if spec
        .starts
        .iter()
        .chain(&spec.ends)
        .any(|&p| !spec.constraint.allows(p))
    {
        return Ok(BigInt::zero());
    }
    let mut w = Walker {
        spec,
        phi,
        reach: HashMap::new(),
        budget,
        spent: 0,
    };
    for (s, e) in spec.starts.iter().zip(&spec.ends) {
        if !w.reachable((e.0 - s.0, e.1 - s.1)) {
            return Ok(BigInt::zero());
        }
    }
    let t0 = spec.starts.iter().map(|&p| phi.at(p)).min().unwrap();
    let t_end = spec.ends.iter().map(|&p| phi.at(p)).max().unwrap();

    let initial: Vec<Slot> = spec
        .starts
        .iter()
        .map(|&p| if phi.at(p) == t0 { Slot::At(p) } else { Slot::Waiting })
        .collect();
    let mut seen = Vec::new();
    for s in &initial {
        if let Slot::At(p) = s {
            if seen.contains(p) {
                return Ok(BigInt::zero());
            }
            seen.push(*p);
        }
    }
    let mut states: HashMap<Vec<Slot>, BigInt> = HashMap::new();
    states.insert(initial, BigInt::from(1));

    for t in t0..=t_end {
        let mut next = HashMap::new();
        for (state, weight) in &states {
            let choices: Vec<Vec<Slot>> = state
                .iter()
                .enumerate()
                .map(|(i, &slot)| w.options(i, slot, t))
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let mut cur = Vec::with_capacity(state.len());
            w.expand(&choices, 0, &mut cur, weight, &mut next)?;
        }
        states = next;
    }
    Ok(states
        .into_iter()
        .filter(|(s, _)| s.iter().all(|&x| x == Slot::Done))
        .map(|(_, c)| c)
        .sum())
}

/// Counts with the distinguished (last) path sent to each exit point in turn.
pub fn count_nilp_by_exit(spec: &PathFamilySpec, exits: &[Point]) -> Result<BTreeMap<Point, BigInt>, OracleError> {
    exits
        .iter()
        .map(|&e| Ok((e, count_nilp(&spec.with_last_end(e))?)))
        .collect()
}

/// The path family behind a model's Gessel-Viennot matrix.
pub fn model_family(model: &GvModel) -> PathFamilySpec {
    let dim = model.dim() as i64;
    let (steps, constraint, start, end): (
        Vec<Point>,
        Constraint,
        Box<dyn Fn(i64) -> Point>,
        Box<dyn Fn(i64) -> Point>,
    ) = match *model {
        GvModel::Aztec { .. } => (
            vec![(1, 1), (1, -1), (2, 0)],
            Constraint::None,
            Box::new(|i| (-i, i)),
            Box::new(|j| (j, j)),
        ),
        GvModel::Dyck { k, .. } => {
            let k = k as i64;
            (
                vec![(1, 1), (1, -1)],
                Constraint::WeaklyAboveAxis,
                Box::new(|i| (-2 * i, 0)),
                Box::new(move |j| (2 * k + 2 * j, 0)),
            )
        }
        GvModel::Red { n, .. } => {
            let n = n as i64;
            (
                vec![(0, -2), (1, -1)],
                Constraint::None,
                Box::new(move |i| (i, i + 2 * n + 2)),
                Box::new(|j| (2 * j, 0)),
            )
        }
        GvModel::Staircase { .. } => (
            vec![(-1, 0), (0, 1)],
            Constraint::None,
            Box::new(|i| (2 * i, 0)),
            Box::new(|j| (0, j)),
        ),
        GvModel::StaircaseAlt { n } => {
            let n = n as i64;
            (
                vec![(1, 0), (1, 1)],
                Constraint::None,
                Box::new(move |i| (2 * n - 2 * i, 0)),
                Box::new(move |j| (2 * n, j)),
            )
        }
    };
    PathFamilySpec {
        steps,
        starts: (0..dim).map(&start).collect(),
        ends: (0..dim).map(&end).collect(),
        constraint,
    }
}

/// Where the distinguished path leaves the original domain for exit index ℓ.
pub fn exit_point(model: &GvModel, ell: i64) -> Point {
    match *model {
        GvModel::Aztec { n } => (ell, 2 * n as i64 - ell),
        GvModel::Dyck { n, k } => (2 * k as i64 + n as i64 - ell, n as i64 + ell),
        GvModel::Red { k, .. } => (2 * k as i64 - 2, 2 * ell),
        GvModel::Staircase { n } | GvModel::StaircaseAlt { n } => (ell, n as i64),
    }
}

/// All (ℓ, exit point) pairs over the model's ℓ range.
pub fn model_exits(model: &GvModel) -> Vec<(i64, Point)> {
    let (lo, hi) = model.ell_range();
    (lo..=hi).map(|ell| (ell, exit_point(model, ell))).collect()
}

/// The far target of the distinguished path on the extended domain; `target` is k for
/// the Aztec diamond and p for the other models.
pub fn extended_target(model: &GvModel, target: i64) -> Result<Point, OracleError> {
    let n = model.n() as i64;
    let bad = |what: &str| Err(OracleError::Invalid(format!("{what} out of range for {model}")));
    Ok(match *model {
        GvModel::Aztec { .. } if target <= n => return bad("k"),
        GvModel::Aztec { .. } => (target, target),
        GvModel::Dyck { .. } | GvModel::Red { .. } if target < 1 => return bad("p"),
        GvModel::Dyck { k, .. } => (2 * k as i64 + n + target, n + target),
        GvModel::Red { k, .. } => (2 * k as i64 - 2 + target, -target),
        GvModel::Staircase { .. } | GvModel::StaircaseAlt { .. } if target <= n => return bad("p"),
        GvModel::Staircase { .. } => (0, target),
        GvModel::StaircaseAlt { .. } => (2 * n, target),
    })
}

pub fn extended_family(model: &GvModel, target: i64) -> Result<PathFamilySpec, OracleError> {
    Ok(model_family(model).with_last_end(extended_target(model, target)?))
}

/// Single-path continuations from exit ℓ to the far target that leave the domain at once.
pub fn escape_weight(model: &GvModel, ell: i64, target: i64) -> BigInt {
    let n = model.n() as i64;
    match *model {
        GvModel::Aztec { .. } => aztec_escape(ell, target, n),
        GvModel::Dyck { .. } => dyck_escape(target, ell),
        GvModel::Red { .. } => red_escape(target, ell),
        GvModel::Staircase { .. } => staircase_escape(n, target, ell),
        GvModel::StaircaseAlt { .. } => staircase_alt_escape(n, target, ell),
    }
}

/// An alternating sign matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AsmMatrix {
    size: usize,
    entries: Vec<i8>,
}

impl AsmMatrix {
    pub fn new(size: usize, entries: Vec<i8>) -> Result<Self, OracleError> {
        let m = Self::from_entries_unchecked(size, entries)?;
        if !m.is_alternating() {
            return Err(OracleError::Invalid("not an alternating sign matrix".into()));
        }
        Ok(m)
    }

    /// Shape-checked only; for feeding deliberately broken matrices to validators.
    pub fn from_entries_unchecked(size: usize, entries: Vec<i8>) -> Result<Self, OracleError> {
        if size == 0 || entries.len() != size * size {
            return Err(OracleError::Invalid(format!(
                "{} entries for size {size}",
                entries.len()
            )));
        }
        Ok(AsmMatrix { size, entries })
    }

    pub fn from_rows(rows: &[&[i8]]) -> Result<Self, OracleError> {
        Self::new(rows.len(), rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        AsmMatrix { size: n, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    /// Partial sums along every row and column stay in {0, 1} and end at 1.
    pub fn is_alternating(&self) -> bool {
        let n = self.size;
        let line_ok = |vals: &mut dyn Iterator<Item = i8>| {
            let mut s = 0i32;
            for v in vals {
                if !(-1..=1).contains(&v) {
                    return false;
                }
                s += v as i32;
                if !(0..=1).contains(&s) {
                    return false;
                }
            }
            s == 1
        };
        (0..n).all(|i| line_ok(&mut (0..n).map(|j| self.get(i, j))))
            && (0..n).all(|j| line_ok(&mut (0..n).map(|i| self.get(i, j))))
    }

    pub fn is_vertically_symmetric(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == self.get(i, n - 1 - j)))
    }

    /// 1-based column of the 1 in the first row.
    pub fn first_row_one(&self) -> usize {
        self.row(0).iter().position(|&v| v == 1).map_or(0, |j| j + 1)
    }

    /// 1-based row of the 1 in the first column.
    pub fn first_column_one(&self) -> usize {
        (0..self.size).position(|i| self.get(i, 0) == 1).map_or(0, |i| i + 1)
    }
}

fn backtrack(
    n: usize,
    symmetric: bool,
    row: usize,
    col_sums: &mut Vec<i8>,
    current: &mut Vec<i8>,
    out: &mut Vec<AsmMatrix>,
) {
    if row == n {
        if col_sums.iter().all(|&c| c == 1) {
            out.push(AsmMatrix {
                size: n,
                entries: current.clone(),
            });
        }
        return;
    }
    fill_row(n, symmetric, row, 0, 0, col_sums, current, out);
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    n: usize,
    symmetric: bool,
    row: usize,
    j: usize,
    row_sum: i8,
    col_sums: &mut Vec<i8>,
    current: &mut Vec<i8>,
    out: &mut Vec<AsmMatrix>,
) {
    if j == n {
        if row_sum == 1 {
            backtrack(n, symmetric, row + 1, col_sums, current, out);
        }
        return;
    }
    let mirror = n - 1 - j;
    let candidates: &[i8] = if symmetric && j > mirror {
        match current[row * n + mirror] {
            -1 => &[-1],
            0 => &[0],
            _ => &[1],
        }
    } else {
        &[-1, 0, 1]
    };
    for &v in candidates {
        let r = row_sum + v;
        let c = col_sums[j] + v;
        if !(0..=1).contains(&r) || !(0..=1).contains(&c) {
            continue;
        }
        col_sums[j] = c;
        current.push(v);
        fill_row(n, symmetric, row, j + 1, r, col_sums, current, out);
        current.pop();
        col_sums[j] -= v;
    }
}

fn enumerate(n: usize, symmetric: bool) -> Vec<AsmMatrix> {
    let mut out = Vec::new();
    backtrack(
        n,
        symmetric,
        0,
        &mut vec![0; n],
        &mut Vec::with_capacity(n * n),
        &mut out,
    );
    out
}

/// All ASMs of size n in lexicographic row order (with -1 < 0 < 1).
pub fn enumerate_asm(n: usize) -> Result<Vec<AsmMatrix>, OracleError> {
    if n == 0 {
        return Err(OracleError::Invalid("size must be positive".into()));
    }
    if n > MAX_ASM_SIZE {
        return Err(OracleError::TooLarge {
            what: "n",
            value: n,
            max: MAX_ASM_SIZE,
        });
    }
    Ok(enumerate(n, false))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VsasmEnumeration {
    pub size: usize,
    pub matrices: Vec<AsmMatrix>,
    /// `histogram[ℓ-1]` counts matrices whose first-column 1 sits in row ℓ.
    pub histogram: Vec<u64>,
}

/// All VSASMs of odd `size`, with the refined count by first-column 1 position.
pub fn enumerate_vsasm(size: usize) -> Result<VsasmEnumeration, OracleError> {
    if size.is_multiple_of(2) {
        return Err(OracleError::Invalid(format!("VSASM size must be odd, got {size}")));
    }
    if size > MAX_VSASM_SIZE {
        return Err(OracleError::TooLarge {
            what: "size",
            value: size,
            max: MAX_VSASM_SIZE,
        });
    }
    let matrices = enumerate(size, true);
    let mut histogram = vec![0u64; size];
    for m in &matrices {
        histogram[m.first_column_one() - 1] += 1;
    }
    Ok(VsasmEnumeration {
        size,
        matrices,
        histogram,
    })
}

/// Rebuilds the osculating-path (six-vertex) picture of `m` and checks it.
///
/// Vertical edge above (i, j) carries 1 - Σ_{r<i} a_{r,j}; horizontal edge left of (i, j)
/// carries Σ_{c≥j} a_{i,c}. Every edge must be 0 or 1, the boundary must be domain wall
/// (top and left occupied, bottom and right empty), flow must be conserved at each vertex,
/// and the two c-vertex orientations must be exactly the ±1 entries.
pub fn osculating_config_check(m: &AsmMatrix) -> bool {
    let n = m.size;
    let a = |i: usize, j: usize| m.get(i, j) as i32;
    // vert[i][j]: edge above row i in column j, i = 0..=n.
    let mut vert = vec![vec![1i32; n]; n + 1];
    for i in 0..n {
        for j in 0..n {
            vert[i + 1][j] = vert[i][j] - a(i, j);
        }
    }
    // horiz[i][j]: edge left of column j in row i, j = 0..=n.
    let mut horiz = vec![vec![0i32; n + 1]; n];
    for i in 0..n {
        for j in (0..n).rev() {
            horiz[i][j] = horiz[i][j + 1] + a(i, j);
        }
    }
    let binary = |v: i32| v == 0 || v == 1;
    if !vert.iter().flatten().all(|&v| binary(v)) || !horiz.iter().flatten().all(|&v| binary(v)) {
        return false;
    }
    if vert[0].iter().any(|&v| v != 1) || vert[n].iter().any(|&v| v != 0) {
        return false;
    }
    if (0..n).any(|i| horiz[i][0] != 1 || horiz[i][n] != 0) {
        return false;
    }
    for i in 0..n {
        for j in 0..n {
            let (top, bottom) = (vert[i][j], vert[i + 1][j]);
            let (left, right) = (horiz[i][j], horiz[i][j + 1]);
            if top + right != bottom + left {
                return false;
            }
            let entry = match (top, right, bottom, left) {
                (1, 0, 0, 1) => 1,
                (0, 1, 1, 0) => -1,
                _ => 0,
            };
            if entry != a(i, j) {
                return false;
            }
        }
    }
    true
}
