//! The five path models and the ASM/VSASM counts.
//!
//! Each path model exposes its Gessel-Viennot entry formula, closed-form LU data,
//! the replacement last column for a displaced endpoint, closed one-point functions
//! and escape weights. [`GvModel`] bundles them behind one interface.

pub mod aztec;
pub mod dyck;
pub mod profile;
pub mod red;
pub mod staircase;
pub mod vsasm;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gv::{ExactMatrix, GvError};
use crate::kernel::{ExactInteger, ExactRational, KernelError};

pub use aztec::*;
pub use dyck::*;
pub use profile::*;
pub use red::*;
pub use staircase::*;
pub use vsasm::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{what} = {value} outside {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Gv(#[from] GvError),
}

pub(crate) fn check_range(what: &'static str, value: i64, lo: i64, hi: i64) -> Result<(), ModelError> {
    if value < lo || value > hi {
        return Err(ModelError::OutOfRange {
            what,
            value,
            range: format!("[{lo}, {hi}]"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelId {
    Aztec,
    DyckHalfHex,
    RedHalfHex,
    Staircase,
    StaircaseAlt,
    Vsasm,
}

impl ModelId {
    pub const ALL: [ModelId; 6] = [
        ModelId::Aztec,
        ModelId::DyckHalfHex,
        ModelId::RedHalfHex,
        ModelId::Staircase,
        ModelId::StaircaseAlt,
        ModelId::Vsasm,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            ModelId::Aztec => "aztec",
            ModelId::DyckHalfHex => "dyck",
            ModelId::RedHalfHex => "red",
            ModelId::Staircase => "staircase",
            ModelId::StaircaseAlt => "staircase-alt",
            ModelId::Vsasm => "vsasm",
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "aztec" => Ok(ModelId::Aztec),
            "dyck" | "dyck-half-hex" | "dyckhalfhex" => Ok(ModelId::DyckHalfHex),
            "red" | "red-half-hex" | "redhalfhex" => Ok(ModelId::RedHalfHex),
            "staircase" => Ok(ModelId::Staircase),
            "staircase-alt" | "staircasealt" | "staircase2" => Ok(ModelId::StaircaseAlt),
            "vsasm" => Ok(ModelId::Vsasm),
            other => Err(format!("unknown model '{other}'")),
        }
    }
}

/// Closed-form L, L⁻¹ and the diagonal of U.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedLu {
    pub l: ExactMatrix,
    pub l_inv: ExactMatrix,
    pub u_diagonal: Vec<ExactRational>,
}

/// A path model at a fixed size, seen through its Gessel-Viennot matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GvModel {
    Aztec { n: usize },
    Dyck { n: usize, k: usize },
    Red { n: usize, k: usize },
    Staircase { n: usize },
    StaircaseAlt { n: usize },
}

impl GvModel {
    /// Builds the model for `id`; `k` is ignored by the one-parameter models.
    pub fn new(id: ModelId, n: usize, k: usize) -> Result<Self, ModelError> {
        let m = match id {
            ModelId::Aztec => GvModel::Aztec { n },
            ModelId::DyckHalfHex => {
                check_range("k", k as i64, 1, i64::MAX)?;
                GvModel::Dyck { n, k }
            }
            ModelId::RedHalfHex => {
                check_range("k", k as i64, 1, i64::MAX)?;
                GvModel::Red { n, k }
            }
            ModelId::Staircase => GvModel::Staircase { n },
            ModelId::StaircaseAlt => GvModel::StaircaseAlt { n },
            ModelId::Vsasm => {
                return Err(ModelError::Unsupported(
                    "the VSASM model has no Gessel-Viennot matrix".into(),
                ))
            }
        };
        Ok(m)
    }

    pub fn id(&self) -> ModelId {
        match self {
            GvModel::Aztec { .. } => ModelId::Aztec,
            GvModel::Dyck { .. } => ModelId::DyckHalfHex,
            GvModel::Red { .. } => ModelId::RedHalfHex,
            GvModel::Staircase { .. } => ModelId::Staircase,
            GvModel::StaircaseAlt { .. } => ModelId::StaircaseAlt,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            GvModel::Aztec { n }
            | GvModel::Dyck { n, .. }
            | GvModel::Red { n, .. }
            | GvModel::Staircase { n }
            | GvModel::StaircaseAlt { n } => n,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            GvModel::Dyck { k, .. } | GvModel::Red { k, .. } => Some(k),
            _ => None,
        }
    }

    /// Matrix dimension: n+1, except k for the red-path model.
    pub fn dim(&self) -> usize {
        match *self {
            GvModel::Red { k, .. } => k,
            _ => self.n() + 1,
        }
    }

    /// Entry formula at arbitrary (i, j); used for both the matrix and its larger truncations.
    pub fn entry(&self, i: usize, j: usize) -> ExactInteger {
        let (i, j) = (i as i64, j as i64);
        match *self {
            GvModel::Aztec { .. } => aztec_entry(i, j),
            GvModel::Dyck { k, .. } => dyck_entry(i, j, k as i64),
            GvModel::Red { n, .. } => red_entry(i, j, n as i64),
            GvModel::Staircase { .. } => staircase_entry(i, j),
            GvModel::StaircaseAlt { .. } => staircase_alt_entry(i, j),
        }
    }

    pub fn matrix(&self) -> ExactMatrix {
        self.matrix_of_size(self.dim())
    }

    /// Leading `size x size` block of the infinite entry matrix.
    pub fn matrix_of_size(&self, size: usize) -> ExactMatrix {
        ExactMatrix::from_integers(size, size, |i, j| self.entry(i, j))
    }

    /// Admissible exit indices ℓ.
    pub fn ell_range(&self) -> (i64, i64) {
        match *self {
            GvModel::Aztec { n } => (0, n as i64),
            GvModel::Dyck { n, k } => (0, (n + k) as i64),
            GvModel::Red { n, .. } => (0, n as i64 + 1),
            GvModel::Staircase { n } | GvModel::StaircaseAlt { n } => (0, 2 * n as i64),
        }
    }

    /// The ℓ whose one-point value is 1 by construction.
    pub fn reference_ell(&self) -> i64 {
        match *self {
            GvModel::Aztec { n } => n as i64,
            GvModel::StaircaseAlt { n } => 2 * n as i64,
            _ => 0,
        }
    }

    fn check_ell(&self, ell: i64) -> Result<(), ModelError> {
        let (lo, hi) = self.ell_range();
        check_range("ℓ", ell, lo, hi)
    }

    /// Path counts from every start to the displaced endpoint of the distinguished path.
    pub fn last_column(&self, ell: i64) -> Result<Vec<ExactInteger>, ModelError> {
        self.check_ell(ell)?;
        let dim = self.dim() as i64;
        Ok((0..dim)
            .map(|i| match *self {
                GvModel::Aztec { n } => aztec_last_column(i, n as i64, ell),
                GvModel::Dyck { n, k } => dyck_last_column(i, n as i64, k as i64, ell),
                GvModel::Red { n, k } => red_last_column(i, n as i64, k as i64, ell),
                GvModel::Staircase { n } => staircase_last_column(i, n as i64, ell),
                GvModel::StaircaseAlt { n } => staircase_alt_last_column(i, n as i64, ell),
            })
            .collect())
    }

    /// Matrix with the last column replaced for exit ℓ.
    pub fn modified_matrix(&self, ell: i64) -> Result<ExactMatrix, ModelError> {
        let b: Vec<ExactRational> = self
            .last_column(ell)?
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Ok(self.matrix().with_last_column(&b)?)
    }

    /// Closed-form one-point function H(ℓ).
    pub fn one_point(&self, ell: i64) -> Result<ExactRational, ModelError> {
        match *self {
            GvModel::Aztec { n } => aztec_one_point(n as i64, ell),
            GvModel::Dyck { n, k } => dyck_one_point(n as i64, k as i64, ell),
            GvModel::Red { n, k } => red_one_point(n as i64, k as i64, ell),
            GvModel::Staircase { n } => staircase_one_point(n as i64, ell),
            GvModel::StaircaseAlt { n } => staircase_alt_one_point(n as i64, ell),
        }
    }

    /// Closed-form partition function Z (the product of the U diagonal).
    pub fn partition(&self) -> ExactInteger {
        match *self {
            GvModel::Aztec { n } => aztec_partition(n as i64),
            GvModel::Dyck { n, k } => dyck_partition(n as i64, k as i64),
            GvModel::Red { n, k } => red_partition(n as i64, k as i64),
            GvModel::Staircase { n } | GvModel::StaircaseAlt { n } => staircase_partition(n as i64),
        }
    }

    /// Closed-form L, L⁻¹ and U diagonal, at the model's own dimension.
    pub fn closed_lu(&self) -> ClosedLu {
        self.closed_lu_of_size(self.dim())
    }

    pub fn closed_lu_of_size(&self, size: usize) -> ClosedLu {
        match *self {
            GvModel::Aztec { .. } => {
                let (l, l_inv) = aztec_closed_l(size);
                ClosedLu {
                    l,
                    l_inv,
                    u_diagonal: aztec_u_diagonal(size),
                }
            }
            GvModel::Dyck { k, .. } => {
                let (l, l_inv) = dyck_closed_l_of_size(size, k as i64);
                ClosedLu {
                    l,
                    l_inv,
                    u_diagonal: dyck_u_diagonal(size, k as i64),
                }
            }
            GvModel::Red { n, .. } => {
                let (l, l_inv) = red_closed_l(n as i64, size);
                ClosedLu {
                    l,
                    l_inv,
                    u_diagonal: red_u_diagonal(n as i64, size),
                }
            }
            GvModel::Staircase { .. } | GvModel::StaircaseAlt { .. } => {
                let (l, l_inv) = aztec_closed_l(size);
                ClosedLu {
                    l,
                    l_inv,
                    u_diagonal: aztec_u_diagonal(size),
                }
            }
        }
    }
}

impl fmt::Display for GvModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k() {
            Some(k) => write!(f, "{}(n={}, k={})", self.id(), self.n(), k),
            None => write!(f, "{}(n={})", self.id(), self.n()),
        }
    }
}
