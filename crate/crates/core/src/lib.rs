//! Exact Gessel-Viennot determinants, one-point functions and tangent-method arctic
//! curves for five lattice path models and vertically symmetric ASMs.

pub mod curves;
pub mod gv;
pub mod kernel;
pub mod models;
pub mod oracle;
pub mod tangent;

pub use curves::{CurveError, ImplicitCurve, ParametricCurve};
pub use gv::{det_bareiss, lu_exact, ExactMatrix, GvError, LUPair};
pub use kernel::{ExactInteger, ExactRational, KernelError, LogValue};
pub use models::{GvModel, ModelError, ModelId, OnePointProfile};
pub use oracle::{AsmMatrix, OracleError, PathFamilySpec};
pub use tangent::{EnvelopePoint, SaddleResult, TangentError, TangentLine, TangentSetup};
