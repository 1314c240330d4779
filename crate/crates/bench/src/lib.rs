//! Shared inputs for the benchmarks under benches/.

use arctic_core::tangent::{default_grid, TangentSetup};
use arctic_core::{GvModel, ModelId};

/// One representative of each determinant-backed model at size n (k = n for the half-hexagons).
pub fn gv_models(n: usize) -> Vec<GvModel> {
    [
        ModelId::Aztec,
        ModelId::DyckHalfHex,
        ModelId::RedHalfHex,
        ModelId::Staircase,
        ModelId::StaircaseAlt,
    ]
    .iter()
    .map(|&id| GvModel::new(id, n, n.max(2)).expect("valid size"))
    .collect()
}

/// Setups for the tangent pipeline, half-hexagons at x = 1.
pub fn setups() -> Vec<TangentSetup> {
    ModelId::ALL
        .iter()
        .map(|&m| TangentSetup::new(m, 1.0).unwrap_or_else(|_| TangentSetup::of(m)))
        .collect()
}

/// Midpoint of the default z grid, a typical non-degenerate direction.
pub fn mid_z(model: ModelId) -> f64 {
    let pts = default_grid(model, 3).points();
    pts[1]
}
