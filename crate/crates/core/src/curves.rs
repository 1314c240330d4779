//! Closed-form arctic curves as degree-2 implicit polynomials, their parametric forms and
//! boundary tangency points.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::models::ModelId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("{what} = {value} outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("curve polynomial is identically zero")]
    ZeroPolynomial,
    #[error("empty window")]
    EmptyWindow,
}

/// Axis-aligned box [x0, x1] × [y0, y1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Window {
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let eps = 1e-12;
        p.0 >= self.x.0 - eps && p.0 <= self.x.1 + eps && p.1 >= self.y.0 - eps && p.1 <= self.y.1 + eps
    }
}

/// P(x, y) = c0 + c1 x + c2 y + c3 x² + c4 xy + c5 y².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicitCurve {
    pub name: String,
    pub coeffs: [f64; 6],
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub value: f64,
    pub in_window: bool,
}

impl ImplicitCurve {
    pub fn new(name: impl Into<String>, coeffs: [f64; 6], window: Window) -> Result<Self, CurveError> {
        if coeffs.iter().all(|c| *c == 0.0) {
            return Err(CurveError::ZeroPolynomial);
        }
        if !(window.x.0 < window.x.1 && window.y.0 < window.y.1) {
            return Err(CurveError::EmptyWindow);
        }
        Ok(ImplicitCurve {
            name: name.into(),
            coeffs,
            window,
        })
    }

    pub fn eval(&self, p: (f64, f64)) -> f64 {
        let [c0, c1, c2, c3, c4, c5] = self.coeffs;
        let (x, y) = p;
        c0 + c1 * x + c2 * y + c3 * x * x + c4 * x * y + c5 * y * y
    }

    pub fn gradient(&self, p: (f64, f64)) -> (f64, f64) {
        let [_, c1, c2, c3, c4, c5] = self.coeffs;
        let (x, y) = p;
        (c1 + 2.0 * c3 * x + c4 * y, c2 + c4 * x + 2.0 * c5 * y)
    }

    /// |P| / max(‖∇P‖, 1); points outside the window are flagged but still evaluated.
    pub fn residual(&self, p: (f64, f64)) -> Residual {
        let (gx, gy) = self.gradient(p);
        Residual {
            value: self.eval(p).abs() / gx.hypot(gy).max(1.0),
            in_window: self.window.contains(p),
        }
    }

    /// Slope dy/dx of the level curve at p; infinite where the tangent is vertical.
    pub fn tangent_slope(&self, p: (f64, f64)) -> f64 {
        let (gx, gy) = self.gradient(p);
        if gy == 0.0 {
            f64::INFINITY
        } else {
            -gx / gy
        }
    }
}

pub fn aztec_circle() -> ImplicitCurve {
    // x² + (y-1)² - 1/2
    ImplicitCurve::new(
        "aztec-circle",
        [0.5, 0.0, -2.0, 1.0, 0.0, 1.0],
        Window {
            x: (-1.0, 1.0),
            y: (0.0, 2.0),
        },
    )
    .expect("nonzero")
}

/// x²v² - 4(1+x)u(2x-u) in the (u, v) frame, for tiling parameter x.
pub fn half_hex_ellipse(x: f64) -> Result<ImplicitCurve, CurveError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CurveError::OutOfRange {
            what: "x",
            value: x,
            range: "(0, inf)",
        });
    }
    let r = 2.0 * (1.0 + x).sqrt();
    ImplicitCurve::new(
        "half-hex-ellipse",
        [0.0, -8.0 * x * (1.0 + x), 0.0, 4.0 * (1.0 + x), 0.0, x * x],
        Window {
            x: (0.0, 2.0 * x),
            y: (-r, r),
        },
    )
}

pub fn staircase_parabola() -> ImplicitCurve {
    // -8x + 4x² + 8y - 4xy + y²
    ImplicitCurve::new(
        "staircase-parabola",
        [0.0, -8.0, 8.0, 4.0, -4.0, 1.0],
        Window {
            x: (0.0, 2.0),
            y: (0.0, 1.0),
        },
    )
    .expect("nonzero")
}

pub fn vsasm_curve() -> ImplicitCurve {
    // 4(1-x) - 4(1-x)² + 4y - 4y² + 4(1-x)y - 1
    ImplicitCurve::new(
        "vsasm",
        [-1.0, 4.0, 8.0, -4.0, -4.0, -4.0],
        Window {
            x: (0.0, 1.0),
            y: (0.0, 1.0),
        },
    )
    .expect("nonzero")
}

/// The implicit curve for a model; `x` is only read for the half-hexagon models.
pub fn curve_for(model: ModelId, x: f64) -> Result<ImplicitCurve, CurveError> {
    Ok(match model {
        ModelId::Aztec => aztec_circle(),
        ModelId::DyckHalfHex | ModelId::RedHalfHex => half_hex_ellipse(x)?,
        ModelId::Staircase | ModelId::StaircaseAlt => staircase_parabola(),
        ModelId::Vsasm => vsasm_curve(),
    })
}

pub fn curve_catalog(x: f64) -> Result<BTreeMap<ModelId, ImplicitCurve>, CurveError> {
    ModelId::ALL.iter().map(|&m| Ok((m, curve_for(m, x)?))).collect()
}

pub fn vsasm_parametric(t: f64) -> Result<(f64, f64), CurveError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(CurveError::OutOfRange {
            what: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    let s = (t * t - t + 1.0).sqrt();
    Ok(((1.0 + t) / (2.0 * s), (-2.0 + t + 2.0 * s) / (2.0 * s)))
}

/// Parametric arcs, each paired with one implicit curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ParametricCurve {
    /// Contact points of the Aztec tangent family, z ∈ (1, ∞).
    AztecArc,
    /// u = x(1 - cos θ), v = 2√(1+x) sin θ, θ ∈ [0, 2π].
    HalfHexEllipse { x: f64 },
    /// Envelope of the staircase family, parametrized by ξ ∈ [3/2, 2].
    StaircaseArc,
    /// Envelope of the alternative staircase family, z ∈ [1, 2].
    StaircaseAltArc,
    /// t ∈ [0, 1].
    Vsasm,
}

impl ParametricCurve {
    pub fn interval(&self) -> (f64, f64) {
        match self {
            ParametricCurve::AztecArc => (1.0, f64::INFINITY),
            ParametricCurve::HalfHexEllipse { .. } => (0.0, std::f64::consts::TAU),
            ParametricCurve::StaircaseArc => (1.5, 2.0),
            ParametricCurve::StaircaseAltArc => (1.0, 2.0),
            ParametricCurve::Vsasm => (0.0, 1.0),
        }
    }

    pub fn implicit(&self) -> ImplicitCurve {
        match *self {
            ParametricCurve::AztecArc => aztec_circle(),
            ParametricCurve::HalfHexEllipse { x } => half_hex_ellipse(x).expect("x validated at eval"),
            ParametricCurve::StaircaseArc | ParametricCurve::StaircaseAltArc => staircase_parabola(),
            ParametricCurve::Vsasm => vsasm_curve(),
        }
    }

    pub fn eval(&self, s: f64) -> Result<(f64, f64), CurveError> {
        let (lo, hi) = self.interval();
        if !(s >= lo && s <= hi) {
            return Err(CurveError::OutOfRange {
                what: "parameter",
                value: s,
                range: "curve interval",
            });
        }
        Ok(match *self {
            ParametricCurve::AztecArc => {
                let d = 2.0 * s * (s - 1.0) + 1.0;
                (0.5 - (s - 1.0) * (2.0 * s - 1.0) / d, 1.5 + (s - 1.0) / d)
            }
            ParametricCurve::HalfHexEllipse { x } => {
                half_hex_ellipse(x)?;
                (x * (1.0 - s.cos()), 2.0 * (1.0 + x).sqrt() * s.sin())
            }
            ParametricCurve::StaircaseArc => (-2.0 * s * s + 8.0 * s - 6.0, -4.0 * s * s + 12.0 * s - 8.0),
            ParametricCurve::StaircaseAltArc => (2.0 - s * s / 2.0, s * (2.0 - s)),
            ParametricCurve::Vsasm => vsasm_parametric(s)?,
        })
    }

    /// `count` points evenly spaced over the interval (the Aztec arc uses z = 1/(1-w), w ∈ [0, 1)).
    pub fn sample(&self, count: usize) -> Vec<(f64, f64)> {
        let (lo, hi) = self.interval();
        (0..count)
            .map(|i| {
                let f = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
                let s = if hi.is_finite() {
                    lo + f * (hi - lo)
                } else {
                    1.0 / (1.0 - 0.999 * f)
                };
                self.eval(s).expect("inside interval")
            })
            .collect()
    }
}

/// A line a·x + b·y = c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryLine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl BoundaryLine {
    pub fn offset(&self, p: (f64, f64)) -> f64 {
        self.a * p.0 + self.b * p.1 - self.c
    }

    /// Slope dy/dx; infinite for vertical lines.
    pub fn slope(&self) -> f64 {
        if self.b == 0.0 {
            f64::INFINITY
        } else {
            -self.a / self.b
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangencyPoint {
    pub label: &'static str,
    pub point: (f64, f64),
    pub boundary: BoundaryLine,
}

fn tp(label: &'static str, point: (f64, f64), a: f64, b: f64, c: f64) -> TangencyPoint {
    TangencyPoint {
        label,
        point,
        boundary: BoundaryLine { a, b, c },
    }
}

/// Points where the curve touches the domain boundary.
pub fn tangency_points(model: ModelId, x: f64) -> Result<Vec<TangencyPoint>, CurveError> {
    Ok(match model {
        ModelId::Aztec => vec![
            tp("top-right", (0.5, 1.5), 1.0, 1.0, 2.0),
            tp("top-left", (-0.5, 1.5), -1.0, 1.0, 2.0),
            tp("bottom-right", (0.5, 0.5), 1.0, -1.0, 0.0),
            tp("bottom-left", (-0.5, 0.5), -1.0, -1.0, 0.0),
        ],
        ModelId::DyckHalfHex | ModelId::RedHalfHex => {
            half_hex_ellipse(x)?;
            let v = 4.0 * (1.0 + x) / (2.0 + x);
            vec![
                tp("B", (2.0 * x * (1.0 + x) / (2.0 + x), v), 1.0, 1.0, 2.0 + 2.0 * x),
                tp("A", (2.0 * x / (2.0 + x), v), -1.0, 1.0, 2.0),
            ]
        }
        ModelId::Staircase | ModelId::StaircaseAlt => vec![
            tp("origin", (0.0, 0.0), -1.0, 1.0, 0.0),
            tp("right", (2.0, 0.0), 1.0, 0.0, 2.0),
        ],
        ModelId::Vsasm => vec![
            tp("bottom", (0.5, 0.0), 0.0, 1.0, 0.0),
            tp("right", (1.0, 0.5), 1.0, 0.0, 1.0),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangent::{envelope, tangent_family, Grid, Spacing, TangentSetup};

    #[test]
    fn catalog_examples() {
        let c = curve_catalog(1.0).unwrap();
        assert_eq!(c.len(), 6);
        assert!(c[&ModelId::Aztec].residual((0.0, 1.0 + 0.5f64.sqrt())).value < 1e-15);
        assert_eq!(staircase_parabola().eval((2.0, 0.0)), 0.0);
        assert_eq!(staircase_parabola().eval((0.0, 0.0)), 0.0);
        assert_eq!(aztec_circle().residual((0.0, 1.0)).value, 0.5);
        assert!(half_hex_ellipse(1.0).unwrap().residual((1.0, 8f64.sqrt())).value < 1e-12);
        assert!(half_hex_ellipse(0.0).is_err());
    }

    #[test]
    fn constructor_checks() {
        let w = Window {
            x: (0.0, 1.0),
            y: (0.0, 1.0),
        };
        assert_eq!(ImplicitCurve::new("z", [0.0; 6], w), Err(CurveError::ZeroPolynomial));
        let empty = Window {
            x: (1.0, 1.0),
            y: (0.0, 1.0),
        };
        assert_eq!(
            ImplicitCurve::new("e", [1.0, 0.0, 0.0, 0.0, 0.0, 0.0], empty),
            Err(CurveError::EmptyWindow)
        );
        assert!(!aztec_circle().residual((3.0, 3.0)).in_window);
    }

    #[test]
    fn vsasm_parametric_examples() {
        assert_eq!(vsasm_parametric(0.0).unwrap(), (0.5, 0.0));
        let p = vsasm_parametric(1.0).unwrap();
        assert!((p.0 - 1.0).abs() < 1e-15 && (p.1 - 0.5).abs() < 1e-15);
        assert!(vsasm_parametric(1.01).is_err());
        assert!(vsasm_parametric(-0.01).is_err());
    }

    #[test]
    fn parametric_points_lie_on_their_curves() {
        let all = [
            ParametricCurve::AztecArc,
            ParametricCurve::HalfHexEllipse { x: 0.5 },
            ParametricCurve::HalfHexEllipse { x: 1.0 },
            ParametricCurve::HalfHexEllipse { x: 3.0 },
            ParametricCurve::StaircaseArc,
            ParametricCurve::StaircaseAltArc,
            ParametricCurve::Vsasm,
        ];
        for c in all {
            let imp = c.implicit();
            for p in c.sample(1000) {
                let r = imp.residual(p);
                assert!(r.value <= 1e-12 && r.in_window, "{c:?} at {p:?}: {r:?}");
            }
        }
    }

    #[test]
    fn staircase_arcs_meet() {
        let a = ParametricCurve::StaircaseArc.eval(1.5).unwrap();
        let b = ParametricCurve::StaircaseAltArc.eval(1.0).unwrap();
        assert_eq!(a, (1.5, 1.0));
        assert_eq!(b, (1.5, 1.0));
    }

    #[test]
    fn tangency_points_on_curve_and_boundary() {
        for m in ModelId::ALL {
            for x in [0.5, 1.0, 2.0] {
                let curve = curve_for(m, x).unwrap();
                for t in tangency_points(m, x).unwrap() {
                    assert!(curve.residual(t.point).value <= 1e-12, "{m:?} {t:?}");
                    assert!(t.boundary.offset(t.point).abs() <= 1e-12, "{m:?} {t:?}");
                    let (cs, bs) = (curve.tangent_slope(t.point), t.boundary.slope());
                    assert!(cs == bs || (cs - bs).abs() < 1e-12, "{m:?} {t:?}: {cs} vs {bs}");
                }
            }
        }
        let b = tangency_points(ModelId::DyckHalfHex, 2.0).unwrap()[0];
        assert_eq!(b.point, (3.0, 3.0));
        let origin = tangency_points(ModelId::Staircase, 1.0).unwrap()[0];
        assert_eq!(staircase_parabola().tangent_slope(origin.point), 1.0);
        assert!(tangency_points(ModelId::Aztec, 1.0)
            .unwrap()
            .iter()
            .any(|t| t.point == (0.5, 1.5)));
    }

    #[test]
    fn symmetries() {
        let circle = aztec_circle();
        for i in 0..200 {
            let p = (-1.0 + i as f64 / 100.0, (i as f64 * 0.37).sin() + 1.0);
            assert!((circle.eval(p) - circle.eval((-p.0, p.1))).abs() < 1e-14);
        }
        for x in [0.5, 1.0, 2.5] {
            let e = half_hex_ellipse(x).unwrap();
            for i in 0..200 {
                let p = (2.0 * x * i as f64 / 199.0, (i as f64 * 0.73).cos() * 2.0);
                let scale = e.eval(p).abs().max(1.0);
                assert!((e.eval(p) - e.eval((2.0 * x - p.0, p.1))).abs() < 1e-12 * scale);
                assert!((e.eval(p) - e.eval((p.0, -p.1))).abs() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn envelopes_match_closed_forms() {
        let cases = [
            (ModelId::Aztec, Grid::new(1.1, 5.0, 400, Spacing::Linear)),
            (ModelId::Staircase, Grid::new(1.05, 6.0, 400, Spacing::Linear)),
            (ModelId::StaircaseAlt, Grid::new(1.05, 2.0, 400, Spacing::Linear)),
            (ModelId::Vsasm, Grid::new(0.05, 20.0, 400, Spacing::Log)),
        ];
        for (m, g) in cases {
            let curve = curve_for(m, 1.0).unwrap();
            let lines = tangent_family(&TangentSetup::of(m), &g.points()).unwrap();
            for e in envelope(&lines).unwrap() {
                assert!(curve.residual((e.x, e.y)).value < 1e-4, "{m:?} {e:?}");
            }
        }
    }

    #[test]
    fn aztec_arc_is_the_tangent_contact() {
        for z in [1.2, 2.0, 3.0, 6.0] {
            let p = ParametricCurve::AztecArc.eval(z).unwrap();
            let l = crate::tangent::tangent_line(&TangentSetup::of(ModelId::Aztec), z).unwrap();
            assert!(l.offset(p).abs() < 1e-12);
            assert!((aztec_circle().tangent_slope(p) - l.slope).abs() < 1e-9);
        }
    }
}
