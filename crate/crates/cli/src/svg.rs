//! Deterministic SVG figures: tangent lines, envelope polyline and closed-form curve.

use std::fmt::Write;

use arctic_core::TangentLine;

const SIZE: f64 = 1000.0;

/// The scaled-domain rectangle mapped onto the [0, 1000]² view box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Frame {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, String> {
        let ok = [x0, x1, y0, y1].iter().all(|v| v.is_finite()) && x1 > x0 && y1 > y0;
        if !ok {
            return Err(format!("degenerate frame [{x0}, {x1}] x [{y0}, {y1}]"));
        }
        Ok(Frame { x0, x1, y0, y1 })
    }

    /// Grows the frame by `frac` of its size on every side.
    pub fn padded(self, frac: f64) -> Self {
        let (dx, dy) = ((self.x1 - self.x0) * frac, (self.y1 - self.y0) * frac);
        Frame {
            x0: self.x0 - dx,
            x1: self.x1 + dx,
            y0: self.y0 - dy,
            y1: self.y1 + dy,
        }
    }

    fn scale(&self) -> f64 {
        SIZE / (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    /// Uniform scale, centered, y axis pointing up.
    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        let s = self.scale();
        let ox = (SIZE - s * (self.x1 - self.x0)) / 2.0;
        let oy = (SIZE - s * (self.y1 - self.y0)) / 2.0;
        (ox + s * (p.0 - self.x0), SIZE - oy - s * (p.1 - self.y0))
    }

    /// The part of y = s x + b inside the frame.
    fn clip(&self, l: &TangentLine) -> Option<((f64, f64), (f64, f64))> {
        let (mut lo, mut hi) = (self.x0, self.x1);
        if l.slope != 0.0 {
            let a = (self.y0 - l.intercept) / l.slope;
            let b = (self.y1 - l.intercept) / l.slope;
            lo = lo.max(a.min(b));
            hi = hi.min(a.max(b));
        } else if l.intercept < self.y0 || l.intercept > self.y1 {
            return None;
        }
        (lo < hi).then(|| ((lo, l.y_at(lo)), (hi, l.y_at(hi))))
    }
}

pub struct Figure<'a> {
    pub title: &'a str,
    pub frame: Frame,
    pub lines: &'a [TangentLine],
    pub envelope: &'a [(f64, f64)],
    pub curve: &'a [(f64, f64)],
    pub boundary: &'a [(f64, f64)],
}

fn points(frame: &Frame, pts: &[(f64, f64)]) -> String {
    let mut s = String::new();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = frame.map(p);
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x:.3},{y:.3}").unwrap();
    }
    s
}

pub fn emit_svg(fig: &Figure) -> Result<String, String> {
    if fig.curve.is_empty() && fig.lines.is_empty() && fig.envelope.is_empty() {
        return Err("nothing to draw".into());
    }
    let f = &fig.frame;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n",
    );
    writeln!(s, "  <title>{}</title>", fig.title).unwrap();
    s.push_str("  <rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
    if !fig.boundary.is_empty() {
        writeln!(
            s,
            "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>",
            points(f, fig.boundary)
        )
        .unwrap();
    }
    if !fig.lines.is_empty() {
        s.push_str("  <g stroke=\"#4a78b5\" stroke-width=\"1\" stroke-opacity=\"0.6\">\n");
        for l in fig.lines {
            if let Some((a, b)) = f.clip(l) {
                let (a, b) = (f.map(a), f.map(b));
                writeln!(
                    s,
                    "    <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
                    a.0, a.1, b.0, b.1
                )
                .unwrap();
            }
        }
        s.push_str("  </g>\n");
    }
    if !fig.curve.is_empty() {
        let mut d = String::new();
        for (i, &p) in fig.curve.iter().enumerate() {
            let (x, y) = f.map(p);
            write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" }).unwrap();
        }
        writeln!(
            s,
            "  <path d=\"{d}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"3\"/>"
        )
        .unwrap();
    }
    if !fig.envelope.is_empty() {
        writeln!(
            s,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>",
            points(f, fig.envelope)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
