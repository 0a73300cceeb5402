//! Standalone SVG 1.1 emission: a curve polyline with event markers.
//! Segments flagged as dotted (the elliptic-sign regions of a plane scan)
//! are drawn with a dash pattern, mirroring the usual figure convention.

use gacurves::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkKind {
    Inflection,
    FlatPoint,
    Vertex,
}

pub struct SvgFigure {
    /// projected sample points
    pub points: Vec<(f64, f64)>,
    /// per-point flag: draw the segment ending here dotted
    pub dotted: Vec<bool>,
    pub marks: Vec<(f64, f64, MarkKind)>,
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

impl SvgFigure {
    pub fn render(&self, width: u32, height: u32) -> Result<String> {
        if self.points.is_empty() {
            return Err(Error::EmptyInput("svg sample set".into()));
        }
        let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for (x, y) in &self.points {
            xmin = xmin.min(*x);
            xmax = xmax.max(*x);
            ymin = ymin.min(*y);
            ymax = ymax.max(*y);
        }
        let span_x = (xmax - xmin).max(1e-12);
        let span_y = (ymax - ymin).max(1e-12);
        let margin = 0.05;
        let sx = width as f64 * (1.0 - 2.0 * margin) / span_x;
        let sy = height as f64 * (1.0 - 2.0 * margin) / span_y;
        let s = sx.min(sy);
        let to_px = |x: f64, y: f64| {
            (
                width as f64 * margin + (x - xmin) * s,
                // svg y grows downward
                height as f64 * (1.0 - margin) - (y - ymin) * s,
            )
        };

        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
        ));
        out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

        // split the polyline into runs of equal dash style
        let mut run: Vec<(f64, f64)> = vec![self.points[0]];
        let mut run_dotted = self.dotted.get(1).copied().unwrap_or(false);
        let flush = |run: &mut Vec<(f64, f64)>, dotted: bool, out: &mut String| {
            if run.len() >= 2 {
                let pts: Vec<String> = run
                    .iter()
                    .map(|(x, y)| {
                        let (px, py) = to_px(*x, *y);
                        format!("{},{}", fmt6(px), fmt6(py))
                    })
                    .collect();
                let dash = if dotted { " stroke-dasharray=\"2,4\"" } else { "" };
                out.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"{dash} points=\"{}\"/>\n",
                    pts.join(" ")
                ));
            }
        };
        for i in 1..self.points.len() {
            let dotted = self.dotted.get(i).copied().unwrap_or(false);
            if dotted != run_dotted {
                run.push(self.points[i]);
                flush(&mut run, run_dotted, &mut out);
                run = vec![self.points[i]];
                run_dotted = dotted;
            } else {
                run.push(self.points[i]);
            }
        }
        flush(&mut run, run_dotted, &mut out);

        for (x, y, kind) in &self.marks {
            let (px, py) = to_px(*x, *y);
            let (color, r) = match kind {
                MarkKind::Inflection => ("black", 3.0),
                MarkKind::FlatPoint => ("crimson", 3.0),
                MarkKind::Vertex => ("steelblue", 3.0),
            };
            out.push_str(&format!(
                "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{color}\"/>\n",
                fmt6(px),
                fmt6(py)
            ));
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

/// Orthographic projection of a space point for a view given by azimuth and
/// elevation in degrees.
pub fn project3(p: &[f64], azimuth_deg: f64, elevation_deg: f64) -> (f64, f64) {
    let az = azimuth_deg.to_radians();
    let el = elevation_deg.to_radians();
    let (ca, sa) = (az.cos(), az.sin());
    let (ce, se) = (el.cos(), el.sin());
    let depth = ca * p[0] + sa * p[1];
    let u = -sa * p[0] + ca * p[1];
    let v = -se * depth + ce * p[2];
    (u, v)
}
