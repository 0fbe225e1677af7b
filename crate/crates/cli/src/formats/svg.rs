use std::fmt::Write;

use selfaffine_core::PointCloud;

use super::{FormatError, FormatResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Coordinates shown on the horizontal and vertical axes (0-based).
    pub project: (usize, usize),
    pub size: u32,
    pub radius: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            project: (0, 1),
            size: 800,
            radius: 0.75,
        }
    }
}

/// Flat scatter plot of a 2-D projection, fitted into a square canvas with
/// a small margin and the vertical axis pointing up.
pub fn write_svg(cloud: &PointCloud, opts: &SvgOptions) -> FormatResult<String> {
    let (i, j) = opts.project;
    if cloud.dim() < 2 || i >= cloud.dim() || j >= cloud.dim() || i == j {
        return Err(FormatError::Invalid(format!(
            "projection ({}, {}) needs two distinct coordinates of a {}-dimensional cloud",
            i + 1,
            j + 1,
            cloud.dim()
        )));
    }
    if cloud.is_empty() {
        return Err(FormatError::Invalid("no points".into()));
    }
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in cloud.points() {
        xmin = xmin.min(p[i]);
        xmax = xmax.max(p[i]);
        ymin = ymin.min(p[j]);
        ymax = ymax.max(p[j]);
    }
    let span = (xmax - xmin).max(ymax - ymin);
    let span = if span > 0.0 { span } else { 1.0 };
    let size = f64::from(opts.size);
    let margin = 0.05 * size;
    let scale = (size - 2.0 * margin) / span;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        opts.size
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g fill="black">"#);
    for p in cloud.points() {
        let x = margin + (p[i] - xmin) * scale;
        let y = size - margin - (p[j] - ymin) * scale;
        let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{}"/>"#, opts.radius);
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
