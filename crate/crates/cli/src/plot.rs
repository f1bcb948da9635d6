//! SVG 1.1 rendering of instances and polygons.

use std::fmt::Write as _;

use polyg_core::{Instance, Point};

/// Width and height of the drawing area in user units.
pub const VIEW: f64 = 800.0;
const MARGIN: f64 = 20.0;
const CAPTION: f64 = 30.0;

/// Affine map from instance coordinates to the viewport, y pointing up.
struct Frame {
    min_x: i64,
    max_y: i64,
    scale: f64,
}

impl Frame {
    fn new(points: &[Point]) -> Frame {
        let min_x = points.iter().map(|p| p.x).min().unwrap_or(0);
        let max_x = points.iter().map(|p| p.x).max().unwrap_or(0);
        let min_y = points.iter().map(|p| p.y).min().unwrap_or(0);
        let max_y = points.iter().map(|p| p.y).max().unwrap_or(0);
        let span = (max_x - min_x).max(max_y - min_y).max(1) as f64;
        Frame { min_x, max_y, scale: (VIEW - 2.0 * MARGIN) / span }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (MARGIN + (p.x - self.min_x) as f64 * self.scale, MARGIN + (self.max_y - p.y) as f64 * self.scale)
    }
}

/// Renders the points and, if given, the polygon through `cycle` with its
/// score in the caption. Output depends only on the arguments.
pub fn render(instance: &Instance, cycle: Option<&[u32]>, score: Option<f64>) -> String {
    let points = instance.points();
    let frame = Frame::new(points);
    let radius = if points.len() > 2000 { 1.0 } else { 2.5 };
    let height = VIEW + CAPTION;
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{VIEW}" height="{height}" viewBox="0 0 {VIEW} {height}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect x="0" y="0" width="{VIEW}" height="{height}" fill="white"/>"#).unwrap();
    if let Some(cycle) = cycle.filter(|c| !c.is_empty()) {
        out.push_str(r##"<path fill="#9ecae1" fill-opacity="0.8" stroke="#08519c" stroke-width="1" stroke-linejoin="round" d=""##);
        for (i, &v) in cycle.iter().enumerate() {
            let (x, y) = frame.map(points[v as usize]);
            write!(out, "{}{x:.2} {y:.2} ", if i == 0 { "M" } else { "L" }).unwrap();
        }
        out.push_str("Z\"/>\n");
    }
    out.push_str("<g fill=\"#252525\">\n");
    for &p in points {
        let (x, y) = frame.map(p);
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius}"/>"#).unwrap();
    }
    out.push_str("</g>\n");
    let caption = match score {
        Some(s) => format!("{} n={} score={s:.6}", instance.name, points.len()),
        None => format!("{} n={}", instance.name, points.len()),
    };
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{:.2}" font-family="monospace" font-size="16">{}</text>"#,
        VIEW + CAPTION / 2.0,
        escape(&caption)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
