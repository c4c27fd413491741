use std::fmt::Write;

use super::{NetLayout, Point2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MARGIN: f64 = 10.0;
const FACE_STROKE: f64 = 1.5;
const HINGE_STROKE: f64 = 0.75;
const MARKER_RADIUS: f64 = 4.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SvgOptions {
    /// Pixels per unit of length.
    pub scale: f64,
    pub title: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            scale: 100.0,
            title: None,
        }
    }
}

/// Renders a net as an SVG 1.1 document: faces as polygons, hinges as
/// dashed lines, vertex connections as circles. The y axis points up.
pub fn export_svg<T: Scalar>(layout: &NetLayout<T>, options: &SvgOptions) -> Result<String> {
    let points = layout.faces.iter().flat_map(|f| f.points.iter());
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            min[k] = min[k].min(p[k].as_f64());
            max[k] = max[k].max(p[k].as_f64());
        }
    }
    if layout.faces.is_empty() || !min[0].is_finite() {
        return Err(Error::EmptyInput("layout"));
    }
    let s = options.scale;
    let width = (max[0] - min[0]) * s + 2.0 * MARGIN;
    let height = (max[1] - min[1]) * s + 2.0 * MARGIN;
    let px = |p: Point2<T>| {
        (
            (p[0].as_f64() - min[0]) * s + MARGIN,
            (max[1] - p[1].as_f64()) * s + MARGIN,
        )
    };

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    )
    .unwrap();
    if let Some(title) = &options.title {
        writeln!(out, "  <title>{}</title>", escape(title)).unwrap();
    }
    writeln!(
        out,
        r##"  <g class="faces" fill="#f2e6c9" stroke="black" stroke-width="{FACE_STROKE}" stroke-linejoin="round">"##
    )
    .unwrap();
    for f in &layout.faces {
        let pts: Vec<String> = f
            .points
            .iter()
            .map(|&p| {
                let (x, y) = px(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(
            out,
            r#"    <polygon class="face" data-face="{}" points="{}"/>"#,
            f.face,
            pts.join(" ")
        )
        .unwrap();
    }
    writeln!(out, "  </g>").unwrap();

    writeln!(
        out,
        r##"  <g class="hinges" stroke="#666666" stroke-width="{HINGE_STROKE}" stroke-dasharray="4 3">"##
    )
    .unwrap();
    for h in &layout.hinges {
        let parent = &layout.faces[h.parent];
        let n = parent.points.len();
        // the hinge is the parent's side whose endpoints the child shares
        let child = &layout.faces[h.child].vertices;
        let side = (0..n).find(|&i| {
            child.contains(&parent.vertices[i]) && child.contains(&parent.vertices[(i + 1) % n])
        });
        if let Some(i) = side {
            let (x1, y1) = px(parent.points[i]);
            let (x2, y2) = px(parent.points[(i + 1) % n]);
            writeln!(
                out,
                r#"    <line class="hinge" data-edge="{}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#,
                h.edge
            )
            .unwrap();
        }
    }
    writeln!(out, "  </g>").unwrap();

    writeln!(
        out,
        r#"  <g class="vertex-connections" fill="none" stroke="black" stroke-width="{FACE_STROKE}">"#
    )
    .unwrap();
    for vc in &layout.connections {
        let (x, y) = px(vc.points.0);
        writeln!(
            out,
            r#"    <circle class="vertex-connection" data-vertex="{}" cx="{x:.3}" cy="{y:.3}" r="{MARKER_RADIUS}"/>"#,
            vc.vertex
        )
        .unwrap();
    }
    writeln!(out, "  </g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_layout_is_rejected() {
        let layout: NetLayout<f64> = NetLayout {
            root_face: 0,
            faces: vec![],
            hinges: vec![],
            connections: vec![],
        };
        assert!(export_svg(&layout, &SvgOptions::default()).is_err());
    }

    #[test]
    fn title_is_escaped() {
        assert_eq!(escape("a<b & c>"), "a&lt;b &amp; c&gt;");
    }
}
