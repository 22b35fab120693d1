//! Static SVG figure of a path: one polyline per curve, endpoints highlighted.

use std::fmt::Write;

use crate::scalar::Real;
use crate::sobolev_metric::CurvePath;
use crate::vector::Vec3;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 24.0;
const START_COLOR: &str = "#2a9d3f";
const END_COLOR: &str = "#1f5fbf";
const MID_COLOR: &str = "#9a9a9a";

/// Orthographic view: top view `(x, y)` for surfaces, isometric for 3-space.
fn project<T: Real>(p: Vec3<T>, surface: bool) -> (f64, f64) {
    let (x, y, z) = (p.x.to_f64_lossy(), p.y.to_f64_lossy(), p.z.to_f64_lossy());
    if surface {
        (x, y)
    } else {
        let c = 30f64.to_radians().cos();
        let s = 0.5;
        ((x - y) * c, z - (x + y) * s)
    }
}

/// Renders `path`; output depends only on the point data.
pub fn render_svg<T: Real>(path: &CurvePath<T>) -> String {
    let surface = path.curve(0).space().is_surface();
    let lines: Vec<Vec<(f64, f64)>> = path
        .curves()
        .iter()
        .map(|c| {
            let mut pts: Vec<(f64, f64)> =
                c.points().iter().map(|p| project(*p, surface)).collect();
            if c.is_closed() && c.screw_shift().is_none() {
                pts.push(pts[0]);
            }
            pts
        })
        .collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in lines.iter().flatten() {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = (SIZE - 2.0 * MARGIN) / span;
    let ox = MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (x1 - x0) * scale);
    let oy = MARGIN + 0.5 * (SIZE - 2.0 * MARGIN - (y1 - y0) * scale);
    // SVG y grows downward
    let map = |(x, y): (f64, f64)| (ox + (x - x0) * scale, SIZE - oy - (y - y0) * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let m = lines.len();
    let order = (1..m.saturating_sub(1)).chain([0, m - 1]);
    for j in order {
        let (color, width) = if j == 0 {
            (START_COLOR, 2.0)
        } else if j + 1 == m {
            (END_COLOR, 2.0)
        } else {
            (MID_COLOR, 0.8)
        };
        let mut pts = String::new();
        for (i, p) in lines[j].iter().enumerate() {
            let (x, y) = map(*p);
            if i > 0 {
                pts.push(' ');
            }
            let _ = write!(pts, "{x:.3},{y:.3}");
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{pts}"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn one_polyline_per_curve() {
        let path = families::plane_concentric::<f64>(6, 32, |s| 1.0 + s).unwrap();
        let svg = render_svg(&path);
        assert_eq!(svg.matches("<polyline").count(), 6);
        assert_eq!(svg.matches(START_COLOR).count(), 1);
        assert_eq!(svg.matches(END_COLOR).count(), 1);
        assert_eq!(svg, render_svg(&path));
        assert!(svg.starts_with("<svg"));
    }
}
