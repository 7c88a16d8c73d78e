//! Static SVG figures of planar instances.

use std::fmt::Write;

use vsep::instance::Side;
use vsep::verify::BadPair;
use vsep::{Point, Sphere};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 20.0;

/// Things to draw on top of the input points.
#[derive(Default)]
pub struct Figure<'a> {
    pub points: &'a [Point],
    pub sides: Option<&'a [Side]>,
    pub guards: &'a [Point],
    pub sphere: Option<&'a Sphere>,
    pub bad_pairs: &'a [BadPair],
}

impl Figure<'_> {
    /// Renders the figure; only the first two coordinates are used.
    pub fn render(&self) -> String {
        let mut xs: Vec<[f64; 2]> = self.points.iter().chain(self.guards).map(xy).collect();
        if let Some(s) = self.sphere {
            let c = xy(&s.center);
            xs.push([c[0] - s.radius, c[1] - s.radius]);
            xs.push([c[0] + s.radius, c[1] + s.radius]);
        }
        let lo = [0, 1].map(|k| xs.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min));
        let hi = [0, 1].map(|k| xs.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max));
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        let map = |p: &Point| {
            let q = xy(p);
            (MARGIN + (q[0] - lo[0]) * scale, SIZE - MARGIN - (q[1] - lo[1]) * scale)
        };
        let dot = (SIZE / 200.0).max(1.5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        if let Some(s) = self.sphere {
            let (cx, cy) = map(&s.center);
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="seagreen" stroke-width="1.5"/>"#,
                s.radius * scale
            );
        }
        for bp in self.bad_pairs {
            let (x1, y1) = map(&self.points[bp.p1]);
            let (x2, y2) = map(&self.points[bp.p2]);
            let (wx, wy) = map(&bp.witness);
            let _ = writeln!(
                out,
                r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="orange" stroke-width="1.5"/>"#
            );
            let _ = writeln!(out, r#"<circle cx="{wx:.2}" cy="{wy:.2}" r="{:.2}" fill="orange"/>"#, dot * 1.5);
        }
        for (i, p) in self.points.iter().enumerate() {
            let (x, y) = map(p);
            let color = match self.sides.map(|s| s[i]) {
                Some(Side::One) => "#1f77b4",
                Some(Side::Two) => "#d62728",
                None => "#555555",
            };
            let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{dot:.2}" fill="{color}"/>"#);
        }
        for g in self.guards {
            let (x, y) = map(g);
            let h = dot * 0.8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="black"/>"#,
                x - h,
                y - h,
                2.0 * h,
                2.0 * h
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn xy(p: &Point) -> [f64; 2] {
    let c = p.coords();
    [c[0], c.get(1).copied().unwrap_or(0.0)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_every_element() {
        let points: Vec<Point> = vec![[0.0, 0.0].into(), [1.0, 0.0].into()];
        let sides = [Side::One, Side::Two];
        let guards: Vec<Point> = vec![[0.5, 0.1].into()];
        let sphere = Sphere::new([0.5, 0.0].into(), 0.3);
        let bad = [BadPair {
            p1: 0,
            p2: 1,
            witness: [0.5, 0.0].into(),
        }];
        let svg = Figure {
            points: &points,
            sides: Some(&sides),
            guards: &guards,
            sphere: Some(&sphere),
            bad_pairs: &bad,
        }
        .render();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 1 + 1 + 2);
        assert_eq!(svg.matches("<rect").count(), 2);
        assert_eq!(svg.matches("<line").count(), 1);
        assert!(svg.contains("#1f77b4") && svg.contains("#d62728"));
    }
}
