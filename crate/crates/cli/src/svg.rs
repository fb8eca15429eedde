//! SVG rendering of drawings.

use std::fmt::Write;

use lombardi_core::drawing::{EdgeGeometry, LombardiDrawing};
use lombardi_core::geom::{Arc, Point};
use lombardi_core::reduction::RotGraph;

const MARGIN: f64 = 10.0;
const DOT_RADIUS: f64 = 2.0;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// SVG document for `drawing` with `scale` pixels per unit.
///
/// Segments take their endpoints from `graph`; it may be omitted when every
/// edge is an arc. Returns `None` when a segment has no graph to name its
/// endpoints.
pub fn render_svg(drawing: &LombardiDrawing, graph: Option<&RotGraph>, scale: f64) -> Option<String> {
    let arcs: Vec<Arc> = drawing
        .edges
        .iter()
        .enumerate()
        .map(|(e, g)| match *g {
            EdgeGeometry::Arc { circle, a0, a1, ccw } => Some(Arc::from_angles(circle, a0, a1, ccw)),
            EdgeGeometry::Segment => {
                let edge = graph?.edge(e);
                Some(Arc::segment(drawing.positions[edge.u], drawing.positions[edge.v]))
            }
        })
        .collect::<Option<_>>()?;

    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |a: Point, b: Point| {
        lo = Point::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Point::new(hi.x.max(b.x), hi.y.max(b.y));
    };
    for p in &drawing.positions {
        grow(*p, *p);
    }
    for a in &arcs {
        let (a, b) = a.bbox();
        grow(a, b);
    }
    if lo.x > hi.x {
        lo = Point::ORIGIN;
        hi = Point::ORIGIN;
    }
    let width = (hi.x - lo.x) * scale + 2.0 * MARGIN;
    let height = (hi.y - lo.y) * scale + 2.0 * MARGIN;
    // Screen y grows downward, so y is mirrored.
    let map = |p: Point| ((p.x - lo.x) * scale + MARGIN, (hi.y - p.y) * scale + MARGIN);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<!-- Lombardi drawing. The y axis is flipped: mathematical y points up, so counterclockwise in the plane is counterclockwise on screen. -->\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(width),
        num(height),
        num(width),
        num(height)
    );
    out.push_str("<g fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n");
    for a in &arcs {
        let (x0, y0) = map(a.p());
        let (x1, y1) = map(a.q());
        match a.circle() {
            Some(c) => {
                let r = num(c.radius * scale);
                let large = u8::from(a.sweep() > std::f64::consts::PI);
                // Mirroring turns a counterclockwise arc into one of
                // decreasing SVG angle.
                let sweep = u8::from(!a.is_ccw());
                let _ = writeln!(
                    out,
                    "<path d=\"M {} {} A {r} {r} 0 {large} {sweep} {} {}\"/>",
                    num(x0),
                    num(y0),
                    num(x1),
                    num(y1)
                );
            }
            None => {
                let _ = writeln!(out, "<path d=\"M {} {} L {} {}\"/>", num(x0), num(y0), num(x1), num(y1));
            }
        }
    }
    out.push_str("</g>\n<g fill=\"black\">\n");
    for p in &drawing.positions {
        let (x, y) = map(*p);
        let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>", num(x), num(y), num(DOT_RADIUS));
    }
    out.push_str("</g>\n</svg>\n");
    Some(out)
}
