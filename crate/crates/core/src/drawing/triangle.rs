//! Arc-triangles: interior angles, bigon angles against the circumcircle,
//! and the midpoint-on-circle probe.

use std::f64::consts::PI;

use super::DrawingError;
use crate::geom::{
    angle_between, angle_diff, circumcircle, tangent_direction, Arc, ArcContact, Circle, GeomError, Point,
    Tolerance,
};

/// Three vertices in clockwise order with the interior to the right, and
/// the arcs `arcs[i]` opposite `v[i]`, in either direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcTriangle {
    pub v: [Point; 3],
    pub arcs: [Arc; 3],
}

/// Signed bigon angles between each arc and the circumcircle: positive
/// when the arc runs inside the circle, negative outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigonAngles {
    pub circumcircle: Circle,
    pub phi: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleAngles {
    pub theta: [f64; 3],
    /// `None` when the vertices are collinear.
    pub bigon: Option<BigonAngles>,
}

impl TriangleAngles {
    /// Largest deviation of `|φ_i|` from `|ψ' − θ_i|` with
    /// `ψ' = (Σθ − π) / 2`.
    pub fn bigon_formula_residual(&self) -> Option<f64> {
        let b = self.bigon?;
        let psi = (self.theta.iter().sum::<f64>() - PI) / 2.0;
        Some(
            (0..3)
                .map(|i| (b.phi[i].abs() - (psi - self.theta[i]).abs()).abs())
                .fold(0.0, f64::max),
        )
    }
}

impl ArcTriangle {
    fn size(&self) -> f64 {
        let [a, b, c] = self.v;
        a.distance(b).max(b.distance(c)).max(c.distance(a))
    }

    fn tangent(&self, arc: usize, at: usize, tol: Tolerance) -> Result<Point, DrawingError> {
        tangent_direction(&self.arcs[arc], self.v[at], tol).map_err(|_| DrawingError::NotSimple)
    }

    /// Arcs join the right vertices and meet only there.
    fn check_simple(&self, tol: Tolerance) -> Result<(), DrawingError> {
        for i in 0..3 {
            let (p, q) = (self.v[(i + 1) % 3], self.v[(i + 2) % 3]);
            let a = &self.arcs[i];
            let joins = (a.p().distance(p) <= tol.eps_len && a.q().distance(q) <= tol.eps_len)
                || (a.p().distance(q) <= tol.eps_len && a.q().distance(p) <= tol.eps_len);
            if !joins {
                return Err(DrawingError::NotSimple);
            }
        }
        for i in 0..3 {
            let j = (i + 1) % 3;
            // Arcs i and j share vertex i + 2.
            let shared = self.v[(i + 2) % 3];
            let (a, b) = (&self.arcs[i], &self.arcs[j]);
            match (a.circle(), b.circle()) {
                (Some(c1), Some(c2)) => {
                    // Both supports pass through the shared vertex; the other
                    // common point is its mirror image in the line of centers.
                    let d = c2.center - c1.center;
                    if d.norm() <= tol.eps_len {
                        if a.contains(b.midpoint(), tol) || b.contains(a.midpoint(), tol) {
                            return Err(DrawingError::NotSimple);
                        }
                        continue;
                    }
                    let u = d.normalized();
                    let w = shared - c1.center;
                    let other = c1.center + u * (2.0 * w.dot(u)) - w;
                    if other.distance(shared) > tol.eps_len && a.contains(other, tol) && b.contains(other, tol) {
                        return Err(DrawingError::NotSimple);
                    }
                }
                _ => match a.intersect(b, tol) {
                    ArcContact::Overlap => return Err(DrawingError::NotSimple),
                    ArcContact::Points(pts) => {
                        if pts.iter().any(|x| x.distance(shared) > tol.eps_len) {
                            return Err(DrawingError::NotSimple);
                        }
                    }
                },
            }
        }
        Ok(())
    }
}

/// Interior angles at each vertex and, for non-collinear vertices, the
/// bigon angles of each arc against the circumcircle.
pub fn arc_triangle_angles(t: &ArcTriangle, tol: Tolerance) -> Result<TriangleAngles, DrawingError> {
    let scaled = tol.scaled(t.size().max(f64::MIN_POSITIVE));
    t.check_simple(scaled)?;
    let mut theta = [0.0; 3];
    for (i, th) in theta.iter_mut().enumerate() {
        let out = t.tangent((i + 2) % 3, i, scaled)?;
        let inn = t.tangent((i + 1) % 3, i, scaled)?;
        *th = angle_between(inn, out);
    }
    let bigon = match circumcircle(t.v[0], t.v[1], t.v[2], scaled) {
        Ok(c) => {
            let mut phi = [0.0; 3];
            for (i, ph) in phi.iter_mut().enumerate() {
                let (p, q) = (t.v[(i + 1) % 3], t.v[(i + 2) % 3]);
                let along = Arc::on_circle_avoiding(c, p, q, t.v[i]);
                let arc_t = t.tangent(i, (i + 1) % 3, scaled)?;
                let circ_t = along.tangent(crate::geom::End::Start);
                let mag = angle_diff(arc_t.angle(), circ_t.angle()).abs();
                let mid = t.arcs[i].midpoint();
                let off = c.signed_distance(mid);
                *ph = if off.abs() <= scaled.eps_len || mag <= tol.eps_ang {
                    0.0
                } else if off < 0.0 {
                    mag
                } else {
                    -mag
                };
            }
            Some(BigonAngles { circumcircle: c, phi })
        }
        Err(GeomError::CollinearPoints) => None,
        Err(_) => return Err(DrawingError::NotSimple),
    };
    Ok(TriangleAngles { theta, bigon })
}

/// Whether `v1` lies on the support circle of `a1` but not on `a1` itself.
///
/// Requires `θ0 = θ1 ∈ [π, 3π/2)`, `θ2 = π` and a circular `a1`.
pub fn check_midpoint_on_circle(t: &ArcTriangle, tol: Tolerance) -> Result<bool, DrawingError> {
    let angles = arc_triangle_angles(t, tol)?;
    let [t0, t1, t2] = angles.theta;
    let eps = tol.eps_ang;
    if (t0 - t1).abs() > eps {
        return Err(DrawingError::PreconditionViolated(format!(
            "theta0 = {t0} differs from theta1 = {t1}"
        )));
    }
    if t0 < PI - eps || t0 >= 1.5 * PI {
        return Err(DrawingError::PreconditionViolated(format!("theta0 = {t0} outside [pi, 3pi/2)")));
    }
    if (t2 - PI).abs() > eps {
        return Err(DrawingError::PreconditionViolated(format!("theta2 = {t2} is not pi")));
    }
    let Some(c1) = t.arcs[1].circle() else {
        return Err(DrawingError::PreconditionViolated("a1 is a segment".into()));
    };
    let scaled = tol.scaled(t.size().max(c1.radius));
    let on_circle = c1.signed_distance(t.v[1]).abs() <= 1e3 * scaled.eps_len;
    Ok(on_circle && !t.arcs[1].contains(t.v[1], scaled))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::arc_from_endpoint_tangent;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit() -> Circle {
        Circle::new(Point::ORIGIN, 1.0).unwrap()
    }

    fn all_on_circle() -> ArcTriangle {
        let v = [Point::new(1.0, 0.0), Point::new(-1.0, 0.0), Point::new(0.0, 1.0)];
        let arcs = [
            Arc::on_circle_avoiding(unit(), v[1], v[2], v[0]),
            Arc::on_circle_avoiding(unit(), v[2], v[0], v[1]),
            Arc::on_circle_avoiding(unit(), v[0], v[1], v[2]),
        ];
        ArcTriangle { v, arcs }
    }

    #[test]
    fn all_on_circle_angles() {
        let a = arc_triangle_angles(&all_on_circle(), tol()).unwrap();
        for i in 0..3 {
            assert!((a.theta[i] - PI).abs() < 1e-12);
        }
        assert_eq!(a.bigon.unwrap().phi, [0.0; 3]);
        assert!(a.bigon_formula_residual().unwrap() < 1e-12);
    }

    #[test]
    fn straight_triangle_angles() {
        // Clockwise order.
        let v = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        let arcs = [
            Arc::segment(v[1], v[2]),
            Arc::segment(v[2], v[0]),
            Arc::segment(v[0], v[1]),
        ];
        let a = arc_triangle_angles(&ArcTriangle { v, arcs }, tol()).unwrap();
        let mut th = a.theta;
        th.sort_by(f64::total_cmp);
        assert!((th[0] - PI / 4.0).abs() < 1e-12);
        assert!((th[1] - PI / 4.0).abs() < 1e-12);
        assert!((th[2] - PI / 2.0).abs() < 1e-12);
        // Each chord subtends the inscribed angle at the opposite vertex.
        let b = a.bigon.unwrap();
        for i in 0..3 {
            assert!(b.phi[i] > 0.0);
            assert!((b.phi[i] - a.theta[i]).abs() < 1e-12);
        }
        assert!(a.bigon_formula_residual().unwrap() < 1e-12);
    }

    #[test]
    fn collinear_has_no_bigons() {
        let v = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 0.0)];
        let c = Circle::new(Point::new(1.5, 0.0), 0.5).unwrap();
        let c2 = Circle::new(Point::new(0.5, 0.0), 0.5).unwrap();
        let c3 = Circle::new(Point::new(1.0, 0.0), 1.0).unwrap();
        let arcs = [
            Arc::circular(c, v[1], v[2], true),
            Arc::circular(c2, v[2], v[0], true),
            Arc::circular(c3, v[0], v[1], true),
        ];
        let t = ArcTriangle { v, arcs };
        let a = arc_triangle_angles(&t, tol()).unwrap();
        assert!(a.bigon.is_none());
    }

    #[test]
    fn midpoint_probe_on_circle_triangle() {
        let t = all_on_circle();
        assert!(check_midpoint_on_circle(&t, tol()).unwrap());
    }

    /// Triangle with `θ0 = π + α`, `θ2 = π`, `a1` the upper unit semicircle,
    /// and `v1` found by bisection on `θ1 = θ0` along `a2`.
    fn solved_triangle(alpha: f64, beta: f64) -> ArcTriangle {
        let v0 = Point::new(1.0, 0.0);
        let v2 = Point::new(-1.0, 0.0);
        let a1 = Arc::on_circle_avoiding(unit(), v2, v0, Point::new(0.0, -1.0));
        let t0 = Point::new(0.0, -1.0).rotated(alpha);
        let guess = Point::from_angle(-beta);
        let a2_full = arc_from_endpoint_tangent(v0, guess, t0, tol()).unwrap();
        let build = |s: f64| {
            let v1 = match a2_full.angles() {
                Some((a, _, ccw)) => {
                    let c = a2_full.circle().unwrap();
                    let sw = a2_full.sweep() * s;
                    c.point_at(if ccw { a + sw } else { a - sw })
                }
                None => v0.lerp(guess, s),
            };
            let a0 = arc_from_endpoint_tangent(v2, v1, Point::new(0.0, -1.0), tol()).unwrap();
            let a2 = arc_from_endpoint_tangent(v0, v1, t0, tol()).unwrap();
            ArcTriangle {
                v: [v0, v1, v2],
                arcs: [a0, a1, a2],
            }
        };
        let f = |s: f64| {
            let a = arc_triangle_angles(&build(s), tol()).unwrap();
            a.theta[1] - a.theta[0]
        };
        let (mut lo, mut hi) = (0.6, 1.4);
        assert!(f(lo) * f(hi) < 0.0, "no bracket: {} {}", f(lo), f(hi));
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        build(0.5 * (lo + hi))
    }

    #[test]
    fn midpoint_probe_on_solved_triangle() {
        let t = solved_triangle(0.3, 1.2);
        let a = arc_triangle_angles(&t, tol()).unwrap();
        assert!((a.theta[0] - PI - 0.3).abs() < 1e-9);
        assert!(check_midpoint_on_circle(&t, tol()).unwrap());
    }

    #[test]
    fn unequal_angles_rejected() {
        let v = [Point::new(0.0, 0.0), Point::new(0.0, 1.0), Point::new(1.0, 0.0)];
        let arcs = [
            Arc::segment(v[1], v[2]),
            Arc::segment(v[2], v[0]),
            Arc::segment(v[0], v[1]),
        ];
        assert!(matches!(
            check_midpoint_on_circle(&ArcTriangle { v, arcs }, tol()),
            Err(DrawingError::PreconditionViolated(_))
        ));
    }
}
