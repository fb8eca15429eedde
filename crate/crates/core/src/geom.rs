//! Euclidean and inversive geometry kernel.
//!
//! Everything here works in double precision. Operations that compare
//! quantities take an explicit [`Tolerance`]; nothing hides a global epsilon.
//! Circles, lines, directed arcs, circle inversion and the small-circle
//! construction around a crossing of two arcs all live in this module.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("circle radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("the two circles coincide")]
    CoincidentCircles,
    #[error("point is not an endpoint of the arc")]
    NotAnEndpoint,
    #[error("arcs have no unique proper intersection")]
    NoProperIntersection,
    #[error("arcs touch instead of crossing")]
    TouchingArcs,
    #[error("operation needs a circular arc, got a segment")]
    SegmentArc,
    #[error("arc endpoints coincide")]
    CoincidentEndpoints,
    #[error("tangent points away from the other endpoint along their common line")]
    AntiparallelTangent,
    #[error("points are collinear")]
    CollinearPoints,
    #[error("arc passes through the inversion center")]
    ArcThroughCenter,
    #[error("point lies at the inversion center")]
    PointAtCenter,
}

/// Absolute tolerances used by comparing operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps_len: f64,
    pub eps_ang: f64,
}

impl Tolerance {
    pub fn new(eps_len: f64, eps_ang: f64) -> Self {
        assert!(eps_len > 0.0 && eps_ang > 0.0, "tolerances must be positive");
        Tolerance { eps_len, eps_ang }
    }

    /// Same angular tolerance, length tolerance multiplied by `scale`.
    pub fn scaled(self, scale: f64) -> Self {
        Tolerance {
            eps_len: self.eps_len * scale.max(f64::MIN_POSITIVE),
            eps_ang: self.eps_ang,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_len: 1e-9,
            eps_ang: 1e-9,
        }
    }
}

/// A point (or free vector) of the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at angle `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point { x: c, y: s }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise rotation by a quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        self / self.norm()
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn rotated(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A point of the extended plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtPoint {
    Finite(Point),
    Infinity,
}

impl From<Point> for ExtPoint {
    fn from(p: Point) -> Self {
        ExtPoint::Finite(p)
    }
}

impl ExtPoint {
    pub fn finite(self) -> Option<Point> {
        match self {
            ExtPoint::Finite(p) => Some(p),
            ExtPoint::Infinity => None,
        }
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed angle difference mapped into `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(GeomError::BadRadius(radius));
        }
        Ok(Circle { center, radius })
    }

    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Point::from_angle(theta) * self.radius
    }

    pub fn angle_of(&self, p: Point) -> f64 {
        (p - self.center).angle()
    }

    /// Signed distance from `p` to the circle, negative inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        p.distance(self.center) - self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        p.distance(self.center) < self.radius
    }
}

/// The line `{ x : normal · x = offset }` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub normal: Point,
    pub offset: f64,
}

impl Line {
    pub fn new(normal: Point, offset: f64) -> Self {
        let len = normal.norm();
        Line {
            normal: normal / len,
            offset: offset / len,
        }
    }

    pub fn through(p: Point, q: Point) -> Self {
        let n = (q - p).perp();
        Line::new(n, n.dot(p))
    }

    pub fn signed_distance(&self, p: Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn direction(&self) -> Point {
        -self.normal.perp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneralizedCircle {
    Circle(Circle),
    Line(Line),
}

impl GeneralizedCircle {
    pub fn distance(&self, p: Point) -> f64 {
        match self {
            GeneralizedCircle::Circle(c) => c.signed_distance(p).abs(),
            GeneralizedCircle::Line(l) => l.signed_distance(p).abs(),
        }
    }
}

/// Which end of a directed arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Start,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Support {
    Circle {
        circle: Circle,
        start: f64,
        end: f64,
        ccw: bool,
    },
    Segment,
}

/// A directed circular arc or straight segment from `p` to `q`.
///
/// Circular arcs keep their support circle and endpoint angles alongside the
/// endpoints, so incidence tests reduce to an angle subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    support: Support,
    p: Point,
    q: Point,
}

/// Result of intersecting two arcs.
#[derive(Debug, Clone, PartialEq)]
pub enum ArcContact {
    Points(Vec<Point>),
    /// The arcs share a piece of positive length.
    Overlap,
}

impl Arc {
    /// Arc of `circle` from `p` to `q`; the endpoints are stored as given.
    pub fn circular(circle: Circle, p: Point, q: Point, ccw: bool) -> Self {
        Arc {
            support: Support::Circle {
                circle,
                start: circle.angle_of(p),
                end: circle.angle_of(q),
                ccw,
            },
            p,
            q,
        }
    }

    /// Arc of `circle` between two polar angles.
    pub fn from_angles(circle: Circle, start: f64, end: f64, ccw: bool) -> Self {
        Arc {
            support: Support::Circle {
                circle,
                start: normalize_angle(start),
                end: normalize_angle(end),
                ccw,
            },
            p: circle.point_at(start),
            q: circle.point_at(end),
        }
    }

    pub fn segment(p: Point, q: Point) -> Self {
        Arc {
            support: Support::Segment,
            p,
            q,
        }
    }

    /// The arc of `circle` from `p` to `q` whose interior avoids `avoid`.
    pub fn on_circle_avoiding(circle: Circle, p: Point, q: Point, avoid: Point) -> Self {
        let a = Arc::circular(circle, p, q, true);
        let t = a.param_angle(circle.angle_of(avoid));
        if t < a.sweep() {
            Arc::circular(circle, p, q, false)
        } else {
            a
        }
    }

    /// The arc of `circle` from `p` to `q` passing through `via`.
    pub fn on_circle_through(circle: Circle, p: Point, q: Point, via: Point) -> Self {
        let a = Arc::circular(circle, p, q, true);
        let t = a.param_angle(circle.angle_of(via));
        if t < a.sweep() {
            a
        } else {
            Arc::circular(circle, p, q, false)
        }
    }

    pub fn p(&self) -> Point {
        self.p
    }

    pub fn q(&self) -> Point {
        self.q
    }

    pub fn endpoint(&self, end: End) -> Point {
        match end {
            End::Start => self.p,
            End::End => self.q,
        }
    }

    pub fn is_segment(&self) -> bool {
        matches!(self.support, Support::Segment)
    }

    pub fn circle(&self) -> Option<Circle> {
        match self.support {
            Support::Circle { circle, .. } => Some(circle),
            Support::Segment => None,
        }
    }

    /// `(start angle, end angle, ccw)` for circular arcs.
    pub fn angles(&self) -> Option<(f64, f64, bool)> {
        match self.support {
            Support::Circle {
                start, end, ccw, ..
            } => Some((start, end, ccw)),
            Support::Segment => None,
        }
    }

    pub fn is_ccw(&self) -> bool {
        match self.support {
            Support::Circle { ccw, .. } => ccw,
            Support::Segment => true,
        }
    }

    pub fn support(&self) -> GeneralizedCircle {
        match self.support {
            Support::Circle { circle, .. } => GeneralizedCircle::Circle(circle),
            Support::Segment => GeneralizedCircle::Line(Line::through(self.p, self.q)),
        }
    }

    pub fn reversed(&self) -> Arc {
        match self.support {
            Support::Circle {
                circle,
                start,
                end,
                ccw,
            } => Arc {
                support: Support::Circle {
                    circle,
                    start: end,
                    end: start,
                    ccw: !ccw,
                },
                p: self.q,
                q: self.p,
            },
            Support::Segment => Arc::segment(self.q, self.p),
        }
    }

    /// Angular extent in `[0, 2π)`; zero for segments.
    pub fn sweep(&self) -> f64 {
        match self.support {
            Support::Circle {
                start, end, ccw, ..
            } => {
                if ccw {
                    normalize_angle(end - start)
                } else {
                    normalize_angle(start - end)
                }
            }
            Support::Segment => 0.0,
        }
    }

    /// Angular offset of polar angle `theta` from the start, in travel direction.
    fn param_angle(&self, theta: f64) -> f64 {
        match self.support {
            Support::Circle { start, ccw, .. } => {
                if ccw {
                    normalize_angle(theta - start)
                } else {
                    normalize_angle(start - theta)
                }
            }
            Support::Segment => 0.0,
        }
    }

    /// Travel parameter of a point assumed on the support: arc angle for
    /// circles, arc length for segments.
    pub fn param_of(&self, pt: Point) -> f64 {
        match self.support {
            Support::Circle { circle, .. } => self.param_angle(circle.angle_of(pt)),
            Support::Segment => {
                let d = self.q - self.p;
                (pt - self.p).dot(d) / d.norm()
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self.support {
            Support::Circle { circle, .. } => circle.radius * self.sweep(),
            Support::Segment => self.p.distance(self.q),
        }
    }

    /// Point at fraction `t ∈ [0, 1]` of the arc.
    pub fn point_at(&self, t: f64) -> Point {
        match self.support {
            Support::Circle {
                circle, start, ccw, ..
            } => {
                let s = self.sweep() * t;
                circle.point_at(if ccw { start + s } else { start - s })
            }
            Support::Segment => self.p.lerp(self.q, t),
        }
    }

    pub fn midpoint(&self) -> Point {
        self.point_at(0.5)
    }

    /// Unit tangent at an endpoint, pointing into the arc.
    pub fn tangent(&self, end: End) -> Point {
        match self.support {
            Support::Circle {
                start, end: e, ccw, ..
            } => {
                let theta = match end {
                    End::Start => start,
                    End::End => e,
                };
                let fwd = Point::from_angle(theta).perp();
                let fwd = if ccw { fwd } else { -fwd };
                match end {
                    End::Start => fwd,
                    End::End => -fwd,
                }
            }
            Support::Segment => {
                let d = (self.q - self.p).normalized();
                match end {
                    End::Start => d,
                    End::End => -d,
                }
            }
        }
    }

    /// Whether a point already known to be on the support lies on the arc,
    /// with `slack` measured along the arc.
    fn within_span(&self, pt: Point, slack: f64) -> bool {
        match self.support {
            Support::Circle { circle, .. } => {
                let s = slack / circle.radius;
                let t = self.param_of(pt);
                t <= self.sweep() + s || t >= TAU - s
            }
            Support::Segment => {
                let t = self.param_of(pt);
                t >= -slack && t <= self.length() + slack
            }
        }
    }

    /// Whether the interior of the arc (endpoints excluded by `margin`) meets `pt`.
    pub fn interior_contains(&self, pt: Point, tol: Tolerance) -> bool {
        if self.support().distance(pt) > tol.eps_len {
            return false;
        }
        if pt.distance(self.p) <= tol.eps_len || pt.distance(self.q) <= tol.eps_len {
            return false;
        }
        self.within_span(pt, 0.0)
    }

    pub fn contains(&self, pt: Point, tol: Tolerance) -> bool {
        self.support().distance(pt) <= tol.eps_len && self.within_span(pt, tol.eps_len)
    }

    /// Euclidean distance from `pt` to the closest point of the arc.
    pub fn distance_to(&self, pt: Point) -> f64 {
        let ends = pt.distance(self.p).min(pt.distance(self.q));
        match self.support {
            Support::Circle { circle, .. } => {
                let v = pt - circle.center;
                if v.norm() == 0.0 {
                    return circle.radius;
                }
                let t = self.param_angle(v.angle());
                if t <= self.sweep() {
                    (v.norm() - circle.radius).abs()
                } else {
                    ends
                }
            }
            Support::Segment => {
                let d = self.q - self.p;
                let t = (pt - self.p).dot(d) / d.norm_sq();
                if (0.0..=1.0).contains(&t) {
                    (pt - self.p.lerp(self.q, t)).norm()
                } else {
                    ends
                }
            }
        }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let mut lo = Point::new(self.p.x.min(self.q.x), self.p.y.min(self.q.y));
        let mut hi = Point::new(self.p.x.max(self.q.x), self.p.y.max(self.q.y));
        if let Support::Circle { circle, .. } = self.support {
            for k in 0..4 {
                let theta = k as f64 * PI / 2.0;
                if self.param_angle(theta) < self.sweep() {
                    let e = circle.point_at(theta);
                    lo = Point::new(lo.x.min(e.x), lo.y.min(e.y));
                    hi = Point::new(hi.x.max(e.x), hi.y.max(e.y));
                }
            }
        }
        (lo, hi)
    }

    /// Intersection of two arcs. Shared pieces of positive length are
    /// reported as [`ArcContact::Overlap`].
    pub fn intersect(&self, other: &Arc, tol: Tolerance) -> ArcContact {
        let candidates: Vec<Point> = match (self.support, other.support) {
            (Support::Circle { circle: c1, .. }, Support::Circle { circle: c2, .. }) => {
                match circle_circle_intersections(c1, c2, tol) {
                    Ok(pts) => pts,
                    Err(_) => return self.cocircular_contact(other, tol),
                }
            }
            (Support::Circle { circle, .. }, Support::Segment) => {
                line_circle_intersections(other.p, other.q, circle, tol)
            }
            (Support::Segment, Support::Circle { circle, .. }) => {
                line_circle_intersections(self.p, self.q, circle, tol)
            }
            (Support::Segment, Support::Segment) => {
                let d1 = self.q - self.p;
                let d2 = other.q - other.p;
                let den = d1.cross(d2);
                if den.abs() <= tol.eps_ang * d1.norm() * d2.norm() {
                    if Line::through(self.p, self.q)
                        .signed_distance(other.p)
                        .abs()
                        > tol.eps_len
                    {
                        return ArcContact::Points(Vec::new());
                    }
                    return self.collinear_contact(other, tol);
                }
                let t = (other.p - self.p).cross(d2) / den;
                vec![self.p + d1 * t]
            }
        };
        let mut pts: Vec<Point> = candidates
            .into_iter()
            .filter(|pt| self.within_span(*pt, tol.eps_len) && other.within_span(*pt, tol.eps_len))
            .collect();
        pts.dedup_by(|a, b| a.distance(*b) <= tol.eps_len);
        ArcContact::Points(pts)
    }

    fn cocircular_contact(&self, other: &Arc, tol: Tolerance) -> ArcContact {
        // Same support circle: overlap iff some interior point of one arc is
        // interior to the other.
        let probes = [self.point_at(0.5), other.point_at(0.5)];
        if other.within_span(probes[0], -tol.eps_len) || self.within_span(probes[1], -tol.eps_len)
        {
            return ArcContact::Overlap;
        }
        let mut shared = Vec::new();
        for pt in [self.p, self.q] {
            if other.within_span(pt, tol.eps_len) {
                shared.push(pt);
            }
        }
        for pt in [other.p, other.q] {
            if self.within_span(pt, tol.eps_len) && shared.iter().all(|s| s.distance(pt) > tol.eps_len)
            {
                shared.push(pt);
            }
        }
        if shared.len() > 2 {
            return ArcContact::Overlap;
        }
        ArcContact::Points(shared)
    }

    fn collinear_contact(&self, other: &Arc, tol: Tolerance) -> ArcContact {
        let len = self.length();
        let a = self.param_of(other.p);
        let b = self.param_of(other.q);
        let (lo, hi) = (a.min(b).max(0.0), a.max(b).min(len));
        if hi - lo > tol.eps_len {
            ArcContact::Overlap
        } else if hi - lo >= -tol.eps_len {
            ArcContact::Points(vec![self.p.lerp(self.q, ((lo + hi) / 2.0) / len)])
        } else {
            ArcContact::Points(Vec::new())
        }
    }
}

/// Intersections of the line through `a`, `b` with a circle.
fn line_circle_intersections(a: Point, b: Point, c: Circle, tol: Tolerance) -> Vec<Point> {
    let d = (b - a).normalized();
    let foot_t = (c.center - a).dot(d);
    let foot = a + d * foot_t;
    let h = foot.distance(c.center);
    if h > c.radius + tol.eps_len {
        Vec::new()
    } else if (h - c.radius).abs() <= tol.eps_len {
        vec![foot]
    } else {
        let s = (c.radius * c.radius - h * h).sqrt();
        vec![foot - d * s, foot + d * s]
    }
}

/// Inversion of an extended-plane point in circle `c`.
pub fn invert_point(c: Circle, p: ExtPoint) -> ExtPoint {
    match p {
        ExtPoint::Infinity => ExtPoint::Finite(c.center),
        ExtPoint::Finite(p) => {
            let v = p - c.center;
            let d2 = v.norm_sq();
            if d2 == 0.0 {
                ExtPoint::Infinity
            } else {
                ExtPoint::Finite(c.center + v * (c.radius * c.radius / d2))
            }
        }
    }
}

/// Inversion of a finite point that is not the center.
pub fn invert_finite(c: Circle, p: Point) -> Result<Point, GeomError> {
    invert_point(c, p.into())
        .finite()
        .ok_or(GeomError::PointAtCenter)
}

/// Image of a circle or line under inversion in `c`.
pub fn invert_generalized(c: Circle, g: GeneralizedCircle, tol: Tolerance) -> GeneralizedCircle {
    let m = c.center;
    let r2 = c.radius * c.radius;
    match g {
        GeneralizedCircle::Circle(k) => {
            let v = k.center - m;
            let d = v.norm();
            if (d - k.radius).abs() <= tol.eps_len {
                // Passes through the center: image is a line perpendicular to v.
                let n = v / d;
                GeneralizedCircle::Line(Line::new(n, n.dot(m) + r2 / (2.0 * k.radius)))
            } else {
                let delta = (d - k.radius) * (d + k.radius);
                GeneralizedCircle::Circle(Circle {
                    center: m + v * (r2 / delta),
                    radius: r2 * k.radius / delta.abs(),
                })
            }
        }
        GeneralizedCircle::Line(l) => {
            let h = l.offset - l.normal.dot(m);
            if h.abs() <= tol.eps_len {
                GeneralizedCircle::Line(l)
            } else {
                GeneralizedCircle::Circle(Circle {
                    center: m + l.normal * (r2 / (2.0 * h)),
                    radius: r2 / (2.0 * h.abs()),
                })
            }
        }
    }
}

/// Image of an arc under inversion in `c`. The image endpoints are the
/// inverted endpoints; the image orientation follows the inverted midpoint.
pub fn invert_arc(c: Circle, arc: &Arc, tol: Tolerance) -> Result<Arc, GeomError> {
    if arc.distance_to(c.center) <= tol.eps_len {
        return Err(GeomError::ArcThroughCenter);
    }
    let p = invert_finite(c, arc.p)?;
    let q = invert_finite(c, arc.q)?;
    let mid = invert_finite(c, arc.midpoint())?;
    Ok(match invert_generalized(c, arc.support(), tol) {
        GeneralizedCircle::Line(_) => Arc::segment(p, q),
        GeneralizedCircle::Circle(k) => Arc::on_circle_through(k, p, q, mid),
    })
}

/// Intersection points of two circles, sorted lexicographically.
///
/// Center distances within `eps_len` of `r1 + r2` or `|r1 - r2|` count as
/// touching and yield a single point.
pub fn circle_circle_intersections(
    c1: Circle,
    c2: Circle,
    tol: Tolerance,
) -> Result<Vec<Point>, GeomError> {
    let v = c2.center - c1.center;
    let d = v.norm();
    if d <= tol.eps_len && (c1.radius - c2.radius).abs() <= tol.eps_len {
        return Err(GeomError::CoincidentCircles);
    }
    let (r1, r2) = (c1.radius, c2.radius);
    let outer = r1 + r2;
    let inner = (r1 - r2).abs();
    if d > outer + tol.eps_len || d < inner - tol.eps_len || d == 0.0 {
        return Ok(Vec::new());
    }
    let u = v / d;
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    if (d - outer).abs() <= tol.eps_len || (d - inner).abs() <= tol.eps_len {
        return Ok(vec![c1.center + u * a.clamp(-r1, r1)]);
    }
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let base = c1.center + u * a;
    let mut pts = vec![base + u.perp() * h, base - u.perp() * h];
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    Ok(pts)
}

/// Unit tangent of `a` at endpoint `at`, directed into the arc.
pub fn tangent_direction(a: &Arc, at: Point, tol: Tolerance) -> Result<Point, GeomError> {
    let dp = at.distance(a.p());
    let dq = at.distance(a.q());
    if dp <= tol.eps_len && dp <= dq {
        Ok(a.tangent(End::Start))
    } else if dq <= tol.eps_len {
        Ok(a.tangent(End::End))
    } else {
        Err(GeomError::NotAnEndpoint)
    }
}

/// Counterclockwise angle from `d1` to `d2`, in `[0, 2π)`.
pub fn angle_between(d1: Point, d2: Point) -> f64 {
    normalize_angle(d1.cross(d2).atan2(d1.dot(d2)))
}

/// Default fraction of the admissible radius used by
/// [`orthogonal_enclosing_circle`].
pub const DEFAULT_SHRINK: f64 = 1.0 / 3.0;

/// A circle orthogonal to the supports of `a1` and `a2` that encloses their
/// unique proper crossing and no other crossing of the two supports.
///
/// The radius starts at `shrink` times the largest radius for which the two
/// orthogonality loci are guaranteed to meet, and is halved until the
/// enclosure conditions hold.
pub fn orthogonal_enclosing_circle(
    a1: &Arc,
    a2: &Arc,
    shrink: f64,
    tol: Tolerance,
) -> Result<Circle, GeomError> {
    let (c1, c2) = match (a1.circle(), a2.circle()) {
        (Some(c1), Some(c2)) => (c1, c2),
        _ => return Err(GeomError::SegmentArc),
    };
    let (p, other) = proper_crossing(a1, a2, tol)?;
    let r = shrink.clamp(f64::MIN_POSITIVE, 1.0) * admissible_orthogonal_radius(c1, c2);
    shrink_until_enclosing(c1, c2, p, other, r, tol)
}

/// The crossing of `a1` and `a2` together with the second crossing of their
/// support circles.
pub fn proper_crossing(a1: &Arc, a2: &Arc, tol: Tolerance) -> Result<(Point, Point), GeomError> {
    let (c1, c2) = match (a1.circle(), a2.circle()) {
        (Some(c1), Some(c2)) => (c1, c2),
        _ => return Err(GeomError::SegmentArc),
    };
    let pts = match circle_circle_intersections(c1, c2, tol) {
        Ok(pts) => pts,
        Err(_) => return Err(GeomError::NoProperIntersection),
    };
    match pts.len() {
        2 => {}
        1 => return Err(GeomError::TouchingArcs),
        _ => return Err(GeomError::NoProperIntersection),
    }
    let on_both: Vec<bool> = pts
        .iter()
        .map(|x| a1.contains(*x, tol) && a2.contains(*x, tol))
        .collect();
    match (on_both[0], on_both[1]) {
        (true, false) => Ok((pts[0], pts[1])),
        (false, true) => Ok((pts[1], pts[0])),
        _ => Err(GeomError::NoProperIntersection),
    }
}

/// Largest radius `r` with `|sqrt(r_i² + r²) - r_i| <= ε/2` for both
/// circles, where `ε = d - (r_big - r_small)`.
pub fn admissible_orthogonal_radius(c1: Circle, c2: Circle) -> f64 {
    let d = c1.center.distance(c2.center);
    let small = c1.radius.min(c2.radius);
    let eps = d - (c1.radius - c2.radius).abs();
    (eps * small + eps * eps / 4.0).max(0.0).sqrt()
}

/// Circle of radius `r` orthogonal to `c1` and `c2` whose center is the
/// candidate nearer to `near`.
pub fn orthogonal_circle_with_radius(
    c1: Circle,
    c2: Circle,
    near: Point,
    r: f64,
    tol: Tolerance,
) -> Option<Circle> {
    let l1 = Circle {
        center: c1.center,
        radius: (c1.radius * c1.radius + r * r).sqrt(),
    };
    let l2 = Circle {
        center: c2.center,
        radius: (c2.radius * c2.radius + r * r).sqrt(),
    };
    let tight = Tolerance {
        eps_len: tol.eps_len * 1e-3,
        ..tol
    };
    let centers = circle_circle_intersections(l1, l2, tight).ok()?;
    if centers.len() != 2 {
        return None;
    }
    let center = if centers[0].distance(near) <= centers[1].distance(near) {
        centers[0]
    } else {
        centers[1]
    };
    Some(Circle { center, radius: r })
}

/// Halves `r` until the orthogonal circle encloses `p` but not `other`.
pub fn shrink_until_enclosing(
    c1: Circle,
    c2: Circle,
    p: Point,
    other: Point,
    mut r: f64,
    tol: Tolerance,
) -> Result<Circle, GeomError> {
    for _ in 0..200 {
        if r <= 0.0 || !r.is_finite() {
            break;
        }
        if let Some(c) = orthogonal_circle_with_radius(c1, c2, p, r, tol) {
            if c.center.distance(p) < r && c.center.distance(other) > r {
                return Ok(c);
            }
        }
        r *= 0.5;
    }
    Err(GeomError::NoProperIntersection)
}

/// The unique arc (or segment) from `u` to `v` leaving `u` in direction `t`.
pub fn arc_from_endpoint_tangent(
    u: Point,
    v: Point,
    t: Point,
    tol: Tolerance,
) -> Result<Arc, GeomError> {
    let w = v - u;
    let wn = w.norm();
    if wn <= tol.eps_len {
        return Err(GeomError::CoincidentEndpoints);
    }
    let t = t.normalized();
    let n = t.perp();
    let nw = n.dot(w);
    if nw.abs() <= tol.eps_ang * wn {
        return if t.dot(w) > 0.0 {
            Ok(Arc::segment(u, v))
        } else {
            Err(GeomError::AntiparallelTangent)
        };
    }
    let s = w.norm_sq() / (2.0 * nw);
    let circle = Circle {
        center: u + n * s,
        radius: s.abs(),
    };
    Ok(Arc::circular(circle, u, v, s > 0.0))
}

/// Circle through three points.
pub fn circumcircle(p0: Point, p1: Point, p2: Point, tol: Tolerance) -> Result<Circle, GeomError> {
    let a = p1 - p0;
    let b = p2 - p0;
    let den = 2.0 * a.cross(b);
    let scale = a.norm().max(b.norm()).max((p2 - p1).norm());
    if den.abs() <= 2.0 * tol.eps_len * scale {
        return Err(GeomError::CollinearPoints);
    }
    let ux = (b.y * a.norm_sq() - a.y * b.norm_sq()) / den;
    let uy = (a.x * b.norm_sq() - b.x * a.norm_sq()) / den;
    let off = Point::new(ux, uy);
    Ok(Circle {
        center: p0 + off,
        radius: off.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn close(a: Point, b: Point, eps: f64) -> bool {
        a.distance(b) <= eps
    }

    fn unit() -> Circle {
        Circle::new(Point::ORIGIN, 1.0).unwrap()
    }

    #[test]
    fn invert_point_examples() {
        let c = unit();
        let img = invert_point(c, Point::new(2.0, 0.0).into()).finite().unwrap();
        assert!(close(img, Point::new(0.5, 0.0), 1e-15));
        let fixed = invert_point(c, Point::new(1.0, 0.0).into()).finite().unwrap();
        assert!(close(fixed, Point::new(1.0, 0.0), 1e-15));
        assert_eq!(invert_point(c, Point::ORIGIN.into()), ExtPoint::Infinity);
        assert_eq!(invert_point(c, ExtPoint::Infinity), ExtPoint::Finite(Point::ORIGIN));
    }

    // Oracle: invert three points of the input and fit the image circle.
    fn fit_image(c: Circle, pts: [Point; 3]) -> Circle {
        let img: Vec<Point> = pts
            .iter()
            .map(|p| invert_finite(c, *p).unwrap())
            .collect();
        circumcircle(img[0], img[1], img[2], tol()).unwrap()
    }

    #[test]
    fn invert_generalized_examples() {
        let c = unit();
        let line = GeneralizedCircle::Line(Line::new(Point::new(1.0, 0.0), 2.0));
        let oracle = fit_image(
            c,
            [Point::new(2.0, -1.0), Point::new(2.0, 0.0), Point::new(2.0, 3.0)],
        );
        assert!(close(oracle.center, Point::new(0.25, 0.0), 1e-12));
        match invert_generalized(c, line, tol()) {
            GeneralizedCircle::Circle(k) => {
                assert!(close(k.center, oracle.center, 1e-12));
                assert!((k.radius - 0.25).abs() < 1e-12);
            }
            other => panic!("expected circle, got {other:?}"),
        }

        let g = Circle::new(Point::new(3.0, 0.0), 1.0).unwrap();
        let oracle = fit_image(
            c,
            [Point::new(2.0, 0.0), Point::new(4.0, 0.0), Point::new(3.0, 1.0)],
        );
        match invert_generalized(c, GeneralizedCircle::Circle(g), tol()) {
            GeneralizedCircle::Circle(k) => {
                assert!(close(k.center, Point::new(0.375, 0.0), 1e-12));
                assert!((k.radius - 0.125).abs() < 1e-12);
                assert!(close(k.center, oracle.center, 1e-12));
            }
            other => panic!("expected circle, got {other:?}"),
        }

        let axis = Line::new(Point::new(0.0, 1.0), 0.0);
        assert_eq!(
            invert_generalized(c, GeneralizedCircle::Line(axis), tol()),
            GeneralizedCircle::Line(axis)
        );
    }

    #[test]
    fn circle_through_center_maps_to_line() {
        let c = unit();
        let k = Circle::new(Point::new(1.0, 0.0), 1.0).unwrap();
        match invert_generalized(c, GeneralizedCircle::Circle(k), tol()) {
            GeneralizedCircle::Line(l) => {
                // (2,0) maps to (0.5,0), which must be on the image line.
                assert!(l.signed_distance(Point::new(0.5, 0.0)).abs() < 1e-12);
                assert!(l.signed_distance(Point::new(0.5, 7.0)).abs() < 1e-12);
            }
            other => panic!("expected line, got {other:?}"),
        }
    }

    #[test]
    fn circle_circle_examples() {
        let a = unit();
        let b = Circle::new(Point::new(1.0, 0.0), 1.0).unwrap();
        let pts = circle_circle_intersections(a, b, tol()).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert_eq!(pts.len(), 2);
        assert!(close(pts[0], Point::new(0.5, -h), 1e-15));
        assert!(close(pts[1], Point::new(0.5, h), 1e-15));

        let far = Circle::new(Point::new(3.0, 0.0), 1.0).unwrap();
        assert!(circle_circle_intersections(a, far, tol()).unwrap().is_empty());

        let touch = Circle::new(Point::new(2.0, 0.0), 1.0).unwrap();
        let pts = circle_circle_intersections(a, touch, tol()).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(close(pts[0], Point::new(1.0, 0.0), 1e-15));

        assert_eq!(
            circle_circle_intersections(a, a, tol()),
            Err(GeomError::CoincidentCircles)
        );
    }

    #[test]
    fn tangent_examples() {
        let upper = Arc::circular(unit(), Point::new(1.0, 0.0), Point::new(-1.0, 0.0), true);
        let t = tangent_direction(&upper, Point::new(1.0, 0.0), tol()).unwrap();
        assert!(close(t, Point::new(0.0, 1.0), 1e-15));
        let t = tangent_direction(&upper, Point::new(-1.0, 0.0), tol()).unwrap();
        assert!(close(t, Point::new(0.0, 1.0), 1e-15));
        let seg = Arc::segment(Point::ORIGIN, Point::new(2.0, 0.0));
        let t = tangent_direction(&seg, Point::ORIGIN, tol()).unwrap();
        assert!(close(t, Point::new(1.0, 0.0), 1e-15));
        assert_eq!(
            tangent_direction(&seg, Point::new(1.0, 0.0), tol()),
            Err(GeomError::NotAnEndpoint)
        );
    }

    #[test]
    fn angle_between_examples() {
        let x = Point::new(1.0, 0.0);
        let y = Point::new(0.0, 1.0);
        assert!((angle_between(x, y) - PI / 2.0).abs() < 1e-15);
        assert_eq!(angle_between(x, x), 0.0);
        assert!((angle_between(y, x) - 3.0 * PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn arc_from_tangent_examples() {
        let u = Point::new(1.0, 0.0);
        let v = Point::new(-1.0, 0.0);
        let a = arc_from_endpoint_tangent(u, v, Point::new(0.0, 1.0), tol()).unwrap();
        let c = a.circle().unwrap();
        assert!(close(c.center, Point::ORIGIN, 1e-15));
        assert!((c.radius - 1.0).abs() < 1e-15);
        assert!(a.is_ccw());
        assert!(close(a.midpoint(), Point::new(0.0, 1.0), 1e-12));
        assert_eq!((a.p(), a.q()), (u, v));

        let lower = arc_from_endpoint_tangent(u, v, Point::new(0.0, -1.0), tol()).unwrap();
        assert!(close(lower.midpoint(), Point::new(0.0, -1.0), 1e-12));

        let seg =
            arc_from_endpoint_tangent(Point::ORIGIN, Point::new(2.0, 0.0), Point::new(1.0, 0.0), tol())
                .unwrap();
        assert!(seg.is_segment());

        assert_eq!(
            arc_from_endpoint_tangent(u, u, Point::new(0.0, 1.0), tol()),
            Err(GeomError::CoincidentEndpoints)
        );
    }

    #[test]
    fn circumcircle_examples() {
        let c = circumcircle(Point::ORIGIN, Point::new(1.0, 0.0), Point::new(0.0, 1.0), tol()).unwrap();
        assert!(close(c.center, Point::new(0.5, 0.5), 1e-15));
        assert!((c.radius - 2f64.sqrt() / 2.0).abs() < 1e-15);
        let c = circumcircle(Point::new(1.0, 0.0), Point::new(0.0, 1.0), Point::new(-1.0, 0.0), tol())
            .unwrap();
        assert!(close(c.center, Point::ORIGIN, 1e-15));
        assert!((c.radius - 1.0).abs() < 1e-15);
        assert_eq!(
            circumcircle(Point::ORIGIN, Point::new(1.0, 1.0), Point::new(2.0, 2.0), tol()),
            Err(GeomError::CollinearPoints)
        );
    }

    fn arc_around(c: Circle, theta: f64, half: f64) -> Arc {
        Arc::from_angles(c, theta - half, theta + half, true)
    }

    #[test]
    fn orthogonal_circle_examples() {
        let c1 = unit();
        let c2 = Circle::new(Point::new(1.0, 0.0), 1.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let p = Point::new(0.5, h);
        // Explicit radius 0.5 around the upper crossing.
        let c = orthogonal_circle_with_radius(c1, c2, p, 0.5, tol()).unwrap();
        assert!(close(c.center, Point::new(0.5, 1.0), 1e-12));
        assert!(c.center.distance(p) < 0.5);
        let c = orthogonal_circle_with_radius(c1, c2, Point::new(0.5, -h), 0.5, tol()).unwrap();
        assert!(close(c.center, Point::new(0.5, -1.0), 1e-12));

        let a1 = arc_around(c1, PI / 3.0, 0.3);
        let a2 = arc_around(c2, 2.0 * PI / 3.0, 0.3);
        let c = orthogonal_enclosing_circle(&a1, &a2, DEFAULT_SHRINK, tol()).unwrap();
        let rmax = admissible_orthogonal_radius(c1, c2);
        assert!(c.radius <= DEFAULT_SHRINK * rmax + 1e-15);
        for k in [c1, k2(c2)] {
            let d = c.center.distance(k.center);
            assert!((k.radius * k.radius + c.radius * c.radius - d * d).abs() < 1e-12);
        }
        assert!(c.contains(p));
        assert!(!c.contains(Point::new(0.5, -h)));
    }

    fn k2(c: Circle) -> Circle {
        c
    }

    #[test]
    fn touching_arcs_rejected() {
        let c1 = unit();
        let c2 = Circle::new(Point::new(2.0, 0.0), 1.0).unwrap();
        let a1 = arc_around(c1, 0.0, 0.5);
        let a2 = arc_around(c2, PI, 0.5);
        assert_eq!(
            orthogonal_enclosing_circle(&a1, &a2, DEFAULT_SHRINK, tol()),
            Err(GeomError::TouchingArcs)
        );
    }

    #[test]
    fn arcs_crossing_twice_rejected() {
        let c1 = unit();
        let c2 = Circle::new(Point::new(1.0, 0.0), 1.0).unwrap();
        let a1 = Arc::from_angles(c1, -1.2, 1.2, true);
        let a2 = Arc::from_angles(c2, PI - 1.2, PI + 1.2, true);
        assert_eq!(
            orthogonal_enclosing_circle(&a1, &a2, DEFAULT_SHRINK, tol()),
            Err(GeomError::NoProperIntersection)
        );
    }

    #[test]
    fn arc_intersections() {
        let upper = Arc::circular(unit(), Point::new(1.0, 0.0), Point::new(-1.0, 0.0), true);
        let seg = Arc::segment(Point::new(0.0, -2.0), Point::new(0.0, 2.0));
        match upper.intersect(&seg, tol()) {
            ArcContact::Points(p) => {
                assert_eq!(p.len(), 1);
                assert!(close(p[0], Point::new(0.0, 1.0), 1e-12));
            }
            ArcContact::Overlap => panic!(),
        }
        let part = Arc::from_angles(unit(), 0.5, 1.0, true);
        assert_eq!(upper.intersect(&part, tol()), ArcContact::Overlap);
        let lower = Arc::circular(unit(), Point::new(1.0, 0.0), Point::new(-1.0, 0.0), false);
        match upper.intersect(&lower, tol()) {
            ArcContact::Points(p) => assert_eq!(p.len(), 2),
            ArcContact::Overlap => panic!("complementary arcs only share endpoints"),
        }
    }

    #[test]
    fn distance_to_arc() {
        let upper = Arc::circular(unit(), Point::new(1.0, 0.0), Point::new(-1.0, 0.0), true);
        assert!((upper.distance_to(Point::new(0.0, 3.0)) - 2.0).abs() < 1e-15);
        assert!((upper.distance_to(Point::new(0.0, -3.0)) - 10f64.sqrt()).abs() < 1e-12);
        let seg = Arc::segment(Point::ORIGIN, Point::new(2.0, 0.0));
        assert!((seg.distance_to(Point::new(1.0, 1.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arc_inversion_round_trip() {
        let inv = Circle::new(Point::new(0.3, -2.0), 1.7).unwrap();
        let a = Arc::from_angles(Circle::new(Point::new(1.0, 1.0), 0.8).unwrap(), 0.2, 2.5, true);
        let img = invert_arc(inv, &a, tol()).unwrap();
        let back = invert_arc(inv, &img, tol()).unwrap();
        assert!(close(back.p(), a.p(), 1e-12));
        assert!(close(back.q(), a.q(), 1e-12));
        assert!(close(back.midpoint(), a.midpoint(), 1e-12));

        let seg = Arc::segment(Point::new(-1.0, 1.0), Point::new(2.0, 1.5));
        let img = invert_arc(inv, &seg, tol()).unwrap();
        assert!(!img.is_segment());
        let back = invert_arc(inv, &img, tol()).unwrap();
        assert!(back.is_segment());
        assert!(close(back.p(), seg.p(), 1e-12));
    }
}
