//! Checks a candidate drawing against a graph with a rotation system.

use std::f64::consts::TAU;
use std::fmt;

use super::{DrawingError, EdgeGeometry, LombardiDrawing};
use crate::geom::{normalize_angle, Arc, ArcContact, Point, Tolerance};
use crate::reduction::{dart_edge, Dart, RotGraph};

/// Prescribed angles: `angles[v][k]` is the angle from the `k`-th dart of
/// the rotation at `v` to the next one.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleAssignment {
    pub angles: Vec<Vec<f64>>,
}

impl AngleAssignment {
    /// The assignment asking for perfect angular resolution.
    pub fn uniform(g: &RotGraph) -> Self {
        AngleAssignment {
            angles: (0..g.vertex_count())
                .map(|v| vec![TAU / g.degree(v) as f64; g.degree(v)])
                .collect(),
        }
    }

    fn check_shape(&self, g: &RotGraph, tol: Tolerance) -> Result<(), DrawingError> {
        if self.angles.len() != g.vertex_count() {
            return Err(DrawingError::CoverageMismatch(
                "angle assignment has the wrong number of vertices".into(),
            ));
        }
        for (v, a) in self.angles.iter().enumerate() {
            if a.len() != g.degree(v) {
                return Err(DrawingError::CoverageMismatch(format!(
                    "angle assignment at vertex {v} has {} entries, degree is {}",
                    a.len(),
                    g.degree(v)
                )));
            }
            let sum: f64 = a.iter().sum();
            if !a.is_empty() && (a.iter().any(|x| *x <= 0.0) || (sum - TAU).abs() > tol.eps_ang * a.len() as f64) {
                return Err(DrawingError::CoverageMismatch(format!(
                    "angles at vertex {v} must be positive and sum to 2π"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ValidateOptions {
    /// Only accept the counterclockwise reading of the rotation system.
    pub strict_orientation: bool,
    /// Fail when two edges share more than one point, shared endpoints
    /// included.
    pub strict_edge_pairs: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst value seen; its meaning is given per check in [`ValidationReport`].
    pub residual: f64,
    pub detail: Option<String>,
}

/// Per-check verdicts.
///
/// Residuals: `edge-endpoints` is the largest arc-endpoint offset and
/// `distinct-vertices` / `vertex-on-edge` the smallest clearance, all
/// relative to the vertex diameter; `edge-pair-overlap` is the largest number
/// of non-endpoint points shared by two edges; angle checks are in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// `1` when the rotation system is read counterclockwise, `-1` when the
    /// drawing realizes its mirror image.
    pub orientation: i8,
    pub vertex_diameter: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn angle_residual(&self) -> f64 {
        self.checks
            .iter()
            .find(|c| c.name == "angular-resolution" || c.name == "angle-assignment")
            .map_or(0.0, |c| c.residual)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })?;
        for c in &self.checks {
            write!(
                f,
                "  {:<20} {}  residual {:.3e}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.residual
            )?;
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        write!(f, "  orientation {}", self.orientation)
    }
}

/// Unit tangent of edge `e` leaving vertex `w`, read from the edge's
/// support at the placement of `w`.
pub(crate) fn dart_tangent(g: &RotGraph, drawing: &LombardiDrawing, d: Dart) -> Point {
    let e = dart_edge(d);
    let w = g.dart_origin(d);
    let at = drawing.positions[w];
    match drawing.edges[e] {
        EdgeGeometry::Segment => (drawing.positions[g.dart_head(d)] - at).normalized(),
        EdgeGeometry::Arc { circle, ccw, .. } => {
            let fwd = (at - circle.center).perp().normalized();
            let fwd = if ccw { fwd } else { -fwd };
            if d % 2 == 0 {
                fwd
            } else {
                -fwd
            }
        }
    }
}

/// Gaps between consecutive darts at `v` when the rotation is read with
/// the given orientation.
pub(crate) fn gaps(g: &RotGraph, drawing: &LombardiDrawing, v: usize, orientation: f64) -> Vec<f64> {
    let angles: Vec<f64> = g
        .rotation(v)
        .iter()
        .map(|&d| dart_tangent(g, drawing, d).angle())
        .collect();
    let k = angles.len();
    (0..k)
        .map(|i| {
            let gap = normalize_angle(orientation * (angles[(i + 1) % k] - angles[i]));
            if k == 1 {
                TAU
            } else {
                gap
            }
        })
        .collect()
}

fn rotation_residual(gaps: &[f64]) -> f64 {
    (gaps.iter().sum::<f64>() - TAU).abs()
}

/// Checks a drawing of `g`.
///
/// `tol.eps_len` is relative to the vertex diameter; `tol.eps_ang` is in
/// radians. When `theta` is given, the angles between consecutive darts
/// must match it instead of `2π / deg`.
pub fn validate(
    g: &RotGraph,
    drawing: &LombardiDrawing,
    theta: Option<&AngleAssignment>,
    tol: Tolerance,
    opts: ValidateOptions,
) -> Result<ValidationReport, DrawingError> {
    drawing.covers(g)?;
    if let Some(t) = theta {
        t.check_shape(g, tol)?;
    }
    let diam = drawing.vertex_diameter().max(f64::MIN_POSITIVE);
    let eps = tol.eps_len * diam;
    let arcs = drawing.arcs(g);
    let mut checks = Vec::new();

    // Arc endpoints at the placements of their vertices.
    let mut worst = 0.0f64;
    let mut worst_edge = None;
    for (e, arc) in arcs.iter().enumerate() {
        let edge = g.edge(e);
        let off = arc
            .p()
            .distance(drawing.positions[edge.u])
            .max(arc.q().distance(drawing.positions[edge.v]));
        if off > worst {
            worst = off;
            worst_edge = Some(e);
        }
    }
    checks.push(CheckResult {
        name: "edge-endpoints",
        passed: worst <= eps,
        residual: worst / diam,
        detail: worst_edge.filter(|_| worst > eps).map(|e| format!("edge {e}")),
    });

    checks.push(distinct_vertices(&drawing.positions, eps, diam));
    checks.push(vertex_on_edge(g, &drawing.positions, &arcs, eps, diam));
    checks.push(edge_pairs(g, &drawing.positions, &arcs, eps, opts.strict_edge_pairs));

    // Orientation: the reading under which most vertices match.
    let big: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) >= 3).collect();
    let failures = |o: f64| {
        big.iter()
            .filter(|&&v| rotation_residual(&gaps(g, drawing, v, o)) > std::f64::consts::PI)
            .count()
    };
    let orientation = if opts.strict_orientation || failures(1.0) <= failures(-1.0) {
        1.0
    } else {
        -1.0
    };

    let mut rot_worst = 0.0f64;
    let mut rot_bad = Vec::new();
    let mut ang_worst = 0.0f64;
    let mut ang_at = None;
    for v in 0..g.vertex_count() {
        if g.degree(v) == 0 {
            continue;
        }
        let gp = gaps(g, drawing, v, orientation);
        let r = rotation_residual(&gp);
        rot_worst = rot_worst.max(r);
        if r > std::f64::consts::PI {
            rot_bad.push(v);
        }
        let deg = gp.len();
        for (k, gap) in gp.iter().enumerate() {
            let target = theta.map_or(TAU / deg as f64, |t| t.angles[v][k]);
            let res = (gap - target).abs();
            if res > ang_worst {
                ang_worst = res;
                ang_at = Some(v);
            }
        }
    }
    checks.push(CheckResult {
        name: if theta.is_some() {
            "angle-assignment"
        } else {
            "angular-resolution"
        },
        passed: ang_worst <= tol.eps_ang,
        residual: ang_worst,
        detail: ang_at.filter(|_| ang_worst > tol.eps_ang).map(|v| format!("vertex {v}")),
    });
    checks.push(CheckResult {
        name: "rotation-match",
        passed: rot_bad.is_empty(),
        residual: rot_worst,
        detail: rot_bad.first().map(|v| format!("{} vertices, first {v}", rot_bad.len())),
    });

    Ok(ValidationReport {
        checks,
        orientation: orientation as i8,
        vertex_diameter: diam,
    })
}

fn distinct_vertices(positions: &[Point], eps: f64, diam: f64) -> CheckResult {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].x.total_cmp(&positions[b].x));
    let mut closest = f64::INFINITY;
    let mut pair = None;
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if positions[b].x - positions[a].x > closest.max(eps) {
                break;
            }
            let d = positions[a].distance(positions[b]);
            if d < closest {
                closest = d;
                pair = Some((a.min(b), a.max(b)));
            }
        }
    }
    CheckResult {
        name: "distinct-vertices",
        passed: closest > eps,
        residual: if closest.is_finite() { closest / diam } else { 1.0 },
        detail: pair.filter(|_| closest <= eps).map(|(a, b)| format!("vertices {a} and {b}")),
    }
}

fn vertex_on_edge(g: &RotGraph, positions: &[Point], arcs: &[Arc], eps: f64, diam: f64) -> CheckResult {
    let mut order: Vec<usize> = (0..positions.len()).collect();
    order.sort_by(|&a, &b| positions[a].x.total_cmp(&positions[b].x));
    let xs: Vec<f64> = order.iter().map(|&v| positions[v].x).collect();
    let mut closest = f64::INFINITY;
    let mut hit = None;
    for (e, arc) in arcs.iter().enumerate() {
        let edge = g.edge(e);
        let (lo, hi) = arc.bbox();
        let start = xs.partition_point(|x| *x < lo.x - eps);
        for k in start..order.len() {
            if xs[k] > hi.x + eps {
                break;
            }
            let v = order[k];
            let p = positions[v];
            if v == edge.u || v == edge.v || p.y < lo.y - eps || p.y > hi.y + eps {
                continue;
            }
            let d = arc.distance_to(p);
            if d < closest {
                closest = d;
                hit = Some((v, e));
            }
        }
    }
    CheckResult {
        name: "vertex-on-edge",
        passed: closest > eps,
        residual: if closest.is_finite() { closest / diam } else { 1.0 },
        detail: hit
            .filter(|_| closest <= eps)
            .map(|(v, e)| format!("vertex {v} on edge {e}")),
    }
}

fn edge_pairs(g: &RotGraph, positions: &[Point], arcs: &[Arc], eps: f64, strict: bool) -> CheckResult {
    let tol = Tolerance {
        eps_len: eps,
        eps_ang: 1e-12,
    };
    let boxes: Vec<(Point, Point)> = arcs.iter().map(|a| a.bbox()).collect();
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0.x.total_cmp(&boxes[b].0.x));
    let mut worst_extra = 0usize;
    let mut overlap = None;
    let mut too_many = None;
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if boxes[b].0.x > boxes[a].1.x + eps {
                break;
            }
            if boxes[b].0.y > boxes[a].1.y + eps || boxes[b].1.y < boxes[a].0.y - eps {
                continue;
            }
            let (ea, eb) = (g.edge(a), g.edge(b));
            let common: Vec<Point> = [ea.u, ea.v]
                .into_iter()
                .filter(|w| *w == eb.u || *w == eb.v)
                .map(|w| positions[w])
                .collect();
            match arcs[a].intersect(&arcs[b], tol) {
                ArcContact::Overlap => {
                    overlap.get_or_insert((a.min(b), a.max(b)));
                }
                ArcContact::Points(pts) => {
                    let extra = pts
                        .iter()
                        .filter(|p| common.iter().all(|c| c.distance(**p) > eps))
                        .count();
                    worst_extra = worst_extra.max(extra);
                    if extra + common.len() > 1 {
                        too_many.get_or_insert((a.min(b), a.max(b)));
                    }
                }
            }
        }
    }
    let passed = overlap.is_none() && (!strict || too_many.is_none());
    let detail = if let Some((a, b)) = overlap {
        Some(format!("edges {a} and {b} overlap"))
    } else if strict {
        too_many.map(|(a, b)| format!("edges {a} and {b} share more than one point"))
    } else {
        None
    };
    CheckResult {
        name: "edge-pair-overlap",
        passed,
        residual: worst_extra as f64,
        detail,
    }
}
