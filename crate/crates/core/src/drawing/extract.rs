//! Reading a combinatorial description back out of a drawing.

use super::{DrawingError, LombardiDrawing};
use crate::arrangement::CombinatorialDescription;
use crate::geom::{circumcircle, invert_finite, Arc, Circle, GeneralizedCircle, Point, Tolerance};
use crate::hyperbolic::{hyperbolic_crossing_order, orthogonality_residual, DiskModel, PoincareLine};
use crate::reduction::{layout_of, RotGraph};

/// Relative slack on circle fits, as a multiple of `eps_len`.
const FIT_SLACK: f64 = 1e3;

/// Circle through `pts`, fitted on three well-spread samples and checked
/// against the rest.
fn fit_circle(pts: &[Point], what: &str, slack: f64, tol: Tolerance) -> Result<Circle, DrawingError> {
    let k = pts.len();
    if k < 3 {
        return Err(DrawingError::CircleFitFailure(format!("{what}: fewer than three points")));
    }
    let c = circumcircle(pts[0], pts[k / 3], pts[2 * k / 3], tol)
        .map_err(|e| DrawingError::CircleFitFailure(format!("{what}: {e}")))?;
    let worst = pts
        .iter()
        .map(|p| c.signed_distance(*p).abs())
        .fold(0.0, f64::max);
    if worst > slack {
        return Err(DrawingError::CircleFitFailure(format!(
            "{what}: a vertex is {worst:e} off the fitted circle"
        )));
    }
    Ok(c)
}

/// Recovers the arrangement from a drawing of the core or full graph.
///
/// The boundary cycle fixes the disk. When the paths lie outside it, their
/// vertices are first inverted in the disk circle.
pub fn extract_description(
    g: &RotGraph,
    drawing: &LombardiDrawing,
    tol: Tolerance,
) -> Result<CombinatorialDescription, DrawingError> {
    drawing.covers(g)?;
    let layout = layout_of(g)?;
    let n = layout.n;
    let diam = drawing.vertex_diameter().max(f64::MIN_POSITIVE);
    let slack = FIT_SLACK * tol.eps_len * diam;
    let fit_tol = tol.scaled(diam);
    let pos = |v: usize| drawing.positions[v];

    let gamma: Vec<Point> = layout.gamma_cycle().into_iter().map(pos).collect();
    let disk = fit_circle(&gamma, "boundary cycle", slack, fit_tol)?;
    let m = DiskModel::new(disk);

    let interior: Vec<usize> = layout
        .path
        .iter()
        .flat_map(|p| p[1..p.len() - 1].iter().copied())
        .collect();
    let inside = interior.iter().filter(|&&v| disk.signed_distance(pos(v)) < 0.0).count();
    let flip = if inside == interior.len() {
        false
    } else if inside == 0 {
        true
    } else {
        return Err(DrawingError::CircleFitFailure(
            "path vertices lie on both sides of the boundary circle".into(),
        ));
    };
    let place = |v: usize| -> Result<Point, DrawingError> {
        if flip {
            invert_finite(disk, pos(v)).map_err(|_| DrawingError::VertexAtCenter(v))
        } else {
            Ok(pos(v))
        }
    };

    let disk_tol = tol.scaled(disk.radius);
    let mut pls = Vec::with_capacity(n);
    for i in 0..n {
        let path = &layout.path[i];
        let pts: Vec<Point> = path.iter().map(|&v| place(v)).collect::<Result<_, _>>()?;
        let support = fit_circle(&pts, &format!("path {}", i + 1), slack, fit_tol)?;
        let residual = orthogonality_residual(disk, support);
        if residual > FIT_SLACK * tol.eps_len {
            return Err(DrawingError::NonOrthogonalSupport { line: i, residual });
        }
        let via = pts[pts.len() / 2];
        let arc = Arc::on_circle_through(support, pts[0], pts[pts.len() - 1], via);
        let pl = PoincareLine::new(&m, arc, FIT_SLACK * tol.eps_len, tol.scaled(slack / tol.eps_len))
            .map_err(|e| DrawingError::CircleFitFailure(format!("path {}: {e}", i + 1)))?;
        pls.push(pl);
    }
    let order = hyperbolic_crossing_order(&m, &pls, disk_tol);
    match order.missing.first() {
        Some(&(i, j)) => Err(DrawingError::MissingCrossing(i, j)),
        None => Ok(order.description().expect("no missing crossings")),
    }
}

/// Whether every vertex and edge of `cycle` lies on the support circle of
/// the edge joining its first two vertices.
pub fn check_circle_forcing(
    g: &RotGraph,
    drawing: &LombardiDrawing,
    cycle: &[usize],
    tol: Tolerance,
) -> Result<bool, DrawingError> {
    drawing.covers(g)?;
    if cycle.len() < 2 {
        return Err(DrawingError::PreconditionViolated("cycle has fewer than two vertices".into()));
    }
    let diam = drawing.vertex_diameter().max(f64::MIN_POSITIVE);
    let slack = FIT_SLACK * tol.eps_len * diam;
    let k = cycle.len();
    let mut cycle_edges = Vec::with_capacity(k);
    for idx in 0..k {
        let (a, b) = (cycle[idx], cycle[(idx + 1) % k]);
        let e = g
            .rotation(a)
            .iter()
            .map(|&d| (d, crate::reduction::dart_edge(d)))
            .find(|&(d, e)| g.dart_head(d) == b && g.edge(e).tag.is_core())
            .map(|(_, e)| e)
            .ok_or_else(|| DrawingError::PreconditionViolated(format!("no core edge between {a} and {b}")))?;
        cycle_edges.push(e);
    }
    let first = drawing.arc(g, cycle_edges[0]);
    let circle = match first.support() {
        GeneralizedCircle::Circle(c) => c,
        GeneralizedCircle::Line(_) => return Err(DrawingError::SegmentEdge(cycle_edges[0])),
    };
    let on = |p: Point| circle.signed_distance(p).abs() <= slack;
    if !cycle.iter().all(|&v| on(drawing.positions[v])) {
        return Ok(false);
    }
    Ok(cycle_edges.iter().all(|&e| {
        let a = drawing.arc(g, e);
        [0.25, 0.5, 0.75].iter().all(|&t| on(a.point_at(t)))
    }))
}
