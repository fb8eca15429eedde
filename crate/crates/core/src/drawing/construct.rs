//! Drawings of the core and full graphs from a line realization.
//!
//! The lines are clipped to a disk, turned into Poincaré arcs, and every
//! crossing gets a small circle orthogonal to both arcs. The boundary cycle
//! lies on the disk circle, each path on the support of its arc, and each
//! crossing's 4-cycle on its small circle. Gadget edges are the unique arcs
//! leaving their slot direction; stubs are short segments.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::validate::dart_tangent;
use super::{validate, DrawingError, LombardiDrawing, ValidateOptions};
use crate::arrangement::{describe, describe_labeled, label_lines, CombinatorialDescription, EuclideanLine};
use crate::geom::{
    admissible_orthogonal_radius, angle_diff, arc_from_endpoint_tangent, circle_circle_intersections,
    proper_crossing, shrink_until_enclosing, Arc, Circle, End, Point, Tolerance, DEFAULT_SHRINK,
};
use crate::hyperbolic::{
    clip_lines, enclosing_disk, klein_to_poincare, line_crossings, DiskModel, HyperbolicError, KleinChord,
    PoincareLine,
};
use crate::reduction::{build_core, build_full, dart_edge, layout_of, CoreLayout, EdgeTag, RotGraph};

/// Smallest accepted distance of a chord from the disk center, relative to
/// the radius. Chords closer to a diameter have nearly straight supports.
const MIN_CHORD_OFFSET: f64 = 0.02;

/// Stub length cap relative to the diameter of the core vertices.
const STUB_CAP: f64 = 0.05;

/// Shortest stub, as a multiple of the length tolerance.
const MIN_STUB: f64 = 100.0;

/// Relative size of the line perturbation used on retries.
const PERTURBATION: f64 = 1e-2;

/// A constructed drawing with the circles it was built on.
#[derive(Debug, Clone)]
pub struct Construction {
    pub graph: RotGraph,
    pub drawing: LombardiDrawing,
    /// The boundary circle carrying the boundary cycle.
    pub disk: Circle,
    /// Support circle of each path.
    pub line_circles: Vec<Circle>,
    /// Small circle of each crossing `(i, j)` with `i < j`.
    pub cross_circles: Vec<(usize, usize, Circle)>,
}

fn degenerate(msg: impl Into<String>) -> DrawingError {
    DrawingError::DegenerateConfiguration(msg.into())
}

fn from_hyperbolic(e: HyperbolicError) -> DrawingError {
    degenerate(e.to_string())
}

/// Picks a disk whose chords all stay away from its center.
fn choose_disk(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<(DiskModel, Vec<KleinChord>), DrawingError> {
    let pts = line_crossings(lines, tol).map_err(from_hyperbolic)?;
    let centroid = pts.iter().fold(Point::ORIGIN, |acc, p| acc + *p) / pts.len() as f64;
    let base = enclosing_disk(&pts, centroid);
    let mut centers = vec![centroid];
    for step in 1..=3 {
        for k in 0..8 {
            let dir = Point::from_angle(k as f64 * TAU / 8.0 + 0.3);
            centers.push(centroid + dir * (0.1 * step as f64 * base.radius));
        }
    }
    for center in centers {
        let mut disk = enclosing_disk(&pts, center);
        disk.radius = disk.radius.max(base.radius);
        let m = DiskModel::new(disk);
        let chords = clip_lines(&m, lines, tol).map_err(from_hyperbolic)?;
        let ok = chords.iter().all(|ch| {
            let mid = (ch.p() + ch.q()) / 2.0;
            mid.distance(center) >= MIN_CHORD_OFFSET * disk.radius
        });
        if ok {
            return Ok((m, chords));
        }
    }
    Err(degenerate("every candidate disk has a nearly diametral chord"))
}

struct CoreGeometry {
    graph: RotGraph,
    layout: CoreLayout,
    disk: Circle,
    lines: Vec<PoincareLine>,
    cross: Vec<(usize, usize, Circle)>,
    positions: Vec<Point>,
    arcs: Vec<Arc>,
}

fn core_geometry(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    tol: Tolerance,
) -> Result<CoreGeometry, DrawingError> {
    let labeled = label_lines(lines, tol)?;
    let found = describe_labeled(&labeled, tol)?;
    if &found != d {
        return Err(DrawingError::DescriptionMismatch {
            expected: d.to_string(),
            found: found.to_string(),
        });
    }
    let graph = build_core(d)?;
    let layout = layout_of(&graph)?;
    let n = d.n();

    let (m, chords) = choose_disk(&labeled, tol)?;
    let disk = m.disk;
    let scaled = tol.scaled(disk.radius);
    let pls: Vec<PoincareLine> = chords
        .iter()
        .map(|ch| klein_to_poincare(&m, ch, tol))
        .collect::<Result<_, _>>()
        .map_err(from_hyperbolic)?;
    let supports: Vec<Circle> = pls.iter().map(|pl| pl.support()).collect();

    let mut positions = vec![Point::ORIGIN; graph.vertex_count()];
    for i in 0..n {
        positions[layout.left[i]] = chords[i].p();
        positions[layout.right[i]] = chords[i].q();
    }

    // Crossings of the Poincaré arcs.
    let mut crossings = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (x, other) = proper_crossing(pls[i].arc(), pls[j].arc(), scaled)
                .map_err(|e| degenerate(format!("lines {} and {}: {e}", i + 1, j + 1)))?;
            crossings.push((i, j, x, other));
        }
    }

    // Small circles around the crossings.
    let mut cross: Vec<(usize, usize, Circle)> = Vec::with_capacity(crossings.len());
    for (k, &(i, j, x, other)) in crossings.iter().enumerate() {
        let nearest = crossings
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, c)| c.2.distance(x))
            .fold(f64::INFINITY, f64::min);
        let to_boundary = disk.radius - x.distance(disk.center);
        let r = (DEFAULT_SHRINK * admissible_orthogonal_radius(supports[i], supports[j]))
            .min(nearest / 3.0)
            .min(to_boundary / 3.0);
        let c = shrink_until_enclosing(supports[i], supports[j], x, other, r, scaled)
            .map_err(|e| degenerate(format!("crossing ({},{}): {e}", i + 1, j + 1)))?;
        cross.push((i, j, c));
    }
    // Shrink until the small circles are pairwise disjoint and inside the disk.
    for _ in 0..64 {
        let mut bad = vec![false; cross.len()];
        for a in 0..cross.len() {
            let ca = cross[a].2;
            if ca.center.distance(disk.center) + ca.radius >= disk.radius * (1.0 - 1e-9) {
                bad[a] = true;
            }
            for b in a + 1..cross.len() {
                let cb = cross[b].2;
                if ca.center.distance(cb.center) <= (ca.radius + cb.radius) * (1.0 + 1e-9) {
                    bad[a] = true;
                    bad[b] = true;
                }
            }
        }
        if !bad.contains(&true) {
            break;
        }
        for (k, flag) in bad.iter().enumerate() {
            if *flag {
                let (i, j, x, other) = crossings[k];
                let c = shrink_until_enclosing(supports[i], supports[j], x, other, cross[k].2.radius / 2.0, scaled)
                    .map_err(|e| degenerate(format!("crossing ({},{}): {e}", i + 1, j + 1)))?;
                cross[k].2 = c;
            }
        }
    }

    // Path vertices: the small circle meets each of its two arcs twice.
    for &(i, j, c) in &cross {
        for (line, partner) in [(i, j), (j, i)] {
            let hits = circle_circle_intersections(c, supports[line], scaled)
                .map_err(|e| degenerate(e.to_string()))?;
            if hits.len() != 2 {
                return Err(degenerate(format!(
                    "crossing circle ({},{}) touches line {}",
                    i + 1,
                    j + 1,
                    line + 1
                )));
            }
            let arc = pls[line].arc();
            let (mut a, mut b) = (hits[0], hits[1]);
            if arc.param_of(a) > arc.param_of(b) {
                std::mem::swap(&mut a, &mut b);
            }
            positions[layout.cross_left[line][partner]] = a;
            positions[layout.cross_right[line][partner]] = b;
        }
    }
    for i in 0..n {
        let arc = pls[i].arc();
        let path = &layout.path[i];
        let params: Vec<f64> = path[1..path.len() - 1].iter().map(|&v| arc.param_of(positions[v])).collect();
        let inside = params.iter().all(|t| *t > 0.0 && *t < arc.sweep());
        if !inside || params.windows(2).any(|w| w[0] >= w[1]) {
            return Err(degenerate(format!("path vertices of line {} are out of order", i + 1)));
        }
    }

    let cross_circle = |i: usize, j: usize| {
        cross
            .iter()
            .find(|c| (c.0, c.1) == (i.min(j), i.max(j)))
            .expect("every pair has a circle")
            .2
    };
    let mut arcs = Vec::with_capacity(graph.edge_count());
    for e in graph.edges() {
        let (p, q) = (positions[e.u], positions[e.v]);
        let arc = match e.tag {
            // The boundary cycle runs clockwise.
            EdgeTag::CycleGamma => Arc::circular(disk, p, q, false),
            EdgeTag::Ei(i) => Arc::on_circle_avoiding(supports[i], p, q, pls[i].arc().midpoint()),
            EdgeTag::Path(i) => Arc::circular(supports[i], p, q, pls[i].arc().is_ccw()),
            EdgeTag::CrossCycle(i, j) => {
                let cyc = layout.cycle(crate::reduction::GadgetCycle::Cross(i, j));
                let k = cyc.iter().position(|&v| v == e.u).expect("edge on its cycle");
                let avoid = positions[cyc[(k + 2) % 4]];
                Arc::on_circle_avoiding(cross_circle(i, j), p, q, avoid)
            }
            EdgeTag::Gadget(..) | EdgeTag::Stub => unreachable!("core graph only"),
        };
        arcs.push(arc);
    }
    let total: f64 = arcs
        .iter()
        .zip(graph.edges())
        .filter(|(_, e)| e.tag == EdgeTag::CycleGamma)
        .map(|(a, _)| a.sweep())
        .sum();
    if (total - TAU).abs() > 1e-6 {
        return Err(degenerate("boundary cycle is not in clockwise order"));
    }

    Ok(CoreGeometry {
        graph,
        layout,
        disk,
        lines: pls,
        cross,
        positions,
        arcs,
    })
}

/// Drawing of the core graph of `d` from lines realizing it.
pub fn construct_restricted(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    tol: Tolerance,
) -> Result<Construction, DrawingError> {
    let geo = core_geometry(lines, d, tol)?;
    self_check(Construction {
        drawing: LombardiDrawing::from_arcs(geo.positions, &geo.arcs),
        line_circles: geo.lines.iter().map(|l| l.support()).collect(),
        graph: geo.graph,
        disk: geo.disk,
        cross_circles: geo.cross,
    }, tol)
}

/// Drawing of the full graph of `d` from lines realizing it.
pub fn construct_full(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    tol: Tolerance,
) -> Result<Construction, DrawingError> {
    let geo = core_geometry(lines, d, tol)?;
    let _ = &geo.layout;
    let graph = build_full(d)?;
    let core_v = geo.graph.vertex_count();
    let core_e = geo.graph.edge_count();

    let mut positions = geo.positions.clone();
    positions.resize(graph.vertex_count(), Point::ORIGIN);
    let mut arcs = geo.arcs.clone();

    // Orientation of the core drawing relative to the rotation system.
    let core_drawing = LombardiDrawing::from_arcs(geo.positions.clone(), &geo.arcs);
    let orientation = {
        let gp = super::validate::gaps(&geo.graph, &core_drawing, 0, 1.0);
        if (gp.iter().sum::<f64>() - TAU).abs() < 1.0 {
            1.0
        } else {
            -1.0
        }
    };

    // Slot directions: dart at rotation index m points at angle
    // alpha_0 + orientation * m * 2π / deg.
    let mut slot_dir = vec![Point::ORIGIN; 2 * graph.edge_count()];
    for v in 0..core_v {
        let rot = graph.rotation(v);
        let first = rot[0];
        debug_assert!(dart_edge(first) < core_e);
        let base = dart_tangent(&geo.graph, &core_drawing, first).angle();
        let step = TAU / rot.len() as f64;
        for (m, &dart) in rot.iter().enumerate() {
            slot_dir[dart] = Point::from_angle(base + orientation * m as f64 * step);
        }
    }

    let mut stubs = Vec::new();
    for e in core_e..graph.edge_count() {
        let edge = *graph.edge(e);
        match edge.tag {
            EdgeTag::Gadget(..) => {
                let (p, q) = (positions[edge.u], positions[edge.v]);
                let arc = arc_from_endpoint_tangent(p, q, slot_dir[2 * e], tol.scaled(geo.disk.radius))
                    .map_err(|err| degenerate(format!("gadget edge {e}: {err}")))?;
                let residual = angle_diff(arc.tangent(End::End).angle(), slot_dir[2 * e + 1].angle()).abs();
                if residual > tol.eps_ang {
                    return Err(DrawingError::SlotTangentMismatch { edge: e, residual });
                }
                arcs.push(arc);
            }
            EdgeTag::Stub => {
                stubs.push(e);
                arcs.push(Arc::segment(positions[edge.u], positions[edge.u]));
            }
            _ => unreachable!("core edges come first"),
        }
    }

    let fixed = core_e + (graph.edge_count() - core_e - stubs.len());
    let diam = LombardiDrawing::from_arcs(positions[..core_v].to_vec(), &[]).vertex_diameter();

    // Clearance of every core vertex from everything not incident to it.
    let mut clearance = vec![f64::INFINITY; core_v];
    for v in 0..core_v {
        let p = positions[v];
        for w in 0..core_v {
            if w != v {
                clearance[v] = clearance[v].min(p.distance(positions[w]));
            }
        }
        for (e, arc) in arcs[..fixed].iter().enumerate() {
            let edge = graph.edge(e);
            if edge.u != v && edge.v != v {
                clearance[v] = clearance[v].min(arc.distance_to(p));
            }
        }
    }

    for &e in &stubs {
        let edge = *graph.edge(e);
        let v = edge.u;
        let p = positions[v];
        let dir = slot_dir[2 * e];
        let mut len = (clearance[v] / 2.0).min(STUB_CAP * diam);
        // Incident arcs may curve back across the stub direction. A circle
        // through p meets the ray p + t·dir again at t = 2 (c − p)·dir; a
        // dart opposite the stub gives t = 0 up to rounding.
        for &d in graph.rotation(v) {
            let f = dart_edge(d);
            if f >= fixed {
                continue;
            }
            if let Some(c) = arcs[f].circle() {
                let t = 2.0 * (c.center - p).dot(dir);
                if t > 2e-6 * c.radius && arcs[f].contains(p + dir * t, tol.scaled(diam)) {
                    len = len.min(t / 2.0);
                }
            }
        }
        if len < MIN_STUB * tol.eps_len * diam {
            return Err(degenerate(format!("no room for a stub at vertex {v}")));
        }
        let end = p + dir * len;
        positions[edge.v] = end;
        arcs[e] = Arc::segment(p, end);
    }

    let out = Construction {
        drawing: LombardiDrawing::from_arcs(positions, &arcs),
        graph,
        disk: geo.disk,
        line_circles: geo.lines.iter().map(|l| l.support()).collect(),
        cross_circles: geo.cross,
    };
    self_check(out, tol)
}

/// Rejects constructions that fail validation, which happens only when
/// features come closer than the tolerances.
fn self_check(c: Construction, tol: Tolerance) -> Result<Construction, DrawingError> {
    let report = validate(&c.graph, &c.drawing, None, tol, ValidateOptions::default())?;
    if report.passed() {
        Ok(c)
    } else {
        Err(degenerate(format!("drawing fails {}", report.failed().join(", "))))
    }
}

/// Runs `build` on `lines`, and on degenerate configurations on seeded
/// perturbations of them with the same description, up to `retries` times.
/// Returns the result together with the lines that produced it.
pub fn with_retries<T>(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    tol: Tolerance,
    retries: usize,
    seed: u64,
    mut build: impl FnMut(&[EuclideanLine]) -> Result<T, DrawingError>,
) -> Result<(T, Vec<EuclideanLine>), DrawingError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = lines.to_vec();
    let mut attempt = 0;
    loop {
        match build(&current) {
            Err(DrawingError::DegenerateConfiguration(msg)) => {
                if attempt == retries {
                    return Err(DrawingError::DegenerateConfiguration(msg));
                }
                attempt += 1;
                current = perturb(lines, d, tol, &mut rng)?;
            }
            other => return other.map(|t| (t, current)),
        }
    }
}

/// Random nearby lines with description `d`.
fn perturb(
    lines: &[EuclideanLine],
    d: &CombinatorialDescription,
    tol: Tolerance,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<EuclideanLine>, DrawingError> {
    let mut sigma = PERTURBATION;
    for _ in 0..40 {
        let moved: Vec<EuclideanLine> = lines
            .iter()
            .map(|l| {
                EuclideanLine::new(
                    l.a + sigma * (1.0 + l.a.abs()) * rng.gen_range(-1.0..1.0),
                    l.b + sigma * (1.0 + l.b.abs()) * rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        if describe(&moved, tol).ok().as_ref() == Some(d) {
            return Ok(moved);
        }
        sigma /= 2.0;
    }
    Err(degenerate("no perturbation keeps the description"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::{validate, ValidateOptions};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn two_lines() -> (Vec<EuclideanLine>, CombinatorialDescription) {
        let lines = vec![EuclideanLine::new(1.0, 0.0), EuclideanLine::new(-1.0, 1.0)];
        let d = crate::arrangement::describe(&lines, tol()).unwrap();
        (lines, d)
    }

    #[test]
    fn restricted_two_lines_validates() {
        let (lines, d) = two_lines();
        let c = construct_restricted(&lines, &d, tol()).unwrap();
        assert_eq!(c.drawing.positions.len(), 8);
        let on_disk = c
            .drawing
            .positions
            .iter()
            .filter(|p| (p.distance(c.disk.center) - c.disk.radius).abs() < 1e-9)
            .count();
        assert_eq!(on_disk, 4);
        let report = validate(&c.graph, &c.drawing, None, tol(), ValidateOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.angle_residual() < 1e-9);
    }

    #[test]
    fn full_two_lines_validates() {
        let (lines, d) = two_lines();
        let c = construct_full(&lines, &d, tol()).unwrap();
        assert_eq!(c.drawing.positions.len(), 32);
        let report = validate(&c.graph, &c.drawing, None, tol(), ValidateOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn mismatched_lines_rejected() {
        let (lines, _) = two_lines();
        let wrong = CombinatorialDescription::from_one_based(vec![vec![2, 3], vec![1, 3], vec![1, 2]]).unwrap();
        assert!(matches!(
            construct_restricted(&lines, &wrong, tol()),
            Err(DrawingError::DescriptionMismatch { .. })
        ));
    }
}
