use std::f64::consts::PI;

use lombardi_core::arrangement::{describe, describe_labeled, label_lines, EuclideanLine};
use lombardi_core::files::{from_json, to_json, DrawingFile, EdgeShape};
use lombardi_core::geom::{
    angle_between, arc_from_endpoint_tangent, circle_circle_intersections, invert_arc, invert_finite,
    tangent_direction, Circle, Point, Tolerance,
};
use lombardi_core::hyperbolic::{klein_crossing_order, lines_to_klein};
use lombardi_core::reduction::{build_core, build_full, description_of, full_counts};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn point(range: f64) -> impl Strategy<Value = Point> {
    (-range..range, -range..range).prop_map(|(x, y)| Point::new(x, y))
}

fn circle() -> impl Strategy<Value = Circle> {
    (point(5.0), 0.1..5.0f64).prop_map(|(c, r)| Circle::new(c, r).unwrap())
}

fn lines(n: usize) -> impl Strategy<Value = Vec<EuclideanLine>> {
    prop::collection::vec((-3.0..3.0f64, -2.0..2.0f64), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| EuclideanLine::new(a, b)).collect())
        .prop_filter("simple arrangement", |l: &Vec<EuclideanLine>| describe(l, Tolerance::default()).is_ok())
}

proptest! {
    #[test]
    fn inversion_is_an_involution(c in circle(), p in point(10.0)) {
        prop_assume!(p.distance(c.center) > 1e-3);
        let once = invert_finite(c, p).unwrap();
        let twice = invert_finite(c, once).unwrap();
        prop_assert!(twice.distance(p) <= 1e-9 * p.norm().max(1.0));
        // Distance product equals r².
        let prod = p.distance(c.center) * once.distance(c.center);
        prop_assert!((prod - c.radius * c.radius).abs() <= 1e-9 * c.radius * c.radius);
    }

    #[test]
    fn inversion_preserves_angle_magnitude(
        c in circle(),
        u in point(3.0),
        t1 in 0.0..2.0 * PI,
        t2 in 0.0..2.0 * PI,
        w1 in point(3.0),
        w2 in point(3.0),
    ) {
        prop_assume!(u.distance(c.center) > 0.2 && w1.distance(c.center) > 0.2 && w2.distance(c.center) > 0.2);
        prop_assume!(u.distance(w1) > 0.2 && u.distance(w2) > 0.2);
        let d1 = Point::from_angle(t1);
        let d2 = Point::from_angle(t2);
        let a1 = arc_from_endpoint_tangent(u, w1, d1, tol());
        let a2 = arc_from_endpoint_tangent(u, w2, d2, tol());
        let (Ok(a1), Ok(a2)) = (a1, a2) else { return Ok(()) };
        // Avoid arcs passing near the center, whose images blow up.
        prop_assume!(a1.distance_to(c.center) > 0.2 && a2.distance_to(c.center) > 0.2);
        let before = angle_between(d1, d2);
        let i1 = invert_arc(c, &a1, tol()).unwrap();
        let i2 = invert_arc(c, &a2, tol()).unwrap();
        let iu = invert_finite(c, u).unwrap();
        let scaled = tol().scaled(1e4);
        let e1 = tangent_direction(&i1, iu, scaled).unwrap();
        let e2 = tangent_direction(&i2, iu, scaled).unwrap();
        let after = angle_between(e1, e2);
        // Orientation flips, so the ccw angle becomes 2π minus itself.
        let gap = (after - (2.0 * PI - before)).rem_euclid(2.0 * PI);
        prop_assert!(gap.min(2.0 * PI - gap) < 1e-7, "before {before} after {after}");
    }

    #[test]
    fn circle_intersections_satisfy_both_equations(c1 in circle(), c2 in circle()) {
        if let Ok(pts) = circle_circle_intersections(c1, c2, tol()) {
            for p in pts {
                for c in [c1, c2] {
                    let lhs = (p - c.center).norm_sq();
                    prop_assert!((lhs - c.radius * c.radius).abs() < 1e-6 * c.radius.max(1.0).powi(2));
                }
            }
        }
    }

    #[test]
    fn description_ignores_translation_and_scale(
        ls in lines(4),
        dx in -5.0..5.0f64,
        dy in -5.0..5.0f64,
        k in 0.1..10.0f64,
    ) {
        let d = describe(&ls, tol()).unwrap();
        let moved: Vec<EuclideanLine> = ls
            .iter()
            .map(|l| EuclideanLine::new(l.a, k * (l.b + dy - l.a * dx)))
            .collect();
        prop_assert_eq!(describe(&moved, tol()).unwrap(), d);
    }

    #[test]
    fn klein_chords_keep_the_crossing_pattern(ls in lines(5)) {
        let labeled = label_lines(&ls, tol()).unwrap();
        let (_, chords) = lines_to_klein(&labeled, tol()).unwrap();
        prop_assert_eq!(
            klein_crossing_order(&chords).description(),
            Some(describe_labeled(&labeled, tol()).unwrap())
        );
    }

    #[test]
    fn core_graph_is_four_regular_and_encodes_its_description(ls in lines(4)) {
        let d = describe(&ls, tol()).unwrap();
        let n = d.n();
        let g = build_core(&d).unwrap();
        prop_assert_eq!(g.vertex_count(), 2 * n * n);
        prop_assert_eq!(g.edge_count(), 4 * n * n);
        prop_assert!((0..g.vertex_count()).all(|v| g.degree(v) == 4));
        prop_assert_eq!(description_of(&g).unwrap(), d);
    }

    #[test]
    fn full_graph_matches_closed_form(ls in lines(3)) {
        let d = describe(&ls, tol()).unwrap();
        let g = build_full(&d).unwrap();
        let counts = full_counts(3);
        prop_assert_eq!(g.vertex_count(), counts.vertices);
        prop_assert_eq!(g.edge_count(), counts.edges);
        prop_assert_eq!(description_of(&g).unwrap(), d);
    }

    #[test]
    fn drawing_file_round_trips_exactly(
        xs in prop::collection::vec((any::<f64>(), any::<f64>()), 0..6),
        arcs in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64, 1e-6..1e6f64, -7.0..7.0f64, -7.0..7.0f64, any::<bool>()), 0..6),
    ) {
        let file = DrawingFile {
            vertices: xs
                .iter()
                .enumerate()
                .filter(|(_, (x, y))| x.is_finite() && y.is_finite())
                .map(|(i, (x, y))| (i, [*x, *y]))
                .collect(),
            edges: arcs
                .iter()
                .enumerate()
                .map(|(i, &(cx, cy, r, a0, a1, ccw))| {
                    let shape = if i % 3 == 2 { EdgeShape::Segment } else { EdgeShape::Arc { cx, cy, r, a0, a1, ccw } };
                    (i, shape)
                })
                .collect(),
        };
        let text = to_json(&file).unwrap();
        let back: DrawingFile = from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(to_json(&back).unwrap(), text);
    }
}
