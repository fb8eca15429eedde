use lombardi_core::arrangement::{describe, EuclideanLine};
use lombardi_core::drawing::{
    apply_inversion, check_circle_forcing, construct_full, construct_restricted, extract_description, validate,
    with_retries, ValidateOptions,
};
use lombardi_core::geom::{Circle, Point, Tolerance};
use lombardi_core::reduction::{full_counts, layout_of};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_lines(n: usize, rng: &mut ChaCha8Rng) -> Vec<EuclideanLine> {
    loop {
        let lines: Vec<EuclideanLine> = (0..n)
            .map(|_| EuclideanLine::new(rng.gen_range(-3.0..3.0), rng.gen_range(-2.0..2.0)))
            .collect();
        if describe(&lines, tol()).is_ok() {
            return lines;
        }
    }
}

#[test]
fn random_full_drawings_validate_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5 {
        for _ in 0..25 {
            let lines = random_lines(n, &mut rng);
            let d = describe(&lines, tol()).unwrap();
            let (c, _) = with_retries(&lines, &d, tol(), 3, 0, |l| construct_full(l, &d, tol()))
                .unwrap_or_else(|e| panic!("{d}: {e}"));
            assert_eq!(c.graph.vertex_count(), full_counts(n).vertices);
            let report = validate(&c.graph, &c.drawing, None, tol(), ValidateOptions::default()).unwrap();
            assert!(report.passed(), "{d}\n{report}");
            assert!(report.angle_residual() < 1e-9);
            assert_eq!(extract_description(&c.graph, &c.drawing, tol()).unwrap(), d);

            let layout = layout_of(&c.graph).unwrap();
            for cyc in layout.gadget_cycles() {
                assert!(check_circle_forcing(&c.graph, &c.drawing, &layout.cycle(cyc), tol()).unwrap());
            }
        }
    }
}

#[test]
fn restricted_drawing_of_three_lines() {
    let lines = vec![
        EuclideanLine::new(1.0, 0.0),
        EuclideanLine::new(-1.0, 1.0),
        EuclideanLine::new(0.2, 0.3),
    ];
    let d = describe(&lines, tol()).unwrap();
    let c = construct_restricted(&lines, &d, tol()).unwrap();
    let report = validate(&c.graph, &c.drawing, None, tol(), ValidateOptions::default()).unwrap();
    assert!(report.passed(), "{report}");
    assert_eq!(extract_description(&c.graph, &c.drawing, tol()).unwrap(), d);
}

#[test]
fn inversion_preserves_validity_and_is_an_involution() {
    let lines = vec![EuclideanLine::new(1.0, 0.0), EuclideanLine::new(-1.0, 1.0)];
    let d = describe(&lines, tol()).unwrap();
    let c = construct_full(&lines, &d, tol()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let diam = c.drawing.scene_diameter(&c.graph);
    for _ in 0..20 {
        let center = c.disk.center
            + Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * (2.0 * c.disk.radius);
        let inv = Circle::new(center, rng.gen_range(0.2..2.0) * diam).unwrap();
        let once = apply_inversion(&c.graph, &c.drawing, inv, tol()).unwrap();
        let report = validate(&c.graph, &once, None, tol(), ValidateOptions::default()).unwrap();
        assert!(report.passed(), "{report}");
        let twice = apply_inversion(&c.graph, &once, inv, tol()).unwrap();
        assert!(c.drawing.relative_difference(&twice, &c.graph) < 1e-10);
    }
}

#[test]
fn vertex_at_inversion_center_rejected() {
    let lines = vec![EuclideanLine::new(1.0, 0.0), EuclideanLine::new(-1.0, 1.0)];
    let d = describe(&lines, tol()).unwrap();
    let c = construct_full(&lines, &d, tol()).unwrap();
    let inv = Circle::new(c.drawing.positions[0], 1.0).unwrap();
    assert!(apply_inversion(&c.graph, &c.drawing, inv, tol()).is_err());
}

#[test]
fn moved_vertex_fails_angular_resolution() {
    let lines = vec![EuclideanLine::new(1.0, 0.0), EuclideanLine::new(-1.0, 1.0)];
    let d = describe(&lines, tol()).unwrap();
    let c = construct_full(&lines, &d, tol()).unwrap();
    let diam = c.drawing.scene_diameter(&c.graph);
    let moved = c
        .drawing
        .with_vertex_moved(0, c.drawing.positions[0] + Point::new(1e-3, 0.0) * diam);
    let report = validate(&c.graph, &moved, None, tol(), ValidateOptions::default()).unwrap();
    assert!(!report.passed());
}

#[test]
fn swapped_darts_fail_rotation() {
    let lines = vec![EuclideanLine::new(1.0, 0.0), EuclideanLine::new(-1.0, 1.0)];
    let d = describe(&lines, tol()).unwrap();
    let c = construct_full(&lines, &d, tol()).unwrap();
    let mut g = c.graph.clone();
    g.swap_darts(0, 0, 1);
    let report = validate(&g, &c.drawing, None, tol(), ValidateOptions::default()).unwrap();
    assert!(!report.passed());
    assert!(report.failed().contains(&"rotation-match"), "{report}");
}
