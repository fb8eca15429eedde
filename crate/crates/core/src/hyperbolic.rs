//! Disk models of the hyperbolic plane.
//!
//! Beltrami–Klein lines are chords of the disk, Poincaré lines are arcs
//! orthogonal to its boundary, and the two models share ideal points. A
//! Euclidean line arrangement becomes a Klein arrangement by clipping every
//! line to a disk containing all crossings.

use thiserror::Error;

use crate::arrangement::{CombinatorialDescription, EuclideanLine};
use crate::geom::{Arc, ArcContact, Circle, Point, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperbolicError {
    #[error("chord is a diameter of the disk")]
    DiameterChord,
    #[error("ideal point {0} is not on the disk boundary")]
    OffBoundary(Point),
    #[error("support circle is not orthogonal to the disk (relative residual {0:e})")]
    NotOrthogonal(f64),
    #[error("hyperbolic line must be a circular arc")]
    SegmentLine,
    #[error("ideal endpoints coincide")]
    CoincidentEndpoints,
    #[error("lines {} and {} are parallel", .0 + 1, .1 + 1)]
    ParallelLines(usize, usize),
    #[error("lines {} and {} meet line {} in a common point", .0 + 1, .1 + 1, .2 + 1)]
    ConcurrentTriple(usize, usize, usize),
    #[error("line {} misses the disk", .0 + 1)]
    MissesDisk(usize),
}

/// Fraction of the disk radius kept free around all crossings.
pub const DISK_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskModel {
    pub disk: Circle,
}

impl DiskModel {
    pub fn new(disk: Circle) -> Self {
        DiskModel { disk }
    }

    fn on_boundary(&self, p: Point, tol: Tolerance) -> bool {
        (p.distance(self.disk.center) - self.disk.radius).abs()
            <= tol.eps_len * self.disk.radius.max(1.0)
    }
}

/// A Klein line: the chord from `p` to `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinChord {
    p: Point,
    q: Point,
}

impl KleinChord {
    pub fn new(m: &DiskModel, p: Point, q: Point, tol: Tolerance) -> Result<Self, HyperbolicError> {
        for x in [p, q] {
            if !m.on_boundary(x, tol) {
                return Err(HyperbolicError::OffBoundary(x));
            }
        }
        if p.distance(q) <= tol.eps_len * m.disk.radius {
            return Err(HyperbolicError::CoincidentEndpoints);
        }
        Ok(KleinChord { p, q })
    }

    pub fn p(&self) -> Point {
        self.p
    }

    pub fn q(&self) -> Point {
        self.q
    }
}

/// A Poincaré line: an arc inside the disk on a circle orthogonal to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoincareLine {
    arc: Arc,
}

/// `|d² − r² − R²|` relative to the larger squared radius.
pub fn orthogonality_residual(disk: Circle, support: Circle) -> f64 {
    let d2 = (support.center - disk.center).norm_sq();
    let r2 = disk.radius * disk.radius;
    let s2 = support.radius * support.radius;
    (d2 - r2 - s2).abs() / r2.max(s2)
}

impl PoincareLine {
    /// Checks that `arc` is orthogonal to the disk with ideal endpoints.
    /// `ortho_tol` bounds the relative orthogonality residual.
    pub fn new(
        m: &DiskModel,
        arc: Arc,
        ortho_tol: f64,
        tol: Tolerance,
    ) -> Result<Self, HyperbolicError> {
        let support = arc.circle().ok_or(HyperbolicError::SegmentLine)?;
        for x in [arc.p(), arc.q()] {
            if !m.on_boundary(x, tol) {
                return Err(HyperbolicError::OffBoundary(x));
            }
        }
        let res = orthogonality_residual(m.disk, support);
        if res > ortho_tol {
            return Err(HyperbolicError::NotOrthogonal(res));
        }
        Ok(PoincareLine { arc })
    }

    pub fn arc(&self) -> &Arc {
        &self.arc
    }

    pub fn support(&self) -> Circle {
        self.arc.circle().expect("validated circular")
    }

    pub fn p(&self) -> Point {
        self.arc.p()
    }

    pub fn q(&self) -> Point {
        self.arc.q()
    }
}

/// The Poincaré line with the same ideal points as `ch`.
pub fn klein_to_poincare(
    m: &DiskModel,
    ch: &KleinChord,
    tol: Tolerance,
) -> Result<PoincareLine, HyperbolicError> {
    let c = m.disk.center;
    let r = m.disk.radius;
    let p1 = (ch.p - c) / r;
    let q1 = (ch.q - c) / r;
    let det = p1.cross(q1);
    if det.abs() <= tol.eps_ang {
        return Err(HyperbolicError::DiameterChord);
    }
    // z·p1 = z·q1 = 1: the pole of the chord.
    let z = Point::new(q1.y - p1.y, p1.x - q1.x) / det;
    let support = Circle {
        center: c + z * r,
        radius: r * (z - p1).norm(),
    };
    let toward_center = (c - support.center).normalized();
    let via = support.center + toward_center * support.radius;
    Ok(PoincareLine {
        arc: Arc::on_circle_through(support, ch.p, ch.q, via),
    })
}

/// The Klein chord with the same ideal points as `pl`.
pub fn poincare_to_klein(pl: &PoincareLine) -> KleinChord {
    KleinChord {
        p: pl.p(),
        q: pl.q(),
    }
}

/// Crossing points of every pair of lines, checking the arrangement is simple.
pub fn line_crossings(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<Vec<Point>, HyperbolicError> {
    let n = lines.len();
    let mut pts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (lines[i].a - lines[j].a).abs() <= tol.eps_ang {
                return Err(HyperbolicError::ParallelLines(i, j));
            }
            let x = lines[i].crossing_x(&lines[j]);
            let p = Point::new(x, lines[i].y_at(x));
            for (k, l) in lines.iter().enumerate() {
                if k != i && k != j {
                    let scale = p.x.abs().max(p.y.abs()).max(1.0);
                    if (l.y_at(p.x) - p.y).abs() <= tol.eps_len * scale * (1.0 + l.a.abs()) {
                        let mut t = [i, j, k];
                        t.sort_unstable();
                        return Err(HyperbolicError::ConcurrentTriple(t[0], t[1], t[2]));
                    }
                }
            }
            pts.push(p);
        }
    }
    Ok(pts)
}

/// Klein model of a Euclidean arrangement: a disk centered at the centroid
/// of all crossings, large enough to keep every crossing at least
/// [`DISK_MARGIN`] of its radius away from the boundary.
pub fn lines_to_klein(
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<(DiskModel, Vec<KleinChord>), HyperbolicError> {
    let pts = line_crossings(lines, tol)?;
    let center = if pts.is_empty() {
        Point::ORIGIN
    } else {
        pts.iter().fold(Point::ORIGIN, |acc, p| acc + *p) / pts.len() as f64
    };
    let disk = enclosing_disk(&pts, center);
    let m = DiskModel::new(disk);
    let chords = clip_lines(&m, lines, tol)?;
    Ok((m, chords))
}

/// Disk around `center` keeping the [`DISK_MARGIN`] around all `pts`.
pub fn enclosing_disk(pts: &[Point], center: Point) -> Circle {
    let far = pts.iter().map(|p| p.distance(center)).fold(0.0, f64::max);
    let radius = if far > 0.0 {
        far / (1.0 - DISK_MARGIN)
    } else {
        1.0
    };
    Circle { center, radius }
}

/// Clips every line to the disk; chords run in increasing x.
pub fn clip_lines(
    m: &DiskModel,
    lines: &[EuclideanLine],
    tol: Tolerance,
) -> Result<Vec<KleinChord>, HyperbolicError> {
    let c = m.disk.center;
    let r = m.disk.radius;
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let dir = Point::new(1.0, l.a).normalized();
            let base = Point::new(0.0, l.b);
            let foot = base + dir * (c - base).dot(dir);
            let h = foot.distance(c);
            if h >= r {
                return Err(HyperbolicError::MissesDisk(i));
            }
            let half = ((r - h) * (r + h)).sqrt();
            KleinChord::new(m, foot - dir * half, foot + dir * half, tol)
        })
        .collect()
}

/// Crossing pattern of an arrangement given by a pairwise crossing oracle.
///
/// `cross(i, j)` returns the travel parameters of the crossing along `i`
/// and `j`, or `None` when the two do not cross.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingOrder {
    pub lists: Vec<Vec<usize>>,
    pub missing: Vec<(usize, usize)>,
}

impl CrossingOrder {
    pub fn description(&self) -> Option<CombinatorialDescription> {
        self.missing
            .is_empty()
            .then(|| CombinatorialDescription::new(self.lists.clone()))
    }

    fn from_oracle(n: usize, mut cross: impl FnMut(usize, usize) -> Option<(f64, f64)>) -> Self {
        let mut params: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
        let mut missing = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match cross(i, j) {
                    Some((ti, tj)) => {
                        params[i].push((ti, j));
                        params[j].push((tj, i));
                    }
                    None => missing.push((i, j)),
                }
            }
        }
        let lists = params
            .into_iter()
            .map(|mut v| {
                v.sort_by(|a, b| a.0.total_cmp(&b.0));
                v.into_iter().map(|(_, j)| j).collect()
            })
            .collect();
        CrossingOrder { lists, missing }
    }
}

/// Crossing order of Klein chords, each read from `p` to `q`.
pub fn klein_crossing_order(chords: &[KleinChord]) -> CrossingOrder {
    CrossingOrder::from_oracle(chords.len(), |i, j| {
        let (a, b) = (&chords[i], &chords[j]);
        let d1 = a.q - a.p;
        let d2 = b.q - b.p;
        let den = d1.cross(d2);
        if den == 0.0 {
            return None;
        }
        let s = (b.p - a.p).cross(d2) / den;
        let t = (b.p - a.p).cross(d1) / den;
        ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t)).then_some((s, t))
    })
}

/// Crossing order of Poincaré lines inside the disk, each read from `p`
/// to `q`. Pairs that do not cross inside the disk are reported as missing.
pub fn hyperbolic_crossing_order(
    m: &DiskModel,
    pls: &[PoincareLine],
    tol: Tolerance,
) -> CrossingOrder {
    let scaled = tol.scaled(m.disk.radius.max(1.0));
    CrossingOrder::from_oracle(pls.len(), |i, j| {
        let (a, b) = (pls[i].arc(), pls[j].arc());
        match a.intersect(b, scaled) {
            ArcContact::Points(pts) => pts
                .into_iter()
                .find(|x| x.distance(m.disk.center) < m.disk.radius - scaled.eps_len)
                .map(|x| (a.param_of(x), b.param_of(x))),
            ArcContact::Overlap => None,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::describe_labeled;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn unit() -> DiskModel {
        DiskModel::new(Circle::new(Point::ORIGIN, 1.0).unwrap())
    }

    #[test]
    fn klein_to_poincare_examples() {
        let m = unit();
        let ch = KleinChord::new(&m, Point::new(1.0, 0.0), Point::new(0.0, 1.0), tol()).unwrap();
        let pl = klein_to_poincare(&m, &ch, tol()).unwrap();
        let s = pl.support();
        // Pole of the chord: z with z·p = z·q = 1, and |z|² = 1 + R².
        assert!(s.center.distance(Point::new(1.0, 1.0)) < 1e-15);
        assert!((s.radius - 1.0).abs() < 1e-15);
        assert_eq!(pl.p(), ch.p());
        assert_eq!(pl.q(), ch.q());
        // The arc runs inside the disk.
        assert!(pl.arc().midpoint().norm() < 1.0);

        let ch = KleinChord::new(&m, Point::new(1.0, 0.0), Point::new(-1.0, 0.0), tol()).unwrap();
        assert_eq!(klein_to_poincare(&m, &ch, tol()), Err(HyperbolicError::DiameterChord));

        let ch = KleinChord::new(&m, Point::new(0.0, 1.0), Point::new(-1.0, 0.0), tol()).unwrap();
        let s = klein_to_poincare(&m, &ch, tol()).unwrap().support();
        assert!(s.center.distance(Point::new(-1.0, 1.0)) < 1e-15);
        assert!((s.radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn poincare_to_klein_round_trip() {
        let m = unit();
        let ch = KleinChord::new(&m, Point::new(1.0, 0.0), Point::new(0.0, 1.0), tol()).unwrap();
        let back = poincare_to_klein(&klein_to_poincare(&m, &ch, tol()).unwrap());
        assert_eq!(back, ch);

        // Nearly diametral line with support radius 1000.
        let r = 1000.0;
        let support = Circle::new(Point::new(0.0, (1.0f64 + r * r).sqrt()), r).unwrap();
        let hits = crate::geom::circle_circle_intersections(m.disk, support, tol()).unwrap();
        let arc = Arc::on_circle_through(support, hits[0], hits[1], Point::new(0.0, support.center.y - r));
        let pl = PoincareLine::new(&m, arc, 1e-9, tol()).unwrap();
        let ch = poincare_to_klein(&pl);
        assert_eq!((ch.p(), ch.q()), (hits[0], hits[1]));

        let off = Arc::segment(Point::new(0.5, 0.0), Point::new(0.0, 0.5));
        assert!(PoincareLine::new(&m, off, 1e-9, tol()).is_err());
        assert!(KleinChord::new(&m, Point::new(0.5, 0.0), Point::new(0.0, 1.0), tol()).is_err());
    }

    fn three_lines() -> Vec<EuclideanLine> {
        vec![
            EuclideanLine::new(2.0, 0.0),
            EuclideanLine::new(1.0, 1.0),
            EuclideanLine::new(0.0, 3.0),
        ]
    }

    #[test]
    fn lines_to_klein_examples() {
        let lines = three_lines();
        let (m, chords) = lines_to_klein(&lines, tol()).unwrap();
        for p in [Point::new(1.0, 2.0), Point::new(1.5, 3.0), Point::new(2.0, 3.0)] {
            assert!(p.distance(m.disk.center) <= (1.0 - DISK_MARGIN) * m.disk.radius + 1e-12);
        }
        let expected = describe_labeled(&lines, tol()).unwrap();
        assert_eq!(klein_crossing_order(&chords).description(), Some(expected));

        let (m, chords) =
            lines_to_klein(&[EuclideanLine::new(0.0, 0.0), EuclideanLine::new(1.0, 0.0)], tol()).unwrap();
        assert_eq!(m.disk.center, Point::ORIGIN);
        assert_eq!(klein_crossing_order(&chords).lists, vec![vec![1], vec![0]]);

        assert_eq!(
            lines_to_klein(&[EuclideanLine::new(0.0, 0.0), EuclideanLine::new(0.0, 1.0)], tol()),
            Err(HyperbolicError::ParallelLines(0, 1))
        );
    }

    #[test]
    fn hyperbolic_order_examples() {
        let lines = three_lines();
        let (m, chords) = lines_to_klein(&lines, tol()).unwrap();
        let pls: Vec<_> = chords
            .iter()
            .map(|c| klein_to_poincare(&m, c, tol()).unwrap())
            .collect();
        let order = hyperbolic_crossing_order(&m, &pls, tol());
        assert_eq!(order.lists, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
        assert!(order.missing.is_empty());

        let m = unit();
        let chord = |a: f64, b: f64| {
            let ch = KleinChord::new(&m, Point::from_angle(a), Point::from_angle(b), tol()).unwrap();
            klein_to_poincare(&m, &ch, tol()).unwrap()
        };
        let crossing = [chord(3.0, 0.2), chord(2.0, 5.0)];
        let order = hyperbolic_crossing_order(&m, &crossing, tol());
        assert_eq!(order.lists, vec![vec![1], vec![0]]);
        let apart = [chord(0.1, 1.0), chord(2.0, 3.0)];
        let order = hyperbolic_crossing_order(&m, &apart, tol());
        assert_eq!(order.missing, vec![(0, 1)]);
        assert_eq!(order.description(), None);
    }
}
