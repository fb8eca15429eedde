//! Lombardi drawings: data model, constructors, validator and extraction.

mod construct;
mod extract;
mod triangle;
mod validate;

pub use construct::{construct_full, construct_restricted, with_retries, Construction};
pub use extract::{check_circle_forcing, extract_description};
pub use triangle::{arc_triangle_angles, check_midpoint_on_circle, ArcTriangle, BigonAngles, TriangleAngles};
pub use validate::{validate, AngleAssignment, CheckResult, ValidateOptions, ValidationReport};

use thiserror::Error;

use crate::arrangement::ArrangementError;
use crate::geom::{invert_arc, invert_finite, Arc, Circle, GeomError, Point, Tolerance};
use crate::reduction::{ReductionError, RotGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DrawingError {
    #[error("lines describe {found}, expected {expected}")]
    DescriptionMismatch { expected: String, found: String },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("gadget edge {edge} misses its slot direction by {residual:e} rad")]
    SlotTangentMismatch { edge: usize, residual: f64 },
    #[error("drawing does not match the graph: {0}")]
    CoverageMismatch(String),
    #[error("circle fit failed: {0}")]
    CircleFitFailure(String),
    #[error("support of path {} is not orthogonal to the boundary circle (residual {residual:e})", .line + 1)]
    NonOrthogonalSupport { line: usize, residual: f64 },
    #[error("lines {} and {} do not cross inside the disk", .0 + 1, .1 + 1)]
    MissingCrossing(usize, usize),
    #[error("arc-triangle is not simple")]
    NotSimple,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("vertex {0} lies at the inversion center")]
    VertexAtCenter(usize),
    #[error("edge {0} passes through the inversion center")]
    EdgeThroughCenter(usize),
    #[error("edge {0} is drawn as a segment")]
    SegmentEdge(usize),
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// Geometry of one edge. Segments take their endpoints from the vertex
/// placements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeGeometry {
    Arc {
        circle: Circle,
        a0: f64,
        a1: f64,
        ccw: bool,
    },
    Segment,
}

impl EdgeGeometry {
    pub fn from_arc(arc: &Arc) -> Self {
        match (arc.circle(), arc.angles()) {
            (Some(circle), Some((a0, a1, ccw))) => EdgeGeometry::Arc { circle, a0, a1, ccw },
            _ => EdgeGeometry::Segment,
        }
    }
}

/// Vertex placements and edge geometry, indexed like the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct LombardiDrawing {
    pub positions: Vec<Point>,
    pub edges: Vec<EdgeGeometry>,
}

impl LombardiDrawing {
    pub fn from_arcs(positions: Vec<Point>, arcs: &[Arc]) -> Self {
        LombardiDrawing {
            positions,
            edges: arcs.iter().map(EdgeGeometry::from_arc).collect(),
        }
    }

    pub fn covers(&self, g: &RotGraph) -> Result<(), DrawingError> {
        if self.positions.len() != g.vertex_count() || self.edges.len() != g.edge_count() {
            return Err(DrawingError::CoverageMismatch(format!(
                "drawing has {} vertices and {} edges, graph has {} and {}",
                self.positions.len(),
                self.edges.len(),
                g.vertex_count(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// Edge `e` as an arc directed from its `u` end to its `v` end.
    pub fn arc(&self, g: &RotGraph, e: usize) -> Arc {
        match self.edges[e] {
            EdgeGeometry::Arc { circle, a0, a1, ccw } => Arc::from_angles(circle, a0, a1, ccw),
            EdgeGeometry::Segment => {
                let edge = g.edge(e);
                Arc::segment(self.positions[edge.u], self.positions[edge.v])
            }
        }
    }

    pub fn arcs(&self, g: &RotGraph) -> Vec<Arc> {
        (0..self.edges.len()).map(|e| self.arc(g, e)).collect()
    }

    /// Diagonal of the bounding box of all vertices and edges.
    pub fn scene_diameter(&self, g: &RotGraph) -> f64 {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut add = |p: Point| {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for p in &self.positions {
            add(*p);
        }
        for e in 0..self.edges.len() {
            let (a, b) = self.arc(g, e).bbox();
            add(a);
            add(b);
        }
        if lo.x > hi.x {
            0.0
        } else {
            (hi - lo).norm()
        }
    }

    /// Diagonal of the bounding box of the vertex placements. Length
    /// tolerances scale with this, so that long arcs far from the vertices
    /// do not coarsen them.
    pub fn vertex_diameter(&self) -> f64 {
        let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.positions {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if lo.x > hi.x {
            0.0
        } else {
            (hi - lo).norm()
        }
    }

    /// Copy with vertex `v` placed at `p`; edge geometry is kept, except
    /// that segments follow their endpoints.
    pub fn with_vertex_moved(&self, v: usize, p: Point) -> Self {
        let mut out = self.clone();
        out.positions[v] = p;
        out
    }

    /// Largest distance between corresponding vertices or arc sample
    /// points, relative to the scene diameter of `self`.
    pub fn relative_difference(&self, other: &LombardiDrawing, g: &RotGraph) -> f64 {
        let diam = self.scene_diameter(g).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for (a, b) in self.positions.iter().zip(&other.positions) {
            worst = worst.max(a.distance(*b));
        }
        for e in 0..self.edges.len().min(other.edges.len()) {
            let (a, b) = (self.arc(g, e), other.arc(g, e));
            for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
                worst = worst.max(a.point_at(t).distance(b.point_at(t)));
            }
        }
        worst / diam
    }
}

/// Image of a drawing under inversion in `c`.
pub fn apply_inversion(
    g: &RotGraph,
    drawing: &LombardiDrawing,
    c: Circle,
    tol: Tolerance,
) -> Result<LombardiDrawing, DrawingError> {
    drawing.covers(g)?;
    let scaled = tol.scaled(drawing.scene_diameter(g).max(1.0));
    let mut positions = Vec::with_capacity(drawing.positions.len());
    for (v, p) in drawing.positions.iter().enumerate() {
        if p.distance(c.center) <= scaled.eps_len {
            return Err(DrawingError::VertexAtCenter(v));
        }
        positions.push(invert_finite(c, *p).map_err(|_| DrawingError::VertexAtCenter(v))?);
    }
    let mut edges = Vec::with_capacity(drawing.edges.len());
    for e in 0..drawing.edges.len() {
        let img = match invert_arc(c, &drawing.arc(g, e), scaled) {
            Ok(a) => a,
            Err(GeomError::ArcThroughCenter) | Err(GeomError::PointAtCenter) => {
                return Err(DrawingError::EdgeThroughCenter(e))
            }
            Err(other) => return Err(DrawingError::DegenerateConfiguration(other.to_string())),
        };
        edges.push(EdgeGeometry::from_arc(&img));
    }
    Ok(LombardiDrawing { positions, edges })
}
