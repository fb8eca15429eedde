//! JSON file formats for arrangements, lines, graphs and drawings.
//!
//! Floats are written with 17 significant digits so that every file reads
//! back to the same bits. Maps keyed by vertex or edge id are written in
//! increasing id order.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use thiserror::Error;

use crate::arrangement::{CombinatorialDescription, EuclideanLine};
use crate::drawing::{EdgeGeometry, LombardiDrawing};
use crate::geom::{Circle, Point};
use crate::reduction::{Edge, RotGraph};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid contents: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementFile {
    pub n: usize,
    pub lists: Vec<Vec<usize>>,
}

impl ArrangementFile {
    pub fn from_description(d: &CombinatorialDescription) -> Self {
        ArrangementFile {
            n: d.n(),
            lists: d.to_one_based(),
        }
    }

    pub fn to_description(&self) -> Result<CombinatorialDescription, FileError> {
        if self.lists.len() != self.n {
            return Err(FileError::Invalid(format!(
                "n = {} but {} lists given",
                self.n,
                self.lists.len()
            )));
        }
        CombinatorialDescription::from_one_based(self.lists.clone())
            .map_err(|e| FileError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineRecord {
    pub a: f64,
    pub b: f64,
}

pub fn lines_to_records(lines: &[EuclideanLine]) -> Vec<LineRecord> {
    lines.iter().map(|l| LineRecord { a: l.a, b: l.b }).collect()
}

pub fn records_to_lines(records: &[LineRecord]) -> Vec<EuclideanLine> {
    records.iter().map(|r| EuclideanLine::new(r.a, r.b)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub tag: String,
}

/// Rotation lists name edges; the dart at a vertex is the end of that edge
/// lying there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    pub rotation: BTreeMap<usize, Vec<usize>>,
}

impl GraphFile {
    pub fn from_graph(g: &RotGraph) -> Self {
        let vertices = g
            .roles()
            .iter()
            .enumerate()
            .map(|(id, r)| VertexRecord { id, role: r.to_string() })
            .collect();
        let edges = g
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeRecord {
                id,
                u: e.u,
                v: e.v,
                tag: e.tag.to_string(),
            })
            .collect();
        let rotation = g
            .rotations()
            .iter()
            .enumerate()
            .map(|(v, rot)| (v, rot.iter().map(|d| d / 2).collect()))
            .collect();
        GraphFile {
            vertices,
            edges,
            rotation,
        }
    }

    pub fn to_graph(&self) -> Result<RotGraph, FileError> {
        let mut vertices = self.vertices.clone();
        vertices.sort_by_key(|v| v.id);
        if vertices.iter().enumerate().any(|(k, v)| v.id != k) {
            return Err(FileError::Invalid("vertex ids are not 0..n".into()));
        }
        let mut edge_recs = self.edges.clone();
        edge_recs.sort_by_key(|e| e.id);
        if edge_recs.iter().enumerate().any(|(k, e)| e.id != k) {
            return Err(FileError::Invalid("edge ids are not 0..m".into()));
        }
        let roles = vertices
            .iter()
            .map(|v| v.role.parse().map_err(|e: crate::reduction::ParseLabelError| FileError::Invalid(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = edge_recs
            .iter()
            .map(|e| {
                Ok(Edge {
                    u: e.u,
                    v: e.v,
                    tag: e.tag.parse().map_err(|err: crate::reduction::ParseLabelError| FileError::Invalid(err.to_string()))?,
                })
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let mut rotation = vec![Vec::new(); roles.len()];
        for (&v, ids) in &self.rotation {
            let slot = rotation
                .get_mut(v)
                .ok_or_else(|| FileError::Invalid(format!("rotation for unknown vertex {v}")))?;
            for &e in ids {
                let edge = edges
                    .get(e)
                    .ok_or_else(|| FileError::Invalid(format!("rotation of {v} names unknown edge {e}")))?;
                let dart = if edge.u == v {
                    2 * e
                } else if edge.v == v {
                    2 * e + 1
                } else {
                    return Err(FileError::Invalid(format!("edge {e} is not incident to vertex {v}")));
                };
                slot.push(dart);
            }
        }
        RotGraph::from_parts(roles, edges, rotation).map_err(|e| FileError::Invalid(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EdgeShape {
    Arc {
        cx: f64,
        cy: f64,
        r: f64,
        a0: f64,
        a1: f64,
        ccw: bool,
    },
    Segment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DrawingFile {
    pub vertices: BTreeMap<usize, [f64; 2]>,
    pub edges: BTreeMap<usize, EdgeShape>,
}

impl DrawingFile {
    pub fn from_drawing(d: &LombardiDrawing) -> Self {
        let vertices = d.positions.iter().enumerate().map(|(v, p)| (v, [p.x, p.y])).collect();
        let edges = d
            .edges
            .iter()
            .enumerate()
            .map(|(e, g)| {
                let shape = match *g {
                    EdgeGeometry::Arc { circle, a0, a1, ccw } => EdgeShape::Arc {
                        cx: circle.center.x,
                        cy: circle.center.y,
                        r: circle.radius,
                        a0,
                        a1,
                        ccw,
                    },
                    EdgeGeometry::Segment => EdgeShape::Segment,
                };
                (e, shape)
            })
            .collect();
        DrawingFile { vertices, edges }
    }

    pub fn to_drawing(&self) -> Result<LombardiDrawing, FileError> {
        let dense = |keys: Vec<usize>, what: &str| {
            if keys.iter().enumerate().any(|(k, id)| *id != k) {
                Err(FileError::Invalid(format!("{what} ids are not 0..n")))
            } else {
                Ok(())
            }
        };
        dense(self.vertices.keys().copied().collect(), "vertex")?;
        dense(self.edges.keys().copied().collect(), "edge")?;
        let positions = self.vertices.values().map(|&[x, y]| Point::new(x, y)).collect();
        let edges = self
            .edges
            .values()
            .map(|s| match *s {
                EdgeShape::Arc { cx, cy, r, a0, a1, ccw } => {
                    let circle = Circle::new(Point::new(cx, cy), r).map_err(|e| FileError::Invalid(e.to_string()))?;
                    Ok(EdgeGeometry::Arc { circle, a0, a1, ccw })
                }
                EdgeShape::Segment => Ok(EdgeGeometry::Segment),
            })
            .collect::<Result<_, FileError>>()?;
        Ok(LombardiDrawing { positions, edges })
    }
}

/// Pretty JSON with floats in `{:.16e}` form.
struct ExactFloats<'a>(PrettyFormatter<'a>);

impl Formatter for ExactFloats<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, FileError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ExactFloats(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FileError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FileError> {
    let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_json(&text)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    std::fs::write(path, to_json(value)?).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}
