//! From a combinatorial description to a graph with a rotation system.
//!
//! [`build_core`] produces the 4-regular graph made of the boundary cycle,
//! one path per pseudoline closed by an edge `e_i`, and one 4-cycle per
//! crossing. [`build_full`] adds a circle gadget to each of those cycles and
//! terminates every unused half-edge with a degree-1 stub.
//!
//! Darts: edge `e` has dart `2e` at its `u` end and `2e + 1` at its `v`
//! end, so the twin of dart `d` is `d ^ 1`. Rotations list darts in
//! counterclockwise order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arrangement::{validate_simple, CombinatorialDescription};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("invalid description: {0}")]
    InvalidDescription(String),
    #[error("two gadgets claim quadrant {quadrant} of vertex {vertex}")]
    QuadrantConflict { vertex: usize, quadrant: usize },
    #[error("cannot anchor a gadget: {0}")]
    BadAnchor(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
}

pub type Dart = usize;

pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

pub fn dart_edge(d: Dart) -> usize {
    d / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexRole {
    CycleLeft(usize),
    CycleRight(usize),
    PathLeft(usize, usize),
    PathRight(usize, usize),
    Stub(usize),
}

/// Cycles that carry a circle gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetCycle {
    Gamma,
    Line(usize),
    Cross(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeTag {
    CycleGamma,
    Ei(usize),
    Path(usize),
    CrossCycle(usize, usize),
    /// The `j`-th (1-based) join of a circle gadget.
    Gadget(GadgetCycle, usize),
    Stub,
}

impl EdgeTag {
    /// Edges of the core graph.
    pub fn is_core(&self) -> bool {
        !matches!(self, EdgeTag::Gadget(..) | EdgeTag::Stub)
    }

    fn kind(&self) -> &'static str {
        match self {
            EdgeTag::CycleGamma => "C_gamma",
            EdgeTag::Ei(_) => "e",
            EdgeTag::Path(_) => "P",
            EdgeTag::CrossCycle(..) => "C",
            EdgeTag::Gadget(..) => "gadget",
            EdgeTag::Stub => "stub",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub tag: EdgeTag,
}

/// A graph with a rotation system and vertex roles.
#[derive(Debug, Clone, PartialEq)]
pub struct RotGraph {
    roles: Vec<VertexRole>,
    edges: Vec<Edge>,
    rotation: Vec<Vec<Dart>>,
}

impl RotGraph {
    /// Assembles a graph, checking the rotation system.
    pub fn from_parts(
        roles: Vec<VertexRole>,
        edges: Vec<Edge>,
        rotation: Vec<Vec<Dart>>,
    ) -> Result<Self, ReductionError> {
        let g = RotGraph {
            roles,
            edges,
            rotation,
        };
        g.check()?;
        Ok(g)
    }

    fn check(&self) -> Result<(), ReductionError> {
        let nv = self.roles.len();
        if self.rotation.len() != nv {
            return Err(ReductionError::Malformed(format!(
                "{} rotation lists for {} vertices",
                self.rotation.len(),
                nv
            )));
        }
        for (e, edge) in self.edges.iter().enumerate() {
            if edge.u >= nv || edge.v >= nv {
                return Err(ReductionError::Malformed(format!("edge {e} has an unknown end")));
            }
            if edge.u == edge.v {
                return Err(ReductionError::Malformed(format!("edge {e} is a loop")));
            }
        }
        let mut seen = vec![false; 2 * self.edges.len()];
        for (v, rot) in self.rotation.iter().enumerate() {
            for &d in rot {
                if d >= seen.len() {
                    return Err(ReductionError::Malformed(format!("unknown dart {d} at vertex {v}")));
                }
                if self.dart_origin(d) != v {
                    return Err(ReductionError::Malformed(format!(
                        "dart {d} listed at vertex {v} but leaves vertex {}",
                        self.dart_origin(d)
                    )));
                }
                if std::mem::replace(&mut seen[d], true) {
                    return Err(ReductionError::Malformed(format!("dart {d} listed twice")));
                }
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(ReductionError::Malformed(format!("dart {d} missing from rotation")));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.roles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn roles(&self) -> &[VertexRole] {
        &self.roles
    }

    pub fn role(&self, v: usize) -> VertexRole {
        self.roles[v]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn dart_origin(&self, d: Dart) -> usize {
        let e = &self.edges[dart_edge(d)];
        if d % 2 == 0 {
            e.u
        } else {
            e.v
        }
    }

    pub fn dart_head(&self, d: Dart) -> usize {
        self.dart_origin(twin(d))
    }

    /// Number of pseudolines, read from the vertex roles.
    pub fn line_count(&self) -> usize {
        self.roles
            .iter()
            .filter_map(|r| match r {
                VertexRole::CycleLeft(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Swaps two entries of the rotation at `v` (used to build tampered
    /// rotation systems).
    pub fn swap_darts(&mut self, v: usize, a: usize, b: usize) {
        self.rotation[v].swap(a, b);
    }

    /// Traces all faces of the embedding; returns their count.
    pub fn face_count(&self) -> usize {
        let mut pos = vec![0usize; 2 * self.edges.len()];
        for rot in &self.rotation {
            for (k, &d) in rot.iter().enumerate() {
                pos[d] = k;
            }
        }
        let next = |d: Dart| {
            let t = twin(d);
            let rot = &self.rotation[self.dart_origin(t)];
            rot[(pos[t] + 1) % rot.len()]
        };
        let mut used = vec![false; 2 * self.edges.len()];
        let mut faces = 0;
        for start in 0..used.len() {
            if used[start] {
                continue;
            }
            faces += 1;
            let mut d = start;
            while !used[d] {
                used[d] = true;
                d = next(d);
            }
        }
        faces
    }

    /// Vertex id with the given role.
    pub fn find_role(&self, role: VertexRole) -> Option<usize> {
        self.roles.iter().position(|r| *r == role)
    }
}

/// The vertex ids of the core graph, keyed by role.
#[derive(Debug, Clone)]
pub struct CoreLayout {
    pub n: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `path[i]`: the vertices of `P_i` from `v_i^l` to `v_i^r`.
    pub path: Vec<Vec<usize>>,
    /// `cross_left[i][j]`, `cross_right[i][j]` for `i != j`.
    pub cross_left: Vec<Vec<usize>>,
    pub cross_right: Vec<Vec<usize>>,
}

impl CoreLayout {
    fn new(d: &CombinatorialDescription) -> Self {
        let n = d.n();
        let left: Vec<usize> = (0..n).collect();
        let right: Vec<usize> = (n..2 * n).collect();
        let mut next = 2 * n;
        let mut cross_left = vec![vec![usize::MAX; n]; n];
        let mut cross_right = vec![vec![usize::MAX; n]; n];
        let mut path = Vec::with_capacity(n);
        for i in 0..n {
            let mut p = vec![left[i]];
            for &j in d.list(i) {
                cross_left[i][j] = next;
                cross_right[i][j] = next + 1;
                p.extend([next, next + 1]);
                next += 2;
            }
            p.push(right[i]);
            path.push(p);
        }
        CoreLayout {
            n,
            left,
            right,
            path,
            cross_left,
            cross_right,
        }
    }

    /// The boundary cycle `v_1^l … v_n^l v_1^r … v_n^r`.
    pub fn gamma_cycle(&self) -> Vec<usize> {
        self.left.iter().chain(&self.right).copied().collect()
    }

    /// Vertex sequence of a gadget cycle, starting at its anchor `v_1`.
    pub fn cycle(&self, c: GadgetCycle) -> Vec<usize> {
        match c {
            GadgetCycle::Gamma => self.gamma_cycle(),
            // Reversed path from v_i^r to v_i^l; e_i closes the cycle.
            GadgetCycle::Line(i) => self.path[i].iter().rev().copied().collect(),
            GadgetCycle::Cross(i, j) => vec![
                self.cross_left[i][j],
                self.cross_left[j][i],
                self.cross_right[i][j],
                self.cross_right[j][i],
            ],
        }
    }

    /// All gadget cycles in build order.
    pub fn gadget_cycles(&self) -> Vec<GadgetCycle> {
        let mut out = vec![GadgetCycle::Gamma];
        out.extend((0..self.n).map(GadgetCycle::Line));
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(GadgetCycle::Cross(i, j));
            }
        }
        out
    }
}

/// Recovers the layout of a core or full graph from its vertex roles.
pub fn layout_of(g: &RotGraph) -> Result<CoreLayout, ReductionError> {
    let n = g.line_count();
    if n < 2 {
        return Err(ReductionError::Malformed("fewer than two pseudolines".into()));
    }
    let missing = |what: String| ReductionError::Malformed(format!("no vertex for {what}"));
    let mut left = vec![usize::MAX; n];
    let mut right = vec![usize::MAX; n];
    let mut cross_left = vec![vec![usize::MAX; n]; n];
    let mut cross_right = vec![vec![usize::MAX; n]; n];
    for (v, r) in g.roles().iter().enumerate() {
        let bad = || ReductionError::Malformed(format!("vertex {v} has an out-of-range role"));
        match *r {
            VertexRole::CycleLeft(i) => *left.get_mut(i).ok_or_else(bad)? = v,
            VertexRole::CycleRight(i) => *right.get_mut(i).ok_or_else(bad)? = v,
            VertexRole::PathLeft(i, j) if i < n && j < n && i != j => cross_left[i][j] = v,
            VertexRole::PathRight(i, j) if i < n && j < n && i != j => cross_right[i][j] = v,
            VertexRole::Stub(_) => {}
            _ => return Err(bad()),
        }
    }
    for i in 0..n {
        if left[i] == usize::MAX || right[i] == usize::MAX {
            return Err(missing(format!("the ends of line {}", i + 1)));
        }
        for j in 0..n {
            if i != j && (cross_left[i][j] == usize::MAX || cross_right[i][j] == usize::MAX) {
                return Err(missing(format!("crossing ({},{})", i + 1, j + 1)));
            }
        }
    }
    // Path order: walk P_i edges from v_i^l.
    let mut path = Vec::with_capacity(n);
    for i in 0..n {
        let mut p = vec![left[i]];
        let mut prev = usize::MAX;
        let mut cur = left[i];
        while cur != right[i] {
            let step = g.rotation(cur).iter().find_map(|&d| {
                let e = g.edge(dart_edge(d));
                (e.tag == EdgeTag::Path(i) && g.dart_head(d) != prev).then(|| g.dart_head(d))
            });
            match step {
                Some(h) if p.len() <= 2 * n => {
                    prev = cur;
                    cur = h;
                    p.push(h);
                }
                _ => return Err(ReductionError::Malformed(format!("path {} is broken", i + 1))),
            }
        }
        path.push(p);
    }
    Ok(CoreLayout {
        n,
        left,
        right,
        path,
        cross_left,
        cross_right,
    })
}

/// Description read off the path order of a core or full graph.
pub fn description_of(g: &RotGraph) -> Result<CombinatorialDescription, ReductionError> {
    let layout = layout_of(g)?;
    let lists = layout
        .path
        .iter()
        .map(|p| {
            p[1..p.len() - 1]
                .iter()
                .step_by(2)
                .filter_map(|&v| match g.role(v) {
                    VertexRole::PathLeft(_, j) => Some(j),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Ok(CombinatorialDescription::new(lists))
}

fn require_simple(d: &CombinatorialDescription) -> Result<(), ReductionError> {
    let r = validate_simple(d);
    if r.passed() {
        Ok(())
    } else {
        Err(ReductionError::InvalidDescription(r.failures.join("; ")))
    }
}

struct Builder {
    roles: Vec<VertexRole>,
    edges: Vec<Edge>,
    pair: HashMap<(usize, usize), usize>,
}

impl Builder {
    fn edge(&mut self, u: usize, v: usize, tag: EdgeTag) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { u, v, tag });
        self.pair.insert((u.min(v), u.max(v)), id);
        id
    }

    /// Dart of the (unique) edge between `from` and `to`, leaving `from`.
    fn dart(&self, from: usize, to: usize) -> Dart {
        let e = self.pair[&(from.min(to), from.max(to))];
        if self.edges[e].u == from {
            2 * e
        } else {
            2 * e + 1
        }
    }
}

/// The core graph and its rotation system.
pub fn build_core(d: &CombinatorialDescription) -> Result<RotGraph, ReductionError> {
    require_simple(d)?;
    let l = CoreLayout::new(d);
    let n = l.n;
    let mut roles = Vec::with_capacity(2 * n * n);
    roles.extend((0..n).map(VertexRole::CycleLeft));
    roles.extend((0..n).map(VertexRole::CycleRight));
    for i in 0..n {
        for &j in d.list(i) {
            roles.extend([VertexRole::PathLeft(i, j), VertexRole::PathRight(i, j)]);
        }
    }
    let mut b = Builder {
        roles,
        edges: Vec::with_capacity(4 * n * n),
        pair: HashMap::new(),
    };

    let gamma = l.gamma_cycle();
    for k in 0..gamma.len() {
        b.edge(gamma[k], gamma[(k + 1) % gamma.len()], EdgeTag::CycleGamma);
    }
    for i in 0..n {
        b.edge(l.left[i], l.right[i], EdgeTag::Ei(i));
    }
    for i in 0..n {
        for w in l.path[i].windows(2) {
            b.edge(w[0], w[1], EdgeTag::Path(i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let c = l.cycle(GadgetCycle::Cross(i, j));
            for k in 0..4 {
                b.edge(c[k], c[(k + 1) % 4], EdgeTag::CrossCycle(i, j));
            }
        }
    }

    let mut rotation = vec![Vec::new(); b.roles.len()];
    let len = gamma.len();
    for k in 0..len {
        let v = gamma[k];
        let i = k % n;
        let prev = gamma[(k + len - 1) % len];
        let next = gamma[(k + 1) % len];
        let (path_nb, other_end) = if k < n {
            (l.path[i][1], l.right[i])
        } else {
            (l.path[i][l.path[i].len() - 2], l.left[i])
        };
        rotation[v] = vec![
            b.dart(v, prev),
            b.dart(v, path_nb),
            b.dart(v, next),
            b.dart(v, other_end),
        ];
    }
    for i in 0..n {
        let p = &l.path[i];
        for k in 1..p.len() - 1 {
            let v = p[k];
            let (before, after) = (p[k - 1], p[k + 1]);
            let (left_end, j) = match b.roles[v] {
                VertexRole::PathLeft(_, j) => (true, j),
                VertexRole::PathRight(_, j) => (false, j),
                _ => unreachable!("interior path vertices are crossing vertices"),
            };
            let (jl, jr) = (l.cross_left[j][i], l.cross_right[j][i]);
            // The partner line's vertices, in the order that keeps the
            // 4-cycle of this crossing on a circle around it.
            rotation[v] = match (i < j, left_end) {
                (true, true) => vec![b.dart(v, before), b.dart(v, jr), b.dart(v, after), b.dart(v, jl)],
                (true, false) => vec![b.dart(v, after), b.dart(v, jl), b.dart(v, before), b.dart(v, jr)],
                (false, true) => vec![b.dart(v, before), b.dart(v, jl), b.dart(v, after), b.dart(v, jr)],
                (false, false) => vec![b.dart(v, after), b.dart(v, jr), b.dart(v, before), b.dart(v, jl)],
            };
        }
    }
    RotGraph::from_parts(b.roles, b.edges, rotation)
}

/// A half-edge slot: `position` counts counterclockwise inside the quadrant
/// that starts at core dart `quadrant` of `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadrantSlot {
    pub vertex: usize,
    pub quadrant: usize,
    pub position: usize,
}

/// One gadget edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Join {
    pub j: usize,
    pub from: QuadrantSlot,
    pub to: QuadrantSlot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GadgetPlan {
    pub cycle: GadgetCycle,
    pub vertices: Vec<usize>,
    pub joins: Vec<Join>,
    /// `(vertex, quadrant)` pairs this gadget uses.
    pub quadrants: Vec<(usize, usize)>,
}

/// Half-edges per quadrant in a full graph with `n` pseudolines.
pub fn slots_per_quadrant(n: usize) -> usize {
    2 * n - 3
}

/// Plans the circle gadget of `cycle`, anchored at its first vertex.
///
/// Quadrant `q1` of a cycle vertex starts at the dart toward its successor,
/// `q2` is the one after it. The `j`-th join connects the `j`-th slot of
/// `q1` at `v_1` in clockwise order with the `j`-th slot of `q2` at
/// `v_{k-j}` in counterclockwise order.
pub fn gadget_plan(
    core: &RotGraph,
    id: GadgetCycle,
    cycle: &[usize],
    slots: usize,
) -> Result<GadgetPlan, ReductionError> {
    let k = cycle.len();
    if k < 4 {
        return Err(ReductionError::BadAnchor(format!("cycle of length {k} is too short")));
    }
    if k - 3 > slots {
        return Err(ReductionError::BadAnchor(format!(
            "{} joins do not fit into {slots} slots",
            k - 3
        )));
    }
    let quadrant = |m: usize| -> Result<usize, ReductionError> {
        let v = cycle[m];
        let succ = cycle[(m + 1) % k];
        if core.degree(v) != 4 {
            return Err(ReductionError::BadAnchor(format!("vertex {v} has degree {}", core.degree(v))));
        }
        core.rotation(v)
            .iter()
            .position(|&d| core.dart_head(d) == succ)
            .ok_or_else(|| ReductionError::BadAnchor(format!("vertices {v} and {succ} are not adjacent")))
    };
    let q1 = quadrant(0)?;
    let mut quadrants = vec![(cycle[0], q1)];
    let mut joins = Vec::with_capacity(k - 3);
    for j in 1..=k - 3 {
        let m = k - j - 1;
        let q2 = (quadrant(m)? + 1) % 4;
        quadrants.push((cycle[m], q2));
        joins.push(Join {
            j,
            from: QuadrantSlot {
                vertex: cycle[0],
                quadrant: q1,
                position: slots - j,
            },
            to: QuadrantSlot {
                vertex: cycle[m],
                quadrant: q2,
                position: j - 1,
            },
        });
    }
    Ok(GadgetPlan {
        cycle: id,
        vertices: cycle.to_vec(),
        joins,
        quadrants,
    })
}

/// All gadget plans of the core graph of `d`, checked for quadrant conflicts.
pub fn gadget_plans(core: &RotGraph, layout: &CoreLayout) -> Result<Vec<GadgetPlan>, ReductionError> {
    let slots = slots_per_quadrant(layout.n);
    let mut used = HashSet::new();
    let mut plans = Vec::new();
    for c in layout.gadget_cycles() {
        let plan = gadget_plan(core, c, &layout.cycle(c), slots)?;
        for &(vertex, quadrant) in &plan.quadrants {
            if !used.insert((vertex, quadrant)) {
                return Err(ReductionError::QuadrantConflict { vertex, quadrant });
            }
        }
        plans.push(plan);
    }
    Ok(plans)
}

/// The full graph: core graph, circle gadgets and stubs.
pub fn build_full(d: &CombinatorialDescription) -> Result<RotGraph, ReductionError> {
    let core = build_core(d)?;
    let layout = CoreLayout::new(d);
    let plans = gadget_plans(&core, &layout)?;
    let slots = slots_per_quadrant(layout.n);
    let core_v = core.vertex_count();

    let mut roles = core.roles.clone();
    let mut edges = core.edges.clone();
    // slot_dart[v][q][p]
    let mut slot_dart = vec![vec![vec![None; slots]; 4]; core_v];
    for plan in &plans {
        for join in &plan.joins {
            let e = edges.len();
            edges.push(Edge {
                u: join.from.vertex,
                v: join.to.vertex,
                tag: EdgeTag::Gadget(plan.cycle, join.j),
            });
            for (slot, dart) in [(join.from, 2 * e), (join.to, 2 * e + 1)] {
                let cell = &mut slot_dart[slot.vertex][slot.quadrant][slot.position];
                if cell.is_some() {
                    return Err(ReductionError::QuadrantConflict {
                        vertex: slot.vertex,
                        quadrant: slot.quadrant,
                    });
                }
                *cell = Some(dart);
            }
        }
    }
    let mut stub_rot = Vec::new();
    for (v, quads) in slot_dart.iter_mut().enumerate() {
        for quad in quads.iter_mut() {
            for cell in quad.iter_mut() {
                if cell.is_none() {
                    let stub = roles.len();
                    roles.push(VertexRole::Stub(stub - core_v));
                    let e = edges.len();
                    edges.push(Edge {
                        u: v,
                        v: stub,
                        tag: EdgeTag::Stub,
                    });
                    *cell = Some(2 * e);
                    stub_rot.push(vec![2 * e + 1]);
                }
            }
        }
    }
    let mut rotation = Vec::with_capacity(roles.len());
    for (v, quads) in slot_dart.iter().enumerate() {
        let mut rot = Vec::with_capacity(4 * (slots + 1));
        for (q, quad) in quads.iter().enumerate() {
            rot.push(core.rotation[v][q]);
            rot.extend(quad.iter().map(|c| c.expect("every slot is filled")));
        }
        rotation.push(rot);
    }
    rotation.extend(stub_rot);
    RotGraph::from_parts(roles, edges, rotation)
}

/// Closed-form counts for a full graph with `n` pseudolines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FullCounts {
    pub vertices: usize,
    pub edges: usize,
    pub stubs: usize,
    pub gadget_edges: usize,
    pub core_degree: usize,
}

pub fn full_counts(n: usize) -> FullCounts {
    let s = slots_per_quadrant(n);
    let gadget_edges = (n + 1) * s + n * (n - 1) / 2;
    let stubs = 8 * n * n * s - 2 * gadget_edges;
    FullCounts {
        vertices: 2 * n * n + stubs,
        edges: 4 * n * n + gadget_edges + stubs,
        stubs,
        gadget_edges,
        core_degree: 8 * n - 8,
    }
}

/// Vertex and edge counts of a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub tag_counts: BTreeMap<String, usize>,
}

pub fn stats(g: &RotGraph) -> GraphStats {
    let mut s = GraphStats {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        ..Default::default()
    };
    for v in 0..g.vertex_count() {
        *s.degree_histogram.entry(g.degree(v)).or_default() += 1;
    }
    for e in g.edges() {
        *s.tag_counts.entry(e.tag.kind().to_string()).or_default() += 1;
    }
    s
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexRole::CycleLeft(i) => write!(f, "v_l({})", i + 1),
            VertexRole::CycleRight(i) => write!(f, "v_r({})", i + 1),
            VertexRole::PathLeft(i, j) => write!(f, "v_l({},{})", i + 1, j + 1),
            VertexRole::PathRight(i, j) => write!(f, "v_r({},{})", i + 1, j + 1),
            VertexRole::Stub(k) => write!(f, "stub({})", k + 1),
        }
    }
}

impl fmt::Display for GadgetCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GadgetCycle::Gamma => write!(f, "C_gamma"),
            GadgetCycle::Line(i) => write!(f, "C({})", i + 1),
            GadgetCycle::Cross(i, j) => write!(f, "C({},{})", i + 1, j + 1),
        }
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EdgeTag::CycleGamma => write!(f, "C_gamma"),
            EdgeTag::Ei(i) => write!(f, "e({})", i + 1),
            EdgeTag::Path(i) => write!(f, "P({})", i + 1),
            EdgeTag::CrossCycle(i, j) => write!(f, "C({},{})", i + 1, j + 1),
            EdgeTag::Gadget(c, j) => write!(f, "gadget({c},{j})"),
            EdgeTag::Stub => write!(f, "stub"),
        }
    }
}

/// Splits `name(a,b,...)` into the name and its comma-separated arguments.
fn split_call(s: &str) -> Option<(&str, Vec<&str>)> {
    match s.find('(') {
        None => Some((s, Vec::new())),
        Some(open) => {
            let inner = s[open + 1..].strip_suffix(')')?;
            Some((&s[..open], split_top_level(inner)))
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn label(s: &str) -> Option<usize> {
    s.trim().parse::<usize>().ok()?.checked_sub(1)
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("unrecognized label {0:?}")]
pub struct ParseLabelError(pub String);

impl FromStr for VertexRole {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLabelError(s.to_string());
        let (name, args) = split_call(s).ok_or_else(err)?;
        let nums: Vec<usize> = args.iter().map(|a| label(a)).collect::<Option<_>>().ok_or_else(err)?;
        match (name, nums.as_slice()) {
            ("v_l", [i]) => Ok(VertexRole::CycleLeft(*i)),
            ("v_r", [i]) => Ok(VertexRole::CycleRight(*i)),
            ("v_l", [i, j]) => Ok(VertexRole::PathLeft(*i, *j)),
            ("v_r", [i, j]) => Ok(VertexRole::PathRight(*i, *j)),
            ("stub", [k]) => Ok(VertexRole::Stub(*k)),
            _ => Err(err()),
        }
    }
}

impl FromStr for GadgetCycle {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLabelError(s.to_string());
        if s == "C_gamma" {
            return Ok(GadgetCycle::Gamma);
        }
        let (name, args) = split_call(s).ok_or_else(err)?;
        let nums: Vec<usize> = args.iter().map(|a| label(a)).collect::<Option<_>>().ok_or_else(err)?;
        match (name, nums.as_slice()) {
            ("C", [i]) => Ok(GadgetCycle::Line(*i)),
            ("C", [i, j]) => Ok(GadgetCycle::Cross(*i, *j)),
            _ => Err(err()),
        }
    }
}

impl FromStr for EdgeTag {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLabelError(s.to_string());
        match s {
            "C_gamma" => return Ok(EdgeTag::CycleGamma),
            "stub" => return Ok(EdgeTag::Stub),
            _ => {}
        }
        let (name, args) = split_call(s).ok_or_else(err)?;
        if name == "gadget" {
            return match args.as_slice() {
                [c, j] => Ok(EdgeTag::Gadget(c.parse()?, j.trim().parse().map_err(|_| err())?)),
                _ => Err(err()),
            };
        }
        let nums: Vec<usize> = args.iter().map(|a| label(a)).collect::<Option<_>>().ok_or_else(err)?;
        match (name, nums.as_slice()) {
            ("e", [i]) => Ok(EdgeTag::Ei(*i)),
            ("P", [i]) => Ok(EdgeTag::Path(*i)),
            ("C", [i, j]) => Ok(EdgeTag::CrossCycle(*i, *j)),
            _ => Err(err()),
        }
    }
}
