//! The level tree data model, its validation and the height-symmetric flip.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::Topology;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Min,
    Max,
    /// Two circles merge into one going up: pair side below, join side above.
    SaddleUp,
    /// Pair side above, join side below.
    SaddleDown,
}

impl VertexKind {
    pub fn is_saddle(self) -> bool {
        matches!(self, VertexKind::SaddleUp | VertexKind::SaddleDown)
    }

    pub fn is_extremum(self) -> bool {
        !self.is_saddle()
    }

    /// Image under `h -> -h`.
    pub fn flipped(self) -> VertexKind {
        match self {
            VertexKind::Min => VertexKind::Max,
            VertexKind::Max => VertexKind::Min,
            VertexKind::SaddleUp => VertexKind::SaddleDown,
            VertexKind::SaddleDown => VertexKind::SaddleUp,
        }
    }

    pub fn ports(self) -> &'static [Port] {
        if self.is_saddle() {
            &[Port::PairA, Port::PairB, Port::Join]
        } else {
            &[Port::Cap]
        }
    }

    /// Side of the vertex on which an edge attached at `port` leaves it, or
    /// `None` when the kind has no such port.
    pub fn port_side(self, port: Port) -> Option<Side> {
        use Port::*;
        use VertexKind::*;
        match (self, port) {
            (Max, Cap) => Some(Side::Below),
            (Min, Cap) => Some(Side::Above),
            (SaddleUp, PairA | PairB) => Some(Side::Below),
            (SaddleUp, Join) => Some(Side::Above),
            (SaddleDown, PairA | PairB) => Some(Side::Above),
            (SaddleDown, Join) => Some(Side::Below),
            _ => None,
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VertexKind::Min => "min",
            VertexKind::Max => "max",
            VertexKind::SaddleUp => "saddle_up",
            VertexKind::SaddleDown => "saddle_down",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Port {
    Cap,
    PairA,
    PairB,
    Join,
}

impl Port {
    pub fn is_pair(self) -> bool {
        matches!(self, Port::PairA | Port::PairB)
    }

    /// Index of the port among the vertex's port slots.
    pub(crate) fn slot(self) -> usize {
        match self {
            Port::Cap | Port::PairA => 0,
            Port::PairB => 1,
            Port::Join => 2,
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Port::Cap => "cap",
            Port::PairA => "pair_a",
            Port::PairB => "pair_b",
            Port::Join => "join",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Above,
    Below,
}

/// Behaviour of the height function on the strand of the link through a
/// mark, on the cap side of the nearby outermost disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Germ {
    #[serde(rename = "monotone")]
    MonotoneThrough,
    #[serde(rename = "endpoint_extremum")]
    EndpointExtremumOnCapSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkPoint {
    pub id: String,
    pub germ: Option<Germ>,
}

impl MarkPoint {
    pub fn new(id: impl Into<String>) -> Self {
        MarkPoint {
            id: id.into(),
            germ: None,
        }
    }

    pub fn with_germ(id: impl Into<String>, germ: Germ) -> Self {
        MarkPoint {
            id: id.into(),
            germ: Some(germ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endpoint {
    pub vertex: String,
    pub port: Port,
}

impl Endpoint {
    pub fn new(vertex: impl Into<String>, port: Port) -> Self {
        Endpoint {
            vertex: vertex.into(),
            port,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
}

/// A monotone annulus or disk between two singular levels. `marks` are listed
/// in ascending height.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: String,
    pub lower: Endpoint,
    pub upper: Endpoint,
    pub marks: Vec<MarkPoint>,
}

/// Combinatorial encoding of the singular foliation induced on a marked
/// sphere by the standard height function.
///
/// The struct is plain data so that arbitrary candidates can be loaded and
/// checked with [`validate`]; every operation that needs a well-formed tree
/// validates its input first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelTree {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl LevelTree {
    pub fn mark_count(&self) -> usize {
        self.edges.iter().map(|e| e.marks.len()).sum()
    }

    pub fn saddle_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind.is_saddle()).count()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_mut(&mut self, id: &str) -> Option<&mut Edge> {
        self.edges.iter_mut().find(|e| e.id == id)
    }

    pub fn from_json(text: &str) -> Result<LevelTree> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty-printed foliation JSON. `from_json(to_json(t)) == t` and the
    /// text itself is a fixed point of parse-then-print.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("level tree serialization is infallible")
    }

    pub fn is_valid(&self) -> bool {
        validate(self).is_valid()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Empty,
    DuplicateVertexId,
    DuplicateEdgeId,
    DuplicateMarkId,
    UnknownVertex,
    PortNotOnKind,
    PortSideMismatch,
    PortReused,
    PortUnused,
    EdgeCount,
    Disconnected,
    EulerRelation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ids: Vec<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        let msgs: Vec<&str> = self.violations.iter().map(|v| v.message.as_str()).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Checks every structural invariant of a level tree and lists the
/// violations. An empty list means the tree is valid.
pub fn validate(tree: &LevelTree) -> ValidationReport {
    let mut out = Vec::new();
    let mut push = |kind, ids: Vec<String>, message: String| {
        out.push(Violation { kind, ids, message })
    };

    if tree.vertices.is_empty() {
        push(ViolationKind::Empty, vec![], "tree has no vertices".into());
    }

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, v) in tree.vertices.iter().enumerate() {
        if index.insert(v.id.as_str(), i).is_some() {
            push(
                ViolationKind::DuplicateVertexId,
                vec![v.id.clone()],
                format!("duplicate vertex id {}", v.id),
            );
        }
    }

    let mut edge_ids = HashSet::new();
    let mut mark_ids = HashSet::new();
    let mut port_use: HashMap<(usize, Port), Vec<&str>> = HashMap::new();
    let mut links: Vec<(usize, usize)> = Vec::new();

    for e in &tree.edges {
        if !edge_ids.insert(e.id.as_str()) {
            push(
                ViolationKind::DuplicateEdgeId,
                vec![e.id.clone()],
                format!("duplicate edge id {}", e.id),
            );
        }
        for m in &e.marks {
            if !mark_ids.insert(m.id.as_str()) {
                push(
                    ViolationKind::DuplicateMarkId,
                    vec![m.id.clone(), e.id.clone()],
                    format!("duplicate mark id {} on edge {}", m.id, e.id),
                );
            }
        }

        let mut ends = [None, None];
        let mut side_bad = false;
        for (slot, (end, want)) in [(&e.lower, Side::Above), (&e.upper, Side::Below)]
            .into_iter()
            .enumerate()
        {
            let Some(&vi) = index.get(end.vertex.as_str()) else {
                push(
                    ViolationKind::UnknownVertex,
                    vec![e.id.clone(), end.vertex.clone()],
                    format!("edge {} references unknown vertex {}", e.id, end.vertex),
                );
                continue;
            };
            let kind = tree.vertices[vi].kind;
            match kind.port_side(end.port) {
                None => push(
                    ViolationKind::PortNotOnKind,
                    vec![e.id.clone(), end.vertex.clone()],
                    format!(
                        "edge {} uses port {} which a {} vertex {} does not have",
                        e.id, end.port, kind, end.vertex
                    ),
                ),
                Some(side) => {
                    if side != want {
                        side_bad = true;
                    }
                    port_use.entry((vi, end.port)).or_default().push(&e.id);
                }
            }
            ends[slot] = Some(vi);
        }
        if side_bad {
            push(
                ViolationKind::PortSideMismatch,
                vec![e.id.clone(), e.lower.vertex.clone(), e.upper.vertex.clone()],
                format!("port side mismatch on edge {}", e.id),
            );
        }
        if let [Some(a), Some(b)] = ends {
            links.push((a, b));
        }
    }

    for (vi, v) in tree.vertices.iter().enumerate() {
        if index.get(v.id.as_str()) != Some(&vi) {
            continue;
        }
        for &port in v.kind.ports() {
            match port_use.get(&(vi, port)).map(Vec::len).unwrap_or(0) {
                0 => push(
                    ViolationKind::PortUnused,
                    vec![v.id.clone()],
                    format!("port {} of vertex {} is unused", port, v.id),
                ),
                1 => {}
                _ => {
                    let mut ids = vec![v.id.clone()];
                    ids.extend(port_use[&(vi, port)].iter().map(|s| s.to_string()));
                    push(
                        ViolationKind::PortReused,
                        ids,
                        format!("port {} of vertex {} is used by several edges", port, v.id),
                    )
                }
            }
        }
    }

    let n = tree.vertices.len();
    if n > 0 && tree.edges.len() != n - 1 {
        push(
            ViolationKind::EdgeCount,
            vec![],
            format!("{} edges for {} vertices (a tree needs {})", tree.edges.len(), n, n - 1),
        );
    }

    if n > 0 {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &links {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        let stray: Vec<String> = (0..n)
            .filter(|&i| find(&mut parent, i) != root)
            .map(|i| tree.vertices[i].id.clone())
            .collect();
        if !stray.is_empty() {
            push(
                ViolationKind::Disconnected,
                stray.clone(),
                format!("vertices not connected to {}: {}", tree.vertices[0].id, stray.join(", ")),
            );
        }
    }

    let extrema = tree.vertices.iter().filter(|v| v.kind.is_extremum()).count();
    let saddles = n - extrema;
    if n > 0 && extrema != saddles + 2 {
        push(
            ViolationKind::EulerRelation,
            vec![],
            format!("{extrema} extrema and {saddles} saddles violate #extrema = #saddles + 2"),
        );
    }

    ValidationReport {
        valid: out.is_empty(),
        violations: out,
    }
}

pub(crate) fn ensure_valid(tree: &LevelTree) -> Result<()> {
    let report = validate(tree);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidTree(report))
    }
}

/// Image of the tree under `h -> -h`.
pub fn flip(tree: &LevelTree) -> Result<LevelTree> {
    ensure_valid(tree)?;
    Ok(flip_unchecked(tree))
}

pub(crate) fn flip_unchecked(tree: &LevelTree) -> LevelTree {
    LevelTree {
        vertices: tree
            .vertices
            .iter()
            .map(|v| Vertex {
                id: v.id.clone(),
                kind: v.kind.flipped(),
            })
            .collect(),
        edges: tree
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id.clone(),
                lower: e.upper.clone(),
                upper: e.lower.clone(),
                marks: e.marks.iter().rev().cloned().collect(),
            })
            .collect(),
    }
}

/// Assigns distinct integer heights such that every edge climbs. Ties are
/// broken by vertex order, so the result is deterministic.
pub fn height_assignment(tree: &LevelTree) -> Result<BTreeMap<String, usize>> {
    let topo = Topology::from_tree(tree)?;
    let n = topo.vertex_count();
    let mut indegree = vec![0usize; n];
    let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in topo.edges() {
        indegree[e.upper.0] += 1;
        up[e.lower.0].push(e.upper.0);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indegree[v] == 0).map(Reverse).collect();
    let mut ranks = BTreeMap::new();
    let mut next = 0;
    while let Some(Reverse(v)) = ready.pop() {
        ranks.insert(tree.vertices[v].id.clone(), next);
        next += 1;
        for &w in &up[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    debug_assert_eq!(ranks.len(), n);
    Ok(ranks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoliationStats {
    /// Marked points.
    pub k: usize,
    /// Saddles.
    pub s: usize,
    /// Extrema.
    pub m: usize,
    pub outermost_count: usize,
}

pub fn stats(tree: &LevelTree) -> Result<FoliationStats> {
    let topo = Topology::from_tree(tree)?;
    Ok(topo.stats())
}
