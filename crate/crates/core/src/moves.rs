//! Rewrites of level trees: the two saddle-creating moves, cancellation of an
//! outermost saddle against its cap, the five-saddle reduction and greedy
//! elimination of all saddles.
//!
//! All moves are pure and return fresh trees; existing ids are kept where the
//! corresponding piece survives, new pieces get ids not used in the input.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level_tree::{
    ensure_valid, Edge, Endpoint, LevelTree, MarkPoint, Port, Vertex, VertexKind,
};
use crate::topology::Topology;

/// Direction in which the finger carrying the mark is pushed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// Fresh minimum below a new ascending saddle.
    PushDown,
    /// Fresh maximum above a new descending saddle.
    PushUp,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::PushDown => f.write_str("push-down"),
            Orientation::PushUp => f.write_str("push-up"),
        }
    }
}

/// Which port of the new saddle receives the continuation of the edge, i.e.
/// the part of the edge above the designated mark.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThroughSide {
    ContinuationOnJoin,
    ContinuationOnPair,
}

impl fmt::Display for ThroughSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThroughSide::ContinuationOnJoin => f.write_str("continuation on join"),
            ThroughSide::ContinuationOnPair => f.write_str("continuation on pair"),
        }
    }
}

/// The two parameterizations of a finger move that respect edge directions.
pub const FINGER_PARAMETERS: [(Orientation, ThroughSide); 2] = [
    (Orientation::PushDown, ThroughSide::ContinuationOnJoin),
    (Orientation::PushUp, ThroughSide::ContinuationOnPair),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EliminationStrategy {
    /// Always cancel the outermost edge carrying the fewest marks; ties go to
    /// the edge listed first.
    #[default]
    MinCostOutermost,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerStep {
    pub saddle: String,
    pub cost: usize,
}

/// Ordered record of saddle cancellations. The cost of a step is the number
/// of marks on the cancelled outermost edge, which bounds the number of new
/// maxima the corresponding isotopy creates on the link.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationLedger {
    pub steps: Vec<LedgerStep>,
    pub total_cost: usize,
}

impl EliminationLedger {
    pub fn push(&mut self, saddle: String, cost: usize) {
        self.steps.push(LedgerStep { saddle, cost });
        self.total_cost += cost;
    }

    pub fn min_step_cost(&self) -> Option<usize> {
        self.steps.iter().map(|s| s.cost).min()
    }

    pub fn max_step_cost(&self) -> Option<usize> {
        self.steps.iter().map(|s| s.cost).max()
    }

    pub fn is_consistent(&self) -> bool {
        self.steps.iter().map(|s| s.cost).sum::<usize>() == self.total_cost
    }
}

struct Fresh {
    taken: HashSet<String>,
}

impl Fresh {
    fn new(tree: &LevelTree) -> Self {
        let mut taken = HashSet::new();
        for v in &tree.vertices {
            taken.insert(v.id.clone());
        }
        for e in &tree.edges {
            taken.insert(e.id.clone());
            for m in &e.marks {
                taken.insert(m.id.clone());
            }
        }
        Fresh { taken }
    }

    fn id(&mut self, prefix: &str) -> String {
        let mut n = 1;
        loop {
            let candidate = format!("{prefix}{n}");
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
            n += 1;
        }
    }
}

fn edge_index(tree: &LevelTree, id: &str) -> Result<usize> {
    tree.edges
        .iter()
        .position(|e| e.id == id)
        .ok_or_else(|| Error::UnknownEdge(id.to_string()))
}

fn vertex_index(tree: &LevelTree, id: &str) -> Result<usize> {
    tree.vertices
        .iter()
        .position(|v| v.id == id)
        .ok_or_else(|| Error::UnknownVertex(id.to_string()))
}

fn new_edge(id: String, lower: Endpoint, upper: Endpoint, marks: Vec<MarkPoint>) -> Edge {
    Edge {
        id,
        lower,
        upper,
        marks,
    }
}

/// Pushes a finger carrying one mark off its edge, creating a saddle and a
/// fresh extremum whose cap holds that mark.
///
/// With `PushDown` the new saddle ascends: the part of the edge below the
/// mark enters a pair port, the continuation above the mark leaves through
/// the join port. `PushUp` is the mirror image, so the continuation lands on
/// a pair port. Any other combination is rejected.
pub fn finger_move(
    tree: &LevelTree,
    edge: &str,
    mark_index: usize,
    orientation: Orientation,
    through_side: ThroughSide,
) -> Result<LevelTree> {
    ensure_valid(tree)?;
    let ei = edge_index(tree, edge)?;
    let old = &tree.edges[ei];
    if mark_index >= old.marks.len() {
        return Err(Error::NoSuchMark {
            edge: edge.to_string(),
            index: mark_index,
        });
    }
    match (orientation, through_side) {
        (Orientation::PushDown, ThroughSide::ContinuationOnJoin)
        | (Orientation::PushUp, ThroughSide::ContinuationOnPair) => {}
        _ => {
            return Err(Error::InconsistentOrientation {
                edge: edge.to_string(),
                orientation: orientation.to_string(),
                through_side: through_side.to_string(),
            })
        }
    }

    let mut fresh = Fresh::new(tree);
    let w = fresh.id("w");
    let z = fresh.id("z");
    let cap_edge = fresh.id("f");
    let cont_edge = fresh.id("f");

    let below = old.marks[..mark_index].to_vec();
    let finger = vec![old.marks[mark_index].clone()];
    let above = old.marks[mark_index + 1..].to_vec();

    let mut out = tree.clone();
    let (saddle_kind, extremum_kind, lower_port, cont_port) = match orientation {
        Orientation::PushDown => (VertexKind::SaddleUp, VertexKind::Min, Port::PairB, Port::Join),
        Orientation::PushUp => (VertexKind::SaddleDown, VertexKind::Max, Port::Join, Port::PairB),
    };
    out.vertices.push(Vertex {
        id: w.clone(),
        kind: saddle_kind,
    });
    out.vertices.push(Vertex {
        id: z.clone(),
        kind: extremum_kind,
    });
    out.edges[ei] = new_edge(
        old.id.clone(),
        old.lower.clone(),
        Endpoint::new(&w, lower_port),
        below,
    );
    let cap = match orientation {
        Orientation::PushDown => new_edge(
            cap_edge,
            Endpoint::new(&z, Port::Cap),
            Endpoint::new(&w, Port::PairA),
            finger,
        ),
        Orientation::PushUp => new_edge(
            cap_edge,
            Endpoint::new(&w, Port::PairA),
            Endpoint::new(&z, Port::Cap),
            finger,
        ),
    };
    out.edges.push(cap);
    out.edges.push(new_edge(
        cont_edge,
        Endpoint::new(&w, cont_port),
        old.upper.clone(),
        above,
    ));
    debug_assert!(out.is_valid());
    Ok(out)
}

/// Splits an outermost edge by a new saddle placed next to its cap.
///
/// Marks are counted outward from the outermost saddle: the first `below`
/// stay between the old saddle and the new one, the next `cap` move to a
/// fresh extremum, the last `keep` stay on the original cap.
pub fn split_outermost(
    tree: &LevelTree,
    edge: &str,
    below: usize,
    cap: usize,
    keep: usize,
) -> Result<LevelTree> {
    let topo = Topology::from_tree(tree)?;
    let ei = edge_index(tree, edge)?;
    let Some(sigma) = topo.outermost_saddle(ei) else {
        let e = topo.edge(ei);
        let saddle = [e.lower.0, e.upper.0]
            .into_iter()
            .find(|&v| topo.is_saddle(v))
            .map(|v| tree.vertices[v].id.clone())
            .unwrap_or_default();
        return Err(Error::InvalidWitness {
            saddle,
            edge: edge.to_string(),
        });
    };
    let old = &tree.edges[ei];
    if below + cap + keep != old.marks.len() {
        return Err(Error::PartitionMismatch {
            edge: edge.to_string(),
            below,
            cap,
            keep,
            marks: old.marks.len(),
        });
    }
    if cap == 0 || keep == 0 {
        return Err(Error::WouldCreateUnmarkedOutermostDisk(edge.to_string()));
    }

    let cap_is_above = topo.edge(ei).lower.0 == sigma;
    let mut outward = old.marks.clone();
    if !cap_is_above {
        outward.reverse();
    }
    let ascending = |mut marks: Vec<MarkPoint>| {
        if !cap_is_above {
            marks.reverse();
        }
        marks
    };
    let below_marks = ascending(outward[..below].to_vec());
    let cap_marks = ascending(outward[below..below + cap].to_vec());
    let keep_marks = ascending(outward[below + cap..].to_vec());

    let mut fresh = Fresh::new(tree);
    let w = fresh.id("w");
    let z = fresh.id("z");
    let keep_edge = fresh.id("f");
    let cap_edge = fresh.id("f");

    let mut out = tree.clone();
    if cap_is_above {
        let x = old.upper.clone();
        out.vertices.push(Vertex {
            id: w.clone(),
            kind: VertexKind::SaddleDown,
        });
        out.vertices.push(Vertex {
            id: z.clone(),
            kind: VertexKind::Max,
        });
        out.edges[ei] = new_edge(
            old.id.clone(),
            old.lower.clone(),
            Endpoint::new(&w, Port::Join),
            below_marks,
        );
        out.edges.push(new_edge(keep_edge, Endpoint::new(&w, Port::PairA), x, keep_marks));
        out.edges.push(new_edge(
            cap_edge,
            Endpoint::new(&w, Port::PairB),
            Endpoint::new(&z, Port::Cap),
            cap_marks,
        ));
    } else {
        let x = old.lower.clone();
        out.vertices.push(Vertex {
            id: w.clone(),
            kind: VertexKind::SaddleUp,
        });
        out.vertices.push(Vertex {
            id: z.clone(),
            kind: VertexKind::Min,
        });
        out.edges[ei] = new_edge(
            old.id.clone(),
            Endpoint::new(&w, Port::Join),
            old.upper.clone(),
            below_marks,
        );
        out.edges.push(new_edge(keep_edge, x, Endpoint::new(&w, Port::PairA), keep_marks));
        out.edges.push(new_edge(
            cap_edge,
            Endpoint::new(&z, Port::Cap),
            Endpoint::new(&w, Port::PairB),
            cap_marks,
        ));
    }
    debug_assert!(out.is_valid());
    Ok(out)
}

/// Cancels an outermost saddle against the extremum of its outermost edge.
/// The saddle's two remaining edges fuse into one carrying, in order, the
/// marks of the lower fused edge, of the cancelled edge and of the upper
/// fused edge. Returns the new tree and the number of marks on the cancelled
/// edge.
pub fn eliminate_outermost(tree: &LevelTree, saddle: &str, edge: &str) -> Result<(LevelTree, usize)> {
    let topo = Topology::from_tree(tree)?;
    let witness = || Error::InvalidWitness {
        saddle: saddle.to_string(),
        edge: edge.to_string(),
    };
    let ei = edge_index(tree, edge).map_err(|_| witness())?;
    let si = vertex_index(tree, saddle).map_err(|_| witness())?;
    if topo.outermost_saddle(ei) != Some(si) {
        return Err(witness());
    }
    Ok(eliminate_at(tree, &topo, si, ei))
}

pub(crate) fn eliminate_at(tree: &LevelTree, topo: &Topology, si: usize, ei: usize) -> (LevelTree, usize) {
    let (cap_vertex, _) = topo.other_end(ei, si);
    let others: Vec<usize> = topo
        .incident(si)
        .map(|(_, e)| e)
        .filter(|&e| e != ei)
        .collect();
    let (lower_edge, upper_edge) = if topo.edge(others[0]).upper.0 == si {
        (others[0], others[1])
    } else {
        (others[1], others[0])
    };
    debug_assert_eq!(topo.edge(upper_edge).lower.0, si);

    let lo = &tree.edges[lower_edge];
    let hi = &tree.edges[upper_edge];
    let cost = tree.edges[ei].marks.len();
    let mut marks = lo.marks.clone();
    marks.extend(tree.edges[ei].marks.iter().cloned());
    marks.extend(hi.marks.iter().cloned());
    let fused = new_edge(lo.id.clone(), lo.lower.clone(), hi.upper.clone(), marks);

    let mut out = LevelTree {
        vertices: Vec::with_capacity(tree.vertices.len() - 2),
        edges: Vec::with_capacity(tree.edges.len() - 2),
    };
    for (i, v) in tree.vertices.iter().enumerate() {
        if i != si && i != cap_vertex {
            out.vertices.push(v.clone());
        }
    }
    for (i, e) in tree.edges.iter().enumerate() {
        if i == lower_edge {
            out.edges.push(fused.clone());
        } else if i != ei && i != upper_edge {
            out.edges.push(e.clone());
        }
    }
    (out, cost)
}

/// Replaces a non-standard saddle whose two pair sides are each a two-saddle
/// standard block with one marked cap by a single cap on its join edge
/// carrying one mark. Removes five saddles and one mark.
pub fn reduce_five(tree: &LevelTree, saddle: &str) -> Result<LevelTree> {
    let topo = Topology::from_tree(tree)?;
    let si = vertex_index(tree, saddle)?;
    if !topo.is_saddle(si) {
        return Err(Error::NotASaddle(saddle.to_string()));
    }
    let miss = |clause: String| Err(Error::PatternNotFound(clause));
    if topo.is_standard(si) {
        return miss(format!("saddle {saddle} is standard"));
    }

    let mut doomed_vertices = vec![si];
    let mut doomed_edges = Vec::new();
    for port in [Port::PairA, Port::PairB] {
        let e = topo.port_edge(si, port);
        let (start, _) = topo.other_end(e, si);
        let (verts, mut edges) = topo.component_beyond(start, e);
        edges.push(e);
        let saddles: Vec<usize> = verts.iter().copied().filter(|&v| topo.is_saddle(v)).collect();
        if saddles.len() != 2 {
            return miss(format!(
                "{port} side of {saddle} holds {} saddles, expected 2",
                saddles.len()
            ));
        }
        if let Some(&v) = saddles.iter().find(|&&v| !topo.is_standard(v)) {
            return miss(format!(
                "saddle {} on the {port} side of {saddle} is not standard",
                tree.vertices[v].id
            ));
        }
        let outermost = edges.iter().filter(|&&x| topo.outermost_saddle(x).is_some()).count();
        if outermost != 1 {
            return miss(format!(
                "{port} side of {saddle} has {outermost} outermost edges, expected 1"
            ));
        }
        let marks: usize = edges.iter().map(|&x| topo.edge(x).marks).sum();
        if marks != 1 {
            return miss(format!("{port} side of {saddle} carries {marks} marks, expected 1"));
        }
        doomed_vertices.extend(verts);
        doomed_edges.extend(edges);
    }

    let join = topo.port_edge(si, Port::Join);
    let mut fresh = Fresh::new(tree);
    let z = fresh.id("z");
    let mark = MarkPoint::new(fresh.id("x"));
    let mut rewired = tree.edges[join].clone();
    let new_kind = if topo.edge(join).upper.0 == si {
        rewired.upper = Endpoint::new(&z, Port::Cap);
        rewired.marks.push(mark);
        VertexKind::Max
    } else {
        rewired.lower = Endpoint::new(&z, Port::Cap);
        rewired.marks.insert(0, mark);
        VertexKind::Min
    };

    let doomed_vertices: HashSet<usize> = doomed_vertices.into_iter().collect();
    let doomed_edges: HashSet<usize> = doomed_edges.into_iter().collect();
    let mut out = LevelTree::default();
    for (i, v) in tree.vertices.iter().enumerate() {
        if !doomed_vertices.contains(&i) {
            out.vertices.push(v.clone());
        }
    }
    out.vertices.push(Vertex {
        id: z,
        kind: new_kind,
    });
    for (i, e) in tree.edges.iter().enumerate() {
        if i == join {
            out.edges.push(rewired.clone());
        } else if !doomed_edges.contains(&i) {
            out.edges.push(e.clone());
        }
    }
    debug_assert!(out.is_valid());
    Ok(out)
}

/// Cancels saddles one at a time until none is left, recording each step.
pub fn eliminate_all(
    tree: &LevelTree,
    strategy: EliminationStrategy,
) -> Result<(LevelTree, EliminationLedger)> {
    ensure_valid(tree)?;
    let EliminationStrategy::MinCostOutermost = strategy;
    let mut current = tree.clone();
    let mut ledger = EliminationLedger::default();
    loop {
        let topo = Topology::from_valid_tree(&current);
        let Some((si, ei)) = topo
            .outermost()
            .into_iter()
            .min_by_key(|&(_, e)| (topo.edge(e).marks, e))
        else {
            break;
        };
        let saddle = current.vertices[si].id.clone();
        let (next, cost) = eliminate_at(&current, &topo, si, ei);
        ledger.push(saddle, cost);
        current = next;
    }
    Ok((current, ledger))
}
