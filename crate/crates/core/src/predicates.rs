//! Saddle taxonomy and the admissibility predicate, evaluated on a level tree.
//!
//! An *outermost* edge is a leaf edge attached to a saddle's pair port; its
//! cap is the outermost disk of that saddle. A saddle is *standard* when its
//! join edge is an unmarked leaf edge. Two saddles are *adjacent* when an
//! unmarked edge joins a pair port of one to a pair port of the other; edges
//! touching a join port never make saddles adjacent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level_tree::{Germ, LevelTree, Port};
use crate::topology::Topology;

/// A saddle with its two pair-side edges and its join edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaddleView {
    pub saddle: String,
    pub pair_edges: [String; 2],
    pub join_edge: String,
}

pub fn saddle_view(tree: &LevelTree, saddle: &str) -> Result<SaddleView> {
    let topo = Topology::from_tree(tree)?;
    let v = saddle_index(tree, &topo, saddle)?;
    let name = |port| tree.edges[topo.port_edge(v, port)].id.clone();
    Ok(SaddleView {
        saddle: saddle.to_string(),
        pair_edges: [name(Port::PairA), name(Port::PairB)],
        join_edge: name(Port::Join),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    UnmarkedOutermostDisk,
    StandardThreeChain,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::UnmarkedOutermostDisk => f.write_str("UnmarkedOutermostDisk"),
            ViolationKind::StandardThreeChain => f.write_str("StandardThreeChain"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityViolation {
    pub kind: ViolationKind,
    pub witness: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub violations: Vec<AdmissibilityViolation>,
}

impl fmt::Display for AdmissibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.admissible {
            return writeln!(f, "admissible");
        }
        writeln!(f, "not admissible")?;
        for v in &self.violations {
            writeln!(f, "  {} [{}]", v.kind, v.witness.join(", "))?;
        }
        Ok(())
    }
}

fn saddle_index(tree: &LevelTree, topo: &Topology, id: &str) -> Result<usize> {
    let v = tree
        .vertices
        .iter()
        .position(|v| v.id == id)
        .ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
    if !topo.is_saddle(v) {
        return Err(Error::NotASaddle(id.to_string()));
    }
    Ok(v)
}

fn outermost_index(tree: &LevelTree, topo: &Topology, saddle: &str, edge: &str) -> Result<usize> {
    let witness = || Error::InvalidWitness {
        saddle: saddle.to_string(),
        edge: edge.to_string(),
    };
    let e = tree
        .edges
        .iter()
        .position(|e| e.id == edge)
        .ok_or_else(witness)?;
    match topo.outermost_saddle(e) {
        Some(s) if tree.vertices[s].id == saddle => Ok(e),
        _ => Err(witness()),
    }
}

/// `(saddle, edge)` for every outermost edge, in edge order.
pub fn outermost_edges(tree: &LevelTree) -> Result<Vec<(String, String)>> {
    let topo = Topology::from_tree(tree)?;
    Ok(topo
        .outermost()
        .into_iter()
        .map(|(s, e)| (tree.vertices[s].id.clone(), tree.edges[e].id.clone()))
        .collect())
}

pub fn is_inessential(tree: &LevelTree, saddle: &str, edge: &str) -> Result<bool> {
    let topo = Topology::from_tree(tree)?;
    let e = outermost_index(tree, &topo, saddle, edge)?;
    Ok(tree.edges[e].marks.is_empty())
}

pub fn is_standard(tree: &LevelTree, saddle: &str) -> Result<bool> {
    let topo = Topology::from_tree(tree)?;
    let v = saddle_index(tree, &topo, saddle)?;
    Ok(topo.is_standard(v))
}

/// Adjacent saddles as `(lower, upper)` along the connecting edge, in edge
/// order. The pairs are unordered in meaning.
pub fn adjacent_pairs(tree: &LevelTree) -> Result<Vec<(String, String)>> {
    let topo = Topology::from_tree(tree)?;
    Ok(topo
        .adjacent_pairs()
        .into_iter()
        .map(|(a, b)| (tree.vertices[a].id.clone(), tree.vertices[b].id.clone()))
        .collect())
}

/// Three distinct standard saddles `(a, middle, b)` with `a ~ middle ~ b`.
pub fn standard_three_chain(tree: &LevelTree) -> Result<Option<(String, String, String)>> {
    let topo = Topology::from_tree(tree)?;
    let id = |v: usize| tree.vertices[v].id.clone();
    Ok(topo.three_chain().map(|(a, m, b)| (id(a), id(m), id(b))))
}

pub fn is_admissible(tree: &LevelTree) -> Result<AdmissibilityReport> {
    let topo = Topology::from_tree(tree)?;
    let mut violations = Vec::new();
    for (s, e) in topo.outermost() {
        if topo.edge(e).marks == 0 {
            violations.push(AdmissibilityViolation {
                kind: ViolationKind::UnmarkedOutermostDisk,
                witness: vec![tree.edges[e].id.clone(), tree.vertices[s].id.clone()],
            });
        }
    }
    if let Some((a, m, b)) = topo.three_chain() {
        violations.push(AdmissibilityViolation {
            kind: ViolationKind::StandardThreeChain,
            witness: [a, m, b].iter().map(|&v| tree.vertices[v].id.clone()).collect(),
        });
    }
    Ok(AdmissibilityReport {
        admissible: violations.is_empty(),
        violations,
    })
}

/// Whether every mark on the outermost edge is a local end-point extremum of
/// the strand on the cap side. Germs are not derived; every mark on the edge
/// must carry one.
pub fn is_removable(tree: &LevelTree, saddle: &str, edge: &str) -> Result<bool> {
    let topo = Topology::from_tree(tree)?;
    let e = outermost_index(tree, &topo, saddle, edge)?;
    let mut all_endpoint = true;
    for m in &tree.edges[e].marks {
        match m.germ {
            None => return Err(Error::AnnotationRequired(m.id.clone())),
            Some(Germ::EndpointExtremumOnCapSide) => {}
            Some(Germ::MonotoneThrough) => all_endpoint = false,
        }
    }
    Ok(all_endpoint)
}
