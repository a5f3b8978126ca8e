//! Canonical codes for level trees up to relabeling.
//!
//! The code is an AHU-style encoding rooted at the tree center. Vertex kinds,
//! port classes (`cap`, `pair`, `join`) at both ends of each edge, and mark
//! multiplicities enter the encoding; ids, the `PairA`/`PairB` distinction,
//! mark order and germ annotations do not.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::level_tree::{Edge, Endpoint, LevelTree, MarkPoint, Port, Vertex, VertexKind};
use crate::topology::{Topology, NO_EDGE};

/// Isomorphism-invariant byte string. Always ASCII.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("canonical codes are ascii")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if !s.is_ascii() {
            return Err(serde::de::Error::custom("canonical code must be ascii"));
        }
        Ok(CanonicalCode(s.into_bytes()))
    }
}

pub fn canonical_form(tree: &LevelTree) -> Result<CanonicalCode> {
    Ok(code_of(&Topology::from_tree(tree)?))
}

/// Smaller of the codes of the tree and of its flip: a complete invariant for
/// isomorphism combined with `h -> -h`.
pub fn canonical_form_mod_flip(tree: &LevelTree) -> Result<CanonicalCode> {
    let topo = Topology::from_tree(tree)?;
    Ok(code_mod_flip(&topo))
}

/// The tree relabeled in canonical order (`v0..`, `e0..`, `x0..`). Isomorphic
/// inputs give identical outputs. Germ annotations are dropped.
pub fn canonical_representative(tree: &LevelTree) -> Result<LevelTree> {
    Ok(representative_of(&Topology::from_tree(tree)?))
}

fn kind_byte(kind: VertexKind) -> u8 {
    match kind {
        VertexKind::Min => b'n',
        VertexKind::Max => b'x',
        VertexKind::SaddleUp => b'u',
        VertexKind::SaddleDown => b'd',
    }
}

fn port_byte(port: Port) -> u8 {
    match port {
        Port::Cap => b'c',
        Port::PairA | Port::PairB => b'p',
        Port::Join => b'j',
    }
}

/// Encodes the subtree hanging below `v` when entered through `parent`.
/// When `order` is given, records for every vertex its child edges sorted by
/// child code.
fn encode(
    topo: &Topology,
    v: usize,
    parent: usize,
    mut order: Option<&mut Vec<Vec<usize>>>,
) -> Vec<u8> {
    let mut children: Vec<(Vec<u8>, usize)> = Vec::with_capacity(3);
    for (port, e) in topo.incident(v) {
        if e == parent {
            continue;
        }
        let (c, cport) = topo.other_end(e, v);
        let mut child = vec![b'(', port_byte(port), port_byte(cport)];
        child.extend(topo.edge(e).marks.to_string().bytes());
        child.push(b':');
        child.extend(encode(topo, c, e, order.as_deref_mut()));
        child.push(b')');
        children.push((child, e));
    }
    children.sort();
    if let Some(order) = order {
        order[v] = children.iter().map(|(_, e)| *e).collect();
    }
    let mut out = vec![kind_byte(topo.kind(v))];
    for (child, _) in children {
        out.extend(child);
    }
    out
}

fn centers(topo: &Topology) -> Vec<usize> {
    let n = topo.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| topo.incident(v).count()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for (_, e) in topo.incident(v) {
                let (w, _) = topo.other_end(e, v);
                if degree[w] > 1 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
            degree[v] = 0;
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn best_root(topo: &Topology) -> (usize, Vec<u8>) {
    centers(topo)
        .into_iter()
        .map(|c| (c, encode(topo, c, NO_EDGE, None)))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty tree has a center")
}

pub(crate) fn code_of(topo: &Topology) -> CanonicalCode {
    CanonicalCode(best_root(topo).1)
}

pub(crate) fn code_mod_flip(topo: &Topology) -> CanonicalCode {
    code_of(topo).min(code_of(&topo.flipped()))
}

pub(crate) fn representative_of(topo: &Topology) -> LevelTree {
    let (root, _) = best_root(topo);
    let mut order = vec![Vec::new(); topo.vertex_count()];
    encode(topo, root, NO_EDGE, Some(&mut order));

    // preorder walk assigning ids and renaming pair ports in visiting order
    let mut vid = vec![usize::MAX; topo.vertex_count()];
    let mut port_name: Vec<[Port; 2]> = vec![[Port::Cap; 2]; topo.edge_count()];
    let mut visit_edges = Vec::new();
    let mut vorder = Vec::new();
    let mut stack = vec![(root, NO_EDGE)];
    while let Some((v, via)) = stack.pop() {
        vid[v] = vorder.len();
        vorder.push(v);
        let mut next_pair = [Port::PairA, Port::PairB].into_iter();
        let mut name = |e: usize, port: Port, names: &mut Vec<[Port; 2]>| {
            let renamed = if port.is_pair() {
                next_pair.next().expect("two pair ports")
            } else {
                port
            };
            let slot = if topo.edge(e).lower.0 == v { 0 } else { 1 };
            names[e][slot] = renamed;
        };
        if via != NO_EDGE {
            let port = if topo.edge(via).lower.0 == v {
                topo.edge(via).lower.1
            } else {
                topo.edge(via).upper.1
            };
            name(via, port, &mut port_name);
        }
        for &e in &order[v] {
            let port = if topo.edge(e).lower.0 == v {
                topo.edge(e).lower.1
            } else {
                topo.edge(e).upper.1
            };
            name(e, port, &mut port_name);
            visit_edges.push(e);
        }
        for &e in order[v].iter().rev() {
            stack.push((topo.other_end(e, v).0, e));
        }
    }
    // edges in the order their lower-numbered endpoint was visited
    visit_edges.sort_by_key(|&e| {
        let edge = topo.edge(e);
        let (a, b) = (vid[edge.lower.0], vid[edge.upper.0]);
        (a.min(b), a.max(b))
    });

    let vertices = vorder
        .iter()
        .enumerate()
        .map(|(i, &v)| Vertex {
            id: format!("v{i}"),
            kind: topo.kind(v),
        })
        .collect();
    let mut mark_id = 0;
    let edges = visit_edges
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let edge = topo.edge(e);
            let marks = (0..edge.marks)
                .map(|_| {
                    mark_id += 1;
                    MarkPoint::new(format!("x{}", mark_id - 1))
                })
                .collect();
            Edge {
                id: format!("e{i}"),
                lower: Endpoint::new(format!("v{}", vid[edge.lower.0]), port_name[e][0]),
                upper: Endpoint::new(format!("v{}", vid[edge.upper.0]), port_name[e][1]),
                marks,
            }
        })
        .collect();
    LevelTree { vertices, edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{t0, t1, t2, t3bad, t5};
    use crate::level_tree::{flip, validate};

    fn scrambled_t2() -> LevelTree {
        // ids renamed, vertex/edge order shuffled, pair ports swapped at sigma
        let mut t = t2();
        for v in &mut t.vertices {
            v.id = format!("Z{}", v.id);
        }
        for e in &mut t.edges {
            e.id = format!("Q{}", e.id);
            for end in [&mut e.lower, &mut e.upper] {
                end.vertex = format!("Z{}", end.vertex);
                if end.vertex == "Zsigma" {
                    end.port = match end.port {
                        Port::PairA => Port::PairB,
                        Port::PairB => Port::PairA,
                        p => p,
                    };
                }
            }
            for m in &mut e.marks {
                m.id = format!("M{}", m.id);
            }
        }
        t.vertices.reverse();
        t.edges.rotate_left(2);
        t
    }

    #[test]
    fn relabeling_invariance() {
        let a = canonical_form(&t2()).unwrap();
        let b = canonical_form(&scrambled_t2()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mark_count_distinguishes() {
        assert_ne!(canonical_form(&t0(2)).unwrap(), canonical_form(&t0(3)).unwrap());
    }

    #[test]
    fn flip_is_not_an_isomorphism_for_t1() {
        let t = t1();
        let f = flip(&t).unwrap();
        assert_ne!(canonical_form(&t).unwrap(), canonical_form(&f).unwrap());
        assert_eq!(
            canonical_form_mod_flip(&t).unwrap(),
            canonical_form_mod_flip(&f).unwrap()
        );
        // t0 is symmetric
        assert_eq!(
            canonical_form(&t0(4)).unwrap(),
            canonical_form(&flip(&t0(4)).unwrap()).unwrap()
        );
    }

    #[test]
    fn representative_is_valid_and_stable() {
        for t in [t0(2), t1(), t2(), t3bad(), t5(), scrambled_t2()] {
            let r = canonical_representative(&t).unwrap();
            assert!(validate(&r).is_valid(), "{}", validate(&r));
            assert_eq!(canonical_form(&r).unwrap(), canonical_form(&t).unwrap());
            assert_eq!(canonical_representative(&r).unwrap(), r);
        }
        assert_eq!(
            canonical_representative(&t2()).unwrap(),
            canonical_representative(&scrambled_t2()).unwrap()
        );
    }

    #[test]
    fn invalid_tree_rejected() {
        let mut t = t1();
        t.edges.pop();
        assert!(canonical_form(&t).is_err());
    }

    #[test]
    fn codes_are_ascii_json_strings() {
        let c = canonical_form(&t2()).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: CanonicalCode = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
