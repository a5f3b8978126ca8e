//! Index-based view of a valid level tree. Predicates, canonical codes and the
//! census all work on this form; ids only matter at the API boundary.

use crate::error::Result;
use crate::level_tree::{ensure_valid, FoliationStats, LevelTree, Port, Side, VertexKind};

pub(crate) const NO_EDGE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct TEdge {
    pub lower: (usize, Port),
    pub upper: (usize, Port),
    pub marks: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Topology {
    kinds: Vec<VertexKind>,
    /// Edge index per port slot (see `Port::slot`), `NO_EDGE` when unused.
    ports: Vec<[usize; 3]>,
    edges: Vec<TEdge>,
}

impl Topology {
    pub fn from_tree(tree: &LevelTree) -> Result<Topology> {
        ensure_valid(tree)?;
        Ok(Self::from_valid_tree(tree))
    }

    pub fn from_valid_tree(tree: &LevelTree) -> Topology {
        let index = |id: &str| {
            tree.vertices
                .iter()
                .position(|v| v.id == id)
                .expect("validated tree")
        };
        let kinds = tree.vertices.iter().map(|v| v.kind).collect();
        let edges = tree
            .edges
            .iter()
            .map(|e| TEdge {
                lower: (index(&e.lower.vertex), e.lower.port),
                upper: (index(&e.upper.vertex), e.upper.port),
                marks: e.marks.len(),
            })
            .collect();
        Self::from_parts(kinds, edges)
    }

    pub fn from_parts(kinds: Vec<VertexKind>, edges: Vec<TEdge>) -> Topology {
        let mut ports = vec![[NO_EDGE; 3]; kinds.len()];
        for (i, e) in edges.iter().enumerate() {
            ports[e.lower.0][e.lower.1.slot()] = i;
            ports[e.upper.0][e.upper.1.slot()] = i;
        }
        Topology {
            kinds,
            ports,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, v: usize) -> VertexKind {
        self.kinds[v]
    }

    pub fn edges(&self) -> &[TEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: usize) -> &TEdge {
        &self.edges[e]
    }

    pub fn set_marks(&mut self, e: usize, marks: usize) {
        self.edges[e].marks = marks;
    }

    pub fn port_edge(&self, v: usize, port: Port) -> usize {
        self.ports[v][port.slot()]
    }

    /// Edges incident to `v` together with the port they use at `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (Port, usize)> + '_ {
        self.kinds[v]
            .ports()
            .iter()
            .map(move |&p| (p, self.ports[v][p.slot()]))
            .filter(|&(_, e)| e != NO_EDGE)
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: usize, v: usize) -> (usize, Port) {
        let edge = &self.edges[e];
        if edge.lower.0 == v {
            edge.upper
        } else {
            edge.lower
        }
    }

    pub fn is_saddle(&self, v: usize) -> bool {
        self.kinds[v].is_saddle()
    }

    pub fn saddles(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.kinds.len()).filter(|&v| self.is_saddle(v))
    }

    pub fn saddle_count(&self) -> usize {
        self.saddles().count()
    }

    pub fn mark_count(&self) -> usize {
        self.edges.iter().map(|e| e.marks).sum()
    }

    /// Saddle end of a leaf edge attached at a pair port, if `e` is one.
    pub fn outermost_saddle(&self, e: usize) -> Option<usize> {
        let edge = &self.edges[e];
        let (lo, hi) = (edge.lower, edge.upper);
        if self.is_saddle(lo.0) && lo.1.is_pair() && !self.is_saddle(hi.0) {
            Some(lo.0)
        } else if self.is_saddle(hi.0) && hi.1.is_pair() && !self.is_saddle(lo.0) {
            Some(hi.0)
        } else {
            None
        }
    }

    /// Leaf edges attached to a pair port, as `(saddle, edge)` in edge order.
    pub fn outermost(&self) -> Vec<(usize, usize)> {
        (0..self.edges.len())
            .filter_map(|e| self.outermost_saddle(e).map(|s| (s, e)))
            .collect()
    }

    pub fn pair_leaf_count(&self) -> usize {
        (0..self.edges.len())
            .filter(|&e| self.outermost_saddle(e).is_some())
            .count()
    }

    /// The join edge is an unmarked leaf edge.
    pub fn is_standard(&self, v: usize) -> bool {
        debug_assert!(self.is_saddle(v));
        let e = self.port_edge(v, Port::Join);
        let (other, _) = self.other_end(e, v);
        self.edges[e].marks == 0 && !self.is_saddle(other)
    }

    /// Unmarked edge between pair ports of two saddles.
    pub fn is_adjacency_edge(&self, e: usize) -> bool {
        let edge = &self.edges[e];
        edge.marks == 0
            && self.is_saddle(edge.lower.0)
            && self.is_saddle(edge.upper.0)
            && edge.lower.1.is_pair()
            && edge.upper.1.is_pair()
    }

    pub fn adjacent_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.edges.len())
            .filter(|&e| self.is_adjacency_edge(e))
            .map(|e| (self.edges[e].lower.0, self.edges[e].upper.0))
            .collect()
    }

    /// First chain `(a, middle, b)` of distinct standard saddles with `a`
    /// adjacent to `middle` and `middle` adjacent to `b`, scanning middles in
    /// vertex order.
    pub fn three_chain(&self) -> Option<(usize, usize, usize)> {
        for mid in self.saddles() {
            if !self.is_standard(mid) {
                continue;
            }
            let mut found = [0usize; 2];
            let mut count = 0;
            for port in [Port::PairA, Port::PairB] {
                let e = self.port_edge(mid, port);
                if !self.is_adjacency_edge(e) {
                    continue;
                }
                let (nb, _) = self.other_end(e, mid);
                if self.is_standard(nb) {
                    found[count] = nb;
                    count += 1;
                }
            }
            if count == 2 {
                return Some((found[0], mid, found[1]));
            }
        }
        None
    }

    /// Lower bound on the marks still needed to break every three-chain.
    ///
    /// Standard saddles linked by adjacency edges form disjoint paths (each
    /// saddle has two pair ports), and a path of `L` saddles needs at least
    /// `L / 3` marks: its windows `1..=3, 4..=6, ...` are disjoint chains.
    pub fn chain_marks_needed(&self) -> usize {
        let standard_nbrs = |v: usize| {
            [Port::PairA, Port::PairB].into_iter().filter_map(move |port| {
                let e = self.port_edge(v, port);
                if !self.is_adjacency_edge(e) {
                    return None;
                }
                let (nb, _) = self.other_end(e, v);
                self.is_standard(nb).then_some(nb)
            })
        };
        let mut seen = vec![false; self.kinds.len()];
        let mut needed = 0;
        for v in self.saddles() {
            if seen[v] || !self.is_standard(v) || standard_nbrs(v).count() == 2 {
                continue;
            }
            // walk the path from its end `v`
            let (mut prev, mut cur, mut len) = (usize::MAX, v, 0);
            loop {
                seen[cur] = true;
                len += 1;
                match standard_nbrs(cur).find(|&nb| nb != prev) {
                    Some(next) => (prev, cur) = (cur, next),
                    None => break,
                }
            }
            needed += len / 3;
        }
        needed
    }

    pub fn is_admissible(&self) -> bool {
        self.outermost().iter().all(|&(_, e)| self.edges[e].marks > 0) && self.three_chain().is_none()
    }

    pub fn stats(&self) -> FoliationStats {
        let s = self.saddle_count();
        FoliationStats {
            k: self.mark_count(),
            s,
            m: self.kinds.len() - s,
            outermost_count: self.pair_leaf_count(),
        }
    }

    /// Vertices of the component containing `start` once `cut` is removed.
    pub fn component_beyond(&self, start: usize, cut: usize) -> (Vec<usize>, Vec<usize>) {
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut stack = vec![(start, cut)];
        while let Some((v, from)) = stack.pop() {
            for (_, e) in self.incident(v) {
                if e == from {
                    continue;
                }
                edges.push(e);
                let (w, _) = self.other_end(e, v);
                vertices.push(w);
                stack.push((w, e));
            }
        }
        (vertices, edges)
    }

    /// Replaces the extremum `leaf` by a saddle attached to its edge through
    /// a join port (`via_join`) or a pair port, adding fresh extremum leaves
    /// on the two remaining ports. The leaf keeps its index.
    pub fn grow_at_leaf(&self, leaf: usize, via_join: bool) -> Topology {
        debug_assert!(!self.is_saddle(leaf));
        let e = self.ports[leaf][0];
        let leaf_is_upper = self.edges[e].upper.0 == leaf;
        // the new saddle's port on this edge must face the same way the cap did
        let side = if leaf_is_upper { Side::Below } else { Side::Above };
        let kind = match (side, via_join) {
            (Side::Below, false) | (Side::Above, true) => VertexKind::SaddleUp,
            (Side::Above, false) | (Side::Below, true) => VertexKind::SaddleDown,
        };
        let (attach, rest) = if via_join {
            (Port::Join, [Port::PairA, Port::PairB])
        } else {
            (Port::PairA, [Port::PairB, Port::Join])
        };
        let mut kinds = self.kinds.clone();
        let mut edges = self.edges.clone();
        kinds[leaf] = kind;
        if leaf_is_upper {
            edges[e].upper.1 = attach;
        } else {
            edges[e].lower.1 = attach;
        }
        for port in rest {
            let fresh = kinds.len();
            match kind.port_side(port).expect("saddle port") {
                Side::Above => {
                    kinds.push(VertexKind::Max);
                    edges.push(TEdge {
                        lower: (leaf, port),
                        upper: (fresh, Port::Cap),
                        marks: 0,
                    });
                }
                Side::Below => {
                    kinds.push(VertexKind::Min);
                    edges.push(TEdge {
                        lower: (fresh, Port::Cap),
                        upper: (leaf, port),
                        marks: 0,
                    });
                }
            }
        }
        Topology::from_parts(kinds, edges)
    }

    /// Saddle-free sphere with `k` marks.
    pub fn sphere(k: usize) -> Topology {
        Topology::from_parts(
            vec![VertexKind::Min, VertexKind::Max],
            vec![TEdge {
                lower: (0, Port::Cap),
                upper: (1, Port::Cap),
                marks: k,
            }],
        )
    }

    pub fn flipped(&self) -> Topology {
        Topology::from_parts(
            self.kinds.iter().map(|k| k.flipped()).collect(),
            self.edges
                .iter()
                .map(|e| TEdge {
                    lower: e.upper,
                    upper: e.lower,
                    marks: e.marks,
                })
                .collect(),
        )
    }
}
