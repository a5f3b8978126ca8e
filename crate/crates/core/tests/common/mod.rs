//! Independent oracles shared by the integration tests. Nothing here goes
//! through the library's canonical codes or enumerator.

#![allow(dead_code)]

pub mod suites;

use std::collections::{BTreeMap, HashMap, VecDeque};

use follab_core::{Edge, Endpoint, LevelTree, MarkPoint, Port, Side, Vertex, VertexKind};
use rand::Rng;

fn port_class(p: Port) -> u8 {
    match p {
        Port::Cap => 0,
        Port::PairA | Port::PairB => 1,
        Port::Join => 2,
    }
}

/// (neighbour, port class here, port class there, marks, this end is lower)
type Arc = (usize, u8, u8, usize, bool);

struct Graph {
    kinds: Vec<VertexKind>,
    adj: Vec<Vec<Arc>>,
}

fn graph(t: &LevelTree) -> Graph {
    let index: HashMap<&str, usize> = t.vertices.iter().enumerate().map(|(i, v)| (v.id.as_str(), i)).collect();
    let mut adj = vec![Vec::new(); t.vertices.len()];
    for e in &t.edges {
        let lo = index[e.lower.vertex.as_str()];
        let hi = index[e.upper.vertex.as_str()];
        let (pl, pu) = (port_class(e.lower.port), port_class(e.upper.port));
        adj[lo].push((hi, pl, pu, e.marks.len(), true));
        adj[hi].push((lo, pu, pl, e.marks.len(), false));
    }
    Graph {
        kinds: t.vertices.iter().map(|v| v.kind).collect(),
        adj,
    }
}

/// Brute-force isomorphism of level trees: a kind-preserving vertex
/// bijection carrying edges to edges with the same direction, port classes
/// (pair ports interchangeable) and mark counts.
pub fn isomorphic(a: &LevelTree, b: &LevelTree) -> bool {
    if a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    if a.vertices.is_empty() {
        return true;
    }
    let (ga, gb) = (graph(a), graph(b));
    let n = ga.kinds.len();

    // BFS order of `a` with the arc leading to each vertex from its parent.
    let mut order = vec![(0usize, None::<(usize, Arc)>)];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &arc in &ga.adj[v] {
            if !seen[arc.0] {
                seen[arc.0] = true;
                order.push((arc.0, Some((v, arc))));
                queue.push_back(arc.0);
            }
        }
    }
    if order.len() != n {
        return false;
    }

    fn extend(
        i: usize,
        order: &[(usize, Option<(usize, Arc)>)],
        ga: &Graph,
        gb: &Graph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let (v, via) = order[i];
        let candidates: Vec<usize> = match via {
            None => (0..gb.kinds.len()).collect(),
            Some((parent, (_, cp, cv, m, lower))) => gb.adj[map[parent]]
                .iter()
                .filter(|&&(_, dp, dv, dm, dl)| (dp, dv, dm, dl) == (cp, cv, m, lower))
                .map(|arc| arc.0)
                .collect(),
        };
        for w in candidates {
            if used[w] || gb.kinds[w] != ga.kinds[v] || gb.adj[w].len() != ga.adj[v].len() {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(i + 1, order, ga, gb, map, used) {
                return true;
            }
            used[w] = false;
        }
        false
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, &ga, &gb, &mut map, &mut used)
}

/// Cheap isomorphism invariant used to bucket candidates before the brute
/// force check.
fn invariant(t: &LevelTree) -> Vec<(VertexKind, Vec<(u8, u8, usize, bool)>)> {
    let g = graph(t);
    let mut sig: Vec<_> = (0..g.kinds.len())
        .map(|v| {
            let mut arcs: Vec<_> = g.adj[v].iter().map(|&(_, p, q, m, l)| (p, q, m, l)).collect();
            arcs.sort();
            (g.kinds[v], arcs)
        })
        .collect();
    sig.sort();
    sig
}

/// Isomorphism classes of a list of trees, first occurrence kept.
pub fn dedupe(trees: impl IntoIterator<Item = LevelTree>) -> Vec<LevelTree> {
    let mut buckets: HashMap<Vec<(VertexKind, Vec<(u8, u8, usize, bool)>)>, Vec<usize>> = HashMap::new();
    let mut out: Vec<LevelTree> = Vec::new();
    for t in trees {
        let bucket = buckets.entry(invariant(&t)).or_default();
        if bucket.iter().any(|&i| isomorphic(&out[i], &t)) {
            continue;
        }
        bucket.push(out.len());
        out.push(t);
    }
    out
}

fn side(kind: VertexKind, port: Port) -> Side {
    match (kind, port) {
        (VertexKind::Min, _) => Side::Above,
        (VertexKind::Max, _) => Side::Below,
        (VertexKind::SaddleUp, Port::Join) => Side::Above,
        (VertexKind::SaddleUp, _) => Side::Below,
        (VertexKind::SaddleDown, Port::Join) => Side::Below,
        (VertexKind::SaddleDown, _) => Side::Above,
    }
}

/// All labelled trees on `s` vertices with maximum degree three, as edge
/// lists, from Prüfer sequences.
fn saddle_trees(s: usize) -> Vec<Vec<(usize, usize)>> {
    match s {
        0 => return vec![],
        1 => return vec![vec![]],
        2 => return vec![vec![(0, 1)]],
        _ => {}
    }
    let len = s - 2;
    let mut out = Vec::new();
    let mut seq = vec![0usize; len];
    loop {
        let mut degree = vec![1usize; s];
        for &x in &seq {
            degree[x] += 1;
        }
        if degree.iter().all(|&d| d <= 3) {
            let mut edges = Vec::new();
            let mut deg = degree.clone();
            for &x in &seq {
                let leaf = (0..s).find(|&v| deg[v] == 1).unwrap();
                edges.push((leaf, x));
                deg[leaf] -= 1;
                deg[x] -= 1;
            }
            let rest: Vec<usize> = (0..s).filter(|&v| deg[v] == 1).collect();
            edges.push((rest[0], rest[1]));
            out.push(edges);
        }
        // next sequence
        let mut i = 0;
        loop {
            if i == len {
                return out;
            }
            seq[i] += 1;
            if seq[i] < s {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

/// Builds the unmarked tree for a saddle tree, saddle kinds and a choice of
/// join slot per saddle; `None` when some saddle-saddle edge would join two
/// ports on the same side.
fn assemble(s: usize, edges: &[(usize, usize)], up: &[bool], join_slot: &[usize]) -> Option<LevelTree> {
    if s == 0 {
        return Some(sphere_skeleton());
    }
    let kinds: Vec<VertexKind> = up
        .iter()
        .map(|&u| if u { VertexKind::SaddleUp } else { VertexKind::SaddleDown })
        .collect();
    // slots: saddle neighbours first (edge order), then leaves
    let mut slots: Vec<Vec<Option<usize>>> = vec![Vec::new(); s];
    for (i, &(a, b)) in edges.iter().enumerate() {
        slots[a].push(Some(i));
        slots[b].push(Some(i));
    }
    for sl in &mut slots {
        while sl.len() < 3 {
            sl.push(None);
        }
    }
    let mut port_of: Vec<Vec<Port>> = vec![Vec::new(); s];
    for v in 0..s {
        let mut pairs = [Port::PairA, Port::PairB].into_iter();
        port_of[v] = (0..3)
            .map(|slot| if slot == join_slot[v] { Port::Join } else { pairs.next().unwrap() })
            .collect();
    }

    let mut vertices: Vec<Vertex> = (0..s)
        .map(|v| Vertex {
            id: format!("s{v}"),
            kind: kinds[v],
        })
        .collect();
    let mut out_edges = Vec::new();
    let mut saddle_edge_ports: Vec<Option<(usize, Port)>> = vec![None; edges.len()];
    for v in 0..s {
        for (slot, entry) in slots[v].iter().enumerate() {
            let port = port_of[v][slot];
            match entry {
                Some(i) => match saddle_edge_ports[*i] {
                    None => saddle_edge_ports[*i] = Some((v, port)),
                    Some((u, pu)) => {
                        let (su, sv) = (side(kinds[u], pu), side(kinds[v], port));
                        if su == sv {
                            return None;
                        }
                        let ((lo, pl), (hi, ph)) =
                            if su == Side::Above { ((u, pu), (v, port)) } else { ((v, port), (u, pu)) };
                        out_edges.push(Edge {
                            id: format!("e{}", out_edges.len()),
                            lower: Endpoint::new(format!("s{lo}"), pl),
                            upper: Endpoint::new(format!("s{hi}"), ph),
                            marks: vec![],
                        });
                    }
                },
                None => {
                    let leaf = format!("l{}", vertices.len());
                    let (lower, upper, kind) = if side(kinds[v], port) == Side::Above {
                        (Endpoint::new(format!("s{v}"), port), Endpoint::new(leaf.clone(), Port::Cap), VertexKind::Max)
                    } else {
                        (Endpoint::new(leaf.clone(), Port::Cap), Endpoint::new(format!("s{v}"), port), VertexKind::Min)
                    };
                    vertices.push(Vertex { id: leaf, kind });
                    out_edges.push(Edge {
                        id: format!("e{}", out_edges.len()),
                        lower,
                        upper,
                        marks: vec![],
                    });
                }
            }
        }
    }
    Some(LevelTree {
        vertices,
        edges: out_edges,
    })
}

fn sphere_skeleton() -> LevelTree {
    LevelTree {
        vertices: vec![
            Vertex { id: "lo".into(), kind: VertexKind::Min },
            Vertex { id: "hi".into(), kind: VertexKind::Max },
        ],
        edges: vec![Edge {
            id: "e0".into(),
            lower: Endpoint::new("lo", Port::Cap),
            upper: Endpoint::new("hi", Port::Cap),
            marks: vec![],
        }],
    }
}

/// Every unmarked level tree with `s` saddles, up to isomorphism.
pub fn naive_skeletons(s: usize) -> Vec<LevelTree> {
    if s == 0 {
        return vec![sphere_skeleton()];
    }
    let mut all = Vec::new();
    for edges in saddle_trees(s) {
        for up_bits in 0..(1u32 << s) {
            let up: Vec<bool> = (0..s).map(|v| up_bits >> v & 1 == 1).collect();
            let mut joins = vec![0usize; s];
            loop {
                if let Some(t) = assemble(s, &edges, &up, &joins) {
                    all.push(t);
                }
                let mut i = 0;
                while i < s {
                    joins[i] += 1;
                    if joins[i] < 3 {
                        break;
                    }
                    joins[i] = 0;
                    i += 1;
                }
                if i == s {
                    break;
                }
            }
        }
    }
    dedupe(all)
}

fn is_leaf(t: &LevelTree, id: &str) -> bool {
    t.vertex(id).is_some_and(|v| !v.kind.is_saddle())
}

/// Admissibility straight from the definitions.
pub fn naive_admissible(t: &LevelTree) -> bool {
    let kind = |id: &str| t.vertex(id).unwrap().kind;
    // outermost edges: leaf edges at a pair port
    for e in &t.edges {
        let leaf_at_pair = (is_leaf(t, &e.lower.vertex) && e.upper.port.is_pair())
            || (is_leaf(t, &e.upper.vertex) && e.lower.port.is_pair());
        if leaf_at_pair && e.marks.is_empty() {
            return false;
        }
    }
    let standard = |v: &str| {
        t.edges.iter().any(|e| {
            let (here, there) = if e.lower.vertex == v && e.lower.port == Port::Join {
                (&e.lower, &e.upper)
            } else if e.upper.vertex == v && e.upper.port == Port::Join {
                (&e.upper, &e.lower)
            } else {
                return false;
            };
            let _ = here;
            e.marks.is_empty() && is_leaf(t, &there.vertex)
        })
    };
    let adjacent = |a: &str, b: &str| {
        t.edges.iter().any(|e| {
            e.marks.is_empty()
                && e.lower.port.is_pair()
                && e.upper.port.is_pair()
                && ((e.lower.vertex == a && e.upper.vertex == b) || (e.lower.vertex == b && e.upper.vertex == a))
        })
    };
    let saddles: Vec<&str> = t.vertices.iter().filter(|v| kind(&v.id).is_saddle()).map(|v| v.id.as_str()).collect();
    for &m in &saddles {
        if !standard(m) {
            continue;
        }
        for &a in &saddles {
            for &b in &saddles {
                if a != b && a != m && b != m && standard(a) && standard(b) && adjacent(a, m) && adjacent(m, b) {
                    return false;
                }
            }
        }
    }
    true
}

/// All ways to put `k` marks on the edges of `skel`.
pub fn all_markings(skel: &LevelTree, k: usize) -> Vec<LevelTree> {
    let n = skel.edges.len();
    let mut out = Vec::new();
    let mut counts = vec![0usize; n];
    fn rec(i: usize, left: usize, counts: &mut Vec<usize>, skel: &LevelTree, out: &mut Vec<LevelTree>) {
        if i + 1 == counts.len() {
            counts[i] = left;
            let mut t = skel.clone();
            let mut next = 0;
            for (e, &c) in t.edges.iter_mut().zip(counts.iter()) {
                for _ in 0..c {
                    e.marks.push(MarkPoint::new(format!("x{next}")));
                    next += 1;
                }
            }
            out.push(t);
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            rec(i + 1, left - c, counts, skel, out);
        }
    }
    rec(0, k, &mut counts, skel, &mut out);
    out
}

/// Admissible classes with `k` marks and exactly `s` saddles, by generating
/// every marked tree and filtering.
pub fn naive_census(k: usize, s: usize) -> Vec<LevelTree> {
    let mut found = Vec::new();
    for skel in naive_skeletons(s) {
        found.extend(all_markings(&skel, k).into_iter().filter(naive_admissible));
    }
    dedupe(found)
}

/// Random valid tree with about `s` saddles and `k` marks: a random saddle
/// tree, random kinds and join slots (resampled until consistent), random
/// mark placement and shuffled vertex/edge order.
pub fn random_tree<R: Rng>(rng: &mut R, s: usize, k: usize) -> LevelTree {
    let mut tree = loop {
        let edges: Vec<(usize, usize)> = if s < 2 {
            vec![]
        } else {
            // random Prüfer sequence with degrees capped at three
            loop {
                let seq: Vec<usize> = (0..s - 2).map(|_| rng.gen_range(0..s)).collect();
                let mut degree = vec![1usize; s];
                for &x in &seq {
                    degree[x] += 1;
                }
                if degree.iter().any(|&d| d > 3) {
                    continue;
                }
                let mut deg = degree;
                let mut edges = Vec::new();
                for &x in &seq {
                    let leaf = (0..s).find(|&v| deg[v] == 1).unwrap();
                    edges.push((leaf, x));
                    deg[leaf] -= 1;
                    deg[x] -= 1;
                }
                let rest: Vec<usize> = (0..s).filter(|&v| deg[v] == 1).collect();
                edges.push((rest[0], rest[1]));
                break edges;
            }
        };
        let up: Vec<bool> = (0..s).map(|_| rng.gen()).collect();
        let joins: Vec<usize> = (0..s).map(|_| rng.gen_range(0..3)).collect();
        if let Some(t) = assemble(s, &edges, &up, &joins) {
            break t;
        }
    };
    let n = tree.edges.len();
    for i in 0..k {
        let e = rng.gen_range(0..n);
        let marks = &mut tree.edges[e].marks;
        let at = rng.gen_range(0..=marks.len());
        marks.insert(at, MarkPoint::new(format!("m{i}")));
    }
    use rand::seq::SliceRandom;
    tree.vertices.shuffle(rng);
    tree.edges.shuffle(rng);
    tree
}

/// Mark count per edge id, for comparing trees edge by edge.
pub fn marks_by_edge(t: &LevelTree) -> BTreeMap<String, usize> {
    t.edges.iter().map(|e| (e.id.clone(), e.marks.len())).collect()
}
