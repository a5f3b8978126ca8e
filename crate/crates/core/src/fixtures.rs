//! Small reference trees used throughout the tests, the CLI examples and the
//! README.

use crate::level_tree::{Edge, Endpoint, LevelTree, MarkPoint, Port, Vertex, VertexKind};

fn vertex(id: &str, kind: VertexKind) -> Vertex {
    Vertex {
        id: id.into(),
        kind,
    }
}

fn edge(id: &str, lower: (&str, Port), upper: (&str, Port), marks: &[&str]) -> Edge {
    Edge {
        id: id.into(),
        lower: Endpoint::new(lower.0, lower.1),
        upper: Endpoint::new(upper.0, upper.1),
        marks: marks.iter().map(|m| MarkPoint::new(*m)).collect(),
    }
}

/// Saddle-free sphere: one minimum `m`, one maximum `M`, a single edge `e`
/// carrying marks `x1..xk`.
pub fn t0(k: usize) -> LevelTree {
    let marks: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let marks: Vec<&str> = marks.iter().map(String::as_str).collect();
    LevelTree {
        vertices: vec![vertex("m", VertexKind::Min), vertex("M", VertexKind::Max)],
        edges: vec![edge("e", ("m", Port::Cap), ("M", Port::Cap), &marks)],
    }
}

/// One ascending saddle `sigma` joining two singly-marked minimum caps `a`,
/// `b` into an unmarked edge `c` to `max1`.
pub fn t1() -> LevelTree {
    use Port::*;
    LevelTree {
        vertices: vec![
            vertex("sigma", VertexKind::SaddleUp),
            vertex("min1", VertexKind::Min),
            vertex("min2", VertexKind::Min),
            vertex("max1", VertexKind::Max),
        ],
        edges: vec![
            edge("a", ("min1", Cap), ("sigma", PairA), &["x1"]),
            edge("b", ("min2", Cap), ("sigma", PairB), &["x2"]),
            edge("c", ("sigma", Join), ("max1", Cap), &[]),
        ],
    }
}

/// The two-saddle configuration with two marks: descending `sigma` and
/// ascending `tau` adjacent through the unmarked edge `e2`.
pub fn t2() -> LevelTree {
    use Port::*;
    LevelTree {
        vertices: vec![
            vertex("sigma", VertexKind::SaddleDown),
            vertex("tau", VertexKind::SaddleUp),
            vertex("max1", VertexKind::Max),
            vertex("max2", VertexKind::Max),
            vertex("min1", VertexKind::Min),
            vertex("min2", VertexKind::Min),
        ],
        edges: vec![
            edge("e1", ("sigma", PairA), ("max1", Cap), &["x1"]),
            edge("e2", ("sigma", PairB), ("tau", PairA), &[]),
            edge("e3", ("min1", Cap), ("tau", PairB), &["x2"]),
            edge("e4", ("tau", Join), ("max2", Cap), &[]),
            edge("e5", ("min2", Cap), ("sigma", Join), &[]),
        ],
    }
}

/// `t2` with `min1` replaced by a descending saddle `rho`, producing a chain
/// of three adjacent standard saddles.
pub fn t3bad() -> LevelTree {
    use Port::*;
    LevelTree {
        vertices: vec![
            vertex("sigma", VertexKind::SaddleDown),
            vertex("tau", VertexKind::SaddleUp),
            vertex("max1", VertexKind::Max),
            vertex("max2", VertexKind::Max),
            vertex("rho", VertexKind::SaddleDown),
            vertex("min2", VertexKind::Min),
            vertex("max3", VertexKind::Max),
            vertex("min3", VertexKind::Min),
        ],
        edges: vec![
            edge("e1", ("sigma", PairA), ("max1", Cap), &["x1"]),
            edge("e2", ("sigma", PairB), ("tau", PairA), &[]),
            edge("e3", ("rho", PairA), ("tau", PairB), &[]),
            edge("e4", ("tau", Join), ("max2", Cap), &[]),
            edge("e5", ("min2", Cap), ("sigma", Join), &[]),
            edge("e6", ("rho", PairB), ("max3", Cap), &["x2"]),
            edge("e7", ("min3", Cap), ("rho", Join), &[]),
        ],
    }
}

/// Five saddles, three marks: a non-standard descending saddle `nu` whose
/// join edge to `min0` carries one mark, and whose two pair sides are each a
/// chain of two standard saddles ending in a singly-marked cap.
pub fn t5() -> LevelTree {
    use Port::*;
    let mut vertices = vec![
        vertex("nu", VertexKind::SaddleDown),
        vertex("min0", VertexKind::Min),
    ];
    let mut edges = vec![edge("j", ("min0", Cap), ("nu", Join), &["x0"])];
    for (i, port) in [(1, PairA), (2, PairB)] {
        let alpha = format!("alpha{i}");
        let beta = format!("beta{i}");
        let top = format!("top{i}");
        let bottom = format!("bottom{i}");
        let cap = format!("cap{i}");
        vertices.extend([
            vertex(&alpha, VertexKind::SaddleUp),
            vertex(&beta, VertexKind::SaddleDown),
            vertex(&top, VertexKind::Max),
            vertex(&bottom, VertexKind::Min),
            vertex(&cap, VertexKind::Max),
        ]);
        let mark = format!("x{i}");
        edges.extend([
            edge(&format!("p{i}"), ("nu", port), (&alpha, PairA), &[]),
            edge(&format!("t{i}"), (&alpha, Join), (&top, Cap), &[]),
            edge(&format!("q{i}"), (&beta, PairA), (&alpha, PairB), &[]),
            edge(&format!("b{i}"), (&bottom, Cap), (&beta, Join), &[]),
            edge(&format!("c{i}"), (&beta, PairB), (&cap, Cap), &[&mark]),
        ]);
    }
    LevelTree { vertices, edges }
}
