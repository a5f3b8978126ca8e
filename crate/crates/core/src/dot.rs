//! Graphviz output.

use std::fmt::Write;

use crate::error::Result;
use crate::level_tree::{height_assignment, LevelTree, VertexKind};

fn shape(kind: VertexKind) -> &'static str {
    match kind {
        VertexKind::Min => "invtriangle",
        VertexKind::Max => "triangle",
        VertexKind::SaddleUp | VertexKind::SaddleDown => "diamond",
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// DOT drawing of a valid tree, bottom to top. Vertices at the same height
/// share a rank and consecutive heights are chained by invisible edges, so
/// the layout respects [`height_assignment`]. Edge labels are mark counts.
pub fn to_dot(tree: &LevelTree) -> Result<String> {
    let heights = height_assignment(tree)?;
    let top = heights.values().copied().max().unwrap_or(0);
    let mut levels: Vec<Vec<&str>> = vec![Vec::new(); top + 1];
    for v in &tree.vertices {
        levels[heights[&v.id]].push(&v.id);
    }

    let mut out = String::from("digraph level_tree {\n  rankdir=BT;\n  node [fontname=\"Helvetica\"];\n");
    for v in &tree.vertices {
        let _ = writeln!(
            out,
            "  {} [shape={}, label=\"{}\\n{}\"];",
            quote(&v.id),
            shape(v.kind),
            escape(&v.id),
            v.kind
        );
    }
    for (h, level) in levels.iter().enumerate() {
        let _ = writeln!(out, "  level{h} [style=invis, shape=point];");
        let ids: Vec<String> = level.iter().map(|id| quote(id)).collect();
        let _ = writeln!(out, "  {{ rank=same; level{h}; {} }}", ids.join("; "));
    }
    for h in 1..levels.len() {
        let _ = writeln!(out, "  level{} -> level{h} [style=invis];", h - 1);
    }
    for e in &tree.edges {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&e.lower.vertex),
            quote(&e.upper.vertex),
            quote(&format!("{}: {}", e.id, e.marks.len()))
        );
    }
    out.push_str("}\n");
    Ok(out)
}
