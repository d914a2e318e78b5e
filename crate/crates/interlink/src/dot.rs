//! Graphviz rendering of composite digraphs.

use std::collections::BTreeSet;
use std::fmt::Write;

use interlink_core::{ArcClass, Interconnection, LayeredDigraph, StateId, Vertex};

fn node_id(v: Vertex) -> String {
    match v {
        Vertex::State(s) => format!("x{}_{}", s.subsystem, s.state),
        Vertex::Input(c) => format!("u{c}"),
    }
}

/// DOT text for `g`: one cluster per subsystem, inputs as boxes,
/// interconnections dashed. Links in `highlight` are drawn red; any that
/// `g` lacks are added.
pub fn export_dot(g: &LayeredDigraph, highlight: Option<&[Interconnection]>) -> String {
    let marked: BTreeSet<(StateId, StateId)> = highlight
        .unwrap_or_default()
        .iter()
        .map(|x| (x.source, x.target))
        .collect();

    let mut out = String::from("digraph composite {\n  rankdir=LR;\n  node [shape=circle];\n");
    for c in g.input_nodes() {
        let _ = writeln!(out, "  u{c} [shape=box, label=\"u{c}\"];");
    }
    for i in 1..=g.k() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label=\"S{i}\";");
        for p in 1..=g.n_s() {
            let _ = writeln!(out, "    x{i}_{p} [label=\"x{i}_{p}\"];");
        }
        out.push_str("  }\n");
    }

    let mut drawn = BTreeSet::new();
    for arc in g.arcs() {
        let style = match arc.class {
            ArcClass::Intra | ArcClass::Input => "solid",
            ArcClass::Interconnection => "dashed",
        };
        let hot = match (arc.from, arc.to) {
            (Vertex::State(s), Vertex::State(t)) if marked.contains(&(s, t)) => {
                drawn.insert((s, t));
                true
            }
            _ => false,
        };
        let colour = if hot { ", color=red, penwidth=2" } else { "" };
        let _ = writeln!(out, "  {} -> {} [style={style}{colour}];", node_id(arc.from), node_id(arc.to));
    }
    for &(s, t) in marked.difference(&drawn) {
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed, color=red, penwidth=2];",
            node_id(Vertex::State(s)),
            node_id(Vertex::State(t))
        );
    }
    out.push_str("}\n");
    out
}
