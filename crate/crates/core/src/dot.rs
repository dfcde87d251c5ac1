//! Graphviz export for flat lattices and link graphs.

use std::fmt::Write;

use crate::dilworth::flat_label;
use crate::matroid::Matroid;
use crate::tropical::Graph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of the lattice of flats, one rank per row, bottom first.
pub fn lattice_dot(m: &Matroid) -> String {
    let lattice = m.flats();
    let mut out = String::from("graph lattice {\n  rankdir=BT;\n  node [shape=box];\n");
    let top = lattice.flats.iter().map(|(_, r)| *r).max().unwrap_or(0);
    for r in 0..=top {
        let ids: Vec<String> = lattice
            .flats
            .iter()
            .enumerate()
            .filter(|(_, (_, rank))| *rank == r)
            .map(|(k, _)| format!("f{k}"))
            .collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for (k, &(f, _)) in lattice.flats.iter().enumerate() {
        let label = if f == 0 { "∅".to_string() } else { flat_label(m, f) };
        let _ = writeln!(out, "  f{k} [label={}];", quote(&label));
    }
    for &(lo, hi) in &lattice.covers {
        let _ = writeln!(out, "  f{lo} -- f{hi};");
    }
    out.push_str("}\n");
    out
}

/// Undirected graph with vertices in index order.
pub fn graph_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    for (k, label) in g.labels.iter().enumerate() {
        let _ = writeln!(out, "  v{k} [label={}];", quote(label));
    }
    for &(a, b) in &g.edges {
        let _ = writeln!(out, "  v{a} -- v{b};");
    }
    out.push_str("}\n");
    out
}

/// Number of node declarations in DOT text produced by this module.
pub fn dot_node_count(dot: &str) -> usize {
    dot.lines().filter(|l| l.contains("[label=")).count()
}
