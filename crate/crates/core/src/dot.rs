//! Graphviz DOT rendering.
//!
//! Output is deterministic: nodes and edges are emitted in set order, not
//! storage order, so equal structures render to identical text.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::UndirectedGraph;
use crate::set::VertexSet;
use crate::setgraph::SetGraph;

pub fn graph_dot(g: &UndirectedGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.vertex_count() {
        let _ = writeln!(out, "  {v};");
    }
    for (x, y) in g.edges() {
        let _ = writeln!(out, "  {x} -- {y};");
    }
    out.push_str("}\n");
    out
}

fn node_names(sg: &SetGraph) -> BTreeMap<VertexSet, String> {
    let mut sets = sg.sets();
    sets.sort();
    sets.into_iter()
        .enumerate()
        .map(|(i, s)| (s, format!("n{i}")))
        .collect()
}

fn write_nodes(out: &mut String, names: &BTreeMap<VertexSet, String>, sg: &SetGraph) {
    for (set, name) in names {
        let id = sg.node_of(set).expect("named set is present");
        let shape = if sg.children(id).is_empty() { "ellipse" } else { "box" };
        let _ = writeln!(out, "  {name} [label=\"{set}\", shape={shape}];");
    }
}

/// An undirected tree over cliques with each edge labelled by the
/// intersection of its endpoints.
pub fn junction_tree_dot(sg: &SetGraph) -> String {
    let names = node_names(sg);
    let mut out = String::from("graph JunctionTree {\n");
    for (set, name) in &names {
        let _ = writeln!(out, "  {name} [label=\"{set}\"];");
    }
    let mut edges: Vec<(&VertexSet, &VertexSet)> = Vec::new();
    for id in sg.node_ids() {
        for &c in sg.children(id) {
            let (a, b) = (sg.set(id), sg.set(c));
            edges.push(if a < b { (a, b) } else { (b, a) });
        }
    }
    edges.sort();
    for (a, b) in edges {
        let _ = writeln!(out, "  {} -- {} [label=\"{}\"];", names[a], names[b], a.intersection(b));
    }
    out.push_str("}\n");
    out
}

/// A directed subset-to-superset structure. Childless nodes (cliques) are
/// drawn as ellipses, the rest (separators) as boxes.
pub fn set_dag_dot(sg: &SetGraph, name: &str) -> String {
    let names = node_names(sg);
    let mut out = format!("digraph {name} {{\n");
    write_nodes(&mut out, &names, sg);
    let arcs = sg.snapshot().arcs;
    for (a, b) in &arcs {
        let _ = writeln!(out, "  {} -> {};", names[a], names[b]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn empty_graph_has_nodes_only() {
        let dot = graph_dot(&UndirectedGraph::empty(3));
        assert_eq!(dot.matches(';').count(), 3);
        assert!(!dot.contains("--"));
    }

    #[test]
    fn graph_edges_are_listed() {
        let dot = graph_dot(&two_triangles());
        assert_eq!(dot.matches(" -- ").count(), 5);
        assert!(dot.contains("  1 -- 2;"));
    }

    #[test]
    fn junction_edges_carry_separators() {
        let mut sg = SetGraph::new();
        let a = sg.add_node(VertexSet::from([0, 1, 2]));
        let b = sg.add_node(VertexSet::from([1, 2, 3]));
        sg.add_arc(b, a);
        let dot = junction_tree_dot(&sg);
        assert!(dot.contains("n0 -- n1 [label=\"{1,2}\"];"), "{dot}");
    }

    #[test]
    fn dag_arcs_are_directed() {
        let mut sg = SetGraph::new();
        let s = sg.add_node(VertexSet::from([1, 2]));
        let a = sg.add_node(VertexSet::from([0, 1, 2]));
        let b = sg.add_node(VertexSet::from([1, 2, 3]));
        sg.add_arc(s, a);
        sg.add_arc(s, b);
        let dot = set_dag_dot(&sg, "Ibarra");
        assert!(dot.starts_with("digraph Ibarra {"));
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert!(dot.contains("label=\"{1,2}\", shape=box"));
    }
}
