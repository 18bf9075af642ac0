//! Graphviz export. Each occupied level is one rank, roots at the bottom.

use std::fmt::Write;

use orderbench_core::tree::{LeveledTree, Payload};

pub fn tree_to_dot(t: &LeveledTree, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{name}\" {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
    for level in t.occupied_levels() {
        let ids: Vec<String> = t
            .nodes()
            .filter(|n| n.level == level)
            .map(|n| format!("n{}", n.id))
            .collect();
        let _ = writeln!(out, "  subgraph \"level {level}\" {{ rank=same; {}; }}", ids.join("; "));
    }
    for n in t.nodes() {
        let extra = match &n.payload {
            Payload::None => String::new(),
            Payload::Seq(s) => format!("\\nsup {}", s.sup()),
            Payload::Label(r) => format!("\\n{r}"),
            Payload::Span { lower, upper } => format!("\\n[{lower}, {upper}]"),
        };
        let _ = writeln!(out, "  n{} [label=\"{}@{}{}\"];", n.id, n.id, n.level, extra);
    }
    for n in t.nodes() {
        if let Some(p) = n.parent {
            let _ = writeln!(out, "  n{p} -> n{};", n.id);
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use orderbench_core::suslin::labelled_full_tree;

    #[test]
    fn ranks_and_edges() {
        let dot = tree_to_dot(&labelled_full_tree(2, 2), "t");
        assert!(dot.starts_with("digraph \"t\" {"));
        assert!(dot.contains("subgraph \"level 1\" { rank=same; n1; n2; }"));
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.trim_end().ends_with('}'));
    }
}
