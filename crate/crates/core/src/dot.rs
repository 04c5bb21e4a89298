//! Graphviz export of the top targets around the brand.

use std::io::Write;

use crate::graph::{NodeId, SocialGraph};

/// Star layout: the brand in the middle, a dashed edge to each target and a
/// solid edge for every social link among the targets.
pub fn targets_dot(g: &SocialGraph, targets: &[NodeId], brand_label: &str) -> String {
    let mut s = String::from("graph targets {\n");
    s.push_str("  layout=neato;\n  overlap=false;\n");
    s.push_str(&format!("  brand [label=\"{}\", shape=doublecircle];\n", escape(brand_label)));
    for t in targets {
        s.push_str(&format!("  n{t} [label=\"{t}\"];\n"));
    }
    for t in targets {
        s.push_str(&format!("  brand -- n{t} [style=dashed];\n"));
    }
    for (i, &u) in targets.iter().enumerate() {
        for &v in &targets[i + 1..] {
            if g.are_adjacent(u, v) {
                let (a, b) = (u.min(v), u.max(v));
                s.push_str(&format!("  n{a} -- n{b};\n"));
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn write_targets_dot<W: Write>(
    mut w: W,
    g: &SocialGraph,
    targets: &[NodeId],
    brand_label: &str,
) -> std::io::Result<()> {
    w.write_all(targets_dot(g, targets, brand_label).as_bytes())
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
