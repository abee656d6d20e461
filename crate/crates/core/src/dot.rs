//! Graphviz export.

use std::fmt::Write;

use crate::graph::Graph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT text for `g`. Vertices are labeled `name\nlabel`, edges carry their
/// port pair `p–q` and label; loopbacks come out as self-loops.
pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("digraph G {\n");
    if !g.is_empty() {
        out.push_str("  edge [dir=none];\n");
    }
    for v in g.vertices() {
        let text = match g.vertex_label(v) {
            Some(l) => format!("{v}\\n{l}"),
            None => v.to_string(),
        };
        writeln!(out, "  {} [label={}];", quote(&v.to_string()), quote(&text))
            .expect("write to string");
    }
    for e in g.edges() {
        let [a, b] = e.ends();
        let mut text = format!("{}–{}", a.port, b.port);
        if let Some(l) = g.edge_label(e) {
            write!(text, " {l}").expect("write to string");
        }
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&a.vertex.to_string()),
            quote(&b.vertex.to_string()),
            quote(&text)
        )
        .expect("write to string");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::particle_rows;
    use crate::monotonizer::Encoding;

    #[test]
    fn path_and_encoding() {
        let g = &particle_rows()[1].0;
        let dot = to_dot(g);
        assert_eq!(dot.matches("[label=").count(), 5);
        assert!(dot.contains("\"a\" -> \"b\" [label=\"r–l\"]"));
        let enc = Encoding::new(g.signature().clone()).unwrap();
        let wd = to_dot(&enc.encode_graph(g));
        assert!(wd.contains("\"a\" -> \"a\" [label=\"l–l' *\"]"), "{wd}");
        assert_eq!(wd, to_dot(&enc.encode_graph(g)));
    }

    #[test]
    fn empty() {
        let g = Graph::empty(particle_rows()[0].0.signature().clone());
        assert_eq!(to_dot(&g), "digraph G {\n}\n");
    }
}
