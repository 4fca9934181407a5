//! DOT and JSON renderings of presentations and balls.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::cover::ColoredBall;
use crate::graph::{Kind, Pos, Presentation};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Positions drawn for an infinite presentation: the explicit part plus two
/// periods of each tail.
fn drawn_range(p: &Presentation) -> (Pos, Pos) {
    let tails = p.tails();
    match p.kind() {
        Kind::Finite => (0, p.finite_len().unwrap_or(0) as Pos),
        Kind::Ray => (0, tails[0].offset + 2 * tails[0].period() as Pos),
        Kind::Line => match p.line_period() {
            Some(l) => (0, (2 * l).min(64) as Pos),
            None => (
                tails[0].offset - 2 * tails[0].period() as Pos,
                tails[1].offset + 2 * tails[1].period() as Pos,
            ),
        },
    }
}

/// Graphviz rendering. Edge labels read `i_fwd i_bwd` from the left (lower)
/// endpoint; same-fiber neighbors appear as a dotted self-loop labeled with
/// their count.
pub fn presentation_dot(p: &Presentation) -> String {
    let mut out = String::from("graph quotient {\n  rankdir=LR;\n  node [shape=circle];\n");
    let (lo, hi) = drawn_range(p);
    for q in lo..hi {
        let v = p.vertex(q);
        let _ = writeln!(out, "  v{} [label={}];", node_id(q), quote(&format!("{} {q}", p.color_name(v.color))));
        if v.self_adjacency > 0 {
            let _ = writeln!(
                out,
                "  v{0} -- v{0} [style=dotted, label=\"{1}\"];",
                node_id(q),
                v.self_adjacency
            );
        }
    }
    match p.kind() {
        Kind::Finite => {
            for e in p.finite_edges().unwrap_or_default() {
                let _ = writeln!(out, "  v{} -- v{} [label=\"{} {}\"];", e.u, e.v, e.pair.fwd, e.pair.bwd);
            }
        }
        _ => {
            for q in lo..hi - 1 {
                let e = p.edge(q);
                let _ = writeln!(
                    out,
                    "  v{} -- v{} [label=\"{} {}\"];",
                    node_id(q),
                    node_id(q + 1),
                    e.fwd,
                    e.bwd
                );
            }
            let _ = writeln!(out, "  more_right [shape=plaintext, label=\"...\"];");
            let _ = writeln!(out, "  v{} -- more_right [style=dashed];", node_id(hi - 1));
            if p.kind() == Kind::Line {
                let _ = writeln!(out, "  more_left [shape=plaintext, label=\"...\"];");
                let _ = writeln!(out, "  more_left -- v{} [style=dashed];", node_id(lo));
            }
        }
    }
    out.push_str("}\n");
    out
}

fn node_id(q: Pos) -> String {
    if q < 0 {
        format!("m{}", -q)
    } else {
        q.to_string()
    }
}

/// Graphviz rendering of a ball; nodes are labeled `color@projection`.
pub fn ball_dot(ball: &ColoredBall) -> String {
    let mut out = String::from("graph ball {\n  node [shape=circle];\n");
    for (i, n) in ball.nodes().iter().enumerate() {
        let label = format!("{}@{}", ball.color_name(i as u32), n.projection);
        let _ = write!(out, "  n{i} [label={}", quote(&label));
        if i == 0 {
            out.push_str(", shape=doublecircle");
        }
        out.push_str("];\n");
    }
    for i in 0..ball.len() as u32 {
        for c in ball.children(i) {
            let _ = writeln!(out, "  n{i} -- n{c};");
        }
    }
    out.push_str("}\n");
    out
}

/// Nested JSON: `{"color", "projection", "children": [...]}`.
pub fn ball_json(ball: &ColoredBall) -> Value {
    fn go(ball: &ColoredBall, id: u32) -> Value {
        let children: Vec<Value> = ball.children(id).map(|c| go(ball, c)).collect();
        json!({
            "color": ball.color_name(id),
            "projection": ball.node(id).projection,
            "children": children,
        })
    }
    json!({ "radius": ball.radius(), "root": go(ball, ball.root()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;
    use crate::cover::lift_ball;

    #[test]
    fn sturmian_first_edge_label() {
        let dot = presentation_dot(&example("ex31-sturmian").unwrap());
        assert!(dot.contains("v0 -- v1 [label=\"3 2\"]"), "{dot}");
        assert!(dot.contains("v1 -- v2 [label=\"1 2\"]"));
    }

    #[test]
    fn constant_dotted_loop() {
        let dot = presentation_dot(&example("constant").unwrap());
        assert!(dot.contains("v0 -- v0 [style=dotted, label=\"3\"]"));
        assert_eq!(dot.matches("[label=").count(), 1);
    }

    #[test]
    fn small_ball() {
        let ball = lift_ball(&example("ex31-sturmian").unwrap(), 0, 1).unwrap();
        let dot = ball_dot(&ball);
        assert_eq!(dot.matches("@").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 3);
        let j = ball_json(&ball);
        assert_eq!(j["root"]["color"], "b");
        assert_eq!(j["root"]["children"].as_array().unwrap().len(), 3);
    }
}
