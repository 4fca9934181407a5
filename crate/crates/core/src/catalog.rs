//! Named presentations of every worked example, plus word-lifted lines.
//!
//! Word entries use the Fibonacci slope convergent `21/34`, which keeps the
//! census window small while every factor examined at the default horizons
//! stays shorter than the denominator.

use crate::error::{Error, Result};
use crate::graph::{ColorId, IndexPair, Presentation, Tail, Vertex};
use crate::words::{self, InfiniteWord};

const A: ColorId = ColorId(0);
const B: ColorId = ColorId(1);

/// Denominator floor for the catalog's Fibonacci approximations.
pub const CATALOG_FIB_DEN: i128 = 34;

pub const NAMES: &[&str] = &[
    "constant",
    "alternating",
    "sec2-bounded-type",
    "ex31-sturmian",
    "ex31-ray2",
    "ex31-ray3",
    "arbitrary-quotient",
    "ep-typeA",
    "ep-typeA-alternating",
    "ep-typeB",
    "fib-line",
    "fib-uniform",
    "fib-alternating",
    "fib-ab",
];

/// Names of the infinite rays whose colorings are Sturmian of bounded type
/// and that carry the main structural checks.
pub const STURMIAN_RAYS: &[&str] = &["sec2-bounded-type", "ex31-sturmian"];

/// Word-lifted entries: approximations of Sturmian colorings of unbounded
/// type, outside the hypothesis of the bounded-type maximal-type results.
pub const UNBOUNDED_TYPE: &[&str] = &["fib-line", "fib-uniform", "fib-alternating", "fib-ab"];

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

fn v(c: ColorId, s: u32) -> Vertex {
    Vertex::new(c, s)
}

fn e(fwd: u32, bwd: u32) -> IndexPair {
    IndexPair::new(fwd, bwd)
}

fn ray(prefix: Vec<Vertex>, edges: Vec<IndexPair>, offset: i64, pv: Vec<Vertex>, pe: Vec<IndexPair>) -> Presentation {
    Presentation::ray(3, ab(), prefix, edges, Tail::new(offset, pv, pe)).expect("catalog entry validates")
}

fn fib() -> InfiniteWord {
    InfiniteWord::fibonacci(CATALOG_FIB_DEN)
}

/// The Fibonacci word lifted with `s = 1, t = 1, k = 3`, with slope
/// denominator at least `min_den`.
pub fn fib_uniform(min_den: i128) -> Result<Presentation> {
    words::lift_word_uniform(&InfiniteWord::fibonacci(min_den), 1, 1, 3)
}

pub fn fib_line(min_den: i128) -> Result<Presentation> {
    words::line_from_word(&InfiniteWord::fibonacci(min_den))
}

pub fn example(name: &str) -> Result<Presentation> {
    let p = match name {
        "constant" => Presentation::finite(3, vec!["a".into()], vec![v(A, 3)], vec![])?,
        "alternating" => Presentation::finite(
            3,
            ab(),
            vec![v(A, 0), v(B, 0)],
            vec![crate::graph::FiniteEdge {
                u: 0,
                v: 1,
                pair: e(3, 3),
            }],
        )?,
        // b-fiber geodesic hanging off a ray of a's
        "sec2-bounded-type" => ray(vec![v(B, 2)], vec![e(1, 1)], 1, vec![v(A, 0)], vec![e(2, 1)]),
        // b at positions divisible by 3
        "ex31-sturmian" => ray(
            vec![v(B, 0)],
            vec![e(3, 2)],
            1,
            vec![v(A, 0), v(A, 0), v(B, 0)],
            vec![e(1, 2); 3],
        ),
        "ex31-ray2" => ray(
            vec![v(B, 0)],
            vec![e(3, 2)],
            1,
            vec![v(A, 0), v(A, 0), v(B, 0), v(A, 0), v(A, 0), v(B, 0)],
            [e(1, 1), e(2, 2)].repeat(3),
        ),
        "ex31-ray3" => ray(
            vec![v(A, 1)],
            vec![e(2, 2)],
            1,
            vec![v(B, 0), v(A, 0)],
            vec![e(1, 2); 2],
        ),
        "arbitrary-quotient" => ray(
            vec![v(A, 0)],
            vec![e(3, 1)],
            1,
            vec![v(B, 1), v(A, 0), v(A, 0), v(B, 1), v(A, 1)],
            vec![e(1, 2), e(1, 1), e(2, 1), e(1, 1), e(1, 1)],
        ),
        "ep-typeA" => ray(vec![v(B, 1)], vec![e(2, 1)], 1, vec![v(A, 0)], vec![e(2, 1)]),
        "ep-typeA-alternating" => ray(vec![v(A, 1)], vec![e(2, 1)], 1, vec![v(B, 0), v(A, 0)], vec![e(2, 1); 2]),
        "ep-typeB" => ray(vec![v(B, 0)], vec![e(3, 1)], 1, vec![v(A, 0)], vec![e(2, 1)]),
        "fib-line" => words::line_from_word(&fib())?,
        "fib-uniform" => words::lift_word_uniform(&fib(), 1, 1, 3)?,
        "fib-alternating" => words::lift_word_alternating(&fib(), 2, 0, 2, 1, 2, 1, 4)?,
        "fib-ab" => {
            let w = fib().substitute(&["a", "abb"])?;
            words::lift_word_ab(&w, 2, 1, 1, 2, 4)?
        }
        other => return Err(Error::Parameter(format!("unknown catalog entry {other:?}"))),
    };
    Ok(p)
}

/// Every catalog entry, in [`NAMES`] order.
pub fn example_catalog() -> Vec<(&'static str, Presentation)> {
    NAMES
        .iter()
        .map(|&n| (n, example(n).expect("catalog entry builds")))
        .collect()
}

/// Negative control: the Sturmian ray of [`example`]`("ex31-sturmian")` with
/// the colors of positions 3 and 4 exchanged.
pub fn corrupted(name: &str) -> Result<Presentation> {
    match name {
        "ex31-sturmian" | "ex31-corrupt" => {
            let mut prefix = vec![v(B, 0)];
            let mut edges = vec![e(3, 2)];
            for p in 1..7 {
                prefix.push(v(if p % 3 == 0 { B } else { A }, 0));
                edges.push(e(1, 2));
            }
            prefix.swap(3, 4);
            Ok(Presentation::ray(
                3,
                ab(),
                prefix,
                edges,
                Tail::new(7, vec![v(A, 0), v(A, 0), v(B, 0)], vec![e(1, 2); 3]),
            )?)
        }
        other => Err(Error::Parameter(format!("no corrupted variant of {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_validate() {
        for (name, p) in example_catalog() {
            assert!(p.validate().is_ok(), "{name}");
        }
        assert!(corrupted("ex31-sturmian").unwrap().validate().is_ok());
    }

    #[test]
    fn documented_entries() {
        let p = example("sec2-bounded-type").unwrap();
        let r = p.vertex_at(0).unwrap();
        assert_eq!((r.color.as_str(), r.self_adjacency), ("b", 2));
        let p = example("ex31-sturmian").unwrap();
        assert_eq!(p.edge(0), e(3, 2));
        for q in 0..30 {
            let want = if q % 3 == 0 { "b" } else { "a" };
            assert_eq!(p.vertex_at(q).unwrap().color, want);
        }
        assert!(example("ep-typeA").is_ok() && example("ep-typeB").is_ok());
        assert!(example("nope").is_err());
    }
}
