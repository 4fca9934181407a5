//! Finite pieces of the universal covering tree.
//!
//! Balls are materialized breadth first, so every node's children occupy a
//! contiguous id range and node ids are stable across runs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{ColorId, EdgeId, Pos, Presentation};

/// Default node budget for a single lifted ball.
pub const DEFAULT_CAP: usize = 1_000_000;

const NO_PARENT: u32 = u32::MAX;

/// Number of nodes of a radius-`n` ball in the `k`-regular tree, or `None` on
/// overflow.
pub fn ball_size(k: u32, n: usize) -> Option<u64> {
    let k = k as u64;
    match k {
        0 => Some(1),
        1 => Some(if n == 0 { 1 } else { 2 }),
        2 => Some(2 * n as u64 + 1),
        _ => {
            // 1 + k + k(k-1) + ... + k(k-1)^(n-1)
            let mut total: u64 = 1;
            let mut layer: u64 = k;
            for _ in 0..n {
                total = total.checked_add(layer)?;
                layer = layer.checked_mul(k - 1)?;
            }
            Some(total)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallNode {
    pub color: ColorId,
    pub projection: Pos,
    pub depth: u32,
    pub parent: u32,
}

/// A finite rooted colored tree: the radius-`n` neighborhood of a vertex of
/// the covering tree, each node tagged with its projection to the quotient.
#[derive(Clone, Debug)]
pub struct ColoredBall {
    radius: usize,
    alphabet: Vec<String>,
    nodes: Vec<BallNode>,
    // CSR layout: children of node i are child_start[i]..child_start[i + 1];
    // the root is node 0, so child_start[0] = 1
    child_start: Vec<u32>,
    centers: Vec<u32>,
}

#[derive(Clone, Copy)]
enum Arrival {
    Root,
    Edge(EdgeId),
    SameFiber,
}

impl ColoredBall {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn node(&self, id: u32) -> &BallNode {
        &self.nodes[id as usize]
    }

    pub fn nodes(&self) -> &[BallNode] {
        &self.nodes
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn color_name(&self, id: u32) -> &str {
        &self.alphabet[self.nodes[id as usize].color.0 as usize]
    }

    pub fn children(&self, id: u32) -> std::ops::Range<u32> {
        self.child_start[id as usize]..self.child_start[id as usize + 1]
    }

    pub fn parent(&self, id: u32) -> Option<u32> {
        let p = self.nodes[id as usize].parent;
        (p != NO_PARENT).then_some(p)
    }

    /// Tree neighbors of a node: its parent (if any) followed by its children.
    pub fn neighbors(&self, id: u32) -> impl Iterator<Item = u32> + '_ {
        self.parent(id).into_iter().chain(self.children(id))
    }

    /// Nodes within distance `R` of the root in a patch; just the root for a
    /// plain ball.
    pub fn centers(&self) -> &[u32] {
        &self.centers
    }

    /// Radius-`n` ball around `id`, re-rooted. The node must sit deep enough
    /// that its full `n`-neighborhood is present.
    pub fn sub_ball(&self, id: u32, n: usize) -> Result<ColoredBall> {
        let depth = self.nodes[id as usize].depth as usize;
        if depth + n > self.radius {
            return Err(Error::RadiusMismatch(format!(
                "node at depth {depth} has no complete {n}-ball inside a radius-{} ball",
                self.radius
            )));
        }
        let mut nodes = Vec::new();
        let mut child_start = vec![1u32];
        // (old id, came from old id)
        let mut queue = VecDeque::new();
        let old = &self.nodes[id as usize];
        nodes.push(BallNode {
            parent: NO_PARENT,
            depth: 0,
            ..*old
        });
        queue.push_back((id, NO_PARENT));
        let mut next_id: u32 = 1;
        let mut cur: u32 = 0;
        while let Some((o, from)) = queue.pop_front() {
            let d = nodes[cur as usize].depth;
            if (d as usize) < n {
                for nb in self.neighbors(o) {
                    if nb == from {
                        continue;
                    }
                    let src = &self.nodes[nb as usize];
                    nodes.push(BallNode {
                        color: src.color,
                        projection: src.projection,
                        depth: d + 1,
                        parent: cur,
                    });
                    queue.push_back((nb, o));
                    next_id += 1;
                }
            }
            child_start.push(next_id);
            cur += 1;
        }
        Ok(ColoredBall {
            radius: n,
            alphabet: self.alphabet.clone(),
            nodes,
            child_start,
            centers: vec![0],
        })
    }

    /// Same tree with new node colors over a new alphabet.
    pub fn recolored(&self, alphabet: Vec<String>, colors: &[ColorId]) -> ColoredBall {
        assert_eq!(colors.len(), self.nodes.len(), "one color per node");
        let mut out = self.clone();
        out.alphabet = alphabet;
        for (n, &c) in out.nodes.iter_mut().zip(colors) {
            n.color = c;
        }
        out
    }

    /// Every node is within the radius, interior nodes have degree `k`, and
    /// the node count matches the closed form.
    pub fn check_invariants(&self, k: u32) -> std::result::Result<(), String> {
        let expected = ball_size(k, self.radius).ok_or("size overflow")?;
        if self.nodes.len() as u64 != expected {
            return Err(format!(
                "ball has {} nodes, expected {expected}",
                self.nodes.len()
            ));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let i = i as u32;
            if node.depth as usize > self.radius {
                return Err(format!("node {i} lies outside the radius"));
            }
            let deg = self.neighbors(i).count();
            if (node.depth as usize) < self.radius && deg != k as usize {
                return Err(format!("node {i} at depth {} has degree {deg}", node.depth));
            }
            for c in self.children(i) {
                if self.nodes[c as usize].parent != i || self.nodes[c as usize].depth != node.depth + 1 {
                    return Err(format!("child {c} of node {i} is mislinked"));
                }
            }
        }
        Ok(())
    }
}

/// Radius-`n` ball around a lift of `pos`.
pub fn lift_ball(p: &Presentation, pos: Pos, n: usize) -> Result<ColoredBall> {
    lift_patch_capped(p, pos, 0, n, DEFAULT_CAP)
}

pub fn lift_ball_capped(p: &Presentation, pos: Pos, n: usize, cap: usize) -> Result<ColoredBall> {
    lift_patch_capped(p, pos, 0, n, cap)
}

/// Radius-`(r + n)` ball with the nodes within distance `r` of the root
/// marked as centers: each center's full `n`-ball is contained.
pub fn lift_patch(p: &Presentation, pos: Pos, r: usize, n: usize) -> Result<ColoredBall> {
    lift_patch_capped(p, pos, r, n, DEFAULT_CAP)
}

pub fn lift_patch_capped(
    p: &Presentation,
    pos: Pos,
    r: usize,
    n: usize,
    cap: usize,
) -> Result<ColoredBall> {
    if !p.contains(pos) {
        return Err(Error::OutOfRange(pos));
    }
    let radius = r + n;
    let needed = ball_size(p.degree(), radius).unwrap_or(u64::MAX);
    if needed > cap as u64 {
        return Err(Error::CapExceeded { needed, cap });
    }
    let size = needed as usize;
    let mut nodes = Vec::with_capacity(size);
    let mut arrivals = Vec::with_capacity(size);
    let mut child_start = Vec::with_capacity(size + 1);
    child_start.push(1u32);
    nodes.push(BallNode {
        color: p.vertex(pos).color,
        projection: pos,
        depth: 0,
        parent: NO_PARENT,
    });
    arrivals.push(Arrival::Root);
    let mut cur = 0usize;
    while cur < nodes.len() {
        let node = nodes[cur];
        if (node.depth as usize) < radius {
            let v = node.projection;
            let vertex = p.vertex(v);
            let arrival = arrivals[cur];
            let cur_id = cur as u32;
            let mut emit = |to: Pos, count: u32, how: Arrival| {
                let color = p.vertex(to).color;
                for _ in 0..count {
                    nodes.push(BallNode {
                        color,
                        projection: to,
                        depth: node.depth + 1,
                        parent: cur_id,
                    });
                    arrivals.push(how);
                }
            };
            p.for_each_step(v, |s| {
                let count = match arrival {
                    Arrival::Edge(e) if e == s.edge => s.index - 1,
                    _ => s.index,
                };
                emit(s.to, count, Arrival::Edge(s.edge));
            });
            let same = match arrival {
                Arrival::SameFiber => vertex.self_adjacency - 1,
                _ => vertex.self_adjacency,
            };
            emit(v, same, Arrival::SameFiber);
        }
        child_start.push(nodes.len() as u32);
        cur += 1;
    }
    debug_assert_eq!(nodes.len(), size);
    let centers = (0..ball_size(p.degree(), r).unwrap_or(0) as u32).collect();
    let ball = ColoredBall {
        radius,
        alphabet: p.alphabet().to_vec(),
        nodes,
        child_start,
        centers,
    };
    if ball.nodes.len() != size {
        return Err(Error::Inconsistent(format!(
            "lifted {} nodes at {pos}, radius {radius}; the size formula gives {size}",
            ball.nodes.len()
        )));
    }
    Ok(ball)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::example;

    fn colors(ball: &ColoredBall, ids: std::ops::Range<u32>) -> Vec<&str> {
        let mut v: Vec<_> = ids.map(|i| ball.color_name(i)).collect();
        v.sort();
        v
    }

    #[test]
    fn sizes() {
        assert_eq!(ball_size(3, 0), Some(1));
        assert_eq!(ball_size(3, 2), Some(10));
        assert_eq!(ball_size(3, 4), Some(46));
        assert_eq!(ball_size(2, 7), Some(15));
        assert_eq!(ball_size(4, 2), Some(17));
        assert_eq!(ball_size(3, 200), None);
    }

    #[test]
    fn constant_ball() {
        let p = example("constant").unwrap();
        let b = lift_ball(&p, 0, 2).unwrap();
        assert_eq!(b.len(), 10);
        assert!(b.nodes().iter().all(|n| n.color == ColorId(0)));
        b.check_invariants(3).unwrap();
    }

    #[test]
    fn sturmian_root_children() {
        let p = example("ex31-sturmian").unwrap();
        let b = lift_ball(&p, 0, 1).unwrap();
        assert_eq!(b.color_name(0), "b");
        assert_eq!(colors(&b, b.children(0)), ["a", "a", "a"]);
    }

    #[test]
    fn bounded_type_root_children() {
        let p = example("sec2-bounded-type").unwrap();
        let b = lift_ball(&p, 0, 1).unwrap();
        assert_eq!(b.color_name(0), "b");
        assert_eq!(colors(&b, b.children(0)), ["a", "b", "b"]);
        // the b-fiber forms a geodesic: every b node has exactly two b neighbors
        let b4 = lift_ball(&p, 0, 4).unwrap();
        for i in 0..b4.len() as u32 {
            if b4.node(i).depth < 4 && b4.color_name(i) == "b" {
                let bn = b4.neighbors(i).filter(|&j| b4.color_name(j) == "b").count();
                assert_eq!(bn, 2);
            }
        }
    }

    #[test]
    fn patches() {
        let p = example("constant").unwrap();
        let patch = lift_patch(&p, 0, 1, 1).unwrap();
        assert_eq!((patch.len(), patch.centers().len()), (10, 4));
        let p = example("sec2-bounded-type").unwrap();
        let patch = lift_patch(&p, 0, 2, 2).unwrap();
        assert_eq!((patch.len(), patch.centers().len()), (46, 10));
        let plain = lift_patch(&p, 0, 0, 3).unwrap();
        assert_eq!(plain.centers(), &[0]);
    }

    #[test]
    fn sub_ball_matches_direct_lift() {
        let p = example("ex31-sturmian").unwrap();
        let patch = lift_patch(&p, 0, 2, 3).unwrap();
        for &c in patch.centers() {
            let sub = patch.sub_ball(c, 3).unwrap();
            sub.check_invariants(3).unwrap();
            let direct = lift_ball(&p, patch.node(c).projection, 3).unwrap();
            assert_eq!(
                crate::canon::canonical_key(&sub),
                crate::canon::canonical_key(&direct)
            );
        }
        assert!(patch.sub_ball(patch.children(0).start, 5).is_err());
    }

    #[test]
    fn cap_and_range() {
        let p = example("constant").unwrap();
        assert!(matches!(
            lift_ball_capped(&p, 0, 5, 50),
            Err(Error::CapExceeded { needed: 94, cap: 50 })
        ));
        assert_eq!(lift_ball(&p, 3, 1).unwrap_err(), Error::OutOfRange(3));
    }
}
