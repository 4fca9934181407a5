//! Colored edge-indexed quotient graphs.
//!
//! A [`Presentation`] describes a vertex coloring of the `k`-regular tree as
//! the lift of a coloring on an edge-indexed graph `(X, i)`. Three shapes are
//! supported: finite graphs, rays indexed by `0, 1, 2, ...` and bi-infinite
//! lines indexed by the integers. Rays and lines carry eventually periodic
//! tails so that every position can be resolved from finite data.
//!
//! Same-fiber neighbors (genuine loops as well as half-edges through a white
//! subdivision vertex) are stored as a single `self_adjacency` count per
//! vertex. A rendered edge label `p q` between a left vertex `u` and a right
//! vertex `v` means `i([u,v]) = p` and `i([v,u]) = q`; in the serialized form
//! these are the `fwd` and `bwd` fields.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position of a quotient vertex: the vertex index for finite presentations,
/// an integer coordinate for rays and lines.
pub type Pos = i64;

/// Index into the alphabet of a presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorId(pub u16);

/// Stored data of one quotient vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub color: ColorId,
    pub self_adjacency: u32,
}

impl Vertex {
    pub fn new(color: ColorId, self_adjacency: u32) -> Self {
        Vertex {
            color,
            self_adjacency,
        }
    }
}

/// Directed indices of one undirected quotient edge `[u, v]`:
/// `fwd = i([u,v])`, `bwd = i([v,u])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexPair {
    pub fwd: u32,
    pub bwd: u32,
}

impl IndexPair {
    pub const fn new(fwd: u32, bwd: u32) -> Self {
        IndexPair { fwd, bwd }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiniteEdge {
    pub u: usize,
    pub v: usize,
    pub pair: IndexPair,
}

/// Eventually repeating block of a ray or line.
///
/// For a right tail with offset `R` and period `L`, position `p >= R` holds
/// `vertices[(p - R) mod L]` and the edge joining `p` and `p + 1` is
/// `edges[(p - R) mod L]`. For a left tail with offset `Lo`, positions
/// `p < Lo` are resolved with `(p - Lo) mod L` (Euclidean), so the last block
/// entry sits just left of the offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    pub offset: Pos,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<IndexPair>,
}

impl Tail {
    pub fn new(offset: Pos, vertices: Vec<Vertex>, edges: Vec<IndexPair>) -> Self {
        Tail {
            offset,
            vertices,
            edges,
        }
    }

    pub fn period(&self) -> usize {
        self.vertices.len()
    }

    fn slot(&self, p: Pos) -> usize {
        (p - self.offset).rem_euclid(self.period() as Pos) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Finite,
    Ray,
    Line,
}

/// Identifier of an undirected quotient edge: the edge-list index for finite
/// presentations, the left endpoint for rays and lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeId(pub i64);

/// One directed quotient edge leaving a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub to: Pos,
    pub index: u32,
    pub edge: EdgeId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("regularity error at position {position}: degree sum {sum} != k = {degree}")]
    Regularity { position: Pos, sum: u64, degree: u32 },
    #[error("period error: {0}")]
    Period(String),
    #[error("position {0} is out of range")]
    OutOfRange(Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Body {
    Finite {
        vertices: Vec<Vertex>,
        edges: Vec<FiniteEdge>,
    },
    Ray {
        vertices: Vec<Vertex>,
        edges: Vec<IndexPair>,
        tail: Tail,
    },
    Line {
        vertices: Vec<Vertex>,
        edges: Vec<IndexPair>,
        left: Tail,
        right: Tail,
    },
}

/// A validated colored edge-indexed quotient graph whose universal cover is
/// the `k`-regular tree. Immutable once built.
#[derive(Clone, Debug)]
pub struct Presentation {
    degree: u32,
    alphabet: Vec<String>,
    body: Body,
    // finite only: outgoing steps per vertex, in edge-list order
    incidence: Vec<Vec<Step>>,
    // line only: period when the whole line repeats, in which case the
    // right-tail block describes every position
    line_period: Option<usize>,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.alphabet == other.alphabet && self.body == other.body
    }
}

impl Eq for Presentation {}

/// Resolved view of a quotient vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub position: Pos,
    pub color: String,
    pub self_adjacency: u32,
    pub neighbors: Vec<NeighborIndex>,
}

/// An incident undirected edge seen from one endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeighborIndex {
    pub to: Pos,
    /// Index of the directed edge leaving this vertex.
    pub out_index: u32,
    /// Index of the reverse directed edge.
    pub in_index: u32,
}

impl VertexRecord {
    /// Outgoing index toward `position + 1` (rays and lines).
    pub fn forward_index(&self) -> Option<u32> {
        self.neighbors
            .iter()
            .find(|n| n.to == self.position + 1)
            .map(|n| n.out_index)
    }

    /// Outgoing index toward `position - 1` (rays and lines).
    pub fn backward_index(&self) -> Option<u32> {
        self.neighbors
            .iter()
            .find(|n| n.to == self.position - 1)
            .map(|n| n.out_index)
    }

    pub fn degree_sum(&self) -> u64 {
        self.self_adjacency as u64 + self.neighbors.iter().map(|n| n.out_index as u64).sum::<u64>()
    }
}

fn schema<T>(msg: impl Into<String>) -> Result<T, PresentationError> {
    Err(PresentationError::Schema(msg.into()))
}

fn period_err<T>(msg: impl Into<String>) -> Result<T, PresentationError> {
    Err(PresentationError::Period(msg.into()))
}

impl Presentation {
    pub fn finite(
        degree: u32,
        alphabet: Vec<String>,
        vertices: Vec<Vertex>,
        edges: Vec<FiniteEdge>,
    ) -> Result<Self, PresentationError> {
        Self::build(degree, alphabet, Body::Finite { vertices, edges })
    }

    pub fn ray(
        degree: u32,
        alphabet: Vec<String>,
        vertices: Vec<Vertex>,
        edges: Vec<IndexPair>,
        tail: Tail,
    ) -> Result<Self, PresentationError> {
        Self::build(
            degree,
            alphabet,
            Body::Ray {
                vertices,
                edges,
                tail,
            },
        )
    }

    pub fn line(
        degree: u32,
        alphabet: Vec<String>,
        vertices: Vec<Vertex>,
        edges: Vec<IndexPair>,
        left: Tail,
        right: Tail,
    ) -> Result<Self, PresentationError> {
        Self::build(
            degree,
            alphabet,
            Body::Line {
                vertices,
                edges,
                left,
                right,
            },
        )
    }

    /// Line whose every position `p` is described by `site(p)`: the vertex at
    /// `p` and the edge joining `p` and `p + 1`. `site` must be periodic with
    /// period `left_period` below `left_offset` and with period `right_period`
    /// from `right_offset` on; positions in between are stored explicitly.
    pub fn line_from_fn(
        degree: u32,
        alphabet: Vec<String>,
        left_offset: Pos,
        left_period: usize,
        right_offset: Pos,
        right_period: usize,
        site: impl Fn(Pos) -> (Vertex, IndexPair),
    ) -> Result<Self, PresentationError> {
        if left_offset < 0 || right_offset < left_offset {
            return schema("line offsets must satisfy 0 <= left <= right");
        }
        let (vertices, edges): (Vec<_>, Vec<_>) = (0..right_offset).map(&site).unzip();
        let (lv, le): (Vec<_>, Vec<_>) = (left_offset - left_period as Pos..left_offset)
            .map(&site)
            .unzip();
        let (rv, re): (Vec<_>, Vec<_>) = (right_offset..right_offset + right_period as Pos)
            .map(&site)
            .unzip();
        Self::line(
            degree,
            alphabet,
            vertices,
            edges,
            Tail::new(left_offset, lv, le),
            Tail::new(right_offset, rv, re),
        )
    }

    fn build(degree: u32, alphabet: Vec<String>, body: Body) -> Result<Self, PresentationError> {
        let mut p = Presentation {
            degree,
            alphabet,
            body,
            incidence: Vec::new(),
            line_period: None,
        };
        p.check_structure()?;
        if let Body::Finite { vertices, edges } = &p.body {
            let mut incidence = vec![Vec::new(); vertices.len()];
            for (id, e) in edges.iter().enumerate() {
                incidence[e.u].push(Step {
                    to: e.v as Pos,
                    index: e.pair.fwd,
                    edge: EdgeId(id as i64),
                });
                incidence[e.v].push(Step {
                    to: e.u as Pos,
                    index: e.pair.bwd,
                    edge: EdgeId(id as i64),
                });
            }
            p.incidence = incidence;
        }
        p.line_period = p.detect_line_period();
        p.validate()?;
        Ok(p)
    }

    fn check_color(&self, v: &Vertex) -> Result<(), PresentationError> {
        if (v.color.0 as usize) < self.alphabet.len() {
            Ok(())
        } else {
            schema(format!("color id {} outside the alphabet", v.color.0))
        }
    }

    fn check_pairs(pairs: &[IndexPair]) -> Result<(), PresentationError> {
        if let Some(bad) = pairs.iter().find(|e| e.fwd == 0 || e.bwd == 0) {
            return schema(format!(
                "edge indices must be >= 1, got ({}, {})",
                bad.fwd, bad.bwd
            ));
        }
        Ok(())
    }

    fn check_tail(&self, tail: &Tail, side: &str) -> Result<(), PresentationError> {
        if tail.vertices.is_empty() {
            return period_err(format!("{side} tail has an empty period"));
        }
        if tail.vertices.len() != tail.edges.len() {
            return period_err(format!(
                "{side} tail has {} period vertices but {} period edges",
                tail.vertices.len(),
                tail.edges.len()
            ));
        }
        for v in &tail.vertices {
            self.check_color(v)?;
        }
        Self::check_pairs(&tail.edges)
    }

    /// Schema-level checks that must hold before positions can be resolved.
    fn check_structure(&self) -> Result<(), PresentationError> {
        if self.degree < 2 {
            return schema(format!("degree k = {} must be at least 2", self.degree));
        }
        if self.alphabet.is_empty() {
            return schema("alphabet is empty");
        }
        if self.alphabet.len() > u16::MAX as usize {
            return schema("alphabet is too large");
        }
        for (i, a) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(a) {
                return schema(format!("alphabet token {a:?} is repeated"));
            }
        }
        match &self.body {
            Body::Finite { vertices, edges } => {
                if vertices.is_empty() {
                    return schema("finite presentation has no vertices");
                }
                for v in vertices {
                    self.check_color(v)?;
                }
                for e in edges {
                    if e.u >= vertices.len() || e.v >= vertices.len() {
                        return schema(format!("edge ({}, {}) names a missing vertex", e.u, e.v));
                    }
                    if e.u == e.v {
                        return schema(format!(
                            "edge ({0}, {0}) is a loop; use the vertex self count",
                            e.u
                        ));
                    }
                    Self::check_pairs(&[e.pair])?;
                }
                if !finite_connected(vertices.len(), edges) {
                    return schema("finite presentation is disconnected");
                }
            }
            Body::Ray {
                vertices,
                edges,
                tail,
            } => {
                for v in vertices {
                    self.check_color(v)?;
                }
                Self::check_pairs(edges)?;
                self.check_tail(tail, "ray")?;
                if tail.offset < 0 {
                    return schema("ray tail offset must be >= 0");
                }
                let off = tail.offset as usize;
                if vertices.len() < off || edges.len() < off {
                    return schema(format!(
                        "ray prefix ({} vertices, {} edges) is shorter than the tail offset {}",
                        vertices.len(),
                        edges.len(),
                        off
                    ));
                }
                for (p, v) in vertices.iter().enumerate().skip(off) {
                    if *v != tail.vertices[tail.slot(p as Pos)] {
                        return period_err(format!("vertex at position {p} disagrees with the tail"));
                    }
                }
                for (p, e) in edges.iter().enumerate().skip(off) {
                    if *e != tail.edges[tail.slot(p as Pos)] {
                        return period_err(format!("edge at position {p} disagrees with the tail"));
                    }
                }
            }
            Body::Line {
                vertices,
                edges,
                left,
                right,
            } => {
                for v in vertices {
                    self.check_color(v)?;
                }
                Self::check_pairs(edges)?;
                self.check_tail(left, "left")?;
                self.check_tail(right, "right")?;
                if left.offset < 0 || right.offset < left.offset {
                    return schema("line offsets must satisfy 0 <= left_tail.offset <= right_tail.offset");
                }
                let r = right.offset as usize;
                if vertices.len() < r || edges.len() < r {
                    return schema(format!(
                        "line core ({} vertices, {} edges) is shorter than the right tail offset {}",
                        vertices.len(),
                        edges.len(),
                        r
                    ));
                }
                for (p, v) in vertices.iter().enumerate() {
                    let p = p as Pos;
                    if p < left.offset && *v != left.vertices[left.slot(p)] {
                        return period_err(format!("vertex at position {p} disagrees with the left tail"));
                    }
                    if p >= right.offset && *v != right.vertices[right.slot(p)] {
                        return period_err(format!("vertex at position {p} disagrees with the right tail"));
                    }
                }
                for (p, e) in edges.iter().enumerate() {
                    let p = p as Pos;
                    if p < left.offset && *e != left.edges[left.slot(p)] {
                        return period_err(format!("edge at position {p} disagrees with the left tail"));
                    }
                    if p >= right.offset && *e != right.edges[right.slot(p)] {
                        return period_err(format!("edge at position {p} disagrees with the right tail"));
                    }
                }
            }
        }
        Ok(())
    }

    fn detect_line_period(&self) -> Option<usize> {
        let Body::Line { left, right, .. } = &self.body else {
            return None;
        };
        let (ll, lr) = (left.period(), right.period());
        let span = lcm(ll, lr);
        if span > 20_000_000 {
            return None;
        }
        let start = left.offset - span as Pos;
        for p in start..right.offset {
            if self.vertex(p) != right.vertices[right.slot(p)] || self.edge(p) != right.edges[right.slot(p)] {
                return None;
            }
        }
        Some(lr)
    }

    /// Checks that every vertex satisfies `self_adjacency + sum of outgoing
    /// indices = k`. Idempotent; periodic tails are checked over one period.
    pub fn validate(&self) -> Result<&Self, PresentationError> {
        for p in self.regularity_positions() {
            let sum = self.degree_sum(p);
            if sum != self.degree as u64 {
                return Err(PresentationError::Regularity {
                    position: p,
                    sum,
                    degree: self.degree,
                });
            }
        }
        Ok(self)
    }

    fn regularity_positions(&self) -> std::ops::Range<Pos> {
        match &self.body {
            Body::Finite { vertices, .. } => 0..vertices.len() as Pos,
            Body::Ray { vertices, tail, .. } => {
                0..(tail.offset + tail.period() as Pos).max(vertices.len() as Pos)
            }
            Body::Line {
                vertices,
                left,
                right,
                ..
            } => {
                (left.offset - left.period() as Pos)
                    ..(right.offset + right.period() as Pos).max(vertices.len() as Pos)
            }
        }
    }

    fn degree_sum(&self, p: Pos) -> u64 {
        let mut sum = self.vertex(p).self_adjacency as u64;
        self.for_each_step(p, |s| sum += s.index as u64);
        sum
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn kind(&self) -> Kind {
        match self.body {
            Body::Finite { .. } => Kind::Finite,
            Body::Ray { .. } => Kind::Ray,
            Body::Line { .. } => Kind::Line,
        }
    }

    pub fn color_name(&self, c: ColorId) -> &str {
        &self.alphabet[c.0 as usize]
    }

    pub fn color_id(&self, name: &str) -> Option<ColorId> {
        self.alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| ColorId(i as u16))
    }

    /// Number of vertices of a finite presentation.
    pub fn finite_len(&self) -> Option<usize> {
        match &self.body {
            Body::Finite { vertices, .. } => Some(vertices.len()),
            _ => None,
        }
    }

    pub fn finite_edges(&self) -> Option<&[FiniteEdge]> {
        match &self.body {
            Body::Finite { edges, .. } => Some(edges),
            _ => None,
        }
    }

    pub fn tails(&self) -> Vec<&Tail> {
        match &self.body {
            Body::Finite { .. } => Vec::new(),
            Body::Ray { tail, .. } => vec![tail],
            Body::Line { left, right, .. } => vec![left, right],
        }
    }

    /// Number of explicitly stored vertices (prefix or core).
    pub fn explicit_len(&self) -> usize {
        match &self.body {
            Body::Finite { vertices, .. } | Body::Ray { vertices, .. } | Body::Line { vertices, .. } => {
                vertices.len()
            }
        }
    }

    /// Period of the whole line when it is a single periodic sequence.
    pub fn line_period(&self) -> Option<usize> {
        self.line_period
    }

    pub fn contains(&self, p: Pos) -> bool {
        match &self.body {
            Body::Finite { vertices, .. } => (0..vertices.len() as Pos).contains(&p),
            Body::Ray { .. } => p >= 0,
            Body::Line { .. } => true,
        }
    }

    /// Stored vertex at `p`. Panics when `p` does not address a vertex.
    pub fn vertex(&self, p: Pos) -> Vertex {
        match &self.body {
            Body::Finite { vertices, .. } => vertices[p as usize],
            Body::Ray { vertices, tail, .. } => {
                assert!(p >= 0, "ray position {p} is negative");
                if p >= tail.offset {
                    tail.vertices[tail.slot(p)]
                } else {
                    vertices[p as usize]
                }
            }
            Body::Line {
                vertices,
                left,
                right,
                ..
            } => {
                if p >= right.offset {
                    right.vertices[right.slot(p)]
                } else if p < left.offset {
                    left.vertices[left.slot(p)]
                } else {
                    vertices[p as usize]
                }
            }
        }
    }

    /// Index pair of the edge joining `p` and `p + 1` on a ray or line.
    pub fn edge(&self, p: Pos) -> IndexPair {
        match &self.body {
            Body::Finite { .. } => panic!("finite presentations have no positional edges"),
            Body::Ray { edges, tail, .. } => {
                assert!(p >= 0, "ray edge {p} is negative");
                if p >= tail.offset {
                    tail.edges[tail.slot(p)]
                } else {
                    edges[p as usize]
                }
            }
            Body::Line {
                edges, left, right, ..
            } => {
                if p >= right.offset {
                    right.edges[right.slot(p)]
                } else if p < left.offset {
                    left.edges[left.slot(p)]
                } else {
                    edges[p as usize]
                }
            }
        }
    }

    /// Calls `f` for every directed quotient edge leaving `p`, in a fixed
    /// order (edge-list order for finite graphs; backward before forward on
    /// rays and lines).
    pub fn for_each_step(&self, p: Pos, mut f: impl FnMut(Step)) {
        match &self.body {
            Body::Finite { .. } => {
                for s in &self.incidence[p as usize] {
                    f(*s);
                }
            }
            Body::Ray { .. } | Body::Line { .. } => {
                if self.contains(p - 1) {
                    f(Step {
                        to: p - 1,
                        index: self.edge(p - 1).bwd,
                        edge: EdgeId(p - 1),
                    });
                }
                f(Step {
                    to: p + 1,
                    index: self.edge(p).fwd,
                    edge: EdgeId(p),
                });
            }
        }
    }

    /// Resolved record at `pos`, following periodic tails.
    pub fn vertex_at(&self, pos: Pos) -> Result<VertexRecord, PresentationError> {
        if !self.contains(pos) {
            return Err(PresentationError::OutOfRange(pos));
        }
        let v = self.vertex(pos);
        let mut neighbors = Vec::new();
        match &self.body {
            Body::Finite { edges, .. } => {
                for s in &self.incidence[pos as usize] {
                    let e = edges[s.edge.0 as usize];
                    let in_index = if e.u as Pos == pos { e.pair.bwd } else { e.pair.fwd };
                    neighbors.push(NeighborIndex {
                        to: s.to,
                        out_index: s.index,
                        in_index,
                    });
                }
            }
            _ => {
                if self.contains(pos - 1) {
                    let e = self.edge(pos - 1);
                    neighbors.push(NeighborIndex {
                        to: pos - 1,
                        out_index: e.bwd,
                        in_index: e.fwd,
                    });
                }
                let e = self.edge(pos);
                neighbors.push(NeighborIndex {
                    to: pos + 1,
                    out_index: e.fwd,
                    in_index: e.bwd,
                });
            }
        }
        Ok(VertexRecord {
            position: pos,
            color: self.color_name(v.color).to_string(),
            self_adjacency: v.self_adjacency,
            neighbors,
        })
    }

    /// Positions adjacent to `p` in the quotient, including `p` itself when it
    /// has same-fiber neighbors.
    pub fn quotient_neighbors(&self, p: Pos) -> Vec<Pos> {
        let mut out = Vec::new();
        if self.vertex(p).self_adjacency > 0 {
            out.push(p);
        }
        self.for_each_step(p, |s| {
            if !out.contains(&s.to) {
                out.push(s.to)
            }
        });
        out
    }

    /// Length of the repeating block governing deep positions (1 for finite
    /// presentations).
    pub fn period(&self) -> usize {
        match &self.body {
            Body::Finite { .. } => 1,
            Body::Ray { tail, .. } => tail.period(),
            Body::Line { left, right, .. } => self.line_period.unwrap_or(left.period().max(right.period())),
        }
    }

    /// Centers whose `radius`-balls represent every ball of the cover: all
    /// vertices of a finite graph; for rays and lines the explicit part
    /// widened by `radius` plus one full period on each periodic side.
    pub fn census_centers(&self, radius: usize) -> Vec<Pos> {
        let n = radius as Pos;
        match &self.body {
            Body::Finite { vertices, .. } => (0..vertices.len() as Pos).collect(),
            Body::Ray { tail, .. } => (0..tail.offset + n + tail.period() as Pos).collect(),
            Body::Line { left, right, .. } => match self.line_period {
                Some(l) => (0..l as Pos).collect(),
                None => ((left.offset - n - left.period() as Pos)..(right.offset + n + right.period() as Pos))
                    .collect(),
            },
        }
    }

    /// True when the `radius`-ball around `p` sees only one tail's periodic
    /// data, so that it repeats arbitrarily far out along that tail.
    pub fn is_deep(&self, p: Pos, radius: usize) -> bool {
        let n = radius as Pos;
        match &self.body {
            Body::Finite { .. } => false,
            Body::Ray { tail, .. } => p - n >= tail.offset,
            Body::Line { left, right, .. } => {
                // a purely periodic line has no distinguished far region
                self.line_period.is_none() && (p - n >= right.offset || p + n < left.offset)
            }
        }
    }

    /// Maps `p` to the census center with the same `radius`-neighborhood.
    pub fn fold_position(&self, p: Pos, radius: usize) -> Pos {
        let n = radius as Pos;
        match &self.body {
            Body::Finite { .. } => p,
            Body::Ray { tail, .. } => {
                let start = tail.offset + n;
                if p >= start {
                    start + (p - start).rem_euclid(tail.period() as Pos)
                } else {
                    p
                }
            }
            Body::Line { left, right, .. } => {
                if let Some(l) = self.line_period {
                    return p.rem_euclid(l as Pos);
                }
                let start = right.offset + n;
                let low = left.offset - n - left.period() as Pos;
                if p >= start {
                    start + (p - start).rem_euclid(right.period() as Pos)
                } else if p < low {
                    low + (p - low).rem_euclid(left.period() as Pos)
                } else {
                    p
                }
            }
        }
    }

    /// Writes a description of the quotient data within distance `radius` of
    /// `p` into `buf`. Two positions with equal signatures have isomorphic
    /// (indeed identically lifted) balls of every radius up to `radius`.
    pub fn local_signature(&self, p: Pos, radius: usize, buf: &mut Vec<u32>) {
        buf.clear();
        let n = radius as Pos;
        let lo = match self.body {
            Body::Ray { .. } => (p - n).max(0),
            _ => p - n,
        };
        buf.push((p - lo) as u32);
        for q in lo..=p + n {
            let v = self.vertex(q);
            buf.push(v.color.0 as u32);
            buf.push(v.self_adjacency);
        }
        for q in lo..p + n {
            let e = self.edge(q);
            buf.push(e.fwd);
            buf.push(e.bwd);
        }
    }

    /// Shortest-path diameter of a finite presentation.
    pub fn finite_diameter(&self) -> Option<usize> {
        let n = self.finite_len()?;
        let mut best = 0;
        for s in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for st in &self.incidence[u] {
                    let v = st.to as usize;
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            best = best.max(dist.into_iter().max().unwrap_or(0));
        }
        Some(best)
    }

    /// Same presentation with the colors of two positions exchanged in the
    /// stored data. Used to build negative controls.
    pub fn with_swapped_colors(&self, a: Pos, b: Pos) -> Result<Self, PresentationError> {
        let mut body = self.body.clone();
        let (ca, cb) = (self.vertex(a).color, self.vertex(b).color);
        let set = |vertices: &mut Vec<Vertex>, p: Pos, c: ColorId| -> Result<(), PresentationError> {
            match vertices.get_mut(p as usize) {
                Some(v) if p >= 0 => {
                    v.color = c;
                    Ok(())
                }
                _ => Err(PresentationError::OutOfRange(p)),
            }
        };
        match &mut body {
            Body::Finite { vertices, .. } | Body::Ray { vertices, .. } | Body::Line { vertices, .. } => {
                set(vertices, a, cb)?;
                set(vertices, b, ca)?;
            }
        }
        Self::build(self.degree, self.alphabet.clone(), body)
    }
}

fn finite_connected(n: usize, edges: &[FiniteEdge]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

// ---------------------------------------------------------------------------
// JSON form

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    color: String,
    #[serde(rename = "self")]
    self_adjacency: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v: Option<usize>,
    fwd: u32,
    bwd: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTail {
    offset: i64,
    period_vertices: Vec<RawVertex>,
    period_edges: Vec<RawEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresentation {
    k: u32,
    kind: Kind,
    alphabet: Vec<String>,
    vertices: Vec<RawVertex>,
    edges: Vec<RawEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<RawTail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    left_tail: Option<RawTail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    right_tail: Option<RawTail>,
}

/// Parses the JSON form and validates it.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let raw: RawPresentation =
        serde_json::from_str(text).map_err(|e| PresentationError::Schema(e.to_string()))?;
    from_raw(raw)
}

fn from_raw(raw: RawPresentation) -> Result<Presentation, PresentationError> {
    let alphabet = raw.alphabet;
    let color = |name: &str| -> Result<ColorId, PresentationError> {
        alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| ColorId(i as u16))
            .ok_or_else(|| PresentationError::Schema(format!("color {name:?} is not in the alphabet")))
    };
    let vertices = |raws: &[RawVertex]| -> Result<Vec<Vertex>, PresentationError> {
        raws.iter()
            .map(|r| Ok(Vertex::new(color(&r.color)?, r.self_adjacency)))
            .collect()
    };
    let pairs = |raws: &[RawEdge]| -> Result<Vec<IndexPair>, PresentationError> {
        raws.iter()
            .map(|e| {
                if e.u.is_some() || e.v.is_some() {
                    schema("ray and line edges take no endpoints")
                } else {
                    Ok(IndexPair::new(e.fwd, e.bwd))
                }
            })
            .collect()
    };
    let tail = |t: &RawTail| -> Result<Tail, PresentationError> {
        Ok(Tail::new(t.offset, vertices(&t.period_vertices)?, pairs(&t.period_edges)?))
    };
    match raw.kind {
        Kind::Finite => {
            if raw.tail.is_some() || raw.left_tail.is_some() || raw.right_tail.is_some() {
                return schema("finite presentations take no tails");
            }
            let edges = raw
                .edges
                .iter()
                .map(|e| match (e.u, e.v) {
                    (Some(u), Some(v)) => Ok(FiniteEdge {
                        u,
                        v,
                        pair: IndexPair::new(e.fwd, e.bwd),
                    }),
                    _ => schema("finite edges need both endpoints u and v"),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let vs = vertices(&raw.vertices)?;
            Presentation::finite(raw.k, alphabet.clone(), vs, edges)
        }
        Kind::Ray => {
            if raw.left_tail.is_some() || raw.right_tail.is_some() {
                return schema("rays take a single tail");
            }
            let Some(t) = &raw.tail else {
                return schema("ray presentation is missing its tail");
            };
            let (vs, es, t) = (vertices(&raw.vertices)?, pairs(&raw.edges)?, tail(t)?);
            Presentation::ray(raw.k, alphabet.clone(), vs, es, t)
        }
        Kind::Line => {
            if raw.tail.is_some() {
                return schema("lines take left_tail and right_tail");
            }
            let (Some(l), Some(r)) = (&raw.left_tail, &raw.right_tail) else {
                return schema("line presentation needs left_tail and right_tail");
            };
            let (vs, es, l, r) = (vertices(&raw.vertices)?, pairs(&raw.edges)?, tail(l)?, tail(r)?);
            Presentation::line(raw.k, alphabet.clone(), vs, es, l, r)
        }
    }
}

impl Presentation {
    fn to_raw(&self) -> RawPresentation {
        let vertex = |v: &Vertex| RawVertex {
            color: self.color_name(v.color).to_string(),
            self_adjacency: v.self_adjacency,
        };
        let pair = |e: &IndexPair| RawEdge {
            u: None,
            v: None,
            fwd: e.fwd,
            bwd: e.bwd,
        };
        let tail = |t: &Tail| RawTail {
            offset: t.offset,
            period_vertices: t.vertices.iter().map(vertex).collect(),
            period_edges: t.edges.iter().map(pair).collect(),
        };
        let mut raw = RawPresentation {
            k: self.degree,
            kind: self.kind(),
            alphabet: self.alphabet.clone(),
            vertices: Vec::new(),
            edges: Vec::new(),
            tail: None,
            left_tail: None,
            right_tail: None,
        };
        match &self.body {
            Body::Finite { vertices, edges } => {
                raw.vertices = vertices.iter().map(vertex).collect();
                raw.edges = edges
                    .iter()
                    .map(|e| RawEdge {
                        u: Some(e.u),
                        v: Some(e.v),
                        fwd: e.pair.fwd,
                        bwd: e.pair.bwd,
                    })
                    .collect();
            }
            Body::Ray {
                vertices,
                edges,
                tail: t,
            } => {
                raw.vertices = vertices.iter().map(vertex).collect();
                raw.edges = edges.iter().map(pair).collect();
                raw.tail = Some(tail(t));
            }
            Body::Line {
                vertices,
                edges,
                left,
                right,
            } => {
                raw.vertices = vertices.iter().map(vertex).collect();
                raw.edges = edges.iter().map(pair).collect();
                raw.left_tail = Some(tail(left));
                raw.right_tail = Some(tail(right));
            }
        }
        raw
    }

    /// Compact JSON form, keys in schema order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("presentation serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("presentation serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    const A: ColorId = ColorId(0);
    const B: ColorId = ColorId(1);

    fn bounded_type_ray() -> Presentation {
        Presentation::ray(
            3,
            ab(),
            vec![Vertex::new(B, 2)],
            vec![IndexPair::new(1, 1)],
            Tail::new(1, vec![Vertex::new(A, 0)], vec![IndexPair::new(2, 1)]),
        )
        .unwrap()
    }

    #[test]
    fn constant_single_vertex() {
        let p = parse_presentation(
            r#"{"k":3,"kind":"finite","alphabet":["a"],"vertices":[{"color":"a","self":3}],"edges":[]}"#,
        )
        .unwrap();
        assert_eq!(p.kind(), Kind::Finite);
        assert_eq!(p.finite_len(), Some(1));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn bounded_type_ray_parses() {
        let text = r#"{"k":3,"kind":"ray","alphabet":["a","b"],
            "vertices":[{"color":"b","self":2}],"edges":[{"fwd":1,"bwd":1}],
            "tail":{"offset":1,"period_vertices":[{"color":"a","self":0}],"period_edges":[{"fwd":2,"bwd":1}]}}"#;
        let p = parse_presentation(text).unwrap();
        assert_eq!(p, bounded_type_ray());
        let r0 = p.vertex_at(0).unwrap();
        assert_eq!((r0.color.as_str(), r0.self_adjacency), ("b", 2));
        let r7 = p.vertex_at(7).unwrap();
        assert_eq!((r7.color.as_str(), r7.self_adjacency), ("a", 0));
        assert_eq!(r7.forward_index(), Some(2));
        assert_eq!(r7.backward_index(), Some(1));
        assert_eq!(r7.neighbors[1].in_index, 1);
    }

    #[test]
    fn regularity_error_reports_position() {
        // explicit prefix through position 6 with a bad forward index at 5
        let mut edges = vec![IndexPair::new(1, 1)];
        edges.extend(std::iter::repeat_n(IndexPair::new(2, 1), 6));
        edges[5] = IndexPair::new(3, 1);
        let mut vertices = vec![Vertex::new(B, 2)];
        vertices.extend(std::iter::repeat_n(Vertex::new(A, 0), 6));
        let err = Presentation::ray(
            3,
            ab(),
            vertices,
            edges,
            Tail::new(7, vec![Vertex::new(A, 0)], vec![IndexPair::new(2, 1)]),
        )
        .unwrap_err();
        assert_eq!(
            err,
            PresentationError::Regularity {
                position: 5,
                sum: 4,
                degree: 3
            }
        );
    }

    #[test]
    fn period_error_on_disagreeing_overlap() {
        let err = Presentation::ray(
            3,
            ab(),
            vec![Vertex::new(B, 2), Vertex::new(B, 0)],
            vec![IndexPair::new(1, 1)],
            Tail::new(1, vec![Vertex::new(A, 0)], vec![IndexPair::new(2, 1)]),
        )
        .unwrap_err();
        assert!(matches!(err, PresentationError::Period(_)), "{err}");
        let err = Presentation::ray(
            3,
            ab(),
            vec![Vertex::new(B, 2)],
            vec![IndexPair::new(1, 1)],
            Tail::new(1, vec![Vertex::new(A, 0)], vec![]),
        )
        .unwrap_err();
        assert!(matches!(err, PresentationError::Period(_)));
    }

    #[test]
    fn schema_errors() {
        for bad in [
            "not json",
            r#"{"k":3,"kind":"finite","alphabet":["a"],"vertices":[{"color":"z","self":3}],"edges":[]}"#,
            r#"{"k":3,"kind":"finite","alphabet":[],"vertices":[],"edges":[]}"#,
            r#"{"k":3,"kind":"ray","alphabet":["a"],"vertices":[{"color":"a","self":2}],"edges":[{"fwd":1,"bwd":1}]}"#,
            r#"{"k":3,"kind":"finite","alphabet":["a"],"vertices":[{"color":"a","self":3}],"edges":[],"extra":1}"#,
            r#"{"k":3,"kind":"finite","alphabet":["a","b"],"vertices":[{"color":"a","self":3},{"color":"b","self":3}],"edges":[]}"#,
        ] {
            let err = parse_presentation(bad).unwrap_err();
            assert!(matches!(err, PresentationError::Schema(_)), "{bad}: {err}");
        }
    }

    #[test]
    fn sturmian_ray_validates() {
        // b a a b a a ...; (3,2) then (1,2)
        let p = Presentation::ray(
            3,
            ab(),
            vec![Vertex::new(B, 0)],
            vec![IndexPair::new(3, 2)],
            Tail::new(
                1,
                vec![Vertex::new(A, 0), Vertex::new(A, 0), Vertex::new(B, 0)],
                vec![IndexPair::new(1, 2); 3],
            ),
        )
        .unwrap();
        assert!(p.validate().is_ok());
        assert_eq!(p.vertex(3).color, B);
        assert_eq!(p.vertex(4).color, A);
        assert_eq!(p.vertex(30).color, B);
    }

    #[test]
    fn two_regular_line() {
        let p = Presentation::line_from_fn(2, ab(), 0, 2, 0, 2, |q| {
            (Vertex::new(ColorId((q.rem_euclid(2)) as u16), 0), IndexPair::new(1, 1))
        })
        .unwrap();
        assert_eq!(p.line_period(), Some(2));
        assert_eq!(p.vertex(-3).color, B);
        assert_eq!(p.census_centers(5), vec![0, 1]);
    }

    #[test]
    fn periodic_tail_positions_agree() {
        let p = bounded_type_ray();
        for q in 2..40 {
            assert_eq!(p.vertex_at(q).unwrap(), {
                let mut r = p.vertex_at(q + 1).unwrap();
                r.position = q;
                r.neighbors.iter_mut().for_each(|n| n.to -= 1);
                r
            });
        }
    }

    #[test]
    fn out_of_range() {
        let p = bounded_type_ray();
        assert_eq!(p.vertex_at(-1).unwrap_err(), PresentationError::OutOfRange(-1));
        let c = Presentation::finite(3, vec!["a".into()], vec![Vertex::new(A, 3)], vec![]).unwrap();
        assert_eq!(c.vertex_at(1).unwrap_err(), PresentationError::OutOfRange(1));
    }

    #[test]
    fn json_key_order() {
        let p = bounded_type_ray();
        assert_eq!(
            p.to_json(),
            r#"{"k":3,"kind":"ray","alphabet":["a","b"],"vertices":[{"color":"b","self":2}],"edges":[{"fwd":1,"bwd":1}],"tail":{"offset":1,"period_vertices":[{"color":"a","self":0}],"period_edges":[{"fwd":2,"bwd":1}]}}"#
        );
    }

    #[test]
    fn folding_and_depth() {
        let p = bounded_type_ray();
        assert_eq!(p.census_centers(3), vec![0, 1, 2, 3, 4]);
        assert!(p.is_deep(4, 3));
        assert!(!p.is_deep(3, 3));
        assert_eq!(p.fold_position(100, 3), 4);
        let mut s1 = Vec::new();
        let mut s2 = Vec::new();
        p.local_signature(4, 3, &mut s1);
        p.local_signature(100, 3, &mut s2);
        assert_eq!(s1, s2);
    }
}
